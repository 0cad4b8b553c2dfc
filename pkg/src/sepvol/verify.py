"""Self-check suites run by ``sepvol verify``.

``golden`` reproduces the tabulated-net numbers for eight qubits, ``desk``
adds every deterministic check (closed forms, recursions, geometry), and
``mc`` compares analytic bounds with seeded Monte Carlo estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import bounds, gue, mc_oracle, nets, numerics, qubit_geometry

# One row of the bundled table: 130 points, covering angle 11.3165625 degrees.
GOLDEN_ROW = (130, 11.3165625)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    value: object
    target: str

    def to_dict(self) -> dict:
        value = self.value
        if not isinstance(value, (bool, int, str)) and value is not None:
            value = float(value)
        return {"name": self.name, "passed": bool(self.passed), "value": value, "target": self.target}


def _c(name, passed, value, target) -> Check:
    return Check(name, bool(passed), value, target)


def golden_checks(ctx=None) -> list[Check]:
    row = nets.NetTableRow.from_angle(*GOLDEN_ROW)
    r8 = bounds.tabulated_net_pipeline(8, row, ctx)
    r6 = bounds.tabulated_net_pipeline(6, row, ctx)
    mant, exp = r8.upper.decimal(4)
    return [
        _c("net_bound_n8", abs(r8.extras["tensor_net_bound"] - 10.417406) <= 1e-5, r8.extras["tensor_net_bound"], "10.417406 +- 1e-5"),
        _c("upsilon_n8", float(r8.extras["upsilon"]) <= 0.02411446, r8.extras["upsilon"], "<= 0.02411446"),
        _c("per_dim_n8", float(r8.per_dim) <= 0.49534 + 5e-5, r8.per_dim, "<= 0.49534 +- 5e-5"),
        _c("ratio_exponent_n8", abs(exp + 19996) <= 1, exp, "-19996 +- 1"),
        _c("ratio_below_8.6e-19996_n8", exp < -19996 or (exp == -19996 and float(mant) < 8.6), f"{mant}E{exp}", "< 8.6E-19996"),
        _c("per_dim_n6", float(r6.per_dim) < 0.95, r6.per_dim, "< 0.95"),
    ]


def desk_checks(ctx=None) -> list[Check]:
    ctx = numerics.resolve(ctx)
    out = golden_checks(ctx)
    # Ratio plug-ins.
    out.append(_c("first_nontrivial_N", bounds.smallest_nontrivial_N(ctx=ctx) == 8, bounds.smallest_nontrivial_N(ctx=ctx), "8"))
    low = bounds.ratio_bounds(8, "basic", ctx)
    out.append(_c("ratio_lower_basic_n8", abs(float(low.lower) - 0.25 / 27) < 1e-9, float(low.lower), "0.25/27"))
    consts = bounds.asymptotic_constants(ctx)
    out.append(_c("refined_constant", abs(consts.refined_c - 0.32887) < 1e-5, consts.refined_c, "0.32887 +- 1e-5"))
    out.append(_c("lower_limit_constant", abs(consts.lower_limit - 0.844561) < 1e-6, consts.lower_limit, "0.844561 +- 1e-6"))
    out.append(_c("upper_limit_constant", abs(consts.upper_limit - 2.1811) < 1e-4, consts.upper_limit, "2.1811 +- 1e-4"))
    # GUE.
    table = gue.moment_table(1, 6)
    scalar = all(table.a[p] == Fraction(math.prod(range(1, 2 * p, 2)), 4**p) for p in range(7))
    out.append(_c("gue_scalar_moments", scalar, scalar, "(2p-1)!!/4^p exactly"))
    worst = min(2 - 0.6 * d ** (-2 / 3) - float(gue.norm_bound_discrete(d, ctx)) / math.sqrt(d) for d in range(2, 201))
    out.append(_c("gue_discrete_bound_2_200", worst >= 0, worst, "margin >= 0"))
    t_star, f_star = gue.analytic_optimum(ctx)
    out.append(_c("gue_t_star", abs(t_star - 1.38319) <= 1e-4, t_star, "1.38319 +- 1e-4"))
    out.append(_c("gue_f_t_star", abs(f_star - 0.738542) <= 1e-5, f_star, "0.738542 +- 1e-5"))
    # Volumes.
    mp = ctx.mp
    gap = abs(bounds.vol_D_log(2, ctx).log_abs - mp.log(mp.pi * mp.sqrt(2) / 3))
    out.append(_c("vol_D_d2", gap <= mp.mpf(10) ** -20, gap, "<= 1e-20"))
    scaled = bounds.state_volume_radius(256, ctx).scaled
    out.append(_c("vr_D_d256", abs(scaled / mp.exp(-0.25) - 1) <= 0.01, scaled, "e^-1/4 within 1%"))
    # Nets.
    tet = nets.tetrahedron_net()
    out.append(_c("tetrahedron_certified", nets.certify_covering(tet, 2 / math.sqrt(3)).certified, True, "certified at 2/sqrt3"))
    out.append(_c("tetrahedron_rejected", not nets.certify_covering(tet, 1.15).certified, True, "rejected at 1.15"))
    inr = nets.conv_inradius_bound(tet)
    out.append(_c("tetrahedron_inradius", abs(inr - 1 / 3) < 1e-9, inr, "1/3"))
    rows_ok = all(4.5 <= r.m * r.delta**2 <= 6.0 for r in nets.default_net_table() if r.m >= 20)
    out.append(_c("table_density", rows_ok, rows_ok, "m delta^2 in [4.5, 6]"))
    opt = nets.optimize_delta(8, "table_5")
    out.append(_c("optimize_delta_n8", abs(opt.delta - 0.15) <= 0.01 and abs(opt.implied_m - 222) <= 10, opt.delta, "0.15 +- 0.01, m 222 +- 10"))
    # Geometry.
    tv = qubit_geometry.tetrahedron_vectors()
    gram = float(np.abs(tv @ tv.T - np.eye(4)).max())
    out.append(_c("tetrahedron_gram", gram <= 1e-12, gram, "<= 1e-12"))
    a2 = qubit_geometry.alpha_exponent(2, ctx)
    out.append(_c("alpha_2", abs(a2 - mp.log(mp.mpf(27) / 16) / mp.log(2) / 8) < 1e-30, a2, "log2(27/16)/8"))
    a3 = qubit_geometry.alpha_exponent(3, ctx)
    out.append(_c("alpha_3", abs(a3 - 0.0608264) <= 1e-7, a3, "0.0608264 +- 1e-7"))
    return out


def mc_checks(seed: int = 0, samples: int = 100_000, ctx=None, workers: int = 1) -> list[Check]:
    ctx = numerics.resolve(ctx)
    out = []
    vol = mc_oracle.delta1_volume(max(samples, 1000), seed, workers)
    out.append(_c("delta1_volume", vol.within(2 * math.pi / 3), vol.mean, "2 pi/3 within 3 stderr"))
    vr, _ = mc_oracle.volume_radius(vol, 4, math.log(math.pi**2 / 2))
    lo, hi = bounds.vr_delta_bounds(2, ctx)
    out.append(_c("delta1_vr_interval", float(lo) <= vr <= float(hi), vr, "within the Delta interval"))
    seg = mc_oracle.mc_mean_width(lambda u: np.abs(u[:, 0]), 2, samples, seed, workers=workers)
    out.append(_c("segment_mean_width", seg.within(2 / math.pi), seg.mean, "2/pi within 3 stderr"))
    mw = gue.mean_width_delta(2, ctx, samples, seed, workers)
    out.append(_c("mean_width_d2", mw.mc.mean - 3 * mw.mc.stderr <= float(mw.bound), mw.mc.mean, "mean - 3 se <= bound"))
    for d in (2, 3):
        for p in (2, 4):
            est = gue.mc_moment(d, p, samples, seed, workers)
            exact = float(gue.moment_table(d, p).a[p])
            out.append(_c(f"gue_moment_d{d}_p{p}", est.within(exact, 4), est.mean, f"{exact:.6g} within 4 stderr"))
    pts = np.vstack([qubit_geometry.tensor_power_vectors(qubit_geometry.tetrahedron_vectors(), 2)])
    pts = np.vstack([pts, -pts])
    chk = mc_oracle.check_discrete_gaussian(pts, max(samples, 1000), seed, workers)
    out.append(_c("tetrahedron_tensor_max", chk.bound_ok, chk.estimate.mean, f"<= {chk.bound:.6g}"))
    return out


SUITES = ("desk", "golden", "mc")


def run_suite(name: str, seed: int = 0, samples: int = 100_000, ctx=None, workers: int = 1) -> list[Check]:
    if name == "golden":
        return golden_checks(ctx)
    if name == "desk":
        return desk_checks(ctx)
    if name == "mc":
        return mc_checks(seed, samples, ctx, workers)
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
