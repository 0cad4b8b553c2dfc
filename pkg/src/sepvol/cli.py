"""Command-line front end.

Reports go to stdout, diagnostics to stderr.  Exit codes: 0 success,
1 a certification or verification check failed, 2 usage or input error,
3 numeric domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

from . import bounds, gue, nets, verify
from .numerics import MIN_BITS, DomainError, PrecisionContext

ENV_BITS = "SEPVOL_PRECISION_BITS"
FORMATS = ("json", "csv", "text")
QUANTITIES = ("table", "ratio", "sigma", "delta", "state", "inradius", "qudit", "constants")


class UsageError(Exception):
    """Bad flags or unreadable input."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    precision_bits: int
    output_format: str
    args: argparse.Namespace

    @property
    def ctx(self) -> PrecisionContext:
        return PrecisionContext(self.precision_bits)


# --------------------------------------------------------------------------
# Output
# --------------------------------------------------------------------------

def _flatten(record: dict, prefix: str = "") -> list[tuple[str, object]]:
    rows = []
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            rows.extend(_flatten(value, name + "."))
        elif isinstance(value, list) and any(isinstance(v, dict) for v in value):
            for i, v in enumerate(value):
                rows.extend(_flatten(v, f"{name}.{i}.") if isinstance(v, dict) else [(f"{name}.{i}", v)])
        elif isinstance(value, list):
            rows.append((name, ";".join(str(v) for v in value)))
        else:
            rows.append((name, value))
    return rows


def render(record: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(record, indent=2) + "\n"
    rows = _flatten(record)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["field", "value"])
        for k, v in rows:
            writer.writerow([k, "" if v is None else v])
        return buf.getvalue()
    width = max((len(k) for k, _ in rows), default=0)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in rows)


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------

def _load_rows(path):
    if path is None:
        return nets.default_net_table()
    try:
        rows = nets.load_net_table(path)
    except OSError as exc:
        raise UsageError(f"cannot read net table {path}: {exc.strerror}") from exc
    except nets.NetTableError as exc:
        raise UsageError(str(exc)) from exc
    if not rows:
        raise UsageError(f"net table {path} has no rows")
    return rows


def _require(args, name):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name.replace('_', '-')} is required for --quantity {args.quantity}")
    return value


def cmd_bounds(cfg: RunConfig) -> tuple[dict, int]:
    a, ctx = cfg.args, cfg.ctx
    q = a.quantity or ("qudit" if a.qudit is not None else "table")
    a.quantity = q
    if q == "table":
        N = _require(a, "qubits")
        report = bounds.tabulated_net_pipeline(N, bounds.best_table_row(N, _load_rows(a.net), ctx), ctx)
    elif q == "ratio":
        report = bounds.ratio_bounds(_require(a, "qubits"), a.constant, ctx)
    elif q == "sigma":
        N = _require(a, "qubits")
        choice = a.model if a.model else bounds.best_table_row(N, _load_rows(a.net), ctx)
        report = bounds.sigma_report(N, choice, ctx)
    elif q == "delta":
        report = bounds.delta_report(_dim(a), ctx)
    elif q == "state":
        report = bounds.state_volume_report(_dim(a), ctx)
    elif q == "inradius":
        report = bounds.inradius_report(_require(a, "qubits"), ctx)
    elif q == "qudit":
        delta = a.delta_rule
        if delta not in ("inverse_n", "optimal"):
            delta = float(delta)
        report = bounds.qudit_bound(_require(a, "qudit"), _require(a, "qubits"), a.c_prime, ctx, delta)
        if "c_prime_placeholder" in report.flags:
            print(f"warning: --c-prime not given; using placeholder {bounds.C_PRIME_PLACEHOLDER}", file=sys.stderr)
    else:  # constants
        return bounds.asymptotic_constants(ctx).to_dict() | {"precision_bits": ctx.mantissa_bits}, 0
    return report.to_json_dict(), 0


def _dim(a):
    if a.dim is not None:
        return a.dim
    if a.qubits is not None:
        return 2**a.qubits
    raise UsageError(f"--dim or --qubits is required for --quantity {a.quantity}")


def cmd_gue(cfg: RunConfig) -> tuple[dict, int]:
    d, ctx = cfg.args.dim, cfg.ctx
    p_max = cfg.args.p_max
    bound = gue.norm_bound_discrete(d, ctx, p_max)
    t, analytic = gue.norm_bound_analytic(d, ctx)
    return {
        "dim": d,
        "p_max": p_max if p_max is not None else gue.default_p_max(d),
        "argmin_p": gue.norm_bound_discrete_argmin(d, ctx, p_max),
        "bound": float(bound),
        "bound_over_sqrt_dim": float(bound / ctx.mp.sqrt(d)),
        "two_sqrt_dim": float(2 * ctx.mp.sqrt(d)),
        "analytic_t": float(t),
        "analytic_bound": float(analytic),
        "precision_bits": ctx.mantissa_bits,
    }, 0


def _load_points(path):
    try:
        return nets.load_net_points(path)
    except OSError as exc:
        raise UsageError(f"cannot read point file {path}: {exc.strerror}") from exc
    except nets.NetTableError as exc:
        raise UsageError(str(exc)) from exc


def cmd_nets_certify(cfg: RunConfig) -> tuple[dict, int]:
    a = cfg.args
    net = _load_points(a.file)
    cert = nets.certify_covering(net, a.delta, a.method, a.spacing)
    record = {
        "file": os.path.basename(a.file),
        "points": len(net),
        "delta": a.delta,
        "certified": cert.certified,
        "worst_gap": cert.worst_gap,
        "method": cert.method,
        "spacing": cert.spacing,
    }
    return record, 0 if cert.certified else 1


def cmd_nets_generate(cfg: RunConfig) -> tuple[dict, int]:
    a = cfg.args
    net = nets.generate_net(a.delta, a.method)
    if a.out:
        nets.save_net_points(net, a.out)
    record = {"points": len(net), "delta": net.delta, "target_delta": a.delta, "method": net.method,
              "certified": net.certified, "m_delta_sq": len(net) * net.delta**2}
    if a.out:
        record["file"] = os.path.basename(a.out)
    return record, 0


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    a = cfg.args
    checks = verify.run_suite(a.suite, seed=a.seed, samples=a.samples, ctx=cfg.ctx, workers=a.workers)
    ok = all(c.passed for c in checks)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name}", file=sys.stderr)
    return {"suite": a.suite, "passed": ok, "seed": a.seed, "samples": a.samples,
            "checks": [c.to_dict() for c in checks]}, 0 if ok else 1


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------

def _positive_int(minimum):
    def parse(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if v < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}, got {v}")
        return v
    return parse


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision-bits", type=_positive_int(MIN_BITS), default=None,
                        help=f"working precision in bits (default 256, env {ENV_BITS})")
    common.add_argument("--format", choices=FORMATS, default="json", help="output format")

    parser = argparse.ArgumentParser(prog="sepvol", description="Volume and in-radius bounds for separable states.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common], help="compute a bound report")
    p.add_argument("--quantity", choices=QUANTITIES, default=None,
                   help="which bound (default: table, or qudit when --qudit is given)")
    p.add_argument("--qubits", type=_positive_int(1), help="number of qubits (or qudits) N")
    p.add_argument("--dim", type=_positive_int(2), help="matrix dimension d for delta/state quantities")
    p.add_argument("--net", help="net table CSV (m,epsilon_degrees); default: bundled table")
    p.add_argument("--model", choices=sorted(nets.MODELS), help="net cardinality model for --quantity sigma")
    p.add_argument("--constant", choices=("basic", "refined"), default="basic", help="lower-bound constant")
    p.add_argument("--qudit", type=_positive_int(2), help="local dimension D")
    p.add_argument("--c-prime", type=_positive_float, help="net constant C' for qudit nets")
    p.add_argument("--delta-rule", default="inverse_n", help="qudit net radius: inverse_n, optimal, or a number")
    p.set_defaults(func=cmd_bounds)

    g = sub.add_parser("gue", help="GUE operator-norm bounds")
    gsub = g.add_subparsers(dest="gue_command", required=True)
    gn = gsub.add_parser("norm-bound", parents=[common], help="moment bound on E||G||_op")
    gn.add_argument("--dim", type=_positive_int(1), required=True)
    gn.add_argument("--p-max", type=_positive_int(1), default=None)
    gn.set_defaults(func=cmd_gue)

    n = sub.add_parser("nets", help="spherical nets")
    nsub = n.add_subparsers(dest="nets_command", required=True)
    nc = nsub.add_parser("certify", parents=[common], help="certify a covering radius")
    nc.add_argument("--file", required=True, help="point CSV with x,y,z columns")
    nc.add_argument("--delta", type=_positive_float, required=True)
    nc.add_argument("--method", choices=("auto", "exact", "grid"), default="auto")
    nc.add_argument("--spacing", type=_positive_float, default=None, help="grid spacing (grid method)")
    nc.set_defaults(func=cmd_nets_certify)
    ng = nsub.add_parser("generate", parents=[common], help="generate a certified net")
    ng.add_argument("--delta", type=_positive_float, required=True, help="target covering radius")
    ng.add_argument("--method", choices=("icosahedral_subdivision", "fibonacci"), default="icosahedral_subdivision")
    ng.add_argument("--out", help="write points (and a JSON sidecar) here")
    ng.set_defaults(func=cmd_nets_generate)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("--suite", choices=verify.SUITES, required=True)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--samples", type=_positive_int(100), default=100_000)
    v.add_argument("--workers", type=_positive_int(1), default=1)
    v.set_defaults(func=cmd_verify)
    return parser


def _precision(args, parser) -> int:
    if args.precision_bits is not None:
        return args.precision_bits
    env = os.environ.get(ENV_BITS)
    if env is None:
        return 256
    try:
        bits = int(env)
    except ValueError:
        parser.error(f"{ENV_BITS} must be an integer, got {env!r}")
    if bits < MIN_BITS:
        parser.error(f"{ENV_BITS} must be >= {MIN_BITS}, got {bits}")
    return bits


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(args.command, _precision(args, parser), args.format, args)
    try:
        record, code = args.func(cfg)
    except UsageError as exc:
        print(f"sepvol: error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"sepvol: domain error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"sepvol: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(render(record, cfg.output_format))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
