import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sepvol import nets
from sepvol.numerics import DomainError, PrecisionContext

ANCHOR = (130, 11.3165625)


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


# --------------------------------------------------------------------------
# Tables
# --------------------------------------------------------------------------

def test_anchor_row_conversion():
    row = nets.NetTableRow.from_angle(*ANCHOR)
    assert abs(row.delta - 2 * math.sin(math.radians(ANCHOR[1]) / 2)) < 1e-15
    assert abs(row.delta - 0.1971904) < 1e-7
    assert abs(row.m * row.delta**2 - 5.055) < 0.005


def test_bundled_table():
    rows = nets.default_net_table()
    assert [(r.m, r.epsilon_degrees) for r in rows] == [ANCHOR]


def test_table_rows_density_window():
    for row in nets.default_net_table():
        if row.m >= 20:
            assert 4.5 <= row.m * row.delta**2 <= 6.0


def test_load_table_sorted(tmp_path):
    p = write(tmp_path, "t.csv", "m,epsilon_degrees\n130,11.3165625\n20,31.0\n\n72,15.0\n")
    assert [r.m for r in nets.load_net_table(p)] == [20, 72, 130]


def test_tetrahedral_row_rejected(tmp_path):
    p = write(tmp_path, "t.csv", "m,epsilon_degrees\n4,109.4712\n130,11.3165625\n")
    with pytest.raises(nets.NetTableError, match="line 2"):
        nets.load_net_table(p)
    rows = nets.load_net_table(p, skip_inadmissible=True)
    assert [r.m for r in rows] == [130]
    assert abs(nets.chordal_from_degrees(109.4712) - 1.6330) < 1e-4


@pytest.mark.parametrize(
    "body, line",
    [
        ("m,eps\n", 1),
        ("m,epsilon_degrees\n130,abc\n", 2),
        ("m,epsilon_degrees\n130,11.3\n12,20,3\n", 3),
        ("m,epsilon_degrees\n130,200\n", 2),
        ("m,epsilon_degrees\n0,20\n", 2),
    ],
)
def test_table_parse_errors(tmp_path, body, line):
    p = write(tmp_path, "t.csv", body)
    with pytest.raises(nets.NetTableError, match=f"line {line}"):
        nets.load_net_table(p)


def test_row_domain():
    with pytest.raises(DomainError):
        nets.NetTableRow.from_angle(10, 0)


# --------------------------------------------------------------------------
# SphericalNet
# --------------------------------------------------------------------------

def test_net_validation():
    with pytest.raises(ValueError):
        nets.SphericalNet(np.array([[1.0, 0, 0], [0, 2.0, 0]]))
    with pytest.raises(DomainError):
        nets.SphericalNet(np.array([[1.0, 0, 0]]), delta=1.5)
    with pytest.raises(ValueError):
        nets.SphericalNet(np.array([[1.0, 0, 0]]), provenance="unknown")
    with pytest.raises(ValueError):
        nets.SphericalNet(np.array([[1.0, 0, 0]]), certified=True)
    net = nets.SphericalNet(np.array([[1.0, 0, 0]]))
    with pytest.raises(ValueError):
        net.points[0, 0] = 3.0


def test_point_file_round_trip(tmp_path):
    net = nets.icosahedron_net()
    path = tmp_path / "ico.csv"
    nets.save_net_points(net, path)
    back = nets.load_net_points(path)
    assert np.allclose(back.points, net.points, atol=1e-15)
    assert back.delta == net.delta and not back.certified
    assert json.loads((tmp_path / "ico.json").read_text())["certified"] is True


def test_point_file_errors(tmp_path):
    with pytest.raises(ValueError, match="line 1"):
        nets.load_net_points(write(tmp_path, "a.csv", "a,b,c\n1,0,0\n"))
    with pytest.raises(ValueError, match="line 3"):
        nets.load_net_points(write(tmp_path, "b.csv", "x,y,z\n1,0,0\n1,0\n"))
    with pytest.raises(ValueError, match="no points"):
        nets.load_net_points(write(tmp_path, "c.csv", "x,y,z\n"))


# --------------------------------------------------------------------------
# Certification
# --------------------------------------------------------------------------

def test_tetrahedron_certification():
    tet = nets.tetrahedron_net()
    assert nets.certify_covering(tet, 2 / math.sqrt(3)).certified
    assert nets.certify_covering(tet, 1.16).certified
    cert = nets.certify_covering(tet, 1.15)
    assert not cert.certified
    assert abs(cert.worst_gap - 2 / math.sqrt(3)) < 1e-12


def test_tetrahedron_grid_agrees():
    tet = nets.tetrahedron_net()
    assert nets.certify_covering(tet, 1.16, method="grid", spacing=0.004).certified
    assert not nets.certify_covering(tet, 1.15, method="grid").certified
    gap = nets.grid_worst_gap(tet.points, 0.004)
    assert 2 / math.sqrt(3) - 0.004 <= gap <= 2 / math.sqrt(3)


def test_grid_refuses_coarse_spacing():
    with pytest.raises(ValueError, match="refusing"):
        nets.certify_covering(nets.tetrahedron_net(), 1.16, method="grid", spacing=0.2)


def test_single_point():
    net = nets.SphericalNet(np.array([[0.0, 0, 1]]))
    assert not nets.certify_covering(net, 1.99).certified
    assert not nets.certify_covering(net, 1.99, method="exact").certified
    cert = nets.certify_covering(net, 2.2, method="grid")
    assert cert.certified and not cert.net.certified


def test_sphere_grid_covers():
    h = 0.05
    grid = nets.sphere_grid(h)
    rng = np.random.default_rng(0)
    probe = rng.normal(size=(20_000, 3))
    probe /= np.linalg.norm(probe, axis=1, keepdims=True)
    assert nets.grid_worst_gap(grid, 0.01) <= h
    from scipy.spatial import cKDTree

    assert cKDTree(grid).query(probe)[0].max() <= h


def test_icosahedron_radius():
    net = nets.icosahedron_net()
    # Circumradius of an icosahedron face, projected to the sphere.
    r = math.sqrt(2 - 2 * math.sqrt((5 + 2 * math.sqrt(5)) / 15))
    assert abs(net.delta - r) < 1e-12
    assert abs(net.delta - 0.6405) < 0.001
    assert nets.certify_covering(net, net.delta * 1.02, method="grid", spacing=net.delta / 100).certified


@pytest.mark.parametrize("f", [1, 2, 3, 5])
def test_geodesic_sizes(f):
    assert len(nets.geodesic_points(f)) == 10 * f * f + 2


@pytest.mark.parametrize("method", ["icosahedral_subdivision", "fibonacci"])
@pytest.mark.parametrize("target", [0.9, 0.4, 0.2])
def test_generated_nets_certify(method, target):
    net = nets.generate_net(target, method)
    assert net.certified and net.delta <= target
    assert nets.certify_covering(net, net.delta).certified
    assert nets.certify_covering(net, net.delta * 1.02, method="grid", spacing=net.delta / 100).certified


def test_generated_cardinality_against_cap_bound():
    net = nets.generate_net(0.2)
    assert 400 / 4 <= len(net) <= 400 * 4


def test_generate_errors():
    with pytest.raises(DomainError):
        nets.generate_net(0.01)
    with pytest.raises(ValueError):
        nets.generate_net(0.3, method="random")


# --------------------------------------------------------------------------
# Inradius lemma
# --------------------------------------------------------------------------

def test_tetrahedron_inradius_equality():
    tet = nets.tetrahedron_net()
    assert abs(nets.conv_inradius_bound(tet) - 1 / 3) < 1e-12
    assert abs(nets.hull_inradius(tet.points) - 1 / 3) < 1e-12


def test_icosahedron_inradius():
    ico = nets.icosahedron_net()
    b = nets.conv_inradius_bound(ico)
    assert abs(b - 0.7947) < 1e-3
    assert nets.support_minimum(ico.points) >= b


def test_inradius_bound_tends_to_one():
    vals = [nets.conv_inradius_bound(nets.generate_net(t)) for t in (0.6, 0.3, 0.1)]
    assert vals[0] < vals[1] < vals[2] and vals[2] > 0.99


@settings(max_examples=25, deadline=None)
@given(st.integers(10, 400), st.integers(0, 10_000))
def test_inradius_lemma_sound_on_random_nets(n, seed):
    rng = np.random.default_rng(seed)
    pts = nets.normalize_rows(rng.normal(size=(n, 3)))
    r = nets.exact_covering_radius(pts)
    if r is None or r >= math.sqrt(2):
        return
    net = nets.SphericalNet(pts, delta=r, certified=True)
    b = nets.conv_inradius_bound(net)
    assert abs(nets.hull_inradius(pts) - b) < 1e-9
    assert nets.support_minimum(pts, 0.05) >= b - 1e-12


def test_inradius_requires_certified():
    with pytest.raises(ValueError):
        nets.conv_inradius_bound(nets.SphericalNet(nets.tetrahedron_points()))


# --------------------------------------------------------------------------
# Gaussian maxima and the tensor bound
# --------------------------------------------------------------------------

def test_gaussian_max_bound_values():
    assert nets.gaussian_max_bound(3.0, 1) == 0.0
    assert abs(nets.gaussian_max_bound(1.0, 2) - 1.1774100225154747) < 1e-15
    with pytest.raises(DomainError):
        nets.gaussian_max_bound(0.0, 3)
    with pytest.raises(DomainError):
        nets.gaussian_max_bound(1.0, 0)


def test_tensor_net_bound_anchor():
    row = nets.NetTableRow.from_angle(*ANCHOR)
    val = nets.tensor_net_bound(8, row.m, row.delta, PrecisionContext())
    assert abs(val - 10.417406) <= 1e-5


def test_tensor_net_bound_trivial_case():
    assert abs(nets.tensor_net_bound(1, 1, 1e-9) - math.sqrt(2 * math.log(2))) < 1e-12


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 30), st.integers(1, 500), st.floats(0.01, 1.4))
def test_tensor_net_bound_monotone_in_m(N, m, delta):
    assert nets.tensor_net_bound(N, m, delta) < nets.tensor_net_bound(N, m + 1, delta)


def test_tensor_net_bound_domain():
    with pytest.raises(DomainError):
        nets.tensor_net_bound(8, 100, 1.5)
    with pytest.raises(DomainError):
        nets.tensor_net_bound(0, 100, 0.1)


def test_phi_blows_up_at_endpoints():
    for K in nets.MODELS.values():
        mid = nets.phi_log(0.3, 8, K)
        assert nets.phi_log(1e-9, 8, K) > mid + 0.5
        assert nets.phi_log(math.sqrt(2) - 1e-9, 8, K) > mid + 5


def test_optimize_delta_table_model():
    opt = nets.optimize_delta(8, "table_5")
    assert abs(opt.delta - 0.15) <= 0.01
    assert abs(opt.implied_m - 222) <= 10
    anchor = nets.tensor_net_bound(8, *(lambda r: (r.m, r.delta))(nets.NetTableRow.from_angle(*ANCHOR)))
    assert opt.bound < anchor < 1.02 * opt.bound


def test_cap_model_at_fifteen_hundredths():
    """The generic cap cardinality 16/delta^2 is about 8% weaker than the tabulated anchor at N = 8."""
    cap = nets.tensor_net_bound(8, 16 / 0.15**2, 0.15)
    anchor = nets.tensor_net_bound(8, 130, nets.NetTableRow.from_angle(*ANCHOR).delta)
    assert abs(cap - 11.295155) < 1e-6
    assert 1.08 < cap / anchor < 1.09


def test_optimize_delta_is_a_minimum():
    opt = nets.optimize_delta(8, "cap_16")
    for step in (0.99, 1.01):
        assert nets.phi_log(opt.delta * step, 8, 16) >= math.log(opt.bound) - 1e-12


def test_optimize_delta_small_n():
    opt = nets.optimize_delta(2, "cap_16")
    assert math.isfinite(opt.bound) and opt.bound >= math.sqrt(2 * math.log(2))


def test_optimize_delta_growth_rate():
    """bound / sqrt(2 N ln N) under the cap model, frozen from a scan."""
    ratios = {N: nets.optimize_delta(N, "cap_16").bound / math.sqrt(2 * N * math.log(N)) for N in (10**3, 10**4, 10**5, 10**6)}
    assert abs(ratios[10**4] - 1.30575) < 1e-4
    vals = list(ratios.values())
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert all(0.8 <= v for v in vals)


def test_optimize_delta_errors():
    with pytest.raises(DomainError):
        nets.optimize_delta(1)
    with pytest.raises(ValueError):
        nets.optimize_delta(8, "cap_99")
