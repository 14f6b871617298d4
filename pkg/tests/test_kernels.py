import numpy as np
import pytest

from cutloc import _kernels


@pytest.fixture
def both_backends():
    if not _kernels.HAS_NUMBA:
        pytest.skip("numba not importable; only one backend present")
    previous = _kernels.backend()
    yield
    _kernels.set_backend(previous)


def _ring_sites(m=257, r=1.0):
    t = np.linspace(0.0, 2 * np.pi, m, endpoint=False)
    sites = np.stack([r * np.cos(t), r * np.sin(t)], axis=1)
    s = r * t
    return sites, s, 2 * np.pi * r


def test_nearest_site_backend_parity(both_backends):
    rng = np.random.default_rng(7)
    sites, _, _ = _ring_sites()
    queries = rng.uniform(-0.9, 0.9, size=(400, 2))
    _kernels.set_backend("numba")
    idx_nb, d_nb = _kernels.nearest_site(queries, sites)
    _kernels.set_backend("numpy")
    idx_np, d_np = _kernels.nearest_site(queries, sites)
    assert np.array_equal(idx_nb, idx_np)
    assert np.allclose(d_nb, d_np, rtol=0, atol=1e-12)


def test_nearest_site_gap_backend_parity(both_backends):
    rng = np.random.default_rng(11)
    sites, s, length = _ring_sites()
    queries = rng.uniform(-0.8, 0.8, size=(300, 2))
    args = (queries, sites, s, length, 0.2)
    _kernels.set_backend("numba")
    out_nb = _kernels.nearest_site_gap(*args)
    _kernels.set_backend("numpy")
    out_np = _kernels.nearest_site_gap(*args)
    for a, b in zip(out_nb, out_np):
        assert np.allclose(a, b, rtol=0, atol=1e-12)


def test_winding_number_backend_parity(both_backends):
    t = np.linspace(0.0, 2 * np.pi, 128, endpoint=False)
    poly = np.stack([np.cos(t), np.sin(t)], axis=1)
    rng = np.random.default_rng(3)
    pts = rng.uniform(-1.5, 1.5, size=(500, 2))
    _kernels.set_backend("numba")
    w_nb = _kernels.winding_number(pts, poly)
    _kernels.set_backend("numpy")
    w_np = _kernels.winding_number(pts, poly)
    assert np.array_equal(w_nb, w_np)
    inside = np.hypot(pts[:, 0], pts[:, 1]) < 0.98
    assert np.all(w_np[inside] != 0)
    outside = np.hypot(pts[:, 0], pts[:, 1]) > 1.02
    assert np.all(w_np[outside] == 0)


def test_nearest_site_exact_values():
    sites = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
    idx, d = _kernels.nearest_site(np.array([[1.2, 0.0], [-0.5, 0.0]]), sites)
    assert list(idx) == [1, 0]
    assert np.allclose(d, [0.2, 0.5], atol=1e-15)


def test_set_backend_validates():
    with pytest.raises(ValueError):
        _kernels.set_backend("cuda")


def test_cut_values_backend_independent(both_backends, curves):
    from cutloc import cut_table
    curve = curves("circle")
    _kernels.set_backend("numpy")
    t_np = cut_table(curve, n=64)
    _kernels.set_backend("numba")
    t_nb = cut_table(curve, n=64)
    assert np.allclose(t_np.lam, t_nb.lam, rtol=0, atol=1e-12)
    assert np.allclose(t_np.phi, t_nb.phi, rtol=0, atol=1e-12)
