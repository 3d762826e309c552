import numpy as np
import pytest

from conftest import random_set
from gbslocc import _pycore, kernels
from gbslocc.criterion import cyclotomic_poly
from gbslocc.oracle import difference_terms, random_unit_vectors

core = pytest.importorskip("gbslocc._core")


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6, 8])
def test_witness_and_table_parity(d, rng):
    for _ in range(100):
        s = random_set(rng, d, int(rng.integers(1, min(d + 2, d * d) + 1)))
        assert core.first_witness(s.ms, s.ns, d) == _pycore.first_witness(s.ms, s.ns, d)
        phi = cyclotomic_poly(d)
        np.testing.assert_array_equal(
            core.vanishing_table(s.ms, s.ns, d, phi), _pycore.vanishing_table(s.ms, s.ns, d, phi)
        )


@pytest.mark.parametrize("d", [3, 4, 6])
def test_value_grad_parity(d, rng):
    for _ in range(20):
        s = random_set(rng, d, d)
        da, db, c = difference_terms(s)
        phi = random_unit_vectors(rng, 1, d)[0]
        f1, g1 = core.value_grad(phi, da, db, c, d)
        f2, g2 = _pycore.value_grad(phi, da, db, c, d)
        assert abs(f1 - f2) < 1e-12
        np.testing.assert_allclose(g1, g2, atol=1e-12)


@pytest.mark.parametrize("d", [4, 6])
def test_descend_parity(d, rng):
    s = random_set(rng, d, d)
    da, db, c = difference_terms(s)
    starts = random_unit_vectors(rng, 6, d)
    args = (da, db, c, d, 400, 1e-9, 0.1, 50, 1e-6, 1e-14)
    p1, f1, i1, s1 = core.descend_batch(starts, *args)
    p2, f2, i2, s2 = _pycore.descend_batch(starts, *args)
    np.testing.assert_array_equal(np.asarray(s1), np.asarray(s2))
    np.testing.assert_array_equal(np.asarray(i1), np.asarray(i2))
    np.testing.assert_allclose(np.asarray(f1), np.asarray(f2), rtol=1e-6, atol=1e-18)
    np.testing.assert_allclose(np.asarray(p1), np.asarray(p2), atol=1e-8)


def test_pure_python_env(monkeypatch):
    import importlib

    monkeypatch.setenv("GBSLOCC_PURE_PYTHON", "1")
    try:
        mod = importlib.reload(kernels)
        assert mod.BACKEND == "python"
    finally:
        monkeypatch.delenv("GBSLOCC_PURE_PYTHON")
        importlib.reload(kernels)
