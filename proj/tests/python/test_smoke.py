import math

import numpy as np
import pytest

import skewdepth as sd


def test_normal_depth_matches_closed_form():
    law = sd.STParams.canonical(2, 0.0, math.inf)
    x = np.array([0.6, -0.8])
    r = sd.hd(law, x)
    assert r.converged
    assert r.depth == pytest.approx(0.5 * math.erfc(1.0 / math.sqrt(2.0)), abs=1e-6)


def test_skew_cauchy_contour_is_the_exact_circle():
    law = sd.STParams.canonical(2, 3.0, 1.0)
    c = sd.hd_contour(law, 0.2, n_vertices=90)
    e = sd.sc_contour_exact(law, 0.2)
    d = c.vertices - e.center
    q = np.einsum("ij,jk,ik->i", d, e.shape, d)
    assert c.vertices.shape == (90, 2)
    assert np.max(np.abs(q - 1.0)) < 2e-3


def test_canonical_skew_of_linear_form():
    A = math.sqrt(2.0) / 2.0 * np.array([[-1.0, -2.0], [0.5, -0.5]])
    y = sd.linear_form(sd.STParams.canonical(2, 3.0, 5.0), A, np.array([-2.0, 1.0]))
    assert sd.CanonicalForm(y).skew == pytest.approx(3.0, abs=1e-9)
    assert y.skewness == pytest.approx([-math.sqrt(5.0), 2.0 * math.sqrt(2.0)])


def test_expectile_depth_of_the_mean_is_one_half():
    law = sd.GHParams.canonical(2, 2.0, -0.5, 1.0, 1.0)
    mean = sd.CanonicalForm(law).canonical_mean()
    assert sd.ed(law, mean).depth == pytest.approx(0.5, abs=1e-9)


def test_misclassification_and_indices():
    law = sd.STParams.canonical(2, 10.0, math.inf)
    r = sd.misclassification(law, 0.05, grid=300, refinement_check=False)
    assert r.p_false_negative == pytest.approx(0.035, abs=0.005)
    assert r.p_false_positive == pytest.approx(0.010, abs=0.004)
    assert 0.0 <= sd.d1(law) <= sd.d2(law)
    rows = sd.d2_sweep(sd.SweepFamily.NIG, [5.0], [0.1, 1.0, 10.0])
    assert [r[2] for r in rows] == sorted((r[2] for r in rows), reverse=True)


def test_sampling_is_deterministic():
    law = sd.GHParams.nig(np.zeros(2), np.eye(2), np.array([1.0, 0.0]), 1.0, 1.0)
    a = sd.sample(law, 100, 3)
    assert a.shape == (100, 2)
    assert np.array_equal(a, sd.sample(law, 100, 3))


def test_errors_surface_as_python_exceptions():
    with pytest.raises(ValueError, match="dispersion"):
        sd.STParams(np.zeros(2), np.array([[1.0, 2.0], [2.0, 1.0]]), np.zeros(2), 5.0)
    with pytest.raises(sd.ContractError):
        sd.ed(sd.STParams.canonical(2, 1.0, 1.0), np.zeros(2))
