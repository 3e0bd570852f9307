import math

import numpy as np
import pytest

from gpcquad import (
    JacobiMatrix,
    NumericalError,
    RecurrenceCoeffs,
    build_jacobi,
    compute_recurrence,
    fit_cubic,
    fit_rational,
    gauss_rule,
    integrate,
    moments,
    orthonormality_error,
    tridiag_eigen,
)
from conftest import diagonal_data, random_selected_data

UNIFORM_MOMENTS = 1.0 / (np.arange(30) + 1.0)


def uniform_recurrence(n_hat):
    rec, basis = compute_recurrence(UNIFORM_MOMENTS, n_hat)
    return rec, basis


def test_build_jacobi_uniform_degree_one():
    rec, _ = uniform_recurrence(1)
    J = build_jacobi(rec)
    np.testing.assert_allclose(J.diag, [0.5, 0.5], atol=1e-13)
    np.testing.assert_allclose(J.offdiag, [math.sqrt(1 / 12)], rtol=1e-13)


def test_build_jacobi_degree_zero_and_bad_kappa():
    rec, _ = uniform_recurrence(0)
    J = build_jacobi(rec)
    assert J.diag.shape == (1,) and J.offdiag.shape == (0,)
    bad = RecurrenceCoeffs(gamma=np.array([0.5, 0.5]), kappa=np.array([1.0, -0.1]))
    with pytest.raises(NumericalError):
        build_jacobi(bad)


def test_tridiag_eigen_trivial_and_closed_form():
    vals, first = tridiag_eigen(JacobiMatrix(diag=np.array([0.7]), offdiag=np.array([])))
    assert vals[0] == 0.7 and first[0] == 1.0
    # 2x2: eigenvalues 1/2 -+ 1/sqrt(12), first-row squares 1/2 each
    J = JacobiMatrix(diag=np.array([0.5, 0.5]), offdiag=np.array([math.sqrt(1 / 12)]))
    vals, first = tridiag_eigen(J)
    np.testing.assert_allclose(
        vals, [0.5 - 1 / math.sqrt(12), 0.5 + 1 / math.sqrt(12)], rtol=1e-14
    )
    np.testing.assert_allclose(first**2, [0.5, 0.5], rtol=1e-13)


def test_tridiag_eigen_against_dense_oracle(rng):
    for _ in range(30):
        n = int(rng.integers(2, 12))
        diag = rng.uniform(-2, 2, n)
        off = rng.uniform(0.05, 1.5, n - 1)
        vals, first = tridiag_eigen(JacobiMatrix(diag=diag, offdiag=off))
        dense = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
        ref_vals, ref_vecs = np.linalg.eigh(dense)
        np.testing.assert_allclose(vals, ref_vals, atol=1e-12 * max(1, np.abs(diag).max()))
        np.testing.assert_allclose(first**2, ref_vecs[0] ** 2, atol=1e-11)
        assert abs((first**2).sum() - 1.0) <= 1e-12


def test_tridiag_eigen_shape_guard():
    with pytest.raises(NumericalError):
        tridiag_eigen(JacobiMatrix(diag=np.array([0.5, 0.5]), offdiag=np.array([])))


def test_gauss_rule_uniform_two_point():
    rec, _ = uniform_recurrence(1)
    rule = gauss_rule(rec)
    np.testing.assert_allclose(
        rule.nodes, [(3 - math.sqrt(3)) / 6, (3 + math.sqrt(3)) / 6], rtol=1e-12
    )
    np.testing.assert_allclose(rule.weights, [0.5, 0.5], rtol=1e-12)
    assert rule.weights.sum() == pytest.approx(1.0, abs=1e-15)


def test_integrate_constant_and_cubic_exactness():
    rec, _ = uniform_recurrence(1)
    rule = gauss_rule(rec)
    assert integrate(rule, lambda x: 1.0) == pytest.approx(1.0, abs=1e-15)
    # degree 3 <= 2*1+1: exact for the uniform density
    assert integrate(rule, lambda x: x**3) == pytest.approx(0.25, rel=1e-13)
    with pytest.raises(NumericalError):
        integrate(rule, lambda x: float("nan"))


@pytest.mark.parametrize("variant", ["cubic", "rational"])
def test_exactness_against_analytic_moments(rng, variant):
    fitter = fit_cubic if variant == "cubic" else fit_rational
    for _ in range(4):
        data, transform, _ = random_selected_data(rng)
        model = fitter(data, transform=transform)
        mom = moments(model, 13)
        for n_hat in range(0, 7):
            rec, _ = compute_recurrence(mom, n_hat)
            rule = gauss_rule(rec)
            for k in range(2 * n_hat + 2):
                got = float(np.dot(rule.weights, rule.nodes**k))
                assert abs(got - mom[k]) <= 1e-10 * max(1.0, abs(mom[k]))


def test_node_interlacing_and_support_hull(rng):
    data, transform, _ = random_selected_data(rng)
    model = fit_cubic(data, transform=transform)
    mom = moments(model, 15)
    rules = [gauss_rule(compute_recurrence(mom, n)[0]) for n in range(0, 7)]
    for small, big in zip(rules, rules[1:]):
        assert np.all(small.nodes > big.nodes[:-1]) and np.all(small.nodes < big.nodes[1:])
    for rule in rules:
        assert np.all(rule.nodes > model.x[0]) and np.all(rule.nodes < model.x[-1])
        assert np.all(rule.weights > 0)


def test_orthonormality_error_uniform_and_mismatch():
    rec, basis = uniform_recurrence(1)
    rule = gauss_rule(rec)
    assert orthonormality_error(basis, rule) <= 1e-13
    rec2, basis2 = uniform_recurrence(2)
    with pytest.raises(ValueError):
        orthonormality_error(basis2, rule)


@pytest.mark.parametrize("variant", ["cubic", "rational"])
def test_orthonormality_error_fitted(rng, variant):
    fitter = fit_cubic if variant == "cubic" else fit_rational
    data, transform, _ = random_selected_data(rng)
    model = fitter(data, transform=transform)
    for n_hat in (2, 4, 6):
        rec, basis = compute_recurrence(moments(model, 2 * n_hat + 1), n_hat)
        assert orthonormality_error(basis, gauss_rule(rec)) <= 1e-10


def test_uniform_rule_from_diagonal_fit():
    model = fit_cubic(diagonal_data(6))
    rec, basis = compute_recurrence(moments(model, 3), 1)
    rule = gauss_rule(rec)
    np.testing.assert_allclose(
        rule.nodes, [(3 - math.sqrt(3)) / 6, (3 + math.sqrt(3)) / 6], atol=1e-10
    )
    np.testing.assert_allclose(rule.weights, [0.5, 0.5], atol=1e-10)
