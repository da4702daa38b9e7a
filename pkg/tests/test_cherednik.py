from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from grasstrans.cherednik import (
    ClosedFormFactor,
    apply_D,
    apply_M,
    apply_T,
    bs_chain,
    bs_constant,
    eigenvalue_of_M,
    pointwise_D,
    verify_bs_cos,
    verify_bs_exact,
    verify_bs_sin,
    verify_factor_identities,
)
from grasstrans.rootsystem import grassmannian_preset, root_system
from grasstrans.trigpoly import GaussQ, LaurentTrigPoly

CONFIGS = [
    root_system(1, 0, 3, 0),
    root_system(2, 1, 0, 0),
    root_system(2, 2, 2, 1),
    root_system(2, 4, 0, 3),
    root_system(3, 1, 1, 0),
    root_system(2, Fraction(3, 2), Fraction(1, 3), Fraction(1, 2)),
]


@st.composite
def monomials(draw, rs):
    r = rs.rank
    if rs.iota == 0 and draw(st.booleans()):
        return tuple(2 * draw(st.integers(-3, 3)) + 1 for _ in range(r))
    return tuple(2 * draw(st.integers(-3, 3)) for _ in range(r))


@given(st.data())
def test_cherednik_operators_commute(data):
    rs = data.draw(st.sampled_from([c for c in CONFIGS if c.rank > 1]))
    lam = data.draw(monomials(rs))
    p = LaurentTrigPoly.monomial(lam)
    for j in range(rs.rank):
        for k in range(j + 1, rs.rank):
            assert apply_T(rs, j, apply_T(rs, k, p)) == apply_T(rs, k, apply_T(rs, j, p))


@given(st.data())
def test_algebraic_and_pointwise_D_agree(data):
    rs = data.draw(st.sampled_from(CONFIGS))
    lam = data.draw(monomials(rs))
    lam2 = data.draw(monomials(rs))
    p = LaurentTrigPoly(rs.rank, {lam: Fraction(1), lam2: Fraction(-2, 3)})
    t = np.array(data.draw(st.lists(st.floats(0.05, 1.5), min_size=rs.rank, max_size=rs.rank)))
    if not _separated(t):
        return
    lam_arr, c = p.exponents()

    def df(j, x):
        return np.sum(c * 1j * lam_arr[:, j] * np.exp(1j * (lam_arr @ x)))

    for j in range(rs.rank):
        algebraic = complex(apply_D(rs, j, p)(t))
        pointwise = pointwise_D(rs, j, p, df, t)
        assert abs(algebraic - pointwise) <= 1e-9 * max(1.0, abs(pointwise))


def _separated(t, tol=0.05):
    r = len(t)
    for j in range(r):
        if min(t[j] % (np.pi / 2), np.pi / 2 - t[j] % (np.pi / 2)) < tol:
            return False
        for k in range(j + 1, r):
            if abs(np.sin(t[j] - t[k])) < tol or abs(np.sin(t[j] + t[k])) < tol:
                return False
    return True


def test_apply_D_has_gaussian_rational_coefficients():
    rs = root_system(2, 1, 1, 1)
    out = apply_D(rs, 0, LaurentTrigPoly.monomial((2, 0)))
    assert all(isinstance(v, GaussQ) and v.re == 0 for v in out.coeffs.values())


def test_lattice_violation_raises():
    rs = root_system(2, 1, 1, 1)
    with pytest.raises(ValueError):
        apply_T(rs, 0, LaurentTrigPoly.monomial((1, 0)))


def test_rank_one_operator_on_exponentials():
    # rank 1, only short roots: T e^{i m t} = (m - b) e^{imt} + 2b * (telescoped)
    rs = root_system(1, 0, 2, 0)
    out = apply_T(rs, 0, LaurentTrigPoly.monomial((2,)))
    assert out.coeffs == {(2,): Fraction(1) + 2, (0,): Fraction(2)}


def test_eigenvalue_example():
    rs = root_system(1, 0, 2, 0)
    assert eigenvalue_of_M(rs, 0, (2,)) == 0
    assert eigenvalue_of_M(rs, Fraction(1, 2), (0,)) == 4**2 - 1


@pytest.mark.parametrize("rs", CONFIGS)
@pytest.mark.parametrize("k", [1, 2])
def test_bernstein_sato_exact_for_even_delta(rs, k):
    assert verify_bs_exact(rs, k, "cos")
    assert verify_bs_exact(rs, k, "sin")


@pytest.mark.parametrize("rs", CONFIGS)
@pytest.mark.parametrize("delta", [2, 3.5, 5])
def test_bernstein_sato_pointwise(rs, delta):
    rng = np.random.default_rng(11)
    for _ in range(5):
        t = np.sort(rng.uniform(0.1, 1.45, rs.rank))[::-1]
        if not _separated(t):
            continue
        assert verify_bs_cos(rs, delta, t) <= 1e-9 * abs(float(bs_constant(rs, delta)))
        assert verify_bs_sin(rs, delta, t) <= 1e-9 * abs(float(bs_constant(rs, delta, "sin")))
        for j in range(1, rs.rank + 1):
            assert max(verify_factor_identities(rs, delta, j, t).values()) <= 1e-9


def test_pointwise_and_exact_routes_agree_at_delta_four():
    # same identity, two evaluation routes
    rs = grassmannian_preset("C", 5, 2)
    t = np.array([1.1, 0.4])
    const = float(bs_constant(rs, 4))
    assert verify_bs_exact(rs, 2)
    assert verify_bs_cos(rs, 4.0, t) / const < 1e-12


def test_bs_constant_formula():
    rs = root_system(2, 2, 2, 1)
    # prod_j (delta + a(j-1)) (delta + iota - 1 + a(r-j))
    assert bs_constant(rs, 2) == (2 * 4) * (4 * 2)
    assert bs_constant(rs, 2, "sin") == (2 * 6) * (4 * 4)


def test_chain_steps_match_individually():
    rs = root_system(3, 1, 1, 1)
    rep = bs_chain(rs, 3.5, np.array([1.3, 0.8, 0.3]), "sin")
    assert len(rep.steps) == 6
    assert max(s.rel_error for s in rep.steps) < 1e-12


def test_rejects_bad_arguments():
    rs = root_system(2, 1, 1, 1)
    with pytest.raises(ValueError):
        verify_bs_cos(rs, 1.5, [1.0, 0.3])
    with pytest.raises(ValueError):
        verify_bs_cos(rs, 2, [0.5, 0.5])
    with pytest.raises(ValueError):
        verify_bs_cos(rs, 2, [np.pi / 2, 0.5])


@given(
    st.lists(st.floats(0.0, 4.0), min_size=2, max_size=2),
    st.lists(st.floats(0.0, 4.0), min_size=2, max_size=2),
    st.lists(st.integers(-3, 3), min_size=2, max_size=2),
    st.lists(st.floats(0.1, 1.4), min_size=2, max_size=2),
)
def test_closed_form_derivative_matches_finite_difference(p, q, kappa, t):
    f = ClosedFormFactor(tuple(p), tuple(q), tuple(float(k) for k in kappa))
    t = np.array(t)
    h = 1e-6
    for j in range(2):
        e = np.zeros(2)
        e[j] = h
        fd = (f(t + e) - f(t - e)) / (2 * h)
        assert abs(f.partial(j, t) - fd) <= 1e-5 * max(1.0, abs(fd))


def test_apply_M_on_constant():
    rs = root_system(2, 1, 1, 1)
    one = LaurentTrigPoly.monomial((0, 0))
    assert apply_M(rs, 2, one) == one.scale(eigenvalue_of_M(rs, 0, (0, 0)))
