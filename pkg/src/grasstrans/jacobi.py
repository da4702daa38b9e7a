"""Heckman-Opdam Jacobi polynomials for BC_r.

phi_m is built exactly as the eigenfunction of L = sum_j T_j^2 (T_j the
rational form of the Cherednik operator) that is triangular on W-orbit
sums,

    phi_m = sum_{lam <= m} c_lam M_lam,   c_m fixed,  phi_m(0) = 1.

The support is found by closing {m} under L and the triangular system is
solved by back-substitution in lexicographic order.  A second,
independent construction (:func:`jacobi_gram_schmidt`) orthogonalises
orbit sums against the Jacobi measure by quadrature.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .cherednik import power_sum_operator
from .quadrature import box_integral, flip_last
from .rootsystem import (
    RootSystemBC,
    check_weight,
    dominant_rep,
    even_dominant_weights,
    measure_density,
    weyl_group_order,
    weyl_orbit,
)
from .trigpoly import GaussQ, LaurentTrigPoly, SymTrigPoly, i_power, orbit_coefficients

__all__ = [
    "DegenerateEigenvalue",
    "LaurentTrigPoly",
    "SymTrigPoly",
    "jacobi_polynomial",
    "jacobi_gram_schmidt",
    "evaluate",
    "evaluate_grassmannian",
    "value_at_half_pi",
    "gram_check",
]


class DegenerateEigenvalue(ArithmeticError):
    """No power-sum operator separates phi_m from the lower orbit sums."""


def orbit_sum(rs: RootSystemBC, lam: Sequence[int]) -> LaurentTrigPoly:
    return LaurentTrigPoly(rs.rank, {mu: Fraction(1) for mu in weyl_orbit(rs, lam)})


@lru_cache(maxsize=4096)
def _operator_column(rs: RootSystemBC, lam: tuple, k: int) -> dict:
    return orbit_coefficients(rs, power_sum_operator(rs, orbit_sum(rs, lam), k))


def _support(rs: RootSystemBC, m: tuple) -> list:
    seen = {m}
    todo = [m]
    while todo:
        lam = todo.pop()
        for mu in _operator_column(rs, lam, 1):
            if mu not in seen:
                seen.add(mu)
                todo.append(mu)
    return sorted(seen, reverse=True)


@lru_cache(maxsize=2048)
def _jacobi_coeffs(rs: RootSystemBC, m: tuple) -> tuple:
    support = _support(rs, m)
    for k in (1, 2, 3):
        cols = {lam: _operator_column(rs, lam, k) for lam in support}
        for lam, col in cols.items():
            for mu in col:
                if mu != lam and not mu < lam:
                    raise AssertionError(f"operator is not triangular: {mu} appears in L M_{lam}")
        eig = {lam: cols[lam].get(lam, 0) for lam in support}
        if all(eig[mu] != eig[m] for mu in support if mu != m):
            break
    else:
        raise DegenerateEigenvalue(f"cannot separate phi_{m} for {rs}")

    coeffs = {m: Fraction(1)}
    for mu in support[1:]:
        acc = sum((coeffs[lam] * cols[lam].get(mu, 0) for lam in coeffs), Fraction(0))
        if acc:
            coeffs[mu] = Fraction(acc) / (eig[m] - eig[mu])
    norm = sum(c * len(weyl_orbit(rs, lam)) for lam, c in coeffs.items())
    return tuple((lam, c / norm) for lam, c in coeffs.items())


def jacobi_polynomial(rs: RootSystemBC, m: Sequence[int]) -> SymTrigPoly:
    """Exact phi_m with phi_m(0) = 1; m must be dominant and in the lattice."""
    m = check_weight(rs, m)
    if dominant_rep(rs, m) != m:
        raise ValueError(f"weight {m} is not dominant")
    return SymTrigPoly(rs, dict(_jacobi_coeffs(rs, m)))


def evaluate(p: SymTrigPoly, t):
    """phi(t); vectorised over leading axes of t."""
    return p(t)


def evaluate_grassmannian(p: SymTrigPoly, t):
    """Value averaged over t_r -> -t_r (matters only for type D).

    For type D the even-sign Weyl group is used to build phi; the
    O(n)-spherical function on a Grassmannian is this symmetrisation.
    """
    if p.rs.kind != "D":
        return np.real(p(t))
    t = np.asarray(t, dtype=float)
    return np.real(0.5 * (p.to_laurent()(t) + p.to_laurent()(flip_last(t))))


def value_at_half_pi(rs: RootSystemBC, m: Sequence[int], polynomial: SymTrigPoly | None = None):
    """phi_m(pi/2, ..., pi/2), exactly.

    For types C and D every weight in the support of phi_m has coordinate
    sum congruent to |m| mod 4, so the value is i^|m|; for even weights
    this is (-1)^(|m|/2).  Other types evaluate the exact polynomial.
    """
    m = check_weight(rs, m)
    if rs.kind in ("C", "D") and polynomial is None:
        v = i_power(sum(m))
    else:
        p = polynomial if polynomial is not None else jacobi_polynomial(rs, m)
        v = p.to_laurent().value_at_quarter_points((1,) * rs.rank)
    return v.re if v.im == 0 else v


def value_at_zero(p: SymTrigPoly) -> Fraction:
    return sum((c * len(weyl_orbit(p.rs, lam)) for lam, c in p.coeffs.items()), Fraction(0))


# ------------------------------------------------------ quadrature route


def _candidate_weights(rs: RootSystemBC, m: tuple) -> list:
    """Dominant weights lam with ||lam||_1, ||lam||_inf bounded by m and lam <=_lex m.

    This set is closed under the dominance order and contains the support
    of phi_m, which is all the Gram-Schmidt route needs.
    """
    r = rs.rank
    l1, linf = sum(abs(x) for x in m), max(abs(x) for x in m)
    parity = m[0] % 2
    vals = range(-linf, linf + 1)
    out = set()

    def rec(prefix, budget):
        if len(prefix) == r:
            lam = tuple(prefix)
            if dominant_rep(rs, lam) == lam and lam <= m:
                out.add(lam)
            return
        for x in vals:
            if x % 2 != parity or abs(x) > budget:
                continue
            if prefix and abs(x) > prefix[-1]:
                continue
            rec(prefix + [x], budget - abs(x))

    rec([], l1)
    return sorted(out)


def _orbit_values(rs, lam, t):
    v = orbit_sum(rs, lam)(t)
    return v


def jacobi_gram_schmidt(rs: RootSystemBC, m: Sequence[int], order: int = 40) -> dict:
    """phi_m by orthogonalising orbit sums under the Jacobi measure.

    Returns {lam: float coefficient} normalised by phi_m(0) = 1.  Purely
    numerical; used to cross-check :func:`jacobi_polynomial`.
    """
    m = check_weight(rs, m)
    weights = _candidate_weights(rs, m)
    r = rs.rank
    d_sym = rs.kind == "D"
    from .quadrature import chamber_rule

    t, w = chamber_rule(r, order)
    pts = [t, flip_last(t)] if d_sym else [t]
    vals = [np.array([_orbit_values(rs, lam, p) for lam in weights]) for p in pts]
    dens = [measure_density(rs, p) for p in pts]
    gram = sum((v * (w * d)) @ v.conj().T for v, d in zip(vals, dens)) / len(pts)
    idx = weights.index(m)
    lower = list(range(idx))
    coeffs = np.zeros(len(weights), dtype=complex)
    coeffs[idx] = 1.0
    if lower:
        g_ll = gram[np.ix_(lower, lower)]
        g_lm = gram[lower, idx]
        coeffs[lower] = -np.linalg.solve(g_ll, g_lm)
    sizes = np.array([len(weyl_orbit(rs, lam)) for lam in weights])
    coeffs = coeffs / np.dot(coeffs, sizes)
    return {lam: float(c.real) for lam, c in zip(weights, coeffs) if abs(c) > 1e-13}


def gram_check(rs: RootSystemBC, degree_bound: int, order: int = 40) -> float:
    """max |<phi_l, phi_m>| / sqrt(<phi_l,phi_l><phi_m,phi_m>) over l != m, |l|,|m| <= bound."""
    weights = [m for m in even_dominant_weights(rs.rank, degree_bound)]
    polys = [jacobi_polynomial(rs, m) for m in weights]
    t, w = _rule(rs.rank, order)
    d_sym = rs.kind == "D"
    pts = [t, flip_last(t)] if d_sym else [t]
    gram = 0
    for p in pts:
        vals = np.array([q.to_laurent()(p) for q in polys])
        gram = gram + (vals * (w * measure_density(rs, p))) @ vals.conj().T
    gram = gram / len(pts)
    diag = np.sqrt(np.abs(np.diag(gram)))
    normed = np.abs(gram) / np.outer(diag, diag)
    np.fill_diagonal(normed, 0.0)
    return float(normed.max()) if len(weights) > 1 else 0.0


def _rule(r, order):
    from .quadrature import chamber_rule

    return chamber_rule(r, order)
