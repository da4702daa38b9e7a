"""Trigonometric Cherednik operators for BC_r and the Bernstein-Sato identities.

The operator is

    D_j = d/dt_j + sum_{alpha>0} i m_alpha alpha_j (1 - e^{-i alpha.t})^{-1} (1 - s_alpha)
          - i rho_j

with the reflection terms written out for the BC_r positive system (the
e_k - e_j terms for k < j enter with a minus sign).  On exponentials
D_j = i T_j, where T_j maps e^{i lam.t} to a finite sum with rational
coefficients; :func:`apply_T` computes T_j exactly by telescoping the
divided difference (e^lam - e^{s lam}) / (1 - e^{-beta}).

Two evaluation routes are provided: the exact algebraic one on
:class:`LaurentTrigPoly` and a pointwise one (:func:`pointwise_D`) which
applies the displayed formula to any function given by values and partial
derivatives.  The pointwise route drives the Bernstein-Sato checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .rootsystem import RootSystemBC, is_generic, rho
from .trigpoly import I, LaurentTrigPoly


def _swap(j, k):
    def s(v):
        v = list(v)
        v[j], v[k] = v[k], v[j]
        return tuple(v)

    return s


def _neg_swap(j, k):
    def s(v):
        v = list(v)
        v[j], v[k] = -v[k], -v[j]
        return tuple(v)

    return s


def _flip(j):
    def s(v):
        v = list(v)
        v[j] = -v[j]
        return tuple(v)

    return s


@lru_cache(maxsize=None)
def reflection_terms(rs: RootSystemBC, j: int) -> tuple:
    """(coefficient, beta, reflection) triples of D_j.

    Each reflection term of D_j is  i*coef * (1 - e^{-i beta.t})^{-1} (f - f o s).
    """
    r = rs.rank
    out = []

    def vec(entries):
        v = [0] * r
        for idx, val in entries:
            v[idx] += val
        return tuple(v)

    for k in range(r):
        if k == j or not rs.a:
            continue
        if k < j:
            out.append((-rs.a, vec([(k, 2), (j, -2)]), _swap(j, k)))
        else:
            out.append((rs.a, vec([(j, 2), (k, -2)]), _swap(j, k)))
        out.append((rs.a, vec([(j, 2), (k, 2)]), _neg_swap(j, k)))
    if rs.iota:
        out.append((2 * rs.iota, vec([(j, 4)]), _flip(j)))
    if rs.mult_short:
        out.append((rs.mult_short, vec([(j, 2)]), _flip(j)))
    return tuple(out)


@lru_cache(maxsize=200_000)
def _T_monomial(rs: RootSystemBC, j: int, lam: tuple) -> tuple:
    r = rs.rank
    out: dict = {}
    diag = lam[j] - rho(rs)[j]
    if diag:
        out[lam] = diag
    for coef, beta, s in reflection_terms(rs, j):
        sl = s(lam)
        idx = next(i for i in range(r) if beta[i])
        diff = lam[idx] - sl[idx]
        if diff % beta[idx]:
            raise ValueError(f"weight {lam} is outside the lattice of {rs}")
        k = diff // beta[idx]
        if any(lam[i] - sl[i] != k * beta[i] for i in range(r)):
            raise ValueError(f"weight {lam} is outside the lattice of {rs}")
        if k > 0:
            for l in range(k):
                mu = tuple(x - l * y for x, y in zip(lam, beta))
                out[mu] = out.get(mu, 0) + coef
        elif k < 0:
            for l in range(1, -k + 1):
                mu = tuple(x + l * y for x, y in zip(lam, beta))
                out[mu] = out.get(mu, 0) - coef
    return tuple((mu, c) for mu, c in out.items() if c)


def apply_T(rs: RootSystemBC, j: int, p: LaurentTrigPoly) -> LaurentTrigPoly:
    """T_j = -i D_j, exact on Laurent polynomials (j is 0-based)."""
    if not 0 <= j < rs.rank:
        raise ValueError(f"index j={j} out of range for rank {rs.rank}")
    out: dict = {}
    for lam, c in p.coeffs.items():
        for mu, d in _T_monomial(rs, j, lam):
            out[mu] = out.get(mu, 0) + d * c
    return LaurentTrigPoly(p.rank, out)


def apply_D(rs: RootSystemBC, j: int, p: LaurentTrigPoly) -> LaurentTrigPoly:
    """Cherednik operator D_j; coefficients come out Gaussian rational."""
    return apply_T(rs, j, p).scale(I)


def apply_M(rs: RootSystemBC, delta, p: LaurentTrigPoly) -> LaurentTrigPoly:
    """M_delta = prod_j ((delta + rho_1)^2 + D_j^2) = prod_j (c^2 - T_j^2)."""
    c = delta + rho(rs)[0]
    out = p
    for j in range(rs.rank):
        tt = apply_T(rs, j, apply_T(rs, j, out))
        out = out.scale(c * c) - tt
    return out


def power_sum_operator(rs: RootSystemBC, p: LaurentTrigPoly, k: int = 1) -> LaurentTrigPoly:
    """sum_j T_j^(2k); k = 1 is the (shifted) Laplace-type operator."""
    total = LaurentTrigPoly(p.rank, {})
    for j in range(rs.rank):
        q = p
        for _ in range(2 * k):
            q = apply_T(rs, j, q)
        total = total + q
    return total


def eigenvalue_of_M(rs: RootSystemBC, nu, m: Sequence[int]):
    """Eigenvalue of M_{2nu+2} on phi_m: prod_j ((2nu+2+rho_1)^2 - (m_j+rho_j)^2)."""
    rh = rho(rs)
    c = 2 * nu + 2 + rh[0]
    out = 1
    for mj, rj in zip(m, rh):
        out *= c * c - (mj + rj) ** 2
    return out


# ---------------------------------------------------------------- pointwise


def pointwise_D(
    rs: RootSystemBC,
    j: int,
    f: Callable[[np.ndarray], complex],
    df: Callable[[int, np.ndarray], complex],
    t,
) -> complex:
    """Evaluate (D_j f)(t) straight from the defining formula.

    ``f`` must accept arbitrary points (reflected ones included) and
    ``df(j, t)`` must return the partial derivative in t_j.
    """
    t = np.asarray(t, dtype=float)
    ft = complex(f(t))
    val = complex(df(j, t))
    for coef, beta, s in reflection_terms(rs, j):
        st = np.array(s(tuple(t)))
        bt = float(np.dot(beta, t))
        val += 1j * float(coef) / (1 - np.exp(-1j * bt)) * (ft - complex(f(st)))
    val -= 1j * float(rho(rs)[j]) * ft
    return val


@dataclass(frozen=True)
class ClosedFormFactor:
    """scale * prod_j |cos t_j|^p_j sgn(cos t_j)^u_j |sin t_j|^q_j sgn(sin t_j)^v_j e^{i kappa.t}.

    Closed under d/dt_j (a finite sum of such factors) and under evaluation
    at reflected points, which is all the Cherednik operators need.
    """

    cos_pow: tuple
    sin_pow: tuple
    kappa: tuple
    cos_sgn: tuple = None
    sin_sgn: tuple = None
    scale: complex = 1.0

    def __post_init__(self):
        r = len(self.cos_pow)
        if self.cos_sgn is None:
            object.__setattr__(self, "cos_sgn", (0,) * r)
        if self.sin_sgn is None:
            object.__setattr__(self, "sin_sgn", (0,) * r)

    @classmethod
    def cos_power(cls, r: int, delta) -> "ClosedFormFactor":
        return cls((float(delta),) * r, (0.0,) * r, (0.0,) * r)

    @classmethod
    def sin_power(cls, r: int, delta) -> "ClosedFormFactor":
        return cls((0.0,) * r, (float(delta),) * r, (0.0,) * r)

    def __call__(self, t) -> complex:
        t = np.asarray(t, dtype=float)
        c, s = np.cos(t), np.sin(t)
        val = self.scale * np.exp(1j * np.dot(self.kappa, t))
        for j in range(len(t)):
            if self.cos_pow[j] or self.cos_sgn[j] % 2:
                val *= abs(c[j]) ** self.cos_pow[j] * np.sign(c[j]) ** (self.cos_sgn[j] % 2)
            if self.sin_pow[j] or self.sin_sgn[j] % 2:
                val *= abs(s[j]) ** self.sin_pow[j] * np.sign(s[j]) ** (self.sin_sgn[j] % 2)
        return complex(val)

    def _bump(self, j, dp=0, du=0, dq=0, dv=0, scale=1.0):
        def upd(tup, idx, d):
            tup = list(tup)
            tup[idx] += d
            return tuple(tup)

        return replace(
            self,
            cos_pow=upd(self.cos_pow, j, dp),
            cos_sgn=upd(self.cos_sgn, j, du),
            sin_pow=upd(self.sin_pow, j, dq),
            sin_sgn=upd(self.sin_sgn, j, dv),
            scale=self.scale * scale,
        )

    def derivative(self, j: int) -> list["ClosedFormFactor"]:
        """d/dt_j as a list of factors (exponent bookkeeping only)."""
        terms = []
        p, q, k = self.cos_pow[j], self.sin_pow[j], self.kappa[j]
        if p:
            # d|cos|^p sgn(cos)^u = -p |cos|^(p-1) sgn(cos)^(u+1) |sin| sgn(sin)
            terms.append(self._bump(j, dp=-1, du=1, dq=1, dv=1, scale=-p))
        if q:
            terms.append(self._bump(j, dq=-1, dv=1, dp=1, du=1, scale=q))
        if k:
            terms.append(self._bump(j, scale=1j * k))
        return terms

    def partial(self, j: int, t) -> complex:
        return sum((g(t) for g in self.derivative(j)), 0j)

    def times_exp_over(self, j: int, sign: int, kind: str) -> "ClosedFormFactor":
        """Multiply by e^{sign*i t_j} / cos t_j  (kind='cos') or / sin t_j."""
        out = replace(self, kappa=tuple(x + (sign if i == j else 0) for i, x in enumerate(self.kappa)))
        if kind == "cos":
            return out._bump(j, dp=-1, du=1)
        return out._bump(j, dq=-1, dv=1)


def factor_D(rs: RootSystemBC, j: int, f: ClosedFormFactor, t) -> complex:
    return pointwise_D(rs, j, f, f.partial, t)


@dataclass
class ChainStep:
    index: int
    direction: str
    expected: complex
    measured: complex

    @property
    def rel_error(self) -> float:
        return abs(self.measured - self.expected) / abs(self.expected)


@dataclass
class ChainReport:
    kind: str
    delta: float
    steps: list = field(default_factory=list)
    constant: float = 0.0

    @property
    def product(self) -> complex:
        out = 1 + 0j
        for s in self.steps:
            out *= s.measured
        return out

    @property
    def residual(self) -> float:
        return abs(self.product - self.constant)


def _check_args(rs, delta, t):
    t = np.asarray(t, dtype=float)
    if t.shape != (rs.rank,):
        raise ValueError(f"t must have shape ({rs.rank},)")
    if not delta >= 2:
        raise ValueError(f"delta must be >= 2, got {delta}")
    if not is_generic(t, tol=1e-6):
        raise ValueError("t lies on (or too close to) a reflection hyperplane")
    return t


def bs_constant(rs: RootSystemBC, delta, kind: str = "cos"):
    """prod_j (delta + a(j-1)) (delta + iota - 1 [+ 2b] + a(r-j))."""
    r = rs.rank
    extra = rs.mult_short if kind == "sin" else 0
    out = 1
    for j in range(1, r + 1):
        out *= (delta + rs.a * (j - 1)) * (delta + rs.iota - 1 + extra + rs.a * (r - j))
    return out


def bs_chain(rs: RootSystemBC, delta, t, kind: str = "cos") -> ChainReport:
    """Factor M_delta into first-order steps and measure each one at t.

    Ascending steps apply (-i D_l + c), l = 1..r, and multiply the factor by
    e^{i t_l}/cos t_l (or /sin t_l); descending steps apply (i D_l + c),
    l = r..1, multiplying by e^{-i t_l}/cos t_l.  Each step's measured
    constant is (output at t) / (predicted factor at t).
    """
    t = _check_args(rs, delta, t)
    r = rs.rank
    delta_f = float(delta)
    c = delta_f + float(rho(rs)[0])
    a, io, b2 = float(rs.a), float(rs.iota), float(rs.mult_short)
    f = ClosedFormFactor.cos_power(r, delta_f) if kind == "cos" else ClosedFormFactor.sin_power(r, delta_f)
    rep = ChainReport(kind, delta_f, constant=float(bs_constant(rs, delta_f, kind)))
    for l in range(r):
        expected = delta_f + a * l
        if kind == "sin":
            expected = -1j * expected
        out = -1j * factor_D(rs, l, f, t) + c * f(t)
        f = f.times_exp_over(l, +1, kind)
        rep.steps.append(ChainStep(l, "up", expected, out / f(t)))
    for l in reversed(range(r)):
        expected = delta_f - 1 + io + a * (r - 1 - l)
        if kind == "sin":
            expected = 1j * (expected + b2)
        out = 1j * factor_D(rs, l, f, t) + c * f(t)
        f = f.times_exp_over(l, -1, kind)
        rep.steps.append(ChainStep(l, "down", expected, out / f(t)))
    return rep


def verify_bs_cos(rs: RootSystemBC, delta, t) -> float:
    """Residual |M_delta|Cos|^delta / |Cos|^(delta-2) - const| at a generic t."""
    return bs_chain(rs, delta, t, "cos").residual


def verify_bs_sin(rs: RootSystemBC, delta, t) -> float:
    return bs_chain(rs, delta, t, "sin").residual


def verify_factor_identities(rs: RootSystemBC, delta, j: int, t) -> dict:
    """Relative residuals of the cumulative factor identities up to index j.

    Keys: 'cos_up', 'cos_down', 'sin_up', 'sin_down'.  'up' covers the
    ascending steps 1..j, 'down' the descending steps r..j (j is 1-based).
    """
    r = rs.rank
    if not 1 <= j <= r:
        raise ValueError(f"j must be in 1..{r}")
    out = {}
    for kind in ("cos", "sin"):
        rep = bs_chain(rs, delta, t, kind)
        up = rep.steps[:r][:j]
        down = rep.steps[r:][: r - j + 1]
        for name, steps in (("up", up), ("down", down)):
            meas = np.prod([s.measured for s in steps])
            exp = np.prod([s.expected for s in steps])
            out[f"{kind}_{name}"] = float(abs(meas - exp) / abs(exp))
    return out


# ---------------------------------------------------------------- exact route


def _power_poly(r: int, k: int, kind: str) -> LaurentTrigPoly:
    """prod_j cos^(2k) t_j or prod_j sin^(2k) t_j as an exact Laurent polynomial."""
    from math import comb

    one = {}
    for i in range(2 * k + 1):
        c = Fraction(comb(2 * k, i), 4**k)
        if kind == "sin" and i % 2:
            c = -c
        if kind == "sin" and k % 2:
            c = -c
        one[2 * k - 2 * i] = c
    coeffs = {(): Fraction(1)}
    for _ in range(r):
        coeffs = {lam + (e,): c * d for lam, c in coeffs.items() for e, d in one.items()}
    return LaurentTrigPoly(r, coeffs)


def verify_bs_exact(rs: RootSystemBC, k: int, kind: str = "cos") -> bool:
    """Exact check of M_{2k} Cos^{2k} = const * Cos^{2k-2} for an integer k >= 1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    lhs = apply_M(rs, 2 * k, _power_poly(rs.rank, k, kind))
    rhs = _power_poly(rs.rank, k - 1, kind).scale(bs_constant(rs, 2 * k, kind))
    return lhs == rhs
