"""Spherical transforms of |Cos|^{2nu} and |Sin|^{2nu} and derived spectra.

For a dominant even weight m with k_j = m_j / 2 put

    x_j = nu + 1 + (a/2)(j-1),     y_j = nu + 1 + iota + b + a(r-1) - (a/2)(j-1).

Then

    c_nu(m) / N_nu  = prod_j (x_j - k_j)_{k_j} / (y_j)_{k_j},
    s_nu(m) / N'_nu = phi_m(pi/2, ..., pi/2) * prod_j (x_j - k_j)_{k_j} / (y_j)_{k_j},

where N_nu, N'_nu are the transforms at m = 0 (Selberg-type integrals over
[0, pi]^r).  Ratios are exact Fractions whenever nu and the multiplicities
are rational.  The closed forms are checked against quadrature
(:func:`quadrature_symbol`) and Monte Carlo on the Grassmannians.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .jacobi import evaluate_grassmannian, jacobi_polynomial, value_at_half_pi
from .quadrature import checked_box_integral
from .rootsystem import (
    FIELD_DIM,
    RootSystemBC,
    check_weight,
    dominant_rep,
    even_dominant_weights,
    grassmannian_preset,
    measure_density,
)

Number = int | float | Fraction


class QuadratureWarning(RuntimeWarning):
    pass


def as_number(x) -> Number:
    """Fraction when x is (exactly) a modest rational, float otherwise."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    f = Fraction(float(x)).limit_denominator(10**6)
    return f if float(f) == float(x) else float(x)


def pochhammer(x, k: int):
    out = Fraction(1) if isinstance(x, Fraction) else 1.0
    for i in range(k):
        out *= x + i
    return out


def _is_nonpos_int(x) -> bool:
    if isinstance(x, Fraction):
        return x.denominator == 1 and x <= 0
    return float(x) <= 0 and float(x) == math.floor(float(x))


def _log_gamma(x) -> tuple[float, int, bool]:
    """(log|Gamma(x)|, sign, pole)."""
    if _is_nonpos_int(x):
        return math.inf, 0, True
    xf = float(x)
    sign = 1
    if xf < 0:
        sign = -1 if math.ceil(-xf) % 2 else 1
    return math.lgamma(xf), sign, False


def gindikin_gamma(a, r: int, alpha) -> tuple[float, int, bool]:
    """Gamma_a(alpha) = prod_{j=1}^r Gamma(alpha - (a/2)(j-1)).

    Returns (log|Gamma_a|, sign, pole); pole is True if some argument is a
    non-positive integer.
    """
    a = as_number(a)
    alpha = as_number(alpha)
    total, sign = 0.0, 1
    for j in range(r):
        lg, s, pole = _log_gamma(alpha - a * j / 2)
        if pole:
            return math.inf, 0, True
        total += lg
        sign *= s
    return total, sign, False


def _selberg_prefactor_log(rs: RootSystemBC) -> float:
    # 2^{a r(r-1) + 2rb + 2r iota} * prod_j Gamma(1 + j a/2) / Gamma(1 + a/2)
    r, a = rs.rank, rs.a
    e = a * r * (r - 1) + r * rs.mult_short + 2 * r * rs.iota
    out = float(e) * math.log(2.0)
    g = float(a) / 2
    for j in range(1, r + 1):
        out += math.lgamma(1 + j * g) - math.lgamma(1 + g)
    return out


def _norm(rs: RootSystemBC, nu, kind: str) -> tuple[float, int, bool]:
    r, a, b, io = rs.rank, rs.a, rs.b, rs.iota
    nu = as_number(nu)
    half = a * (r - 1) / 2 + (io - 1) / 2
    if kind == "cos":
        first, second = 1 + b + half, nu + 1 + half
    else:
        first, second = 1 + half, nu + 1 + b + half
    den = nu + 1 + b + io + a * (r - 1)
    l1, s1, p1 = gindikin_gamma(a, r, first)
    l2, s2, p2 = gindikin_gamma(a, r, second)
    l3, s3, p3 = gindikin_gamma(a, r, den)
    if p1 or p2:
        return math.inf, s1 * s2 * s3, True
    if p3:
        return -math.inf, 0, False
    return _selberg_prefactor_log(rs) + l1 + l2 - l3, s1 * s2 * s3, False


def norm_const_cos(rs: RootSystemBC, nu) -> float:
    """N_nu = int_{[0,pi]^r} |Cos t|^{2nu} dmu(t)."""
    lg, s, pole = _norm(rs, nu, "cos")
    if pole:
        return math.copysign(math.inf, s or 1)
    return s * math.exp(lg)


def norm_const_sin(rs: RootSystemBC, nu) -> float:
    """N'_nu = int_{[0,pi]^r} |Sin t|^{2nu} dmu(t) (meromorphic in nu)."""
    lg, s, pole = _norm(rs, nu, "sin")
    if pole:
        return math.copysign(math.inf, s or 1)
    return s * math.exp(lg)


@dataclass
class PochhammerFactor:
    j: int
    x: Number
    k: int
    role: str  # "num" or "den"

    @property
    def value(self):
        return pochhammer(self.x, self.k)

    @property
    def is_zero(self) -> bool:
        if self.k == 0:
            return False
        return _is_nonpos_int(self.x) and self.x > -self.k

    def describe(self) -> str:
        return f"j={self.j}: ({_fmt(self.x)})_{self.k}"


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return repr(float(x))


@dataclass
class SpectralSymbol:
    """A spherical-transform eigenvalue together with its exact structure."""

    kind: str
    rs: RootSystemBC
    nu: Number
    m: tuple
    norm: float
    ratio: Number  # symbol / norm, exact when possible
    factors: list = field(default_factory=list)

    @property
    def value(self) -> float:
        if self.is_exact_zero:
            return 0.0
        return float(self.norm) * float(self.ratio)

    @property
    def zero_factors(self) -> list:
        return [f for f in self.factors if f.role == "num" and f.is_zero]

    @property
    def is_exact_zero(self) -> bool:
        return bool(self.zero_factors)

    @property
    def zero_order(self) -> int:
        return len(self.zero_factors)

    @property
    def zero_witness(self) -> str | None:
        z = self.zero_factors
        return z[0].describe() if z else None

    def __float__(self):
        return self.value


def _validate(rs: RootSystemBC, nu, m):
    nu = as_number(nu)
    if nu < 0:
        raise ValueError(f"nu must be >= 0, got {nu}")
    m = check_weight(rs, m, even=True)
    if any(x < 0 for x in m) or dominant_rep(rs, m) != m:
        raise ValueError(f"weight {m} must be dominant with non-negative parts")
    return nu, m


def _product(rs: RootSystemBC, nu, m) -> tuple[Number, list]:
    r, a, b, io = rs.rank, rs.a, rs.b, rs.iota
    ratio = Fraction(1) if isinstance(nu, Fraction) else 1.0
    factors = []
    for j in range(1, r + 1):
        k = m[j - 1] // 2
        x = nu + 1 + a * (j - 1) / 2
        y = nu + 1 + io + b + a * (r - 1) - a * (j - 1) / 2
        fn = PochhammerFactor(j, x - k, k, "num")
        fd = PochhammerFactor(j, y, k, "den")
        factors += [fn, fd]
        ratio *= fn.value
        ratio /= fd.value
    return ratio, factors


def cosine_symbol(rs: RootSystemBC, nu, m: Sequence[int]) -> SpectralSymbol:
    nu, m = _validate(rs, nu, m)
    ratio, factors = _product(rs, nu, m)
    return SpectralSymbol("cosine", rs, nu, m, norm_const_cos(rs, nu), ratio, factors)


def sine_symbol(rs: RootSystemBC, nu, m: Sequence[int]) -> SpectralSymbol:
    nu, m = _validate(rs, nu, m)
    ratio, factors = _product(rs, nu, m)
    ratio = ratio * value_at_half_pi(rs, m)
    return SpectralSymbol("sine", rs, nu, m, norm_const_sin(rs, nu), ratio, factors)


def sine_symbol_specialized(rs: RootSystemBC, nu, m: Sequence[int]) -> Number:
    """Type C/D form of s_nu(m)/N'_nu: prod (-nu - (a/2)(j-1))_{k_j} / (y_j)_{k_j}."""
    if rs.kind not in ("C", "D"):
        raise ValueError("specialised sine formula needs 2b = 0")
    nu, m = _validate(rs, nu, m)
    r, a, b, io = rs.rank, rs.a, rs.b, rs.iota
    out = Fraction(1) if isinstance(nu, Fraction) else 1.0
    for j in range(1, r + 1):
        k = m[j - 1] // 2
        out *= pochhammer(-nu - a * (j - 1) / 2, k)
        out /= pochhammer(nu + 1 + io + b + a * (r - 1) - a * (j - 1) / 2, k)
    return out


def nu_recursion_factor(rs: RootSystemBC, nu, m: Sequence[int]) -> Number:
    """Factor F with c_nu(m)/N_nu = F * c_{nu+1}(m)/N_{nu+1}."""
    nu, m = _validate(rs, nu, m)
    r, a, b, io = rs.rank, rs.a, rs.b, rs.iota
    out = Fraction(1) if isinstance(nu, Fraction) else 1.0
    for j in range(1, r + 1):
        k = Fraction(m[j - 1], 2)
        out *= 1 - k / (nu + 1 + a * (j - 1) / 2)
        out *= 1 + k / (nu + 1 + b + io + a * (r - 1) - a * (j - 1) / 2)
    return out


# -------------------------------------------------------------- quadrature


def quadrature_symbol(rs: RootSystemBC, nu, kind: str, m: Sequence[int], order: int = 48, rtol: float = 1e-10) -> float:
    """Spherical transform by tensor Gauss-Legendre on the Weyl chamber.

    Warns with :class:`QuadratureWarning` if doubling the resolution by half
    moves the result by more than ``rtol`` relative to the transform of
    |kernel| (the scale of the integral).
    """
    m = check_weight(rs, m, even=True)
    if kind not in ("cos", "sin", "cosine", "sine"):
        raise ValueError(f"unknown kind {kind!r}")
    nu_f = float(nu)
    trig = np.cos if kind.startswith("cos") else np.sin
    phi = jacobi_polynomial(rs, m)

    def kernel(t):
        return np.prod(np.abs(trig(t)) ** (2 * nu_f), axis=-1) * measure_density(rs, t)

    def integrand(t):
        return kernel(t) * evaluate_grassmannian(phi, t)

    scale, _ = checked_box_integral(kernel, rs.rank, order)
    val, gap = checked_box_integral(integrand, rs.rank, order, scale=scale)
    if gap > rtol:
        warnings.warn(f"quadrature order {order} may be too small (gap {gap:.2e})", QuadratureWarning)
    return float(val)


def folding_calibration(rs: RootSystemBC, order: int = 48) -> float:
    """Quadrature of the m=0, nu=0 transform divided by the closed form N_0."""
    return quadrature_symbol(rs, 0, "cos", (0,) * rs.rank, order) / norm_const_cos(rs, 0)


# -------------------------------------------------------------- Grassmannians


@dataclass
class Membership:
    in_L_rr: bool
    in_L_nu: bool

    @property
    def in_image_closure(self) -> bool:
        return self.in_L_rr and self.in_L_nu


def in_L_rr(r: int, r_prime: int, m: Sequence[int], inclusive: bool = False) -> bool:
    """m_j = 0 for all j > min(r, r') (or j >= min(r, r') with inclusive=True)."""
    lo = min(r, r_prime)
    start = lo - 1 if inclusive else lo
    return all(x == 0 for x in list(m)[start:])


def in_L_nu(field: str, n: int, r: int, nu, m: Sequence[int]) -> bool:
    """Non-vanishing condition on the cosine symbol of G_{n,r}(K).

    R: when nu is in Z/2, m_j/2 < nu + 1 + (j-1)/2 for every j for which the
    right-hand side is an integer.  C, H: when nu is an integer,
    m_j/2 < nu + 1 + (a/2)(j-1) for all j.
    """
    nu = as_number(nu)
    a = FIELD_DIM[field]
    m = list(m)
    if field == "R":
        if not isinstance(nu, Fraction) or (2 * nu).denominator != 1:
            return True
        for j, mj in enumerate(m, start=1):
            bound = nu + 1 + Fraction(j - 1, 2)
            if bound.denominator == 1 and not Fraction(mj, 2) < bound:
                return False
        return True
    if not isinstance(nu, Fraction) or nu.denominator != 1:
        return True
    return all(Fraction(mj, 2) < nu + 1 + Fraction(a * (j - 1), 2) for j, mj in enumerate(m, start=1))


def image_membership(field: str, n: int, r: int, r_prime: int, nu, m: Sequence[int]) -> Membership:
    return Membership(in_L_rr(r, r_prime, m), in_L_nu(field, n, r, nu, m))


def cosine_zero_set_agrees(field: str, n: int, r: int, nu, m: Sequence[int]) -> bool:
    """Closed-form zero of c_nu(m) on G_{n,r} iff m is outside L_nu."""
    sym = cosine_symbol(grassmannian_preset(field, n, r), nu, m)
    return sym.is_exact_zero == (not in_L_nu(field, n, r, nu, m))


def composite_symbol(
    radon_eigenvalue: float, rs_r: RootSystemBC, rs_rprime: RootSystemBC, nu, m: Sequence[int], kind: str = "cos"
) -> float:
    """Eigenvalue of the composite transform G_{n,r} -> G_{n,r'}.

    The Radon eigenvalue is supplied by the caller; the result is that value
    times the two cosine (or sine) symbols of ranks r and r'.
    """
    if kind not in ("cos", "sin"):
        raise ValueError(f"unknown kind {kind!r}")
    symbol = cosine_symbol if kind == "cos" else sine_symbol
    m = tuple(m)
    if any(x for x in m[min(rs_r.rank, rs_rprime.rank):]):
        return 0.0

    def pad(rank):
        return m[:rank] + (0,) * max(0, rank - len(m))

    return radon_eigenvalue * symbol(rs_r, nu, pad(rs_r.rank)).value * symbol(rs_rprime, nu, pad(rs_rprime.rank)).value


# ----------------------------------------------------------- Knapp-Stein


def knapp_stein_nu(field: str, r: int, t_param) -> Number:
    """nu = -(a/2)(r - 2t), the kernel exponent of J_t as a sine transform."""
    t = as_number(t_param)
    half = Fraction(FIELD_DIM[field], 2) if isinstance(t, Fraction) else FIELD_DIM[field] / 2
    return -half * (r - 2 * t)


def knapp_stein_ratio(field: str, r: int, t_param, m: Sequence[int]) -> tuple[Number, list]:
    """prod_j ((a/2)(r+1-j-2t))_{k_j} / ((a/2)(r+1-j+2t))_{k_j} and its factors."""
    a = FIELD_DIM[field]
    t = as_number(t_param)
    half = Fraction(a, 2) if isinstance(t, Fraction) else a / 2
    m = tuple(m) + (0,) * (r - len(m))
    ratio = Fraction(1) if isinstance(t, Fraction) else 1.0
    factors = []
    for j in range(1, r + 1):
        k = m[j - 1] // 2
        fn = PochhammerFactor(j, half * (r + 1 - j - 2 * t), k, "num")
        fd = PochhammerFactor(j, half * (r + 1 - j + 2 * t), k, "den")
        factors += [fn, fd]
        ratio *= fn.value
        ratio /= fd.value
    return ratio, factors


def knapp_stein_symbol(field: str, r: int, t_param, m: Sequence[int]) -> SpectralSymbol:
    """Eigenvalue of the Knapp-Stein operator J_t on G_{2r,r}(K) at weight m."""
    rs = grassmannian_preset(field, 2 * r, r)
    m = check_weight(rs, m, even=True)
    nu = knapp_stein_nu(field, r, t_param)
    ratio, factors = knapp_stein_ratio(field, r, t_param, m)
    return SpectralSymbol("knapp-stein", rs, nu, m, norm_const_sin(rs, nu), ratio, factors)


@dataclass
class SteinReport:
    field: str
    r: int
    t: Number
    nu: Number
    degree_bound: int
    min_ratio: float
    argmin: tuple
    witness: tuple | None
    in_range: bool  # 0 < t < 1/2

    @property
    def all_positive(self) -> bool:
        return self.witness is None

    @property
    def passed(self) -> bool | None:
        """True/False inside 0 < t < 1/2, None (report only) elsewhere."""
        return self.all_positive if self.in_range else None


def stein_positivity_scan(field: str, r: int, t_param, degree_bound: int) -> SteinReport:
    """Signs of the normalised Knapp-Stein eigenvalues J_t / N'_nu for |m| <= bound.

    The normalised ratio is used because N'_nu itself changes sign for nu < 0.
    """
    t = as_number(t_param)
    best, arg, witness = math.inf, None, None
    for m in even_dominant_weights(r, degree_bound):
        ratio, _ = knapp_stein_ratio(field, r, t, m)
        v = float(ratio)
        if v < best:
            best, arg = v, m
        if witness is None and not ratio > 0:
            witness = m
    return SteinReport(field, r, t, knapp_stein_nu(field, r, t), degree_bound, best, arg, witness, 0 < t < Fraction(1, 2))


# ----------------------------------------------------------- branching


def branching_list(field: str, alpha: int, r: int, degree_bound: int) -> list[tuple]:
    """Even weights |m| <= bound in L_nu for G_{2r,r}(K), nu = alpha/2 (R) or alpha (H)."""
    if field not in ("R", "H"):
        raise ValueError("branching is defined for K = R or H")
    nu = Fraction(alpha, 2) if field == "R" else Fraction(alpha)
    return [m for m in even_dominant_weights(r, degree_bound) if in_L_nu(field, 2 * r, r, nu, m)]
