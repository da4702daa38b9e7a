"""Trigonometric (Laurent) polynomials on the torus with exact coefficients."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .rootsystem import RootSystemBC, root_system, weyl_orbit, dominant_rep


class GaussQ:
    """Gaussian rational re + i*im with Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(x):
        if isinstance(x, GaussQ):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussQ(x, 0)
        return NotImplemented

    def __add__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return complex(self) + o
        return GaussQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o2 = self._coerce(o)
        if o2 is NotImplemented:
            return complex(self) * o
        return GaussQ(self.re * o2.re - self.im * o2.im, self.re * o2.im + self.im * o2.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._coerce(o)
        d = o.re * o.re + o.im * o.im
        return self * GaussQ(o.re / d, -o.im / d)

    def __eq__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return complex(self) == o
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussQ({self.re}, {self.im})"

    def conjugate(self):
        return GaussQ(self.re, -self.im)


I = GaussQ(0, 1)


def i_power(k: int) -> GaussQ:
    return [GaussQ(1), GaussQ(0, 1), GaussQ(-1), GaussQ(0, -1)][k % 4]


@dataclass
class LaurentTrigPoly:
    """Finite sum  sum_lam c_lam exp(i <lam, t>)  over integer weights lam."""

    rank: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {tuple(int(x) for x in k): v for k, v in self.coeffs.items() if v}
        for k in self.coeffs:
            if len(k) != self.rank:
                raise ValueError(f"weight {k} does not have rank {self.rank}")

    @classmethod
    def monomial(cls, lam, c=Fraction(1)):
        return cls(len(lam), {tuple(lam): c})

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return LaurentTrigPoly(self.rank, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return LaurentTrigPoly(self.rank, {k: c * v for k, v in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, LaurentTrigPoly):
            return NotImplemented
        return self.rank == other.rank and self.coeffs == other.coeffs

    def is_zero(self) -> bool:
        return not self.coeffs

    def max_abs_coeff(self) -> float:
        return max((abs(complex(v)) for v in self.coeffs.values()), default=0.0)

    def support(self):
        return sorted(self.coeffs)

    def exponents(self) -> tuple[np.ndarray, np.ndarray]:
        keys = sorted(self.coeffs)
        lam = np.array(keys, dtype=float).reshape(len(keys), self.rank)
        c = np.array([complex(self.coeffs[k]) for k in keys], dtype=complex)
        return lam, c

    def __call__(self, t) -> np.ndarray:
        """Complex value at t, vectorised over leading axes of t."""
        t = np.asarray(t, dtype=float)
        lam, c = self.exponents()
        if len(c) == 0:
            return np.zeros(t.shape[:-1], dtype=complex)
        return np.exp(1j * (t @ lam.T)) @ c

    def value_at_quarter_points(self, k: Iterable[int]):
        """Exact value at t = (pi/2) k for an integer vector k."""
        k = tuple(k)
        total = GaussQ(0)
        for lam, c in self.coeffs.items():
            e = sum(x * y for x, y in zip(lam, k))
            total = total + i_power(e) * c
        return total


@dataclass
class SymTrigPoly:
    """W-invariant trigonometric polynomial stored on dominant orbit sums.

    ``coeffs`` maps a dominant weight lam to the coefficient of the orbit sum
    M_lam = sum over the W-orbit of exp(i <mu, t>).
    """

    rs: RootSystemBC
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {tuple(int(x) for x in k): v for k, v in self.coeffs.items() if v}
        self._laurent = None

    def to_laurent(self) -> LaurentTrigPoly:
        if self._laurent is None:
            out = {}
            for lam, c in self.coeffs.items():
                for mu in weyl_orbit(self.rs, lam):
                    out[mu] = out.get(mu, 0) + c
            self._laurent = LaurentTrigPoly(self.rs.rank, out)
        return self._laurent

    def leading_weight(self):
        return max(self.coeffs)

    def __call__(self, t):
        """Value at t; real-valued unless W lacks -1 (type D, odd rank)."""
        v = self.to_laurent()(t)
        if np.all(np.abs(v.imag) <= 1e-12 * np.maximum(1.0, np.abs(v.real))):
            return v.real
        return v

    def to_json(self) -> str:
        rs = self.rs

        def num(x):
            x = Fraction(x)
            return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

        terms = []
        for lam in sorted(self.coeffs, reverse=True):
            c = Fraction(self.coeffs[lam])
            terms.append({"lambda": list(lam), "num": c.numerator, "den": c.denominator})
        doc = {
            "rank": rs.rank,
            "mult": [num(rs.a), num(rs.mult_short), num(rs.iota)],
            "terms": terms,
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SymTrigPoly":
        doc = json.loads(text)
        a, b2, io = (Fraction(str(x)) for x in doc["mult"])
        rs = root_system(doc["rank"], a, b2, io)
        coeffs = {}
        for term in doc["terms"]:
            lam = tuple(term["lambda"])
            if dominant_rep(rs, lam) != lam:
                raise ValueError(f"term weight {lam} is not dominant")
            coeffs[lam] = Fraction(term["num"], term["den"])
        return cls(rs, coeffs)

    def __eq__(self, other):
        if not isinstance(other, SymTrigPoly):
            return NotImplemented
        return self.rs == other.rs and self.coeffs == other.coeffs


def orbit_coefficients(rs: RootSystemBC, p: LaurentTrigPoly) -> dict:
    """Coefficients on orbit sums of a W-invariant Laurent polynomial.

    Raises ValueError if p is not W-invariant.
    """
    out = {}
    for lam, c in p.coeffs.items():
        rep = dominant_rep(rs, lam)
        if rep in out:
            if out[rep] != c:
                raise ValueError(f"polynomial is not W-invariant at {lam}")
        else:
            out[rep] = c
    for rep, c in out.items():
        for mu in weyl_orbit(rs, rep):
            if p.coeffs.get(mu, 0) != c:
                raise ValueError(f"polynomial is not W-invariant at {mu}")
    return out
