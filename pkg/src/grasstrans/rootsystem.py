"""BC-type root systems, Weyl groups and the Jacobi measure on the torus.

Conventions used throughout the package:

* ``rank`` is r; coordinates are t = (t_1, ..., t_r).
* roots +-e_j +- e_k (j < k) carry multiplicity ``a``;
  roots +-e_j carry ``mult_short`` (written 2b); roots +-2e_j carry ``iota``.
* the positive system is e_j - e_k, e_j + e_k (j < k), e_j, 2e_j, so the
  dominant chamber is t_1 >= t_2 >= ... >= t_r >= 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Iterator, Sequence

import numpy as np

FIELD_DIM = {"R": 1, "C": 2, "H": 4}

# Weyl group elements are (perm, signs) with (w t)_i = signs[i] * t[perm[i]].
WeylElement = tuple[tuple[int, ...], tuple[int, ...]]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12)
    return Fraction(x)


@dataclass(frozen=True)
class RootSystemBC:
    """Multiplicity data of a BC_r root system.

    ``mult_short`` is the multiplicity 2b of the roots +-e_j (so b may be a
    half-integer), ``iota`` the multiplicity of +-2e_j.
    """

    rank: int
    a: Fraction
    mult_short: Fraction
    iota: Fraction

    def __post_init__(self):
        if int(self.rank) != self.rank or self.rank < 1:
            raise ValueError(f"rank must be a positive integer, got {self.rank!r}")
        for name in ("a", "mult_short", "iota"):
            v = _frac(getattr(self, name))
            if v < 0:
                raise ValueError(f"multiplicity {name} must be non-negative, got {v}")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "rank", int(self.rank))

    @property
    def b(self) -> Fraction:
        return self.mult_short / 2

    @property
    def kind(self) -> str:
        """One of 'BC', 'B', 'C', 'D' according to which multiplicities vanish."""
        if self.mult_short == 0 and self.iota == 0:
            return "D"
        if self.mult_short == 0:
            return "C"
        if self.iota == 0:
            return "B"
        return "BC"

    @property
    def odd_weights_allowed(self) -> bool:
        # with iota = 0 the weight lattice also contains the all-odd vectors
        return self.iota == 0

    def as_tuple(self) -> tuple:
        return (self.rank, self.a, self.mult_short, self.iota)

    def __str__(self) -> str:
        return f"BC{self.rank}(a={self.a}, 2b={self.mult_short}, iota={self.iota})"


def root_system(rank: int, a=0, mult_short=0, iota=0) -> RootSystemBC:
    return RootSystemBC(rank, _frac(a), _frac(mult_short), _frac(iota))


def grassmannian_preset(field: str, n: int, r: int, convention: str = "geometric") -> RootSystemBC:
    """Root system of the Grassmannian G_{n,r}(K) of r-planes in K^n.

    With d = dim_R K the multiplicities are a = d, iota = d - 1 and
    2b = d (n - 2r).  ``convention="literal"`` instead uses b = d (n - 2r),
    i.e. a short-root multiplicity twice as large; it is kept only so the
    two conventions can be compared (Monte Carlo rejects it).
    """
    if field not in FIELD_DIM:
        raise ValueError(f"field must be one of R, C, H, got {field!r}")
    n, r = int(n), int(r)
    if r < 1:
        raise ValueError("r must be >= 1")
    if 2 * r > n:
        raise ValueError(
            f"need 2r <= n (got n={n}, r={r}); G_(n,r) is identified with "
            f"G_(n,n-r), so pass r = {n - r} instead"
        )
    d = FIELD_DIM[field]
    if convention == "geometric":
        short = d * (n - 2 * r)
    elif convention == "literal":
        short = 2 * d * (n - 2 * r)
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return root_system(r, d, short, d - 1)


def positive_roots(rs: RootSystemBC) -> list[tuple[tuple[int, ...], Fraction]]:
    """Positive roots with non-zero multiplicity, as (vector, multiplicity)."""
    r = rs.rank
    out = []
    for j in range(r):
        for k in range(j + 1, r):
            if rs.a:
                for s in (-1, 1):
                    v = [0] * r
                    v[j], v[k] = 1, s
                    out.append((tuple(v), rs.a))
        if rs.mult_short:
            v = [0] * r
            v[j] = 1
            out.append((tuple(v), rs.mult_short))
        if rs.iota:
            v = [0] * r
            v[j] = 2
            out.append((tuple(v), rs.iota))
    return out


def rho(rs: RootSystemBC) -> tuple[Fraction, ...]:
    """Half sum of positive roots weighted by multiplicity.

    rho_j = iota + b + a (r - j) for j = 1..r.
    """
    r = rs.rank
    return tuple(rs.iota + rs.b + rs.a * (r - 1 - j) for j in range(r))


def rho_from_roots(rs: RootSystemBC) -> tuple[Fraction, ...]:
    """Same as :func:`rho` but summed root by root (used as a cross-check)."""
    acc = [Fraction(0)] * rs.rank
    for v, m in positive_roots(rs):
        for i, x in enumerate(v):
            acc[i] += m * x
    return tuple(x / 2 for x in acc)


def weyl_group_order(rs: RootSystemBC) -> int:
    r = rs.rank
    fact = 1
    for i in range(2, r + 1):
        fact *= i
    if rs.kind == "D":
        return fact * 2 ** (r - 1)
    return fact * 2**r


def weyl_group(rs: RootSystemBC) -> Iterator[WeylElement]:
    """Signed permutations; only even sign changes for type D."""
    r = rs.rank
    even_only = rs.kind == "D"
    for perm in permutations(range(r)):
        for signs in product((1, -1), repeat=r):
            if even_only and signs.count(-1) % 2:
                continue
            yield perm, signs


def act(w: WeylElement, v: Sequence) -> tuple:
    perm, signs = w
    return tuple(s * v[p] for p, s in zip(perm, signs))


def dominant_rep(rs: RootSystemBC, lam: Sequence[int]) -> tuple[int, ...]:
    """Representative of the W-orbit of ``lam`` in the dominant chamber.

    For type D the last coordinate keeps the sign parity of the orbit.
    """
    neg = sum(1 for x in lam if x < 0)
    rep = sorted((abs(int(x)) for x in lam), reverse=True)
    if rs.kind == "D" and neg % 2 and rep[-1] != 0:
        rep[-1] = -rep[-1]
    return tuple(rep)


def weyl_orbit(rs: RootSystemBC, lam: Sequence[int]) -> list[tuple[int, ...]]:
    return sorted({act(w, lam) for w in weyl_group(rs)})


def is_dominant(rs: RootSystemBC, lam: Sequence[int]) -> bool:
    return tuple(lam) == dominant_rep(rs, lam)


def check_weight(rs: RootSystemBC, m: Sequence[int], even: bool = False) -> tuple[int, ...]:
    """Validate a weight: integer parts, right length, inside the lattice.

    The lattice is (2Z)^r when iota > 0 and 2Z^r union (1+2Z)^r otherwise.
    ``even=True`` demands even parts regardless (needed on Grassmannians).
    """
    m = tuple(m)
    if len(m) < rs.rank:
        m = m + (0,) * (rs.rank - len(m))
    if len(m) != rs.rank:
        raise ValueError(f"weight {m} has more than {rs.rank} parts")
    if any(int(x) != x for x in m):
        raise ValueError(f"weight {m} has non-integer parts")
    m = tuple(int(x) for x in m)
    all_even = all(x % 2 == 0 for x in m)
    all_odd = all(x % 2 == 1 for x in m)
    if even or not rs.odd_weights_allowed:
        if not all_even:
            raise ValueError(f"weight {m} must have even parts for {rs}")
    elif not (all_even or all_odd):
        raise ValueError(f"weight {m} must have parts of equal parity for {rs}")
    return m


def even_dominant_weights(r: int, degree: int, max_part: int | None = None) -> list[tuple[int, ...]]:
    """Even partitions m_1 >= ... >= m_r >= 0 with |m| <= degree, sorted."""
    out = []

    def rec(prefix, remaining, cap):
        if len(prefix) == r:
            out.append(tuple(prefix))
            return
        for x in range(0, min(cap, remaining) + 1, 2):
            rec(prefix + [x], remaining - x, x)

    cap = degree if max_part is None else min(degree, max_part)
    rec([], degree, cap - cap % 2)
    return sorted(out, key=lambda m: (sum(m), m))


def measure_density(rs: RootSystemBC, t) -> np.ndarray:
    """Density of the Jacobi measure at t (array of shape (..., r))."""
    t = np.asarray(t, dtype=float)
    r = rs.rank
    if t.shape[-1] != r:
        raise ValueError(f"expected last axis of length {r}")
    a, b2, io = float(rs.a), float(rs.mult_short), float(rs.iota)
    dens = np.ones(t.shape[:-1])
    for j in range(r):
        tj = t[..., j]
        if b2:
            dens = dens * np.abs(2 * np.sin(tj)) ** b2
        if io:
            dens = dens * np.abs(2 * np.sin(2 * tj)) ** io
        if a:
            for k in range(j + 1, r):
                tk = t[..., k]
                dens = dens * (np.abs(2 * np.sin(tj - tk)) * np.abs(2 * np.sin(tj + tk))) ** a
    return dens


def is_generic(t, tol: float = 1e-9) -> bool:
    """True when t avoids all reflection hyperplanes of the affine group.

    That is, t_j is not in (pi/2)Z and t_j +- t_k is not in pi Z.
    """
    t = np.asarray(t, dtype=float)

    def near(x, period):
        y = np.mod(x, period)
        return min(y, period - y) < tol

    r = len(t)
    for j in range(r):
        if near(t[j], np.pi / 2):
            return False
        for k in range(j + 1, r):
            if near(t[j] - t[k], np.pi) or near(t[j] + t[k], np.pi):
                return False
    return True
