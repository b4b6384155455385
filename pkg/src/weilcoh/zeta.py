"""Zeta functions of smooth projective varieties over F_q, in the variable ``t = q^-s``.

A zeta function is stored as

    Z(t) = P(t) / (E(t) * prod_j (1 - q^{w_j} t)^{m_j})

with integer polynomials ``P`` and ``E`` (coefficients in ascending order)
normalized so that ``P(0) = E(0) = 1``.  Everything is exact.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import InconsistentCounts, InvalidZeta

# polynomials are tuples of coefficients, constant term first


def poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_eval(p: Sequence, t) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * t + c
    return acc


def _trim(p: Sequence) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _divide_linear(p: Sequence, u) -> Optional[list]:
    """``p / (1 - u t)`` if exact, else ``None``."""
    p = _trim(p)
    if not p:
        return []
    # p = (1 - u t) r  means  r_k = p_k + u r_{k-1}
    r = []
    prev = 0
    for k in range(len(p) - 1):
        prev = p[k] + u * prev
        r.append(prev)
    if p[-1] + u * prev != 0:
        return None
    return r


def _strip_factor(p: Sequence, u) -> tuple:
    """Multiplicity of ``(1 - u t)`` in ``p`` and the cofactor."""
    p = _trim(p)
    k = 0
    while p:
        r = _divide_linear(p, u)
        if r is None:
            break
        p, k = r, k + 1
    return k, p


def series_inverse(p: Sequence, degree: int) -> list:
    """Power series ``1/p`` up to ``t^degree``; requires ``p(0) = 1``."""
    if p[0] != 1:
        raise InvalidZeta("series inverse needs constant term 1")
    out = [Fraction(1)]
    for k in range(1, degree + 1):
        s = sum((Fraction(p[j]) * out[k - j] for j in range(1, min(k, len(p) - 1) + 1)), Fraction(0))
        out.append(-s)
    return out


def _exp_from_counts(counts: Sequence[int]) -> list:
    """Coefficients of ``exp(sum N_m t^m / m)`` up to ``t^len(counts)``."""
    z = [Fraction(1)]
    for m in range(1, len(counts) + 1):
        z.append(sum((counts[k - 1] * z[m - k] for k in range(1, m + 1)), Fraction(0)) / m)
    return z


def _counts_from_series(z: Sequence, m_max: int) -> list:
    # m z_m = sum_{k=1}^m N_k z_{m-k}, solved for N_m
    counts = []
    for m in range(1, m_max + 1):
        rest = sum((counts[k - 1] * z[m - k] for k in range(1, m)), Fraction(0))
        counts.append(m * z[m] - rest)
    return counts


@dataclass(frozen=True)
class ZetaFunction:
    q: int
    numerator: tuple
    denominator: tuple = ((0, 1), (1, 1))   # pairs (w, m) for (1 - q^w t)^m
    extra: tuple = (1,)                     # extra integer polynomial factor of the denominator

    def __post_init__(self):
        if self.q < 2:
            raise InvalidZeta(f"q must be a prime power, got {self.q}")
        num = tuple(int(c) for c in _trim(self.numerator))
        extra = tuple(int(c) for c in _trim(self.extra))
        den = {}
        for w, m in self.denominator:
            if m < 0:
                raise InvalidZeta("denominator multiplicities must be non-negative")
            if m:
                den[int(w)] = den.get(int(w), 0) + int(m)
        if not num or num[0] != 1 or not extra or extra[0] != 1:
            raise InvalidZeta("Z(0) must be 1: numerator and extra factor need constant term 1")
        for w in den:
            u = Fraction(self.q) ** w
            if _divide_linear(num, u) is not None:
                raise InvalidZeta(f"numerator shares the factor (1 - q^{w} t) with the denominator")
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "extra", extra)
        object.__setattr__(self, "denominator", tuple(sorted(den.items())))

    def denominator_poly(self) -> list:
        p = list(self.extra)
        for w, m in self.denominator:
            u = Fraction(self.q) ** w
            for _ in range(m):
                p = poly_mul(p, [1, -u])
        return p

    def __call__(self, t) -> Fraction:
        t = Fraction(t)
        den = poly_eval(self.denominator_poly(), t)
        if den == 0:
            raise ZeroDivisionError(f"Z has a pole at t = {t}")
        return poly_eval(self.numerator, t) / den

    def series(self, degree: int) -> list:
        inv = series_inverse(self.denominator_poly(), degree)
        num = list(self.numerator) + [0] * (degree + 1)
        return [sum((num[j] * inv[k - j] for j in range(k + 1)), Fraction(0)) for k in range(degree + 1)]

    def counts(self, m_max: int) -> list:
        """``N_1, ..., N_{m_max}`` read off from ``log Z``."""
        return [int(c) if c.denominator == 1 else c for c in _counts_from_series(self.series(m_max), m_max)]


def zeta_point(q: int) -> ZetaFunction:
    return ZetaFunction(q, (1,), ((0, 1),))


def zeta_projective_line(q: int) -> ZetaFunction:
    return ZetaFunction(q, (1,), ((0, 1), (1, 1)))


def zeta_elliptic(q: int, a: int) -> ZetaFunction:
    """Elliptic curve with trace of Frobenius ``a``, so ``|E(F_q)| = q + 1 - a``."""
    return ZetaFunction(q, (1, -a, q), ((0, 1), (1, 1)))


def weil_bound_ok(q: int, g: int, coeffs: Sequence[int]) -> bool:
    """``|a_i| <= C(2g, i) q^(i/2)``, checked on squares so it stays exact."""
    return all(c * c <= math.comb(2 * g, i) ** 2 * q ** i for i, c in enumerate(coeffs))


def zeta_from_counts_curve(
    q: int, g: int, counts: Sequence[int], use_functional_equation: Optional[bool] = None
) -> ZetaFunction:
    """Rebuild ``P(t)/((1 - t)(1 - q t))`` from ``N_m = #X(F_{q^m})``.

    With ``2g`` counts every coefficient of ``P`` is read off the series; with
    only ``g`` counts the rest come from ``a_{2g-i} = q^(g-i) a_i``.  By default
    the functional equation is used exactly when fewer than ``2g`` counts are given.
    Counts beyond what is needed are checked against the result.
    """
    counts = [int(c) for c in counts]
    if g < 0:
        raise InconsistentCounts("genus must be non-negative")
    if any(c < 0 for c in counts):
        raise InconsistentCounts("point counts must be non-negative")
    if use_functional_equation is None:
        use_functional_equation = len(counts) < 2 * g
    need = g if use_functional_equation else 2 * g
    if len(counts) < need:
        raise InconsistentCounts(f"genus {g} needs {need} counts, got {len(counts)}")
    z = _exp_from_counts(counts[:need])
    # P = Z (1 - t)(1 - q t) up to degree `need`
    den = [1, -(1 + q), q]
    coeffs = []
    for k in range(need + 1):
        coeffs.append(sum((den[j] * z[k - j] for j in range(min(k, 2) + 1)), Fraction(0)))
    for i, c in enumerate(coeffs):
        if c.denominator != 1:
            raise InconsistentCounts(f"recovered coefficient a_{i} = {c} is not an integer")
    coeffs = [int(c) for c in coeffs]
    if use_functional_equation:
        coeffs = coeffs + [q ** (g - i) * coeffs[i] for i in range(g - 1, -1, -1)]
    if len(coeffs) != 2 * g + 1 or coeffs[-1] != q ** g:
        raise InconsistentCounts(
            f"recovered P has leading coefficient {coeffs[-1]}, expected q^g = {q ** g} for degree 2g"
        )
    if not weil_bound_ok(q, g, coeffs):
        raise InconsistentCounts(f"recovered P = {coeffs} violates the Weil bound for q = {q}, g = {g}")
    z = ZetaFunction(q, tuple(coeffs))
    if len(counts) > need:
        got = z.counts(len(counts))
        if got != counts:
            m = next(i for i, (x, y) in enumerate(zip(got, counts)) if x != y) + 1
            raise InconsistentCounts(f"N_{m} = {counts[m - 1]} disagrees with the value {got[m - 1]} implied by P")
    return z


def weil_warnings(z: ZetaFunction, tol: float = 1e-9) -> list:
    """Warn when a curve-shaped numerator has inverse roots off the circle ``|alpha| = sqrt q``.

    Only applies when the denominator is ``(1 - t)(1 - q t)``.
    """
    if z.denominator != ((0, 1), (1, 1)) or z.extra != (1,) or len(z.numerator) < 2:
        return []
    # inverse roots of P are the roots of the reversed polynomial
    alphas = np.roots([float(c) for c in z.numerator])
    out = []
    for a in alphas:
        if abs(abs(a) ** 2 - z.q) > tol * z.q:
            out.append(f"inverse root {complex(a):.6g} has |alpha|^2 = {abs(a) ** 2:.6g}, expected {z.q}")
    if len(z.numerator) % 2 == 0:
        out.append(f"numerator degree {len(z.numerator) - 1} is odd")
    for msg in out:
        warnings.warn(msg, stacklevel=2)
    return out


def pole_order(z: ZetaFunction, n: int) -> int:
    u = Fraction(z.q) ** n
    den = dict(z.denominator).get(n, 0)
    den += _strip_factor(z.extra, u)[0]
    return den - _strip_factor(z.numerator, u)[0]


def leading_value(z: ZetaFunction, n: int) -> Fraction:
    """Value of ``Z(t) (1 - q^n t)^rho`` at ``t = q^-n``, with ``rho = pole_order(z, n)``."""
    u = Fraction(z.q) ** n
    _, num = _strip_factor(z.numerator, u)
    _, extra = _strip_factor(z.extra, u)
    den = extra
    for w, m in z.denominator:
        if w != n:
            for _ in range(m):
                den = poly_mul(den, [1, -Fraction(z.q) ** w])
    t = 1 / u
    return poly_eval(num, t) / poly_eval(den, t)


@dataclass(frozen=True)
class HodgeTable:
    """``h[i][j] = dim H^j(X, Omega^i)`` for ``0 <= i, j <= d``."""

    d: int
    h: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.h)
        if len(rows) != self.d + 1 or any(len(r) != self.d + 1 for r in rows):
            raise InvalidZeta(f"Hodge table must be {self.d + 1}x{self.d + 1}")
        if any(x < 0 for r in rows for x in r):
            raise InvalidZeta("Hodge numbers must be non-negative")
        object.__setattr__(self, "h", rows)

    @classmethod
    def point(cls) -> "HodgeTable":
        return cls(0, ((1,),))

    @classmethod
    def curve(cls, g: int) -> "HodgeTable":
        return cls(1, ((1, g), (g, 1)))


def chi_hodge(h: HodgeTable, n: int) -> int:
    """``sum_{i <= n, j <= d} (-1)^(i+j) (n - i) h^{i,j}``."""
    return sum(
        (-1) ** (i + j) * (n - i) * h.h[i][j]
        for i in range(0, min(n, h.d) + 1)
        for j in range(h.d + 1)
    )


@dataclass
class SpecialValueReport:
    n: int
    pole_order: int
    leading_value: Fraction
    chi_weil: Fraction
    chi_hodge_exponent: int
    passed: bool
    sign: int
    rank_h2n: Optional[int] = None
    rank_matches: Optional[bool] = None
    notes: list = field(default_factory=list)

    def __bool__(self):
        return self.passed and self.rank_matches is not False


def special_value_check(
    z: ZetaFunction, n: int, chi_weil, h: HodgeTable, rank_h2n: Optional[int] = None
) -> SpecialValueReport:
    """Compare ``|leading value|`` with ``chi_weil * q^chi_hodge``; the sign is only reported."""
    chi_weil = Fraction(chi_weil)
    if chi_weil <= 0:
        raise ValueError("chi_weil must be positive")
    rho = pole_order(z, n)
    lead = leading_value(z, n)
    e = chi_hodge(h, n)
    expected = chi_weil * Fraction(z.q) ** e
    rep = SpecialValueReport(
        n=n,
        pole_order=rho,
        leading_value=lead,
        chi_weil=chi_weil,
        chi_hodge_exponent=e,
        passed=abs(lead) == expected,
        sign=(lead > 0) - (lead < 0),
    )
    if rank_h2n is not None:
        rep.rank_h2n = rank_h2n
        rep.rank_matches = rank_h2n == rho
    if not rep.passed:
        rep.notes.append(f"|{lead}| != {chi_weil} * {z.q}^{e} = {expected}")
    return rep
