"""Splicing Weil-etale cohomology out of etale and rational data.

Inputs are, per degree ``i``: the etale group ``H^i_et(X, Z(n))`` as a
:class:`TameGroup`, the rank of ``H^i(X, Q(n))``, and the boundary maps
``delta_i : H^{i-1}(X, Q(n)) -> H^{i+1}_et(X, Z(n))`` as :class:`DivMap`
(keyed by ``i``, the degree of the Weil group sitting between them).  Then

    0 -> coker(delta_{i-1}) -> H^i_W -> ker(delta_i) -> 0

and only extension-independent quantities (rank, torsion order) are
reported as scalars.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import qlinalg
from .errors import InconsistentShapes, NotAComplex, NotFinitelyGenerated, SingularPairing
from .fga import (
    BoundedComplex,
    FgAbGroup,
    Homomorphism,
    abelian_group,
    compose,
    direct_sum,
    euler_char,
    free,
    make_hom,
    smith_normal_form,
    trivial,
    zero_hom,
)
from .matrix import Matrix


@dataclass(frozen=True)
class TameGroup:
    """``Z^a + Q^b + (Q/Z)^c + T`` with ``T`` finite."""

    lattice_rank: int = 0
    rational_rank: int = 0
    codivisible_rank: int = 0
    finite_part: FgAbGroup = field(default_factory=trivial)
    char_p: Optional[int] = None   # set when the Q/Z part is only the prime-to-p part

    def __post_init__(self):
        if min(self.lattice_rank, self.rational_rank, self.codivisible_rank) < 0:
            raise InconsistentShapes("ranks must be non-negative")
        if not self.finite_part.is_finite():
            raise InconsistentShapes(f"finite part {self.finite_part!r} is infinite")

    def is_finitely_generated(self) -> bool:
        return self.rational_rank == 0 and self.codivisible_rank == 0

    def is_zero(self) -> bool:
        return (
            self.lattice_rank == 0
            and self.rational_rank == 0
            and self.codivisible_rank == 0
            and self.finite_part.is_trivial()
        )

    @property
    def torsion_order(self) -> int:
        if self.codivisible_rank:
            raise NotFinitelyGenerated("torsion of (Q/Z)^c is infinite")
        return self.finite_part.torsion_order

    @property
    def rational_dimension(self) -> int:
        """Dimension after tensoring with Q."""
        return self.lattice_rank + self.rational_rank

    def fg_group(self) -> FgAbGroup:
        """``Z^a + T`` as a presented group; only for finitely generated values."""
        if not self.is_finitely_generated():
            raise NotFinitelyGenerated(f"{self} is not finitely generated")
        return direct_sum(free(self.lattice_rank), self.finite_part)

    def __str__(self):
        parts = []
        if self.lattice_rank:
            parts.append("Z" if self.lattice_rank == 1 else f"Z^{self.lattice_rank}")
        if self.rational_rank:
            parts.append("Q" if self.rational_rank == 1 else f"Q^{self.rational_rank}")
        if self.codivisible_rank:
            tag = "'" if self.char_p else ""
            c = self.codivisible_rank
            parts.append(f"Q/Z{tag}" if c == 1 else f"(Q/Z{tag})^{c}")
        parts.extend(f"Z/{d}" for d in self.finite_part.invariant_factors)
        return " + ".join(parts) if parts else "0"


def tame(a: int = 0, b: int = 0, c: int = 0, finite: Sequence[int] = (), char_p: int = None) -> TameGroup:
    """Shorthand: ``tame(1, finite=[4])`` is ``Z + Z/4``."""
    return TameGroup(a, b, c, abelian_group(list(finite)), char_p)


@dataclass(frozen=True)
class DivMap:
    """``Q^b -> (Q/Z)^c``, ``v -> A v mod Z^c`` for a rational c x b matrix ``A``."""

    source_rank: int
    target_rank: int
    matrix: tuple

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.matrix)
        if len(rows) != self.target_rank or any(len(r) != self.source_rank for r in rows):
            raise InconsistentShapes(f"DivMap matrix must be {self.target_rank}x{self.source_rank}")
        object.__setattr__(self, "matrix", rows)

    @classmethod
    def full(cls, b: int, c: int) -> "DivMap":
        """The identity-block preset: ``Q^b -> (Q/Z)^c`` on the first min(b, c) coordinates."""
        return cls(b, c, [[1 if i == j else 0 for j in range(b)] for i in range(c)])

    @classmethod
    def zero(cls, b: int, c: int) -> "DivMap":
        return cls(b, c, [[0] * b for _ in range(c)])

    @property
    def rational_rank(self) -> int:
        if not self.matrix or not self.source_rank:
            return 0
        return qlinalg.rank([list(r) for r in self.matrix], self.source_rank)

    def __call__(self, v: Sequence) -> tuple:
        return tuple(
            sum((a * Fraction(x) for a, x in zip(row, v)), Fraction(0)) % 1 for row in self.matrix
        )


def divmap_kernel(d: DivMap) -> TameGroup:
    """``{v in Q^b : A v in Z^c}`` as ``Z^r + Q^(b - r)`` with ``r = rank A``."""
    b = d.source_rank
    if not d.matrix or not b:
        return TameGroup(0, b, 0)
    den = math.lcm(*[x.denominator for row in d.matrix for x in row])
    A = Matrix.from_rows([[int(x * den) for x in row] for row in d.matrix], b)
    _, D, _ = smith_normal_form(A)
    r = sum(1 for i in range(min(D.rows, D.cols)) if D[i, i])
    return TameGroup(r, b - r, 0)


def divmap_kernel_lattice(d: DivMap) -> list:
    """Basis (as Fraction vectors) of the lattice directions of the kernel, complementing ``ker_Q A``.

    With ``U A' V = diag(s)`` for ``A' = den * A``, ``w = V^-1 v`` satisfies
    ``s_i w_i in den * Z``; the lattice is spanned by ``V (den / s_i) e_i``.
    """
    b = d.source_rank
    if not d.matrix or not b:
        return []
    den = math.lcm(*[x.denominator for row in d.matrix for x in row])
    A = Matrix.from_rows([[int(x * den) for x in row] for row in d.matrix], b)
    _, D, V = smith_normal_form(A)
    out = []
    for i in range(min(D.rows, D.cols)):
        s = D[i, i]
        if not s:
            break
        out.append([Fraction(V[k, i] * den, s) for k in range(b)])
    return out


@dataclass
class WeilDegreeData:
    degree: int
    sub: TameGroup              # coker of the incoming delta inside H^i_et
    quot: TameGroup             # ker of the outgoing delta inside H^{i-1}(Q)
    split_model: Optional[FgAbGroup]
    non_canonical: bool         # True when both pieces are nonzero, so the extension is not determined

    def is_finitely_generated(self) -> bool:
        return self.sub.is_finitely_generated() and self.quot.is_finitely_generated()

    def is_zero(self) -> bool:
        return self.sub.is_zero() and self.quot.is_zero()

    @property
    def rank(self) -> int:
        if not self.is_finitely_generated():
            raise NotFinitelyGenerated(f"H^{self.degree}_W is not finitely generated")
        return self.sub.lattice_rank + self.quot.lattice_rank

    @property
    def torsion_order(self) -> int:
        # the quotient sits inside a Q-vector space, so all torsion comes from the sub piece
        if not self.is_finitely_generated():
            raise NotFinitelyGenerated(f"H^{self.degree}_W is not finitely generated")
        return self.sub.torsion_order

    @property
    def rational_dimension(self) -> int:
        return self.sub.rational_dimension + self.quot.rational_dimension


def _divmap_cokernel(target: TameGroup, d: Optional[DivMap]) -> TameGroup:
    if d is None:
        return target
    if d.target_rank > target.codivisible_rank:
        raise InconsistentShapes(
            f"delta targets (Q/Z)^{d.target_rank} but the etale group has only (Q/Z)^{target.codivisible_rank}"
        )
    return TameGroup(
        target.lattice_rank,
        target.rational_rank,
        target.codivisible_rank - d.rational_rank,
        target.finite_part,
        target.char_p,
    )


def splice(
    etale: Mapping[int, TameGroup],
    rational: Mapping[int, int],
    deltas: Mapping[int, DivMap] = None,
) -> dict:
    """Degree -> :class:`WeilDegreeData` for every degree touched by the inputs."""
    deltas = dict(deltas or {})
    etale = {int(k): v for k, v in etale.items()}
    rational = {int(k): int(v) for k, v in rational.items()}
    deltas = {int(k): v for k, v in deltas.items()}
    for i, d in deltas.items():
        if d.source_rank != rational.get(i - 1, 0):
            raise InconsistentShapes(
                f"delta_{i} has source Q^{d.source_rank} but H^{i - 1}(Q) has rank {rational.get(i - 1, 0)}"
            )
        target = etale.get(i + 1, TameGroup())
        if d.target_rank > target.codivisible_rank:
            raise InconsistentShapes(
                f"delta_{i} lands in (Q/Z)^{d.target_rank} but H^{i + 1}_et has (Q/Z)^{target.codivisible_rank}"
            )
    degrees = set(etale) | {j + 1 for j in rational} | set(deltas) | {i + 1 for i in deltas}
    if not degrees:
        return {}
    out = {}
    for i in range(min(degrees), max(degrees) + 1):
        sub = _divmap_cokernel(etale.get(i, TameGroup()), deltas.get(i - 1))
        r = rational.get(i - 1, 0)
        d = deltas.get(i)
        quot = divmap_kernel(d) if d is not None else TameGroup(0, r, 0)
        split = None
        if sub.is_finitely_generated() and quot.is_finitely_generated():
            split = direct_sum(free(sub.lattice_rank + quot.lattice_rank), sub.finite_part)
        out[i] = WeilDegreeData(i, sub, quot, split, not sub.is_zero() and not quot.is_zero())
    return out


@dataclass
class BoundsVerdict:
    passed: bool
    bound: int
    violations: list

    def __bool__(self):
        return self.passed


def vanishing_bound(d: int, n: int) -> int:
    """Largest degree in which ``H^i_W(X, Z(n))`` may be nonzero for ``dim X = d``."""
    return 2 * d + 1 if n <= d else n + d + 1


def validate_bounds(data: Mapping[int, WeilDegreeData], d: int, n: int) -> BoundsVerdict:
    bound = vanishing_bound(d, n)
    bad = sorted(i for i, w in data.items() if i > bound and not w.is_zero())
    return BoundsVerdict(not bad, bound, bad)


def e_complex(groups: Mapping[int, FgAbGroup], e_maps: Mapping[int, Homomorphism]) -> BoundedComplex:
    """The complex ``H^i_W --e--> H^{i+1}_W`` with missing groups trivial and missing maps zero."""
    groups = {int(k): v for k, v in groups.items()}
    e_maps = {int(k): v for k, v in e_maps.items()}
    if not groups:
        return BoundedComplex(0, (), ())
    lo, hi = min(groups), max(groups)
    seq = [groups.get(i, trivial()) for i in range(lo, hi + 1)]
    diffs = []
    for i in range(lo, hi):
        h = e_maps.get(i)
        if h is None:
            h = zero_hom(seq[i - lo], seq[i + 1 - lo])
        elif h.source != seq[i - lo] or h.target != seq[i + 1 - lo]:
            raise InconsistentShapes(f"e map in degree {i} does not connect H^{i} to H^{i + 1}")
        diffs.append(h)
    for k in range(len(diffs) - 1):
        if not compose(diffs[k + 1], diffs[k]).is_zero():
            raise NotAComplex(f"e o e != 0 starting in degree {lo + k}")
    return BoundedComplex(lo, seq, diffs)


def chi_via_e_complex(groups: Mapping[int, FgAbGroup], e_maps: Mapping[int, Homomorphism]) -> Fraction:
    return euler_char(e_complex(groups, e_maps))


def chi_via_regulator(
    data: Mapping[int, WeilDegreeData], pairing: Matrix, n: int, d: int
) -> Fraction:
    """``prod_i |H^i_W tor|^((-1)^i) / |det pairing|``."""
    if pairing.rows != pairing.cols:
        raise InconsistentShapes("pairing must be square")
    w = data.get(2 * n)
    rank = w.rank if w is not None else 0
    if rank != pairing.rows:
        raise InconsistentShapes(f"pairing has size {pairing.rows} but rank H^{2 * n}_W = {rank}")
    R = abs(pairing.det())
    if R == 0:
        raise SingularPairing("determinant of the pairing is zero")
    chi = Fraction(1)
    for i, w in data.items():
        t = w.torsion_order
        chi = chi * t if i % 2 == 0 else chi / t
    return chi / R


# ---------------------------------------------------------------------------
# worked presets


@dataclass
class Preset:
    """Splice inputs for a small variety together with the data needed for both chi routes."""

    name: str
    q: int
    d: int
    n: int
    etale: dict
    rational: dict
    deltas: dict
    pairing: Matrix

    def splice(self) -> dict:
        return splice(self.etale, self.rational, self.deltas)

    def e_groups(self) -> dict:
        return {i: w.split_model for i, w in self.splice().items() if not w.is_zero()}

    def e_maps(self) -> dict:
        """``e`` from degree ``2n`` to ``2n + 1``, acting on the lattice parts by the pairing matrix.

        For a point and for curves with the identity pairing this is the degree
        map.  On split models the lattice coordinates come first.
        """
        groups = self.e_groups()
        src, dst = groups.get(2 * self.n), groups.get(2 * self.n + 1)
        if src is None or dst is None or not src.free_rank or not dst.free_rank:
            return {}
        P = self.pairing
        r = P.rows
        if not (r and r == P.cols and r <= min(src.free_rank, dst.free_rank)):
            P, r = Matrix.identity(1), 1
        rows = [[P[i, j] if i < r and j < r else 0 for j in range(src.num_generators)]
                for i in range(dst.num_generators)]
        return {2 * self.n: make_hom(src, dst, Matrix.from_rows(rows, src.num_generators))}

    def chi_e(self) -> Fraction:
        return chi_via_e_complex(self.e_groups(), self.e_maps())

    def chi_regulator(self) -> Fraction:
        return chi_via_regulator(self.splice(), self.pairing, self.n, self.d)


def point_preset(q: int) -> Preset:
    """``Spec F_q`` with ``n = 0``: ``H^0_et = Z``, ``H^2_et = Q/Z``, ``H^0(Q) = Q``."""
    return Preset(
        "point", q, 0, 0,
        etale={0: tame(1), 2: tame(c=1)},
        rational={0: 1},
        deltas={1: DivMap.full(1, 1)},
        pairing=Matrix.identity(1),
    )


def _finite(order: int) -> list:
    return [order] if order > 1 else []


def projective_line_preset(q: int) -> Preset:
    return Preset(
        "P1", q, 1, 1,
        etale={1: tame(finite=_finite(q - 1)), 2: tame(1), 4: tame(c=1)},
        rational={2: 1},
        deltas={3: DivMap.full(1, 1)},
        pairing=Matrix.identity(1),
    )


def elliptic_preset(q: int, a: int) -> Preset:
    """Elliptic curve with trace of Frobenius ``a``; ``E(F_q)`` is modelled as cyclic of order ``q + 1 - a``.

    Only its order enters rank and torsion computations.
    """
    return Preset(
        "elliptic", q, 1, 1,
        etale={1: tame(finite=_finite(q - 1)), 2: tame(1, finite=_finite(q + 1 - a)), 4: tame(c=1)},
        rational={2: 1},
        deltas={3: DivMap.full(1, 1)},
        pairing=Matrix.identity(1),
    )
