"""Finitely generated abelian groups given by presentations.

A group is ``Z^n / L`` where ``L`` is spanned by the columns of an integer
relation matrix.  Everything (equality of elements, kernels, cokernels,
exactness) is decided through the Smith normal form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import NamedTuple, Optional, Sequence

from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from .errors import DimensionMismatch, IllDefined, InfiniteCohomology
from .matrix import Matrix

INFINITE = math.inf


# ---------------------------------------------------------------------------
# Smith normal form


def _argmin_nonzero(a, r0, c0, rows, cols):
    best = None
    for i in range(r0, rows):
        row = a[i]
        for j in range(c0, cols):
            x = row[j]
            if x and (best is None or abs(x) < best[0]):
                best = (abs(x), i, j)
                if best[0] == 1:
                    return best
    return best


def smith_normal_form(A: Matrix):
    """Return ``(U, D, V)`` with ``U @ A @ V == D``.

    ``U`` and ``V`` are unimodular, ``D`` is diagonal with non-negative
    entries ``d_1 | d_2 | ...``.  Pivots are chosen of smallest absolute
    value to keep intermediate entries small.
    """
    n, k = A.rows, A.cols
    a = A.to_rows()
    u = Matrix.identity(n).to_rows()
    v = Matrix.identity(k).to_rows()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, c):
        for row in a:
            x = row[src]
            if x:
                row[dst] += c * x
        for row in v:
            x = row[src]
            if x:
                row[dst] += c * x

    t = 0
    while t < min(n, k):
        best = _argmin_nonzero(a, t, t, n, k)
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(t, i)
        if j != t:
            swap_cols(t, j)
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, n):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, k):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                # a remainder smaller than the pivot survived; promote it
                best = None
                for i in range(t + 1, n):
                    if a[i][t] and (best is None or abs(a[i][t]) < best[0]):
                        best = (abs(a[i][t]), i, t)
                for j in range(t + 1, k):
                    if a[t][j] and (best is None or abs(a[t][j]) < best[0]):
                        best = (abs(a[t][j]), t, j)
                _, i, j = best
                if i != t:
                    swap_rows(t, i)
                if j != t:
                    swap_cols(t, j)
                continue
            bad = None
            for i in range(t + 1, n):
                for j in range(t + 1, k):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return Matrix.from_rows(u, n), Matrix.from_rows(a, k), Matrix.from_rows(v, k)


def unimodular_inverse(U: Matrix) -> Matrix:
    """Inverse of a matrix with determinant +-1, exactly."""
    n = U.rows
    if U.cols != n:
        raise ValueError("matrix is not square")
    if n == 0:
        return U
    # fraction-free inverse: U^-1 = adj / det, and det = +-1 here
    inv, den = DomainMatrix(
        [[ZZ(x) for x in U.row(i)] for i in range(n)], (n, n), ZZ
    ).inv_den()
    if abs(int(den)) != 1:
        raise ValueError("matrix is not unimodular")
    s = int(den)
    return Matrix(n, n, [int(x) * s for row in inv.to_list() for x in row])


def _diag(D: Matrix) -> list:
    out = []
    for i in range(min(D.rows, D.cols)):
        if D[i, i] == 0:
            break
        out.append(D[i, i])
    return out


def integer_kernel(A: Matrix) -> Matrix:
    """Columns form a basis of ``{x in Z^cols : A x = 0}``."""
    _, D, V = smith_normal_form(A)
    r = len(_diag(D))
    return V.submatrix(0, V.rows, r, V.cols)


def lattice_basis(S: Matrix) -> Matrix:
    """Columns form a basis of the lattice spanned by the columns of ``S``."""
    _, D, V = smith_normal_form(S)
    r = len(_diag(D))
    SV = S @ V
    return SV.submatrix(0, S.rows, 0, r)


def lattice_solve(R: Matrix, b: Sequence[int]) -> Optional[tuple]:
    """An integer ``x`` with ``R x = b``, or ``None`` when there is none."""
    if len(b) != R.rows:
        raise DimensionMismatch(f"right-hand side of length {len(b)} for {R.rows} rows")
    U, D, V = smith_normal_form(R)
    return _solve_with_snf(U, D, V, b)


def _solve_with_snf(U, D, V, b):
    c = U.apply(b)
    d = _diag(D)
    w = []
    for i, di in enumerate(d):
        if c[i] % di:
            return None
        w.append(c[i] // di)
    if any(c[len(d):]):
        return None
    w.extend([0] * (V.rows - len(d)))
    return V.apply(w)


# ---------------------------------------------------------------------------
# Groups and elements


@dataclass(frozen=True)
class FgAbGroup:
    """``Z^num_generators`` modulo the column span of ``relations``."""

    num_generators: int
    relations: Matrix

    def __post_init__(self):
        if self.relations.rows != self.num_generators:
            raise DimensionMismatch(
                f"relation matrix has {self.relations.rows} rows, expected {self.num_generators}"
            )

    @cached_property
    def _snf(self):
        return smith_normal_form(self.relations)

    @cached_property
    def _u_inv(self) -> Matrix:
        return unimodular_inverse(self._snf[0])

    @cached_property
    def _diagonal(self) -> tuple:
        return tuple(_diag(self._snf[1]))

    @property
    def invariant_factors(self) -> tuple:
        return tuple(d for d in self._diagonal if d != 1)

    @property
    def free_rank(self) -> int:
        return self.num_generators - len(self._diagonal)

    @property
    def rank(self) -> int:
        return self.free_rank

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    @property
    def order(self):
        return order(self)

    @property
    def torsion_order(self) -> int:
        return math.prod(self.invariant_factors)

    def structure(self) -> tuple:
        """Isomorphism type as ``(invariant_factors, free_rank)``."""
        return (self.invariant_factors, self.free_rank)

    def isomorphic(self, other: "FgAbGroup") -> bool:
        return self.structure() == other.structure()

    # element arithmetic ------------------------------------------------

    def _check(self, x):
        if len(x) != self.num_generators:
            raise DimensionMismatch(f"element has {len(x)} coordinates, group has {self.num_generators} generators")

    def normal_form(self, x: Sequence[int]) -> tuple:
        """Coordinates in the Smith basis, torsion entries reduced into ``[0, d)``."""
        self._check(x)
        U = self._snf[0]
        y = list(U.apply(x))
        for i, d in enumerate(self._diagonal):
            y[i] %= d
        return tuple(y)

    def reduce(self, x: Sequence[int]) -> tuple:
        """Canonical representative of ``x`` in the original generators."""
        return self._u_inv.apply(self.normal_form(x))

    def is_zero(self, x: Sequence[int]) -> bool:
        return not any(self.normal_form(x))

    def equal(self, x: Sequence[int], y: Sequence[int]) -> bool:
        return self.normal_form(x) == self.normal_form(y)

    def in_relations(self, v: Sequence[int]) -> bool:
        return self.is_zero(v)

    def zero(self) -> tuple:
        return (0,) * self.num_generators

    def generators(self) -> list:
        n = self.num_generators
        return [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]

    def element(self, coords: Sequence[int]) -> "Element":
        return Element(self, self.reduce(coords))

    def elements(self):
        """All elements (canonical coordinates); finite groups only."""
        if not self.is_finite():
            raise InfiniteCohomology("cannot enumerate an infinite group")
        d = self._diagonal
        Uinv = self._u_inv
        for y in product(*[range(di) for di in d]):
            yield Uinv.apply(y)

    def __repr__(self):
        parts = [f"Z/{d}" for d in self.invariant_factors] + ["Z"] * self.free_rank
        return "FgAbGroup(" + (" + ".join(parts) if parts else "0") + ")"


@dataclass(frozen=True, eq=False)
class Element:
    group: FgAbGroup
    coordinates: tuple

    def __add__(self, other):
        self._same(other)
        return self.group.element([a + b for a, b in zip(self.coordinates, other.coordinates)])

    def __sub__(self, other):
        self._same(other)
        return self.group.element([a - b for a, b in zip(self.coordinates, other.coordinates)])

    def __neg__(self):
        return self.group.element([-a for a in self.coordinates])

    def __rmul__(self, c: int):
        return self.group.element([c * a for a in self.coordinates])

    def _same(self, other):
        if not isinstance(other, Element) or other.group != self.group:
            raise ValueError("elements of different groups")

    def __eq__(self, other):
        return (
            isinstance(other, Element)
            and other.group == self.group
            and self.group.equal(self.coordinates, other.coordinates)
        )

    def __hash__(self):
        return hash(self.group.normal_form(self.coordinates))

    def is_zero(self) -> bool:
        return self.group.is_zero(self.coordinates)


def group_from_presentation(n: int, relations: Matrix = None) -> FgAbGroup:
    if relations is None:
        relations = Matrix(n, 0)
    return FgAbGroup(n, relations)


def cyclic(d: int) -> FgAbGroup:
    """``Z/d``; ``d = 0`` gives ``Z``."""
    return FgAbGroup(1, Matrix(1, 1, [d]) if d else Matrix(1, 0))


def free(n: int) -> FgAbGroup:
    return FgAbGroup(n, Matrix(n, 0))


def trivial() -> FgAbGroup:
    return FgAbGroup(0, Matrix(0, 0))


def abelian_group(invariants: Sequence[int]) -> FgAbGroup:
    """Direct sum of cyclic groups ``Z/d`` (``d = 0`` meaning ``Z``)."""
    n = len(invariants)
    cols = []
    for i, d in enumerate(invariants):
        if d:
            cols.append([d if j == i else 0 for j in range(n)])
    return FgAbGroup(n, Matrix.from_columns(cols, n))


def direct_sum(*groups: FgAbGroup) -> FgAbGroup:
    n = sum(g.num_generators for g in groups)
    out = FgAbGroup(n, Matrix.block_diagonal([g.relations for g in groups]))
    snf = _direct_sum_snf(groups)
    if snf is not None:
        # cached_property reads from the instance dict, so this seeds the cache
        out.__dict__["_snf"], out.__dict__["_u_inv"] = snf
    return out


def _permutation(order: list) -> Matrix:
    """``P`` with ``(P x)_k = x_{order[k]}``."""
    n = len(order)
    m = [[0] * n for _ in range(n)]
    for k, i in enumerate(order):
        m[k][i] = 1
    return Matrix.from_rows(m, n)


def _direct_sum_snf(groups):
    """Smith form of a block-diagonal relation matrix, assembled from the blocks.

    Works when all non-unit diagonal entries, sorted, already form a divisibility
    chain (always true for copies of one group); returns ``None`` otherwise.
    """
    if len(groups) < 2:
        return None
    pivots, free_rows, zero_cols = [], [], []
    r0 = c0 = 0
    for g in groups:
        d = g._diagonal
        pivots.extend((x, r0 + i, c0 + i) for i, x in enumerate(d))
        free_rows.extend(range(r0 + len(d), r0 + g.num_generators))
        zero_cols.extend(range(c0 + len(d), c0 + g.relations.cols))
        r0 += g.num_generators
        c0 += g.relations.cols
    pivots.sort(key=lambda p: p[0])
    if any(b[0] % a[0] for a, b in zip(pivots, pivots[1:])):
        return None
    row_order = [p[1] for p in pivots] + free_rows
    col_order = [p[2] for p in pivots] + zero_cols
    Pr = _permutation(row_order)
    Pc = _permutation(col_order).transpose()
    U = Pr @ Matrix.block_diagonal([g._snf[0] for g in groups])
    V = Matrix.block_diagonal([g._snf[2] for g in groups]) @ Pc
    D = Pr @ Matrix.block_diagonal([g._snf[1] for g in groups]) @ Pc
    return (U, D, V), Matrix.block_diagonal([g._u_inv for g in groups]) @ Pr.transpose()


def order(g: FgAbGroup):
    """Number of elements, or ``INFINITE``."""
    if g.free_rank:
        return INFINITE
    return math.prod(g.invariant_factors)


# ---------------------------------------------------------------------------
# Homomorphisms


@dataclass(frozen=True, eq=False)
class Homomorphism:
    """A map between presented groups, given by the images of generators (as columns)."""

    source: FgAbGroup
    target: FgAbGroup
    matrix: Matrix

    def __post_init__(self):
        m = self.matrix
        if m.rows != self.target.num_generators or m.cols != self.source.num_generators:
            raise DimensionMismatch(
                f"matrix is {m.rows}x{m.cols}, expected "
                f"{self.target.num_generators}x{self.source.num_generators}"
            )
        for j in range(self.source.relations.cols):
            image = m.apply(self.source.relations.column(j))
            if not self.target.in_relations(image):
                raise IllDefined(
                    f"relation {list(self.source.relations.column(j))} maps to {list(image)}, "
                    "which is not a relation of the target"
                )

    def __call__(self, x: Sequence[int]) -> tuple:
        return self.target.reduce(self.matrix.apply(x))

    def image_raw(self, x: Sequence[int]) -> tuple:
        return self.matrix.apply(x)

    def __matmul__(self, other: "Homomorphism") -> "Homomorphism":
        return compose(self, other)

    def __add__(self, other: "Homomorphism") -> "Homomorphism":
        _same_ends(self, other)
        return Homomorphism(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other: "Homomorphism") -> "Homomorphism":
        _same_ends(self, other)
        return Homomorphism(self.source, self.target, self.matrix - other.matrix)

    def __neg__(self):
        return Homomorphism(self.source, self.target, -self.matrix)

    def scale(self, c: int) -> "Homomorphism":
        return Homomorphism(self.source, self.target, self.matrix.scale(c))

    def equals(self, other: "Homomorphism") -> bool:
        _same_ends(self, other)
        diff = self.matrix - other.matrix
        return all(self.target.is_zero(diff.column(j)) for j in range(diff.cols))

    def is_zero(self) -> bool:
        return all(self.target.is_zero(self.matrix.column(j)) for j in range(self.matrix.cols))

    def preimage(self, y: Sequence[int]) -> Optional[tuple]:
        """Some ``x`` with ``self(x) == y`` in the target, or ``None``."""
        ns = self.source.num_generators
        sol = lattice_solve(self.matrix.hstack(self.target.relations), y)
        return None if sol is None else tuple(sol[:ns])

    def is_injective(self) -> bool:
        return kernel(self)[0].is_trivial()

    def is_surjective(self) -> bool:
        return cokernel(self)[0].is_trivial()

    def is_isomorphism(self) -> bool:
        # finitely generated abelian groups are Hopfian: a surjection between
        # isomorphic ones is injective
        return self.source.isomorphic(self.target) and self.is_surjective()

    def __repr__(self):
        return f"Homomorphism({self.source!r} -> {self.target!r}, {self.matrix.to_rows()})"


def _same_ends(f, g):
    if f.source != g.source or f.target != g.target:
        raise DimensionMismatch("homomorphisms have different source or target")


def make_hom(src: FgAbGroup, dst: FgAbGroup, m: Matrix) -> Homomorphism:
    return Homomorphism(src, dst, m)


def identity_hom(g: FgAbGroup) -> Homomorphism:
    return Homomorphism(g, g, Matrix.identity(g.num_generators))


def zero_hom(src: FgAbGroup, dst: FgAbGroup) -> Homomorphism:
    return Homomorphism(src, dst, Matrix(dst.num_generators, src.num_generators))


def compose(g: Homomorphism, f: Homomorphism) -> Homomorphism:
    """``g o f``."""
    if f.target != g.source:
        raise DimensionMismatch("maps are not composable")
    return Homomorphism(f.source, g.target, g.matrix @ f.matrix)


def kernel(h: Homomorphism):
    """Return ``(K, embedding)`` with ``K`` presented on a basis of the kernel lattice."""
    src, dst = h.source, h.target
    ns = src.num_generators
    sols = integer_kernel(h.matrix.hstack(dst.relations))
    spanning = sols.submatrix(0, ns, 0, sols.cols)
    # the relations of the source are always in the kernel lattice
    basis = lattice_basis(spanning.hstack(src.relations))
    k = basis.cols
    rel_cols = []
    if k:
        U, D, V = smith_normal_form(basis)
        for j in range(src.relations.cols):
            c = _solve_with_snf(U, D, V, src.relations.column(j))
            rel_cols.append(c)
    K = FgAbGroup(k, Matrix.from_columns(rel_cols, k))
    return K, Homomorphism(K, src, basis)


def cokernel(h: Homomorphism):
    """Return ``(Q, projection)``; ``Q`` shares generators with the target."""
    dst = h.target
    Q = FgAbGroup(dst.num_generators, dst.relations.hstack(h.matrix))
    return Q, Homomorphism(dst, Q, Matrix.identity(dst.num_generators))


def image_contains(h: Homomorphism, y: Sequence[int]) -> bool:
    return h.preimage(y) is not None


def lift_through(f: Homomorphism, emb: Homomorphism) -> Homomorphism:
    """Factor ``f`` through the injective map ``emb``: the ``g`` with ``emb o g == f``."""
    if emb.target != f.target:
        raise DimensionMismatch("lift target mismatch")
    cols = []
    for j in range(f.source.num_generators):
        x = emb.preimage(f.matrix.column(j))
        if x is None:
            raise IllDefined(f"generator {j} does not land in the image of the embedding")
        cols.append(x)
    return Homomorphism(f.source, emb.source, Matrix.from_columns(cols, emb.source.num_generators))


def induced_on_cokernels(f: Homomorphism, q_src: FgAbGroup, q_dst: FgAbGroup) -> Homomorphism:
    """The map ``q_src -> q_dst`` induced by ``f`` when both are cokernels sharing generators with f's ends."""
    return Homomorphism(q_src, q_dst, f.matrix)


# ---------------------------------------------------------------------------
# Exactness and complexes


class Exactness(NamedTuple):
    exact: bool
    node: Optional[int] = None  # index of the first failing interior node
    reason: str = ""

    def __bool__(self):
        return self.exact


def homology(f: Homomorphism, g: Homomorphism) -> FgAbGroup:
    """``ker g / im f`` for composable ``f``, ``g`` with ``g o f == 0``."""
    K, emb = kernel(g)
    f_in_K = lift_through(f, emb)
    return cokernel(f_in_K)[0]


def is_exact(seq: Sequence[Homomorphism]) -> Exactness:
    """Check image == kernel at every interior node of ``f_0, f_1, ...``.

    Node ``i`` (1-based) is the target of ``seq[i-1]``.
    """
    for i in range(len(seq) - 1):
        f, g = seq[i], seq[i + 1]
        if f.target != g.source:
            raise DimensionMismatch(f"maps {i} and {i + 1} are not composable")
    for i in range(len(seq) - 1):
        f, g = seq[i], seq[i + 1]
        gf = Homomorphism(f.source, g.target, g.matrix @ f.matrix)
        if not gf.is_zero():
            return Exactness(False, i + 1, "composite is nonzero")
        K, emb = kernel(g)
        for j in range(K.num_generators):
            if not image_contains(f, emb.matrix.column(j)):
                return Exactness(False, i + 1, "kernel not contained in image")
    return Exactness(True)


@dataclass(frozen=True, eq=False)
class BoundedComplex:
    """Groups ``C^lo, ..., C^hi`` with differentials ``d^i: C^i -> C^{i+1}``."""

    lowest_degree: int
    groups: tuple
    differentials: tuple

    def __post_init__(self):
        groups, diffs = tuple(self.groups), tuple(self.differentials)
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "differentials", diffs)
        if len(diffs) != max(len(groups) - 1, 0):
            raise DimensionMismatch(f"{len(groups)} groups need {max(len(groups) - 1, 0)} differentials")
        for i, d in enumerate(diffs):
            if d.source != groups[i] or d.target != groups[i + 1]:
                raise DimensionMismatch(f"differential {i} has the wrong source or target")
        for i in range(len(diffs) - 1):
            if not compose(diffs[i + 1], diffs[i]).is_zero():
                raise DimensionMismatch(f"d^{self.lowest_degree + i + 1} o d^{self.lowest_degree + i} != 0")

    @property
    def degrees(self) -> range:
        return range(self.lowest_degree, self.lowest_degree + len(self.groups))

    def cohomology(self, i: int) -> FgAbGroup:
        k = i - self.lowest_degree
        if not 0 <= k < len(self.groups):
            return trivial()
        C = self.groups[k]
        incoming = self.differentials[k - 1] if k > 0 else zero_hom(trivial(), C)
        outgoing = self.differentials[k] if k < len(self.differentials) else zero_hom(C, trivial())
        return homology(incoming, outgoing)


def euler_char(c: BoundedComplex) -> Fraction:
    """``prod_i |H^i|^((-1)^i)`` with ``i`` the actual degree."""
    chi = Fraction(1)
    for i in c.degrees:
        H = c.cohomology(i)
        if not H.is_finite():
            raise InfiniteCohomology(f"H^{i} has free rank {H.free_rank}")
        chi = chi * H.torsion_order if i % 2 == 0 else chi / H.torsion_order
    return chi
