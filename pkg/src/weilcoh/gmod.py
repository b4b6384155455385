"""Modules over the Weil group G = Z, generated by Frobenius.

A G-module is a finitely generated abelian group with an automorphism
``phi``.  Group cohomology of Z is computed by the two-term complex
``M --(phi - 1)--> M``; the class ``e`` acts through the extension ``N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from sympy import totient

from . import qlinalg
from .errors import DimensionMismatch, NotAutomorphism
from .fga import (
    FgAbGroup,
    Homomorphism,
    cokernel,
    direct_sum,
    identity_hom,
    kernel,
    make_hom,
    trivial,
)
from .matrix import Matrix


def reduce_columns(g: FgAbGroup, m: Matrix) -> Matrix:
    """Replace each column by its canonical representative in ``g``; keeps powers small."""
    return Matrix.from_columns([g.reduce(m.column(j)) for j in range(m.cols)], m.rows)


@dataclass(frozen=True, eq=False)
class GModule:
    underlying: FgAbGroup
    phi: Homomorphism
    phi_inverse: Homomorphism

    def __post_init__(self):
        g = self.underlying
        for h in (self.phi, self.phi_inverse):
            if h.source != g or h.target != g:
                raise DimensionMismatch("phi must be an endomorphism of the underlying group")
        ident = identity_hom(g)
        if not (self.phi @ self.phi_inverse).equals(ident) or not (self.phi_inverse @ self.phi).equals(ident):
            raise NotAutomorphism("phi_inverse is not inverse to phi")

    @property
    def n(self) -> int:
        return self.underlying.num_generators

    def phi_power_matrix(self, k: int) -> Matrix:
        """Matrix of ``phi^k`` for any integer ``k``, columns reduced."""
        return self._powers(k)

    def _powers(self, k):
        cache = self._power_cache
        if k in cache:
            return cache[k]
        base = self.phi.matrix if k > 0 else self.phi_inverse.matrix
        e = abs(k)
        g = self.underlying
        result = Matrix.identity(self.n)
        b = reduce_columns(g, base)
        while e:
            if e & 1:
                result = reduce_columns(g, result @ b)
            b = reduce_columns(g, b @ b)
            e >>= 1
        cache[k] = result
        return result

    @cached_property
    def _power_cache(self) -> dict:
        return {}

    def phi_power(self, k: int) -> Homomorphism:
        return Homomorphism(self.underlying, self.underlying, self.phi_power_matrix(k))

    def phi_minus_one(self, k: int = 1) -> Homomorphism:
        """``phi^k - 1`` as an endomorphism."""
        return Homomorphism(self.underlying, self.underlying, self.phi_power_matrix(k) - Matrix.identity(self.n))

    def act(self, x: Sequence[int], k: int = 1) -> tuple:
        return self.underlying.reduce(self.phi_power_matrix(k).apply(x))

    def order_of_phi(self, bound: int = 10_000):
        """Smallest ``k >= 1`` with ``phi^k = 1``, or ``None`` if none up to ``bound``."""
        g = self.underlying
        ident = identity_hom(g)
        p = Matrix.identity(self.n)
        for k in range(1, bound + 1):
            p = reduce_columns(g, self.phi.matrix @ p)
            if Homomorphism(g, g, p).equals(ident):
                return k
        return None

    def __repr__(self):
        return f"GModule({self.underlying!r}, phi={self.phi.matrix.to_rows()})"


def make_gmodule(g: FgAbGroup, phi_matrix: Matrix) -> GModule:
    """Check that ``phi_matrix`` is an automorphism of ``g`` and precompute its inverse."""
    phi = make_hom(g, g, phi_matrix)
    K, _ = kernel(phi)
    if not K.is_trivial():
        raise NotAutomorphism(f"phi has nonzero kernel {K!r}")
    Q, _ = cokernel(phi)
    if not Q.is_trivial():
        raise NotAutomorphism(f"phi has nonzero cokernel {Q!r}")
    cols = []
    for e in g.generators():
        x = phi.preimage(e)
        cols.append(g.reduce(x))
    inv = make_hom(g, g, Matrix.from_columns(cols, g.num_generators))
    return GModule(g, phi, inv)


def trivial_module(g: FgAbGroup) -> GModule:
    return GModule(g, identity_hom(g), identity_hom(g))


def invariants(m: GModule):
    """``H^0(G, M) = M^G`` with its embedding into ``M``."""
    return kernel(m.phi_minus_one())


def coinvariants(m: GModule):
    """``H^1(G, M) = M_G`` with the projection from ``M``."""
    return cokernel(m.phi_minus_one())


def group_cohomology(i: int, m: GModule) -> FgAbGroup:
    if i < 0:
        raise ValueError("cohomological degree must be non-negative")
    if i == 0:
        return invariants(m)[0]
    if i == 1:
        return coinvariants(m)[0]
    return trivial()


@dataclass(frozen=True, eq=False)
class TensorN:
    """``M (x) N`` together with the sequence ``0 -> M -> M (x) N -> M -> 0``."""

    module: GModule
    inclusion: Homomorphism
    projection: Homomorphism


def tensor_N(m: GModule) -> TensorN:
    """Tensor with the extension N of Z by Z; phi acts by ``(x, y) -> (phi x + phi y, phi y)``."""
    g = m.underlying
    n = m.n
    gg = direct_sum(g, g)
    P, Pi = m.phi.matrix, m.phi_inverse.matrix
    Z = Matrix(n, n)
    phi_n = Matrix.block([[P, P], [Z, P]])
    # inverse of [[P, P], [0, P]] is [[P^-1, -P^-1], [0, P^-1]]
    phi_n_inv = Matrix.block([[Pi, -Pi], [Z, Pi]])
    module = GModule(gg, make_hom(gg, gg, phi_n), make_hom(gg, gg, phi_n_inv))
    I = Matrix.identity(n)
    inclusion = make_hom(g, gg, Matrix.block([[I], [Z]]))
    projection = make_hom(gg, g, Matrix.block([[Z, I]]))
    return TensorN(module, inclusion, projection)


def connecting_map(
    inclusion: Homomorphism,
    projection: Homomorphism,
    d_left: Homomorphism,
    d_mid: Homomorphism,
    d_right: Homomorphism,
) -> Homomorphism:
    """Snake-lemma boundary ``ker d_right -> coker d_left``.

    The rows are ``0 -> A -> B -> C -> 0`` (twice) with vertical maps
    ``d_left, d_mid, d_right``.  Each kernel generator is lifted to ``B``,
    pushed through ``d_mid`` and pulled back along the inclusion.
    """
    K, emb = kernel(d_right)
    Q, proj = cokernel(d_left)
    cols = []
    for j in range(K.num_generators):
        x = emb.matrix.column(j)
        lift = projection.preimage(x)
        if lift is None:
            raise DimensionMismatch("projection is not surjective")
        pushed = d_mid.image_raw(lift)
        back = inclusion.preimage(pushed)
        if back is None:
            raise DimensionMismatch("d_mid(lift) does not lie in the image of the inclusion")
        cols.append(proj.image_raw(back))
    return make_hom(K, Q, Matrix.from_columns(cols, Q.num_generators))


def cup_e(m: GModule) -> Homomorphism:
    """Cup product with ``e``: ``M^G -> M_G``, computed as a snake boundary through ``M (x) N``."""
    t = tensor_N(m)
    return connecting_map(
        t.inclusion,
        t.projection,
        m.phi_minus_one(),
        t.module.phi_minus_one(),
        m.phi_minus_one(),
    )


def canonical_invariants_to_coinvariants(m: GModule) -> Homomorphism:
    """Embed the invariants into ``M`` and project to the coinvariants."""
    K, emb = invariants(m)
    Q, proj = coinvariants(m)
    return make_hom(K, Q, proj.matrix @ emb.matrix)


# ---------------------------------------------------------------------------
# rational representations


@dataclass(frozen=True, eq=False)
class QMod:
    """``Q^dimension`` with an invertible rational matrix ``phi``."""

    dimension: int
    phi: tuple

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.phi)
        if len(rows) != self.dimension or any(len(r) != self.dimension for r in rows):
            raise DimensionMismatch(f"phi must be {self.dimension}x{self.dimension}")
        object.__setattr__(self, "phi", rows)
        if qlinalg.det(rows) == 0:
            raise NotAutomorphism("phi is singular")

    def phi_list(self) -> list:
        return [list(r) for r in self.phi]

    def phi_power(self, k: int) -> list:
        return qlinalg.power(self.phi_list(), k)


def _root_of_unity_orders(n: int) -> list:
    # totient(m) >= sqrt(m / 2), so every m with totient(m) <= n satisfies m <= 2 n^2
    return [m for m in range(1, 2 * n * n + 3) if totient(m) <= n]


def _periodic_exponent(n: int) -> int:
    return math.lcm(*_root_of_unity_orders(n)) if n else 1


def gamma_star_subspace(v: QMod) -> list:
    """Basis of the sum of ``ker(phi^m - 1)`` over all ``m`` with totient(m) <= dimension."""
    n = v.dimension
    vectors = []
    for m in _root_of_unity_orders(n):
        A = qlinalg.sub(v.phi_power(m), qlinalg.identity(n))
        vectors.extend(qlinalg.kernel(A, n))
    return qlinalg.column_basis(vectors, n)


def _restrict(v: QMod, basis: list) -> QMod:
    k = len(basis)
    B = qlinalg.transpose(basis, k, v.dimension)
    cols = []
    for b in basis:
        image = qlinalg.matvec(v.phi_list(), b)
        cols.append(qlinalg.solve(B, image, k))
    return QMod(k, qlinalg.transpose(cols, k, k))


def rational_gamma_star(v: QMod) -> QMod:
    """Largest phi-stable subspace on which phi acts with finite order, with phi restricted."""
    return _restrict(v, gamma_star_subspace(v))


def coinvariants_tower_projection(v: QMod) -> list:
    """Rows of a surjection ``Q^n -> Q^k`` whose kernel is ``im(phi^L - 1)``.

    ``L`` is the lcm of every order a root of unity can have in dimension n,
    so the quotient is the largest one on which some power of phi is trivial.
    """
    n = v.dimension
    L = _periodic_exponent(n)
    A = qlinalg.sub(v.phi_power(L), qlinalg.identity(n))
    # the image of A is killed exactly by the kernel of A^T
    return qlinalg.kernel(qlinalg.transpose(A, n, n), n)


def rational_coinvariants_tower(v: QMod) -> QMod:
    P = coinvariants_tower_projection(v)
    k = len(P)
    if k == 0:
        return QMod(0, ())
    # induced phi_q satisfies phi_q P = P phi
    PT = qlinalg.transpose(P, k, v.dimension)
    Pphi = qlinalg.matmul(P, v.phi_list(), v.dimension)
    rows = []
    for r in Pphi:
        # solve x^T P = r, i.e. P^T x = r^T
        rows.append(qlinalg.solve(PT, r, k))
    return QMod(k, rows)
