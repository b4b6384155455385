"""Level-m complexes computing R gamma_* for a G-module.

At level ``m`` the object is ``M^m`` with components ``x^(i)``, i mod m.
``t`` moves component i to i+1 applying phi; the two-term complex
``M^m --(t - 1)--> M^m`` has cohomology ``ker(phi^m - 1)`` and
``coker(phi^m - 1)``.  Levels are linked by ``delta`` (for the complex)
and by norms (for the coinvariants), and the colimits over the
divisibility order are probed along ``lcm(1..k)``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from . import qlinalg
from .errors import IdentityViolation, NotContinuous
from .fga import (
    FgAbGroup,
    Homomorphism,
    cokernel,
    direct_sum,
    identity_hom,
    kernel,
    lift_through,
    make_hom,
    trivial,
)
from .gmod import GModule, QMod
from .matrix import Matrix


@dataclass
class Verdict:
    passed: bool
    checked: int = 0
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.passed


# ---------------------------------------------------------------------------
# level objects


@dataclass(frozen=True, eq=False)
class LevelObject:
    base: GModule
    level: int

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level must be >= 1")

    @property
    def group(self) -> FgAbGroup:
        return _level_group(self.base.underlying, self.level)

    def component(self, i: int, x: Sequence[int]) -> tuple:
        """The vector with ``x`` in component ``i mod level``."""
        n = self.base.n
        out = [0] * (n * self.level)
        i %= self.level
        out[i * n:(i + 1) * n] = x
        return tuple(out)

    def components(self, v: Sequence[int]) -> list:
        n = self.base.n
        return [tuple(v[i * n:(i + 1) * n]) for i in range(self.level)]


@lru_cache(maxsize=256)
def _level_group(g: FgAbGroup, m: int) -> FgAbGroup:
    return direct_sum(*([g] * m))


def level_object(m: int, base: GModule) -> LevelObject:
    return LevelObject(base, m)


def _block_map(src_level: int, dst_level: int, n: int, entries) -> Matrix:
    """Block matrix with ``entries[(dst, src)]`` an n x n block."""
    rows = [[0] * (n * src_level) for _ in range(n * dst_level)]
    for (d, s), B in entries.items():
        for a in range(n):
            for b in range(n):
                rows[d * n + a][s * n + b] += B[a, b]
    return Matrix.from_rows(rows, n * src_level)


def t_matrix(m: int, base: GModule) -> Matrix:
    return _block_map(m, m, base.n, {((i + 1) % m, i): base.phi.matrix for i in range(m)})


def map_t(m: int, base: GModule) -> Homomorphism:
    """``f^(i) -> (phi f)^(i+1)``."""
    g = level_object(m, base).group
    return make_hom(g, g, t_matrix(m, base))


def t_minus_one(m: int, base: GModule) -> Homomorphism:
    t = map_t(m, base)
    return t - identity_hom(t.source)


def delta_matrix(m: int, n: int, size: int) -> Matrix:
    """Matrix of ``delta_m^n`` for a base with ``size`` generators."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be >= 1")
    I = Matrix.identity(size)
    return _block_map(m, m * n, size, {(i + m * j, i): I for i in range(m) for j in range(n)})


def map_delta(m: int, n: int, base: GModule) -> Homomorphism:
    """Level m -> level mn, ``f^(i) -> sum_j f^(i + m j)``."""
    M = delta_matrix(m, n, base.n)
    return make_hom(level_object(m, base).group, level_object(m * n, base).group, M)


def rotation_matrix(a: int, m: int, size: int) -> Matrix:
    I = Matrix.identity(size)
    return _block_map(m, m, size, {((i - a) % m, i): I for i in range(m)})


def rotation(a: int, m: int, base: GModule) -> Homomorphism:
    """``f^(i) -> f^(i - a)``, no phi applied."""
    g = level_object(m, base).group
    return make_hom(g, g, rotation_matrix(a, m, base.n))


@lru_cache(maxsize=1024)
def fixed_points(m: int, base: GModule):
    """``ker(phi^m - 1)`` with its embedding into the base."""
    return kernel(base.phi_minus_one(m))


def map_Delta(m: int, base: GModule) -> Homomorphism:
    """``ker(phi^m - 1) -> level m``, ``f -> sum_i (phi^i f)^(i)``."""
    K, emb = fixed_points(m, base)
    blocks = [[base.phi_power_matrix(i) @ emb.matrix] for i in range(m)]
    return make_hom(K, level_object(m, base).group, Matrix.block(blocks))


def _S_matrix(m: int, base: GModule) -> Matrix:
    return Matrix.block([[base.phi_power_matrix(-i) for i in range(m)]])


def map_S(m: int, base: GModule) -> Homomorphism:
    """Level m -> base, ``f^(i) -> phi^(-i) f``."""
    return make_hom(level_object(m, base).group, base.underlying, _S_matrix(m, base))


def norm_matrix(m: int, n: int, base: GModule) -> Matrix:
    total = Matrix(base.n, base.n)
    for j in range(n):
        total = total + base.phi_power_matrix(-j * m)
    return total


def map_norm(m: int, n: int, base: GModule) -> Homomorphism:
    """``f -> sum_{j<n} phi^(-j m) f`` on the base."""
    g = base.underlying
    return make_hom(g, g, norm_matrix(m, n, base))


def descended_norm(m: int, n: int, base: GModule) -> Homomorphism:
    """The norm as a map ``coker(phi^m - 1) -> coker(phi^(mn) - 1)``; construction checks descent."""
    Qm, _ = cokernel(base.phi_minus_one(m))
    Qmn, _ = cokernel(base.phi_minus_one(m * n))
    return make_hom(Qm, Qmn, norm_matrix(m, n, base))


# ---------------------------------------------------------------------------
# level cohomology


@dataclass(frozen=True, eq=False)
class LevelCohomology:
    level: int
    H0: FgAbGroup
    H1: FgAbGroup
    h0_embedding: Homomorphism       # ker(t-1) -> level group
    h1_projection: Homomorphism      # level group -> coker(t-1)
    delta_iso: Homomorphism          # ker(phi^m - 1) -> H0
    s_iso: Homomorphism              # H1 -> coker(phi^m - 1)


def level_cohomology(m: int, base: GModule) -> LevelCohomology:
    """Cohomology of the level-m complex, with both comparison isomorphisms checked."""
    d = t_minus_one(m, base)
    H0, emb = kernel(d)
    H1, proj = cokernel(d)
    Delta = map_Delta(m, base)
    try:
        delta_iso = lift_through(Delta, emb)
    except Exception as exc:
        raise IdentityViolation(f"level {m}: Delta does not land in ker(t-1)") from exc
    if not delta_iso.is_isomorphism():
        raise IdentityViolation(f"level {m}: Delta is not onto ker(t-1)")
    Qm, _ = cokernel(base.phi_minus_one(m))
    try:
        s_iso = make_hom(H1, Qm, _S_matrix(m, base))
    except Exception as exc:
        raise IdentityViolation(f"level {m}: S does not descend to coker(t-1)") from exc
    if not s_iso.is_isomorphism():
        raise IdentityViolation(f"level {m}: S is not an isomorphism on coker(t-1)")
    return LevelCohomology(m, H0, H1, emb, proj, delta_iso, s_iso)


# ---------------------------------------------------------------------------
# colimits along the chain lcm(1..k)


def cofinal_chain(max_chain: int) -> list:
    """Distinct values of ``lcm(1..k)`` for ``k <= max_chain``."""
    if max_chain < 1:
        raise ValueError("max_chain must be >= 1")
    chain = []
    m = 1
    for k in range(1, max_chain + 1):
        m = math.lcm(m, k)
        if not chain or chain[-1] != m:
            chain.append(m)
    return chain


@dataclass(frozen=True)
class Colimit:
    kind: str                         # FinitelyGenerated | RationalizedFree | Unclassified
    group: Optional[FgAbGroup] = None
    rank: Optional[int] = None

    def __repr__(self):
        if self.kind == "FinitelyGenerated":
            return f"FinitelyGenerated({self.group!r})"
        if self.kind == "RationalizedFree":
            return f"RationalizedFree({self.rank})"
        return "Unclassified"


@dataclass
class DirectedSystemReport:
    chain: list
    objects: list
    transitions: list
    stabilized: bool
    stabilization_index: Optional[int]
    colimit: Colimit
    certified: bool = False  # True when phi^m acts trivially from the stabilization level on

    @property
    def colimit_classification(self) -> Colimit:
        return self.colimit


def _phi_trivial_at(base: GModule, m: int) -> bool:
    return base.phi_power(m).equals(identity_hom(base.underlying))


def _first_stable(flags: list) -> Optional[int]:
    """Smallest s such that flags[s:] are all true and non-empty."""
    s = len(flags)
    while s > 0 and flags[s - 1]:
        s -= 1
    return s if s < len(flags) else None


def gamma_star(base: GModule, max_chain: int = 8) -> DirectedSystemReport:
    """``colim_m ker(phi^m - 1)`` under inclusions, probed along the chain."""
    chain = cofinal_chain(max_chain)
    pieces = [fixed_points(m, base) for m in chain]
    objects = [K for K, _ in pieces]
    transitions = [lift_through(pieces[k][1], pieces[k + 1][1]) for k in range(len(chain) - 1)]
    s = _first_stable([t.is_isomorphism() for t in transitions])
    if s is None:
        return DirectedSystemReport(chain, objects, transitions, False, None, Colimit("Unclassified"))
    certified = _phi_trivial_at(base, chain[s])
    return DirectedSystemReport(
        chain, objects, transitions, True, s, Colimit("FinitelyGenerated", group=objects[-1]), certified
    )


def _is_multiplication(h: Homomorphism, n: int) -> bool:
    """``h`` is ``n`` times the identity on generators, and that identity is an isomorphism."""
    if h.source.num_generators != h.target.num_generators:
        return False
    try:
        ident = make_hom(h.source, h.target, Matrix.identity(h.source.num_generators))
    except Exception:
        return False
    return ident.is_isomorphism() and h.equals(ident.scale(n))


def r1_gamma_star(base: GModule, max_chain: int = 8) -> DirectedSystemReport:
    """``colim_{m, N} coker(phi^m - 1)`` under norm maps, probed along the chain.

    Once every transition is multiplication by the chain ratio on the whole
    group, the colimit is the group tensored with Q.  Otherwise the verdict
    falls back to stabilization of the images in the last probed level.
    """
    chain = cofinal_chain(max_chain)
    objects = [cokernel(base.phi_minus_one(m))[0] for m in chain]
    transitions = [descended_norm(chain[k], chain[k + 1] // chain[k], base) for k in range(len(chain) - 1)]

    mult = [_is_multiplication(t, chain[k + 1] // chain[k]) for k, t in enumerate(transitions)]
    s = _first_stable(mult)
    if s is not None:
        r = objects[s].free_rank
        colim = Colimit("RationalizedFree", rank=r) if r else Colimit("FinitelyGenerated", group=trivial())
        return DirectedSystemReport(chain, objects, transitions, True, s, colim, _phi_trivial_at(base, chain[s]))

    K = len(objects) - 1
    if K >= 2:
        composites = [None] * (K + 1)
        composites[K] = identity_hom(objects[K])
        for j in range(K - 1, -1, -1):
            composites[j] = composites[j + 1] @ transitions[j]
        same = []
        for j in range(K - 1):
            later = composites[j + 1]
            same.append(all(composites[j].preimage(later.matrix.column(c)) is not None
                            for c in range(later.source.num_generators)))
        s = _first_stable(same)
        if s is not None:
            image = composites[K - 1]
            Ker, emb = kernel(image)
            colim = cokernel(emb)[0]
            return DirectedSystemReport(chain, objects, transitions, True, s, Colimit("FinitelyGenerated", group=colim))
    return DirectedSystemReport(chain, objects, transitions, False, None, Colimit("Unclassified"))


# ---------------------------------------------------------------------------
# comparison with the pure-rotation complex


@dataclass(frozen=True, eq=False)
class TauMap:
    level: int
    degree0: Homomorphism
    degree1: Homomorphism
    rotation_differential: Homomorphism   # rotation by -1, minus 1
    twisted_differential: Homomorphism    # t - 1


def tau(base: GModule, m: int) -> TauMap:
    """``f^(i) -> (phi^i f)^(i)``; requires ``phi^m = 1``."""
    if not _phi_trivial_at(base, m):
        raise NotContinuous(f"phi^{m} is not the identity")
    g = level_object(m, base).group
    T = Matrix.block_diagonal([base.phi_power_matrix(i) for i in range(m)])
    t0 = make_hom(g, g, T)
    rot = rotation(-1, m, base) - identity_hom(g)
    twisted = t_minus_one(m, base)
    if not (t0 @ rot).equals(twisted @ t0):
        raise IdentityViolation("tau is not a chain map")
    return TauMap(m, t0, t0, rot, twisted)


# ---------------------------------------------------------------------------
# the comparison with Z^c over the trivial module Z


@dataclass(frozen=True)
class ZcTarget:
    """An element ``(u, v)`` of ``Q/Z + Q``, with ``u`` kept in ``[0, 1)``."""

    u: Fraction
    v: Fraction

    def __post_init__(self):
        object.__setattr__(self, "u", Fraction(self.u) % 1)
        object.__setattr__(self, "v", Fraction(self.v))

    def __add__(self, other):
        return ZcTarget(self.u + other.u, self.v + other.v)

    def __sub__(self, other):
        return ZcTarget(self.u - other.u, self.v - other.v)

    def __neg__(self):
        return ZcTarget(-self.u, -self.v)

    def act(self, j: int) -> "ZcTarget":
        """Frobenius power ``j`` acting by ``(u, v) -> (u + j v, v)``."""
        return ZcTarget(self.u + j * self.v, self.v)

    @classmethod
    def zero(cls):
        return cls(Fraction(0), Fraction(0))


def alpha(m: int, x: Sequence[int]) -> ZcTarget:
    """``x^(i) -> (x/2 + i x/m mod 1, x/m)``, extended additively over the components."""
    if len(x) != m:
        raise ValueError(f"level-{m} vector must have {m} entries")
    total = ZcTarget.zero()
    for i, xi in enumerate(x):
        if xi:
            total = total + ZcTarget(Fraction(xi, 2) + Fraction(i * xi, m), Fraction(xi, m))
    return total


def g_map(r: Fraction) -> ZcTarget:
    return ZcTarget(Fraction(r), Fraction(0))


def p_map(z: ZcTarget) -> Fraction:
    return z.v


def s_prime(m: int, x: Sequence[int]) -> Fraction:
    """``(1/m) S_m`` over the trivial module Z."""
    return Fraction(sum(x), m)


def zc_ladder_check(m: int, samples: int = 50, rng: random.Random = None, bound: int = 100) -> Verdict:
    """Check the three squares of the ladder comparing the level complex with ``Q -> Q/Z + Q``.

    Samples are every unit vector ``x^(i)`` plus random vectors with entries in ``[-bound, bound]``.
    """
    from .fga import free
    from .gmod import trivial_module

    rng = rng or random.Random(0)
    Z = trivial_module(free(1))
    d = t_minus_one(m, Z)
    Delta = map_Delta(m, Z)
    failures = []
    vectors = [tuple(1 if k == i else 0 for k in range(m)) for i in range(m)]
    vectors += [tuple(rng.randint(-bound, bound) for _ in range(m)) for _ in range(samples)]
    checked = 0
    for x in range(-3, 4):
        # left square: S'(Delta(x)) = x
        checked += 1
        if s_prime(m, Delta.matrix.apply((x,))) != x:
            failures.append({"square": "left", "level": m, "x": x})
    for v in vectors:
        checked += 1
        lhs = alpha(m, d.matrix.apply(v))
        rhs = g_map(s_prime(m, v))
        if lhs != rhs:
            failures.append({"square": "middle", "level": m, "x": list(v)})
        checked += 1
        if p_map(alpha(m, v)) != s_prime(m, v):
            failures.append({"square": "right", "level": m, "x": list(v)})
    return Verdict(not failures, checked, failures)


# ---------------------------------------------------------------------------
# rational level complexes and the action of e


def _q_level_t(v: QMod, m: int) -> list:
    n = v.dimension
    P = v.phi_list()
    T = [[Fraction(0)] * (n * m) for _ in range(n * m)]
    for i in range(m):
        j = (i + 1) % m
        for a in range(n):
            for b in range(n):
                T[j * n + a][i * n + b] += P[a][b]
    return T


def rational_e_matrix(v: QMod, m: int) -> list:
    """Action of ``e`` on ``H^0 + H^1`` of the level-m complex of ``v``, in V-coordinates.

    ``H^0`` is identified with ``V`` through ``Delta_m`` and ``H^1`` through
    ``(1/m) S_m``.  Requires ``phi^m = 1``.  The boundary ``H^0 -> H^1`` is
    computed by lifting through ``V (x) N`` and pulling back, so the lower-left
    block is an honest computation; the remaining blocks map into or out of
    cohomology that vanishes and are zero.
    """
    n = v.dimension
    if v.phi_power(m) != qlinalg.identity(n):
        raise NotContinuous(f"phi^{m} is not the identity")
    N = n * m
    T = _q_level_t(v, m)
    D = qlinalg.sub(T, qlinalg.identity(N))
    if N - qlinalg.rank(D, N) != n:
        raise IdentityViolation("dim ker(t - 1) differs from dim V")
    P = v.phi_list()

    # phi on V (x) N is (x, y) -> (phi x + phi y, phi y); level-m t on it
    def t_N(x_part, y_part):
        out_x = [[Fraction(0)] * n for _ in range(m)]
        out_y = [[Fraction(0)] * n for _ in range(m)]
        for i in range(m):
            j = (i + 1) % m
            s = [a + b for a, b in zip(x_part[i], y_part[i])]
            out_x[j] = qlinalg.matvec(P, s)
            out_y[j] = qlinalg.matvec(P, y_part[i])
        return out_x, out_y

    phi_inv_powers = [v.phi_power(-i) for i in range(m)]
    block = []
    for k in range(n):
        e_k = [Fraction(int(a == k)) for a in range(n)]
        # Delta_m(e_k) in ker(t - 1)
        c = [qlinalg.matvec(v.phi_power(i), e_k) for i in range(m)]
        flat = [x for comp in c for x in comp]
        if any(qlinalg.matvec(D, flat)):
            raise IdentityViolation("Delta(e_k) is not a cocycle")
        zero = [[Fraction(0)] * n for _ in range(m)]
        tx, ty = t_N(zero, c)
        # (t_N - 1)(0, c) = (tx - 0, ty - c); second part vanishes since c is a cocycle
        if any(a - b for comp_a, comp_b in zip(ty, c) for a, b in zip(comp_a, comp_b)):
            raise IdentityViolation("boundary does not pull back to the sub-object")
        pulled = tx
        # class in coker(t - 1) read through (1/m) S_m
        col = [Fraction(0)] * n
        for i in range(m):
            w = qlinalg.matvec(phi_inv_powers[i], pulled[i])
            col = [a + b for a, b in zip(col, w)]
        block.append([x / m for x in col])
    lower_left = qlinalg.transpose(block, n, n)
    zero = [[Fraction(0)] * n for _ in range(n)]
    return [zero[i] + zero[i] for i in range(n)] + [lower_left[i] + zero[i] for i in range(n)]


# ---------------------------------------------------------------------------
# finite truncations of the shift module


def shift_truncation(A: FgAbGroup, bound: int) -> GModule:
    """``+_{|i| <= bound} A`` with phi the cyclic shift of the summands.

    Only a finite stand-in for the infinite shift sheaf: the cyclic shift has
    finite order ``2 bound + 1``, so its invariants are not zero.
    """
    from .gmod import make_gmodule

    L = 2 * bound + 1
    n = A.num_generators
    I = Matrix.identity(n)
    group = direct_sum(*([A] * L))
    M = _block_map(L, L, n, {((i + 1) % L, i): I for i in range(L)})
    return make_gmodule(group, M)
