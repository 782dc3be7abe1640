"""Matrix groups over F_q and their conjugation actions on 2x2 matrix spaces."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Optional, Sequence

import numpy as np

from .gf import FieldSpec
from .mpoly import LinearSubstitution, Poly, RingSpec, apply_substitution, poly_product, to_text

Mat2 = tuple[int, int, int, int]  # row-major
Matrix = tuple[tuple[int, ...], ...]

ENUMERATION_CAP = 16
ABELIANIZATION_CAP = 10 ** 4


class UnsupportedAction(ValueError):
    pass


class Group(str, enum.Enum):
    GL2 = "gl2"
    SL2 = "sl2"
    O2 = "o2"
    UNIPOTENT = "unipotent"
    TRIVIAL = "trivial"


class Space(str, enum.Enum):
    GL2 = "gl2"
    SL2 = "sl2"
    SYMMETRIC = "symmetric"
    ALTERNATING = "alternating"

    @property
    def variables(self) -> tuple[str, ...]:
        return _SPACE_VARS[self]

    def ring(self, F: FieldSpec) -> RingSpec:
        return RingSpec(F, self.variables)

    def basis(self, F: FieldSpec) -> list[Mat2]:
        m1 = F.neg(1)
        return {
            Space.GL2: [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)],
            Space.SL2: [(1, 0, 0, m1), (0, 1, 0, 0), (0, 0, 1, 0)],
            Space.SYMMETRIC: [(1, 0, 0, 0), (0, 1, 1, 0), (0, 0, 0, 1)],
            Space.ALTERNATING: [(0, 1, m1, 0)],
        }[self]

    @property
    def positions(self) -> tuple[int, ...]:
        """Entry (row-major index) read off by each coordinate variable."""
        return {Space.GL2: (0, 1, 2, 3), Space.SL2: (0, 1, 2),
                Space.SYMMETRIC: (0, 1, 3), Space.ALTERNATING: (1,)}[self]


_SPACE_VARS = {
    Space.GL2: ("a", "b", "c", "d"),
    Space.SL2: ("a", "b", "c"),
    Space.SYMMETRIC: ("a", "b", "d"),
    Space.ALTERNATING: ("b",),
}

PAIRINGS = {
    Group.GL2: {Space.GL2, Space.SL2},
    Group.SL2: {Space.GL2, Space.SL2},
    Group.O2: {Space.GL2, Space.SYMMETRIC, Space.ALTERNATING},
    Group.UNIPOTENT: {Space.GL2, Space.SL2},
    Group.TRIVIAL: set(Space),
}


# -- 2x2 matrices --------------------------------------------------------

def mat_mul(F: FieldSpec, x: Mat2, y: Mat2) -> Mat2:
    a, b, c, d = x
    e, f, g, h = y
    return (F.add(F.mul(a, e), F.mul(b, g)), F.add(F.mul(a, f), F.mul(b, h)),
            F.add(F.mul(c, e), F.mul(d, g)), F.add(F.mul(c, f), F.mul(d, h)))


def mat_det(F: FieldSpec, x: Mat2) -> int:
    a, b, c, d = x
    return F.sub(F.mul(a, d), F.mul(b, c))


def mat_inv(F: FieldSpec, x: Mat2) -> Mat2:
    a, b, c, d = x
    di = F.inv(mat_det(F, x))
    return (F.mul(d, di), F.neg(F.mul(b, di)), F.neg(F.mul(c, di)), F.mul(a, di))


def mat_transpose(x: Mat2) -> Mat2:
    return (x[0], x[2], x[1], x[3])


def identity2() -> Mat2:
    return (1, 0, 0, 1)


def o2_element(F: FieldSpec, s: int, t: int, eps: int) -> Mat2:
    """The orthogonal matrix [[s, t], [-eps t, eps s]]."""
    return (s, t, F.neg(F.mul(eps, t)), F.mul(eps, s))


def enumerate_group(group: Group, F: FieldSpec) -> list[Mat2]:
    q = F.q
    if group is Group.TRIVIAL:
        return [identity2()]
    if group is Group.UNIPOTENT:
        return [(1, x, 0, 1) for x in F.elements()]
    if group is Group.O2:
        signs = [1] if F.p == 2 else [1, F.neg(1)]
        out = []
        for eps in signs:
            for s in F.elements():
                for t in F.elements():
                    if F.add(F.mul(s, s), F.mul(t, t)) == 1:
                        out.append(o2_element(F, s, t, eps))
        return out
    if q > ENUMERATION_CAP:
        raise ValueError(f"full enumeration of {group.value} is capped at q <= {ENUMERATION_CAP}")
    out = []
    for a in F.elements():
        for b in F.elements():
            for c in F.elements():
                for d in F.elements():
                    det = F.sub(F.mul(a, d), F.mul(b, c))
                    if det and (group is Group.GL2 or det == 1):
                        out.append((a, b, c, d))
    return out


def o2_order(q: int) -> int:
    if q % 2 == 0:
        return q
    return 2 * (q - 1) if q % 4 == 1 else 2 * (q + 1)


def group_order(group: Group, q: int) -> int:
    gl = (q * q - 1) * (q * q - q)
    return {Group.GL2: gl, Group.SL2: gl // (q - 1), Group.O2: o2_order(q), Group.UNIPOTENT: q, Group.TRIVIAL: 1}[group]


def named_generators(group: Group, F: FieldSpec) -> list[Mat2]:
    """Small generating sets: a torus element, a transvection and a Weyl element."""
    g = F.generator
    t = (1, 1, 0, 1)
    if group is Group.GL2:
        return [(g, 0, 0, 1), (0, 1, 1, 0), t]
    if group is Group.SL2:
        return [(g, 0, 0, F.inv(g)), (0, 1, F.neg(1), 0), t]
    raise ValueError("named generators exist only for GL2 and SL2")


# -- the induced action on coordinates ------------------------------------

def substitution_matrix(F: FieldSpec, sigma: Mat2, space: Space) -> Matrix:
    """Row v holds the image of coordinate v, read from sigma^-1 Y sigma."""
    si = mat_inv(F, sigma)
    rows = []
    basis = space.basis(F)
    for pos in space.positions:
        row = []
        for B in basis:
            row.append(mat_mul(F, mat_mul(F, si, B), sigma)[pos])
        rows.append(tuple(row))
    if space is not Space.GL2:
        _check_stable(F, sigma, space, si)
    return tuple(rows)


def _check_stable(F: FieldSpec, sigma: Mat2, space: Space, si: Mat2):
    # the conjugated basis must stay inside the span; compare full matrices
    basis = space.basis(F)
    for B in basis:
        img = mat_mul(F, mat_mul(F, si, B), sigma)
        coords = [img[p] for p in space.positions]
        rebuilt = [0, 0, 0, 0]
        for c, Bv in zip(coords, basis):
            rebuilt = [F.add(r, F.mul(c, x)) for r, x in zip(rebuilt, Bv)]
        if tuple(rebuilt) != img:
            raise UnsupportedAction(f"{space.value} is not stable under this matrix")


def _mat_compose(F: FieldSpec, x: Matrix, y: Matrix) -> Matrix:
    n = len(y[0])
    out = []
    for row in x:
        acc = [0] * n
        for k, c in enumerate(row):
            if c:
                for j, d in enumerate(y[k]):
                    if d:
                        acc[j] = F.add(acc[j], F.mul(c, d))
        out.append(tuple(acc))
    return tuple(out)


def _identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def closure(F: FieldSpec, gens: Iterable[Matrix], n: int, limit: Optional[int] = None) -> set[Matrix]:
    gens = list(gens)
    seen = {_identity(n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _mat_compose(F, x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if limit is not None and len(seen) > limit:
                        return seen
        frontier = nxt
    return seen


def greedy_generators(F: FieldSpec, elements: Sequence[Matrix]) -> list[Matrix]:
    n = len(elements[0])
    gens: list[Matrix] = []
    span = {_identity(n)}
    for x in elements:
        if x not in span:
            gens.append(x)
            span = closure(F, gens, n)
            if len(span) == len(set(elements)):
                break
    return gens


@dataclass(frozen=True, eq=False)
class GroupAction:
    group: Group
    space: Space
    field: FieldSpec
    substitutions: tuple[LinearSubstitution, ...]
    generators: tuple[LinearSubstitution, ...]
    source_order: int
    image_order: int
    with_tau_ad: bool = False
    elements: tuple[Mat2, ...] = field(default=(), repr=False)

    @property
    def ring(self) -> RingSpec:
        return self.space.ring(self.field)

    @property
    def q(self) -> int:
        return self.field.q

    def describe(self) -> dict:
        gid = self.group.value + ("+tau_ad" if self.with_tau_ad else "")
        return {"id": gid, "q": self.q, "source_order": self.source_order, "image_order": self.image_order}

    def fixes(self, f: Poly, exhaustive: bool = False) -> bool:
        subs = self.substitutions if exhaustive else self.generators
        return all(apply_substitution(f, s) == f for s in subs)


def conjugation_action(group: Group, space: Space, F: FieldSpec) -> GroupAction:
    if space not in PAIRINGS[group]:
        raise UnsupportedAction(f"{group.value} acting on {space.value} is not a supported pairing")
    elements = enumerate_group(group, F)
    ring = space.ring(F)
    image: dict[Matrix, None] = {}
    for sigma in elements:
        image.setdefault(substitution_matrix(F, sigma, space), None)
    mats = list(image)
    if group in (Group.GL2, Group.SL2):
        gen_mats = []
        for sigma in named_generators(group, F):
            m = substitution_matrix(F, sigma, space)
            if m != _identity(ring.nvars) and m not in gen_mats:
                gen_mats.append(m)
        if len(closure(F, gen_mats, ring.nvars)) != len(mats):  # pragma: no cover - checked in tests
            gen_mats = greedy_generators(F, mats)
    else:
        gen_mats = greedy_generators(F, mats)
    subs = tuple(LinearSubstitution(ring, m) for m in mats)
    gens = tuple(LinearSubstitution(ring, m) for m in gen_mats)
    return GroupAction(group, space, F, subs, gens, len(elements), len(mats), elements=tuple(elements))


def tau_ad_substitution(F: FieldSpec) -> LinearSubstitution:
    ring = Space.GL2.ring(F)
    return LinearSubstitution(ring, ((0, 0, 0, 1), (0, 1, 0, 0), (0, 0, 1, 0), (1, 0, 0, 0)))


def extend_gamma(action: GroupAction) -> GroupAction:
    if action.space is not Space.GL2:
        raise UnsupportedAction("tau_ad acts on gl2 coordinates only")
    F = action.field
    tau = tau_ad_substitution(F).matrix
    gens = [s.matrix for s in action.generators] + [tau]
    mats = closure(F, gens, 4)
    ordered = [s.matrix for s in action.substitutions]
    ordered += sorted(mats - set(ordered))
    ring = action.ring
    return GroupAction(action.group, action.space, F,
                       tuple(LinearSubstitution(ring, m) for m in ordered),
                       tuple(LinearSubstitution(ring, m) for m in gens),
                       action.source_order, len(ordered), with_tau_ad=True,
                       elements=action.elements)


# -- fixed spaces and reflections -----------------------------------------

def _minus_identity(F: FieldSpec, m: Matrix) -> np.ndarray:
    A = np.array(m, dtype=np.int64)
    n = A.shape[0]
    A[np.arange(n), np.arange(n)] = F.sub(A[np.arange(n), np.arange(n)], np.ones(n, dtype=np.int64))
    return A


def fixed_subspace_dim(action: GroupAction, subgroup: Sequence[Mat2]) -> int:
    """Dimension of the subspace of matrices fixed by every element of
    ``subgroup``: the common right kernel of (s - id)."""
    F = action.field
    n = action.ring.nvars
    if not subgroup:
        return n
    stacked = np.concatenate([_minus_identity(F, substitution_matrix(F, s, action.space))
                              for s in subgroup])
    return n - F.rank(stacked)


def move_rank(F: FieldSpec, s: LinearSubstitution) -> int:
    return F.rank(_minus_identity(F, s.matrix))


def pseudoreflection_scan(action: GroupAction) -> int:
    F = action.field
    return sum(1 for s in action.substitutions if move_rank(F, s) == 1)


def representation_dets(action: GroupAction) -> set[int]:
    return {s.det() for s in action.substitutions}


# -- abelianization ---------------------------------------------------------

def _mult_table(F: FieldSpec, mats: Sequence[Matrix]) -> np.ndarray:
    n = len(mats)
    k = len(mats[0])
    A = np.array(mats, dtype=np.int64)  # (n, k, k)
    left = A.reshape(n * k, k)
    right = A.transpose(1, 0, 2).reshape(k, n * k)
    P = F.matmul(left, right).reshape(n, k, n, k).transpose(0, 2, 1, 3).reshape(n, n, k * k)
    base = F.q
    keys = np.zeros((n, n), dtype=object if base ** (k * k) >= 2 ** 62 else np.int64)
    for j in range(k * k):
        keys = keys * base + P[:, :, j]
    own = np.zeros(n, dtype=keys.dtype)
    flat = A.reshape(n, k * k)
    for j in range(k * k):
        own = own * base + flat[:, j]
    order = np.argsort(own)
    pos = np.searchsorted(own[order], keys.ravel()).reshape(n, n)
    return order[pos].astype(np.int64)


def _closure_idx(table: np.ndarray, gens: Iterable[int], identity: int) -> np.ndarray:
    n = table.shape[0]
    inside = np.zeros(n, dtype=bool)
    inside[identity] = True
    gens = list(gens)
    frontier = [identity]
    while frontier:
        cand = np.unique(table[np.array(frontier)][:, gens].ravel()) if gens else np.array([], dtype=np.int64)
        new = cand[~inside[cand]]
        inside[new] = True
        frontier = list(new)
    return inside


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def invariant_factors_from_orders(orders: Sequence[int]) -> list[int]:
    """Invariant factors d_1 | d_2 | ... of a finite abelian group, given
    the order of each of its elements."""
    size = len(orders)
    per_prime: dict[int, list[int]] = {}
    for ell in _prime_factors(size):
        top = 0
        while size % ell ** (top + 1) == 0:
            top += 1
        # c[k] = log_ell #{x : x^(ell^k) = 1}
        c = []
        for k in range(top + 1):
            cnt, lg = sum(1 for o in orders if ell ** k % o == 0), 0
            while cnt > 1:
                cnt //= ell
                lg += 1
            c.append(lg)
        ge = [c[k] - c[k - 1] for k in range(1, top + 1)] + [0]  # factors of order >= ell^k
        exps = []
        for k in range(1, top + 1):
            exps += [k] * (ge[k - 1] - ge[k])
        per_prime[ell] = sorted(exps, reverse=True)
    width = max((len(v) for v in per_prime.values()), default=0)
    factors = []
    for i in range(width):
        d = 1
        for ell, exps in per_prime.items():
            if i < len(exps):
                d *= ell ** exps[i]
        factors.append(d)
    return sorted(factors)


def abelianization(F: FieldSpec, mats: Sequence[Matrix]) -> list[int]:
    mats = list(mats)
    n = len(mats)
    if n > ABELIANIZATION_CAP:
        raise ValueError(f"group order {n} exceeds the cap {ABELIANIZATION_CAP}")
    table = _mult_table(F, mats)
    identity = mats.index(_identity(len(mats[0])))
    inverse = np.argmax(table == identity, axis=1)
    # commutator subgroup, grown from commutators not yet inside
    commutators = np.unique(table[table[np.ix_(inverse, inverse)], table])
    gens: list[int] = []
    inside = _closure_idx(table, gens, identity)
    for c in commutators.tolist():
        if not inside[c]:
            gens.append(c)
            inside = _closure_idx(table, gens, identity)
    N = np.flatnonzero(inside)
    rep = table[:, N].min(axis=1)
    cosets = sorted(set(rep.tolist()))
    orders = []
    for g in cosets:
        k, cur = 1, g
        while not inside[cur]:
            cur = table[cur, g]
            k += 1
        orders.append(k)
    return invariant_factors_from_orders(orders)


def hom_count(factors: Sequence[int], m: int) -> int:
    """|Hom(prod Z/d_i, Z/m)|."""
    out = 1
    for d in factors:
        out *= gcd(d, m)
    return out


def class_group_order(action: GroupAction) -> int:
    factors = abelianization(action.field, [s.matrix for s in action.substitutions])
    return hom_count(factors, action.q - 1)


# -- orbits ----------------------------------------------------------------

def orbit(f: Poly, action: GroupAction) -> list[Poly]:
    seen: dict[Poly, None] = {}
    for s in action.substitutions:
        seen.setdefault(apply_substitution(f, s), None)
    return sorted(seen, key=to_text)


def orbit_product(f: Poly, action: GroupAction) -> Poly:
    return poly_product(f.ring, orbit(f, action))


def omega_seed(F: FieldSpec, tau: int, delta: int) -> Poly:
    """The linear form with parameters A = 0, B = 1."""
    ring = Space.GL2.ring(F)
    return ring.linear([0, 1, F.neg(delta), tau])
