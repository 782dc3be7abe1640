"""Named invariants for every (group, space) row of the case table."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, prod
from typing import Optional

from .gf import FieldSpec, IrreducibleQuadratic, find_irreducible_quadratic
from .groups import Group, GroupAction, Space, conjugation_action, orbit_product, o2_order, PAIRINGS
from .mpoly import Poly, RingSpec, jacobian_det, poly_product, project, sqrt_char2
from .steenrod import steenrod_component

POLYNOMIAL = "polynomial"
HYPERSURFACE = "hypersurface"


class DegenerateJacobian(ValueError):
    pass


@dataclass(frozen=True)
class CaseSpec:
    group: Group
    space: Space
    field: FieldSpec

    def __post_init__(self):
        if self.space not in PAIRINGS[self.group] or self.group in (Group.UNIPOTENT, Group.TRIVIAL):
            raise ValueError(f"{self.group.value} on {self.space.value} is not a case of the table")

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def odd(self) -> bool:
        return self.field.p != 2

    def describe(self) -> dict:
        return {"group": self.group.value, "space": self.space.value, "q": self.q}

    def __str__(self):
        return f"{self.group.value}/{self.space.value}/q={self.q}"

    def action(self) -> GroupAction:
        return conjugation_action(self.group, self.space, self.field)


@dataclass
class InvariantSuite:
    case: CaseSpec
    names: tuple[str, ...]
    primaries: tuple[Poly, ...]
    expected_type: str
    expected_secondary_degree: Optional[int] = None
    secondary: Optional[Poly] = None
    secondary_name: str = "h"
    jacobian: Optional[Poly] = None
    extras: dict[str, Poly] = field(default_factory=dict)
    note: str = ""

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(f.degree() for f in self.primaries)

    @property
    def ring(self) -> RingSpec:
        return self.primaries[0].ring

    def named(self) -> dict[str, Poly]:
        out = dict(zip(self.names, self.primaries))
        if self.jacobian is not None:
            out["h"] = self.jacobian
        if self.secondary is not None and self.secondary_name not in out:
            out[self.secondary_name] = self.secondary
        out.update(self.extras)
        return out


def traceless_projection(F: FieldSpec) -> tuple[RingSpec, dict[str, Poly]]:
    T = Space.SL2.ring(F)
    a, b, c = T.gens()
    return T, {"a": a, "b": b, "c": c, "d": -a}


def symmetric_projection(F: FieldSpec) -> tuple[RingSpec, dict[str, Poly]]:
    T = Space.SYMMETRIC.ring(F)
    a, b, d = T.gens()
    return T, {"a": a, "b": b, "c": b, "d": d}


# -- GL2 on gl2 ----------------------------------------------------------------

def trace_det(ring: RingSpec) -> tuple[Poly, Poly]:
    a, b, c, d = ring.gens()
    return a + d, a * d - b * c


def omega_factor(ring: RingSpec, g: IrreducibleQuadratic, A: int, B: int) -> Poly:
    F = ring.field
    return ring.linear([A, B, F.neg(F.div(g(F, A), B)), F.sub(g.tau, A)])


def gl2_f4(F: FieldSpec, g: IrreducibleQuadratic) -> Poly:
    ring = Space.GL2.ring(F)
    return poly_product(ring, (omega_factor(ring, g, A, B) for A in F.elements() for B in F.nonzero()))


def gl2_primaries(F: FieldSpec, g: Optional[IrreducibleQuadratic] = None) -> InvariantSuite:
    g = g or find_irreducible_quadratic(F)
    q = F.q
    ring = Space.GL2.ring(F)
    a, b, c, d = ring.gens()
    f1, f2 = trace_det(ring)
    f3 = a ** q * d + a * d ** q - b ** q * c - b * c ** q
    f4 = gl2_f4(F, g)
    suite = InvariantSuite(CaseSpec(Group.GL2, Space.GL2, F), ("f1", "f2", "f3", "f4"),
                           (f1, f2, f3, f4), HYPERSURFACE, q * q)
    suite.jacobian = jacobian_secondary(suite)
    if F.p != 2:
        suite.secondary = suite.jacobian
    return suite


def jacobian_secondary(suite: InvariantSuite) -> Poly:
    h = jacobian_det(list(suite.primaries))
    if not h:
        raise DegenerateJacobian(f"the Jacobian of the {suite.case} primaries vanishes")
    return h


# -- SL2, odd q ------------------------------------------------------------------

def half_set(F: FieldSpec) -> list[int]:
    """One element from each pair {B, -B} of nonzero elements."""
    return [B for B in F.nonzero() if B < F.neg(B)]


def _halfroot_scalar(F: FieldSpec) -> int:
    if ((F.q + 1) // 2) % 2 == 1:
        return F.sqrt(F.neg(1))
    return 1


def sl2_f4_and_halfroot(F: FieldSpec, delta: int) -> tuple[Poly, Poly]:
    if F.p == 2:
        raise ValueError("the half-orbit construction needs odd q; even q uses the GL2 description")
    ring = Space.GL2.ring(F)

    def lam(A: int, B: int) -> Poly:
        return ring.linear([A, B, F.neg(F.div(F.add(F.mul(A, A), delta), B)), F.neg(A)])

    f4 = -poly_product(ring, (lam(A, B) for A in F.elements() for B in F.nonzero()))
    f = poly_product(ring, (lam(A, B) for A in F.elements() for B in half_set(F)))
    return f4, f.scale(_halfroot_scalar(F))


def sl2_traceless_f4_and_halfroot(F: FieldSpec, delta: int) -> tuple[Poly, Poly]:
    T = Space.SL2.ring(F)
    two = F.from_int(2)

    def lam(A: int, B: int) -> Poly:
        return T.linear([F.mul(two, A), B, F.neg(F.div(F.add(F.mul(A, A), delta), B))])

    f4 = -poly_product(T, (lam(A, B) for A in F.elements() for B in F.nonzero()))
    f = poly_product(T, (lam(A, B) for A in F.elements() for B in half_set(F)))
    return f4, f.scale(_halfroot_scalar(F))


def sl2_gl2_suite(F: FieldSpec) -> InvariantSuite:
    g = find_irreducible_quadratic(F)
    base = gl2_primaries(F, g)
    f1, f2, f3, _ = base.primaries
    f4, f = sl2_f4_and_halfroot(F, g.delta)
    q = F.q
    suite = InvariantSuite(CaseSpec(Group.SL2, Space.GL2, F), ("f1", "f2", "f3", "sqrt_f4"),
                           (f1, f2, f3, f), HYPERSURFACE, comb(q + 1, 2), extras={"f4": f4})
    suite.jacobian = suite.secondary = jacobian_secondary(suite)
    return suite


# -- traceless matrices -----------------------------------------------------

def traceless_suites(F: FieldSpec, base: InvariantSuite) -> InvariantSuite:
    if base.case.space is not Space.GL2:
        raise ValueError("the traceless suite is projected from a gl2 suite")
    T, assignment = traceless_projection(F)
    det = project(base.primaries[1], T, assignment)
    p1 = steenrod_component(det, 1)
    q = F.q
    group = base.case.group
    case = CaseSpec(group, Space.SL2, F)
    if group is Group.GL2 or F.p == 2:
        pf4 = project(base.primaries[3], T, assignment)
        if F.p == 2:
            return InvariantSuite(case, ("det", "P1_det", "sqrt_pi_f4"), (det, p1, sqrt_char2(pf4)),
                                  POLYNOMIAL, extras={"pi_f4": pf4},
                                  note="same as gl2" if group is Group.SL2 else "")
        suite = InvariantSuite(case, ("det", "P1_det", "pi_f4"), (det, p1, pf4), HYPERSURFACE, q * q)
        suite.jacobian = suite.secondary = jacobian_secondary(suite)
        return suite
    g = find_irreducible_quadratic(F)
    f4t, ft = sl2_traceless_f4_and_halfroot(F, g.delta)
    suite = InvariantSuite(case, ("det", "P1_det", "sqrt_f4"), (det, p1, ft), HYPERSURFACE,
                           comb(q + 1, 2), extras={"f4": f4t})
    suite.jacobian = suite.secondary = jacobian_secondary(suite)
    return suite


# -- orthogonal group ------------------------------------------------------------

def o2_primaries(F: FieldSpec) -> InvariantSuite:
    action = conjugation_action(Group.O2, Space.GL2, F)
    ring = action.ring
    a, b, c, d = ring.gens()
    f1, f2 = trace_det(ring)
    f3 = b - c if F.p == 2 else (b - c) ** 2
    f4 = orbit_product(a, action)
    degs = (1, 2, f3.degree(), f4.degree())
    suite = InvariantSuite(CaseSpec(Group.O2, Space.GL2, F), ("f1", "f2", "f3", "f4"),
                           (f1, f2, f3, f4), HYPERSURFACE, sum(degs) - 4)
    h = jacobian_det([f1, f2, f3, f4])
    suite.jacobian = h if h else None
    if F.p != 2:
        suite.secondary = jacobian_secondary(suite)
    return suite


def symmetric_f3(F: FieldSpec) -> Poly:
    T = Space.SYMMETRIC.ring(F)
    a, b, d = T.gens()
    if F.p != 2:
        return orbit_product(a, conjugation_action(Group.O2, Space.SYMMETRIC, F))
    e = F.e - 1
    tr = a + d
    return sum((b ** (2 ** k) * tr ** (2 ** e - 2 ** k) for k in range(e + 1)), T.zero())


def symmetric_suite(F: FieldSpec) -> InvariantSuite:
    T = Space.SYMMETRIC.ring(F)
    a, b, d = T.gens()
    return InvariantSuite(CaseSpec(Group.O2, Space.SYMMETRIC, F), ("trace", "det", "f3"),
                          (a + d, a * d - b * b, symmetric_f3(F)), POLYNOMIAL)


def adjoint_o2_invariants(F: FieldSpec) -> InvariantSuite:
    T = Space.ALTERNATING.ring(F)
    (b,) = T.gens()
    gen = b if F.p == 2 else b * b
    return InvariantSuite(CaseSpec(Group.O2, Space.ALTERNATING, F), ("f1",), (gen,), POLYNOMIAL)


# -- dispatch and closed forms -----------------------------------------------------

def build_suite(case: CaseSpec) -> InvariantSuite:
    F = case.field
    g, s = case.group, case.space
    if g is Group.GL2 and s is Space.GL2:
        return gl2_primaries(F)
    if g is Group.SL2 and s is Space.GL2:
        if F.p == 2:
            base = gl2_primaries(F)
            base.case = case
            base.note = "same as gl2"
            return base
        return sl2_gl2_suite(F)
    if s is Space.SL2:
        return traceless_suites(F, gl2_primaries(F) if g is Group.GL2 or F.p == 2 else sl2_gl2_suite(F))
    if g is Group.O2 and s is Space.GL2:
        return o2_primaries(F)
    if g is Group.O2 and s is Space.SYMMETRIC:
        return symmetric_suite(F)
    if g is Group.O2 and s is Space.ALTERNATING:
        return adjoint_o2_invariants(F)
    raise ValueError(f"no construction for {case}")  # pragma: no cover


def expected_image_order(case: CaseSpec) -> int:
    q = case.q
    if case.group is Group.GL2:
        return q * (q * q - 1)
    if case.group is Group.SL2:
        return q * (q * q - 1) // (1 if q % 2 == 0 else 2)
    order = o2_order(q)
    if case.space is Space.ALTERNATING:
        return 1 if q % 2 == 0 else 2
    return order if q % 2 == 0 else order // 2


def expected_type(case: CaseSpec) -> str:
    if case.space in (Space.SYMMETRIC, Space.ALTERNATING):
        return POLYNOMIAL
    if case.space is Space.SL2 and case.q % 2 == 0:
        return POLYNOMIAL
    return HYPERSURFACE


def expected_degrees(case: CaseSpec) -> tuple[int, ...]:
    q = case.q
    odd = q % 2 == 1
    g, s = case.group, case.space
    if g is Group.O2 and s is Space.GL2:
        if not odd:
            return (1, 2, 1, q)
        return (1, 2, 2, (q - 1) // 2 if q % 4 == 1 else (q + 1) // 2)
    if s is Space.GL2 and (g is Group.GL2 or not odd):
        return (1, 2, q + 1, q * q - q)
    if s is Space.GL2:
        return (1, 2, q + 1, comb(q, 2))
    if s is Space.SL2:
        if not odd:
            return (2, q + 1, comb(q, 2))
        return (2, q + 1, q * q - q) if g is Group.GL2 else (2, q + 1, comb(q, 2))
    if s is Space.SYMMETRIC:
        return (1, 2, o2_order(q) // 4 if odd else q // 2)
    return (2,) if odd else (1,)


def expected_secondary_degree(case: CaseSpec) -> Optional[int]:
    if expected_type(case) == POLYNOMIAL:
        return None
    q = case.q
    if case.group is Group.O2:
        if q % 2 == 0:
            return q
        return (q + 1) // 2 if q % 4 == 1 else (q + 3) // 2
    if case.group is Group.SL2 and q % 2 == 1:
        return comb(q + 1, 2)
    return q * q


def closed_form(case: CaseSpec) -> tuple[list[int], list[int]]:
    """(numerator exponents, denominator degrees) of the Hilbert series."""
    degs = list(expected_degrees(case))
    if expected_type(case) == POLYNOMIAL:
        return [0], degs
    return [0, expected_secondary_degree(case)], degs


def expected_a_invariant(case: CaseSpec) -> int:
    degs = expected_degrees(case)
    if expected_type(case) == POLYNOMIAL:
        return -sum(degs)
    return -len(degs)


def degree_product(suite: InvariantSuite) -> int:
    return prod(suite.degrees)
