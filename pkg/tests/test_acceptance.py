"""Acceptance criteria, one printed PASS/FAIL line each.  All comparisons
are exact; each criterion also checks its wall-clock budget."""
import time
from math import comb

import numpy as np
import pytest

from invforge.constructions import (CaseSpec, build_suite, gl2_primaries, expected_degrees,
                                    sl2_f4_and_halfroot, symmetric_f3, traceless_projection)
from invforge.gf import IrreducibleQuadratic, field_of_order, find_irreducible_quadratic
from invforge.groups import (Group, Space, class_group_order, conjugation_action, enumerate_group,
                             fixed_subspace_dim, o2_order, omega_seed, orbit, pseudoreflection_scan,
                             representation_dets, tau_ad_substitution)
from invforge.lab import (decomposition_counts, default_max_degree, expected_series, find_secondary,
                          hilbert_function, hsop_check, invariant_dim, series_expansion,
                          subring_membership, subring_span)
from invforge.mpoly import apply_substitution, leading_monomial_lex, project, sqrt_char2
from invforge.steenrod import steenrod_component

RESULTS = []


def F(q):
    return field_of_order(q)


def report(n, title, subchecks, seconds, budget):
    failed = [name for name, ok in subchecks if not ok]
    in_time = seconds < budget
    ok = not failed and in_time
    detail = f"{len(subchecks) - len(failed)}/{len(subchecks)} subchecks, {seconds:.1f}s (budget {budget}s)"
    if failed:
        detail += "; failed: " + ", ".join(failed)
    line = f"CRITERION {n} {title}: {'PASS' if ok else 'FAIL'} ({detail})"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_criterion_01_steenrod_identity():
    t = time.perf_counter()
    checks = []
    for q in (2, 3, 4, 5):
        R = Space.GL2.ring(F(q))
        a, b, c, d = R.gens()
        f3 = a ** q * d + a * d ** q - b ** q * c - b * c ** q
        checks.append((f"q={q}", steenrod_component(a * d - b * c, 1) == f3))
    report(1, "Steenrod identity", checks, time.perf_counter() - t, 1)


def test_criterion_02_hsop():
    t = time.perf_counter()
    checks = []
    for q in (2, 3, 4):
        for g in (Group.GL2, Group.SL2):
            checks.append((f"{g.value}/gl2 q={q}", hsop_check(build_suite(CaseSpec(g, Space.GL2, F(q))).primaries)))
    for q in (2, 3, 4, 5):
        for s in (Space.GL2, Space.SYMMETRIC, Space.ALTERNATING):
            checks.append((f"o2/{s.value} q={q}", hsop_check(build_suite(CaseSpec(Group.O2, s, F(q))).primaries)))
        for g in (Group.GL2, Group.SL2):
            checks.append((f"{g.value}/sl2 q={q}", hsop_check(build_suite(CaseSpec(g, Space.SL2, F(q))).primaries)))
    f1, f2, f3, f4 = gl2_primaries(F(2)).primaries
    checks.append(("degenerate (f1, f1^2, f3, f4) rejected", not hsop_check([f1, f1 * f1, f3, f4])))
    report(2, "hsop", checks, time.perf_counter() - t, 120)


@pytest.mark.parametrize("label,group,space,q,D", [
    ("gl2 q=2", Group.GL2, Space.GL2, 2, 14),
    ("gl2 q=3", Group.GL2, Space.GL2, 3, 12),
    ("o2 q=2", Group.O2, Space.GL2, 2, 10),
    ("o2 q=3", Group.O2, Space.GL2, 3, 10),
    ("o2 q=5", Group.O2, Space.GL2, 5, 10),
    ("sl2/gl2 q=3", Group.SL2, Space.GL2, 3, 10),
    ("sl2/sl2 q=3", Group.SL2, Space.SL2, 3, 10),
])
def test_criterion_03_hilbert(label, group, space, q, D):
    t = time.perf_counter()
    case = CaseSpec(group, space, F(q))
    data = hilbert_function(case.action(), D)
    checks = [(f"dims up to {D}", data.dims == expected_series(case, D))]
    if group is Group.GL2:
        checks.append(("numerator 1 + z^(q^2)",
                       expected_series(case, D) == series_expansion([0, q * q], [1, 2, q + 1, q * q - q], D)))
    if group is Group.SL2:
        degs = expected_degrees(case)
        checks.append(("numerator 1 + z^C(q+1,2)",
                       expected_series(case, D) == series_expansion([0, comb(q + 1, 2)], degs, D)))
    report(3, f"Hilbert series [{label}]", checks, time.perf_counter() - t, 300)


def test_criterion_04_jacobian_secondary():
    t = time.perf_counter()
    checks = []
    for q in (3, 5):
        K = F(q)
        s = gl2_primaries(K)
        h = s.jacobian
        A = conjugation_action(Group.GL2, Space.GL2, K)
        checks.append((f"q={q} h nonzero of degree q^2", bool(h) and h.is_homogeneous() and h.degree() == q * q))
        checks.append((f"q={q} h invariant", A.fixes(h)))
        checks.append((f"q={q} tau_ad h = -h", apply_substitution(h, tau_ad_substitution(K)) == -h))
        checks.append((f"q={q} h^2 in R", subring_membership(h * h, s.primaries)))
        checks.append((f"q={q} h not in R", not subring_membership(h, s.primaries)))
    for q in (2, 4):
        K = F(q)
        s = gl2_primaries(K)
        A = conjugation_action(Group.GL2, Space.GL2, K)
        checks.append((f"q={q} h in R", subring_membership(s.jacobian, s.primaries)))
        eta = find_secondary(A, s.primaries, q * q)
        checks.append((f"q={q} eta of degree q^2", eta.degree() == q * q and A.fixes(eta)))
        checks.append((f"q={q} eta not in R", not subring_membership(eta, s.primaries)))
        D = default_max_degree(CaseSpec(Group.GL2, Space.GL2, K))
        dims = hilbert_function(A, D).dims
        checks.append((f"q={q} R + R eta count up to {D}", dims == decomposition_counts(s.degrees, q * q, D)))
    report(4, "Jacobian secondary", checks, time.perf_counter() - t, 300)


def test_criterion_05_leading_monomial():
    t = time.perf_counter()
    checks = [(f"q={q}", leading_monomial_lex(gl2_primaries(F(q)).primaries[3]) == ((q - 1) ** 2, q - 1, 0, 0))
              for q in (2, 3, 4)]
    report(5, "Leading monomial", checks, time.perf_counter() - t, 1)


def test_criterion_06_square_roots():
    t = time.perf_counter()
    checks = []
    for q in (2, 4):
        K = F(q)
        T, asg = traceless_projection(K)
        pf4 = project(gl2_primaries(K).primaries[3], T, asg)
        r = sqrt_char2(pf4)
        checks.append((f"q={q} sqrt(pi f4)^2", r * r == pf4))
    for q in (3, 5):
        K = F(q)
        f4, f = sl2_f4_and_halfroot(K, find_irreducible_quadratic(K).delta)
        checks.append((f"q={q} f^2 = f4", f * f == f4))
        checks.append((f"q={q} SL2-invariant", conjugation_action(Group.SL2, Space.GL2, K).fixes(f, exhaustive=True)))
    report(6, "Square roots", checks, time.perf_counter() - t, 60)


def test_criterion_07_group_structure():
    t = time.perf_counter()
    checks = []
    for q in (2, 3, 4):
        A = conjugation_action(Group.GL2, Space.GL2, F(q))
        checks.append((f"dets q={q}", representation_dets(A) == {1}))
    for q in (2, 4):
        checks.append((f"no pseudoreflections on gl2 q={q}",
                       pseudoreflection_scan(conjugation_action(Group.GL2, Space.GL2, F(q))) == 0))
        checks.append((f"pseudoreflections on sl2 q={q}",
                       pseudoreflection_scan(conjugation_action(Group.GL2, Space.SL2, F(q))) >= 1))
    for q in (2, 3, 4):
        P = enumerate_group(Group.UNIPOTENT, F(q))
        checks.append((f"dim V^P = 2 q={q}", fixed_subspace_dim(conjugation_action(Group.GL2, Space.GL2, F(q)), P) == 2))
        checks.append((f"dim sl2^P = 2 q={q}", fixed_subspace_dim(conjugation_action(Group.GL2, Space.SL2, F(q)), P) == 2))
    for q in (2, 3, 4, 5):
        K = F(q)
        g = find_irreducible_quadratic(K)
        A = conjugation_action(Group.GL2, Space.GL2, K)
        checks.append((f"omega orbit q={q}", len(orbit(omega_seed(K, g.tau, g.delta), A)) == q * q - q))
    for q in (2, 3, 4, 5, 7, 8, 9):
        n = len(enumerate_group(Group.O2, F(q)))
        want = q if q % 2 == 0 else (2 * (q - 1) if q % 4 == 1 else 2 * (q + 1))
        checks.append((f"|O2| q={q}", n == want == o2_order(q)))
        O = conjugation_action(Group.O2, Space.GL2, F(q))
        size = len(orbit(O.ring.gens()[0], O))
        checks.append((f"orbit of a q={q}", size == (n if q % 2 == 0 else n // 4)))
    report(7, "Group structure", checks, time.perf_counter() - t, 60)


def test_criterion_08_class_groups():
    t = time.perf_counter()
    checks = []
    for q in (2, 3, 4, 5):
        got = class_group_order(conjugation_action(Group.GL2, Space.GL2, F(q)))
        checks.append((f"gl2 q={q}", got == (2 if q % 2 else 1)))
    for q in (3, 5):
        checks.append((f"o2 q={q}", class_group_order(conjugation_action(Group.O2, Space.GL2, F(q))) == 4))
    report(8, "Class groups", checks, time.perf_counter() - t, 60)


def test_criterion_09_symmetric_case():
    t = time.perf_counter()
    checks = []
    for q in (2, 4, 8):
        A = conjugation_action(Group.O2, Space.SYMMETRIC, F(q))
        checks.append((f"f3 fixed by all of O2 q={q}", A.fixes(symmetric_f3(F(q)), exhaustive=True)))
    for q in (2, 3, 4, 5, 8):
        case = CaseSpec(Group.O2, Space.SYMMETRIC, F(q))
        dims = hilbert_function(case.action(), 8).dims
        checks.append((f"product series q={q}", dims == series_expansion([0], build_suite(case).degrees, 8)))
    report(9, "Symmetric case", checks, time.perf_counter() - t, 60)


def test_criterion_10_independence_of_g():
    t = time.perf_counter()
    K = F(3)
    g1 = find_irreducible_quadratic(K)
    g2 = IrreducibleQuadratic(1, 2)
    checks = [("g1 != g2, both irreducible", (g1.tau, g1.delta) != (1, 2) and not g1.has_root(K) and not g2.has_root(K))]
    R1 = gl2_primaries(K, g1).primaries
    R2 = gl2_primaries(K, g2).primaries
    A = conjugation_action(Group.GL2, Space.GL2, K)
    for d in range(9):
        S1, S2 = subring_span(R1, d), subring_span(R2, d)
        checks.append((f"R-span d={d}", S1.shape == S2.shape and np.array_equal(S1, S2)))
        checks.append((f"invariant dim d={d}", invariant_dim(A, d) == S1.shape[0]))
    report(10, "Independence of g", checks, time.perf_counter() - t, 60)
