"""Verification engine: degreewise invariant spaces, Hilbert functions,
parameter-system checks, subring membership and per-case reports."""
from __future__ import annotations

import csv
import io
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Any, Callable, Iterable, Optional, Sequence

import numpy as np

from .constructions import (HYPERSURFACE, POLYNOMIAL, CaseSpec, InvariantSuite, build_suite, closed_form,
                            expected_a_invariant, expected_degrees, expected_image_order,
                            expected_secondary_degree, expected_type)
from .gf import FieldSpec, find_irreducible_quadratic
from .groups import (Group, GroupAction, Space, class_group_order, conjugation_action,
                     enumerate_group, fixed_subspace_dim, group_order, omega_seed, orbit,
                     pseudoreflection_scan, representation_dets, tau_ad_substitution)
from .mpoly import (Monomial, Poly, RingSpec, apply_substitution, leading_monomial_lex,
                    monomials_of_degree, project)
from .steenrod import steenrod_component

SIZE_CAP = 10 ** 4
_SAMPLE_MIN = 64


class SizeCapExceeded(ValueError):
    pass


class NoSecondary(ValueError):
    pass


# -- monomial bookkeeping -----------------------------------------------------

def monomial_count(n: int, d: int) -> int:
    if d < 0:
        return 0
    return comb(d + n - 1, n - 1) if n else int(d == 0)


@lru_cache(maxsize=None)
def _monomial_table(n: int, d: int) -> tuple[tuple[Monomial, ...], np.ndarray, np.ndarray]:
    """Monomials of degree d (lex-descending), their exponent array and the
    sorted packed keys used to look up column indices."""
    monos = tuple(monomials_of_degree(n, d))
    exps = np.array(monos, dtype=np.int64).reshape(len(monos), n)
    return monos, exps, _pack(exps, d + 1)


def _pack(exps: np.ndarray, base: int) -> np.ndarray:
    key = np.zeros(exps.shape[0], dtype=np.int64)
    for j in range(exps.shape[1]):
        key = key * base + exps[:, j]
    return key


def column_index(n: int, d: int, exps: np.ndarray) -> np.ndarray:
    """Column positions of the rows of ``exps`` among degree-d monomials."""
    _, _, keys = _monomial_table(n, d)
    # keys are strictly decreasing for lex-descending order
    return len(keys) - 1 - np.searchsorted(keys[::-1], _pack(exps, d + 1))


@lru_cache(maxsize=None)
def _links(n: int, d: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """For degree d >= 1: first variable of each monomial, index of the
    monomial with that variable removed, and for each variable u the index
    map m -> x_u m from degree d-1 into degree d."""
    _, exps, _ = _monomial_table(n, d)
    first = np.argmax(exps > 0, axis=1)
    parent_exps = exps.copy()
    parent_exps[np.arange(len(exps)), first] -= 1
    parent = column_index(n, d - 1, parent_exps)
    _, lower, _ = _monomial_table(n, d - 1)
    mul = np.empty((n, len(lower)), dtype=np.int64)
    for u in range(n):
        shifted = lower.copy()
        shifted[:, u] += 1
        mul[u] = column_index(n, d, shifted)
    return first, parent, mul


def check_size(n: int, d: int):
    size = monomial_count(n, d)
    if size > SIZE_CAP:
        raise SizeCapExceeded(f"degree {d} in {n} variables has {size} monomials (cap {SIZE_CAP})")


@lru_cache(maxsize=256)
def degree_matrix(F: FieldSpec, matrix: tuple, d: int) -> np.ndarray:
    """Row m holds the coefficients of m(Sx) over the degree-d monomials,
    where variable v is sent to the linear form ``matrix[v]``."""
    n = len(matrix)
    if d == 0:
        return np.ones((1, 1), dtype=np.int64)
    check_size(n, d)
    L = np.array(matrix, dtype=np.int64)
    prev = degree_matrix(F, matrix, d - 1)
    first, parent, mul = _links(n, d)
    out = np.zeros((len(first), monomial_count(n, d)), dtype=np.int64)
    lifted = prev[parent]
    for u in range(n):
        coef = L[first, u]
        if not coef.any():
            continue
        cols = mul[u]
        out[:, cols] = F.add(out[:, cols], F.mul(coef[:, None], lifted))
    return out


def poly_to_vector(f: Poly, d: int) -> np.ndarray:
    n = f.ring.nvars
    vec = np.zeros(monomial_count(n, d), dtype=np.int64)
    if f.terms:
        exps, coeffs = f.arrays()
        if np.any(exps.sum(axis=1) != d):
            raise ValueError(f"polynomial is not homogeneous of degree {d}")
        vec[column_index(n, d, exps)] = coeffs
    return vec


def vector_to_poly(ring: RingSpec, vec: np.ndarray, d: int) -> Poly:
    _, exps, _ = _monomial_table(ring.nvars, d)
    return Poly.from_arrays(ring, exps, np.asarray(vec, dtype=np.int64))


def polys_to_matrix(polys: Sequence[Poly], n: int, d: int) -> np.ndarray:
    out = np.zeros((len(polys), monomial_count(n, d)), dtype=np.int64)
    for i, f in enumerate(polys):
        if f.terms:
            exps, coeffs = f.arrays()
            out[i, column_index(n, d, exps)] = coeffs
    return out


# -- invariant spaces ---------------------------------------------------------------

def _sparsity(s) -> int:
    return sum(1 for row in s.matrix for x in row if x)


def invariant_space(action: GroupAction, d: int, substitutions: Optional[Iterable] = None) -> np.ndarray:
    """Reduced row echelon basis (coefficient rows over degree-d monomials)
    of the polynomials fixed by the given substitutions (default: the
    action's generators)."""
    F = action.field
    n = action.ring.nvars
    check_size(n, d)
    subs = sorted(action.generators if substitutions is None else substitutions, key=_sparsity)
    N = monomial_count(n, d)
    B = np.eye(N, dtype=np.int64)
    for s in subs:
        M = degree_matrix(F, s.matrix, d)
        C = F.sub(F.matmul(B, M), B)
        if not C.any():
            continue
        Z = F.left_kernel(C)
        if Z.shape[0] == 0:
            return np.zeros((0, N), dtype=np.int64)
        B = F.matmul(Z, B)
    R, piv = F.rref(B)
    return R[:len(piv)]


def invariant_dim(action: GroupAction, d: int, substitutions: Optional[Iterable] = None) -> int:
    return invariant_space(action, d, substitutions).shape[0]


def invariant_basis(action: GroupAction, d: int, verify: bool = True) -> list[Poly]:
    B = invariant_space(action, d)
    if verify and B.shape[0]:
        F = action.field
        for s in action.substitutions:
            if not np.array_equal(F.matmul(B, degree_matrix(F, s.matrix, d)), B):
                raise AssertionError(f"basis vector not fixed by {s.matrix}")
    return [vector_to_poly(action.ring, row, d) for row in B]


# -- series ---------------------------------------------------------------------------

def series_expansion(numerator: Sequence[int], denominators: Sequence[int], D: int) -> list[int]:
    """Coefficients up to z^D of sum(z^k for k in numerator) / prod(1 - z^d)."""
    c = [0] * (D + 1)
    for k in numerator:
        if k <= D:
            c[k] += 1
    for deg in denominators:
        for i in range(deg, D + 1):
            c[i] += c[i - deg]
    return c


def complete_intersection(degrees: Sequence[int], n: int, D: int) -> list[int]:
    """Coefficients of prod(1 - z^d) / (1 - z)^n up to z^D."""
    c = [0] * (D + 1)
    c[0] = 1
    for deg in degrees:
        for i in range(D, deg - 1, -1):
            c[i] -= c[i - deg]
    for _ in range(n):
        for i in range(1, D + 1):
            c[i] += c[i - 1]
    return c


def expected_series(case: CaseSpec, D: int) -> list[int]:
    num, den = closed_form(case)
    return series_expansion(num, den, D)


def series_degree(case: CaseSpec) -> int:
    num, den = closed_form(case)
    return max(num) - sum(den)


@dataclass
class HilbertData:
    dims: list[int]
    expected: list[int]
    a_invariant_expected: Optional[int]

    @property
    def matches(self) -> bool:
        return self.dims == self.expected


def _case_of(action: GroupAction) -> Optional[CaseSpec]:
    try:
        return CaseSpec(action.group, action.space, action.field)
    except ValueError:
        return None


def hilbert_function(action: GroupAction, D: int, threads: Optional[int] = None) -> HilbertData:
    n = action.ring.nvars
    dims = parallel_map(lambda d: invariant_dim(action, d), range(D + 1), threads)
    case = None if action.with_tau_ad else _case_of(action)
    if case is not None:
        return HilbertData(dims, expected_series(case, D), expected_a_invariant(case))
    if action.image_order == 1:
        return HilbertData(dims, [monomial_count(n, d) for d in range(D + 1)], -n)
    return HilbertData(dims, [], None)


# -- parameter systems ----------------------------------------------------------------

def _eliminate_linear(fs: list[Poly]) -> Optional[list[Poly]]:
    """Trade each linear form for a variable.  Returns the remaining forms
    over the smaller ring, or None when a form collapses to zero."""
    fs = list(fs)
    while True:
        lin = next((i for i, f in enumerate(fs) if f.degree() == 1), None)
        if lin is None:
            return fs
        ell = fs.pop(lin)
        ring = ell.ring
        F = ring.field
        coeffs = [ell.coefficient(tuple(int(i == j) for i in range(ring.nvars))) for j in range(ring.nvars)]
        j = max(i for i, c in enumerate(coeffs) if c)
        keep = [v for i, v in enumerate(ring.variables) if i != j]
        smaller = RingSpec(F, tuple(keep))
        gens = dict(zip(keep, smaller.gens()))
        scale = F.neg(F.inv(coeffs[j]))
        solved = smaller.zero()
        for i, v in enumerate(ring.variables):
            if i != j and coeffs[i]:
                solved = solved + gens[v].scale(F.mul(scale, coeffs[i]))
        assignment = dict(gens)
        assignment[ring.variables[j]] = solved
        fs = [project(f, smaller, assignment) for f in fs]
        if any(not f for f in fs):
            return None


def ideal_span_rank(fs: Sequence[Poly], d: int) -> int:
    """Rank of the degree-d part of the ideal generated by fs."""
    ring = fs[0].ring
    n = ring.nvars
    F = ring.field
    blocks = []
    for f in fs:
        k = d - f.degree()
        if k < 0:
            continue
        _, mons, _ = _monomial_table(n, k)
        exps, coeffs = f.arrays()
        prod = (mons[:, None, :] + exps[None, :, :]).reshape(-1, n)
        rows = np.repeat(np.arange(len(mons)), len(coeffs))
        block = np.zeros((len(mons), monomial_count(n, d)), dtype=np.int64)
        block[rows, column_index(n, d, prod)] = np.tile(coeffs, len(mons))
        blocks.append(block)
    if not blocks:
        return 0
    return F.rank(np.concatenate(blocks))


def quotient_dims(fs: Sequence[Poly], D: int) -> list[int]:
    n = fs[0].ring.nvars
    return [monomial_count(n, d) - ideal_span_rank(fs, d) for d in range(D + 1)]


def hsop_check(fs: Sequence[Poly]) -> bool:
    """Whether the homogeneous forms fs are a system of parameters: the
    quotient by the ideal they generate is finite dimensional, with the
    dimensions of a complete intersection."""
    fs = list(fs)
    if not fs:
        raise ValueError("empty sequence")
    ring = fs[0].ring
    if len(fs) != ring.nvars:
        raise ValueError(f"need {ring.nvars} forms, got {len(fs)}")
    for f in fs:
        if f.ring != ring:
            raise ValueError("forms live in different rings")
        if not f or not f.is_homogeneous() or f.degree() < 1:
            raise ValueError("forms must be homogeneous of positive degree")
    rest = _eliminate_linear(fs)
    if rest is None:
        return False
    if not rest:
        return True
    n = rest[0].ring.nvars
    degs = [f.degree() for f in rest]
    top = sum(k - 1 for k in degs) + 2
    return quotient_dims(rest, top) == complete_intersection(degs, n, top)


# -- subrings --------------------------------------------------------------------------

def exponent_tuples(degrees: Sequence[int], D: int) -> list[tuple[int, ...]]:
    """All e with sum(e_i * degrees_i) == D."""
    out = []

    def rec(i: int, left: int, acc: list[int]):
        if i == len(degrees) - 1:
            if left % degrees[i] == 0:
                out.append(tuple(acc + [left // degrees[i]]))
            return
        for e in range(left // degrees[i], -1, -1):
            rec(i + 1, left - e * degrees[i], acc + [e])

    if degrees:
        rec(0, D, [])
    return out


class ProductCache:
    """Monomials in the generators, each built from a smaller one by a
    single multiplication (preferring the sparsest generator)."""

    def __init__(self, gens: Sequence[Poly]):
        self.gens = list(gens)
        self.ring = self.gens[0].ring
        self._order = sorted(range(len(self.gens)), key=lambda i: len(self.gens[i]))
        self._memo: dict[tuple[int, ...], Poly] = {}

    def __call__(self, e: tuple[int, ...]) -> Poly:
        hit = self._memo.get(e)
        if hit is not None:
            return hit
        i = next((i for i in self._order if e[i]), None)
        if i is None:
            out = self.ring.one()
        else:
            smaller = e[:i] + (e[i] - 1,) + e[i + 1:]
            out = self(smaller) * self.gens[i]
        self._memo[e] = out
        return out

    def degree_piece(self, D: int) -> list[Poly]:
        degs = [g.degree() for g in self.gens]
        return [self(e) for e in exponent_tuples(degs, D)]


def _check_gens(gens: Sequence[Poly]):
    for g in gens:
        if not g or not g.is_homogeneous() or g.degree() < 1:
            raise ValueError("subring generators must be homogeneous of positive degree")


def subring_span(gens: Sequence[Poly], D: int) -> np.ndarray:
    """Reduced row echelon basis of the degree-D part of F[gens]."""
    _check_gens(gens)
    ring = gens[0].ring
    n = ring.nvars
    if D == 0:
        return np.ones((1, 1), dtype=np.int64)
    products = ProductCache(gens).degree_piece(D)
    if not products:
        return np.zeros((0, monomial_count(n, D)), dtype=np.int64)
    R, piv = ring.field.rref(polys_to_matrix(products, n, D))
    return R[:len(piv)]


def subring_dim(gens: Sequence[Poly], D: int) -> int:
    return subring_span(gens, D).shape[0]


def subring_membership(f: Poly, gens: Sequence[Poly], cache: Optional[ProductCache] = None) -> bool:
    """Whether f lies in the subalgebra generated by gens.

    A combination is solved on a sample of monomial columns and then
    checked on all of them, so a True answer comes with an exact witness;
    an unsolvable sample already proves non-membership."""
    _check_gens(gens)
    if not f:
        return True
    if not f.is_homogeneous():
        raise ValueError("membership is tested for homogeneous polynomials")
    ring = f.ring
    F = ring.field
    D = f.degree()
    if D == 0:
        return True
    cache = cache or ProductCache(gens)
    products = cache.degree_piece(D)
    if not products:
        return False
    n = ring.nvars
    N = monomial_count(n, D)
    exps_all, coeffs_all = [], []
    for p in products:
        e, c = p.arrays()
        exps_all.append(e)
        coeffs_all.append(c)
    target = poly_to_vector(f, D)
    rows = np.repeat(np.arange(len(products)), [len(c) for c in coeffs_all])
    cols = column_index(n, D, np.concatenate(exps_all))
    vals = np.concatenate(coeffs_all)
    support = np.union1d(np.unique(cols), np.flatnonzero(target))
    if np.setdiff1d(np.flatnonzero(target), np.unique(cols)).size:
        return False
    size = min(len(support), max(_SAMPLE_MIN, 2 * len(products) + 8))
    rng = np.random.default_rng(len(products) * 1000003 + D)
    while True:
        sample = support if size >= len(support) else np.sort(rng.choice(support, size, replace=False))
        pos = np.full(N, -1, dtype=np.int64)
        pos[sample] = np.arange(len(sample))
        keep = pos[cols] >= 0
        A = np.zeros((len(products) + 1, len(sample)), dtype=np.int64)
        A[rows[keep], pos[cols[keep]]] = vals[keep]
        A[-1] = target[sample]
        Z = F.left_kernel(A)
        hits = np.flatnonzero(Z[:, -1]) if Z.size else np.zeros(0, dtype=np.int64)
        if hits.size == 0:
            return False
        z = Z[hits[0]]
        c = F.mul(F.neg(z[:-1]), F.inv(int(z[-1])))
        if size >= len(support):
            return True
        used = c[rows] != 0
        combo = _scatter_add(F, N, cols[used], F.mul(c[rows[used]], vals[used]))
        if np.array_equal(combo, target):
            return True
        size *= 2


def _scatter_add(F: FieldSpec, N: int, cols: np.ndarray, vals: np.ndarray) -> np.ndarray:
    out = np.zeros(N, dtype=np.int64)
    if not len(cols):
        return out
    order = np.argsort(cols, kind="stable")
    cols, vals = cols[order], vals[order]
    starts = np.flatnonzero(np.concatenate([[True], cols[1:] != cols[:-1]]))
    out[cols[starts]] = F.segment_sum(vals, starts)
    return out


def reduce_modulo(F: FieldSpec, rows: np.ndarray, span: np.ndarray) -> np.ndarray:
    """Reduce rows against a reduced row echelon basis ``span``."""
    rows = np.array(rows, dtype=np.int64, copy=True)
    for r in span:
        c = int(np.flatnonzero(r)[0])
        f = rows[:, c]
        hit = np.flatnonzero(f)
        if hit.size:
            rows[hit] = F.sub(rows[hit], F.mul(f[hit][:, None], r[None, :]))
    return rows


def find_secondary(action: GroupAction, R_gens: Sequence[Poly], d: int) -> Poly:
    """The first (in reduced echelon order) degree-d invariant outside the
    subalgebra generated by R_gens."""
    F = action.field
    inv = invariant_space(action, d)
    span = subring_span(R_gens, d)
    rest = reduce_modulo(F, inv, span)
    R, piv = F.rref(rest)
    if not piv:
        raise NoSecondary(f"every degree-{d} invariant lies in the subring")
    return vector_to_poly(action.ring, R[0], d)


def decomposition_counts(degrees: Sequence[int], secondary_degree: int, D: int) -> list[int]:
    """dims of R + R*eta for R free on generators of the given degrees."""
    R = series_expansion([0], degrees, D)
    return [R[d] + (R[d - secondary_degree] if d >= secondary_degree else 0) for d in range(D + 1)]


# -- parallel map -------------------------------------------------------------------

def thread_count(threads: Optional[int] = None) -> int:
    if threads is None:
        env = os.environ.get("INVFORGE_THREADS")
        threads = int(env) if env and env.isdigit() else 1
    return max(1, threads)


def parallel_map(fn: Callable[[Any], Any], items: Iterable, threads: Optional[int] = None) -> list:
    """Map with results in input order."""
    items = list(items)
    k = thread_count(threads)
    if k == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=k) as pool:
        return list(pool.map(fn, items))


# -- reports -----------------------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, Poly):
        return str(x)
    return x


@dataclass
class Check:
    name: str
    expected: Any
    observed: Any
    passed: bool
    seconds: float = 0.0

    def to_dict(self, timings: bool = False) -> dict:
        out = {"name": self.name, "expected": _jsonable(self.expected),
               "observed": _jsonable(self.observed), "pass": bool(self.passed)}
        if timings:
            out["seconds"] = round(self.seconds, 4)
        return out


@dataclass
class VerificationReport:
    case: CaseSpec
    group: dict
    checks: list[Check] = field(default_factory=list)
    dims: list[int] = field(default_factory=list)
    expected_dims: list[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def to_dict(self, timings: bool = False) -> dict:
        return {"case": self.case.describe(), "group": self.group,
                "checks": [c.to_dict(timings) for c in self.checks],
                "dims": list(self.dims), "expected_dims": list(self.expected_dims),
                "passed": self.passed}

    def dims_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["group", "space", "q", "degree", "computed", "expected"])
        for d, got in enumerate(self.dims):
            exp = self.expected_dims[d] if d < len(self.expected_dims) else ""
            w.writerow([self.case.group.value, self.case.space.value, self.case.q, d, got, exp])
        return buf.getvalue()


class _Recorder:
    def __init__(self, report: VerificationReport):
        self.report = report

    def run(self, name: str, expected, thunk: Callable[[], Any], compare: Optional[Callable] = None):
        t0 = time.perf_counter()
        try:
            observed = thunk()
            ok = compare(expected, observed) if compare else observed == expected
        except Exception as exc:  # failures become report entries
            observed, ok = f"error: {type(exc).__name__}: {exc}", False
        self.report.checks.append(Check(name, expected, observed, bool(ok), time.perf_counter() - t0))
        return observed


def default_max_degree(case: CaseSpec) -> int:
    q = case.q
    n = len(case.space.variables)
    D = 12 if q <= 5 else 10
    sec = expected_secondary_degree(case)
    if n == 4 and case.group is not Group.O2:
        return max(q * q + 2, 12) if q <= 4 else D
    if sec is not None and (n == 3 and q <= 5 or n == 4):
        D = max(D, sec + 2)
    return D


def expected_class_group(case: CaseSpec) -> Optional[int]:
    """Class-group order from the Hom(image, units) count, for the cases
    without pseudoreflections."""
    odd = case.q % 2 == 1
    if case.group is Group.GL2:
        if case.space is Space.SL2 and not odd:
            return None
        return 2 if odd else 1
    if case.group is Group.SL2:
        return 1 if odd else (1 if case.space is Space.GL2 else None)
    if case.space is Space.GL2:
        return 4 if odd else 1
    return None


def ring_type_from_dims(dims: Sequence[int], suite: InvariantSuite, case: CaseSpec) -> str:
    """Which closed form the computed dims follow: free on the primaries,
    or free of rank two over them."""
    D = len(dims) - 1
    if list(dims) == series_expansion([0], suite.degrees, D):
        return POLYNOMIAL
    sec = expected_secondary_degree(case)
    if sec is not None and list(dims) == decomposition_counts(suite.degrees, sec, D):
        return HYPERSURFACE
    return "other"


def _fixed_by_generators(action: GroupAction, polys: Iterable[Poly]) -> bool:
    return all(action.fixes(f) for f in polys)


def verify_case(case: CaseSpec, D: Optional[int] = None, threads: Optional[int] = None) -> VerificationReport:
    F = case.field
    q = case.q
    odd = F.p != 2
    D = default_max_degree(case) if D is None else D
    action = case.action()
    report = VerificationReport(case, action.describe())
    rec = _Recorder(report)
    n = action.ring.nvars

    if q <= 16 or case.group is Group.O2:
        rec.run("group_order", group_order(case.group, q), lambda: len(enumerate_group(case.group, F)))
    rec.run("image_order", expected_image_order(case), lambda: action.image_order)

    suite: InvariantSuite = rec.run("suite_degrees", list(expected_degrees(case)),
                                    lambda: build_suite(case), lambda e, s: list(s.degrees) == e)
    if not isinstance(suite, InvariantSuite):
        return report
    report.checks[-1].observed = list(suite.degrees)
    named = suite.named()
    rec.run("invariance", True, lambda: _fixed_by_generators(action, named.values()))
    rec.run("hsop", True, lambda: hsop_check(suite.primaries))

    report.expected_dims = expected_series(case, D)
    report.dims = rec.run("hilbert_series", report.expected_dims,
                          lambda: hilbert_function(action, D, threads).dims)
    if not isinstance(report.dims, list):
        report.dims = []
    rec.run("a_invariant", expected_a_invariant(case), lambda: series_degree(case))
    sec = expected_secondary_degree(case)
    if sec is None or sec <= D:
        # below the secondary degree both closed forms agree
        rec.run("ring_type", expected_type(case), lambda: ring_type_from_dims(report.dims, suite, case))

    if case.space is Space.GL2 and case.group is not Group.O2:
        f2, f3 = suite.primaries[1], suite.primaries[2]
        rec.run("steenrod_f3", True, lambda: steenrod_component(f2, 1) == f3)
    if case.group is Group.GL2 and case.space is Space.GL2:
        f4 = suite.primaries[3]
        rec.run("leading_monomial_f4", [(q - 1) ** 2, q - 1, 0, 0], lambda: list(leading_monomial_lex(f4)))
        g = find_irreducible_quadratic(F)
        rec.run("omega_orbit", q * q - q, lambda: len(orbit(omega_seed(F, g.tau, g.delta), action)))
    if "f4" in suite.extras and "sqrt_f4" in named:
        rec.run("half_root_square", True, lambda: named["sqrt_f4"] * named["sqrt_f4"] == suite.extras["f4"])
    if "pi_f4" in suite.extras:
        rec.run("sqrt_square", True, lambda: named["sqrt_pi_f4"] * named["sqrt_pi_f4"] == suite.extras["pi_f4"])

    if suite.expected_type == HYPERSURFACE:
        _secondary_checks(rec, case, suite, action, D)

    if case.group in (Group.GL2, Group.SL2):
        want = 0 if case.space is Space.GL2 or odd else "positive"
        rec.run("pseudoreflections", want, lambda: pseudoreflection_scan(action),
                lambda e, o: o > 0 if e == "positive" else o == e)
        if case.space is Space.GL2 and q <= 4:
            rec.run("representation_dets", [1], lambda: sorted(representation_dets(action)))
        if q <= 16:
            P = enumerate_group(Group.UNIPOTENT, F)
            if case.space is Space.GL2:
                rec.run("fixed_dim_P", 2, lambda: fixed_subspace_dim(action, P))
            elif not odd:
                rec.run("fixed_dim_P", 2, lambda: fixed_subspace_dim(action, P))
    cg = expected_class_group(case)
    if cg is not None:
        rec.run("class_group_order", cg, lambda: class_group_order(action))
        rec.run("ufd", cg == 1, lambda: class_group_order(action) == 1)
    if case.group is Group.O2 and case.space is not Space.ALTERNATING:
        a = action.ring.gens()[0]
        size = action.source_order if not odd else action.source_order // 4
        rec.run("orbit_a", size, lambda: len(orbit(a, action)))
    return report


def _secondary_checks(rec: _Recorder, case: CaseSpec, suite: InvariantSuite, action: GroupAction, D: int):
    F = case.field
    odd = F.p != 2
    sec = expected_secondary_degree(case)
    R = list(suite.primaries)
    cache = ProductCache(R)
    h = suite.jacobian
    if h is not None:
        rec.run("jacobian_degree", sec, lambda: h.degree())
        rec.run("jacobian_invariant", True, lambda: action.fixes(h))
        if odd:
            rec.run("h_squared_in_R", True, lambda: subring_membership(h * h, R, cache))
            rec.run("h_not_in_R", False, lambda: subring_membership(h, R, cache))
        else:
            rec.run("h_in_R", True, lambda: subring_membership(h, R, cache))
        if case.space is Space.GL2 and case.group is not Group.O2:
            tau = tau_ad_substitution(F)
            rec.run("tau_ad_sign", True, lambda: apply_substitution(h, tau) == -h)
    eta = suite.secondary
    if eta is None and sec <= D:
        eta = rec.run("secondary_found", sec, lambda: find_secondary(action, R, sec),
                      lambda e, o: isinstance(o, Poly) and o.degree() == e)
        if not isinstance(eta, Poly):
            return
        rec.report.checks[-1].observed = eta.degree()
        rec.run("secondary_invariant", True, lambda: action.fixes(eta))
        rec.run("secondary_not_in_R", False, lambda: subring_membership(eta, R, cache))
    if eta is not None or sec <= D:
        counts = decomposition_counts(suite.degrees, sec, D)
        rec.run("decomposition_count", counts, lambda: rec.report.dims)
