"""Sparse multivariate polynomials over a finite field.

A polynomial is a mapping from exponent tuples to nonzero field elements.
Large products are carried out with numpy by packing exponent tuples into
single integer keys.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .gf import FieldSpec

Monomial = tuple[int, ...]

_NUMPY_MUL_THRESHOLD = 400
_CHUNK = 1 << 22


class RingMismatch(ValueError):
    pass


class NotASquare(ValueError):
    pass


@dataclass(frozen=True)
class RingSpec:
    field: FieldSpec
    variables: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variable names must be distinct")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise KeyError(f"unknown variable {var!r}") from None

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c: int) -> "Poly":
        return Poly(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name: str) -> "Poly":
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return Poly(self, {tuple(e): 1})

    def gens(self) -> tuple["Poly", ...]:
        return tuple(self.var(v) for v in self.variables)

    def linear(self, coeffs: Sequence[int]) -> "Poly":
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * self.nvars
                e[i] = 1
                terms[tuple(e)] = int(c)
        return Poly(self, terms)

    def monomial(self, exps: Sequence[int], coeff: int = 1) -> "Poly":
        return Poly(self, {tuple(exps): coeff} if coeff else {})

    def parse(self, text: str) -> "Poly":
        return parse_poly(self, text)


def monomials_of_degree(n: int, d: int) -> list[Monomial]:
    """All exponent tuples of length n and total degree d, lex-descending."""
    if n == 0:
        return [()] if d == 0 else []
    if n == 1:
        return [(d,)]
    out = []
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - first):
            out.append((first,) + rest)
    return out


class Poly:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingSpec, terms: Mapping[Monomial, int]):
        self.ring = ring
        self.terms = {m: int(c) for m, c in terms.items() if c}
        self._hash = None

    # -- basic protocol ---------------------------------------------------
    @property
    def field(self) -> FieldSpec:
        return self.ring.field

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.ring.const(self.field.from_int(other))
        return isinstance(other, Poly) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Poly({to_text(self)!r})"

    def __str__(self):
        return to_text(self)

    def _check(self, other: "Poly"):
        if not isinstance(other, Poly) or other.ring != self.ring:
            raise RingMismatch("polynomials live in different rings")

    # -- grading ----------------------------------------------------------
    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly(self.ring, {m: c for m, c in self.terms.items() if sum(m) == d})

    def coefficient(self, exps: Sequence[int]) -> int:
        return self.terms.get(tuple(exps), 0)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        F = self.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = F.add(out.get(m, 0), c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly(self.ring, out)

    def __neg__(self) -> "Poly":
        F = self.field
        return Poly(self.ring, {m: F.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def scale(self, c: int) -> "Poly":
        F = self.field
        if c == 0:
            return self.ring.zero()
        return Poly(self.ring, {m: F.mul(c, v) for m, v in self.terms.items()})

    def __mul__(self, other) -> "Poly":
        if isinstance(other, int):
            return self.scale(self.field.from_int(other))
        self._check(other)
        if not self.terms or not other.terms:
            return self.ring.zero()
        if len(self.terms) * len(other.terms) >= _NUMPY_MUL_THRESHOLD:
            return _numpy_mul(self, other)
        F = self.field
        out: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = F.add(out.get(m, 0), F.mul(c1, c2))
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_monomial(self, exps: Sequence[int], coeff: int = 1) -> "Poly":
        F = self.field
        return Poly(self.ring, {tuple(a + b for a, b in zip(m, exps)): F.mul(c, coeff)
                                for m, c in self.terms.items()})

    # -- calculus and orderings ------------------------------------------
    def derivative(self, var: str) -> "Poly":
        return partial_derivative(self, var)

    def leading_monomial(self) -> Monomial:
        return leading_monomial_lex(self)

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        return substitute(self, images)

    def evaluate(self, point: Sequence[int]) -> int:
        return evaluate(self, point)

    # -- array views ------------------------------------------------------
    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.ring.nvars
        if not self.terms:
            return np.zeros((0, n), dtype=np.int64), np.zeros(0, dtype=np.int64)
        exps = np.array(list(self.terms.keys()), dtype=np.int64).reshape(len(self.terms), n)
        coeffs = np.fromiter(self.terms.values(), dtype=np.int64, count=len(self.terms))
        return exps, coeffs

    @classmethod
    def from_arrays(cls, ring: RingSpec, exps: np.ndarray, coeffs: np.ndarray) -> "Poly":
        keep = coeffs != 0
        exps, coeffs = exps[keep], coeffs[keep]
        return cls(ring, dict(zip(map(tuple, exps.tolist()), coeffs.tolist())))


def _pack(exps: np.ndarray, base: int) -> np.ndarray:
    key = np.zeros(exps.shape[0], dtype=np.int64)
    for j in range(exps.shape[1]):
        key = key * base + exps[:, j]
    return key


def _unpack(keys: np.ndarray, base: int, n: int) -> np.ndarray:
    out = np.zeros((keys.shape[0], n), dtype=np.int64)
    for j in range(n - 1, -1, -1):
        out[:, j] = keys % base
        keys = keys // base
    return out


def _reduce(F: FieldSpec, keys: np.ndarray, vals: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(keys, kind="stable")
    keys, vals = keys[order], vals[order]
    starts = np.flatnonzero(np.concatenate([[True], keys[1:] != keys[:-1]]))
    return keys[starts], F.segment_sum(vals, starts)


def _numpy_mul(f: Poly, g: Poly) -> Poly:
    F = f.field
    n = f.ring.nvars
    base = f.degree() + g.degree() + 1
    if n and float(base) ** n >= 2.0 ** 62:  # pragma: no cover - far beyond desk scale
        raise OverflowError("exponents too large to pack")
    if len(f) < len(g):
        f, g = g, f
    ef, cf = f.arrays()
    eg, cg = g.arrays()
    kf, kg = _pack(ef, base), _pack(eg, base)
    step = max(1, _CHUNK // len(kf))
    parts_k, parts_v = [], []
    for s in range(0, len(kg), step):
        k = (kf[None, :] + kg[s:s + step, None]).ravel()
        v = F.mul(cf[None, :], cg[s:s + step, None]).ravel()
        k, v = _reduce(F, k, v)
        parts_k.append(k)
        parts_v.append(v)
    keys, vals = _reduce(F, np.concatenate(parts_k), np.concatenate(parts_v))
    return Poly.from_arrays(f.ring, _unpack(keys, base, n), vals)


def poly_sum(ring: RingSpec, polys: Iterable[Poly]) -> Poly:
    acc = ring.zero()
    for p in polys:
        acc = acc + p
    return acc


def poly_product(ring: RingSpec, polys: Iterable[Poly]) -> Poly:
    acc = ring.one()
    for p in polys:
        acc = acc * p
    return acc


# -- linear substitutions ---------------------------------------------------

@dataclass(frozen=True)
class LinearSubstitution:
    """Variable i of ``ring`` is sent to the linear form ``matrix[i]`` over
    the variables of ``target`` (defaults to ``ring``)."""
    ring: RingSpec
    matrix: tuple[tuple[int, ...], ...]
    target: Optional[RingSpec] = None

    @property
    def codomain(self) -> RingSpec:
        return self.target or self.ring

    @classmethod
    def from_images(cls, ring: RingSpec, images: Sequence[Poly], target: Optional[RingSpec] = None):
        tgt = target or ring
        rows = []
        for img in images:
            if img.ring != tgt:
                raise RingMismatch("image in the wrong ring")
            if img.degree() > 1 or (img.terms and not img.is_homogeneous()):
                raise ValueError("images must be homogeneous linear forms")
            row = [0] * tgt.nvars
            for m, c in img.terms.items():
                row[m.index(1)] = c
            rows.append(tuple(row))
        if len(rows) != ring.nvars:
            raise ValueError("one image per variable is required")
        return cls(ring, tuple(rows), target)

    @classmethod
    def identity(cls, ring: RingSpec) -> "LinearSubstitution":
        n = ring.nvars
        return cls(ring, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def images(self) -> tuple[Poly, ...]:
        return tuple(self.codomain.linear(row) for row in self.matrix)

    def compose(self, other: "LinearSubstitution") -> "LinearSubstitution":
        """``self.compose(other)`` applied to f equals other applied after self:
        f -> f(self) -> (f(self))(other)."""
        F = self.ring.field
        n = len(other.matrix[0]) if other.matrix else 0
        rows = []
        for row in self.matrix:
            out = [0] * n
            for k, c in enumerate(row):
                if c:
                    for j, d in enumerate(other.matrix[k]):
                        if d:
                            out[j] = F.add(out[j], F.mul(c, d))
            rows.append(tuple(out))
        return LinearSubstitution(self.ring, tuple(rows), other.target)

    def det(self) -> int:
        return self.ring.field.det(self.matrix)

    def is_invertible(self) -> bool:
        return len(self.matrix) == len(self.matrix[0]) and self.det() != 0

    def inverse(self) -> "LinearSubstitution":
        F = self.ring.field
        n = len(self.matrix)
        M = np.array(self.matrix, dtype=np.int64)
        R, piv = F.rref(np.concatenate([M, np.eye(n, dtype=np.int64)], axis=1), pivot_cols=n)
        if len(piv) != n:
            raise ValueError("substitution is not invertible")
        return LinearSubstitution(self.ring, tuple(tuple(map(int, r)) for r in R[:, n:]))


def apply_substitution(f: Poly, s: LinearSubstitution) -> Poly:
    if f.ring != s.ring:
        raise RingMismatch("substitution acts on a different ring")
    return substitute(f, s.images())


def substitute(f: Poly, images: Sequence[Poly]) -> Poly:
    """Ring homomorphism sending variable i to images[i] (Horner scheme)."""
    ring = f.ring
    if len(images) != ring.nvars:
        raise ValueError("one image per variable is required")
    target = images[0].ring if images else ring
    if not f.terms:
        return target.zero()

    def rec(terms: dict[Monomial, int], i: int) -> Poly:
        if i == ring.nvars:
            return target.const(next(iter(terms.values())))
        groups: dict[int, dict[Monomial, int]] = {}
        for m, c in terms.items():
            groups.setdefault(m[i], {})[m] = c
        acc = None
        prev = None
        for k in sorted(groups, reverse=True):
            part = rec(groups[k], i + 1)
            if acc is None:
                acc = part
            else:
                acc = acc * (images[i] ** (prev - k)) + part
            prev = k
        if prev:
            acc = acc * (images[i] ** prev)
        return acc

    return rec(dict(f.terms), 0)


def project(f: Poly, target: RingSpec, assignment: Mapping[str, Poly] | Sequence[Poly]) -> Poly:
    """Ring map into ``target`` given by a linear image for every variable."""
    if isinstance(assignment, Mapping):
        missing = set(f.ring.variables) - set(assignment)
        if missing:
            raise ValueError(f"no image for {sorted(missing)}")
        images = [assignment[v] for v in f.ring.variables]
    else:
        images = list(assignment)
    for img in images:
        if img.ring != target:
            raise RingMismatch("assignment images must live in the target ring")
        if img.degree() > 1:
            raise ValueError("assignment images must be linear")
    return substitute(f, images)


def evaluate(f: Poly, point: Sequence[int]) -> int:
    F = f.field
    if len(point) != f.ring.nvars:
        raise ValueError("point has the wrong arity")
    acc = 0
    for m, c in f.terms.items():
        t = c
        for x, k in zip(point, m):
            if k:
                t = F.mul(t, F.pow(x, k))
        acc = F.add(acc, t)
    return acc


# -- derivatives, Jacobians, orderings --------------------------------------

def partial_derivative(f: Poly, var: str) -> Poly:
    i = f.ring.index(var)
    F = f.field
    out = {}
    for m, c in f.terms.items():
        k = m[i] % F.p
        if k:
            e = list(m)
            e[i] -= 1
            out[tuple(e)] = F.mul(c, k)
    return Poly(f.ring, out)


def _perm_sign(perm: Sequence[int]) -> int:
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def poly_det(rows: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant of a square matrix of polynomials (cofactor expansion
    along the first row, used for n <= 4)."""
    n = len(rows)
    ring = rows[0][0].ring
    if n == 1:
        return rows[0][0]
    if n > 4:
        acc = ring.zero()
        for perm in permutations(range(n)):
            term = ring.const(1 if _perm_sign(perm) == 1 else ring.field.neg(1))
            for i, j in enumerate(perm):
                term = term * rows[i][j]
                if not term:
                    break
            acc = acc + term
        return acc
    acc = ring.zero()
    for j in range(n):
        if not rows[0][j]:
            continue
        minor = [[r[k] for k in range(n) if k != j] for r in rows[1:]]
        term = rows[0][j] * poly_det(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def jacobian_matrix(fs: Sequence[Poly]) -> list[list[Poly]]:
    ring = fs[0].ring
    return [[partial_derivative(f, v) for v in ring.variables] for f in fs]


def jacobian_det(fs: Sequence[Poly]) -> Poly:
    if not fs or len(fs) != fs[0].ring.nvars:
        raise ValueError("the Jacobian needs exactly as many polynomials as variables")
    for f in fs[1:]:
        fs[0]._check(f)
    return poly_det(jacobian_matrix(fs))


def leading_monomial_lex(f: Poly) -> Monomial:
    if not f.terms:
        raise ValueError("zero polynomial has no leading monomial")
    return max(f.terms)


def sqrt_char2(f: Poly) -> Poly:
    F = f.field
    if F.p != 2:
        raise ValueError("square roots of polynomials are only taken in characteristic 2")
    out = {}
    for m, c in f.terms.items():
        if any(k % 2 for k in m):
            raise NotASquare(f"{to_text(f)} is not a square")
        out[tuple(k // 2 for k in m)] = F.frobenius_inverse(c)
    return Poly(f.ring, out)


# -- text format -------------------------------------------------------------

def _sort_key(m: Monomial):
    return (-sum(m), tuple(-k for k in m))


def to_text(f: Poly) -> str:
    """Terms by descending degree then lex, e.g. ``a^2*d + 2*b*c``.  A unit
    coefficient is omitted unless the term is constant."""
    if not f.terms:
        return "0"
    names = f.ring.variables
    parts = []
    for m in sorted(f.terms, key=_sort_key):
        c = f.terms[m]
        factors = [v if k == 1 else f"{v}^{k}" for v, k in zip(names, m) if k]
        if not factors:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(factors))
        else:
            parts.append("*".join([str(c)] + factors))
    return " + ".join(parts)


_FACTOR = re.compile(r"^(?:(\d+)|([A-Za-z_]\w*)(?:\^(\d+))?)$")


def parse_poly(ring: RingSpec, text: str) -> Poly:
    F = ring.field
    text = text.strip()
    if text == "0":
        return ring.zero()
    terms: dict[Monomial, int] = {}
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            raise ValueError(f"malformed polynomial {text!r}")
        coeff = 1
        exps = [0] * ring.nvars
        for factor in chunk.split("*"):
            mt = _FACTOR.match(factor.strip())
            if not mt:
                raise ValueError(f"malformed factor {factor!r}")
            if mt.group(1) is not None:
                c = int(mt.group(1))
                if c >= F.q:
                    raise ValueError(f"coefficient {c} is not an element of F_{F.q}")
                coeff = F.mul(coeff, c)
            else:
                exps[ring.index(mt.group(2))] += int(mt.group(3) or 1)
        m = tuple(exps)
        terms[m] = F.add(terms.get(m, 0), coeff)
    return Poly(ring, terms)
