"""Finite fields F_q, q = p^e, with table-driven arithmetic.

Elements are integers in ``[0, q)``.  The base-p digits of an element are the
coefficients (lowest first) of its residue modulo the defining polynomial, so
``0`` is zero, ``1`` is one and ``p`` is the class of ``x``.  Every operation
accepts Python ints as well as integer numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Optional, Sequence

import numpy as np

Q_CAP = 1 << 16
_ADD_TABLE_CAP = 1024


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> Optional[tuple[int, int]]:
    """Return (p, e) with q = p**e, or None."""
    if q < 2:
        return None
    p = 2
    while p * p <= q and q % p:
        p += 1
    if q % p:
        p = q
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    return (p, e) if r == 1 else None


# -- polynomials over F_p, coefficient lists lowest degree first ------------

def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _polymod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    inv_lead = pow(m[-1], -1, p)
    while len(a) >= len(m):
        f = a[-1] * inv_lead % p
        s = len(a) - len(m)
        for i, mi in enumerate(m):
            a[s + i] = (a[s + i] - f * mi) % p
        _trim(a)
    return a


def _is_irreducible(m: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(m)/2."""
    e = len(m) - 1
    if e == 1:
        return True
    for k in range(1, e // 2 + 1):
        for low in product(range(p), repeat=k):
            if not _polymod(m, list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, e: int) -> list[int]:
    """Monic irreducible of degree e whose lower coefficients, read as a base-p
    integer (constant term least significant), are smallest."""
    for code in range(p ** e):
        low = [(code // p ** i) % p for i in range(e)]
        m = low + [1]
        if _is_irreducible(m, p):
            return m
    raise FieldError(f"no irreducible polynomial of degree {e} over F_{p}")


@dataclass(frozen=True, eq=False)
class FieldSpec:
    p: int
    e: int
    modulus: tuple[int, ...]
    exp_table: tuple[int, ...] = field(repr=False)
    log_table: tuple[int, ...] = field(repr=False)

    @property
    def q(self) -> int:
        return self.p ** self.e

    @property
    def char(self) -> int:
        return self.p

    @property
    def generator(self) -> int:
        return self.exp_table[1] if self.q > 2 else 1

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __str__(self):
        return f"{self.p}^{self.e}"

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    # -- cached numpy tables --------------------------------------------
    @cached_property
    def _exp(self) -> np.ndarray:
        # doubled so that log x + log y never needs a reduction
        t = np.array(self.exp_table, dtype=np.int64)
        return np.concatenate([t, t])

    @cached_property
    def _log(self) -> np.ndarray:
        t = np.array(self.log_table, dtype=np.int64)
        t[0] = 0
        return t

    @cached_property
    def _inv(self) -> np.ndarray:
        n = self.q - 1
        inv = np.zeros(self.q, dtype=np.int64)
        for x in range(1, self.q):
            inv[x] = self.exp_table[(n - self.log_table[x]) % n]
        return inv

    @cached_property
    def _neg(self) -> np.ndarray:
        return np.array([self._neg_scalar(x) for x in range(self.q)], dtype=np.int64)

    @cached_property
    def _add_table(self) -> Optional[np.ndarray]:
        if self.e == 1 or self.p == 2 or self.q > _ADD_TABLE_CAP:
            return None
        x = np.arange(self.q, dtype=np.int64)
        return self._digit_add(x[:, None], x[None, :])

    @cached_property
    def _pw(self) -> np.ndarray:
        return self.p ** np.arange(self.e, dtype=np.int64)

    # -- digits -----------------------------------------------------------
    def digits(self, x) -> list:
        """Base-p digits of x (lowest first); works elementwise on arrays."""
        return [(x // int(w)) % self.p for w in self._pw]

    def from_digits(self, ds) -> np.ndarray | int:
        out = 0
        for w, d in zip(self._pw, ds):
            out = out + int(w) * d
        return out

    def _digit_add(self, x, y):
        return self.from_digits([(a + b) % self.p for a, b in zip(self.digits(x), self.digits(y))])

    def _neg_scalar(self, x: int) -> int:
        return int(self.from_digits([(-d) % self.p for d in self.digits(x)]))

    # -- arithmetic -------------------------------------------------------
    def add(self, x, y):
        if self.e == 1:
            return (x + y) % self.p
        if self.p == 2:
            return x ^ y
        t = self._add_table
        if t is not None:
            return t[x, y] if isinstance(x, np.ndarray) or isinstance(y, np.ndarray) else int(t[x, y])
        return self._digit_add(x, y)

    def neg(self, x):
        if self.e == 1:
            return (-x) % self.p
        if self.p == 2:
            return x
        return self._neg[x] if isinstance(x, np.ndarray) else int(self._neg[x])

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        if self.e == 1:
            return (x * y) % self.p
        if isinstance(x, np.ndarray) or isinstance(y, np.ndarray):
            x = np.asarray(x, dtype=np.int64)
            y = np.asarray(y, dtype=np.int64)
            r = self._exp[self._log[x] + self._log[y]]
            return np.where((x == 0) | (y == 0), 0, r)
        if x == 0 or y == 0:
            return 0
        return self.exp_table[(self.log_table[x] + self.log_table[y]) % (self.q - 1)]

    def inv(self, x):
        if isinstance(x, np.ndarray):
            if np.any(x == 0):
                raise ZeroDivisionError("inverse of zero in " + str(self))
            return self._inv[x]
        if x == 0:
            raise ZeroDivisionError("inverse of zero in " + str(self))
        return int(self._inv[x])

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def pow(self, x: int, n: int) -> int:
        if x == 0:
            if n < 0:
                raise ZeroDivisionError("inverse of zero in " + str(self))
            return 1 if n == 0 else 0
        return self.exp_table[(self.log_table[x] * n) % (self.q - 1)]

    def frobenius(self, x):
        return self.pow(x, self.p) if not isinstance(x, np.ndarray) else self._frob[x]

    def frobenius_inverse(self, x):
        # x -> x^(q/p) undoes x -> x^p since x^q = x
        if isinstance(x, np.ndarray):
            return self._frob_inv[x]
        return self.pow(x, self.q // self.p)

    @cached_property
    def _frob(self) -> np.ndarray:
        return np.array([self.pow(x, self.p) for x in range(self.q)], dtype=np.int64)

    @cached_property
    def _frob_inv(self) -> np.ndarray:
        return np.array([self.pow(x, self.q // self.p) for x in range(self.q)], dtype=np.int64)

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_q."""
        return n % self.p

    def is_square(self, x: int) -> bool:
        return x == 0 or self.p == 2 or self.log_table[x] % 2 == 0

    def sqrt(self, x: int) -> Optional[int]:
        """Smallest r with r*r == x, or None."""
        for r in range(self.q):
            if self.mul(r, r) == x:
                return r
        return None

    # -- vectorized linear algebra ----------------------------------------
    def segment_sum(self, values: np.ndarray, starts: np.ndarray) -> np.ndarray:
        """Field sums of ``values`` over the segments beginning at ``starts``."""
        if self.e == 1:
            return np.add.reduceat(values, starts) % self.p
        if self.p == 2:
            return np.bitwise_xor.reduceat(values, starts)
        return self.from_digits([np.add.reduceat(d, starts) % self.p for d in self.digits(values)])

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        p = self.p
        if self.e == 1:
            if A.shape[-1] * (p - 1) ** 2 < (1 << 62):
                return (A @ B) % p
            return _chunked_matmul_mod(A, B, p)
        e = self.e
        da, db = self.digits(A), self.digits(B)
        planes = [np.zeros((A.shape[0], B.shape[1]), dtype=np.int64) for _ in range(2 * e - 1)]
        for i in range(e):
            for j in range(e):
                planes[i + j] += da[i] @ db[j]
        planes = [pl % p for pl in planes]
        m = self.modulus
        for k in range(2 * e - 2, e - 1, -1):
            top = planes[k]
            for l in range(e):
                if m[l]:
                    planes[k - e + l] = (planes[k - e + l] - m[l] * top) % p
        return self.from_digits(planes[:e])

    def rref(self, M: np.ndarray, pivot_cols: Optional[int] = None, full: bool = True):
        """Row reduce a copy of M.  Pivots are searched only in the first
        ``pivot_cols`` columns; the remaining columns ride along.  Among the
        candidate pivot rows the sparsest is chosen.  Returns (R, pivots)."""
        M = np.array(M, dtype=np.int64, copy=True)
        nrows, ncols = M.shape
        limit = ncols if pivot_cols is None else pivot_cols
        pivots: list[int] = []
        r = 0
        for c in range(limit):
            if r == nrows:
                break
            cand = np.flatnonzero(M[r:, c])
            if cand.size == 0:
                continue
            if cand.size > 1:
                counts = np.count_nonzero(M[r + cand, c:], axis=1)
                piv = r + int(cand[np.argmin(counts)])
            else:
                piv = r + int(cand[0])
            if piv != r:
                M[[r, piv]] = M[[piv, r]]
            lead = int(M[r, c])
            if lead != 1:
                M[r, c:] = self.mul(M[r, c:], self.inv(lead))
            col = M[:, c] if full else np.concatenate([np.zeros(r + 1, dtype=np.int64), M[r + 1:, c]])
            rows = np.flatnonzero(col)
            rows = rows[rows != r]
            if rows.size:
                f = M[rows, c]
                M[rows, c:] = self.sub(M[rows, c:], self.mul(f[:, None], M[r, c:][None, :]))
            pivots.append(c)
            r += 1
        return M, pivots

    def rank(self, M: np.ndarray) -> int:
        M = np.asarray(M)
        if M.size == 0:
            return 0
        return len(self.rref(M, full=False)[1])

    def left_kernel(self, C: np.ndarray) -> np.ndarray:
        """Rows spanning {z : z @ C == 0}."""
        C = np.asarray(C, dtype=np.int64)
        k, n = C.shape
        if k == 0:
            return np.zeros((0, 0), dtype=np.int64)
        aug = np.concatenate([C, np.eye(k, dtype=np.int64)], axis=1)
        R, piv = self.rref(aug, pivot_cols=n, full=False)
        return R[len(piv):, n:]

    def nullspace(self, A: np.ndarray) -> np.ndarray:
        """Rows spanning {v : A @ v == 0}, in reduced echelon form."""
        A = np.asarray(A, dtype=np.int64)
        m, n = A.shape
        R, piv = self.rref(A)
        free = [j for j in range(n) if j not in set(piv)]
        out = np.zeros((len(free), n), dtype=np.int64)
        for i, j in enumerate(free):
            out[i, j] = 1
            for r, pc in enumerate(piv):
                out[i, pc] = self.neg(int(R[r, j]))
        return out

    def det(self, M: Sequence[Sequence[int]]) -> int:
        A = [list(map(int, row)) for row in M]
        n = len(A)
        d = 1
        for c in range(n):
            piv = next((r for r in range(c, n) if A[r][c]), None)
            if piv is None:
                return 0
            if piv != c:
                A[c], A[piv] = A[piv], A[c]
                d = self.neg(d)
            d = self.mul(d, A[c][c])
            inv = self.inv(A[c][c])
            for r in range(c + 1, n):
                if A[r][c]:
                    f = self.mul(A[r][c], inv)
                    A[r] = [self.sub(x, self.mul(f, y)) for x, y in zip(A[r], A[c])]
        return d


def _chunked_matmul_mod(A, B, p):
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    step = max(1, (1 << 62) // ((p - 1) ** 2 + 1))
    for s in range(0, A.shape[1], step):
        out = (out + A[:, s:s + step] @ B[s:s + step]) % p
    return out


def _mulmod_poly(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return _polymod(prod, m, p)


def build_field(p: int, e: int = 1) -> FieldSpec:
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if e < 1:
        raise FieldError("exponent must be positive")
    q = p ** e
    if q > Q_CAP:
        raise FieldError(f"q = {q} exceeds the cap {Q_CAP}")
    modulus = smallest_irreducible(p, e)
    if q == 2:
        return FieldSpec(2, 1, tuple(modulus), (1,), (0, 0))

    def to_int(c: list[int]) -> int:
        return sum(ci * p ** i for i, ci in enumerate(c))

    def to_poly(x: int) -> list[int]:
        return _trim([(x // p ** i) % p for i in range(e)])

    # generator: smallest element of multiplicative order q-1
    n = q - 1
    prime_factors = [r for r in range(2, n + 1) if n % r == 0 and is_prime(r)]
    for g in range(2, q):
        gp = to_poly(g)

        def pw(k: int) -> list[int]:
            acc, base = [1], gp
            while k:
                if k & 1:
                    acc = _mulmod_poly(acc, base, modulus, p)
                base = _mulmod_poly(base, base, modulus, p)
                k >>= 1
            return acc

        if all(_trim(pw(n // r)) != [1] for r in prime_factors):
            break
    else:  # pragma: no cover - a finite field always has a generator
        raise FieldError("no generator found")
    exp_table = [1]
    cur = [1]
    for _ in range(n - 1):
        cur = _mulmod_poly(cur, gp, modulus, p)
        exp_table.append(to_int(cur))
    log_table = [0] * q
    for k, x in enumerate(exp_table):
        log_table[x] = k
    return FieldSpec(p, e, tuple(modulus), tuple(exp_table), tuple(log_table))


def field_of_order(q: int) -> FieldSpec:
    pe = prime_power(q)
    if pe is None:
        raise FieldError(f"{q} is not a prime power")
    return build_field(*pe)


def parse_field(text: str) -> FieldSpec:
    """Parse ``"p^e"`` or a bare prime power."""
    if "^" in text:
        p, e = text.split("^")
        return build_field(int(p), int(e))
    return field_of_order(int(text))


@dataclass(frozen=True)
class IrreducibleQuadratic:
    """g(x) = x^2 - tau*x + delta."""
    tau: int
    delta: int

    def __call__(self, F: FieldSpec, x: int) -> int:
        return F.add(F.sub(F.mul(x, x), F.mul(self.tau, x)), self.delta)

    def has_root(self, F: FieldSpec) -> bool:
        return any(self(F, x) == 0 for x in F.elements())


def find_irreducible_quadratic(F: FieldSpec) -> IrreducibleQuadratic:
    """x^2 + delta (odd q) or x^2 + x + delta (even q), smallest workable delta."""
    tau = 0 if F.p != 2 else 1
    for delta in F.elements():
        g = IrreducibleQuadratic(tau, delta)
        if not g.has_root(F):
            return g
    raise FieldError("no irreducible quadratic")  # pragma: no cover
