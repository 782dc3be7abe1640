"""Total Steenrod operation x -> x + x^q T and its components P^i."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .mpoly import Monomial, Poly


def binomial_mod_p(n: int, k: int, p: int) -> int:
    """C(n, k) mod p via Lucas' theorem."""
    if k < 0 or k > n:
        return 0
    out = 1
    while n or k:
        a, b = n % p, k % p
        if b > a:
            return 0
        num = den = 1
        for i in range(b):
            num = num * (a - i) % p
            den = den * (i + 1) % p
        out = out * num * pow(den, -1, p) % p
        n //= p
        k //= p
    return out


@dataclass(frozen=True)
class SteenrodExpansion:
    components: tuple[Poly, ...]

    def __getitem__(self, i: int) -> Poly:
        if i < len(self.components):
            return self.components[i]
        return self.components[0].ring.zero()

    def __len__(self):
        return len(self.components)

    def __mul__(self, other: "SteenrodExpansion") -> "SteenrodExpansion":
        ring = self.components[0].ring
        n = len(self) + len(other) - 1
        out = [ring.zero() for _ in range(n)]
        for i, f in enumerate(self.components):
            for j, g in enumerate(other.components):
                if f and g:
                    out[i + j] = out[i + j] + f * g
        return SteenrodExpansion(_trimmed(out))


def _trimmed(comps: list[Poly]) -> tuple[Poly, ...]:
    while len(comps) > 1 and not comps[-1]:
        comps.pop()
    return tuple(comps)


def steenrod_total(f: Poly) -> SteenrodExpansion:
    ring = f.ring
    F = ring.field
    q, p = F.q, F.p
    n = ring.nvars
    acc: list[dict[Monomial, int]] = [dict() for _ in range(max(f.degree(), 0) + 1)]
    for m, c in f.terms.items():
        # choose k_i of the e_i linear factors x_i to contribute x_i^q T
        for ks in product(*(range(e + 1) for e in m)):
            coeff = c
            for e, k in zip(m, ks):
                b = binomial_mod_p(e, k, p)
                if b == 0:
                    coeff = 0
                    break
                coeff = F.mul(coeff, b)
            if not coeff:
                continue
            mono = tuple(e + k * (q - 1) for e, k in zip(m, ks))
            slot = acc[sum(ks)]
            v = F.add(slot.get(mono, 0), coeff)
            if v:
                slot[mono] = v
            else:
                slot.pop(mono, None)
    if n == 0 or not f.terms:
        return SteenrodExpansion((f,))
    return SteenrodExpansion(_trimmed([Poly(ring, t) for t in acc]))


def steenrod_component(f: Poly, i: int) -> Poly:
    if i < 0:
        raise ValueError("Steenrod index must be non-negative")
    return steenrod_total(f)[i]
