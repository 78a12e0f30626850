"""Finite fields GF(p^e) in Zech-logarithm representation.

Elements are plain integers ("codes"): 0 is the zero element and k >= 1
stands for beta**(k-1), where beta is the class of the polynomial variable.
The defining polynomial is the lexicographically smallest monic primitive
polynomial of degree e (coefficients compared constant term first), so all
codes are reproducible from (p, e) alone.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from pathlib import Path

import numpy as np

MAX_ORDER = 2**20

FieldElement = int


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q = p**e, or raise FieldError."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    p = prime_factors(q)[0]
    e = 0
    n = q
    while n % p == 0:
        n //= p
        e += 1
    if n != 1:
        raise FieldError(f"{q} is not a prime power")
    return p, e


# -- polynomials over GF(p), coefficient lists low degree first ------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _polymulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _polymod(out, m, p)


def _polypowmod(a: list[int], k: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _polymod(a, m, p)
    while k:
        if k & 1:
            result = _polymulmod(result, base, m, p)
        base = _polymulmod(base, base, m, p)
        k >>= 1
    return result


def is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    e = len(poly) - 1
    if e < 1:
        return False
    if e == 1:
        return True
    for d in range(1, e // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            if not _polymod(poly, list(tail) + [1], p):
                return False
    return True


def variable_is_primitive(poly: list[int], p: int) -> bool:
    e = len(poly) - 1
    n = p**e - 1
    x = [0, 1] if e > 1 else [(-poly[0]) % p]
    if _polypowmod(x, n, poly, p) != [1]:
        return False
    return all(_polypowmod(x, n // ell, poly, p) != [1] for ell in prime_factors(n))


def _smallest_primitive_root(p: int) -> int:
    if p == 2:
        return 1
    n = p - 1
    facs = prime_factors(n)
    for g in range(2, p):
        if all(pow(g, n // ell, p) != 1 for ell in facs):
            return g
    raise FieldError(f"no primitive root mod {p}")


# -- the field ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FieldSpec:
    """GF(p^e) with precomputed Zech logarithms.

    ``zech[k]`` is the log of 1 + beta**k, or -1 when that sum is zero.
    ``vec[code]`` is the coefficient vector of an element packed base p
    (constant term least significant); ``code_of`` inverts it.
    """

    p: int
    e: int
    poly: tuple[int, ...]
    zech: np.ndarray = field(repr=False)
    vec: np.ndarray = field(repr=False)
    code_of: np.ndarray = field(repr=False)
    _zech_list: list = field(repr=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_zech_list", self.zech.tolist())

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def n(self) -> int:
        """Order of the multiplicative group."""
        return self.p**self.e - 1

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    @property
    def beta(self) -> int:
        return 2 if self.q > 2 else 1

    def elements(self) -> range:
        return range(self.q)

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.e})"

    # exponent <-> code
    def exp(self, k: int) -> int:
        return k % self.n + 1

    def log(self, a: int) -> int:
        if a == 0:
            raise FieldError("log of zero")
        return a - 1

    # arithmetic
    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        n = self.n
        i = a - 1
        z = self._zech_list[(b - a) % n]
        if z < 0:
            return 0
        return (i + z) % n + 1

    def neg(self, a: int) -> int:
        if a == 0 or self.p == 2:
            return a
        return (a - 1 + self.n // 2) % self.n + 1

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return (a + b - 2) % self.n + 1

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return (1 - a) % self.n + 1

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 1 if k == 0 else 0
        return ((a - 1) * k) % self.n + 1

    def frobenius(self, a: int, i: int = 1) -> int:
        """a ** (p**i)."""
        if a == 0:
            return 0
        return ((a - 1) * pow(self.p, i, self.n)) % self.n + 1

    def power_class(self, a: int, d: int) -> int:
        if a == 0:
            raise FieldError("power class of zero")
        if self.n % d:
            raise FieldError(f"{d} does not divide q-1 = {self.n}")
        return (a - 1) % d

    def is_square(self, a: int) -> bool:
        return a != 0 and (self.p == 2 or (a - 1) % 2 == 0)

    def from_int(self, c: int) -> int:
        """Code of the prime-field element c mod p."""
        return int(self.code_of[c % self.p])

    def from_coeffs(self, coeffs) -> int:
        v = 0
        for c in reversed(list(coeffs)):
            v = v * self.p + (c % self.p)
        return int(self.code_of[v])

    def coeffs(self, a: int) -> list[int]:
        v = int(self.vec[a])
        out = []
        for _ in range(self.e):
            out.append(v % self.p)
            v //= self.p
        return out

    # subfields
    def subfield(self, d: int) -> list[int]:
        """Codes of GF(p^d) inside this field, sorted."""
        if self.e % d:
            raise FieldError(f"GF({self.p}^{d}) is not a subfield of {self!r}")
        step = self.n // (self.p**d - 1)
        return sorted([0] + [k * step + 1 for k in range(self.p**d - 1)])

    def norm_to_subfield(self, a: int) -> int:
        """Norm from GF(r^2) down to GF(r), i.e. a ** (r+1)."""
        if self.e % 2:
            raise FieldError(f"{self!r} has odd degree; no index-2 subfield")
        r = self.p ** (self.e // 2)
        out = self.pow(a, r + 1)
        assert out == 0 or (out - 1) % (r + 1) == 0
        return out

    # vectorised helpers (numpy arrays of codes)
    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        n = self.n
        z = self.zech[(b - a) % n]
        out = np.where(z < 0, 0, (a - 1 + z) % n + 1)
        out = np.where(a == 0, b, out)
        return np.where(b == 0, a, out)

    def vneg(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a
        return np.where(a == 0, 0, (a - 1 + self.n // 2) % self.n + 1)

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        return np.where((a == 0) | (b == 0), 0, (a + b - 2) % self.n + 1)

    def vfrob(self, a: np.ndarray, i: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return np.where(a == 0, 0, ((a - 1) * pow(self.p, i, self.n)) % self.n + 1)


def _build_tables(p: int, e: int, poly: list[int]):
    q = p**e
    n = q - 1
    vec = np.zeros(q, dtype=np.int64)
    code_of = np.zeros(q, dtype=np.int64)
    # powers of beta as digit lists, constant term first
    cur = [1] + [0] * (e - 1)
    lead = [(-c) % p for c in poly[:-1]]  # x^e = -(c_0 + ... + c_{e-1} x^{e-1})
    weights = [p**i for i in range(e)]
    for k in range(n):
        v = sum(c * w for c, w in zip(cur, weights))
        vec[k + 1] = v
        code_of[v] = k + 1
        if e == 1:
            cur = [cur[0] * lead[0] % p]
        else:
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [(c + top * l) % p for c, l in zip(cur, lead)]
    if len(set(vec[1:].tolist())) != n:
        raise FieldError("polynomial variable is not primitive")
    # Zech: 1 + beta^k, digitwise
    digits = np.stack([(vec[1:] // w) % p for w in weights], axis=1)
    digits[:, 0] = (digits[:, 0] + 1) % p
    sums = digits @ np.array(weights, dtype=np.int64)
    codes = code_of[sums]
    zech = np.where(sums == 0, -1, codes - 1)
    return zech.astype(np.int64), vec, code_of


def _find_poly(p: int, e: int) -> list[int]:
    if e == 1:
        return [(-_smallest_primitive_root(p)) % p, 1]
    for tail in itertools.product(range(p), repeat=e):
        poly = list(tail) + [1]
        if poly[0] == 0:
            continue
        if is_irreducible(poly, p) and variable_is_primitive(poly, p):
            return poly
    raise FieldError(f"no primitive polynomial of degree {e} over GF({p})")


def _cache_path(p: int, e: int) -> Path | None:
    root = os.environ.get("NETCLIQUE_CACHE_DIR")
    if not root:
        return None
    return Path(root) / f"gf_{p}_{e}.npz"


@lru_cache(maxsize=None)
def make_field(p: int, e: int = 1) -> FieldSpec:
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if e < 1:
        raise FieldError("extension degree must be positive")
    if p**e > MAX_ORDER:
        raise FieldError(f"GF({p}^{e}) exceeds the size guard {MAX_ORDER}")
    path = _cache_path(p, e)
    if path is not None and path.exists():
        with np.load(path) as data:
            return FieldSpec(p, e, tuple(int(c) for c in data["poly"]),
                             data["zech"], data["vec"], data["code_of"])
    poly = _find_poly(p, e)
    zech, vec, code_of = _build_tables(p, e, poly)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savez(path, poly=np.array(poly), zech=zech, vec=vec, code_of=code_of)
    return FieldSpec(p, e, tuple(poly), zech, vec, code_of)


def field_of_order(q: int) -> FieldSpec:
    p, e = prime_power(q)
    return make_field(p, e)


def multiplicative_order(F: FieldSpec, a: int) -> int:
    if a == 0:
        raise FieldError("zero has no multiplicative order")
    return F.n // gcd(F.n, a - 1)


def subfield_embedding(r_spec: FieldSpec, r2_spec: FieldSpec) -> list[int]:
    """Field embedding GF(r) -> GF(r^2) as a list indexed by GF(r) codes.

    The image of beta_r is the root of r_spec.poly of the form
    beta**((r+1)j), so GF(r)^* lands on <beta**(r+1)>.
    """
    r = r_spec.q
    if r2_spec.p != r_spec.p or r2_spec.q != r * r:
        raise FieldError(f"{r_spec!r} is not the index-2 subfield of {r2_spec!r}")
    F = r2_spec
    step = r + 1
    for j in range(1, r):
        if gcd(j, r - 1) != 1:
            continue
        gamma = F.exp(step * j)
        # evaluate poly at gamma with Horner
        acc = 0
        for c in reversed(r_spec.poly):
            acc = F.add(F.mul(acc, gamma), F.from_int(c))
        if acc == 0:
            emb = [0] + [F.pow(gamma, k) for k in range(r - 1)]
            for a in range(r):
                for b in range(r):
                    s = F.add(emb[a], emb[b])
                    assert s == emb[r_spec.add(a, b)]
            return emb
    raise FieldError("no root of the subfield polynomial found")
