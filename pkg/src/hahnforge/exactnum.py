"""Exact scalar arithmetic: F_{p^r}, truncated Witt rings and Teichmüller digits.

Representations
---------------
The residue field F_{p^r} is presented as F_p[g]/(m(g)) for a fixed monic
irreducible m of degree r, chosen deterministically (see find_modulus).
An FqElem stores the r coefficients of the basis 1, g, ..., g^{r-1}, each
reduced into [0, p).

The length-L truncated Witt ring W_L(F_{p^r}) is realized as
Z[g]/(p^L, m(g)): a WittElem stores r integer coefficients reduced into
[0, p^L).  Ring operations are plain polynomial arithmetic; Witt coordinates
are never materialized.  A WittElem carries its own precision `prec` (number
of known p-adic digits), defaulting to the configuration's L, so callers that
need longer or shorter truncations can mix them; binary operations return the
minimum precision of their operands.

Teichmüller lifts are computed by fixpoint iteration x -> x^(p^r), which
gains at least one p-adic digit per step, so `prec` iterations always
suffice.  Rational numbers are stdlib fractions.Fraction throughout.

All values are immutable; operations are pure functions of their operands
and the shared PrimeConfig.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .errors import DivisionByZero, NotAUnit, ZeroPolynomial

__all__ = [
    "PrimeConfig",
    "FqElem",
    "WittElem",
    "find_modulus",
    "is_prime",
    "teichmueller",
    "digit_decompose",
    "fq_poly_roots",
    "subfield_embedding",
]


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


# ---------------------------------------------------------------------------
# dense polynomial helpers over Z/q, coefficient lists low degree first
# ---------------------------------------------------------------------------

def _trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a, b, q):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % q
    return _trim(out)


def _poly_reduce(c, modulus, q):
    """Reduce c by a monic modulus, coefficients mod q."""
    c = [x % q for x in c]
    r = len(modulus) - 1
    for i in range(len(c) - 1, r - 1, -1):
        t = c[i]
        if t:
            c[i] = 0
            for j in range(r):
                c[i - r + j] = (c[i - r + j] - t * modulus[j]) % q
    del c[r:]
    while len(c) < r:
        c.append(0)
    return c


def _poly_mulmod(a, b, modulus, q):
    return _poly_reduce(_poly_mul(a, b, q), modulus, q)


def _poly_powmod(a, e, modulus, q):
    result = _poly_reduce([1], modulus, q)
    base = _poly_reduce(list(a), modulus, q)
    while e > 0:
        if e & 1:
            result = _poly_mulmod(result, base, modulus, q)
        base = _poly_mulmod(base, base, modulus, q)
        e >>= 1
    return result


def _poly_divmod_fp(a, b, p):
    """Quotient and remainder of dense polynomials over F_p, b nonzero."""
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    inv_lead = pow(b[-1], -1, p)
    quo = [0] * max(0, len(a) - len(b) + 1)
    rem = list(a)
    while len(rem) >= len(b) and rem:
        shift = len(rem) - len(b)
        factor = rem[-1] * inv_lead % p
        quo[shift] = factor
        for i, bi in enumerate(b):
            rem[shift + i] = (rem[shift + i] - factor * bi) % p
        _trim(rem)
    return quo, rem


def _fp_irreducible(coeffs, p):
    """Irreducibility over F_p by trial division up to half the degree."""
    deg = len(coeffs) - 1
    if deg <= 0:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for n in range(p ** d):
            divisor = _int_digits(n, p, d) + [1]
            _, rem = _poly_divmod_fp(list(coeffs), divisor, p)
            if not rem:
                return False
    return True


def _int_digits(n, p, width):
    out = []
    for _ in range(width):
        out.append(n % p)
        n //= p
    return out


@functools.lru_cache(maxsize=None)
def find_modulus(p: int, r: int) -> tuple:
    """Deterministic monic irreducible of degree r over F_p.

    Scans monic polynomials ordered by their coefficient vector read as a
    base-p integer (constant coefficient least significant) and returns the
    first irreducible one.  Degree 1 yields the polynomial x.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if r < 1:
        raise ValueError("extension degree must be >= 1")
    for n in range(p ** r):
        coeffs = tuple(_int_digits(n, p, r) + [1])
        if _fp_irreducible(coeffs, p):
            return coeffs
    raise AssertionError("unreachable: irreducibles of every degree exist")


@dataclass(frozen=True)
class PrimeConfig:
    """Fixed arithmetic context: prime p, extension degree r, Witt length L.

    `modulus` is the monic degree-r integer polynomial whose reduction mod p
    presents F_{p^r}; all scalar arithmetic happens under exactly one config.
    `l_max` bounds the Witt precision any internal normalization may request.
    """

    p: int
    r: int
    L: int
    modulus: tuple
    l_max: int = 128

    @staticmethod
    def make(p: int, r: int = 1, L: int = 8, l_max: int = 128,
             modulus: tuple | None = None) -> "PrimeConfig":
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if r < 1 or L < 1:
            raise ValueError("r and L must be >= 1")
        if modulus is None:
            modulus = find_modulus(p, r)
        else:
            modulus = tuple(int(c) for c in modulus)
            if len(modulus) != r + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree r")
            if not _fp_irreducible(tuple(c % p for c in modulus), p):
                raise ValueError("modulus is reducible mod p")
        return PrimeConfig(p=p, r=r, L=L, modulus=modulus, l_max=l_max)

    @property
    def q(self) -> int:
        return self.p ** self.r

    def same_field(self, other: "PrimeConfig") -> bool:
        return (self.p, self.r, self.modulus) == (other.p, other.r, other.modulus)

    # constructors ---------------------------------------------------------

    def fq(self, value) -> "FqElem":
        if isinstance(value, FqElem):
            if not self.same_field(value.cfg):
                raise ValueError("field mismatch")
            return value
        if isinstance(value, int):
            coeffs = [value % self.p] + [0] * (self.r - 1)
        else:
            coeffs = [int(v) % self.p for v in value]
            if len(coeffs) > self.r:
                coeffs = _poly_reduce(coeffs, self.modulus, self.p)
            coeffs += [0] * (self.r - len(coeffs))
        return FqElem(self, tuple(coeffs))

    def fq_gen(self) -> "FqElem":
        if self.r == 1:
            return self.fq(0)
        return self.fq([0, 1])

    def fq_elements(self):
        """All p^r field elements, lexicographic by coefficient vector."""
        for n in range(self.q):
            yield self.fq(_int_digits(n, self.p, self.r))

    def witt(self, value, prec: int | None = None) -> "WittElem":
        prec = self.L if prec is None else prec
        pk = self.p ** prec
        if isinstance(value, WittElem):
            if not self.same_field(value.cfg):
                raise ValueError("field mismatch")
            if value.prec == prec:
                return value
            return WittElem(self, tuple(c % pk for c in value.coeffs), prec)
        if isinstance(value, int):
            coeffs = [value % pk] + [0] * (self.r - 1)
        else:
            coeffs = [int(v) % pk for v in value]
            if len(coeffs) > self.r:
                coeffs = _poly_reduce(coeffs, self.modulus, pk)
            coeffs += [0] * (self.r - len(coeffs))
        return WittElem(self, tuple(coeffs), prec)


class FqElem:
    """Element of F_{p^r} in the generator basis; immutable."""

    __slots__ = ("cfg", "coeffs")

    def __init__(self, cfg: PrimeConfig, coeffs: tuple):
        object.__setattr__(self, "cfg", cfg)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *a):
        raise AttributeError("FqElem is immutable")

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        return (isinstance(other, FqElem)
                and self.cfg.same_field(other.cfg)
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.cfg.p, self.cfg.modulus, self.coeffs))

    def sort_key(self):
        return self.coeffs[::-1]

    def _binary(self, other):
        if not isinstance(other, FqElem):
            other = self.cfg.fq(other)
        elif not self.cfg.same_field(other.cfg):
            raise ValueError("field mismatch")
        return other

    def __add__(self, other):
        other = self._binary(other)
        p = self.cfg.p
        return FqElem(self.cfg, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        other = self._binary(other)
        p = self.cfg.p
        return FqElem(self.cfg, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        p = self.cfg.p
        return FqElem(self.cfg, tuple(-a % p for a in self.coeffs))

    def __mul__(self, other):
        other = self._binary(other)
        out = _poly_mulmod(list(self.coeffs), list(other.coeffs), self.cfg.modulus, self.cfg.p)
        return FqElem(self.cfg, tuple(out))

    __radd__ = __add__
    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        out = _poly_powmod(list(self.coeffs), e, self.cfg.modulus, self.cfg.p)
        return FqElem(self.cfg, tuple(out))

    def inv(self) -> "FqElem":
        if self.is_zero():
            raise DivisionByZero("inverse of zero in F_q")
        return self ** (self.cfg.q - 2)

    def frobenius(self) -> "FqElem":
        return self ** self.cfg.p

    def pth_root(self) -> "FqElem":
        """Inverse of frobenius: x^(p^(r-1))."""
        return self ** (self.cfg.p ** (self.cfg.r - 1))

    def __repr__(self):
        return f"FqElem({self})"

    def __str__(self):
        parts = []
        for i in range(self.cfg.r - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                gpow = "g" if i == 1 else f"g^{i}"
                parts.append(gpow if c == 1 else f"{c}*{gpow}")
        return "+".join(parts) if parts else "0"


class WittElem:
    """Element of W_prec(F_{p^r}) = Z[g]/(p^prec, modulus); immutable."""

    __slots__ = ("cfg", "coeffs", "prec")

    def __init__(self, cfg: PrimeConfig, coeffs: tuple, prec: int):
        object.__setattr__(self, "cfg", cfg)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, *a):
        raise AttributeError("WittElem is immutable")

    @property
    def pk(self) -> int:
        return self.cfg.p ** self.prec

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        return (isinstance(other, WittElem)
                and self.cfg.same_field(other.cfg)
                and self.prec == other.prec
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.cfg.p, self.cfg.modulus, self.prec, self.coeffs))

    def at_prec(self, prec: int) -> "WittElem":
        if prec == self.prec:
            return self
        if prec > self.prec:
            raise ValueError("cannot raise Witt precision")
        pk = self.cfg.p ** prec
        return WittElem(self.cfg, tuple(c % pk for c in self.coeffs), prec)

    def _binary(self, other):
        if not isinstance(other, WittElem):
            other = self.cfg.witt(other, prec=self.prec)
        elif not self.cfg.same_field(other.cfg):
            raise ValueError("field mismatch")
        prec = min(self.prec, other.prec)
        return self.at_prec(prec), other.at_prec(prec), prec

    def __add__(self, other):
        a, b, prec = self._binary(other)
        pk = a.pk
        return WittElem(self.cfg, tuple((x + y) % pk for x, y in zip(a.coeffs, b.coeffs)), prec)

    def __sub__(self, other):
        a, b, prec = self._binary(other)
        pk = a.pk
        return WittElem(self.cfg, tuple((x - y) % pk for x, y in zip(a.coeffs, b.coeffs)), prec)

    def __neg__(self):
        pk = self.pk
        return WittElem(self.cfg, tuple(-c % pk for c in self.coeffs), self.prec)

    def __mul__(self, other):
        a, b, prec = self._binary(other)
        out = _poly_mulmod(list(a.coeffs), list(b.coeffs), self.cfg.modulus, a.pk)
        return WittElem(self.cfg, tuple(out), prec)

    __radd__ = __add__
    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        out = _poly_powmod(list(self.coeffs), e, self.cfg.modulus, self.pk)
        return WittElem(self.cfg, tuple(out), self.prec)

    def residue(self) -> FqElem:
        p = self.cfg.p
        return FqElem(self.cfg, tuple(c % p for c in self.coeffs))

    def inv(self) -> "WittElem":
        """Unit inverse by Hensel lifting of the residue inverse."""
        if self.residue().is_zero():
            raise NotAUnit("Witt element has zero residue")
        z = self.cfg.witt(list(self.residue().inv().coeffs), prec=self.prec)
        two = self.cfg.witt(2, prec=self.prec)
        known = 1
        while known < self.prec:
            z = z * (two - self * z)
            known *= 2
        return z

    def __repr__(self):
        return f"WittElem({self}, prec={self.prec})"

    def __str__(self):
        parts = []
        for i in range(self.cfg.r - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                gpow = "g" if i == 1 else f"g^{i}"
                parts.append(gpow if c == 1 else f"{c}*{gpow}")
        return "+".join(parts) if parts else "0"


def teichmueller(a: FqElem, prec: int | None = None) -> WittElem:
    """Multiplicative lift of a to W_prec: the fixpoint of x -> x^(p^r).

    Iterating from any lift gains at least one p-adic digit per step, so at
    most `prec` iterations are needed; the loop exits early on a fixpoint.
    """
    cfg = a.cfg
    prec = cfg.L if prec is None else prec
    x = cfg.witt(list(a.coeffs), prec=prec)
    for _ in range(prec):
        nxt = x ** cfg.q
        if nxt == x:
            break
        x = nxt
    return x


def digit_decompose(c: WittElem) -> tuple:
    """Teichmüller digits (d_0, ..., d_{prec-1}) with c = sum [d_i] p^i.

    Digit i is only determined modulo p^(prec-i); the returned tuple always
    has length c.prec.
    """
    cfg = c.cfg
    p = cfg.p
    digits = []
    cur = list(c.coeffs)
    for i in range(c.prec):
        rem = c.prec - i
        pk = p ** rem
        cur = [x % pk for x in cur]
        d = FqElem(cfg, tuple(x % p for x in cur))
        digits.append(d)
        if not d.is_zero():
            lift = teichmueller(d, prec=rem)
            cur = [(x - y) % pk for x, y in zip(cur, lift.coeffs)]
        cur = [x // p for x in cur]
    return tuple(digits)


def fq_poly_roots(coeffs) -> set:
    """Roots in F_{p^r} of the polynomial with the given FqElem coefficients.

    Exhaustive evaluation over the whole field; raises ZeroPolynomial when
    every coefficient vanishes.
    """
    coeffs = list(coeffs)
    if not coeffs or all(c.is_zero() for c in coeffs):
        raise ZeroPolynomial("all coefficients are zero")
    cfg = coeffs[0].cfg
    roots = set()
    for x in cfg.fq_elements():
        acc = cfg.fq(0)
        for c in reversed(coeffs):
            acc = acc * x + c
        if acc.is_zero():
            roots.add(x)
    return roots


@functools.lru_cache(maxsize=None)
def _embedding_image(small: PrimeConfig, big: PrimeConfig) -> FqElem:
    """Image of the small field's generator inside the big field.

    Deterministic: the lexicographically smallest root of the small modulus.
    """
    if big.p != small.p or big.r % small.r != 0:
        raise ValueError("no subfield embedding")
    poly = [big.fq(c) for c in small.modulus]
    roots = fq_poly_roots(poly)
    if not roots:
        raise AssertionError("subfield modulus must split in the extension")
    return min(roots, key=lambda x: x.sort_key())


def subfield_embedding(a: FqElem, big: PrimeConfig) -> FqElem:
    """Embed a in the extension field described by `big` (small r | big r)."""
    if a.cfg.same_field(big):
        return a
    gen = _embedding_image(a.cfg, big)
    acc = big.fq(0)
    for c in reversed(a.coeffs):
        acc = acc * gen + big.fq(c)
    return acc


def rational_p_val(x: Fraction, p: int):
    """p-adic valuation of a rational; float('inf') for zero."""
    if x == 0:
        return float("inf")
    num, den = x.numerator, x.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v
