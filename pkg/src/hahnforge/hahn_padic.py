"""p-adic Hahn series W(F_{p^r})((p^Q)) at finite truncation.

The canonical form of a value is its standard expansion: a finite sorted map
from rational exponents to nonzero Teichmüller digits in F_{p^r}, plus a cap
below which the digits are exact (the error is O(p^cap); cap = +inf marks a
finite exact digit map).  Because digits add p-adically, sums and products of
digit terms generate carries; normalization is where all of them are resolved.

Normalization works in the fractional-part coordinates: raw terms c * p^e are
bucketed by e mod 1, each bucket is summed inside a truncated Witt ring whose
length is sized from the cap (plus a two-digit guard; carries only propagate
upward), the bucket sum is digit-decomposed, and the digit streams of the
buckets are merged.  Distinct fractional parts can never interact, which is
why the bucketing is sound.

The same fractional-part coordinates, kept as honest Witt values instead of
digits, form a second representation (FracDecomp).  Multiplication performed
entirely in those coordinates is the package's primary anti-bug oracle for
carry handling: see mul_via_decomposition.

Uncapped (exact) normalization is only attempted when every coefficient that
must be combined has an integer Teichmüller lift (digits 0, 1, p-1, whose
lifts are 0, 1, -1); other digits have infinite expansions whose termination
cannot be certified at finite truncation, so PrecisionLoss is raised and the
caller must supply a cap.

All values are immutable; operations are pure.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import PrecisionLoss
from .exactnum import (
    FqElem,
    PrimeConfig,
    WittElem,
    digit_decompose,
    subfield_embedding,
    teichmueller,
)

INF = math.inf
GUARD_DIGITS = 2

__all__ = [
    "PHahn",
    "FracDecomp",
    "normalize",
    "from_integer",
    "frak_a",
    "decompose",
    "recompose",
    "mul_via_decomposition",
]


def _as_frac(x):
    if isinstance(x, Fraction) or x is INF or x == INF:
        return x
    return Fraction(x)


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


# ---------------------------------------------------------------------------
# normalization kernel
# ---------------------------------------------------------------------------

def _coeff_parts(cfg, coeff):
    """Split a raw-bag coefficient into (integer multiplier, digit, witt)."""
    if isinstance(coeff, WittElem):
        return None, None, coeff
    if isinstance(coeff, FqElem):
        return 1, coeff, None
    if isinstance(coeff, int):
        return coeff, None, None
    if isinstance(coeff, tuple) and len(coeff) == 2:
        k, d = coeff
        return int(k), d, None
    raise TypeError(f"unsupported bag coefficient {coeff!r}")


def _int_lift(cfg, d: FqElem):
    """Exact integer Teichmüller lift, or None when it does not exist."""
    if d.is_zero():
        return 0
    if all(c == 0 for c in d.coeffs[1:]):
        c0 = d.coeffs[0]
        if c0 == 1:
            return 1
        if c0 == cfg.p - 1 and cfg.p > 2:
            return -1
    return None


def _bucket_exact(cfg, items):
    """Exact digit extraction for one fractional-part bucket.

    Every coefficient must have an integer Teichmüller lift; the bucket sum
    is then an exact integer vector whose greedy digit expansion either
    terminates within l_max digits or raises PrecisionLoss.
    """
    n_min = min(n for n, _ in items)
    total = [0] * cfg.r
    for n, coeff in items:
        k, d, w = _coeff_parts(cfg, coeff)
        if w is not None:
            raise PrecisionLoss(
                "exact normalization cannot absorb a truncated Witt coefficient")
        if d is not None:
            lift = _int_lift(cfg, d)
            if lift is None:
                raise PrecisionLoss(
                    f"digit {d} has no integer Teichmüller lift; a cap is required")
            k = k * lift
        total[0] += k * cfg.p ** (n - n_min)
    p = cfg.p
    digits = []
    cur = total
    while any(cur):
        if len(digits) > cfg.l_max:
            raise PrecisionLoss(
                f"digit expansion did not terminate within l_max={cfg.l_max}")
        d = cfg.fq([c % p for c in cur])
        digits.append(d)
        lift = _int_lift(cfg, d)
        if lift is None:
            raise PrecisionLoss(
                f"digit {d} has no integer Teichmüller lift; a cap is required")
        cur = [(c - (lift if i == 0 else 0)) // p for i, c in enumerate(cur)]
    return n_min, digits


def _bucket_capped(cfg, items, need, frac_cap, guard):
    """Digit extraction for one bucket modulo p^(need + guard).

    `need` counts the digits wanted above the bucket's minimal integer
    offset; `frac_cap` = cap - q bounds emitted exponents.  Carries only
    propagate upward, so the guard merely absorbs boundary effects at the
    cap.
    """
    n_min = min(n for n, _ in items)
    ell = need + guard
    for n, coeff in items:
        _, _, w = _coeff_parts(cfg, coeff)
        if w is not None:
            avail = (n - n_min) + w.prec
            if avail < need:
                raise PrecisionLoss(
                    "Witt coefficient precision insufficient for requested cap")
            ell = min(ell, avail)
    if ell > cfg.l_max:
        raise PrecisionLoss(
            f"bucket needs Witt length {ell} > l_max={cfg.l_max}")
    pk = cfg.p ** ell
    total = [0] * cfg.r
    for n, coeff in items:
        k, d, w = _coeff_parts(cfg, coeff)
        shift = cfg.p ** (n - n_min)
        if w is not None:
            vec = [c * shift % pk for c in w.coeffs]
        else:
            vec = [0] * cfg.r
            if d is not None:
                lift = teichmueller(d, prec=ell)
                vec = [c * k * shift % pk for c in lift.coeffs]
            else:
                vec[0] = k * shift % pk
        total = [(x + y) % pk for x, y in zip(total, vec)]
    w = WittElem(cfg, tuple(total), ell)
    digits = list(digit_decompose(w))
    out = []
    for i, d in enumerate(digits):
        if n_min + i >= frac_cap:
            break
        out.append(d)
    return n_min, out


def normalize(cfg: PrimeConfig, bag, cap, guard: int = GUARD_DIGITS) -> "PHahn":
    """Standard expansion of a raw term bag, exact below cap.

    Bag items are (coefficient, exponent) pairs; a coefficient is an int, an
    FqElem (meaning its Teichmüller lift), an (int, FqElem) product, or a
    WittElem.  Terms are bucketed by the fractional part of the exponent,
    summed per bucket in a truncated Witt ring sized from the cap (each
    bucket runs at ceil(cap - q) digits past its offset, plus `guard`),
    digit decomposed, and merged.
    """
    cap = _as_frac(cap)
    buckets = {}
    for coeff, exp in bag:
        exp = _as_frac(exp)
        n = _floor(exp)
        buckets.setdefault(exp - n, []).append((n, coeff))
    out = []
    for q, items in buckets.items():
        if cap is INF or cap == INF:
            if len(items) == 1:
                # single digit terms are already in standard form
                n, coeff = items[0]
                k, d, w = _coeff_parts(cfg, coeff)
                if w is None and d is not None:
                    if k == -1 and cfg.p > 2:
                        k, d = 1, d * cfg.fq(cfg.p - 1)
                    if k == 1:
                        if not d.is_zero():
                            out.append((q + n, d))
                        continue
                elif w is None and d is None and k == 0:
                    continue
            base, digits = _bucket_exact(cfg, items)
        else:
            n_min = min(n for n, _ in items)
            need = math.ceil(cap - q) - n_min
            if need <= 0:
                continue
            base, digits = _bucket_capped(cfg, items, need, cap - q, guard)
        for i, d in enumerate(digits):
            e = q + base + i
            if not d.is_zero() and e < cap:
                out.append((e, d))
    out.sort(key=lambda t: t[0])
    return PHahn(cfg, tuple(out), cap)


class PHahn:
    """Truncated p-adic Hahn series in standard expansion.

    The constructor trusts its input to already be a standard expansion
    (strictly increasing exponents, nonzero digits, all below cap); use
    normalize()/from_integer()/frak_a() to build values from raw material.
    """

    __slots__ = ("cfg", "digits", "cap")

    def __init__(self, cfg: PrimeConfig, digits: tuple, cap):
        object.__setattr__(self, "cfg", cfg)
        object.__setattr__(self, "digits", tuple(digits))
        object.__setattr__(self, "cap", _as_frac(cap))

    def __setattr__(self, *a):
        raise AttributeError("PHahn is immutable")

    # constructors -----------------------------------------------------------

    @staticmethod
    def zero(cfg, cap=INF) -> "PHahn":
        return PHahn(cfg, (), cap)

    @staticmethod
    def one(cfg, cap=INF) -> "PHahn":
        return PHahn(cfg, ((Fraction(0), cfg.fq(1)),), cap)

    @staticmethod
    def monomial(cfg, digit, exp, cap=INF) -> "PHahn":
        d = cfg.fq(digit)
        if d.is_zero():
            return PHahn.zero(cfg, cap)
        return PHahn(cfg, ((_as_frac(exp), d),), cap)

    # predicates and views ----------------------------------------------------

    def is_exact(self) -> bool:
        return self.cap is INF or self.cap == INF

    def is_exact_zero(self) -> bool:
        return not self.digits and self.is_exact()

    def is_zero_below_cap(self) -> bool:
        return not self.digits

    def leading(self):
        return self.digits[0] if self.digits else None

    def valuation(self):
        if self.digits:
            return self.digits[0][0]
        if self.is_exact():
            return INF
        raise PrecisionLoss(
            f"series vanishes below O(p^{self.cap}); valuation unresolved")

    def val_lower_bound(self):
        if self.digits:
            return self.digits[0][0]
        return self.cap

    def digit_at(self, exp) -> FqElem:
        exp = _as_frac(exp)
        for e, d in self.digits:
            if e == exp:
                return d
        return self.cfg.fq(0)

    def digit_bag(self):
        return [(d, e) for e, d in self.digits]

    # arithmetic --------------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, PHahn):
            raise TypeError("PHahn expected")
        if not self.cfg.same_field(other.cfg):
            raise ValueError("PrimeConfig mismatch")

    def __add__(self, other):
        self._check(other)
        cap = min(self.cap, other.cap)
        return normalize(self.cfg, self.digit_bag() + other.digit_bag(), cap)

    def __neg__(self):
        p = self.cfg.p
        if p > 2:
            minus_one = self.cfg.fq(p - 1)  # [p-1] = -1 exactly for odd p
            return PHahn(self.cfg, tuple((e, d * minus_one) for e, d in self.digits),
                         self.cap)
        return normalize(self.cfg, [((-1, d), e) for e, d in self.digits], self.cap)

    def __sub__(self, other):
        self._check(other)
        cap = min(self.cap, other.cap)
        bag = self.digit_bag() + [((-1, d), e) for e, d in other.digits]
        return normalize(self.cfg, bag, cap)

    def __mul__(self, other):
        self._check(other)
        if self.is_exact_zero() or other.is_exact_zero():
            return PHahn.zero(self.cfg)
        cap = min(self.cap + other.val_lower_bound(),
                  other.cap + self.val_lower_bound())
        bag = [(da * db, ea + eb)
               for ea, da in self.digits for eb, db in other.digits]
        return normalize(self.cfg, bag, cap)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined here")
        acc = PHahn.one(self.cfg)
        for _ in range(n):
            acc = acc * self
        return acc

    def shift(self, exp) -> "PHahn":
        """Multiply by p^exp (exact: pure exponent translation)."""
        exp = _as_frac(exp)
        cap = self.cap if self.is_exact() else self.cap + exp
        return PHahn(self.cfg, tuple((e + exp, d) for e, d in self.digits), cap)

    def scale_digit(self, c) -> "PHahn":
        """Multiply by the Teichmüller lift [c] (exact, digit-wise)."""
        c = self.cfg.fq(c)
        if c.is_zero():
            return PHahn.zero(self.cfg)
        return PHahn(self.cfg, tuple((e, d * c) for e, d in self.digits), self.cap)

    def strip_leading(self) -> "PHahn":
        """Remove the lowest digit (exact on standard expansions)."""
        if not self.digits:
            return self
        return PHahn(self.cfg, self.digits[1:], self.cap)

    def truncate(self, cap) -> "PHahn":
        cap = _as_frac(cap)
        return PHahn(self.cfg, tuple((e, d) for e, d in self.digits if e < cap),
                     min(self.cap, cap))

    def embed(self, big: PrimeConfig) -> "PHahn":
        return PHahn(big, tuple((e, subfield_embedding(d, big)) for e, d in self.digits),
                     self.cap)

    # comparisons -------------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, PHahn)
                and self.cfg.same_field(other.cfg)
                and self.digits == other.digits
                and self.cap == other.cap)

    def __hash__(self):
        return hash((self.cfg.p, self.cfg.modulus, self.digits, self.cap))

    def agree_below(self, other, bound) -> bool:
        bound = _as_frac(bound)
        if bound > self.cap or bound > other.cap:
            raise PrecisionLoss("agreement bound exceeds a cap")
        mine = [(e, d) for e, d in self.digits if e < bound]
        theirs = [(e, d) for e, d in other.digits if e < bound]
        return mine == theirs

    def __repr__(self):
        body = " + ".join(f"[{d}]*p^({e})" for e, d in self.digits) or "0"
        if not self.is_exact():
            body += f" + O(p^({self.cap}))"
        return body


# ---------------------------------------------------------------------------
# embeddings of plain integers and the headline series
# ---------------------------------------------------------------------------

def from_integer(cfg: PrimeConfig, n: int, cap=INF) -> PHahn:
    """Standard expansion of the rational integer n, exact below cap.

    Negative n at p = 2 has the infinite complement expansion, so a finite
    cap is required there.
    """
    return normalize(cfg, [(n, Fraction(0))], cap)


def frak_a(cfg: PrimeConfig, cap, terms: int | None = None) -> PHahn:
    """Truncation of the series sum_k p^(-1/p^k) (digit [1] at -1/p^k).

    With terms=None all exponents below cap are emitted, which requires
    cap < 0; for cap >= 0 infinitely many digits would qualify and an
    explicit terms count must be supplied.
    """
    cap = _as_frac(cap)
    one = cfg.fq(1)
    if terms is not None:
        if terms < 0:
            raise ValueError("terms must be >= 0")
        digits = [(Fraction(-1, cfg.p ** k), one) for k in range(1, terms + 1)]
        return PHahn(cfg, tuple(d for d in digits if d[0] < cap), cap)
    if cap >= 0:
        raise ValueError(
            "cap >= 0 would need infinitely many digits; pass an explicit terms count")
    digits = []
    k = 1
    while Fraction(-1, cfg.p ** k) < cap:
        digits.append((Fraction(-1, cfg.p ** k), one))
        k += 1
    return PHahn(cfg, tuple(digits), cap)


# ---------------------------------------------------------------------------
# fractional-part decomposition (the second coordinate system)
# ---------------------------------------------------------------------------

class FracDecomp:
    """Coefficients c_q of the decomposition sum_q c_q p^q, q in [0,1).

    Each entry is (q, offset, unit): the coefficient is p^offset * unit with
    unit a WittElem whose precision records how many digits of c_q are known.
    Entries with negative valuation simply carry a negative offset.
    """

    __slots__ = ("cfg", "entries", "cap")

    def __init__(self, cfg, entries, cap):
        object.__setattr__(self, "cfg", cfg)
        object.__setattr__(self, "entries", tuple(entries))
        object.__setattr__(self, "cap", _as_frac(cap))

    def __setattr__(self, *a):
        raise AttributeError("FracDecomp is immutable")

    def __eq__(self, other):
        return (isinstance(other, FracDecomp)
                and self.cfg.same_field(other.cfg)
                and self.entries == other.entries
                and self.cap == other.cap)

    def coefficient(self, q):
        q = _as_frac(q)
        for qq, off, unit in self.entries:
            if qq == q:
                return off, unit
        return None

    def __repr__(self):
        parts = [f"{q}: p^{off} * ({unit})" for q, off, unit in self.entries]
        return "FracDecomp{" + ", ".join(parts) + f"; cap={self.cap}" + "}"


def decompose(x: PHahn, cover=None) -> FracDecomp:
    """Bucket the standard expansion by exponent fractional part.

    `cover` asks every entry to know its digits up to that exponent; it
    defaults to x.cap and may exceed it only when x is exact (a finite digit
    map determines c_q to any precision, its higher digits being zero).
    """
    cfg = x.cfg
    cover = x.cap if cover is None else _as_frac(cover)
    if not x.is_exact() and cover > x.cap:
        raise PrecisionLoss("cannot cover beyond the cap of a truncated value")
    buckets = {}
    for e, d in x.digits:
        n = _floor(e)
        buckets.setdefault(e - n, []).append((n, d))
    entries = []
    for q in sorted(buckets):
        items = buckets[q]
        n_min = items[0][0]
        prec = items[-1][0] - n_min + 1
        if cover is not INF and cover != INF:
            prec = max(prec, math.ceil(cover - q) - n_min)
        pk = cfg.p ** prec
        total = [0] * cfg.r
        for n, d in items:
            lift = teichmueller(d, prec=prec)
            shift = cfg.p ** (n - n_min)
            total = [(a + b * shift) % pk for a, b in zip(total, lift.coeffs)]
        entries.append((q, n_min, WittElem(cfg, tuple(total), prec)))
    return FracDecomp(cfg, entries, x.cap)


def recompose(fd: FracDecomp, cap=None) -> PHahn:
    """Inverse of decompose below cap (defaults to the decomposition's cap)."""
    cap = fd.cap if cap is None else _as_frac(cap)
    out = []
    for q, off, unit in fd.entries:
        if cap is not INF and cap != INF and cap > q + off + unit.prec:
            raise PrecisionLoss("FracDecomp entry does not cover the requested cap")
        for i, d in enumerate(digit_decompose(unit)):
            e = q + off + i
            if not d.is_zero() and e < cap:
                out.append((e, d))
    out.sort(key=lambda t: t[0])
    return PHahn(fd.cfg, tuple(out), cap)


def mul_via_decomposition(a: PHahn, b: PHahn) -> PHahn:
    """Product computed entirely in FracDecomp coordinates.

    Pairwise Witt products with fractional-part wraparound (q1 + q2 >= 1
    moves one factor of p into the coefficient), then digit extraction.
    Independent of the digit-bag route in PHahn.__mul__, which it cross
    checks.
    """
    cfg = a.cfg
    if a.is_exact_zero() or b.is_exact_zero():
        return PHahn.zero(cfg)
    cap = min(a.cap + b.val_lower_bound(), b.cap + a.val_lower_bound())
    if cap is INF or cap == INF:
        raise PrecisionLoss(
            "decomposition-route product needs a finite cap; truncate a factor")
    fa = decompose(a, cover=min(a.cap, cap - b.val_lower_bound()))
    fb = decompose(b, cover=min(b.cap, cap - a.val_lower_bound()))
    buckets = {}
    for q1, o1, w1 in fa.entries:
        for q2, o2, w2 in fb.entries:
            q = q1 + q2
            wrap = 0
            if q >= 1:
                q -= 1
                wrap = 1
            buckets.setdefault(q, []).append((o1 + o2 + wrap, w1 * w2))
    out = []
    for q in sorted(buckets):
        items = buckets[q]
        o_min = min(o for o, _ in items)
        abs_prec = min(o + w.prec for o, w in items)
        rel = abs_prec - o_min
        if cap is not INF and cap != INF and q + abs_prec < cap:
            raise PrecisionLoss("product bucket does not cover the requested cap")
        if rel <= 0:
            continue
        pk = cfg.p ** rel
        total = [0] * cfg.r
        for o, w in items:
            shift = cfg.p ** (o - o_min)
            total = [(x + y * shift) % pk for x, y in zip(total, w.coeffs)]
        unit = WittElem(cfg, tuple(total), rel)
        for i, d in enumerate(digit_decompose(unit)):
            e = q + o_min + i
            if not d.is_zero() and e < cap:
                out.append((e, d))
    out.sort(key=lambda t: t[0])
    return PHahn(cfg, tuple(out), cap)
