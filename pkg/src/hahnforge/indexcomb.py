"""Finitely supported index sequences and the transcendence-certificate kernel.

An index vector is a tuple of naturals read at positions 1, 2, ... with
trailing zeros stripped; it indexes one multinomial term of a power of the
series sum_k p^(-1/p^k).  Three statistics drive everything:

    lam(a)   = sum_k -a_k / p^k          (the exponent the term lands on)
    sigma(a) = sum_k a_k                 (which power of the series it came from)
    kappa(a) = max { k : a_k > p-1 }, 0 for the empty set

A vector is reduced when kappa = 0.  Two vectors are equivalent when their
lam values differ by an integer; each class contains exactly one reduced
vector, found by carrying: rewrite the top over-full position kappa as
r + p*d, keep r there and move d one position down (position 1 discards d
into the integer part).  Carrying never increases sigma, strictly decreasing
it unless the vector was already reduced; that strictness is what the
certificate check below exploits.

A certificate is an integer coefficient vector (s_0, ..., s_{n+1}) with
nonzero ends, standing for a hypothetical degree-(n+1) polynomial relation.
grouped_sum collects one equivalence class's total coefficient; for the
all-ones vector of length n+1, the class is a singleton and the total is
s_{n+1} * (n+1)!, which cannot vanish -- the arithmetic heart of the
transcendence argument, reproduced here at finite truncation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import SigmaMismatch
from .exactnum import PrimeConfig
from .hahn_padic import INF, PHahn, from_integer, normalize

__all__ = [
    "index_vec",
    "lambda_of",
    "sigma_of",
    "kappa_of",
    "reduce_index",
    "equivalent",
    "enumerate_class",
    "multinomial",
    "Certificate",
    "frak_a_power",
    "grouped_sum",
    "certificate_residual",
]


def index_vec(entries) -> tuple:
    """Canonical index vector: naturals, trailing zeros stripped."""
    out = list(int(e) for e in entries)
    if any(e < 0 for e in out):
        raise ValueError("index entries must be naturals")
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def lambda_of(a, p: int) -> Fraction:
    return sum((Fraction(-ak, p ** k) for k, ak in enumerate(a, start=1)),
               Fraction(0))


def sigma_of(a) -> int:
    return sum(a)


def kappa_of(a, p: int) -> int:
    top = 0
    for k, ak in enumerate(a, start=1):
        if ak > p - 1:
            top = k
    return top


def is_reduced(a, p: int) -> bool:
    return kappa_of(a, p) == 0


def reduce_index(a, p: int) -> tuple:
    """The unique reduced vector equivalent to a.

    Repeatedly carries at the top over-full position; each step preserves
    lam modulo Z (exactly, when the carry lands on a real position; by an
    integer discard when it falls off position 1).
    """
    work = list(index_vec(a))
    while True:
        kappa = kappa_of(work, p)
        if kappa == 0:
            return index_vec(work)
        r, d = work[kappa - 1] % p, work[kappa - 1] // p
        work[kappa - 1] = r
        if kappa > 1:
            work[kappa - 2] += d
        # kappa == 1: d leaves through the integer part


def equivalent(a, b, p: int) -> bool:
    diff = lambda_of(a, p) - lambda_of(b, p)
    return diff.denominator == 1


def class_position_bound(k_red, sigma_max: int, p: int) -> int:
    """Deepest position any class member with sigma <= sigma_max can use.

    A tail of depth m beyond the reduced support must carry itself away
    entirely: the deepest entry is a positive multiple of p and each
    intermediate level needs at least p-1 more, costing p + (m-1)(p-1).
    """
    base = len(k_red)
    extra = max(0, (sigma_max - p) // (p - 1) + 1)
    return base + extra


def _vectors_with_sum_at_most(positions: int, total: int):
    if positions == 0:
        yield ()
        return
    for head in range(total + 1):
        for rest in _vectors_with_sum_at_most(positions - 1, total - head):
            yield (head,) + rest


def enumerate_class(k_red, sigma_max: int, p: int, position_bound: int | None = None):
    """All vectors k with sigma(k) <= sigma_max and reduce(k) = k_red.

    Exhaustive over positions up to class_position_bound; output sorted by
    (sigma, entries) so downstream sums are deterministic.
    """
    k_red = index_vec(k_red)
    if not is_reduced(k_red, p):
        raise ValueError("k_red must be reduced")
    if sigma_of(k_red) > sigma_max:
        return []
    bound = class_position_bound(k_red, sigma_max, p) if position_bound is None \
        else position_bound
    found = [index_vec(v) for v in _vectors_with_sum_at_most(bound, sigma_max)
             if reduce_index(v, p) == k_red]
    return sorted(set(found), key=lambda k: (sigma_of(k), k))


def multinomial(i: int, k) -> int:
    k = index_vec(k)
    if sigma_of(k) != i:
        raise SigmaMismatch(f"sigma({k}) = {sigma_of(k)} != {i}")
    out = math.factorial(i)
    for kj in k:
        out //= math.factorial(kj)
    return out


@dataclass(frozen=True)
class Certificate:
    """Integer proxy for a hypothetical polynomial relation of degree n+1."""

    s: tuple
    cap: Fraction

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(int(x) for x in self.s))
        if len(self.s) < 2:
            raise ValueError("certificate needs at least s_0 and s_1")
        if self.s[0] == 0 or self.s[-1] == 0:
            raise ValueError("s_0 and s_{n+1} must be nonzero")
        object.__setattr__(self, "cap", Fraction(self.cap) if self.cap != INF
                           else self.cap)

    @property
    def degree(self) -> int:
        return len(self.s) - 1


def _indices_with_sigma(positions: int, total: int):
    for v in _vectors_with_sum_at_most(positions, total):
        if sum(v) == total:
            yield index_vec(v)


def frak_a_power(cfg: PrimeConfig, i: int, terms: int, cap=INF) -> PHahn:
    """i-th power of the terms-term truncation, by multinomial expansion.

    Builds the raw bag of multinomial terms (multinomial(i,k), p^lam(k)) over
    vectors supported on the first `terms` positions and normalizes it; must
    agree with i-fold multiplication of the truncation itself, which the
    tests enforce.
    """
    if i < 0:
        raise ValueError("power must be >= 0")
    bag = [(multinomial(i, k), lambda_of(k, cfg.p))
           for k in _indices_with_sigma(terms, i)]
    return normalize(cfg, bag, cap)


def grouped_sum(k_red, cert: Certificate, p: int) -> Fraction:
    """Total coefficient of one equivalence class, as an exact rational.

    sum over class members k with sigma(k) <= n+1 of
        s_{sigma(k)} * multinomial(sigma(k), k) * p^(lam(k) - lam(k_red)).
    The exponent differences are nonpositive integers (carries through
    position 1 lower lam), so the value lives in Z[1/p].
    """
    k_red = index_vec(k_red)
    sigma_max = cert.degree
    base = lambda_of(k_red, p)
    total = Fraction(0)
    for k in enumerate_class(k_red, sigma_max, p):
        diff = lambda_of(k, p) - base
        assert diff.denominator == 1
        total += cert.s[sigma_of(k)] * multinomial(sigma_of(k), k) * \
            Fraction(p) ** int(diff)
    return total


def certificate_residual(cfg: PrimeConfig, cert: Certificate,
                         terms: int | None = None) -> PHahn:
    """Standard expansion of sum_i s_i * A_K^i below the certificate cap.

    A_K is the terms-term truncation of the headline series (default
    K = degree + 2).  Fed through one global normalization so every carry is
    resolved jointly.
    """
    if terms is None:
        terms = cert.degree + 2
    bag = []
    for i, si in enumerate(cert.s):
        if si == 0:
            continue
        for k in _indices_with_sigma(terms, i):
            bag.append((si * multinomial(i, k), lambda_of(k, cfg.p)))
    return normalize(cfg, bag, cert.cap)


def certificate_residual_by_powers(cfg: PrimeConfig, cert: Certificate,
                                   terms: int | None = None) -> PHahn:
    """Independent route: sum s_i * (A_K ** i) with ring operations only.

    Powers are taken on a capped truncation (exact powering would need
    integer digit lifts, which fail for p >= 5), with enough headroom that
    every partial product still covers the certificate cap.
    """
    from .hahn_padic import frak_a

    if terms is None:
        terms = cert.degree + 2
    work_cap = cert.cap + cert.degree + 1
    a = frak_a(cfg, work_cap, terms=terms)
    acc = PHahn.zero(cfg, cap=cert.cap)
    for i, si in enumerate(cert.s):
        if si == 0:
            continue
        term = from_integer(cfg, si, work_cap - min(0, i * a.valuation()))
        acc = acc + (term * a ** i).truncate(cert.cap)
    return acc
