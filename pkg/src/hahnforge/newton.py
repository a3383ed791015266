"""Newton-polygon root expansion over Hahn-series coefficients.

The expander runs the classical successive-approximation loop for both
coefficient rings (equal characteristic and p-adic):

    1. take the lower convex hull of (i, v(a_i)) for the shifted polynomial
       f(prefix + X); each hull segment of slope -e with e above the previous
       increment offers a candidate next exponent;
    2. the segment's residue polynomial (leading digits of the on-segment
       coefficients) is solved over F_{p^r} by exhaustive search, extending
       the field by the minimal factor when rootless;
    3. every nonzero residue root appends a term and the polynomial is
       Taylor-shifted by it (synthetic division).

Exponent accumulation.  Families like X^p - X - u produce increments whose
consecutive differences shrink by exactly 1/p, so the plain loop would walk
forever toward an accumulation point without crossing it.  The expander
detects that geometric pattern and strips the residual's leading (vanishing)
term: if what remains is exactly zero the jump is immediate (the equal
characteristic telescopes); otherwise stepping continues until two
consecutive stripped residuals agree below a usable exponent, and that
stabilized value is adopted as the residual past the accumulation point.
No ordinal bookkeeping is materialized.  The jump is also where
Artin-Schreier branches separate: the post-jump polygon exposes the
Y^p - Y segment whose nonzero residue roots shift the branch by constants.

A jumped branch's reported residual bound stays at the valuation the finite
prefix actually achieves (the stripped head), never at what the untruncated
limit would achieve; verify_root against the returned prefix therefore
always passes at the declared bound.

Branch order is deterministic: slopes increasing, residue roots in
lexicographic coefficient order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    BoundViolation,
    FieldExtensionExceeded,
    NoProgress,
    PrecisionLoss,
)
from .exactnum import PrimeConfig, fq_poly_roots, subfield_embedding
from .hahn_eqchar import EqHahn
from .hahn_padic import PHahn

INF = math.inf

GEO_WINDOW = 3   # geometric increments required before acceleration

__all__ = [
    "NewtonPolygon",
    "RootBranch",
    "ExpandOptions",
    "polygon_of",
    "expand_roots_eq",
    "expand_root_padic",
    "verify_root",
    "eval_poly_generic",
]


@dataclass(frozen=True)
class ExpandOptions:
    max_field_degree: int = 6
    stall_limit: int = 3
    max_steps: int = 120


# ---------------------------------------------------------------------------
# polygons
# ---------------------------------------------------------------------------

class NewtonPolygon:
    """Lower convex hull of (index, valuation) points, slopes increasing."""

    __slots__ = ("vertices", "zero_multiplicity")

    def __init__(self, vertices, zero_multiplicity=0):
        object.__setattr__(self, "vertices", tuple(vertices))
        object.__setattr__(self, "zero_multiplicity", zero_multiplicity)

    def __setattr__(self, *a):
        raise AttributeError("NewtonPolygon is immutable")

    def segments(self):
        """(i_left, v_left, i_right, v_right, slope) per hull edge."""
        out = []
        for (i1, v1), (i2, v2) in zip(self.vertices, self.vertices[1:]):
            out.append((i1, v1, i2, v2, Fraction(v2 - v1, i2 - i1)))
        return out

    def root_valuations(self):
        """(valuation, multiplicity) pairs: negated slopes; zero roots as +inf."""
        out = []
        if self.zero_multiplicity:
            out.append((INF, self.zero_multiplicity))
        for i1, _v1, i2, _v2, slope in self.segments():
            out.append((-slope, i2 - i1))
        return out

    def __repr__(self):
        return f"NewtonPolygon(vertices={list(self.vertices)})"


def _lower_hull(points):
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # pop while the middle point lies on or above the chord
            if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def _hull_value_at(hull, x):
    if x <= hull[0][0]:
        return hull[0][1]
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        if x1 <= x <= x2:
            return y1 + Fraction(y2 - y1, x2 - x1) * (x - x1)
    return hull[-1][1]


def polygon_of(coeffs) -> NewtonPolygon:
    """Newton polygon of a polynomial given as a list of ring elements.

    Exact-zero coefficients are skipped.  A coefficient that merely vanishes
    below a finite cap raises PrecisionLoss when its unresolved region could
    cut the hull; otherwise it is irrelevant and ignored.
    """
    resolved = []
    unresolved = []
    for i, c in enumerate(coeffs):
        lead = c.leading()
        if lead is not None:
            resolved.append((i, lead[0]))
        elif not c.is_exact_zero():
            unresolved.append((i, c.cap))
    if not resolved:
        raise PrecisionLoss("no coefficient valuation is resolved")
    hull = _lower_hull(resolved)
    for i, cap in unresolved:
        if cap <= _hull_value_at(hull, i):
            raise PrecisionLoss(
                f"coefficient {i} unresolved below O({cap}); hull uncertain")
    return NewtonPolygon(hull, zero_multiplicity=resolved[0][0])


# ---------------------------------------------------------------------------
# generic ring plumbing
# ---------------------------------------------------------------------------

def eval_poly_generic(coeffs, x):
    acc = type(x).zero(x.cfg)
    for c in reversed(list(coeffs)):
        acc = acc * x + c
    return acc


def _items(x):
    return x.terms if isinstance(x, EqHahn) else x.digits


def _taylor_shift(coeffs, tau):
    """Coefficients of f(X + tau) by repeated synthetic division."""
    a = list(coeffs)
    n = len(a)
    for k in range(n - 1):
        for j in range(n - 2, k - 1, -1):
            a[j] = a[j] + a[j + 1] * tau
    return a


@dataclass(frozen=True)
class RootBranch:
    """One expanded root: term list, achieved residual bound, field used."""

    cfg: PrimeConfig
    ring: type
    terms: tuple
    residual_bound: object
    field_degree: int

    def value(self):
        """The prefix as an exact ring element (finite term map)."""
        return self.ring(self.cfg, tuple(self.terms), INF)

    def sort_key(self):
        return tuple((e, c.sort_key()) for e, c in self.terms)

    def exponents(self):
        return [e for e, _ in self.terms]

    def term_at(self, exp):
        for e, c in self.terms:
            if e == exp:
                return c
        return None

    def __repr__(self):
        base = "t" if self.ring is EqHahn else "p"
        body = " + ".join(f"[{c}]*{base}^({e})" for e, c in self.terms) or "0"
        return f"RootBranch({body}; bound={self.residual_bound})"


@dataclass
class _State:
    cfg: PrimeConfig
    coeffs: list                     # shifted polynomial, low degree first
    terms: list = field(default_factory=list)
    prev_exp: object = None
    steps: int = 0
    history: list = field(default_factory=list)   # committed exponents
    prev_strip: object = None        # stripped residual one step ago
    jumped: bool = False
    jump_bound: object = None        # head valuation at the jump
    stall_count: int = 0
    last_val: object = None


def _geo_chain(history, p):
    """Last GEO_WINDOW exponents have consecutive differences of ratio 1/p."""
    if len(history) < GEO_WINDOW:
        return False
    window = history[-GEO_WINDOW:]
    diffs = [b - a for a, b in zip(window, window[1:])]
    if any(d == 0 for d in diffs):
        return False
    return all(d2 * p == d1 for d1, d2 in zip(diffs, diffs[1:]))


def _agreement_bound(a, b):
    """First exponent where the term lists differ, else the smaller cap."""
    ia, ib = _items(a), _items(b)
    for (e1, c1), (e2, c2) in zip(ia, ib):
        if e1 != e2 or c1 != c2:
            return min(e1, e2)
    if len(ia) != len(ib):
        longer = ia if len(ia) > len(ib) else ib
        return longer[min(len(ia), len(ib))][0]
    return min(a.cap, b.cap)


def _stable_pair(stripped, prev):
    """Consecutive stripped residuals agree below a usable exponent."""
    if prev is None:
        return False, None
    if stripped.leading() is None and prev.leading() is None:
        return True, min(stripped.cap, prev.cap)
    if stripped.leading() is None or prev.leading() is None:
        return False, None
    bound = _agreement_bound(stripped, prev)
    if bound > stripped.leading()[0]:
        return True, bound
    return False, None


def _segment_members(coeffs, e, m):
    out = []
    for i, c in enumerate(coeffs):
        lead = c.leading()
        if lead is not None and lead[0] + i * e == m:
            out.append(i)
    return out


def _candidates(state, upper):
    """Valid (exponent, level) pairs offered by the polygon."""
    try:
        poly = polygon_of(state.coeffs)
    except PrecisionLoss:
        return None
    a0 = state.coeffs[0]
    cap0 = None
    if a0.leading() is None and not a0.is_exact_zero():
        cap0 = a0.cap
    cands = []
    for i1, v1, _i2, _v2, slope in poly.segments():
        e = -slope
        if state.prev_exp is not None and e <= state.prev_exp:
            continue
        if upper is not None and e >= upper:
            continue
        m = v1 + i1 * e
        if cap0 is not None and m >= cap0:
            # the unresolved part of the constant term could disturb this
            continue
        cands.append((e, m))
    cands.sort(key=lambda t: t[0])
    return cands


def _children_for_segment(ring, st, e, m, opts, upper):
    cfg, coeffs, terms = st.cfg, st.coeffs, st.terms
    members = _segment_members(coeffs, e, m)
    phi = [cfg.fq(0)] * (max(members) + 1)
    for i in members:
        phi[i] = coeffs[i].leading()[1]
    roots = sorted((c for c in fq_poly_roots(phi) if not c.is_zero()),
                   key=lambda c: c.sort_key())
    if not roots:
        cfg, coeffs, terms, phi = _extend_field(st, phi, opts)
        roots = sorted((c for c in fq_poly_roots(phi) if not c.is_zero()),
                       key=lambda c: c.sort_key())
        if not roots:
            raise FieldExtensionExceeded(
                f"residue equation rootless within degree {opts.max_field_degree}")
    # p-adic shifts work at a finite cap: sums of exact Teichmüller terms can
    # have infinite digit expansions (no integer lift for p >= 5), so the
    # shift monomial carries enough cap to cover all digits below `upper`
    tau_cap = INF
    if upper is not None:
        tau_cap = upper + (len(coeffs) - 1) * max(0, -e) + 4
    out = []
    for c in roots:
        tau = ring.monomial(cfg, c, e, cap=tau_cap)
        out.append(_State(
            cfg=cfg,
            coeffs=_taylor_shift(coeffs, tau),
            terms=terms + [(e, c)],
            prev_exp=e,
            steps=st.steps + 1,
            history=st.history + [e],
            prev_strip=st.prev_strip,
            jumped=st.jumped,
            jump_bound=st.jump_bound,
            stall_count=st.stall_count,
            last_val=st.last_val,
        ))
    return out


def _extend_field(st, phi, opts):
    """Re-run a rootless residue equation over the minimal viable extension."""
    base_r = st.cfg.r
    factor = 2
    while base_r * factor <= opts.max_field_degree:
        big = PrimeConfig.make(st.cfg.p, base_r * factor, L=st.cfg.L,
                               l_max=st.cfg.l_max)
        phi_big = [subfield_embedding(c, big) for c in phi]
        if any(not c.is_zero() for c in fq_poly_roots(phi_big)):
            coeffs = [c.embed(big) for c in st.coeffs]
            terms = [(e, subfield_embedding(c, big)) for e, c in st.terms]
            return big, coeffs, terms, phi_big
        factor += 1
    raise FieldExtensionExceeded(
        f"no residue root within extension degree {opts.max_field_degree}")


def _finish(ring, st, branches, bound):
    if st.jump_bound is not None:
        bound = min(bound, st.jump_bound)
    branches.append(RootBranch(
        cfg=st.cfg, ring=ring, terms=tuple(st.terms),
        residual_bound=bound, field_degree=st.cfg.r))


def _advance(ring, st, stack, branches, upper, max_terms, opts):
    """Process one state to its next branching point, pushing children."""
    while True:
        if st.steps > opts.max_steps:
            raise NoProgress(f"no convergence within {opts.max_steps} steps")
        a0 = st.coeffs[0]
        lead0 = a0.leading()
        emitted = False

        if lead0 is None:
            _finish(ring, st, branches,
                    INF if a0.is_exact_zero() else a0.cap)
            emitted = True
        else:
            # stall detection: the residual valuation must keep increasing
            if st.last_val is not None and lead0[0] <= st.last_val:
                st.stall_count += 1
                if st.stall_count >= opts.stall_limit:
                    raise NoProgress(
                        f"residual valuation stalled at {lead0[0]} after "
                        f"{st.stall_count} steps")
            else:
                st.stall_count = 0
            st.last_val = lead0[0]

            # acceleration past an exponent accumulation point
            if (not st.jumped and _geo_chain(st.history, st.cfg.p)
                    and (max_terms is None or st.steps >= max_terms)):
                stripped = a0.strip_leading()
                if stripped.is_exact_zero():
                    accept, bound = True, INF
                else:
                    accept, bound = _stable_pair(stripped, st.prev_strip)
                if accept:
                    st.jump_bound = lead0[0]
                    st.coeffs = list(st.coeffs)
                    st.coeffs[0] = stripped if bound is INF or bound == INF \
                        else stripped.truncate(bound)
                    st.jumped = True
                    st.prev_strip = None
                    st.last_val = None
                    st.stall_count = 0
                    continue
                st.prev_strip = stripped
            else:
                st.prev_strip = None

        # depth budget (equal characteristic); pending acceleration may run on
        accel_pending = st.prev_strip is not None and not st.jumped
        if (max_terms is not None and not accel_pending
                and st.steps >= (max_terms if not st.jumped
                                 else 2 * max_terms + 2)):
            if not emitted:
                _finish(ring, st, branches, lead0[0])
            return

        cands = _candidates(st, upper)
        if cands is None or not cands:
            if not emitted:
                _finish(ring, st, branches, lead0[0])
            return

        children = []
        for e, m in cands:
            children.extend(_children_for_segment(ring, st, e, m, opts, upper))
        if not children:
            if not emitted:
                _finish(ring, st, branches, lead0[0])
            return
        for child in reversed(children):
            stack.append(child)
        return


def _expand(ring, cfg, coeffs, *, upper=None, max_terms=None, opts=None):
    opts = opts or ExpandOptions()
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[-1].is_exact_zero():
        coeffs.pop()
    if len(coeffs) <= 1:
        raise ValueError("polynomial must have positive degree")
    branches = []
    stack = [_State(cfg=cfg, coeffs=coeffs)]
    while stack:
        st = stack.pop()
        _advance(ring, st, stack, branches, upper, max_terms, opts)
    branches.sort(key=lambda b: b.sort_key())
    return branches


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------

def expand_roots_eq(coeffs, max_terms: int,
                    opts: ExpandOptions | None = None):
    """Newton-Puiseux branches of a polynomial over EqHahn coefficients.

    Each branch carries up to max_terms pre-accumulation terms; once the
    increments accumulate geometrically and the telescoped residual is
    exactly zero, expansion resumes past the accumulation point (where
    Artin-Schreier style branches split by residue constants).
    """
    coeffs = list(coeffs)
    if max_terms < 1:
        raise ValueError("max_terms must be >= 1")
    cfg = coeffs[0].cfg
    return _expand(EqHahn, cfg, coeffs, max_terms=max_terms, opts=opts)


def expand_root_padic(coeffs, cap, opts: ExpandOptions | None = None):
    """Root branches over PHahn coefficients with digit exponents below cap."""
    coeffs = list(coeffs)
    cfg = coeffs[0].cfg
    cap = cap if isinstance(cap, Fraction) else Fraction(cap)
    return _expand(PHahn, cfg, coeffs, upper=cap, opts=opts)


def verify_root(coeffs, prefix, expected_bound):
    """Exact valuation of f(prefix), checked against expected_bound.

    When the residual vanishes below a finite cap, that cap is returned as a
    certified lower bound, provided it reaches expected_bound.  Raises
    BoundViolation (carrying the valuation) when the bound fails and
    PrecisionLoss when the truncation cannot decide.
    """
    residual = eval_poly_generic(coeffs, prefix)
    lead = residual.leading()
    if lead is not None:
        val = lead[0]
    elif residual.is_exact_zero():
        val = INF
    else:
        if residual.cap >= expected_bound:
            return residual.cap
        raise PrecisionLoss(
            f"residual unresolved below O({residual.cap}) < bound {expected_bound}")
    if val < expected_bound:
        raise BoundViolation(
            f"valuation {val} below expected bound {expected_bound}",
            valuation=val)
    return val
