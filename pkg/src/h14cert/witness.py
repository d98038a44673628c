"""Witness data and its decidable validity checks.

A witness pack carries generators of an invariant subring together with a
distinguished pair f, g.  This module derives everything the certificate
pipeline needs from that pair — the quotient h of the axis images, the
monic annihilator of eps(f) over k[eps(g)], the weight vector for the
inversion twist, and the clearing exponent — and runs the decidable parts
of the validity conditions: the semigroup of x1-orders of the collapsed
subring (non-normality evidence), bounded subring membership, and the
polynomiality conditions on the twisted images.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .algebra import (
    LaurentPoly,
    UniPoly,
    from_univar,
    plain_vars,
    resultant,
    to_univar,
    x_vars,
)
from .errors import VariableMismatch, WitnessInvalid
from .maps import RingMap, axis_map, inversion_map
from .report import Report

#: abstract coefficient variable for annihilator polynomials
G_VARS = plain_vars("G")

DEFAULT_SEMIGROUP_BOUND = 12
DEFAULT_MEMBER_BOUND = 12


@dataclass
class WitnessPack:
    """Raw witness data; optional fields are resolved by validation."""

    n: int
    gens: list[LaurentPoly]
    f: LaurentPoly
    g: LaurentPoly
    h: LaurentPoly | None = None
    ann: UniPoly | None = None
    weights: tuple[int, ...] | None = None
    clearing: int | None = None
    f_expr: LaurentPoly | None = None
    g_expr: LaurentPoly | None = None


@dataclass
class Resolved:
    """A witness pack with every derived object computed and validated."""

    n: int
    f: LaurentPoly
    g: LaurentPoly
    h: LaurentPoly
    ann: UniPoly
    rel: LaurentPoly
    d: int
    weights: tuple[int, ...]
    clearing: int
    twist: RingMap               # over x1..xn,z
    axis: RingMap                # over x1..xn,z
    f_xz: LaurentPoly = field(init=False)
    g_xz: LaurentPoly = field(init=False)
    h_xz: LaurentPoly = field(init=False)
    rel_xz: LaurentPoly = field(init=False)

    def __post_init__(self):
        vz = self.twist.vars
        self.f_xz = self.f.with_vars(vz)
        self.g_xz = self.g.with_vars(vz)
        self.h_xz = self.h.with_vars(vz)
        self.rel_xz = self.rel.with_vars(vz)


# ---------------------------------------------------------------------------
# axis data: h and the annihilator


def axis_quotient(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """The unique h in k[x1] with eps(f) = eps(g) * h, where eps collapses
    every variable except x1.  Rejects the pair when eps(g) = 0 or the
    division leaves k[x1]."""
    n = len(f.vars)
    eps = axis_map(n)
    ef = to_univar(eps.apply(f), "x1")
    eg = to_univar(eps.apply(g), "x1")
    if not eg:
        raise WitnessInvalid("axis image of g is zero")
    quot: dict[int, Fraction] = {}
    dg = max(eg)
    lead = eg[dg]
    work = dict(ef)
    while work:
        top = max(work)
        if top < dg:
            raise WitnessInvalid("axis image of g does not divide that of f")
        c = work[top] / lead
        quot[top - dg] = c
        for k, v in eg.items():
            pos = top - dg + k
            s = work.get(pos, Fraction(0)) - c * v
            if s == 0:
                work.pop(pos, None)
            else:
                work[pos] = s
    if any(k < 0 for k in quot):
        raise WitnessInvalid("axis quotient has a pole at x1 = 0")
    return from_univar(f.vars, "x1", quot)


def build_annihilator(f: LaurentPoly, g: LaurentPoly) -> UniPoly:
    """The monic polynomial Ann over k[G] of degree deg(eps(g)) with
    Ann(eps(f)) = 0 after G -> eps(g); computed as a resultant that
    eliminates x1.  Requires eps(g) to be nonconstant."""
    n = len(f.vars)
    eps = axis_map(n)
    ef = to_univar(eps.apply(f), "x1")
    eg = to_univar(eps.apply(g), "x1")
    if not eg or max(eg) < 1:
        raise WitnessInvalid("axis image of g is constant; no annihilator")
    zw = plain_vars("Z", "W")
    zvar = LaurentPoly.variable(zw, "Z")
    wvar = LaurentPoly.variable(zw, "W")

    def lifted(coeffs: dict[int, Fraction], head: LaurentPoly) -> UniPoly:
        top = max(coeffs) if coeffs else 0
        cs = [LaurentPoly.const(zw, -coeffs.get(k, 0)) for k in range(top + 1)]
        cs[0] = cs[0] + head
        return UniPoly(zw, cs)

    res = resultant(lifted(ef, zvar), lifted(eg, wvar))
    # regroup by powers of Z; coefficients must involve only W
    m = max(eg)
    by_z: dict[int, dict[tuple[int], Fraction]] = {}
    for (ez, ew), c in res.terms.items():
        by_z.setdefault(ez, {})[(ew,)] = c
    if max(by_z) != m:
        raise WitnessInvalid("annihilator degree mismatch (unexpected collapse)")
    lead = by_z[m]
    if set(lead) != {(0,)}:
        raise WitnessInvalid("annihilator leading coefficient is not constant")
    lc = lead[(0,)]
    coeffs = []
    for j in range(m + 1):
        terms = {e: c / lc for e, c in by_z.get(j, {}).items()}
        coeffs.append(LaurentPoly(G_VARS, terms))
    ann = UniPoly(G_VARS, coeffs)
    # sanity: the defining property, checked in k[x1]
    check = ann.eval_poly(
        from_univar(f.vars, "x1", ef),
        coeff_images={"G": from_univar(f.vars, "x1", eg)},
    )
    if not check.is_zero():
        raise WitnessInvalid("annihilator fails to annihilate the axis image")
    return ann


def realize_annihilator(ann: UniPoly, f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Evaluate Ann at f with G -> g: the relation element of the pair."""
    return ann.eval_poly(f, coeff_images={"G": g})


# ---------------------------------------------------------------------------
# the semigroup of x1-orders of a collapsed subring


@dataclass(frozen=True)
class SemigroupTable:
    bound: int
    orders: frozenset[int]
    basis: tuple[tuple[Fraction, ...], ...]

    def sorted_orders(self) -> list[int]:
        return sorted(self.orders)


def _univar_nonneg(gen: LaurentPoly, what: str) -> dict[int, Fraction]:
    u = to_univar(gen, "x1")
    if any(k < 0 for k in u):
        raise WitnessInvalid(f"{what} has a pole at x1 = 0")
    return u


def _mul_trunc(u: dict[int, Fraction], v: dict[int, Fraction], bound: int) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for a, ca in u.items():
        for b, cb in v.items():
            k = a + b
            if k > bound:
                continue
            s = out.get(k, Fraction(0)) + ca * cb
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
    return out


class _RowBasis:
    """Incremental row echelon over Q; pivot = first nonzero column."""

    def __init__(self, width: int):
        self.width = width
        self.rows: dict[int, list[Fraction]] = {}

    def insert(self, vec: Sequence[Fraction]) -> int | None:
        v = [Fraction(c) for c in vec]
        while True:
            lead = next((i for i, c in enumerate(v) if c != 0), None)
            if lead is None:
                return None
            if lead not in self.rows:
                inv = Fraction(1) / v[lead]
                self.rows[lead] = [c * inv for c in v]
                return lead
            row = self.rows[lead]
            c = v[lead]
            v = [a - c * b for a, b in zip(v, row)]

    def reduces_to_zero(self, vec: Sequence[Fraction]) -> bool:
        v = [Fraction(c) for c in vec]
        while True:
            lead = next((i for i, c in enumerate(v) if c != 0), None)
            if lead is None:
                return True
            if lead not in self.rows:
                return False
            c = v[lead]
            v = [a - c * b for a, b in zip(v, self.rows[lead])]

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def snapshot(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(tuple(self.rows[p]) for p in sorted(self.rows))


def _vec(u: dict[int, Fraction], width: int) -> list[Fraction]:
    return [u.get(i, Fraction(0)) for i in range(width)]


def semigroup_orders(gens: Sequence[LaurentPoly], bound: int) -> SemigroupTable:
    """All x1-orders realized by the subalgebra k[gens] of k[x1], up to the
    bound.  Constant parts of generators are dropped (they do not change the
    algebra), products are enumerated with truncation beyond the bound, and
    orders are read off as pivot columns of a row echelon form."""
    units: list[dict[int, Fraction]] = []
    for gen in gens:
        u = _univar_nonneg(gen, "semigroup generator")
        u.pop(0, None)
        if u:
            units.append(u)
    if units and bound < max(max(u) for u in units):
        raise WitnessInvalid(
            f"semigroup bound {bound} is below a generator degree"
        )
    width = bound + 1
    basis = _RowBasis(width)
    one = {0: Fraction(1)}
    basis.insert(_vec(one, width))

    def grow(start: int, current: dict[int, Fraction], order_sum: int):
        for idx in range(start, len(units)):
            step = min(units[idx])
            if order_sum + step > bound:
                continue
            nxt = _mul_trunc(current, units[idx], bound)
            basis.insert(_vec(nxt, width))
            grow(idx, nxt, order_sum + step)

    grow(0, one, 0)
    return SemigroupTable(bound=bound, orders=frozenset(basis.pivots()),
                          basis=basis.snapshot())


def is_normal(table: SemigroupTable) -> bool:
    """Decide, from the order data up to the bound, whether the collapsed
    subring could be normal: a normal one realizes exactly the multiples of
    its minimal positive order.  A False answer is a proof of non-normality;
    True only means normality was not refuted below the bound."""
    nonzero = [o for o in table.sorted_orders() if o > 0]
    if not nonzero:
        return True
    m = nonzero[0]
    if table.bound < 2 * m:
        raise WitnessInvalid(
            f"bound {table.bound} too small to probe normality (need >= {2 * m})"
        )
    expected = set(range(0, table.bound + 1, m))
    return set(table.orders) == expected


def subalgebra_member(h: LaurentPoly, gens: Sequence[LaurentPoly], bound: int) -> bool:
    """Bounded membership: is h a linear combination of monomials in the
    generators of total degree <= bound?  (Sound for rejection up to the
    bound; the caller chooses the bound.)"""
    hu = _univar_nonneg(h, "membership candidate")
    if hu and max(hu) > bound:
        raise WitnessInvalid(f"candidate degree exceeds the bound {bound}")
    units: list[dict[int, Fraction]] = []
    for gen in gens:
        u = _univar_nonneg(gen, "subalgebra generator")
        if u and max(u) >= 1:
            units.append(u)
    width = bound + 1
    basis = _RowBasis(width)
    one = {0: Fraction(1)}
    basis.insert(_vec(one, width))

    def grow(start: int, current: dict[int, Fraction], deg_sum: int):
        for idx in range(start, len(units)):
            step = max(units[idx])
            if deg_sum + step > bound:
                continue
            nxt = _mul_trunc(current, units[idx], bound)
            basis.insert(_vec(nxt, width))
            grow(idx, nxt, deg_sum + step)

    grow(0, one, 0)
    return basis.reduces_to_zero(_vec(hu, width))


# ---------------------------------------------------------------------------
# twist conditions


@dataclass(frozen=True)
class TwistCheck:
    fgh_polynomial: bool
    rel_in_x1: bool
    failing_term: str = ""

    @property
    def ok(self) -> bool:
        return self.fgh_polynomial and self.rel_in_x1


def _offending_term(p: LaurentPoly, need_x1: int) -> str:
    worst = None
    for e in sorted(p.terms):
        if any(k < 0 for k in e) or e[0] < need_x1:
            worst = e
            break
    if worst is None:
        return ""
    mono = p._format_monomial(worst) or "1"
    return f"{p.terms[worst]}*{mono}"


def check_twist(twist: RingMap, f: LaurentPoly, g: LaurentPoly,
                h: LaurentPoly, rel: LaurentPoly) -> TwistCheck:
    """The two polynomiality conditions on the twisted data: the image of
    f - g*h must be a polynomial, and the image of the relation element must
    be a polynomial divisible by x1."""
    vz = twist.vars
    a = twist.apply((f - g * h).with_vars(vz))
    b = twist.apply(rel.with_vars(vz))
    fgh_ok = a.is_polynomial()
    rel_ok = (not b.is_zero()) and b.is_polynomial() and b.order_in("x1") >= 1
    detail = ""
    if not fgh_ok:
        detail = f"twist(f - g*h) term {_offending_term(a, 0)}"
    elif not rel_ok:
        detail = f"twist(relation) term {_offending_term(b, 1)}"
    return TwistCheck(fgh_ok, rel_ok, detail)


def choose_weights(f: LaurentPoly, g: LaurentPoly, h: LaurentPoly,
                   rel: LaurentPoly) -> tuple[int, ...]:
    """The uniform weight vector t_i = 1 + max(deg_x1(f - g*h), deg_x1(rel)).

    Both f - g*h and rel must vanish under the axis substitution; then every
    term of either contains some xi (i >= 2), so the chosen weight pushes
    every twisted term into x1 * k[x].
    """
    n = len(f.vars)
    eps = axis_map(n)
    fgh = f - g * h
    if not eps.apply(fgh).is_zero():
        raise WitnessInvalid("f - g*h does not vanish on the axis")
    if rel.is_zero() or not eps.apply(rel).is_zero():
        raise WitnessInvalid("relation element must be nonzero and vanish on the axis")
    dmax = rel.degree_in("x1")
    if not fgh.is_zero():
        dmax = max(dmax, fgh.degree_in("x1"))
    t = 1 + max(dmax, 0)
    weights = (t,) * (n - 1)
    result = check_twist(inversion_map(weights, h), f, g, h, rel)
    if not result.ok:
        raise WitnessInvalid(f"chosen weights fail the twist conditions: {result.failing_term}")
    return weights


def clearing_exponent(twist: RingMap, rel: LaurentPoly, f: LaurentPoly, d: int) -> int:
    """The least e >= 1 with ord_x1(twist(rel))*e + ord_x1(twist(f))*i >= 0
    for all 0 <= i < d; exists because the twisted relation is divisible
    by x1."""
    vz = twist.vars
    tr = twist.apply(rel.with_vars(vz))
    tf = twist.apply(f.with_vars(vz))
    if tr.is_zero():
        raise WitnessInvalid("twisted relation element is zero")
    op = tr.order_in("x1")
    if op < 1:
        raise WitnessInvalid("twisted relation element is not divisible by x1")
    of = tf.order_in("x1") if not tf.is_zero() else 0
    e = 1
    while any(e * op + i * of < 0 for i in range(d)):
        e += 1
    return e


# ---------------------------------------------------------------------------
# small linear-algebra utilities used by the construction scans


def linear_part(p: LaurentPoly) -> LaurentPoly:
    """The total-degree-one part of a polynomial."""
    if not p.is_polynomial():
        raise VariableMismatch("linear part of a non-polynomial")
    terms = {e: c for e, c in p.terms.items() if sum(e) == 1}
    return LaurentPoly(p.vars, terms, _clean=False)


def jacobian_rank_at(fs: Sequence[LaurentPoly], point: Sequence) -> int:
    """Rank over Q of the Jacobian of the family at a rational point."""
    if not fs:
        return 0
    vars = fs[0].vars
    values = dict(zip(vars.names, point))
    rows = []
    for p in fs:
        if p.vars != vars:
            raise VariableMismatch("jacobian family over mixed variable sets")
        rows.append([p.deriv(name).eval_at(values) for name in vars.names])
    basis = _RowBasis(len(vars))
    rank = 0
    for row in rows:
        if basis.insert(row) is not None:
            rank += 1
    return rank


# ---------------------------------------------------------------------------
# full pack validation


def _expr_value(expr: LaurentPoly, gens: Sequence[LaurentPoly]) -> LaurentPoly:
    """Evaluate an expression in formal generator variables u0,u1,... at the
    actual generators."""
    if len(expr.vars) != len(gens):
        raise WitnessInvalid("expression arity does not match the generators")
    images = {name: gen for name, gen in zip(expr.vars.names, gens)}
    return expr.subst(images)


def validate_pack(pack: WitnessPack, *, weights_override: Sequence[int] | None = None,
                  semigroup_bound: int = DEFAULT_SEMIGROUP_BOUND,
                  member_bound: int = DEFAULT_MEMBER_BOUND) -> tuple[Resolved | None, Report]:
    """Run every decidable check on a pack and resolve its derived fields.

    Returns (resolved, report); `resolved` is None when a check needed for
    the pipeline fails.  Checks appear in a stable order so reports can be
    compared verbatim.
    """
    rep = Report()
    vars = x_vars(pack.n) if pack.n >= 1 else None
    shape_ok = (
        vars is not None
        and pack.n >= 2
        and len(pack.gens) >= 1
        and pack.f.vars == vars
        and pack.g.vars == vars
        and all(gen.vars == vars for gen in pack.gens)
    )
    rep.add("pack-shape", shape_ok,
            f"n={pack.n}, {len(pack.gens)} generators")
    if not shape_ok:
        return None, rep

    poly_ok = (pack.f.is_polynomial() and not pack.f.is_zero()
               and pack.g.is_polynomial() and not pack.g.is_zero()
               and all(gen.is_polynomial() for gen in pack.gens))
    rep.add("f-g-polynomial", poly_ok)
    if not poly_ok:
        return None, rep

    if pack.f_expr is not None or pack.g_expr is not None:
        try:
            expr_ok = (pack.f_expr is None or _expr_value(pack.f_expr, pack.gens) == pack.f) and \
                      (pack.g_expr is None or _expr_value(pack.g_expr, pack.gens) == pack.g)
            detail = ""
        except (WitnessInvalid, VariableMismatch) as exc:
            expr_ok, detail = False, str(exc)
        rep.add("generator-expressions", expr_ok, detail)
        if not expr_ok:
            return None, rep

    eps = axis_map(pack.n)
    eg = eps.apply(pack.g)
    eg_ok = not eg.is_zero() and not eg.is_constant()
    rep.add("axis-image-of-g", eg_ok, f"eps(g) = {eg}")
    if not eg_ok:
        return None, rep

    try:
        h = axis_quotient(pack.f, pack.g)
        h_ok, h_note = True, f"h = {h}"
        if pack.h is not None and pack.h.with_vars(vars) != h:
            h_ok, h_note = False, "stored h disagrees with eps(f)/eps(g)"
    except WitnessInvalid as exc:
        h, h_ok, h_note = None, False, str(exc)
    rep.add("axis-quotient", h_ok, h_note)
    if not h_ok:
        return None, rep

    try:
        if pack.ann is not None:
            ann = pack.ann
            d = ann.degree
            if not ann.is_monic() or ann.vars != G_VARS:
                raise WitnessInvalid("stored annihilator is not monic over k[G]")
            if d != eg.degree_in("x1"):
                raise WitnessInvalid("stored annihilator degree differs from deg eps(g)")
            ef = eps.apply(pack.f)
            if not ann.eval_poly(ef, coeff_images={"G": eg}).is_zero():
                raise WitnessInvalid("stored annihilator does not annihilate eps(f)")
        else:
            ann = build_annihilator(pack.f, pack.g)
            d = ann.degree
        ann_ok, ann_note = True, f"degree {d}"
    except WitnessInvalid as exc:
        ann, d, ann_ok, ann_note = None, None, False, str(exc)
    rep.add("annihilator", ann_ok, ann_note)
    if not ann_ok:
        return None, rep

    rel = realize_annihilator(ann, pack.f, pack.g)
    rel_ok = not rel.is_zero()
    rep.add("relation-nonzero", rel_ok,
            "" if rel_ok else "Ann(f) vanishes identically; pair rejected")
    if not rel_ok:
        return None, rep

    kernel_ok = eps.apply(pack.f - pack.g * h).is_zero() and eps.apply(rel).is_zero()
    rep.add("kernel-membership", kernel_ok,
            "f - g*h and the relation element vanish on the axis")
    if not kernel_ok:
        return None, rep

    try:
        if weights_override is not None:
            weights = tuple(int(w) for w in weights_override)
        elif pack.weights is not None:
            weights = tuple(int(w) for w in pack.weights)
        else:
            weights = choose_weights(pack.f, pack.g, h, rel)
        if len(weights) != pack.n - 1:
            raise WitnessInvalid(f"weight vector must have length {pack.n - 1}")
        twist = inversion_map(weights, h.with_vars(vars), with_z=True)
        tw = check_twist(twist, pack.f, pack.g, h, rel)
        w_ok = tw.ok
        w_note = f"t = {list(weights)}" if tw.ok else tw.failing_term
    except WitnessInvalid as exc:
        weights, twist, w_ok, w_note = None, None, False, str(exc)
    rep.add("weights-twist", w_ok, w_note)
    if not w_ok:
        return None, rep

    try:
        e_min = clearing_exponent(twist, rel, pack.f, d)
        if pack.clearing is not None:
            e = int(pack.clearing)
            if e < e_min:
                raise WitnessInvalid(
                    f"stored clearing exponent {e} violates the order conditions "
                    f"(minimum is {e_min})"
                )
        else:
            e = e_min
        e_ok, e_note = True, f"e = {e} (minimum {e_min})"
    except WitnessInvalid as exc:
        e, e_ok, e_note = None, False, str(exc)
    rep.add("clearing-exponent", e_ok, e_note)
    if not e_ok:
        return None, rep

    try:
        table = semigroup_orders([eps.apply(gen) for gen in pack.gens], semigroup_bound)
        nonnormal = not is_normal(table)
        sg_note = f"orders up to {table.bound}: {table.sorted_orders()}"
    except WitnessInvalid as exc:
        table, nonnormal, sg_note = None, False, str(exc)
    rep.add("semigroup-non-normal", nonnormal, sg_note)

    try:
        outside = not subalgebra_member(
            h, [eps.apply(gen) for gen in pack.gens], member_bound
        )
        mem_note = f"h not spanned by generator monomials up to degree {member_bound}"
        if not outside:
            mem_note = "h lies in the collapsed subring within the bound"
    except WitnessInvalid as exc:
        outside, mem_note = False, str(exc)
    rep.add("quotient-outside-subring", outside, mem_note)

    if not rep.ok:
        return None, rep

    resolved = Resolved(
        n=pack.n, f=pack.f, g=pack.g, h=h, ann=ann, rel=rel, d=d,
        weights=weights, clearing=e, twist=twist,
        axis=axis_map(pack.n, with_z=True),
    )
    return resolved, rep


def resolve_pack_fields(pack: WitnessPack, resolved: Resolved) -> WitnessPack:
    """A copy of the pack with every derived field filled in."""
    return replace(pack, h=resolved.h, ann=resolved.ann,
                   weights=resolved.weights, clearing=resolved.clearing)
