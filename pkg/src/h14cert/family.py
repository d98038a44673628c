"""The certified polynomial family and its certificates.

Everything here works inside the localized algebra generated by a pair
f, g, their relation element rel = Ann(f)|_{G=g}, and 1/g.  Elements are
kept symbolically as maps {(a, b, m): coefficient} standing for
f^a * rel^b * g^m; the monic annihilator gives the rewriting rule

    f^d  =  rel - sum_{s<d} c_s(g) * f^s

which normalizes every element to f-degree < d.  On top of that sit:

* `decompose`      — split an element into its polynomial part (in f, g)
                     and a tail with only negative g-powers,
* `tail_coefficients` — the recursion producing the correction terms f_1,
                     f_2, ... that complete scaled powers of z to elements
                     whose twisted images are polynomial,
* `witness_poly`   — the l-th member q_l of the certified family,
* `build_certificate` / `verify_certificate` — serialize-ready bundles of
                     the family plus every recomputable check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .algebra import LaurentPoly, RatFunc, UniPoly, qq, to_univar, valuation
from .errors import (
    AlgebraError,
    ConstructionFailure,
    VariableMismatch,
    WitnessInvalid,
)
from .report import Report
from .witness import (
    DEFAULT_MEMBER_BOUND,
    DEFAULT_SEMIGROUP_BOUND,
    Resolved,
    WitnessPack,
    resolve_pack_fields,
    validate_pack,
)

Triple = tuple[int, int, int]


class FGPoly:
    """An exact element of k[f, g, rel, 1/g] in exponent-triple form.

    Keys are (a, b, m): the exponents of f, rel, and g (m may be negative).
    """

    __slots__ = ("terms",)

    def __init__(self, terms=(), *, _clean: bool = True):
        items = terms.items() if hasattr(terms, "items") else terms
        if _clean:
            clean: dict[Triple, Fraction] = {}
            for key, coeff in items:
                c = qq(coeff)
                if c == 0:
                    continue
                a, b, m = key
                if a < 0 or b < 0:
                    raise VariableMismatch("negative f- or rel-exponent")
                k = (int(a), int(b), int(m))
                clean[k] = clean.get(k, Fraction(0)) + c
                if clean[k] == 0:
                    del clean[k]
            object.__setattr__(self, "terms", clean)
        else:
            object.__setattr__(self, "terms", dict(items))

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("FGPoly is immutable")

    @classmethod
    def zero(cls) -> "FGPoly":
        return cls({}, _clean=False)

    @classmethod
    def one(cls) -> "FGPoly":
        return cls({(0, 0, 0): Fraction(1)}, _clean=False)

    @classmethod
    def single(cls, a: int, b: int, m: int, coeff=1) -> "FGPoly":
        return cls({(a, b, m): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FGPoly):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __add__(self, other: "FGPoly") -> "FGPoly":
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, Fraction(0)) + c
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return FGPoly(out, _clean=False)

    def __neg__(self) -> "FGPoly":
        return FGPoly({k: -c for k, c in self.terms.items()}, _clean=False)

    def __sub__(self, other: "FGPoly") -> "FGPoly":
        return self + (-other)

    def __mul__(self, other) -> "FGPoly":
        if not isinstance(other, FGPoly):
            c = qq(other)
            if c == 0:
                return FGPoly.zero()
            return FGPoly({k: v * c for k, v in self.terms.items()}, _clean=False)
        out: dict[Triple, Fraction] = {}
        for (a1, b1, m1), c1 in self.terms.items():
            for (a2, b2, m2), c2 in other.terms.items():
                k = (a1 + a2, b1 + b2, m1 + m2)
                s = out.get(k, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(k, None)
                else:
                    out[k] = s
        return FGPoly(out, _clean=False)

    __rmul__ = __mul__

    def shifted(self, da: int, db: int, dm: int, scale=1) -> "FGPoly":
        """Multiply by f^da * rel^db * g^dm and a scalar, in one pass."""
        c0 = qq(scale)
        if c0 == 0:
            return FGPoly.zero()
        return FGPoly(
            {(a + da, b + db, m + dm): c * c0 for (a, b, m), c in self.terms.items()},
            _clean=False,
        )

    def max_f_exponent(self) -> int:
        return max((a for (a, _, _) in self.terms), default=-1)

    def is_fg(self) -> bool:
        """True when the element visibly lies in k[f, g]."""
        return all(b == 0 and m >= 0 for (_, b, m) in self.terms)

    def is_negative_tail(self, d: int) -> bool:
        """True when reduced (f-degree < d) with only negative g-powers."""
        return all(a < d and m < 0 for (a, _, m) in self.terms)

    def key(self) -> tuple:
        return tuple(sorted(self.terms.items()))

    def terms_sorted(self) -> list[tuple[Triple, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for (a, b, m), c in self.terms_sorted():
            names = []
            if a:
                names.append(f"f^{a}" if a != 1 else "f")
            if b:
                names.append(f"rel^{b}" if b != 1 else "rel")
            if m:
                names.append(f"g^{m}" if m != 1 else "g")
            body = "*".join(names) or "1"
            bits.append(f"({c})*{body}")
        return " + ".join(bits)

    def __repr__(self) -> str:
        return f"<FGPoly {self}>"


# ---------------------------------------------------------------------------
# rewriting against the annihilator


def _ann_rules(ann: UniPoly) -> tuple[int, list[tuple[int, int, Fraction]]]:
    """Degree d plus the replacement data for f^d = rel - sum c_s(g) f^s,
    flattened to (s, g-power, coefficient) triples."""
    if ann.is_zero() or not ann.is_monic():
        raise VariableMismatch("annihilator must be monic")
    d = ann.degree
    if d < 1:
        raise VariableMismatch("annihilator must have positive degree")
    rules = []
    for s in range(d):
        for u, gamma in to_univar(ann.coeff(s), "G").items():
            rules.append((s, u, gamma))
    return d, rules


def annihilator_in_fg(ann: UniPoly) -> FGPoly:
    """The relation element written out in k[f, g]: Ann evaluated at f."""
    d, rules = _ann_rules(ann)
    terms: dict[Triple, Fraction] = {(d, 0, 0): Fraction(1)}
    for s, u, gamma in rules:
        k = (s, 0, u)
        terms[k] = terms.get(k, Fraction(0)) + gamma
    return FGPoly(terms)


def reduce_by_annihilator(p: FGPoly, ann: UniPoly) -> FGPoly:
    """Rewrite until every f-exponent is below the annihilator degree.

    Each application of the rule trades f^d for one rel-power plus strictly
    smaller f-powers, so the multiset of f-exponents descends and the loop
    terminates.
    """
    d, rules = _ann_rules(ann)
    terms = dict(p.terms)
    while True:
        top = max((a for (a, _, _) in terms if a >= d), default=None)
        if top is None:
            break
        for key in [k for k in terms if k[0] == top]:
            c = terms.pop(key)
            _, b, m = key
            updates = [((top - d, b + 1, m), c)]
            for s, u, gamma in rules:
                updates.append(((top - d + s, b, m + u), -gamma * c))
            for k, v in updates:
                s2 = terms.get(k, Fraction(0)) + v
                if s2 == 0:
                    terms.pop(k, None)
                else:
                    terms[k] = s2
    return FGPoly(terms, _clean=False)


def decompose(p: FGPoly, ann: UniPoly) -> tuple[FGPoly, FGPoly]:
    """Split p into (polynomial part, negative tail): the first lies in
    k[f, g] with all rel-powers expanded back out, the second is reduced
    with strictly negative g-powers.  Their sum equals p in the localized
    algebra (an identity certified by `realize`)."""
    red = reduce_by_annihilator(p, ann)
    pos = {k: c for k, c in red.terms.items() if k[2] >= 0}
    neg = {k: c for k, c in red.terms.items() if k[2] < 0}
    rel_fg = annihilator_in_fg(ann)
    powers = {0: FGPoly.one()}

    def rel_power(b: int) -> FGPoly:
        if b not in powers:
            powers[b] = rel_power(b - 1) * rel_fg
        return powers[b]

    poly_part = FGPoly.zero()
    for (a, b, m), c in sorted(pos.items()):
        poly_part = poly_part + rel_power(b).shifted(a, 0, m, c)
    return poly_part, FGPoly(neg, _clean=False)


# ---------------------------------------------------------------------------
# realization into actual (rational) functions


def realize_fg(p: FGPoly, f: LaurentPoly, g: LaurentPoly,
               rel: LaurentPoly | None = None,
               _cache: dict | None = None) -> LaurentPoly:
    """Evaluate an element with only nonnegative g-powers to a polynomial."""
    if any(m < 0 for (_, _, m) in p.terms):
        raise VariableMismatch("element has negative g-powers; use realize()")
    if rel is None and any(b > 0 for (_, b, _) in p.terms):
        raise VariableMismatch("element has rel-powers but no rel value given")
    cache = _cache if _cache is not None else {}

    def power(tag: str, base: LaurentPoly, k: int) -> LaurentPoly:
        got = cache.get((tag, k))
        if got is None:
            got = base ** k if k <= 1 else power(tag, base, k - 1) * base
            cache[(tag, k)] = got
        return got

    acc = LaurentPoly.zero(f.vars)
    for (a, b, m), c in p.terms.items():
        term = LaurentPoly.const(f.vars, c)
        if a:
            term = term * power("f", f, a)
        if b:
            term = term * power("rel", rel, b)
        if m:
            term = term * power("g", g, m)
        acc = acc + term
    return acc


def realize(p: FGPoly, f: LaurentPoly, g: LaurentPoly, rel: LaurentPoly) -> RatFunc:
    """Evaluate any element to a rational function num / g^K."""
    if p.is_zero():
        return RatFunc.from_poly(LaurentPoly.zero(f.vars))
    k_clear = max(0, -min(m for (_, _, m) in p.terms))
    shifted = p.shifted(0, 0, k_clear)
    num = realize_fg(shifted, f, g, rel)
    return RatFunc(num, g ** k_clear)


# ---------------------------------------------------------------------------
# the tail-coefficient recursion


def _factorials(n: int) -> list[int]:
    return [math.factorial(i) for i in range(n + 1)]


def tail_coefficients(l_max: int, rw: Resolved, verify: bool = True) -> list[FGPoly]:
    """The correction coefficients f_1, ..., f_{l_max}.

    Step l forms p = sum_{j=1}^{l} f_{l-j} * (f/g)^j / j!  (with f_0 = 1),
    reduces it against the annihilator, splits off the part that lies in
    k[f, g], and negates it to obtain f_l.  What remains of p then has only
    negative g-powers, and multiplying by rel^e makes its twisted image a
    function with nonnegative x1-order — that is checked here for every
    step when `verify` is set.
    """
    if l_max < 0:
        raise VariableMismatch("l_max must be nonnegative")
    fact = _factorials(max(l_max, 1))
    tails: list[FGPoly] = []
    for step in range(1, l_max + 1):
        p = FGPoly.zero()
        for j in range(1, step + 1):
            prev = tails[step - j - 1] if step - j >= 1 else FGPoly.one()
            p = p + prev.shifted(j, 0, -j, Fraction(1, fact[j]))
        poly_part, neg_tail = decompose(p, rw.ann)
        tail = -poly_part
        if verify:
            scaled = neg_tail.shifted(0, rw.clearing, 0)
            value = realize(scaled, rw.f_xz, rw.g_xz, rw.rel_xz)
            twisted = rw.twist.apply_rf(value)
            if twisted.is_zero():
                pass
            elif valuation(twisted, "x1") < 0:
                raise ConstructionFailure(
                    f"step {step}: twisted remainder has negative x1-order"
                )
        tails.append(tail)
    return tails


def tail_upoly(i: int, tails: list[FGPoly], clearing: int) -> list[FGPoly]:
    """Coefficient list (ascending powers of the abstract variable) of the
    i-th scaled polynomial rel^e * (T^i/i! + f_1 T^{i-1}/(i-1)! + ... + f_i).
    """
    if i > len(tails):
        raise VariableMismatch(f"need {i} tail coefficients, have {len(tails)}")
    fact = _factorials(max(i, 1))
    coeffs = []
    for w in range(i + 1):
        fj = tails[i - w - 1] if i - w >= 1 else FGPoly.one()
        coeffs.append(fj.shifted(0, clearing, 0, Fraction(1, fact[w])))
    return coeffs


def tail_at_ratio(i: int, tails: list[FGPoly], clearing: int) -> FGPoly:
    """The i-th scaled polynomial evaluated at the ratio f/g."""
    coeffs = tail_upoly(i, tails, clearing)
    acc = FGPoly.zero()
    for w, c in enumerate(coeffs):
        acc = acc + c.shifted(w, 0, -w)
    return acc


def _assemble_witness_poly(l: int, tails: list[FGPoly], rw: Resolved,
                           caches: dict) -> LaurentPoly:
    """q_l = twist(P_l(z)) assembled coefficientwise; no validity checks."""
    fact = _factorials(max(l, 1))
    zpow = caches.setdefault("zpow", {0: LaurentPoly.one(rw.twist.vars)})
    z_img = rw.twist.image_of("z")
    for k in range(1, l + 1):
        if k not in zpow:
            zpow[k] = zpow[k - 1] * z_img
    rel_pow = caches.setdefault("relpow", {})
    if rw.clearing not in rel_pow:
        rel_pow[rw.clearing] = rw.rel_xz ** rw.clearing
    rel_e = rel_pow[rw.clearing]
    coeff_cache = caches.setdefault("coeffs", {})
    mul_cache = caches.setdefault("mulcache", {})
    q = LaurentPoly.zero(rw.twist.vars)
    for i in range(l + 1):
        fj = tails[l - i - 1] if l - i >= 1 else FGPoly.one()
        ck = fj.key()
        twisted = coeff_cache.get(ck)
        if twisted is None:
            plain = rel_e * realize_fg(fj, rw.f_xz, rw.g_xz, rw.rel_xz, _cache=mul_cache)
            twisted = rw.twist.apply(plain)
            coeff_cache[ck] = twisted
        if twisted.is_zero():
            continue
        q = q + twisted * Fraction(1, fact[i]) * zpow[i]
    return q


def witness_poly(l: int, rw: Resolved, tails: list[FGPoly],
                 caches: dict | None = None) -> LaurentPoly:
    """The l-th member of the family; guaranteed (and checked) to be an
    honest polynomial in x1, ..., xn, z."""
    q = _assemble_witness_poly(l, tails, rw, caches if caches is not None else {})
    bad = next((e for e in sorted(q.terms) if any(k < 0 for k in e)), None)
    if bad is not None:
        z_deg = bad[-1]
        raise ConstructionFailure(
            f"member l={l}: coefficient of z^{z_deg} has a negative exponent"
        )
    return q


def taylor_shift_check(l: int, rw: Resolved, tails: list[FGPoly]) -> bool:
    """Certify q_l against the Taylor expansion around the shifted variable:

        q_l = sum_i  twist(P_{l-i}(f/g)) / i!  *  (z - twist(f - g*h)/twist(g))^i

    — an identity of rational functions, compared by cross-multiplication.
    """
    vz = rw.twist.vars
    lhs = RatFunc.from_poly(witness_poly(l, rw, tails))
    tg = rw.twist.apply(rw.g_xz)
    tfgh = rw.twist.apply(rw.f_xz - rw.g_xz * rw.h_xz)
    zvar = LaurentPoly.variable(vz, "z")
    w = RatFunc(zvar * tg - tfgh, tg)
    fact = _factorials(max(l, 1))
    rhs = RatFunc.from_poly(LaurentPoly.zero(vz))
    wpow = RatFunc.from_poly(LaurentPoly.one(vz))
    for i in range(l + 1):
        block = tail_at_ratio(l - i, tails, rw.clearing)
        value = realize(block, rw.f_xz, rw.g_xz, rw.rel_xz)
        twisted = rw.twist.apply_rf(value)
        rhs = rhs + twisted * wpow * Fraction(1, fact[i])
        if i < l:
            wpow = wpow * w
    return lhs == rhs


# ---------------------------------------------------------------------------
# certificates


@dataclass
class CertEntry:
    l: int
    tails: list[FGPoly]          # f_1 ... f_l for this member
    q: LaurentPoly


@dataclass
class Certificate:
    pack: WitnessPack            # with all derived fields resolved
    rel: LaurentPoly
    d: int
    clearing: int
    entries: list[CertEntry]
    report: Report | None = None


def build_certificate(pack: WitnessPack, l_max: int = 8, *,
                      weights_override=None,
                      semigroup_bound: int = DEFAULT_SEMIGROUP_BOUND,
                      member_bound: int = DEFAULT_MEMBER_BOUND) -> Certificate:
    """Validate the pack, run the recursion to l_max, and bundle the family
    with a verification report.  Raises WitnessInvalid (with the report
    attached) when the pack fails validation."""
    resolved, report = validate_pack(
        pack, weights_override=weights_override,
        semigroup_bound=semigroup_bound, member_bound=member_bound,
    )
    if resolved is None:
        failures = "; ".join(f"{c.name}: {c.detail}" for c in report.failures())
        raise WitnessInvalid(f"witness rejected ({failures})", report=report)
    tails = tail_coefficients(l_max, resolved)
    caches: dict = {}
    entries = [
        CertEntry(l=l, tails=list(tails[:l]),
                  q=witness_poly(l, resolved, tails, caches))
        for l in range(l_max + 1)
    ]
    cert = Certificate(pack=resolve_pack_fields(pack, resolved),
                       rel=resolved.rel, d=resolved.d,
                       clearing=resolved.clearing, entries=entries)
    cert.report = verify_certificate(cert, semigroup_bound=semigroup_bound,
                                     member_bound=member_bound)
    if not cert.report.ok:
        raise ConstructionFailure(
            "freshly built certificate failed verification: "
            + "; ".join(c.name for c in cert.report.failures())
        )
    return cert


def verify_certificate(cert: Certificate, *,
                       semigroup_bound: int = DEFAULT_SEMIGROUP_BOUND,
                       member_bound: int = DEFAULT_MEMBER_BOUND) -> Report:
    """Recompute every checkable claim of a certificate from its raw data.

    The report is deterministic: pack-level checks first (shared with
    validation), then the stored relation element and degree, then one
    block per entry.  Any single-field tampering flips at least one line.
    """
    pack = cert.pack
    rep = Report()
    resolved_fields = (pack.h is not None and pack.ann is not None
                       and pack.weights is not None and pack.clearing is not None)
    rep.add("resolved-fields", resolved_fields,
            "pack carries h, annihilator, weights, clearing exponent")
    if not resolved_fields:
        return rep

    resolved, pack_rep = validate_pack(
        pack, semigroup_bound=semigroup_bound, member_bound=member_bound,
    )
    rep.checks.extend(pack_rep.checks)
    if resolved is None:
        return rep

    rep.add("relation-matches", cert.rel == resolved.rel,
            "stored relation element equals Ann(f)|_{G=g}")
    rep.add("degree-matches", cert.d == resolved.d,
            f"stored degree {cert.d}")
    rep.add("clearing-matches", cert.clearing == resolved.clearing,
            f"stored clearing exponent {cert.clearing}")
    twisted_rel = resolved.twist.apply(resolved.rel_xz)
    rep.add("relation-x1-witness",
            (not twisted_rel.is_zero()) and twisted_rel.is_polynomial()
            and twisted_rel.order_in("x1") >= 1,
            "twisted relation element is a nonzero polynomial divisible by x1")

    ls = [entry.l for entry in cert.entries]
    contiguous = ls == list(range(len(ls))) and len(ls) >= 1
    rep.add("entries-contiguous", contiguous, f"members l = {ls}")
    if not contiguous:
        return rep

    prefix_ok = all(
        cert.entries[i].tails == cert.entries[i + 1].tails[: len(cert.entries[i].tails)]
        for i in range(len(cert.entries) - 1)
    ) and all(len(entry.tails) == entry.l for entry in cert.entries)
    rep.add("tails-prefix-consistency", prefix_ok,
            "each member extends the previous member's tail coefficients")

    if not rep.ok:
        return rep

    caches: dict = {}
    fact = _factorials(max(len(cert.entries), 1))
    rel_t_pow = twisted_rel ** cert.clearing
    eps = resolved.axis
    for entry in cert.entries:
        l = entry.l
        tag = f"member-{l}"
        shape_ok = all(t.is_fg() for t in entry.tails)
        rep.add(f"{tag}-tails-in-fg", shape_ok,
                "tail coefficients lie in k[f, g]")
        try:
            recomputed = _assemble_witness_poly(l, entry.tails, resolved, caches)
            recompute_ok = recomputed == entry.q
            recompute_note = "stored member equals the recomputed twist image"
        except AlgebraError as exc:
            recompute_ok, recompute_note = False, f"recomputation failed: {exc}"
        rep.add(f"{tag}-recomputed", recompute_ok, recompute_note)
        poly_ok = entry.q.is_polynomial()
        rep.add(f"{tag}-polynomial", poly_ok, "member lies in k[x1..xn, z]")
        if not poly_ok:
            continue
        scaled = entry.q * fact[l]
        if l == 0:
            rep.add(f"{tag}-leading", scaled == rel_t_pow,
                    "member 0 equals the twisted relation power")
        else:
            zl = [0] * (len(resolved.twist.vars) - 1) + [l]
            lead = LaurentPoly.monomial(resolved.twist.vars, zl)
            diff = scaled - rel_t_pow * lead
            lead_coeff = LaurentPoly(
                resolved.twist.vars,
                {e[:-1] + (0,): c for e, c in scaled.terms.items() if e[-1] == l},
            )
            rep.add(f"{tag}-leading", lead_coeff == rel_t_pow,
                    "z^l coefficient of l! * member equals the twisted relation power")
            drop_ok = diff.is_zero() or diff.degree_in("z") < l
            rep.add(f"{tag}-degree-drop", drop_ok,
                    "l! * member minus the leading block has z-degree < l")
        rep.add(f"{tag}-axis-constant", eps.apply(entry.q).is_constant(),
                "axis image of the member is a constant")

    sizes = [len(cert.entries[-1].tails[i].terms) for i in range(len(cert.entries[-1].tails))]
    rep.add("tail-growth", True, f"tail term counts by step: {sizes}")
    return rep
