"""Ready-made inputs for the pipeline.

Two families are provided: witness packs built from permutation-invariant
rings (orbit sums of monomials under a subgroup of the symmetric group,
expressed through a triangular coordinate change), and the small locally
nilpotent derivation toolkit (apply, nilpotence scan, preslice search, the
preslice inversion involution, and its fixed-ring checks).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import Expo, LaurentPoly, VarSet, x_vars
from .errors import UnsupportedCase, VariableMismatch, WitnessInvalid
from .maps import RingMap, axis_map
from .report import Report
from .witness import WitnessPack, axis_quotient


@dataclass(frozen=True)
class PermGroupSpec:
    """A permutation group on n letters, by one-line generators (1-based)."""

    n: int
    generators: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for gen in self.generators:
            if sorted(gen) != list(range(1, self.n + 1)):
                raise VariableMismatch(
                    f"{gen} is not a permutation of 1..{self.n}"
                )

    def apply(self, perm: tuple[int, ...], exps: Expo) -> Expo:
        """Push a monomial exponent vector through y_i -> y_{perm(i)}."""
        out = [0] * self.n
        for i, k in enumerate(exps):
            out[perm[i] - 1] = k
        return tuple(out)

    def orbit(self, exps: Expo) -> set[Expo]:
        seen = {tuple(exps)}
        frontier = [tuple(exps)]
        while frontier:
            cur = frontier.pop()
            for gen in self.generators:
                nxt = self.apply(gen, cur)
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return seen

    def index_orbit(self, start: int) -> set[int]:
        """Orbit of a coordinate index (1-based) under the group."""
        seen = {start}
        frontier = [start]
        while frontier:
            cur = frontier.pop()
            for gen in self.generators:
                nxt = gen[cur - 1]
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return seen


def y_coords(n: int) -> RingMap:
    """The triangular coordinate change y1 = x1, y2 = x2 - x1 + x1^2,
    y_i = x_i (i >= 3), as the map sending each formal coordinate to its
    expression in x; carries its (also triangular) inverse."""
    if n < 2:
        raise VariableMismatch("need at least two variables")
    vars = x_vars(n)
    x1 = LaurentPoly.variable(vars, "x1")
    x2 = LaurentPoly.variable(vars, "x2")
    fwd = [LaurentPoly.variable(vars, name) for name in vars.names]
    fwd[1] = x2 - x1 + x1 ** 2
    bwd = [LaurentPoly.variable(vars, name) for name in vars.names]
    bwd[1] = x2 + x1 - x1 ** 2
    return RingMap(vars, fwd, kind="generic", params={"role": "coords", "n": n},
                   inv_images=bwd)


def orbit_sum(group: PermGroupSpec, exps: Expo) -> LaurentPoly:
    """The sum over the orbit of a monomial in the y-coordinates, written
    out in x-coordinates."""
    if len(exps) != group.n or any(k < 0 for k in exps):
        raise VariableMismatch("monomial exponents must be nonnegative, length n")
    vars = x_vars(group.n)
    formal = LaurentPoly(vars, {e: Fraction(1) for e in group.orbit(exps)})
    return y_coords(group.n).apply(formal)


def invariant_generators(group: PermGroupSpec, max_degree: int) -> list[LaurentPoly]:
    """Orbit sums of all monomials of total degree 1..max_degree, one per
    orbit, in a deterministic order (degree, then descending exponents)."""
    gens = []
    for degree in range(1, max_degree + 1):
        for exps in _monomials(group.n, degree):
            if exps == max(group.orbit(exps)):
                gens.append(orbit_sum(group, exps))
    return gens


def _monomials(n: int, degree: int):
    """All exponent tuples of the given total degree, descending lex."""
    def rec(prefix, remaining, slots):
        if slots == 1:
            yield prefix + (remaining,)
            return
        for k in range(remaining, -1, -1):
            yield from rec(prefix + (k,), remaining - k, slots - 1)
    yield from rec((), degree, n)


def invariant_witness_pack(group: PermGroupSpec,
                           degree_bound: int | None = None) -> WitnessPack:
    """The standard witness pack of an invariant ring: generators are orbit
    sums up to the degree bound (default n), and the distinguished pair is

        f = orbit(y1) + orbit(y1*y2),    g = orbit(y1).

    Requires some group element to send coordinate 1 to coordinate 2, which
    makes the axis images come out as eps(g) = x1^2, eps(f) = x1^3 and the
    quotient h = x1; these are verified at build time.
    """
    n = group.n
    if n < 2:
        raise WitnessInvalid("need at least two coordinates")
    bound = degree_bound if degree_bound is not None else n
    if bound < 2:
        raise WitnessInvalid("degree bound must be at least 2")
    if 2 not in group.index_orbit(1):
        raise WitnessInvalid(
            "no group element sends the first coordinate to the second"
        )
    gens = invariant_generators(group, bound)
    e1 = (1,) + (0,) * (n - 1)
    e12 = (1, 1) + (0,) * (n - 2)
    g = orbit_sum(group, e1)
    pair = orbit_sum(group, e12)
    f = g + pair

    vars = x_vars(n)
    eps = axis_map(n)
    x1sq = LaurentPoly.monomial(vars, (2,) + (0,) * (n - 1))
    x1cb = LaurentPoly.monomial(vars, (3,) + (0,) * (n - 1))
    if eps.apply(g) != x1sq or eps.apply(f) != x1cb:
        raise WitnessInvalid("axis images of the invariant pair are degenerate")
    if axis_quotient(f, g) != LaurentPoly.variable(vars, "x1"):
        raise WitnessInvalid("axis quotient of the invariant pair is not x1")

    try:
        idx_g = next(i for i, p in enumerate(gens) if p == g)
        idx_pair = next(i for i, p in enumerate(gens) if p == pair)
    except StopIteration:
        raise WitnessInvalid("orbit sums of y1 and y1*y2 missing from the generators")
    u_vars = VarSet(tuple(f"u{i}" for i in range(len(gens))),
                    (False,) * len(gens))
    f_expr = (LaurentPoly.variable(u_vars, f"u{idx_g}")
              + LaurentPoly.variable(u_vars, f"u{idx_pair}"))
    g_expr = LaurentPoly.variable(u_vars, f"u{idx_g}")
    return WitnessPack(n=n, gens=gens, f=f, g=g,
                       f_expr=f_expr, g_expr=g_expr)


# ---------------------------------------------------------------------------
# locally nilpotent derivations and the preslice involution


@dataclass(frozen=True)
class Derivation:
    """A k-derivation of k[x1..xn], determined by the images of the
    variables; optional kernel generators ride along for checks."""

    n: int
    images: tuple[LaurentPoly, ...]
    kernel_gens: tuple[LaurentPoly, ...] = ()

    def __post_init__(self):
        vars = x_vars(self.n)
        if len(self.images) != self.n:
            raise VariableMismatch("one image per variable required")
        for p in tuple(self.images) + tuple(self.kernel_gens):
            if p.vars != vars:
                raise VariableMismatch("derivation data over the wrong variables")

    @property
    def vars(self) -> VarSet:
        return x_vars(self.n)


def apply_derivation(D: Derivation, p: LaurentPoly) -> LaurentPoly:
    """D(p) = sum_i D(x_i) * dp/dx_i (the Leibniz extension)."""
    out = LaurentPoly.zero(D.vars)
    for name, image in zip(D.vars.names, D.images):
        if image.is_zero():
            continue
        out = out + image * p.deriv(name)
    return out


def is_locally_nilpotent(D: Derivation, test_polys, max_iter: int = 64) -> bool:
    """Scan: does some iterate of D kill every test polynomial?  A True
    answer certifies nilpotence on the tested elements only."""
    for p in test_polys:
        q = p
        for _ in range(max_iter + 1):
            if q.is_zero():
                break
            q = apply_derivation(D, q)
        else:
            return False
    return True


def find_preslice(D: Derivation, candidates) -> LaurentPoly:
    """First candidate s with D(s) != 0 and D(D(s)) = 0."""
    for s in candidates:
        ds = apply_derivation(D, s)
        if not ds.is_zero() and apply_derivation(D, ds).is_zero():
            return s
    raise UnsupportedCase("no preslice among the candidates")


def preslice_involution(s: LaurentPoly) -> RingMap:
    """The involution inverting a coordinate preslice: s -> 1/s, all other
    variables fixed.  Only a plain coordinate is supported; the result acts
    on the VarSet where that coordinate is Laurent-flagged."""
    if len(s.terms) != 1:
        raise UnsupportedCase("preslice is not a coordinate")
    (exps, coeff), = s.terms.items()
    if coeff != 1 or sum(exps) != 1 or max(exps) != 1:
        raise UnsupportedCase("preslice is not a coordinate")
    idx = exps.index(1)
    vars = s.vars
    lax = VarSet(vars.names,
                 tuple(flag or (i == idx) for i, flag in enumerate(vars.laurent)))
    images = [LaurentPoly.variable(lax, name) for name in lax.names]
    inv_exps = [0] * len(lax)
    inv_exps[idx] = -1
    images[idx] = LaurentPoly.monomial(lax, inv_exps)
    return RingMap(lax, images, kind="generic",
                   params={"role": "preslice-involution", "coordinate": vars.names[idx]},
                   inv_images=images)


def check_involution(D: Derivation, s: LaurentPoly,
                     kernel_gens=None) -> Report:
    """The fixed-ring conditions: the involution squares to the identity,
    fixes every kernel generator, and the kernel generators are killed by D."""
    rep = Report()
    gens = tuple(kernel_gens) if kernel_gens is not None else D.kernel_gens
    iota = preslice_involution(s)
    twice = RingMap(iota.vars, [iota.apply(img) for img in iota.images])
    rep.add("involution-squares-to-identity", twice.is_identity())
    fixed = all(iota.apply(p.with_vars(iota.vars)) == p.with_vars(iota.vars)
                for p in gens)
    rep.add("kernel-generators-fixed", fixed,
            f"{len(gens)} generators checked")
    killed = all(apply_derivation(D, p).is_zero() for p in gens)
    rep.add("kernel-generators-killed", killed)
    return rep
