"""Ring endomorphisms of Laurent-polynomial algebras, given by images.

A RingMap stores one image per variable; applying it is substitution.
Builders are provided for the structured families the pipeline uses:
the axis substitution (kill every variable except the first), the
x1-inversion twist, translations, the x1*x2 product map, the parabolic
shear, and permutation actions transported through a coordinate change.
Structured maps carry their inverses so composites can be inverted.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import (
    LaurentPoly,
    RatFunc,
    VarSet,
    from_univar,
    qq,
    to_univar,
    x_vars,
    xz_vars,
)
from .errors import NotInvertible, UnsupportedCase, VariableMismatch


class RingMap:
    """A substitution homomorphism: every variable of `vars` gets an image
    over `vars` (or occasionally over a laxer VarSet, e.g. inverses that
    need an extra Laurent flag).  Equality compares images only."""

    __slots__ = ("vars", "images", "kind", "params", "inv_images")

    def __init__(self, vars: VarSet, images: Sequence[LaurentPoly],
                 kind: str = "generic", params: Mapping | None = None,
                 inv_images: Sequence[LaurentPoly] | None = None):
        if len(images) != len(vars):
            raise VariableMismatch("one image per variable required")
        object.__setattr__(self, "vars", vars)
        object.__setattr__(self, "images", tuple(images))
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "params", dict(params or {}))
        object.__setattr__(self, "inv_images",
                           tuple(inv_images) if inv_images is not None else None)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("RingMap is immutable")

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingMap):
            return NotImplemented
        return self.vars == other.vars and self.images == other.images

    __hash__ = None

    def image_of(self, name: str) -> LaurentPoly:
        return self.images[self.vars.index(name)]

    def as_images(self) -> dict[str, LaurentPoly]:
        return dict(zip(self.vars.names, self.images))

    def apply(self, p: LaurentPoly) -> LaurentPoly:
        """Apply to a polynomial over the same variable names; the input's
        Laurent flags must be a subset of the map's own."""
        if p.vars != self.vars and not self.vars.accepts(p.vars):
            raise VariableMismatch(
                f"map over {self.vars.names} applied to {p.vars.names}"
            )
        return p.subst(self.as_images())

    def apply_rf(self, q: RatFunc) -> RatFunc:
        return RatFunc(self.apply(q.num), self.apply(q.den))

    def is_identity(self) -> bool:
        return all(img == LaurentPoly.variable(img.vars, name)
                   for name, img in zip(self.vars.names, self.images))

    def inverse(self) -> "RingMap":
        if self.inv_images is not None:
            target = self.inv_images[0].vars
            return RingMap(target, self.inv_images, kind=self.kind,
                           params=dict(self.params, inverted=True),
                           inv_images=self.images)
        if self.kind == "composite":
            outer, inner = self.params["factors"]
            return compose(inner.inverse(), outer.inverse())
        raise UnsupportedCase(f"no inverse available for kind {self.kind!r}")

    def __str__(self) -> str:
        pairs = ", ".join(f"{n} -> {img}" for n, img in zip(self.vars.names, self.images))
        return f"RingMap[{self.kind}]({pairs})"

    __repr__ = __str__


def identity_map(vars: VarSet) -> RingMap:
    images = [LaurentPoly.variable(vars, n) for n in vars.names]
    return RingMap(vars, images, inv_images=images)


def compose(outer: RingMap, inner: RingMap) -> RingMap:
    """outer after inner: variable -> outer(inner(variable))."""
    images = [outer.apply(img) for img in inner.images]
    inv = None
    if outer.inv_images is not None and inner.inv_images is not None:
        # the inverse sends x -> inner^{-1}(outer^{-1}(x))
        inv_inner = inner.inverse()
        try:
            inv = tuple(inv_inner.apply(img) for img in outer.inv_images)
        except (UnsupportedCase, VariableMismatch, NotInvertible):
            inv = None
    return RingMap(inner.vars, images, kind="composite",
                   params={"factors": (outer, inner)}, inv_images=inv)


def axis_map(n: int, with_z: bool = False) -> RingMap:
    """The substitution fixing x1 (and z) and sending x2,...,xn to zero."""
    vars = xz_vars(n) if with_z else x_vars(n)
    images = []
    for name in vars.names:
        if name in ("x1", "z"):
            images.append(LaurentPoly.variable(vars, name))
        else:
            images.append(LaurentPoly.zero(vars))
    return RingMap(vars, images, kind="epsilon", params={"n": n, "with_z": with_z})


def _shift_coeffs(h: LaurentPoly) -> dict[int, Fraction]:
    """Validate the z-shift polynomial: univariate in x1, no negative powers."""
    coeffs = to_univar(h, "x1")
    if any(k < 0 for k in coeffs):
        raise VariableMismatch("shift polynomial must lie in k[x1]")
    return coeffs


def inversion_map(weights: Sequence[int], shift: LaurentPoly,
                  with_z: bool = True) -> RingMap:
    """The automorphism that inverts x1, rescales each further variable by a
    weight power of x1, and translates z by the shift evaluated at 1/x1:

        x1 -> 1/x1,   xi -> x1^{w_i} * xi  (i >= 2),   z -> z + shift(1/x1).

    Its inverse (same weights) translates z by -shift(x1) instead.
    """
    n = len(weights) + 1
    vars = xz_vars(n) if with_z else x_vars(n)
    coeffs = _shift_coeffs(shift)
    fwd = []
    bwd = []
    for i, name in enumerate(vars.names):
        if name == "x1":
            img = LaurentPoly.monomial(vars, (-1,) + (0,) * (len(vars) - 1))
            fwd.append(img)
            bwd.append(img)
        elif name == "z":
            z = LaurentPoly.variable(vars, "z")
            at_inv = from_univar(vars, "x1", {-k: c for k, c in coeffs.items()})
            at_x1 = from_univar(vars, "x1", coeffs)
            fwd.append(z + at_inv)
            bwd.append(z - at_x1)
        else:
            e = [0] * len(vars)
            e[0] = weights[i - 1]
            e[i] = 1
            img = LaurentPoly.monomial(vars, e)
            fwd.append(img)
            bwd.append(img)
    params = {"t": tuple(int(w) for w in weights), "h": shift, "with_z": with_z}
    return RingMap(vars, fwd, kind="theta", params=params, inv_images=bwd)


def inversion_map_inverse(weights: Sequence[int], shift: LaurentPoly,
                          with_z: bool = True) -> RingMap:
    return inversion_map(weights, shift, with_z).inverse()


def translation_map(offsets: Sequence) -> RingMap:
    """x_i -> x_i + a_i for rational offsets a."""
    a = [qq(v) for v in offsets]
    vars = x_vars(len(a))
    fwd = [LaurentPoly.variable(vars, n) + c for n, c in zip(vars.names, a)]
    bwd = [LaurentPoly.variable(vars, n) - c for n, c in zip(vars.names, a)]
    return RingMap(vars, fwd, kind="translation", params={"a": tuple(a)},
                   inv_images=bwd)


def mul_map(n: int) -> RingMap:
    """x1 -> x1*x2, all other variables fixed.

    The inverse divides by x2, so it lives over a VarSet where x2 is
    Laurent-flagged; it is still applicable to ordinary polynomials.
    """
    if n < 2:
        raise VariableMismatch("need at least two variables")
    vars = x_vars(n)
    fwd = [LaurentPoly.variable(vars, name) for name in vars.names]
    fwd[0] = LaurentPoly.variable(vars, "x1") * LaurentPoly.variable(vars, "x2")
    lax = VarSet(vars.names, (True, True) + (False,) * (n - 2))
    bwd = [LaurentPoly.variable(lax, name) for name in lax.names]
    bwd[0] = LaurentPoly.monomial(lax, (1, -1) + (0,) * (n - 2))
    return RingMap(vars, fwd, kind="rho", params={"n": n}, inv_images=bwd)


def shear_map(alpha, beta, n: int = 2) -> RingMap:
    """The polynomial automorphism with

        x1 -> x1 + beta - alpha*(x2 + x1^2),   x2 -> x2 + x1^2,

    fixing x3,...,xn.  It sends x1 + alpha*x2 to x1 + beta modulo the
    shear of x2; alpha must be nonzero for invertibility of the family's
    intended use, and the inverse is again polynomial:

        x1 -> x1 + alpha*x2 - beta,   x2 -> x2 - (x1 + alpha*x2 - beta)^2.
    """
    a, b = qq(alpha), qq(beta)
    if a == 0:
        raise VariableMismatch("alpha must be nonzero")
    if n < 2:
        raise VariableMismatch("need at least two variables")
    vars = x_vars(n)
    xv1 = LaurentPoly.variable(vars, "x1")
    xv2 = LaurentPoly.variable(vars, "x2")
    fwd = [LaurentPoly.variable(vars, name) for name in vars.names]
    fwd[0] = xv1 + b - a * (xv2 + xv1 ** 2)
    fwd[1] = xv2 + xv1 ** 2
    u = xv1 + a * xv2 - b
    bwd = [LaurentPoly.variable(vars, name) for name in vars.names]
    bwd[0] = u
    bwd[1] = xv2 - u ** 2
    return RingMap(vars, fwd, kind="psi",
                   params={"alpha": a, "beta": b, "n": n}, inv_images=bwd)


def perm_action(perm: Sequence[int], coords: RingMap) -> RingMap:
    """The action of a coordinate permutation, transported through a
    coordinate change T: the result is T o S_sigma o T^{-1}, where S_sigma
    permutes the formal coordinates (v_i -> v_{sigma(i)}, one-line, 1-based).
    """
    n = len(perm)
    if sorted(perm) != list(range(1, n + 1)):
        raise VariableMismatch(f"not a permutation of 1..{n}: {perm}")
    if len(coords.vars) != n:
        raise VariableMismatch("permutation size does not match the coordinates")
    vars = coords.vars
    inv_coords = coords.inverse()

    def transported(sigma: Sequence[int]) -> list[LaurentPoly]:
        swap = [LaurentPoly.variable(vars, vars.names[sigma[i] - 1])
                for i in range(n)]
        s_map = RingMap(vars, swap)
        return [coords.apply(s_map.apply(img)) for img in inv_coords.images]

    inv_perm = [0] * n
    for i, v in enumerate(perm):
        inv_perm[v - 1] = i + 1
    return RingMap(vars, transported(perm), kind="permutation",
                   params={"perm": tuple(int(v) for v in perm)},
                   inv_images=transported(inv_perm))
