"""Exact sparse arithmetic for multivariate Laurent polynomials over Q.

A polynomial is a map {exponent tuple -> Fraction} over a fixed, ordered
variable set.  Per-variable flags record which variables may carry negative
exponents; everything else is an ordinary polynomial variable.  All values
are immutable by convention (operations return fresh objects), coefficients
are `fractions.Fraction`, and equality is exact equality of term maps.
No floating point appears anywhere in this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    NotDivisible,
    NotInvertible,
    VariableMismatch,
    ZeroInput,
)

Expo = tuple[int, ...]
Scalar = Union[int, Fraction]


def qq(value) -> Fraction:
    """Coerce an int, Fraction, or 'num/den' string to an exact rational.

    Floats are rejected on purpose: silently converting one would smuggle
    binary rounding into an exact computation.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


@dataclass(frozen=True)
class VarSet:
    """An ordered tuple of variable names plus per-variable Laurent flags."""

    names: tuple[str, ...]
    laurent: tuple[bool, ...]

    def __post_init__(self):
        if len(self.names) != len(self.laurent):
            raise VariableMismatch("names and laurent flags differ in length")
        if len(set(self.names)) != len(self.names):
            raise VariableMismatch(f"duplicate variable names: {self.names}")

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise VariableMismatch(f"unknown variable {name!r} in {self.names}") from None

    def accepts(self, other: "VarSet") -> bool:
        """True when `other` embeds here: same names in the same order and
        every Laurent-flagged variable of `other` is flagged here too."""
        return self.names == other.names and all(
            mine or not theirs for mine, theirs in zip(self.laurent, other.laurent)
        )


def x_vars(n: int) -> VarSet:
    """x1,...,xn with only x1 allowed negative exponents."""
    if n < 1:
        raise VariableMismatch("need at least one variable")
    names = tuple(f"x{i}" for i in range(1, n + 1))
    return VarSet(names, (True,) + (False,) * (n - 1))


def xz_vars(n: int) -> VarSet:
    """x1,...,xn,z with only x1 allowed negative exponents."""
    base = x_vars(n)
    return VarSet(base.names + ("z",), base.laurent + (False,))


def plain_vars(*names: str) -> VarSet:
    """Ordinary polynomial variables, no negative exponents anywhere."""
    return VarSet(tuple(names), (False,) * len(names))


class LaurentPoly:
    """Sparse exact Laurent polynomial over a fixed VarSet."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: VarSet, terms=(), *, _clean: bool = True):
        items = terms.items() if hasattr(terms, "items") else terms
        if _clean:
            clean: dict[Expo, Fraction] = {}
            width = len(vars)
            for exps, coeff in items:
                c = qq(coeff)
                if c == 0:
                    continue
                e = tuple(exps)
                if len(e) != width:
                    raise VariableMismatch(
                        f"exponent tuple {e} has wrong width for {vars.names}"
                    )
                for pos, k in enumerate(e):
                    if k < 0 and not vars.laurent[pos]:
                        raise VariableMismatch(
                            f"negative exponent on non-Laurent variable "
                            f"{vars.names[pos]!r}"
                        )
                clean[e] = clean.get(e, Fraction(0)) + c
                if clean[e] == 0:
                    del clean[e]
            object.__setattr__(self, "terms", clean)
        else:
            object.__setattr__(self, "terms", dict(items))
        object.__setattr__(self, "vars", vars)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, vars: VarSet) -> "LaurentPoly":
        return cls(vars, {}, _clean=False)

    @classmethod
    def const(cls, vars: VarSet, value) -> "LaurentPoly":
        c = qq(value)
        if c == 0:
            return cls.zero(vars)
        return cls(vars, {(0,) * len(vars): c}, _clean=False)

    @classmethod
    def one(cls, vars: VarSet) -> "LaurentPoly":
        return cls.const(vars, 1)

    @classmethod
    def variable(cls, vars: VarSet, name: str) -> "LaurentPoly":
        exps = [0] * len(vars)
        exps[vars.index(name)] = 1
        return cls(vars, {tuple(exps): Fraction(1)}, _clean=False)

    @classmethod
    def monomial(cls, vars: VarSet, exps: Sequence[int], coeff=1) -> "LaurentPoly":
        return cls(vars, {tuple(exps): qq(coeff)})

    # -- basic structure ----------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        if not self.terms:
            return True
        zero = (0,) * len(self.vars)
        return set(self.terms) == {zero}

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def coeff(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def is_polynomial(self) -> bool:
        """No negative exponents on any variable (Laurent-flagged or not)."""
        return all(all(k >= 0 for k in e) for e in self.terms)

    def terms_sorted(self) -> list[tuple[Expo, Fraction]]:
        """Terms in the canonical order: lexicographically descending."""
        return sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    __hash__ = None

    # -- ring operations ----------------------------------------------

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.vars != self.vars:
                raise VariableMismatch(
                    f"mixed variable sets {self.vars.names} vs {other.vars.names}"
                )
            return other
        return LaurentPoly.const(self.vars, other)

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return LaurentPoly(self.vars, out, _clean=False)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.vars, {e: -c for e, c in self.terms.items()}, _clean=False)

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            c = qq(other)
            if c == 0:
                return LaurentPoly.zero(self.vars)
            return LaurentPoly(
                self.vars, {e: k * c for e, k in self.terms.items()}, _clean=False
            )
        other = self._coerce(other)
        if not self.terms or not other.terms:
            return LaurentPoly.zero(self.vars)
        # Convolve over the integers: per-pair Fraction normalization is the
        # dominant cost on large products, so clear denominators up front and
        # build one Fraction per output term.
        da = math.lcm(*(c.denominator for c in self.terms.values()))
        db = math.lcm(*(c.denominator for c in other.terms.values()))
        ia = [(e, c.numerator * (da // c.denominator)) for e, c in self.terms.items()]
        ib = [(e, c.numerator * (db // c.denominator)) for e, c in other.terms.items()]
        out: dict[Expo, int] = {}
        for e1, c1 in ia:
            for e2, c2 in ib:
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        scale = da * db
        terms = {e: Fraction(v, scale) for e, v in out.items() if v}
        return LaurentPoly(self.vars, terms, _clean=False)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "LaurentPoly":
        c = qq(scalar)
        if c == 0:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self * (Fraction(1) / c)

    def invert_term(self) -> "LaurentPoly":
        """Inverse of a single-term polynomial, when the representation
        allows it (all non-Laurent exponents must be zero)."""
        if len(self.terms) != 1:
            raise NotInvertible(f"not a single term: {self}")
        (e, c), = self.terms.items()
        for pos, k in enumerate(e):
            if k != 0 and not self.vars.laurent[pos]:
                raise NotInvertible(
                    f"cannot invert {self}: {self.vars.names[pos]!r} is not Laurent"
                )
        inv = tuple(-k for k in e)
        return LaurentPoly(self.vars, {inv: Fraction(1) / c}, _clean=False)

    def __pow__(self, k: int) -> "LaurentPoly":
        if not isinstance(k, int):
            raise TypeError("exponent must be an int")
        if k < 0:
            return self.invert_term() ** (-k)
        result = LaurentPoly.one(self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    # -- degrees, orders, derivatives ----------------------------------

    def degree_in(self, name: str) -> int:
        if not self.terms:
            raise ZeroInput("degree of the zero polynomial")
        i = self.vars.index(name)
        return max(e[i] for e in self.terms)

    def order_in(self, name: str) -> int:
        """Smallest exponent of `name` across all terms (x1-adic order
        when name='x1')."""
        if not self.terms:
            raise ZeroInput("order of the zero polynomial")
        i = self.vars.index(name)
        return min(e[i] for e in self.terms)

    def deriv(self, name: str) -> "LaurentPoly":
        i = self.vars.index(name)
        out: dict[Expo, Fraction] = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = e[:i] + (e[i] - 1,) + e[i + 1:]
            s = out.get(ne, Fraction(0)) + c * e[i]
            if s == 0:
                out.pop(ne, None)
            else:
                out[ne] = s
        return LaurentPoly(self.vars, out, _clean=False)

    def eval_at(self, point: Mapping[str, Scalar]) -> Fraction:
        """Total evaluation at rational values (all variables needed)."""
        vals = [qq(point[name]) for name in self.vars.names]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, k in zip(vals, e):
                if k == 0:
                    continue
                if v == 0 and k < 0:
                    raise ZeroDivisionError("negative power of zero in evaluation")
                term *= v ** k
            total += term
        return total

    # -- substitution ---------------------------------------------------

    def subst(self, images: Mapping[str, "LaurentPoly"]) -> "LaurentPoly":
        """Evaluate at polynomial images of the variables.

        Every variable must have an image and all images must share one
        target VarSet.  A variable occurring with negative exponents needs
        an invertible (single-term) image; otherwise NotInvertible.
        """
        target = None
        for name in self.vars.names:
            if name not in images:
                raise VariableMismatch(f"no image supplied for {name!r}")
            img = images[name]
            if target is None:
                target = img.vars
            elif img.vars != target:
                raise VariableMismatch("images live over different variable sets")
        if target is None:  # no variables: impossible given VarSet >= 1
            raise VariableMismatch("empty variable set")
        if not self.terms:
            return LaurentPoly.zero(target)

        cache: dict[tuple[int, int], LaurentPoly] = {}

        def power(idx: int, k: int) -> LaurentPoly:
            got = cache.get((idx, k))
            if got is not None:
                return got
            if k == 1:
                p = images[self.vars.names[idx]]
            elif k == -1:
                p = images[self.vars.names[idx]].invert_term()
            elif k > 1:
                p = power(idx, k - 1) * power(idx, 1)
            else:
                p = power(idx, k + 1) * power(idx, -1)
            cache[(idx, k)] = p
            return p

        acc: dict[Expo, Fraction] = {}
        for e, c in self.terms.items():
            prod = LaurentPoly.const(target, c)
            for idx, k in enumerate(e):
                if k == 0:
                    continue
                prod = prod * power(idx, k)
                if prod.is_zero():
                    break
            for ee, cc in prod.terms.items():
                s = acc.get(ee, Fraction(0)) + cc
                if s == 0:
                    acc.pop(ee, None)
                else:
                    acc[ee] = s
        return LaurentPoly(target, acc, _clean=False)

    def subst_general(self, images: Mapping[str, "RatFunc | LaurentPoly"]) -> "RatFunc":
        """Evaluate at rational-function images (the fully general form).

        Slower than `subst`; negative exponents only need the image to be
        a nonzero rational function.
        """
        coerced: dict[str, RatFunc] = {}
        target = None
        for name in self.vars.names:
            if name not in images:
                raise VariableMismatch(f"no image supplied for {name!r}")
            img = images[name]
            rf = img if isinstance(img, RatFunc) else RatFunc.from_poly(img)
            coerced[name] = rf
            if target is None:
                target = rf.num.vars
            elif rf.num.vars != target:
                raise VariableMismatch("images live over different variable sets")
        total = RatFunc.from_poly(LaurentPoly.zero(target))
        for e, c in self.terms.items():
            term = RatFunc.from_poly(LaurentPoly.const(target, c))
            for name, k in zip(self.vars.names, e):
                if k:
                    term = term * coerced[name] ** k
            total = total + term
        return total

    # -- moving between variable sets ------------------------------------

    def with_vars(self, target: VarSet) -> "LaurentPoly":
        """Re-home onto a VarSet with the same names (possibly laxer flags),
        a superset of names, or a subset that still covers every variable
        actually occurring; exponents are validated against the target."""
        if target == self.vars:
            return self
        used = [False] * len(self.vars)
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = True
        pos = {
            name: target.index(name)
            for i, name in enumerate(self.vars.names)
            if used[i] or name in target.names
        }
        width = len(target)
        out: dict[Expo, Fraction] = {}
        for e, c in self.terms.items():
            ne = [0] * width
            for name, k in zip(self.vars.names, e):
                if k:
                    ne[pos[name]] = k
            out[tuple(ne)] = c
        return LaurentPoly(target, out)

    # -- display ----------------------------------------------------------

    def _format_monomial(self, exps: Expo) -> str:
        parts = []
        for name, k in zip(self.vars.names, exps):
            if k == 0:
                continue
            parts.append(name if k == 1 else f"{name}^{k}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for exps, c in self.terms_sorted():
            mono = self._format_monomial(exps)
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            if not chunks:
                chunks.append(body if c > 0 else f"-{body}")
            else:
                chunks.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(chunks)

    def __repr__(self) -> str:
        return f"<LaurentPoly {self}>"


def to_univar(p: LaurentPoly, name: str) -> dict[int, Fraction]:
    """View a polynomial involving only `name` as {exponent: coefficient}."""
    i = p.vars.index(name)
    out: dict[int, Fraction] = {}
    for e, c in p.terms.items():
        if any(k != 0 for pos, k in enumerate(e) if pos != i):
            raise VariableMismatch(
                f"{p} involves a variable other than {name!r}"
            )
        out[e[i]] = c
    return out


def from_univar(vars: VarSet, name: str, coeffs: Mapping[int, Fraction]) -> LaurentPoly:
    i = vars.index(name)
    width = len(vars)
    terms = {}
    for k, c in coeffs.items():
        e = [0] * width
        e[i] = k
        terms[tuple(e)] = c
    return LaurentPoly(vars, terms)


class RatFunc:
    """Quotient of two Laurent polynomials; equality by cross-multiplication.

    No gcd reduction is attempted — values stay exact and comparisons
    multiply out, which is all the pipeline needs.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly):
        if num.vars != den.vars:
            raise VariableMismatch("numerator and denominator variable sets differ")
        if den.is_zero():
            raise ZeroInput("zero denominator")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("RatFunc is immutable")

    @classmethod
    def from_poly(cls, p: LaurentPoly) -> "RatFunc":
        return cls(p, LaurentPoly.one(p.vars))

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, LaurentPoly):
            return RatFunc.from_poly(other)
        return RatFunc.from_poly(LaurentPoly.const(self.num.vars, other))

    def __eq__(self, other) -> bool:
        if not isinstance(other, (RatFunc, LaurentPoly, int, Fraction)):
            return NotImplemented
        other = self._coerce(other)
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def __add__(self, other) -> "RatFunc":
        other = self._coerce(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other) -> "RatFunc":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RatFunc":
        return (-self) + other

    def __mul__(self, other) -> "RatFunc":
        other = self._coerce(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        other = self._coerce(other)
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __pow__(self, k: int) -> "RatFunc":
        if k >= 0:
            return RatFunc(self.num ** k, self.den ** k)
        if self.num.is_zero():
            raise ZeroDivisionError("negative power of the zero rational function")
        return RatFunc(self.den ** (-k), self.num ** (-k))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __str__(self) -> str:
        if self.den.is_constant() and self.den.constant_term() == 1:
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self) -> str:
        return f"<RatFunc {self}>"


def valuation(q, name: str = "x1") -> int:
    """Adic order at `name`: min exponent for polynomials, extended to
    quotients by v(num/den) = v(num) - v(den).  Requires a nonzero input."""
    if isinstance(q, LaurentPoly):
        return q.order_in(name)
    if isinstance(q, RatFunc):
        if q.num.is_zero():
            raise ZeroInput("valuation of the zero function")
        return q.num.order_in(name) - q.den.order_in(name)
    raise TypeError(f"no valuation for {type(q).__name__}")


class UniPoly:
    """Dense univariate polynomial in an abstract variable, with LaurentPoly
    coefficients (index i holds the coefficient of the i-th power)."""

    __slots__ = ("vars", "coeffs")

    def __init__(self, vars: VarSet, coeffs: Iterable[LaurentPoly] = ()):
        cs = list(coeffs)
        for c in cs:
            if c.vars != vars:
                raise VariableMismatch("coefficient over the wrong variable set")
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "vars", vars)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def zero(cls, vars: VarSet) -> "UniPoly":
        return cls(vars, ())

    @classmethod
    def from_scalars(cls, vars: VarSet, scalars: Sequence) -> "UniPoly":
        return cls(vars, [LaurentPoly.const(vars, s) for s in scalars])

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        if not self.coeffs:
            raise ZeroInput("degree of the zero polynomial")
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> LaurentPoly:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return LaurentPoly.zero(self.vars)

    def leading(self) -> LaurentPoly:
        if not self.coeffs:
            raise ZeroInput("leading coefficient of the zero polynomial")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.leading() == LaurentPoly.one(self.vars)

    def __eq__(self, other) -> bool:
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.vars == other.vars and self.coeffs == other.coeffs

    __hash__ = None

    def __add__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self.vars, [self.coeff(i) + other.coeff(i) for i in range(n)])

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self.vars, [self.coeff(i) - other.coeff(i) for i in range(n)])

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        if self.is_zero() or other.is_zero():
            return UniPoly.zero(self.vars)
        out = [LaurentPoly.zero(self.vars) for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(self.vars, out)

    def scale(self, factor: LaurentPoly) -> "UniPoly":
        return UniPoly(self.vars, [c * factor for c in self.coeffs])

    def shift(self, k: int) -> "UniPoly":
        """Multiply by the k-th power of the abstract variable."""
        if self.is_zero():
            return self
        return UniPoly(self.vars, (LaurentPoly.zero(self.vars),) * k + self.coeffs)

    def divmod_monic(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        """Long division by a monic divisor (exact over any coefficient ring)."""
        if other.is_zero() or not other.is_monic():
            raise NotDivisible("divisor must be monic")
        d = other.degree
        rem = list(self.coeffs)
        quot = [LaurentPoly.zero(self.vars) for _ in range(max(0, len(rem) - d))]
        for top in range(len(rem) - 1, d - 1, -1):
            lead = rem[top]
            if lead.is_zero():
                continue
            quot[top - d] = lead
            for j in range(d + 1):
                rem[top - d + j] = rem[top - d + j] - lead * other.coeff(j)
        return UniPoly(self.vars, quot), UniPoly(self.vars, rem[:d])

    def eval_poly(self, value: LaurentPoly, coeff_images: Mapping[str, LaurentPoly] | None = None) -> LaurentPoly:
        """Horner evaluation at a LaurentPoly value, optionally substituting
        the coefficients' own variables first."""
        acc = LaurentPoly.zero(value.vars)
        for c in reversed(self.coeffs):
            cc = c.subst(coeff_images) if coeff_images is not None else c
            acc = acc * value + cc
        return acc

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})*T^{i}" for i, c in enumerate(self.coeffs) if not c.is_zero())

    def __repr__(self) -> str:
        return f"<UniPoly {self}>"


def _exact_div(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Exact division of multivariate polynomials by leading-term elimination
    (lexicographically largest term).  Raises NotDivisible when the quotient
    would leave the ring."""
    if b.is_zero():
        raise ZeroInput("division by the zero polynomial")
    if b.is_constant():
        return a / b.constant_term()
    if a.is_zero():
        return a
    lead_b = max(b.terms)
    cb = b.terms[lead_b]
    rem = dict(a.terms)
    quot: dict[Expo, Fraction] = {}
    while rem:
        lead_r = max(rem)
        qe = tuple(i - j for i, j in zip(lead_r, lead_b))
        for pos, k in enumerate(qe):
            if k < 0 and not a.vars.laurent[pos]:
                raise NotDivisible(f"{b} does not divide {a}")
        qc = rem[lead_r] / cb
        quot[qe] = quot.get(qe, Fraction(0)) + qc
        for e, c in b.terms.items():
            ne = tuple(i + j for i, j in zip(qe, e))
            s = rem.get(ne, Fraction(0)) - qc * c
            if s == 0:
                rem.pop(ne, None)
            else:
                rem[ne] = s
    return LaurentPoly(a.vars, quot)


def sylvester_matrix(a: UniPoly, b: UniPoly) -> list[list[LaurentPoly]]:
    """The (deg a + deg b)-square Sylvester matrix, coefficients descending."""
    if a.is_zero() or b.is_zero():
        raise ZeroInput("Sylvester matrix of a zero polynomial")
    m, n = a.degree, b.degree
    if m == 0 or n == 0:
        raise ZeroInput("Sylvester matrix needs two positive-degree inputs")
    size = m + n
    zero = LaurentPoly.zero(a.vars)
    rows = []
    a_desc = [a.coeff(m - i) for i in range(m + 1)]
    b_desc = [b.coeff(n - i) for i in range(n + 1)]
    for i in range(n):
        rows.append([zero] * i + a_desc + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + b_desc + [zero] * (size - n - 1 - i))
    return rows


def determinant_fraction_free(matrix: list[list[LaurentPoly]], vars: VarSet) -> LaurentPoly:
    """Bareiss one-step fraction-free elimination; every division is exact."""
    n = len(matrix)
    if n == 0:
        return LaurentPoly.one(vars)
    a = [row[:] for row in matrix]
    sign = 1
    prev = LaurentPoly.one(vars)
    for k in range(n - 1):
        if a[k][k].is_zero():
            for r in range(k + 1, n):
                if not a[r][k].is_zero():
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return LaurentPoly.zero(vars)
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * pivot - a[i][k] * a[k][j]
                a[i][j] = _exact_div(num, prev)
            a[i][k] = LaurentPoly.zero(vars)
        prev = pivot
    det = a[n - 1][n - 1]
    return det if sign == 1 else -det


def resultant(a: UniPoly, b: UniPoly) -> LaurentPoly:
    """Resultant of two univariate polynomials over a common coefficient ring.

    Degenerate degrees follow the usual conventions: res(a0, b) = a0^deg(b),
    res(a, b0) = b0^deg(a), and res of two constants is 1.
    """
    if a.is_zero() or b.is_zero():
        raise ZeroInput("resultant of a zero polynomial")
    if a.vars != b.vars:
        raise VariableMismatch("resultant operands over different variable sets")
    m, n = a.degree, b.degree
    if m == 0 and n == 0:
        return LaurentPoly.one(a.vars)
    if m == 0:
        return a.coeff(0) ** n
    if n == 0:
        return b.coeff(0) ** m
    return determinant_fraction_free(sylvester_matrix(a, b), a.vars)
