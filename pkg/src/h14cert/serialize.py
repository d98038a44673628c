"""Canonical JSON encoding for every value the pipeline exchanges.

Encoding rules: rationals as "num/den" strings (plain integers allowed),
terms in lexicographically descending exponent order, dictionaries built
in a fixed key order.  Round-tripping any value reproduces it exactly,
and serializing twice yields byte-identical text.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .algebra import LaurentPoly, UniPoly, VarSet
from .constructions import Derivation, PermGroupSpec
from .errors import FormatError, VariableMismatch
from .family import CertEntry, Certificate, FGPoly
from .maps import (
    RingMap,
    axis_map,
    inversion_map,
    mul_map,
    perm_action,
    shear_map,
    translation_map,
)
from .report import Check, Report
from .witness import G_VARS, WitnessPack


def frac_to_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def frac_from_str(s) -> Fraction:
    if isinstance(s, int) and not isinstance(s, bool):
        return Fraction(s)
    if not isinstance(s, str):
        raise FormatError(f"rational must be a string or int, got {type(s).__name__}")
    if not re.fullmatch(r"-?\d+(/-?\d+)?", s):
        raise FormatError(f"bad rational {s!r}: expected 'num' or 'num/den'")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise FormatError(f"bad rational {s!r}: zero denominator") from None


def _require(cond: bool, message: str):
    if not cond:
        raise FormatError(message)


def _get(obj: dict, key: str, kind, where: str):
    _require(isinstance(obj, dict), f"{where}: expected an object")
    _require(key in obj, f"{where}: missing key {key!r}")
    value = obj[key]
    if kind is int:
        _require(isinstance(value, int) and not isinstance(value, bool),
                 f"{where}.{key}: expected an integer")
    elif kind is not None:
        _require(isinstance(value, kind), f"{where}.{key}: wrong type")
    return value


def _all_ints(values) -> bool:
    return all(isinstance(v, int) and not isinstance(v, bool) for v in values)


# -- polynomials -------------------------------------------------------------


def poly_to_json(p: LaurentPoly) -> dict:
    return {
        "vars": list(p.vars.names),
        "laurent": [n for n, flag in zip(p.vars.names, p.vars.laurent) if flag],
        "terms": [
            {"e": list(e), "c": frac_to_str(c)} for e, c in p.terms_sorted()
        ],
    }


def poly_from_json(obj: Any, where: str = "poly") -> LaurentPoly:
    names = _get(obj, "vars", list, where)
    _require(all(isinstance(n, str) for n in names), f"{where}.vars: names must be strings")
    flagged = obj.get("laurent", [])
    _require(isinstance(flagged, list), f"{where}.laurent: expected a list")
    _require(set(flagged) <= set(names), f"{where}.laurent: unknown variable name")
    try:
        vars = VarSet(tuple(names), tuple(n in flagged for n in names))
    except VariableMismatch as exc:
        raise FormatError(f"{where}: {exc}") from None
    terms = {}
    for i, item in enumerate(_get(obj, "terms", list, where)):
        e = _get(item, "e", list, f"{where}.terms[{i}]")
        _require(len(e) == len(names) and _all_ints(e),
                 f"{where}.terms[{i}].e: expected {len(names)} integers")
        c = frac_from_str(_get(item, "c", None, f"{where}.terms[{i}]"))
        key = tuple(e)
        _require(key not in terms, f"{where}.terms[{i}]: duplicate exponent {e}")
        terms[key] = c
    try:
        return LaurentPoly(vars, terms)
    except VariableMismatch as exc:
        raise FormatError(f"{where}: {exc}") from None


def unipoly_to_json(P: UniPoly) -> list:
    return [poly_to_json(c) for c in P.coeffs]


def unipoly_from_json(obj: Any, where: str = "unipoly") -> UniPoly:
    _require(isinstance(obj, list), f"{where}: expected a list of coefficients")
    coeffs = [poly_from_json(c, f"{where}[{i}]") for i, c in enumerate(obj)]
    vars = coeffs[0].vars if coeffs else G_VARS
    try:
        return UniPoly(vars, coeffs)
    except VariableMismatch as exc:
        raise FormatError(f"{where}: {exc}") from None


def fgpoly_to_json(p: FGPoly) -> dict:
    return {
        "terms": [
            {"e": list(e), "c": frac_to_str(c)} for e, c in p.terms_sorted()
        ]
    }


def fgpoly_from_json(obj: Any, where: str = "fgpoly") -> FGPoly:
    terms = {}
    for i, item in enumerate(_get(obj, "terms", list, where)):
        e = _get(item, "e", list, f"{where}.terms[{i}]")
        _require(len(e) == 3 and _all_ints(e),
                 f"{where}.terms[{i}].e: expected three integers")
        c = frac_from_str(_get(item, "c", None, f"{where}.terms[{i}]"))
        key = tuple(e)
        _require(key not in terms, f"{where}.terms[{i}]: duplicate exponent {e}")
        terms[key] = c
    try:
        return FGPoly(terms)
    except VariableMismatch as exc:
        raise FormatError(f"{where}: {exc}") from None


# -- ring maps ---------------------------------------------------------------


def ringmap_to_json(m: RingMap) -> dict:
    out: dict[str, Any] = {"kind": m.kind}
    if m.kind == "theta":
        out["t"] = list(m.params["t"])
        out["h"] = poly_to_json(m.params["h"])
        out["with_z"] = bool(m.params["with_z"])
    elif m.kind == "epsilon":
        out["n"] = m.params["n"]
        out["with_z"] = bool(m.params["with_z"])
    elif m.kind == "translation":
        out["a"] = [frac_to_str(c) for c in m.params["a"]]
    elif m.kind == "rho":
        out["n"] = m.params["n"]
    elif m.kind == "psi":
        out["alpha"] = frac_to_str(m.params["alpha"])
        out["beta"] = frac_to_str(m.params["beta"])
        out["n"] = m.params["n"]
    elif m.kind == "permutation":
        out["perm"] = list(m.params["perm"])
    elif m.kind == "composite":
        outer, inner = m.params["factors"]
        out["factors"] = [ringmap_to_json(outer), ringmap_to_json(inner)]
    out["images"] = [poly_to_json(img) for img in m.images]
    return out


def ringmap_from_json(obj: Any, where: str = "ringmap") -> RingMap:
    kind = _get(obj, "kind", str, where)
    if kind == "theta":
        t = _get(obj, "t", list, where)
        _require(_all_ints(t), f"{where}.t: integers required")
        h = poly_from_json(_get(obj, "h", dict, where), f"{where}.h")
        m = inversion_map(t, h, with_z=bool(obj.get("with_z", True)))
    elif kind == "epsilon":
        m = axis_map(_get(obj, "n", int, where), with_z=bool(obj.get("with_z", False)))
    elif kind == "translation":
        m = translation_map([frac_from_str(v) for v in _get(obj, "a", list, where)])
    elif kind == "rho":
        m = mul_map(_get(obj, "n", int, where))
    elif kind == "psi":
        m = shear_map(frac_from_str(_get(obj, "alpha", None, where)),
                      frac_from_str(_get(obj, "beta", None, where)),
                      _get(obj, "n", int, where))
    elif kind == "permutation":
        from .constructions import y_coords
        perm = _get(obj, "perm", list, where)
        m = perm_action(perm, y_coords(len(perm)))
    elif kind == "composite":
        factors = _get(obj, "factors", list, where)
        _require(len(factors) == 2, f"{where}.factors: expected two maps")
        from .maps import compose
        m = compose(ringmap_from_json(factors[0], f"{where}.factors[0]"),
                    ringmap_from_json(factors[1], f"{where}.factors[1]"))
    elif kind == "generic":
        images = [poly_from_json(p, f"{where}.images[{i}]")
                  for i, p in enumerate(_get(obj, "images", list, where))]
        _require(bool(images), f"{where}: generic map needs images")
        m = RingMap(images[0].vars, images)
        return m
    else:
        raise FormatError(f"{where}: unknown map kind {kind!r}")
    stored = obj.get("images")
    if stored is not None:
        claimed = [poly_from_json(p, f"{where}.images[{i}]")
                   for i, p in enumerate(stored)]
        _require(list(m.images) == claimed,
                 f"{where}: stored images disagree with the declared parameters")
    return m


# -- witness packs and certificates -------------------------------------------


def pack_to_json(pack: WitnessPack) -> dict:
    out: dict[str, Any] = {
        "n": pack.n,
        "R_gens": [poly_to_json(p) for p in pack.gens],
        "f": poly_to_json(pack.f),
        "g": poly_to_json(pack.g),
    }
    if pack.h is not None:
        out["h"] = poly_to_json(pack.h)
    if pack.ann is not None:
        out["Pi"] = unipoly_to_json(pack.ann)
    if pack.weights is not None:
        out["t"] = list(pack.weights)
    if pack.clearing is not None:
        out["e"] = pack.clearing
    if pack.f_expr is not None:
        out["f_expr"] = poly_to_json(pack.f_expr)
    if pack.g_expr is not None:
        out["g_expr"] = poly_to_json(pack.g_expr)
    return out


def pack_from_json(obj: Any, where: str = "witness") -> WitnessPack:
    n = _get(obj, "n", int, where)
    gens = [poly_from_json(p, f"{where}.R_gens[{i}]")
            for i, p in enumerate(_get(obj, "R_gens", list, where))]
    pack = WitnessPack(
        n=n,
        gens=gens,
        f=poly_from_json(_get(obj, "f", dict, where), f"{where}.f"),
        g=poly_from_json(_get(obj, "g", dict, where), f"{where}.g"),
    )
    if "h" in obj:
        pack.h = poly_from_json(obj["h"], f"{where}.h")
    if "Pi" in obj:
        pack.ann = unipoly_from_json(obj["Pi"], f"{where}.Pi")
    if "t" in obj:
        t = obj["t"]
        _require(isinstance(t, list) and _all_ints(t),
                 f"{where}.t: expected a list of integers")
        pack.weights = tuple(t)
    if "e" in obj:
        pack.clearing = _get(obj, "e", int, where)
    if "f_expr" in obj:
        pack.f_expr = poly_from_json(obj["f_expr"], f"{where}.f_expr")
    if "g_expr" in obj:
        pack.g_expr = poly_from_json(obj["g_expr"], f"{where}.g_expr")
    return pack


def report_to_json(report: Report) -> dict:
    return {
        "ok": report.ok,
        "checks": [
            {"name": c.name, "ok": c.ok, "detail": c.detail} for c in report.checks
        ],
    }


def report_from_json(obj: Any, where: str = "report") -> Report:
    rep = Report()
    for i, item in enumerate(_get(obj, "checks", list, where)):
        rep.checks.append(Check(
            name=_get(item, "name", str, f"{where}.checks[{i}]"),
            ok=bool(_get(item, "ok", bool, f"{where}.checks[{i}]")),
            detail=item.get("detail", ""),
        ))
    return rep


def certificate_to_json(cert: Certificate) -> dict:
    out: dict[str, Any] = {
        "witness": pack_to_json(cert.pack),
        "pi": poly_to_json(cert.rel),
        "d": cert.d,
        "e": cert.clearing,
        "entries": [
            {
                "l": entry.l,
                "fvec": [fgpoly_to_json(t) for t in entry.tails],
                "q": poly_to_json(entry.q),
            }
            for entry in cert.entries
        ],
    }
    if cert.report is not None:
        out["report"] = report_to_json(cert.report)
    return out


def certificate_from_json(obj: Any, where: str = "certificate") -> Certificate:
    pack = pack_from_json(_get(obj, "witness", dict, where), f"{where}.witness")
    entries = []
    for i, item in enumerate(_get(obj, "entries", list, where)):
        entries.append(CertEntry(
            l=_get(item, "l", int, f"{where}.entries[{i}]"),
            tails=[fgpoly_from_json(t, f"{where}.entries[{i}].fvec[{j}]")
                   for j, t in enumerate(_get(item, "fvec", list, f"{where}.entries[{i}]"))],
            q=poly_from_json(_get(item, "q", dict, f"{where}.entries[{i}]"),
                             f"{where}.entries[{i}].q"),
        ))
    cert = Certificate(
        pack=pack,
        rel=poly_from_json(_get(obj, "pi", dict, where), f"{where}.pi"),
        d=_get(obj, "d", int, where),
        clearing=_get(obj, "e", int, where),
        entries=entries,
    )
    if "report" in obj:
        cert.report = report_from_json(obj["report"], f"{where}.report")
    return cert


# -- constructions -------------------------------------------------------------


def group_to_json(group: PermGroupSpec) -> dict:
    return {"n": group.n, "generators": [list(g) for g in group.generators]}


def group_from_json(obj: Any, where: str = "group") -> PermGroupSpec:
    n = _get(obj, "n", int, where)
    gens = []
    for i, g in enumerate(_get(obj, "generators", list, where)):
        _require(isinstance(g, list) and _all_ints(g),
                 f"{where}.generators[{i}]: expected a list of integers")
        gens.append(tuple(g))
    try:
        return PermGroupSpec(n=n, generators=tuple(gens))
    except VariableMismatch as exc:
        raise FormatError(f"{where}: {exc}") from None


def derivation_to_json(D: Derivation) -> dict:
    out = {"n": D.n, "images": [poly_to_json(p) for p in D.images]}
    if D.kernel_gens:
        out["kernel_gens"] = [poly_to_json(p) for p in D.kernel_gens]
    return out


def derivation_from_json(obj: Any, where: str = "derivation") -> Derivation:
    n = _get(obj, "n", int, where)
    images = [poly_from_json(p, f"{where}.images[{i}]")
              for i, p in enumerate(_get(obj, "images", list, where))]
    kernel = [poly_from_json(p, f"{where}.kernel_gens[{i}]")
              for i, p in enumerate(obj.get("kernel_gens", []))]
    try:
        return Derivation(n=n, images=tuple(images), kernel_gens=tuple(kernel))
    except VariableMismatch as exc:
        raise FormatError(f"{where}: {exc}") from None


# -- file helpers ---------------------------------------------------------------


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def load_json_file(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON: {exc}") from None


def write_json_file(path: str, obj: Any):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))
