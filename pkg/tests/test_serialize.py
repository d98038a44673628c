"""Canonical JSON encoding: exact round trips, byte-stable output, and
strict validation errors on malformed input."""

import json
import random
from fractions import Fraction

import pytest

from h14cert import (
    Derivation,
    FGPoly,
    FormatError,
    LaurentPoly,
    PermGroupSpec,
    Report,
    UniPoly,
    WitnessPack,
    build_certificate,
    certificate_from_json,
    certificate_to_json,
    compose,
    derivation_from_json,
    derivation_to_json,
    dumps,
    fgpoly_from_json,
    fgpoly_to_json,
    frac_from_str,
    frac_to_str,
    group_from_json,
    group_to_json,
    invariant_witness_pack,
    inversion_map,
    load_json_file,
    mul_map,
    pack_from_json,
    pack_to_json,
    perm_action,
    poly_from_json,
    poly_to_json,
    report_from_json,
    report_to_json,
    ringmap_from_json,
    ringmap_to_json,
    shear_map,
    translation_map,
    unipoly_from_json,
    unipoly_to_json,
    validate_pack,
    verify_certificate,
    write_json_file,
    x_vars,
    xz_vars,
    y_coords,
)
from h14cert.maps import axis_map
from h14cert.witness import resolve_pack_fields
from genutil import random_poly

V2 = x_vars(2)
X1 = LaurentPoly.variable(V2, "x1")
X2 = LaurentPoly.variable(V2, "x2")

SWAP = PermGroupSpec(2, ((2, 1),))


def test_fraction_strings():
    assert frac_to_str(Fraction(3, 4)) == "3/4"
    assert frac_to_str(Fraction(-5)) == "-5"
    assert frac_from_str("3/4") == Fraction(3, 4)
    assert frac_from_str("-5") == Fraction(-5)
    assert frac_from_str(7) == Fraction(7)
    for bad in ("abc", "1/0", "1.5", None, 2.5):
        with pytest.raises(FormatError):
            frac_from_str(bad)


def test_poly_roundtrip_random():
    rng = random.Random(12)
    for vars in (V2, xz_vars(2), x_vars(3)):
        for _ in range(25):
            p = random_poly(rng, vars, exp_lo=-2)
            obj = poly_to_json(p)
            assert poly_from_json(obj) == p
            # byte-stable: encode(decode(encode)) == encode
            assert dumps(poly_to_json(poly_from_json(obj))) == dumps(obj)


def test_poly_terms_sorted_descending():
    p = X2 + X1 + X1 * X2
    obj = poly_to_json(p)
    assert [t["e"] for t in obj["terms"]] == [[1, 1], [1, 0], [0, 1]]
    assert obj["vars"] == ["x1", "x2"]
    assert obj["laurent"] == ["x1"]


def test_poly_from_json_rejects_malformed():
    good = poly_to_json(X1 + X2)
    cases = []
    c = json.loads(json.dumps(good)); del c["vars"]; cases.append(c)
    c = json.loads(json.dumps(good)); c["terms"][0]["e"] = [1]; cases.append(c)
    c = json.loads(json.dumps(good)); c["terms"][0]["c"] = "x"; cases.append(c)
    c = json.loads(json.dumps(good)); c["terms"].append(c["terms"][0]); cases.append(c)
    c = json.loads(json.dumps(good)); c["laurent"] = ["zz"]; cases.append(c)
    c = json.loads(json.dumps(good)); c["laurent"] = []; c["terms"][0]["e"] = [-1, 0]
    cases.append(c)
    c = json.loads(json.dumps(good)); c["terms"][0]["e"] = [1, True]; cases.append(c)
    for broken in cases:
        with pytest.raises(FormatError):
            poly_from_json(broken)
    with pytest.raises(FormatError):
        poly_from_json([1, 2, 3])


def test_unipoly_roundtrip():
    P = UniPoly(V2, [X2, X1, LaurentPoly.one(V2)])
    obj = unipoly_to_json(P)
    assert unipoly_from_json(obj) == P
    assert isinstance(obj, list) and len(obj) == 3
    with pytest.raises(FormatError):
        unipoly_from_json({"not": "a list"})
    mixed = [poly_to_json(X1), poly_to_json(LaurentPoly.variable(x_vars(3), "x3"))]
    with pytest.raises(FormatError):
        unipoly_from_json(mixed)


def test_fgpoly_roundtrip():
    p = FGPoly({(2, 1, -3): Fraction(5, 7), (0, 0, 1): Fraction(-1)})
    obj = fgpoly_to_json(p)
    assert fgpoly_from_json(obj) == p
    assert [t["e"] for t in obj["terms"]] == [[2, 1, -3], [0, 0, 1]]
    with pytest.raises(FormatError):
        fgpoly_from_json({"terms": [{"e": [1, 0], "c": "1"}]})
    with pytest.raises(FormatError):
        fgpoly_from_json({"terms": [{"e": [-1, 0, 0], "c": "1"}]})


def test_ringmap_roundtrips_every_kind():
    theta = inversion_map((5,), LaurentPoly.variable(xz_vars(2), "x1"))
    maps = [
        theta,
        axis_map(3),
        axis_map(2, with_z=True),
        translation_map([1, Fraction(1, 2)]),
        mul_map(2),
        shear_map(Fraction(2, 3), -1),
        perm_action((2, 1), y_coords(2)),
        compose(shear_map(1, 0), translation_map([2, 3])),
    ]
    for m in maps:
        obj = ringmap_to_json(m)
        back = ringmap_from_json(obj)
        assert back == m, obj["kind"]
        assert dumps(ringmap_to_json(back)) == dumps(obj)
    generic = ringmap_from_json({"kind": "generic",
                                 "images": [poly_to_json(X1 + X2), poly_to_json(X2)]})
    assert generic.images == (X1 + X2, X2)


def test_ringmap_stored_images_cross_checked():
    theta = inversion_map((5,), LaurentPoly.variable(xz_vars(2), "x1"))
    obj = ringmap_to_json(theta)
    obj["images"][0] = poly_to_json(LaurentPoly.variable(xz_vars(2), "x1"))
    with pytest.raises(FormatError):
        ringmap_from_json(obj)
    with pytest.raises(FormatError):
        ringmap_from_json({"kind": "mystery"})


def test_pack_roundtrip_wire_keys():
    pack = invariant_witness_pack(SWAP)
    resolved, _ = validate_pack(pack)
    full = resolve_pack_fields(pack, resolved)
    obj = pack_to_json(full)
    assert set(obj) == {"n", "R_gens", "f", "g", "h", "Pi", "t", "e",
                        "f_expr", "g_expr"}
    back = pack_from_json(obj)
    assert back == full
    assert dumps(pack_to_json(back)) == dumps(obj)
    # minimal pack: derived keys absent
    bare = pack_to_json(pack)
    assert "h" not in bare and "Pi" not in bare and "t" not in bare
    assert pack_from_json(bare) == pack


def test_pack_from_json_rejects_malformed():
    obj = pack_to_json(invariant_witness_pack(SWAP))
    c = json.loads(json.dumps(obj)); c["n"] = True
    with pytest.raises(FormatError):
        pack_from_json(c)
    c = json.loads(json.dumps(obj)); del c["R_gens"]
    with pytest.raises(FormatError):
        pack_from_json(c)
    c = json.loads(json.dumps(obj)); c["t"] = ["5"]
    with pytest.raises(FormatError):
        pack_from_json(c)


def test_report_roundtrip():
    rep = Report()
    rep.add("first", True, "fine")
    rep.add("second", False, "broken")
    obj = report_to_json(rep)
    assert obj["ok"] is False
    back = report_from_json(obj)
    assert [c.name for c in back.checks] == ["first", "second"]
    assert not back.ok
    assert back["second"].detail == "broken"


def test_certificate_roundtrip_byte_identical():
    cert = build_certificate(invariant_witness_pack(SWAP), l_max=2)
    obj = certificate_to_json(cert)
    text = dumps(obj)
    back = certificate_from_json(json.loads(text))
    assert dumps(certificate_to_json(back)) == text
    assert back.pack == cert.pack
    assert back.rel == cert.rel
    assert [e.l for e in back.entries] == [0, 1, 2]
    assert back.entries[2].q == cert.entries[2].q
    # a round-tripped certificate still verifies
    rep = verify_certificate(back)
    assert rep.ok


def test_certificate_wire_keys():
    cert = build_certificate(invariant_witness_pack(SWAP), l_max=1)
    obj = certificate_to_json(cert)
    assert set(obj) == {"witness", "pi", "d", "e", "entries", "report"}
    assert obj["d"] == 2 and obj["e"] == 3
    assert {"l", "fvec", "q"} == set(obj["entries"][0])
    with pytest.raises(FormatError):
        certificate_from_json({"witness": obj["witness"]})


def test_group_and_derivation_roundtrip():
    grp = PermGroupSpec(3, ((2, 3, 1), (2, 1, 3)))
    assert group_from_json(group_to_json(grp)) == grp
    with pytest.raises(FormatError):
        group_from_json({"n": 3, "generators": [[1, 1, 2]]})
    D = Derivation(2, (LaurentPoly.zero(V2), X1), kernel_gens=(X1,))
    back = derivation_from_json(derivation_to_json(D))
    assert back == D
    bare = Derivation(2, (LaurentPoly.zero(V2), X1))
    assert "kernel_gens" not in derivation_to_json(bare)
    with pytest.raises(FormatError):
        derivation_from_json({"n": 2, "images": [poly_to_json(X1)]})


def test_file_helpers(tmp_path):
    path = tmp_path / "value.json"
    write_json_file(str(path), poly_to_json(X1 + X2))
    assert poly_from_json(load_json_file(str(path))) == X1 + X2
    assert path.read_text().endswith("\n")
    with pytest.raises(FormatError):
        load_json_file(str(tmp_path / "absent.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(FormatError):
        load_json_file(str(bad))
