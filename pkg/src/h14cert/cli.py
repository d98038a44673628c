"""Command-line front end.

Exit codes: 0 on success, 2 when a mathematical check fails, 3 on
malformed input.  All output is deterministic for fixed inputs.
"""

from __future__ import annotations

import argparse
import sys

from .constructions import PermGroupSpec, invariant_witness_pack, orbit_sum
from .errors import (
    AlgebraError,
    ConstructionFailure,
    FormatError,
    UnsupportedCase,
    WitnessInvalid,
)
from .family import build_certificate, verify_certificate
from .report import format_report
from .serialize import (
    certificate_from_json,
    certificate_to_json,
    group_from_json,
    load_json_file,
    pack_from_json,
    poly_to_json,
    write_json_file,
)
from .witness import (
    DEFAULT_MEMBER_BOUND,
    DEFAULT_SEMIGROUP_BOUND,
    validate_pack,
)

DEFAULT_LMAX = 8


def _add_bound_options(p: argparse.ArgumentParser):
    p.add_argument("--bound", type=int, default=DEFAULT_SEMIGROUP_BOUND,
                   help="order bound for the semigroup table")
    p.add_argument("--member-bound", type=int, default=DEFAULT_MEMBER_BOUND,
                   help="degree bound for the subring membership scan")


def cmd_demo(args) -> int:
    group = PermGroupSpec(n=2, generators=((2, 1),))
    pack = invariant_witness_pack(group)
    weights = (args.t2,) if args.t2 is not None else None
    try:
        cert = build_certificate(
            pack, l_max=args.lmax, weights_override=weights,
            semigroup_bound=args.bound, member_bound=args.member_bound,
        )
    except WitnessInvalid as exc:
        if exc.report is not None:
            print(format_report(exc.report))
        print(f"witness rejected: {exc}", file=sys.stderr)
        return 2

    resolved, _ = validate_pack(pack, weights_override=weights,
                                semigroup_bound=args.bound,
                                member_bound=args.member_bound)
    twist = resolved.twist
    pair = orbit_sum(group, (1, 1)).with_vars(twist.vars)
    print("generators of the twisted invariant algebra:")
    print(f"  image of orbit(y1)    = {twist.apply(resolved.g_xz)}")
    print(f"  image of orbit(y1*y2) = {twist.apply(pair)}")
    print(f"  image of z            = {twist.image_of('z')}")
    print()
    print(format_report(cert.report))
    write_json_file(args.out, certificate_to_json(cert))
    print(f"certificate written to {args.out}")
    return 0


def cmd_witness_check(args) -> int:
    pack = pack_from_json(load_json_file(args.file))
    _, report = validate_pack(pack, semigroup_bound=args.bound,
                              member_bound=args.member_bound)
    print(format_report(report))
    return 0 if report.ok else 2


def cmd_cert_build(args) -> int:
    pack = pack_from_json(load_json_file(args.file))
    weights = tuple(args.t) if args.t else None
    try:
        cert = build_certificate(
            pack, l_max=args.lmax, weights_override=weights,
            semigroup_bound=args.bound, member_bound=args.member_bound,
        )
    except WitnessInvalid as exc:
        if exc.report is not None:
            print(format_report(exc.report))
        print(f"witness rejected: {exc}", file=sys.stderr)
        return 2
    print(format_report(cert.report))
    write_json_file(args.out, certificate_to_json(cert))
    print(f"certificate written to {args.out}")
    return 0


def cmd_cert_verify(args) -> int:
    cert = certificate_from_json(load_json_file(args.file))
    report = verify_certificate(cert, semigroup_bound=args.bound,
                                member_bound=args.member_bound)
    print(format_report(report))
    return 0 if report.ok else 2


def cmd_invariants(args) -> int:
    from .constructions import invariant_generators

    spec = args.group
    if spec.strip().startswith("{"):
        import json as _json
        try:
            obj = _json.loads(spec)
        except ValueError as exc:
            raise FormatError(f"inline group spec is not valid JSON: {exc}") from None
    else:
        obj = load_json_file(spec)
    group = group_from_json(obj)
    gens = invariant_generators(group, args.degree)
    if args.json:
        from .serialize import dumps
        print(dumps([poly_to_json(p) for p in gens]), end="")
    else:
        for p in gens:
            print(p)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="h14cert",
        description="Build and verify certificates for non-finitely-generated "
                    "intermediate invariant algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_demo = sub.add_parser("demo", help="run the built-in two-variable example")
    p_demo.add_argument("--lmax", type=int, default=DEFAULT_LMAX)
    p_demo.add_argument("--t2", type=int, default=None,
                        help="override the weight of x2 under the twist")
    p_demo.add_argument("--out", default="demo_certificate.json")
    _add_bound_options(p_demo)
    p_demo.set_defaults(func=cmd_demo)

    p_witness = sub.add_parser("witness", help="witness pack operations")
    w_sub = p_witness.add_subparsers(dest="witness_command", required=True)
    p_wcheck = w_sub.add_parser("check", help="validate a witness pack file")
    p_wcheck.add_argument("file")
    _add_bound_options(p_wcheck)
    p_wcheck.set_defaults(func=cmd_witness_check)

    p_cert = sub.add_parser("cert", help="certificate operations")
    c_sub = p_cert.add_subparsers(dest="cert_command", required=True)
    p_cbuild = c_sub.add_parser("build", help="build a certificate from a pack file")
    p_cbuild.add_argument("file")
    p_cbuild.add_argument("--lmax", type=int, default=DEFAULT_LMAX)
    p_cbuild.add_argument("--t", type=int, nargs="+", default=None,
                          help="weight vector override (one value per xi, i >= 2)")
    p_cbuild.add_argument("--out", default="certificate.json")
    _add_bound_options(p_cbuild)
    p_cbuild.set_defaults(func=cmd_cert_build)
    p_cverify = c_sub.add_parser("verify", help="re-verify a certificate file")
    p_cverify.add_argument("file")
    _add_bound_options(p_cverify)
    p_cverify.set_defaults(func=cmd_cert_verify)

    p_inv = sub.add_parser("invariants",
                           help="orbit-sum generators of a permutation-invariant ring")
    p_inv.add_argument("--group", required=True,
                       help="path to a group spec file, or inline JSON")
    p_inv.add_argument("--degree", type=int, required=True)
    p_inv.add_argument("--json", action="store_true",
                       help="emit the generator list as JSON")
    p_inv.set_defaults(func=cmd_invariants)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 3
    except (WitnessInvalid, ConstructionFailure, UnsupportedCase, AlgebraError) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
