"""Exact construction and verification of certificates for
non-finitely-generated intermediate invariant algebras.

The pipeline: an invariant subring with a distinguished pair (f, g) is
collapsed onto the x1-axis, the quotient h and the monic annihilator of
the collapsed pair are derived, an x1-inversion twist with suitable
weights is built, and a family of honest polynomials q_0, q_1, ... is
produced whose membership data is bundled into a machine-checkable
certificate.  Everything is exact rational arithmetic.
"""

from .algebra import (
    LaurentPoly,
    RatFunc,
    UniPoly,
    VarSet,
    determinant_fraction_free,
    from_univar,
    plain_vars,
    qq,
    resultant,
    sylvester_matrix,
    to_univar,
    valuation,
    x_vars,
    xz_vars,
)
from .constructions import (
    Derivation,
    PermGroupSpec,
    apply_derivation,
    check_involution,
    find_preslice,
    invariant_generators,
    invariant_witness_pack,
    is_locally_nilpotent,
    orbit_sum,
    preslice_involution,
    y_coords,
)
from .errors import (
    AlgebraError,
    ConstructionFailure,
    FormatError,
    NotDivisible,
    NotInvertible,
    UnsupportedCase,
    VariableMismatch,
    WitnessInvalid,
    ZeroInput,
)
from .family import (
    CertEntry,
    Certificate,
    FGPoly,
    annihilator_in_fg,
    build_certificate,
    decompose,
    realize,
    realize_fg,
    reduce_by_annihilator,
    tail_at_ratio,
    tail_coefficients,
    tail_upoly,
    taylor_shift_check,
    verify_certificate,
    witness_poly,
)
from .maps import (
    RingMap,
    axis_map,
    compose,
    identity_map,
    inversion_map,
    inversion_map_inverse,
    mul_map,
    perm_action,
    shear_map,
    translation_map,
)
from .report import Check, Report, format_report
from .serialize import (
    certificate_from_json,
    certificate_to_json,
    derivation_from_json,
    derivation_to_json,
    dumps,
    fgpoly_from_json,
    fgpoly_to_json,
    frac_from_str,
    frac_to_str,
    group_from_json,
    group_to_json,
    load_json_file,
    pack_from_json,
    pack_to_json,
    poly_from_json,
    poly_to_json,
    report_from_json,
    report_to_json,
    ringmap_from_json,
    ringmap_to_json,
    unipoly_from_json,
    unipoly_to_json,
    write_json_file,
)
from .witness import (
    Resolved,
    SemigroupTable,
    TwistCheck,
    WitnessPack,
    axis_quotient,
    build_annihilator,
    check_twist,
    choose_weights,
    clearing_exponent,
    is_normal,
    jacobian_rank_at,
    linear_part,
    realize_annihilator,
    resolve_pack_fields,
    semigroup_orders,
    subalgebra_member,
    validate_pack,
)

__version__ = "0.1.0"
