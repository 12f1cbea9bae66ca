"""Class groups of curves over p-adic fields.

Local-field arithmetic, elliptic-curve torsion over ramified cyclotomic
extensions, formal groups, the mod-p Hilbert symbol, and the structure
of the finite part of the class group, with a census pipeline over
elliptic-curve tables.
"""

__version__ = "0.1.0"

from .abgroup import AbGroup
from .curves import (
    CurvePoint,
    WeierstrassCurve,
    division_polynomial,
    fq_group_structure,
    fq_point_count,
    full_torsion_level,
    good_ordinary_at,
    has_full_p_torsion,
    p_torsion_points,
)
from .exceptions import DataError, IntegrityError, PrecisionError
from .formal import FormalGroupLaw, formal_mod_p_dim, formal_torsion_points
from .padic import (
    KElem,
    KPoly,
    LocalField,
    Qp,
    ResidueField,
    cyclotomic_field,
    hensel_roots,
    is_pth_power,
    is_square,
    ksqrt,
    pexp,
    plog,
    teichmuller,
    trace_and_norm,
    unramified_field,
)
from .structure import (
    ConditionsReport,
    albanese_kernel_mod,
    check_conditions,
    class_group_finite_part,
    class_group_mod,
    class_group_prime_to_p,
    kummer_image_dims,
)
from .symbols import (
    SubspaceModP,
    UnitsModP,
    annihilator,
    hilbert_symbol,
    subgroup_Ubar,
    subgroup_V,
    units_mod_p,
)

__all__ = [name for name in dir() if not name.startswith("_")]
