"""Exact integral-lattice toolkit for K3-type period computations."""

from .catalog import ENTRIES, CatalogEntry, get_entry, lattice_from_expr, parse_expr, validate_catalog
from .config import Config, get_config, load_config
from .embedding import (
    EmbeddingMap,
    find_primitive_embedding,
    invariants_match,
    isometric_definite,
    orthogonal_complement,
    verify_primitive_embedding,
)
from .enumeration import DValue, SearchBox, d_value, lll_reduce, realized_degrees, short_vectors
from .isometry import (
    CyclotomicProfile,
    Isometry,
    IsometryError,
    MuActionDatum,
    ball_dimension,
    coxeter_element,
    cyclotomic_profile,
    disc_action_trivial,
    find_isometry_with_profile,
    fixed_sublattice,
    order_of,
    orthogonal_group_order_mod_p,
    reflection,
    verify_isometry,
)
from .lattice import (
    Lattice,
    LatticeError,
    Signature,
    delta,
    determinant,
    direct_sum,
    is_even,
    make_catalog,
    signature,
    twist,
)
from .normal_forms import (
    BoundExceeded,
    DiscriminantForm,
    DiscriminantGroup,
    disc_forms_equivalent,
    discriminant_form,
    discriminant_group,
    hermite_normal_form,
    smith_normal_form,
)
from .suite import VerificationReport, emit_report, run_paper_suite
from .textio import FormatError, load_isometry_file, load_lattice_file

__version__ = "0.1.0"
