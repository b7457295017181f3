"""Numerical toolkit for no-signalling frame functions over product bases.

Validates frame functions and boxes for no-signalling, reconstructs the
unique self-adjoint operator behind a non-signalling frame function,
classifies operators by local time orientation (CP vs co-CP via the Choi
matrix), and reproduces the supporting constructions: twisted product
bases, PR-box exclusion by linear programming, and the cube-tiling
counterexample giving unentangled bases that are not twisted product bases.
"""

from .linalg import (
    HermitianOperator,
    Spectrum,
    ValidationError,
    hermitian_eig,
    make_rng,
    partial_trace,
    partial_transpose,
    proj,
    random_density,
    random_hermitian,
    random_onb,
    random_unit,
    tensor,
)
from .bases import (
    ProductBasis,
    ProductState,
    TwistCertificate,
    TwistMove,
    UnentangledBasis,
    apply_twist,
    find_local_pairs,
    twist_search,
    twisted_example_basis,
    twisted_example_certificate,
    validate_unentangled,
)
from .framefn import (
    OperatorInduced,
    SignallingFamily,
    Tabulated,
    evaluate,
    make_signalling_example,
    sample_from_operator,
    weight_check,
)
from .nosig import (
    TSIRELSON,
    Box,
    ChshInstance,
    deterministic_box,
    check_box,
    check_framefn,
    chsh_optimize,
    chsh_value,
    chsh_value_box,
    max_chsh_lp,
    pr_box,
    quantum_extension,
    singlet,
    singlet_chsh_instance,
    with_qubit_realizations,
)
from .gleason import (
    Classification,
    Reconstruction,
    SpanningDesign,
    classify_product_positivity,
    reconstruct_povm,
    reconstruct_pvm,
    spanning_design,
)
from .orientation import (
    KrausSet,
    Orientation,
    OrientationClass,
    choi_of,
    classify_orientation,
    jordan_symmetrization_check,
    kraus_factorize,
    operator_to_map,
)
from .presheaf import (
    Context,
    ProductContext,
    RefinementEdge,
    SectionTable,
    check_section,
    restrict,
    section_from_operator,
)
from .keller import (
    CliqueCandidate,
    Graph,
    SearchMode,
    basis_from_clique,
    bundled_candidate,
    family_from_clique,
    clique_search,
    edge,
    load_clique,
    save_clique,
    verify_clique,
)

__version__ = "0.1.0"
