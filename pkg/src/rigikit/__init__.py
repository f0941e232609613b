"""Rigidity analysis of finite and crystallographic bar-joint frameworks.

The package covers the linear theory (rigidity matrices, flex and stress
spaces, the matricial symbol of a crystal framework, mode multiplicity and
rigid-unit-mode scans), combinatorial counting certificates (Maxwell
balances and pebble games) and nonlinear deformations (trapezium strip
transmission, flow-periodic Newton continuation, alternation flexes).
"""

from .catalog import CATALOG_NAMES, UnknownCatalogNameError, catalog, catalog_motif
from .deform import (
    ContinuationError,
    DeformationPath,
    LockingError,
    TrapeziumStrip,
    alternation_flex,
    backward_iteration,
    composed_flow,
    flow_periodic_deform,
    locking_angle,
    skew_flow,
    strip_framework,
    transmission,
    transmission_sweep,
)
from .frameworks import (
    DegenerateLatticeError,
    DisconnectedMotifError,
    FiniteFramework,
    Graph,
    Motif,
    PatchFramework,
    ZeroLengthEdgeError,
    build_patch,
    flex_space,
    generic_placement,
    motif_rigidity_matrix,
    rigidity_matrix,
    stress_space,
)
from .io import (
    FileFormatError,
    framework_from_dict,
    framework_to_dict,
    load_framework,
    load_motif,
    motif_from_dict,
    motif_to_dict,
    save_framework,
    save_motif,
)
from .laurent import (
    LaurentPoly,
    SymbolMatrix,
    det_interpolate,
    det_is_zero,
    equal_up_to_scalar_monomial,
    normalize,
    poly_close,
    poly_parse,
    poly_text,
)
from .sparsity import (
    CountReport,
    PebbleResult,
    RossReport,
    maxwell_report,
    pebble_game,
    ross_check,
)
from .symbol import (
    InversionReport,
    ModeScan,
    SymbolFunction,
    WaveFlex,
    build_symbol,
    evaluate,
    inversion_phase_analysis,
    mode_multiplicity,
    rum_scan,
    square_summable_verdict,
    verify_wave_flex,
    wave_flex,
)
from .symmetry import (
    NotASymmetryError,
    SymmetryElement,
    identity_symmetry,
    inversion_symmetry,
    symmetry_from_isometry,
    verify_symmetry_commutation,
)

__version__ = "0.1.0"
