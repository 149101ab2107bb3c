"""Executable generalized probabilistic theories.

States and effects are real coordinate vectors, state spaces are polytopes,
density-matrix sets or balls, and the four reconstruction axioms
(distinguishability, conservation of capacity, reversibility, composition)
are checked by randomized, seeded, witness-producing tests.

>>> from gptaxioms import resolve, info_capacity
>>> info_capacity(resolve("gbit")).capacity
2
"""
from .axioms import (
    AxiomReport,
    check_causality,
    check_composition,
    check_composition_of,
    check_conservation,
    check_distinguishability,
    check_k_local_tomography,
    check_pure_product,
    check_reversibility,
    emit_report,
    run_checks,
)
from .capacity import CapacityResult, info_capacity, maximal_distinguishable_extension
from .convex import (
    LPWitness,
    empty_face,
    face_intersect,
    face_of,
    face_span,
    in_face,
    is_completely_mixed,
    membership,
    perfectly_distinguishable,
    whole_face,
)
from .core import (
    DELTA_DISC,
    SCHEMA_VERSION,
    TAU_EQ,
    TAU_RANK,
    EffectVector,
    Face,
    Measurement,
    ModelSpec,
    StateVector,
    Violation,
    marginal,
    mix,
    model_from_dict,
    model_from_json,
    pair,
    tensor,
    tensor_effects,
    tensor_many,
    validate_model,
)
from .errors import (
    AnchorNotPure,
    DimensionError,
    GPTError,
    Inconclusive,
    NotAState,
    NotInFace,
    NumericalError,
    RequiresPure,
    UnsupportedComposite,
    WeightError,
)
from .geometry import FaceLattice, face_lattice, verify_dimension_law, verify_projective_axioms
from .zoo import (
    ZooEntry,
    build_ball,
    build_classical,
    build_gbit,
    build_quantum,
    build_quaternion,
    build_real_quantum,
    compose,
    embed_subsystem,
    manifest,
    resolve,
    resolve_entry,
)

__version__ = "0.1.0"
