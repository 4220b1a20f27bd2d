"""Exact computations on finite algebras of numerical events (S-probabilities)."""

from .algebra import (
    AxiomReport,
    Budget,
    EventSet,
    Outcome,
    SaturationResult,
    StructureReport,
    atoms,
    is_boolean,
    is_concrete,
    is_lattice,
    is_orthomodular,
    poset_join,
    poset_meet,
    saturate,
    structure,
    verify_axioms,
)
from .classify import ClassifyConfig, Verdict, VerdictKind, classify, replay
from .construct import (
    ExtensionMap,
    boolean_from_atoms,
    lift_event,
    mo2_boolean_completion,
    mo_n,
    split_atom,
    zero_one_extension,
)
from .core import (
    Certificate,
    ReciprocityClass,
    SProbability,
    StateSet,
    complement,
    difference,
    is_proper,
    is_varying,
    leq,
    ortho_sum,
    orthogonal,
    reciprocity,
    sprob,
)
from .search import (
    OracleOutcome,
    OracleResult,
    boolean_embedding_concrete,
    enumerate_boolean_subalgebras,
    mo2_interpolation_scan,
    refute_by_saturation,
)

__version__ = "0.1.0"
