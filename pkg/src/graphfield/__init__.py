"""Graph field automata: labeled adjacency fields over Z_m and machines built on them."""

from .automorph import (
    GroupElement,
    act,
    canonical_form,
    cyclic_shift,
    generate_group,
    mirror,
    swap_labels,
)
from .field import (
    AdjacencyField,
    FieldError,
    LabelVector,
    RingSpec,
    VertexClass,
    apply_relabeling,
    classify_vertices,
    entrywise_op,
    is_isomorphic,
    make_field,
)
from .gates import (
    Circuit,
    GateField,
    compose,
    functional_completeness_suite,
    gate_eval,
    nor_field,
    paper_nor_field,
    paper_transformation,
)
from .grammar import canonical_label, canonical_start_vertices, parse, serialize
from .machine import (
    GraphAutomaton,
    MachineState,
    automaton_run,
    branch,
    make_state,
    run,
    step,
)
from .random_mode import SearchConfig, VerifierSpec, random_search, transition_density
from .ski import decode_field, encode_term_as_field, normalize, parse_term, reduce_step

__version__ = "0.1.0"

__all__ = [
    "AdjacencyField",
    "Circuit",
    "FieldError",
    "GateField",
    "GraphAutomaton",
    "GroupElement",
    "LabelVector",
    "MachineState",
    "RingSpec",
    "SearchConfig",
    "VerifierSpec",
    "VertexClass",
    "act",
    "apply_relabeling",
    "automaton_run",
    "branch",
    "canonical_form",
    "canonical_label",
    "canonical_start_vertices",
    "classify_vertices",
    "compose",
    "cyclic_shift",
    "decode_field",
    "encode_term_as_field",
    "entrywise_op",
    "functional_completeness_suite",
    "gate_eval",
    "generate_group",
    "is_isomorphic",
    "make_field",
    "make_state",
    "mirror",
    "nor_field",
    "normalize",
    "paper_nor_field",
    "paper_transformation",
    "parse",
    "parse_term",
    "random_search",
    "reduce_step",
    "run",
    "serialize",
    "step",
    "swap_labels",
    "transition_density",
]
