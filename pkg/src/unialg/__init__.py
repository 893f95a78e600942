"""Unification algebra of flows and wirings, pointer machines and nilpotency deciders."""

from .decider import (
    ActionGraph,
    Tracer,
    build_action_graph,
    decide_membership,
    decide_nilpotent_graph,
    deterministic_trace,
    power_nilpotency,
    to_dot,
)
from .encoding import (
    Alphabet,
    ComputationSpace,
    ObservationParams,
    PositionSet,
    Word,
    computation_space,
    position_automorphism,
    validate_observation,
    word_repr,
)
from .flows import (
    Coefficient,
    Flow,
    Permutation,
    TermVector,
    Wiring,
    flow_dagger,
    flow_product,
    flow_tensor,
    is_concrete,
    is_isometric,
    nilpotent_within,
    parse_flow,
    parse_wiring,
    perm_repr,
    wiring_action,
    wiring_add,
    wiring_dagger,
    wiring_mul,
    wiring_scale,
    wiring_tensor,
)
from .machines import (
    Configuration,
    PointerMachine,
    TransitionRule,
    accepts,
    compile_machine,
    is_deterministic,
    is_reversible,
    parse_machine,
    step,
)
from .terms import (
    App,
    Var,
    apply_substitution,
    canonical_variables,
    format_term,
    match_closed,
    matchable,
    mgu,
    parse_term,
    rename_apart,
)
