"""quiverci: certificates for smoothness and complete-intersection-ness of
quiver semisimple-representation moduli.

The library models quiver settings (directed multigraphs with a positive
dimension per vertex), implements the reduction calculus RI-RIV, local
quiver gluings, primitive-cycle combinatorics, and the toric machinery
counting minimal generators of the relations ideal. Every top-level
verdict comes with an independently checkable certificate.
"""

__version__ = "0.1.0"

from .classify import (
    SEARCH_TARGETS,
    SearchResult,
    TargetQuiver,
    Verdict,
    contains_c1_subquiver,
    coregular_obstruction,
    find_forbidden_descendant,
    is_ci,
    is_coregular,
    matches_coregular_form,
    random_setting,
    target_c1,
    target_coreg_a,
    target_coreg_b,
    target_coreg_c,
    target_g1,
    target_g2,
)
from .core import (
    Arrow,
    QuiverSetting,
    ReductionStep,
    ReductionTrace,
    canonical_key,
    degrees,
    induced_subquiver,
    is_isomorphic,
    is_strongly_connected,
    prime_decomposition,
    ringel_form,
    strongly_connected_components,
    unit_vector,
)
from .cycles import (
    CyclePartition,
    PrimitiveCycle,
    f_value,
    is_eulerian,
    partitions_into_cycles,
    primitive_cycles,
    trivially_intersecting,
)
from .errors import (
    DecompositionError,
    DomainError,
    GenerationError,
    ParseError,
    QuiverError,
    ReductionError,
    ResourceLimitError,
)
from .io import parse_file, parse_setting, serialize_setting, to_dot
from .localquiver import (
    Decomposition,
    glue_subquiver,
    has_simple_rep,
    iss_dimension,
    local_quiver,
    simple_class_count_kind,
)
from .reductions import (
    apply_ri,
    apply_rii,
    apply_riii,
    apply_riv,
    count_simple_paths,
    reduce_fully,
    replay_linear,
    ri_applicable,
    rii_applicable,
    riii_applicable,
    riv_applicable,
    verify_trace,
)
from .toric import (
    BinomialRelation,
    GeneratorReport,
    classify_cycle,
    e_value,
    e_value_fiber,
    is_ci_toric,
    min_generators,
    sim_u_classes,
    weak_cycle_check,
)
