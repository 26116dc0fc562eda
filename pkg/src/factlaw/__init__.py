"""factlaw: a laboratory for factual probability laws.

Integrated tile grids (parcelled paintings) are probabilised into random
phenomena by drawing fragments with replacement and observing only a
simplifying label; the inverse algorithm of semantic integration assembles
complexified event streams back into replicas of the hidden form and reads
the probability law off its exact per-label counts.  Everything is seeded,
deterministic, and exact where the mathematics is exact.
"""

__version__ = "0.1.0"

from .views import (
    AspectView,
    Description,
    EmptyKeepSet,
    EpistemicReferential,
    NoMutualExistence,
    UnknownAspect,
    View,
    apply_view,
    restrict_view,
)
from .painting import (
    AMBIGUOUS_EDGES,
    ASPECT_APPROX_COLOUR,
    ASPECT_COLOUR_FORM,
    ASPECT_EDGES,
    BOUNDARY,
    GENERATOR_ID,
    InfeasibleSpec,
    OutOfGrid,
    Painting,
    PaintingSpec,
    Tile,
    UNIQUE_EDGES,
    describe_tile,
    generate_painting,
    label_histogram,
    painting_from_doc,
    painting_to_doc,
)
from .puzzle import (
    AssemblyReport,
    Board,
    BorderAssembler,
    DuplicateCoordinates,
    FragmentPool,
    InconsistentSignatures,
    Piece,
    UnsolvablePool,
    solve_by_borders,
    solve_by_location,
)
from .prob import (
    EventAlgebra,
    ForeignElement,
    Measure,
    NotReached,
    SequenceStatistics,
    Universe,
    UnknownLabel,
    ValidationReport,
    composition_rank,
    count_statistical_structures,
    event_probability,
    find_N0,
    generate_algebra,
    meta_probability,
    validate_measure,
)
from .phenomenon import (
    DivergenceReport,
    FactualSpace,
    FrequencyTable,
    RandomPhenomenon,
    UniverseMismatch,
    compare_law,
    factual_space_from_painting,
    probabilise_painting,
    run_frequency_experiment,
)
from .integration import (
    AmbiguityExhausted,
    BudgetExhausted,
    ComparisonReport,
    ComplexifiedEvent,
    FormCell,
    HiddenForm,
    InconsistentReplicas,
    IntegrationConfig,
    IntegrationResult,
    IntegrationState,
    complexified_phenomenon,
    end_to_end_check,
    generate_hidden_form,
    hidden_form_from_painting,
    form_digest,
    integrate,
    label_projection,
)
from .seeding import derive_seed

__all__ = [
    "__version__",
    # views
    "AspectView",
    "Description",
    "EmptyKeepSet",
    "EpistemicReferential",
    "NoMutualExistence",
    "UnknownAspect",
    "View",
    "apply_view",
    "restrict_view",
    # painting
    "AMBIGUOUS_EDGES",
    "ASPECT_APPROX_COLOUR",
    "ASPECT_COLOUR_FORM",
    "ASPECT_EDGES",
    "BOUNDARY",
    "GENERATOR_ID",
    "InfeasibleSpec",
    "OutOfGrid",
    "Painting",
    "PaintingSpec",
    "Tile",
    "UNIQUE_EDGES",
    "describe_tile",
    "generate_painting",
    "label_histogram",
    "painting_from_doc",
    "painting_to_doc",
    # puzzle
    "AssemblyReport",
    "Board",
    "BorderAssembler",
    "DuplicateCoordinates",
    "FragmentPool",
    "InconsistentSignatures",
    "Piece",
    "UnsolvablePool",
    "solve_by_borders",
    "solve_by_location",
    # prob
    "EventAlgebra",
    "ForeignElement",
    "Measure",
    "NotReached",
    "SequenceStatistics",
    "Universe",
    "UnknownLabel",
    "ValidationReport",
    "composition_rank",
    "count_statistical_structures",
    "event_probability",
    "find_N0",
    "generate_algebra",
    "meta_probability",
    "validate_measure",
    # phenomenon
    "DivergenceReport",
    "FactualSpace",
    "FrequencyTable",
    "RandomPhenomenon",
    "UniverseMismatch",
    "compare_law",
    "factual_space_from_painting",
    "probabilise_painting",
    "run_frequency_experiment",
    # integration
    "AmbiguityExhausted",
    "BudgetExhausted",
    "ComparisonReport",
    "ComplexifiedEvent",
    "FormCell",
    "HiddenForm",
    "InconsistentReplicas",
    "IntegrationConfig",
    "IntegrationResult",
    "IntegrationState",
    "complexified_phenomenon",
    "end_to_end_check",
    "form_digest",
    "generate_hidden_form",
    "hidden_form_from_painting",
    "integrate",
    "label_projection",
    # seeding
    "derive_seed",
]
