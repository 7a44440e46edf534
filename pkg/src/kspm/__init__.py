"""Kadanoff sand pile KSPM(D): exact dynamics, avalanche analysis, the interval
transducer and wave prediction."""
from .avalanches import (
    Avalanche,
    AvalancheLog,
    global_density_column,
    influent_type_word,
    long_avalanches,
    record_log,
    type_sequence,
)
from .core import (
    Configuration,
    Sandpile,
    fire,
    fixed_point,
    fixed_point_direct,
    is_stable,
    mass,
    stabilize,
    stabilize_leftmost,
)
from .exceptions import (
    DomainError,
    InputError,
    IntegrityError,
    InternalError,
    KSPMError,
    RuleViolationError,
)
from .transducer import (
    ALGORITHM_EXACT,
    FIGURE_SUPPRESSED,
    TransducerMachine,
    basic_words,
    build_machine,
    wave_step_bound,
    decompose,
    wave_steps,
)
from .waves import pipeline_check, predict_tail, wave_sweep, wave_match

__version__ = "0.1.0"
