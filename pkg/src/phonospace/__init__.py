"""Phonetic-prosodic space: alphabet, sonority, syllables, models, variation."""

from .alphabet import (
    Alphabet,
    DEFAULT_QUANTIZATION,
    FrontBack,
    Manner,
    Marker,
    NULL_PHONE,
    OpenClose,
    Phone,
    Place,
    ProsodicVector,
    QuantizationConfig,
    default_alphabet,
    dequantize,
    is_valid_marker,
    load_alphabet,
    load_alphabet_path,
    parse_symbol,
    quantize,
    render_symbol,
)
from .sonority import (
    PartialOrdering,
    SonorityRelation,
    check_diphthongal_syllable,
    cmp_front_back,
    cmp_manner,
    cmp_open_close,
    cmp_place,
    cmp_sonority,
    is_diphthongal_step,
)
from .syllabifier import (
    Block,
    DependencyPlan,
    Factor,
    InvalidPhoneString,
    PhoneString,
    StressClass,
    StressWeights,
    Syllable,
    SyllableParse,
    Unit,
    Violation,
    classify_stress,
    collapse_repeats,
    dependency_plan,
    parse_and_plan,
    parse_syllables,
    stress_score,
    string_violations,
    validate_string,
)
from .model import (
    CategoricalDist,
    CondKey,
    LanguageModel,
    ProsodicLimits,
    admissible_targets,
    factor_key,
    generic_model,
    legal_stress_sequences,
    load_model,
    sample,
    sample_with_rng,
    save_model,
    score,
    train,
)
from .variation import (
    Regime,
    TransformKind,
    TransformSpec,
    apply,
    drift_report,
    ordinal_distance,
)
from .corpus import CorpusString, phone_from_record, phone_to_record, read_corpus, write_corpus

__version__ = "0.1.0"
