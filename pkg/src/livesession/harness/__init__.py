from .corpus import CorpusEntry, corpus_types, get_entry, load_corpus
from .generate import GenConfig, gen_many, gen_typed
from .suites import (
    Report, certify, run_all, run_conjecture_probe, run_decomposition, run_discharge,
    run_liveness_suite, run_occurrence_properties, run_subject_reduction, run_typing_properties,
)
