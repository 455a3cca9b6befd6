from .citations import (
    DEFAULT_PATTERNS,
    StatuteReference,
    extract_citations,
    extract_references,
)
from .cleaning import clean_and_pair
from .dataset import (
    DatasetStats,
    build_triplets,
    dataset_stats,
    export_dataset,
    load_dataset,
    render_stats,
)
from .reshape import (
    behavior_shape,
    build_expansion_request,
    build_shaping_request,
    develop_thinking,
    knowledge_expand,
    shape_pairs,
)
from .types import (
    InstructionItem,
    InstructionPair,
    InstructionTriplet,
    RawRecord,
    StageStats,
    TASK_SCENARIO,
    TaskSchema,
    load_raw_records,
)

__all__ = [
    "DEFAULT_PATTERNS",
    "DatasetStats",
    "InstructionItem",
    "InstructionPair",
    "InstructionTriplet",
    "RawRecord",
    "StageStats",
    "StatuteReference",
    "TASK_SCENARIO",
    "TaskSchema",
    "behavior_shape",
    "build_expansion_request",
    "build_shaping_request",
    "build_triplets",
    "clean_and_pair",
    "dataset_stats",
    "develop_thinking",
    "export_dataset",
    "extract_citations",
    "extract_references",
    "knowledge_expand",
    "load_dataset",
    "load_raw_records",
    "render_stats",
    "shape_pairs",
]
