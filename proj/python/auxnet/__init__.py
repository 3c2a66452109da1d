"""Python bindings for the auxnet online learner."""

from ._auxnet import (
    AuxNet,
    AvailabilitySchedule,
    DataError,
    Dataset,
    IoError,
    KnowledgeBase,
    NetworkConfig,
    OdlNetwork,
    Optimizer,
    RunMetrics,
    StepOutcome,
    StepRecord,
    StreamInstance,
    base_only_stream,
    gradcheck,
    init_knowledge_base,
    load_schedule,
    load_snapshot,
    load_ucr,
    make_schedule,
    run_odl,
    run_stream,
    save_schedule,
    save_snapshot,
    split_stream,
)

__all__ = [
    "AuxNet",
    "AvailabilitySchedule",
    "DataError",
    "Dataset",
    "IoError",
    "KnowledgeBase",
    "NetworkConfig",
    "OdlNetwork",
    "Optimizer",
    "RunMetrics",
    "StepOutcome",
    "StepRecord",
    "StreamInstance",
    "base_only_stream",
    "gradcheck",
    "init_knowledge_base",
    "load_schedule",
    "load_snapshot",
    "load_ucr",
    "make_schedule",
    "run_odl",
    "run_stream",
    "save_schedule",
    "save_snapshot",
    "split_stream",
]
