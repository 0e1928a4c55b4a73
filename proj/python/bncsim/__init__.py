"""Python front end of the bncsim simulator core."""

from ._core import (  # noqa: F401
    REPORT_HEADER,
    ConfigError,
    DetectorParams,
    EmptySiftedKey,
    Error,
    InconsistentWord,
    IoError,
    MissingFluxPoint,
    NonPhysical,
    NotSiftable,
    Undefined,
    __version__,
    analytics,
    balanced_event,
    baseline_click,
    classify,
    comparator_bank,
    enumerate_table1,
    read_report,
    run_link,
    run_sweep,
    self_differencing_events,
    verify_report,
)
