"""Python bindings for the hessplit load-profile toolkit."""

from ._hessplit import (
    HessplitError,
    LoadProfile,
    __version__,
    analyze,
    dispatch,
    load_csv,
    normalize,
    parse_csv,
    resample,
    synth,
    threshold_sweep,
    ups,
    validate_resolution,
)

__all__ = [
    "HessplitError",
    "LoadProfile",
    "__version__",
    "analyze",
    "dispatch",
    "load_csv",
    "normalize",
    "parse_csv",
    "resample",
    "synth",
    "threshold_sweep",
    "ups",
    "validate_resolution",
]
