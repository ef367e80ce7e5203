"""Differential geometry, geometric gauge field and lattice Dirac spectrum of twisted strips."""
from .errors import ConfigError, DomainError, InvariantError, MobiusError, RangeError, UsageError
from .surface import FrameTriad, StripParams, embed, embed_offset, frame, normal, numeric_partials

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DomainError",
    "FrameTriad",
    "InvariantError",
    "MobiusError",
    "RangeError",
    "StripParams",
    "UsageError",
    "embed",
    "embed_offset",
    "frame",
    "normal",
    "numeric_partials",
]
