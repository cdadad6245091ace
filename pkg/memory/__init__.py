"""Read-in and read-out channels and the round-trip pipeline."""

from memory.channels import (
    ReadInChannel,
    ReadOutChannel,
    ideal_memory_unitary,
    read_in_channel,
    read_out_channel,
    retrieve,
    store,
)
from memory.orchestrator import (
    STAGES,
    RoundTrip,
    RoundTripResult,
    StageError,
    build_channels,
    optimize_only,
    round_trip,
)

__all__ = [
    "STAGES",
    "ReadInChannel",
    "ReadOutChannel",
    "RoundTrip",
    "RoundTripResult",
    "StageError",
    "build_channels",
    "ideal_memory_unitary",
    "optimize_only",
    "read_in_channel",
    "read_out_channel",
    "retrieve",
    "round_trip",
    "store",
]
