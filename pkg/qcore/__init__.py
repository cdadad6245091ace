"""Operator algebra, fidelities and the channel -> Choi -> Kraus machinery."""

from qcore.channels import (
    BASIS_PAIRS,
    ChannelImages,
    KrausSet,
    apply_kraus,
    canonical_phase,
    choi_matrix,
    deserialize_matrix,
    kraus_from_choi,
    kraus_from_images,
    phase_aligned,
    serialize_matrix,
)
from qcore.errors import (
    ChannelError,
    ConfigError,
    CPViolationError,
    DegenerateBranchError,
    ModelError,
    NumericalError,
    QMemError,
    QuadratureError,
    SolverError,
    StateError,
    WeakDriveError,
)
from qcore.fidelity import BELL, bell_fidelity, mixed_fidelity
from qcore.operators import (
    IDENTITY_2,
    R_Y_PI2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    basis_op,
    check_density,
    dag,
    embed,
    ket,
    normalize,
    one_norm,
    projector,
    ry,
)

__all__ = [
    "BASIS_PAIRS",
    "BELL",
    "ChannelError",
    "ChannelImages",
    "ConfigError",
    "CPViolationError",
    "DegenerateBranchError",
    "IDENTITY_2",
    "KrausSet",
    "ModelError",
    "NumericalError",
    "QMemError",
    "QuadratureError",
    "R_Y_PI2",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "SolverError",
    "StateError",
    "WeakDriveError",
    "apply_kraus",
    "basis_op",
    "bell_fidelity",
    "canonical_phase",
    "check_density",
    "choi_matrix",
    "dag",
    "deserialize_matrix",
    "embed",
    "ket",
    "kraus_from_choi",
    "kraus_from_images",
    "mixed_fidelity",
    "normalize",
    "one_norm",
    "phase_aligned",
    "projector",
    "ry",
    "serialize_matrix",
]
