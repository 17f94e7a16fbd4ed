"""Dirichlet L-functions: characters, evaluation, critical zeros and zero sums of L'."""

from .characters import (
    DirichletCharacter,
    character,
    character_from_label,
    enumerate_characters,
    gauss_sum,
    primitive_characters,
    principal_character,
)
from .errors import (
    AccuracyError,
    LZeroSumError,
    MeshError,
    NearZeroError,
    NotPrimitiveError,
    PoleError,
    RealityError,
    ZeroCountMismatch,
)
from .lfunc import delta_factor, l_derivative, l_function, l_value, rotated_Z
from .zeros import ScanConfig, count_zeros_argument_principle, scan_zeros, verify_completeness
from .zerosum import compare, constants, empirical_sum, main_term

__version__ = "0.1.0"
