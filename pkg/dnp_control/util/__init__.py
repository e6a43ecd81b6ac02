from .check_dependency import check_dependency
from .enum_utils import EnumExtend
from .exceptions import (
    ConfigError,
    DegenerateFixedPointError,
    DimensionError,
    DnpError,
    MissingParameterError,
    NumericalError,
)
from .logger import Logger, LogLevel, LogSolution
from .repr_info import ReprInfo
from .serializable_data import SerializableData, flatten_load_error
from .types import ComplexMatrix, ComplexVector, RealMatrix, RealVector
from .verify_result import CheckStatus, ResultWithStatus
