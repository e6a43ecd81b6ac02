import logging
from datetime import datetime
from enum import Enum
from sys import stderr
from typing import Callable, NamedTuple, Optional, TextIO, TypeAlias

from simple_singleton import singleton
from typing_extensions import Never

from dnp_control.util.check_dependency import check_dependency
from dnp_control.util.enum_utils import EnumExtend

LOGGER_NAME = "dnp_control"
RECORD_TIME_FORMAT = "%Y-%m-%d %H:%M:%S"


class LogLevel(str, Enum):
    DEBUG = "debug"
    INFO = "info"
    WARNING = "warning"
    ERROR = "error"
    CRITICAL = "critical"

    @property
    def number(self) -> int:
        """Standard `logging` number of the level."""
        return logging.getLevelName(self.name)


LogFunc: TypeAlias = Callable[..., None]


class LogFunctions(NamedTuple):
    debug: LogFunc
    info: LogFunc
    warning: LogFunc
    error: LogFunc
    critical: LogFunc


Installer: TypeAlias = Callable[[LogLevel, TextIO], LogFunctions]


def _join(message: tuple[object, ...], separator: str) -> str:
    return separator.join(map(str, message))


def _adapt(base_func: Callable[[str], object]) -> LogFunc:
    def func(*message: object, separator: str = ", ") -> None:
        base_func(_join(message, separator))

    return func


def _ignore(*message: object, separator: str = ", ") -> None:  # pylint: disable=unused-argument
    return


def _install_print(lowest_level: LogLevel, stream: TextIO) -> LogFunctions:
    def emitter(level: LogLevel) -> LogFunc:
        if level.number < lowest_level.number:
            return _ignore

        def emit(record: str) -> None:
            time_str = datetime.now().strftime(RECORD_TIME_FORMAT)
            print(f"{time_str} | {level.name: <8} | {record}", file=stream, flush=True)

        return _adapt(emit)

    return LogFunctions(*(emitter(level) for level in LogLevel))


def _install_logging(lowest_level: LogLevel, stream: TextIO) -> LogFunctions:
    logger = logging.getLogger(LOGGER_NAME)

    handler = logging.StreamHandler(stream)
    handler.setFormatter(
        logging.Formatter("%(asctime)s | %(levelname)-8s | %(message)s", datefmt=RECORD_TIME_FORMAT)
    )
    logger.handlers = [handler]
    logger.setLevel(lowest_level.number)
    logger.propagate = False

    return LogFunctions(
        *(_adapt(getattr(logger, level.value)) for level in LogLevel)
    )


if _IS_LOGURU_INSTALLED := check_dependency("loguru"):
    from loguru import logger as loguru_logger


def _install_loguru(lowest_level: LogLevel, stream: TextIO) -> LogFunctions:
    if not _IS_LOGURU_INSTALLED:
        return _install_logging(lowest_level, stream)

    loguru_logger.remove()
    loguru_logger.add(
        stream,
        level=lowest_level.name,
        format="<green>{time:YYYY-MM-DD HH:mm:ss}</green>"
        + " | <level>{level: <8}</level>"
        + " | <level>{message}</level>",
    )

    return LogFunctions(
        *(_adapt(getattr(loguru_logger, level.value)) for level in LogLevel)
    )


class LogSolution(EnumExtend[Installer], str, Enum):
    PRINT = "Print"
    LOGURU = "Loguru"
    LOGGING = "Logging"

    @classmethod
    def _get_value_map(cls: type["LogSolution"]) -> dict["LogSolution", Installer]:
        return {
            LogSolution.PRINT: _install_print,
            LogSolution.LOGURU: _install_loguru,
            LogSolution.LOGGING: _install_logging,
        }


@singleton(thread_safe=True)
class Logger:
    """Process wide log front end.

    Library code calls `Logger.info(...)` and friends; the command line tool
    picks the back end, level and stream once per run through `init`.
    """

    _is_initialized: bool = False
    _current_solution: LogSolution = LogSolution.PRINT

    debug: LogFunc = _ignore
    info: LogFunc = _ignore
    warning: LogFunc = _ignore
    error: LogFunc = _ignore
    critical: LogFunc = _ignore

    def __init__(self) -> Never:
        raise RuntimeError("This class should not be instantiated")

    @classmethod
    def is_initialized(cls) -> bool:
        return cls._is_initialized

    @classmethod
    def get_current_solution(cls) -> LogSolution:
        return cls._current_solution

    @classmethod
    def _install(
        cls, solution: LogSolution, lowest_level: LogLevel, stream_to: Optional[TextIO]
    ) -> None:
        functions = LogSolution.get_mapped_value(solution)(lowest_level, stream_to or stderr)
        for level, func in zip(LogLevel, functions):
            setattr(cls, level.value, staticmethod(func))

        cls._current_solution = solution

    @classmethod
    def init(
        cls,
        solution: LogSolution,
        lowest_level: Optional[LogLevel] = None,
        stream_to: Optional[TextIO] = None,
        *,
        force: bool = False,
    ) -> None:
        """
        Select the log back end.

        Only the first call takes effect unless `force` is set.

        Args:
            solution (LogSolution): Back end to use.
            lowest_level (Optional[LogLevel]): Lowest level written, DEBUG
                when omitted.
            stream_to (Optional[TextIO]): Stream the records go to, stderr
                when omitted.
            force (bool): Re-initialize an already initialized logger.
        """
        if cls._is_initialized and not force:
            return

        if solution == LogSolution.LOGURU and not _IS_LOGURU_INSTALLED:
            cls.warning(
                "loguru is not installed (poetry install --with rich-logging), "
                + f"keeping the current solution ({cls._current_solution.value})"
            )
            return

        cls._install(solution, lowest_level or LogLevel.DEBUG, stream_to)
        cls._is_initialized = True

    @classmethod
    def init_by_default_solution(cls) -> None:
        """Warnings and above until `init` is called. Runs at import."""
        default = LogSolution.LOGURU if _IS_LOGURU_INSTALLED else LogSolution.PRINT
        cls._install(default, LogLevel.WARNING, None)


Logger.init_by_default_solution()
