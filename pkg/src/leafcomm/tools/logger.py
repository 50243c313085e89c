from logging import (
    DEBUG,
    INFO,
    FileHandler,
    Formatter,
    Logger,
    StreamHandler,
    addLevelName,
    getLogger,
)
from sys import stderr

# Created loggers are cached so handlers are attached once
_loggers = {}


def get_logger(
    name="leafcomm",
    *,
    filename: str | None = None,
    debug: bool = False,
    console: bool = True,
    formatstr: str | None = "%(levelname)s: %(message)s",
) -> Logger:
    if logger := _loggers.get(name):
        if filename and not any(isinstance(h, FileHandler) for h in logger.handlers):
            _add_handler(logger, FileHandler(filename), logger.level, formatstr)
        return logger
    logger = getLogger(name)

    level = DEBUG if debug else INFO
    logger.setLevel(level)
    if filename:
        _add_handler(logger, FileHandler(filename), level, formatstr)
    if console:
        _add_handler(logger, StreamHandler(stderr), level, formatstr)
    _loggers[name] = logger
    return logger


def _add_handler(logger: Logger, handler, level: int, formatstr: str | None):
    handler.setLevel(level)
    handler.setFormatter(Formatter(formatstr))
    logger.addHandler(handler)


def set_level(level, name="leafcomm"):
    logger = _loggers[name]
    for handler in logger.handlers:
        handler.setLevel(level)
    logger.setLevel(level)


def verbosity_level(verbose: int) -> int:
    """Maps the count of `-v` flags to a logging level."""
    return (INFO, INFO1, INFO2, INFO3)[verbose] if verbose < 4 else DEBUG


INFO1 = INFO - 1
INFO2 = INFO - 2
INFO3 = INFO - 3
addLevelName(INFO1, "INFO1")
addLevelName(INFO2, "INFO2")
addLevelName(INFO3, "INFO3")

logger = get_logger()
logger.propagate = False
