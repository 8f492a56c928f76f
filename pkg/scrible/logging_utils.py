import logging
import sys

ROOT_LOGGER = "scrible"
_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

_logfile_handler: logging.Handler = None


def get_logger(name: str) -> logging.Logger:
    """Return a logger in the `scrible` namespace for the module `name`."""
    if name == ROOT_LOGGER or name.startswith(ROOT_LOGGER + "."):
        return logging.getLogger(name)
    return logging.getLogger(f"{ROOT_LOGGER}.{name}")


def configure_logging(verbosity: int = 0, stream=None) -> logging.Logger:
    """
    Attach a single stream handler to the package logger.

    Args:
        verbosity (int): 0 for warnings only, 1 for info, 2 or more for per-round debug output.
        stream: The stream to write to (stderr when None).

    Returns:
        logging.Logger: The configured package logger.
    """
    logger = logging.getLogger(ROOT_LOGGER)
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logger.setLevel(level)
    for handler in list(logger.handlers):
        if handler is not _logfile_handler:
            logger.removeHandler(handler)
    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setFormatter(logging.Formatter(_FORMAT))
    logger.addHandler(handler)
    return logger


def set_logfile(path: str) -> logging.Handler:
    """Switch the package log output to a new file, closing the previous one."""
    global _logfile_handler
    logger = logging.getLogger(ROOT_LOGGER)
    if _logfile_handler is not None:
        logger.removeHandler(_logfile_handler)
        _logfile_handler.close()
    _logfile_handler = logging.FileHandler(path, mode="w", encoding="utf-8")
    _logfile_handler.setFormatter(logging.Formatter(_FORMAT))
    logger.addHandler(_logfile_handler)
    if logger.level == logging.NOTSET or logger.level > logging.INFO:
        logger.setLevel(logging.INFO)
    return _logfile_handler
