import logging

logger = logging.getLogger("hypdiskpy")


def setup_logging(level: int = logging.WARNING) -> None:
    """
    Configure the package logger with a stderr handler.

    :param level: logging level, e.g. logging.DEBUG
    """
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("[hypdiskpy] %(levelname)s %(message)s"))
        logger.addHandler(handler)
    logger.setLevel(level)


def log_debug(msg: str, *args) -> None:
    logger.debug(msg, *args)


def log_info(msg: str, *args) -> None:
    logger.info(msg, *args)


def log_warning(msg: str, *args) -> None:
    logger.warning(msg, *args)


def log_error(msg: str, *args) -> None:
    logger.error(msg, *args)
