import sys

from loguru import logger


def configure_logging(level="INFO"):
    # Diagnostics go to stderr, results to stdout
    logger.remove()
    logger.add(sys.stderr, level=level.upper(), format="<level>{level: <8}</level> | {name}:{function} - {message}")
    return logger
