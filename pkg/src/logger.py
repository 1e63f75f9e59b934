"""
Logging configuration for the simulator using loguru.
Console output goes through tqdm.write so progress bars stay intact.
"""

import os
from pathlib import Path

from dotenv import load_dotenv
from loguru import logger
from tqdm import tqdm

from config.constants import OutputConstants

load_dotenv()

LOG_FORMAT = "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan> - <level>{message}</level>"

# Configure loguru with custom format
logger.remove()  # Remove default handler
logger.add(
    sink=lambda msg: tqdm.write(msg, end=""),
    format=LOG_FORMAT,
    level=os.getenv("CNS_LOG_LEVEL", "INFO").upper(),
    colorize=True,
)


def add_run_log(directory: str | Path) -> int:
    """
    Attach a plain-text log file for one run.

    Args:
        directory: Run output directory

    Returns:
        Handler id, to be passed to logger.remove() when the run ends
    """
    path = Path(directory) / OutputConstants.RUN_LOG_FILE
    path.parent.mkdir(parents=True, exist_ok=True)
    return logger.add(
        path,
        format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function} - {message}",
        level="DEBUG",
        mode="a",
    )


# Export logger for use throughout the application
__all__ = ["logger", "add_run_log"]
