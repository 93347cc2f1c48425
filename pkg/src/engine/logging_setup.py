import logging
import os
from logging.handlers import RotatingFileHandler

from rich.console import Console
from rich.logging import RichHandler

LOG_FILE = "repair.log"


def setup_logging(logs_dir: str = "logs", level: str = "INFO") -> str:
    """Rotating file log under `logs_dir` plus a rich console handler on stderr"""
    os.makedirs(logs_dir, exist_ok=True)

    file_handler = RotatingFileHandler(
        os.path.join(logs_dir, LOG_FILE),
        maxBytes=1024 * 1024,  # 1MB per file
        backupCount=5,
        encoding="utf-8",
    )
    file_handler.setFormatter(logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s"))

    console_handler = RichHandler(console=Console(stderr=True), show_path=False, markup=False)
    console_handler.setFormatter(logging.Formatter("%(message)s"))

    logging.basicConfig(level=level.upper(), handlers=[file_handler, console_handler], force=True)
    return logs_dir
