import logging
import os
from datetime import datetime

from src.config import Config

ROOT_LOGGER = 'tame_algebra'

_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s'


def _configure_root():
    root = logging.getLogger(ROOT_LOGGER)
    if root.handlers:
        return root

    log_dir = os.getenv('TAME_LOG_DIR', Config.LOG_DIR)
    os.makedirs(log_dir, exist_ok=True)
    root.setLevel(logging.DEBUG)
    root.propagate = False

    formatter = logging.Formatter(_FORMAT, datefmt='%Y-%m-%d %H:%M:%S')

    log_filename = os.path.join(log_dir, f"tame_{datetime.now().strftime('%Y%m%d')}.log")
    file_handler = logging.FileHandler(log_filename, encoding='utf-8')
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(formatter)

    # stderr only; stdout carries the reports
    console_handler = logging.StreamHandler()
    console_handler.setLevel(getattr(logging, Config.LOG_LEVEL, logging.WARNING))
    console_handler.setFormatter(formatter)

    root.addHandler(file_handler)
    root.addHandler(console_handler)
    return root


def setup_logger(name=None):
    """Return the toolkit logger, or a named child of it.

    The dated file and console handlers are attached once to the
    ``tame_algebra`` logger; module loggers propagate to it.
    """
    root = _configure_root()
    if not name:
        return root
    return root.getChild(name.rsplit('.', 1)[-1])
