"""
logger_config.py

Logging setup with a timestamped rotating file handler plus console output.
Library modules only fetch the shared logger by name; the CLI installs handlers.
"""

import logging
import os
from datetime import datetime
from logging.handlers import RotatingFileHandler

from ell1reg.config import LOG_LEVEL, LOGS_DIR

LOGGER_NAME = "ell1reg"


class TimestampRotatingFileHandler(RotatingFileHandler):
    """
    A handler that starts a new timestamped log file when rotation occurs.
    """

    def doRollover(self):
        """Close the current stream and open a fresh file named after the current time."""
        if self.stream:
            self.stream.close()
            self.stream = None

        timestamp = datetime.now().strftime('%Y%m%d_%H%M%S_%f')
        self.baseFilename = os.path.join(
            os.path.dirname(self.baseFilename),
            f'{LOGGER_NAME}_{timestamp}.log'
        )
        self.mode = 'w'
        self.stream = self._open()


def setup_logger(console_level=None, log_to_file=True):
    """Configure and return the shared logger (DEBUG to file, console at LOG_LEVEL)"""
    logger_instance = logging.getLogger(LOGGER_NAME)
    logger_instance.setLevel(logging.DEBUG)

    # Remove existing handlers to avoid duplicates on repeated CLI calls
    for handler in logger_instance.handlers[:]:
        logger_instance.removeHandler(handler)
        handler.close()

    formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')

    if log_to_file:
        LOGS_DIR.mkdir(exist_ok=True)
        timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
        file_handler = TimestampRotatingFileHandler(
            filename=os.path.join(LOGS_DIR, f'{LOGGER_NAME}_{timestamp}.log'),
            maxBytes=5 * 1024 * 1024,  # per-round DEBUG traces grow quickly
            backupCount=0,
            encoding='utf-8'
        )
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        logger_instance.addHandler(file_handler)

    console_handler = logging.StreamHandler()
    console_handler.setLevel(console_level or LOG_LEVEL)
    console_handler.setFormatter(formatter)
    logger_instance.addHandler(console_handler)

    return logger_instance
