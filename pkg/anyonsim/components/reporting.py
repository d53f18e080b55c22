"""
Shared output helpers: logging setup, JSON emission and binomial error bars
"""
import json
import logging
import os
import sys

from scipy.stats import binomtest

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def configure_logging(level='INFO'):
    """
    Install a single stream handler on the package logger

    Args:
        level (str | int): logging level name or number

    Returns:
        logging.Logger: the configured 'anyonsim' logger
    """
    logger = logging.getLogger('anyonsim')
    logger.setLevel(level if isinstance(level, int) else level.upper())
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(handler)
    return logger


def to_json(payload):
    """Stable JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(payload, sort_keys=True, indent=2, default=_fallback) + '\n'


def write_json(payload, file_path):
    directory = os.path.dirname(file_path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(file_path, 'w', encoding='utf-8') as handle:
        handle.write(to_json(payload))
    return file_path


def wilson_interval(failures, shots, confidence=0.95):
    """Wilson score interval for a failure count out of `shots` trials."""
    if shots == 0:
        return 0.0, 1.0
    ci = binomtest(int(failures), int(shots)).proportion_ci(confidence_level=confidence, method='wilson')
    return float(ci.low), float(ci.high)


def show_progress(quiet=False):
    """tqdm should draw only for interactive, non-quiet runs."""
    return not quiet and sys.stderr.isatty()


def _fallback(value):
    if hasattr(value, 'tolist'):
        return value.tolist()
    if hasattr(value, 'as_dict'):
        return value.as_dict()
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    msg = f"cannot serialise {type(value).__name__}"
    raise TypeError(msg)
