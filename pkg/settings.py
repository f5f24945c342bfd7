"""
Run configuration.

Precedence is CLI flag > environment (optionally from a .env file) >
defaults.yaml. Environment values are read at call time so a long-lived
process and the tests can change them.
"""
import os
import logging
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import dotenv
import yaml

from errors import UsageError

dotenv.load_dotenv()

# Configure logging
logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
console_handler = logging.StreamHandler()
console_handler.setLevel(logging.INFO)
formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')
console_handler.setFormatter(formatter)
logger.addHandler(console_handler)

DEFAULTS_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'defaults.yaml')


@lru_cache(maxsize=None)
def load_defaults(path: str = DEFAULTS_PATH) -> dict:
    """Read defaults.yaml once."""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f) or {}
    except FileNotFoundError:
        logger.error(f"Defaults file '{path}' not found")
        raise UsageError(f"Defaults file '{path}' not found")
    except yaml.YAMLError as e:
        logger.error(f"Defaults file '{path}' is not valid YAML: {e}")
        raise UsageError(f"Defaults file '{path}' is not valid YAML: {e}") from e
    if not isinstance(data, dict):
        raise UsageError(f"Defaults file '{path}' must contain a mapping")
    return data


def _parse_rational(text: str) -> Optional[Fraction]:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError, AttributeError):
        return None


def _parse_int(text: str, minimum: int) -> Optional[int]:
    try:
        value = int(text.strip())
    except (ValueError, AttributeError):
        return None
    return value if value >= minimum else None


def _raw(name: str, fallback: str) -> str:
    value = os.getenv(name)
    return fallback if value is None or value == '' else value


def validate_environment_variables() -> dict:
    """
    Parse every configuration variable and fail on all invalid ones at once.
    Returns the parsed values keyed by variable name.
    """
    defaults = load_defaults()
    raw = {
        'HECKE_Q': _raw('HECKE_Q', str(defaults.get('q', '3'))),
        'HECKE_VERIFY_MAX_DIM': _raw('HECKE_VERIFY_MAX_DIM', str(defaults.get('verification', {}).get('max_dim', 24))),
        'HECKE_SWEEP_CAP': _raw('HECKE_SWEEP_CAP', str(defaults.get('sweep', {}).get('cap', 4))),
        'HECKE_JOBS': _raw('HECKE_JOBS', '1'),
        'SHUTDOWN_TIMEOUT': _raw('SHUTDOWN_TIMEOUT', '30'),
        'HECKE_DEBUG_RELATIONS': os.getenv('HECKE_DEBUG_RELATIONS', ''),
    }
    parsed = {
        'HECKE_Q': _parse_rational(raw['HECKE_Q']),
        'HECKE_VERIFY_MAX_DIM': _parse_int(raw['HECKE_VERIFY_MAX_DIM'], 0),
        'HECKE_SWEEP_CAP': _parse_int(raw['HECKE_SWEEP_CAP'], 1),
        'HECKE_JOBS': _parse_int(raw['HECKE_JOBS'], 1),
        'SHUTDOWN_TIMEOUT': _parse_int(raw['SHUTDOWN_TIMEOUT'], 0),
        'HECKE_DEBUG_RELATIONS': raw['HECKE_DEBUG_RELATIONS'] if raw['HECKE_DEBUG_RELATIONS'] in ('', '0', '1') else None,
    }

    invalid_vars = [name for name, value in parsed.items() if value is None]
    if invalid_vars:
        error_msg = f"Invalid configuration variables: {', '.join(invalid_vars)}"
        logger.critical(error_msg)
        for name in invalid_vars:
            logger.critical(f"  {name}={raw[name]!r}")
        raise ValueError(error_msg)

    logger.debug("Configuration variables validated")
    return parsed


def default_q() -> Fraction:
    return validate_environment_variables()['HECKE_Q']


def verify_max_dim() -> int:
    return validate_environment_variables()['HECKE_VERIFY_MAX_DIM']


def debug_relations_forced() -> bool:
    return os.getenv('HECKE_DEBUG_RELATIONS', '') == '1'


def should_verify_relations(dim: int) -> bool:
    """HECKE_DEBUG_RELATIONS=1 forces checks, =0 disables them, otherwise a size threshold applies."""
    flag = os.getenv('HECKE_DEBUG_RELATIONS', '')
    if flag == '1':
        return True
    if flag == '0':
        return False
    return dim <= verify_max_dim()


def sweep_cap(allow_opt_in: bool = False) -> int:
    cap = validate_environment_variables()['HECKE_SWEEP_CAP']
    if allow_opt_in:
        cap = max(cap, int(load_defaults().get('sweep', {}).get('opt_in_cap', 5)))
    return cap


def default_jobs() -> int:
    return validate_environment_variables()['HECKE_JOBS']


def shutdown_timeout() -> int:
    return validate_environment_variables()['SHUTDOWN_TIMEOUT']


def default_window(n: int) -> tuple[int, int]:
    sweep = load_defaults().get('sweep', {})
    return int(sweep.get('window_start', 0)), n + int(sweep.get('window_offset', 0))


def line_multiplier(line: int) -> Fraction:
    """Scale factor of a cuspidal line; line 0 is the line of q itself."""
    if line < 0:
        raise UsageError(f"Line ids are non-negative, got {line}")
    if line == 0:
        return Fraction(1)
    multipliers = load_defaults().get('line_multipliers', [])
    if line > len(multipliers):
        logger.error(f"No multiplier configured for line {line}")
        raise UsageError(f"Line {line} has no configured multiplier (defaults.yaml lists {len(multipliers)})")
    value = _parse_rational(str(multipliers[line - 1]))
    if value is None or value == 0:
        raise UsageError(f"Multiplier for line {line} is not a nonzero rational: {multipliers[line - 1]!r}")
    return value
