"""
Configuration settings for the Gausswell spectral toolkit.

This module contains all configurable parameters for the solvers and the
command-line front end, including precision defaults, basis-size and
Hankel-dimension ladders, exceptional-point search settings, sweep grids
and output settings.
"""

import os
from typing import Optional

# Project Structure
PROJECT_ROOT = os.path.dirname(os.path.abspath(__file__))

# Environment variable overriding the default precision (a --digits flag wins)
DIGITS_ENV_VAR = "GAUSSWELL_DIGITS"

# Precision settings
PRECISION_CONFIG = {
    'default_digits': {
        'sweep': 30,
        'critical': 50,
        'eps': 50,
        'hft': 30,
    },
    'max_newton_iters': 60,
    'guard_digits': 10,
}

# Rayleigh-Ritz settings
RR_CONFIG = {
    'schedule': (10, 20, 40, 80, 160),
    'critical_schedule': (10, 20, 30, 40),
    'target_digits': 12,
    'hft_basis_size': 60,
    'hft_step': '1e-6',
}

# Riccati-Pade settings
RPM_CONFIG = {
    'ladder': (10, 15, 20, 30, 40, 60),
    'critical_ladder': (10, 20, 30, 40, 60, 80, 100, 120),
    'displacement': 0,
    'cross_check_displacement': 1,
    'agreement_cap': 20,
}

# Long-running reproduction of the 100-digit critical couplings (hours)
HEROIC_CONFIG = {
    'digits': 110,
    'ladder': (40, 60, 80, 120, 160, 200, 260, 320, 380),
}

# Exceptional-point settings
EP_CONFIG = {
    'seed_basis_size': 10,
    'ladder': (10, 15, 20, 30, 40),
    'grid': (61, 61),
    'max_candidates': 40,
    'label_steps': 64,
}

# Sweep settings
SWEEP_CONFIG = {
    'lambda_min': -10.0,
    'lambda_max': 10.0,
    'steps': 81,
    'states': (0, 1),
    'methods': ('RR', 'PT'),
}

# Performance settings
PERFORMANCE_CONFIG = {
    'workers': 1,
}

# Output Configuration
OUTPUT_CONFIG = {
    'format': 'csv',
    'metadata_suffix': '.meta.json',
}

# Reference values used as seeds and diagnostics
REFERENCE_VALUES = {
    'critical_lambda': {
        0: '0.686352851432136232145426692879870945',
        1: '3.3938564542892053249137531899771358',
    },
    'exceptional_lambda': {
        0: '-2.3226516328467993+2.3862669217253205j',
        1: '-0.7081624267685391+5.2877437912362896j',
    },
    'exceptional_modulus': {
        0: '3.330012076',
        1: '5.334953460',
    },
}


def resolve_digits(command: str, cli_value: Optional[int] = None) -> int:
    """
    Working precision for a command: flag, then environment, then default.

    Args:
        command: Command name ('sweep', 'critical', 'eps' or 'hft').
        cli_value: Value of --digits, if given.

    Returns:
        Decimal digits to use.

    Raises:
        ValueError: If the environment variable is not a positive integer.
    """
    if cli_value is not None:
        return cli_value
    env_value = os.environ.get(DIGITS_ENV_VAR)
    if env_value:
        digits = int(env_value)
        if digits <= 0:
            raise ValueError(f"{DIGITS_ENV_VAR} must be a positive integer, got {env_value!r}")
        return digits
    return PRECISION_CONFIG['default_digits'][command]
