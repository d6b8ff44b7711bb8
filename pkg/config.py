import math
import os
from typing import Dict, Mapping, Optional

from dotenv import load_dotenv

# Load environment variables from config.env
load_dotenv('config.env')


def _env_float(name: str, default: float) -> float:
    return float(os.getenv(name, repr(default)))


def _env_int(name: str, default: int) -> int:
    return int(os.getenv(name, str(default)))


_DEFAULT_TOLERANCES = {
    'algebra': 1e-10,
    'exact': 1e-12,
    'collapse': 1e-10,
    'morphism': 1e-9,
    'trace': 1e-12,
    'affine': 1e-10,
    'dependence': 1e-10,
    'generator': 1e-12,
    'nullspace': 1e-8,
    'span': 1e-8,
    'kashiwara': 1e-8,
    'lagrangian': 1e-10,
    'weights': 1e-10,
    'one_point': 1e-10,
    'two_point': 1e-9,
    'symmetric_m': 1e-9,
    'gamma': 1e-9,
    'psd': 1e-9,
    'spin': 1e-12,
}


class Config:
    """Configuration class for the affine fermions toolkit"""

    # Reproducibility: default runs of every command use this seed
    DEFAULT_SEED = _env_int('AFFINE_DEFAULT_SEED', 1729)

    # Numerical tolerances, each overridable by AFFINE_TOL_<NAME>
    TOLERANCES: Dict[str, float] = {
        name: _env_float(f'AFFINE_TOL_{name.upper()}', value)
        for name, value in _DEFAULT_TOLERANCES.items()
    }

    # Supported envelopes
    MAX_ANTISYMMETRIZE_DEGREE = _env_int('AFFINE_MAX_ANTISYMMETRIZE_DEGREE', 8)
    MAX_GENERATOR_ARITY = _env_int('AFFINE_MAX_GENERATOR_ARITY', 6)
    MAX_LAPLACE_DIM = _env_int('AFFINE_MAX_LAPLACE_DIM', 6)
    MAX_COEFFICIENT_TABLE = _env_int('AFFINE_MAX_COEFFICIENT_TABLE', 100_000)
    MAX_MATERIALIZED_NODES = _env_int('AFFINE_MAX_MATERIALIZED_NODES', 32)
    MAX_TUPLES = _env_int('AFFINE_MAX_TUPLES', 2_000_000)
    MAX_SVD_BLOCK = _env_int('AFFINE_MAX_SVD_BLOCK', 720)

    # Sampled moments when the node tuples exceed MAX_TUPLES
    SLATER_SAMPLES = _env_int('AFFINE_SLATER_SAMPLES', 200_000)

    # Trial counts of the verify suites
    COLLAPSE_TRIALS = _env_int('AFFINE_COLLAPSE_TRIALS', 1000)
    MORPHISM_TRIALS = _env_int('AFFINE_MORPHISM_TRIALS', 500)
    TRACE_TRIALS = _env_int('AFFINE_TRACE_TRIALS', 100)
    TENSOR_TRIALS = _env_int('AFFINE_TENSOR_TRIALS', 100)
    AFFINE_TRIALS = _env_int('AFFINE_AFFINE_TRIALS', 100)
    LAPLACE_TRIALS = _env_int('AFFINE_LAPLACE_TRIALS', 200)
    PROBE_TRIALS = _env_int('AFFINE_PROBE_TRIALS', 1000)
    SLATER_TRIALS = _env_int('AFFINE_SLATER_TRIALS', 50)
    SYMMETRIC_M_TRIALS = _env_int('AFFINE_SYMMETRIC_M_TRIALS', 20)
    SYMPLECTIC_TRIALS = _env_int('AFFINE_SYMPLECTIC_TRIALS', 20)

    # Kernel export: JSON lists entries above this magnitude
    KERNEL_EXPORT_THRESHOLD = _env_float('AFFINE_KERNEL_EXPORT_THRESHOLD', 1e-12)

    # Logging
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'WARNING')
    LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

    # Supported Commands
    SUPPORTED_COMMANDS = {
        'verify': 'Run the invariant suites of every library module',
        'slater': 'Compute n-point functions and density matrices of an affine Slater determinant',
        'conjecture': 'Explore antisymmetric multi-affine forms through a nullspace computation',
        'kashiwara': 'Compute the Kashiwara index of a Lagrangian triple',
        'collapse-demo': 'Run the collapse pipeline on one triple of qubit states',
    }

    @classmethod
    def tolerance(cls, name: str, overrides: Optional[Mapping[str, float]] = None) -> float:
        """Resolve a tolerance, giving per-run overrides precedence."""
        if name not in cls.TOLERANCES:
            raise ValueError(f"Unknown tolerance name: {name}")
        if overrides and name in overrides:
            return float(overrides[name])
        return cls.TOLERANCES[name]

    @classmethod
    def validate(cls):
        """Validate that all tolerances and envelopes are usable"""
        invalid = []

        for name, value in cls.TOLERANCES.items():
            if not math.isfinite(value) or value <= 0:
                invalid.append(f'tolerance {name}={value}')

        for name in ('MAX_ANTISYMMETRIZE_DEGREE', 'MAX_GENERATOR_ARITY', 'MAX_LAPLACE_DIM',
                     'MAX_COEFFICIENT_TABLE', 'MAX_MATERIALIZED_NODES', 'MAX_TUPLES',
                     'MAX_SVD_BLOCK', 'SLATER_SAMPLES'):
            if getattr(cls, name) <= 0:
                invalid.append(name)

        if invalid:
            raise ValueError(f"Invalid configuration: {', '.join(invalid)}")

        return True
