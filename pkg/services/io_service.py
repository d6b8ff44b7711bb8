"""
IO Service Module
JSON input documents and kernel exports
"""

import json
import logging
import os
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from config import Config
from services.domain.lagrangian import LagrangianTriple
from services.domain.measured_space import MeasuredSpace, WaveFunction
from services.domain.qubits import Triple
from services.errors import InputRejectedError

logger = logging.getLogger(__name__)


class IOService:
    """
    Service reading input documents and writing kernel files.
    """

    def load_json(self, path: str) -> Dict[str, Any]:
        """
        Read a JSON document.

        Args:
            path: Path to the document

        Returns:
            Parsed object

        Raises:
            InputRejectedError: if the file is missing or not valid JSON
        """
        try:
            with open(path, 'r', encoding='utf-8') as f:
                payload = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.debug(f"Cannot read input document {path}: {e}")
            raise InputRejectedError(f"Cannot read input document {path}: {e}")
        if not isinstance(payload, dict):
            raise InputRejectedError(f"Input document {path} must hold a JSON object")
        return payload

    @staticmethod
    def parse_complex(value) -> complex:
        """A real number or an [re, im] pair."""
        if isinstance(value, (list, tuple)):
            if len(value) != 2:
                raise InputRejectedError(f"Complex numbers are [re, im] pairs, got {value!r}")
            return complex(float(value[0]), float(value[1]))
        try:
            return complex(float(value))
        except (TypeError, ValueError):
            raise InputRejectedError(f"Not a number: {value!r}")

    def triple_from_json(self, payload: Dict[str, Any]) -> Triple:
        """{"a": [..], "b": [..], "c": [..]} with two coordinates each."""
        try:
            vectors = [[self.parse_complex(z) for z in payload[key]] for key in ('a', 'b', 'c')]
        except KeyError as e:
            raise InputRejectedError(f"Triple document is missing key {e}")
        except TypeError as e:
            raise InputRejectedError(f"Malformed triple document: {e}")
        return Triple(*vectors)

    def slater_input_from_json(self, payload: Dict[str, Any],
                               weights_tolerance: Optional[float] = None) -> Tuple[MeasuredSpace, WaveFunction]:
        """{"weights": [...], "phi": [[φ_1(x_k), φ_2(x_k)], ...], "nodes": [...] (optional)}."""
        try:
            weights = np.asarray(payload['weights'], dtype=float)
            values = np.asarray(payload['phi'], dtype=float)
        except KeyError as e:
            raise InputRejectedError(f"Slater document is missing key {e}")
        except (TypeError, ValueError) as e:
            raise InputRejectedError(f"Malformed Slater document: {e}")
        nodes = payload.get('nodes')
        space = MeasuredSpace(weights, None if nodes is None else [str(n) for n in nodes], weights_tolerance)
        phi = WaveFunction(values)
        phi.check_space(space)
        return space, phi

    def lagrangian_from_json(self, payload: Dict[str, Any], tolerance: Optional[float] = None) -> LagrangianTriple:
        return LagrangianTriple.from_json(payload, tolerance)

    def write_text(self, path: str, text: str) -> None:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(text)

    def kernel_frame(self, matrix: np.ndarray, labels: Optional[Sequence[str]] = None) -> pd.DataFrame:
        labels = list(labels) if labels is not None else [str(i) for i in range(matrix.shape[0])]
        return pd.DataFrame(np.asarray(matrix, dtype=float), index=labels, columns=labels)

    def write_kernel_csv(self, matrix: np.ndarray, path: str, labels: Optional[Sequence[str]] = None) -> None:
        """Dense kernel as CSV with node labels on both axes."""
        self.kernel_frame(matrix, labels).to_csv(path, float_format='%.17g')
        logger.info(f"Kernel {matrix.shape} written to {path}")

    def kernel_to_sparse(self, matrix: np.ndarray, threshold: float = None) -> Dict[str, Any]:
        """Entries with |value| above ``threshold`` as {"row", "col", "value"} records."""
        threshold = threshold if threshold is not None else Config.KERNEL_EXPORT_THRESHOLD
        matrix = np.asarray(matrix, dtype=float)
        rows, cols = np.nonzero(np.abs(matrix) > threshold)
        return {
            'shape': list(matrix.shape),
            'threshold': threshold,
            'entries': [
                {'row': int(i), 'col': int(j), 'value': float(matrix[i, j])}
                for i, j in zip(rows, cols)
            ],
        }

    @staticmethod
    def pair_labels(nodes: Sequence[Any]) -> list:
        return [f"{p}|{q}" for p in nodes for q in nodes]


# Global instance
io_service = IOService()
