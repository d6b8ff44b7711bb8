"""
Check reports shared by every CLI command.

A report is a list of check records plus command-specific payload. It
serializes to JSON with sorted keys so that identical runs produce identical
bytes; wall time is only attached on request.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
from tabulate import tabulate

logger = logging.getLogger(__name__)

STATUS_PASS = 'pass'
STATUS_FAIL = 'fail'

# Process exit codes
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def to_jsonable(value: Any) -> Any:
    """Convert numpy and complex values into plain JSON types.

    Complex numbers become [re, im] pairs; real-valued complex numbers are
    written as floats.
    """
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        if value.imag == 0:
            return to_jsonable(float(value.real))
        return [to_jsonable(float(value.real)), to_jsonable(float(value.imag))]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return str(value)
        return value
    return value


@dataclass
class CheckRecord:
    """One verified claim: measured value against a tolerance."""

    name: str
    passed: bool
    measured: Any = None
    tolerance: Optional[float] = None
    reference: str = ''
    observation: bool = False

    @property
    def status(self) -> str:
        return STATUS_PASS if self.passed else STATUS_FAIL

    def to_dict(self) -> Dict[str, Any]:
        record = {
            'name': self.name,
            'status': self.status,
            'measured': to_jsonable(self.measured),
            'tolerance': self.tolerance,
            'reference': self.reference,
        }
        if self.observation:
            record['observation'] = True
        return record


@dataclass
class Report:
    """Records and payload of one command run."""

    command: str
    records: List[CheckRecord] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)
    wall_time: Optional[float] = None

    def check(self, name: str, measured: Any, tolerance: float, reference: str = '') -> CheckRecord:
        """Add a record that passes when the measured residual is within ``tolerance``."""
        passed = bool(np.all(np.asarray(measured, dtype=float) <= tolerance))
        record = CheckRecord(name, passed, measured, tolerance, reference)
        if not passed:
            logger.warning(f"Check {name} failed: measured {measured!r} > tolerance {tolerance!r}")
        self.records.append(record)
        return record

    def expect(self, name: str, condition: bool, measured: Any = None, reference: str = '') -> CheckRecord:
        """Add a record for an exact condition."""
        record = CheckRecord(name, bool(condition), measured, None, reference)
        if not record.passed:
            logger.warning(f"Check {name} failed: measured {measured!r}")
        self.records.append(record)
        return record

    def observe(self, name: str, measured: Any, reference: str = '') -> CheckRecord:
        """Add an always-passing observation carrying a measured value."""
        record = CheckRecord(name, True, measured, None, reference, observation=True)
        self.records.append(record)
        return record

    def extend(self, other: 'Report') -> None:
        self.records.extend(other.records)
        self.data.update(other.data)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.passed else EXIT_CHECK_FAILED

    def summary(self) -> Dict[str, int]:
        failed = sum(1 for r in self.records if not r.passed)
        return {'total': len(self.records), 'passed': len(self.records) - failed, 'failed': failed}

    def to_dict(self) -> Dict[str, Any]:
        payload = {
            'command': self.command,
            'records': [r.to_dict() for r in self.records],
            'summary': self.summary(),
            'data': to_jsonable(self.data),
        }
        if self.wall_time is not None:
            payload['wall_time'] = self.wall_time
        return payload

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + '\n'

    def render_table(self) -> str:
        """Console table of the check records."""
        rows = []
        for r in self.records:
            measured = to_jsonable(r.measured)
            if isinstance(measured, float):
                measured = f"{measured:.3e}"
            rows.append([r.name, r.status, measured, '' if r.tolerance is None else f"{r.tolerance:g}"])
        summary = self.summary()
        table = tabulate(rows, headers=['check', 'status', 'measured', 'tolerance'], tablefmt='simple')
        return f"{table}\n\n{self.command}: {summary['passed']}/{summary['total']} passed"
