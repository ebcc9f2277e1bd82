"""
CSV and JSON emitters.

Floats are written with 17 significant digits so every value re-parses to
the same double.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, TextIO
import csv
import json
import math

from config import APP_VERSION

CSV = 'csv'
JSON = 'json'
FORMATS = (CSV, JSON)


def format_float(x: float) -> str:
    return f"{x:.17g}"


def _cell(value: Any) -> str:
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _jsonable(value: Any) -> Any:
    # NaN and inf are not JSON; emit them as null
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, 'item'):  # numpy scalar
        return _jsonable(value.item())
    return value


@dataclass
class OutputEnvelope:
    """Everything one command emits."""
    command: str
    parameters: Dict[str, Any]
    result: Any
    rows: List[Dict[str, Any]] = field(default_factory=list)
    seed: Optional[int] = None
    version: str = APP_VERSION

    def to_json(self) -> Dict[str, Any]:
        payload = {
            'command': self.command,
            'parameters': self.parameters,
            'result': self.result,
            'version': self.version,
        }
        if self.seed is not None:
            payload['seed'] = self.seed
        return _jsonable(payload)


def write_csv(rows: List[Dict[str, Any]], stream: TextIO):
    """Header from the union of row keys, in first-seen order."""
    columns: List[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])


def emit(envelope: OutputEnvelope, fmt: str, stream: TextIO):
    """
    Write an envelope as JSON, or its rows as CSV.

    Stochastic CSV output gets the seed as a column.
    """
    if fmt == JSON:
        json.dump(envelope.to_json(), stream, indent=2)
        stream.write('\n')
    elif fmt == CSV:
        rows = envelope.rows or [envelope.result]
        if envelope.seed is not None:
            rows = [{**row, 'seed': envelope.seed} for row in rows]
        write_csv(rows, stream)
    else:
        raise ValueError(f"Unknown format '{fmt}'; expected one of {FORMATS}")
