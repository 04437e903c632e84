import csv
import math
from io import StringIO

import numpy as np

from errors import InputError
from sequences import TimeWindowSequence, Window


def format_float(value: float) -> str:
    """17 significant digits round-trip a double."""
    if value == 0:
        return "0"
    return f"{value:.17g}"


def parse_float(value: str) -> float:
    clean = (value or "").strip()
    if not clean:
        raise ValueError("Empty value")
    number = float(clean)
    if not math.isfinite(number):
        raise ValueError(f"Non-finite value {clean!r}")
    return number


def parse_matrix(content: str) -> np.ndarray:
    reader = csv.reader(StringIO(content))
    rows: list[list[float]] = []
    errors: list[str] = []
    for idx, raw in enumerate(reader, start=1):
        if not raw or all(not cell.strip() for cell in raw):
            continue
        try:
            rows.append([parse_float(cell) for cell in raw])
        except ValueError as exc:
            errors.append(f"Row {idx}: {exc}")
    if errors:
        raise InputError("Invalid matrix CSV", errors=errors)
    if not rows:
        raise InputError("Matrix CSV is empty")
    width = len(rows[0])
    if len(rows) != width or any(len(row) != width for row in rows):
        raise InputError(
            f"Matrix CSV must have N rows of N values, got {len(rows)} rows",
            row_lengths=[len(row) for row in rows],
        )
    return np.array(rows, dtype=float)


def parse_sequence(content: str) -> TimeWindowSequence:
    reader = csv.reader(StringIO(content))
    header = next(reader, None)
    if not header or header[0].strip() != "t" or len(header) < 2:
        raise InputError("Sequence CSV needs a header 't,v1,...,vN'")
    dim = len(header) - 1
    times: list[int] = []
    values: list[list[float]] = []
    errors: list[str] = []
    for idx, raw in enumerate(reader, start=2):
        if not raw or all(not cell.strip() for cell in raw):
            continue
        try:
            if len(raw) != dim + 1:
                raise ValueError(f"expected {dim + 1} columns, got {len(raw)}")
            times.append(int(raw[0].strip()))
            values.append([parse_float(cell) for cell in raw[1:]])
        except ValueError as exc:
            errors.append(f"Row {idx}: {exc}")
    if errors:
        raise InputError("Invalid sequence CSV", errors=errors)
    if not times:
        raise InputError("Sequence CSV has no rows")
    expected = list(range(times[0], times[0] + len(times)))
    if times != expected:
        raise InputError("Sequence times must be consecutive integers")
    window = Window(times[0], times[-1])
    return TimeWindowSequence.from_real(window, np.array(values, dtype=float))


def export_matrix(matrix: np.ndarray) -> str:
    output = StringIO()
    writer = csv.writer(output, lineterminator="\n")
    for row in np.asarray(matrix, dtype=float):
        writer.writerow([format_float(float(v)) for v in row])
    return output.getvalue()


def export_sequence(sequence: TimeWindowSequence) -> str:
    output = StringIO()
    writer = csv.writer(output, lineterminator="\n")
    writer.writerow(["t"] + [f"v{i}" for i in range(1, sequence.dim + 1)])
    values = sequence.real_values()
    for t, row in zip(sequence.times, values):
        writer.writerow([str(int(t))] + [format_float(float(v)) for v in row])
    return output.getvalue()
