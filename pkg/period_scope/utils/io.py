import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np
from pydantic import BaseModel

from period_scope.utils.config import Config
from period_scope.utils.errors import SignalIOError

PathLike = Union[str, Path]


def _atomic_write(path: PathLike, text: str) -> None:
    """
    Write text to a temporary sibling file and rename it over the target.
    """
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(
            prefix=f".{target.name}.", suffix=".tmp", dir=target.parent
        )
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
            os.replace(tmp_name, target)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise
    except OSError as e:
        raise SignalIOError(f"Cannot write {target}: {e}") from e


def format_sample(value: float) -> str:
    return f"{float(value):.{Config.CSV_SIGNIFICANT_DIGITS}g}"


def write_signal_csv(
    path: PathLike, samples: Iterable[float], header: Sequence[str] = ()
) -> None:
    """
    Write one sample per line, preceded by optional '#' comment lines.
    17 significant digits make the round trip bit-faithful.
    """
    lines = [f"# {line}" for line in header]
    lines.extend(format_sample(value) for value in samples)
    _atomic_write(path, "\n".join(lines) + "\n")


def read_signal_csv(path: PathLike) -> np.ndarray:
    """
    Read a signal file: one real sample per line, '#' lines and blank lines ignored.
    """
    values = []
    try:
        with open(path, "r", encoding="utf-8") as handle:
            for line_number, line in enumerate(handle, start=1):
                text = line.strip()
                if not text or text.startswith("#"):
                    continue
                try:
                    values.append(float(text))
                except ValueError as e:
                    raise SignalIOError(
                        f"{path}:{line_number}: not a number: {text!r}"
                    ) from e
    except OSError as e:
        raise SignalIOError(f"Cannot read {path}: {e}") from e
    if not values:
        raise SignalIOError(f"{path} holds no samples")
    return np.asarray(values, dtype=np.float64)


def format_table_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    """
    A CSV table with a header row. Floats use the signal sample format.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_format_cell(cell) for cell in row])
    return buffer.getvalue()


def write_table_csv(
    path: PathLike, header: Sequence[str], rows: Iterable[Sequence]
) -> None:
    _atomic_write(path, format_table_csv(header, rows))


def _format_cell(cell) -> str:
    if cell is None:
        return ""
    if isinstance(cell, (float, np.floating)):
        return format_sample(cell)
    return str(cell)


def write_json(path: PathLike, payload: Union[BaseModel, dict]) -> None:
    if isinstance(payload, BaseModel):
        text = payload.model_dump_json(indent=2, by_alias=True)
    else:
        text = json.dumps(payload, indent=2, ensure_ascii=False)
    _atomic_write(path, text + "\n")


def read_json(path: PathLike) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as e:
        raise SignalIOError(f"Cannot read {path}: {e}") from e
