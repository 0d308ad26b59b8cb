"""Complex baseband sample files: raw interleaved float64 I/Q or two-column CSV."""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

__all__ = ["SampleFileError", "read_samples", "write_samples"]

CSV_SUFFIXES = {".csv", ".txt"}


class SampleFileError(ValueError):
    pass


def _is_csv(path: Path) -> bool:
    return path.suffix.lower() in CSV_SUFFIXES


def read_samples(path: str | os.PathLike) -> np.ndarray:
    """Load complex samples, picking the format from the file extension.

    ``.csv``/``.txt`` files hold one ``I,Q`` pair per line (an optional
    non-numeric header line is skipped). Anything else is read as
    interleaved little-endian float64 ``I, Q, I, Q, ...``.

    Raises:
        SampleFileError: on unreadable, empty or malformed content.
    """
    path = Path(path)
    if not path.is_file():
        raise SampleFileError(f"no such sample file: {path}")
    if _is_csv(path):
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
        if lines:
            try:
                [float(v) for v in lines[0].split(",")]
            except ValueError:
                lines = lines[1:]
        rows = []
        for lineno, line in enumerate(lines, 1):
            parts = line.split(",")
            if len(parts) != 2:
                raise SampleFileError(f"{path}: line {lineno} does not hold an I,Q pair")
            try:
                rows.append((float(parts[0]), float(parts[1])))
            except ValueError:
                raise SampleFileError(f"{path}: line {lineno} is not numeric") from None
        data = np.asarray(rows, dtype=np.float64).reshape(-1, 2)
        x = data[:, 0] + 1j * data[:, 1]
    else:
        raw = np.fromfile(path, dtype="<f8")
        if path.stat().st_size % 16:
            raise SampleFileError(
                f"{path}: size {path.stat().st_size} bytes is not a whole number of float64 I/Q pairs"
            )
        x = raw[0::2] + 1j * raw[1::2]
    if x.size == 0:
        raise SampleFileError(f"{path}: no samples")
    if not np.all(np.isfinite(x)):
        raise SampleFileError(f"{path}: contains non-finite samples")
    return x.astype(np.complex128)


def write_samples(path: str | os.PathLike, x: np.ndarray) -> None:
    path = Path(path)
    x = np.asarray(x, dtype=np.complex128)
    if _is_csv(path):
        with open(path, "w") as fh:
            fh.write("i,q\n")
            for v in x:
                fh.write(f"{float(v.real)!r},{float(v.imag)!r}\n")
    else:
        interleaved = np.empty(2 * x.size, dtype="<f8")
        interleaved[0::2] = x.real
        interleaved[1::2] = x.imag
        interleaved.tofile(path)
