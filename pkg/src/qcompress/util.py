"""Seed-stream derivation and deterministic file output helpers.

All randomness in an experiment flows from one base seed through named
sub-streams so that adding a consumer never shifts existing draws.  CSV
files are written atomically with fixed float formatting (17 significant
digits, '.' decimal) so re-runs are byte-identical on one platform.
"""

import hashlib
import json
import os
import tempfile

import numpy as np


def sub_seed(seed: int, purpose: str) -> int:
    """Derive a 63-bit integer seed for a named consumer of `seed`."""
    digest = hashlib.sha256(f"{seed}/{purpose}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little") >> 1


def substream(seed: int, purpose: str) -> np.random.Generator:
    """Seeded generator for a named consumer; independent per purpose."""
    return np.random.default_rng(sub_seed(seed, purpose))


def fmt(value) -> str:
    """Format one CSV cell: ints verbatim, floats at 17 significant digits."""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _atomic_write(path, data: bytes):
    """Write via a temp file in the same directory, then rename."""
    dirname = os.path.dirname(os.path.abspath(path))
    os.makedirs(dirname, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=dirname, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path, header, rows):
    """Atomically write rows of cells under a comma-separated header."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    _atomic_write(path, ("\n".join(lines) + "\n").encode("utf-8"))


def write_json(path, obj):
    """Atomically write a JSON document (UTF-8, sorted keys)."""
    data = json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)
    _atomic_write(path, (data + "\n").encode("utf-8"))


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()
