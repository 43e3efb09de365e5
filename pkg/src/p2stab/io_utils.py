"""Serialization helpers shared by the CLI and the report writers.

All file output is deterministic: JSON with sorted keys, LF line endings,
rationals rendered as "p/q" strings, atomic replace-on-write, and no
timestamps anywhere.
"""
from __future__ import annotations

import json
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence

from .errors import InputError

VERSION = "0.1.0"
TOOL = "p2stab"


def parse_fraction(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational number: {s!r}") from exc


def parse_triple(s: str) -> List[Fraction]:
    parts = [p for p in s.replace(" ", "").split(",") if p != ""]
    if len(parts) != 3:
        raise InputError(f"expected three comma-separated rationals, got {s!r}")
    return [parse_fraction(p) for p in parts]


def format_fraction(x) -> str:
    return str(Fraction(x))


def format_vector(v: Sequence) -> str:
    """Compact bracketed form used on stdout: [a,b,c] with no spaces."""
    return "[" + ",".join(format_fraction(x) for x in v) + "]"


def jsonable(obj):
    """Recursively rewrite Fractions (and tuples/sets) into JSON-safe data."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(jsonable(v) for v in obj)
    return obj


def json_meta(seed: int = 0) -> dict:
    return {"seed": seed, "tool": TOOL, "version": VERSION}


def dumps_json(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def dump_json(path: Optional[str], obj) -> str:
    """Serialize; if path is given, write atomically (temp file + rename)."""
    text = dumps_json(obj)
    if path is not None:
        write_text_atomic(path, text)
    return text


def write_text_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def thread_count() -> int:
    raw = os.environ.get("P2STAB_THREADS", "")
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"P2STAB_THREADS must be an integer, got {raw!r}")
    return max(1, n)


def parallel_map(fn: Callable, items: Iterable) -> List:
    """Map preserving input order; uses threads only when P2STAB_THREADS > 1.

    Work items must not depend on each other, so the result is identical
    whatever the thread count — parallelism never changes output bytes.
    """
    items = list(items)
    n = thread_count()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))
