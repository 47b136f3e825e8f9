"""Canonical JSON: sorted keys, compact separators, trailing newline."""

from __future__ import annotations

import json
import sys
from typing import Any

from .errors import UsageError


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"


def load(path: str | None) -> Any:
    try:
        if path is None or path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError("cannot read %s: %s" % (path, exc.strerror)) from exc
    except json.JSONDecodeError as exc:
        raise UsageError("%s is not valid JSON: %s" % (path or "stdin", exc.msg)) from exc


def emit(obj: Any, path: str | None) -> None:
    text = dumps(obj)
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
