"""JSON instance files.

A file holds one object with ``kind`` ("bip" or "bkp"), the data fields
(``A``/``b``/``u`` or ``a``/``b``/``u``) and an optional objective ``c``.
Integers are written as decimal strings so that no reader can truncate
them; plain JSON integers are accepted on input.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Optional, Union

from .model import BipInstance, BkpInstance

Instance = Union[BipInstance, BkpInstance]


class InstanceFormatError(ValueError):
    pass


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool):
        raise InstanceFormatError(f"{where}: expected an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError:
            pass
    raise InstanceFormatError(f"{where}: expected an integer, got {value!r}")


def _vector(doc: dict, key: str) -> list[int]:
    if key not in doc:
        raise InstanceFormatError(f"missing field {key!r}")
    value = doc[key]
    if not isinstance(value, list):
        raise InstanceFormatError(f"{key}: expected a list")
    return [_int(v, f"{key}[{i}]") for i, v in enumerate(value)]


def instance_from_dict(doc: Any) -> tuple[Instance, Optional[list[int]]]:
    """Parse a document; returns the instance and the objective if present."""
    if not isinstance(doc, dict):
        raise InstanceFormatError("instance document must be a JSON object")
    kind = doc.get("kind")
    if kind == "bkp":
        inst: Instance = BkpInstance(_vector(doc, "a"), _int(doc.get("b"), "b"), _vector(doc, "u"))
    elif kind == "bip":
        rows = doc.get("A")
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise InstanceFormatError("A: expected a list of rows")
        A = [[_int(v, f"A[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(rows)]
        inst = BipInstance(A, _vector(doc, "b"), _vector(doc, "u"))
    else:
        raise InstanceFormatError(f"kind must be 'bip' or 'bkp', got {kind!r}")
    c = _vector(doc, "c") if "c" in doc else None
    return inst, c


def instance_to_dict(inst: Instance, c: Optional[list[int]] = None) -> dict:
    if isinstance(inst, BkpInstance):
        doc: dict = {"kind": "bkp", "a": [str(v) for v in inst.a], "b": str(inst.b)}
    else:
        doc = {
            "kind": "bip",
            "A": [[str(v) for v in row] for row in inst.A],
            "b": [str(v) for v in inst.b],
        }
    doc["u"] = [str(v) for v in inst.u]
    if c is not None:
        doc["c"] = [str(v) for v in c]
    return doc


def load_instance(path: str) -> tuple[Instance, Optional[list[int]]]:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InstanceFormatError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path} is not valid JSON: {exc}") from exc
    return instance_from_dict(doc)


def exact(value: Any) -> Any:
    """Convert ints and Fractions (nested in lists/dicts) to decimal or
    ``p/q`` strings."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, Fraction)):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [exact(v) for v in value]
    if isinstance(value, dict):
        return {k: exact(v) for k, v in value.items()}
    return value
