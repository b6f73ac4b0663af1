"""Frame files and canonical JSON output.

A frame file is a JSON object::

    {
      "scalar": "real",
      "m": 2,
      "n": 3,
      "p": 2,
      "r": "inf",
      "x": [[1, 0], ...],
      "y": [[...], ...],
      "meta": {"name": "...", "description": "..."}
    }

``y`` is optional. Complex entries are ``[re, im]`` pairs and an infinite
exponent is the string ``"inf"``. :func:`dumps` writes fields in this order
with 17 significant digits, so write -> read -> write is byte-stable.
"""

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .spaces import DomainError, Scalar, check_exponent

FIELD_ORDER = ("scalar", "m", "n", "p", "r", "x", "y", "meta")


class FrameFileError(ValueError):
    """Malformed frame file."""


@dataclass(frozen=True, eq=False)
class FrameFile:
    scalar: Scalar
    m: int
    n: int
    p: float
    r: float
    x: np.ndarray
    y: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    @property
    def name(self):
        return self.meta.get("name", "")

    def to_dict(self):
        out = {"scalar": self.scalar.value, "m": self.m, "n": self.n,
               "p": self.p, "r": self.r, "x": encode_array(self.x, self.scalar)}
        if self.y is not None:
            out["y"] = encode_array(self.y, self.scalar)
        out["meta"] = dict(self.meta)
        return out

    def pair(self, tol=1e-10):
        from .crossframe import CrossFramePair

        if self.y is None:
            raise FrameFileError("the file has no y family")
        return CrossFramePair.from_arrays(self.x, self.y, self.p, self.r, tol, self.scalar)

    def family(self, side):
        from .frames import COFRAME, FrameFamily

        rows = self.x if side == COFRAME else self.y
        if rows is None:
            raise FrameFileError("the file has no y family")
        return FrameFamily.from_rows(rows, self.p, self.r, side, self.scalar)


def encode_array(a, scalar):
    a = np.asarray(a)
    if Scalar(scalar) is Scalar.COMPLEX:
        return [[[float(v.real), float(v.imag)] for v in row] for row in a]
    return [[float(v) for v in row] for row in np.real(a)]


def decode_array(data, scalar, shape, name):
    try:
        if Scalar(scalar) is Scalar.COMPLEX:
            raw = np.asarray(data, dtype=float)
            if raw.ndim != 3 or raw.shape[-1] != 2:
                raise FrameFileError(f"{name}: complex entries must be [re, im] pairs")
            arr = raw[..., 0] + 1j * raw[..., 1]
        else:
            arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FrameFileError(f"{name}: {exc}") from None
    if arr.shape != shape:
        raise FrameFileError(f"{name}: expected shape {shape}, got {arr.shape}")
    return arr


def _exponent(value, name):
    if isinstance(value, str) and value.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        return check_exponent(value)
    except DomainError as exc:
        raise FrameFileError(f"{name}: {exc}") from None


def from_dict(d):
    if not isinstance(d, dict):
        raise FrameFileError("a frame file must be a JSON object")
    missing = [k for k in ("scalar", "m", "n", "p", "r", "x") if k not in d]
    if missing:
        raise FrameFileError(f"missing fields: {', '.join(missing)}")
    try:
        scalar = Scalar(d["scalar"])
    except ValueError:
        raise FrameFileError(f"scalar must be 'real' or 'complex', got {d['scalar']!r}") from None
    m, n = d["m"], d["n"]
    if not (isinstance(m, int) and isinstance(n, int) and m >= 1 and n >= 1):
        raise FrameFileError("m and n must be positive integers")
    x = decode_array(d["x"], scalar, (n, m), "x")
    y = decode_array(d["y"], scalar, (n, m), "y") if d.get("y") is not None else None
    meta = d.get("meta", {})
    if not isinstance(meta, dict):
        raise FrameFileError("meta must be an object")
    return FrameFile(scalar, m, n, _exponent(d["p"], "p"), _exponent(d["r"], "r"), x, y, meta)


def loads(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FrameFileError(f"invalid JSON: {exc}") from None
    return from_dict(data)


def load(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FrameFileError(f"cannot read {path}: {exc}") from None
    return loads(text)


def save(frame_file, path):
    Path(path).write_text(dumps(frame_file), encoding="utf-8")


def fixture_names():
    root = resources.files(__package__) / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def fixture_path(name):
    return resources.files(__package__) / "fixtures" / f"{name}.json"


def load_fixture(name):
    if name not in fixture_names():
        raise FrameFileError(f"no bundled fixture named {name!r}")
    return loads(fixture_path(name).read_text(encoding="utf-8"))


def resolve(source):
    """Load a path, falling back to a bundled fixture of that name."""
    path = Path(source)
    if path.exists():
        return load(path)
    stem = path.name[:-5] if path.name.endswith(".json") else path.name
    if stem in fixture_names():
        return load_fixture(stem)
    raise FrameFileError(f"no such file or fixture: {source}")


# canonical emitter

def format_number(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return '"nan"'
    if math.isinf(v):
        return '"inf"' if v > 0 else '"-inf"'
    if v == 0:
        return "0"
    return format(v, ".17g")


def _plain(obj):
    if isinstance(obj, FrameFile):
        return obj.to_dict()
    if isinstance(obj, Scalar):
        return obj.value
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return _plain(np.stack([obj.real, obj.imag], axis=-1))
        return obj.tolist()
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, tuple):
        return list(obj)
    return obj


def _emit(obj, indent, level):
    obj = _plain(obj)
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_emit(v, indent, level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(_plain(v), (list, dict)) for v in obj):
            return "[" + ", ".join(_emit(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _emit(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (bool, np.bool_, int, float, np.integer, np.floating)):
        return format_number(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, indent=2):
    """Canonical JSON text; dict order is kept, floats use 17 significant digits."""
    return _emit(obj, indent, 0) + "\n"
