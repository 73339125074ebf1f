"""JSON encoding of library objects.

Complex scalars are ``[re, im]`` pairs; complex arrays are nested lists
with ``[re, im]`` leaves.  Elements are
``{"algebra": {"kind", "r" | "q"}, "complex": bool, "data": [...]}``.
"""
from __future__ import annotations

import dataclasses
import enum
from fractions import Fraction

import numpy as np

from . import jordan as jd
from . import semigroups as sg
from .errors import DomainError
from .jordan import Algebra, Element, Kind


class SchemaError(ValueError):
    """Malformed JSON payload."""


# ---------------------------------------------------------------------------
# encoding


def _float(x: float):
    x = float(x)
    if x == 0.0:
        return 0.0  # drop the sign of -0.0 for byte-stable output
    return x


def encode_array(a) -> list:
    a = np.asarray(a)
    if np.iscomplexobj(a):
        return np.stack([a.real, a.imag], axis=-1).tolist() if a.ndim else [_float(a.real), _float(a.imag)]
    return a.tolist()


def encode_algebra(alg: Algebra) -> dict:
    if alg.kind is Kind.SPIN:
        return {"kind": alg.kind.value, "q": alg.q}
    return {"kind": alg.kind.value, "r": alg.r}


def encode_kind(kind: sg.GroupKind) -> dict:
    if kind.group == "sp":
        return {"group": "sp", "r": kind.a}
    if kind.group == "so_star":
        return {"group": "so_star", "l": kind.a}
    return {"group": "upq", "p": kind.a, "q": kind.b}


def encode(obj):
    """Convert a result to plain JSON data."""
    from . import boundary as bd
    from . import conformal as cf
    from . import cone
    from . import lie

    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_float(obj.real), _float(obj.imag)]
    if isinstance(obj, Fraction):
        return int(obj) if obj.denominator == 1 else float(obj)
    if isinstance(obj, np.ndarray):
        return encode_array(obj)
    if isinstance(obj, Algebra):
        return encode_algebra(obj)
    if isinstance(obj, sg.GroupKind):
        return encode_kind(obj)
    if isinstance(obj, Element):
        return {"algebra": encode_algebra(obj.algebra), "complex": obj.is_complex,
                "data": encode_array(obj.data)}
    if isinstance(obj, sg.HighestWeight):
        out = {"lambda_twice": obj.twice(), "is_half": obj.is_half}
        if obj.k is not None:
            out["k"] = obj.k
        if obj.assumption:
            out["assumption"] = obj.assumption
        return out
    if isinstance(obj, sg.SemigroupElement):
        out = {"kind": encode_kind(obj.kind), "gamma": encode_array(obj.gamma), "grade": obj.grade.value}
        if obj.w is not None:
            out["w"] = encode(obj.w)
        return out
    if isinstance(obj, sg.TubePoint):
        return {"kind": encode_kind(obj.kind), "Z": encode_array(obj.Z), "singular": obj.singular}
    if isinstance(obj, (cone.CompressionElement, cf.Conformal)):
        return {"algebra": encode_algebra(obj.algebra), "matrix": encode_array(obj.matrix)}
    if isinstance(obj, cf.Lift):
        return {"algebra": encode_algebra(obj.algebra), "matrix": encode_array(obj.g.matrix),
                "theta0": _float(obj.theta0)}
    if isinstance(obj, bd.StructureMap):
        return {"algebra": encode_algebra(obj.algebra), "op": encode_array(obj.op)}
    if isinstance(obj, lie.LieField):
        return {"algebra": encode_algebra(obj.algebra), "u": encode_array(obj.u),
                "T": encode_array(obj.T), "v": encode_array(obj.v)}
    if isinstance(obj, cone.FactoredCompression):
        return {"u": encode(obj.u), "a": encode_array(obj.a), "v": encode(obj.v)}
    if isinstance(obj, jd.SpectralDecomposition):
        return {"values": encode_array(obj.values), "frame": [encode(c) for c in obj.frame]}
    if isinstance(obj, jd.PeirceDecomposition):
        return {"dims": list(obj.dims()), "E1": encode_array(obj.E1),
                "Ehalf": encode_array(obj.Ehalf), "E0": encode_array(obj.E0)}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: encode(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    raise TypeError(f"cannot encode {type(obj).__name__}")


# ---------------------------------------------------------------------------
# decoding


def _need(d, key):
    if not isinstance(d, dict) or key not in d:
        raise SchemaError(f"missing field {key!r}")
    return d[key]


def decode_array(obj, ndim: int | None = None) -> np.ndarray:
    """Nested list to array; a trailing axis of length 2 beyond ``ndim`` is ``[re, im]``."""
    try:
        a = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"not a numeric array: {exc}") from None
    if ndim is not None:
        if a.ndim == ndim + 1 and a.shape[-1] == 2:
            return a[..., 0] + 1j * a[..., 1]
        if a.ndim != ndim:
            raise SchemaError(f"expected a {ndim}-dimensional array")
    return a


def decode_complex(obj) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, list) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    raise SchemaError("complex scalars are numbers or [re, im] pairs")


def decode_algebra(obj) -> Algebra:
    kind = _need(obj, "kind")
    size = obj.get("q") if kind == "spin" else obj.get("r")
    if size is None:
        raise SchemaError("algebra needs 'r' (matrix kinds) or 'q' (spin)")
    try:
        return jd.make_algebra(Kind(kind), int(size))
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise SchemaError(f"unknown algebra kind {kind!r}") from None


def decode_element(obj, alg: Algebra | None = None) -> Element:
    alg = decode_algebra(_need(obj, "algebra")) if alg is None else alg
    data = decode_array(_need(obj, "data"), len(alg.shape))
    return Element(alg, data, bool(obj.get("complex", False)))


def decode_kind(obj) -> sg.GroupKind:
    group = _need(obj, "group")
    if group == "sp":
        return sg.sp(int(_need(obj, "r")))
    if group == "so_star":
        return sg.so_star(int(_need(obj, "l")))
    if group == "upq":
        return sg.upq(int(_need(obj, "p")), int(_need(obj, "q")))
    raise SchemaError(f"unknown group {group!r}")


def decode_semigroup(obj) -> sg.SemigroupElement:
    kind = decode_kind(_need(obj, "kind"))
    w = obj.get("w")
    return sg.SemigroupElement(kind, decode_array(_need(obj, "gamma"), 2),
                               None if w is None else decode_complex(w))


def decode_tube(obj) -> sg.TubePoint:
    return sg.TubePoint(decode_kind(_need(obj, "kind")), decode_array(_need(obj, "Z"), 2))
