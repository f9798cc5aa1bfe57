"""Reading the JSON documents accepted by the command line."""

from __future__ import annotations

import functools
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .adic import NAdicNumber, SolenoidPoint
from .errors import GroupMismatch, LCAError
from .groups import Group, generated_subgroup
from .phase_space import StateVector
from .schwartz_bruhat import SchwartzBruhatFn
from .second_degree import SStateSpec, SymmetricHom, cyclic_decompose


def load(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise LCAError(f"cannot read {path}: {exc}") from exc


def _malformed(fn):
    """Report missing keys or badly shaped values as invalid input."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except LCAError:
            raise
        except (KeyError, TypeError, IndexError, ValueError) as exc:
            raise LCAError(f"malformed input for {fn.__name__}: {exc!r}") from exc

    return wrapper


def parse_orders(text: str) -> Group:
    try:
        return Group(tuple(int(t) for t in text.split(",") if t.strip()))
    except ValueError as exc:
        raise LCAError(f"bad group {text!r}: {exc}") from exc


@_malformed
def group_from_json(obj: dict) -> Group:
    return Group(tuple(int(d) for d in obj["orders"]))


def complex_array(pairs) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise LCAError("complex values must be given as [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


@_malformed
def state_from_json(obj: dict, group: Group | None = None) -> StateVector:
    g = group_from_json(obj["group"]) if "group" in obj else group
    if g is None:
        raise LCAError("state JSON has no group and none was given")
    if group is not None and g != group:
        raise GroupMismatch(f"state lives on {g!r}, expected {group!r}")
    return StateVector(g, complex_array(obj["values"]))


@_malformed
def sstate_from_json(obj: dict, group: Group) -> SStateSpec:
    H = generated_subgroup(group, obj["H"]["generators"])
    beta = SymmetricHom(cyclic_decompose(H), tuple(tuple(int(v) for v in row) for row in obj.get("beta", [])))
    scale = obj.get("scale", [1.0, 0.0])
    return SStateSpec(
        H,
        beta,
        tuple(obj.get("chi", group.zero)),
        tuple(obj.get("shift", group.zero)),
        complex(scale[0], scale[1]),
    )


@_malformed
def nadic_from_json(obj: dict) -> NAdicNumber:
    return NAdicNumber.from_json(obj)


@_malformed
def sb_from_json(obj: dict) -> SchwartzBruhatFn:
    return SchwartzBruhatFn(int(obj["base"]), int(obj["m"]), int(obj["M"]), complex_array(obj["coeffs"]))


@_malformed
def solenoid_from_json(obj: dict) -> SolenoidPoint:
    return SolenoidPoint(int(obj["base"]), Fraction(str(obj["a"])), NAdicNumber.from_json(obj["x"]))


def dumps(obj) -> str:
    """Compact, key-sorted JSON so equal inputs give byte-identical output."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=_default)


def _default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"not serialisable: {type(o).__name__}")
