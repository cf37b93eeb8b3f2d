"""JSON schemas for channel, state and ensemble files.

Complex numbers are always ``[re, im]`` pairs and matrices are row-major
2x2 arrays of such pairs, so files round-trip bit-exactly.

Channel::

    {"kind": "amplitude_damping", "p": 0.5}
    {"kind": "phase_damping", "z": [0.6, 0.0]}
    {"kind": "canonical", "a00": [..], "a11": [..], "b01": [..], "b10": [..]}
    {"kind": "kraus", "A": [[[re, im], [re, im]], [[re, im], [re, im]]], "B": ...}

State::

    {"bloch": [x1, x2, x3]}   or   {"matrix": [[[re, im], ...], ...]}

Ensemble::

    {"members": [{"weight": 0.5, "state": {...}}, ...]}
"""

from __future__ import annotations

import json
from typing import Annotated, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, model_validator

from .channels import (
    AmplitudeDamping,
    Canonical,
    ChannelSpec,
    Ensemble,
    KrausPair,
    PhaseDamping,
)
from .qubit import DensityOperator, density_from_bloch

ComplexPair = Annotated[List[float], Field(min_length=2, max_length=2)]
Row = Annotated[List[ComplexPair], Field(min_length=2, max_length=2)]
Matrix = Annotated[List[Row], Field(min_length=2, max_length=2)]


class SpecParseError(ValueError):
    """The document does not match the schema."""


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class KrausFile(_Strict):
    kind: Literal["kraus"]
    A: Matrix
    B: Matrix


class PhaseDampingFile(_Strict):
    kind: Literal["phase_damping"]
    z: ComplexPair


class AmplitudeDampingFile(_Strict):
    kind: Literal["amplitude_damping"]
    p: float


class CanonicalFile(_Strict):
    kind: Literal["canonical"]
    a00: ComplexPair
    a11: ComplexPair
    b01: ComplexPair
    b10: ComplexPair


ChannelSpecFile = Annotated[
    Union[KrausFile, PhaseDampingFile, AmplitudeDampingFile, CanonicalFile],
    Field(discriminator="kind"),
]
_channel_adapter = TypeAdapter(ChannelSpecFile)


class StateSpecFile(_Strict):
    bloch: Optional[Annotated[List[float], Field(min_length=3, max_length=3)]] = None
    matrix: Optional[Matrix] = None

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.bloch is None) == (self.matrix is None):
            raise ValueError("give exactly one of 'bloch' or 'matrix'")
        return self


class EnsembleMemberFile(_Strict):
    weight: float
    state: StateSpecFile


class EnsembleFile(_Strict):
    members: List[EnsembleMemberFile] = Field(min_length=1)


def _cplx(pair) -> complex:
    return complex(pair[0], pair[1])


def _pair(c) -> list:
    c = complex(c)
    return [c.real, c.imag]


def _matrix(rows) -> np.ndarray:
    return np.array([[_cplx(e) for e in row] for row in rows], dtype=complex)


def _rows(m) -> list:
    return [[_pair(e) for e in row] for row in np.asarray(m)]


def _load(text_or_obj):
    if isinstance(text_or_obj, (str, bytes)):
        try:
            return json.loads(text_or_obj)
        except json.JSONDecodeError as exc:
            raise SpecParseError(f"invalid JSON: {exc}") from exc
    return text_or_obj


def _format_errors(exc: ValidationError) -> str:
    lines = []
    for err in exc.errors():
        loc = ".".join(str(p) for p in err["loc"]) or "<root>"
        lines.append(f"{loc}: {err['msg']}")
    return "; ".join(lines)


def parse_channel(doc) -> ChannelSpec:
    """Channel spec from a JSON string or decoded object.

    Schema problems raise :class:`SpecParseError`; values that parse but
    violate a channel invariant raise :class:`~qroof.qubit.DomainError`.
    """
    try:
        f = _channel_adapter.validate_python(_load(doc))
    except ValidationError as exc:
        raise SpecParseError(_format_errors(exc)) from exc
    if isinstance(f, KrausFile):
        return KrausPair(_matrix(f.A), _matrix(f.B))
    if isinstance(f, PhaseDampingFile):
        return PhaseDamping(_cplx(f.z))
    if isinstance(f, AmplitudeDampingFile):
        return AmplitudeDamping(f.p)
    return Canonical(_cplx(f.a00), _cplx(f.a11), _cplx(f.b01), _cplx(f.b10))


def dump_channel(spec: ChannelSpec) -> dict:
    if isinstance(spec, KrausPair):
        return {"kind": "kraus", "A": _rows(spec.A), "B": _rows(spec.B)}
    if isinstance(spec, PhaseDamping):
        return {"kind": "phase_damping", "z": _pair(spec.z)}
    if isinstance(spec, AmplitudeDamping):
        return {"kind": "amplitude_damping", "p": spec.p}
    if isinstance(spec, Canonical):
        return {"kind": "canonical", "a00": _pair(spec.a00), "a11": _pair(spec.a11),
                "b01": _pair(spec.b01), "b10": _pair(spec.b10)}
    raise TypeError(f"not a channel spec: {spec!r}")


def _state_from_file(f: StateSpecFile) -> DensityOperator:
    if f.bloch is not None:
        return density_from_bloch(f.bloch)
    return DensityOperator(_matrix(f.matrix))


def parse_state(doc) -> DensityOperator:
    try:
        f = StateSpecFile.model_validate(_load(doc))
    except ValidationError as exc:
        raise SpecParseError(_format_errors(exc)) from exc
    return _state_from_file(f)


def dump_state(rho: DensityOperator, form: str = "matrix") -> dict:
    if form == "bloch":
        return {"bloch": [float(x) for x in rho.bloch]}
    return {"matrix": _rows(rho.matrix)}


def parse_ensemble(doc) -> Ensemble:
    try:
        f = EnsembleFile.model_validate(_load(doc))
    except ValidationError as exc:
        raise SpecParseError(_format_errors(exc)) from exc
    return Ensemble([(m.weight, _state_from_file(m.state)) for m in f.members])


def dump_ensemble(ensemble: Ensemble) -> dict:
    return {"members": [{"weight": w, "state": dump_state(s)} for w, s in ensemble.members]}
