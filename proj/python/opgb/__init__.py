"""Biorthogonal polynomial families of bilinear forms, exact or in floating point."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Union

from . import _core

__all__ = ["Error", "run", "polys", "quadrature", "identities", "transform", "gram", "moments", "load"]

Source = Union[dict, str, Path]


class Error(Exception):
    """Library failure with a stable `kind`, the failing `index` if any and
    whether the input was well formed but degenerate (`admissibility`)."""

    def __init__(self, message: str, kind: str, index: int | None, admissibility: bool):
        super().__init__(message)
        self.kind = kind
        self.index = index
        self.admissibility = admissibility


def load(source: Source) -> dict:
    if isinstance(source, dict):
        return source
    return json.loads(Path(source).read_text())


def _call(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except _core.Error as e:
        raise Error(*e.args) from None


def _exact(value: Any) -> Any:
    if isinstance(value, str):
        try:
            return Fraction(value)
        except ValueError:
            return value
    if isinstance(value, list):
        return [_exact(v) for v in value]
    if isinstance(value, dict):
        return {k: _exact(v) for k, v in value.items()}
    return value


def run(command: str, spec: Source, *, n: int | None = None, k: int | None = None,
        mode: str | None = None, seed: int | None = None) -> dict:
    """Run a CLI command in process and return its JSON document."""
    text = _call(_core.run, command, json.dumps(load(spec)), n, k, mode, seed)
    return json.loads(text)


def polys(spec: Source, n: int | None = None, mode: str | None = None) -> dict:
    doc = run("polys", spec, n=n, mode=mode)
    return _exact(doc["family"]) if doc["mode"] == "exact" else doc["family"]


def quadrature(spec: Source, k: int | None = None) -> dict:
    return run("quadrature", spec, k=k)


def identities(spec: Source, n: int | None = None, mode: str | None = None, seed: int | None = None) -> dict:
    return run("identities", spec, n=n, mode=mode, seed=seed)


def transform(spec: Source, n: int | None = None, mode: str | None = None) -> dict:
    return run("transform", spec, n=n, mode=mode)


def _source(spec: Source) -> str:
    doc = load(spec)
    return json.dumps(doc.get("source", doc))


def gram(spec: Source, n: int) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in json.loads(_call(_core.gram, _source(spec), n))]


def moments(spec: Source, j_max: int) -> list[Fraction]:
    """m_0, ..., m_{j_max}."""
    return [Fraction(x) for x in json.loads(_call(_core.moments, _source(spec), j_max))]
