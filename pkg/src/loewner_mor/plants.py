"""Named transfer-function sources used by the CLI and the experiments.

A plant spec is a short string:

``beam``           exact irrational beam transfer function
``fem:<N>``        finite-difference model with ``N`` intervals
``modal:<N>``      modal truncation with ``N`` pole pairs
``const``          constant 1 (smoke-test plant)
``archive:<path>`` reduced model stored as JSON (a bare ``*.json`` path also works)
``samples:<path>`` samples CSV; only evaluable at its own frequencies
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .beam import BeamParams, eval_H_modal, eval_H_orig
from .exceptions import ConfigError
from .fem import assemble_second_order, eval_H_fem, to_first_order

__all__ = ["Plant", "parse_plant", "validate_plant_spec"]


@dataclass(frozen=True)
class Plant:
    kind: str
    evaluator: Callable = field(repr=False)
    metadata: dict = field(default_factory=dict)

    def __call__(self, s):
        return self.evaluator(s)


def _int_arg(spec, kind, minimum):
    _, _, arg = spec.partition(":")
    try:
        value = int(arg)
    except ValueError:
        raise ConfigError(f"plant {spec!r}: expected {kind}:<integer>") from None
    if value < minimum:
        raise ConfigError(f"plant {spec!r}: {kind} needs an integer >= {minimum}")
    return value


def validate_plant_spec(spec):
    """Check a plant spec string without building anything expensive."""
    if not isinstance(spec, str) or not spec:
        raise ConfigError("plant must be a non-empty string")
    kind = spec.split(":", 1)[0]
    if spec in ("beam", "const"):
        return spec
    if kind == "fem":
        _int_arg(spec, "fem", 6)
    elif kind == "modal":
        _int_arg(spec, "modal", 1)
    elif kind in ("archive", "samples"):
        if not spec.split(":", 1)[1]:
            raise ConfigError(f"plant {spec!r}: missing path")
    elif not spec.endswith(".json"):
        raise ConfigError(f"unknown plant {spec!r}; expected beam, fem:<N>, modal:<N>, const, archive:<path> or samples:<path>")
    return kind


class _SampleLookup:
    """Evaluator that only answers at the frequencies it was built from."""

    def __init__(self, points, values):
        self._table = {complex(z): complex(h) for z, h in zip(points, values)}

    def __call__(self, s):
        s = np.asarray(s, dtype=complex)
        try:
            out = np.array([self._table[complex(z)] for z in s.reshape(-1)], dtype=complex)
        except KeyError as exc:
            raise ConfigError(f"frequency {exc.args[0]} is not among the imported samples") from None
        return out.reshape(s.shape)


def parse_plant(spec, params=None):
    """Build a :class:`Plant` from its spec string."""
    from .serialization import load_model, read_samples_csv

    params = params or BeamParams.default()
    kind = validate_plant_spec(spec)
    meta = {"plant": spec}
    if kind == "beam":
        return Plant("beam", lambda s: eval_H_orig(s, params), {**meta, "beam": params.to_dict()})
    if kind == "const":
        return Plant("const", lambda s: np.ones_like(np.asarray(s, dtype=complex)), meta)
    if kind == "fem":
        N = _int_arg(spec, "fem", 6)
        system = to_first_order(assemble_second_order(N, params))
        return Plant("fem", lambda s: eval_H_fem(s, system, params), {**meta, "N": N, "beam": params.to_dict()})
    if kind == "modal":
        N = _int_arg(spec, "modal", 1)
        return Plant("modal", lambda s: eval_H_modal(s, params, N), {**meta, "N": N, "beam": params.to_dict()})
    if kind == "samples":
        points, values = read_samples_csv(spec.split(":", 1)[1])
        return Plant("samples", _SampleLookup(points, values), meta)
    path = spec.split(":", 1)[1] if kind == "archive" else spec
    model, archive_meta = load_model(path, with_metadata=True)
    return Plant("archive", model, {**meta, "order": model.order, "source": archive_meta})
