"""Resource caps, overridable per call, by file, or via STABILITYLAB_CAPS.

The environment variable STABILITYLAB_CAPS may point at a JSON file whose
keys match the :class:`Caps` fields; it is read once, lazily.
"""

import json
import os
from dataclasses import dataclass, replace

from .errors import ArgumentError

ENV_CAPS_FILE = "STABILITYLAB_CAPS"


@dataclass(frozen=True)
class Caps:
    matrix_size: int = 16        # soft cap for SNF / charpoly
    poly_degree: int = 24        # factorization degree cap
    enumeration: int = 1_000_000  # explicit fixed-point lists
    window_states: int = 1_000_000  # alphabet ** |window| for cylinder counts
    group_order: int = 5000
    power_search: int = 50       # bounded u^n = v^m search

    def validate(self) -> "Caps":
        for name, value in self.__dict__.items():
            if not isinstance(value, int) or value <= 0:
                raise ArgumentError(f"cap {name!r} must be a positive integer")
        return self


_caps: Caps | None = None


def caps() -> Caps:
    global _caps
    if _caps is None:
        loaded = Caps()
        path = os.environ.get(ENV_CAPS_FILE)
        if path:
            with open(path) as fh:
                overrides = json.load(fh)
            unknown = set(overrides) - set(loaded.__dict__)
            if unknown:
                raise ArgumentError(f"unknown cap names in {path}: {sorted(unknown)}")
            loaded = replace(loaded, **overrides)
        _caps = loaded.validate()
    return _caps


def set_caps(new: Caps) -> None:
    global _caps
    _caps = new.validate()


def reset_caps() -> None:
    global _caps
    _caps = None
