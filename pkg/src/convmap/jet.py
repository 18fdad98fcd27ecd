"""Third-order jets: a map's value and first three derivatives at one point."""

from __future__ import annotations

import cmath
from dataclasses import dataclass


@dataclass(frozen=True)
class Jet:
    """f, f', f'', f''' of a holomorphic map at a base point with |z| < 1.

    ``tail`` is a diagnostic only: an estimate of the truncation error when
    the jet came from a truncated series, 0.0 for closed forms.
    """

    z: complex
    f0: complex
    f1: complex
    f2: complex
    f3: complex
    tail: float = 0.0

    def __post_init__(self):
        for name in ("z", "f0", "f1", "f2", "f3"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        object.__setattr__(self, "tail", float(self.tail))
        for name in ("z", "f0", "f1", "f2", "f3"):
            if not cmath.isfinite(getattr(self, name)):
                raise ValueError(f"jet component {name} is not finite")
        if abs(self.z) >= 1.0:
            raise ValueError(f"jet base point needs |z| < 1, got |z| = {abs(self.z):.6g}")
