"""Point configurations in the plane and their radial reductions.

A configuration is a finite multiset of complex points.  The squared-modulus
map sends it to a configuration on the half line; rotation-invariant
statistics only ever look at that radial image.
"""

from __future__ import annotations

import json

import numpy as np


class Configuration:
    """Finite point configuration in the complex plane."""

    __slots__ = ("points",)

    def __init__(self, points):
        pts = np.atleast_1d(np.asarray(points, dtype=np.complex128))
        if pts.ndim != 1:
            raise ValueError("configuration must be a flat sequence of points")
        if pts.size and not np.all(np.isfinite(pts.real) & np.isfinite(pts.imag)):
            raise ValueError("configuration contains non-finite points")
        self.points = pts

    def __len__(self):
        return self.points.size

    def __iter__(self):
        return iter(self.points)

    def __repr__(self):
        return f"Configuration({self.points.size} points)"

    def to_json(self) -> str:
        """Serialize as a JSON array of [re, im] pairs."""
        return json.dumps([[z.real, z.imag] for z in self.points])

    @classmethod
    def from_json(cls, text: str) -> "Configuration":
        pairs = json.loads(text)
        return cls([complex(re, im) for re, im in pairs])


class RadialConfiguration:
    """Squared moduli of a planar configuration, stored in ascending order."""

    __slots__ = ("values",)

    def __init__(self, values):
        vals = np.atleast_1d(np.asarray(values, dtype=np.float64))
        if vals.ndim != 1:
            raise ValueError("radial configuration must be a flat sequence")
        if vals.size:
            if not np.all(np.isfinite(vals)):
                raise ValueError("radial configuration contains non-finite values")
            if np.any(vals < 0.0):
                raise ValueError("radial values must be nonnegative")
        self.values = np.sort(vals)

    def __len__(self):
        return self.values.size

    def __iter__(self):
        return iter(self.values)

    def __repr__(self):
        return f"RadialConfiguration({self.values.size} values)"

    def counting_function(self, r: float) -> int:
        """Number of values in the closed interval [0, r]."""
        return int(np.searchsorted(self.values, r, side="right"))

    def to_json(self) -> str:
        return json.dumps(list(self.values))

    @classmethod
    def from_json(cls, text: str) -> "RadialConfiguration":
        return cls(json.loads(text))


class PalmAnchor:
    """Ordered tuple of conditioning locations, repeats allowed."""

    __slots__ = ("points",)

    def __init__(self, points):
        pts = tuple(complex(p) for p in points)
        for p in pts:
            if not (np.isfinite(p.real) and np.isfinite(p.imag)):
                raise ValueError("anchor contains a non-finite point")
        self.points = pts

    @property
    def ell(self) -> int:
        return len(self.points)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __eq__(self, other):
        if not isinstance(other, PalmAnchor):
            return NotImplemented
        return self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        return f"PalmAnchor({self.points!r})"

    @classmethod
    def origin(cls, ell: int) -> "PalmAnchor":
        """The anchor with ell copies of the origin."""
        if ell < 0:
            raise ValueError("ell must be nonnegative")
        return cls((0j,) * ell)


class Partition:
    """Integer partition: weakly decreasing nonnegative parts.

    Trailing zeros are stripped, so Partition([2, 1, 0]) == Partition([2, 1]).
    """

    __slots__ = ("parts",)

    def __init__(self, parts=()):
        parts = tuple(int(p) for p in parts)
        if any(p < 0 for p in parts):
            raise ValueError("parts must be nonnegative")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError("parts must be weakly decreasing")
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        self.parts = parts

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __eq__(self, other):
        if isinstance(other, Partition):
            return self.parts == other.parts
        return NotImplemented

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return f"Partition({self.parts!r})"

    def conjugate(self) -> "Partition":
        """Transpose of the Young diagram."""
        if not self.parts:
            return Partition()
        cols = [sum(1 for p in self.parts if p > c) for c in range(self.parts[0])]
        return Partition(cols)

    def padded(self, length: int) -> tuple:
        """Parts padded with zeros to the requested length."""
        if length < len(self.parts):
            raise ValueError("cannot pad below the number of parts")
        return self.parts + (0,) * (length - len(self.parts))


def theta(config: Configuration) -> RadialConfiguration:
    """Map a planar configuration to its squared moduli."""
    return RadialConfiguration(np.abs(config.points) ** 2)


def count_in_disk(config: Configuration, r: float) -> int:
    """Number of points in the closed disk of radius r about the origin."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    return int(np.count_nonzero(np.abs(config.points) <= r))
