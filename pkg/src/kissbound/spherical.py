"""Spherical geometry helpers, the projection cap and code-size capacities.

Angles in the public API are in degrees.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "CodeProblem",
    "PointConfig",
    "AngleCapacityTable",
    "CapacityTableIncomplete",
    "DEFAULT_TABLE",
    "PHI3_7",
    "spherical_cos",
    "projected_cos_bound",
    "projected_angle",
    "t0_for_projected_angle",
    "mu_upper_bound",
    "witness_config",
    "validate_code",
]

#: cos(phi_3(7)) = cot 40 * cot 80, the largest separation of 7 points on S^2
PHI3_7 = math.degrees(math.acos(1 / math.tan(math.radians(40)) / math.tan(math.radians(80))))


class CapacityTableIncomplete(LookupError):
    """Raised when no capacity is known for the requested dimension or angle."""


@dataclass(frozen=True)
class CodeProblem:
    n: int
    z: float

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("dimension must be >= 3")
        if not 0 <= self.z < 1:
            raise ValueError("z must lie in [0, 1)")

    @property
    def delta(self) -> float:
        """Minimal angular separation in degrees."""
        return math.degrees(math.acos(self.z))


@dataclass(frozen=True)
class PointConfig:
    n: int
    points: np.ndarray
    name: str = "custom"

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.shape[1] != self.n:
            raise ValueError(f"points must live in R^{self.n}")
        norms = np.linalg.norm(pts, axis=1)
        if np.any(np.abs(norms - 1) > 1e-12):
            raise ValueError("all points must be unit vectors")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    def gram(self) -> np.ndarray:
        return self.points @ self.points.T

    def max_inner_product(self) -> float:
        if len(self.points) < 2:
            return -1.0
        g = self.gram()
        iu = np.triu_indices(len(self.points), 1)
        return float(g[iu].max())

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "points": self.points.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "PointConfig":
        data = json.loads(text)
        return cls(int(data["n"]), np.array(data["points"], dtype=float))


def spherical_cos(theta1: float, theta2: float, angle: float) -> float:
    """Cosine of the side opposite ``angle`` in a spherical triangle with sides ``theta1``, ``theta2``."""
    a, b, c = (math.radians(x) for x in (theta1, theta2, angle))
    return math.cos(a) * math.cos(b) + math.sin(a) * math.sin(b) * math.cos(c)


def projected_cos_bound(z: float, t0: float) -> float:
    """Upper bound on the cosine between projections to the equator of two code points near a pole.

    Valid for code points within angle ``arccos(t0)`` of the pole when ``t0 >= z``.
    """
    if t0 >= 1:
        raise ValueError("t0 = 1 makes the projection singular")
    if not t0 >= z >= 0:
        raise ValueError("need t0 >= z >= 0")
    return (z - t0 * t0) / (1 - t0 * t0)


def projected_angle(z: float, t0: float) -> float:
    return math.degrees(math.acos(max(-1.0, min(1.0, projected_cos_bound(z, t0)))))


def t0_for_projected_angle(z: float, omega: float) -> float:
    """The ``t0`` at which the projected angle equals ``omega``; larger ``t0`` widens it."""
    c = math.cos(math.radians(omega))
    if not c < z:
        raise ValueError("omega too small: every t0 > z already projects wider")
    return math.sqrt((z - c) / (1 - c))


@dataclass(frozen=True)
class AngleCapacityTable:
    """Upper bounds ``A(k, w)`` on the size of codes in ``S^{k-1}`` with minimal angle ``w``.

    ``k = 2`` uses ``floor(360 / w)``.  For other ``k`` the table holds
    ``(threshold, capacity)`` pairs meaning "if ``w > threshold`` then at most
    ``capacity`` points"; queries take the first applicable row in order of
    decreasing threshold, which is the conservative (largest) value.
    """

    entries: dict = field(default_factory=dict)
    pad: float = 1e-12

    def capacity(self, k: int, omega: float) -> int:
        if k == 2:
            if omega <= 0:
                raise CapacityTableIncomplete("angle must be positive")
            return int(math.floor(360.0 / omega + 1e-9))
        rows = self.entries.get(k)
        if not rows:
            raise CapacityTableIncomplete(f"no capacities known for dimension {k}")
        for threshold, cap in sorted(rows, key=lambda r: -r[0]):
            if omega > threshold + self.pad:
                return cap
        raise CapacityTableIncomplete(f"A({k}, {omega:.6f} deg) not covered by the table")


# phi_3(5) = phi_3(6) = 90 degrees, phi_3(7) = arccos(cot40 cot80)
DEFAULT_TABLE = AngleCapacityTable({3: ((90.0, 4), (PHI3_7, 6))})


def mu_upper_bound(problem: CodeProblem, t0: float, table: AngleCapacityTable = DEFAULT_TABLE) -> int:
    """Bound on the number of code points strictly inside the cap of radius ``arccos(t0)``."""
    if not t0 > problem.z:
        raise ValueError("need t0 > z")
    return table.capacity(problem.n - 1, projected_angle(problem.z, t0))


def _icosahedron() -> np.ndarray:
    phi = (1 + math.sqrt(5)) / 2
    pts = []
    for a, b in itertools.product((-1, 1), repeat=2):
        pts += [(0, a, b * phi), (a, b * phi, 0), (b * phi, 0, a)]
    pts = np.array(pts, dtype=float)
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def _cell24() -> np.ndarray:
    pts = []
    for i, j in itertools.combinations(range(4), 2):
        for a, b in itertools.product((-1, 1), repeat=2):
            v = [0.0] * 4
            v[i], v[j] = a * math.sqrt(0.5), b * math.sqrt(0.5)
            pts.append(v)
    return np.array(pts)


def _simplex(n: int) -> np.ndarray:
    # centred standard basis of R^{n+1} lives in an n-dimensional hyperplane
    e = np.eye(n + 1) - 1.0 / (n + 1)
    q, _ = np.linalg.qr(e.T)
    pts = e @ q[:, :n]
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def witness_config(name: str) -> PointConfig:
    """Named lower-bound configurations: ``icosahedron``, ``cell24`` or ``simplex(n)``."""
    if name == "icosahedron":
        return PointConfig(3, _icosahedron(), name)
    if name == "cell24":
        return PointConfig(4, _cell24(), name)
    if name.startswith("simplex(") and name.endswith(")"):
        n = int(name[len("simplex(") : -1])
        return PointConfig(n, _simplex(n), name)
    raise ValueError(f"unknown configuration {name!r}")


def validate_code(config: PointConfig, z: float) -> bool:
    """True when every pair of distinct points has inner product at most ``z``."""
    return len(config) < 2 or config.max_inner_product() <= z + 1e-12


def random_rotation(n: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def sample_sphere(rng: np.random.Generator, size: int, n: int) -> np.ndarray:
    x = rng.standard_normal((size, n))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def lemma_sum(points: Sequence, k: int) -> float:
    """``sum_{i,j} G_k^{(n)}(x_i . x_j)`` for a point set (nonnegative by positive definiteness)."""
    from .orthopoly import gegenbauer_values

    pts = np.asarray(points, dtype=float)
    g = np.clip(pts @ pts.T, -1, 1)
    vals = gegenbauer_values(pts.shape[1], k, g.ravel())[:, k]
    return float(vals.sum())
