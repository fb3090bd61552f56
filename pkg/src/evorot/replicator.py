"""Two-population replicator flow of a reduced 2x2 game.

The flow on the unit square is

    dp/dt = p (1-p) (a - (a+b) q)
    dq/dt = q (1-q) (c - (c+d) p)

with the anti-diagonal elements (a, b, c, d) of a normalized game. Corners
are always rest points; interior-MSNE games additionally have the center
(|c|, |a|), around which orbits are closed level curves of the invariant

    H(p, q) = c ln p + d ln(1-p) - a ln q - b ln(1-q).

dH/dt vanishes identically along the flow, which makes H an end-to-end
accuracy gauge for the fixed-step integrator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundaryState, NonInteriorStart
from .games import NormalizedGame


def replicator_velocity(g: NormalizedGame, p, q):
    """Velocity (dp, dq) at (p, q), in 1/round.

    Exact when given Fractions (the equilibrium maps to exactly (0, 0)),
    float otherwise.
    """
    a, b, c, d = g.abcd()
    dp = p * (1 - p) * (a - (a + b) * q)
    dq = q * (1 - q) * (c - (c + d) * p)
    return dp, dq


def conserved_quantity(g: NormalizedGame, p, q) -> float:
    """Invariant of motion H(p, q); requires a strictly interior point."""
    p, q = float(p), float(q)
    if not (0 < p < 1 and 0 < q < 1):
        raise BoundaryState(f"H diverges on the boundary, got ({p}, {q})")
    a, b, c, d = (float(v) for v in g.abcd())
    return c * math.log(p) + d * math.log(1 - p) - a * math.log(q) - b * math.log(1 - q)


def integrate_ode(
    g: NormalizedGame,
    start: tuple[float, float],
    step_h: float = 0.01,
    n_steps: int = 10_000,
) -> np.ndarray:
    """Classical fixed-step 4th-order integration of the replicator flow.

    Returns the sampled path as an (n_steps + 1, 2) array, start included.
    Each step is clamped to [1e-12, 1 - 1e-12]; the field never points out
    of the square, so clamping only guards float round-off near the edges.
    """
    p, q = float(start[0]), float(start[1])
    if not (0 < p < 1 and 0 < q < 1):
        raise NonInteriorStart(f"start must be strictly interior, got ({p}, {q})")
    if step_h <= 0:
        raise ValueError("step_h must be positive")
    a, b, c, d = (float(v) for v in g.abcd())
    ab, cd = a + b, c + d
    lo, hi = 1e-12, 1.0 - 1e-12

    def f(p, q):
        return p * (1 - p) * (a - ab * q), q * (1 - q) * (c - cd * p)

    path = np.empty((n_steps + 1, 2))
    path[0] = (p, q)
    h = step_h
    for i in range(n_steps):
        k1p, k1q = f(p, q)
        k2p, k2q = f(p + 0.5 * h * k1p, q + 0.5 * h * k1q)
        k3p, k3q = f(p + 0.5 * h * k2p, q + 0.5 * h * k2q)
        k4p, k4q = f(p + h * k3p, q + h * k3q)
        p += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p)
        q += h / 6.0 * (k1q + 2 * k2q + 2 * k3q + k4q)
        p = lo if p < lo else (hi if p > hi else p)
        q = lo if q < lo else (hi if q > hi else q)
        path[i + 1] = (p, q)
    return path


def phase_field_sample(g: NormalizedGame, grid_n: int):
    """Velocity field on a grid_n x grid_n uniform grid over [0, 1]^2.

    Returns (pp, qq, dp, dq), four (grid_n, grid_n) arrays ready for CSV
    emission or quiver plotting.
    """
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    a, b, c, d = (float(v) for v in g.abcd())
    axis = np.linspace(0.0, 1.0, grid_n)
    pp, qq = np.meshgrid(axis, axis, indexing="ij")
    dp = pp * (1 - pp) * (a - (a + b) * qq)
    dq = qq * (1 - qq) * (c - (c + d) * pp)
    return pp, qq, dp, dq


@dataclass(frozen=True)
class ReplicatorField:
    """Bound flow of one normalized game."""

    game: NormalizedGame

    def velocity(self, p, q):
        return replicator_velocity(self.game, p, q)

    def invariant(self, p, q) -> float:
        return conserved_quantity(self.game, p, q)

    def integrate(self, start, step_h=0.01, n_steps=10_000) -> np.ndarray:
        return integrate_ode(self.game, start, step_h, n_steps)

    def sample_grid(self, grid_n: int):
        return phase_field_sample(self.game, grid_n)
