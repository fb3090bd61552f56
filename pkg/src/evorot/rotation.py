"""Rotation observables of two-population strategy trajectories.

The state of a session at round t is x(t) = (p, q), the densities of the
first strategy in each population, living on the lattice {0, 1/N, ..., 1}^2.
The instantaneous rotation of a transition is the planar cross product
x(t) x x(t+1); positive values are counterclockwise motion. Summing over a
segment gives the accumulated rotation La (twice the signed swept area; for
closed paths exactly twice the enclosed area), and dividing by the number of
transitions gives the per-round mean.

Cross-group comparisons use the relative rotation phi (a group's La over the
cross-group mean for that game) and the per-group response coefficient (mean
phi over the cycling games). Two comparison metrics from the experimental
literature are included: the crossing-count cycle rotation index and the
mean distance from equilibrium.

All lattice arithmetic is exact (fractions.Fraction); the same functions
accept float paths, e.g. sampled ODE orbits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    DegenerateRowMean,
    LatticeViolation,
    MismatchedPopulationSize,
    TooShort,
)


@dataclass(frozen=True)
class PopulationState:
    """Counts of first-strategy players in the two size-N populations."""

    p_count: int
    q_count: int
    n_agents: int

    def __post_init__(self):
        n = self.n_agents
        if n < 1:
            raise LatticeViolation(f"population size must be positive, got {n}")
        if not (0 <= self.p_count <= n and 0 <= self.q_count <= n):
            raise LatticeViolation(
                f"counts ({self.p_count}, {self.q_count}) outside [0, {n}]"
            )

    @property
    def p(self) -> Fraction:
        return Fraction(self.p_count, self.n_agents)

    @property
    def q(self) -> Fraction:
        return Fraction(self.q_count, self.n_agents)

    def point(self) -> tuple[Fraction, Fraction]:
        return (self.p, self.q)


@dataclass(frozen=True)
class Trajectory:
    """Round-indexed population states of one group within one game segment.

    Rounds tick by 1; state t and state t+1 are consecutive experimental
    rounds. All states must share one population size.
    """

    states: tuple[PopulationState, ...]
    group_id: str = ""
    game_id: str = ""

    def __post_init__(self):
        if not self.states:
            raise TooShort("trajectory needs at least one state")
        n = self.states[0].n_agents
        if any(s.n_agents != n for s in self.states):
            raise MismatchedPopulationSize("states mix population sizes")

    def __len__(self) -> int:
        return len(self.states)

    @property
    def n_agents(self) -> int:
        return self.states[0].n_agents

    def points(self) -> list[tuple[Fraction, Fraction]]:
        return [s.point() for s in self.states]


def _as_points(traj) -> list:
    if isinstance(traj, Trajectory):
        return traj.points()
    return list(traj)


def instantaneous_rotation(x_t: PopulationState, x_next: PopulationState) -> Fraction:
    """Cross product p(t) q(t+1) - q(t) p(t+1) of one round transition."""
    if x_t.n_agents != x_next.n_agents:
        raise MismatchedPopulationSize(
            f"populations of size {x_t.n_agents} and {x_next.n_agents}"
        )
    return x_t.p * x_next.q - x_t.q * x_next.p


def rotation_series(traj, center=None) -> list:
    """Per-transition rotations of a trajectory or plain (p, q) sequence.

    The cross product is taken about the origin, the convention every
    shipped table uses. Passing center measures about another point
    instead; this changes open-path values (closed paths are unaffected)
    and is deliberately not the default.
    """
    pts = _as_points(traj)
    if len(pts) < 2:
        raise TooShort("need at least two states for a rotation")
    if center is not None:
        cx, cy = center
        pts = [(px - cx, py - cy) for px, py in pts]
    return [
        pts[t][0] * pts[t + 1][1] - pts[t][1] * pts[t + 1][0]
        for t in range(len(pts) - 1)
    ]


def accumulated_rotation(traj, center=None):
    """Sum of the per-transition rotations (La).

    Equal to twice the signed polygon area when the path is closed, in which
    case the value is independent of the chosen center.
    """
    series = rotation_series(traj, center)
    total = series[0]
    for v in series[1:]:
        total += v
    return total


def mean_rotation(traj, center=None):
    """Accumulated rotation divided by the number of transitions (T - 1)."""
    series = rotation_series(traj, center)
    total = series[0]
    for v in series[1:]:
        total += v
    return total / len(series)


def rotation_series_xy(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Vectorized rotation series for (..., T) arrays of densities."""
    return p[..., :-1] * q[..., 1:] - q[..., :-1] * p[..., 1:]


def relative_rotation(l_table: Mapping[str, Sequence]) -> dict[str, list]:
    """Per-game relative rotation phi = La / (cross-group mean of La).

    Input maps a game id to its per-group accumulated rotations. Rows whose
    mean is exactly zero (expected for non-cycling games) raise
    DegenerateRowMean; callers restrict to the cycling games. Exact when fed
    Fractions: each output row averages to exactly 1.
    """
    phi: dict[str, list] = {}
    for game, row in l_table.items():
        row = list(row)
        if not row:
            raise DegenerateRowMean(f"game {game}: empty row")
        mean = sum(row) / len(row)
        if mean == 0:
            raise DegenerateRowMean(f"game {game}: row mean is zero")
        phi[game] = [v / mean for v in row]
    return phi


def response_coefficients(phi_table: Mapping[str, Sequence]) -> list:
    """Per-group mean of phi across the provided game rows (R.R.C.).

    Averaging over all groups necessarily returns 1: each phi row already
    averages to 1 by construction.
    """
    rows = [list(r) for r in phi_table.values()]
    if not rows:
        raise DegenerateRowMean("no phi rows given")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("phi rows differ in group count")
    return [sum(r[j] for r in rows) / len(rows) for j in range(width)]


def tripwire_crossings(traj, nash, edge_anchor=None) -> tuple[int, int]:
    """Count signed crossings of the segment from nash to the boundary.

    Returns (cct, ct): transitions crossing the tripwire counterclockwise
    about nash vs clockwise. The default anchor is the boundary point
    straight below nash, (p*, 0).

    Tie-breaking contract: a transition ending exactly on the tripwire line
    is not yet a crossing; it counts at the next step that lands strictly on
    the far side (and is dropped if the path returns to its old side).
    A pass exactly through the nash point never counts.
    """
    pts = _as_points(traj)
    if len(pts) < 2:
        raise TooShort("need at least two states to count crossings")
    nx, ny = nash
    if edge_anchor is None:
        edge_anchor = (nx, 0 * ny)
    ux, uy = edge_anchor[0] - nx, edge_anchor[1] - ny
    uu = ux * ux + uy * uy
    if uu == 0:
        raise ValueError("edge anchor coincides with nash")

    def line_side(pt):
        # sign of cross(u, pt - nash): which side of the tripwire line
        vx, vy = pt[0] - nx, pt[1] - ny
        d = ux * vy - uy * vx
        return d

    def wire_param(pt):
        # position along the wire: 0 at nash, 1 at the anchor
        vx, vy = pt[0] - nx, pt[1] - ny
        return (vx * ux + vy * uy) / uu

    cct = ct = 0
    prev = pts[0]
    d_prev = line_side(prev)
    last_side = 0 if d_prev == 0 else (1 if d_prev > 0 else -1)
    touched_wire = d_prev == 0 and 0 < wire_param(prev) <= 1

    for cur in pts[1:]:
        d_cur = line_side(cur)
        if d_prev != 0 and d_cur != 0:
            if (d_prev > 0) != (d_cur > 0):
                t = d_prev / (d_prev - d_cur)
                rx = prev[0] + t * (cur[0] - prev[0])
                ry = prev[1] + t * (cur[1] - prev[1])
                s = wire_param((rx, ry))
                if 0 < s <= 1:
                    if d_cur > 0:
                        cct += 1
                    else:
                        ct += 1
            last_side = 1 if d_cur > 0 else -1
            touched_wire = False
        elif d_prev != 0:  # landing on the line
            s = wire_param(cur)
            touched_wire = 0 < s <= 1
            last_side = 1 if d_prev > 0 else -1
        elif d_cur == 0:  # sliding along the line
            s1, s2 = wire_param(prev), wire_param(cur)
            lo, hi = min(s1, s2), max(s1, s2)
            touched_wire = touched_wire or (hi > 0 and lo <= 1)
        else:  # leaving the line
            side = 1 if d_cur > 0 else -1
            if last_side != 0 and side != last_side and touched_wire:
                if side > 0:
                    cct += 1
                else:
                    ct += 1
            last_side = side
            touched_wire = False
        prev, d_prev = cur, d_cur
    return cct, ct


def cycle_rotation_index(traj, nash, edge_anchor=None) -> float:
    """(CCT - CT) / (CCT + CT) in [-1, 1]; 0 when nothing crosses the wire."""
    cct, ct = tripwire_crossings(traj, nash, edge_anchor)
    if cct + ct == 0:
        return 0.0
    return (cct - ct) / (cct + ct)


def average_distance(traj, nash) -> float:
    """Mean Euclidean distance of the states from the equilibrium point."""
    pts = _as_points(traj)
    nx, ny = nash
    return float(
        sum(math.hypot(float(px - nx), float(py - ny)) for px, py in pts) / len(pts)
    )


@dataclass(frozen=True)
class RotationReport:
    """Rotation summary of one trajectory segment.

    l_mean is always l_accumulated over the transition count. cri,
    crossings and avg_distance need an equilibrium point and stay None when
    none was supplied.
    """

    group_id: str
    game_id: str
    n_rounds: int
    l_series: tuple
    l_accumulated: Fraction | float
    l_mean: Fraction | float
    cri: float | None = None
    crossings: tuple[int, int] | None = None
    avg_distance: float | None = None


def build_report(traj: Trajectory, nash=None, edge_anchor=None) -> RotationReport:
    """Compute the full rotation summary of one segment.

    The distance metric works for any equilibrium point; the tripwire index
    requires a strictly interior one and stays None otherwise.
    """
    series = tuple(rotation_series(traj))
    total = series[0]
    for v in series[1:]:
        total += v
    cri = crossings = avg = None
    if nash is not None:
        avg = average_distance(traj, nash)
        if 0 < nash[0] < 1 and 0 < nash[1] < 1:
            crossings = tripwire_crossings(traj, nash, edge_anchor)
            cct, ct = crossings
            cri = 0.0 if cct + ct == 0 else (cct - ct) / (cct + ct)
    return RotationReport(
        group_id=traj.group_id,
        game_id=traj.game_id,
        n_rounds=len(traj),
        l_series=series,
        l_accumulated=total,
        l_mean=total / len(series),
        cri=cri,
        crossings=crossings,
        avg_distance=avg,
    )
