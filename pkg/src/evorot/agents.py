"""Stochastic round-by-round simulator of two matched populations.

Each round, the N agents of population X are paired one-to-one with the N
agents of population Y by a fresh uniform random matching, every pair plays
the scheduled payoff matrix, and agents pick next-round strategies by one of
two rules:

* logit fictitious play: each agent tracks an attraction per strategy,
  updated toward the payoff that strategy would have earned against the
  opponent just faced (exponential recency weighting), and chooses by a
  logit response over the attractions;
* proportional imitation: each agent samples a random peer from its own
  population and adopts the peer's strategy with probability proportional
  to the positive part of the payoff gap.

An independent tremble makes the agent choose uniformly instead with a
fixed probability.

Determinism contract: a run consumes a fixed number of uniform draws per
round from a generator seeded by the run's seed, so identical seeds give
bit-identical trajectories and a vectorized batch of many seeds equals the
corresponding single runs. Replicate batches exist because sweeps of
hundreds of long runs are routine; see simulate_counts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import expit

from .errors import EmptySchedule
from .games import PayoffMatrix
from .rotation import PopulationState, Trajectory


@dataclass(frozen=True)
class LogitFictitiousPlay:
    """Attraction learning with logit choice.

    recency: weight of the newest observation in (0, 1].
    precision: logit slope on attraction differences, >= 0 (0 = uniform play).
    """

    recency: float = 0.1
    precision: float = 10.0

    def __post_init__(self):
        if not 0 < self.recency <= 1:
            raise ValueError("recency must be in (0, 1]")
        if self.precision < 0:
            raise ValueError("precision must be nonnegative")


@dataclass(frozen=True)
class ProportionalImitation:
    """Adopt a random peer's strategy w.p. rate * max(0, payoff gap) / span."""

    rate: float = 1.0

    def __post_init__(self):
        if not 0 < self.rate <= 1:
            raise ValueError("rate must be in (0, 1]")


ChoiceRule = LogitFictitiousPlay | ProportionalImitation


@dataclass(frozen=True)
class SimConfig:
    """Population size, seed, behavior rule and tremble of one run."""

    n_agents: int = 6
    seed: int = 0
    rule: ChoiceRule = field(default_factory=LogitFictitiousPlay)
    tremble: float = 0.01

    def __post_init__(self):
        if self.n_agents < 1:
            raise ValueError("n_agents must be at least 1")
        if not 0 <= self.tremble < 1:
            raise ValueError("tremble must be in [0, 1)")


@dataclass(frozen=True)
class ScheduleEntry:
    game_id: str
    matrix: PayoffMatrix
    rounds: int


@dataclass(frozen=True)
class Schedule:
    """Ordered payoff matrices with their durations in rounds."""

    entries: tuple[ScheduleEntry, ...]

    def __post_init__(self):
        if not self.entries:
            raise EmptySchedule("schedule has no entries")
        if any(e.rounds < 1 for e in self.entries):
            raise ValueError("every schedule entry needs at least one round")
        ids = [e.game_id for e in self.entries]
        if len(set(ids)) != len(ids):
            raise ValueError("schedule game ids must be unique")

    @property
    def total_rounds(self) -> int:
        return sum(e.rounds for e in self.entries)

    @classmethod
    def single(cls, game_id: str, matrix: PayoffMatrix, rounds: int) -> "Schedule":
        return cls((ScheduleEntry(game_id, matrix, rounds),))


@dataclass(frozen=True)
class AgentPopulation:
    """Snapshot of one population: per-agent strategies and attractions.

    Strategy code 0 is the first strategy (the one whose density is p or q).
    """

    role: str  # "X" or "Y"
    strategies: tuple[int, ...]
    attractions: tuple[tuple[float, float], ...]

    def first_strategy_count(self) -> int:
        return sum(1 for s in self.strategies if s == 0)


def joint_state(x: AgentPopulation, y: AgentPopulation) -> PopulationState:
    """Population pair as a lattice point; raises if the pair is malformed."""
    if (x.role, y.role) != ("X", "Y") or len(x.strategies) != len(y.strategies):
        raise ValueError("need one X and one Y population of equal size")
    return PopulationState(
        x.first_strategy_count(), y.first_strategy_count(), len(x.strategies)
    )


# Per-round uniform draw layout (fixed so that replicate streams are
# reproducible and chunk-size independent): matching keys first, then the
# per-agent choice draws of X and Y. Imitation additionally needs peer,
# switch and tremble draws per agent and population.
_DRAWS_PER_ROUND = {LogitFictitiousPlay: 3, ProportionalImitation: 7}

_CHUNK_BUDGET = 4_000_000  # uniforms held in memory at once


def _round_chunk(n_rep: int, k: int) -> int:
    return max(1, min(4096, _CHUNK_BUDGET // max(1, n_rep * k)))


def simulate_counts(
    schedule: Schedule, config: SimConfig, seeds: Sequence[int]
) -> tuple[np.ndarray, np.ndarray, list[AgentPopulation], list[AgentPopulation]]:
    """Run one replicate per seed; vectorized across replicates.

    Returns (p_counts, q_counts, final_x, final_y) where the count arrays
    have shape (len(seeds), schedule.total_rounds) and hold the number of
    first-strategy players per round, recorded before the round's update.
    Replicate r depends only on seeds[r]: its draws come from its own
    seeded generator, so batches slice into identical single runs.
    """
    seeds = list(seeds)
    if not seeds:
        raise ValueError("need at least one seed")
    n = config.n_agents
    n_rep = len(seeds)
    rule = config.rule
    k = _DRAWS_PER_ROUND[type(rule)] * n
    eps = config.tremble

    gens = [np.random.default_rng(s) for s in seeds]
    u0 = np.stack([g.random(2 * n) for g in gens])
    sx = (u0[:, :n] < 0.5).astype(np.int64)  # 1 = second strategy
    sy = (u0[:, n:] < 0.5).astype(np.int64)
    ax = np.zeros((n_rep, n, 2))
    ay = np.zeros((n_rep, n, 2))

    total = schedule.total_rounds
    p_counts = np.empty((n_rep, total), dtype=np.int64)
    q_counts = np.empty((n_rep, total), dtype=np.int64)
    chunk = _round_chunk(n_rep, k)
    agent_idx = np.arange(n)

    t_global = 0
    for entry in schedule.entries:
        m = np.array(
            [[float(v) for v in row] for row in entry.matrix.entries], dtype=float
        )
        mrow = m  # X payoff playing i against Y playing j
        mcol = -m.T  # Y payoff playing j against X playing i
        span = float(m.max() - m.min()) or 1.0
        done = 0
        while done < entry.rounds:
            ns = min(chunk, entry.rounds - done)
            draws = np.stack([g.random((ns, k)) for g in gens])
            for t in range(ns):
                u = draws[:, t, :]
                p_counts[:, t_global] = n - sx.sum(axis=1)
                q_counts[:, t_global] = n - sy.sum(axis=1)
                t_global += 1

                perm = np.argsort(u[:, :n], axis=1)  # X agent i meets Y agent perm[i]
                sy_faced = np.take_along_axis(sy, perm, axis=1)
                sx_faced = np.empty_like(sx)
                np.put_along_axis(sx_faced, perm, sx, axis=1)

                if isinstance(rule, LogitFictitiousPlay):
                    # hypothetical payoffs of both own strategies vs the faced opponent
                    ux = mrow[:, sy_faced].transpose(1, 2, 0)
                    uy = mcol[:, sx_faced].transpose(1, 2, 0)
                    ax += rule.recency * (ux - ax)
                    ay += rule.recency * (uy - ay)
                    # tremble folded in: eps/2 + (1-eps) * logit is the exact
                    # choice law of "uniform w.p. eps, else logit"
                    px1 = eps / 2 + (1 - eps) * expit(
                        rule.precision * (ax[:, :, 1] - ax[:, :, 0])
                    )
                    py1 = eps / 2 + (1 - eps) * expit(
                        rule.precision * (ay[:, :, 1] - ay[:, :, 0])
                    )
                    sx = (u[:, n : 2 * n] < px1).astype(np.int64)
                    sy = (u[:, 2 * n :] < py1).astype(np.int64)
                else:
                    pay_x = mrow[sx, sy_faced]
                    pay_y = mcol[sy, sx_faced]
                    peer_x = (agent_idx + 1 + (u[:, n : 2 * n] * (n - 1)).astype(np.int64)) % n
                    peer_y = (agent_idx + 1 + (u[:, 4 * n : 5 * n] * (n - 1)).astype(np.int64)) % n
                    gap_x = np.take_along_axis(pay_x, peer_x, 1) - pay_x
                    gap_y = np.take_along_axis(pay_y, peer_y, 1) - pay_y
                    prob_x = rule.rate * np.clip(gap_x, 0.0, None) / span
                    prob_y = rule.rate * np.clip(gap_y, 0.0, None) / span
                    nx = np.where(
                        u[:, 2 * n : 3 * n] < prob_x,
                        np.take_along_axis(sx, peer_x, 1), sx,
                    )
                    ny = np.where(
                        u[:, 5 * n : 6 * n] < prob_y,
                        np.take_along_axis(sy, peer_y, 1), sy,
                    )
                    # tremble: u < eps picks uniformly (second strategy on the
                    # upper half of the tremble window)
                    utx = u[:, 3 * n : 4 * n]
                    uty = u[:, 6 * n :]
                    sx = np.where(utx < eps, (utx >= eps / 2).astype(np.int64), nx)
                    sy = np.where(uty < eps, (uty >= eps / 2).astype(np.int64), ny)
            done += ns

    final_x = [
        AgentPopulation("X", tuple(int(v) for v in sx[r]),
                        tuple((float(a0), float(a1)) for a0, a1 in ax[r]))
        for r in range(n_rep)
    ]
    final_y = [
        AgentPopulation("Y", tuple(int(v) for v in sy[r]),
                        tuple((float(a0), float(a1)) for a0, a1 in ay[r]))
        for r in range(n_rep)
    ]
    return p_counts, q_counts, final_x, final_y


def segment_trajectories(
    schedule: Schedule,
    p_row: np.ndarray,
    q_row: np.ndarray,
    n_agents: int,
    group_id: str,
) -> list[Trajectory]:
    """Cut one replicate's count series at the schedule's switch boundaries.

    The transition spanning a switch belongs to neither segment: it mixes
    two incentive regimes.
    """
    out = []
    t0 = 0
    for entry in schedule.entries:
        states = tuple(
            PopulationState(int(p_row[t]), int(q_row[t]), n_agents)
            for t in range(t0, t0 + entry.rounds)
        )
        out.append(Trajectory(states, group_id=group_id, game_id=entry.game_id))
        t0 += entry.rounds
    return out


def simulate_agents(
    schedule: Schedule, config: SimConfig, group_id: str | None = None
) -> list[Trajectory]:
    """Run one seeded session; one Trajectory per schedule entry."""
    p_counts, q_counts, _, _ = simulate_counts(schedule, config, [config.seed])
    label = group_id if group_id is not None else f"s{config.seed}"
    return segment_trajectories(
        schedule, p_counts[0], q_counts[0], config.n_agents, label
    )
