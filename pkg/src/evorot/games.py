"""Companion 2x2 zero-sum games: reduction, scaling and cycle predictions.

A game is given by the row player's 2x2 payoff matrix; the column player
receives the negated value (zero sum). Every such bimatrix reduces, by
column-constant shifts that leave the evolutionary dynamics untouched, to a
pair of anti-diagonal matrices

    [[0, a], [b, 0]]   (row player)      [[0, c], [d, 0]]   (column player)

and, when a*b > 0 and c*d > 0, rescaling each player's pair by a positive
constant so that |a+b| = |c+d| = 1 puts the game in a canonical form with a
unique interior mixed equilibrium at (|c|, |a|). The purely imaginary
eigenvalue magnitude sqrt(a*b*c*d) of the linearized replicator flow there
predicts how fast population trajectories cycle, and sign(a) predicts which
way (positive: counterclockwise).

All payoff arithmetic is exact (fractions.Fraction); floats appear only in
the displayed eigenvalue.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NotMSNE

Rational = Fraction


def _frac(x) -> Fraction:
    """Coerce ints, strings like '-5/6', and Fractions; floats are rejected
    to keep payoff arithmetic exact."""
    if isinstance(x, float):
        raise TypeError("payoff entries must be exact rationals, not floats")
    return Fraction(x)


class GameClass(enum.Enum):
    """Dynamical classification of a reduced game."""

    INTERIOR_MSNE = "interior-msne"
    TRIVIAL = "trivial"


@dataclass(frozen=True)
class PayoffMatrix:
    """Row player's payoffs of a zero-sum 2x2 game, entries exact rationals.

    entries[i][j] is the row player's payoff when the row player uses
    strategy i and the column player strategy j (0 = first strategy).
    The column player's payoff is -entries[i][j].
    """

    entries: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "PayoffMatrix":
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise ValueError("payoff matrix must be 2x2")
        return cls(tuple(tuple(_frac(v) for v in r) for r in rows))

    def scaled(self, k) -> "PayoffMatrix":
        k = _frac(k)
        return PayoffMatrix(tuple(tuple(v * k for v in r) for r in self.entries))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]


@dataclass(frozen=True)
class NormalizedGame:
    """Anti-diagonal elements (a, b, c, d) after reduction and scaling.

    For INTERIOR_MSNE games the scaling guarantees |a+b| = |c+d| = 1 exactly
    and a*b > 0, c*d > 0; TRIVIAL games keep the unscaled reduced values.
    Zero-sum construction additionally forces a*c < 0 on every MSNE game,
    which is what makes sign(a) a rotation direction.
    """

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    game_class: GameClass

    @property
    def is_msne(self) -> bool:
        return self.game_class is GameClass.INTERIOR_MSNE

    def abcd(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class GamePrediction:
    """What the reduced game predicts for population trajectories.

    nash: equilibrium point (p*, q*); None when no strict-dominance chain
        resolves a trivial game (no prediction).
    eigenvalue: magnitude of the imaginary eigenvalue pair at the interior
        equilibrium, in 1/round; 0 for trivial games.
    direction: +1 counterclockwise, -1 clockwise, 0 no rotation.
    """

    normalized: NormalizedGame
    nash: tuple[Fraction, Fraction] | None
    eigenvalue: float
    direction: int


def reduce_to_antidiagonal(m: PayoffMatrix) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """Reduce a zero-sum bimatrix to its anti-diagonal elements.

    Column-constant shifts (which cannot change any strategy's payoff
    advantage, hence not the dynamics) zero the diagonal of each player's
    matrix:

        a_raw = m12 - m22,  b_raw = m21 - m11        (row player)
        c_raw = m22 - m21,  d_raw = m11 - m12        (column player, B = -M^T)

    The four values always sum to zero for a zero-sum input.
    """
    m11, m12 = m.entries[0]
    m21, m22 = m.entries[1]
    return (m12 - m22, m21 - m11, m22 - m21, m11 - m12)


def normalize(a_raw, b_raw, c_raw, d_raw) -> NormalizedGame:
    """Scale reduced payoffs to the canonical |a+b| = |c+d| = 1 form.

    Scaling is per player and by a positive constant, so it preserves the
    orbits of the dynamics up to a change of time unit. Applies only when
    a_raw*b_raw > 0 and c_raw*d_raw > 0 (the interior-equilibrium
    condition); everything else is classified TRIVIAL and returned unscaled.
    """
    a_raw, b_raw = _frac(a_raw), _frac(b_raw)
    c_raw, d_raw = _frac(c_raw), _frac(d_raw)
    if a_raw * b_raw > 0 and c_raw * d_raw > 0:
        s_row = abs(a_raw + b_raw)
        s_col = abs(c_raw + d_raw)
        return NormalizedGame(
            a_raw / s_row, b_raw / s_row, c_raw / s_col, d_raw / s_col,
            GameClass.INTERIOR_MSNE,
        )
    return NormalizedGame(a_raw, b_raw, c_raw, d_raw, GameClass.TRIVIAL)


def interior_equilibrium(g: NormalizedGame) -> tuple[Fraction, Fraction]:
    """Unique interior rest point (|c|, |a|) of an MSNE game.

    Same point as (c/(c+d), a/(a+b)) under the sign conditions; the
    replicator velocity vanishes there exactly.
    """
    if not g.is_msne:
        raise NotMSNE("game has no interior mixed equilibrium")
    return (abs(g.c), abs(g.a))


def eigenvalue_magnitude(g: NormalizedGame) -> float:
    """|lambda| = sqrt(a*b*c*d) at the interior equilibrium (1/round)."""
    if not g.is_msne:
        raise NotMSNE("eigenvalue defined only for interior-MSNE games")
    prod = g.a * g.b * g.c * g.d
    return math.sqrt(prod.numerator / prod.denominator)


def eigenvalue_squared(g: NormalizedGame) -> Fraction:
    """Exact lambda^2 = a*b*c*d, for identity tests."""
    if not g.is_msne:
        raise NotMSNE("eigenvalue defined only for interior-MSNE games")
    return g.a * g.b * g.c * g.d


def rotation_direction(g: NormalizedGame) -> int:
    """Predicted cycling direction: +1 counterclockwise, -1 clockwise, 0 none.

    At the interior point the linearized flow couples the coordinates as
    dp' = -p*(1-p*)(a+b) dq and dq' = -q*(1-q*)(c+d) dp; with a > 0 (and
    c < 0 by the zero-sum construction) this is the counterclockwise pair
    (dp' ~ -dq, dq' ~ +dp).
    """
    if not g.is_msne:
        return 0
    return 1 if g.a > 0 else -1


def dominance_equilibrium(m: PayoffMatrix) -> tuple[Fraction, Fraction] | None:
    """Pure equilibrium of a trivial game by iterated strict dominance.

    Returns the (p*, q*) densities of the first strategies, or None when no
    strict-dominance chain singles out a cell.
    """
    rows = [0, 1]
    cols = [0, 1]
    changed = True
    while changed and (len(rows) > 1 or len(cols) > 1):
        changed = False
        if len(rows) > 1:
            if all(m[rows[0], j] > m[rows[1], j] for j in cols):
                rows = [rows[0]]
                changed = True
            elif all(m[rows[1], j] > m[rows[0], j] for j in cols):
                rows = [rows[1]]
                changed = True
        if len(cols) > 1:
            # column player's payoff is -m[i][j]; j beats k iff m[i][j] < m[i][k]
            if all(m[i, cols[0]] < m[i, cols[1]] for i in rows):
                cols = [cols[0]]
                changed = True
            elif all(m[i, cols[1]] < m[i, cols[0]] for i in rows):
                cols = [cols[1]]
                changed = True
    if len(rows) == 1 and len(cols) == 1:
        return (Fraction(1 if rows[0] == 0 else 0), Fraction(1 if cols[0] == 0 else 0))
    return None


def predict(m: PayoffMatrix) -> GamePrediction:
    """Full pipeline: reduce, normalize, and predict equilibrium and rotation.

    Scale-invariant: predict(k*m) is identical for any positive rational k.
    """
    g = normalize(*reduce_to_antidiagonal(m))
    if g.is_msne:
        return GamePrediction(
            normalized=g,
            nash=interior_equilibrium(g),
            eigenvalue=eigenvalue_magnitude(g),
            direction=rotation_direction(g),
        )
    return GamePrediction(
        normalized=g,
        nash=dominance_equilibrium(m),
        eigenvalue=0.0,
        direction=0,
    )


def companion_matrix(a, b, c, d) -> PayoffMatrix:
    """Zero-sum matrix whose reduction returns exactly (a, b, c, d).

    Requires a + b = -(c + d), the consistency condition every zero-sum
    reduction satisfies. The gauge freedom (column shifts) is fixed by
    m11 = 0, giving m = [[0, -d], [b, b + c]].
    """
    a, b, c, d = (_frac(v) for v in (a, b, c, d))
    if a + b != -(c + d):
        raise ValueError("quadruple is not consistent with a zero-sum game")
    mat = PayoffMatrix.from_rows([[0, -d], [b, b + c]])
    assert reduce_to_antidiagonal(mat) == (a, b, c, d)
    return mat
