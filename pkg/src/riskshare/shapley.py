"""Exact and sampled Shapley values, plus an axiom auditor.

Three solvers share one result type:

* :func:`shapley_exact` -- the subset-sum formula with exact big-integer
  factorial weights; the reference method for desk-scale teams.
* :func:`shapley_permutation_oracle` -- enumerates all n! orderings and
  averages marginal contributions. Mathematically the same quantity computed
  a different way, kept as an independent cross-check of the subset solver.
* :func:`shapley_monte_carlo` -- samples orderings. Permutations are derived
  counter-style from (seed, sample index), so any partitioning of sample
  indices across workers reproduces the same estimate bit for bit.

All arithmetic on values is exact rational arithmetic. Fairness disputes
should be about the model, never about floating-point noise.
"""

from __future__ import annotations

import hashlib
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import CapacityError, GameDefinitionError
from .games import MATERIALIZATION_CAP, CoalitionGame, game_add

#: Exact subset-sum solver refuses larger teams (2^(n-1) terms per player).
EXACT_PLAYER_CAP = MATERIALIZATION_CAP
#: Full permutation enumeration refuses larger teams (n! orderings).
ORACLE_PLAYER_CAP = 9

METHOD_EXACT = "exact-subset"
METHOD_ORACLE = "exact-permutation"
METHOD_MONTE_CARLO = "monte-carlo"


@dataclass(frozen=True)
class ShapleyResult:
    """Per-player values, normalized shares, and solver provenance.

    ``share`` is ``phi_i / sum(phi)`` and is ``None`` when the total is zero
    (a zero game has no meaningful proportions). For the sampling solver,
    ``standard_error`` holds a per-player estimate derived from the sample
    variance of the marginal contributions.
    """

    players: tuple[str, ...]
    phi: dict[str, Fraction]
    method: str
    samples: Optional[int] = None
    seed: Optional[int] = None
    standard_error: Optional[dict[str, float]] = None

    @property
    def total(self) -> Fraction:
        return sum(self.phi.values(), Fraction(0))

    @property
    def share(self) -> Optional[dict[str, Fraction]]:
        total = self.total
        if total == 0:
            return None
        return {p: self.phi[p] / total for p in self.players}

    def phi_vector(self) -> tuple[Fraction, ...]:
        return tuple(self.phi[p] for p in self.players)


def _result(game: CoalitionGame, phi: list[Fraction], method: str, **extra) -> ShapleyResult:
    players = game.players.players
    return ShapleyResult(players=players, phi=dict(zip(players, phi)), method=method, **extra)


def shapley_exact(game: CoalitionGame, cap: int = EXACT_PLAYER_CAP) -> ShapleyResult:
    """Exact values via the weighted subset sum.

    For each player i, sums ``w(|S|) * (v(S + i) - v(S))`` over all subsets S
    of the other players, with ``w(s) = s! (n-s-1)! / n!`` held as an exact
    rational. Cost is ``n * 2^(n-1)`` evaluations.

    Raises
    ------
    CapacityError
        If the team exceeds ``cap``; use :func:`shapley_monte_carlo` instead.
    """
    n = game.n
    if n > cap:
        raise CapacityError(
            f"exact solver capped at {cap} players, got {n}; "
            "use shapley_monte_carlo for teams this large"
        )
    vals = game.value_table()
    fact = [math.factorial(k) for k in range(n + 1)]
    weight = [Fraction(fact[s] * fact[n - s - 1], fact[n]) for s in range(n)]
    full = (1 << n) - 1
    phi: list[Fraction] = []
    for i in range(n):
        bit = 1 << i
        rest = full ^ bit
        total = Fraction(0)
        sub = rest
        while True:
            total += weight[sub.bit_count()] * (vals[sub | bit] - vals[sub])
            if sub == 0:
                break
            sub = (sub - 1) & rest
        phi.append(total)
    return _result(game, phi, METHOD_EXACT)


def shapley_permutation_oracle(game: CoalitionGame, cap: int = ORACLE_PLAYER_CAP) -> ShapleyResult:
    """Exact values by averaging marginals over all n! orderings.

    Independent of the subset-sum route; both must agree bit for bit. Values
    are put over a common denominator first so the permutation walk runs on
    plain integers, keeping full enumeration affordable up to the cap.
    """
    n = game.n
    if n > cap:
        raise CapacityError(f"permutation enumeration capped at {cap} players, got {n}")
    vals = game.value_table()
    den = math.lcm(*(v.denominator for v in vals))
    ivals = [v.numerator * (den // v.denominator) for v in vals]
    totals = [0] * n
    for perm in itertools.permutations(range(n)):
        mask = 0
        prev = 0
        for p in perm:
            mask |= 1 << p
            cur = ivals[mask]
            totals[p] += cur - prev
            prev = cur
    scale = math.factorial(n) * den
    phi = [Fraction(t, scale) for t in totals]
    return _result(game, phi, METHOD_ORACLE)


# --------------------------------------------------------------------------
# Monte-Carlo sampling
# --------------------------------------------------------------------------


class _CounterStream:
    """Deterministic 64-bit word stream keyed by (seed, sample index).

    SHA-256 of ``seed:index:block`` yields four words per block. The stream
    depends only on its key, never on call interleaving, which is what makes
    worker-count-independent sampling possible.
    """

    __slots__ = ("_prefix", "_block", "_words")

    def __init__(self, seed: int, index: int):
        self._prefix = b"%d:%d:" % (seed, index)
        self._block = 0
        self._words: list[int] = []

    def _word(self) -> int:
        if not self._words:
            digest = hashlib.sha256(self._prefix + b"%d" % self._block).digest()
            self._block += 1
            self._words = [int.from_bytes(digest[k : k + 8], "big") for k in (24, 16, 8, 0)]
        return self._words.pop()

    def randbelow(self, bound: int) -> int:
        # rejection sampling keeps the draw unbiased
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            w = self._word()
            if w < limit:
                return w % bound


def sample_permutation(seed: int, index: int, n: int) -> list[int]:
    """The permutation used for sample ``index`` under ``seed`` (Fisher-Yates)."""
    stream = _CounterStream(seed, index)
    perm = list(range(n))
    for i in range(n - 1, 0, -1):
        j = stream.randbelow(i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    return perm


def _mc_chunk_table(ivals, n, seed, start, stop):
    """Integer marginal sums and sums of squares for samples [start, stop)."""
    totals = [0] * n
    sq = [0] * n
    for index in range(start, stop):
        perm = sample_permutation(seed, index, n)
        mask = 0
        prev = 0
        for p in perm:
            mask |= 1 << p
            cur = ivals[mask]
            diff = cur - prev
            totals[p] += diff
            sq[p] += diff * diff
            prev = cur
    return totals, sq


def shapley_monte_carlo(
    game: CoalitionGame,
    samples: int,
    seed: int,
    workers: int = 1,
) -> ShapleyResult:
    """Estimate values from uniformly sampled orderings.

    The estimate for player i is the mean marginal contribution over
    ``samples`` permutations. Because each permutation's marginals telescope
    to v(N), the estimates sum to v(N) *exactly* at every sample count. The
    permutation for sample k depends only on ``(seed, k)``, so results are
    identical for any ``workers`` value.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    n = game.n

    if n <= MATERIALIZATION_CAP:
        vals = game.value_table()
        den = math.lcm(*(v.denominator for v in vals))
        ivals = [v.numerator * (den // v.denominator) for v in vals]
        worker_fn = lambda lohi: _mc_chunk_table(ivals, n, seed, *lohi)  # noqa: E731
    else:
        den = None
        worker_fn = lambda lohi: _mc_chunk_rule(game, seed, *lohi)  # noqa: E731

    chunk = max(1, math.ceil(samples / workers))
    ranges = [(lo, min(lo + chunk, samples)) for lo in range(0, samples, chunk)]
    if len(ranges) == 1:
        parts = [worker_fn(ranges[0])]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(worker_fn, ranges))

    totals = [sum(part[0][i] for part in parts) for i in range(n)]
    squares = [sum(part[1][i] for part in parts) for i in range(n)]

    if den is not None:
        phi = [Fraction(t, samples * den) for t in totals]
        mean_sq = [Fraction(s, den * den) for s in squares]
    else:
        phi = [t / samples for t in totals]
        mean_sq = squares

    stderr: dict[str, float] = {}
    for i, player in enumerate(game.players.players):
        if samples < 2:
            stderr[player] = 0.0
            continue
        # exact sample variance of the marginals, converted to float at the end
        variance = (mean_sq[i] - samples * phi[i] * phi[i]) / (samples - 1)
        stderr[player] = math.sqrt(float(variance) / samples)

    return _result(
        game,
        phi,
        METHOD_MONTE_CARLO,
        samples=samples,
        seed=seed,
        standard_error=stderr,
    )


def _mc_chunk_rule(game: CoalitionGame, seed: int, start: int, stop: int):
    """Fraction-arithmetic fallback for games too large to materialize."""
    n = game.n
    totals = [Fraction(0)] * n
    sq = [Fraction(0)] * n
    for index in range(start, stop):
        perm = sample_permutation(seed, index, n)
        mask = 0
        prev = Fraction(0)
        for p in perm:
            mask |= 1 << p
            cur = game.value_of_mask(mask)
            diff = cur - prev
            totals[p] += diff
            sq[p] += diff * diff
            prev = cur
    return totals, sq


# --------------------------------------------------------------------------
# Axiom audit
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AxiomReport:
    """Deterministic audit of a value vector against the fairness axioms.

    ``symmetry_violations`` lists interchangeable player pairs that received
    different amounts; ``null_player_violations`` lists players whose marginal
    contribution is zero everywhere yet received a nonzero amount. Either is
    ``None`` when the structural scan was skipped for capacity. ``linearity_ok``
    is ``None`` unless a second game was supplied.
    """

    efficiency_residual: Fraction
    symmetry_violations: Optional[tuple[tuple[str, str], ...]]
    null_player_violations: Optional[tuple[str, ...]]
    linearity_ok: Optional[bool] = None

    @property
    def efficiency_ok(self) -> bool:
        return self.efficiency_residual == 0

    @property
    def all_ok(self) -> bool:
        return (
            self.efficiency_ok
            and not self.symmetry_violations
            and not self.null_player_violations
            and self.linearity_ok is not False
        )


def _interchangeable(vals, n, i, j) -> bool:
    full = (1 << n) - 1
    rest = full & ~(1 << i) & ~(1 << j)
    sub = rest
    while True:
        if vals[sub | (1 << i)] != vals[sub | (1 << j)]:
            return False
        if sub == 0:
            return True
        sub = (sub - 1) & rest


def _is_null(vals, n, i) -> bool:
    full = (1 << n) - 1
    rest = full ^ (1 << i)
    sub = rest
    while True:
        if vals[sub | (1 << i)] != vals[sub]:
            return False
        if sub == 0:
            return True
        sub = (sub - 1) & rest


def check_axioms(
    game: CoalitionGame,
    result: ShapleyResult,
    w: Optional[CoalitionGame] = None,
    *,
    scan_cap: int = EXACT_PLAYER_CAP,
) -> AxiomReport:
    """Audit ``result`` against the game it claims to divide.

    * efficiency: residual ``sum(phi) - v(N)`` (zero means nothing is left
      over and nothing is invented);
    * symmetry: every pair contributing identically must be paid identically;
    * null player: a player who never changes any coalition's value must
      receive zero;
    * linearity: with a second game ``w``, payments for ``v + w`` must equal
      the sum of the separate payments (checked with the exact solver).

    The symmetry/null scans enumerate subsets and are skipped (fields left
    ``None``) above ``scan_cap`` players.
    """
    players = game.players.players
    if set(result.players) != set(players):
        raise GameDefinitionError("result players do not match game players")
    residual = result.total - game.grand_value()

    symmetry: Optional[tuple[tuple[str, str], ...]] = None
    nulls: Optional[tuple[str, ...]] = None
    n = game.n
    if n <= scan_cap:
        vals = game.value_table()
        sym_violations = []
        for i in range(n):
            for j in range(i + 1, n):
                if _interchangeable(vals, n, i, j) and result.phi[players[i]] != result.phi[players[j]]:
                    sym_violations.append((players[i], players[j]))
        symmetry = tuple(sym_violations)
        nulls = tuple(
            players[i] for i in range(n) if _is_null(vals, n, i) and result.phi[players[i]] != 0
        )

    linearity_ok: Optional[bool] = None
    if w is not None:
        phi_v = shapley_exact(game).phi
        phi_w = shapley_exact(w).phi
        phi_vw = shapley_exact(game_add(game, w)).phi
        linearity_ok = all(phi_vw[p] == phi_v[p] + phi_w[p] for p in players)

    return AxiomReport(
        efficiency_residual=residual,
        symmetry_violations=symmetry,
        null_player_violations=nulls,
        linearity_ok=linearity_ok,
    )
