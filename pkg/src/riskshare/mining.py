"""Version-control evidence -> attribution maps and coalition games.

The input is a line-oriented commit log (one field per line, records separated
by ``---``) that any hosted repository can export; commits claim credit for
leaf conditions through repeatable ``Satisfies: <leaf-id>`` trailers, which are
reviewable in pull requests like any other change.

Two pathways turn evidence into a game:

* trailers -> :func:`derive_attribution` -> leaf-coverage game, or
* externally run builds of author subsets -> :func:`game_from_subset_results`.

Rebuilding a product from only a subset's commits is never done here; the
library emits :func:`cherry_pick_plan` documents and consumes the resulting
pass/fail evidence, because partial cherry-picks can produce non-compiling
trees that need human judgment.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Set

from .errors import CommitLogWarning, DocumentError, GameDefinitionError, ValidationError
from .games import CoalitionGame, PlayerSet
from .risk import ThreatTree

SATISFIES_KEY = "Satisfies"
RECORD_SEPARATOR = "---"
KNOWN_TRAILER_KEYS = frozenset({SATISFIES_KEY})


@dataclass(frozen=True)
class CommitRecord:
    """One commit: identity, author, time, ancestry, and trailers."""

    commit_id: str
    author: str
    timestamp: int
    parents: tuple[str, ...] = ()
    trailers: tuple[tuple[str, str], ...] = ()

    def satisfies(self) -> tuple[str, ...]:
        return tuple(v for k, v in self.trailers if k == SATISFIES_KEY)


def _parse_rfc3339(value: str, line_no: int) -> int:
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        stamp = datetime.fromisoformat(text)
    except ValueError as exc:
        raise DocumentError(f"line {line_no}: invalid RFC3339 date {value!r}") from exc
    if stamp.tzinfo is None:
        raise DocumentError(f"line {line_no}: date {value!r} lacks a UTC offset")
    return int(stamp.timestamp())


def parse_commit_log(text: str) -> list[CommitRecord]:
    """Parse the line-oriented log format into ordered records.

    Fields: ``commit:``, ``author:``, ``date:`` (RFC3339), ``parent:``
    (repeatable), ``trailer:`` (repeatable, value is ``Key: value``).
    Records end with a ``---`` line. Unknown trailer keys are kept on the
    record but flagged with a :class:`CommitLogWarning`; structural problems
    raise :class:`DocumentError` with the offending line number.
    """
    records: list[CommitRecord] = []
    seen_ids: set[str] = set()
    unknown_keys: set[str] = set()

    current: dict = {}
    parents: list[str] = []
    trailers: list[tuple[str, str]] = []
    open_record = False

    def flush(line_no: int):
        nonlocal current, parents, trailers, open_record
        for required in ("commit", "author", "date"):
            if required not in current:
                raise DocumentError(f"line {line_no}: record missing {required!r} field")
        commit_id = current["commit"]
        if commit_id in seen_ids:
            raise DocumentError(f"line {line_no}: duplicate commit id {commit_id!r}")
        seen_ids.add(commit_id)
        records.append(
            CommitRecord(
                commit_id=commit_id,
                author=current["author"],
                timestamp=current["date"],
                parents=tuple(parents),
                trailers=tuple(trailers),
            )
        )
        current, parents, trailers = {}, [], []
        open_record = False

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line == RECORD_SEPARATOR:
            if open_record:
                flush(line_no)
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise DocumentError(f"line {line_no}: malformed line {raw!r} (expected 'field: value')")
        key = key.strip()
        value = value.strip()
        open_record = True
        if key == "commit":
            if "commit" in current:
                raise DocumentError(f"line {line_no}: duplicate 'commit' field in record")
            current["commit"] = value
        elif key == "author":
            if "author" in current:
                raise DocumentError(f"line {line_no}: duplicate 'author' field in record")
            current["author"] = value
        elif key == "date":
            if "date" in current:
                raise DocumentError(f"line {line_no}: duplicate 'date' field in record")
            current["date"] = _parse_rfc3339(value, line_no)
        elif key == "parent":
            parents.append(value)
        elif key == "trailer":
            t_key, t_sep, t_value = value.partition(":")
            if not t_sep:
                raise DocumentError(f"line {line_no}: trailer {value!r} is not of the form 'Key: value'")
            t_key = t_key.strip()
            t_value = t_value.strip()
            if t_key not in KNOWN_TRAILER_KEYS:
                unknown_keys.add(t_key)
            trailers.append((t_key, t_value))
        else:
            raise DocumentError(f"line {line_no}: unknown field {key!r}")

    if open_record:
        flush(line_no)

    if unknown_keys:
        warnings.warn(
            f"ignoring unknown trailer keys: {sorted(unknown_keys)}",
            CommitLogWarning,
            stacklevel=2,
        )
    return records


def render_commit_log(records: Iterable[CommitRecord]) -> str:
    """Inverse of :func:`parse_commit_log` (timestamps rendered as UTC)."""
    chunks = []
    for r in records:
        lines = [f"commit: {r.commit_id}", f"author: {r.author}"]
        stamp = datetime.fromtimestamp(r.timestamp, tz=timezone.utc)
        lines.append(f"date: {stamp.isoformat()}")
        lines.extend(f"parent: {p}" for p in r.parents)
        lines.extend(f"trailer: {k}: {v}" for k, v in r.trailers)
        lines.append(RECORD_SEPARATOR)
        chunks.append("\n".join(lines))
    return "\n".join(chunks) + ("\n" if chunks else "")


@dataclass(frozen=True)
class IdentityResolution:
    records: tuple[CommitRecord, ...]
    provisional: tuple[str, ...]  # identities that had no alias entry


def resolve_identities(
    records: Sequence[CommitRecord], aliases: Mapping[str, str]
) -> IdentityResolution:
    """Map author identities (emails, display names) to canonical player ids.

    Identities without an alias entry become provisional players under their
    raw identity, reported and warned about but not fatal; an identity that
    already *is* a canonical id passes through silently.
    """
    canonical = set(aliases.values())
    resolved: list[CommitRecord] = []
    provisional: list[str] = []
    for r in records:
        if r.author in aliases:
            resolved.append(
                CommitRecord(r.commit_id, aliases[r.author], r.timestamp, r.parents, r.trailers)
            )
        else:
            if r.author not in canonical and r.author not in provisional:
                provisional.append(r.author)
            resolved.append(r)
    if provisional:
        warnings.warn(
            f"identities without alias entries kept as provisional players: {provisional}",
            CommitLogWarning,
            stacklevel=2,
        )
    return IdentityResolution(tuple(resolved), tuple(provisional))


# --------------------------------------------------------------------------
# Appraisal cycles
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Cycle:
    """The stretch of history one appraisal run covers.

    Either commit-bounded (strictly after ``from_commit``, up to and including
    ``to_commit``) or time-bounded (inclusive timestamp range); open ends mean
    "to the end of the log". A commit bound that does not occur in the log is
    a validation error.
    """

    from_commit: Optional[str] = None
    to_commit: Optional[str] = None
    from_time: Optional[int] = None
    to_time: Optional[int] = None

    def __post_init__(self):
        commit_bounded = self.from_commit is not None or self.to_commit is not None
        time_bounded = self.from_time is not None or self.to_time is not None
        if commit_bounded and time_bounded:
            raise ValueError("a cycle is bounded by commits or by times, not both")

    @classmethod
    def after_commit(cls, base: str, to_commit: Optional[str] = None) -> "Cycle":
        return cls(from_commit=base, to_commit=to_commit)

    @classmethod
    def between_times(cls, start: Optional[int] = None, end: Optional[int] = None) -> "Cycle":
        return cls(from_time=start, to_time=end)

    @classmethod
    def full(cls) -> "Cycle":
        return cls()


def _index_of_commit(records: Sequence[CommitRecord], commit_id: str) -> int:
    for k, r in enumerate(records):
        if r.commit_id == commit_id:
            return k
    raise ValidationError(f"cycle boundary commit {commit_id!r} not found in the log")


def select_cycle(records: Sequence[CommitRecord], cycle: Cycle) -> list[CommitRecord]:
    """Records inside the cycle, original order preserved."""
    if cycle.from_time is not None or cycle.to_time is not None:
        lo = cycle.from_time if cycle.from_time is not None else float("-inf")
        hi = cycle.to_time if cycle.to_time is not None else float("inf")
        return [r for r in records if lo <= r.timestamp <= hi]
    start = 0
    end = len(records)
    if cycle.from_commit is not None:
        start = _index_of_commit(records, cycle.from_commit) + 1
    if cycle.to_commit is not None:
        end = _index_of_commit(records, cycle.to_commit) + 1
        if end <= start:
            raise ValidationError(
                f"cycle end {cycle.to_commit!r} precedes its start {cycle.from_commit!r}"
            )
    return list(records[start:end])


def derive_attribution(
    records: Sequence[CommitRecord],
    tree: ThreatTree,
    cycle: Cycle = Cycle(),
) -> dict[str, frozenset[str]]:
    """Per-leaf author sets from in-cycle ``Satisfies`` trailers.

    Every tree leaf appears in the result; a leaf no in-cycle commit claimed
    maps to the empty set (covered by no coalition). A trailer naming an
    unknown leaf is a validation error listing all offenders.
    """
    known = set(tree.leaf_ids())
    authors: dict[str, set[str]] = {leaf: set() for leaf in tree.leaf_ids()}
    offenders: list[tuple[str, str]] = []
    for r in select_cycle(records, cycle):
        for leaf_id in r.satisfies():
            if leaf_id not in known:
                offenders.append((r.commit_id, leaf_id))
            else:
                authors[leaf_id].add(r.author)
    if offenders:
        shown = ", ".join(f"{c}->{leaf}" for c, leaf in offenders)
        raise ValidationError(f"trailers reference unknown leaf ids: {shown}")
    return {leaf: frozenset(people) for leaf, people in authors.items()}


# --------------------------------------------------------------------------
# Cherry-pick plans
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CherryPickPlan:
    """Instructions for rebuilding the product from one coalition's commits.

    The plan is emitted, never executed: step 4's picks may not even compile
    on their own, and judging that is build-system work, not accounting work.
    """

    base_commit: str
    subset: tuple[str, ...]
    picks: tuple[str, ...]
    warnings: tuple[str, ...] = ()

    def branch_name(self) -> str:
        return "coalition-" + "-".join(self.subset) if self.subset else "coalition-empty"

    def to_document(self) -> dict:
        return {
            "base_commit": self.base_commit,
            "subset": list(self.subset),
            "warnings": list(self.warnings),
            "steps": [
                {
                    "step": 1,
                    "action": "evaluate-current",
                    "description": "record the current full-team evaluation v1 before touching anything",
                },
                {"step": 2, "action": "declare-base", "commit": self.base_commit},
                {
                    "step": 3,
                    "action": "create-branch",
                    "name": self.branch_name(),
                    "from": self.base_commit,
                },
                {"step": 4, "action": "cherry-pick", "commits": list(self.picks)},
                {
                    "step": 5,
                    "action": "rebuild-and-evaluate",
                    "description": "rebuild, run the leaf checks, record the subset evaluation v2",
                },
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_document(), indent=2, sort_keys=True) + "\n"


def cherry_pick_plan(
    records: Sequence[CommitRecord],
    base_commit: str,
    subset: Set[str],
    *,
    to_commit: Optional[str] = None,
) -> CherryPickPlan:
    """Plan for evaluating coalition ``subset`` from commits after ``base_commit``.

    Picks are the in-window commits authored by the subset, in their original
    log order (so interleaved authors replay in the order they landed). An
    empty pick list is allowed but marked with a warning.
    """
    window = select_cycle(records, Cycle.after_commit(base_commit, to_commit))
    picks = tuple(r.commit_id for r in window if r.author in subset)
    plan_warnings = []
    if not window:
        plan_warnings.append("window after base commit contains no commits")
    elif not picks:
        plan_warnings.append("no commits in the window were authored by the subset")
    return CherryPickPlan(
        base_commit=base_commit,
        subset=tuple(sorted(subset)),
        picks=picks,
        warnings=tuple(plan_warnings),
    )


# --------------------------------------------------------------------------
# Subset evaluation results
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SubsetResult:
    """Outcome of externally rebuilding one coalition: which leaves passed."""

    subset: frozenset[str]
    passing: frozenset[str]

    def __init__(self, subset: Iterable[str], passing: Iterable[str]):
        object.__setattr__(self, "subset", frozenset(subset))
        object.__setattr__(self, "passing", frozenset(passing))


def game_from_subset_results(
    results: Iterable[SubsetResult],
    tree: ThreatTree,
    players: PlayerSet,
    normalized: bool = False,
) -> CoalitionGame:
    """Materialize a game from per-coalition pass lists.

    Requires full coverage of all ``2**n`` coalitions (the exact solver needs
    every value); conflicting duplicates, unknown leaves, and a nonempty pass
    list for the empty coalition are errors.
    """
    known = set(tree.leaf_ids())
    size = 1 << players.n
    values: dict[int, Fraction] = {}
    seen: dict[int, frozenset[str]] = {}
    denom = Fraction(tree.leaf_count) if normalized else Fraction(1)
    if normalized and tree.leaf_count == 0:
        raise GameDefinitionError("cannot normalize over a tree with no leaves")
    for result in results:
        bad = sorted(result.passing - known)
        if bad:
            raise GameDefinitionError(f"subset result references unknown leaf ids: {bad}")
        mask = players.mask_of(result.subset)
        if mask in seen:
            if seen[mask] != result.passing:
                raise GameDefinitionError(
                    f"conflicting duplicate results for coalition {players.ids_of(mask)}"
                )
            continue
        seen[mask] = result.passing
        if mask == 0 and result.passing:
            raise GameDefinitionError(
                f"empty coalition cannot pass leaves, got {sorted(result.passing)}"
            )
        values[mask] = Fraction(len(result.passing)) / denom
    values[0] = Fraction(0)
    missing = [m for m in range(size) if m not in values]
    if missing:
        shown = ", ".join("{" + ",".join(players.ids_of(m)) + "}" for m in missing[:8])
        more = "" if len(missing) <= 8 else f" (+{len(missing) - 8} more)"
        raise GameDefinitionError(f"subset results do not cover all coalitions; missing: {shown}{more}")
    return CoalitionGame(players, table=[values[m] for m in range(size)], label="subset-results")


def subset_results_from_attribution(
    tree: ThreatTree,
    attribution: Mapping[str, Set[str]],
    players: PlayerSet,
) -> list[SubsetResult]:
    """Simulate the evidence an external build harness would produce.

    For each coalition, a leaf passes iff its (nonempty) author set is
    contained in the coalition. Useful for dry runs and for checking that the
    trailer pathway and the rebuild pathway define the same game.
    """
    out = []
    req = {leaf: frozenset(a) for leaf, a in attribution.items() if a}
    for mask in range(1 << players.n):
        members = set(players.ids_of(mask))
        passing = [leaf for leaf, authors in req.items() if authors <= members]
        out.append(SubsetResult(members, passing))
    return out
