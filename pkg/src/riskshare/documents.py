"""Readers for the JSON input documents.

All numeric fields accept decimal strings, integers, or JSON numbers; every
number is parsed straight into an exact rational (JSON floats are hooked into
Fraction before any binary rounding can happen).
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from .errors import DocumentError
from .games import CoalitionGame, PlayerSet, game_from_table
from .intervals import Interval, as_fraction
from .mining import SubsetResult
from .risk import (
    Control,
    LeafCondition,
    QualitativeScale,
    RiskModel,
    ScaleSet,
    Threat,
    ThreatAssessment,
    ThreatTree,
)

Pathish = Union[str, Path]


def loads_exact(text: str):
    """json.loads with floats parsed as exact decimal Fractions."""
    try:
        return json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc


def load_json(path: Pathish):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    try:
        return loads_exact(text)
    except DocumentError as exc:
        raise DocumentError(f"{path}: {exc}") from exc


def _expect(doc: dict, key: str, where: str):
    if key not in doc:
        raise DocumentError(f"{where}: missing key {key!r}")
    return doc[key]


def _rational(value, where: str) -> Fraction:
    try:
        return as_fraction(value)
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"{where}: {exc}") from exc


def _interval(doc, where: str) -> Interval:
    if not isinstance(doc, dict):
        raise DocumentError(f"{where}: expected an object with 'lo' and 'hi'")
    lo = _rational(_expect(doc, "lo", where), f"{where}.lo")
    hi = _rational(_expect(doc, "hi", where), f"{where}.hi")
    try:
        return Interval(lo, hi)
    except ValueError as exc:
        raise DocumentError(f"{where}: {exc}") from exc


def scale_from_document(doc: dict, where: str = "scale") -> QualitativeScale:
    name = str(_expect(doc, "name", where))
    kind = str(_expect(doc, "kind", where))
    raw_categories = _expect(doc, "categories", where)
    categories = []
    for k, cat in enumerate(raw_categories):
        cat_where = f"{where}.categories[{k}]"
        label = str(_expect(cat, "label", cat_where))
        categories.append((label, _interval(cat, cat_where)))
    try:
        return QualitativeScale(name=name, kind=kind, categories=tuple(categories))
    except ValueError as exc:
        raise DocumentError(f"{where}: {exc}") from exc


def risk_model_from_document(doc: dict) -> RiskModel:
    """Build a RiskModel from a parsed risk-model document.

    Top-level keys: ``scales`` (object with ``likelihood`` and ``impact``
    slots), ``threats`` (nested controls/leaves), ``assessments``.
    """
    scales_doc = _expect(doc, "scales", "document")
    likelihood = scale_from_document(_expect(scales_doc, "likelihood", "scales"), "scales.likelihood")
    impact = scale_from_document(_expect(scales_doc, "impact", "scales"), "scales.impact")
    try:
        scales = ScaleSet(likelihood=likelihood, impact=impact)
    except ValueError as exc:
        raise DocumentError(f"scales: {exc}") from exc

    threats = []
    for t_idx, t_doc in enumerate(_expect(doc, "threats", "document")):
        t_where = f"threats[{t_idx}]"
        controls = []
        for c_idx, c_doc in enumerate(t_doc.get("controls", [])):
            c_where = f"{t_where}.controls[{c_idx}]"
            leaves = tuple(
                LeafCondition(
                    id=str(_expect(l_doc, "id", f"{c_where}.leaves[{l_idx}]")),
                    label=str(l_doc.get("label", "")),
                )
                for l_idx, l_doc in enumerate(c_doc.get("leaves", []))
            )
            controls.append(
                Control(
                    id=str(_expect(c_doc, "id", c_where)),
                    label=str(c_doc.get("label", "")),
                    leaves=leaves,
                )
            )
        threats.append(
            Threat(
                id=str(_expect(t_doc, "id", t_where)),
                label=str(t_doc.get("label", "")),
                controls=tuple(controls),
            )
        )
    tree = ThreatTree(threats=tuple(threats))

    assessments = []
    for a_idx, a_doc in enumerate(doc.get("assessments", [])):
        a_where = f"assessments[{a_idx}]"
        assessments.append(
            ThreatAssessment(
                threat_id=str(_expect(a_doc, "threat", a_where)),
                likelihood_before=str(_expect(a_doc, "likelihood_before", a_where)),
                impact_before=str(_expect(a_doc, "impact_before", a_where)),
                likelihood_after=str(_expect(a_doc, "likelihood_after", a_where)),
                impact_after=str(_expect(a_doc, "impact_after", a_where)),
            )
        )
    return RiskModel(scales=scales, tree=tree, assessments=tuple(assessments))


def load_risk_model(path: Pathish) -> RiskModel:
    return risk_model_from_document(load_json(path))


def coalition_game_from_document(doc, *, label: str = "coalition-table") -> CoalitionGame:
    """Parse a coalition-table document.

    Either a bare list of ``{"coalition": [...], "value": ...}`` rows, or an
    object with a ``players`` roster plus an ``entries`` list. With a bare
    list the roster is the sorted union of all named players.
    """
    if isinstance(doc, dict):
        roster = _expect(doc, "players", "coalition table")
        rows = _expect(doc, "entries", "coalition table")
        default_zero = bool(doc.get("default_zero", False))
        players = PlayerSet(tuple(str(p) for p in roster))
    elif isinstance(doc, list):
        rows = doc
        default_zero = False
        names = sorted({str(p) for row in rows for p in row.get("coalition", [])})
        if not names:
            raise DocumentError("coalition table names no players")
        players = PlayerSet(tuple(names))
    else:
        raise DocumentError("coalition table must be a list or an object")
    entries = []
    for k, row in enumerate(rows):
        where = f"entries[{k}]"
        coalition = [str(p) for p in _expect(row, "coalition", where)]
        value = _rational(_expect(row, "value", where), f"{where}.value")
        entries.append((coalition, value))
    return game_from_table(players, entries, default_zero=default_zero, label=label)


def load_coalition_game(path: Pathish) -> CoalitionGame:
    return coalition_game_from_document(load_json(path), label=f"coalition-table:{Path(path).name}")


def attribution_from_document(doc) -> tuple[Optional[tuple[str, ...]], dict[str, frozenset[str]]]:
    """Parse an attribution document: rows of ``{"leaf": id, "authors": [ids]}``.

    Returns an optional player roster (when the object form carries one) and
    the leaf-to-authors map.
    """
    roster: Optional[tuple[str, ...]] = None
    if isinstance(doc, dict):
        if "players" in doc:
            roster = tuple(str(p) for p in doc["players"])
        rows = _expect(doc, "attribution", "attribution document")
    elif isinstance(doc, list):
        rows = doc
    else:
        raise DocumentError("attribution document must be a list or an object")
    attribution: dict[str, frozenset[str]] = {}
    for k, row in enumerate(rows):
        where = f"attribution[{k}]"
        leaf = str(_expect(row, "leaf", where))
        if leaf in attribution:
            raise DocumentError(f"{where}: duplicate leaf {leaf!r}")
        attribution[leaf] = frozenset(str(a) for a in _expect(row, "authors", where))
    return roster, attribution


def load_attribution(path: Pathish):
    return attribution_from_document(load_json(path))


def subset_results_from_document(doc) -> tuple[Optional[tuple[str, ...]], list[SubsetResult]]:
    """Parse subset-evaluation results: rows of ``{"subset": [...], "passing": [...]}``."""
    roster: Optional[tuple[str, ...]] = None
    if isinstance(doc, dict):
        if "players" in doc:
            roster = tuple(str(p) for p in doc["players"])
        rows = _expect(doc, "results", "subset results document")
    elif isinstance(doc, list):
        rows = doc
    else:
        raise DocumentError("subset results document must be a list or an object")
    results = []
    for k, row in enumerate(rows):
        where = f"results[{k}]"
        subset = [str(p) for p in _expect(row, "subset", where)]
        passing = [str(l) for l in _expect(row, "passing", where)]
        results.append(SubsetResult(subset, passing))
    return roster, results


def load_subset_results(path: Pathish):
    return subset_results_from_document(load_json(path))


def load_aliases(path: Pathish) -> dict[str, str]:
    doc = load_json(path)
    if not isinstance(doc, dict):
        raise DocumentError("alias document must be an object mapping identity -> player id")
    return {str(k): str(v) for k, v in doc.items()}


def coalition_table_document(game: CoalitionGame) -> dict:
    """Serialize a game as a coalition-table document (feedable back in)."""
    players = game.players
    entries = []
    for mask in range(1 << players.n):
        entries.append(
            {"coalition": list(players.ids_of(mask)), "value": str(game.value_of_mask(mask))}
        )
    return {"players": list(players.players), "entries": entries}
