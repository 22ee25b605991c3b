"""Budget derivation and proportional payments with an auditable trail.

The avoided-loss interval fixes how much money is on the table; a configured
fraction and anchor pick the budget inside it; payments split the budget in
proportion to normalized Shapley shares. Because a payment ledger must add up,
two rounding modes are offered:

* ``per-recipient`` -- round each raw amount half-up on its own. Simple to
  explain to each recipient, but the column sum can drift from the budget by
  up to ``n - 1`` minor units; the drift is reported, never hidden.
* ``largest-remainder`` -- floor every raw amount to minor units, then hand
  the leftover units to the largest dropped fractions (ties by player id).
  The column sum equals the budget exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DocumentError, PayoutError
from .intervals import Interval, Rationalish, as_fraction
from .shapley import AxiomReport, ShapleyResult

ANCHOR_LOWER = "lower"
ANCHOR_UPPER = "upper"
ANCHOR_MIDPOINT = "midpoint"
ANCHOR_EXPLICIT = "explicit"
ANCHORS = (ANCHOR_LOWER, ANCHOR_UPPER, ANCHOR_MIDPOINT, ANCHOR_EXPLICIT)

PER_RECIPIENT = "per-recipient"
LARGEST_REMAINDER = "largest-remainder"
ROUNDING_MODES = (PER_RECIPIENT, LARGEST_REMAINDER)

REPORT_FORMATS = ("json", "csv", "markdown")

MINOR_UNITS_PER_MAJOR = 100


@dataclass(frozen=True)
class Money:
    """Non-negative amount in integer minor units (e.g. cents)."""

    amount_minor: int
    currency: str = "USD"

    def __post_init__(self):
        if not isinstance(self.amount_minor, int) or isinstance(self.amount_minor, bool):
            raise TypeError(f"amount_minor must be int, got {type(self.amount_minor).__name__}")
        if self.amount_minor < 0:
            raise ValueError(f"money amounts must be >= 0, got {self.amount_minor}")

    def display(self) -> str:
        major, minor = divmod(self.amount_minor, MINOR_UNITS_PER_MAJOR)
        return f"{major}.{minor:02d}"

    def __str__(self) -> str:
        return f"{self.currency} {self.display()}"


@dataclass(frozen=True)
class PlayerPayout:
    player: str
    phi: Fraction
    share: Fraction
    payment: Money


@dataclass(frozen=True)
class Provenance:
    """Where the numbers came from: game source, risk delta, solver identity."""

    game_source: str
    delta: Optional[Interval] = None
    solver: str = "unspecified"
    samples: Optional[int] = None
    seed: Optional[int] = None


@dataclass(frozen=True)
class PayoutReport:
    """Complete, reproducible record of one payment run."""

    budget: Money
    anchor: str
    fraction: Fraction
    rounding_mode: str
    payouts: tuple[PlayerPayout, ...]
    residual_minor: int
    provenance: Provenance
    axioms: Optional[AxiomReport] = None
    notice: Optional[str] = None

    def payment_of(self, player: str) -> Money:
        for row in self.payouts:
            if row.player == player:
                return row.payment
        raise KeyError(player)


def compute_budget(
    delta: Interval,
    fraction: Rationalish,
    anchor: str,
    *,
    explicit_value: Optional[Rationalish] = None,
    currency: str = "USD",
) -> Money:
    """Budget = fraction x an anchored point of the avoided-loss interval.

    ``anchor`` picks the point: the interval's lower end, upper end, midpoint,
    or an explicit caller-supplied value that must lie inside the interval.
    The product is floored to minor units.
    """
    fraction = as_fraction(fraction)
    if fraction < 0 or fraction > 1:
        raise PayoutError(f"fraction must lie in [0, 1], got {fraction}")
    if delta.lo < 0:
        raise PayoutError(f"risk delta must be non-negative, got {delta}")
    if anchor == ANCHOR_LOWER:
        point = delta.lo
    elif anchor == ANCHOR_UPPER:
        point = delta.hi
    elif anchor == ANCHOR_MIDPOINT:
        point = (delta.lo + delta.hi) / 2
    elif anchor == ANCHOR_EXPLICIT:
        if explicit_value is None:
            raise PayoutError("anchor 'explicit' requires explicit_value")
        point = as_fraction(explicit_value)
        if not delta.contains(point):
            raise PayoutError(f"explicit budget anchor {point} outside risk delta {delta}")
    else:
        raise PayoutError(f"unknown anchor {anchor!r}; expected one of {ANCHORS}")
    minor = math.floor(fraction * point * MINOR_UNITS_PER_MAJOR)
    return Money(minor, currency)


def allocate_payments(
    result: ShapleyResult,
    budget: Money,
    rounding_mode: str = PER_RECIPIENT,
    *,
    anchor: str = ANCHOR_EXPLICIT,
    fraction: Rationalish = 1,
    provenance: Optional[Provenance] = None,
    axioms: Optional[AxiomReport] = None,
) -> PayoutReport:
    """Split ``budget`` across players in proportion to their shares.

    ``anchor`` and ``fraction`` only annotate the report with how the budget
    was derived; when a caller supplies a ready-made budget the defaults
    ("explicit", 1) state exactly that.

    Any negative contribution is rejected outright rather than clamped: the
    games this library builds are monotone, so a negative value signals a
    modeling error that silent repair would bury. A zero total contribution
    yields zero payments with an explanatory notice.
    """
    if rounding_mode not in ROUNDING_MODES:
        raise PayoutError(f"unknown rounding mode {rounding_mode!r}; expected one of {ROUNDING_MODES}")
    players = result.players
    negatives = [p for p in players if result.phi[p] < 0]
    if negatives:
        raise PayoutError(f"negative contribution unsupported (players {negatives})")

    if provenance is None:
        provenance = Provenance(
            game_source="unspecified",
            solver=result.method,
            samples=result.samples,
            seed=result.seed,
        )

    total = result.total
    notice = None
    if total == 0:
        notice = "total contribution is zero; shares are undefined and every payment is 0"
        shares = {p: Fraction(0) for p in players}
        payments = {p: 0 for p in players}
    else:
        shares = {p: result.phi[p] / total for p in players}
        raw = {p: shares[p] * budget.amount_minor for p in players}
        if rounding_mode == PER_RECIPIENT:
            payments = {p: math.floor(raw[p] + Fraction(1, 2)) for p in players}
        else:
            payments = {p: math.floor(raw[p]) for p in players}
            leftover = budget.amount_minor - sum(payments.values())
            # one unit per player at most: the dropped fractions sum to `leftover`
            by_remainder = sorted(players, key=lambda p: (-(raw[p] - payments[p]), p))
            for p in by_remainder[:leftover]:
                payments[p] += 1

    payouts = tuple(
        PlayerPayout(p, result.phi[p], shares[p], Money(payments[p], budget.currency))
        for p in players
    )
    residual = sum(payments.values()) - budget.amount_minor
    return PayoutReport(
        budget=budget,
        anchor=anchor,
        fraction=as_fraction(fraction),
        rounding_mode=rounding_mode,
        payouts=payouts,
        residual_minor=residual,
        provenance=provenance,
        axioms=axioms,
        notice=notice,
    )


# --------------------------------------------------------------------------
# Rendering and parsing
# --------------------------------------------------------------------------


def _fraction_str(x: Fraction) -> str:
    return str(x)


def _interval_dict(iv: Optional[Interval]):
    if iv is None:
        return None
    return {"lo": str(iv.lo), "hi": str(iv.hi)}


def _axioms_dict(ax: Optional[AxiomReport]):
    if ax is None:
        return None
    return {
        "efficiency_residual": str(ax.efficiency_residual),
        "efficiency": "pass" if ax.efficiency_ok else "fail",
        "symmetry_violations": None if ax.symmetry_violations is None else [list(p) for p in ax.symmetry_violations],
        "null_player_violations": None if ax.null_player_violations is None else list(ax.null_player_violations),
        "linearity": None if ax.linearity_ok is None else ("pass" if ax.linearity_ok else "fail"),
    }


def report_to_dict(report: PayoutReport) -> dict:
    return {
        "budget": {"amount_minor": report.budget.amount_minor, "currency": report.budget.currency},
        "anchor": report.anchor,
        "fraction": _fraction_str(report.fraction),
        "rounding_mode": report.rounding_mode,
        "residual_minor": report.residual_minor,
        "payouts": [
            {
                "player": row.player,
                "phi": _fraction_str(row.phi),
                "share": _fraction_str(row.share),
                "payment": {"amount_minor": row.payment.amount_minor, "currency": row.payment.currency},
            }
            for row in report.payouts
        ],
        "provenance": {
            "game_source": report.provenance.game_source,
            "delta": _interval_dict(report.provenance.delta),
            "solver": report.provenance.solver,
            "samples": report.provenance.samples,
            "seed": report.provenance.seed,
        },
        "axioms": _axioms_dict(report.axioms),
        "notice": report.notice,
    }


def render_report(report: PayoutReport, format: str = "json") -> str:
    """Serialize a report deterministically (byte-stable for fixed inputs)."""
    if format == "json":
        return json.dumps(report_to_dict(report), indent=2, sort_keys=True) + "\n"
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["player", "phi", "share", "payment_minor", "payment", "currency"])
        for row in report.payouts:
            writer.writerow(
                [row.player, row.phi, row.share, row.payment.amount_minor, row.payment.display(), row.payment.currency]
            )
        writer.writerow([])
        writer.writerow(["budget", "", "", report.budget.amount_minor, report.budget.display(), report.budget.currency])
        writer.writerow(["residual_minor", "", "", report.residual_minor, "", ""])
        return buf.getvalue()
    if format == "markdown":
        return _render_markdown(report)
    raise DocumentError(f"unknown report format {format!r}; expected one of {REPORT_FORMATS}")


def _render_markdown(report: PayoutReport) -> str:
    prov = report.provenance
    lines = [
        "# Security bonus report",
        "",
        f"- budget: **{report.budget}** "
        f"(anchor `{report.anchor}`, fraction `{report.fraction}` of the avoided loss)",
        f"- rounding: `{report.rounding_mode}`, residual {report.residual_minor} minor unit(s)",
        f"- game source: `{prov.game_source}`",
        f"- solver: `{prov.solver}`"
        + (f" (samples={prov.samples}, seed={prov.seed})" if prov.samples is not None else ""),
    ]
    if prov.delta is not None:
        lines.append(
            f"- avoided-loss range: **[{prov.delta.lo}, {prov.delta.hi}]** "
            f"({report.budget.currency}, exact bounds)"
        )
    if report.notice:
        lines += ["", f"> {report.notice}"]
    lines += [
        "",
        "| player | contribution (phi) | share | payment |",
        "|--------|--------------------|-------|---------|",
    ]
    for row in report.payouts:
        lines.append(f"| {row.player} | {row.phi} | {row.share} | {row.payment} |")
    ax = report.axioms
    lines += ["", "## Fairness audit", ""]
    if ax is None:
        lines.append("No axiom audit was attached to this run.")
    else:
        lines.append(f"- efficiency: {'pass' if ax.efficiency_ok else 'FAIL'} (residual {ax.efficiency_residual})")
        if ax.symmetry_violations is None:
            lines.append("- symmetry: not scanned (team above structural-scan cap)")
        elif ax.symmetry_violations:
            pairs = ", ".join(f"{a}/{b}" for a, b in ax.symmetry_violations)
            lines.append(f"- symmetry: FAIL (equal contributors paid differently: {pairs})")
        else:
            lines.append("- symmetry: pass (equal contributors are paid equally)")
        if ax.null_player_violations is None:
            lines.append("- null player: not scanned (team above structural-scan cap)")
        elif ax.null_player_violations:
            lines.append(f"- null player: FAIL (zero contributors paid: {', '.join(ax.null_player_violations)})")
        else:
            lines.append("- null player: pass (only actual contributions are paid)")
        if ax.linearity_ok is not None:
            lines.append(f"- linearity: {'pass' if ax.linearity_ok else 'FAIL'}")
    return "\n".join(lines) + "\n"


def _money_from_dict(d: dict) -> Money:
    return Money(int(d["amount_minor"]), str(d["currency"]))


def parse_report(text: str) -> PayoutReport:
    """Inverse of ``render_report(..., "json")``; round-trips exactly."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"report is not valid JSON: {exc}") from exc
    try:
        ax = doc["axioms"]
        axioms = None
        if ax is not None:
            axioms = AxiomReport(
                efficiency_residual=Fraction(ax["efficiency_residual"]),
                symmetry_violations=None
                if ax["symmetry_violations"] is None
                else tuple((a, b) for a, b in ax["symmetry_violations"]),
                null_player_violations=None
                if ax["null_player_violations"] is None
                else tuple(ax["null_player_violations"]),
                linearity_ok=None if ax["linearity"] is None else ax["linearity"] == "pass",
            )
        prov = doc["provenance"]
        delta = prov["delta"]
        provenance = Provenance(
            game_source=prov["game_source"],
            delta=None if delta is None else Interval(delta["lo"], delta["hi"]),
            solver=prov["solver"],
            samples=prov["samples"],
            seed=prov["seed"],
        )
        payouts = tuple(
            PlayerPayout(
                player=row["player"],
                phi=Fraction(row["phi"]),
                share=Fraction(row["share"]),
                payment=_money_from_dict(row["payment"]),
            )
            for row in doc["payouts"]
        )
        return PayoutReport(
            budget=_money_from_dict(doc["budget"]),
            anchor=doc["anchor"],
            fraction=Fraction(doc["fraction"]),
            rounding_mode=doc["rounding_mode"],
            payouts=payouts,
            residual_minor=int(doc["residual_minor"]),
            provenance=provenance,
            axioms=axioms,
            notice=doc["notice"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"report document malformed: {exc}") from exc
