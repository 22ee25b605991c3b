#!/usr/bin/env python3
"""Building coalition games: explicit tables, unanimity patterns, leaf coverage.

The value function v answers one question per coalition S: how much security
did the members of S deliver on their own? Three constructions are shown,
ending with the identity that leaf coverage is just a sum of unanimity games.
"""

from fractions import Fraction

from riskshare import (
    Control,
    LeafCondition,
    PlayerSet,
    Threat,
    ThreatTree,
    game_add,
    game_from_table,
    game_scale,
    leaf_coverage_game,
    unanimity_game,
)

team = PlayerSet(("ana", "ben", "cho"))

# ---------------------------------------------------------------------------
# 1. An explicit table (e.g. hand-assessed by a review board)
# ---------------------------------------------------------------------------

table = game_from_table(
    team,
    [
        ([], 0),
        (["ana"], 1),            # ana fixed one issue alone
        (["ben"], 0),            # ben's commits only work with help
        (["cho"], 0),
        (["ana", "ben"], 1),
        (["ana", "cho"], 2),
        (["ben", "cho"], 1),     # ben + cho jointly fixed one issue
        (["ana", "ben", "cho"], 3),
    ],
)
print("v({ana,cho}) =", table.evaluate(["ana", "cho"]))
print("v(everyone)  =", table.grand_value())

# ---------------------------------------------------------------------------
# 2. Unanimity games: the pull-request pattern
# ---------------------------------------------------------------------------

# A reviewed change involving exactly {ben, cho} counts only when both are in
# the coalition; supersets inherit the credit, proper subsets get nothing.
upload_fix = unanimity_game(team, {"ben", "cho"})
for coalition in ([], ["ben"], ["ben", "cho"], ["ana", "ben", "cho"]):
    print(f"  upload_fix v({coalition}) = {upload_fix.evaluate(coalition)}")

# ---------------------------------------------------------------------------
# 3. Leaf coverage: the threat tree meets the attribution map
# ---------------------------------------------------------------------------

tree = ThreatTree(
    threats=(
        Threat(
            "T1",
            "account takeover",
            controls=(
                Control("C-name", "verify user names", (LeafCondition("chk-name"),)),
                Control("C-upld", "verify uploads", (LeafCondition("chk-upload"),)),
                Control("C-qry", "sanitize queries", (LeafCondition("chk-query"),)),
            ),
        ),
    )
)

attribution = {
    "chk-name": {"ana"},
    "chk-upload": {"ben", "cho"},
    "chk-query": {"ana", "cho"},
}

coverage = leaf_coverage_game(tree, attribution, team)
print("\nleaf coverage (raw counts):")
for mask in range(8):
    ids = team.ids_of(mask)
    print(f"  v({set(ids) if ids else '{}'}) = {coverage.value_of_mask(mask)}")

# The same game, normalized by the tree's leaf count, is bounded by 1:
normalized = leaf_coverage_game(tree, attribution, team, normalized=True)
print("normalized grand value:", normalized.grand_value())

# ---------------------------------------------------------------------------
# 4. The decomposition identity
# ---------------------------------------------------------------------------

# Coverage = sum of one unanimity game per addressed leaf; normalization is a
# scalar. Both identities hold exactly, coalition by coalition.
as_sum = game_add(
    game_add(unanimity_game(team, {"ana"}), unanimity_game(team, {"ben", "cho"})),
    unanimity_game(team, {"ana", "cho"}),
)
scaled = game_scale(as_sum, Fraction(1, tree.leaf_count))
for mask in range(8):
    assert coverage.value_of_mask(mask) == as_sum.value_of_mask(mask)
    assert normalized.value_of_mask(mask) == scaled.value_of_mask(mask)
print("\ncoverage == sum of unanimity games (exactly), normalization is a scalar")
