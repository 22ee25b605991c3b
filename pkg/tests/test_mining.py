import warnings

import pytest

from riskshare import (
    CommitLogWarning,
    Cycle,
    DocumentError,
    GameDefinitionError,
    PlayerSet,
    ValidationError,
    cherry_pick_plan,
    derive_attribution,
    game_from_subset_results,
    leaf_coverage_game,
    parse_commit_log,
    render_commit_log,
    resolve_identities,
    select_cycle,
    shapley_exact,
    subset_results_from_attribution,
)
from riskshare.mining import SubsetResult

from conftest import build_fix_count_game, build_three_fix_tree

SIMPLE_LOG = """\
commit: aaa1
author: alice
date: 2023-01-10T09:00:00+00:00
trailer: Satisfies: U-46365-1
---
"""

FULL_LOG = """\
commit: base0
author: lead
date: 2023-01-01T08:00:00+00:00
---
commit: c-alice-1
author: alice
date: 2023-01-02T09:00:00+00:00
parent: base0
trailer: Satisfies: U-46365-1
---
commit: c-bob-1
author: bob
date: 2023-01-03T09:00:00+00:00
parent: c-alice-1
trailer: Satisfies: U-45802-1
---
commit: c-carol-1
author: carol
date: 2023-01-04T09:00:00+00:00
parent: c-bob-1
trailer: Satisfies: U-45802-1
---
commit: c-alice-2
author: alice
date: 2023-01-05T09:00:00+00:00
parent: c-carol-1
trailer: Satisfies: U-45801-1
---
commit: c-carol-2
author: carol
date: 2023-01-06T09:00:00+00:00
parent: c-alice-2
trailer: Satisfies: U-45801-1
---
"""


class TestParse:
    def test_single_commit_with_trailer(self):
        records = parse_commit_log(SIMPLE_LOG)
        assert len(records) == 1
        assert records[0].commit_id == "aaa1"
        assert records[0].author == "alice"
        assert records[0].satisfies() == ("U-46365-1",)

    def test_empty_document(self):
        assert parse_commit_log("") == []
        assert parse_commit_log("\n\n") == []

    def test_two_satisfies_trailers_both_captured(self):
        text = SIMPLE_LOG.replace(
            "trailer: Satisfies: U-46365-1",
            "trailer: Satisfies: U-46365-1\ntrailer: Satisfies: U-45801-1",
        )
        (record,) = parse_commit_log(text)
        assert record.satisfies() == ("U-46365-1", "U-45801-1")

    def test_malformed_line_reports_line_number(self):
        bad = SIMPLE_LOG.replace("author: alice", "author alice")
        with pytest.raises(DocumentError, match="line 2"):
            parse_commit_log(bad)

    def test_unknown_field_rejected(self):
        bad = SIMPLE_LOG.replace("author:", "committer:")
        with pytest.raises(DocumentError, match="unknown field"):
            parse_commit_log(bad)

    def test_unknown_trailer_key_warns_but_parses(self):
        text = SIMPLE_LOG.replace(
            "trailer: Satisfies: U-46365-1", "trailer: Reviewed-by: bob"
        )
        with pytest.warns(CommitLogWarning, match="Reviewed-by"):
            (record,) = parse_commit_log(text)
        assert record.trailers == (("Reviewed-by", "bob"),)
        assert record.satisfies() == ()

    def test_duplicate_commit_id_rejected(self):
        with pytest.raises(DocumentError, match="duplicate commit id"):
            parse_commit_log(SIMPLE_LOG + SIMPLE_LOG)

    def test_missing_date_rejected(self):
        bad = "commit: x\nauthor: a\n---\n"
        with pytest.raises(DocumentError, match="date"):
            parse_commit_log(bad)

    def test_invalid_date_rejected(self):
        bad = SIMPLE_LOG.replace("2023-01-10T09:00:00+00:00", "last tuesday")
        with pytest.raises(DocumentError, match="RFC3339"):
            parse_commit_log(bad)

    def test_zulu_offset_accepted(self):
        text = SIMPLE_LOG.replace("+00:00", "Z")
        assert parse_commit_log(text)[0].timestamp == parse_commit_log(SIMPLE_LOG)[0].timestamp

    def test_final_record_without_separator_is_flushed(self):
        records = parse_commit_log(SIMPLE_LOG.rstrip().rstrip("-"))
        assert len(records) == 1

    def test_round_trip(self):
        records = parse_commit_log(FULL_LOG)
        assert parse_commit_log(render_commit_log(records)) == records


class TestIdentities:
    def test_alias_lookup(self):
        records = parse_commit_log(SIMPLE_LOG.replace("alice", "alice@corp"))
        resolution = resolve_identities(records, {"alice@corp": "alice", "Alice L.": "alice"})
        assert resolution.records[0].author == "alice"
        assert resolution.provisional == ()

    def test_unmapped_identity_is_provisional_with_warning(self):
        records = parse_commit_log(SIMPLE_LOG)
        with pytest.warns(CommitLogWarning, match="provisional"):
            resolution = resolve_identities(records, {"bob@corp": "bob"})
        assert resolution.records[0].author == "alice"
        assert resolution.provisional == ("alice",)

    def test_empty_alias_map_keeps_records(self):
        records = parse_commit_log(FULL_LOG)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            resolution = resolve_identities(records, {})
        assert list(resolution.records) == records

    def test_canonical_ids_pass_through_silently(self):
        records = parse_commit_log(SIMPLE_LOG)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            resolution = resolve_identities(records, {"alice@corp": "alice"})
        assert resolution.provisional == ()


class TestCycles:
    def test_after_commit_excludes_base(self):
        records = parse_commit_log(FULL_LOG)
        window = select_cycle(records, Cycle.after_commit("base0"))
        assert [r.commit_id for r in window] == [
            "c-alice-1",
            "c-bob-1",
            "c-carol-1",
            "c-alice-2",
            "c-carol-2",
        ]

    def test_to_commit_is_inclusive(self):
        records = parse_commit_log(FULL_LOG)
        window = select_cycle(records, Cycle.after_commit("base0", "c-carol-1"))
        assert [r.commit_id for r in window] == ["c-alice-1", "c-bob-1", "c-carol-1"]

    def test_unknown_boundary(self):
        records = parse_commit_log(FULL_LOG)
        with pytest.raises(ValidationError, match="not found"):
            select_cycle(records, Cycle.after_commit("nope"))

    def test_time_window_inclusive(self):
        records = parse_commit_log(FULL_LOG)
        t = {r.commit_id: r.timestamp for r in records}
        window = select_cycle(
            records, Cycle.between_times(t["c-bob-1"], t["c-alice-2"])
        )
        assert [r.commit_id for r in window] == ["c-bob-1", "c-carol-1", "c-alice-2"]

    def test_mixed_bounds_rejected(self):
        with pytest.raises(ValueError):
            Cycle(from_commit="x", from_time=0)


class TestAttribution:
    def test_three_fix_scenario(self):
        records = parse_commit_log(FULL_LOG)
        attribution = derive_attribution(records, build_three_fix_tree(), Cycle.after_commit("base0"))
        assert attribution == {
            "U-46365-1": frozenset({"alice"}),
            "U-45802-1": frozenset({"bob", "carol"}),
            "U-45801-1": frozenset({"alice", "carol"}),
        }

    def test_no_commits_means_all_leaves_unaddressed(self):
        attribution = derive_attribution([], build_three_fix_tree())
        assert set(attribution) == {"U-46365-1", "U-45802-1", "U-45801-1"}
        assert all(authors == frozenset() for authors in attribution.values())

    def test_duplicate_claims_collapse_to_set(self):
        text = FULL_LOG + (
            "commit: c-alice-3\nauthor: alice\n"
            "date: 2023-01-07T09:00:00+00:00\nparent: c-carol-2\n"
            "trailer: Satisfies: U-46365-1\n---\n"
        )
        records = parse_commit_log(text)
        attribution = derive_attribution(records, build_three_fix_tree())
        assert attribution["U-46365-1"] == frozenset({"alice"})

    def test_unknown_leaf_lists_offenders(self):
        text = SIMPLE_LOG.replace("U-46365-1", "U-00000-9")
        records = parse_commit_log(text)
        with pytest.raises(ValidationError, match="U-00000-9"):
            derive_attribution(records, build_three_fix_tree())


class TestCherryPickPlan:
    def test_full_subset_picks_everything_in_order(self):
        records = parse_commit_log(FULL_LOG)
        plan = cherry_pick_plan(records, "base0", {"alice", "bob", "carol"})
        assert plan.picks == ("c-alice-1", "c-bob-1", "c-carol-1", "c-alice-2", "c-carol-2")

    def test_excluded_author_never_appears(self):
        records = parse_commit_log(FULL_LOG)
        plan = cherry_pick_plan(records, "base0", {"bob", "carol"})
        assert all("alice" not in c for c in plan.picks)
        assert plan.picks == ("c-bob-1", "c-carol-1", "c-carol-2")

    def test_interleaved_authors_keep_original_order(self):
        records = parse_commit_log(FULL_LOG)
        plan = cherry_pick_plan(records, "base0", {"alice", "carol"})
        assert plan.picks == ("c-alice-1", "c-carol-1", "c-alice-2", "c-carol-2")

    def test_pick_lists_are_monotone_in_subset(self):
        records = parse_commit_log(FULL_LOG)
        people = ("alice", "bob", "carol")
        for small_mask in range(8):
            for big_mask in range(8):
                if small_mask & big_mask != small_mask:
                    continue
                small = {people[k] for k in range(3) if small_mask >> k & 1}
                big = {people[k] for k in range(3) if big_mask >> k & 1}
                picks_small = set(cherry_pick_plan(records, "base0", small).picks)
                picks_big = set(cherry_pick_plan(records, "base0", big).picks)
                assert picks_small <= picks_big

    def test_unknown_base_commit(self):
        records = parse_commit_log(FULL_LOG)
        with pytest.raises(ValidationError):
            cherry_pick_plan(records, "missing", {"alice"})

    def test_empty_window_warns_in_plan(self):
        records = parse_commit_log(FULL_LOG)
        plan = cherry_pick_plan(records, "c-carol-2", {"alice"})
        assert plan.picks == ()
        assert plan.warnings

    def test_document_has_five_ordered_steps(self):
        records = parse_commit_log(FULL_LOG)
        doc = cherry_pick_plan(records, "base0", {"alice"}).to_document()
        assert [step["step"] for step in doc["steps"]] == [1, 2, 3, 4, 5]
        assert doc["steps"][3]["action"] == "cherry-pick"
        assert doc["steps"][1]["commit"] == "base0"


class TestSubsetResults:
    def players(self):
        return PlayerSet(("1", "2", "3"))

    def joint_feature_results(self):
        # leaves pass only when {1,2} <= S or {3} <= S
        rows = []
        for mask in range(8):
            subset = {p for k, p in enumerate(("1", "2", "3")) if mask >> k & 1}
            passing = []
            if {"1", "2"} <= subset:
                passing.append("f1")
            if "3" in subset:
                passing.append("f2")
            rows.append(SubsetResult(subset, passing))
        return rows

    def two_leaf_tree(self):
        from riskshare.risk import Control, LeafCondition, Threat, ThreatTree

        return ThreatTree(
            threats=(
                Threat(
                    "T",
                    controls=(
                        Control("C1", leaves=(LeafCondition("f1"),)),
                        Control("C2", leaves=(LeafCondition("f2"),)),
                    ),
                ),
            )
        )

    def test_reconstructs_joint_feature_game(self, joint_feature_game):
        game = game_from_subset_results(
            self.joint_feature_results(), self.two_leaf_tree(), self.players()
        )
        for mask in range(8):
            assert game.value_of_mask(mask) == joint_feature_game.value_of_mask(mask)

    def test_empty_subset_with_passes_rejected(self):
        rows = [SubsetResult(set(), {"f1"})]
        with pytest.raises(GameDefinitionError, match="empty coalition"):
            game_from_subset_results(rows, self.two_leaf_tree(), self.players())

    def test_all_failing_gives_zero_game(self):
        rows = [
            SubsetResult({p for k, p in enumerate(("1", "2", "3")) if mask >> k & 1}, [])
            for mask in range(8)
        ]
        game = game_from_subset_results(rows, self.two_leaf_tree(), self.players())
        assert all(game.value_of_mask(m) == 0 for m in range(8))

    def test_coverage_gap_lists_missing(self):
        rows = self.joint_feature_results()[:5]
        with pytest.raises(GameDefinitionError, match="missing"):
            game_from_subset_results(rows, self.two_leaf_tree(), self.players())

    def test_conflicting_duplicates_rejected(self):
        rows = self.joint_feature_results() + [SubsetResult({"3"}, [])]
        with pytest.raises(GameDefinitionError, match="conflicting"):
            game_from_subset_results(rows, self.two_leaf_tree(), self.players())

    def test_consistent_duplicates_tolerated(self):
        rows = self.joint_feature_results()
        game = game_from_subset_results(rows + rows[:2], self.two_leaf_tree(), self.players())
        assert game.grand_value() == 2

    def test_unknown_leaf_rejected(self):
        rows = self.joint_feature_results()
        rows[7] = SubsetResult({"1", "2", "3"}, {"f1", "f2", "zzz"})
        with pytest.raises(GameDefinitionError, match="zzz"):
            game_from_subset_results(rows, self.two_leaf_tree(), self.players())


def test_pathway_equivalence_at_random_sizes():
    """Attribution-derived coverage equals the rebuild-evidence game, any n <= 8."""
    import random

    from riskshare.risk import Control, LeafCondition, Threat, ThreatTree

    rng = random.Random(606)
    for _ in range(15):
        n = rng.randint(1, 8)
        players = PlayerSet(tuple(f"p{k}" for k in range(n)))
        leaves = tuple(LeafCondition(f"f{k}") for k in range(rng.randint(1, 8)))
        tree = ThreatTree(threats=(Threat("T", controls=(Control("C", leaves=leaves),)),))
        attribution = {
            leaf.id: frozenset(rng.sample(players.players, rng.randint(1, n)))
            for leaf in leaves
            if rng.random() < 0.75
        }
        coverage = leaf_coverage_game(tree, attribution, players)
        rebuilt = game_from_subset_results(
            subset_results_from_attribution(tree, attribution, players), tree, players
        )
        assert rebuilt.value_table() == coverage.value_table()


def test_both_evidence_pathways_agree():
    """Trailer-derived coverage and rebuild results define the same game."""
    records = parse_commit_log(FULL_LOG)
    tree = build_three_fix_tree()
    attribution = derive_attribution(records, tree, Cycle.after_commit("base0"))
    players = PlayerSet(("alice", "bob", "carol"))

    via_trailers = leaf_coverage_game(tree, attribution, players)
    via_rebuilds = game_from_subset_results(
        subset_results_from_attribution(tree, attribution, players), tree, players
    )
    for mask in range(8):
        assert via_trailers.value_of_mask(mask) == via_rebuilds.value_of_mask(mask)

    # and the game is the three-fix count table (A=alice, B=bob, C=carol)
    expected = build_fix_count_game(3)
    rename = {"alice": "A", "bob": "B", "carol": "C"}
    for mask in range(8):
        subset = [rename[p] for p in players.ids_of(mask)]
        assert via_trailers.value_of_mask(mask) == expected.evaluate(subset)

    phi = shapley_exact(via_trailers).phi
    assert phi["alice"] == shapley_exact(expected).phi["A"]
