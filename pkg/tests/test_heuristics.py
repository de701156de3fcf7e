from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from dynsearch import oracle
from dynsearch.costs import INF
from dynsearch.heuristics import (
    check_property,
    hlm,
    label_landmarks,
    lazy_heuristic,
    oracle_family,
    static_adapter,
)
from dynsearch.info import monotonic_wrap
from dynsearch.transition_system import Transition, parse

from conftest import small_instance

AXB = Transition("A", "x", "B")
AYC = Transition("A", "y", "C")


class TestLandmarkHeuristic:
    def test_initial_landmarks_of_fig1(self, landmark_ts):
        assert label_landmarks(landmark_ts) == {"x", "y"}

    def test_values_on_initial_info(self, landmark_ts):
        h = hlm(landmark_ts)
        info = h.source.initial()
        assert h.eval("A", info) == 3
        assert h.eval("B", info) == 0
        assert h.eval("C", info) == 0
        assert h.eval("D", info) == 0

    def test_value_after_update(self, landmark_ts):
        h = hlm(landmark_ts)
        info = h.source.update(h.source.initial(), AYC)
        assert h.eval("A", info) == 3
        assert h.eval("C", info) == 1

    def test_landmarks_of_unsolvable_state_are_all_labels(self):
        ts = parse(
            "ts-format 1\nlabel a 1\nstate S T\ninit S\ngoal T\ntrans T a T\n"
        )
        assert label_landmarks(ts) == {"a"}


class TestLazyHeuristic:
    def test_cheap_until_refined(self, landmark_ts):
        cheap = {s: 0 for s in landmark_ts.states}
        accurate = oracle.hstar_all(landmark_ts)
        h = lazy_heuristic(cheap, accurate, landmark_ts)
        info = h.source.initial()
        assert h.eval("A", info) == 0
        refined = h.source.refine(info, "A")
        assert h.eval("A", refined) == 3
        assert h.eval("B", refined) == 0

    def test_table_must_cover_all_states(self, landmark_ts):
        with pytest.raises(ValueError, match="missing"):
            lazy_heuristic({"A": 0}, {"A": 0}, landmark_ts)

    def test_equal_tables_behave_statically(self, landmark_ts):
        from dynsearch.dynastar import search, trace_to_json_lines

        table = oracle.hstar_all(landmark_ts)
        h = lazy_heuristic(table, table, landmark_ts)
        _, trace_off = search(landmark_ts, h, reeval=False)
        h2 = lazy_heuristic(table, table, landmark_ts)
        _, trace_on = search(landmark_ts, h2, reeval=True)
        assert trace_to_json_lines(trace_off) == trace_to_json_lines(trace_on)


class TestStaticAdapter:
    def test_eval_ignores_information(self, landmark_ts):
        h = static_adapter(oracle.hstar_all(landmark_ts), landmark_ts)
        info = h.source.initial()
        assert h.eval("A", info) == 3
        assert h.eval("A", h.source.refine(info, "A")) == 3

    def test_blind_goal_heuristic_admissible_on_fig1(self, landmark_ts):
        min_cost = min(landmark_ts.label_cost.values())
        table = {
            s: 0 if landmark_ts.is_goal(s) else min_cost for s in landmark_ts.states
        }
        h = static_adapter(table, landmark_ts)
        verdict = check_property(landmark_ts, h, "dyn-admissible")
        assert verdict.holds == "bounded-yes"


class TestOracleFamilies:
    def test_consistent_monotone_with_zero_slack_equals_hstar(self, landmark_ts):
        h = oracle_family(landmark_ts, "consistent-monotone", seed=5, initial_slack=0)
        hstar = oracle.hstar_all(landmark_ts)
        info = h.source.initial()
        assert all(h.eval(s, info) == hstar[s] for s in landmark_ts.states)

    def test_consistent_monotone_initial_slack_two(self, landmark_ts):
        h = oracle_family(landmark_ts, "consistent-monotone", seed=5, initial_slack=2)
        assert h.eval("A", h.source.initial()) == 1  # max(0, 3 - 2)

    def test_slack_shrinks_on_refine_and_clamps(self, landmark_ts):
        h = oracle_family(landmark_ts, "consistent-monotone", seed=5, initial_slack=1)
        info = h.source.initial()
        info = h.source.refine(info, "A")
        assert info == 0
        assert h.source.refine(info, "A") == 0

    def test_unknown_flavor(self, landmark_ts):
        with pytest.raises(ValueError, match="unknown flavor"):
            oracle_family(landmark_ts, "perfect", seed=0)

    def test_admissible_only_values_stay_within_hstar(self):
        for seed in range(30):
            ts = small_instance(seed, max_states=6, solvable_only=False)
            h = oracle_family(ts, "admissible-only", seed)
            hstar = oracle.hstar_all(ts)
            info = h.source.initial()
            for s in ts.states:
                assert 0 <= h.eval(s, info) <= hstar[s]
                refined = h.source.refine(info, s)
                assert h.eval(s, info) <= h.eval(s, refined) <= hstar[s]

    def test_admissible_only_family_passes_bounded_admissibility_check(self):
        for seed in range(100):
            ts = small_instance(seed, max_states=4, solvable_only=False)
            h = oracle_family(ts, "admissible-only", seed)
            verdict = check_property(ts, h, "dyn-admissible", depth_bound=3, max_size=30_000)
            assert verdict.holds == "bounded-yes", (seed, verdict)

    def test_families_are_deterministic(self, landmark_ts):
        a = oracle_family(landmark_ts, "admissible-only", 7)
        b = oracle_family(landmark_ts, "admissible-only", 7)
        assert a.source.initial() == b.source.initial()
        ra = a.source.refine(a.source.initial(), "A")
        rb = b.source.refine(b.source.initial(), "A")
        assert ra == rb


class TestCheckProperty:
    def test_fig1_hlm_not_dyn_consistent_with_spec_witness(self, landmark_ts):
        verdict = check_property(landmark_ts, hlm(landmark_ts), "dyn-consistent")
        assert verdict.holds == "no"
        assert verdict.witness is not None
        assert verdict.witness.events == ()  # violated already at the initial info
        # the documented inequality 3 > 2 + 0 on (A,y,C) is among the violations
        spec_violation = [v for v in verdict.violations if v.transition == AYC]
        assert len(spec_violation) == 1
        assert spec_violation[0].lhs == 3
        assert spec_violation[0].rhs == 2
        # (A,x,B) violates too (3 > 1 + 0) and scans first
        assert verdict.witness.transition == AXB
        assert (verdict.witness.lhs, verdict.witness.rhs) == (3, 1)

    @pytest.mark.parametrize("depth", [6, 8, 10])
    def test_fig1_hlm_dyn_admissible_bounded_yes(self, landmark_ts, depth):
        verdict = check_property(landmark_ts, hlm(landmark_ts), "dyn-admissible", depth)
        assert verdict.holds == "bounded-yes"
        assert verdict.depth_bound == depth

    def test_fig1_hlm_safe_goal_aware_monotone(self, landmark_ts):
        h = hlm(landmark_ts)
        for prop in ("dyn-safe", "dyn-goal-aware", "dyn-monotone"):
            assert check_property(landmark_ts, h, prop, depth_bound=5).holds == "bounded-yes"

    def test_fig1_hlm_not_partially_dyn_consistent(self, landmark_ts):
        # progressing A -x-> B -y-> C binds C to the empty landmark set, and
        # then h(A)=3 > 2+0 = d(A,C) + h(C) although both payloads are defined
        verdict = check_property(landmark_ts, hlm(landmark_ts), "partial-dyn-consistent")
        assert verdict.holds == "no"
        assert verdict.witness.state == "A"
        assert verdict.witness.other_state == "C"
        assert (verdict.witness.lhs, verdict.witness.rhs) == (3, 2)

    def test_fig2_scripted_verdicts(self, reopening_ts, reopening_h):
        monotone = check_property(reopening_ts, reopening_h, "dyn-monotone", depth_bound=4)
        assert monotone.holds == "bounded-yes"
        admissible = check_property(reopening_ts, reopening_h, "dyn-admissible", depth_bound=4)
        assert admissible.holds == "bounded-yes"
        # Reachable info binding E to 4 while D still sits at 0 breaks
        # consistency on the edge E -> D: the narrative notion "consistent
        # throughout the search" is weaker than consistency over all
        # reachable information objects.
        consistent = check_property(reopening_ts, reopening_h, "dyn-consistent", depth_bound=4)
        assert consistent.holds == "no"
        assert consistent.witness.transition == Transition("E", "c1", "D")
        assert (consistent.witness.lhs, consistent.witness.rhs) == (4, 1)
        assert consistent.witness.events == (
            Transition("A", "c2", "C"),
            Transition("C", "c1", "E"),
        )

    def test_consistent_monotone_family_verdicts(self, landmark_ts):
        h = oracle_family(landmark_ts, "consistent-monotone", seed=3, initial_slack=2)
        for prop in (
            "dyn-admissible",
            "dyn-consistent",
            "partial-dyn-consistent",
            "dyn-monotone",
            "dyn-safe",
        ):
            assert check_property(landmark_ts, h, prop, depth_bound=5).holds == "bounded-yes"

    def test_verdict_json_roundtrip(self, landmark_ts):
        verdict = check_property(landmark_ts, hlm(landmark_ts), "dyn-consistent")
        doc = verdict.to_json()
        assert doc["holds"] == "no"
        assert doc["witness"]["lhs"] == 3
        assert any(v["transition"] == ["A", "y", "C"] for v in doc["violations"])

    def test_unknown_property_rejected(self, landmark_ts):
        with pytest.raises(ValueError, match="unknown property"):
            check_property(landmark_ts, hlm(landmark_ts), "admissible")

    def test_witness_reevaluates_to_genuine_violation(self, landmark_ts, reopening_ts, reopening_h):
        from dynsearch.info import validate_witness

        for ts, h in ((landmark_ts, hlm(landmark_ts)), (reopening_ts, reopening_h)):
            verdict = check_property(ts, h, "dyn-consistent", depth_bound=4)
            if verdict.holds != "no":
                continue
            w = verdict.witness
            info = validate_witness(ts, h.source, w.events)
            lhs = h.eval(w.transition.origin, info)
            rhs = ts.label_cost[w.transition.label] + h.eval(w.transition.target, info)
            assert (lhs, rhs) == (w.lhs, w.rhs)
            assert lhs > rhs


class TestPropertyImplications:
    def _verdicts(self, ts, h, depth=4):
        return {
            prop: check_property(ts, h, prop, depth_bound=depth, max_size=40_000).holds
            for prop in ("dyn-safe", "dyn-admissible", "dyn-consistent", "dyn-goal-aware")
        }

    def _assert_chain(self, verdicts):
        if verdicts["dyn-goal-aware"] == "bounded-yes" and verdicts["dyn-consistent"] == "bounded-yes":
            assert verdicts["dyn-admissible"] == "bounded-yes"
        if verdicts["dyn-admissible"] == "bounded-yes":
            assert verdicts["dyn-safe"] == "bounded-yes"
            assert verdicts["dyn-goal-aware"] == "bounded-yes"

    def test_implication_chain_on_fixed_instances(self, landmark_ts, reopening_ts, reopening_h):
        cases = [
            (landmark_ts, hlm(landmark_ts)),
            (reopening_ts, reopening_h),
            (landmark_ts, static_adapter(oracle.hstar_all(landmark_ts), landmark_ts)),
            (landmark_ts, static_adapter({s: 0 for s in landmark_ts.states}, landmark_ts)),
            (landmark_ts, oracle_family(landmark_ts, "consistent-monotone", 1, initial_slack=2)),
            (landmark_ts, oracle_family(landmark_ts, "admissible-only", 1)),
        ]
        for ts, h in cases:
            self._assert_chain(self._verdicts(ts, h))

    @given(seed=st.integers(0, 2_000))
    @settings(max_examples=15, deadline=None)
    def test_implication_chain_on_random_instances(self, seed):
        ts = small_instance(seed, max_states=4, solvable_only=False)
        rng = random.Random(seed)
        table = {s: rng.randint(0, 6) for s in ts.states}
        self._assert_chain(self._verdicts(ts, static_adapter(table, ts), depth=3))

    def test_monotonic_wrap_passes_dyn_monotone(self, landmark_ts):
        wrapped, _ = monotonic_wrap(hlm(landmark_ts))
        verdict = check_property(landmark_ts, wrapped, "dyn-monotone", depth_bound=4)
        assert verdict.holds == "bounded-yes"


def _static_properties(table, ts):
    hstar = oracle.hstar_all(ts)
    admissible = all(table[s] <= hstar[s] for s in ts.states)
    consistent = all(
        table[t.origin] <= ts.label_cost[t.label] + table[t.target]
        for t in ts.transitions
    )
    safe = all(hstar[s] == INF for s in ts.states if table[s] == INF)
    goal_aware = all(table[g] == 0 for g in ts.goals)
    return {
        "dyn-admissible": admissible,
        "dyn-consistent": consistent,
        "dyn-safe": safe,
        "dyn-goal-aware": goal_aware,
    }


@given(seed=st.integers(0, 5_000))
@settings(max_examples=30, deadline=None)
def test_static_adapter_checks_coincide_with_static_properties(seed):
    ts = small_instance(seed, max_states=5, solvable_only=False)
    rng = random.Random(seed ^ 0xBEEF)
    table = {s: rng.choice([0, 1, 2, 3, 5, INF]) for s in ts.states}
    h = static_adapter(table, ts)
    expected = _static_properties(table, ts)
    for prop, should_hold in expected.items():
        verdict = check_property(ts, h, prop, depth_bound=3)
        assert (verdict.holds == "bounded-yes") == should_hold, (prop, table)
