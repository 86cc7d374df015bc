import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_min_cost, brute_spanner_min, journey_connected, journey_reach
from tgaug.augmentation import (
    COST_EDGE,
    COST_GROUP,
    All,
    AugmentationProblem,
    Infeasible,
    Pairs,
    Solution,
    Source,
    _SubsetEvaluator,
    component_count_bound_check,
    solution_to_json,
    solve_exact,
    solve_one_plus_one,
    spanner_via_tca,
    unrestricted_candidates,
    verify_solution,
)
from tgaug.temporal_graph import (
    NON_STRICT,
    STRICT,
    InvalidCandidateError,
    TemporalEdge,
    TemporalGraph,
    validate_journey,
)


def G(n, *triples, lifespan=None):
    return TemporalGraph.build(n, [TemporalEdge(u, v, t) for u, v, t in triples], lifespan=lifespan)


def E(u, v, t):
    return TemporalEdge(u, v, t)


class TestProblemModel:
    def test_candidates_must_be_disjoint(self):
        with pytest.raises(InvalidCandidateError):
            AugmentationProblem(G(2, (0, 1, 1)), frozenset({E(0, 1, 1)}))

    def test_pairs_demand_defaults_to_all(self):
        req = Pairs(((0, 1), (1, 0)))
        assert req.effective_demand == 2
        assert Pairs(((0, 1), (1, 0)), demand=1).effective_demand == 1

    def test_pairs_nonempty(self):
        with pytest.raises(ValueError):
            Pairs(())

    def test_candidate_beyond_declared_lifespan(self):
        with pytest.raises(InvalidCandidateError):
            AugmentationProblem(
                G(2, (0, 1, 1)), frozenset({E(0, 1, 5)}), lifespan=3
            )
        # without a declared horizon the candidate simply extends it
        p = AugmentationProblem(G(2, (0, 1, 1)), frozenset({E(0, 1, 5)}))
        assert p.effective_lifespan == 5


class TestVerifySolution:
    def test_connected_base_needs_nothing(self):
        p = AugmentationProblem(G(2, (0, 1, 1)), frozenset({E(0, 1, 2)}))
        assert verify_solution(p, [])

    def test_edgeless_pair(self):
        p = AugmentationProblem(G(2, lifespan=1), frozenset({E(0, 1, 1)}))
        assert not verify_solution(p, [])
        assert verify_solution(p, [E(0, 1, 1)])

    def test_rejects_non_candidates(self):
        p = AugmentationProblem(G(3, lifespan=1), frozenset({E(0, 1, 1)}))
        with pytest.raises(InvalidCandidateError):
            verify_solution(p, [E(1, 2, 1)])

    def test_source_requirement(self):
        g = G(3, (0, 1, 1))
        p = AugmentationProblem(g, frozenset({E(1, 2, 2)}), Source(0))
        assert not verify_solution(p, [])
        assert verify_solution(p, [E(1, 2, 2)])

    def test_pairs_with_demand(self):
        g = G(4, (0, 1, 1))
        req = Pairs(((0, 1), (2, 3)), demand=1)
        p = AugmentationProblem(g, frozenset({E(2, 3, 1)}), req)
        assert verify_solution(p, [])  # (0,1) already satisfied
        assert verify_solution(
            AugmentationProblem(g, frozenset({E(2, 3, 1)}), Pairs(((0, 1), (2, 3)))),
            [E(2, 3, 1)],
        )


class TestUnrestrictedCandidates:
    def test_examples(self):
        assert unrestricted_candidates(G(2, lifespan=1)) == {E(0, 1, 1)}
        assert unrestricted_candidates(G(2, (0, 1, 1), lifespan=2)) == {E(0, 1, 2)}

    def test_counting_identity(self):
        rng = random.Random(3)
        for _ in range(100):
            n = rng.randint(2, 6)
            lifespan = rng.randint(1, 3)
            edges = [
                E(u, v, t)
                for u in range(n)
                for v in range(u + 1, n)
                for t in range(1, lifespan + 1)
                if rng.random() < 0.5
            ]
            g = TemporalGraph.build(n, edges, lifespan=lifespan)
            expected = lifespan * n * (n - 1) // 2 - len(edges)
            assert len(unrestricted_candidates(g)) == expected

    def test_requires_positive_lifespan(self):
        with pytest.raises(ValueError):
            unrestricted_candidates(G(3))


@st.composite
def problems(draw):
    n = draw(st.integers(min_value=1, max_value=5))
    lifespan = draw(st.integers(min_value=1, max_value=3))
    slots = [
        (u, v, t) for u in range(n) for v in range(u + 1, n) for t in range(1, lifespan + 1)
    ]
    base_set = draw(st.sets(st.sampled_from(slots))) if slots else set()
    rest = [s for s in slots if s not in base_set]
    cand_set = draw(st.sets(st.sampled_from(rest))) if rest else set()
    base = TemporalGraph.build(n, [E(*s) for s in base_set], lifespan=lifespan)
    semantics = draw(st.sampled_from([STRICT, NON_STRICT]))
    cost = draw(st.sampled_from([COST_EDGE, COST_GROUP]))
    kind = draw(st.integers(min_value=0, max_value=2))
    if kind == 0:
        req = All()
    elif kind == 1:
        req = Source(draw(st.integers(min_value=0, max_value=n - 1)))
    else:
        k = draw(st.integers(min_value=1, max_value=3))
        pairs = tuple(
            (
                draw(st.integers(min_value=0, max_value=n - 1)),
                draw(st.integers(min_value=0, max_value=n - 1)),
            )
            for _ in range(k)
        )
        req = Pairs(pairs, demand=draw(st.integers(min_value=0, max_value=k)))
    return AugmentationProblem(base, frozenset(E(*s) for s in cand_set), req, semantics, cost)


class TestEvaluatorAgreesWithVerify:
    @settings(max_examples=120, deadline=None)
    @given(problems(), st.randoms(use_true_random=False))
    def test_random_subsets(self, problem, rng):
        ev = _SubsetEvaluator(problem)
        cands = problem.candidates_sorted
        for _ in range(6):
            subset = [e for e in cands if rng.random() < 0.4]
            assert ev.feasible(subset) == verify_solution(problem, subset)


class TestSolveExact:
    def test_connected_base_costs_zero(self):
        p = AugmentationProblem(G(2, (0, 1, 1)), frozenset({E(0, 1, 2)}))
        sol = solve_exact(p)
        assert isinstance(sol, Solution)
        assert sol.cost == 0 and sol.selected == ()

    def test_infeasible_reported_as_value(self):
        # no candidate can ever connect vertex 2
        p = AugmentationProblem(G(3, (0, 1, 1)), frozenset({E(0, 1, 2)}))
        out = solve_exact(p)
        assert out == Infeasible("infeasible")

    def test_budget_exceeded_distinct_from_infeasible(self):
        base = G(3, lifespan=1)
        cands = frozenset({E(0, 1, 1), E(1, 2, 1), E(0, 2, 1)})
        assert isinstance(solve_exact(AugmentationProblem(base, cands)), Solution)
        out = solve_exact(AugmentationProblem(base, cands, budget=1))
        assert out == Infeasible("budget_exceeded")

    def test_lexicographically_least_optimum(self):
        # two interchangeable ways to merge {0,1} with {2}: keep the least edge
        base = G(3, (0, 1, 1), lifespan=1)
        cands = frozenset({E(0, 2, 1), E(1, 2, 1)})
        sol = solve_exact(AugmentationProblem(base, cands))
        assert sol.selected == (E(0, 2, 1),)

    def test_certificates_verify(self):
        base = G(4, (0, 1, 1), (2, 3, 2))
        p = AugmentationProblem(base, unrestricted_candidates(base))
        sol = solve_exact(p)
        augmented = base.augment(sol.selected)
        assert len(sol.certificate) == 12  # every ordered pair
        for u, v, j in sol.certificate:
            assert validate_journey(augmented, j, u)
            assert (j.end if j.hops else u) == v

    def test_threads_do_not_change_the_answer(self):
        base = G(5, (0, 1, 1), lifespan=2)
        p = AugmentationProblem(base, unrestricted_candidates(base))
        a = solve_exact(p, with_certificate=False)
        b = solve_exact(p, with_certificate=False, threads=4)
        assert a == b

    @settings(max_examples=60, deadline=None)
    @given(problems())
    def test_matches_unpruned_enumeration(self, problem):
        expected = brute_min_cost(problem)
        out = solve_exact(problem, with_certificate=False)
        if expected is None:
            assert out == Infeasible("infeasible")
        else:
            assert isinstance(out, Solution)
            assert out.cost == expected
            assert verify_solution(problem, out.selected)

    def test_group_model_costs_at_most_edge_model(self):
        rng = random.Random(21)
        for _ in range(40):
            n = rng.randint(2, 5)
            base = TemporalGraph.build(n, [], lifespan=2)
            cands = frozenset(
                e for e in unrestricted_candidates(base) if rng.random() < 0.6
            )
            if not cands:
                continue
            pe = AugmentationProblem(base, cands, cost_model=COST_EDGE)
            pg = AugmentationProblem(base, cands, cost_model=COST_GROUP)
            edge_out = solve_exact(pe, with_certificate=False)
            group_out = solve_exact(pg, with_certificate=False)
            assert isinstance(edge_out, Solution) == isinstance(group_out, Solution)
            if isinstance(edge_out, Solution):
                assert group_out.cost <= edge_out.cost

    def test_group_model_equals_edge_model_without_repeats(self):
        rng = random.Random(22)
        for _ in range(40):
            n = rng.randint(2, 5)
            base = TemporalGraph.build(n, [], lifespan=1)
            cands = frozenset(
                e for e in unrestricted_candidates(base) if rng.random() < 0.7
            )
            if not cands:
                continue
            pe = AugmentationProblem(base, cands, cost_model=COST_EDGE)
            pg = AugmentationProblem(base, cands, cost_model=COST_GROUP)
            a = solve_exact(pe, with_certificate=False)
            b = solve_exact(pg, with_certificate=False)
            if isinstance(a, Solution):
                assert a.selected == b.selected and a.cost == b.cost
            else:
                assert isinstance(b, Infeasible)

    def test_requirement_monotonicity(self):
        rng = random.Random(23)
        for _ in range(30):
            n = rng.randint(2, 5)
            base = TemporalGraph.build(n, [], lifespan=2)
            cands = unrestricted_candidates(base)
            u = rng.randrange(n)
            others = [v for v in range(n) if v != u]
            pairs = tuple((u, v) for v in rng.sample(others, min(2, len(others))))
            cost_pairs = solve_exact(
                AugmentationProblem(base, cands, Pairs(pairs)), with_certificate=False
            ).cost
            cost_source = solve_exact(
                AugmentationProblem(base, cands, Source(u)), with_certificate=False
            ).cost
            cost_all = solve_exact(
                AugmentationProblem(base, cands, All()), with_certificate=False
            ).cost
            assert cost_pairs <= cost_source <= cost_all

    def test_solution_json_shape(self):
        p = AugmentationProblem(G(2, lifespan=1), frozenset({E(0, 1, 1)}))
        data = solution_to_json(solve_exact(p), p)
        assert data == {
            "schema": 1,
            "feasible": True,
            "model": "edge",
            "semantics": "non-strict",
            "cost": 1,
            "selected": [{"u": 0, "v": 1, "t": 1}],
        }


class TestOnePlusOne:
    def test_worked_example(self):
        # components {0,1} and {2,3,4}: centers 0,1; round robin
        g = G(5, (0, 1, 1), (2, 3, 1), (3, 4, 1))
        out = solve_one_plus_one(g)
        assert out == {E(2, 0, 2), E(3, 1, 2), E(4, 0, 2)}
        assert g.augment(out).is_temporally_connected(NON_STRICT)

    def test_already_connected_snapshot(self):
        g = G(3, (0, 1, 1), (1, 2, 1))
        assert solve_one_plus_one(g) == frozenset()

    def test_contract_error_on_wrong_lifespan(self):
        with pytest.raises(ValueError):
            solve_one_plus_one(G(3, (0, 1, 1), (1, 2, 2)))
        with pytest.raises(ValueError):
            solve_one_plus_one(G(3))  # lifespan 0; needs an explicit override

    def test_size_and_optimality_small(self):
        rng = random.Random(5)
        for _ in range(60):
            n = rng.randint(1, 5)
            pairs = [
                (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.4
            ]
            g = TemporalGraph.build(n, [E(u, v, 1) for u, v in pairs], lifespan=1)
            out = solve_one_plus_one(g)
            smallest = min(len(b) for b in g.snapshot_components(1).blocks)
            assert len(out) == n - smallest
            augmented = g.augment(out)
            assert journey_connected(augmented, NON_STRICT)
            if augmented.lifespan == 2:
                assert augmented.check_property_p()
                assert component_count_bound_check(augmented)
            # no cheaper time-2 completion exists
            cands = frozenset(E(u, v, 2) for u in range(n) for v in range(u + 1, n))
            problem = AugmentationProblem(g, cands)
            expected = brute_min_cost(problem)
            assert expected == len(out)


class TestComponentCountBound:
    def test_violation_by_construction(self):
        # k1 = 3 but a time-2 component of size 2
        g = G(6, (0, 1, 1), (2, 3, 1), (4, 5, 1), (0, 2, 2), (1, 3, 2), (4, 5, 2))
        assert not component_count_bound_check(g)

    def test_contract_error(self):
        with pytest.raises(ValueError):
            component_count_bound_check(G(2, (0, 1, 1)))

    def test_every_connected_lifespan2_graph_passes(self):
        from oracles import all_graphs

        for g in all_graphs(3, 2):
            if g.is_temporally_connected(NON_STRICT):
                assert component_count_bound_check(g)


class TestSpannerBridge:
    def test_single_edge(self):
        g = G(2, (0, 1, 1))
        assert solve_exact(spanner_via_tca(g), with_certificate=False).cost == 1

    def test_two_way_path_example(self):
        g = G(3, (0, 1, 1), (1, 2, 2), (1, 2, 3), (0, 1, 4))
        sol = solve_exact(spanner_via_tca(g), with_certificate=False)
        assert sol.cost == brute_spanner_min(g) == 3

    def test_rejects_disconnected(self):
        with pytest.raises(ValueError):
            spanner_via_tca(G(3, (0, 1, 1)))

    def test_matches_direct_brute_force(self):
        rng = random.Random(9)
        found = 0
        while found < 25:
            n = rng.randint(2, 4)
            lifespan = rng.randint(1, 3)
            edges = [
                E(u, v, t)
                for u in range(n)
                for v in range(u + 1, n)
                for t in range(1, lifespan + 1)
                if rng.random() < 0.55
            ]
            g = TemporalGraph.build(n, edges, lifespan=lifespan)
            if not g.is_temporally_connected(NON_STRICT):
                continue
            found += 1
            sol = solve_exact(spanner_via_tca(g), with_certificate=False)
            assert sol.cost == brute_spanner_min(g)
