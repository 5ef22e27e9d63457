import random
from fractions import Fraction as F

import pytest

from fdl import (
    BudgetError,
    CandidateRelation,
    FeatureSet,
    FuzzyRelation,
    InputError,
    Interpretation,
    ModelError,
    bisimilar,
    brute_force_greatest,
    check_bisim,
    condition_bound,
    degree_universe,
    dump_relation,
    greatest_bisim,
    load_relation,
)
from fdl.relations import cap, rel_sup
from fdl.fixtures import (
    ALL_BUT_UNIVERSAL,
    ALL_FEATURES,
    HUB_PAIR_GREATEST,
    LEAF_TRIPLE_GREATEST,
    edge_pair,
    fold_pair,
    hub_pair,
    leaf_triple_pair,
    point_pair,
)
from helpers import POOL3, POOL4, random_features, random_model

NO_FEATURES = FeatureSet.none()


def entries(rows, cols, mapping):
    return FuzzyRelation.from_entries(rows, cols, mapping)


class TestCheckBisim:
    def test_hub_stated_relation_passes(self):
        ia, ib = hub_pair()
        report = check_bisim(ia, ib, HUB_PAIR_GREATEST, NO_FEATURES)
        assert report.satisfied and not report.violations

    def test_hub_raised_entry_fails_back_condition(self):
        ia, ib = hub_pair()
        raised = entries(
            ia.domain,
            ib.domain,
            {
                ("u", "u'"): F(9, 10),
                ("v", "v'"): F(1),
                ("w", "w'"): F(1),
                ("v", "w'"): F(4, 5),
                ("w", "v'"): F(4, 5),
            },
        )
        report = check_bisim(ia, ib, raised, NO_FEATURES)
        assert not report.satisfied
        v = report.violations[0]
        assert (v.condition, v.x, v.x_prime) == ("FB4", "u", "u'")
        assert v.witness == ("v'",)
        assert (v.lhs, v.rhs) == (F(9, 10), F(4, 5))

    def test_fold_inverse_feature_breaks_stated_relation(self):
        ia, ib = fold_pair()
        stated = entries(
            ia.domain,
            ib.domain,
            {("u", "u'"): 1, ("v1", "v1'"): 1, ("v2", "v2'"): 1, ("v3", "v2'"): 1},
        )
        assert check_bisim(ia, ib, stated, NO_FEATURES).satisfied
        report = check_bisim(ia, ib, stated, FeatureSet(inverse=True))
        assert not report.satisfied
        hit = [v for v in report.violations if (v.x, v.x_prime) == ("v3", "v2'")]
        assert hit and hit[0].role == "r-"
        assert {hit[0].lhs, hit[0].rhs} == {F(3, 5), F(3, 10)}

    def test_counting_condition_reports_bound_and_subset(self):
        ia, ib = fold_pair()
        stated = entries(
            ia.domain,
            ib.domain,
            {("u", "u'"): 1, ("v1", "v1'"): 1, ("v2", "v2'"): 1, ("v3", "v2'"): 1},
        )
        report = check_bisim(ia, ib, stated, FeatureSet(q_bounds=frozenset({2})))
        assert not report.satisfied
        forth = [v for v in report.violations if v.condition == "FB6(2)"]
        assert forth and forth[0].x == "u"
        assert set(forth[0].witness) == {"v2", "v3"}

    def test_candidate_relation_mode_invariant(self):
        with pytest.raises(InputError):
            CandidateRelation(FuzzyRelation.constant(["a"], ["b"], F(1, 2)), "crisp")
        with pytest.raises(InputError):
            CandidateRelation(FuzzyRelation.constant(["a"], ["b"], F(1)), "sharp")

    def test_index_mismatch(self):
        ia, ib = hub_pair()
        with pytest.raises(InputError):
            check_bisim(ia, ib, FuzzyRelation.identity(ia.domain), NO_FEATURES)


class TestConditionBound:
    def test_hub_bound_after_atomic_initialization(self):
        ia, ib = hub_pair()
        start = entries(
            ia.domain,
            ib.domain,
            {
                ("u", "u'"): 1,
                ("v", "v'"): 1,
                ("w", "w'"): 1,
                ("v", "w'"): F(4, 5),
                ("w", "v'"): F(4, 5),
            },
        )
        assert condition_bound(ia, ib, start, NO_FEATURES, "u", "u'") == F(4, 5)
        # under the all-ones relation nothing binds yet at this pair
        allones = FuzzyRelation.constant(ia.domain, ib.domain, F(1))
        assert condition_bound(ia, ib, allones, NO_FEATURES, "u", "u'") == 1

    def test_atomic_difference_caps_bound(self):
        ia, ib = hub_pair()
        allones = FuzzyRelation.constant(ia.domain, ib.domain, F(1))
        assert condition_bound(ia, ib, allones, NO_FEATURES, "v", "w'") == F(4, 5)
        assert condition_bound(ia, ib, allones, NO_FEATURES, "u", "w'") == 0

    def test_point_pair_bound(self):
        ia, ib = point_pair()
        allones = FuzzyRelation.constant(ia.domain, ib.domain, F(1))
        assert condition_bound(ia, ib, allones, ALL_FEATURES, "v", "v") == F(1, 2)

    def test_exactness_against_local_violation_oracle(self):
        # the bound is the exact threshold: any universe value above it
        # breaks some condition at the pair, anything at or below breaks none
        rng = random.Random(113)
        for _ in range(25):
            ia = random_model(rng, "x", rng.randint(1, 3), POOL3, individual_names=("a",))
            ib = random_model(rng, "y", rng.randint(1, 3), POOL3, individual_names=("a",))
            features = random_features(rng)
            z = FuzzyRelation(
                ia.domain,
                ib.domain,
                [[rng.choice(POOL3) for _ in ib.domain] for _ in ia.domain],
            )
            x = rng.choice(ia.domain)
            y = rng.choice(ib.domain)
            bound = condition_bound(ia, ib, z, features, x, y)
            for value in degree_universe(ia, ib):
                patched = [list(row) for row in z.matrix]
                patched[ia.domain.index(x)][ib.domain.index(y)] = value
                report = check_bisim(
                    ia, ib, FuzzyRelation(ia.domain, ib.domain, patched), features
                )
                local = [
                    v for v in report.violations if (v.x, v.x_prime) == (x, y)
                ]
                assert bool(local) == (value > bound), (x, y, value, bound)

    def test_unqualified_counting_against_subset_oracle(self):
        # the implementation only inspects the n strongest successors; the
        # oracle enumerates every subset of positives as the condition reads
        from itertools import combinations

        rng = random.Random(127)
        for _ in range(40):
            ia = random_model(rng, "x", rng.randint(1, 3), POOL3, density=0.8)
            ib = random_model(rng, "y", rng.randint(1, 3), POOL3, density=0.8)
            n = rng.randint(1, 3)
            features = FeatureSet(n_bounds=frozenset({n}))
            z = FuzzyRelation(
                ia.domain,
                ib.domain,
                [[rng.choice(POOL3) for _ in ib.domain] for _ in ia.domain],
            )
            report = check_bisim(ia, ib, z, features)
            got = {
                (v.x, v.x_prime, v.role, v.condition)
                for v in report.violations
                if v.condition.startswith(("FB6n", "FB7n"))
            }
            expected = set()
            rel_a, rel_b = ia.role_relation("r"), ib.role_relation("r")
            for x in ia.domain:
                for y in ib.domain:
                    val = z.at(x, y)
                    if val == 0:
                        continue
                    succ_a = [t for t in ia.domain if rel_a.at(x, t) > 0]
                    for subset in combinations(succ_a, n):
                        tau = min([val] + [rel_a.at(x, t) for t in subset])
                        witnesses = sum(
                            1 for t in ib.domain if rel_b.at(y, t) >= tau
                        )
                        if witnesses < n:
                            expected.add((x, y, "r", f"FB6n({n})"))
                    succ_b = [t for t in ib.domain if rel_b.at(y, t) > 0]
                    for subset in combinations(succ_b, n):
                        tau = min([val] + [rel_b.at(y, t) for t in subset])
                        witnesses = sum(
                            1 for t in ia.domain if rel_a.at(x, t) >= tau
                        )
                        if witnesses < n:
                            expected.add((x, y, "r", f"FB7n({n})"))
            assert got == expected

    def test_qualified_counting_against_witness_search_oracle(self):
        # oracle restates the condition literally: some n-subset of distinct
        # candidates on the other side works, each candidate backed by some
        # member of the given subset
        from itertools import combinations

        rng = random.Random(131)
        for _ in range(40):
            ia = random_model(rng, "x", rng.randint(1, 3), POOL3, density=0.8)
            ib = random_model(rng, "y", rng.randint(1, 3), POOL3, density=0.8)
            n = rng.randint(1, 2)
            features = FeatureSet(q_bounds=frozenset({n}))
            z = FuzzyRelation(
                ia.domain,
                ib.domain,
                [[rng.choice(POOL3) for _ in ib.domain] for _ in ia.domain],
            )
            report = check_bisim(ia, ib, z, features)
            got = {
                (v.x, v.x_prime, v.condition, frozenset(v.witness))
                for v in report.violations
                if v.condition.startswith(("FB6(", "FB7("))
            }
            expected = set()
            rel_a, rel_b = ia.role_relation("r"), ib.role_relation("r")

            def satisfied(tau, subset, candidates, z_at, rel):
                for witnesses in combinations(candidates, n):
                    if all(
                        any(min(z_at(j, w), rel(w)) >= tau for j in subset)
                        for w in witnesses
                    ):
                        return True
                return False

            for x in ia.domain:
                for y in ib.domain:
                    val = z.at(x, y)
                    if val == 0:
                        continue
                    succ_a = [t for t in ia.domain if rel_a.at(x, t) > 0]
                    for subset in combinations(succ_a, n):
                        tau = min([val] + [rel_a.at(x, t) for t in subset])
                        if not satisfied(
                            tau, subset, ib.domain,
                            lambda j, w: z.at(j, w), lambda w: rel_b.at(y, w),
                        ):
                            expected.add((x, y, f"FB6({n})", frozenset(subset)))
                    succ_b = [t for t in ib.domain if rel_b.at(y, t) > 0]
                    for subset in combinations(succ_b, n):
                        tau = min([val] + [rel_b.at(y, t) for t in subset])
                        if not satisfied(
                            tau, subset, ia.domain,
                            lambda j, w: z.at(w, j), lambda w: rel_a.at(x, w),
                        ):
                            expected.add((x, y, f"FB7({n})", frozenset(subset)))
            assert got == expected

    def test_monotone_in_relation(self):
        rng = random.Random(71)
        for _ in range(40):
            ia = random_model(rng, "x", rng.randint(1, 3), POOL4, individual_names=("a",))
            ib = random_model(rng, "y", rng.randint(1, 3), POOL4, individual_names=("a",))
            features = random_features(rng)
            big = FuzzyRelation(
                ia.domain,
                ib.domain,
                [[rng.choice(POOL4) for _ in ib.domain] for _ in ia.domain],
            )
            small = cap(big, rng.choice(POOL4))
            for x in ia.domain:
                for y in ib.domain:
                    lo = condition_bound(ia, ib, small, features, x, y)
                    hi = condition_bound(ia, ib, big, features, x, y)
                    assert lo <= hi


class TestGreatest:
    def test_hub_matrix(self):
        ia, ib = hub_pair()
        result = greatest_bisim(ia, ib, NO_FEATURES, "fuzzy")
        assert result.relation == HUB_PAIR_GREATEST
        assert result.mode == "fuzzy"

    def test_point_pair(self):
        ia, ib = point_pair()
        assert greatest_bisim(ia, ib, ALL_FEATURES, "fuzzy").at("v", "v") == F(1, 2)

    def test_edge_pair(self):
        ia, ib = edge_pair()
        z = greatest_bisim(ia, ib, ALL_BUT_UNIVERSAL, "fuzzy").relation
        assert z == entries(
            ia.domain, ib.domain, {("u", "u'"): 1, ("v", "v'"): F(9, 10)}
        )

    def test_leaf_triple(self):
        ia, ib = leaf_triple_pair()
        z = greatest_bisim(ia, ib, ALL_FEATURES, "fuzzy").relation
        assert z == LEAF_TRIPLE_GREATEST

    def test_sweep_order_irrelevant(self):
        rng = random.Random(73)
        for _ in range(15):
            ia = random_model(rng, "x", rng.randint(1, 3), POOL3, individual_names=("a",))
            ib = random_model(rng, "y", rng.randint(1, 3), POOL3, individual_names=("a",))
            features = random_features(rng)
            pairs = [
                (i, j) for i in range(len(ia.domain)) for j in range(len(ib.domain))
            ]
            rng.shuffle(pairs)
            for mode in ("fuzzy", "crisp"):
                default = greatest_bisim(ia, ib, features, mode)
                shuffled = greatest_bisim(ia, ib, features, mode, _pair_order=pairs)
                assert default.relation == shuffled.relation

    def test_sound_and_entries_in_degree_universe(self):
        rng = random.Random(79)
        for _ in range(30):
            ia = random_model(rng, "x", rng.randint(1, 4), POOL4, individual_names=("a",))
            ib = random_model(rng, "y", rng.randint(1, 4), POOL4, individual_names=("a",))
            features = random_features(rng)
            universe = set(degree_universe(ia, ib))
            for mode in ("fuzzy", "crisp"):
                z = greatest_bisim(ia, ib, features, mode)
                assert check_bisim(ia, ib, z, features).satisfied
                assert all(v in universe for _x, _y, v in z.relation.entries())

    def test_matches_brute_force(self):
        rng = random.Random(83)
        for _ in range(10):
            ia = random_model(rng, "x", rng.randint(1, 3), POOL3, individual_names=("a",))
            ib = random_model(rng, "y", rng.randint(1, 3), POOL3, individual_names=("a",))
            features = random_features(rng)
            for mode in ("fuzzy", "crisp"):
                fix = greatest_bisim(ia, ib, features, mode)
                oracle = brute_force_greatest(ia, ib, features, mode)
                assert fix.relation == oracle.relation

    def test_brute_force_budget_guard(self):
        rng = random.Random(89)
        ia = random_model(rng, "x", 5, POOL4)
        ib = random_model(rng, "y", 5, POOL4)
        with pytest.raises(BudgetError):
            brute_force_greatest(ia, ib, NO_FEATURES)

    def test_brute_force_fixtures(self):
        ia, ib = point_pair()
        assert brute_force_greatest(ia, ib, ALL_FEATURES, "fuzzy").at("v", "v") == F(1, 2)
        one = Interpretation(["p"], concepts={"A": {"p": F(1)}})
        two = Interpretation(["q"], concepts={"A": {"q": F(1)}})
        assert brute_force_greatest(one, two, NO_FEATURES, "crisp").at("p", "q") == 1

    def test_invalid_mode_rejected(self):
        ia, ib = point_pair()
        with pytest.raises(InputError):
            greatest_bisim(ia, ib, NO_FEATURES, "sharp")
        with pytest.raises(InputError):
            brute_force_greatest(ia, ib, NO_FEATURES, "sharp")


class TestClosureLaws:
    def test_handmade_sup_of_bisimulations(self):
        ia, ib = hub_pair()
        z1 = entries(ia.domain, ib.domain, {("v", "v'"): 1})
        z2 = entries(ia.domain, ib.domain, {("w", "w'"): 1})
        assert check_bisim(ia, ib, z1, NO_FEATURES).satisfied
        assert check_bisim(ia, ib, z2, NO_FEATURES).satisfied
        assert check_bisim(ia, ib, rel_sup([z1, z2]), NO_FEATURES).satisfied

    def test_identity_inverse_compose_sup(self):
        rng = random.Random(97)
        checked = 0
        for _ in range(34):
            size = rng.randint(1, 3)
            ia = random_model(rng, "x", size, POOL3, individual_names=("a",))
            ib = random_model(rng, "y", rng.randint(1, 3), POOL3, individual_names=("a",))
            ic = random_model(rng, "z", rng.randint(1, 3), POOL3, individual_names=("a",))
            features = random_features(rng)
            for mode in ("fuzzy", "crisp"):
                identity = FuzzyRelation.identity(ia.domain)
                assert check_bisim(ia, ia, identity, features).satisfied
                z1 = greatest_bisim(ia, ib, features, mode).relation
                z2 = greatest_bisim(ib, ic, features, mode).relation
                assert check_bisim(ib, ia, z1.inverse(), features).satisfied
                assert check_bisim(ia, ic, z1.compose(z2), features).satisfied
                family = [z1, z1.compose(z2.compose(z2.inverse()))]
                if mode == "fuzzy":
                    family.append(cap(z1, F(1, 2)))
                assert check_bisim(ia, ib, rel_sup(family), features).satisfied
                checked += 3
        assert checked >= 100


class TestBisimilar:
    def test_fold_feature_sweep(self):
        ia, ib = fold_pair()
        assert bisimilar(ia, ib, FeatureSet.parse("O,U,Self,N2"), "crisp").holds
        for text in ("I", "Q3", "N3"):
            result = bisimilar(ia, ib, FeatureSet.parse(text), "crisp")
            assert not result.holds
            assert result.failing_individual == "a"

    def test_edge_pair_fuzzy_yes_crisp_no(self):
        ia, ib = edge_pair()
        assert bisimilar(ia, ib, ALL_BUT_UNIVERSAL, "fuzzy").holds
        result = bisimilar(ia, ib, ALL_BUT_UNIVERSAL, "crisp")
        assert not result.holds and result.failing_individual == "a"

    def test_no_individuals_is_an_error(self):
        ia, ib = point_pair()
        with pytest.raises(ModelError):
            bisimilar(ia, ib, NO_FEATURES, "fuzzy")

    def test_partial_individuals_is_an_error(self):
        ia = Interpretation(["u"], {"a": "u"})
        ib = Interpretation(["v"], {"b": "v"})
        with pytest.raises(ModelError):
            bisimilar(ia, ib, NO_FEATURES, "fuzzy")


class TestRelationDocuments:
    def test_roundtrip(self):
        ia, ib = hub_pair()
        candidate = greatest_bisim(ia, ib, NO_FEATURES, "fuzzy")
        doc = dump_relation(candidate)
        again = load_relation(doc, ia.domain, ib.domain)
        assert again.relation == candidate.relation
        assert again.mode == "fuzzy"

    def test_missing_entries_default_zero(self):
        doc = {"mode": "crisp", "entries": [["u", "v", "1"]]}
        rel = load_relation(doc, ["u"], ["v", "w"])
        assert rel.at("u", "w") == 0
        assert rel.mode == "crisp"
