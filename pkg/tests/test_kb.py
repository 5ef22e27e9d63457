import random
from fractions import Fraction as F

import pytest

from fdl import (
    ConceptAssertion,
    FeatureSet,
    Gci,
    InputError,
    Interpretation,
    RoleAssertion,
    SameIndividual,
    DistinctIndividual,
    Sublanguage,
    dump_kb,
    greatest_bisim,
    hm_matrix,
    holds,
    invariance_probe,
    load_kb,
    parse_concept,
    parse_role,
    validates,
)
from fdl.relations import pointwise_leq
from fdl.fixtures import edge_pair, fan_model, hub_pair, point_pair
from helpers import POOL3, random_model, rename_model

NO_FEATURES = FeatureSet.none()
FINITE_ALL = FeatureSet(True, True, True, True, frozenset({1, 2}), frozenset({1, 2}))


def named_fan():
    base = fan_model()
    return Interpretation(
        base.domain,
        {"a": "u"},
        {"A": dict(zip(base.domain, base.concept_row("A")))},
        {"r": base.role_relation("r")},
    )


def social_model(camping=F(7, 10), traveling=F(4, 5)):
    domain = ["p", "camping", "traveling", "fashion", "shopping"]
    return Interpretation(
        domain,
        {name: name for name in domain[1:]},
        concepts={"Post": {}},
        roles={
            "interestedIn": {
                ("p", "camping"): camping,
                ("p", "traveling"): traveling,
                ("p", "fashion"): F(3, 10),
                ("p", "shopping"): F(2, 5),
            },
            "shares": {},
            "relatedTo": {},
        },
    )


def social_tbox():
    text = [
        (">= 3 shares . (Post and exists relatedTo . {fashion})",
         "exists interestedIn . {fashion}", "0.5"),
        ("exists interestedIn . {fashion}",
         "exists interestedIn . {shopping}", "0.4"),
        ("0.5 -> exists interestedIn . {camping}",
         "exists interestedIn . {traveling}", "0.6"),
        ("exists interestedIn . {camping}",
         "exists interestedIn . {traveling}", "0.6"),
    ]
    return [
        Gci(parse_concept(lhs), parse_concept(rhs), ">=", F(p_num))
        for lhs, rhs, p_num in ((l, r, {"0.5": F(1, 2), "0.4": F(2, 5), "0.6": F(3, 5)}[p]) for l, r, p in text)
    ]


class TestHolds:
    def test_concept_assertion_on_fan(self):
        model = named_fan()
        assert holds(model, ConceptAssertion(parse_concept("exists r . A"), "a", ">=", F(4, 5)))
        assert not holds(model, ConceptAssertion(parse_concept("exists r . A"), "a", ">", F(4, 5)))
        assert holds(model, ConceptAssertion(parse_concept("exists r . A"), "a", "<=", F(4, 5)))

    def test_role_assertion(self):
        model = Interpretation(
            ["u", "v"], {"a": "u", "b": "v"}, roles={"r": [("u", "v", F(3, 5))]}
        )
        assert holds(model, RoleAssertion(parse_role("r"), "a", "b", ">=", F(1, 2)))
        assert not holds(model, RoleAssertion(parse_role("r"), "a", "b", "<", F(3, 5)))

    def test_same_distinct(self):
        model = Interpretation(["u", "v"], {"a": "u", "b": "u", "c": "v"})
        assert holds(model, SameIndividual("a", "b"))
        assert not holds(model, SameIndividual("a", "c"))
        assert holds(model, DistinctIndividual("a", "c"))

    def test_trivial_gci(self):
        model = named_fan()
        assert holds(model, Gci(parse_concept("1"), parse_concept("1"), ">=", F(1)))

    def test_unsatisfiable_gci_on_graded_model(self):
        model = named_fan()
        # the implication degree drops to 0 wherever A is positive
        assert not holds(model, Gci(parse_concept("A"), parse_concept("0"), ">=", F(1)))

    def test_threshold_zero_rejected(self):
        with pytest.raises(InputError):
            Gci(parse_concept("A"), parse_concept("A"), ">=", F(0))


class TestValidates:
    def test_social_model_validates_all_four(self):
        result = validates(social_model(), social_tbox())
        assert result.valid

    def test_counterexample_reported_with_element(self):
        result = validates(social_model(traveling=F(1, 2)), social_tbox())
        assert not result.valid
        assert result.witness_element == "p"
        assert result.failed_item is social_tbox_item_four(result)

    def test_empty_box_is_valid(self):
        assert validates(named_fan(), []).valid

    def test_stronger_inclusion_implies_weaker(self):
        # validating the constant-guarded inclusion forces the plain one
        rng = random.Random(103)
        third, fourth = social_tbox()[2], social_tbox()[3]
        seen_nontrivial = 0
        for _ in range(200):
            model = random_social(rng)
            if holds(model, third):
                assert holds(model, fourth)
                seen_nontrivial += 1
        assert seen_nontrivial > 20

    def test_plain_inclusion_does_not_imply_guarded(self):
        # interest exactly at the guard with a slightly larger consequent:
        # the plain inclusion holds outright while the guarded one demands 0.6
        model = social_model(camping=F(1, 2), traveling=F(11, 20))
        third, fourth = social_tbox()[2], social_tbox()[3]
        assert holds(model, fourth)
        assert not holds(model, third)


def social_tbox_item_four(result):
    # identity-free helper: the failing item should be the fourth inclusion
    items = social_tbox()
    for item in items:
        if item.describe() == result.failed_item.describe():
            return result.failed_item
    return None


def random_social(rng):
    pool = (F(0), F(2, 5), F(1, 2), F(11, 20), F(3, 5), F(7, 10), F(1))
    domain = ["p", "q", "camping", "traveling", "fashion", "shopping"]
    edges = {}
    for x in ("p", "q"):
        for y in domain[2:]:
            value = rng.choice(pool)
            if value:
                edges[(x, y)] = value
    return Interpretation(
        domain,
        {name: name for name in domain[2:]},
        concepts={"Post": {}},
        roles={"interestedIn": edges, "shares": {}, "relatedTo": {}},
    )


class TestKbDocuments:
    def test_roundtrip(self):
        doc = {
            "tbox": [{"lhs": "B", "rhs": "exists r . A", "rel": ">=", "p": "0.1"}],
            "abox": [
                {"kind": "concept", "c": "exists r . A", "a": "a", "cmp": ">=", "p": "0.8"},
                {"kind": "same", "a": "a", "b": "b"},
                {"kind": "distinct", "a": "a", "b": "c"},
                {"kind": "role", "r": "r ; s", "a": "a", "b": "b", "cmp": "<", "p": "0.5"},
            ],
        }
        kb = load_kb(doc)
        assert len(kb.tbox) == 1 and len(kb.abox) == 4
        assert load_kb(dump_kb(kb)) == kb

    def test_unknown_kind(self):
        with pytest.raises(InputError):
            load_kb({"abox": [{"kind": "negated", "a": "a", "b": "b"}]})


class TestHmMatrix:
    def test_depth_zero_dominates_greatest(self):
        ia, ib = hub_pair()
        greatest = greatest_bisim(ia, ib, NO_FEATURES, "fuzzy").relation
        shallow = hm_matrix(ia, ib, NO_FEATURES, Sublanguage.CORE_EXISTENTIAL, 0)
        assert pointwise_leq(greatest, shallow.matrix)

    def test_antitone_in_depth_and_converges(self):
        ia, ib = hub_pair()
        greatest = greatest_bisim(ia, ib, NO_FEATURES, "fuzzy").relation
        previous = None
        converged = False
        for depth in range(0, 3):
            result = hm_matrix(
                ia, ib, NO_FEATURES, Sublanguage.CORE_EXISTENTIAL, depth,
                max_concepts=100_000, lower_bound=greatest,
            )
            if previous is not None:
                assert pointwise_leq(result.matrix, previous)
            assert pointwise_leq(greatest, result.matrix)
            previous = result.matrix
            if result.matrix == greatest:
                converged = True
                break
        assert converged

    def test_point_pair_fragments(self):
        ia, ib = point_pair()
        prime = hm_matrix(ia, ib, FINITE_ALL, Sublanguage.CORE_EXISTENTIAL, 2)
        assert prime.matrix.at("v", "v") == F(1, 2)
        delta = hm_matrix(ia, ib, FINITE_ALL, Sublanguage.DELTA_EXISTENTIAL, 2)
        assert delta.matrix.at("v", "v") == 0
        separator = delta.separators[("v", "v")]
        assert separator is not None
        # any recorded separator must actually take different values
        from fdl import eval_concept

        assert eval_concept(ia, separator).at("v") != eval_concept(ib, separator).at("v")

    def test_deterministic(self):
        ia, ib = hub_pair()
        first = hm_matrix(ia, ib, NO_FEATURES, Sublanguage.CORE_EXISTENTIAL, 2)
        second = hm_matrix(ia, ib, NO_FEATURES, Sublanguage.CORE_EXISTENTIAL, 2)
        assert first.matrix == second.matrix
        assert first.separators == second.separators

    def test_projected_guard_separates_graded_leaves(self):
        # within one model, leaves differing only in a graded atom are told
        # apart by a projection over a constant-guarded implication
        from fdl import Delta, Implies, Constant, ConceptName, Signature, enumerate_fragment
        from fdl.fixtures import fold_pair

        ia, _ = fold_pair()
        result = hm_matrix(ia, ia, NO_FEATURES, Sublanguage.DELTA_EXISTENTIAL, 2)
        assert result.matrix.at("v1", "v2") == 0
        assert result.separators[("v1", "v2")] is not None
        produced = enumerate_fragment(
            NO_FEATURES,
            Signature(["A"], ["r"], []),
            [F(0), F(7, 10), F(1)],
            Sublanguage.DELTA_EXISTENTIAL,
            2,
            max_concepts=10_000,
        )
        guard = Delta(Implies(ConceptName("A"), Constant(F(7, 10))))
        assert guard in produced


class TestInvarianceProbe:
    def test_involutive_abox_outside_fuzzy_fragment(self):
        ia, ib = edge_pair()
        features = FeatureSet(True, True, False, True, frozenset({1, 2}), frozenset({1, 2}))
        abox = [ConceptAssertion(parse_concept("exists r . inv A"), "a", ">=", F(1, 10))]
        report = invariance_probe(ia, ib, features, "fuzzy", abox)
        assert report.bisimilar is True
        assert not report.agreement
        assert not report.applicable
        assert not report.flag
        assert any("involutive" in note for note in report.notes)

    def test_isomorphic_models_always_agree(self):
        rng = random.Random(107)
        for _ in range(20):
            ia = random_model(rng, "x", rng.randint(1, 3), POOL3, individual_names=("a",))
            ib = rename_model(ia, {x: x + "_" for x in ia.domain})
            features = FeatureSet(universal=True, nominals=True)
            tbox = [Gci(parse_concept("A"), parse_concept("exists r . A"), ">=", F(1, 2))]
            abox = [ConceptAssertion(parse_concept("exists r . A"), "a", ">=", F(1, 2))]
            report = invariance_probe(ia, ib, features, "fuzzy", tbox + abox)
            assert report.bisimilar is True
            assert report.agreement and not report.flag

    def test_missing_individuals_noted(self):
        ia, ib = point_pair()
        report = invariance_probe(ia, ib, NO_FEATURES, "fuzzy", [])
        assert report.bisimilar is None
        assert not report.applicable
        assert any("undecided" in note for note in report.notes)

    def test_inclusion_needs_universal_or_connected(self):
        ia, ib = edge_pair()
        tbox = [Gci(parse_concept("B"), parse_concept("exists r . A"), ">=", F(1, 10))]
        fuzzy_no_u = invariance_probe(ia, ib, NO_FEATURES, "fuzzy", tbox)
        assert not fuzzy_no_u.applicable
        crisp_connected = invariance_probe(ia, ib, NO_FEATURES, "crisp", tbox)
        assert crisp_connected.applicable  # both models are connected
        assert not crisp_connected.flag
