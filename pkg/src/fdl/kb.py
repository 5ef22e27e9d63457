"""Graded assertions and concept inclusions, model checking, and the
logical-indistinguishability oracle.

This module checks boxes of graded axioms against concrete finite
interpretations; it does no entailment reasoning.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .bisim import bisimilar
from .enumeration import DEFAULT_BUDGET, Signature, iter_fragment
from .errors import InputError, ModelError
from .godel import ONE, ZERO, degree, format_degree, godel_iff, godel_implies
from .interp import ConceptEvaluator, Interpretation, degree_universe, reachability
from .parsing import parse_concept, parse_role
from .relations import FuzzyRelation
from .syntax import (
    Concept,
    FeatureSet,
    Role,
    Sublanguage,
    Test,
    classify_sublanguage,
    to_text,
)

_CMP = {">=": operator.ge, ">": operator.gt, "<=": operator.le, "<": operator.lt}
_GCI_REL = {">=": operator.ge, ">": operator.gt}


@dataclass(frozen=True)
class SameIndividual:
    a: str
    b: str

    def describe(self) -> str:
        return f"{self.a} = {self.b}"


@dataclass(frozen=True)
class DistinctIndividual:
    a: str
    b: str

    def describe(self) -> str:
        return f"{self.a} != {self.b}"


@dataclass(frozen=True)
class ConceptAssertion:
    concept: Concept
    individual: str
    cmp: str
    threshold: Fraction

    def __post_init__(self):
        if self.cmp not in _CMP:
            raise InputError(f"comparison must be one of {sorted(_CMP)}, got {self.cmp!r}")
        object.__setattr__(self, "threshold", degree(self.threshold))

    def describe(self) -> str:
        return f"({to_text(self.concept)})({self.individual}) {self.cmp} {format_degree(self.threshold)}"


@dataclass(frozen=True)
class RoleAssertion:
    role: Role
    a: str
    b: str
    cmp: str
    threshold: Fraction

    def __post_init__(self):
        if self.cmp not in _CMP:
            raise InputError(f"comparison must be one of {sorted(_CMP)}, got {self.cmp!r}")
        object.__setattr__(self, "threshold", degree(self.threshold))

    def describe(self) -> str:
        return (
            f"({to_text(self.role)})({self.a}, {self.b}) "
            f"{self.cmp} {format_degree(self.threshold)}"
        )


@dataclass(frozen=True)
class Gci:
    """Graded concept inclusion: the implication degree clears a threshold
    everywhere."""

    lhs: Concept
    rhs: Concept
    rel: str
    threshold: Fraction

    def __post_init__(self):
        if self.rel not in _GCI_REL:
            raise InputError(f"inclusion relation must be '>=' or '>', got {self.rel!r}")
        object.__setattr__(self, "threshold", degree(self.threshold))
        if self.threshold == ZERO:
            raise InputError("inclusion thresholds must lie in (0, 1]")

    def describe(self) -> str:
        return (
            f"({to_text(self.lhs)} included-in {to_text(self.rhs)}) "
            f"{self.rel} {format_degree(self.threshold)}"
        )


Assertion = Union[SameIndividual, DistinctIndividual, ConceptAssertion, RoleAssertion]
KbItem = Union[Assertion, Gci]


@dataclass(frozen=True)
class KnowledgeBase:
    tbox: Tuple[Gci, ...] = ()
    abox: Tuple[Assertion, ...] = ()

    def items(self) -> Tuple[KbItem, ...]:
        return self.tbox + self.abox


def holds(interp: Interpretation, item: KbItem) -> bool:
    """Does the interpretation validate the assertion or inclusion?"""
    if isinstance(item, SameIndividual):
        return interp.individual(item.a) == interp.individual(item.b)
    if isinstance(item, DistinctIndividual):
        return interp.individual(item.a) != interp.individual(item.b)
    evaluator = ConceptEvaluator(interp)
    if isinstance(item, ConceptAssertion):
        value = evaluator.concept_values(item.concept)[
            interp.index(interp.individual(item.individual))
        ]
        return _CMP[item.cmp](value, item.threshold)
    if isinstance(item, RoleAssertion):
        rel = evaluator.role_values(item.role)
        value = rel.at(interp.individual(item.a), interp.individual(item.b))
        return _CMP[item.cmp](value, item.threshold)
    if isinstance(item, Gci):
        lhs = evaluator.concept_values(item.lhs)
        rhs = evaluator.concept_values(item.rhs)
        check = _GCI_REL[item.rel]
        return all(
            check(godel_implies(p, q), item.threshold) for p, q in zip(lhs, rhs)
        )
    raise InputError(f"not an assertion or inclusion: {item!r}")


@dataclass(frozen=True)
class ValidationResult:
    valid: bool
    failed_item: Optional[KbItem] = None
    witness_element: Optional[str] = None


def validates(interp: Interpretation, items: Sequence[KbItem]) -> ValidationResult:
    """Check every item; report the first failure with a witness element
    for inclusions."""
    for item in items:
        if isinstance(item, Gci):
            evaluator = ConceptEvaluator(interp)
            lhs = evaluator.concept_values(item.lhs)
            rhs = evaluator.concept_values(item.rhs)
            check = _GCI_REL[item.rel]
            for x, p, q in zip(interp.domain, lhs, rhs):
                if not check(godel_implies(p, q), item.threshold):
                    return ValidationResult(False, item, x)
        elif not holds(interp, item):
            return ValidationResult(False, item)
    return ValidationResult(True)


# ---------------------------------------------------------------------------
# documents


def load_kb(document, features: Optional[FeatureSet] = None) -> KnowledgeBase:
    """Read ``{"tbox": [{"lhs": ..., "rhs": ..., "rel": ">=", "p": ...}],
    "abox": [{"kind": "concept", ...}, {"kind": "same", ...}, ...]}``.

    Concept and role fields hold grammar text parsed under ``features``
    (permissive by default).
    """
    if not isinstance(document, dict):
        raise InputError("a TBox/ABox document must be a JSON object")
    unknown = set(document) - {"tbox", "abox"}
    if unknown:
        raise InputError(f"unknown TBox/ABox document keys: {sorted(unknown)}")
    tbox = []
    for entry in document.get("tbox", ()):
        tbox.append(
            Gci(
                parse_concept(str(entry["lhs"]), features),
                parse_concept(str(entry["rhs"]), features),
                entry.get("rel", ">="),
                str(entry["p"]),
            )
        )
    abox: List[Assertion] = []
    for entry in document.get("abox", ()):
        kind = entry.get("kind")
        if kind == "same":
            abox.append(SameIndividual(entry["a"], entry["b"]))
        elif kind == "distinct":
            abox.append(DistinctIndividual(entry["a"], entry["b"]))
        elif kind == "concept":
            abox.append(
                ConceptAssertion(
                    parse_concept(str(entry["c"]), features),
                    entry["a"],
                    entry.get("cmp", ">="),
                    str(entry["p"]),
                )
            )
        elif kind == "role":
            abox.append(
                RoleAssertion(
                    parse_role(str(entry["r"]), features),
                    entry["a"],
                    entry["b"],
                    entry.get("cmp", ">="),
                    str(entry["p"]),
                )
            )
        else:
            raise InputError(f"unknown assertion kind {kind!r}")
    return KnowledgeBase(tuple(tbox), tuple(abox))


def dump_kb(kb: KnowledgeBase) -> dict:
    tbox = [
        {
            "lhs": to_text(g.lhs),
            "rhs": to_text(g.rhs),
            "rel": g.rel,
            "p": format_degree(g.threshold),
        }
        for g in kb.tbox
    ]
    abox = []
    for a in kb.abox:
        if isinstance(a, SameIndividual):
            abox.append({"kind": "same", "a": a.a, "b": a.b})
        elif isinstance(a, DistinctIndividual):
            abox.append({"kind": "distinct", "a": a.a, "b": a.b})
        elif isinstance(a, ConceptAssertion):
            abox.append(
                {
                    "kind": "concept",
                    "c": to_text(a.concept),
                    "a": a.individual,
                    "cmp": a.cmp,
                    "p": format_degree(a.threshold),
                }
            )
        else:
            abox.append(
                {
                    "kind": "role",
                    "r": to_text(a.role),
                    "a": a.a,
                    "b": a.b,
                    "cmp": a.cmp,
                    "p": format_degree(a.threshold),
                }
            )
    return {"tbox": tbox, "abox": abox}


# ---------------------------------------------------------------------------
# logical indistinguishability


@dataclass(frozen=True)
class HmResult:
    matrix: FuzzyRelation
    separators: Dict[Tuple[str, str], Optional[Concept]]
    concepts_used: int


def hm_matrix(
    ia: Interpretation,
    ib: Interpretation,
    features: FeatureSet,
    fragment: Sublanguage,
    depth: int,
    constants: Optional[Sequence] = None,
    max_concepts: int = DEFAULT_BUDGET,
    lower_bound: Optional[FuzzyRelation] = None,
) -> HmResult:
    """Logical indistinguishability over a fragment, up to a height bound.

    CORE_EXISTENTIAL: entry (x, x') is the minimum over enumerated concepts
    of the Goedel equivalence of their values -- the fuzzy matrix.
    DELTA_EXISTENTIAL: entry is 1 when every enumerated concept agrees
    exactly, else 0 -- the crisp matrix.

    The matrix is antitone in ``depth`` and, on finite models, stabilizes
    to the greatest (fuzzy resp. crisp) bisimulation.  ``separators``
    records, per pair, the first concept attaining the final value.  When a
    ``lower_bound`` (e.g. the fixpoint's answer) is supplied, a pair stops
    updating once it reaches the bound, which is sound because the matrix
    never descends below any actual bisimulation.
    """
    if constants is None:
        constants = degree_universe(ia, ib)
    signature = Signature.from_interpretations(ia, ib)
    stream = iter_fragment(
        features, signature, constants, fragment, depth, max_concepts
    )
    crisp = fragment is Sublanguage.DELTA_EXISTENTIAL
    eva, evb = ConceptEvaluator(ia), ConceptEvaluator(ib)
    na, nb = len(ia.domain), len(ib.domain)
    matrix = [[ONE] * nb for _ in range(na)]
    separators: Dict[Tuple[str, str], Optional[Concept]] = {
        (x, y): None for x in ia.domain for y in ib.domain
    }
    live = {
        (i, j)
        for i in range(na)
        for j in range(nb)
        if lower_bound is None or lower_bound.matrix[i][j] < ONE
    }
    used = 0
    for c in stream:
        if not live:
            break
        used += 1
        va = eva.concept_values(c)
        vb = evb.concept_values(c)
        done = []
        for (i, j) in live:
            value = godel_iff(va[i], vb[j])
            if crisp and value != ONE:
                value = ZERO
            if value < matrix[i][j]:
                matrix[i][j] = value
                separators[(ia.domain[i], ib.domain[j])] = c
            if matrix[i][j] == ZERO or (
                lower_bound is not None and matrix[i][j] <= lower_bound.matrix[i][j]
            ):
                done.append((i, j))
        live.difference_update(done)
    return HmResult(FuzzyRelation(ia.domain, ib.domain, matrix), separators, used)


# ---------------------------------------------------------------------------
# invariance probing


@dataclass(frozen=True)
class ItemOutcome:
    item: KbItem
    in_language: bool
    holds_left: bool
    holds_right: bool


@dataclass(frozen=True)
class ProbeReport:
    """Diagnostic cross-check of axiom preservation under bisimilarity.

    ``flag`` fires only when the two models are (strongly) bisimilar, every
    side condition of the preservation statement applies, and validation
    still disagrees -- which would indicate a bug, never a user error.
    The probe only reports; it fixes nothing.
    """

    mode: str
    bisimilar: Optional[bool]
    notes: Tuple[str, ...]
    applicable: bool
    agreement: bool
    flag: bool
    outcomes: Tuple[ItemOutcome, ...]


def _in_language(item: KbItem, mode: str, features: FeatureSet) -> bool:
    """Fuzzy-mode preservation speaks about involutive-negation-free
    concepts only; crisp mode covers the extended language."""
    if mode == "crisp":
        return True
    concepts: List[Concept] = []
    if isinstance(item, Gci):
        concepts = [item.lhs, item.rhs]
    elif isinstance(item, ConceptAssertion):
        concepts = [item.concept]
    elif isinstance(item, RoleAssertion):
        concepts = _test_concepts(item.role)
    for c in concepts:
        if Sublanguage.CORE not in classify_sublanguage(c, features):
            return False
    return True


def _test_concepts(role: Role) -> List[Concept]:
    if isinstance(role, Test):
        return [role.concept]
    found: List[Concept] = []
    for attr in ("left", "right", "role"):
        child = getattr(role, attr, None)
        if isinstance(child, Role):
            found.extend(_test_concepts(child))
    return found


def invariance_probe(
    ia: Interpretation,
    ib: Interpretation,
    features: FeatureSet,
    mode: str,
    kb: Union[KnowledgeBase, Sequence[KbItem]],
) -> ProbeReport:
    items = tuple(kb.items() if isinstance(kb, KnowledgeBase) else kb)
    notes: List[str] = []

    try:
        result = bisimilar(ia, ib, features, mode)
        are_bisimilar: Optional[bool] = result.holds
    except ModelError as exc:
        are_bisimilar = None
        notes.append(f"bisimilarity undecided: {exc}")

    outcomes = []
    for item in items:
        outcomes.append(
            ItemOutcome(
                item=item,
                in_language=_in_language(item, mode, features),
                holds_left=holds(ia, item),
                holds_right=holds(ib, item),
            )
        )

    applicable = are_bisimilar is not None
    if any(not o.in_language for o in outcomes):
        notes.append(
            "some items use involutive negation, outside the scope of "
            "fuzzy-mode preservation"
        )
        applicable = False

    gcis = [o for o in outcomes if isinstance(o.item, Gci)]
    if gcis:
        if features.universal:
            notes.append("inclusion preservation applies: universal role enabled")
        elif mode == "crisp":
            connected = reachability(ia, features)[1] and reachability(ib, features)[1]
            if connected:
                notes.append(
                    "inclusion preservation applies: both models connected"
                )
            else:
                notes.append(
                    "inclusion preservation needs the universal role or "
                    "connected models; neither holds"
                )
                applicable = False
        else:
            notes.append(
                "inclusion preservation needs the universal role; not enabled"
            )
            applicable = False

    assertions = [o for o in outcomes if not isinstance(o.item, Gci)]
    if assertions:
        only_concept_shapes = all(
            isinstance(o.item, ConceptAssertion) for o in assertions
        )
        if features.nominals:
            notes.append("assertion preservation applies: nominals enabled")
        elif only_concept_shapes:
            notes.append(
                "assertion preservation applies: concept-assertion shapes only"
            )
        else:
            notes.append(
                "assertion preservation needs nominals or concept-assertion "
                "shapes only; neither holds"
            )
            applicable = False

    agreement = all(o.holds_left == o.holds_right for o in outcomes)
    flag = bool(are_bisimilar) and applicable and not agreement
    if flag:
        notes.append(
            "THEOREM-VIOLATION: bisimilar models disagree on an applicable box; "
            "this indicates an implementation bug"
        )
    return ProbeReport(
        mode=mode,
        bisimilar=are_bisimilar,
        notes=tuple(notes),
        applicable=applicable,
        agreement=agreement,
        flag=flag,
        outcomes=tuple(outcomes),
    )
