"""Exact reasoning tools for expressive fuzzy description logics under the
Goedel semantics: concept evaluation on finite fuzzy interpretations,
fuzzy and crisp bisimulation computation, bisimilarity decisions, graded
TBox/ABox checking, and model minimization by quotienting.

All degrees are exact rationals; no floating point is used anywhere.
"""

from .errors import (
    BudgetError,
    FdlError,
    FeatureError,
    InputError,
    ModelError,
    ParseError,
)
from .godel import (
    ONE,
    ZERO,
    baaz_delta,
    degree,
    format_degree,
    godel_and,
    godel_apply,
    godel_iff,
    godel_implies,
    godel_not,
    godel_or,
    involutive_not,
    nth_largest,
    parse_degree,
)
from .relations import FuzzyRelation, rel_sup
from .syntax import (
    And,
    AtLeast,
    AtLeastUnq,
    Compose,
    Concept,
    ConceptName,
    Constant,
    Delta,
    Exists,
    FeatureSet,
    Forall,
    Implies,
    InvNeg,
    Inverse,
    Less,
    LessUnq,
    Nominal,
    Not,
    Or,
    Role,
    RoleName,
    RoleUnion,
    SelfLoop,
    Star,
    Sublanguage,
    Test,
    Universal,
    classify_sublanguage,
    inverse_normal_form,
    is_basic_role,
    rewrite_definable,
    to_text,
    validate,
)
from .parsing import parse, parse_concept, parse_role
from .enumeration import Signature, enumerate_fragment
from .interp import (
    ConceptEvaluator,
    FuzzySet,
    Interpretation,
    degree_universe,
    dump_interpretation,
    eval_concept,
    eval_role,
    load_interpretation,
    reachability,
)
from .bisim import (
    BisimilarityResult,
    CandidateRelation,
    ConditionReport,
    Violation,
    bisimilar,
    brute_force_greatest,
    check_bisim,
    condition_bound,
    dump_relation,
    greatest_bisim,
    load_relation,
)
from .minimize import (
    MinimalityCertificate,
    Partition,
    minimality_certificate,
    prune_unreachable,
    quotient,
    strong_partition,
)
from .kb import (
    ConceptAssertion,
    DistinctIndividual,
    Gci,
    HmResult,
    KnowledgeBase,
    ProbeReport,
    RoleAssertion,
    SameIndividual,
    ValidationResult,
    dump_kb,
    hm_matrix,
    holds,
    invariance_probe,
    load_kb,
    validates,
)

__version__ = "0.1.0"
