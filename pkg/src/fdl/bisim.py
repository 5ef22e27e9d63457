"""Checking and computing fuzzy and crisp bisimulations.

A candidate relation Z between the domains of two interpretations is a
bisimulation when it satisfies, for the enabled features, the conditions

* FB2   atomic agreement: Z(x,x') is below the Goedel equivalence of every
        concept-name degree at x and x'
* FB3 / FB4   forth and back over every basic role
* FB5   named individuals match (feature O)
* FB6(n) / FB7(n)   counting forth and back over n-subsets of positive
        successors (feature Qn)
* FB6n(n) / FB7n(n)   the unqualified counting variants (feature Nn)
* FB8 / FB9   forth and back for the universal role (feature U)
* FB10  self-loop agreement (feature Self)

A crisp bisimulation is the {0,1}-valued special case of the same
conditions.

The greatest bisimulation is computed by a residuated greatest-fixpoint
iteration: every condition has the shape ``Z(x,x') (x) lhs <= rhs`` with the
right side monotone in Z, so ``Z(x,x') <= lhs -> rhs`` by residuation and
the per-pair ceiling :func:`condition_bound` is exact.  All ceilings are
built from entries of Z and the two models via min, max, n-th-largest and
the Goedel residuum, which only ever select among their inputs or return 1;
hence every intermediate value stays inside the finite degree universe of
the two models and the descending iteration terminates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, List, Optional, Sequence, Tuple

from .errors import BudgetError, InputError, ModelError
from .godel import ONE, ZERO, format_degree, godel_iff, godel_implies, nth_largest, parse_degree
from .interp import Interpretation, degree_universe
from .relations import FuzzyRelation
from .syntax import FeatureSet

MODES = ("fuzzy", "crisp")


@dataclass(frozen=True)
class CandidateRelation:
    """A degree-valued relation between two domains, tagged fuzzy or crisp."""

    relation: FuzzyRelation
    mode: str = "fuzzy"

    def __post_init__(self):
        if self.mode not in MODES:
            raise InputError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == "crisp" and not self.relation.is_crisp():
            raise InputError("a crisp candidate relation must have entries in {0, 1}")

    def at(self, x: str, y: str) -> Fraction:
        return self.relation.at(x, y)


@dataclass(frozen=True)
class Violation:
    condition: str
    x: str
    x_prime: str
    role: Optional[str] = None
    symbol: Optional[str] = None
    witness: Optional[Tuple[str, ...]] = None
    lhs: Fraction = ZERO
    rhs: Fraction = ZERO

    def describe(self) -> str:
        parts = [f"{self.condition} fails at ({self.x}, {self.x_prime})"]
        if self.role is not None:
            parts.append(f"role {self.role}")
        if self.symbol is not None:
            parts.append(f"name {self.symbol}")
        if self.witness:
            parts.append("via " + ", ".join(self.witness))
        parts.append(f"{format_degree(self.lhs)} > {format_degree(self.rhs)}")
        return "; ".join(parts)


@dataclass(frozen=True)
class ConditionReport:
    satisfied: bool
    violations: Tuple[Violation, ...]


@dataclass(frozen=True)
class BisimilarityResult:
    holds: bool
    witness: CandidateRelation
    failing_individual: Optional[str] = None


# ---------------------------------------------------------------------------
# relation documents


def load_relation(document, rows: Sequence[str], cols: Sequence[str]) -> CandidateRelation:
    """Read ``{"mode": "fuzzy", "entries": [["u", "u'", "0.8"], ...]}``."""
    if not isinstance(document, dict):
        raise InputError("a relation document must be a JSON object")
    mode = document.get("mode", "fuzzy")
    entries = {}
    for item in document.get("entries", ()):
        if len(item) != 3:
            raise InputError(f"relation entry must be [row, col, degree]: {item!r}")
        x, y, d = item
        entries[(x, y)] = parse_degree(str(d))
    return CandidateRelation(FuzzyRelation.from_entries(rows, cols, entries), mode)


def dump_relation(candidate: CandidateRelation) -> dict:
    return {
        "mode": candidate.mode,
        "entries": [
            [x, y, format_degree(v)]
            for x, y, v in candidate.relation.entries()
            if v != ZERO
        ],
    }


# ---------------------------------------------------------------------------
# shared tables


class _Context:
    """Positional tables for one (model, model, features) triple."""

    def __init__(self, ia: Interpretation, ib: Interpretation, features: FeatureSet):
        self.ia, self.ib, self.features = ia, ib, features
        self.na, self.nb = len(ia.domain), len(ib.domain)
        self.concept_names = sorted(set(ia.concepts) | set(ib.concepts))
        self.conc = [
            (name, ia.concept_row(name), ib.concept_row(name))
            for name in self.concept_names
        ]
        role_names = sorted(set(ia.roles) | set(ib.roles))
        self.role_names = role_names
        self.basic: List[Tuple[str, List[Tuple[Fraction, ...]], List[Tuple[Fraction, ...]]]] = []
        for name in role_names:
            ra, rb = ia.role_relation(name).matrix, ib.role_relation(name).matrix
            self.basic.append((name, ra, rb))
            if features.inverse:
                self.basic.append(
                    (
                        name + "-",
                        tuple(zip(*ra)),
                        tuple(zip(*rb)),
                    )
                )
        self.individual_pairs: List[Tuple[str, int, int]] = []
        if features.nominals:
            for name in sorted(set(ia.individuals) | set(ib.individuals)):
                if name not in ia.individuals or name not in ib.individuals:
                    raise ModelError(
                        f"individual {name!r} is not interpreted in both models"
                    )
                self.individual_pairs.append(
                    (name, ia.index(ia.individuals[name]), ib.index(ib.individuals[name]))
                )
        self.self_loops: List[Tuple[str, Tuple[Fraction, ...], Tuple[Fraction, ...]]] = []
        if features.self_loops:
            for name in role_names:
                ra = ia.role_relation(name).matrix
                rb = ib.role_relation(name).matrix
                self.self_loops.append(
                    (
                        name,
                        tuple(ra[i][i] for i in range(self.na)),
                        tuple(rb[j][j] for j in range(self.nb)),
                    )
                )
        cap = max(self.na, self.nb)
        self.q_bounds = self._effective(features.q_bounds, cap)
        self.n_bounds = self._effective(features.n_bounds, cap)

    @staticmethod
    def _effective(bounds, cap: int) -> Tuple[int, ...]:
        # Unrestricted bounds: any n beyond the larger domain is vacuous.
        if bounds is None:
            return tuple(range(1, cap + 1))
        return tuple(sorted(bounds))

    def static_bound(self, i: int, j: int) -> Fraction:
        """Ceiling from the conditions that do not mention other Z entries."""
        bound = ONE
        for _name, row_a, row_b in self.conc:
            v = godel_iff(row_a[i], row_b[j])
            if v < bound:
                bound = v
                if bound == ZERO:
                    return ZERO
        for _name, xa, xb in self.individual_pairs:
            if (i == xa) != (j == xb):
                return ZERO
        for _name, diag_a, diag_b in self.self_loops:
            v = godel_iff(diag_a[i], diag_b[j])
            if v < bound:
                bound = v
                if bound == ZERO:
                    return ZERO
        return bound


def _violations(
    ctx: _Context, z: Sequence[Sequence[Fraction]], stop_early: bool
) -> Iterator[Violation]:
    """Yield every broken condition; with ``stop_early`` stop at the first."""
    ia, ib = ctx.ia, ctx.ib
    na, nb = ctx.na, ctx.nb
    for i in range(na):
        zi = z[i]
        for j in range(nb):
            val = zi[j]
            if val == ZERO:
                continue
            x, x_prime = ia.domain[i], ib.domain[j]
            for name, row_a, row_b in ctx.conc:
                limit = godel_iff(row_a[i], row_b[j])
                if val > limit:
                    yield Violation("FB2", x, x_prime, symbol=name, lhs=val, rhs=limit)
                    if stop_early:
                        return
            for name, xa, xb in ctx.individual_pairs:
                if (i == xa) != (j == xb):
                    yield Violation("FB5", x, x_prime, symbol=name, lhs=val, rhs=ZERO)
                    if stop_early:
                        return
            for name, diag_a, diag_b in ctx.self_loops:
                limit = godel_iff(diag_a[i], diag_b[j])
                if val > limit:
                    yield Violation(
                        "FB10", x, x_prime, symbol=name, lhs=val, rhs=limit
                    )
                    if stop_early:
                        return
            for label, mat_a, mat_b in ctx.basic:
                row_a, row_b = mat_a[i], mat_b[j]
                for y in range(na):
                    d = row_a[y]
                    if d == ZERO:
                        continue
                    need = val if val <= d else d
                    zy = z[y]
                    if all(min(zy[y2], row_b[y2]) < need for y2 in range(nb)):
                        best = max(
                            (min(zy[y2], row_b[y2]) for y2 in range(nb)), default=ZERO
                        )
                        yield Violation(
                            "FB3", x, x_prime, role=label,
                            witness=(ia.domain[y],), lhs=need, rhs=best,
                        )
                        if stop_early:
                            return
                for y2 in range(nb):
                    d = row_b[y2]
                    if d == ZERO:
                        continue
                    need = val if val <= d else d
                    if all(min(z[y][y2], row_a[y]) < need for y in range(na)):
                        best = max(
                            (min(z[y][y2], row_a[y]) for y in range(na)), default=ZERO
                        )
                        yield Violation(
                            "FB4", x, x_prime, role=label,
                            witness=(ib.domain[y2],), lhs=need, rhs=best,
                        )
                        if stop_early:
                            return
            if ctx.features.universal:
                for y in range(na):
                    best = max(z[y])
                    if val > best:
                        yield Violation(
                            "FB8", x, x_prime, witness=(ia.domain[y],), lhs=val, rhs=best
                        )
                        if stop_early:
                            return
                for y2 in range(nb):
                    best = max(z[y][y2] for y in range(na))
                    if val > best:
                        yield Violation(
                            "FB9", x, x_prime, witness=(ib.domain[y2],), lhs=val, rhs=best
                        )
                        if stop_early:
                            return
            for n in ctx.q_bounds:
                for label, mat_a, mat_b in ctx.basic:
                    row_a, row_b = mat_a[i], mat_b[j]
                    succ_a = [y for y in range(na) if row_a[y] > ZERO]
                    if len(succ_a) >= n:
                        for subset in combinations(succ_a, n):
                            tau = min(val, min(row_a[y] for y in subset))
                            scores = [
                                min(row_b[y2], max(z[y][y2] for y in subset))
                                for y2 in range(nb)
                            ]
                            got = nth_largest(scores, n)
                            if tau > got:
                                yield Violation(
                                    f"FB6({n})", x, x_prime, role=label,
                                    witness=tuple(ia.domain[y] for y in subset),
                                    lhs=tau, rhs=got,
                                )
                                if stop_early:
                                    return
                    succ_b = [y2 for y2 in range(nb) if row_b[y2] > ZERO]
                    if len(succ_b) >= n:
                        for subset in combinations(succ_b, n):
                            tau = min(val, min(row_b[y2] for y2 in subset))
                            scores = [
                                min(row_a[y], max(z[y][y2] for y2 in subset))
                                for y in range(na)
                            ]
                            got = nth_largest(scores, n)
                            if tau > got:
                                yield Violation(
                                    f"FB7({n})", x, x_prime, role=label,
                                    witness=tuple(ib.domain[y2] for y2 in subset),
                                    lhs=tau, rhs=got,
                                )
                                if stop_early:
                                    return
            for n in ctx.n_bounds:
                for label, mat_a, mat_b in ctx.basic:
                    row_a, row_b = mat_a[i], mat_b[j]
                    pos_a = sorted((v for v in row_a if v > ZERO), reverse=True)
                    if len(pos_a) >= n:
                        tau = min(val, pos_a[n - 1])
                        got = nth_largest(row_b, n)
                        if tau > got:
                            yield Violation(
                                f"FB6n({n})", x, x_prime, role=label,
                                lhs=tau, rhs=got,
                            )
                            if stop_early:
                                return
                    pos_b = sorted((v for v in row_b if v > ZERO), reverse=True)
                    if len(pos_b) >= n:
                        tau = min(val, pos_b[n - 1])
                        got = nth_largest(row_a, n)
                        if tau > got:
                            yield Violation(
                                f"FB7n({n})", x, x_prime, role=label,
                                lhs=tau, rhs=got,
                            )
                            if stop_early:
                                return


def check_bisim(
    ia: Interpretation,
    ib: Interpretation,
    z,
    features: FeatureSet,
) -> ConditionReport:
    """Exhaustively check the bisimulation conditions for candidate ``z``.

    ``z`` may be a :class:`FuzzyRelation` or a :class:`CandidateRelation`;
    crisp candidates run the identical checks.
    """
    rel = z.relation if isinstance(z, CandidateRelation) else z
    if rel.rows != ia.domain or rel.cols != ib.domain:
        raise InputError("candidate relation is not indexed by the two domains")
    ctx = _Context(ia, ib, features)
    found = tuple(_violations(ctx, rel.matrix, stop_early=False))
    return ConditionReport(satisfied=not found, violations=found)


def _satisfies(ctx: _Context, z) -> bool:
    return next(_violations(ctx, z, stop_early=True), None) is None


# ---------------------------------------------------------------------------
# the refinement step


def condition_bound(
    ia: Interpretation,
    ib: Interpretation,
    z,
    features: FeatureSet,
    x: str,
    x_prime: str,
) -> Fraction:
    """Largest value v such that setting Z(x,x') = v, all other entries
    fixed, satisfies every condition locally."""
    rel = z.relation if isinstance(z, CandidateRelation) else z
    ctx = _Context(ia, ib, features)
    return _bound(ctx, rel.matrix, ia.index(x), ib.index(x_prime))


def _bound(ctx: _Context, z, i: int, j: int) -> Fraction:
    bound = ctx.static_bound(i, j)
    if bound == ZERO:
        return ZERO
    na, nb = ctx.na, ctx.nb
    for _label, mat_a, mat_b in ctx.basic:
        row_a, row_b = mat_a[i], mat_b[j]
        for y in range(na):
            d = row_a[y]
            if d == ZERO:
                continue
            zy = z[y]
            best = ZERO
            for y2 in range(nb):
                v = zy[y2] if zy[y2] <= row_b[y2] else row_b[y2]
                if v > best:
                    best = v
                    if best >= d:
                        break
            limit = godel_implies(d, best)
            if limit < bound:
                bound = limit
                if bound == ZERO:
                    return ZERO
        for y2 in range(nb):
            d = row_b[y2]
            if d == ZERO:
                continue
            best = ZERO
            for y in range(na):
                v = z[y][y2] if z[y][y2] <= row_a[y] else row_a[y]
                if v > best:
                    best = v
                    if best >= d:
                        break
            limit = godel_implies(d, best)
            if limit < bound:
                bound = limit
                if bound == ZERO:
                    return ZERO
    if ctx.features.universal:
        for y in range(na):
            limit = max(z[y])
            if limit < bound:
                bound = limit
                if bound == ZERO:
                    return ZERO
        for y2 in range(nb):
            limit = max(z[y][y2] for y in range(na))
            if limit < bound:
                bound = limit
                if bound == ZERO:
                    return ZERO
    for n in ctx.q_bounds:
        for _label, mat_a, mat_b in ctx.basic:
            row_a, row_b = mat_a[i], mat_b[j]
            succ_a = [y for y in range(na) if row_a[y] > ZERO]
            if len(succ_a) >= n:
                for subset in combinations(succ_a, n):
                    strength = min(row_a[y] for y in subset)
                    scores = [
                        min(row_b[y2], max(z[y][y2] for y in subset))
                        for y2 in range(nb)
                    ]
                    limit = godel_implies(strength, nth_largest(scores, n))
                    if limit < bound:
                        bound = limit
                        if bound == ZERO:
                            return ZERO
            succ_b = [y2 for y2 in range(nb) if row_b[y2] > ZERO]
            if len(succ_b) >= n:
                for subset in combinations(succ_b, n):
                    strength = min(row_b[y2] for y2 in subset)
                    scores = [
                        min(row_a[y], max(z[y][y2] for y2 in subset))
                        for y in range(na)
                    ]
                    limit = godel_implies(strength, nth_largest(scores, n))
                    if limit < bound:
                        bound = limit
                        if bound == ZERO:
                            return ZERO
    for n in ctx.n_bounds:
        for _label, mat_a, mat_b in ctx.basic:
            row_a, row_b = mat_a[i], mat_b[j]
            pos_a = sorted((v for v in row_a if v > ZERO), reverse=True)
            if len(pos_a) >= n:
                # only the n strongest successors bind
                limit = godel_implies(pos_a[n - 1], nth_largest(row_b, n))
                if limit < bound:
                    bound = limit
                    if bound == ZERO:
                        return ZERO
            pos_b = sorted((v for v in row_b if v > ZERO), reverse=True)
            if len(pos_b) >= n:
                limit = godel_implies(pos_b[n - 1], nth_largest(row_a, n))
                if limit < bound:
                    bound = limit
                    if bound == ZERO:
                        return ZERO
    return bound


# ---------------------------------------------------------------------------
# greatest bisimulation


def greatest_bisim(
    ia: Interpretation,
    ib: Interpretation,
    features: FeatureSet,
    mode: str = "fuzzy",
    _pair_order: Optional[Sequence[Tuple[int, int]]] = None,
) -> CandidateRelation:
    """The pointwise-greatest (fuzzy or crisp) bisimulation.

    Starts from the static per-pair ceilings and repeatedly lowers each
    entry to its :func:`condition_bound` until stable; Knaster-Tarski on
    the finite lattice of degree-universe matrices makes this the greatest
    post-fixpoint, i.e. the greatest bisimulation.  ``_pair_order`` only
    changes the sweep order, never the result.
    """
    if mode not in MODES:
        raise InputError(f"mode must be one of {MODES}, got {mode!r}")
    ctx = _Context(ia, ib, features)
    na, nb = ctx.na, ctx.nb
    z: List[List[Fraction]] = []
    for i in range(na):
        row = []
        for j in range(nb):
            v = ctx.static_bound(i, j)
            if mode == "crisp" and v != ONE:
                v = ZERO
            row.append(v)
        z.append(row)
    order = list(_pair_order) if _pair_order is not None else [
        (i, j) for i in range(na) for j in range(nb)
    ]
    # every ceiling is a selection over the degree universe, so each entry
    # can strictly drop at most |universe| times
    sweep_limit = na * nb * len(degree_universe(ia, ib)) + 2
    sweeps = 0
    changed = True
    while changed:
        sweeps += 1
        if sweeps > sweep_limit:
            raise AssertionError(
                "internal: fixpoint did not converge within the degree-universe bound"
            )
        changed = False
        for i, j in order:
            current = z[i][j]
            if current == ZERO:
                continue
            limit = _bound(ctx, z, i, j)
            if mode == "crisp":
                new = current if limit == ONE else ZERO
            else:
                new = current if current <= limit else limit
            if new != current:
                z[i][j] = new
                changed = True
    return CandidateRelation(FuzzyRelation(ia.domain, ib.domain, z), mode)


def bisimilar(
    ia: Interpretation,
    ib: Interpretation,
    features: FeatureSet,
    mode: str = "fuzzy",
) -> BisimilarityResult:
    """Decide whether every named individual pair gets degree 1 in the
    greatest bisimulation (fuzzy: bisimilarity; crisp: strong bisimilarity).
    """
    names = list(ia.individuals) + [
        n for n in ib.individuals if n not in ia.individuals
    ]
    if not names:
        raise ModelError(
            "bisimilarity of interpretations is undefined without named individuals"
        )
    for name in names:
        if name not in ia.individuals or name not in ib.individuals:
            raise ModelError(f"individual {name!r} is not interpreted in both models")
    greatest = greatest_bisim(ia, ib, features, mode)
    for name in names:
        if greatest.at(ia.individuals[name], ib.individuals[name]) != ONE:
            return BisimilarityResult(False, greatest, failing_individual=name)
    return BisimilarityResult(True, greatest)


# ---------------------------------------------------------------------------
# brute-force oracle


def brute_force_greatest(
    ia: Interpretation,
    ib: Interpretation,
    features: FeatureSet,
    mode: str = "fuzzy",
    max_candidates: int = 2_000_000,
) -> CandidateRelation:
    """Greatest bisimulation by enumeration, independent of the fixpoint.

    Enumerates every assignment of degree-universe values to pairs (pruned
    only by the pointwise static ceilings, which every bisimulation must
    respect), keeps the assignments that satisfy all conditions, and
    returns their pointwise supremum.  The supremum of finitely many
    bisimulations is again one, and the entries of the true greatest lie in
    the degree universe, so this is exact.  Guarded by ``max_candidates``.
    """
    if mode not in MODES:
        raise InputError(f"mode must be one of {MODES}, got {mode!r}")
    ctx = _Context(ia, ib, features)
    na, nb = ctx.na, ctx.nb
    if na * nb > 16:
        raise BudgetError(
            f"brute-force search over {na * nb} pairs is out of budget (max 16)"
        )
    universe = degree_universe(ia, ib)
    if mode == "crisp":
        universe = (ZERO, ONE)
    pairs = [(i, j) for i in range(na) for j in range(nb)]
    choices: List[List[Fraction]] = []
    total = 1
    for i, j in pairs:
        ceiling = ctx.static_bound(i, j)
        if mode == "crisp" and ceiling != ONE:
            ceiling = ZERO
        allowed = [v for v in universe if v <= ceiling]
        choices.append(allowed)
        total *= len(allowed)
        if total > max_candidates:
            raise BudgetError(
                f"brute-force search needs more than {max_candidates} candidates"
            )
    best = [[ZERO] * nb for _ in range(na)]
    z = [[ZERO] * nb for _ in range(na)]

    def descend(k: int) -> None:
        if k == len(pairs):
            if _satisfies(ctx, z):
                for (i, j) in pairs:
                    if z[i][j] > best[i][j]:
                        best[i][j] = z[i][j]
            return
        i, j = pairs[k]
        for v in choices[k]:
            z[i][j] = v
            descend(k + 1)
        z[i][j] = ZERO

    descend(0)
    return CandidateRelation(FuzzyRelation(ia.domain, ib.domain, best), mode)
