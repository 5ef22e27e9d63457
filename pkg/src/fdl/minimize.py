"""Quotienting interpretations by strong bisimilarity.

The strong bisimilarity relation of a model (its greatest crisp
auto-bisimulation) is an equivalence; grouping its classes yields a
quotient model that validates the same graded axioms.  Supported for
feature sets within {I, O, U}: counting and self-loop features would need
a richer quotient carrier and are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .bisim import greatest_bisim
from .errors import FeatureError, ModelError
from .godel import ONE, ZERO
from .interp import Interpretation, reachability
from .syntax import FeatureSet


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty blocks covering a domain, in document order."""

    blocks: Tuple[Tuple[str, ...], ...]
    block_of: Dict[str, int]

    def is_identity(self) -> bool:
        return all(len(block) == 1 for block in self.blocks)

    def block_containing(self, element: str) -> Tuple[str, ...]:
        return self.blocks[self.block_of[element]]


def strong_partition(interp: Interpretation, features: FeatureSet) -> Partition:
    """Equivalence classes of the greatest crisp auto-bisimulation."""
    z = greatest_bisim(interp, interp, features, mode="crisp").relation
    n = len(interp.domain)
    matrix = z.matrix
    for i in range(n):
        if matrix[i][i] != ONE:
            raise AssertionError("internal: strong bisimilarity lost reflexivity")
        for j in range(n):
            if matrix[i][j] != matrix[j][i]:
                raise AssertionError("internal: strong bisimilarity lost symmetry")
            if matrix[i][j] == ONE:
                for k in range(n):
                    if matrix[j][k] == ONE and matrix[i][k] != ONE:
                        raise AssertionError(
                            "internal: strong bisimilarity lost transitivity"
                        )
    block_of: Dict[str, int] = {}
    blocks: List[List[str]] = []
    for i, x in enumerate(interp.domain):
        placed = False
        for b, members in enumerate(blocks):
            if matrix[i][interp.index(members[0])] == ONE:
                members.append(x)
                block_of[x] = b
                placed = True
                break
        if not placed:
            block_of[x] = len(blocks)
            blocks.append([x])
    return Partition(tuple(tuple(b) for b in blocks), block_of)


def _block_id(members: Tuple[str, ...]) -> str:
    return "{" + ",".join(members) + "}"


def quotient(interp: Interpretation, features: FeatureSet) -> Interpretation:
    """The quotient of ``interp`` by its strong bisimilarity relation.

    Concept degrees carry over from any representative; role degrees take
    the supremum over the target block.  Both are checked to be
    representative-independent, which the atomic and forth/back conditions
    guarantee; a failure there is an internal bug.
    """
    _require_quotient_features(features)
    partition = strong_partition(interp, features)
    ids = [_block_id(members) for members in partition.blocks]
    individuals = {
        name: ids[partition.block_of[target]]
        for name, target in interp.individuals.items()
    }
    concepts = {}
    for name, row in interp.concepts.items():
        values = {}
        for members, block_name in zip(partition.blocks, ids):
            first = row[interp.index(members[0])]
            for other in members[1:]:
                if row[interp.index(other)] != first:
                    raise AssertionError(
                        f"internal: concept {name!r} not constant on block {block_name}"
                    )
            values[block_name] = first
        concepts[name] = values
    roles = {}
    for name, rel in interp.roles.items():
        entries = {}
        for src_members, src_id in zip(partition.blocks, ids):
            for dst_members, dst_id in zip(partition.blocks, ids):
                sups = []
                for x in src_members:
                    i = interp.index(x)
                    sups.append(
                        max(rel.matrix[i][interp.index(y)] for y in dst_members)
                    )
                if any(v != sups[0] for v in sups[1:]):
                    raise AssertionError(
                        f"internal: role {name!r} supremum differs across block "
                        f"{src_id} representatives"
                    )
                if sups[0] != ZERO:
                    entries[(src_id, dst_id)] = sups[0]
        roles[name] = entries
    return Interpretation(ids, individuals, concepts, roles)


def _require_quotient_features(features: FeatureSet) -> None:
    offending = []
    if features.self_loops:
        offending.append("Self")
    if features.has_qualified():
        offending.append("Q")
    if features.has_unqualified():
        offending.append("N")
    if offending:
        raise FeatureError(
            "quotient construction supports feature sets within {I, O, U}; "
            "unsupported here: " + ", ".join(offending)
        )


def prune_unreachable(interp: Interpretation, features: FeatureSet) -> Interpretation:
    """Restrict ``interp`` to the elements reachable from named individuals.

    The result is connected; it is strongly bisimilar to the original via
    the identity on the survivors.
    """
    if not interp.individuals:
        raise ModelError("pruning needs at least one named individual")
    reachable, _connected = reachability(interp, features)
    if not reachable:
        raise ModelError("no element is reachable; the domain must stay nonempty")
    kept = [x for x in interp.domain if x in reachable]
    concepts = {
        name: {x: row[interp.index(x)] for x in kept if row[interp.index(x)] != ZERO}
        for name, row in interp.concepts.items()
    }
    roles = {}
    for name, rel in interp.roles.items():
        roles[name] = {
            (x, y): rel.at(x, y)
            for x in kept
            for y in kept
            if rel.at(x, y) != ZERO
        }
    return Interpretation(kept, dict(interp.individuals), concepts, roles)


@dataclass(frozen=True)
class MinimalityCertificate:
    is_reduced: bool
    witness_pair: Optional[Tuple[str, str]] = None


def minimality_certificate(
    interp: Interpretation, features: FeatureSet
) -> MinimalityCertificate:
    """Report whether strong bisimilarity is the identity on this model.

    An identity partition certifies that no quotient can shrink the model;
    otherwise the first pair of distinct strongly-bisimilar elements is
    returned.
    """
    partition = strong_partition(interp, features)
    for members in partition.blocks:
        if len(members) > 1:
            return MinimalityCertificate(False, (members[0], members[1]))
    return MinimalityCertificate(True)
