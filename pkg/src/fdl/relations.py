"""Dense fuzzy relations between two ordered element sequences.

A relation stores one degree for every (row, col) pair; absence is not a
state.  Domains in this package are desk-scale, so dense storage is both
simpler and faster than sparse maps.  Instances are immutable.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Tuple

from .errors import InputError
from .godel import ONE, ZERO, degree, godel_and


class FuzzyRelation:
    """A total map (row element, col element) -> degree."""

    __slots__ = ("rows", "cols", "matrix", "_ri", "_ci")

    def __init__(self, rows: Sequence[str], cols: Sequence[str], matrix):
        self.rows: Tuple[str, ...] = tuple(rows)
        self.cols: Tuple[str, ...] = tuple(cols)
        self.matrix: Tuple[Tuple[Fraction, ...], ...] = tuple(
            tuple(row) for row in matrix
        )
        if len(self.matrix) != len(self.rows) or any(
            len(r) != len(self.cols) for r in self.matrix
        ):
            raise InputError("matrix shape does not match row/col sequences")
        if len(set(self.rows)) != len(self.rows) or len(set(self.cols)) != len(self.cols):
            raise InputError("duplicate element ids in relation index")
        self._ri = {x: i for i, x in enumerate(self.rows)}
        self._ci = {y: j for j, y in enumerate(self.cols)}

    @classmethod
    def from_entries(
        cls,
        rows: Sequence[str],
        cols: Sequence[str],
        entries: Mapping[Tuple[str, str], object],
    ) -> "FuzzyRelation":
        """Build from a sparse mapping; unlisted pairs get degree 0."""
        ri = {x: i for i, x in enumerate(rows)}
        ci = {y: j for j, y in enumerate(cols)}
        matrix = [[ZERO] * len(cols) for _ in rows]
        for (x, y), val in entries.items():
            if x not in ri:
                raise InputError(f"unknown row element {x!r}")
            if y not in ci:
                raise InputError(f"unknown column element {y!r}")
            matrix[ri[x]][ci[y]] = degree(val)
        return cls(rows, cols, matrix)

    @classmethod
    def constant(cls, rows: Sequence[str], cols: Sequence[str], value) -> "FuzzyRelation":
        val = degree(value)
        return cls(rows, cols, [[val] * len(cols) for _ in rows])

    @classmethod
    def identity(cls, elements: Sequence[str]) -> "FuzzyRelation":
        n = len(elements)
        return cls(
            elements,
            elements,
            [[ONE if i == j else ZERO for j in range(n)] for i in range(n)],
        )

    def at(self, x: str, y: str) -> Fraction:
        return self.matrix[self._ri[x]][self._ci[y]]

    def __getitem__(self, pair: Tuple[str, str]) -> Fraction:
        return self.at(*pair)

    def entries(self) -> Iterator[Tuple[str, str, Fraction]]:
        for i, x in enumerate(self.rows):
            for j, y in enumerate(self.cols):
                yield x, y, self.matrix[i][j]

    def is_crisp(self) -> bool:
        return all(v == ZERO or v == ONE for row in self.matrix for v in row)

    def inverse(self) -> "FuzzyRelation":
        """Transpose: result(y, x) = self(x, y)."""
        flipped = [
            [self.matrix[i][j] for i in range(len(self.rows))]
            for j in range(len(self.cols))
        ]
        return FuzzyRelation(self.cols, self.rows, flipped)

    def compose(self, other: "FuzzyRelation") -> "FuzzyRelation":
        """Max-min product; requires cols(self) == rows(other)."""
        if self.cols != other.rows:
            raise InputError(
                "cannot compose: column elements of the left relation differ "
                "from row elements of the right relation"
            )
        mid = range(len(self.cols))
        result = []
        for i in range(len(self.rows)):
            row = []
            left = self.matrix[i]
            for j in range(len(other.cols)):
                acc = ZERO
                for k in mid:
                    v = godel_and(left[k], other.matrix[k][j])
                    if v > acc:
                        acc = v
                row.append(acc)
            result.append(row)
        return FuzzyRelation(self.rows, other.cols, result)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FuzzyRelation):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.matrix))

    def __repr__(self):
        return f"FuzzyRelation(rows={self.rows!r}, cols={self.cols!r})"


def rel_sup(relations: Iterable[FuzzyRelation]) -> FuzzyRelation:
    """Pointwise max of a nonempty family over identical index sets."""
    rels = list(relations)
    if not rels:
        raise InputError(
            "sup of an empty family is undefined; pass the all-zero relation instead"
        )
    first = rels[0]
    for rel in rels[1:]:
        if rel.rows != first.rows or rel.cols != first.cols:
            raise InputError("sup requires identical row/col sequences")
    matrix = [
        [
            max((rel.matrix[i][j] for rel in rels), default=ZERO)
            for j in range(len(first.cols))
        ]
        for i in range(len(first.rows))
    ]
    return FuzzyRelation(first.rows, first.cols, matrix)


def pointwise_leq(smaller: FuzzyRelation, larger: FuzzyRelation) -> bool:
    if smaller.rows != larger.rows or smaller.cols != larger.cols:
        raise InputError("comparison requires identical row/col sequences")
    return all(
        smaller.matrix[i][j] <= larger.matrix[i][j]
        for i in range(len(smaller.rows))
        for j in range(len(smaller.cols))
    )


def cap(rel: FuzzyRelation, bound) -> FuzzyRelation:
    """Pointwise min with a constant degree."""
    b = degree(bound)
    return FuzzyRelation(
        rel.rows,
        rel.cols,
        [[godel_and(v, b) for v in row] for row in rel.matrix],
    )
