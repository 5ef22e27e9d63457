"""Goedel truth-value algebra over exact rationals.

Degrees are ``fractions.Fraction`` values in [0, 1].  Binary floats are
rejected everywhere: the involutive negation ``1 - p`` and the strict
comparisons inside the Goedel operators make rounding error semantically
visible, so all arithmetic stays exact.

Every function here is pure and safe for concurrent use.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Iterable, Optional

from .errors import InputError

Degree = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def degree(value) -> Fraction:
    """Coerce ``value`` to an exact degree in [0, 1].

    Accepts Fraction, int, or a string like ``"0.9"`` or ``"3/4"``.
    Floats are refused: ``0.9`` the float is not 9/10.
    """
    if isinstance(value, float):
        raise InputError(
            f"refusing float degree {value!r}: pass a string such as "
            f"'{value}' or a Fraction for exact arithmetic"
        )
    if isinstance(value, bool):
        raise InputError(f"not a degree: {value!r}")
    if isinstance(value, str):
        result = parse_degree(value)
    elif isinstance(value, (int, Fraction)):
        result = Fraction(value)
    else:
        raise InputError(f"not a degree: {value!r}")
    if not ZERO <= result <= ONE:
        raise InputError(f"degree {format_degree(result)} outside [0, 1]")
    return result


def parse_degree(text: str) -> Fraction:
    """Parse ``"0.25"`` / ``"1/4"`` / ``"1"`` into a reduced Fraction in [0, 1]."""
    try:
        result = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed degree {text!r}") from exc
    if not ZERO <= result <= ONE:
        raise InputError(f"degree {text!r} outside [0, 1]")
    return result


def format_degree(value: Fraction) -> str:
    """Render a degree exactly: shortest decimal if terminating, else num/den."""
    den = value.denominator
    while den % 2 == 0:
        den //= 2
    while den % 5 == 0:
        den //= 5
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    if value.denominator == 1:
        return str(value.numerator)
    # Scale to the exact decimal expansion.
    exponent = 0
    den = value.denominator
    while den % 2 == 0:
        den //= 2
        exponent += 1
    twos = exponent
    fives = 0
    while den % 5 == 0:
        den //= 5
        fives += 1
    digits = max(twos, fives)
    scaled = value.numerator * 10**digits // value.denominator
    text = str(scaled).rjust(digits + 1, "0")
    return f"{text[:-digits]}.{text[-digits:]}"


def godel_and(p: Fraction, q: Fraction) -> Fraction:
    return p if p <= q else q


def godel_or(p: Fraction, q: Fraction) -> Fraction:
    return p if p >= q else q


def godel_not(p: Fraction) -> Fraction:
    return ONE if p == ZERO else ZERO


def godel_implies(p: Fraction, q: Fraction) -> Fraction:
    """Residuum of min: 1 when p <= q, else q."""
    return ONE if p <= q else q


def godel_iff(p: Fraction, q: Fraction) -> Fraction:
    """min of the two residua: 1 when p == q, else min(p, q)."""
    if p == q:
        return ONE
    return p if p < q else q


def involutive_not(p: Fraction) -> Fraction:
    return ONE - p


def baaz_delta(p: Fraction) -> Fraction:
    """Projection onto {0, 1}: 1 exactly when p == 1."""
    return ONE if p == ONE else ZERO


_UNARY = {"neg": godel_not, "inv_neg": involutive_not, "delta": baaz_delta}
_BINARY = {"and": godel_and, "or": godel_or, "implies": godel_implies, "iff": godel_iff}


def godel_apply(connective: str, p: Fraction, q: Optional[Fraction] = None) -> Fraction:
    """Apply a named connective; arity mismatches raise :class:`InputError`."""
    if connective in _UNARY:
        if q is not None:
            raise InputError(f"connective {connective!r} takes one argument")
        return _UNARY[connective](p)
    if connective in _BINARY:
        if q is None:
            raise InputError(f"connective {connective!r} takes two arguments")
        return _BINARY[connective](p, q)
    raise InputError(f"unknown connective {connective!r}")


def nth_largest(values: Iterable[Fraction], n: int) -> Fraction:
    """The n-th largest element counting multiplicity; 0 if fewer than n.

    Realises the supremum over n pairwise-distinct witnesses of a min:
    picking the n best scores is optimal, and the bottleneck is the n-th.
    """
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    best = heapq.nlargest(n, values)
    if len(best) < n:
        return ZERO
    return best[-1]
