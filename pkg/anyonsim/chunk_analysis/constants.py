"""
Threshold-proof inequalities and the smallest Q satisfying each

Every inequality is checked exactly with Fraction arithmetic for n up to MAX_LEVEL, plus a
leading-order comparison for n -> infinity.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from anyonsim.errors import UnknownInequalityError

logger = logging.getLogger(__name__)

MAX_LEVEL = 40
SEARCH_LIMIT = 10_000


@dataclass(frozen=True)
class Inequality:
    identifier: str
    formula: str
    holds: Callable[[int, int], bool]
    asymptotic: Callable[[int], bool]
    published_q: int
    governing_q: int
    n_min: int = 0
    note: str = ''


def _f(value) -> Fraction:
    return Fraction(value)


INEQUALITIES = {ineq.identifier: ineq for ineq in (
    Inequality(
        'linking-same-size', 'Q^(n+1)/3 - 2 >= 3(Q^n + 2)',
        lambda Q, n: _f(Q ** (n + 1)) / 3 - 2 >= 3 * (Q ** n + 2),
        lambda Q: _f(Q) / 3 > 3, published_q=33, governing_q=60),
    Inequality(
        'linking-single-parent', 'Q^(s+2)/3 - 2 > 6(Q^s + 2)',
        lambda Q, n: _f(Q ** (n + 2)) / 3 - 2 > 6 * (Q ** n + 2),
        lambda Q: _f(Q * Q) / 3 > 6, published_q=60, governing_q=60,
        note='derivation uses Q^(s+1)/3 - 2 > 6(Q^s + 2), which needs Q >= 61; the chain only needs Q^(s+2)'),
    Inequality(
        'linking-one-per-size', 'Q^(p+1)/3 - 2 > 4(Q^p + 2)',
        lambda Q, n: _f(Q ** (n + 1)) / 3 - 2 > 4 * (Q ** n + 2),
        lambda Q: _f(Q) / 3 > 4, published_q=43, governing_q=60),
    Inequality(
        'tree-diameter', '9Q^k + 16k - 4 < Q^(k+1)',
        lambda Q, n: 9 * Q ** n + 16 * n - 4 < Q ** (n + 1),
        lambda Q: Q > 9, published_q=11, governing_q=60),
    Inequality(
        'tree-separation-gamma', '(1 - 3/4) Q >= 6',
        lambda Q, n: _f(Q) / 4 >= 6,
        lambda Q: _f(Q) / 4 >= 6, published_q=24, governing_q=60),
    Inequality(
        'tree-separation-diameter', 'Q^(n+1)/4 - 2 > 9Q^n',
        lambda Q, n: _f(Q ** (n + 1)) / 4 - 2 > 9 * Q ** n,
        lambda Q: _f(Q) / 4 > 9, published_q=44, governing_q=60,
        note='strict inequality fails at Q = 44, n = 0 (9 > 9)'),
    Inequality(
        'tree-separation-descendants', 'Q^(n+1)/3 - 2 - 2Q^n - 3Q^(n-1) >= Q^(n+1)/4 - 2',
        lambda Q, n: _f(Q ** (n + 1)) / 3 - 2 - 2 * Q ** n - 3 * _f(Q ** n) / Q >= _f(Q ** (n + 1)) / 4 - 2,
        lambda Q: _f(Q * Q) / 12 >= 2 * Q + 3, published_q=26, governing_q=60, n_min=1),
    Inequality(
        'just-in-time', 'Q^(n+1)/4 - 2 > 4(3Q^n + 2)',
        lambda Q, n: _f(Q ** (n + 1)) / 4 - 2 > 4 * (3 * Q ** n + 2),
        lambda Q: _f(Q) / 4 > 12, published_q=89, governing_q=89),
    Inequality(
        'eta-separation', 'Q^(n+1)/4 - 8(3Q^n + 2) - 4 > Q^(n+1)/8',
        lambda Q, n: _f(Q ** (n + 1)) / 4 - 8 * (3 * Q ** n + 2) - 4 > _f(Q ** (n + 1)) / 8,
        lambda Q: _f(Q) / 8 > 24, published_q=353, governing_q=353,
        note='stated as Q > 352'),
)}

KNOWN_DISCREPANCIES = ('linking-single-parent', 'tree-separation-diameter')


def get_inequality(identifier: str) -> Inequality:
    try:
        return INEQUALITIES[identifier]
    except KeyError:
        msg = f"unknown inequality {identifier!r}, expected one of {sorted(INEQUALITIES)}"
        raise UnknownInequalityError(msg) from None


def satisfied(identifier: str, Q: int) -> bool:
    """True when the inequality holds for every level up to MAX_LEVEL and asymptotically."""
    ineq = get_inequality(identifier)
    return ineq.asymptotic(Q) and all(ineq.holds(Q, n) for n in range(ineq.n_min, MAX_LEVEL + 1))


def minimal_Q(identifier: str, limit: int = SEARCH_LIMIT) -> int:
    """
    Smallest integer Q >= 2 satisfying the named inequality at every level

    Raises:
        UnknownInequalityError: unknown identifier
        ValueError: nothing up to `limit` satisfies it
    """
    get_inequality(identifier)
    for Q in range(2, limit + 1):
        if satisfied(identifier, Q):
            return Q
    msg = f"no Q <= {limit} satisfies {identifier}"
    raise ValueError(msg)


def threshold_estimate(Q: int = 352) -> float:
    """Error-rate scale 1/(3Q)^6 below which the decoder is expected to succeed."""
    return 1.0 / (3 * Q) ** 6


def informational_rows(Q: int = 60) -> list[dict]:
    """Derived quantities that are reported but not searched."""
    return [
        {'quantity': 'isolated-error-neighbourhood', 'formula': '4d + 7'},
        {'quantity': 'isolated-error-lifetime', 'formula': '5(d + 2)', 'alternative': '4(d + 2)',
         'note': 'statement and proof disagree; tests use the looser bound'},
        {'quantity': 'linking-radius', 'formula': '2(Q^n + 2)', 'value_n0': 6},
        {'quantity': 'isolated-tree-lifetime', 'formula': '4(3Q^n + 2)', 'value_n1': 4 * (3 * Q + 2)},
        {'quantity': 'tree-diameter-bound', 'formula': '2(Q^k + 2) + 8(Q^k - 1)/(Q - 1) + 16k <= 3Q^k'},
        {'quantity': 'tree-separation', 'formula': 'Q^(n+1)/4 - 2'},
        {'quantity': 'threshold-estimate', 'formula': '1/(3Q)^6', 'Q': 352, 'value': threshold_estimate(352)},
    ]


def constants_table() -> dict:
    """
    Searched and published constants for every inequality

    agrees: the search reproduces the published constant.
    holds_at_governing: the inequality holds at the Q of the result it serves (60, 89 or 353).
    """
    rows = []
    for identifier, ineq in INEQUALITIES.items():
        searched = minimal_Q(identifier)
        row = {
            'inequality': identifier,
            'formula': ineq.formula,
            'publishedQ': ineq.published_q,
            'searchedQ': searched,
            'agrees': searched == ineq.published_q,
            'holds_at_governing': satisfied(identifier, ineq.governing_q),
            'flagged': identifier in KNOWN_DISCREPANCIES,
        }
        if ineq.note:
            row['note'] = ineq.note
        rows.append(row)
        logger.debug("%s: searched %d, published %d", identifier, searched, ineq.published_q)
    disagreeing = {row['inequality'] for row in rows if not row['agrees']}
    return {
        'rows': rows,
        'informational': informational_rows(),
        'passed': all(row['holds_at_governing'] for row in rows) and disagreeing == set(KNOWN_DISCREPANCIES),
    }
