"""Riemann-sum quadrature rules over alpha sub-intervals.

PaperInclusive is the verbatim inclusive form (m+1 points, each weighted
1/m, so the weights sum to (m+1)/m times the interval length); the engine
default is Midpoint, whose open grid never duplicates interval boundaries
when intervals are stitched.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

PAPER_INCLUSIVE = "paper_inclusive"
LEFT = "left"
RIGHT = "right"
MIDPOINT = "midpoint"
TRAPEZOID = "trapezoid"

RULES = (PAPER_INCLUSIVE, LEFT, RIGHT, MIDPOINT, TRAPEZOID)
DEFAULT_RULE = MIDPOINT

# Rules whose alpha grid has m+1 points instead of m; their work counters
# report the actual point count.
INCLUSIVE_RULES = (PAPER_INCLUSIVE, TRAPEZOID)


def normalize_rule(rule: str) -> str:
    name = str(rule).strip().lower()
    if name not in RULES:
        raise DomainError(f"unknown quadrature rule {rule!r}; choose from {RULES}")
    return name


def point_count(rule: str, m: int) -> int:
    return m + 1 if normalize_rule(rule) in INCLUSIVE_RULES else m


def alpha_grid(rule: str, a: float, b: float, m: int):
    """Alpha points and weights for ``rule`` on [a, b] with m steps.

    Weights sum to (b - a) for Left/Right/Midpoint/Trapezoid and to
    (b - a)(m+1)/m for PaperInclusive. Endpoints are produced exactly
    (linspace grid), so alphas never leave [a, b].
    """
    rule = normalize_rule(rule)
    if m < 1:
        raise DomainError("m must be at least 1")
    if not (0.0 <= a < b <= 1.0):
        raise DomainError("need 0 <= a < b <= 1")
    edges = np.linspace(a, b, m + 1)
    h = (b - a) / m
    if rule == PAPER_INCLUSIVE:
        return edges, np.full(m + 1, h)
    if rule == LEFT:
        return edges[:-1].copy(), np.full(m, h)
    if rule == RIGHT:
        return edges[1:].copy(), np.full(m, h)
    if rule == MIDPOINT:
        return 0.5 * (edges[:-1] + edges[1:]), np.full(m, h)
    w = np.full(m + 1, h)
    w[0] = 0.5 * h
    w[-1] = 0.5 * h
    return edges, w
