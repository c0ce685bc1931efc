"""Seeded random instances for tests, benchmarks and the ``generate`` command."""

from __future__ import annotations

import random

from .graph import Graph
from .reductions import CnfFormula, Positive1in3Formula, ensure_min_frequency


def planted_1in3(rng: random.Random, num_vars: int, num_clauses: int) -> tuple[Positive1in3Formula, dict]:
    """Positive 1-in-3 formula with a planted solution, padded to frequency 3.

    Every clause holds one planted-true and two planted-false variables;
    variables missed by the random clauses get an extra clause of their own.
    """
    if num_vars < 3:
        raise ValueError("need at least 3 variables")
    n_true = rng.randint(1, num_vars - 2)
    true_vars = set(rng.sample(range(1, num_vars + 1), n_true))
    trues = sorted(true_vars)
    falses = sorted(set(range(1, num_vars + 1)) - true_vars)

    def clause(t=None, f=None):
        t = rng.choice(trues) if t is None else t
        fs = rng.sample([x for x in falses if x != f], 2 if f is None else 1)
        c = [t, *fs] if f is None else [t, f, fs[0]]
        rng.shuffle(c)
        return tuple(c)

    clauses = [clause() for _ in range(num_clauses)]
    used = {v for c in clauses for v in c}
    for v in range(1, num_vars + 1):
        if v not in used:
            clauses.append(clause(t=v) if v in true_vars else clause(f=v))
    phi = ensure_min_frequency(Positive1in3Formula(num_vars, clauses))
    return phi, {v: v in true_vars for v in range(1, num_vars + 1)}


def random_cnf(rng: random.Random, num_vars: int, num_clauses: int, width: int = 3) -> CnfFormula:
    """Clauses of up to ``width`` distinct variables with random signs."""
    clauses = []
    for _ in range(num_clauses):
        k = rng.randint(1, min(width, num_vars))
        vs = rng.sample(range(1, num_vars + 1), k)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return CnfFormula(num_vars, clauses)


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph(range(n), edges)
