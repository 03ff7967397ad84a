"""Brute-force optimal transport: minimum cost over all vertices of the coupling polytope.

Shares no code with the simplex in the library. Each vertex is found by
picking ``m + n - 1`` cells, solving the marginal equations restricted to
them by exact Gaussian elimination and keeping non-negative solutions.
"""

import itertools
from fractions import Fraction


def _solve(A, b):
    """Unique solution of the square system ``A x = b`` or ``None``."""
    k = len(A)
    M = [list(row) + [rhs] for row, rhs in zip(A, b)]
    for col in range(k):
        piv = next((r for r in range(col, k) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        for r in range(k):
            if r != col and M[r][col] != 0:
                f = M[r][col] / M[col][col]
                M[r] = [a - f * c for a, c in zip(M[r], M[col])]
    return [M[i][k] / M[i][i] for i in range(k)]


def vertex_min_cost(supply, demand, cost):
    m, n = len(supply), len(demand)
    cells = [(i, j) for i in range(m) for j in range(n)]
    # row sums, then all column sums but the last (it is implied)
    rhs = list(supply) + list(demand[:-1])
    best = None
    for basis in itertools.combinations(cells, m + n - 1):
        A = [[Fraction(int(c[0] == i)) for c in basis] for i in range(m)]
        A += [[Fraction(int(c[1] == j)) for c in basis] for j in range(n - 1)]
        x = _solve(A, rhs)
        if x is None or any(v < 0 for v in x):
            continue
        value = sum((v * cost[i][j] for v, (i, j) in zip(x, basis)), Fraction(0))
        if best is None or value < best:
            best = value
    return best


def all_couplings_cost_upper_bound(supply, demand, cost, plan):
    """Check that ``plan`` is a coupling of ``supply`` and ``demand`` and return its cost."""
    m, n = len(supply), len(demand)
    rows = [sum((f for (i, _), f in plan.items() if i == r), Fraction(0)) for r in range(m)]
    cols = [sum((f for (_, j), f in plan.items() if j == c), Fraction(0)) for c in range(n)]
    assert rows == list(supply) and cols == list(demand)
    assert all(f >= 0 for f in plan.values())
    return sum((f * cost[i][j] for (i, j), f in plan.items()), Fraction(0))
