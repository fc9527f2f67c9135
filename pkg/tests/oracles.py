"""Brute-force reference computations that share no search code with the package."""

from __future__ import annotations

import itertools
from math import comb


def monotone_sequences(n: int, p: int):
    """All weakly increasing maps [n] -> [p] as tuples."""
    return [t for t in itertools.combinations_with_replacement(range(p + 1), n + 1)]


def nondegenerate_count_simplex(p: int, n: int) -> int:
    # a sequence is degenerate iff it lies in the image of some s_i, i.e. repeats a vertex
    return sum(1 for t in monotone_sequences(n, p)
               if not any(t[i] == t[i + 1] for i in range(n)))


def nondegenerate_count_product(p: int, q: int, n: int) -> int:
    count = 0
    for a in monotone_sequences(n, p):
        for b in monotone_sequences(n, q):
            if not any(a[i] == a[i + 1] and b[i] == b[i + 1] for i in range(n)):
                count += 1
    return count


def binomial(n: int, k: int) -> int:
    return comb(n, k)


def all_maps_brute(A, X):
    """Every simplicial map A -> X: free choice per generator, then filter by faces."""
    from ssetlab.sset import SimplicialMap

    gens = A.generators
    choices = [X.simplices(g.degree) for g in gens]
    out = []
    for combo in itertools.product(*choices):
        m = SimplicialMap(A, X, dict(zip(gens, combo)))
        if not m.commutes():
            out.append(m)
    return out


def lifts_brute(sq):
    return [d for d in all_maps_brute(sq.i.target, sq.p.source) if sq.is_lift(d)]
