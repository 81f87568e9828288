"""Independent brute-force oracles.

Nothing here touches the numpy enumeration or the scipy component
labelling used by the package, so the two routes check each other.
"""

from itertools import product


def states(n):
    """All assignments as tuples of bools, variable 1 first."""
    return list(product((False, True), repeat=n))


def clause_holds(clause_ints, bits):
    return any(bits[abs(l) - 1] == (l > 0) for l in clause_ints)


def solutions(clauses_ints, n):
    return [s for s in states(n) if all(clause_holds(c, s) for c in clauses_ints)]


def connected(sols):
    """Pairwise Hamming-1 adjacency plus BFS; quadratic on purpose."""
    if len(sols) <= 1:
        return True
    seen = {0}
    frontier = [0]
    while frontier:
        i = frontier.pop()
        for j, t in enumerate(sols):
            if j not in seen and sum(a != b for a, b in zip(sols[i], t)) == 1:
                seen.add(j)
                frontier.append(j)
    return len(seen) == len(sols)


def island(clauses_ints, n):
    return connected(solutions(clauses_ints, n))


def bits_str(bits):
    return "".join("1" if b else "0" for b in bits)
