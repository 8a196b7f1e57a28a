"""Independent reference computations used by the tests."""

from math import gcd


def corner_angles(h, v):
    """
    Cone angles (in quarter turns) at every vertex, found by gluing the four
    labeled corners of each square directly instead of using the commutator.
    Corner names: 0 = bottom-left, 1 = bottom-right, 2 = top-right, 3 = top-left.
    """
    n = len(h)
    hinv = [0] * n
    vinv = [0] * n
    for x in range(n):
        hinv[h[x]] = x
        vinv[v[x]] = x
    parent = {(x, k): (x, k) for x in range(n) for k in range(4)}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    def union(p, q):
        parent[find(p)] = find(q)

    for x in range(n):
        union((x, 1), (h[x], 0))  # right side
        union((x, 2), (h[x], 3))
        union((x, 3), (v[x], 0))  # top side
        union((x, 2), (v[x], 1))
    counts = {}
    for p in parent:
        r = find(p)
        counts[r] = counts.get(r, 0) + 1
    return sorted(counts.values())


def profile_by_angles(h, v):
    return sorted(c // 4 - 1 for c in corner_angles(h, v) if c > 4)


def census_oracle(r, g):
    """Closed forms for the counts of r-spin structures."""
    total = r ** (2 * g)
    if r % 2:
        return total, None, None
    half = (r // 2) ** (2 * g)
    return total, half * 2 ** (g - 1) * (2**g + 1), half * 2 ** (g - 1) * (2**g - 1)


def arf_brute(qvals, g):
    """Majority value of the quadratic form q on Z_2^(2g)."""
    zeros = 0
    for k in range(1 << (2 * g)):
        x = [(k >> j) & 1 for j in range(2 * g)]
        val = sum(a * b for a, b in zip(x, qvals)) + sum(x[i] * x[g + i] for i in range(g))
        zeros += val % 2 == 0
    return 0 if 2 * zeros > 1 << (2 * g) else 1


def euclid_remainders(a, b):
    """Classical Euclid on (a, b) with b >= a, listing quotients and remainders."""
    Q, R = [], []
    while True:
        q, r = divmod(b, a)
        Q.append(q)
        R.append(r)
        if r == 0:
            return Q, R
        a, b = r, a


def partial_sum_indices(kappa, g):
    """b indices 3 + k_1 + ... + k_l reduced into 1..2g-2."""
    m = 2 * g - 2
    s = 3
    out = set()
    for k in kappa:
        s += k
        out.add((s - 1) % m + 1)
    return out


def gcd_all(xs):
    out = 0
    for x in xs:
        out = gcd(out, x)
    return out
