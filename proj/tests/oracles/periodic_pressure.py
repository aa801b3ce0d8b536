"""Pressure of trig potentials for the cat map from periodic orbit sums.

Z_n = sum over fixed points x of A^n of exp(S_n phi(x)); log(Z_{n+1}/Z_n)
converges to P exponentially fast. Fixed points are enumerated exactly on
the lattice B^{-1} Z^2 / Z^2 with B = A^n - I.
"""
import sys

import numpy as np


def hnf_basis(cols):
    """Upper triangular basis [[a, b], [0, c]] of the integer lattice spanned by cols."""
    cols = [list(c) for c in cols]
    # eliminate second coordinate into a single column
    while sum(1 for c in cols if c[1] != 0) > 1:
        nz = sorted([c for c in cols if c[1] != 0], key=lambda c: abs(c[1]))
        piv = nz[0]
        for c in nz[1:]:
            q = c[1] // piv[1]
            c[0] -= q * piv[0]
            c[1] -= q * piv[1]
        cols = [c for c in cols if c != [0, 0]]
    piv = next(c for c in cols if c[1] != 0)
    if piv[1] < 0:
        piv = [-piv[0], -piv[1]]
    rest = [c[0] for c in cols if c[1] == 0]
    a = 0
    for r in rest:
        a = np.gcd(a, abs(r))
    return int(a), int(piv[0] % a), int(piv[1])


def fixed_points(n):
    A = np.array([[2, 1], [1, 1]], dtype=object)
    M = np.identity(2, dtype=object)
    for _ in range(n):
        M = M.dot(A)
    B = M - np.identity(2, dtype=object)
    D = abs(int(B[0, 0] * B[1, 1] - B[0, 1] * B[1, 0]))
    adj = [[int(B[1, 1]), int(-B[0, 1])], [int(-B[1, 0]), int(B[0, 0])]]
    cols = [(adj[0][0], adj[1][0]), (adj[0][1], adj[1][1]), (D, 0), (0, D)]
    a, b, c = hnf_basis(cols)
    assert (D // a) * (D // c) == D
    k1 = np.arange(D // a, dtype=np.int64)
    k2 = np.arange(D // c, dtype=np.int64)
    K1, K2 = np.meshgrid(k1, k2, indexing="ij")
    p1 = (K1 * a + K2 * b) % D
    p2 = (K2 * c) % D
    return p1.ravel(), p2.ravel(), D


def log_Z(n, terms):
    p1, p2, D = fixed_points(n)
    S = np.zeros(p1.shape)
    for _ in range(n):
        for amp, m1, m2 in terms:
            S += amp * np.cos(2 * np.pi * ((m1 * p1 + m2 * p2) % D) / D)
        p1, p2 = (2 * p1 + p2) % D, (p1 + p2) % D
    s0 = S.max()
    return s0 + np.log(np.exp(S - s0).sum())


def aitken(a, b, c):
    d = (c - b) - (b - a)
    return c - (c - b) ** 2 / d


def pressure(terms, n0=10, n1=16):
    prev = None
    out = []
    for n in range(n0, n1 + 1):
        z = log_Z(n, terms)
        if prev is not None:
            out.append((n, z - prev))
        prev = z
    return out


if __name__ == "__main__":
    amp = float(sys.argv[1]) if len(sys.argv) > 1 else 0.2
    seq = pressure([(amp, 1, 0)])
    for n, p in seq:
        print(f"n={n} P~{p:.12f}")
    print(f"aitken {aitken(*(p for _, p in seq[-3:])):.12f}")
