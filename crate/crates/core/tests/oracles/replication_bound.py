#!/usr/bin/env python3
"""Reference values for the random vertex-cut replication bound.

Evaluates h_n(alpha) = sum_{d=1}^{n-1} d^-alpha and
E[RF] = p - p/h * sum_{d=1}^{n-1} ((p-1)/p)^d d^-alpha
at 50 significant digits with mpmath. Output is pasted into
tests/acceptance.rs and src/graph/degree.rs tests.
"""
import mpmath as mp

mp.mp.dps = 50


def harmonic(n, alpha):
    alpha = mp.mpf(alpha)
    return mp.fsum(mp.mpf(d) ** -alpha for d in range(1, n))


def bound(p, alpha, n):
    alpha = mp.mpf(alpha)
    q = mp.mpf(p - 1) / p
    h = harmonic(n, alpha)
    s = mp.fsum(q ** d * mp.mpf(d) ** -alpha for d in range(1, n))
    return p - p / h * s


if __name__ == "__main__":
    print("harmonic(1000, 2.2) =", mp.nstr(harmonic(1000, "2.2"), 20))
    for p in (2, 4, 8, 16, 64):
        for alpha in ("2.1", "2.2", "2.4", "3.0"):
            for n in (1000, 10000):
                print(f"({p}, {alpha}, {n}, {mp.nstr(bound(p, alpha, n), 20)}),")
