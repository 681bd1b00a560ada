#!/usr/bin/env python3
"""Generate the bundled factorization fixtures for q^r - 1.

Splits q^r - 1 into cyclotomic parts Phi_d(p) (with q = p^a, d | a*r),
factors each part once, and reassembles per-(q, r) entries.  Partial
results are checkpointed to JSON so interrupted runs can resume.

Output format (one entry per line):  q r p1[^e1] p2[^e2] ...
"""

import json
import os
import sys
import time

import gmpy2
from gmpy2 import mpz
import sympy
from sympy import cyclotomic_poly, divisors
from sympy.ntheory import ecm

HERE = os.path.dirname(os.path.abspath(__file__))
CACHE = os.path.join(HERE, "phi_factor_cache.json")
OUT = os.path.join(HERE, os.pardir, "data", "fixtures", "qr_factorizations.txt")

TARGETS = {
    9: range(2, 39),
    8: range(2, 44),
    7: range(2, 52),
    5: range(2, 104),
    4: range(2, 41),
    3: range(2, 41),
}
BASE = {9: (3, 2), 8: (2, 3), 7: (7, 1), 5: (5, 1), 4: (2, 2), 3: (3, 1)}


def is_prime(n):
    return gmpy2.is_prime(mpz(n), 40)


def small_primes(limit):
    sieve = bytearray([1]) * limit
    sieve[0] = sieve[1] = 0
    for i in range(2, int(limit**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(limit) if sieve[i]]

SMALL = small_primes(10**6)


def trial_small(n):
    found = {}
    for p in SMALL:
        if p * p > n:
            break
        while n % p == 0:
            found[p] = found.get(p, 0) + 1
            n //= p
    return found, n


def trial_congruent(n, d, bound):
    """Batch-gcd trial division by candidates c = k*d' + 1 up to bound.

    Prime factors of Phi_d(p) not dividing d are congruent to 1 mod d
    (mod 2d when p is odd and d even enough; 1 mod d is always safe).
    """
    found = {}
    n = mpz(n)
    step = d
    c = 1 + step
    batch = []
    while c <= bound:
        batch.append(c)
        if len(batch) == 4096:
            prod = mpz(1)
            for x in batch:
                prod = prod * x % n
            g = gmpy2.gcd(prod, n)
            if g > 1:
                for x in batch:
                    while n % x == 0:
                        found[x] = found.get(x, 0) + 1
                        n //= x
            batch = []
        c += step
    if batch:
        prod = mpz(1)
        for x in batch:
            prod = prod * x % n
        if gmpy2.gcd(prod, n) > 1:
            for x in batch:
                while n % x == 0:
                    found[x] = found.get(x, 0) + 1
                    n //= x
    return found, int(n)


def pminus1(n, B1):
    n = mpz(n)
    a = mpz(2)
    for p in SMALL:
        if p > B1:
            break
        pk = p
        while pk * p <= B1:
            pk *= p
        a = gmpy2.powmod(a, pk, n)
    g = gmpy2.gcd(a - 1, n)
    if 1 < g < n:
        return int(g)
    return None


def ecm_factor(n, B1, B2, curves):
    try:
        res = ecm(n, B1=B1, B2=B2, max_curve=curves, seed=int(time.time()))
    except Exception:
        return None
    res = [f for f in res if 1 < f < n]
    return res[0] if res else None


def factor_one(n, d, effort):
    """Factor n (a cofactor of Phi_d(p)). Returns (dict, composite_left)."""
    found = {}
    small, n = trial_small(n)
    found.update(small)
    if n == 1:
        return found, None
    stack = [n]
    hard = []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            found[int(m)] = found.get(int(m), 0) + 1
            continue
        tr, rest = trial_congruent(m, d, 10**8)
        if tr:
            for p, e in tr.items():
                found[p] = found.get(p, 0) + e
            stack.append(rest)
            continue
        g = pminus1(m, 10**6)
        if g:
            stack += [g, m // g]
            continue
        got = None
        for B1, B2, cur in effort:
            got = ecm_factor(m, B1, B2, cur)
            if got:
                break
        if got:
            stack += [got, m // got]
        else:
            hard.append(int(m))
    return found, (hard if hard else None)


def main():
    cache = {}
    if os.path.exists(CACHE):
        with open(CACHE) as f:
            cache = json.load(f)

    needed = {}
    for q, rs in TARGETS.items():
        p, a = BASE[q]
        for r in rs:
            for d in divisors(a * r):
                needed[(p, d)] = None
    # smallest first so the log shows steady progress
    keys = sorted(needed, key=lambda k: int(cyclotomic_poly(k[1], k[0])))

    effort = [
        (2_000, 200_000, 40),
        (20_000, 2_000_000, 60),
        (100_000, 10_000_000, 80),
        (500_000, 50_000_000, 120),
    ]

    for p, d in keys:
        key = f"{p},{d}"
        if key in cache and not cache[key].get("hard"):
            continue
        val = int(cyclotomic_poly(d, p))
        t0 = time.time()
        found, hard = factor_one(val, d, effort)
        check = 1
        for f, e in found.items():
            check *= f**e
        if hard:
            for h in hard:
                check *= h
        assert check == val, (p, d)
        cache[key] = {
            "value": str(val),
            "factors": {str(f): e for f, e in found.items()},
            "hard": [str(h) for h in (hard or [])],
        }
        with open(CACHE, "w") as f:
            json.dump(cache, f)
        status = "HARD %d digits: %s" % (
            len(str(hard[0])) if hard else 0,
            ",".join(str(len(str(h))) for h in (hard or [])),
        ) if hard else "done"
        print(
            "phi(%d, p=%d) %d digits  %.1fs  %s" % (d, p, len(str(val)), time.time() - t0, status),
            flush=True,
        )

    # assemble fixture file; skip entries with unfinished parts
    os.makedirs(os.path.dirname(OUT), exist_ok=True)
    skipped = []
    with open(OUT, "w") as out:
        out.write("# factorizations of q^r - 1, generated by scripts/gen_fixtures.py\n")
        for q in sorted(TARGETS):
            p, a = BASE[q]
            for r in TARGETS[q]:
                combined = {}
                ok = True
                for d in divisors(a * r):
                    ent = cache.get(f"{p},{d}")
                    if ent is None or ent.get("hard"):
                        ok = False
                        break
                    for f, e in ent["factors"].items():
                        combined[int(f)] = combined.get(int(f), 0) + e
                if not ok:
                    skipped.append((q, r))
                    continue
                n = 1
                for f, e in combined.items():
                    n *= f**e
                assert n == q**r - 1, (q, r)
                parts = []
                for f in sorted(combined):
                    e = combined[f]
                    parts.append(f"{f}^{e}" if e > 1 else str(f))
                out.write(f"{q} {r} {' '.join(parts)}\n")
    print("skipped (unfinished):", skipped, flush=True)


if __name__ == "__main__":
    main()
