"""Brute-force cross-checks of the Z/q linear algebra kernel.

Every structural claim (kernel size, independence of generators, quotient
invariants) is compared against exhaustive enumeration on small instances.
"""

import itertools
import random

import numpy as np
import pytest

from qcw.zqlinalg import (
    QuotientModule,
    RowSpace,
    cokernel_invariants,
    diagonalize,
    kernel_with_orders,
    prime_power,
    solve_mod,
    valuation,
)


def span_enumerate(rows, q):
    """All elements of the subgroup of (Z/q)^w generated by the rows."""
    rows = [tuple(int(x) % q for x in r) for r in rows]
    w = len(rows[0]) if rows else 0
    seen = {tuple([0] * w)}
    frontier = [tuple([0] * w)]
    while frontier:
        v = frontier.pop()
        for r in rows:
            nxt = tuple((a + b) % q for a, b in zip(v, r))
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen


def test_prime_power():
    assert prime_power(2) == (2, 1)
    assert prime_power(9) == (3, 2)
    assert prime_power(16) == (2, 4)
    with pytest.raises(ValueError):
        prime_power(12)
    with pytest.raises(ValueError):
        prime_power(1)


def test_valuation():
    assert valuation(0, 2, 3) == 3
    assert valuation(4, 2, 3) == 2
    assert valuation(6, 2, 3) == 1
    assert valuation(5, 2, 3) == 0


@pytest.mark.parametrize("q", [2, 3, 4, 9, 8])
def test_diagonalize_reconstructs(q):
    rng = random.Random(q)
    for _ in range(20):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        A = np.array([[rng.randrange(q) for _ in range(n)] for _ in range(m)])
        dg = diagonalize(A, q, want_U=True, want_Vinv=True)
        p, d = dg.p, dg.d
        D = (dg.U @ A @ dg.V) % q
        expected = np.zeros_like(D)
        for i, e in enumerate(dg.exps):
            expected[i, i] = p**e % q
        assert (D == expected).all()
        assert ((dg.V @ dg.Vinv) % q == np.eye(n, dtype=int)).all()


@pytest.mark.parametrize("q", [2, 3, 4, 9])
def test_kernel_matches_enumeration(q):
    rng = random.Random(100 + q)
    for _ in range(15):
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        A = np.array([[rng.randrange(q) for _ in range(n)] for _ in range(m)])
        gens = kernel_with_orders(A, q)
        for v, order in gens:
            assert not ((A @ v) % q).any()
            assert (order * v % q == 0).all()
            assert order == 1 or ((order // prime_power(q)[0]) * v % q).any() or order == 1
        brute = {
            x
            for x in itertools.product(range(q), repeat=n)
            if not ((A @ np.array(x)) % q).any()
        }
        spanned = span_enumerate([v for v, _ in gens], q) if gens else {tuple([0] * n)}
        assert spanned == brute
        prod = 1
        for _, order in gens:
            prod *= order
        assert prod == len(brute), "generators must be independent"


@pytest.mark.parametrize("q", [2, 3, 4, 9])
def test_solve_mod(q):
    rng = random.Random(7 * q)
    for _ in range(25):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        A = np.array([[rng.randrange(q) for _ in range(n)] for _ in range(m)])
        x0 = np.array([rng.randrange(q) for _ in range(n)])
        b = (A @ x0) % q
        x = solve_mod(A, b, q)
        assert x is not None
        assert ((A @ x) % q == b).all()


def test_solve_mod_unsolvable():
    # x + y = 1, x + y = 0 has no solution mod 2
    A = np.array([[1, 1], [1, 1]])
    assert solve_mod(A, np.array([1, 0]), 2) is None
    # 2x = 1 has no solution mod 4
    assert solve_mod(np.array([[2]]), np.array([1]), 4) is None


def quotient_order_census(gens, rels, q, w):
    """Order census of (span(gens)+span(rels))/span(rels) by enumeration."""
    big = span_enumerate(list(gens) + list(rels), q) if (len(gens) + len(rels)) else {tuple([0] * w)}
    sub = span_enumerate(rels, q) if len(rels) else {tuple([0] * w)}
    cosets = {}
    for v in big:
        key = min(tuple((np.array(v) - np.array(s)) % q) for s in sub)
        cosets.setdefault(key, v)
    # order of each coset in the quotient group
    census = {}
    for v in cosets.values():
        k = 1
        while tuple(np.array(v) * k % q) not in sub:
            k += 1
        census[k] = census.get(k, 0) + 1
    return len(cosets), census


def census_from_invariants(orders):
    total = 1
    for o in orders:
        total *= o
    census = {}
    for combo in itertools.product(*[range(o) for o in orders]) if orders else [()]:
        k = 1
        for c, o in zip(combo, orders):
            if c:
                k = np.lcm(k, o // np.gcd(c, o))
        k = int(k)
        census[k] = census.get(k, 0) + 1
    return total, census


@pytest.mark.parametrize("q", [2, 3, 4, 9])
def test_quotient_module_invariants(q):
    rng = random.Random(13 * q)
    for _ in range(12):
        w = rng.randint(1, 3)
        gens = [[rng.randrange(q) for _ in range(w)] for _ in range(rng.randint(0, 3))]
        rels = [[rng.randrange(q) for _ in range(w)] for _ in range(rng.randint(0, 2))]
        module = QuotientModule(gens, rels, w, q)
        size, census = quotient_order_census(gens, rels, q, w)
        msize, mcensus = census_from_invariants(module.orders)
        assert msize == size
        assert mcensus == census
        # coords invert on random combinations of the generators
        for _ in range(5):
            if not gens:
                break
            v = np.zeros(w, dtype=np.int64)
            for g in gens:
                v = (v + rng.randrange(q) * np.array(g)) % q
            y = module.coords(v)
            recon = (y @ module.basis) % q if module.rank else np.zeros(w, dtype=np.int64)
            assert module.contains_in_rels((v - recon) % q)


def test_cokernel_invariants_examples():
    # (Z/4)^1 / <2> = Z/2
    assert sorted(cokernel_invariants([[2]], 1, 4)) == [2]
    # (Z/3)^2 / <(1,-1)> = Z/3
    assert sorted(cokernel_invariants([[1, 2]], 2, 3)) == [3]
    # no relations: free
    assert cokernel_invariants([], 3, 2) == [2, 2, 2]
    # unit pivot kills a coordinate
    assert sorted(cokernel_invariants([[1, 0], [0, 2]], 2, 4)) == [2]


@pytest.mark.parametrize("q", [2, 3, 4])
def test_rowspace_membership(q):
    rng = random.Random(99 + q)
    for _ in range(10):
        w = rng.randint(2, 5)
        rows = [[rng.randrange(q) for _ in range(w)] for _ in range(rng.randint(1, 4))]
        rs = RowSpace(w, q)
        rs.add_rows(np.array(rows))
        spanned = span_enumerate(rows, q)
        for v in itertools.product(range(q), repeat=w):
            assert rs.contains(np.array(v)) == (v in spanned)


def test_rowspace_block_equals_single():
    rng = random.Random(5)
    q, w = 4, 6
    rows = np.array([[rng.randrange(q) for _ in range(w)] for _ in range(30)])
    rs1 = RowSpace(w, q)
    for r in rows:
        rs1.add_row(r)
    rs2 = RowSpace(w, q)
    rs2.add_rows(rows)
    for v in (rows[::3] * 3 + rows[1::3][: len(rows[::3])]) % q:
        assert rs1.contains(v) == rs2.contains(v)
