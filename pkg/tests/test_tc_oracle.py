"""Todd-Coxeter coset enumeration as an independent order oracle.

The collection normal form asserts |E(n, q)| = q^(2n + n(n-1)/2) for the
universal class-2 quotient.  That number is re-derived here from finite
presentations alone: E(n, q) is presented by

    x_i^(q^2),  [x_i, x_j]^q,  [x_i^q, x_j],  [[x_i, x_j], x_k]  (all i, j, k)

and enumerating cosets of the trivial subgroup yields the group order by a
mechanism (HLT-style scanning with coincidence handling) that shares no
code with the collection engine.
"""

import numpy as np
import pytest

from qcw.presentations import Word, commutator, concat, power
from qcw.qcentral import SeriesParams, third_quotient, to_table, universal_class2
from qcw.presentations import free_presentation


class CosetEnumerator:
    """HLT Todd-Coxeter for <x_1..x_k | relators> over the trivial subgroup.

    Letters are column indices: generator g has columns 2g (g) and
    2g + 1 (g^-1).  Rows are cosets; a union-find handles coincidences.
    """

    def __init__(self, ngens: int, relators: list[Word], max_cosets: int = 200000):
        self.ngens = ngens
        self.cols = 2 * ngens
        self.relator_letters = [self._letters(r) for r in relators]
        self.max_cosets = max_cosets
        self.table: list[list[int | None]] = [[None] * self.cols]
        self.parent = [0]
        self.queue: list[int] = []

    @staticmethod
    def _letters(w: Word) -> list[int]:
        out = []
        for g, e in w.letters:
            col = 2 * g if e > 0 else 2 * g + 1
            out.extend([col] * abs(e))
        return out

    @staticmethod
    def _inv(col: int) -> int:
        return col ^ 1

    def rep(self, k: int) -> int:
        while self.parent[k] != k:
            self.parent[k] = self.parent[self.parent[k]]
            k = self.parent[k]
        return k

    def define(self, a: int, col: int) -> int:
        if len(self.table) >= self.max_cosets:
            raise RuntimeError("coset limit exceeded")
        b = len(self.table)
        self.table.append([None] * self.cols)
        self.parent.append(b)
        self.table[a][col] = b
        self.table[b][self._inv(col)] = a
        return b

    def merge(self, a: int, b: int) -> None:
        a, b = self.rep(a), self.rep(b)
        if a == b:
            return
        a, b = min(a, b), max(a, b)
        self.parent[b] = a
        self.queue.append(b)

    def process_coincidences(self) -> None:
        while self.queue:
            e = self.queue.pop()
            row = self.table[e]
            self.table[e] = [None] * self.cols
            for col in range(self.cols):
                f = row[col]
                if f is None:
                    continue
                # remove the reverse edge before reinstalling
                fr = self.rep(f)
                if self.table[fr][self._inv(col)] is not None and self.rep(
                    self.table[fr][self._inv(col)]
                ) == self.rep(e):
                    self.table[fr][self._inv(col)] = None
                er = self.rep(e)
                if self.table[er][col] is not None:
                    self.merge(fr, self.table[er][col])
                elif self.table[fr][self._inv(col)] is not None:
                    self.merge(er, self.table[fr][self._inv(col)])
                else:
                    self.table[er][col] = fr
                    self.table[fr][self._inv(col)] = er

    def scan_and_fill(self, coset: int, letters: list[int]) -> None:
        if not letters:
            return
        while True:
            coset = self.rep(coset)
            # scan forward
            f, i = coset, 0
            while i < len(letters):
                nxt = self.table[f][letters[i]]
                if nxt is None:
                    break
                f = self.rep(nxt)
                i += 1
            if i == len(letters):
                self.merge(f, coset)
                self.process_coincidences()
                return
            # scan backward
            b, j = coset, len(letters) - 1
            while j >= i:
                prev = self.table[b][self._inv(letters[j])]
                if prev is None:
                    break
                b = self.rep(prev)
                j -= 1
            if j < i:
                self.merge(f, b)
                self.process_coincidences()
                return
            if i == j:
                # the gap is one letter: deduce the edge
                self.table[f][letters[i]] = b
                self.table[b][self._inv(letters[i])] = f
                self.merge(f, f)
                self.process_coincidences()
                return
            self.define(f, letters[i])

    def enumerate(self) -> int:
        """Total coset count = group order (trivial subgroup)."""
        idx = 0
        while idx < len(self.table):
            if self.rep(idx) != idx:
                idx += 1
                continue
            for letters in self.relator_letters:
                if self.rep(idx) != idx:
                    break
                self.scan_and_fill(idx, letters)
            if self.rep(idx) == idx:
                for col in range(self.cols):
                    if self.rep(idx) != idx:
                        break
                    if self.table[idx][col] is None:
                        self.define(idx, col)
            idx += 1
        return sum(1 for k in range(len(self.table)) if self.rep(k) == k)


def gen(i):
    return Word(((i, 1),))


def universal_presentation(n: int, q: int) -> list[Word]:
    """Defining relators of the class-2 exponent-(q^2, q) universal group."""
    rels = []
    for i in range(n):
        rels.append(power(gen(i), q * q))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            cij = commutator(gen(i), gen(j))
            rels.append(power(cij, q))
            rels.append(commutator(power(gen(i), q), gen(j)))
            for k in range(n):
                rels.append(commutator(cij, gen(k)))
    return rels


@pytest.mark.parametrize(
    "ngens,relator_words,expected",
    [
        (1, [power(gen(0), 4)], 4),
        (2, [power(gen(0), 2), power(gen(1), 2), power(concat(gen(0), gen(1)), 3)], 6),
        (2, [power(gen(0), 4), concat(power(gen(0), 2), power(gen(1), -2)),
             concat(Word(((1, -1),)), gen(0), gen(1), gen(0))], 8),
    ],
)
def test_known_orders(ngens, relator_words, expected):
    # Z/4, the symmetric group S3, and the quaternion group
    assert CosetEnumerator(ngens, relator_words).enumerate() == expected


@pytest.mark.parametrize(
    "n,q",
    [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2)],
)
def test_universal_group_order_by_coset_enumeration(n, q):
    params = SeriesParams.from_q(q)
    expected = universal_class2(n, params).order
    got = CosetEnumerator(n, universal_presentation(n, q)).enumerate()
    assert got == expected == q ** (2 * n + n * (n - 1) // 2)


def test_presented_quotient_orders_match_collection():
    # a presented (non-free) case: the tame relator at q = 2
    rel = Word(((0, 1), (1, 1), (0, -1), (1, -3)))
    rels = universal_presentation(2, 2) + [rel]
    got = CosetEnumerator(2, rels).enumerate()
    pres = free_presentation(2)
    pres = type(pres)(name="D", generator_names=("s", "t"), relators=(rel,))
    assert got == third_quotient(pres, SeriesParams(2, 1)).order == 16
