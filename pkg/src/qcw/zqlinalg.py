"""Linear algebra over Z/q with q = p^d.

Z/p^d is a chain ring: every nonzero element factors as unit * p^e, so
Gaussian elimination works verbatim provided pivots are chosen with minimal
p-valuation.  Everything here reduces to that one idea:

* ``diagonalize`` brings a matrix to diag(p^e1, p^e2, ...) by row and column
  operations (valuation-sorted, so e1 <= e2 <= ...), tracking the column
  transform and optionally its inverse and the row transform.
* ``kernel_with_orders`` / ``solve_mod`` / ``QuotientModule`` are the standard
  consequences, phrased so that callers get cyclic orders alongside vectors
  (for prime q all orders are q and everything collapses to F_p linear
  algebra).
* ``RowSpace`` accumulates the row space of a stream of vectors; it is the
  workhorse for the large, highly redundant 2-cocycle systems.

All vectors are numpy int64 arrays with entries in [0, q).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, d) with q = p^d, p prime; raise ValueError otherwise."""
    if q < 2:
        raise ValueError(f"modulus must be >= 2, got {q}")
    p = 2
    while q % p != 0:
        p += 1
    d, rest = 0, q
    while rest % p == 0:
        rest //= p
        d += 1
    if rest != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, d


def valuation(x: int, p: int, d: int) -> int:
    """p-valuation of x mod p^d; the zero class gets valuation d."""
    x = int(x)
    if x % p**d == 0:
        return d
    e = 0
    while x % p == 0:
        x //= p
        e += 1
    return e


def unit_inverse(x: int, p: int, d: int) -> int:
    """For x = u * p^e mod p^d return u^{-1} mod p^d."""
    q = p**d
    e = valuation(x, p, d)
    if e >= d:
        raise ZeroDivisionError("zero has no unit part")
    u = (int(x) % q) // p**e
    return pow(u, -1, q)


def _as_matrix(rows, width: int, q: int) -> np.ndarray:
    if isinstance(rows, np.ndarray):
        m = rows.astype(np.int64) % q
        if m.ndim == 1:
            m = m.reshape(1, -1)
    elif len(rows) == 0:
        m = np.zeros((0, width), dtype=np.int64)
    else:
        m = np.array(rows, dtype=np.int64) % q
    if m.shape[1] != width:
        raise ValueError(f"expected width {width}, got {m.shape[1]}")
    return m


@dataclass
class Diagonalization:
    """D = U A V with D = diag(p^exps) padded by zeros; V columns tracked.

    ``carry``, when requested, is U applied to the caller's right-hand-side
    columns (tracking U itself would be quadratic in the row count).
    """

    q: int
    p: int
    d: int
    exps: list[int]
    V: np.ndarray
    Vinv: np.ndarray | None = None
    U: np.ndarray | None = None
    D: np.ndarray | None = None
    carry: np.ndarray | None = None


def diagonalize(A, q: int, want_Vinv: bool = False, want_U: bool = False, carry=None) -> Diagonalization:
    """Diagonalize A over Z/q by row+column ops with valuation pivoting."""
    p, d = prime_power(q)
    A = np.array(A, dtype=np.int64) % q
    if A.ndim == 1:
        A = A.reshape(1, -1)
    m, n = A.shape
    V = np.eye(n, dtype=np.int64)
    Vinv = np.eye(n, dtype=np.int64) if want_Vinv else None
    U = np.eye(m, dtype=np.int64) if want_U else None
    if carry is not None:
        carry = np.array(carry, dtype=np.int64) % q
        if carry.ndim == 1:
            carry = carry.reshape(-1, 1)
        if carry.shape[0] != m:
            raise ValueError("carry must have one row per matrix row")
    exps: list[int] = []
    r = 0
    while r < min(m, n):
        block = A[r:, r:]
        if not block.any():
            break
        # entry of minimal valuation in the remaining block
        if d == 1:
            nzr, nzc = np.nonzero(block)
            bi, bj = int(nzr[0]), int(nzc[0])
            e = 0
        else:
            nz = block != 0
            vals = np.full(block.shape, d, dtype=np.int64)
            rem = block.copy()
            e = 0
            mask = nz.copy()
            while mask.any() and e < d:
                vals[mask & (rem % p != 0)] = e
                mask &= rem % p == 0
                rem = rem // p
                e += 1
            flat = np.argmin(np.where(nz, vals, d + 1))
            bi, bj = divmod(int(flat), block.shape[1])
            e = int(vals[bi, bj])
        i, j = r + bi, r + bj
        if i != r:
            A[[r, i]] = A[[i, r]]
            if U is not None:
                U[[r, i]] = U[[i, r]]
            if carry is not None:
                carry[[r, i]] = carry[[i, r]]
        if j != r:
            A[:, [r, j]] = A[:, [j, r]]
            V[:, [r, j]] = V[:, [j, r]]
            if Vinv is not None:
                Vinv[[r, j]] = Vinv[[j, r]]
        uinv = unit_inverse(A[r, r], p, d)
        A[r] = (A[r] * uinv) % q
        if U is not None:
            U[r] = (U[r] * uinv) % q
        if carry is not None:
            carry[r] = (carry[r] * uinv) % q
        pe = p**e
        # clear the pivot column by row ops
        col = A[r + 1 :, r]
        if col.any():
            mult = col // pe
            A[r + 1 :] = (A[r + 1 :] - np.outer(mult, A[r])) % q
            if U is not None:
                U[r + 1 :] = (U[r + 1 :] - np.outer(mult, U[r])) % q
            if carry is not None:
                carry[r + 1 :] = (carry[r + 1 :] - np.outer(mult, carry[r])) % q
        # clear the pivot row by column ops
        row = A[r, r + 1 :]
        if row.any():
            mult = row // pe
            A[:, r + 1 :] = (A[:, r + 1 :] - np.outer(A[:, r], mult)) % q
            V[:, r + 1 :] = (V[:, r + 1 :] - np.outer(V[:, r], mult)) % q
            if Vinv is not None:
                Vinv[r] = (Vinv[r] + mult @ Vinv[r + 1 :]) % q
        exps.append(e)
        r += 1
    return Diagonalization(q=q, p=p, d=d, exps=exps, V=V, Vinv=Vinv, U=U, D=A, carry=carry)


def kernel_with_orders(A, q: int) -> list[tuple[np.ndarray, int]]:
    """Generators (vector, cyclic order) of {x in (Z/q)^n : A x = 0}.

    The generators are independent: the kernel is the direct sum of the
    cyclic groups they span.
    """
    A = np.array(A, dtype=np.int64) % q
    if A.ndim == 1:
        A = A.reshape(1, -1)
    n = A.shape[1]
    dg = diagonalize(A, q)
    p, d = dg.p, dg.d
    gens: list[tuple[np.ndarray, int]] = []
    for i, e in enumerate(dg.exps):
        if e == 0:
            continue  # unit pivot: coordinate forced to zero
        vec = (p ** (d - e) * dg.V[:, i]) % q
        gens.append((vec, p**e))
    for j in range(len(dg.exps), n):
        gens.append((dg.V[:, j] % q, q))
    return gens


def solve_mod_many(A, B, q: int) -> list[np.ndarray | None]:
    """Solutions of A x = b for every column b of B (None where unsolvable)."""
    A = np.array(A, dtype=np.int64) % q
    if A.ndim == 1:
        A = A.reshape(1, -1)
    B = np.array(B, dtype=np.int64) % q
    single = B.ndim == 1
    if single:
        B = B.reshape(-1, 1)
    m, n = A.shape
    dg = diagonalize(A, q, carry=B)
    p = dg.p
    C = dg.carry
    out: list[np.ndarray | None] = []
    for col in range(C.shape[1]):
        c = C[:, col]
        y = np.zeros(n, dtype=np.int64)
        good = True
        for i, e in enumerate(dg.exps):
            pe = p**e
            if c[i] % pe != 0:
                good = False
                break
            y[i] = c[i] // pe
        if good and (c[len(dg.exps) :] % q != 0).any():
            good = False
        out.append((dg.V @ y) % q if good else None)
    return out


def solve_mod(A, b, q: int) -> np.ndarray | None:
    """One solution x of A x = b over Z/q, or None."""
    return solve_mod_many(A, b, q)[0]


def cokernel_invariants(rels, width: int, q: int) -> list[int]:
    """Cyclic orders of (Z/q)^width / span(rels), 1-entries dropped."""
    p, d = prime_power(q)
    rels = _as_matrix(rels, width, q)
    dg = diagonalize(rels, q)
    inv = [p**e for e in dg.exps if e > 0]
    inv += [q] * (width - len(dg.exps))
    return inv


class QuotientModule:
    """The subquotient (span(gens) + span(rels)) / span(rels) of (Z/q)^width.

    Exposes independent cyclic generators (``basis`` rows with ``orders``) and
    coordinates of arbitrary ambient vectors in that basis.
    """

    def __init__(self, gens, rels, width: int, q: int):
        self.q = q
        self.p, self.d = prime_power(q)
        self.width = width
        gens = _as_matrix(gens, width, q)
        rels = _as_matrix(rels, width, q)
        self.rels = rels
        s = gens.shape[0]
        if s == 0:
            self.orders: list[int] = []
            self.basis = np.zeros((0, width), dtype=np.int64)
            return
        # relation coefficients on the given generators
        stacked = np.vstack([gens, rels]).T  # width x (s + r)
        lam = [k[:s] for k, _ in kernel_with_orders(stacked, q)]
        P = _as_matrix(lam, s, q)
        dg = diagonalize(P, q, want_Vinv=True)
        newgens = (dg.Vinv @ gens) % q  # row i generates the i-th cyclic summand
        orders, rows = [], []
        for i, e in enumerate(dg.exps):
            if e == 0:
                continue
            orders.append(self.p**e)
            rows.append(newgens[i])
        for j in range(len(dg.exps), s):
            orders.append(q)
            rows.append(newgens[j])
        self.orders = orders
        self.basis = _as_matrix(rows, width, q)

    @property
    def rank(self) -> int:
        """Minimal number of generators (length of the invariant list)."""
        return len(self.orders)

    def coords_batch(self, vectors) -> np.ndarray:
        """Coordinates of many classes at once (one diagonalization pass)."""
        vectors = _as_matrix(vectors, self.width, self.q)
        t = len(self.orders)
        if t == 0:
            for v in vectors:
                if not self.contains_in_rels(v):
                    raise ValueError("vector not in the module")
            return np.zeros((len(vectors), 0), dtype=np.int64)
        A = np.vstack([self.basis, self.rels]).T
        sols = solve_mod_many(A, vectors.T, self.q)
        out = np.zeros((len(vectors), t), dtype=np.int64)
        for k, x in enumerate(sols):
            if x is None:
                raise ValueError("vector not in the module")
            out[k] = [int(xi) % o for xi, o in zip(x[:t], self.orders)]
        return out

    def coords(self, v) -> np.ndarray:
        """Coordinates of the class of v in the basis, entry i mod orders[i].

        Raises ValueError if v is not in span(gens) + span(rels).
        """
        return self.coords_batch(np.asarray(v, dtype=np.int64).reshape(1, -1))[0]

    def contains_in_rels(self, v) -> bool:
        if self.rels.shape[0] == 0:
            return not np.asarray(v, dtype=np.int64).__mod__(self.q).any()
        return solve_mod(self.rels.T, v, self.q) is not None


class RowSpace:
    """Accumulates the row space of streamed vectors over Z/q.

    Unit pivots are kept in reduced row echelon form so that incoming blocks
    can be reduced with one matrix product; the (rare, q non-prime only)
    p-power pivot rows are applied per row.  ``residual`` tells whether a
    vector lies in the accumulated span.
    """

    def __init__(self, width: int, q: int):
        self.q = q
        self.p, self.d = prime_power(q)
        self.width = width
        self._rows: list[np.ndarray] = []
        self._cols: list[int] = []
        self._exps: list[int] = []
        self._by_col: dict[int, int] = {}

    @property
    def nrows(self) -> int:
        return len(self._rows)

    def rows_matrix(self) -> np.ndarray:
        return _as_matrix(self._rows, self.width, self.q)

    def _reduce_one(self, v: np.ndarray) -> np.ndarray:
        v = v % self.q
        for idx in sorted(range(len(self._rows)), key=lambda k: self._cols[k]):
            c, e = self._cols[idx], self._exps[idx]
            x = int(v[c])
            if x == 0:
                continue
            if x % self.p**e == 0:
                v = (v - (x // self.p**e) * self._rows[idx]) % self.q
        return v

    def reduce_block(self, block: np.ndarray) -> np.ndarray:
        """Reduce a stack of rows against the current unit pivots (fast path)."""
        block = block % self.q
        unit = [i for i in range(len(self._rows)) if self._exps[i] == 0]
        if unit and block.size:
            cols = [self._cols[i] for i in unit]
            piv = np.stack([self._rows[i] for i in unit]).astype(np.float64)
            coeff = block[:, cols].astype(np.float64)
            block = (block - (coeff @ piv).astype(np.int64)) % self.q
        return block

    def add_row(self, v) -> bool:
        """Insert one vector; returns True if the row space grew."""
        v = np.asarray(v, dtype=np.int64) % self.q
        while True:
            v = self._reduce_one(v)
            nz = np.flatnonzero(v)
            if nz.size == 0:
                return False
            c = int(nz[0])
            e = valuation(int(v[c]), self.p, self.d)
            v = (v * unit_inverse(int(v[c]), self.p, self.d)) % self.q
            old = self._by_col.get(c)
            if old is None:
                self._insert(v, c, e)
                self._push_tail(v, e)
                return True
            # incoming has strictly smaller valuation at c (else reduced);
            # swap roles and push the old pivot row back through
            displaced = self._rows[old]
            self._rows[old] = v
            self._exps[old] = e
            self._rereduce_above(old)
            self._push_tail(v, e)
            v = displaced

    def _insert(self, v: np.ndarray, c: int, e: int) -> None:
        self._rows.append(v)
        self._cols.append(c)
        self._exps.append(e)
        self._by_col[c] = len(self._rows) - 1
        self._rereduce_above(len(self._rows) - 1)

    def _push_tail(self, v: np.ndarray, e: int) -> None:
        # p^(d-e) * v annihilates the pivot entry and exposes a new leading
        # column; the module element must be represented by its own row
        if e > 0:
            self.add_row((self.p ** (self.d - e) * v) % self.q)

    def _rereduce_above(self, idx: int) -> None:
        # keep earlier rows clear at this pivot column where divisibility allows
        c, e = self._cols[idx], self._exps[idx]
        pe = self.p**e
        row = self._rows[idx]
        for k in range(len(self._rows)):
            if k == idx:
                continue
            x = int(self._rows[k][c])
            if x and x % pe == 0:
                self._rows[k] = (self._rows[k] - (x // pe) * row) % self.q

    def add_rows(self, block) -> int:
        """Insert a block of rows; returns how many grew the space."""
        block = _as_matrix(block, self.width, self.q)
        block = self.reduce_block(block)
        grew = 0
        nonzero = np.flatnonzero(block.any(axis=1))
        for i in nonzero:
            if self.add_row(block[i]):
                grew += 1
        return grew

    def residual(self, v) -> np.ndarray:
        return self._reduce_one(np.asarray(v, dtype=np.int64) % self.q)

    def contains(self, v) -> bool:
        return not self.residual(v).any()
