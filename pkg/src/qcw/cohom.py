"""Mod-q cohomology of explicit finite groups in degrees 1 and 2.

Degree 1 is Hom(G, Z/q), solved from the homomorphism conditions on a
generating set.  Degree 2 uses normalized bar cochains: a cochain is a
function f : (G \\ 1) x (G \\ 1) -> Z/q (normalization f(1, .) = f(., 1) = 0
is built into the indexing), the cocycle identity

    f(g, h) + f(gh, k) = f(h, k) + f(g, hk)

is imposed for all non-identity triples, and coboundaries are spanned by
(d u)(g, h) = u(g) - u(gh) + u(h) over normalized 1-cochains u.

The (|G|-1)^3 cocycle equations are extremely redundant; they are streamed
through a row-space accumulator in a fixed pseudorandom order and the run
stops once the accumulated kernel verifiably satisfies *every* equation
(the verification is vectorized and cheap), so the shortcut never affects
correctness, only time.

For q = p^d with d > 1 the spaces are Z/q-modules rather than vector
spaces; "dimension" throughout means the minimal number of generators
(the length of the cyclic-invariant list), which coincides with the F_p
dimension when q = p.

Cup products of degree-1 classes use (a cup b)(g, h) = a(g) * b(h) with no
sign.  The decomposable part of H^2 is the span of these products modulo
coboundaries; ``GroupCohomology.dec_module`` computes it without solving
for all of H^2 (only coboundaries are needed), keeping large groups within
reach of the degree <= 2 comparisons.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, NotAHomomorphismError, QcwError, SizeLimitError
from .qcentral import FiniteGroupTable
from .zqlinalg import QuotientModule, RowSpace, kernel_with_orders, prime_power, solve_mod

DEFAULT_H2_BOUND = 64
_EQUATION_SHUFFLE_SEED = 0x5EED

__all__ = [
    "CohomologySpace",
    "PairingTensor",
    "TableHom",
    "GroupCohomology",
    "h1",
    "h2",
    "cup",
    "decomposable_h2",
    "inflation",
    "induced_h_maps",
    "pairing_gram",
    "pairings_equivalent",
    "cohomology_record",
]


@dataclass
class CohomologySpace:
    """Basis of H^degree(G, Z/q) with cyclic orders of the basis classes."""

    degree: int
    modulus: int
    invariants: list[int]
    basis: list[np.ndarray]  # degree 1: length-|G| arrays; degree 2: |G| x |G|

    @property
    def dimension(self) -> int:
        return len(self.invariants)

    def basis_support_size(self) -> int:
        return int(sum(np.count_nonzero(b) for b in self.basis))


@dataclass
class PairingTensor:
    """Bilinear map coordinates: values[i, j] in the target module."""

    q: int
    m: int
    target_orders: tuple[int, ...]
    values: np.ndarray  # shape (m, m, len(target_orders))

    @property
    def target_dim(self) -> int:
        return len(self.target_orders)

    def to_record(self) -> dict:
        return {
            "m": self.m,
            "target_dim": self.target_dim,
            "target_orders": list(self.target_orders),
            "values": self.values.tolist(),
        }


@dataclass
class TableHom:
    """A homomorphism of group tables, as an index mapping array."""

    source: FiniteGroupTable
    target: FiniteGroupTable
    mapping: np.ndarray

    def __post_init__(self):
        self.mapping = np.asarray(self.mapping, dtype=np.int64)
        if self.mapping.shape != (self.source.order,):
            raise DimensionMismatchError("mapping length must equal the source order")
        if self.mapping[self.source.identity] != self.target.identity:
            raise NotAHomomorphismError("mapping does not preserve the identity")
        ok = (
            self.mapping[self.source.mult]
            == self.target.mult[np.ix_(self.mapping, self.mapping)]
        ).all()
        if not ok:
            raise NotAHomomorphismError("mapping is not multiplicative")

    def is_surjective(self) -> bool:
        return len(set(map(int, self.mapping))) == self.target.order

    def compose(self, earlier: "TableHom") -> "TableHom":
        """self o earlier (apply ``earlier`` first)."""
        if earlier.target is not self.source and earlier.target.order != self.source.order:
            raise DimensionMismatchError("homomorphisms do not compose")
        return TableHom(source=earlier.source, target=self.target, mapping=self.mapping[earlier.mapping])


class GroupCohomology:
    """Cached degree <= 2 cohomology data of one (table, q) pair."""

    def __init__(self, table: FiniteGroupTable, q: int, h2_bound: int = DEFAULT_H2_BOUND):
        prime_power(q)
        self.t = table
        self.q = q
        self.h2_bound = h2_bound
        n = table.order
        self.elems = np.array([x for x in range(n) if x != table.identity], dtype=np.int64)
        pos = np.full(n, -1, dtype=np.int64)
        pos[self.elems] = np.arange(n - 1)
        self.pos = pos
        self.width = (n - 1) * (n - 1)
        self._h1: CohomologySpace | None = None
        self._b2: np.ndarray | None = None
        self._z2: list[tuple[np.ndarray, int]] | None = None
        self._h2_module: QuotientModule | None = None
        self._dec_module: QuotientModule | None = None

    # -- degree 1 -----------------------------------------------------------

    def h1_space(self) -> CohomologySpace:
        if self._h1 is None:
            t, q = self.t, self.q
            n = t.order
            gens = list(t.generators) if t.generators else []
            if n > 1 and not gens:
                raise QcwError("table lists no generators")
            rows = []
            # f(x * g) = f(x) + f(g) for every x and every generator g
            for g in gens:
                for x in range(n):
                    row = np.zeros(n, dtype=np.int64)
                    row[x] += 1
                    row[g] += 1
                    row[t.mult[x, g]] -= 1
                    rows.append(np.delete(row % q, t.identity))
            if rows:
                kern = kernel_with_orders(np.array(rows), q)
            else:
                kern = []
            basis, invariants = [], []
            for vec, order in kern:
                full = np.zeros(n, dtype=np.int64)
                full[self.elems] = vec
                basis.append(full)
                invariants.append(order)
            self._h1 = CohomologySpace(degree=1, modulus=q, invariants=invariants, basis=basis)
        return self._h1

    # -- normalized 2-cochain plumbing ---------------------------------------

    def flat_of_matrix(self, F: np.ndarray) -> np.ndarray:
        return F[np.ix_(self.elems, self.elems)].reshape(self.width) % self.q

    def matrix_of_flat(self, v: np.ndarray) -> np.ndarray:
        n = self.t.order
        F = np.zeros((n, n), dtype=np.int64)
        F[np.ix_(self.elems, self.elems)] = np.asarray(v, dtype=np.int64).reshape(
            n - 1, n - 1
        ) % self.q
        return F

    def is_cocycle_matrix(self, F: np.ndarray) -> bool:
        m, q = self.t.mult, self.q
        n = self.t.order
        lhs = F[:, :, None] + F[m, :]  # F[g, h] + F[gh, k]
        rhs = F[None, :, :] + F[np.arange(n)[:, None, None], m[None, :, :]]
        return bool(((lhs - rhs) % q == 0).all())

    def coboundary_rows(self) -> np.ndarray:
        """Rows spanning B^2: d(u_x) for the point-mass 1-cochains u_x."""
        if self._b2 is None:
            t, q, n = self.t, self.q, self.t.order
            rows = np.zeros((n - 1, self.width), dtype=np.int64)
            for k, x in enumerate(self.elems):
                F = np.zeros((n, n), dtype=np.int64)
                F[x, :] += 1
                F[:, x] += 1
                F[t.mult == x] -= 1
                rows[k] = self.flat_of_matrix(F)
            self._b2 = rows % q
        return self._b2

    def coboundary_of(self, u: np.ndarray) -> np.ndarray:
        """(d u)(g, h) = u(g) - u(gh) + u(h), as a full matrix."""
        t = self.t
        F = u[:, None] + u[None, :] - u[t.mult]
        F = F % self.q
        F[t.identity, :] = 0
        F[:, t.identity] = 0
        return F

    # -- degree 2 -------------------------------------------------------------

    def _equation_batches(self):
        """Cocycle equation rows, batched, in a fixed pseudorandom order."""
        t, q = self.t, self.q
        n = t.order
        total = (n - 1) ** 3
        rng = np.random.default_rng(_EQUATION_SHUFFLE_SEED)
        order = rng.permutation(total)
        size = 512
        start = 0
        while start < total:
            chunk = order[start : start + size]
            start += size
            size = min(size * 2, 8192)
            gi, rest = np.divmod(chunk, (n - 1) * (n - 1))
            hi, ki = np.divmod(rest, n - 1)
            g, h, k = self.elems[gi], self.elems[hi], self.elems[ki]
            rows = np.zeros((len(chunk), self.width), dtype=np.int64)
            idx = np.arange(len(chunk))
            pos = self.pos
            w = n - 1

            def put(a, b, sign):
                alive = (a != t.identity) & (b != t.identity)
                np.add.at(rows, (idx[alive], pos[a[alive]] * w + pos[b[alive]]), sign)

            put(g, h, 1)
            put(t.mult[g, h], k, 1)
            put(h, k, -1)
            put(g, t.mult[h, k], -1)
            yield rows % q

    def _verify_kernel(self, vectors) -> bool:
        return all(self.is_cocycle_matrix(self.matrix_of_flat(v)) for v in vectors)

    def z2_generators(self) -> list[tuple[np.ndarray, int]]:
        """Independent generators (vector, order) of the cocycle module Z^2."""
        if self._z2 is None:
            n = self.t.order
            if n > self.h2_bound:
                raise SizeLimitError(
                    f"group order {n} exceeds the degree-2 bound {self.h2_bound}"
                )
            if n == 1:
                self._z2 = []
                return self._z2
            rs = RowSpace(self.width, self.q)
            quiet = 0
            solved = None
            for rows in self._equation_batches():
                grew = rs.add_rows(rows)
                quiet = quiet + 1 if grew == 0 else 0
                if quiet >= 2:
                    candidate = self._kernel_of_rowspace(rs)
                    if self._verify_kernel(v for v, _ in candidate):
                        solved = candidate
                        break
                    quiet = 0
            if solved is None:
                solved = self._kernel_of_rowspace(rs)
                if not self._verify_kernel(v for v, _ in solved):
                    raise QcwError("internal error: cocycle solver produced a non-cocycle")
            self._z2 = solved
        return self._z2

    def _kernel_of_rowspace(self, rs: RowSpace) -> list[tuple[np.ndarray, int]]:
        if rs.nrows == 0:
            eye = np.eye(self.width, dtype=np.int64)
            return [(eye[i], self.q) for i in range(self.width)]
        if all(e == 0 for e in rs._exps):
            # unit-pivot RREF: read the kernel off the free columns
            piv_cols = list(rs._cols)
            piv_set = set(piv_cols)
            rows = rs.rows_matrix()
            out = []
            for j in range(self.width):
                if j in piv_set:
                    continue
                v = np.zeros(self.width, dtype=np.int64)
                v[j] = 1
                for r_idx, c in enumerate(piv_cols):
                    v[c] = (-rows[r_idx, j]) % self.q
                out.append((v, self.q))
            return out
        return kernel_with_orders(rs.rows_matrix(), self.q)

    def h2_module(self) -> QuotientModule:
        if self._h2_module is None:
            gens = [v for v, _ in self.z2_generators()]
            self._h2_module = QuotientModule(gens, self.coboundary_rows(), self.width, self.q)
        return self._h2_module

    def h2_space(self) -> CohomologySpace:
        mod = self.h2_module()
        basis = [self.matrix_of_flat(row) for row in mod.basis]
        return CohomologySpace(degree=2, modulus=self.q, invariants=list(mod.orders), basis=basis)

    # -- cup products and the decomposable part -------------------------------

    def cup_matrix(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """(a cup b)(g, h) = a(g) b(h); a normalized 2-cocycle for homs a, b."""
        F = (np.asarray(a)[:, None] * np.asarray(b)[None, :]) % self.q
        F[self.t.identity, :] = 0
        F[:, self.t.identity] = 0
        return F

    def cup_flats(self) -> list[np.ndarray]:
        """Flattened cup products of all ordered pairs from the H^1 basis."""
        basis = self.h1_space().basis
        return [
            self.flat_of_matrix(self.cup_matrix(a, b))
            for a in basis
            for b in basis
        ]

    def dec_module(self) -> QuotientModule:
        """Span of cup products of H^1 classes, modulo coboundaries.

        Needs only B^2, not the full cocycle solve, so it works above the
        degree-2 bound.
        """
        if self._dec_module is None:
            self._dec_module = QuotientModule(
                self.cup_flats(), self.coboundary_rows(), self.width, self.q
            )
        return self._dec_module

    def dec_space(self) -> CohomologySpace:
        mod = self.dec_module()
        basis = [self.matrix_of_flat(row) for row in mod.basis]
        return CohomologySpace(degree=2, modulus=self.q, invariants=list(mod.orders), basis=basis)

    def class_coords(self, cocycle_matrix: np.ndarray, module: QuotientModule) -> np.ndarray:
        return module.coords(self.flat_of_matrix(cocycle_matrix))

    def is_coboundary(self, cocycle_matrix: np.ndarray) -> bool:
        b2 = self.coboundary_rows()
        return solve_mod(b2.T, self.flat_of_matrix(cocycle_matrix), self.q) is not None

    def pairing(self) -> PairingTensor:
        """Cup tensor of the H^1 basis in decomposable-H^2 coordinates."""
        basis = self.h1_space().basis
        mod = self.dec_module()
        m = len(basis)
        if m == 0:
            return PairingTensor(
                q=self.q, m=0, target_orders=tuple(mod.orders),
                values=np.zeros((0, 0, mod.rank), dtype=np.int64),
            )
        flats = self.cup_flats()
        coords = mod.coords_batch(np.array(flats, dtype=np.int64))
        vals = coords.reshape(m, m, mod.rank)
        return PairingTensor(q=self.q, m=m, target_orders=tuple(mod.orders), values=vals)


# ---------------------------------------------------------------------------
# operation-level API


def h1(G: FiniteGroupTable, q: int) -> CohomologySpace:
    """H^1(G, Z/q) = Hom(G, Z/q), with representative homomorphisms."""
    return GroupCohomology(G, q).h1_space()


def h2(G: FiniteGroupTable, q: int, h2_bound: int = DEFAULT_H2_BOUND) -> CohomologySpace:
    """H^2(G, Z/q) by the normalized bar cocycle solve."""
    return GroupCohomology(G, q, h2_bound=h2_bound).h2_space()


def cup(a: np.ndarray, b: np.ndarray, G: FiniteGroupTable, q: int) -> np.ndarray:
    """Representative of the cup product of two degree-1 classes."""
    ctx = GroupCohomology(G, q)
    if len(a) != G.order or len(b) != G.order:
        raise DimensionMismatchError("degree-1 classes must be functions on G")
    return ctx.cup_matrix(np.asarray(a, dtype=np.int64) % q, np.asarray(b, dtype=np.int64) % q)


@dataclass
class DecomposableH2:
    space: CohomologySpace
    inclusion: np.ndarray  # columns: coordinates of dec basis in the H^2 basis


def decomposable_h2(G: FiniteGroupTable, q: int, h2_bound: int = DEFAULT_H2_BOUND) -> DecomposableH2:
    """The decomposable subspace of H^2 and its inclusion matrix into H^2."""
    ctx = GroupCohomology(G, q, h2_bound=h2_bound)
    dec = ctx.dec_space()
    h2mod = ctx.h2_module()
    if dec.basis:
        cols = h2mod.coords_batch(np.array([ctx.flat_of_matrix(b) for b in dec.basis]))
        inclusion = cols.T
    else:
        inclusion = np.zeros((h2mod.rank, 0), dtype=np.int64)
    return DecomposableH2(space=dec, inclusion=inclusion)


def inflation(pi: TableHom, cls: np.ndarray) -> np.ndarray:
    """Pullback of a class on the target along a surjective quotient map."""
    if not pi.is_surjective():
        raise NotAHomomorphismError("inflation requires a surjective quotient map")
    cls = np.asarray(cls, dtype=np.int64)
    if cls.shape == (pi.target.order,):
        return cls[pi.mapping]
    if cls.shape == (pi.target.order, pi.target.order):
        return cls[np.ix_(pi.mapping, pi.mapping)]
    raise DimensionMismatchError("class shape does not match the target group")


@dataclass
class InducedMaps:
    h1_matrix: np.ndarray
    dec_matrix: np.ndarray
    h1_bijective: bool
    dec_bijective: bool


def _pullback_coords(
    src_ctx: GroupCohomology, vectors: list[np.ndarray], module: QuotientModule
) -> list[np.ndarray]:
    return [module.coords(src_ctx.flat_of_matrix(v)) for v in vectors]


def induced_h_maps(pi: TableHom, q: int, h2_bound: int = DEFAULT_H2_BOUND) -> InducedMaps:
    """Contravariant matrices of pi^* on H^1 and on decomposable H^2."""
    src = GroupCohomology(pi.source, q, h2_bound=h2_bound)
    tgt = GroupCohomology(pi.target, q, h2_bound=h2_bound)
    # H^1: pull back each target basis hom and express in the source basis
    src_h1 = src.h1_space()
    tgt_h1 = tgt.h1_space()
    cols = []
    if src_h1.dimension:
        stack = np.array([b for b in src_h1.basis], dtype=np.int64).T  # |G| x m
        for b in tgt_h1.basis:
            pulled = b[pi.mapping]
            x = solve_mod(stack, pulled, q)
            if x is None:
                raise QcwError("internal error: pullback hom not in the source H^1")
            cols.append(x % q)
        m1 = np.stack(cols, axis=1) if cols else np.zeros((src_h1.dimension, 0), dtype=np.int64)
    else:
        m1 = np.zeros((0, tgt_h1.dimension), dtype=np.int64)
    h1_bij = _is_module_iso(m1, src_h1.invariants, tgt_h1.invariants, q)
    # decomposable H^2
    src_dec = src.dec_module()
    tgt_dec = tgt.dec_space()
    if tgt_dec.basis:
        pulled = [
            src.flat_of_matrix(b[np.ix_(pi.mapping, pi.mapping)]) for b in tgt_dec.basis
        ]
        m2 = src_dec.coords_batch(np.array(pulled)).T
    else:
        m2 = np.zeros((src_dec.rank, 0), dtype=np.int64)
    dec_bij = _is_module_iso(m2, list(src_dec.orders), list(tgt_dec.invariants), q)
    return InducedMaps(h1_matrix=m1, dec_matrix=m2, h1_bijective=h1_bij, dec_bijective=dec_bij)


def _is_module_iso(matrix: np.ndarray, src_orders, tgt_orders, q: int) -> bool:
    """Does the matrix (columns = images of target gens) hit all of the source?"""
    if sorted(src_orders) != sorted(tgt_orders):
        return False
    if not src_orders:
        return True
    # surjective onto a finite module of the same order == bijective
    size = math.prod(src_orders)
    span = {tuple([0] * len(src_orders))}
    frontier = [np.zeros(len(src_orders), dtype=np.int64)]
    cols = [matrix[:, j] for j in range(matrix.shape[1])]
    while frontier:
        v = frontier.pop()
        for c in cols:
            wv = v + c
            wv = np.array([x % o for x, o in zip(wv, src_orders)], dtype=np.int64)
            key = tuple(int(x) for x in wv)
            if key not in span:
                span.add(key)
                frontier.append(wv)
    return len(span) == size


def pairing_gram(G: FiniteGroupTable, q: int) -> PairingTensor:
    """Cup-product tensor of an H^1 basis in decomposable-H^2 coordinates."""
    return GroupCohomology(G, q).pairing()


# ---------------------------------------------------------------------------
# equivalence of pairing tensors


def _det_mod(M: np.ndarray, q: int) -> int:
    m = M.shape[0]
    total = 0
    for perm in itertools.permutations(range(m)):
        sign = 1
        seen = list(perm)
        # permutation sign by counting inversions
        inv = sum(1 for i in range(m) for j in range(i + 1, m) if seen[i] > seen[j])
        sign = -1 if inv % 2 else 1
        term = sign
        for i in range(m):
            term *= int(M[i, perm[i]])
        total += term
    return total % q


def _invertible_matrices(m: int, q: int, cap: int):
    p, _ = prime_power(q)
    count = q ** (m * m)
    if count > cap:
        raise SizeLimitError(f"pairing equivalence search space {count} over bound")
    for entries in itertools.product(range(q), repeat=m * m):
        M = np.array(entries, dtype=np.int64).reshape(m, m)
        if _det_mod(M, q) % p != 0:
            yield M


def _module_automorphisms(orders: tuple[int, ...], q: int, cap: int) -> list[np.ndarray]:
    t = len(orders)
    if t == 0:
        return [np.zeros((0, 0), dtype=np.int64)]
    choices = []
    for i in range(t):
        for j in range(t):
            g = math.gcd(orders[i], orders[j])
            step = orders[i] // g
            choices.append([k * step for k in range(g)])
    total = 1
    for ch in choices:
        total *= len(ch)
        if total > cap:
            raise SizeLimitError("target automorphism search space over bound")
    elements = list(itertools.product(*[range(o) for o in orders]))
    out = []
    for combo in itertools.product(*choices):
        Q = np.array(combo, dtype=np.int64).reshape(t, t)
        images = set()
        ok = True
        for e in elements:
            img = tuple(
                int((Q[i] @ np.array(e)) % orders[i]) for i in range(t)
            )
            if img in images:
                ok = False
                break
            images.add(img)
        if ok:
            out.append(Q)
    return out


def _canonical_target(tensor: PairingTensor) -> PairingTensor:
    order = np.argsort(np.array(tensor.target_orders), kind="stable")
    return PairingTensor(
        q=tensor.q,
        m=tensor.m,
        target_orders=tuple(tensor.target_orders[i] for i in order),
        values=tensor.values[:, :, order] if tensor.target_dim else tensor.values,
    )


def _value_span_invariants(T: PairingTensor) -> list[int]:
    t = T.target_dim
    if t == 0:
        return []
    scale = np.array([T.q // o for o in T.target_orders], dtype=np.int64)
    rows = (T.values.reshape(T.m * T.m, t) * scale) % T.q
    return sorted(QuotientModule(rows, [], t, T.q).orders)


def pairings_equivalent(T1: PairingTensor, T2: PairingTensor, search_cap: int = 2_000_000) -> bool:
    """Equality of tensors up to invertible changes of source and target bases.

    Exhaustive over source bases (m <= 4 enforced).  The target transform is
    found by a linear solve when the tensor values generate a free target
    (the case for all tensors produced in-repo); otherwise invertible target
    transforms are enumerated.
    """
    if T1.q != T2.q:
        raise DimensionMismatchError("tensors have different moduli")
    if T1.m != T2.m:
        return False
    if sorted(T1.target_orders) != sorted(T2.target_orders):
        return False
    if T1.m > 4:
        raise SizeLimitError("source dimension above the search bound 4")
    if _value_span_invariants(T1) != _value_span_invariants(T2):
        return False
    q, m = T1.q, T1.m
    T1, T2 = _canonical_target(T1), _canonical_target(T2)
    t = T1.target_dim
    if m == 0 or t == 0:
        return True
    orders = T1.target_orders
    p, _ = prime_power(q)
    full_span = len(_value_span_invariants(T1)) == t
    free_target = all(o == q for o in orders)
    solve_path = free_target and full_span
    if solve_path:
        autos = None
    elif free_target:
        autos = list(_invertible_matrices(t, q, search_cap))
    else:
        autos = _module_automorphisms(orders, q, search_cap)
    B = T2.values.reshape(m * m, t).T % q
    for P in _invertible_matrices(m, q, search_cap):
        S = np.einsum("ix,jy,ijt->xyt", P, P, T1.values) % q
        for k, o in enumerate(orders):
            S[:, :, k] %= o
        A = S.reshape(m * m, t).T % q
        if solve_path:
            rows = []
            ok = True
            for r in range(t):
                x = solve_mod(A.T, B[r], q)
                if x is None:
                    ok = False
                    break
                rows.append(x % q)
            if not ok:
                continue
            Q = np.stack(rows)
            # full span makes the solution unique, so invertibility decides
            if _det_mod(Q, q) % p == 0:
                continue
            if ((Q @ A) % q == B % q).all():
                return True
        else:
            for Q in autos:
                QA = Q @ A
                good = True
                for k, o in enumerate(orders):
                    if ((QA[k] - B[k]) % o != 0).any():
                        good = False
                        break
                if good:
                    return True
    return False


def cohomology_record(space: CohomologySpace) -> dict:
    return {
        "degree": space.degree,
        "modulus": space.modulus,
        "dimension": space.dimension,
        "invariants": list(space.invariants),
        "basis_support_size": space.basis_support_size(),
    }
