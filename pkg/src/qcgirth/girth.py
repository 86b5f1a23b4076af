"""Girth certification for parity-check matrices, three independent ways.

* an exact BFS oracle on the lifted Tanner graph (``bfs_girth``),
* the power-product certificate: girth(H) > 2g iff the degree-t product
  chains satisfy B_t triangle B_{t-2} = 0 for t = 2..g (``certify_girth_above``,
  ``girth_exact``),
* structural routes for two and three block rows: the two-row collapse whose
  girth is exactly half the girth of H, and the C_H certificate that settles
  girths 6 through 14 for three-row protographs.

The BFS oracle is deliberately independent of the algebra: it never looks at
exponents, only at the lifted 0/1 matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numba import njit

from .poly import (
    BinaryMatrix,
    ExponentPoly,
    PolyMatrix,
    gram_power,
    lift,
    poly_triangle_violations,
    triangle_matrix,
)

DEFAULT_CAP = 16

_DENSE_CERT_LIMIT = 4_000_000  # max rows*cols for the integer-matrix path


@dataclass(frozen=True)
class GirthCertificate:
    """Certified girth (or 'above cap') plus the method that produced it."""

    girth: int | None  # None means girth > cap
    cap: int
    method: str
    witness: object = None

    @property
    def above_cap(self) -> bool:
        return self.girth is None

    def meets(self, target: int) -> bool:
        """True when the certified girth is >= target (cap must allow it)."""
        if self.girth is None:
            if target > self.cap:
                raise ValueError(f"cap {self.cap} cannot decide girth >= {target}")
            return True
        return self.girth >= target

    def __str__(self) -> str:
        g = f"> {self.cap}" if self.girth is None else str(self.girth)
        return f"girth {g} ({self.method})"


@dataclass(frozen=True)
class CycleWitness:
    """A shortest cycle: node indices (checks then variables, interleaved,
    starting at a check) and, for circulant lifts, (row-block, col-block,
    exponent) steps, one per edge."""

    nodes: tuple[int, ...]
    steps: tuple[tuple[int, int, int], ...] | None = None

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class TriangleWitness:
    """First failing triangle comparison: the product degree t (girth 2t)
    and the cell (and exponent, for polynomial inputs) where it fired."""

    level: int
    row: int
    col: int
    exponent: int | None = None


class TannerGraph:
    """Bipartite adjacency of a parity-check matrix, in CSR form.

    Nodes are numbered checks first (0..m-1) then variables (m..m+n-1).
    """

    def __init__(self, m: BinaryMatrix):
        self.check_count = m.rows
        self.variable_count = m.cols
        r, c = m.positions()
        n_nodes = m.rows + m.cols
        deg = np.zeros(n_nodes, dtype=np.int64)
        deg[: m.rows] = m.row_degrees()
        deg[m.rows :] = m.col_degrees()
        indptr = np.zeros(n_nodes + 1, dtype=np.int64)
        np.cumsum(deg, out=indptr[1:])
        nbrs = np.empty(indptr[-1], dtype=np.int64)
        # support is sorted by (row, col): check adjacency comes out sorted
        nbrs[: len(r)] = m.rows + c
        order = np.lexsort((r, c))
        nbrs[len(r) :] = r[order]
        fill = np.cumsum(np.concatenate(([0], np.bincount(c[order], minlength=m.cols))))
        # variable blocks start after all check blocks
        assert indptr[m.rows] == len(r)
        self.indptr = indptr
        self.nbrs = nbrs
        _ = fill  # degrees already place variable neighbours contiguously
        if deg.sum() != 2 * m.nnz:
            raise AssertionError("degree sums must equal twice the edge count")

    @property
    def edge_count(self) -> int:
        return len(self.nbrs) // 2

    def neighbors(self, node: int) -> np.ndarray:
        return self.nbrs[self.indptr[node] : self.indptr[node + 1]]


@njit(cache=True)
def _scan_girth(indptr, nbrs, starts, cap):
    """Truncated BFS from each start; returns (best cycle length, its start).

    best = cap + 2 encodes 'no cycle of length <= cap'.  Starts are visited
    in order and neighbours in CSR order, so results are deterministic.
    """
    n_nodes = indptr.shape[0] - 1
    dist = np.empty(n_nodes, dtype=np.int64)
    parent = np.empty(n_nodes, dtype=np.int64)
    seen = np.full(n_nodes, -1, dtype=np.int64)
    queue = np.empty(n_nodes, dtype=np.int64)
    best = cap + 2
    best_start = -1
    for si in range(starts.shape[0]):
        if best <= 4:
            break
        s = starts[si]
        found = best
        queue[0] = s
        head, tail = 0, 1
        dist[s] = 0
        parent[s] = -1
        seen[s] = si
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u]
            if 2 * du >= found:
                break
            pu = parent[u]
            for ptr in range(indptr[u], indptr[u + 1]):
                w = nbrs[ptr]
                if w == pu:
                    continue
                if seen[w] == si:
                    cyc = du + dist[w] + 1
                    if cyc < found:
                        found = cyc
                else:
                    seen[w] = si
                    dist[w] = du + 1
                    parent[w] = u
                    queue[tail] = w
                    tail += 1
        if found < best:
            best = found
            best_start = s
    return best, best_start


def _witness_from_start(graph: TannerGraph, start: int, girth: int) -> tuple[int, ...]:
    """Re-run the BFS from one start and extract the first minimum cycle."""
    from collections import deque

    dist = {start: 0}
    parent = {start: -1}
    q = deque([start])
    while q:
        u = q.popleft()
        du = dist[u]
        if 2 * du >= girth:
            break
        for w in graph.neighbors(u):
            w = int(w)
            if w == parent[u]:
                continue
            if w in dist:
                if du + dist[w] + 1 == girth:
                    up, wp = [], []
                    x = u
                    while x != -1:
                        up.append(x)
                        x = parent[x]
                    x = w
                    while x != -1:
                        wp.append(x)
                        x = parent[x]
                    cycle = up[::-1] + wp  # start..u then w..start
                    return tuple(cycle[:-1])
            else:
                dist[w] = du + 1
                parent[w] = u
                q.append(w)
    raise AssertionError("scan reported a cycle the witness pass cannot find")


def _rotate_to_check(nodes: tuple[int, ...], n_checks: int) -> tuple[int, ...]:
    if nodes[0] < n_checks:
        return nodes
    return nodes[1:] + nodes[:1]


def _annotate_steps(nodes: tuple[int, ...], n_checks: int, block: int) -> tuple:
    steps = []
    k = len(nodes)
    for a in range(k):
        u, v = nodes[a], nodes[(a + 1) % k]
        if u >= n_checks:
            u, v = v, u
        chk, var = u, v - n_checks
        exponent = ((var % block) - (chk % block)) % block
        steps.append((chk // block, var // block, exponent))
    return tuple(steps)


def bfs_girth(m: BinaryMatrix, cap: int = DEFAULT_CAP, block: int | None = None) -> GirthCertificate:
    """Exact Tanner-graph girth up to ``cap`` by truncated BFS from each node.

    Returns the girth with a shortest-cycle witness, or 'above cap'.  When
    ``block`` (the circulant size) is given, the witness also carries
    (row-block, col-block, exponent) steps.
    """
    if cap < 4 or cap % 2:
        raise ValueError("cap must be an even integer >= 4")
    graph = TannerGraph(m)
    if m.nnz == 0:
        return GirthCertificate(None, cap, "bfs")
    # every cycle passes through a variable node, so those starts suffice
    starts = np.arange(m.rows, m.rows + m.cols, dtype=np.int64)
    best, best_start = _scan_girth(graph.indptr, graph.nbrs, starts, cap)
    if best > cap:
        return GirthCertificate(None, cap, "bfs")
    nodes = _rotate_to_check(_witness_from_start(graph, int(best_start), int(best)), m.rows)
    steps = _annotate_steps(nodes, m.rows, block) if block else None
    return GirthCertificate(int(best), cap, "bfs", CycleWitness(nodes, steps))


# ---------------------------------------------------------------------------
# power-product certificates
# ---------------------------------------------------------------------------


def certify_girth_above(h, two_g: int):
    """Check girth(H) > two_g via the product-chain triangle conditions.

    Returns (ok, witness); on failure the witness names the smallest failing
    degree t and the cell where the comparison fired.  Accepts a PolyMatrix
    (exact polynomial route) or a BinaryMatrix (integer-matrix route).
    """
    if two_g < 4 or two_g % 2:
        raise ValueError("two_g must be an even integer >= 4")
    g = two_g // 2
    if isinstance(h, PolyMatrix):
        return _certify_poly(h, g)
    if isinstance(h, BinaryMatrix):
        return _certify_binary(h, g)
    raise TypeError(f"expected PolyMatrix or BinaryMatrix, got {type(h)!r}")


def _certify_poly(h: PolyMatrix, g: int):
    if h.max_coeff() >= 2:
        for i, j, p in h.entries():
            if p.max_coeff >= 2:
                return False, TriangleWitness(1, i, j, max(p.terms, key=p.terms.get))
    gram = h @ h.transpose()
    b_prev2 = PolyMatrix.identity(h.rows, h.modulus)
    b_prev = h
    for t in range(2, g + 1):
        b_t = b_prev2 @ gram if t % 2 == 0 else b_prev @ h
        hits = poly_triangle_violations(b_t, b_prev2, limit=1)
        if hits:
            i, j, e = hits[0]
            return False, TriangleWitness(t, i, j, e)
        b_prev2, b_prev = b_prev, b_t
    return True, None


def _certify_binary(h: BinaryMatrix, g: int):
    if h.rows * h.cols > _DENSE_CERT_LIMIT:
        raise ValueError(
            "integer-matrix certification is limited to small matrices; "
            "use the polynomial route or bfs_girth for large lifts"
        )
    hd = h.to_dense()
    gram = hd @ hd.T
    b_prev2 = np.eye(h.rows, dtype=np.int64)
    b_prev = hd
    for t in range(2, g + 1):
        b_t = b_prev2 @ gram if t % 2 == 0 else b_prev @ hd
        if b_t.max() >= (1 << 62) // max(int(gram.max()), 1):
            raise OverflowError("product chain coefficients exceed the int64 guard")
        d = triangle_matrix(b_t, b_prev2)
        if d.any():
            i, j = map(int, np.argwhere(d)[0])
            return False, TriangleWitness(t, i, j)
        b_prev2, b_prev = b_prev, b_t
    return True, None


def girth_exact(h, cap: int = DEFAULT_CAP) -> GirthCertificate:
    """Exact girth (up to ``cap``) from the product-chain conditions.

    The smallest t with a triangle violation gives girth 2t; coefficient-2
    entries in H itself (overlapping permutations) give girth 2.
    """
    if cap < 4 or cap % 2:
        raise ValueError("cap must be an even integer >= 4")
    if isinstance(h, PolyMatrix) and h.max_coeff() >= 2:
        ok, wit = _certify_poly(h, 1)
        return GirthCertificate(2, cap, "power", wit)
    ok, wit = certify_girth_above(h, cap)
    if ok:
        return GirthCertificate(None, cap, "power")
    return GirthCertificate(2 * wit.level, cap, "power", wit)


# ---------------------------------------------------------------------------
# two-row collapse
# ---------------------------------------------------------------------------


def _block_size(rows: int, cols: int, block_rows: int) -> int:
    if rows % block_rows:
        raise ValueError(f"expected {block_rows} block rows, got {rows} total rows")
    m = rows // block_rows
    if cols % m:
        raise ValueError(f"column count {cols} is not a multiple of block size {m}")
    return m


def _require_permutation_block(b: PolyMatrix, where: str) -> None:
    grid = b.nonzero_grid()
    ok = (
        (grid.sum(axis=0) == 1).all()
        and (grid.sum(axis=1) == 1).all()
        and all(p.is_monomial() or p.is_zero for _, _, p in b.entries())
    )
    if not ok:
        raise ValueError(f"block {where} is not a single permutation")


def collapse_two_row(h: PolyMatrix) -> PolyMatrix:
    """Collapse a two-block-row matrix to the square sum of P_i^T Q_i.

    Each block entry must be a single permutation.  The Tanner graph of H
    has exactly twice the girth of the Tanner graph of the result.
    """
    m = _block_size(h.rows, h.cols, 2)
    n_v = h.cols // m
    acc = PolyMatrix.zeros(m, m, h.modulus)
    for i in range(n_v):
        p = h.block(0, i * m, m, m)
        q = h.block(m, i * m, m, m)
        _require_permutation_block(p, f"(0,{i})")
        _require_permutation_block(q, f"(1,{i})")
        acc = acc + (p.transpose() @ q)
    return acc


# ---------------------------------------------------------------------------
# three-row C_H structure
# ---------------------------------------------------------------------------


def build_ch(h: PolyMatrix) -> PolyMatrix:
    """The square difference structure of a three-block-row matrix.

    For H with identity first block row, H H^T = n_v I + C_H where C_H has
    zero diagonal blocks and off-diagonal blocks sum P_j^T, sum Q_j^T and
    sum P_j Q_j^T (with transposes mirrored).
    """
    m = _block_size(h.rows, h.cols, 3)
    n_v = h.cols // m
    ident = PolyMatrix.identity(m, h.modulus)
    for i in range(n_v):
        if h.block(0, i * m, m, m) != ident:
            raise ValueError("first block row must be all identity blocks")
    z = PolyMatrix.zeros(m, m, h.modulus)
    c12 = z
    c13 = z
    c23 = z
    for i in range(n_v):
        p = h.block(m, i * m, m, m)
        q = h.block(2 * m, i * m, m, m)
        c12 = c12 + p.transpose()
        c13 = c13 + q.transpose()
        c23 = c23 + (p @ q.transpose())
    return PolyMatrix.from_blocks(
        [
            [z, c12, c13],
            [c12.transpose(), z, c23],
            [c13.transpose(), c23.transpose(), z],
        ]
    )


# condition ladder: target girth -> levels of "girth > L" checks to conjoin
_CH_LEVELS = {6: (4,), 8: (4, 6), 10: (4, 6, 8), 12: (4, 6, 8, 10), 14: (4, 6, 8, 10, 12)}


def ch_certify(h: PolyMatrix, target_girth: int):
    """Certify girth(H) >= target for a three-block-row H via C_H products.

    Evaluates, cumulatively: C_H tri 0 = 0 (>4); C_H H tri H = 0 (>6);
    C_H^2 tri I = 0 (>8); C_H^2 H tri (H + C_H H) = 0 (>10); and
    C_H^3 tri (I + C_H + C_H^2) = 0 (>12).  Returns (ok, witness) where a
    witness carries the failing level and cell.
    """
    if target_girth not in _CH_LEVELS:
        raise ValueError(f"target girth must be one of {sorted(_CH_LEVELS)}")
    ch = build_ch(h)
    size = ch.rows
    ident = PolyMatrix.identity(size, h.modulus)
    zero_sq = PolyMatrix.zeros(size, size, h.modulus)
    cache: dict[str, PolyMatrix] = {}

    def need(name: str) -> PolyMatrix:
        if name not in cache:
            if name == "ch2":
                cache[name] = ch @ ch
            elif name == "ch3":
                cache[name] = need("ch2") @ ch
            elif name == "chh":
                cache[name] = ch @ h
            elif name == "ch2h":
                cache[name] = need("ch2") @ h
        return cache[name]

    conditions = {
        4: lambda: (ch, zero_sq),
        6: lambda: (need("chh"), h),
        8: lambda: (need("ch2"), ident),
        10: lambda: (need("ch2h"), h + need("chh")),
        12: lambda: (need("ch3"), ident + ch + need("ch2")),
    }
    for level in _CH_LEVELS[target_girth]:
        a, b = conditions[level]()
        hits = poly_triangle_violations(a, b, limit=1)
        if hits:
            i, j, e = hits[0]
            return False, TriangleWitness(level, i, j, e)
    return True, None


def ch_girth_bracket(h: PolyMatrix) -> int | None:
    """Exact girth from the C_H ladder when it is <= 12, else None (>= 14)."""
    if h.max_coeff() >= 2:
        return 2
    for level in (4, 6, 8, 10, 12):
        ok, _ = ch_certify(h, level + 2)
        if not ok:
            return level
    return None


# ---------------------------------------------------------------------------
# protograph walk test
# ---------------------------------------------------------------------------


def walk_has_lifted_cycle(
    blocks: Sequence[PolyMatrix], positions: Sequence[tuple[int, int]] | None = None
) -> bool:
    """Whether a protograph walk of 2l permutation blocks lifts to a 2l-cycle.

    Blocks alternate column-sharing and row-sharing adjacencies; the product
    P0 P1^T P2 P3^T ... has a fixed point iff the lifted cycle exists.  With
    ``positions`` given ((row, col) per block), the walk structure is
    validated; without them, equal matrices at a column-sharing pair are
    conservatively rejected since an identical adjacent pair would traverse
    one edge twice.
    """
    k = len(blocks)
    if k < 4 or k % 2:
        raise ValueError("need an even number (>= 4) of blocks")
    for idx, b in enumerate(blocks):
        _require_permutation_block(b, f"#{idx}")
    if positions is not None:
        if len(positions) != k:
            raise ValueError("positions must match blocks")
        for a in range(k):
            (ra, ca), (rb, cb) = positions[a], positions[(a + 1) % k]
            if (ra, ca) == (rb, cb):
                raise ValueError(f"adjacent equal permutations at step {a}")
            if a % 2 == 0:  # column-sharing pair
                if ca != cb or ra == rb:
                    raise ValueError(f"walk steps {a},{a+1} must share a column")
            else:  # row-sharing pair (wrap included)
                if ra != rb or ca == cb:
                    raise ValueError(f"walk steps {a},{a+1} must share a row")
    else:
        for a in range(0, k, 2):
            if blocks[a] == blocks[a + 1]:
                raise ValueError(f"adjacent equal permutations at step {a}")
    prod = blocks[0]
    for a in range(1, k):
        prod = prod @ (blocks[a].transpose() if a % 2 else blocks[a])
    total = prod + PolyMatrix.identity(prod.rows, prod.modulus)
    return bool(poly_triangle_violations(total, PolyMatrix.zeros(prod.rows, prod.cols, prod.modulus), limit=1))


# ---------------------------------------------------------------------------
# cross-checked exact girth of a lift
# ---------------------------------------------------------------------------


def certified_lift_girth(h: PolyMatrix, modulus: int, cap: int = DEFAULT_CAP) -> GirthCertificate:
    """Girth of lift(H, N) with the algebraic and BFS routes cross-checked."""
    hm = h if h.modulus == modulus else h.reduce_mod(modulus)
    alg = girth_exact(hm, cap)
    oracle = bfs_girth(lift(hm, modulus), cap, block=modulus)
    if alg.girth != oracle.girth:
        raise AssertionError(
            f"certificate disagreement: power route says {alg}, bfs says {oracle}"
        )
    return GirthCertificate(oracle.girth, cap, "power+bfs", oracle.witness)
