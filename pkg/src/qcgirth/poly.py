"""Exact arithmetic on exponent polynomials and matrices of them.

An exponent polynomial is a Laurent polynomial with non-negative integer
coefficients, stored as a map exponent -> coefficient.  A monomial x^r stands
for the N x N circulant permutation matrix obtained by shifting the identity
left by r positions (support {(a, a+r mod N)}), so a polynomial with all
coefficients equal to one is a superposition of non-overlapping circulants.
With no modulus set, exponents live in Z ("large N" semantics); with a
modulus N they are normalized into [0, N).

All values are immutable after construction and safe to share.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

# Above this coefficient bound a product falls back to exact object arithmetic
# instead of int64 vectors.
_INT64_SAFE = 1 << 62

# Dense length-N coefficient vectors are used for products when the modulus is
# at most this; beyond it (unused in practice here) products stay term-based.
DENSE_MODULUS_LIMIT = 4096


def _as_modulus(n) -> int | None:
    if n is None:
        return None
    n = int(n)
    if n <= 0:
        raise ValueError(f"modulus must be positive, got {n}")
    return n


class ExponentPoly:
    """Immutable Laurent polynomial with non-negative integer coefficients."""

    __slots__ = ("_terms", "_modulus", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = (), modulus=None):
        modulus = _as_modulus(modulus)
        items = terms.items() if isinstance(terms, Mapping) else terms
        merged: dict[int, int] = {}
        for e, c in items:
            c = int(c)
            if c == 0:
                continue
            if c < 0:
                raise ValueError(f"coefficients must be non-negative, got {c} at exponent {e}")
            e = int(e) % modulus if modulus is not None else int(e)
            merged[e] = merged.get(e, 0) + c
        self._terms = merged
        self._modulus = modulus
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, modulus=None) -> "ExponentPoly":
        return cls((), modulus)

    @classmethod
    def one(cls, modulus=None) -> "ExponentPoly":
        return cls({0: 1}, modulus)

    @classmethod
    def monomial(cls, exponent: int, modulus=None, coeff: int = 1) -> "ExponentPoly":
        return cls({int(exponent): coeff}, modulus)

    @classmethod
    def from_exponents(cls, exponents: Iterable[int], modulus=None) -> "ExponentPoly":
        """Sum of monomials, one per listed exponent (repeats accumulate)."""
        return cls(((int(e), 1) for e in exponents), modulus)

    # -- inspection ---------------------------------------------------------

    @property
    def modulus(self) -> int | None:
        return self._modulus

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def mass(self) -> int:
        """Sum of all coefficients."""
        return sum(self._terms.values())

    @property
    def max_coeff(self) -> int:
        return max(self._terms.values(), default=0)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self._terms)

    def coeff(self, exponent: int) -> int:
        if self._modulus is not None:
            exponent = exponent % self._modulus
        return self._terms.get(exponent, 0)

    def is_permutation_sum(self) -> bool:
        """True when every coefficient is 1 (non-overlapping circulants)."""
        return all(c == 1 for c in self._terms.values())

    def is_monomial(self) -> bool:
        return len(self._terms) == 1 and self.max_coeff == 1

    # -- arithmetic ---------------------------------------------------------

    def _check_compatible(self, other: "ExponentPoly") -> None:
        if self._modulus != other._modulus:
            raise ValueError(f"modulus mismatch: {self._modulus} vs {other._modulus}")

    def __add__(self, other: "ExponentPoly") -> "ExponentPoly":
        self._check_compatible(other)
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, 0) + c
        return ExponentPoly(terms, self._modulus)

    def __mul__(self, other: "ExponentPoly") -> "ExponentPoly":
        """Convolution of coefficient sequences, exact integer coefficients."""
        self._check_compatible(other)
        if len(self._terms) > len(other._terms):
            self, other = other, self
        out: dict[int, int] = {}
        n = self._modulus
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                e = ea + eb if n is None else (ea + eb) % n
                out[e] = out.get(e, 0) + ca * cb
        return ExponentPoly(out, n)

    def transpose(self) -> "ExponentPoly":
        """Circulant transpose: x^r -> x^-r."""
        return ExponentPoly({-e: c for e, c in self._terms.items()}, self._modulus)

    def reduce_mod(self, modulus: int) -> "ExponentPoly":
        """Reduce exponents modulo a (new) modulus."""
        return ExponentPoly(self._terms, modulus)

    # -- dense helpers (modulus set) ----------------------------------------

    def dense(self) -> np.ndarray:
        """Length-N int64 coefficient vector (requires a modulus)."""
        if self._modulus is None:
            raise ValueError("dense vector requires a modulus")
        v = np.zeros(self._modulus, dtype=np.int64)
        for e, c in self._terms.items():
            v[e] = c
        return v

    @classmethod
    def from_dense(cls, vec: np.ndarray, modulus: int) -> "ExponentPoly":
        (nz,) = np.nonzero(vec)
        return cls({int(e): int(vec[e]) for e in nz}, modulus)

    # -- dunder plumbing ----------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExponentPoly):
            return NotImplemented
        return self._modulus == other._modulus and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._modulus, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e in sorted(self._terms):
            c = self._terms[e]
            if e == 0:
                parts.append(str(c))
            else:
                base = "x" if e == 1 else f"x^{e}"
                parts.append(base if c == 1 else f"{c}{base}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"ExponentPoly({self._terms!r}, modulus={self._modulus})"


def parse_poly(text: str, modulus=None) -> ExponentPoly:
    """Parse strings like "1 + x + 2x^3" or "x^-6" into a polynomial."""
    text = text.strip()
    if text in ("0", "", "-", "."):
        return ExponentPoly.zero(modulus)
    terms: list[tuple[int, int]] = []
    for raw in text.split("+"):
        tok = raw.strip().replace(" ", "")
        if not tok:
            raise ValueError(f"empty term in polynomial {text!r}")
        if "x" not in tok:
            terms.append((0, int(tok)))
            continue
        coeff_txt, _, rest = tok.partition("x")
        coeff = int(coeff_txt) if coeff_txt else 1
        if rest == "":
            exp = 1
        elif rest.startswith("^"):
            exp = int(rest[1:])
        else:
            raise ValueError(f"cannot parse term {tok!r}")
        terms.append((exp, coeff))
    return ExponentPoly(terms, modulus)


# ---------------------------------------------------------------------------
# triangle operator
# ---------------------------------------------------------------------------


def triangle(e: int, f: int) -> int:
    """Entry operator: 1 iff e >= 2 and f == 0, else 0."""
    return 1 if e >= 2 and f == 0 else 0


def triangle_matrix(e_mat, f_mat) -> np.ndarray:
    """Entry-wise triangle of two equal-shaped integer matrices."""
    e = np.asarray(e_mat)
    f = np.asarray(f_mat)
    if e.shape != f.shape:
        raise ValueError(f"shape mismatch: {e.shape} vs {f.shape}")
    return ((e >= 2) & (f == 0)).astype(np.int64)


# ---------------------------------------------------------------------------
# matrices of polynomials
# ---------------------------------------------------------------------------


class PolyMatrix:
    """Immutable grid of ExponentPoly values sharing one modulus."""

    __slots__ = ("_entries", "_modulus", "rows", "cols", "_dense_cache")

    def __init__(self, entries: Sequence[Sequence[ExponentPoly]], modulus=None):
        modulus = _as_modulus(modulus)
        rows = len(entries)
        if rows == 0:
            raise ValueError("matrix needs at least one row")
        cols = len(entries[0])
        grid = np.empty((rows, cols), dtype=object)
        for i, row in enumerate(entries):
            if len(row) != cols:
                raise ValueError("ragged rows")
            for j, p in enumerate(row):
                if not isinstance(p, ExponentPoly):
                    raise TypeError(f"entry ({i},{j}) is not an ExponentPoly")
                if p.modulus != modulus:
                    raise ValueError(
                        f"entry ({i},{j}) has modulus {p.modulus}, matrix has {modulus}"
                    )
                grid[i, j] = p
        self._entries = grid
        self._modulus = modulus
        self.rows = rows
        self.cols = cols
        self._dense_cache = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int, modulus=None) -> "PolyMatrix":
        z = ExponentPoly.zero(modulus)
        return cls([[z] * cols for _ in range(rows)], modulus)

    @classmethod
    def identity(cls, n: int, modulus=None) -> "PolyMatrix":
        one = ExponentPoly.one(modulus)
        z = ExponentPoly.zero(modulus)
        return cls([[one if i == j else z for j in range(n)] for i in range(n)], modulus)

    @classmethod
    def from_exponents(cls, grid: Sequence[Sequence[int | None]], modulus=None) -> "PolyMatrix":
        """Monomial matrix from a grid of exponents; None means a zero entry."""
        rows = []
        for r in grid:
            rows.append(
                [
                    ExponentPoly.zero(modulus) if e is None else ExponentPoly.monomial(e, modulus)
                    for e in r
                ]
            )
        return cls(rows, modulus)

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence["PolyMatrix"]]) -> "PolyMatrix":
        """Stack a 2-D arrangement of equally-shaped-per-row/col blocks."""
        modulus = blocks[0][0].modulus
        rows: list[list[ExponentPoly]] = []
        for brow in blocks:
            height = brow[0].rows
            for b in brow:
                if b.rows != height or b.modulus != modulus:
                    raise ValueError("incompatible blocks")
            for r in range(height):
                rows.append([b.entry(r, c) for b in brow for c in range(b.cols)])
        return cls(rows, modulus)

    # -- inspection ---------------------------------------------------------

    @property
    def modulus(self) -> int | None:
        return self._modulus

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def entry(self, i: int, j: int) -> ExponentPoly:
        return self._entries[i, j]

    def entries(self):
        """Iterate (i, j, poly) over all cells."""
        for i in range(self.rows):
            for j in range(self.cols):
                yield i, j, self._entries[i, j]

    def block(self, i0: int, j0: int, height: int, width: int) -> "PolyMatrix":
        sub = self._entries[i0 : i0 + height, j0 : j0 + width]
        return PolyMatrix(sub.tolist(), self._modulus)

    def max_coeff(self) -> int:
        return max((p.max_coeff for _, _, p in self.entries()), default=0)

    def max_row_mass(self) -> int:
        return max(
            (sum(self._entries[i, j].mass for j in range(self.cols)) for i in range(self.rows)),
            default=0,
        )

    def is_permutation_sum(self) -> bool:
        return all(p.is_permutation_sum() for _, _, p in self.entries())

    def nonzero_grid(self) -> np.ndarray:
        """0/1 support of the entries (which cells hold a nonzero polynomial)."""
        out = np.zeros((self.rows, self.cols), dtype=np.int64)
        for i, j, p in self.entries():
            if p:
                out[i, j] = 1
        return out

    # -- algebra ------------------------------------------------------------

    def _check_modulus(self, other: "PolyMatrix") -> None:
        if self._modulus != other._modulus:
            raise ValueError(f"modulus mismatch: {self._modulus} vs {other._modulus}")

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check_modulus(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")
        return PolyMatrix(
            [
                [self._entries[i, j] + other._entries[i, j] for j in range(self.cols)]
                for i in range(self.rows)
            ],
            self._modulus,
        )

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check_modulus(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
        n = self._modulus
        if n is not None and n <= DENSE_MODULUS_LIMIT:
            bound = self.max_row_mass() * max(other.max_coeff(), 1) * max(other.rows, 1)
            if bound < _INT64_SAFE:
                return self._matmul_dense(other)
        return self._matmul_terms(other)

    def _matmul_terms(self, other: "PolyMatrix") -> "PolyMatrix":
        n = self._modulus
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc: dict[int, int] = {}
                for k in range(self.cols):
                    a = self._entries[i, k]
                    b = other._entries[k, j]
                    if a.is_zero or b.is_zero:
                        continue
                    for ea, ca in a._terms.items():
                        for eb, cb in b._terms.items():
                            e = ea + eb if n is None else (ea + eb) % n
                            acc[e] = acc.get(e, 0) + ca * cb
                row.append(ExponentPoly(acc, n))
            out.append(row)
        return PolyMatrix(out, n)

    def dense(self) -> np.ndarray:
        """(rows, cols, N) int64 coefficient tensor (modulus required)."""
        if self._modulus is None:
            raise ValueError("dense tensor requires a modulus")
        if self._dense_cache is None:
            t = np.zeros((self.rows, self.cols, self._modulus), dtype=np.int64)
            for i, j, p in self.entries():
                for e, c in p._terms.items():
                    t[i, j, e] = c
            self._dense_cache = t
        return self._dense_cache

    @classmethod
    def from_dense(cls, tensor: np.ndarray, modulus: int) -> "PolyMatrix":
        rows, cols, _ = tensor.shape
        return cls(
            [
                [ExponentPoly.from_dense(tensor[i, j], modulus) for j in range(cols)]
                for i in range(rows)
            ],
            modulus,
        )

    def _matmul_dense(self, other: "PolyMatrix") -> "PolyMatrix":
        n = self._modulus
        a = self.dense()
        b = other.dense()
        out = np.zeros((self.rows, other.cols, n), dtype=np.int64)
        for i in range(self.rows):
            for k in range(self.cols):
                ap = self._entries[i, k]
                if ap.is_zero:
                    continue
                bv_all = b[k]
                if ap.is_monomial():
                    # single circulant: multiplication is a cyclic shift
                    (e,) = ap._terms
                    out[i] += np.roll(bv_all, e, axis=1)
                    continue
                av = a[i, k]
                for j in range(other.cols):
                    if other._entries[k, j].is_zero:
                        continue
                    conv = np.convolve(av, bv_all[j])
                    folded = conv[:n].copy()
                    folded[: n - 1] += conv[n:]
                    out[i, j] += folded
        return PolyMatrix.from_dense(out, n)

    def transpose(self) -> "PolyMatrix":
        """Block transpose with circulant transpose of each entry."""
        return PolyMatrix(
            [[self._entries[j, i].transpose() for j in range(self.rows)] for i in range(self.cols)],
            self._modulus,
        )

    def reduce_mod(self, modulus: int) -> "PolyMatrix":
        return PolyMatrix(
            [[self._entries[i, j].reduce_mod(modulus) for j in range(self.cols)] for i in range(self.rows)],
            modulus,
        )

    def scale(self, k: int) -> "PolyMatrix":
        return PolyMatrix(
            [
                [ExponentPoly({e: c * k for e, c in self._entries[i, j]._terms.items()}, self._modulus)
                 for j in range(self.cols)]
                for i in range(self.rows)
            ],
            self._modulus,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and self._modulus == other._modulus
            and all(self._entries[i, j] == other._entries[i, j] for i, j, _ in self.entries())
        )

    def __hash__(self) -> int:
        return hash((self.shape, self._modulus, tuple(p for _, _, p in self.entries())))

    def __str__(self) -> str:
        cells = [[str(self._entries[i, j]) for j in range(self.cols)] for i in range(self.rows)]
        widths = [max(len(cells[i][j]) for i in range(self.rows)) for j in range(self.cols)]
        return "\n".join(
            "  ".join(cells[i][j].ljust(widths[j]) for j in range(self.cols)).rstrip()
            for i in range(self.rows)
        )

    def __repr__(self) -> str:
        return f"PolyMatrix({self.rows}x{self.cols}, modulus={self._modulus})"


def poly_triangle_violations(a: PolyMatrix, b: PolyMatrix, limit: int = 16) -> list[tuple[int, int, int]]:
    """Positions where triangle(A, B) fires, as (row, col, exponent) triples.

    A and B must have the same shape and modulus; the comparison is between
    the lifted scalar matrices, i.e. per cell and per exponent.
    """
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    a._check_modulus(b)
    hits: list[tuple[int, int, int]] = []
    for i, j, p in a.entries():
        if p.max_coeff < 2:
            continue
        q = b.entry(i, j)
        for e, c in p._terms.items():
            if c >= 2 and q.coeff(e) == 0:
                hits.append((i, j, e))
                if len(hits) >= limit:
                    return hits
    return hits


def gram_power(h: PolyMatrix, n: int) -> PolyMatrix:
    """(H H^T)^floor(n/2) * H^(n mod 2); the degree-n product chain of H."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return h
    m = h @ h.transpose()
    acc = m
    for _ in range(n // 2 - 1):
        acc = acc @ m
    if n % 2:
        acc = acc @ h
    return acc


# ---------------------------------------------------------------------------
# binary matrices and lifting
# ---------------------------------------------------------------------------


class BinaryMatrix:
    """Immutable sparse binary matrix stored as sorted (row, col) supports."""

    __slots__ = ("rows", "cols", "_r", "_c", "_support")

    def __init__(self, rows: int, cols: int, positions: Iterable[tuple[int, int]]):
        self.rows = int(rows)
        self.cols = int(cols)
        pos = sorted(set((int(r), int(c)) for r, c in positions))
        for r, c in pos:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"position ({r},{c}) outside {self.rows}x{self.cols}")
        self._r = np.fromiter((p[0] for p in pos), dtype=np.int64, count=len(pos))
        self._c = np.fromiter((p[1] for p in pos), dtype=np.int64, count=len(pos))
        self._support = None

    @classmethod
    def from_arrays(cls, rows: int, cols: int, r: np.ndarray, c: np.ndarray) -> "BinaryMatrix":
        m = cls.__new__(cls)
        m.rows = int(rows)
        m.cols = int(cols)
        order = np.lexsort((c, r))
        rr, cc = r[order].astype(np.int64), c[order].astype(np.int64)
        if len(rr) and (rr.min() < 0 or rr.max() >= rows or cc.min() < 0 or cc.max() >= cols):
            raise ValueError("position outside matrix")
        keep = np.ones(len(rr), dtype=bool)
        if len(rr) > 1:
            keep[1:] = (rr[1:] != rr[:-1]) | (cc[1:] != cc[:-1])
        m._r = rr[keep]
        m._c = cc[keep]
        m._support = None
        return m

    @classmethod
    def from_dense(cls, arr) -> "BinaryMatrix":
        a = np.asarray(arr)
        r, c = np.nonzero(a)
        return cls.from_arrays(a.shape[0], a.shape[1], r, c)

    @property
    def nnz(self) -> int:
        return len(self._r)

    @property
    def support(self) -> frozenset[tuple[int, int]]:
        if self._support is None:
            self._support = frozenset(zip(self._r.tolist(), self._c.tolist()))
        return self._support

    def positions(self) -> tuple[np.ndarray, np.ndarray]:
        return self._r, self._c

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.int64)
        out[self._r, self._c] = 1
        return out

    def transpose(self) -> "BinaryMatrix":
        return BinaryMatrix.from_arrays(self.cols, self.rows, self._c.copy(), self._r.copy())

    def row_degrees(self) -> np.ndarray:
        return np.bincount(self._r, minlength=self.rows)

    def col_degrees(self) -> np.ndarray:
        return np.bincount(self._c, minlength=self.cols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and np.array_equal(self._r, other._r)
            and np.array_equal(self._c, other._c)
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._r.tobytes(), self._c.tobytes()))

    def __repr__(self) -> str:
        return f"BinaryMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


def lift(h: PolyMatrix, modulus: int) -> BinaryMatrix:
    """Expand each monomial into its N x N circulant permutation block.

    x^r becomes the identity shifted left by r positions: support
    {(a, (a + r) mod N)}.  Entries must have all coefficients equal to one
    after reduction mod N (non-overlapping permutations).
    """
    n = int(modulus)
    hm = h if h.modulus == n else h.reduce_mod(n)
    base = np.arange(n, dtype=np.int64)
    rs: list[np.ndarray] = []
    cs: list[np.ndarray] = []
    for i, j, p in hm.entries():
        for e, c in p.terms.items():
            if c >= 2:
                raise ValueError(
                    f"overlapping permutations in block ({i},{j}): coefficient {c} at x^{e}"
                )
            rs.append(i * n + base)
            cs.append(j * n + (base + e) % n)
    if rs:
        r = np.concatenate(rs)
        c = np.concatenate(cs)
    else:
        r = np.zeros(0, dtype=np.int64)
        c = np.zeros(0, dtype=np.int64)
    return BinaryMatrix.from_arrays(hm.rows * n, hm.cols * n, r, c)
