"""Difference-set girth conditions on exponent rows, over Z or mod N.

The rows (i_l), (j_l) define the 3 x n_v quasi-cyclic matrix with all-one
first row and entries x^{i_l}, x^{j_l} (normal form: i_1 = j_1 = 0).  Each
``check_girth_gt*`` evaluates a necessary-and-sufficient condition for the
lifted Tanner graph to have girth above 4, 6, 8, 10 or 12.  With no modulus
the exponents are compared over the integers, which matches the two-phase
workflow: make the conditions hold over Z first, then find the smallest N
that keeps them alive modulo N (``min_n_scan``).

The set conditions are checked extensionally against the matrix-product
certificates in the test suite; the matrix route is the ground truth.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .girth import DEFAULT_CAP, ch_certify, girth_exact
from .poly import ExponentPoly, PolyMatrix


@dataclass(frozen=True)
class ExponentRows:
    """Exponent rows of a 3 x n_v normal-form QC matrix (i[0] = j[0] = 0)."""

    i: tuple[int, ...]
    j: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "i", tuple(int(v) for v in self.i))
        object.__setattr__(self, "j", tuple(int(v) for v in self.j))
        if len(self.i) != len(self.j):
            raise ValueError("i and j must have the same length")
        if len(self.i) < 3:
            raise ValueError("need at least 3 columns")
        if self.i[0] != 0 or self.j[0] != 0:
            raise ValueError("normal form requires i[0] = j[0] = 0")

    @property
    def n_v(self) -> int:
        return len(self.i)

    def matrix(self, modulus=None) -> PolyMatrix:
        """The 3 x n_v polynomial matrix with rows 1, x^i, x^j."""
        return PolyMatrix.from_exponents([[0] * self.n_v, list(self.i), list(self.j)], modulus)

    def ch_matrix(self, modulus=None) -> PolyMatrix:
        """C_H built directly from the rows (3 x 3 circulant blocks)."""
        z = ExponentPoly.zero(modulus)
        c12 = ExponentPoly.from_exponents((-v for v in self.i), modulus)
        c13 = ExponentPoly.from_exponents((-v for v in self.j), modulus)
        c23 = ExponentPoly.from_exponents((a - b for a, b in zip(self.i, self.j)), modulus)
        return PolyMatrix(
            [
                [z, c12, c13],
                [c12.transpose(), z, c23],
                [c13.transpose(), c23.transpose(), z],
            ],
            modulus,
        )

    def reduce_mod(self, modulus: int) -> "ExponentRows":
        return ExponentRows(
            tuple(v % modulus for v in self.i), tuple(v % modulus for v in self.j)
        )

    def max_abs_exponent(self) -> int:
        return max(abs(v) for v in self.i + self.j)


@dataclass(frozen=True)
class Violation:
    family: str
    indices: tuple
    value: int


@dataclass
class ConditionReport:
    target_girth: int  # the report certifies girth > target_girth - 2
    satisfied: bool
    violations: list[Violation] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.satisfied


def _red(v: int, modulus: int | None) -> int:
    return v % modulus if modulus is not None else v


class _Checker:
    """Collects collisions among indexed value families, mod N or over Z."""

    def __init__(self, modulus: int | None, first_only: bool):
        self.modulus = modulus
        self.first_only = first_only
        self.violations: list[Violation] = []

    @property
    def done(self) -> bool:
        return self.first_only and bool(self.violations)

    def distinct(self, name: str, items) -> None:
        """items: iterable of (index-tuple, value); values must be distinct."""
        if self.done:
            return
        seen: dict[int, tuple] = {}
        for idx, v in items:
            v = _red(v, self.modulus)
            if v in seen:
                self.violations.append(Violation(name, (seen[v], idx), v))
                if self.first_only:
                    return
            else:
                seen[v] = idx


def _pairs(n: int):
    return ((u, v) for u in range(n) for v in range(n) if u != v)


def _family_union(checker: _Checker, name: str, *families) -> None:
    """All listed families, chained, must carry pairwise distinct values."""
    checker.distinct(name, itertools.chain.from_iterable(families))


def check_girth_gt4(rows: ExponentRows, modulus: int | None = None, first_only: bool = False) -> ConditionReport:
    """Girth > 4: each of {i_l}, {j_l}, {i_l - j_l} has distinct values."""
    i, j = rows.i, rows.j
    n = rows.n_v
    c = _Checker(modulus, first_only)
    c.distinct("i", (((l,), i[l]) for l in range(n)))
    c.distinct("j", (((l,), j[l]) for l in range(n)))
    c.distinct("i-j", (((l,), i[l] - j[l]) for l in range(n)))
    return ConditionReport(6, not c.violations, c.violations)


def check_girth_gt6(rows: ExponentRows, modulus: int | None = None, first_only: bool = False) -> ConditionReport:
    """Girth > 6: for every l, three mixed difference families are collision-free."""
    i, j = rows.i, rows.j
    n = rows.n_v
    c = _Checker(modulus, first_only)
    for l in range(n):
        others = [s for s in range(n) if s != l]
        _family_union(
            c,
            f"l={l}: (i_l-i_s) vs (j_l-j_t)",
            (((l, s, "i"), i[l] - i[s]) for s in others),
            (((l, t, "j"), j[l] - j[t]) for t in others),
        )
        _family_union(
            c,
            f"l={l}: i_s vs (i_t-j_t+j_l)",
            ((("i", s), i[s]) for s in others),
            ((("mix", t, l), i[t] - j[t] + j[l]) for t in others),
        )
        _family_union(
            c,
            f"l={l}: j_s vs (j_t-i_t+i_l)",
            ((("j", s), j[s]) for s in others),
            ((("mix", t, l), j[t] - i[t] + i[l]) for t in others),
        )
        if c.done:
            break
    return ConditionReport(8, not c.violations, c.violations)


def forbidden_j_gt6(rows_i: list[int], rows_j: list[int], l: int, modulus: int | None = None) -> set[int]:
    """Values j_l must avoid so that columns 0..l keep girth > 6.

    The recursive form of the girth-6 condition: with earlier columns s, t < l,
    j_l must avoid i_l + (j_t - i_s), i_s + (j_t - i_t) and j_s + (i_t - j_t).
    """
    bad = set()
    for s in range(l):
        for t in range(l):
            for v in (
                rows_i[l] + rows_j[t] - rows_i[s],
                rows_i[s] + rows_j[t] - rows_i[t],
                rows_j[s] + rows_i[t] - rows_j[t],
            ):
                bad.add(_red(v, modulus))
    return bad


def check_girth_gt8(rows: ExponentRows, modulus: int | None = None, first_only: bool = False) -> ConditionReport:
    """Girth > 8: the three all-pairs difference families are each injective
    and mutually value-disjoint."""
    i, j = rows.i, rows.j
    n = rows.n_v
    c = _Checker(modulus, first_only)
    fam_i = [(("i", u, v), i[u] - i[v]) for u, v in _pairs(n)]
    fam_j = [(("j", u, v), j[u] - j[v]) for u, v in _pairs(n)]
    fam_ij = [(("i-j", u, v), (i[u] - j[u]) - (i[v] - j[v])) for u, v in _pairs(n)]
    _family_union(c, "(i_u-i_v) vs (j_u-j_v)", fam_i, fam_j)
    _family_union(c, "(i_u-i_v) vs (i-j diffs)", fam_i, fam_ij)
    _family_union(c, "(j_u-j_v) vs (i-j diffs)", fam_j, fam_ij)
    return ConditionReport(10, not c.violations, c.violations)


def check_girth_gt10(rows: ExponentRows, modulus: int | None = None, first_only: bool = False) -> ConditionReport:
    """Girth > 10: for every l, three groups of four difference families are
    each injective and pairwise value-disjoint."""
    i, j = rows.i, rows.j
    n = rows.n_v
    c = _Checker(modulus, first_only)
    for l in range(n):
        pu = [(u, v) for u, v in _pairs(n) if u != l]  # u free of l
        pv = [(u, v) for u, v in _pairs(n) if v != l]  # v free of l
        group_a = (
            [(("a1", u, v), i[u] - i[v]) for u, v in pu],
            [(("a2", u, v), j[u] - j[v]) for u, v in pu],
            [(("a3", u, v), -j[u] + j[v] - i[v] + i[l]) for u, v in pv],
            [(("a4", u, v), -i[u] + i[v] - j[v] + j[l]) for u, v in pv],
        )
        group_b = (
            [(("b1", u, v), i[u] - j[u] + j[v]) for u, v in pv],
            [(("b2", u, v), i[u] - i[v] + i[l]) for u, v in pv],
            [(("b3", u, v), (i[u] - j[u]) - (i[v] - j[v]) + i[l]) for u, v in pv],
            [(("b4", u, v), i[u] - j[v] + j[l]) for u, v in pv],
        )
        group_c = (
            [(("c1", u, v), j[u] - i[u] + i[v]) for u, v in pv],
            [(("c2", u, v), j[u] - i[v] + i[l]) for u, v in pv],
            [(("c3", u, v), j[u] - j[v] + j[l]) for u, v in pv],
            [(("c4", u, v), j[u] - i[u] + i[v] - j[v] + j[l]) for u, v in pv],
        )
        for gname, group in (("a", group_a), ("b", group_b), ("c", group_c)):
            for x, y in itertools.combinations(range(4), 2):
                _family_union(c, f"l={l} group {gname}: sets {x+1},{y+1}", group[x], group[y])
                if c.done:
                    return ConditionReport(12, False, c.violations)
    return ConditionReport(12, not c.violations, c.violations)


def check_girth_gt12(rows: ExponentRows, modulus: int | None = None, first_only: bool = False) -> ConditionReport:
    """Girth > 12, via the C_H products built from the rows.

    No difference-set form is used here: the condition is girth(C_H) = 6
    together with C_H^3 triangle (I + C_H + C_H^2) = 0, preceded by the
    lower-girth conditions.
    """
    ok, wit = ch_certify(rows.matrix(modulus), 14)
    if ok:
        return ConditionReport(14, True, [])
    v = Violation(f"ch-product level {wit.level}", (wit.row, wit.col), wit.exponent if wit.exponent is not None else -1)
    return ConditionReport(14, False, [v])


_CHECKS = {6: check_girth_gt4, 8: check_girth_gt6, 10: check_girth_gt8, 12: check_girth_gt10, 14: check_girth_gt12}


def conditions_for_girth(rows: ExponentRows, target_girth: int, modulus: int | None = None, first_only: bool = True) -> ConditionReport:
    """The condition set certifying girth >= target_girth (= girth > target-2).

    Evaluated as a ladder, cheapest level first: girth >= g implies all the
    lower-girth conditions, so an early failure settles the answer quickly.
    """
    if target_girth not in _CHECKS:
        raise ValueError(f"target girth must be one of {sorted(_CHECKS)}")
    for level in sorted(_CHECKS):
        if level > target_girth:
            break
        report = _CHECKS[level](rows, modulus, first_only)
        if not report.satisfied:
            return ConditionReport(target_girth, False, report.violations)
    return ConditionReport(target_girth, True, [])


class MinNNotFound(RuntimeError):
    def __init__(self, ceiling: int):
        super().__init__(f"no feasible lifting factor found up to ceiling {ceiling}")
        self.ceiling = ceiling


def min_n_scan(
    rows: ExponentRows,
    target_girth: int,
    n_start: int = 3,
    ceiling: int | None = None,
    certify: bool = True,
    cap: int = DEFAULT_CAP,
) -> int:
    """Smallest N >= n_start whose mod-N conditions reach the target girth.

    The winner is re-certified on the lift by the power-product route before
    being returned (unless ``certify`` is disabled for inner loops).
    """
    if ceiling is None:
        ceiling = max(20 * rows.max_abs_exponent(), 64)
    for n in range(max(n_start, 2), ceiling + 1):
        if conditions_for_girth(rows, target_girth, n).satisfied:
            if certify:
                cert = girth_exact(rows.matrix(n), cap)
                if not cert.meets(target_girth):
                    raise AssertionError(
                        f"conditions accepted N={n} but the lift certifies {cert}"
                    )
            return n
    raise MinNNotFound(ceiling)


# value combinations named in the closed-form minimum-N expression
def _closed_form_values(rows: ExponentRows):
    i, j = rows.i, rows.j
    n = rows.n_v
    r = range(n)
    for a, b, c, d in itertools.product(r, repeat=4):
        yield i[a] + i[b] - i[c] - i[d]
    for u, v, a, b in itertools.product(r, repeat=4):
        yield j[u] - j[v] + i[a] - i[b]
    for u, v, s, t in itertools.product(r, repeat=4):
        yield j[u] - j[v] + j[s] - j[t]
        yield j[u] - j[v] + (j[s] - i[s]) - (j[t] - i[t])
    for s, t, u, v in itertools.product(r, repeat=4):
        yield (j[s] - i[s]) - (j[t] - i[t]) + (j[u] - i[u]) - (j[v] - i[v])
        yield (j[s] - i[s]) - (j[t] - i[t]) + i[u] - i[v]


def min_n_candidate(rows: ExponentRows) -> int:
    """Closed-form candidate for the smallest girth-10 lifting factor.

    Evaluates min*(Z minus the listed difference combinations).  Advisory:
    callers cross-check against ``min_n_scan``, which is authoritative.
    """
    from .construct import min_star

    return min_star(set(_closed_form_values(rows)))
