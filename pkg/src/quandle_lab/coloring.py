"""Counting and enumerating quandle colorings of braid closures.

Strand colors are read at the top of the braid.  A positive letter ``i``
maps the colors ``(a, b)`` at positions ``i, i+1`` to ``(b, a * b)``; a
negative letter maps them to ``(R_a^{-1}(b), a)``.  A top tuple is a
coloring of the closure when the word returns it unchanged.

For a connected quandle the color of strand 1 may be fixed to 0, because
Inn(Q) acts transitively on colorings' first strand; this cuts the search
from ``n**b`` to ``n**(b-1)`` tuples.
"""

from __future__ import annotations

import time
from collections import Counter
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product as iproduct
from typing import Iterator

import numpy as np

from .constructions import Cocycle2
from .core import QuandleHom, QuandleTable, _propagate, generating_set, is_connected
from .errors import CapExceeded, CellTimeout, NotAKnot, QuandleLabError
from .knots import BraidWord

CHUNK = 1 << 16
ENUMERATION_CAP = 10**8
HOM_SEARCH_CAP = 10**7
_EVAL_LIMIT = 2**63


@dataclass(frozen=True)
class ColoringCount:
    quandle_order: int
    total: int
    nontrivial: int
    fixed_strand: int
    evaluations: int
    tuples: int
    fixed_path: bool
    wall_ms: float = 0.0

    def as_dict(self) -> dict:
        return {
            "quandle_order": self.quandle_order,
            "total": self.total,
            "nontrivial": self.nontrivial,
            "fixed_strand": self.fixed_strand,
            "evaluations": self.evaluations,
            "tuples": self.tuples,
            "fixed_path": self.fixed_path,
            "wall_ms": round(self.wall_ms, 3),
        }


@dataclass(frozen=True)
class ColoringVector:
    """Top-of-braid colors of one coloring."""

    assignment: tuple[int, ...]

    def states(self, Q: QuandleTable, w: BraidWord) -> list[tuple[int, ...]]:
        """Colors across the strands before the first letter and after each letter."""
        cols = [np.array([c]) for c in self.assignment]
        out = [self.assignment]
        for e in w.word:
            _apply_letter(Q.table.ravel(), Q.inverse_table.ravel(), Q.order, e, cols)
            out.append(tuple(int(c[0]) for c in cols))
        return out


def _apply_letter(T_flat, D_flat, n, e, cols) -> None:
    i = abs(e) - 1
    a, b = cols[i], cols[i + 1]
    if e > 0:
        cols[i], cols[i + 1] = b, T_flat[a * n + b]
    else:
        cols[i], cols[i + 1] = D_flat[b * n + a], a


def _decode(start: int, stop: int, n: int, width: int) -> list[np.ndarray]:
    """Digits of the indices in ``[start, stop)``, most significant first."""
    idx = np.arange(start, stop, dtype=np.int64)
    return [(idx // n**p) % n for p in range(width - 1, -1, -1)]


def _closing_mask(T_flat, D_flat, n, word, top) -> np.ndarray:
    cols = list(top)
    for e in word:
        _apply_letter(T_flat, D_flat, n, e, cols)
    mask = np.ones(top[0].shape[0], dtype=bool)
    for c, t in zip(cols, top):
        mask &= c == t
    return mask


def _count_range(T_flat, D_flat, n, strands, word, start, stop, fixed, deadline):
    """Count closing tuples with linear index in ``[start, stop)``.

    Returns ``(closing, closing_with_first_strand_0)``.
    """
    width = strands - 1 if fixed else strands
    closing = 0
    first_zero = 0
    for s in range(start, stop, CHUNK):
        e = min(stop, s + CHUNK)
        digits = _decode(s, e, n, width)
        top = ([np.zeros(e - s, dtype=np.int64)] + digits) if fixed else digits
        mask = _closing_mask(T_flat, D_flat, n, word, top)
        closing += int(mask.sum())
        if not fixed:
            first_zero += int((mask & (top[0] == 0)).sum())
        if deadline is not None and time.monotonic() > deadline:
            raise CellTimeout("cell exceeded its time budget")
    return closing, (closing if fixed else first_zero)


def _count_task(args):
    return _count_range(*args)


def _split(total: int, n: int, width: int, parts: int) -> list[tuple[int, int]]:
    """Contiguous index ranges aligned to the leading digit (strand 2 when fixed)."""
    if width == 0 or parts <= 1:
        return [(0, total)]
    block = n ** (width - 1)
    leading = np.array_split(np.arange(n), min(parts, n))
    return [(int(g[0]) * block, (int(g[-1]) + 1) * block) for g in leading if g.size]


def count_colorings(
    Q: QuandleTable,
    w: BraidWord,
    workers: int = 1,
    full_enum: bool = False,
    executor: Executor | None = None,
    deadline: float | None = None,
) -> ColoringCount:
    """Count colorings of the closure of ``w`` by ``Q``.

    The fixed-first-strand path is used when ``Q`` is connected and
    ``full_enum`` is false.  ``deadline`` is a :func:`time.monotonic` value.
    """
    if not w.is_knot():
        raise NotAKnot(w.components())
    start_time = time.perf_counter()
    n = Q.order
    fixed = is_connected(Q) and not full_enum
    width = w.strands - 1 if fixed else w.strands
    total_tuples = n**width
    T_flat = np.ascontiguousarray(Q.table.ravel())
    D_flat = np.ascontiguousarray(Q.inverse_table.ravel())
    ranges = _split(total_tuples, n, width, max(1, workers))
    tasks = [(T_flat, D_flat, n, w.strands, w.word, a, b, fixed, deadline) for a, b in ranges]

    if len(tasks) == 1:
        results = [_count_task(tasks[0])]
    elif executor is not None:
        results = list(executor.map(_count_task, tasks))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_count_task, tasks))

    closing = sum(r[0] for r in results)
    first_zero = sum(r[1] for r in results)
    total = n * first_zero if fixed else closing
    evaluations = len(w.word) * total_tuples
    if evaluations >= _EVAL_LIMIT:
        raise OverflowError("evaluation counter exceeds 64 bits")
    return ColoringCount(
        quandle_order=n,
        total=total,
        nontrivial=total - n,
        fixed_strand=first_zero,
        evaluations=evaluations,
        tuples=total_tuples,
        fixed_path=fixed,
        wall_ms=(time.perf_counter() - start_time) * 1000.0,
    )


def iter_colorings(Q: QuandleTable, w: BraidWord, cap: int = ENUMERATION_CAP) -> Iterator[np.ndarray]:
    """Yield arrays of closing top tuples (one row each) in lexicographic order."""
    n, b = Q.order, w.strands
    total = n**b
    if total > cap:
        raise CapExceeded(f"{n}^{b} = {total} tuples exceeds enumeration cap {cap}")
    T_flat = Q.table.ravel()
    D_flat = Q.inverse_table.ravel()
    for s in range(0, total, CHUNK):
        e = min(total, s + CHUNK)
        top = _decode(s, e, n, b)
        mask = _closing_mask(T_flat, D_flat, n, w.word, top)
        if mask.any():
            yield np.stack([t[mask] for t in top], axis=1)


def coloring_array(Q: QuandleTable, w: BraidWord, cap: int = ENUMERATION_CAP) -> np.ndarray:
    chunks = list(iter_colorings(Q, w, cap))
    if not chunks:
        return np.zeros((0, w.strands), dtype=np.int64)
    return np.concatenate(chunks)


def enumerate_colorings(Q: QuandleTable, w: BraidWord, cap: int = ENUMERATION_CAP) -> list[ColoringVector]:
    return [ColoringVector(tuple(int(c) for c in row)) for row in coloring_array(Q, w, cap)]


def enumerate_homs(
    Q1: QuandleTable, Q0: QuandleTable, onto_only: bool = False, cap: int = HOM_SEARCH_CAP
) -> list[QuandleHom]:
    """All homomorphisms ``Q1 -> Q0``, ordered by their map tuples.

    Backtracks over images of a generating set of ``Q1``; each choice is
    closed under products, which determines the whole map.
    """
    gens = generating_set(Q1)
    if Q0.order ** len(gens) > cap:
        raise CapExceeded(f"{Q0.order}^{len(gens)} generator assignments exceed cap {cap}")
    homs = []
    T1, T0 = Q1.table, Q0.table
    for images in iproduct(range(Q0.order), repeat=len(gens)):
        f = np.full(Q1.order, -1, dtype=np.int64)
        if not all(_propagate(T1, T0, f, None, g, y) for g, y in zip(gens, images)):
            continue
        if (f < 0).any():
            continue
        hom = QuandleHom(Q1, Q0, tuple(int(v) for v in f))
        if not hom.is_homomorphism():
            continue
        if onto_only and not hom.is_onto():
            continue
        homs.append(hom)
    homs.sort(key=lambda h: h.map)
    return homs


@dataclass(frozen=True)
class LiftMultiset:
    """Fiber sizes as sorted ``(h, k)`` pairs: ``k`` colorings with ``h`` lifts."""

    pairs: tuple[tuple[int, int], ...]

    @property
    def base_count(self) -> int:
        return sum(k for _, k in self.pairs)

    @property
    def lift_count(self) -> int:
        return sum(h * k for h, k in self.pairs)

    def as_list(self) -> list[list[int]]:
        return [[h, k] for h, k in self.pairs]

    def __str__(self):
        return "{" + ", ".join(f"[{h}, {k}]" for h, k in self.pairs) + "}"


def _encode_rows(rows: np.ndarray, base: int) -> np.ndarray:
    weights = base ** np.arange(rows.shape[1] - 1, -1, -1, dtype=np.int64)
    return rows @ weights


def col_f(f: QuandleHom, w: BraidWord, cap: int = ENUMERATION_CAP) -> LiftMultiset:
    """Multiset of ``|f_#^{-1}(x)|`` over colorings ``x`` by the codomain."""
    if not w.is_knot():
        raise NotAKnot(w.components())
    if not f.is_homomorphism():
        raise QuandleLabError("f is not a quandle homomorphism")
    Q1, Q0 = f.domain, f.codomain
    fmap = np.asarray(f.map, dtype=np.int64)
    fibers: Counter[int] = Counter()
    for rows in iter_colorings(Q1, w, cap):
        keys = _encode_rows(fmap[rows], Q0.order)
        fibers.update(keys.tolist())
    base_keys = _encode_rows(coloring_array(Q0, w, cap), Q0.order).tolist()
    stray = set(fibers) - set(base_keys)
    if stray:
        raise QuandleLabError("projected coloring is not a coloring; f is not a homomorphism")
    sizes = Counter(fibers.get(k, 0) for k in base_keys)
    return LiftMultiset(tuple(sorted(sizes.items())))


@dataclass(frozen=True)
class CocycleInvariant:
    """Value multiset ``{value: multiplicity}`` over Z_m."""

    modulus: int
    multiset: tuple[tuple[int, int], ...]

    def as_dict(self) -> dict[int, int]:
        return dict(self.multiset)

    @property
    def total(self) -> int:
        return sum(k for _, k in self.multiset)


def coloring_weights(phi: Cocycle2, w: BraidWord, rows: np.ndarray) -> np.ndarray:
    """Signed cocycle sums for each coloring row, reduced mod m.

    A positive letter acting on ``(a, b)`` contributes ``+phi(a, b)``; a
    negative one contributes ``-phi(R_a^{-1}(b), a)``.
    """
    Q = phi.base
    n, m = Q.order, phi.modulus
    T_flat, D_flat = Q.table.ravel(), Q.inverse_table.ravel()
    P = phi.values
    cols = [rows[:, j].copy() for j in range(rows.shape[1])]
    acc = np.zeros(rows.shape[0], dtype=np.int64)
    for e in w.word:
        i = abs(e) - 1
        a, b = cols[i], cols[i + 1]
        if e > 0:
            acc += P[a, b]
        else:
            acc -= P[D_flat[b * n + a], a]
        _apply_letter(T_flat, D_flat, n, e, cols)
    return acc % m


def cocycle_invariant(phi: Cocycle2, w: BraidWord, cap: int = ENUMERATION_CAP) -> CocycleInvariant:
    if not w.is_knot():
        raise NotAKnot(w.components())
    counts: Counter[int] = Counter()
    for rows in iter_colorings(phi.base, w, cap):
        counts.update(coloring_weights(phi, w, rows).tolist())
    return CocycleInvariant(phi.modulus, tuple(sorted(counts.items())))
