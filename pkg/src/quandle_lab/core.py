"""Quandle tables, axioms, translations, inner groups and isomorphisms.

All element indices are 0-based.  A table ``T`` encodes ``i * j = T[i, j]``.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from .errors import CapExceeded, InvalidQuandle, QuandleLabError, TableShapeError

INNER_GROUP_CAP = 10**7
PRODUCT_CAP = 4096


class Permutation:
    """A bijection on ``range(n)`` stored as its image tuple."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        self.images = images

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(range(n))

    @property
    def order(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def then(self, other: Permutation) -> Permutation:
        """Apply ``self`` first, then ``other``."""
        return Permutation(tuple(other.images[x] for x in self.images))

    def inverse(self) -> Permutation:
        inv = [0] * len(self.images)
        for x, y in enumerate(self.images):
            inv[y] = x
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(x == y for x, y in enumerate(self.images))

    def cycle_type(self) -> tuple[int, ...]:
        seen = [False] * len(self.images)
        lengths = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            length = 0
            x = start
            while not seen[x]:
                seen[x] = True
                x = self.images[x]
                length += 1
            lengths.append(length)
        return tuple(sorted(lengths))

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation({list(self.images)})"


@dataclass(frozen=True)
class PermGroup:
    degree: int
    generators: tuple[Permutation, ...]
    elements: tuple[Permutation, ...]

    @property
    def size(self) -> int:
        return len(self.elements)


class QuandleTable:
    """Immutable order-n operation table; ``table[i, j]`` is ``i * j``.

    Construction only checks shape and range.  Use :func:`validate` to check
    the axioms.
    """

    def __init__(self, table, name: str | None = None):
        arr = np.array(table, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise TableShapeError(f"table must be square, got shape {arr.shape}")
        n = arr.shape[0]
        if n == 0:
            raise TableShapeError("order 0 is not a quandle")
        if arr.min() < 0 or arr.max() >= n:
            bad = np.argwhere((arr < 0) | (arr >= n))[0]
            raise TableShapeError(
                f"entry {arr[tuple(bad)]} at ({bad[0]}, {bad[1]}) outside [0, {n - 1}]"
            )
        arr.setflags(write=False)
        self.table = arr
        self.name = name

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __len__(self) -> int:
        return self.order

    def op(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    @cached_property
    def inverse_table(self) -> np.ndarray:
        """``inverse_table[x, a]`` is ``R_a^{-1}(x)``, i.e. the dual operation."""
        n = self.order
        inv = np.empty_like(self.table)
        cols = np.arange(n)
        for a in range(n):
            inv[self.table[:, a], a] = cols
        inv.setflags(write=False)
        return inv

    @cached_property
    def translation_cycle_types(self) -> tuple[tuple[int, ...], ...]:
        return tuple(right_translation(self, a).cycle_type() for a in range(self.order))

    def rows(self) -> list[list[int]]:
        return self.table.tolist()

    def __eq__(self, other):
        return isinstance(other, QuandleTable) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<QuandleTable{label} order={self.order}>"


class Violation(NamedTuple):
    """One failing axiom instance; ``witness`` holds the 0-based indices."""

    axiom: int
    witness: tuple[int, ...]


def check_axioms(table, limit: int | None = None) -> list[Violation]:
    """Return every violated axiom instance (at most ``limit`` if given)."""
    Q = table if isinstance(table, QuandleTable) else QuandleTable(table)
    T = Q.table
    n = Q.order
    found: list[Violation] = []

    for i in np.flatnonzero(T[np.arange(n), np.arange(n)] != np.arange(n)):
        found.append(Violation(1, (int(i),)))

    # axiom 2: every column a permutation; witness (column, repeated value)
    for j in range(n):
        counts = np.bincount(T[:, j], minlength=n)
        for v in np.flatnonzero(counts != 1):
            found.append(Violation(2, (j, int(v))))

    lhs = T[T]  # lhs[i, j, k] = (i*j)*k
    rhs = T[T[:, None, :], T[None, :, :]]  # rhs[i, j, k] = (i*k)*(j*k)
    for i, j, k in np.argwhere(lhs != rhs):
        found.append(Violation(3, (int(i), int(j), int(k))))
        if limit is not None and len(found) >= limit:
            break
    return found[:limit] if limit is not None else found


def validate(table) -> QuandleTable:
    """Return a :class:`QuandleTable` or raise :class:`InvalidQuandle`."""
    Q = table if isinstance(table, QuandleTable) else QuandleTable(table)
    violations = check_axioms(Q)
    if violations:
        raise InvalidQuandle(violations)
    return Q


def _check_element(Q: QuandleTable, a: int) -> None:
    if not 0 <= a < Q.order:
        raise QuandleLabError(f"element {a} outside [0, {Q.order - 1}]")


def right_translation(Q: QuandleTable, a: int) -> Permutation:
    """The map ``x -> x * a``."""
    _check_element(Q, a)
    return Permutation(Q.table[:, a])


def left_translation(Q: QuandleTable, a: int) -> tuple[int, ...]:
    """The map ``x -> a * x`` (not a bijection in general, so a plain tuple)."""
    _check_element(Q, a)
    return tuple(int(x) for x in Q.table[a])


def inner_group(Q: QuandleTable, cap: int = INNER_GROUP_CAP) -> PermGroup:
    """Closure of the right translations, breadth-first from the identity."""
    gens = tuple(right_translation(Q, a) for a in range(Q.order))
    identity = Permutation.identity(Q.order)
    seen = {identity.images}
    elements = [identity]
    queue = deque([identity])
    while queue:
        g = queue.popleft()
        for r in gens:
            h = g.then(r)
            if h.images not in seen:
                seen.add(h.images)
                elements.append(h)
                if len(elements) > cap:
                    raise CapExceeded(
                        f"inner group exceeds {cap} elements; quandle too large for naive closure"
                    )
                queue.append(h)
    return PermGroup(Q.order, gens, tuple(elements))


def orbit(Q: QuandleTable, x: int) -> set[int]:
    """Orbit of ``x`` under Inn(Q), using generators only."""
    seen = {x}
    stack = [x]
    T = Q.table
    while stack:
        y = stack.pop()
        for z in set(T[y].tolist()) | set(Q.inverse_table[y].tolist()):
            if z not in seen:
                seen.add(z)
                stack.append(z)
    return seen


def is_connected(Q: QuandleTable) -> bool:
    return len(orbit(Q, 0)) == Q.order


def dual(Q: QuandleTable) -> QuandleTable:
    """The dual quandle: entry ``(i, j)`` is ``R_j^{-1}(i)``."""
    return QuandleTable(Q.inverse_table)


def product(Q1: QuandleTable, Q2: QuandleTable, cap: int = PRODUCT_CAP) -> QuandleTable:
    """Componentwise product; the pair ``(i, j)`` is encoded as ``i * |Q2| + j``."""
    n1, n2 = Q1.order, Q2.order
    if n1 * n2 > cap:
        raise CapExceeded(f"product order {n1 * n2} exceeds cap {cap}")
    first = Q1.table[:, None, :, None]
    second = Q2.table[None, :, None, :]
    table = (first * n2 + second).reshape(n1 * n2, n1 * n2)
    return QuandleTable(table)


def relabel(Q: QuandleTable, perm: Sequence[int]) -> QuandleTable:
    """Transport the structure along the bijection ``x -> perm[x]``."""
    p = np.asarray(perm, dtype=np.int64)
    inv = np.argsort(p)
    T = Q.table
    new = p[T[inv[:, None], inv[None, :]]]
    return QuandleTable(new)


@dataclass(frozen=True)
class QuandleHom:
    domain: QuandleTable
    codomain: QuandleTable
    map: tuple[int, ...]

    def __post_init__(self):
        if len(self.map) != self.domain.order:
            raise QuandleLabError("hom map length differs from domain order")
        if any(not 0 <= y < self.codomain.order for y in self.map):
            raise QuandleLabError("hom image outside codomain")

    def __call__(self, x: int) -> int:
        return self.map[x]

    def is_homomorphism(self) -> bool:
        f = np.asarray(self.map)
        return bool(np.array_equal(f[self.domain.table], self.codomain.table[f[:, None], f[None, :]]))

    def is_onto(self) -> bool:
        return len(set(self.map)) == self.codomain.order

    def is_bijective(self) -> bool:
        return self.domain.order == self.codomain.order and self.is_onto()


def subquandle_closure(Q: QuandleTable, seeds) -> set[int]:
    T = Q.table
    members = list(dict.fromkeys(seeds))
    inside = set(members)
    i = 0
    while i < len(members):
        x = members[i]
        for y in list(members[: i + 1]):
            for z in (T[x, y], T[y, x]):
                z = int(z)
                if z not in inside:
                    inside.add(z)
                    members.append(z)
        i += 1
    return inside


def generating_set(Q: QuandleTable) -> list[int]:
    """A generating set chosen greedily in index order.

    Finite quandles are generated under ``*`` alone because each ``R_a``
    has finite order, so no inverse operation is needed.
    """
    gens: list[int] = []
    closed: set[int] = set()
    for x in range(Q.order):
        if x not in closed:
            gens.append(x)
            closed = subquandle_closure(Q, gens)
            if len(closed) == Q.order:
                break
    return gens


def _propagate(T1, T2, f, g, x, y) -> bool:
    """Assign ``f[x] = y`` and close under products; False on conflict.

    ``g`` is the partial inverse when searching for bijections, else None.
    """
    queue = [(x, y)]
    known = []
    while queue:
        a, b = queue.pop()
        if f[a] != -1:
            if f[a] != b:
                return False
            continue
        if g is not None:
            if g[b] != -1:
                return False
            g[b] = a
        f[a] = b
        known.append(a)
        dom = np.flatnonzero(f >= 0)
        img = f[dom]
        for prods, targets in (
            (T1[a, dom], T2[b, img]),
            (T1[dom, a], T2[img, b]),
        ):
            current = f[prods]
            bad = (current != -1) & (current != targets)
            if bad.any():
                return False
            for p, t in zip(prods[current == -1].tolist(), targets[current == -1].tolist()):
                queue.append((p, t))
    return True


def find_isomorphism(Q1: QuandleTable, Q2: QuandleTable) -> QuandleHom | None:
    """Lexicographically least isomorphism ``Q1 -> Q2``, or None.

    Images are assigned element by element in index order, each trying
    candidates in increasing order and closing under products, so the first
    complete assignment is the least map tuple.
    """
    n = Q1.order
    if n != Q2.order:
        return None
    ct1, ct2 = Q1.translation_cycle_types, Q2.translation_cycle_types
    if Counter(ct1) != Counter(ct2):
        return None
    conn1, conn2 = is_connected(Q1), is_connected(Q2)
    if conn1 != conn2:
        return None
    T1, T2 = Q1.table, Q2.table
    by_type: dict[tuple, list[int]] = {}
    for b, t in enumerate(ct2):
        by_type.setdefault(t, []).append(b)

    def search(f, g, pos):
        while pos < n and f[pos] != -1:
            pos += 1
        if pos == n:
            return f
        candidates = by_type[ct1[pos]]
        if pos == 0 and conn2:
            # some inner automorphism moves any image of 0 to the least candidate
            candidates = candidates[:1]
        for b in candidates:
            if g[b] != -1:
                continue
            f2, g2 = f.copy(), g.copy()
            if _propagate(T1, T2, f2, g2, pos, b):
                found = search(f2, g2, pos + 1)
                if found is not None:
                    return found
        return None

    start_f = np.full(n, -1, dtype=np.int64)
    start_g = np.full(n, -1, dtype=np.int64)
    f = search(start_f, start_g, 0)
    if f is None:
        return None
    hom = QuandleHom(Q1, Q2, tuple(int(v) for v in f))
    assert hom.is_homomorphism() and hom.is_bijective()
    return hom


def is_isomorphic(Q1: QuandleTable, Q2: QuandleTable) -> bool:
    return find_isomorphism(Q1, Q2) is not None


@dataclass(frozen=True)
class QuandleProperties:
    connected: bool
    latin: bool
    kei: bool
    faithful: bool
    self_dual: bool

    def as_dict(self) -> dict[str, bool]:
        return {
            "connected": self.connected,
            "latin": self.latin,
            "kei": self.kei,
            "faithful": self.faithful,
            "self_dual": self.self_dual,
        }


def is_latin(Q: QuandleTable) -> bool:
    n = Q.order
    return all(len(np.unique(row)) == n for row in Q.table)


def is_kei(Q: QuandleTable) -> bool:
    T = Q.table
    return bool(np.array_equal(T[T, np.arange(Q.order)[None, :]], np.broadcast_to(np.arange(Q.order)[:, None], T.shape)))


def is_faithful(Q: QuandleTable) -> bool:
    columns = {Q.table[:, a].tobytes() for a in range(Q.order)}
    return len(columns) == Q.order


def is_self_dual(Q: QuandleTable) -> bool:
    return is_isomorphic(Q, dual(Q))


def properties(Q: QuandleTable) -> QuandleProperties:
    return QuandleProperties(
        connected=is_connected(Q),
        latin=is_latin(Q),
        kei=is_kei(Q),
        faithful=is_faithful(Q),
        self_dual=is_self_dual(Q),
    )
