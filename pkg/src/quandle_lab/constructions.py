"""Named quandle families, group models, 2-cocycles and abelian extensions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import modp
from .core import QuandleTable, find_isomorphism, is_connected
from .errors import CapExceeded, InvalidCocycle, QuandleLabError

# ---------------------------------------------------------------------------
# groups


class GroupModel:
    """A finite group given by its Cayley table; checked on construction."""

    def __init__(self, mult, name: str | None = None):
        M = np.array(mult, dtype=np.int64)
        n = M.shape[0]
        if M.shape != (n, n) or M.min() < 0 or M.max() >= n:
            raise QuandleLabError("Cayley table must be square with entries in range")
        ids = [e for e in range(n) if np.array_equal(M[e], np.arange(n)) and np.array_equal(M[:, e], np.arange(n))]
        if not ids:
            raise QuandleLabError("Cayley table has no identity")
        e = ids[0]
        # (ab)c == a(bc)
        if not np.array_equal(M[M], M[:, M]):
            raise QuandleLabError("Cayley table is not associative")
        inverse = np.empty(n, dtype=np.int64)
        for a in range(n):
            sol = np.flatnonzero(M[a] == e)
            if sol.size != 1 or M[sol[0], a] != e:
                raise QuandleLabError(f"element {a} has no two-sided inverse")
            inverse[a] = sol[0]
        M.setflags(write=False)
        inverse.setflags(write=False)
        self.mult = M
        self.inverse = inverse
        self.identity = e
        self.name = name

    @property
    def order(self) -> int:
        return self.mult.shape[0]

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mult, self.mult.T))

    def is_automorphism(self, f: Sequence[int]) -> bool:
        f = np.asarray(f, dtype=np.int64)
        if sorted(f.tolist()) != list(range(self.order)):
            return False
        return bool(np.array_equal(f[self.mult], self.mult[f[:, None], f[None, :]]))

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = int(self.inverse[a]), -k
        out = self.identity
        for _ in range(k):
            out = int(self.mult[out, a])
        return out

    def __repr__(self):
        return f"<GroupModel {self.name or ''} order={self.order}>"


def cyclic_group(n: int) -> GroupModel:
    idx = np.arange(n)
    return GroupModel((idx[:, None] + idx[None, :]) % n, name=f"Z{n}")


def direct_product_group(G: GroupModel, H: GroupModel) -> GroupModel:
    """Pairs ``(g, h)`` encoded as ``g * |H| + h``."""
    m = H.order
    table = (G.mult[:, None, :, None] * m + H.mult[None, :, None, :]).reshape(G.order * m, G.order * m)
    name = f"{G.name}x{H.name}" if G.name and H.name else None
    return GroupModel(table, name=name)


def abelian_group(orders: Sequence[int]) -> GroupModel:
    """Direct product of cyclic groups, e.g. ``[2, 2]`` for Z2 x Z2."""
    G = cyclic_group(orders[0])
    for k in orders[1:]:
        G = direct_product_group(G, cyclic_group(k))
    return G


def group_from_permutations(generators: Sequence[Sequence[int]]) -> tuple[GroupModel, list[tuple[int, ...]]]:
    """Cayley table of the permutation group generated by ``generators``.

    Elements are sorted lexicographically; the product ``g h`` applies ``g``
    first, then ``h``.  Returns the group and the element list.
    """
    gens = [tuple(g) for g in generators]
    degree = len(gens[0])
    identity = tuple(range(degree))
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = tuple(s[x] for x in g)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    elements = sorted(seen)
    index = {g: i for i, g in enumerate(elements)}
    n = len(elements)
    mult = np.empty((n, n), dtype=np.int64)
    for i, g in enumerate(elements):
        for j, h in enumerate(elements):
            mult[i, j] = index[tuple(h[x] for x in g)]
    return GroupModel(mult), elements


def symmetric_group(k: int) -> tuple[GroupModel, list[tuple[int, ...]]]:
    if k == 1:
        return group_from_permutations([(0,)])
    gens = [tuple([1, 0] + list(range(2, k))), tuple(list(range(1, k)) + [0])]
    G, elements = group_from_permutations(gens)
    G.name = f"S{k}"
    return G, elements


def inner_automorphism(G: GroupModel, g: int) -> list[int]:
    """The automorphism ``x -> g^{-1} x g``."""
    gi = int(G.inverse[g])
    return [int(G.mult[G.mult[gi, x], g]) for x in range(G.order)]


# ---------------------------------------------------------------------------
# basic families


def trivial_quandle(n: int) -> QuandleTable:
    if n < 1:
        raise QuandleLabError("trivial quandle needs n >= 1")
    return QuandleTable(np.repeat(np.arange(n)[:, None], n, axis=1), name=f"T{n}")


def dihedral_quandle(n: int) -> QuandleTable:
    """``i * j = 2j - i mod n``."""
    idx = np.arange(n)
    return QuandleTable((2 * idx[None, :] - idx[:, None]) % n, name=f"R{n}")


def generalized_alexander(G: GroupModel, f: Sequence[int]) -> QuandleTable:
    """``x * y = f(x y^{-1}) y``."""
    if not G.is_automorphism(f):
        raise QuandleLabError("f is not an automorphism of G")
    f = np.asarray(f, dtype=np.int64)
    M = G.mult
    xy_inv = M[:, G.inverse]  # xy_inv[x, y] = x y^{-1}
    table = M[f[xy_inv], np.arange(G.order)[None, :]]
    return QuandleTable(table)


def alexander_general(A: GroupModel, f: Sequence[int]) -> QuandleTable:
    if not A.is_abelian():
        raise QuandleLabError("Alexander quandles need an abelian group")
    return generalized_alexander(A, f)


def conjugation_quandle(G: GroupModel, seed: int) -> tuple[QuandleTable, list[int]]:
    """Conjugacy class of ``seed`` with ``a * b = b^{-1} a b``.

    Returns the table and the group elements of the class in index order.
    """
    M, inv = G.mult, G.inverse
    cls = sorted({int(M[M[inv[g], seed], g]) for g in range(G.order)})
    pos = {g: i for i, g in enumerate(cls)}
    k = len(cls)
    table = np.empty((k, k), dtype=np.int64)
    for i, a in enumerate(cls):
        for j, b in enumerate(cls):
            table[i, j] = pos[int(M[M[inv[b], a], b])]
    return QuandleTable(table), cls


GALKIN_MU = (2, -1, -1)


def galkin_quandle(A: GroupModel, tau: Sequence[int]) -> QuandleTable:
    """Quandle on Z3 x A; the pair ``(x, a)`` is encoded as ``x * |A| + a``."""
    if not A.is_abelian():
        raise QuandleLabError("Galkin quandles need an abelian group")
    if len(tau) != 3 or tau[0] != A.identity:
        raise QuandleLabError("tau must have three values with tau(0) = 0")
    m = A.order
    add, neg = A.mult, A.inverse
    n = 3 * m
    table = np.empty((n, n), dtype=np.int64)
    for x, a, y, b in itertools.product(range(3), range(m), range(3), range(m)):
        d = (x - y) % 3
        scaled = A.power(b, GALKIN_MU[d])
        c = add[add[neg[a], scaled], tau[d]]
        table[x * m + a, y * m + b] = ((2 * y - x) % 3) * m + c
    return QuandleTable(table)


# ---------------------------------------------------------------------------
# Alexander quandles over Z_p[t]/(h)


@dataclass(frozen=True)
class AlexanderSpec:
    """``p`` prime and monic ``h`` with coefficients listed constant term first."""

    p: int
    h_coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "h_coeffs", tuple(int(c) % self.p for c in self.h_coeffs))
        if not modp.is_prime(self.p):
            raise QuandleLabError(f"p = {self.p} is not prime")
        if len(self.h_coeffs) < 2:
            raise QuandleLabError("h must have degree at least 1")
        if self.h_coeffs[-1] != 1:
            raise QuandleLabError("h must be monic")

    @property
    def degree(self) -> int:
        return len(self.h_coeffs) - 1

    @property
    def order(self) -> int:
        return self.p**self.degree


def companion_matrix(spec: AlexanderSpec) -> np.ndarray:
    """Matrix of multiplication by t on the basis 1, t, ..., t^(k-1)."""
    k, p = spec.degree, spec.p
    C = np.zeros((k, k), dtype=np.int64)
    for i in range(k - 1):
        C[i + 1, i] = 1
    C[:, k - 1] = [(-c) % p for c in spec.h_coeffs[:k]]
    return C


def residue_matrix(spec: AlexanderSpec, residue: Sequence[int]) -> np.ndarray:
    """Matrix of multiplication by ``sum residue[i] t^i`` modulo h."""
    k, p = spec.degree, spec.p
    C = companion_matrix(spec)
    out = np.zeros((k, k), dtype=np.int64)
    power = np.eye(k, dtype=np.int64)
    for c in residue:
        out = (out + int(c) * power) % p
        power = (C @ power) % p
    return out


def residue_digits(spec: AlexanderSpec) -> np.ndarray:
    """Row ``x`` holds the coefficient vector of element index ``x``."""
    k, p = spec.degree, spec.p
    idx = np.arange(p**k)
    return np.stack([(idx // p**i) % p for i in range(k)], axis=1)


def residue_index(spec: AlexanderSpec, residue: Sequence[int]) -> int:
    coeffs = list(residue) + [0] * (spec.degree - len(residue))
    return sum((int(c) % spec.p) * spec.p**i for i, c in enumerate(coeffs[: spec.degree]))


def residue_inverse(spec: AlexanderSpec, residue: Sequence[int]) -> tuple[int, ...]:
    M = residue_matrix(spec, residue)
    try:
        Minv = modp.inverse(M, spec.p)
    except ValueError:
        raise QuandleLabError("residue is not invertible modulo h") from None
    return tuple(int(v) for v in Minv[:, 0])


def alexander_field(spec: AlexanderSpec, multiplier: Sequence[int] | None = None) -> QuandleTable:
    """``x * y = t x + (1 - t) y`` on Z_p[t]/(h).

    ``multiplier`` replaces ``t`` by another residue (constant term first).
    Elements are indexed by their base-p digit vectors, constant term least
    significant.
    """
    if spec.h_coeffs[0] == 0:
        raise QuandleLabError("t is not invertible modulo h (h(0) = 0)")
    p, k = spec.p, spec.degree
    residue = (0, 1) if multiplier is None else tuple(multiplier)
    M = residue_matrix(spec, residue)
    if modp.rank(M, p) < k:
        raise QuandleLabError("multiplier is not invertible modulo h")
    V = residue_digits(spec)
    left = (V @ M.T) % p
    right = (V - left) % p
    weights = p ** np.arange(k)
    table = ((left[:, None, :] + right[None, :, :]) % p) @ weights
    return QuandleTable(table)


def _poly_divmod(num: list[int], den: list[int], p: int) -> list[int]:
    """Remainder of ``num`` modulo monic ``den`` (constant term first)."""
    r = [c % p for c in num]
    dd = len(den) - 1
    while len(r) - 1 >= dd and any(r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < dd:
            break
        shift = len(r) - 1 - dd
        lead = r[-1]
        for i, c in enumerate(den):
            r[shift + i] = (r[shift + i] - lead * c) % p
        r.pop()
    return r


def monic_polynomials(p: int, degree: int):
    for low in itertools.product(range(p), repeat=degree):
        yield list(low) + [1]


def is_irreducible(h: Sequence[int], p: int) -> bool:
    """Exhaustive trial division by monic factors of degree up to deg(h)/2."""
    h = [c % p for c in h]
    k = len(h) - 1
    for d in range(1, k // 2 + 1):
        for g in monic_polynomials(p, d):
            rem = _poly_divmod(h, g, p)
            if not any(rem):
                return False
    return True


def irreducible_polynomials(p: int, degree: int) -> list[tuple[int, ...]]:
    return [tuple(h) for h in monic_polynomials(p, degree) if is_irreducible(h, p)]


def is_simple_alexander(spec: AlexanderSpec) -> bool:
    t = (0, 1)
    t_minus_1 = ((-1) % spec.p, 1)
    if spec.h_coeffs in (t, t_minus_1):
        return False
    return spec.degree >= 1 and is_irreducible(spec.h_coeffs, spec.p)


def field_generators(spec: AlexanderSpec) -> list[tuple[int, ...]]:
    """Residues whose powers span Z_p[t]/(h), i.e. not in a proper subfield.

    Each yields a simple Alexander quandle when h is irreducible. In degree 1
    every residue spans, so 0 and 1 are dropped explicitly.
    """
    p, k = spec.p, spec.degree
    out = []
    for digits in residue_digits(spec):
        if k == 1 and int(digits[0]) in (0, 1):
            continue
        M = residue_matrix(spec, digits)
        span = [np.eye(k, dtype=np.int64)[:, 0]]
        for _ in range(k - 1):
            span.append((M @ span[-1]) % p)
        if modp.rank(np.array(span), p) == k:
            out.append(tuple(int(d) for d in digits))
    return out


# ---------------------------------------------------------------------------
# 2-cocycles and abelian extensions


@dataclass(frozen=True, eq=False)
class Cocycle2:
    base: QuandleTable
    modulus: int
    values: np.ndarray = field(repr=False)

    def key(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.values.ravel())


def cocycle_violations(base: QuandleTable, m: int, values) -> list[tuple]:
    """Failing instances: ``("diagonal", x)`` or ``("identity", x, y, z)``."""
    phi = np.asarray(values, dtype=np.int64)
    n = base.order
    if phi.shape != (n, n):
        raise QuandleLabError(f"cocycle shape {phi.shape} does not match order {n}")
    phi = phi % m
    T = base.table
    out: list[tuple] = [("diagonal", int(x)) for x in np.flatnonzero(phi[np.arange(n), np.arange(n)])]
    # phi(x,y) - phi(x,z) + phi(x*y,z) - phi(x*z,y*z)
    lhs = (
        phi[:, :, None]
        - phi[:, None, :]
        + phi[T[:, :, None], np.arange(n)[None, None, :]]
        - phi[T[:, None, :], T[None, :, :]]
    ) % m
    out.extend(("identity", int(x), int(y), int(z)) for x, y, z in np.argwhere(lhs != 0))
    return out


def validate_cocycle(base: QuandleTable, m: int, values) -> Cocycle2:
    if m < 1:
        raise QuandleLabError("modulus must be positive")
    bad = cocycle_violations(base, m, values)
    if bad:
        raise InvalidCocycle(bad)
    arr = np.asarray(values, dtype=np.int64) % m
    arr.setflags(write=False)
    return Cocycle2(base, m, arr)


def zero_cocycle(base: QuandleTable, m: int) -> Cocycle2:
    return validate_cocycle(base, m, np.zeros((base.order, base.order), dtype=np.int64))


def coboundary(base: QuandleTable, psi: Sequence[int], m: int) -> np.ndarray:
    """``(x, y) -> psi(x) - psi(x * y)`` modulo m."""
    psi = np.asarray(psi, dtype=np.int64)
    return (psi[:, None] - psi[base.table]) % m


def abelian_extension(phi: Cocycle2) -> QuandleTable:
    """Quandle on X x Z_m; ``(x, a)`` is encoded as ``x * m + a``."""
    n, m = phi.base.order, phi.modulus
    T = phi.base.table
    a = np.arange(m)
    first = T[:, None, :, None] * m
    second = (a[None, :, None, None] + phi.values[:, None, :, None]) % m
    table = np.broadcast_to(first + second, (n, m, n, m)).reshape(n * m, n * m)
    return QuandleTable(table)


def cocycle_equations(base: QuandleTable) -> np.ndarray:
    """Integer matrix whose kernel mod m is the 2-cocycle group.

    Unknowns are ``phi(x, y)`` flattened as ``x * n + y``.
    """
    n = base.order
    T = base.table
    rows = []
    for x, y, z in itertools.product(range(n), repeat=3):
        row = np.zeros(n * n, dtype=np.int64)
        row[x * n + y] += 1
        row[x * n + z] -= 1
        row[T[x, y] * n + z] += 1
        row[T[x, z] * n + T[y, z]] -= 1
        if row.any():
            rows.append(row)
    for x in range(n):
        row = np.zeros(n * n, dtype=np.int64)
        row[x * n + x] = 1
        rows.append(row)
    return np.array(rows)


def cocycle_basis(base: QuandleTable, p: int) -> np.ndarray:
    """Basis (rows, flattened) of the Z_p-valued 2-cocycles, p prime."""
    return modp.nullspace(cocycle_equations(base), p)


EXTENSION_ORDER_CAP = 8
EXTENSION_MODULUS_CAP = 3
EXTENSION_CLASS_CAP = 2**16


def find_connected_extensions(base: QuandleTable, m: int) -> list[Cocycle2]:
    """Cocycles with connected extensions, one per isomorphism class.

    Cocycles are enumerated modulo coboundaries; the survivors are sorted by
    their flattened values.
    """
    n = base.order
    if n > EXTENSION_ORDER_CAP or m > EXTENSION_MODULUS_CAP or m < 1:
        raise CapExceeded(
            f"search limited to order <= {EXTENSION_ORDER_CAP} and modulus <= {EXTENSION_MODULUS_CAP}"
        )
    if not is_connected(base):
        # the extension maps onto the base, and images of connected quandles are connected
        return []
    if m == 1:
        return [zero_cocycle(base, 1)]
    if not modp.is_prime(m):
        raise QuandleLabError("modulus must be 1 or prime")

    cocycles = cocycle_basis(base, m)
    cobound = np.array([coboundary(base, np.eye(n, dtype=np.int64)[x], m).ravel() for x in range(n)])
    span_rows, _ = modp.rref(cobound, m)
    complement = []
    current = span_rows
    for z in cocycles:
        trial = np.vstack([current, z]) if current.size else z[None, :]
        if modp.rank(trial, m) > (current.shape[0] if current.size else 0):
            complement.append(z)
            current, _ = modp.rref(trial, m)
    if m ** len(complement) > EXTENSION_CLASS_CAP:
        raise CapExceeded(f"{m}^{len(complement)} cohomology classes exceed the search cap")

    found: list[tuple[Cocycle2, QuandleTable]] = []
    for coeffs in itertools.product(range(m), repeat=len(complement)):
        vec = np.zeros(n * n, dtype=np.int64)
        for c, z in zip(coeffs, complement):
            vec = (vec + c * z) % m
        phi = validate_cocycle(base, m, vec.reshape(n, n))
        ext = abelian_extension(phi)
        if not is_connected(ext):
            continue
        if any(find_isomorphism(ext, other) is not None for _, other in found):
            continue
        found.append((phi, ext))
    return sorted((phi for phi, _ in found), key=Cocycle2.key)
