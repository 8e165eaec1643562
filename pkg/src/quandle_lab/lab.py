"""Batch analysis over a quandle list and a knot list.

The coloring matrix stores nontrivial counts ``M[i, j] = Col^N_{Q_i}(K_j)``.
``dual_index[i]`` is the position of a quandle isomorphic to ``dual(Q_i)``,
so the column of the mirror of ``K_j`` is ``M[dual_index, j]``.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Sequence

import numpy as np

from .coloring import count_colorings
from .constructions import AlexanderSpec, alexander_field, irreducible_polynomials
from .core import QuandleTable, dual, find_isomorphism, is_connected, is_latin
from .formats import SCHEMA
from .errors import CellTimeout, DataError, QuandleLabError
from .knots import KnotRecord, normalize_symmetry

MISSING = -1


# ---------------------------------------------------------------------------
# simple Alexander recognition


def _prime_power(n: int) -> tuple[int, int] | None:
    for p in range(2, n + 1):
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            return (p, k) if n == 1 else None
    return None


def recognize_simple_alexander(Q: QuandleTable) -> AlexanderSpec | None:
    """An ``AlexanderSpec`` whose field quandle is isomorphic to ``Q``, if any.

    Tries every irreducible ``h`` of the right degree other than ``t`` and
    ``t - 1``; cheap structural filters run first.
    """
    pk = _prime_power(Q.order)
    if pk is None or not is_connected(Q) or not is_latin(Q):
        return None
    p, k = pk
    for h in irreducible_polynomials(p, k):
        spec = AlexanderSpec(p, h)
        if spec.h_coeffs in ((0, 1), ((p - 1) % p, 1)):
            continue
        if find_isomorphism(alexander_field(spec), Q) is not None:
            return spec
    return None


# ---------------------------------------------------------------------------
# the matrix


@dataclass
class ColoringMatrix:
    names: list[str]
    orders: list[int]
    knots: list[KnotRecord]
    entries: np.ndarray
    dual_index: list[int]
    simple_alexander: list[int] = field(default_factory=list)
    quandles: list[QuandleTable] | None = None

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=np.int64)
        if self.entries.shape != (len(self.names), len(self.knots)):
            raise DataError("matrix shape does not match quandle and knot lists")
        d = self.dual_index
        if sorted(d) != list(range(len(self.names))) or any(d[d[i]] != i for i in range(len(d))):
            raise DataError("dual_index is not an involution on the quandle list")

    @property
    def knot_names(self) -> list[str]:
        return [k.name for k in self.knots]

    @property
    def missing(self) -> list[tuple[int, int]]:
        return [tuple(c) for c in np.argwhere(self.entries == MISSING).tolist()]

    @property
    def complete(self) -> bool:
        return not (self.entries == MISSING).any()

    def mirror_entries(self) -> np.ndarray:
        """Columns for the mirrored knots, ``M[dual_index[k], j]``."""
        return self.entries[self.dual_index]

    def totals(self) -> np.ndarray:
        return self.entries + np.asarray(self.orders, dtype=np.int64)[:, None]

    def subset(self, rows: Sequence[int]) -> ColoringMatrix:
        """Restrict to ``rows``; the subset must be closed under duals."""
        rows = list(rows)
        pos = {r: i for i, r in enumerate(rows)}
        try:
            dual_index = [pos[self.dual_index[r]] for r in rows]
        except KeyError as exc:
            raise QuandleLabError("row subset is not closed under duals") from exc
        return ColoringMatrix(
            [self.names[r] for r in rows],
            [self.orders[r] for r in rows],
            self.knots,
            self.entries[rows],
            dual_index,
            [pos[r] for r in self.simple_alexander if r in pos],
            [self.quandles[r] for r in rows] if self.quandles else None,
        )

    # persistence -------------------------------------------------------

    def sidecar(self) -> dict:
        return {
            "schema": SCHEMA,
            "quandle_names": self.names,
            "quandle_orders": self.orders,
            "dual_index": self.dual_index,
            "simple_alexander": [self.names[i] for i in self.simple_alexander],
            "knots": [
                {"name": k.name, "braid_index": k.braid.strands, "word": k.braid.render(), "symmetry": k.symmetry}
                for k in self.knots
            ],
            "missing_cells": [
                {"quandle": self.names[i], "knot": self.knots[j].name} for i, j in self.missing
            ],
        }

    def save(self, path) -> tuple[Path, Path]:
        path = Path(path)
        lines = ["quandle," + ",".join(self.knot_names)]
        for name, row in zip(self.names, self.entries.tolist()):
            lines.append(name + "," + ",".join("" if v == MISSING else str(v) for v in row))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        side = sidecar_path(path)
        side.write_text(json.dumps(self.sidecar(), indent=2) + "\n", encoding="utf-8")
        return path, side


def sidecar_path(path) -> Path:
    return Path(path).with_suffix(".json")


def load_matrix(path) -> ColoringMatrix:
    from .knots import parse_braid

    path = Path(path)
    side = sidecar_path(path)
    if not side.exists():
        raise DataError(f"{path}: sidecar {side.name} not found")
    meta = json.loads(side.read_text(encoding="utf-8"))
    rows = [ln.split(",") for ln in path.read_text(encoding="utf-8").splitlines() if ln.strip()]
    header, body = rows[0], rows[1:]
    names = [r[0] for r in body]
    if names != meta["quandle_names"]:
        raise DataError(f"{path}: quandle names disagree with sidecar")
    knots = [
        KnotRecord(k["name"], parse_braid(k["word"], k["braid_index"]), k["symmetry"]) for k in meta["knots"]
    ]
    if header[1:] != [k.name for k in knots]:
        raise DataError(f"{path}: knot names disagree with sidecar")
    try:
        entries = [[MISSING if v == "" else int(v) for v in r[1:]] for r in body]
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from exc
    index = {n: i for i, n in enumerate(names)}
    return ColoringMatrix(
        names,
        list(meta["quandle_orders"]),
        knots,
        np.array(entries, dtype=np.int64).reshape(len(names), len(knots)),
        list(meta["dual_index"]),
        [index[n] for n in meta.get("simple_alexander", [])],
    )


def resolve_duals(quandles: Sequence[QuandleTable]) -> list[int]:
    """Position of an isomorphic copy of each dual; self first, else least index."""
    out = []
    for i, Q in enumerate(quandles):
        D = dual(Q)
        order = [i] + [j for j in range(len(quandles)) if j != i]
        for j in order:
            cand = quandles[j]
            if cand.order != D.order:
                continue
            if cand == D or find_isomorphism(D, cand) is not None:
                out.append(j)
                break
        else:
            raise QuandleLabError(f"dual of {Q.name or i} is not isomorphic to any listed quandle")
    if any(out[out[i]] != i for i in range(len(out))):
        raise QuandleLabError("dual matching is not an involution; the list has isomorphic duplicates")
    return out


def _cell(args):
    i, j, Q, w, timeout = args
    deadline = None if timeout is None else time.monotonic() + timeout
    try:
        return i, j, count_colorings(Q, w, deadline=deadline).nontrivial
    except CellTimeout:
        return i, j, MISSING


def build_matrix(
    quandles: Sequence[QuandleTable],
    knots: Sequence[KnotRecord],
    names: Sequence[str] | None = None,
    workers: int = 1,
    cell_timeout: float | None = None,
    executor: Executor | None = None,
) -> ColoringMatrix:
    names = list(names) if names is not None else [Q.name or f"Q{i + 1}" for i, Q in enumerate(quandles)]
    for name, Q in zip(names, quandles):
        if not is_connected(Q):
            raise QuandleLabError(f"quandle {name} is not connected")
    dual_index = resolve_duals(quandles)
    simple = [i for i, Q in enumerate(quandles) if recognize_simple_alexander(Q) is not None]
    entries = np.full((len(quandles), len(knots)), MISSING, dtype=np.int64)
    cells = [(i, j, Q, k.braid, cell_timeout) for i, Q in enumerate(quandles) for j, k in enumerate(knots)]
    if workers <= 1 and executor is None:
        results = map(_cell, cells)
        for i, j, v in results:
            entries[i, j] = v
    else:
        pool = executor or ProcessPoolExecutor(max_workers=workers)
        try:
            for i, j, v in pool.map(_cell, cells, chunksize=max(1, len(cells) // (8 * max(workers, 1)))):
                entries[i, j] = v
        finally:
            if executor is None:
                pool.shutdown()
    return ColoringMatrix(names, [Q.order for Q in quandles], list(knots), entries, dual_index, simple, list(quandles))


# ---------------------------------------------------------------------------
# distinguishing conditions

CONDITIONS = ("1", "2", "3")


@dataclass
class ConditionResult:
    condition: str
    failing_pairs: list[tuple[int, int]]
    poisoned_pairs: list[tuple[int, int]]

    @property
    def holds(self) -> bool:
        return not self.failing_pairs and not self.poisoned_pairs


def _condition_sides(Mx: ColoringMatrix, condition: str) -> tuple[np.ndarray, np.ndarray]:
    M, Mm = Mx.entries, Mx.mirror_entries()
    return {"1": (M, M), "2": (M, Mm), "3": (Mm, Mm)}[condition]


def _separated(a: np.ndarray, b: np.ndarray) -> tuple[bool, bool]:
    """(some known coordinate differs, some coordinate is missing)."""
    known = (a != MISSING) & (b != MISSING)
    return bool((known & (a != b)).any()), bool((~known).any())


def _check_condition(Mx: ColoringMatrix, condition: str) -> ConditionResult:
    """Pairs ``i < j`` with no ``k`` separating ``A[:, i]`` from ``B[:, j]`` or ``A[:, j]`` from ``B[:, i]``."""
    A, B = _condition_sides(Mx, condition)
    n = A.shape[1]
    poisoned = sorted({j for _, j in Mx.missing})
    clean = [j for j in range(n) if j not in set(poisoned)]
    failing: set[tuple[int, int]] = set()
    buckets: dict[bytes, list[int]] = {}
    for j in clean:
        buckets.setdefault(B[:, j].tobytes(), []).append(j)
    for i in clean:
        for j in buckets.get(A[:, i].tobytes(), ()):
            if i != j:
                failing.add((min(i, j), max(i, j)))
    unresolved: set[tuple[int, int]] = set()
    for p in poisoned:
        for q in range(n):
            if q == p:
                continue
            pair = (min(p, q), max(p, q))
            sep1, miss1 = _separated(A[:, p], B[:, q])
            sep2, miss2 = _separated(A[:, q], B[:, p])
            if sep1 and sep2:
                continue
            if miss1 or miss2:
                unresolved.add(pair)
            else:
                failing.add(pair)
    return ConditionResult(condition, sorted(failing), sorted(unresolved - failing))


def condition_witness(Mx: ColoringMatrix, condition: str, i: int, j: int) -> int | None:
    """Least quandle index separating the ordered pair ``(i, j)``."""
    A, B = _condition_sides(Mx, condition)
    a, b = A[:, i], B[:, j]
    hit = np.flatnonzero((a != MISSING) & (b != MISSING) & (a != b))
    return int(hit[0]) if hit.size else None


@dataclass
class DistinguishingReport:
    knots: list[str]
    conditions: dict[str, ConditionResult]

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.conditions.values())

    def as_dict(self, Mx: ColoringMatrix | None = None) -> dict:
        out = {"schema": SCHEMA, "knot_count": len(self.knots), "conditions": {}}
        for name, c in self.conditions.items():
            entry = {
                "holds": c.holds,
                "failing_pairs": [[self.knots[i], self.knots[j]] for i, j in c.failing_pairs],
                "poisoned_pairs": [[self.knots[i], self.knots[j]] for i, j in c.poisoned_pairs],
            }
            if Mx is not None:
                bad = set(c.failing_pairs) | set(c.poisoned_pairs)
                entry["witnesses"] = [
                    {"pair": [self.knots[i], self.knots[j]], "quandles": [Mx.names[k] for k in _pair_witness(Mx, name, i, j)]}
                    for i, j in combinations(range(len(self.knots)), 2)
                    if (i, j) not in bad
                ]
            out["conditions"][name] = entry
        return out


def _pair_witness(Mx: ColoringMatrix, condition: str, i: int, j: int) -> tuple[int, int]:
    """Least separating quandle for ``(i, j)`` and for ``(j, i)``; equal for condition 1."""
    return condition_witness(Mx, condition, i, j), condition_witness(Mx, condition, j, i)


def check_distinguishing(Mx: ColoringMatrix) -> DistinguishingReport:
    return DistinguishingReport(Mx.knot_names, {c: _check_condition(Mx, c) for c in CONDITIONS})


@dataclass
class Prop35Report:
    knots: list[str]
    conditions: dict[str, ConditionResult]
    d_checked: bool
    d_failures: list[int]
    d_poisoned: list[int]

    @property
    def abc_hold(self) -> bool:
        return all(c.holds for c in self.conditions.values())

    @property
    def d_holds(self) -> bool:
        return self.d_checked and not self.d_failures and not self.d_poisoned

    @property
    def conclusion(self) -> str:
        """What the conditions prove for every pair of distinct corpus knots."""
        if not self.abc_hold:
            return "none"
        if self.d_holds:
            return "distinct knots, and each knot is determined up to rm"
        return "distinct symmetry orbits"

    def as_dict(self) -> dict:
        labels = {"1": "A", "2": "B", "3": "C"}
        out = {
            "schema": SCHEMA,
            "knot_count": len(self.knots),
            "conditions": {
                labels[k]: {
                    "holds": c.holds,
                    "failing_pairs": [[self.knots[i], self.knots[j]] for i, j in c.failing_pairs],
                    "poisoned_pairs": [[self.knots[i], self.knots[j]] for i, j in c.poisoned_pairs],
                }
                for k, c in self.conditions.items()
            },
            "abc_hold": self.abc_hold,
            "conclusion": self.conclusion,
        }
        if self.d_checked:
            out["conditions"]["D"] = {
                "holds": self.d_holds,
                "failing_knots": [self.knots[j] for j in self.d_failures],
                "poisoned_knots": [self.knots[j] for j in self.d_poisoned],
            }
        return out


def mirror_failures(Mx: ColoringMatrix) -> tuple[list[int], list[int]]:
    """Chiral or negative amphicheiral knots whose column equals the mirror column."""
    M, Mm = Mx.entries, Mx.mirror_entries()
    failing, poisoned = [], []
    for j, k in enumerate(Mx.knots):
        if not k.mirror_distinguishable:
            continue
        sep, miss = _separated(M[:, j], Mm[:, j])
        if sep:
            continue
        (poisoned if miss else failing).append(j)
    return failing, poisoned


def check_prop35(Mx: ColoringMatrix, condition_d: bool = True) -> Prop35Report:
    conds = {c: _check_condition(Mx, c) for c in CONDITIONS}
    d_fail, d_pois = mirror_failures(Mx) if condition_d else ([], [])
    return Prop35Report(Mx.knot_names, conds, condition_d, d_fail, d_pois)


# ---------------------------------------------------------------------------
# similarity partition


@dataclass
class SimilarityPartition:
    names: list[str]
    blocks: list[list[int]]
    excluded_knots: list[str]

    def as_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "block_count": len(self.blocks),
            "blocks": [[self.names[i] for i in b] for b in self.blocks],
            "excluded_knots": self.excluded_knots,
            "scope": "corpus-restricted; equality beyond the corpus is conjectural",
        }


def similarity_partition(Mx: ColoringMatrix) -> SimilarityPartition:
    """Group quandles with identical rows, using only knots without missing cells."""
    bad = sorted({j for _, j in Mx.missing})
    keep = [j for j in range(len(Mx.knots)) if j not in set(bad)]
    rows = Mx.entries[:, keep]
    blocks: dict[bytes, list[int]] = {}
    for i in range(rows.shape[0]):
        blocks.setdefault(rows[i].tobytes(), []).append(i)
    ordered = sorted(blocks.values(), key=lambda b: b[0])
    return SimilarityPartition(Mx.names, ordered, [Mx.knots[j].name for j in bad])


# ---------------------------------------------------------------------------
# bounds


def lq(order: int, total: int) -> int:
    """Least ``e`` with ``order**e >= total`` (exact integer arithmetic)."""
    if order < 2:
        raise QuandleLabError("Lq needs a quandle of order at least 2")
    if total < 1:
        raise QuandleLabError("coloring total must be positive")
    e, power = 0, 1
    while power < total:
        power *= order
        e += 1
    return e


# u interval -> (label, NI interval, narrowed u interval) when MLq^F = 3
U_CASES = {
    (2, 2): ("U1", (2, 2), (2, 2)),
    (1, 2): ("U2", (2, 2), (2, 2)),
    (3, 3): ("U3", (2, 3), (3, 3)),
    (2, 3): ("U4", (2, 3), (2, 3)),
    (1, 3): ("U5", (2, 3), (2, 3)),
    (2, 4): ("U6", (2, 4), (2, 4)),
    (3, 4): ("U6", (2, 4), (3, 4)),
    (4, 4): ("U6", (2, 4), (4, 4)),
}


@dataclass(frozen=True)
class UnknottingCase:
    label: str | None
    nakanishi: tuple[int, int] | None
    unknotting: tuple[int, int] | None


def classify_unknotting(mlq_f: int, u: tuple[int, int]) -> UnknottingCase:
    """Case label for a knot with ``MLq^F = 3`` and a known unknotting interval.

    ``NI >= MLq^F - 1 = 2`` and ``NI <= u``.  Intervals outside the case table
    are reported unclassified with the generic narrowing.
    """
    if mlq_f != 3:
        raise QuandleLabError("the unknotting case table applies only when MLq^F = 3")
    lo, hi = u
    if hi < 2:
        raise DataError(f"unknotting interval {lo}..{hi} contradicts NI >= 2")
    if (lo, hi) in U_CASES:
        label, ni, nu = U_CASES[(lo, hi)]
        return UnknottingCase(label, ni, nu)
    return UnknottingCase(None, (2, hi), (max(lo, 2), hi))


@dataclass
class BoundReport:
    knot: str
    lq_per_quandle: dict[str, int]
    mlq: int
    mlq_f: int | None
    bridge_lower: int
    nakanishi_lower: int | None
    tunnel: int | None = None
    tunnel_witness: str | None = None
    unknotting_case: UnknottingCase | None = None
    nakanishi: tuple[int, int] | None = None
    data_errors: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        def iv(x):
            return None if x is None else list(x)

        case = self.unknotting_case
        return {
            "knot": self.knot,
            "lq_per_quandle": self.lq_per_quandle,
            "mlq": self.mlq,
            "mlq_f": self.mlq_f,
            "bridge_lower": self.bridge_lower,
            "nakanishi_lower": self.nakanishi_lower,
            "nakanishi": iv(self.nakanishi),
            "tunnel": self.tunnel,
            "tunnel_witness": self.tunnel_witness,
            "unknotting_case": None
            if case is None
            else {"label": case.label, "nakanishi": iv(case.nakanishi), "unknotting": iv(case.unknotting)},
            "data_errors": self.data_errors,
        }


def bound_report(
    Mx: ColoringMatrix,
    known: dict[str, dict[str, tuple[int, int]]] | None = None,
    simple_alexander: Sequence[int] | None = None,
) -> list[BoundReport]:
    """Per-knot Lq bounds relative to the quandle list of ``Mx``.

    ``known`` maps knot names to ``{"bridge"|"unknotting"|"nakanishi": (lo, hi)}``;
    values from the knot records are used when a knot is absent from it.
    """
    simple = list(Mx.simple_alexander if simple_alexander is None else simple_alexander)
    totals = Mx.totals()
    reports = []
    for j, k in enumerate(Mx.knots):
        col = Mx.entries[:, j]
        rows = [i for i in range(len(Mx.names)) if col[i] != MISSING]
        lqs = {Mx.names[i]: lq(Mx.orders[i], int(totals[i, j])) for i in rows}
        mlq = max(lqs.values(), default=0)
        simple_lqs = [lqs[Mx.names[i]] for i in simple if i in rows]
        mlq_f = max(simple_lqs) if simple_lqs else None
        ni_lo = max(mlq_f - 1, 0) if mlq_f is not None else None
        rep = BoundReport(k.name, lqs, mlq, mlq_f, mlq, ni_lo)
        facts = dict(k.known)
        if known and k.name in known:
            facts.update(known[k.name])

        bridge = facts.get("bridge")
        if bridge is not None and bridge[1] < mlq:
            rep.data_errors.append(f"bridge index {bridge[1]} is below the coloring bound {mlq}")
        if bridge is not None and bridge[0] == bridge[1]:
            for i in simple:
                if i in rows and lqs[Mx.names[i]] == bridge[0]:
                    rep.tunnel = bridge[0] - 1
                    rep.tunnel_witness = Mx.names[i]
                    break

        ni_hi = None
        if bridge is not None:
            ni_hi = bridge[1] - 1
        u = facts.get("unknotting")
        if u is not None:
            ni_hi = u[1] if ni_hi is None else min(ni_hi, u[1])
            if mlq_f == 3:
                try:
                    rep.unknotting_case = classify_unknotting(3, u)
                except DataError as exc:
                    rep.data_errors.append(str(exc))
        ni_known = facts.get("nakanishi")
        if ni_known is not None:
            ni_hi = ni_known[1] if ni_hi is None else min(ni_hi, ni_known[1])
        if ni_lo is not None:
            if ni_hi is not None and ni_hi < ni_lo:
                rep.data_errors.append(f"Nakanishi upper bound {ni_hi} is below the coloring bound {ni_lo}")
            else:
                rep.nakanishi = (ni_lo, ni_hi) if ni_hi is not None else None
        reports.append(rep)
    return reports


def load_known(path) -> dict[str, dict[str, tuple[int, int]]]:
    """Read ``name[,bridge][,unknotting][,nakanishi]`` CSV rows of known invariants."""
    import csv

    from .knots import KNOWN_COLUMNS, parse_interval

    out: dict[str, dict[str, tuple[int, int]]] = {}
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if "name" not in (reader.fieldnames or ()):
            raise DataError(f"{path}: missing column 'name'")
        for row in reader:
            facts = {}
            for col in KNOWN_COLUMNS:
                try:
                    iv = parse_interval(row.get(col) or "")
                except ValueError as exc:
                    raise DataError(f"{path}:{reader.line_num}: {exc}") from exc
                if iv is not None:
                    facts[col] = iv
            out[row["name"].strip()] = facts
    return out


# ---------------------------------------------------------------------------
# greedy minimization

GOALS = ("1", "2", "3", "A", "B", "C", "D", "ABC", "ABCD")


def _refine(labels: np.ndarray, values: np.ndarray) -> np.ndarray:
    _, inv = np.unique(np.stack([labels, values], axis=1), axis=0, return_inverse=True)
    return inv.ravel()


class _Cover:
    """Unseparated checks of one goal under a growing set of rows.

    Columns with equal labels agree on every chosen row, so unseparated
    pairs are counted per label class instead of pair by pair.
    """

    def __init__(self, Mx: ColoringMatrix, goal: str):
        parts = {"A": "1", "B": "2", "C": "3", "ABC": "123", "ABCD": "123D"}.get(goal, goal)
        self.M, self.Mm = Mx.entries, Mx.mirror_entries()
        n = self.M.shape[1]
        self.parts = parts
        self.labels = {p: np.zeros(2 * n if p == "2" else n, dtype=np.int64) for p in parts if p != "D"}
        self.d_cols = [j for j, k in enumerate(Mx.knots) if k.mirror_distinguishable]
        self.d_sep = np.zeros(len(self.d_cols), dtype=bool)

    def _row_values(self, part: str, k: int) -> np.ndarray:
        if part == "1":
            return self.M[k]
        if part == "3":
            return self.Mm[k]
        return np.concatenate([self.M[k], self.Mm[k]])

    def _state_after(self, rows: Sequence[int]):
        labels = dict(self.labels)
        d_sep = self.d_sep.copy()
        for k in rows:
            for part in labels:
                labels[part] = _refine(labels[part], self._row_values(part, k))
            if self.d_cols:
                d_sep |= self.M[k, self.d_cols] != self.Mm[k, self.d_cols]
        return labels, d_sep

    @staticmethod
    def _count(part: str, lab: np.ndarray) -> int:
        if part != "2":
            c = np.bincount(lab)
            return int((c * (c - 1) // 2).sum())
        n = lab.size // 2
        a, b = lab[:n], lab[n:]
        size = lab.max() + 1
        ordered = int((np.bincount(a, minlength=size) * np.bincount(b, minlength=size)).sum())
        return ordered - int((a == b).sum())

    def unseparated(self, rows: Sequence[int] = ()) -> int:
        labels, d_sep = self._state_after(rows)
        total = sum(self._count(p, lab) for p, lab in labels.items())
        if "D" in self.parts:
            total += int((~d_sep).sum())
        return total

    def add(self, rows: Sequence[int]) -> None:
        self.labels, self.d_sep = self._state_after(rows)


def minimize_set(Mx: ColoringMatrix, goal: str = "ABC") -> list[int]:
    """Greedy cover: repeatedly take the quandle that separates the most
    remaining checks, ties to the least index.

    For goals reading mirror columns (2, 3, D) a quandle enters together
    with its dual so that the chosen list stays closed under duals.
    """
    if goal not in GOALS:
        raise QuandleLabError(f"unknown goal {goal!r}")
    if Mx.missing:
        raise QuandleLabError("cannot minimize over a matrix with missing cells")
    uses_duals = any(c in goal for c in "23BCD")
    rows = Mx.entries.shape[0]
    if _Cover(Mx, goal).unseparated(range(rows)):
        raise QuandleLabError(f"the full quandle list does not satisfy goal {goal}")

    def unit(r: int) -> list[int]:
        return sorted({r, Mx.dual_index[r]}) if uses_duals else [r]

    cover = _Cover(Mx, goal)
    chosen: list[int] = []
    remaining = cover.unseparated()
    while remaining:
        best, best_left = None, None
        for r in range(rows):
            if r in chosen:
                continue
            left = cover.unseparated([u for u in unit(r) if u not in chosen])
            if best_left is None or left < best_left:
                best, best_left = r, left
        new = [u for u in unit(best) if u not in chosen]
        cover.add(new)
        chosen = sorted(chosen + new)
        remaining = best_left
    return chosen


def parse_symmetry_map(data: dict[str, str]) -> dict[str, str]:
    return {k: normalize_symmetry(v) for k, v in data.items()}
