"""Braid words, knot tables and symmetry orbits."""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .errors import DataError, NotAKnot, QuandleLabError

SYMMETRY_TYPES = (
    "reversible",
    "negative-amphicheiral",
    "positive-amphicheiral",
    "chiral",
    "fully-amphicheiral",
)


@dataclass(frozen=True)
class BraidWord:
    """Signed generators on ``strands`` strands; ``e > 0`` is sigma_e."""

    strands: int
    word: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(int(e) for e in self.word))
        if self.strands < 1:
            raise QuandleLabError("a braid needs at least one strand")
        for e in self.word:
            if e == 0 or abs(e) > self.strands - 1:
                raise QuandleLabError(f"letter {e} out of range for {self.strands} strands")

    def __len__(self):
        return len(self.word)

    def permutation(self) -> list[int]:
        """Final position of the strand starting at each position."""
        pos = list(range(self.strands))  # pos[s] = current position of strand s
        at = list(range(self.strands))  # at[i] = strand currently at position i
        for e in self.word:
            i = abs(e) - 1
            a, b = at[i], at[i + 1]
            at[i], at[i + 1] = b, a
            pos[a], pos[b] = i + 1, i
        return pos

    def components(self) -> int:
        perm = self.permutation()
        seen = [False] * self.strands
        count = 0
        for s in range(self.strands):
            if not seen[s]:
                count += 1
                while not seen[s]:
                    seen[s] = True
                    s = perm[s]
        return count

    def is_knot(self) -> bool:
        return self.components() == 1

    def render(self) -> str:
        return " ".join(str(e) for e in self.word)

    def __str__(self):
        return f"[{self.render()}] on {self.strands} strands"


def parse_braid(text: str, strands: int, require_knot: bool = True) -> BraidWord:
    tokens = [t for t in re.split(r"[\s,]+", text.strip().strip("[]{}")) if t]
    try:
        letters = [int(t) for t in tokens]
    except ValueError as exc:
        raise QuandleLabError(f"bad braid letter in {text!r}") from exc
    w = BraidWord(strands, tuple(letters))
    if require_knot and not w.is_knot():
        raise NotAKnot(w.components())
    return w


def mirror_word(w: BraidWord) -> BraidWord:
    return BraidWord(w.strands, tuple(-e for e in w.word))


def conjugate_word(w: BraidWord, letter: int) -> BraidWord:
    """``letter . w . letter^{-1}``."""
    return BraidWord(w.strands, (letter,) + w.word + (-letter,))


def stabilize(w: BraidWord, sign: int = 1) -> BraidWord:
    """Append sigma_b^{+-1} on one extra strand."""
    return BraidWord(w.strands + 1, w.word + (sign * w.strands,))


Interval = tuple[int, int]


def parse_interval(text: str) -> Interval | None:
    text = text.strip()
    if not text:
        return None
    if ".." in text:
        lo, hi = (int(v) for v in text.split("..", 1))
    else:
        lo = hi = int(text)
    if lo > hi:
        raise ValueError(f"empty interval {text!r}")
    return (lo, hi)


def format_interval(iv: Interval | None) -> str:
    if iv is None:
        return ""
    return str(iv[0]) if iv[0] == iv[1] else f"{iv[0]}..{iv[1]}"


def normalize_symmetry(label: str) -> str:
    norm = re.sub(r"[\s_]+", "-", label.strip().lower())
    if norm not in SYMMETRY_TYPES:
        raise DataError(f"unknown symmetry type {label!r}")
    return norm


@dataclass(frozen=True)
class KnotRecord:
    name: str
    braid: BraidWord
    symmetry: str
    known: dict[str, Interval] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "symmetry", normalize_symmetry(self.symmetry))

    @property
    def mirror_distinguishable(self) -> bool:
        """Only chiral and negative amphicheiral knots can differ from their mirror."""
        return self.symmetry in ("chiral", "negative-amphicheiral")


KNOWN_COLUMNS = ("bridge", "unknotting", "nakanishi")


def load_knot_table(path) -> list[KnotRecord]:
    """Read ``name,braid_index,word,symmetry[,bridge,unknotting,nakanishi]``."""
    path = Path(path)
    records: list[KnotRecord] = []
    names: set[str] = set()
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = {"name", "braid_index", "word", "symmetry"} - set(reader.fieldnames or ())
        if missing:
            raise DataError(f"{path}: missing columns {sorted(missing)}")
        for row in reader:
            line = reader.line_num
            name = row["name"].strip()
            if name in names:
                raise DataError(f"{path}:{line}: duplicate knot name {name!r}")
            try:
                strands = int(row["braid_index"])
                braid = parse_braid(row["word"], strands)
                known = {}
                for col in KNOWN_COLUMNS:
                    iv = parse_interval(row.get(col) or "")
                    if iv is not None:
                        known[col] = iv
                rec = KnotRecord(name, braid, row["symmetry"], known)
            except (QuandleLabError, ValueError) as exc:
                raise DataError(f"{path}:{line}: {exc}") from exc
            names.add(name)
            records.append(rec)
    return records


def write_knot_table(records: Sequence[KnotRecord], path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["name", "braid_index", "word", "symmetry", *KNOWN_COLUMNS])
        for r in records:
            w.writerow(
                [r.name, r.braid.strands, r.braid.render(), r.symmetry]
                + [format_interval(r.known.get(c)) for c in KNOWN_COLUMNS]
            )


# ---------------------------------------------------------------------------
# the group {1, r, m, rm}

ORBIT_LABELS = ("K", "m(K)", "r(K)", "rm(K)")

# labels identified by each symmetry type
_IDENTIFIED = {
    "reversible": [("K", "r(K)"), ("m(K)", "rm(K)")],
    "positive-amphicheiral": [("K", "m(K)"), ("r(K)", "rm(K)")],
    "negative-amphicheiral": [("K", "rm(K)"), ("m(K)", "r(K)")],
    "chiral": [],
    "fully-amphicheiral": [tuple(ORBIT_LABELS)],
}


@dataclass(frozen=True)
class KnotOrbit:
    representative: KnotRecord
    members: tuple[frozenset[str], ...]

    @property
    def size(self) -> int:
        return len(self.members)

    def labels(self) -> list[str]:
        """One label per distinct knot, taken in the order K, m(K), r(K), rm(K)."""
        return [min(m, key=ORBIT_LABELS.index) for m in self.members]


def symmetry_orbit(k: KnotRecord) -> KnotOrbit:
    groups = {label: {label} for label in ORBIT_LABELS}
    for same in _IDENTIFIED[k.symmetry]:
        merged = set().union(*(groups[s] for s in same))
        for s in merged:
            groups[s] = merged
    members = []
    for label in ORBIT_LABELS:
        g = frozenset(groups[label])
        if g not in members:
            members.append(g)
    return KnotOrbit(k, tuple(members))
