"""Text formats: quandle and Cayley matrix files, hom and cocycle files,
constructor spec strings and quandle manifests.

Element labels in files are 1-based; everything in memory is 0-based.
Cocycle values are elements of Z_m and are written as-is.
"""

from __future__ import annotations

import re
import shlex
from pathlib import Path

import numpy as np

from .constructions import (
    AlexanderSpec,
    Cocycle2,
    GroupModel,
    abelian_extension,
    abelian_group,
    alexander_field,
    alexander_general,
    conjugation_quandle,
    dihedral_quandle,
    galkin_quandle,
    generalized_alexander,
    symmetric_group,
    trivial_quandle,
    validate_cocycle,
)
from .core import QuandleHom, QuandleTable, product, validate
from .errors import DataError, QuandleLabError

SCHEMA = "quandle-lab/1"
QUANDLE_SUFFIXES = (".qdl", ".txt")


def _int_rows(path: Path) -> list[list[int]]:
    text = path.read_text(encoding="utf-8")
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([int(t) for t in re.split(r"[\s,]+", line)])
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: {exc}") from exc
    return rows


def read_matrix_file(path) -> np.ndarray:
    """``n`` on the first line, then ``n`` rows of ``n`` labels in ``1..n``."""
    path = Path(path)
    rows = _int_rows(path)
    if not rows or len(rows[0]) != 1:
        raise DataError(f"{path}: first line must hold the order n")
    n = rows[0][0]
    body = rows[1:]
    if n < 1 or len(body) != n or any(len(r) != n for r in body):
        raise DataError(f"{path}: expected {n} rows of {n} entries")
    A = np.array(body, dtype=np.int64)
    if A.min() < 1 or A.max() > n:
        raise DataError(f"{path}: entries must lie in 1..{n}")
    return A - 1


def write_matrix_file(table, path) -> None:
    T = np.asarray(table, dtype=np.int64)
    lines = [str(T.shape[0])] + [" ".join(str(v + 1) for v in row) for row in T.tolist()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_quandle(path, transpose: bool = False) -> QuandleTable:
    """Read and validate a quandle matrix file.

    ``transpose`` converts sources written with the left-distributive
    convention, where the entry at row i, column j is ``j * i``.
    """
    A = read_matrix_file(path)
    if transpose:
        A = A.T
    Q = validate(A)
    return QuandleTable(Q.table, name=Path(path).stem)


def write_quandle(Q: QuandleTable, path) -> None:
    write_matrix_file(Q.table, path)


def read_cayley(path) -> GroupModel:
    return GroupModel(read_matrix_file(path), name=Path(path).stem)


def read_hom(path, domain: QuandleTable, codomain: QuandleTable) -> QuandleHom:
    """One 1-based image per line, in domain order."""
    path = Path(path)
    images = [v for row in _int_rows(path) for v in row]
    if len(images) != domain.order:
        raise DataError(f"{path}: expected {domain.order} images, found {len(images)}")
    if min(images) < 1 or max(images) > codomain.order:
        raise DataError(f"{path}: images must lie in 1..{codomain.order}")
    return QuandleHom(domain, codomain, tuple(v - 1 for v in images))


def write_hom(f: QuandleHom, path) -> None:
    Path(path).write_text("\n".join(str(v + 1) for v in f.map) + "\n", encoding="utf-8")


def read_cocycle(path, base: QuandleTable) -> Cocycle2:
    """``n m`` on the first line, then ``n`` rows of ``n`` values in ``0..m-1``."""
    path = Path(path)
    rows = _int_rows(path)
    if not rows or len(rows[0]) != 2:
        raise DataError(f"{path}: first line must be 'n m'")
    n, m = rows[0]
    if n != base.order:
        raise DataError(f"{path}: cocycle is for order {n}, base has order {base.order}")
    body = rows[1:]
    if len(body) != n or any(len(r) != n for r in body):
        raise DataError(f"{path}: expected {n} rows of {n} values")
    return validate_cocycle(base, m, np.array(body, dtype=np.int64))


def write_cocycle(phi: Cocycle2, path) -> None:
    lines = [f"{phi.base.order} {phi.modulus}"] + [" ".join(map(str, r)) for r in phi.values.tolist()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# constructor specs


def parse_group(text: str, base_dir: Path | None = None) -> GroupModel:
    """``Z4``, ``Z2xZ2``, ``S3``, or a path to a Cayley table file."""
    text = text.strip()
    if re.fullmatch(r"S\d+", text):
        return symmetric_group(int(text[1:]))[0]
    if re.fullmatch(r"Z\d+(xZ\d+)*", text):
        return abelian_group([int(t) for t in re.findall(r"\d+", text)])
    path = Path(text)
    if base_dir is not None and not path.is_absolute():
        path = base_dir / path
    if path.exists():
        return read_cayley(path)
    raise QuandleLabError(f"unknown group {text!r}")


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _kv(tokens: list[str]) -> dict[str, str]:
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise QuandleLabError(f"expected key=value, got {tok!r}")
        k, v = tok.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _need(kv: dict[str, str], *keys: str) -> list[str]:
    missing = [k for k in keys if k not in kv]
    if missing:
        raise QuandleLabError(f"missing parameter(s) {', '.join(missing)}")
    return [kv[k] for k in keys]


def parse_quandle_spec(text: str, base_dir: Path | None = None) -> QuandleTable:
    """Build a quandle from a constructor spec string.

    Families::

        trivial n=3
        dihedral n=5
        alexander p=2 h=1,1,1 [mult=0,1]      # coefficients constant first
        alexgen A=Z5 f=1,3,5,2,4              # automorphism as 1-based images
        genalex G=S3 f=...                    # same for any group
        conj group=S4 seed=10                 # 1-based group element; G= also works
        galkin A=Z2 tau=0,0,1                 # tau values as 0-based elements
        extension base=<file> cocycle=<file>
        product <spec> ; <spec>
        file=<path> [transpose]
    """
    text = text.strip()
    if " ; " in text and text.startswith("product "):
        left, right = text[len("product ") :].split(" ; ", 1)
        return product(parse_quandle_spec(left, base_dir), parse_quandle_spec(right, base_dir))
    tokens = shlex.split(text)
    if not tokens:
        raise QuandleLabError("empty quandle spec")
    family, rest = tokens[0], tokens[1:]
    if family.startswith("file="):
        path = _resolve(family[5:], base_dir)
        return read_quandle(path, transpose="transpose" in rest)
    flags = [t for t in rest if "=" not in t]
    if flags:
        raise QuandleLabError(f"unexpected token(s) {flags}")
    kv = _kv(rest)
    if "group" in kv:
        kv.setdefault("G", kv["group"])
        kv.setdefault("A", kv["group"])
    if family == "trivial":
        return trivial_quandle(int(_need(kv, "n")[0]))
    if family == "dihedral":
        return dihedral_quandle(int(_need(kv, "n")[0]))
    if family == "alexander":
        p, h = _need(kv, "p", "h")
        spec = AlexanderSpec(int(p), tuple(_ints(h)))
        mult = tuple(_ints(kv["mult"])) if "mult" in kv else None
        Q = alexander_field(spec, mult)
        return QuandleTable(Q.table, name=text)
    if family in ("alexgen", "genalex"):
        g, f = _need(kv, "A" if family == "alexgen" else "G", "f")
        G = parse_group(g, base_dir)
        images = [v - 1 for v in _ints(f)]
        Q = alexander_general(G, images) if family == "alexgen" else generalized_alexander(G, images)
        return QuandleTable(Q.table, name=text)
    if family == "conj":
        g, seed = _need(kv, "G", "seed")
        Q, _ = conjugation_quandle(parse_group(g, base_dir), int(seed) - 1)
        return QuandleTable(Q.table, name=text)
    if family == "galkin":
        a, tau = _need(kv, "A", "tau")
        return QuandleTable(galkin_quandle(parse_group(a, base_dir), _ints(tau)).table, name=text)
    if family == "extension":
        base_path, coc_path = _need(kv, "base", "cocycle")
        base = read_quandle(_resolve(base_path, base_dir))
        phi = read_cocycle(_resolve(coc_path, base_dir), base)
        return QuandleTable(abelian_extension(phi).table, name=text)
    raise QuandleLabError(f"unknown quandle family {family!r}")


def _resolve(path: str, base_dir: Path | None) -> Path:
    p = Path(path)
    if base_dir is not None and not p.is_absolute():
        p = base_dir / p
    return p


def load_quandle(arg: str, transpose: bool = False) -> QuandleTable:
    """A matrix file path, or a constructor spec string."""
    path = Path(arg)
    if path.is_file():
        return read_quandle(path, transpose=transpose)
    if "=" not in arg and len(arg.split()) == 1:
        # every constructor family takes parameters, so a bare token names a file
        raise FileNotFoundError(f"no such quandle file: {arg}")
    return parse_quandle_spec(arg)


def load_quandle_list(arg) -> list[tuple[str, QuandleTable]]:
    """A directory of matrix files (sorted by name) or a manifest file.

    Manifest lines are ``name: spec``; blank lines and ``#`` comments are skipped.
    """
    path = Path(arg)
    if path.is_dir():
        files = sorted(p for p in path.iterdir() if p.suffix in QUANDLE_SUFFIXES)
        if not files:
            raise DataError(f"{path}: no quandle files")
        return [(p.stem, read_quandle(p)) for p in files]
    out = []
    names = set()
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise DataError(f"{path}:{lineno}: expected 'name: spec'")
        name, spec = (s.strip() for s in line.split(":", 1))
        if name in names:
            raise DataError(f"{path}:{lineno}: duplicate quandle name {name!r}")
        try:
            Q = parse_quandle_spec(spec, base_dir=path.parent)
        except (QuandleLabError, OSError, ValueError) as exc:
            raise DataError(f"{path}:{lineno}: {exc}") from exc
        names.add(name)
        out.append((name, QuandleTable(Q.table, name=name)))
    return out
