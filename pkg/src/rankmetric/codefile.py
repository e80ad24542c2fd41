"""Reading and writing the plain-text code file format.

    rankcode v1
    field GF(3)
    ext GF(3^2; 1,2,2)          # gabidulin only
    shape 2 2 gabidulin         # k m kind
    basis 1, z+1                # optional, gabidulin only
    gen
    z+1, 2

    gen
    1, z

A delsarte block is one k x m matrix (rows separated by ';' or newlines);
a gabidulin block is one vector of length k over the extension.  Blocks are
separated by blank lines, '#' starts a comment.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .delsarte import DelsarteCode
from .finite_field import ExtensionSpec, FieldBasis, FieldError, FieldSpec, parse_extension, parse_field
from .gabidulin import GabidulinCode

log = logging.getLogger(__name__)

MAGIC = "rankcode v1"


class CodeFileError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class CodeFile:
    code: DelsarteCode | GabidulinCode
    basis: FieldBasis | None = None
    given: list[list[int]] | None = None  # generators exactly as written, before canonicalization

    @property
    def kind(self) -> str:
        return "gabidulin" if isinstance(self.code, GabidulinCode) else "delsarte"


def _ext_text(ext: ExtensionSpec) -> str:
    coeffs = ",".join(ext.base.format(c) for c in ext.modulus)
    return f"GF({ext.base.order}^{ext.degree}; {coeffs})"


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _elements(field, text: str, lineno: int) -> list[int]:
    try:
        return [field.parse(x) for x in text.split(",")]
    except (FieldError, ValueError) as exc:
        raise CodeFileError(str(exc), lineno) from exc


def parse_code(text: str) -> CodeFile:
    lines = text.splitlines()
    numbered = [(i + 1, _strip(l)) for i, l in enumerate(lines)]
    header = [(n, l) for n, l in numbered if l]
    if not header or header[0][1] != MAGIC:
        raise CodeFileError(f"expected '{MAGIC}' as the first line", header[0][0] if header else 1)

    pos = 1
    n, line = header[pos] if pos < len(header) else (len(lines), "")
    if not line.startswith("field "):
        raise CodeFileError("expected 'field GF(...)'", n)
    try:
        base = parse_field(line[len("field "):])
    except FieldError as exc:
        raise CodeFileError(str(exc), n) from exc
    if not isinstance(base, FieldSpec):
        raise CodeFileError("the field line must name a field over its prime field", n)
    pos += 1

    ext = None
    n, line = header[pos] if pos < len(header) else (len(lines), "")
    if line.startswith("ext "):
        try:
            ext = parse_extension(line[len("ext "):], base)
        except FieldError as exc:
            raise CodeFileError(str(exc), n) from exc
        pos += 1
        n, line = header[pos] if pos < len(header) else (len(lines), "")

    parts = line.split()
    if len(parts) != 4 or parts[0] != "shape":
        raise CodeFileError("expected 'shape k m kind'", n)
    try:
        k, m = int(parts[1]), int(parts[2])
    except ValueError as exc:
        raise CodeFileError("shape dimensions must be integers", n) from exc
    kind = parts[3]
    if k < 1 or m < 1:
        raise CodeFileError("shape dimensions must be positive", n)
    if kind not in ("delsarte", "gabidulin"):
        raise CodeFileError(f"unknown code kind {kind!r}", n)
    if kind == "gabidulin":
        if ext is None:
            raise CodeFileError("a gabidulin code needs an 'ext' line", n)
        if ext.degree != m:
            raise CodeFileError(f"shape m = {m} differs from the extension degree {ext.degree}", n)
    elif ext is not None:
        raise CodeFileError("'ext' is only allowed for gabidulin codes", n)
    shape_line = n
    pos += 1

    basis = None
    if pos < len(header) and header[pos][1].startswith("basis"):
        n, line = header[pos]
        if ext is None:
            raise CodeFileError("'basis' is only allowed for gabidulin codes", n)
        vals = _elements(ext, line[len("basis"):], n)
        try:
            basis = FieldBasis(ext, vals)
        except FieldError as exc:
            raise CodeFileError(str(exc), n) from exc
        pos += 1

    # generator blocks: everything after the header, blank lines kept as separators
    start = header[pos][0] if pos < len(header) else len(lines) + 1
    blocks: list[tuple[int, list[tuple[int, str]]]] = []
    current = None
    for n, line in numbered[start - 1:]:
        if not line:
            current = None
            continue
        if line == "gen" or line.startswith("gen "):
            current = []
            blocks.append((n, current))
            rest = line[3:].strip()
            if rest:
                current.append((n, rest))
            continue
        if current is None:
            raise CodeFileError("expected 'gen' to start a generator block", n)
        current.append((n, line))

    field = ext if ext is not None else base
    vectors = []
    for n0, rows in blocks:
        raw = [(n, r) for n, text in rows for r in text.split(";") if r.strip()]
        if not raw:
            raise CodeFileError("empty generator block", n0)
        parsed = [(n, _elements(field, r, n)) for n, r in raw]
        if kind == "gabidulin":
            if len(parsed) != 1 or len(parsed[0][1]) != k:
                raise CodeFileError(f"a gabidulin generator is one vector of length {k}", n0)
            vectors.append(parsed[0][1])
        else:
            if len(parsed) != k:
                raise CodeFileError(f"expected {k} rows, got {len(parsed)}", n0)
            for n, row in parsed:
                if len(row) != m:
                    raise CodeFileError(f"expected {m} entries, got {len(row)}", n)
            vectors.append([x for _, row in parsed for x in row])

    if kind == "gabidulin":
        code = GabidulinCode(ext, k, vectors)
        stored = code.basis
    else:
        code = DelsarteCode(base, k, m, vectors)
        stored = code.basis
    given = np.array(vectors, dtype=np.int64).reshape(len(vectors), -1) if vectors else stored
    if given.shape != stored.shape or not np.array_equal(given, stored):
        log.info("canonicalized %d generator(s) from line %d into a reduced basis of dimension %d", len(vectors), shape_line, code.dim)
    return CodeFile(code, basis, vectors)


def read_code(path) -> CodeFile:
    with open(path, encoding="utf-8") as fh:
        return parse_code(fh.read())


def format_code(code: DelsarteCode | GabidulinCode, basis: FieldBasis | None = None) -> str:
    """Canonical text form: header plus the reduced basis, one block per generator."""
    out = [MAGIC]
    if isinstance(code, GabidulinCode):
        ext = code.ext
        out += [f"field {ext.base}", f"ext {_ext_text(ext)}", f"shape {code.k} {ext.degree} gabidulin"]
        if basis is not None:
            out.append("basis " + ", ".join(ext.format(v) for v in basis.values))
        for row in code.basis.tolist():
            out += ["", "gen", ", ".join(ext.format(v) for v in row)]
    else:
        F = code.field
        out += [f"field {F}", f"shape {code.k} {code.m} delsarte"]
        for row in code.basis.tolist():
            mat = np.array(row).reshape(code.k, code.m)
            out += ["", "gen", "; ".join(", ".join(F.format(v) for v in r) for r in mat.tolist())]
    return "\n".join(out) + "\n"


def write_code(path, code, basis: FieldBasis | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_code(code, basis))
