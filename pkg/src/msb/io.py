"""Text formats for barcodes, presentations, chain pairs, bifiltrations.

Four whitespace-tokenized formats, one object per file, with ``#``
starting a comment that runs to end of line:

``sbarc 1``
    ``n <dim>``, then ``positive <count>`` followed by count grade
    lines, then ``negative <count>`` likewise.

``mpres 1``
    ``field <p>``, ``n <dim>``, ``gens <count>`` followed by count
    grade lines, then ``rels <count>`` followed by one line per
    relation: the grade, an entry count, and that many ``row:coeff``
    pairs.

``mchain 1``
    ``field <p>``, ``n <dim>``, then blocks ``Z``, ``Y``, ``X``.  The
    ``Z`` block lists target grades; each ``Y`` line carries a grade
    plus a sparse column of the map into Z (row references are Z
    indices); each ``X`` line likewise defines a column of the map
    into Y.

``mbif 1``
    ``field <p>``, ``n <dim>``, ``cells <count>``, then one line per
    cell: its dimension, its grade, an entry count, and that many
    ``index:coeff`` boundary pairs referring to earlier cells.

Serialization is canonical: barcodes are emitted in sorted order,
floats use the shortest decimal that round-trips (integral values drop
the fractional part), and sparse entries are sorted by index, so equal
objects always produce identical bytes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .algebra import (
    ChainPair,
    GradedMatrix,
    Presentation,
    _is_prime,
    homology_presentation,
)
from .grades import Barcode, SignedBarcode, as_grade, leq


class ParseError(ValueError):
    """Input rejected, with the line and column of the offending token."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            where = "line %d" % line
            if column is not None:
                where += ", column %d" % column
            message = "%s: %s" % (where, message)
        super().__init__(message)


def fmt_float(v: float) -> str:
    """Shortest round-trip decimal; integral values print as integers."""
    if v != v or v in (float("inf"), float("-inf")):
        return repr(v)
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


_TOKEN_RE = re.compile(r"\S+")


class _Tokens:
    """Token stream with line/column tracking and typed readers."""

    def __init__(self, text: str):
        toks = []
        for lineno, line in enumerate(text.splitlines(), 1):
            hash_at = line.find("#")
            if hash_at >= 0:
                line = line[:hash_at]
            for m in _TOKEN_RE.finditer(line):
                toks.append((m.group(), lineno, m.start() + 1))
        self._toks = toks
        self._pos = 0
        self._last = (1, 1)

    def next(self, what: str) -> tuple[str, int, int]:
        if self._pos >= len(self._toks):
            raise ParseError("unexpected end of input, expected %s" % what, *self._last)
        tok = self._toks[self._pos]
        self._pos += 1
        self._last = (tok[1], tok[2])
        return tok

    def pos(self) -> tuple[int, int]:
        if self._pos < len(self._toks):
            tok = self._toks[self._pos]
            return tok[1], tok[2]
        return self._last

    def keyword(self, word: str) -> None:
        tok, line, col = self.next("'%s'" % word)
        if tok != word:
            raise ParseError("expected '%s', got '%s'" % (word, tok), line, col)

    def int_(self, what: str) -> int:
        tok, line, col = self.next(what)
        try:
            return int(tok)
        except ValueError:
            raise ParseError("expected integer %s, got '%s'" % (what, tok), line, col)

    def count(self, what: str) -> int:
        tok, line, col = self.next(what)
        try:
            n = int(tok)
        except ValueError:
            raise ParseError("expected count %s, got '%s'" % (what, tok), line, col)
        if n < 0:
            raise ParseError("%s must be nonnegative, got %d" % (what, n), line, col)
        return n

    def float_(self, what: str) -> float:
        tok, line, col = self.next(what)
        try:
            v = float(tok)
        except ValueError:
            raise ParseError("expected number %s, got '%s'" % (what, tok), line, col)
        if v != v or v in (float("inf"), float("-inf")):
            raise ParseError("%s must be finite, got '%s'" % (what, tok), line, col)
        return v

    def grade(self, n: int, what: str) -> tuple:
        return tuple(self.float_("%s coordinate" % what) for _ in range(n))

    def pair(self, what: str, limit: int, field: int) -> tuple[int, int]:
        tok, line, col = self.next(what)
        head, sep, tail = tok.partition(":")
        if not sep:
            raise ParseError("expected index:coeff pair for %s, got '%s'" % (what, tok), line, col)
        try:
            idx = int(head)
            coeff = int(tail)
        except ValueError:
            raise ParseError("malformed pair '%s' for %s" % (tok, what), line, col)
        if not 0 <= idx < limit:
            raise ParseError(
                "index %d out of range [0, %d) for %s" % (idx, limit, what), line, col
            )
        if not 0 < coeff < field:
            raise ParseError(
                "coefficient %d outside [1, %d) for %s" % (coeff, field, what), line, col
            )
        return idx, coeff

    def done(self) -> None:
        if self._pos < len(self._toks):
            tok, line, col = self._toks[self._pos]
            raise ParseError("trailing input '%s'" % tok, line, col)

    def header(self, magic: str) -> None:
        self.keyword(magic)
        tok, line, col = self.next("format version")
        if tok != "1":
            raise ParseError("unsupported %s version '%s'" % (magic, tok), line, col)

    def field(self) -> int:
        self.keyword("field")
        tok, line, col = self.next("field order")
        try:
            p = int(tok)
        except ValueError:
            raise ParseError("expected field order, got '%s'" % tok, line, col)
        if p < 2 or not _is_prime(p):
            raise ParseError("field order must be prime, got %d" % p, line, col)
        return p

    def ndim(self) -> int:
        self.keyword("n")
        tok, line, col = self.next("grade dimension")
        try:
            n = int(tok)
        except ValueError:
            raise ParseError("expected grade dimension, got '%s'" % tok, line, col)
        if n < 1:
            raise ParseError("grade dimension must be positive, got %d" % n, line, col)
        return n


def sniff_format(text: str) -> str:
    """First token of the file: one of sbarc, mpres, mchain, mbif."""
    toks = _Tokens(text)
    tok, line, col = toks.next("format magic")
    if tok not in ("sbarc", "mpres", "mchain", "mbif"):
        raise ParseError("unknown format '%s'" % tok, line, col)
    return tok


# ---------------------------------------------------------------------------
# sbarc


def parse_signed_barcode(text: str) -> SignedBarcode:
    t = _Tokens(text)
    t.header("sbarc")
    n = t.ndim()
    t.keyword("positive")
    pos = [t.grade(n, "bar") for _ in range(t.count("positive bar count"))]
    t.keyword("negative")
    neg = [t.grade(n, "bar") for _ in range(t.count("negative bar count"))]
    t.done()
    return SignedBarcode(Barcode(pos, dim=n), Barcode(neg, dim=n))


def serialize_signed_barcode(s: SignedBarcode) -> str:
    dim = s.dim
    if dim is None:
        dim = 1
    lines = ["sbarc 1", "n %d" % dim, "positive %d" % len(s.positive)]
    for g in s.positive:
        lines.append(" ".join(fmt_float(c) for c in g))
    lines.append("negative %d" % len(s.negative))
    for g in s.negative:
        lines.append(" ".join(fmt_float(c) for c in g))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# mpres


def parse_presentation(text: str) -> Presentation:
    t = _Tokens(text)
    t.header("mpres")
    field = t.field()
    n = t.ndim()
    t.keyword("gens")
    gens = [t.grade(n, "generator") for _ in range(t.count("generator count"))]
    t.keyword("rels")
    nrels = t.count("relation count")
    col_grades = []
    entries = {}
    rel_pos = []
    for j in range(nrels):
        rel_pos.append(t.pos())
        grade = t.grade(n, "relation %d" % j)
        col_grades.append(grade)
        nnz = t.count("entry count of relation %d" % j)
        for _ in range(nnz):
            i, coeff = t.pair("relation %d entry" % j, len(gens), field)
            entries[(i, j)] = coeff
    t.done()
    m = GradedMatrix(tuple(gens), tuple(col_grades), entries, field=field, dim=n)
    for (i, j) in sorted(m.entries):
        if not leq(m.row_grades[i], m.col_grades[j]):
            raise ParseError(
                "relation %d at grade %s has an entry on generator %d at grade %s, "
                "which is not below it"
                % (
                    j,
                    _grade_str(m.col_grades[j]),
                    i,
                    _grade_str(m.row_grades[i]),
                ),
                *rel_pos[j],
            )
    return Presentation(m.row_grades, m)


def _grade_str(g) -> str:
    return "(" + ", ".join(fmt_float(c) for c in g) + ")"


def _sparse_line(grade, col: dict) -> str:
    parts = [fmt_float(c) for c in grade]
    parts.append(str(len(col)))
    for i in sorted(col):
        parts.append("%d:%d" % (i, col[i]))
    return " ".join(parts)


def serialize_presentation(p: Presentation) -> str:
    dim = p.dim if p.dim is not None else 1
    lines = ["mpres 1", "field %d" % p.field, "n %d" % dim, "gens %d" % p.num_gens]
    for g in p.gens:
        lines.append(" ".join(fmt_float(c) for c in g))
    lines.append("rels %d" % p.num_rels)
    cols = p.rels.columns()
    for j, grade in enumerate(p.rels.col_grades):
        lines.append(_sparse_line(grade, cols[j]))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# mchain


def _parse_block(t: _Tokens, name: str, n: int, field: int, nrows: int):
    t.keyword(name)
    count = t.count("%s column count" % name)
    grades = []
    entries = {}
    for j in range(count):
        grade = t.grade(n, "%s column %d" % (name, j))
        grades.append(grade)
        nnz = t.count("entry count of %s column %d" % (name, j))
        for _ in range(nnz):
            i, coeff = t.pair("%s column %d entry" % (name, j), nrows, field)
            entries[(i, j)] = coeff
    return grades, entries


def parse_chain_pair(text: str) -> ChainPair:
    t = _Tokens(text)
    t.header("mchain")
    field = t.field()
    n = t.ndim()
    t.keyword("Z")
    zcount = t.count("Z grade count")
    zgrades = [t.grade(n, "Z grade") for _ in range(zcount)]
    ygrades, gentries = _parse_block(t, "Y", n, field, zcount)
    xgrades, fentries = _parse_block(t, "X", n, field, len(ygrades))
    t.done()
    g = GradedMatrix(tuple(zgrades), tuple(ygrades), gentries, field=field, dim=n)
    f = GradedMatrix(tuple(ygrades), tuple(xgrades), fentries, field=field, dim=n)
    try:
        return ChainPair(f=f, g=g)
    except ValueError as e:
        raise ParseError(str(e))


def serialize_chain_pair(c: ChainPair) -> str:
    dim = c.g.dim if c.g.dim is not None else 1
    lines = ["mchain 1", "field %d" % c.g.field, "n %d" % dim]
    lines.append("Z %d" % c.g.num_rows)
    for grade in c.g.row_grades:
        lines.append(" ".join(fmt_float(x) for x in grade))
    gcols = c.g.columns()
    lines.append("Y %d" % c.g.num_cols)
    for j, grade in enumerate(c.g.col_grades):
        lines.append(_sparse_line(grade, gcols[j]))
    fcols = c.f.columns()
    lines.append("X %d" % c.f.num_cols)
    for j, grade in enumerate(c.f.col_grades):
        lines.append(_sparse_line(grade, fcols[j]))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# bifiltrations


@dataclass(frozen=True)
class Cell:
    """One cell: dimension, birth grade, sparse boundary over earlier cells."""

    dim: int
    grade: tuple
    boundary: tuple[tuple[int, int], ...]


class Bifiltration:
    """A one-critical filtered complex: cells with grades and boundaries.

    Validity: boundary references point to earlier cells of dimension
    one less, born at or below the referencing cell, coefficients lie
    in [1, field), and the composite boundary vanishes over the field.
    """

    __slots__ = ("cells", "field", "dim")

    def __init__(self, cells, field: int = 2, dim: int | None = None):
        norm = []
        for k, cell in enumerate(cells):
            grade = as_grade(cell.grade)
            if dim is None:
                dim = len(grade)
            elif len(grade) != dim:
                raise ValueError("cell %d grade has wrong dimension" % k)
            if cell.dim < 0:
                raise ValueError("cell %d has negative dimension" % k)
            for idx, coeff in cell.boundary:
                if not 0 <= idx < k:
                    raise ValueError(
                        "cell %d boundary references cell %d, not an earlier cell"
                        % (k, idx)
                    )
                face = norm[idx]
                if face.dim != cell.dim - 1:
                    raise ValueError(
                        "cell %d (dimension %d) has boundary cell %d of dimension %d"
                        % (k, cell.dim, idx, face.dim)
                    )
                if not leq(face.grade, grade):
                    raise ValueError(
                        "cell %d born at %s has boundary cell %d born later at %s"
                        % (k, _grade_str(grade), idx, _grade_str(face.grade))
                    )
                if not 0 < coeff % field:
                    raise ValueError(
                        "cell %d has zero boundary coefficient on cell %d" % (k, idx)
                    )
            norm.append(
                Cell(cell.dim, grade, tuple((i, c % field) for i, c in cell.boundary))
            )
        object.__setattr__(self, "cells", tuple(norm))
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "dim", dim)
        self._check_boundary_squared()

    def __setattr__(self, name, value):
        raise AttributeError("Bifiltration is immutable")

    def max_cell_dim(self) -> int:
        return max((c.dim for c in self.cells), default=-1)

    def cells_of_dim(self, d: int) -> list[int]:
        return [k for k, c in enumerate(self.cells) if c.dim == d]

    def boundary_matrix(self, d: int) -> GradedMatrix:
        """Boundary map from d-cells to (d-1)-cells as a graded matrix."""
        rows = self.cells_of_dim(d - 1)
        cols = self.cells_of_dim(d)
        rowpos = {k: i for i, k in enumerate(rows)}
        entries = {}
        for j, k in enumerate(cols):
            for idx, coeff in self.cells[k].boundary:
                entries[(rowpos[idx], j)] = coeff
        return GradedMatrix(
            tuple(self.cells[k].grade for k in rows),
            tuple(self.cells[k].grade for k in cols),
            entries,
            field=self.field,
            dim=self.dim,
        )

    def _check_boundary_squared(self):
        for d in range(2, self.max_cell_dim() + 1):
            prod = self.boundary_matrix(d - 1).matmul(self.boundary_matrix(d))
            if prod.entries:
                raise ValueError(
                    "boundary of boundary is nonzero in dimension %d" % d
                )

    def __eq__(self, other):
        if not isinstance(other, Bifiltration):
            return NotImplemented
        return self.cells == other.cells and self.field == other.field

    def __repr__(self):
        return "Bifiltration(%d cells, F_%d)" % (len(self.cells), self.field)


def parse_bifiltration(text: str, field: int | None = None) -> Bifiltration:
    t = _Tokens(text)
    t.header("mbif")
    file_field = t.field()
    n = t.ndim()
    t.keyword("cells")
    count = t.count("cell count")
    p = file_field if field is None else field
    cells = []
    for k in range(count):
        d = t.int_("dimension of cell %d" % k)
        grade = t.grade(n, "cell %d" % k)
        nnz = t.count("boundary size of cell %d" % k)
        boundary = tuple(
            t.pair("cell %d boundary" % k, k, p) for _ in range(nnz)
        )
        cells.append(Cell(d, grade, boundary))
    t.done()
    try:
        return Bifiltration(cells, field=p, dim=n)
    except ValueError as e:
        raise ParseError(str(e))


def serialize_bifiltration(b: Bifiltration) -> str:
    dim = b.dim if b.dim is not None else 1
    lines = ["mbif 1", "field %d" % b.field, "n %d" % dim, "cells %d" % len(b.cells)]
    for cell in b.cells:
        parts = [str(cell.dim)]
        parts.extend(fmt_float(c) for c in cell.grade)
        parts.append(str(len(cell.boundary)))
        parts.extend("%d:%d" % (i, c) for i, c in cell.boundary)
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def chain_to_presentation(bif: Bifiltration, degree: int = 0) -> Presentation:
    """Presentation of the degree-d homology of a bifiltration.

    Builds the boundary pair around degree ``degree`` and delegates to
    :func:`homology_presentation`; the result is not necessarily
    minimal.
    """
    if degree < 0:
        raise ValueError("homology degree must be nonnegative, got %d" % degree)
    g = bif.boundary_matrix(degree)
    f = bif.boundary_matrix(degree + 1)
    return homology_presentation(ChainPair(f=f, g=g))


# ---------------------------------------------------------------------------


_PARSERS = {
    "sbarc": parse_signed_barcode,
    "mpres": parse_presentation,
    "mchain": parse_chain_pair,
    "mbif": parse_bifiltration,
}


def parse_any(text: str):
    """Parse a document of any supported format by its magic token."""
    return _PARSERS[sniff_format(text)](text)
