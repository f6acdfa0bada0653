"""Graded matrices over a prime field, presentations, and Betti barcodes.

A ``GradedMatrix`` records a map of free persistence modules: rows are
target generators, columns are source generators, and each carries a
grade.  The matrix is grade-valid when every nonzero entry sits in a
row whose grade is componentwise below its column's grade.  A
``Presentation`` is such a matrix read as generators (rows) and
relations (columns); the presented module is its cokernel.

The minimal Hilbert decomposition of a finitely presented module over
one or two parameters is computed from a minimal presentation plus, in
the two-parameter case, the kernel of its relation matrix (the module
of second syzygies, which is free).  Kernel output is never trusted
blindly: an exhaustive pointwise rank check over the grid of column
grade coordinates must pass, or the computation aborts.
"""

from __future__ import annotations

from dataclasses import dataclass

from .grades import (
    Barcode,
    DimensionMismatch,
    Grade,
    SignedBarcode,
    as_grade,
    join,
    leq,
)


class GradedValidityError(ValueError):
    """A nonzero entry violates row_grade <= col_grade."""


class UnsupportedDimension(ValueError):
    """Raised for operations only available in one or two parameters."""


class KernelCheckError(RuntimeError):
    """The computed kernel failed the exhaustive pointwise rank check."""


# ---------------------------------------------------------------------------
# prime field helpers; field elements are plain ints in [0, p)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _inv(a: int, p: int) -> int:
    return pow(a, p - 2, p)


def _submul(dst: dict, src: dict, factor: int, p: int) -> None:
    # dst -= factor * src, dropping zeros
    for k, v in src.items():
        nv = (dst.get(k, 0) - factor * v) % p
        if nv:
            dst[k] = nv
        elif k in dst:
            del dst[k]


def _colex(g: Grade):
    return tuple(reversed(g))


# ---------------------------------------------------------------------------


class GradedMatrix:
    """Sparse matrix over a prime field with graded rows and columns.

    ``entries`` maps ``(row, col)`` to a nonzero field element.  ``dim``
    is the grade dimension; it must be passed explicitly when the matrix
    has neither rows nor columns.
    """

    __slots__ = ("row_grades", "col_grades", "entries", "field", "dim")

    def __init__(self, row_grades, col_grades, entries, field=2, dim=None):
        if not _is_prime(field):
            raise ValueError("field order must be prime, got %r" % (field,))
        rg = tuple(as_grade(g) for g in row_grades)
        cg = tuple(as_grade(g) for g in col_grades)
        for g in rg + cg:
            if dim is None:
                dim = len(g)
            elif len(g) != dim:
                raise DimensionMismatch(
                    "grade of dimension %d in a %d-parameter matrix" % (len(g), dim)
                )
        norm = {}
        for (i, j), v in entries.items():
            i = int(i)
            j = int(j)
            if not (0 <= i < len(rg)) or not (0 <= j < len(cg)):
                raise IndexError("entry (%d, %d) outside matrix shape" % (i, j))
            v = int(v) % field
            if v:
                norm[(i, j)] = v
        object.__setattr__(self, "row_grades", rg)
        object.__setattr__(self, "col_grades", cg)
        object.__setattr__(self, "entries", norm)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "dim", dim)

    def __setattr__(self, name, value):
        raise AttributeError("GradedMatrix is immutable")

    @property
    def num_rows(self) -> int:
        return len(self.row_grades)

    @property
    def num_cols(self) -> int:
        return len(self.col_grades)

    def column(self, j: int) -> dict:
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def columns(self) -> list[dict]:
        cols = [dict() for _ in range(self.num_cols)]
        for (i, j), v in self.entries.items():
            cols[j][i] = v
        return cols

    def matmul(self, other: "GradedMatrix") -> "GradedMatrix":
        """Composite self @ other, for self: Y -> Z and other: X -> Y."""
        if self.field != other.field:
            raise ValueError("field mismatch in matrix product")
        if self.col_grades != other.row_grades:
            raise DimensionMismatch("inner grades disagree in matrix product")
        mycols = self.columns()
        out = {}
        for (y, x), c in other.entries.items():
            for z, v in mycols[y].items():
                key = (z, x)
                nv = (out.get(key, 0) + c * v) % self.field
                if nv:
                    out[key] = nv
                elif key in out:
                    del out[key]
        return GradedMatrix(
            self.row_grades, other.col_grades, out, field=self.field, dim=self.dim
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        return (
            self.row_grades == other.row_grades
            and self.col_grades == other.col_grades
            and self.entries == other.entries
            and self.field == other.field
        )

    def __hash__(self):
        return hash(
            (self.row_grades, self.col_grades, frozenset(self.entries.items()), self.field)
        )

    def __repr__(self) -> str:
        return "GradedMatrix(%d rows, %d cols, %d entries, F_%d)" % (
            self.num_rows,
            self.num_cols,
            len(self.entries),
            self.field,
        )


def validate_graded(m: GradedMatrix) -> bool:
    """True when every nonzero entry has row_grade <= col_grade."""
    for (i, j) in m.entries:
        if not leq(m.row_grades[i], m.col_grades[j]):
            return False
    return True


def _require_valid(m: GradedMatrix) -> None:
    for (i, j) in sorted(m.entries):
        if not leq(m.row_grades[i], m.col_grades[j]):
            raise GradedValidityError(
                "entry at row %d (grade %r) column %d (grade %r) violates "
                "row_grade <= col_grade" % (i, m.row_grades[i], j, m.col_grades[j])
            )


class Presentation:
    """Generators with grades plus a grade-valid relation matrix.

    Rows of ``rels`` are the generators, columns the relations; the
    presented module is the cokernel.  A free module is a presentation
    with no relation columns.
    """

    __slots__ = ("rels",)

    def __init__(self, gens, rels: GradedMatrix | None = None, field=2, dim=None):
        if rels is None:
            rels = GradedMatrix(tuple(gens), (), {}, field=field, dim=dim)
        else:
            if tuple(as_grade(g) for g in gens) != rels.row_grades:
                raise ValueError("generator grades disagree with relation row grades")
        _require_valid(rels)
        object.__setattr__(self, "rels", rels)

    def __setattr__(self, name, value):
        raise AttributeError("Presentation is immutable")

    @classmethod
    def from_relations(cls, gens, rel_specs, field=2, dim=None):
        """Build from ``rel_specs`` = iterable of (grade, {row: coeff})."""
        gens = tuple(as_grade(g) for g in gens)
        col_grades = []
        entries = {}
        for j, (grade, col) in enumerate(rel_specs):
            col_grades.append(as_grade(grade))
            for i, v in col.items():
                entries[(int(i), j)] = v
        m = GradedMatrix(gens, tuple(col_grades), entries, field=field, dim=dim)
        return cls(gens, m)

    @property
    def gens(self) -> tuple:
        return self.rels.row_grades

    @property
    def field(self) -> int:
        return self.rels.field

    @property
    def dim(self) -> int | None:
        return self.rels.dim

    @property
    def num_gens(self) -> int:
        return self.rels.num_rows

    @property
    def num_rels(self) -> int:
        return self.rels.num_cols

    def __eq__(self, other):
        if not isinstance(other, Presentation):
            return NotImplemented
        return self.rels == other.rels

    def __hash__(self):
        return hash(self.rels)

    def __repr__(self) -> str:
        return "Presentation(%d gens, %d rels, F_%d)" % (
            self.num_gens,
            self.num_rels,
            self.field,
        )


def direct_sum(*presentations: Presentation) -> Presentation:
    """Block-diagonal sum of presentations over one field and dimension."""
    if not presentations:
        raise ValueError("direct_sum needs at least one presentation")
    field = presentations[0].field
    dim = None
    gens = []
    rel_specs = []
    for pr in presentations:
        if pr.field != field:
            raise ValueError("field mismatch in direct sum")
        if pr.dim is not None:
            if dim is None:
                dim = pr.dim
            elif dim != pr.dim:
                raise DimensionMismatch("dimension mismatch in direct sum")
        off = len(gens)
        gens.extend(pr.gens)
        cols = pr.rels.columns()
        for j, grade in enumerate(pr.rels.col_grades):
            rel_specs.append((grade, {off + i: v for i, v in cols[j].items()}))
    return Presentation.from_relations(gens, rel_specs, field=field, dim=dim)


# ---------------------------------------------------------------------------
# plain Gaussian elimination utilities (column dicts keyed by row index)


def _rank(cols: list[dict], p: int) -> int:
    """Rank of the matrix with the given sparse columns, by elimination."""
    pivots: dict[int, dict] = {}
    rank = 0
    for col in cols:
        cur = dict(col)
        while cur:
            r = max(cur)
            if r not in pivots:
                pivots[r] = cur
                rank += 1
                break
            piv = pivots[r]
            _submul(cur, piv, (cur[r] * _inv(piv[r], p)) % p, p)
    return rank


def _nullspace(cols: list[dict], p: int) -> list[dict]:
    """Combination vectors (position -> coeff) spanning the kernel.

    Columns are reduced left to right with pivot = largest row index;
    a column that reduces to zero contributes the tracked combination.
    """
    pivots: dict[int, tuple[dict, dict]] = {}
    out = []
    for idx, col in enumerate(cols):
        cur = dict(col)
        comb = {idx: 1}
        while cur:
            r = max(cur)
            if r not in pivots:
                pivots[r] = (cur, comb)
                break
            piv, pivcomb = pivots[r]
            f = (cur[r] * _inv(piv[r], p)) % p
            _submul(cur, piv, f, p)
            _submul(comb, pivcomb, f, p)
        else:
            out.append(comb)
    return out


def _solve_in_span(basis: list[dict], target: dict, p: int) -> list[int] | None:
    """Coefficients x with sum(x_k * basis[k]) == target, or None."""
    pivots: dict[int, tuple[dict, dict]] = {}
    for k, col in enumerate(basis):
        cur = dict(col)
        comb = {k: 1}
        while cur:
            r = max(cur)
            if r not in pivots:
                pivots[r] = (cur, comb)
                break
            piv, pivcomb = pivots[r]
            f = (cur[r] * _inv(piv[r], p)) % p
            _submul(cur, piv, f, p)
            _submul(comb, pivcomb, f, p)
    cur = dict(target)
    x: dict[int, int] = {}
    while cur:
        r = max(cur)
        if r not in pivots:
            return None
        piv, pivcomb = pivots[r]
        f = (cur[r] * _inv(piv[r], p)) % p
        _submul(cur, piv, f, p)
        for k, v in pivcomb.items():
            x[k] = (x.get(k, 0) + f * v) % p
    return [x.get(k, 0) % p for k in range(len(basis))]


def _in_span(basis: list[dict], target: dict, p: int) -> bool:
    return _solve_in_span(basis, target, p) is not None


# ---------------------------------------------------------------------------


def minimize_presentation(pres: Presentation) -> Presentation:
    """Return a presentation of an isomorphic module with no removable part.

    Two passes.  First, repeatedly pivot on a nonzero entry whose row
    grade equals its column grade (the coefficient is a unit there) and
    delete that generator/relation pair; columns are visited in
    colexicographic grade order, and within a column the pivot is the
    largest eligible row.  Second, drop every relation column lying in
    the span, at its own grade, of the columns kept so far.  After both
    passes the generator grades are the degree-0 Betti barcode and the
    relation grades the degree-1 Betti barcode of the module.
    """
    p = pres.field
    row_grades = pres.gens
    col_grades = pres.rels.col_grades
    cols = pres.rels.columns()
    row_alive = [True] * len(row_grades)
    col_alive = [True] * len(col_grades)

    def col_order():
        live = [j for j in range(len(col_grades)) if col_alive[j]]
        live.sort(key=lambda j: (_colex(col_grades[j]), j))
        return live

    while True:
        target = None
        for j in col_order():
            cands = [i for i in cols[j] if row_grades[i] == col_grades[j]]
            if cands:
                i = max(cands, key=lambda i: (_colex(row_grades[i]), i))
                target = (i, j)
                break
        if target is None:
            break
        i, j = target
        piv = cols[j]
        inv = _inv(piv[i], p)
        for j2 in range(len(col_grades)):
            if j2 == j or not col_alive[j2]:
                continue
            a = cols[j2].get(i)
            if a:
                _submul(cols[j2], piv, (a * inv) % p, p)
        col_alive[j] = False
        row_alive[i] = False

    kept: list[int] = []
    for j in col_order():
        allowed = [cols[k] for k in kept if leq(col_grades[k], col_grades[j])]
        if not _in_span(allowed, cols[j], p):
            kept.append(j)
    kept.sort()

    new_rows = [i for i in range(len(row_grades)) if row_alive[i]]
    remap = {old: new for new, old in enumerate(new_rows)}
    entries = {}
    for jj, j in enumerate(kept):
        for i, v in cols[j].items():
            entries[(remap[i], jj)] = v
    m = GradedMatrix(
        tuple(row_grades[i] for i in new_rows),
        tuple(col_grades[j] for j in kept),
        entries,
        field=p,
        dim=pres.dim,
    )
    return Presentation(m.row_grades, m)


def pointwise_dim(pres: Presentation, x) -> int:
    """Dimension of the presented module at the query grade ``x``.

    Computed directly as (# generators born by x) minus the rank of the
    relation submatrix with columns born by x; this is the independent
    rank oracle used to cross-check barcode computations.
    """
    x = as_grade(x)
    if pres.dim is not None and len(x) != pres.dim:
        raise DimensionMismatch("query grade has wrong dimension")
    gens_in = sum(1 for g in pres.gens if leq(g, x))
    cols = pres.rels.columns()
    sel = [cols[j] for j, c in enumerate(pres.rels.col_grades) if leq(c, x)]
    return gens_in - _rank(sel, pres.field)


def kernel_basis(m: GradedMatrix, verify: bool = True) -> tuple[Barcode, GradedMatrix]:
    """Minimal generators of the kernel of a graded matrix (n <= 2).

    Sweeps the finite grid of column-grade coordinates in colexicographic
    order.  At each grid point the kernel of the fiber submatrix is
    computed by column reduction with tracked combinations, and any
    kernel vectors independent of the generators already found are
    recorded with the current grid point as their grade; that grade
    always equals the coordinate-wise join of the grades of the columns
    participating in the combination.  Returns the multiset of kernel
    generator grades and the inclusion matrix whose columns express the
    generators in ``m``'s column basis (column order of the inclusion =
    discovery order).

    With ``verify`` (default), the result is checked exhaustively: at
    every grid point the number of generators born must equal the
    corank of the fiber submatrix, computed by independent elimination.
    A failure raises :class:`KernelCheckError` instead of returning a
    wrong answer.
    """
    _require_valid(m)
    p = m.field
    n = m.dim
    if n is not None and n > 2:
        raise UnsupportedDimension(
            "kernel computation supports 1 or 2 parameters, got %d" % n
        )
    col_grades = m.col_grades
    cols = m.columns()
    C = len(col_grades)
    if C == 0:
        inc = GradedMatrix(col_grades, (), {}, field=p, dim=n)
        return Barcode((), dim=n), inc

    axes = [sorted({g[k] for g in col_grades}) for k in range(n)]
    if n == 1:
        grid = [(x,) for x in axes[0]]
    else:
        grid = [(x, y) for y in axes[1] for x in axes[0]]

    gens: list[tuple[Grade, dict]] = []
    for pt in grid:
        sel = [j for j in range(C) if leq(col_grades[j], pt)]
        if not sel:
            continue
        null = _nullspace([cols[j] for j in sel], p)
        if not null:
            continue
        ech: dict[int, dict] = {}
        for g, vec in gens:
            if leq(g, pt):
                cur = dict(vec)
                while cur:
                    r = max(cur)
                    if r not in ech:
                        ech[r] = cur
                        break
                    _submul(cur, ech[r], (cur[r] * _inv(ech[r][r], p)) % p, p)
        for comb in null:
            cur = {sel[pos]: v for pos, v in comb.items()}
            while cur:
                r = max(cur)
                if r not in ech:
                    inv = _inv(cur[r], p)
                    cur = {k: (v * inv) % p for k, v in cur.items()}
                    ech[r] = cur
                    assert join(*(col_grades[k] for k in cur)) == pt
                    gens.append((pt, cur))
                    break
                _submul(cur, ech[r], (cur[r] * _inv(ech[r][r], p)) % p, p)

    if verify:
        for pt in grid:
            sel = [cols[j] for j, c in enumerate(col_grades) if leq(c, pt)]
            expected = len(sel) - _rank(sel, p)
            got = sum(1 for g, _ in gens if leq(g, pt))
            if got != expected:
                raise KernelCheckError(
                    "kernel rank check failed at grade %r: %d generators born, "
                    "fiber kernel has dimension %d" % (pt, got, expected)
                )

    entries = {}
    for k, (_, vec) in enumerate(gens):
        for i, v in vec.items():
            entries[(i, k)] = v
    inc = GradedMatrix(
        col_grades, tuple(g for g, _ in gens), entries, field=p, dim=n
    )
    return Barcode([g for g, _ in gens], dim=n), inc


@dataclass(frozen=True)
class BettiResult:
    """Per-degree Betti barcodes plus the signed barcode they induce."""

    by_degree: tuple[Barcode, ...]
    signed: SignedBarcode


def betti(pres: Presentation) -> BettiResult:
    """Betti barcodes of the presented module, degrees 0..n.

    Degree 0 and 1 come from a minimal presentation; degree 2 (two
    parameters only) is the kernel of the minimized relation matrix.
    The signed barcode is (even degrees, odd degrees).
    """
    n = pres.dim
    if n is None:
        n = 1
    if n > 2:
        raise UnsupportedDimension(
            "Betti barcodes support 1 or 2 parameters, got %d" % n
        )
    mini = minimize_presentation(pres)
    b0 = Barcode(mini.gens, dim=pres.dim)
    b1 = Barcode(mini.rels.col_grades, dim=pres.dim)
    if n == 2:
        b2, _ = kernel_basis(mini.rels)
        by_degree = (b0, b1, b2)
        positive = Barcode(b0.bars + b2.bars, dim=pres.dim)
    else:
        by_degree = (b0, b1)
        positive = b0
    return BettiResult(by_degree, SignedBarcode(positive, b1))


@dataclass(frozen=True)
class ChainPair:
    """Composable maps f: X -> Y and g: Y -> Z with g @ f = 0.

    Rows of ``g`` live in Z, its columns in Y; rows of ``f`` live in Y,
    its columns in X.  The homology at Y is ker(g) / im(f).
    """

    f: GradedMatrix
    g: GradedMatrix

    def __post_init__(self):
        if self.f.field != self.g.field:
            raise ValueError("chain maps over different fields")
        if self.g.col_grades != self.f.row_grades:
            raise DimensionMismatch(
                "column grades of g must equal row grades of f"
            )
        _require_valid(self.f)
        _require_valid(self.g)
        if self.g.matmul(self.f).entries:
            raise ValueError("g @ f is not zero; not a chain pair")


def homology_presentation(chain: ChainPair) -> Presentation:
    """Presentation of ker(g) / im(f), not necessarily minimal.

    Generators are the kernel generators of ``g``; each column of ``f``
    is rewritten in that basis to produce one relation at the column's
    grade.
    """
    p = chain.g.field
    kgrades, inc = kernel_basis(chain.g)
    basis = inc.columns()
    gen_grades = inc.col_grades
    fcols = chain.f.columns()
    rel_specs = []
    for j, cgrade in enumerate(chain.f.col_grades):
        allowed = [k for k in range(len(gen_grades)) if leq(gen_grades[k], cgrade)]
        coeffs = _solve_in_span([basis[k] for k in allowed], fcols[j], p)
        if coeffs is None:
            raise RuntimeError(
                "column %d of f is not in the kernel of g at its grade" % j
            )
        rel_specs.append(
            (cgrade, {allowed[k]: v for k, v in enumerate(coeffs) if v})
        )
    return Presentation.from_relations(
        gen_grades, rel_specs, field=p, dim=chain.g.dim
    )
