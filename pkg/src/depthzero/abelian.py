"""Exact integer linear algebra for finitely generated abelian groups.

Matrices hold arbitrary-precision Python ints; every routine is pure and
deterministic (no floats, no randomness, inputs never mutated). The Smith
normal form comes with unimodular transforms and their inverses, which the
lattice machinery downstream relies on. Groups are kept in canonical
elementary-divisor form (d1 | d2 | ..., each >= 2, plus a free rank), so
equality of :class:`FinAbGroup` values is structural equality.

All objects here are immutable and safe to share between threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, lcm, prod


class MatrixShapeError(ValueError):
    """Matrix dimensions do not fit the requested operation."""


class LatticeError(ValueError):
    """A vector or lattice is not where the operation requires it."""


class HomomorphismError(ValueError):
    """A matrix does not induce a map between the given presentations."""


# ---------------------------------------------------------------------------
# Matrices


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major entries.

    >>> IntMatrix.from_rows([[1, 2], [3, 4]]).transpose().row(0)
    (1, 3)
    """

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise MatrixShapeError("negative dimensions")
        if len(self.entries) != self.rows * self.cols:
            raise MatrixShapeError(
                f"{self.rows}x{self.cols} matrix needs "
                f"{self.rows * self.cols} entries, got {len(self.entries)}"
            )
        for e in self.entries:
            if not isinstance(e, int) or isinstance(e, bool):
                raise MatrixShapeError(f"non-integer entry {e!r}")

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise MatrixShapeError("ragged rows")
        return cls(len(rows), ncols, tuple(x for r in rows for x in r))

    @classmethod
    def identity(cls, n):
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols, (0,) * (rows * cols))

    def entry(self, i, j):
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j):
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_lists(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self):
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(self.entry(i, j) for j in range(self.cols) for i in range(self.rows)),
        )

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise MatrixShapeError(
                    f"cannot multiply {self.rows}x{self.cols} by "
                    f"{other.rows}x{other.cols}"
                )
            out = []
            for i in range(self.rows):
                ri = self.row(i)
                for j in range(other.cols):
                    out.append(
                        sum(ri[k] * other.entry(k, j) for k in range(self.cols))
                    )
            return IntMatrix(self.rows, other.cols, tuple(out))
        return NotImplemented

    def apply(self, vector):
        """Matrix-vector product; vectors are plain tuples (columns)."""
        if len(vector) != self.cols:
            raise MatrixShapeError("vector length mismatch")
        return tuple(
            sum(self.row(i)[k] * vector[k] for k in range(self.cols))
            for i in range(self.rows)
        )

    def stack_below(self, other):
        if other.cols != self.cols:
            raise MatrixShapeError("column count mismatch")
        return IntMatrix(
            self.rows + other.rows, self.cols, self.entries + other.entries
        )

    def scale(self, c):
        return IntMatrix(self.rows, self.cols, tuple(c * e for e in self.entries))

    def __sub__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise MatrixShapeError("shape mismatch")
        return IntMatrix(
            self.rows,
            self.cols,
            tuple(a - b for a, b in zip(self.entries, other.entries)),
        )

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise MatrixShapeError("shape mismatch")
        return IntMatrix(
            self.rows,
            self.cols,
            tuple(a + b for a, b in zip(self.entries, other.entries)),
        )

    def is_zero(self):
        return all(e == 0 for e in self.entries)

    def determinant(self):
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise MatrixShapeError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        work = self.to_lists()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if work[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if work[i][k]), None)
                if swap is None:
                    return 0
                work[k], work[swap] = work[swap], work[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    work[i][j] = (
                        work[i][j] * work[k][k] - work[i][k] * work[k][j]
                    ) // prev
                work[i][k] = 0
            prev = work[k][k]
        return sign * work[n - 1][n - 1]

    def is_unimodular(self):
        return self.rows == self.cols and abs(self.determinant()) == 1


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithForm:
    """U @ A @ V == D with U, V unimodular and D diagonal, d1 | d2 | ...

    u_inv and v_inv are the exact inverses of U and V; the lattice
    routines below need them and tracking them during elimination is
    cheaper than inverting afterwards.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    u_inv: IntMatrix
    v_inv: IntMatrix

    @property
    def diagonal(self):
        return tuple(
            self.D.entry(i, i) for i in range(min(self.D.rows, self.D.cols))
        )

    @property
    def rank(self):
        return sum(1 for d in self.diagonal if d != 0)


def snf(a: IntMatrix) -> SmithForm:
    """Smith normal form with transforms.

    Pivot selection is smallest absolute value in the trailing block
    (first occurrence in row-major order), which keeps intermediate
    entries modest and makes the output deterministic.

    >>> form = snf(IntMatrix.from_rows([[2, 4], [6, 8]]))
    >>> form.diagonal
    (2, 4)
    """
    nrows, ncols = a.rows, a.cols
    m = a.to_lists()
    u = IntMatrix.identity(nrows).to_lists()
    ui = IntMatrix.identity(nrows).to_lists()
    v = IntMatrix.identity(ncols).to_lists()
    vi = IntMatrix.identity(ncols).to_lists()

    def row_swap(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]
        for r in ui:
            r[i], r[j] = r[j], r[i]

    def row_add(i, j, c):
        # row_i += c * row_j
        mi, mj = m[i], m[j]
        for k in range(ncols):
            mi[k] += c * mj[k]
        uiw, ujw = u[i], u[j]
        for k in range(nrows):
            uiw[k] += c * ujw[k]
        for r in ui:
            r[j] -= c * r[i]

    def row_negate(i):
        m[i] = [-x for x in m[i]]
        u[i] = [-x for x in u[i]]
        for r in ui:
            r[i] = -r[i]

    def col_swap(i, j):
        for r in m:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]
        vi[i], vi[j] = vi[j], vi[i]

    def col_add(j, i, c):
        # col_j += c * col_i
        for r in m:
            r[j] += c * r[i]
        for r in v:
            r[j] += c * r[i]
        viw, vjw = vi[i], vi[j]
        for k in range(ncols):
            viw[k] -= c * vjw[k]

    t = 0
    limit = min(nrows, ncols)
    while t < limit:
        best = None
        for i in range(t, nrows):
            mi = m[i]
            for j in range(t, ncols):
                e = mi[j]
                if e and (best is None or abs(e) < best[0]):
                    best = (abs(e), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            row_swap(t, bi)
        if bj != t:
            col_swap(t, bj)
        dirty = False
        for i in range(t + 1, nrows):
            if m[i][t]:
                q = m[i][t] // m[t][t]
                if q:
                    row_add(i, t, -q)
                if m[i][t]:
                    dirty = True
        for j in range(t + 1, ncols):
            if m[t][j]:
                q = m[t][j] // m[t][t]
                if q:
                    col_add(j, t, -q)
                if m[t][j]:
                    dirty = True
        if dirty:
            continue
        pivot = m[t][t]
        offender = None
        for i in range(t + 1, nrows):
            mi = m[i]
            for j in range(t + 1, ncols):
                if mi[j] % pivot:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_add(t, offender, 1)
            continue
        if pivot < 0:
            row_negate(t)
        t += 1

    def rebuild(rows_list, nr, nc):
        return IntMatrix(nr, nc, tuple(x for r in rows_list for x in r))

    return SmithForm(
        U=rebuild(u, nrows, nrows),
        D=rebuild(m, nrows, ncols),
        V=rebuild(v, ncols, ncols),
        u_inv=rebuild(ui, nrows, nrows),
        v_inv=rebuild(vi, ncols, ncols),
    )


# ---------------------------------------------------------------------------
# Canonical finitely generated abelian groups


def _factorize(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _canonical_chain(divisors):
    """Rebuild an ascending invariant-factor chain from arbitrary divisors."""
    per_prime = {}
    for d in divisors:
        for p, e in _factorize(d).items():
            per_prime.setdefault(p, []).append(e)
    width = max((len(v) for v in per_prime.values()), default=0)
    chain = []
    for slot in range(width):
        d = 1
        for p, exps in per_prime.items():
            exps_sorted = sorted(exps, reverse=True)
            if slot < len(exps_sorted):
                d *= p ** exps_sorted[slot]
        chain.append(d)
    chain.reverse()
    return tuple(chain)


@dataclass(frozen=True)
class FinAbGroup:
    """A finitely generated abelian group in canonical form.

    ``torsion`` is the invariant-factor chain d1 | d2 | ... with every
    entry >= 2. Structural equality is isomorphism. By the duality
    convention used throughout, the dual of Z^r x (torsion) is written
    with the same data: the free rank tokens (C*)^r and torsion is
    self-dual, so :meth:`dual` returns an equal group.

    >>> FinAbGroup.from_divisors([2, 3, 0])
    FinAbGroup(free_rank=1, torsion=(6,))
    """

    free_rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for d in self.torsion:
            if not isinstance(d, int) or d < 2:
                raise ValueError(f"torsion divisor {d!r} must be an int >= 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"divisor chain violated: {a} does not divide {b}")

    @classmethod
    def from_divisors(cls, divisors, free_rank=0):
        """Canonicalize any divisor list; 0 entries count as free factors."""
        tors = []
        free = free_rank
        for d in divisors:
            d = abs(d)
            if d == 0:
                free += 1
            elif d > 1:
                tors.append(d)
        return cls(free_rank=free, torsion=_canonical_chain(tors))

    @classmethod
    def trivial(cls):
        return cls(0, ())

    def order(self):
        """Group order, or None for infinite groups."""
        if self.free_rank:
            return None
        return prod(self.torsion) if self.torsion else 1

    def exponent(self):
        if self.free_rank:
            return None
        return self.torsion[-1] if self.torsion else 1

    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    def is_finite(self):
        return self.free_rank == 0

    def direct_sum(self, other):
        return FinAbGroup.from_divisors(
            list(self.torsion) + list(other.torsion),
            free_rank=self.free_rank + other.free_rank,
        )

    def prime_part(self, p):
        """The p-primary torsion component (free part discarded)."""
        parts = []
        for d in self.torsion:
            pp = 1
            while d % p == 0:
                pp *= p
                d //= p
            if pp > 1:
                parts.append(pp)
        return FinAbGroup.from_divisors(parts)

    def prime_to_p_part(self, p):
        """Torsion away from p, free rank kept."""
        parts = []
        for d in self.torsion:
            while d % p == 0:
                d //= p
            if d > 1:
                parts.append(d)
        return FinAbGroup.from_divisors(parts, free_rank=self.free_rank)

    def dual(self):
        """Dual group under the fixed convention (see class docstring)."""
        return FinAbGroup(self.free_rank, self.torsion)

    def presentation(self):
        """Standard presentation: torsion generators first, then free ones."""
        rank = len(self.torsion) + self.free_rank
        rows = []
        for i, d in enumerate(self.torsion):
            row = [0] * rank
            row[i] = d
            rows.append(row)
        relations = (
            IntMatrix.from_rows(rows) if rows else IntMatrix.zeros(0, rank)
        )
        return Presentation(rank=rank, relations=relations)

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"C{d}" for d in self.torsion)
        return " x ".join(parts) if parts else "0"


def dual_group(group: FinAbGroup) -> FinAbGroup:
    """Dual of a finitely generated abelian group.

    Torsion is self-dual (Hom(C_d, Q/Z) = C_d); a free factor dualizes to
    a divisible factor which we encode by keeping the rank. This is the
    one fixed convention the rest of the package leans on.
    """
    return group.dual()


def cokernel(a: IntMatrix) -> FinAbGroup:
    """Z^cols modulo the row span of ``a``.

    >>> cokernel(IntMatrix.from_rows([[-4]]))
    FinAbGroup(free_rank=0, torsion=(4,))
    """
    form = snf(a)
    diag = form.diagonal
    free = a.cols - sum(1 for d in diag if d != 0)
    return FinAbGroup.from_divisors([d for d in diag if d != 0], free_rank=free)


# ---------------------------------------------------------------------------
# Presentations and homomorphisms


@dataclass(frozen=True)
class Presentation:
    """Z^rank modulo the row span of ``relations`` (a k x rank matrix)."""

    rank: int
    relations: IntMatrix

    def __post_init__(self):
        if self.relations.cols != self.rank:
            raise MatrixShapeError("relation width must equal the rank")

    @classmethod
    def free(cls, rank):
        return cls(rank=rank, relations=IntMatrix.zeros(0, rank))

    @classmethod
    def from_relation_rows(cls, rank, rows):
        if rows:
            return cls(rank=rank, relations=IntMatrix.from_rows(rows))
        return cls.free(rank)

    def group(self) -> FinAbGroup:
        return cokernel(self.relations)

    def relation_vectors(self):
        return [self.relations.row(i) for i in range(self.relations.rows)]

    def is_free(self):
        return self.relations.rows == 0 or self.relations.is_zero()

    def is_finite(self):
        return self.group().is_finite()

    # -- element bookkeeping -------------------------------------------------

    def reduce(self, vector):
        """Canonical coset representative key for ``vector``.

        Two vectors map to the same key iff they differ by a relation.
        """
        umat, diag = _coset_data(self)
        w = list(umat.apply(vector))
        for i, d in enumerate(diag):
            if d:
                w[i] %= d
        return tuple(w)

    def element_from_key(self, key):
        _, _ = _coset_data(self)  # ensure cached
        return _coset_back(self).apply(key)

    def elements(self):
        """All elements of a finite presentation, as canonical vectors."""
        umat, diag = _coset_data(self)
        if len(diag) < self.rank or any(d == 0 for d in diag):
            raise LatticeError("presentation is not finite")
        back = _coset_back(self)
        for key in itertools.product(*(range(d) for d in diag)):
            yield back.apply(key)

    def contains_in_lattice(self, vector):
        """Is ``vector`` in the relation lattice (i.e. zero in the group)?"""
        umat, diag = _coset_data(self)
        w = umat.apply(vector)
        for i, x in enumerate(w):
            d = diag[i] if i < len(diag) else 0
            if d == 0:
                if x != 0:
                    return False
            elif x % d:
                return False
        return True


@lru_cache(maxsize=None)
def _coset_form(pres: Presentation):
    # SNF of relations^T: U maps vectors to coordinates in which the
    # relation lattice is diagonal.
    return snf(pres.relations.transpose())


def _coset_data(pres: Presentation):
    form = _coset_form(pres)
    diag = list(form.diagonal)
    # Pad so every coordinate has an (possibly zero) modulus.
    diag.extend([0] * (pres.rank - len(diag)))
    return form.U, diag


def _coset_back(pres: Presentation):
    return _coset_form(pres).u_inv


@dataclass(frozen=True)
class AbHom:
    """Homomorphism between presented groups, by a matrix on generators.

    ``matrix`` is target.rank x source.rank; column j is the image of the
    j-th source generator. The constructor checks well-definedness.
    """

    source: Presentation
    target: Presentation
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.rows != self.target.rank or self.matrix.cols != self.source.rank:
            raise MatrixShapeError("matrix shape must be target.rank x source.rank")
        for rel in self.source.relation_vectors():
            image = self.matrix.apply(rel)
            if not self.target.contains_in_lattice(image):
                raise HomomorphismError(
                    f"relation {rel} maps to {image}, which is nonzero in the target"
                )

    def apply(self, vector):
        return self.matrix.apply(vector)


@dataclass(frozen=True)
class HomDecomposition:
    kernel: FinAbGroup
    image: FinAbGroup
    cokernel: FinAbGroup


def hom_kernel_image(f: AbHom) -> HomDecomposition:
    """Kernel, image and cokernel of a homomorphism, in canonical form."""
    src_rel = f.source.relation_vectors()
    tgt_rel = f.target.relation_vectors()
    # Cokernel: target generators modulo target relations and generator images.
    images = [f.matrix.column(j) for j in range(f.matrix.cols)]
    coker = cokernel(_rows_matrix(images + tgt_rel, f.target.rank))
    # Kernel: vectors whose image lies in the target relation lattice,
    # modulo the source relation lattice.
    pre = kernel_mod_lattice(f.matrix, f.target.relations)
    ker = lattice_quotient(f.source.rank, pre, src_rel).group
    # Image: the subgroup generated by generator images inside the target.
    img = lattice_quotient(f.target.rank, images + tgt_rel, tgt_rel).group
    return HomDecomposition(kernel=ker, image=img, cokernel=coker)


def tensor_mod_m(pres: Presentation, m: int) -> FinAbGroup:
    """The presented group tensored with Z/m.

    >>> tensor_mod_m(Presentation.free(2), 6)
    FinAbGroup(free_rank=0, torsion=(6, 6))
    """
    if m < 2:
        raise ValueError("modulus must be at least 2")
    scaled = IntMatrix.identity(pres.rank).scale(m)
    return cokernel(pres.relations.stack_below(scaled))


def tensor_mod_m_presentation(pres: Presentation, m: int) -> Presentation:
    """Presentation of ``pres`` tensored with Z/m (same generators)."""
    if m < 2:
        raise ValueError("modulus must be at least 2")
    scaled = IntMatrix.identity(pres.rank).scale(m)
    return Presentation(rank=pres.rank, relations=pres.relations.stack_below(scaled))


# ---------------------------------------------------------------------------
# Lattice machinery (vectors are int tuples; a lattice is given by generators)


def _rows_matrix(vectors, dim):
    if vectors:
        return IntMatrix.from_rows(vectors)
    return IntMatrix.zeros(0, dim)


def lattice_basis(vectors, dim):
    """A basis of the sublattice of Z^dim spanned by ``vectors``."""
    mat = _rows_matrix([tuple(v) for v in vectors], dim)
    form = snf(mat)
    basis = []
    prod_mat = form.D @ form.v_inv  # rows span the same lattice as mat
    for i in range(min(mat.rows, mat.cols)):
        row = prod_mat.row(i)
        if any(row):
            basis.append(row)
    return basis


def solve_integer(a: IntMatrix, b):
    """One integer solution x of a @ x = b, or None."""
    form = snf(a)
    rhs = form.U.apply(tuple(b))
    diag = form.diagonal
    w = []
    for i in range(a.cols):
        d = diag[i] if i < len(diag) else 0
        r = rhs[i] if i < a.rows else 0
        if d == 0:
            if i < a.rows and r != 0:
                return None
            w.append(0)
        else:
            if r % d:
                return None
            w.append(r // d)
    for i in range(a.cols, a.rows):
        if rhs[i] != 0:
            return None
    return form.V.apply(tuple(w))


def solve_in_row_span(basis_rows, dim, target):
    """Coefficients c with sum_i c_i * basis_rows[i] = target, or None."""
    mat = _rows_matrix([tuple(r) for r in basis_rows], dim)
    return solve_integer(mat.transpose(), tuple(target))


def in_lattice(vector, generators, dim):
    return solve_in_row_span(generators, dim, vector) is not None


def integer_kernel(a: IntMatrix):
    """Basis (list of tuples) of {x : a @ x = 0}."""
    form = snf(a)
    diag = form.diagonal
    basis = []
    for j in range(a.cols):
        d = diag[j] if j < len(diag) else 0
        if d == 0:
            basis.append(form.V.column(j))
    return basis


def kernel_mod_lattice(b: IntMatrix, block_relations: IntMatrix):
    """Basis of {x : b @ x lies in L^(blocks)} for L = row span of relations.

    The rows of ``b`` are grouped into blocks of size ``block_relations.cols``
    and each block of the image must land in L. Works in two stages: exact
    kernel of the coordinates where L is trivial, then a uniform modular
    kernel for the torsion coordinates.
    """
    g = block_relations.cols
    if g == 0 or b.rows == 0:
        return integer_kernel(b)
    if b.rows % g:
        raise MatrixShapeError("row count is not a multiple of the block size")
    blocks = b.rows // g
    if block_relations.rows == 0 or block_relations.is_zero():
        return integer_kernel(b)

    form = snf(block_relations.transpose())
    umat = form.U  # w = U v: v in L iff w_i = 0 mod d_i (exactly 0 when d_i = 0)
    diag = list(form.diagonal)
    diag.extend([0] * (g - len(diag)))

    exact_rows = []
    mod_rows = []  # (row, modulus)
    for blk in range(blocks):
        block = IntMatrix.from_rows(
            [b.row(blk * g + i) for i in range(g)]
        )
        transformed = umat @ block
        for i in range(g):
            row = transformed.row(i)
            if diag[i] == 0:
                if any(row):
                    exact_rows.append(row)
            elif diag[i] == 1:
                continue  # no condition
            else:
                mod_rows.append((row, diag[i]))

    n = b.cols
    if exact_rows:
        k0 = integer_kernel(IntMatrix.from_rows(exact_rows))
    else:
        k0 = [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    if not k0:
        return []
    if not mod_rows:
        return k0

    k0_mat = IntMatrix.from_rows(k0).transpose()  # n x s, columns = basis
    modulus = lcm(*[m for _, m in mod_rows])
    scaled = []
    for row, m in mod_rows:
        factor = modulus // m
        composed = IntMatrix.from_rows([row]) @ k0_mat
        scaled.append(tuple(factor * e for e in composed.row(0)))
    c = IntMatrix.from_rows(scaled)
    form_c = snf(c)
    diag_c = form_c.diagonal
    basis = []
    for j in range(c.cols):
        d = diag_c[j] if j < len(diag_c) else 0
        scale = modulus // gcd(d, modulus) if d else 1
        col = form_c.V.column(j)
        combined = tuple(
            scale * sum(k0[t][i] * col[t] for t in range(len(k0)))
            for i in range(n)
        )
        basis.append(combined)
    return basis


@dataclass(frozen=True)
class QuotientData:
    """Structure of A/B for lattices B <= A <= Z^dim, with coordinates.

    ``generators`` are vectors in A projecting to the canonical cyclic /
    free factors; ``divisors`` aligns with them (0 marks a free factor).
    ``class_coord`` maps any vector of A to its coordinate tuple.
    """

    dim: int
    group: FinAbGroup
    generators: tuple
    divisors: tuple
    _basis_a: IntMatrix
    _v: IntMatrix
    _kept: tuple

    def class_coord(self, vector):
        c = solve_in_row_span(
            [self._basis_a.row(i) for i in range(self._basis_a.rows)],
            self.dim,
            vector,
        )
        if c is None:
            raise LatticeError(f"{vector} is not in the ambient lattice")
        coords_all = IntMatrix.from_rows([c]) @ self._v
        out = []
        for pos, d in zip(self._kept, self.divisors):
            x = coords_all.entry(0, pos)
            out.append(x % d if d else x)
        return tuple(out)


def lattice_quotient(dim, a_generators, b_generators) -> QuotientData:
    """Quotient A/B of lattices given by generators, B must lie inside A."""
    basis_a = lattice_basis(a_generators, dim)
    k = len(basis_a)
    coeff_rows = []
    for bvec in b_generators:
        c = solve_in_row_span(basis_a, dim, bvec)
        if c is None:
            raise LatticeError(f"{tuple(bvec)} is not in the ambient lattice")
        coeff_rows.append(c[:k] if k else ())
    if k == 0:
        return QuotientData(
            dim=dim,
            group=FinAbGroup.trivial(),
            generators=(),
            divisors=(),
            _basis_a=IntMatrix.zeros(0, dim),
            _v=IntMatrix.identity(0),
            _kept=(),
        )
    ba_mat = IntMatrix.from_rows(basis_a)
    cmat = _rows_matrix(coeff_rows, k)
    form = snf(cmat)
    new_basis = form.v_inv @ ba_mat  # rows: adapted basis of A
    divisors = []
    for j in range(k):
        d = form.diagonal[j] if j < len(form.diagonal) else 0
        divisors.append(d)
    kept = [j for j, d in enumerate(divisors) if d != 1]
    gens = tuple(new_basis.row(j) for j in kept)
    kept_div = tuple(divisors[j] for j in kept)
    group = FinAbGroup.from_divisors(
        [d for d in kept_div if d >= 2],
        free_rank=sum(1 for d in kept_div if d == 0),
    )
    return QuotientData(
        dim=dim,
        group=group,
        generators=gens,
        divisors=kept_div,
        _basis_a=ba_mat,
        _v=form.V,
        _kept=tuple(kept),
    )


# -- tuple helpers shared by the higher layers ------------------------------


def vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(c, a):
    return tuple(c * x for x in a)


def vec_zero(n):
    return (0,) * n
