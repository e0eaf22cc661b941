"""Dense linear algebra over the prime fields F_q, q in {2, 3, 5}.

Matrices are tuples of tuples of ints in [0, q).  Everything is exact and
sized for tiny dimensions (<= 8 or so); clarity over speed.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

Mat = tuple  # tuple of row-tuples


def mat(rows) -> Mat:
    return tuple(tuple(int(x) for x in row) for row in rows)


def zeros(r: int, c: int) -> Mat:
    return tuple((0,) * c for _ in range(r))


def identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def shape(a: Mat):
    return (len(a), len(a[0]) if a else 0)


def mat_mod(q: int, a: Mat) -> Mat:
    return tuple(tuple(x % q for x in row) for row in a)


def mat_add(q: int, a: Mat, b: Mat) -> Mat:
    return tuple(tuple((x + y) % q for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_neg(q: int, a: Mat) -> Mat:
    return tuple(tuple((-x) % q for x in row) for row in a)


def mat_mul(q: int, a: Mat, b: Mat) -> Mat:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise ValueError(f"shape mismatch {shape(a)} x {shape(b)}")
    bt = list(zip(*b)) if rb else [()] * cb
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) % q for col in bt) for row in a
    )


def mat_scale(q: int, c: int, a: Mat) -> Mat:
    return tuple(tuple((c * x) % q for x in row) for row in a)


def block_matrix(q: int, blocks, row_heights, col_widths) -> Mat:
    """Assemble a matrix from a 2D list of blocks with explicit dimensions.

    None or an empty matrix stands for a zero block; explicit sizes keep
    degenerate (0-row / 0-column) blocks unambiguous.
    """
    rows = []
    for i, h in enumerate(row_heights):
        for r in range(h):
            row = []
            for j, w in enumerate(col_widths):
                b = blocks[i][j]
                if b is None or len(b) == 0:
                    row.extend([0] * w)
                else:
                    if len(b[r]) != w:
                        raise ValueError("block width mismatch")
                    row.extend(b[r])
            rows.append(tuple(x % q for x in row))
    return tuple(rows)


def mat_mul_dims(q: int, a: Mat, b: Mat, ra: int, inner: int, cb: int) -> Mat:
    """Matrix product with explicitly stated dimensions, tolerating the
    empty matrices that lose their width in the tuple representation."""
    if ra == 0 or cb == 0 or inner == 0:
        return zeros(ra, cb)
    return mat_mul(q, a, b)


def rref(q: int, a: Mat):
    """Reduced row-echelon form; returns (rref_matrix, pivot_columns)."""
    m = [list(row) for row in a]
    nr, nc = shape(a)
    pivots = []
    row = 0
    for col in range(nc):
        piv = next((r for r in range(row, nr) if m[r][col] % q), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = pow(m[row][col], -1, q)
        m[row] = [(x * inv) % q for x in m[row]]
        for r in range(nr):
            if r != row and m[r][col] % q:
                f = m[r][col]
                m[r] = [(x - f * y) % q for x, y in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
        if row == nr:
            break
    return tuple(tuple(r) for r in m), tuple(pivots)


def rank(q: int, a: Mat) -> int:
    return len(rref(q, a)[1])


def is_invertible(q: int, a: Mat) -> bool:
    n, c = shape(a)
    return n == c and rank(q, a) == n


def mat_inverse(q: int, a: Mat) -> Mat:
    n, c = shape(a)
    if n != c:
        raise ValueError("not square")
    aug = tuple(row + identity(n)[i] for i, row in enumerate(a))
    red, piv = rref(q, aug)
    if list(piv[:n]) != list(range(n)):
        raise ValueError("singular matrix")
    return tuple(row[n:] for row in red)


def nullspace_basis(q: int, a: Mat):
    """Basis (list of length-nc tuples) of {x : a x = 0}."""
    nr, nc = shape(a)
    red, piv = rref(q, a)
    free = [c for c in range(nc) if c not in piv]
    basis = []
    for fc in free:
        v = [0] * nc
        v[fc] = 1
        for r, pc in enumerate(piv):
            v[pc] = (-red[r][fc]) % q
        basis.append(tuple(v))
    return basis


def row_space_canonical(q: int, vectors) -> Mat:
    """Canonical (RREF, zero rows dropped) form of the span of the given row vectors."""
    if not vectors:
        return ()
    red, piv = rref(q, mat(vectors))
    return tuple(red[i] for i in range(len(piv)))


def vectors_in_span(q: int, basis):
    """All q^k vectors in the span of the basis rows (including 0)."""
    if not basis:
        yield ()
        return
    n = len(basis[0])
    for coeffs in product(range(q), repeat=len(basis)):
        yield tuple(sum(c * b[j] for c, b in zip(coeffs, basis)) % q for j in range(n))


def solve(q: int, a: Mat, b):
    """One solution x of a x = b, or None."""
    nr, nc = shape(a)
    aug = tuple(row + (b[i] % q,) for i, row in enumerate(a))
    red, piv = rref(q, aug)
    if nc in piv:
        return None
    x = [0] * nc
    for r, pc in enumerate(piv):
        x[pc] = red[r][nc]
    return tuple(x)


def enumerate_subspaces(q: int, n: int, k: int):
    """All k-dimensional subspaces of F_q^n, as canonical RREF basis matrices."""
    if k == 0:
        yield ()
        return
    if k > n:
        return
    from itertools import combinations

    for piv in combinations(range(n), k):
        free_positions = []
        for r in range(k):
            for c in range(n):
                if c <= piv[r] or c in piv:
                    continue
                # in RREF, row r may be nonzero only right of its pivot
                free_positions.append((r, c))
        for vals in product(range(q), repeat=len(free_positions)):
            rows = [[0] * n for _ in range(k)]
            for r in range(k):
                rows[r][piv[r]] = 1
            for (r, c), v in zip(free_positions, vals):
                rows[r][c] = v
            yield tuple(tuple(r) for r in rows)


@lru_cache(maxsize=None)
def gl_order(q: int, n: int) -> int:
    out = 1
    for k in range(n):
        out *= q**n - q**k
    return out


@lru_cache(maxsize=None)
def general_linear_group(q: int, n: int):
    """All invertible n x n matrices; only for q^(n^2) small."""
    if q ** (n * n) > 1 << 20:
        raise ValueError(f"GL_{n}(F_{q}) too large to enumerate directly")
    if n == 0:
        return ((),)
    out = []
    for entries in product(range(q), repeat=n * n):
        a = tuple(entries[i * n : (i + 1) * n] for i in range(n))
        if is_invertible(q, a):
            out.append(a)
    return tuple(out)


@lru_cache(maxsize=None)
def gl_generators(q: int, n: int):
    """A small generating set of GL_n(F_q): transvections, swaps, and a scaling."""
    if n == 0:
        return ((),)
    gens = []
    # primitive root scaling in the first slot
    for g in range(2, q):
        gens.append(tuple(tuple((g if i == j == 0 else (1 if i == j else 0)) for j in range(n)) for i in range(n)))
        break
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            t = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
            t[i][j] = 1
            gens.append(tuple(tuple(r) for r in t))
    # adjacent swaps
    for i in range(n - 1):
        s = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
        s[i][i] = s[i + 1][i + 1] = 0
        s[i][i + 1] = s[i + 1][i] = 1
        gens.append(tuple(tuple(r) for r in s))
    return tuple(gens)


class LinearSystem:
    """Accumulates F_q-linear equations in a block-indexed variable vector."""

    def __init__(self, q: int):
        self.q = q
        self.nvars = 0
        self.blocks = {}
        self.rows = []

    def add_block(self, name, r: int, c: int):
        """Register an r x c matrix variable; returns the name for reference."""
        if name in self.blocks:
            raise ValueError(f"duplicate block {name}")
        self.blocks[name] = (self.nvars, r, c)
        self.nvars += r * c
        return name

    def var_index(self, name, i: int, j: int) -> int:
        start, r, c = self.blocks[name]
        return start + i * c + j

    def add_equation(self, terms):
        """terms: iterable of (coefficient, block, i, j); equation sum = 0."""
        row = [0] * self.nvars
        for coef, name, i, j in terms:
            row[self.var_index(name, i, j)] = (row[self.var_index(name, i, j)] + coef) % self.q
        self.rows.append(tuple(row))

    def add_matrix_identity(self, left, right):
        """Equation left - right = 0 entrywise, where each side is a list of
        (coefficient_matrix_or_None, block_name, transpose_side) products of
        the form  C * X  or  X * C  with X the block variable."""
        raise NotImplementedError("use explicit add_equation loops")

    def solution_dim(self) -> int:
        if not self.rows:
            return self.nvars
        return self.nvars - rank(self.q, mat(self.rows))

    def solution_basis(self):
        if not self.rows:
            return [tuple(1 if i == j else 0 for j in range(self.nvars)) for i in range(self.nvars)]
        return nullspace_basis(self.q, mat(self.rows))

    def extract(self, vector, name) -> Mat:
        start, r, c = self.blocks[name]
        return tuple(tuple(vector[start + i * c + j] for j in range(c)) for i in range(r))
