"""Z/t-graded complexes of quiver representations, with exact counting.

A complex is t components joined by differentials d^i: M^i -> M^(i+1 mod t)
with d^(i+1) d^i = 0.  This module provides the constructors (stalks,
contractible identity pairs, inflation/collapse between periods), homology
and image invariants, chain-map counting, iso testing, and two extension
counters:

* ``ext1_cardinality`` solves the extension-cocycle linear system and reads
  off |Ext^1| from its dimension (fast, used for Euler-form checks);
* ``ext_structure`` enumerates the cocycle solutions, builds every middle
  term, and classifies them up to chain isomorphism (the Hall-product
  oracle).

Both reduce to finite F_q linear algebra and are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import fqlin
from .errors import BudgetExceeded, MismatchedContext
from .repcat import (
    CategoryTable,
    Representation,
    direct_sum,
    extend_to_full_basis,
    image_subspace,
    kernel_subspace,
)


@dataclass
class ComplexBudget:
    max_middle_solutions: int = 600_000
    max_endo_enum: int = 1 << 16
    max_iso_search: int = 1 << 16
    max_subspace_families: int = 1 << 20


DEFAULT_BUDGET = ComplexBudget()


@dataclass(frozen=True)
class GradedComplex:
    t: int
    comps: tuple  # t Representations
    diffs: tuple  # diffs[i]: per-vertex matrices, comps[i] -> comps[i+1 mod t]

    def encode(self):
        return (self.t, tuple(c.encode() for c in self.comps), self.diffs)

    @property
    def total(self) -> int:
        return sum(c.total for c in self.comps)

    def graded_dim(self):
        return tuple(c.dim for c in self.comps)

    def has_zero_differentials(self) -> bool:
        return all(all(all(x == 0 for row in m for x in row) for m in d) for d in self.diffs)


def make_complex(table: CategoryTable, comps, diffs) -> GradedComplex:
    """Validate and build a complex: shapes, morphism property, d^2 = 0."""
    q, quiver = table.q, table.quiver
    t = len(comps)
    comps = tuple(comps)
    diffs = tuple(tuple(fqlin.mat_mod(q, fqlin.mat(m)) for m in d) for d in diffs)
    if len(diffs) != t:
        raise ValueError("need one differential per degree")
    for i in range(t):
        src, tgt = comps[i], comps[(i + 1) % t]
        for v in range(quiver.n):
            got_rows = len(diffs[i][v])
            if got_rows != tgt.dim[v] or (got_rows and len(diffs[i][v][0]) != src.dim[v]):
                raise ValueError(f"differential {i} has wrong shape at vertex {v}")
        for k, (s, tv) in enumerate(quiver.arrows):
            left = fqlin.mat_mul_dims(q, diffs[i][tv], src.mats[k], tgt.dim[tv], src.dim[tv], src.dim[s])
            right = fqlin.mat_mul_dims(q, tgt.mats[k], diffs[i][s], tgt.dim[tv], tgt.dim[s], src.dim[s])
            if left != right:
                raise ValueError(f"differential {i} is not a morphism of representations")
    for i in range(t):
        for v in range(quiver.n):
            comp2 = fqlin.mat_mul_dims(q, diffs[(i + 1) % t][v], diffs[i][v],
                                       comps[(i + 2) % t].dim[v], comps[(i + 1) % t].dim[v], comps[i].dim[v])
            if any(x for row in comp2 for x in row):
                raise ValueError(f"d^2 != 0 at degree {i}, vertex {v}")
    return GradedComplex(t, comps, diffs)


def _zero_vmap(quiver, src: Representation, tgt: Representation):
    return tuple(fqlin.zeros(tgt.dim[v], src.dim[v]) for v in range(quiver.n))


def _identity_vmap(quiver, rep: Representation):
    return tuple(fqlin.identity(rep.dim[v]) for v in range(quiver.n))


def stalk(table: CategoryTable, x: int, i: int, t: int) -> GradedComplex:
    """Stalk complex: class x concentrated in degree i, zero differentials."""
    if not 0 <= i < t:
        raise ValueError(f"degree {i} out of range for period {t}")
    from .repcat import zero_rep

    comps = [zero_rep(table.quiver)] * t
    comps[i] = table.rep(x)
    diffs = [_zero_vmap(table.quiver, comps[j], comps[(j + 1) % t]) for j in range(t)]
    return GradedComplex(t, tuple(comps), tuple(diffs))


def stalk_sum(table: CategoryTable, classes) -> GradedComplex:
    """Zero-differential complex with the given class in each degree."""
    t = len(classes)
    comps = tuple(table.rep(c) for c in classes)
    diffs = tuple(_zero_vmap(table.quiver, comps[j], comps[(j + 1) % t]) for j in range(t))
    return GradedComplex(t, comps, diffs)


def acyclic_pair(table: CategoryTable, x: int, i: int, t: int) -> GradedComplex:
    """Contractible complex with class x in degrees i-1 and i glued by the identity.

    For t = 1 this is the doubled form (X + X, [[0, 1], [0, 0]]).
    """
    if not 0 <= i < t:
        raise ValueError(f"degree {i} out of range for period {t}")
    q, quiver = table.q, table.quiver
    xrep = table.rep(x)
    if t == 1:
        comp = direct_sum(quiver, q, xrep, xrep)
        d = tuple(
            fqlin.block_matrix(q, [[None, fqlin.identity(xrep.dim[v])], [None, None]],
                               (xrep.dim[v], xrep.dim[v]), (xrep.dim[v], xrep.dim[v]))
            for v in range(quiver.n)
        )
        return make_complex(table, (comp,), (d,))
    from .repcat import zero_rep

    comps = [zero_rep(quiver)] * t
    comps[(i - 1) % t] = xrep
    comps[i] = xrep
    diffs = []
    for j in range(t):
        if j == (i - 1) % t:
            diffs.append(_identity_vmap(quiver, xrep))
        else:
            diffs.append(_zero_vmap(quiver, comps[j], comps[(j + 1) % t]))
    return make_complex(table, tuple(comps), tuple(diffs))


def direct_sum_complex(table: CategoryTable, m1: GradedComplex, m2: GradedComplex) -> GradedComplex:
    if m1.t != m2.t:
        raise MismatchedContext("periods differ")
    q, quiver = table.q, table.quiver
    comps = tuple(direct_sum(quiver, q, a, b) for a, b in zip(m1.comps, m2.comps))
    diffs = []
    for i in range(m1.t):
        s1, s2 = m1.comps[i], m2.comps[i]
        t1, t2 = m1.comps[(i + 1) % m1.t], m2.comps[(i + 1) % m1.t]
        diffs.append(tuple(
            fqlin.block_matrix(q, [[m1.diffs[i][v], None], [None, m2.diffs[i][v]]],
                               (t1.dim[v], t2.dim[v]), (s1.dim[v], s2.dim[v]))
            for v in range(quiver.n)
        ))
    return GradedComplex(m1.t, comps, tuple(diffs))


def c_t_inflate(table: CategoryTable, m: GradedComplex, t: int) -> GradedComplex:
    """Period-1 complex (M, d) -> M -> M -> ... -> M with d everywhere."""
    if m.t != 1:
        raise ValueError("inflation starts from a period-1 complex")
    if t <= 1:
        raise ValueError("target period must exceed 1")
    comps = tuple(m.comps[0] for _ in range(t))
    diffs = tuple(m.diffs[0] for _ in range(t))
    return make_complex(table, comps, diffs)


def c_1_collapse(table: CategoryTable, m: GradedComplex) -> GradedComplex:
    """Collapse to period 1: total component with the cyclic block differential."""
    q, quiver = table.q, table.quiver
    total = m.comps[0]
    for i in range(1, m.t):
        total = direct_sum(quiver, q, total, m.comps[i])
    dmats = []
    for v in range(quiver.n):
        blocks = [[None] * m.t for _ in range(m.t)]
        for i in range(m.t):
            blocks[(i + 1) % m.t][i] = m.diffs[i][v]
        sizes = tuple(m.comps[i].dim[v] for i in range(m.t))
        dmats.append(fqlin.block_matrix(q, blocks, sizes, sizes))
    return make_complex(table, (total,), (tuple(dmats),))


# ---------------------------------------------------------------------------
# invariants

@dataclass(frozen=True)
class ComplexInvariants:
    homology: tuple  # iso class id per degree
    image: tuple  # K_0 class (dimension vector) of Im(d^i) per degree

    def is_acyclic(self) -> bool:
        return all(h == 0 for h in self.homology)


def invariants_of(table: CategoryTable, m: GradedComplex) -> ComplexInvariants:
    """Homology iso classes and image K_0 classes, with the degreewise
    class identity M^i = H^i + Im(d^(i-1)) + Im(d^i) asserted."""
    q, quiver = table.q, table.quiver
    h_ids, im_vecs = [], []
    for i in range(m.t):
        im_vecs.append(tuple(fqlin.rank(q, m.diffs[i][v]) for v in range(quiver.n)))
    for i in range(m.t):
        comp = m.comps[i]
        # canonical rows so the subrep coordinates match _coords_in_span below
        ker_rows = [fqlin.row_space_canonical(q, kernel_subspace(q, m.diffs[i][v], comp.dim[v]))
                    for v in range(quiver.n)]
        sq = _sub_quotient_or_fail(table, comp, ker_rows)
        ker_rep = sq[0]
        prev = m.diffs[(i - 1) % m.t]
        im_rows_in_ker = []
        for v in range(quiver.n):
            img = image_subspace(q, prev[v])
            coords = [_coords_in_span(q, ker_rows[v], vec) for vec in img]
            im_rows_in_ker.append(tuple(coords))
        sq2 = _sub_quotient_or_fail(table, ker_rep, im_rows_in_ker)
        h_ids.append(table.classify(sq2[1]))
    inv = ComplexInvariants(tuple(h_ids), tuple(im_vecs))
    for i in range(m.t):
        lhs = m.comps[i].dim
        h = table.dim_vector(inv.homology[i])
        rhs = tuple(h[v] + inv.image[(i - 1) % m.t][v] + inv.image[i][v] for v in range(quiver.n))
        if lhs != rhs:
            raise AssertionError(f"class identity fails at degree {i}: {lhs} != {rhs}")
    return inv


def _coords_in_span(q: int, basis_rows, vec):
    if not basis_rows:
        raise ValueError("vector not in span of empty basis")
    a = tuple(zip(*basis_rows))  # columns = basis vectors
    sol = fqlin.solve(q, fqlin.mat(a), vec)
    if sol is None:
        raise ValueError("vector not in span")
    return sol


def _sub_quotient_or_fail(table, rep, rows):
    from .repcat import sub_quotient_reps

    sq = sub_quotient_reps(table.quiver, table.q, rep, rows)
    if sq is None:
        raise AssertionError("subspace family unexpectedly not arrow-closed")
    return sq


# ---------------------------------------------------------------------------
# chain maps

def chain_map_system(table: CategoryTable, m1: GradedComplex, m2: GradedComplex) -> fqlin.LinearSystem:
    if m1.t != m2.t:
        raise MismatchedContext("periods differ")
    q, quiver = table.q, table.quiver
    sys = fqlin.LinearSystem(q)
    for i in range(m1.t):
        for v in range(quiver.n):
            sys.add_block(("f", i, v), m2.comps[i].dim[v], m1.comps[i].dim[v])
    # intertwining with arrow maps, per degree
    for i in range(m1.t):
        x, y = m1.comps[i], m2.comps[i]
        for k, (s, tv) in enumerate(quiver.arrows):
            for r in range(y.dim[tv]):
                for c in range(x.dim[s]):
                    terms = []
                    for l in range(x.dim[tv]):
                        if x.mats[k][l][c]:
                            terms.append((x.mats[k][l][c], ("f", i, tv), r, l))
                    for l in range(y.dim[s]):
                        if y.mats[k][r][l]:
                            terms.append((-y.mats[k][r][l], ("f", i, s), l, c))
                    sys.add_equation(terms)
    # chain condition d_N f^i = f^(i+1) d_M
    for i in range(m1.t):
        j = (i + 1) % m1.t
        for v in range(quiver.n):
            dn, dm = m2.diffs[i][v], m1.diffs[i][v]
            for r in range(m2.comps[j].dim[v]):
                for c in range(m1.comps[i].dim[v]):
                    terms = []
                    for l in range(m2.comps[i].dim[v]):
                        if dn[r][l]:
                            terms.append((dn[r][l], ("f", i, v), l, c))
                    for l in range(m1.comps[j].dim[v]):
                        if dm[l][c]:
                            terms.append((-dm[l][c], ("f", j, v), r, l))
                    sys.add_equation(terms)
    return sys


def complex_hom_dim(table: CategoryTable, m1: GradedComplex, m2: GradedComplex) -> int:
    return chain_map_system(table, m1, m2).solution_dim()


def complex_hom_count(table: CategoryTable, m1: GradedComplex, m2: GradedComplex) -> int:
    return table.q ** complex_hom_dim(table, m1, m2)


def _chain_maps_from(sys, table, m1, m2, vector):
    return tuple(
        tuple(sys.extract(vector, ("f", i, v)) for v in range(table.quiver.n)) for i in range(m1.t)
    )


def _all_invertible(table, m, maps) -> bool:
    for i in range(m.t):
        for v in range(table.quiver.n):
            if m.comps[i].dim[v] and not fqlin.is_invertible(table.q, maps[i][v]):
                return False
    return True


def aut_complex_count(table: CategoryTable, m: GradedComplex, budget: ComplexBudget = DEFAULT_BUDGET) -> int:
    """|Aut| of a complex.

    Zero-differential complexes factor through the component tables; otherwise
    the endomorphism space is enumerated and filtered for invertibility, with
    an orbit-stabilizer fallback for one-vertex quivers when the endomorphism
    space is too large to scan.
    """
    key = ("aut", m.encode())
    hit = table._classify_cache.get(key)
    if hit is not None:
        return hit
    if m.has_zero_differentials():
        out = 1
        for comp in m.comps:
            out *= table.aut(table.classify(comp))
        table._classify_cache[key] = out
        return out
    sys = chain_map_system(table, m, m)
    dim = sys.solution_dim()
    if table.q**dim <= budget.max_endo_enum:
        basis = sys.solution_basis()
        count = 0
        for coeffs in product(range(table.q), repeat=dim):
            vec = _combine(table.q, basis, coeffs, sys.nvars)
            if _all_invertible(table, m, _chain_maps_from(sys, table, m, m, vec)):
                count += 1
        table._classify_cache[key] = count
        return count
    if table.quiver.n == 1 and not table.quiver.arrows:
        count = _aut_by_orbit_single_vertex(table, m)
        table._classify_cache[key] = count
        return count
    raise BudgetExceeded(f"automorphism count needs {table.q}^{dim} endomorphism scans")


def _combine(q, basis, coeffs, nvars):
    vec = [0] * nvars
    for c, b in zip(coeffs, basis):
        if c:
            for idx, e in enumerate(b):
                if e:
                    vec[idx] = (vec[idx] + c * e) % q
    return tuple(vec)


def _aut_by_orbit_single_vertex(table, m):
    """|Aut| = |prod GL| / |orbit of the differential tuple| (one-vertex quivers)."""
    q = table.q
    gens = []
    for i in range(m.t):
        n_i = m.comps[i].dim[0]
        if n_i == 0:
            continue
        for g in fqlin.gl_generators(q, n_i):
            gens.append((i, g, fqlin.mat_inverse(q, g)))
    start = tuple(m.diffs[i][0] for i in range(m.t))
    seen = {start}
    frontier = [start]
    while frontier:
        cur = frontier.pop()
        for (i, g, ginv) in gens:
            new = list(cur)
            # g acts at degree i: d^i -> d^i g^-1, d^(i-1) -> g d^(i-1)
            new[i] = fqlin.mat_mul(q, cur[i], ginv)
            new[(i - 1) % m.t] = fqlin.mat_mul(q, g, new[(i - 1) % m.t])
            tnew = tuple(new)
            if tnew not in seen:
                seen.add(tnew)
                frontier.append(tnew)
    order = 1
    for comp in m.comps:
        order *= fqlin.gl_order(q, comp.dim[0])
    if order % len(seen):
        raise AssertionError("orbit size does not divide group order")
    return order // len(seen)


# ---------------------------------------------------------------------------
# iso testing

def complex_signature(table: CategoryTable, m: GradedComplex):
    key = ("sig", m.encode())
    hit = table._classify_cache.get(key)
    if hit is not None:
        return hit
    inv = invariants_of(table, m)
    comp_ids = tuple(table.classify(c) for c in m.comps)
    ranks = tuple(tuple(fqlin.rank(table.q, m.diffs[i][v]) for v in range(table.quiver.n)) for i in range(m.t))
    endo = 0 if table.quiver.n == 1 else complex_hom_dim(table, m, m)
    sig = (m.t, comp_ids, ranks, inv.homology, inv.image, endo)
    table._classify_cache[key] = sig
    return sig


def complexes_isomorphic(table: CategoryTable, m1: GradedComplex, m2: GradedComplex,
                         budget: ComplexBudget = DEFAULT_BUDGET) -> bool:
    if m1.t != m2.t:
        return False
    if complex_signature(table, m1) != complex_signature(table, m2):
        return False
    if table.quiver.n == 1 and not table.quiver.arrows:
        # periodic complexes of vector spaces are classified by dims and ranks
        return True
    sys = chain_map_system(table, m1, m2)
    dim = sys.solution_dim()
    if table.q**dim > budget.max_iso_search:
        raise BudgetExceeded(f"iso search needs {table.q}^{dim} chain-map scans")
    basis = sys.solution_basis()
    for coeffs in product(range(table.q), repeat=dim):
        vec = _combine(table.q, basis, coeffs, sys.nvars)
        if _all_invertible(table, m1, _chain_maps_from(sys, table, m1, m2, vec)):
            return True
    return False


# ---------------------------------------------------------------------------
# extension counting

def _extension_system(table: CategoryTable, a: GradedComplex, b: GradedComplex) -> fqlin.LinearSystem:
    """Cocycle system for extensions 0 -> B -> L -> A -> 0, in a degreewise splitting.

    Variables: per degree the arrow cocycle eps (component extension data) and
    the connecting map c^i: A^i -> B^(i+1).  Solutions biject with extension
    structures; translation by coboundaries of degree-0 data gives Yoneda
    equivalence, so |Ext^1| = |Z| * |Hom(A,B)| / |C0|.
    """
    if a.t != b.t:
        raise MismatchedContext("periods differ")
    q, quiver = table.q, table.quiver
    t = a.t
    sys = fqlin.LinearSystem(q)
    for i in range(t):
        for k, (s, tv) in enumerate(quiver.arrows):
            sys.add_block(("eps", i, k), b.comps[i].dim[tv], a.comps[i].dim[s])
        for v in range(quiver.n):
            sys.add_block(("c", i, v), b.comps[(i + 1) % t].dim[v], a.comps[i].dim[v])
    # morphism condition for the triangular differential, per degree and arrow:
    # d_B eps^i + c^i_t A^i_a - B^(i+1)_a c^i_s - eps^(i+1) d_A = 0
    for i in range(t):
        j = (i + 1) % t
        for k, (s, tv) in enumerate(quiver.arrows):
            rows = b.comps[j].dim[tv]
            cols = a.comps[i].dim[s]
            for r in range(rows):
                for c in range(cols):
                    terms = []
                    db = b.diffs[i][tv]
                    for l in range(b.comps[i].dim[tv]):
                        if db[r][l]:
                            terms.append((db[r][l], ("eps", i, k), l, c))
                    amat = a.comps[i].mats[k]
                    for l in range(a.comps[i].dim[tv]):
                        if amat[l][c]:
                            terms.append((amat[l][c], ("c", i, tv), r, l))
                    bmat = b.comps[j].mats[k]
                    for l in range(b.comps[j].dim[s]):
                        if bmat[r][l]:
                            terms.append((-bmat[r][l], ("c", i, s), l, c))
                    da = a.diffs[i][s]
                    for l in range(a.comps[j].dim[s]):
                        if da[l][c]:
                            terms.append((-da[l][c], ("eps", j, k), r, l))
                    sys.add_equation(terms)
    # d^2 = 0 off-diagonal, per degree and vertex: d_B^(i+1) c^i + c^(i+1) d_A^i = 0
    for i in range(t):
        j = (i + 1) % t
        for v in range(quiver.n):
            rows = b.comps[(i + 2) % t].dim[v]
            cols = a.comps[i].dim[v]
            for r in range(rows):
                for c in range(cols):
                    terms = []
                    db = b.diffs[j][v]
                    for l in range(b.comps[j].dim[v]):
                        if db[r][l]:
                            terms.append((db[r][l], ("c", i, v), l, c))
                    da = a.diffs[i][v]
                    for l in range(a.comps[j].dim[v]):
                        if da[l][c]:
                            terms.append((da[l][c], ("c", j, v), r, l))
                    sys.add_equation(terms)
    return sys


def _c0_dim(a: GradedComplex, b: GradedComplex, n_vertices: int) -> int:
    return sum(a.comps[i].dim[v] * b.comps[i].dim[v] for i in range(a.t) for v in range(n_vertices))


def ext1_cardinality(table: CategoryTable, a: GradedComplex, b: GradedComplex) -> int:
    """|Ext^1(A, B)| in the category of Z/t-graded complexes."""
    sys = _extension_system(table, a, b)
    z = sys.solution_dim()
    hom = complex_hom_dim(table, a, b)
    c0 = _c0_dim(a, b, table.quiver.n)
    # |Z| * |Hom| / |C0|; the exponent is a genuine integer
    e = z + hom - c0
    if e < 0:
        raise AssertionError("negative Ext exponent")
    return table.q**e


@dataclass
class MiddleTerm:
    complex: GradedComplex
    raw_count: int  # cocycle solutions landing on this iso class
    hall_constant: Fraction  # |Ext^1(A,B)_L| / |Hom(A,B)|
    ext1_count: Fraction  # |Ext^1(A,B)_L|


def ext_structure(table: CategoryTable, a: GradedComplex, b: GradedComplex,
                  budget: ComplexBudget = DEFAULT_BUDGET):
    """Middle terms of all extensions of A by B, classified up to chain iso.

    Returns a list of MiddleTerm.  The per-class counts carry a built-in
    total-mass assertion against the dimension-count route.
    """
    key = ("extstruct", a.encode(), b.encode())
    hit = table._classify_cache.get(key)
    if hit is not None:
        return hit
    q, quiver = table.q, table.quiver
    t = a.t
    sys = _extension_system(table, a, b)
    dim = sys.solution_dim()
    if q**dim > budget.max_middle_solutions:
        raise BudgetExceeded(f"extension enumeration needs {q}^{dim} cocycles")
    basis = sys.solution_basis()
    buckets = {}  # signature -> list of [complex, count]
    for coeffs in product(range(q), repeat=dim):
        vec = _combine(q, basis, coeffs, sys.nvars)
        mid = _assemble_middle(table, a, b, sys, vec)
        sig = complex_signature(table, mid)
        placed = False
        for entry in buckets.setdefault(sig, []):
            if complexes_isomorphic(table, entry[0], mid, budget):
                entry[1] += 1
                placed = True
                break
        if not placed:
            buckets[sig].append([mid, 1])
    c0 = _c0_dim(a, b, quiver.n)
    homc = complex_hom_count(table, a, b)
    out = []
    total = Fraction(0)
    for sig in sorted(buckets):
        for mid, n in buckets[sig]:
            ext1 = Fraction(n * homc, q**c0)
            total += ext1
            out.append(MiddleTerm(mid, n, Fraction(n, q**c0), ext1))
    if total != ext1_cardinality(table, a, b):
        raise AssertionError("extension structure does not sum to the Ext cardinality")
    table._classify_cache[key] = out
    return out


def _assemble_middle(table, a, b, sys, vec):
    q, quiver = table.q, table.quiver
    t = a.t
    comps, diffs = [], []
    for i in range(t):
        mats = []
        for k, (s, tv) in enumerate(quiver.arrows):
            eps = sys.extract(vec, ("eps", i, k))
            mats.append(fqlin.block_matrix(q, [[b.comps[i].mats[k], eps], [None, a.comps[i].mats[k]]],
                                           (b.comps[i].dim[tv], a.comps[i].dim[tv]),
                                           (b.comps[i].dim[s], a.comps[i].dim[s])))
        comps.append(Representation(
            tuple(b.comps[i].dim[v] + a.comps[i].dim[v] for v in range(quiver.n)), tuple(mats)))
    for i in range(t):
        j = (i + 1) % t
        dmats = []
        for v in range(quiver.n):
            c = sys.extract(vec, ("c", i, v))
            dmats.append(fqlin.block_matrix(q, [[b.diffs[i][v], c], [None, a.diffs[i][v]]],
                                            (b.comps[j].dim[v], a.comps[j].dim[v]),
                                            (b.comps[i].dim[v], a.comps[i].dim[v])))
        diffs.append(tuple(dmats))
    return GradedComplex(t, tuple(comps), tuple(diffs))


def ext_invariant_spectrum(table: CategoryTable, a: GradedComplex, b: GradedComplex,
                           budget: ComplexBudget = DEFAULT_BUDGET):
    """Extension-cocycle counts grouped by the middle term's (homology, image)
    invariants only; the Hall reduction never needs finer data.

    Returns a dict (homology tuple, image tuple) -> number of cocycle
    solutions with those invariants.  Divide by |C0| for Hall constants, or
    multiply by |Hom|/|C0| for extension-class counts.
    """
    key = ("extspec", a.encode(), b.encode())
    hit = table._classify_cache.get(key)
    if hit is not None:
        return hit
    q = table.q
    sys = _extension_system(table, a, b)
    dim = sys.solution_dim()
    if q**dim > budget.max_middle_solutions:
        raise BudgetExceeded(f"extension enumeration needs {q}^{dim} cocycles")
    basis = sys.solution_basis()
    out = {}
    for coeffs in product(range(q), repeat=dim):
        vec = _combine(q, basis, coeffs, sys.nvars)
        mid = _assemble_middle(table, a, b, sys, vec)
        inv = invariants_of(table, mid)
        k = (inv.homology, inv.image)
        out[k] = out.get(k, 0) + 1
    table._classify_cache[key] = out
    return out


def hall_number_complex(table: CategoryTable, l: GradedComplex, a: GradedComplex, b: GradedComplex,
                        budget: ComplexBudget = DEFAULT_BUDGET) -> int:
    """g^L_{A,B}: subcomplexes of L isomorphic to B with quotient isomorphic to A."""
    q, quiver = table.q, table.quiver
    t = l.t
    spaces = []
    n_families = 1
    for i in range(t):
        for v in range(quiver.n):
            opts = tuple(fqlin.enumerate_subspaces(q, l.comps[i].dim[v], b.comps[i].dim[v]))
            n_families *= len(opts)
            spaces.append(opts)
    if n_families > budget.max_subspace_families:
        raise BudgetExceeded(f"{n_families} subspace families to scan")
    count = 0
    for flat in product(*spaces):
        rows = [[flat[i * quiver.n + v] for v in range(quiver.n)] for i in range(t)]
        sq = subcomplex_quotient(table, l, rows)
        if sq is None:
            continue
        sub, quot = sq
        if complexes_isomorphic(table, sub, b, budget) and complexes_isomorphic(table, quot, a, budget):
            count += 1
    return count


def subcomplex_quotient(table: CategoryTable, l: GradedComplex, rows_per_degree):
    """Restrict L to a graded subspace family closed under arrows and
    differentials; returns (subcomplex, quotient) or None."""
    from .repcat import sub_quotient_reps

    q, quiver = table.q, table.quiver
    t = l.t
    per_degree = []
    for i in range(t):
        sq = sub_quotient_reps(quiver, q, l.comps[i], rows_per_degree[i])
        if sq is None:
            return None
        per_degree.append(sq)
    # change-of-basis per degree: columns = sub basis then complement
    pmats, pinvs, subdims = [], [], []
    for i in range(t):
        pm, pi, sd = [], [], []
        for v in range(quiver.n):
            sub, comp = extend_to_full_basis(q, rows_per_degree[i][v], l.comps[i].dim[v])
            cols = list(sub) + list(comp)
            n = l.comps[i].dim[v]
            p = tuple(tuple(cols[j][r] for j in range(n)) for r in range(n))
            pm.append(p)
            pi.append(fqlin.mat_inverse(q, p) if n else ())
            sd.append(len(sub))
        pmats.append(pm)
        pinvs.append(pi)
        subdims.append(sd)
    sub_diffs, quot_diffs = [], []
    for i in range(t):
        j = (i + 1) % t
        sd, qd = [], []
        for v in range(quiver.n):
            ni, nj = l.comps[i].dim[v], l.comps[j].dim[v]
            inner = fqlin.mat_mul_dims(q, l.diffs[i][v], pmats[i][v], nj, ni, ni)
            conj = fqlin.mat_mul_dims(q, pinvs[j][v], inner, nj, nj, ni)
            ks, kt = subdims[i][v], subdims[j][v]
            for r in range(kt, l.comps[j].dim[v]):
                for c in range(ks):
                    if conj[r][c]:
                        return None  # not closed under the differential
            sd.append(tuple(row[:ks] for row in conj[:kt]))
            qd.append(tuple(row[ks:] for row in conj[kt:]))
        sub_diffs.append(tuple(sd))
        quot_diffs.append(tuple(qd))
    sub = GradedComplex(t, tuple(per_degree[i][0] for i in range(t)), tuple(sub_diffs))
    quot = GradedComplex(t, tuple(per_degree[i][1] for i in range(t)), tuple(quot_diffs))
    return sub, quot


# ---------------------------------------------------------------------------
# derived Hom for stalk sums (closed form)

def derived_hom_count(table: CategoryTable, x_classes, y_classes, s: int) -> int:
    """|Hom_D(X, Y[s])| for stalk-sum complexes given by class tuples.

    Per degree i the target component one degree below contributes Ext^1 and
    the matching degree contributes Hom; for t = 1 both land on the single
    degree. The count is a power of q.
    """
    t = len(x_classes)
    if len(y_classes) != t:
        raise MismatchedContext("tuples of different period")
    out = 1
    for i in range(t):
        out *= table.hom_count(x_classes[i], y_classes[(i + s) % t])
        out *= table.ext1_count(x_classes[i], y_classes[(i + s - 1) % t])
    return out


def derived_hom_count_complex(table: CategoryTable, x: GradedComplex, y: GradedComplex, s: int) -> int:
    if not (x.has_zero_differentials() and y.has_zero_differentials()):
        raise ValueError("derived Hom closed form needs zero differentials")
    xc = tuple(table.classify(c) for c in x.comps)
    yc = tuple(table.classify(c) for c in y.comps)
    return derived_hom_count(table, xc, yc, s)


# ---------------------------------------------------------------------------
# exhaustive complex enumeration (for normal-form sweeps)

def enumerate_complexes(table: CategoryTable, t: int, max_total: int,
                        budget: ComplexBudget = DEFAULT_BUDGET):
    """Representatives of all iso classes of complexes with total dim <= max_total."""
    q, quiver = table.q, table.quiver
    by_dim = {}
    for cls in table.classes:
        by_dim.setdefault(cls.total, []).append(cls.id)
    out = []
    for totals in product(range(max_total + 1), repeat=t):
        if sum(totals) > max_total:
            continue
        pools = [by_dim.get(tt, []) for tt in totals]
        for comp_ids in product(*pools):
            comps = tuple(table.rep(c) for c in comp_ids)
            hom_bases = [table.hom_basis_of(comp_ids[i], comp_ids[(i + 1) % t]) for i in range(t)]
            ndiffs = q ** sum(len(h) for h in hom_bases)
            if ndiffs > budget.max_middle_solutions:
                raise BudgetExceeded(f"{ndiffs} differential tuples at components {comp_ids}")
            reps = []
            for choice in product(*[range(q ** len(h)) for h in hom_bases]):
                diffs = []
                for i in range(t):
                    base = hom_bases[i]
                    coeffs = _digits(choice[i], q, len(base))
                    dmat = [
                        [[0] * comps[i].dim[v] for _ in range(comps[(i + 1) % t].dim[v])]
                        for v in range(quiver.n)
                    ]
                    for cdig, bmap in zip(coeffs, base):
                        if not cdig:
                            continue
                        for v in range(quiver.n):
                            for r, row in enumerate(bmap[v]):
                                for c, e in enumerate(row):
                                    dmat[v][r][c] = (dmat[v][r][c] + cdig * e) % q
                    diffs.append(tuple(tuple(tuple(r) for r in m) for m in dmat))
                try:
                    m = make_complex(table, comps, tuple(diffs))
                except ValueError:
                    continue
                if not any(complexes_isomorphic(table, m, other, budget) for other in reps):
                    reps.append(m)
            out.extend(reps)
    return out


def _digits(n: int, base: int, width: int):
    out = []
    for _ in range(width):
        out.append(n % base)
        n //= base
    return out
