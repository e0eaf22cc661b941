"""Finite-dimensional representations of an acyclic quiver over F_q.

Everything the Hall-algebra formulas consume is computed here by exhaustive
exact counting: isomorphism classes up to a dimension bound, automorphism
counts, Hom/Ext^1 dimensions, Hall numbers g, four-term exact-sequence
counts gamma, and the multiplicative Euler form on the Grothendieck group
K_0 = Z^(vertices).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from . import fqlin
from .coeffring import Coeff, q_power
from .errors import BudgetExceeded
from .fqlin import Mat


@dataclass(frozen=True)
class Quiver:
    n: int
    arrows: tuple  # tuple of (source, target) vertex pairs

    def __post_init__(self):
        for s, t in self.arrows:
            if not (0 <= s < self.n and 0 <= t < self.n):
                raise ValueError(f"arrow ({s},{t}) out of range")
        # acyclicity via Kahn's algorithm
        indeg = [0] * self.n
        for _, t in self.arrows:
            indeg[t] += 1
        queue = [v for v in range(self.n) if indeg[v] == 0]
        seen = 0
        while queue:
            v = queue.pop()
            seen += 1
            for s, t in self.arrows:
                if s == v:
                    indeg[t] -= 1
                    if indeg[t] == 0:
                        queue.append(t)
        if seen != self.n:
            raise ValueError("quiver has a directed cycle")

    def euler_additive(self, a, b) -> int:
        """Additive Euler form <a,b> = sum a_v b_v - sum_{s->t} a_s b_t."""
        out = sum(x * y for x, y in zip(a, b))
        for s, t in self.arrows:
            out -= a[s] * b[t]
        return out

    def symmetric_additive(self, a, b) -> int:
        return self.euler_additive(a, b) + self.euler_additive(b, a)


QUIVER_A1 = Quiver(1, ())
QUIVER_A2 = Quiver(2, ((0, 1),))

NAMED_QUIVERS = {"a1": QUIVER_A1, "a2": QUIVER_A2}


@dataclass(frozen=True)
class Representation:
    dim: tuple  # dimension vector, one entry per vertex
    mats: tuple  # one matrix per arrow, shape d_target x d_source

    def encode(self):
        return (self.dim, self.mats)

    @property
    def total(self) -> int:
        return sum(self.dim)


def zero_rep(quiver: Quiver) -> Representation:
    return Representation((0,) * quiver.n, tuple(fqlin.zeros(0, 0) for _ in quiver.arrows))


def make_rep(quiver: Quiver, q: int, dim, mats) -> Representation:
    dim = tuple(int(d) for d in dim)
    mats = tuple(fqlin.mat_mod(q, fqlin.mat(m)) for m in mats)
    for (s, t), m in zip(quiver.arrows, mats):
        if fqlin.shape(m) != (dim[t], dim[s]):
            raise ValueError(f"matrix shape {fqlin.shape(m)} does not match arrow ({s},{t}) of {dim}")
    return Representation(dim, mats)


def direct_sum(quiver: Quiver, q: int, x: Representation, y: Representation) -> Representation:
    dim = tuple(a + b for a, b in zip(x.dim, y.dim))
    mats = []
    for k, (s, t) in enumerate(quiver.arrows):
        mats.append(fqlin.block_matrix(q, [[x.mats[k], None], [None, y.mats[k]]],
                                       (x.dim[t], y.dim[t]), (x.dim[s], y.dim[s])))
    return Representation(dim, tuple(mats))


# ---------------------------------------------------------------------------
# morphism spaces

def hom_system(quiver: Quiver, q: int, x: Representation, y: Representation) -> fqlin.LinearSystem:
    """Linear system whose solutions are the intertwiners f: X -> Y."""
    sys = fqlin.LinearSystem(q)
    for v in range(quiver.n):
        sys.add_block(("f", v), y.dim[v], x.dim[v])
    for k, (s, t) in enumerate(quiver.arrows):
        xa, ya = x.mats[k], y.mats[k]
        # f_t X_a - Y_a f_s = 0, entry (i, j): i in Y_t rows, j in X_s cols
        for i in range(y.dim[t]):
            for j in range(x.dim[s]):
                terms = []
                for l in range(x.dim[t]):
                    if xa[l][j]:
                        terms.append((xa[l][j], ("f", t), i, l))
                for l in range(y.dim[s]):
                    if ya[i][l]:
                        terms.append((-ya[i][l], ("f", s), l, j))
                sys.add_equation(terms)
    return sys


def hom_basis(quiver: Quiver, q: int, x: Representation, y: Representation):
    """Basis of Hom(X, Y) as tuples of per-vertex matrices."""
    sys = hom_system(quiver, q, x, y)
    out = []
    for vec in sys.solution_basis():
        out.append(tuple(sys.extract(vec, ("f", v)) for v in range(quiver.n)))
    return out


def hom_elements(quiver: Quiver, q: int, basis, n_vertices: int):
    """Iterate all morphisms in the span of a hom basis (including zero)."""
    if not basis:
        yield tuple(None for _ in range(n_vertices))
    dims = None
    for coeffs in product(range(q), repeat=len(basis)):
        if not basis:
            return
        acc = None
        for c, b in zip(coeffs, basis):
            if acc is None:
                acc = [ [ [c * e for e in row] for row in m ] for m in b ]
            else:
                for v, m in enumerate(b):
                    for i, row in enumerate(m):
                        for j, e in enumerate(row):
                            acc[v][i][j] += c * e
        yield tuple(tuple(tuple(e % q for e in row) for row in m) for m in acc)


# ---------------------------------------------------------------------------
# sub/quotient machinery

def extend_to_full_basis(q: int, sub_rows, n: int):
    """Complete RREF rows of a subspace to a basis of F_q^n with standard vectors."""
    sub = fqlin.row_space_canonical(q, sub_rows) if sub_rows else ()
    pivots = set()
    for row in sub:
        pivots.add(next(i for i, x in enumerate(row) if x))
    comp = [tuple(1 if j == c else 0 for j in range(n)) for c in range(n) if c not in pivots]
    return sub, tuple(comp)


def sub_quotient_reps(quiver: Quiver, q: int, x: Representation, sub_rows_per_vertex):
    """Restrict X to a subspace family (must be arrow-closed) and form the quotient.

    Returns (sub_rep, quotient_rep) or None when the family is not closed.
    """
    n = quiver.n
    subs, comps, pmats, pinvs = [], [], [], []
    for v in range(n):
        sub, comp = extend_to_full_basis(q, sub_rows_per_vertex[v], x.dim[v])
        subs.append(sub)
        comps.append(comp)
        cols = list(sub) + list(comp)
        p = tuple(tuple(cols[j][i] for j in range(x.dim[v])) for i in range(x.dim[v]))  # columns = basis
        pmats.append(p)
        pinvs.append(fqlin.mat_inverse(q, p) if x.dim[v] else fqlin.zeros(0, 0))
    sub_mats, quot_mats = [], []
    for k, (s, t) in enumerate(quiver.arrows):
        inner = fqlin.mat_mul_dims(q, x.mats[k], pmats[s], x.dim[t], x.dim[s], x.dim[s])
        conj = fqlin.mat_mul_dims(q, pinvs[t], inner, x.dim[t], x.dim[t], x.dim[s])
        ks, kt = len(subs[s]), len(subs[t])
        # closure: lower-left block must vanish
        for i in range(kt, x.dim[t]):
            for j in range(ks):
                if conj[i][j]:
                    return None
        sub_mats.append(tuple(row[:ks] for row in conj[:kt]))
        quot_mats.append(tuple(row[ks:] for row in conj[kt:]))
    sub_rep = Representation(tuple(len(s) for s in subs), tuple(sub_mats))
    quot_rep = Representation(tuple(len(c) for c in comps), tuple(quot_mats))
    return sub_rep, quot_rep


def kernel_subspace(q: int, f_mat: Mat, dim_src: int):
    if dim_src == 0:
        return ()
    if not f_mat or not f_mat[0]:
        return fqlin.identity(dim_src)
    return tuple(fqlin.nullspace_basis(q, f_mat))


def image_subspace(q: int, f_mat: Mat):
    if not f_mat:
        return ()
    cols = tuple(zip(*f_mat))
    return fqlin.row_space_canonical(q, cols)


# ---------------------------------------------------------------------------
# the category table

@dataclass
class IsoClass:
    id: int
    rep: Representation
    aut: int
    name: str

    @property
    def dim(self):
        return self.rep.dim

    @property
    def total(self):
        return self.rep.total


class CategoryTable:
    """Complete model of rep(Q, F_q) up to a total-dimension bound.

    Immutable after construction; every query is a pure lookup or a cached
    exact computation.
    """

    def __init__(self, quiver: Quiver, q: int, bound: int, budget: int = 20_000_000,
                 force_generic: bool = False):
        self.quiver = quiver
        self.q = q
        self.bound = bound
        self.budget = budget
        self.force_generic = force_generic
        self.classes: list[IsoClass] = []
        self._by_key = {}
        self._classify_cache = {}
        self._hom_dim = {}
        self._hom_basis_cache = {}
        self._hall_cache = {}
        self._gamma_cache = {}
        self._sum_cache = {}
        self._enumerate()
        self._assign_names()

    # -- enumeration ----------------------------------------------------
    def _dim_vectors(self):
        rng = range(self.bound + 1)
        for d in product(rng, repeat=self.quiver.n):
            if sum(d) <= self.bound:
                yield d

    def _group(self, dim):
        """All elements of prod_v GL_{d_v}(F_q) as tuples of per-vertex matrices."""
        per_vertex = [fqlin.general_linear_group(self.q, d) for d in dim]
        return per_vertex

    def _group_order(self, dim) -> int:
        out = 1
        for d in dim:
            out *= fqlin.gl_order(self.q, d)
        return out

    def _arrow_entry_count(self, dim) -> int:
        return sum(dim[s] * dim[t] for s, t in self.quiver.arrows)

    @property
    def _single_arrow(self) -> bool:
        if self.force_generic:
            return False
        return len(self.quiver.arrows) == 1 and self.quiver.arrows[0][0] != self.quiver.arrows[0][1]

    def _rank_canonical(self, dim, r: int):
        """Canonical arrow matrix of given rank for single-arrow quivers."""
        s, t = self.quiver.arrows[0]
        return (tuple(tuple(1 if (i == j and i < r) else 0 for j in range(dim[s])) for i in range(dim[t])),)

    def _enumerate(self):
        found = []
        for dim in sorted(self._dim_vectors(), key=lambda d: (sum(d), d)):
            e = self._arrow_entry_count(dim)
            if e == 0:
                rep = Representation(dim, tuple(fqlin.zeros(dim[t], dim[s]) for s, t in self.quiver.arrows))
                found.append((rep, self._group_order(dim)))
                continue
            if self._single_arrow:
                # one arrow: the iso class is (dims, rank), orbit sizes in closed form
                s, t = self.quiver.arrows[0]
                for r in range(min(dim[s], dim[t]) + 1):
                    rep = Representation(dim, self._rank_canonical(dim, r))
                    aut = self._group_order(dim) // count_rank_matrices(self.q, dim[t], dim[s], r)
                    found.append((rep, aut))
                continue
            n_assign = self.q**e
            cost = n_assign * self._group_order(dim)
            if cost > self.budget:
                raise BudgetExceeded(f"orbit classification at dimension vector {dim} needs ~{cost} operations")
            per_vertex = self._group(dim)
            shapes = [(dim[t], dim[s]) for s, t in self.quiver.arrows]
            seen = set()
            for entries in product(range(self.q), repeat=e):
                mats, pos = [], 0
                for r, c in shapes:
                    mats.append(tuple(tuple(entries[pos + i * c : pos + i * c + c]) for i in range(r)))
                    pos += r * c
                key = tuple(mats)
                if key in seen:
                    continue
                orbit = self._orbit(dim, tuple(mats), per_vertex)
                seen.update(orbit)
                rep = Representation(dim, min(orbit))
                found.append((rep, self._group_order(dim) // len(orbit)))
        found.sort(key=lambda pair: (pair[0].total, pair[0].dim, pair[0].mats))
        for rep, aut in found:
            cls = IsoClass(len(self.classes), rep, aut, "")
            self.classes.append(cls)
            self._by_key[rep.encode()] = cls.id

    def _orbit(self, dim, mats, per_vertex):
        q = self.q
        invs = [{g: fqlin.mat_inverse(q, g) for g in gl} if dim[v] else {(): ()} for v, gl in enumerate(per_vertex)]
        orbit = set()
        for g in product(*per_vertex):
            new = []
            for k, (s, t) in enumerate(self.quiver.arrows):
                m = fqlin.mat_mul(q, g[t], fqlin.mat_mul(q, mats[k], invs[s][g[s]])) if dim[t] and dim[s] else mats[k]
                new.append(m)
            orbit.add(tuple(new))
        return orbit

    def _assign_names(self):
        simple_of = {tuple(1 if i == v else 0 for i in range(self.quiver.n)): v for v in range(self.quiver.n)}
        indec_counter = 0
        for cls in self.classes:
            if cls.total == 0:
                cls.name = "0"
            elif cls.dim in simple_of:
                cls.name = "S" if self.quiver.n == 1 else f"S{simple_of[cls.dim] + 1}"
        for cls in self.classes:
            if cls.name:
                continue
            parts = self._decompose(cls.id)
            if parts is None:
                if self.quiver.n == 2 and cls.dim == (1, 1):
                    cls.name = "P1"
                else:
                    indec_counter += 1
                    cls.name = "I" + "".join(str(d) for d in cls.dim) + ("" if indec_counter == 1 else f"#{indec_counter}")
            else:
                cls.name = "+".join(sorted(self.classes[p].name for p in parts))

    def _decompose(self, cid: int):
        """Split a class as a + b with a, b nonzero, preferring named summands; None if indecomposable."""
        cls = self.classes[cid]
        for a in range(1, cid):
            ra = self.classes[a]
            if ra.total == 0 or ra.total >= cls.total:
                continue
            need = tuple(x - y for x, y in zip(cls.dim, ra.dim))
            if any(x < 0 for x in need):
                continue
            for b in range(a, cid):
                rb = self.classes[b]
                if rb.dim != need:
                    continue
                if self.sum_class(a, b) == cid:
                    rest = self._decompose_into_sorted(b)
                    return [a] + rest if rest is not None else [a, b]
        return None

    def _decompose_into_sorted(self, cid: int):
        parts = self._decompose(cid)
        return parts

    # -- lookups ----------------------------------------------------------
    def class_by_name(self, name: str) -> int:
        aliases = {"S": "S" if self.quiver.n == 1 else "S1"}
        name = aliases.get(name, name)
        for cls in self.classes:
            if cls.name == name:
                return cls.id
        raise KeyError(f"unknown iso class {name!r}")

    def rep(self, cid: int) -> Representation:
        return self.classes[cid].rep

    def aut(self, cid: int) -> int:
        return self.classes[cid].aut

    def dim_vector(self, cid: int):
        return self.classes[cid].dim

    def classify(self, rep: Representation) -> int:
        """Iso class id of an arbitrary representation (total dim <= bound)."""
        key = rep.encode()
        hit = self._classify_cache.get(key)
        if hit is not None:
            return hit
        if rep.total > self.bound:
            raise BudgetExceeded(f"representation of total dimension {rep.total} exceeds table bound {self.bound}")
        if self._arrow_entry_count(rep.dim) == 0:
            cid = self._by_key[(rep.dim, tuple(fqlin.zeros(rep.dim[t], rep.dim[s]) for s, t in self.quiver.arrows))]
        elif self._single_arrow:
            r = fqlin.rank(self.q, rep.mats[0])
            cid = self._by_key[(rep.dim, self._rank_canonical(rep.dim, r))]
        else:
            per_vertex = self._group(rep.dim)
            canon = min(self._orbit(rep.dim, rep.mats, per_vertex))
            cid = self._by_key[(rep.dim, canon)]
        self._classify_cache[key] = cid
        return cid

    def sum_class(self, a: int, b: int) -> int:
        key = (a, b) if a <= b else (b, a)
        hit = self._sum_cache.get(key)
        if hit is None:
            hit = self.classify(direct_sum(self.quiver, self.q, self.rep(key[0]), self.rep(key[1])))
            self._sum_cache[key] = hit
        return hit

    # -- hom / ext --------------------------------------------------------
    def hom_basis_of(self, x: int, y: int):
        key = (x, y)
        if key not in self._hom_basis_cache:
            self._hom_basis_cache[key] = tuple(hom_basis(self.quiver, self.q, self.rep(x), self.rep(y)))
        return self._hom_basis_cache[key]

    def hom_dim(self, x: int, y: int) -> int:
        key = (x, y)
        if key not in self._hom_dim:
            self._hom_dim[key] = hom_system(self.quiver, self.q, self.rep(x), self.rep(y)).solution_dim()
        return self._hom_dim[key]

    def hom_count(self, x: int, y: int) -> int:
        return self.q ** self.hom_dim(x, y)

    def ext1_dim(self, x: int, y: int) -> int:
        # hereditary: dim Hom - dim Ext^1 equals the additive Euler form
        d = self.hom_dim(x, y) - self.quiver.euler_additive(self.dim_vector(x), self.dim_vector(y))
        if d < 0:
            raise AssertionError("negative Ext dimension; table is corrupt")
        return d

    def ext1_count(self, x: int, y: int) -> int:
        return self.q ** self.ext1_dim(x, y)

    # -- Euler form ---------------------------------------------------------
    def euler_form(self, alpha, beta) -> Coeff:
        """Multiplicative Euler form q^<alpha,beta> as an exact field element."""
        return q_power(self.q, self.quiver.euler_additive(alpha, beta))

    def symmetric_euler(self, alpha, beta) -> Coeff:
        return q_power(self.q, self.quiver.symmetric_additive(alpha, beta))

    # -- Hall numbers ---------------------------------------------------------
    def hall_number(self, c: int, a: int, b: int) -> int:
        """g^C_{A,B}: number of subrepresentations of C isomorphic to B with quotient A."""
        key = (c, a, b)
        hit = self._hall_cache.get(key)
        if hit is not None:
            return hit
        dc, da, db = self.dim_vector(c), self.dim_vector(a), self.dim_vector(b)
        if tuple(x + y for x, y in zip(da, db)) != dc:
            self._hall_cache[key] = 0
            return 0
        crep = self.rep(c)
        count = 0
        for family in self._subspace_families(crep, db):
            sq = sub_quotient_reps(self.quiver, self.q, crep, family)
            if sq is None:
                continue
            sub, quot = sq
            if self.classify(sub) == b and self.classify(quot) == a:
                count += 1
        self._hall_cache[key] = count
        return count

    def _subspace_families(self, rep: Representation, dims):
        spaces = [tuple(fqlin.enumerate_subspaces(self.q, rep.dim[v], dims[v])) for v in range(self.quiver.n)]
        return product(*spaces)

    def ext_count(self, a: int, b: int, c: int) -> Fraction:
        """|Ext^1(A,B)_C| (extension classes with middle term C), with a live
        total-mass consistency check against q^ext1_dim."""
        val = Fraction(self.hall_number(c, a, b) * self.aut(a) * self.aut(b) * self.hom_count(a, b), self.aut(c))
        if val.denominator != 1:
            raise AssertionError(f"non-integral extension count for ({a},{b},{c})")
        self._check_ext_mass(a, b)
        return val

    def hall_constant(self, a: int, b: int, c: int) -> Fraction:
        """Coefficient of [C] in [A]*[B]: |Ext^1(A,B)_C| / |Hom(A,B)|."""
        return Fraction(self.hall_number(c, a, b) * self.aut(a) * self.aut(b), self.aut(c))

    def _check_ext_mass(self, a: int, b: int) -> None:
        key = ("mass", a, b)
        if key in self._hall_cache:
            return
        total = Fraction(0)
        target_dim = tuple(x + y for x, y in zip(self.dim_vector(a), self.dim_vector(b)))
        for cls in self.classes:
            if cls.dim == target_dim:
                total += Fraction(self.hall_number(cls.id, a, b) * self.aut(a) * self.aut(b) * self.hom_count(a, b), cls.aut)
        if total != self.q ** self.ext1_dim(a, b):
            raise AssertionError(f"extension mass mismatch for ({a},{b}): {total} != q^{self.ext1_dim(a, b)}")
        self._hall_cache[key] = True

    # -- four-term exact sequence counts -----------------------------------
    def gamma_table(self, a: int, b: int):
        """All gamma^{MN}_{AB} as a dict (m, n) -> Fraction, from the fibration
        of Hom(B, A) by (kernel, cokernel) iso classes."""
        key = (a, b)
        hit = self._gamma_cache.get(key)
        if hit is not None:
            return hit
        out = {}
        brep, arep = self.rep(b), self.rep(a)
        basis = self.hom_basis_of(b, a)
        for g in hom_elements(self.quiver, self.q, basis, self.quiver.n):
            if g[0] is None:
                g = tuple(fqlin.zeros(arep.dim[v], brep.dim[v]) for v in range(self.quiver.n))
            ker_rows = [kernel_subspace(self.q, g[v], brep.dim[v]) for v in range(self.quiver.n)]
            sq = sub_quotient_reps(self.quiver, self.q, brep, ker_rows)
            m = self.classify(sq[0])
            im_rows = [image_subspace(self.q, g[v]) for v in range(self.quiver.n)]
            sq2 = sub_quotient_reps(self.quiver, self.q, arep, im_rows)
            n = self.classify(sq2[1])
            out[(m, n)] = out.get((m, n), 0) + self.aut(m) * self.aut(n)
        denom = self.aut(a) * self.aut(b)
        out = {k: Fraction(v, denom) for k, v in out.items()}
        self._gamma_cache[key] = out
        return out

    def gamma_count(self, m: int, n: int, a: int, b: int) -> Fraction:
        return self.gamma_table(a, b).get((m, n), Fraction(0))

    # -- persistence ----------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "quiver": {"n": self.quiver.n, "arrows": [list(a) for a in self.quiver.arrows]},
            "q": self.q,
            "bound": self.bound,
            "classes": [
                {"id": c.id, "dim": list(c.dim), "mats": [[list(r) for r in m] for m in c.rep.mats],
                 "aut": c.aut, "name": c.name}
                for c in self.classes
            ],
            "hom": [[self.hom_dim(x, y) for y in range(len(self.classes))] for x in range(len(self.classes))],
            "ext1": [[self.ext1_dim(x, y) for y in range(len(self.classes))] for x in range(len(self.classes))],
            "hall": [
                {"c": c, "a": a, "b": b, "g": g}
                for (c, a, b), g in sorted(self._hall_cache.items()) if not isinstance(c, str)
            ],
            "gamma": [
                {"m": m, "n": n, "a": a, "b": b, "num": v.numerator, "den": v.denominator}
                for (a, b), tab in sorted(self._gamma_cache.items())
                for (m, n), v in sorted(tab.items())
            ],
        }

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1, sort_keys=True)


def verify_cache(path, budget: int = 20_000_000):
    """Rebuild the table a cache file describes and diff it against the file.

    Returns (table, diffs); an empty diff list means the cache is verified.
    """
    with open(path) as fh:
        data = json.load(fh)
    quiver = Quiver(data["quiver"]["n"], tuple(tuple(a) for a in data["quiver"]["arrows"]))
    table = CategoryTable(quiver, data["q"], data["bound"], budget=budget)
    fresh = table.to_json()
    diffs = []
    for field in ("quiver", "q", "bound", "classes", "hom", "ext1"):
        if fresh[field] != data.get(field):
            diffs.append(field)
    for entry in data.get("hall", []):
        if table.hall_number(entry["c"], entry["a"], entry["b"]) != entry["g"]:
            diffs.append(f"hall[{entry['c']},{entry['a']},{entry['b']}]")
    for entry in data.get("gamma", []):
        if table.gamma_count(entry["m"], entry["n"], entry["a"], entry["b"]) != Fraction(entry["num"], entry["den"]):
            diffs.append(f"gamma[{entry['m']},{entry['n']},{entry['a']},{entry['b']}]")
    return table, diffs


@lru_cache(maxsize=None)
def count_rank_matrices(q: int, m: int, n: int, r: int) -> int:
    """Number of m x n matrices of rank r over F_q."""
    num = 1
    for i in range(r):
        num *= (q**m - q**i) * (q**n - q**i)
    den = 1
    for i in range(r):
        den *= q**r - q**i
    return num // den if r else 1


@lru_cache(maxsize=None)
def build_table(quiver_name: str, q: int, bound: int) -> CategoryTable:
    return CategoryTable(NAMED_QUIVERS[quiver_name], q, bound)
