"""Verification suites: every printed identity checked by two independent routes.

Each suite function returns a report dict {"suite", "cases", "pass"} with one
case per identity instance; cases carry stable ids so reports are
byte-reproducible for a fixed configuration and seed.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import torus
from .coeffring import Coeff, q_power
from .complexcat import (
    acyclic_pair,
    c_t_inflate,
    complex_hom_count,
    derived_hom_count,
    direct_sum_complex,
    enumerate_complexes,
    ext1_cardinality,
    ext_structure,
    hall_number_complex,
    aut_complex_count,
    invariants_of,
    stalk,
    stalk_sum,
)
from .dhall import DHAlgebra
from .embed import Embedding
from .errors import BudgetExceeded
from .repcat import CategoryTable, build_table
from .sdh import SDHAlgebra

_SDH_CACHE = {}
_DH_CACHE = {}


def default_bound(q: int) -> int:
    # triple products of dim-2 generators need homology classes up to 6;
    # the q = 3 sweeps only multiply pairs, so 4 suffices there
    return 6 if q == 2 else 4


def get_table(quiver: str, q: int, bound: int | None = None) -> CategoryTable:
    return build_table(quiver, q, default_bound(q) if bound is None else bound)

def get_sdh(quiver: str, q: int, t: int, bound: int | None = None) -> SDHAlgebra:
    key = (quiver, q, t, bound)
    if key not in _SDH_CACHE:
        _SDH_CACHE[key] = SDHAlgebra(get_table(quiver, q, bound), t)
    return _SDH_CACHE[key]

def get_dh(quiver: str, q: int, t: int, bound: int | None = None) -> DHAlgebra:
    key = (quiver, q, t, bound)
    if key not in _DH_CACHE:
        _DH_CACHE[key] = DHAlgebra(get_table(quiver, q, bound), t)
    return _DH_CACHE[key]


def small_classes(table: CategoryTable, max_dim: int = 2):
    return [c.id for c in table.classes if 0 < c.total <= max_dim]


def sample_k0_vectors(table: CategoryTable):
    """Representative torus exponents: positive classes plus one mixed-sign vector."""
    out = [table.dim_vector(c) for c in small_classes(table)]
    n = table.quiver.n
    mixed = tuple(1 if v == 0 else -1 for v in range(n))
    out.append(mixed)
    seen, uniq = set(), []
    for v in out:
        if v not in seen:
            seen.add(v)
            uniq.append(v)
    return uniq


def _case(cases, cid, ok, detail=""):
    cases.append({"id": cid, "ok": bool(ok), "detail": detail})


def _finish(name, cases, findings=None):
    cases.sort(key=lambda c: c["id"])
    report = {"suite": name, "cases": cases, "pass": all(c["ok"] for c in cases)}
    if findings:
        report["findings"] = sorted(findings)
    return report


# ---------------------------------------------------------------------------
# Euler-form suite

def _q_exponent_of_ratio(q: int, hom: int, ext: int) -> Fraction:
    f = Fraction(hom, ext)
    e = 0
    while f > 1:
        f /= q
        e += 1
    while f < 1:
        f *= q
        e -= 1
    if f != 1:
        raise AssertionError("Hom/Ext ratio is not a q-power")
    return Fraction(e)


def euler_suite(quivers=("a1", "a2"), qs=(2, 3), ts=(1, 2, 3)) -> dict:
    """Brute-force Hom/Ext ratios of contractible pairs against stalks and
    each other, compared with the closed Euler-form exponents, plus the
    image-class factorization for acyclic complexes."""
    cases = []
    for quiver in quivers:
        for q in qs:
            table = get_table(quiver, q)
            classes = small_classes(table)
            for t in ts:
                for x in classes:
                    for y in classes:
                        dx, dy = table.dim_vector(x), table.dim_vector(y)
                        e_add = table.quiver.euler_additive(dx, dy)
                        for i in range(t):
                            kx = acyclic_pair(table, x, i, t)
                            for j in range(t):
                                uy = stalk(table, y, j, t)
                                ky = acyclic_pair(table, y, j, t)
                                base = f"{quiver}.q{q}.t{t}.{table.classes[x].name}@{i}.{table.classes[y].name}@{j}"
                                got = _q_exponent_of_ratio(
                                    q, complex_hom_count(table, kx, uy), ext1_cardinality(table, kx, uy))
                                want = Fraction(e_add * (1 if (i - 1) % t == j else 0))
                                if t == 1:
                                    want = Fraction(e_add)
                                _case(cases, f"pair-on-stalk.{base}", got == want, f"{got} vs {want}")
                                ux = stalk(table, x, i, t)
                                got = _q_exponent_of_ratio(
                                    q, complex_hom_count(table, ux, ky), ext1_cardinality(table, ux, ky))
                                want = Fraction(e_add * (1 if i == j else 0))
                                if t == 1:
                                    want = Fraction(e_add)
                                _case(cases, f"stalk-on-pair.{base}", got == want, f"{got} vs {want}")
                                got = _q_exponent_of_ratio(
                                    q, complex_hom_count(table, kx, ky), ext1_cardinality(table, kx, ky))
                                want = Fraction(e_add * ((1 if i == j else 0) + (1 if (i - 1) % t == j else 0)))
                                _case(cases, f"pair-on-pair.{base}", got == want, f"{got} vs {want}")
            cases.extend(_factorization_cases(table, quiver, q, ts))
    return _finish("euler", cases)


def _factorization_cases(table: CategoryTable, quiver: str, q: int, ts) -> list:
    """<[K], [M]> = prod_i <[pair on Im d^i at i+1], [M]> for acyclic K, both orders."""
    cases = []
    s = small_classes(table)[0]
    for t in ts:
        acyclics = []
        k1 = acyclic_pair(table, s, 0, 1)
        if t == 1:
            acyclics.append(("doubled", k1))
            acyclics.append(("doubled-sum", direct_sum_complex(table, k1, k1)))
            if len(small_classes(table)) > 1:
                s2 = small_classes(table)[1]
                acyclics.append(("doubled-2", acyclic_pair(table, s2, 0, 1)))
        else:
            acyclics.append(("inflated", c_t_inflate(table, k1, t)))
            acyclics.append(("pair-sum", direct_sum_complex(
                table, acyclic_pair(table, s, 0, t), acyclic_pair(table, s, t - 1, t))))
            if len(small_classes(table)) > 1:
                s2 = small_classes(table)[1]
                acyclics.append(("pair-sum-2", direct_sum_complex(
                    table, acyclic_pair(table, s2, 1 % t, t), acyclic_pair(table, s, 0, t))))
        probes = [stalk(table, s, 0, t), acyclic_pair(table, s, t - 1, t)]
        for name, k in acyclics:
            inv = invariants_of(table, k)
            if not inv.is_acyclic():
                raise AssertionError("factorization test complex is not acyclic")
            for pi, m in enumerate(probes):
                lhs = _q_exponent_of_ratio(q, complex_hom_count(table, k, m), ext1_cardinality(table, k, m))
                rhs = Fraction(0)
                for i in range(t):
                    if all(v == 0 for v in inv.image[i]):
                        continue
                    factor = _pair_on_class(table, inv.image[i], (i + 1) % t, t)
                    rhs += _q_exponent_of_ratio(
                        q, complex_hom_count(table, factor, m), ext1_cardinality(table, factor, m))
                _case(cases, f"factorization-left.{quiver}.q{q}.t{t}.{name}.m{pi}", lhs == rhs, f"{lhs} vs {rhs}")
                lhs = _q_exponent_of_ratio(q, complex_hom_count(table, m, k), ext1_cardinality(table, m, k))
                rhs = Fraction(0)
                for i in range(t):
                    if all(v == 0 for v in inv.image[i]):
                        continue
                    factor = _pair_on_class(table, inv.image[i], (i + 1) % t, t)
                    rhs += _q_exponent_of_ratio(
                        q, complex_hom_count(table, m, factor), ext1_cardinality(table, m, factor))
                _case(cases, f"factorization-right.{quiver}.q{q}.t{t}.{name}.m{pi}", lhs == rhs, f"{lhs} vs {rhs}")
    return cases


def _pair_on_class(table: CategoryTable, k0_vec, degree: int, t: int):
    """Contractible pair on any class with the given K_0 vector (image classes
    of acyclics are classes of actual subobjects, so a class always exists)."""
    for cls in table.classes:
        if cls.dim == tuple(k0_vec):
            return acyclic_pair(table, cls.id, degree, t)
    raise BudgetExceeded(f"no class with dimension vector {k0_vec} in the table")


# ---------------------------------------------------------------------------
# relation suite (the generator-and-relation presentation, both routes)

def relations_suite(quivers=("a1", "a2"), qs=(2,), ts=(1, 3, 4)) -> dict:
    cases = []
    for quiver in quivers:
        for q in qs:
            for t in ts:
                alg = get_sdh(quiver, q, t)
                table = alg.table
                classes = small_classes(table)
                vecs = sample_k0_vectors(table)
                tag = f"{quiver}.q{q}.t{t}"
                if t == 1:
                    _relations_t1(cases, alg, classes, vecs, tag)
                else:
                    _relations_periodic(cases, alg, classes, vecs, tag)
    return _finish("relations", cases)


def _relations_t1(cases, alg: SDHAlgebra, classes, vecs, tag):
    table = alg.table
    for a in classes:
        for b in classes:
            # stalk merge: counted middle terms against the literal torus-dressed sum
            lhs = alg.mul_bruteforce(alg.u_gen(a, 0), alg.u_gen(b, 0))
            rhs = alg.element()
            for mid in ext_structure(table, stalk_sum(table, (a,)), stalk_sum(table, (b,))):
                inv = invariants_of(table, mid.complex)
                coeff = Coeff.from_fraction(alg.q, mid.hall_constant)
                coeff = coeff * alg.qc(table.quiver.euler_additive(inv.image[0], table.dim_vector(inv.homology[0])))
                exp = torus.monomial_exp(1, alg.n, 0, tuple(2 * v for v in inv.image[0]))
                rhs = rhs + alg.term(coeff, exp, (inv.homology[0],))
            _case(cases, f"stalk-merge.{tag}.{table.classes[a].name}.{table.classes[b].name}", lhs == rhs)
    for a in classes:
        for al in vecs:
            ua, ka = alg.u_gen(a, 0), alg.k_gen(al, 0)
            lhs = alg.mul_bruteforce(ua, ka)
            da = table.dim_vector(a)
            scal = alg.qc(table.quiver.euler_additive(al, da) - table.quiver.euler_additive(da, al))
            rhs = alg.mul_bruteforce(ka, ua).scaled(scal)
            _case(cases, f"stalk-past-torus.{tag}.{table.classes[a].name}.{al}", lhs == rhs)
    for al in vecs:
        for be in vecs:
            lhs = alg.mul_bruteforce(alg.k_gen(al, 0), alg.k_gen(be, 0))
            summed = tuple(x + y for x, y in zip(al, be))
            rhs = alg.k_gen(summed, 0).scaled(alg.qc(-2 * table.quiver.euler_additive(al, be)))
            _case(cases, f"torus-product.{tag}.{al}.{be}", lhs == rhs)


def _relations_periodic(cases, alg: SDHAlgebra, classes, vecs, tag):
    table, t = alg.table, alg.t
    euler = table.quiver.euler_additive
    for i in range(t):
        j = (i + 1) % t
        for a in classes:
            for b in classes:
                name = f"{table.classes[a].name}.{table.classes[b].name}.i{i}"
                # same-degree merge from abelian Hall constants
                lhs = alg.mul_bruteforce(alg.u_gen(a, i), alg.u_gen(b, i))
                rhs = alg.element()
                target = tuple(x + y for x, y in zip(table.dim_vector(a), table.dim_vector(b)))
                for cls in table.classes:
                    if cls.dim == target:
                        g = table.hall_constant(a, b, cls.id)
                        if g:
                            rhs = rhs + alg.u_gen(cls.id, i).scaled(g)
                _case(cases, f"same-degree.{tag}.{name}", lhs == rhs)
                # adjacent degrees via the four-term counts; at the seam the
                # right side is itself out of normal order, so the literal
                # assembly multiplies its pieces instead of naming a basis key
                lhs = alg.mul_bruteforce(alg.u_gen(b, i), alg.u_gen(a, j))
                rhs = alg.element()
                for (m, n), gamma in sorted(table.gamma_table(a, b).items()):
                    scale = gamma * Fraction(table.aut(a) * table.aut(b), table.aut(m) * table.aut(n))
                    beta = tuple(x - y for x, y in zip(table.dim_vector(b), table.dim_vector(m)))
                    coeff = Coeff.from_fraction(alg.q, scale) * alg.qc(euler(beta, table.dim_vector(m)))
                    exp = torus.monomial_exp(t, alg.n, j, tuple(2 * x for x in beta))
                    piece = alg.mul_bruteforce(alg.u_gen(n, j), alg.u_gen(m, i))
                    rhs = rhs + alg.mul_bruteforce(alg.term(coeff, exp, alg.zero_stalks()), piece)
                _case(cases, f"adjacent.{tag}.{name}", lhs == rhs)
        for b in classes:
            db = table.dim_vector(b)
            for al in vecs:
                # torus in the same degree
                lhs = alg.mul_bruteforce(alg.k_gen(al, i), alg.u_gen(b, i))
                rhs = alg.mul_bruteforce(alg.u_gen(b, i), alg.k_gen(al, i)).scaled(alg.qc(euler(db, al)))
                _case(cases, f"torus-same.{tag}.{table.classes[b].name}.{al}.i{i}", lhs == rhs)
                # stalk then torus one degree up
                lhs = alg.mul_bruteforce(alg.u_gen(b, i), alg.k_gen(al, j))
                rhs = alg.mul_bruteforce(alg.k_gen(al, j), alg.u_gen(b, i)).scaled(alg.qc(euler(al, db)))
                _case(cases, f"stalk-torus-up.{tag}.{table.classes[b].name}.{al}.i{i}", lhs == rhs)
                # torus then stalk one degree up commute freely
                lhs = alg.mul_bruteforce(alg.k_gen(al, i), alg.u_gen(b, j))
                rhs = alg.mul_bruteforce(alg.u_gen(b, j), alg.k_gen(al, i))
                _case(cases, f"torus-stalk-up.{tag}.{table.classes[b].name}.{al}.i{i}", lhs == rhs)
        for al in vecs:
            for be in vecs:
                lhs = alg.mul_bruteforce(alg.k_gen(al, i), alg.k_gen(be, i))
                summed = tuple(x + y for x, y in zip(al, be))
                rhs = alg.k_gen(summed, i).scaled(alg.qc(-euler(al, be)))
                _case(cases, f"torus-same-product.{tag}.{al}.{be}.i{i}", lhs == rhs)
                lhs = alg.mul_bruteforce(alg.k_gen(be, i), alg.k_gen(al, j))
                rhs = alg.mul_bruteforce(alg.k_gen(al, j), alg.k_gen(be, i)).scaled(alg.qc(euler(al, be)))
                _case(cases, f"torus-up-commute.{tag}.{al}.{be}.i{i}", lhs == rhs)
    if t > 3:
        for i in range(t):
            for j in range(t):
                if j in (i, (i + 1) % t, (i - 1) % t) or j < i:
                    continue
                for a in classes[:2]:
                    for b in classes[:2]:
                        name = f"i{i}.j{j}.{table.classes[a].name}.{table.classes[b].name}"
                        ua, ub = alg.u_gen(a, i), alg.u_gen(b, j)
                        _case(cases, f"distant-stalks.{tag}.{name}",
                              alg.mul_bruteforce(ua, ub) == alg.mul_bruteforce(ub, ua))
                for al in vecs[:2]:
                    for b in classes[:2]:
                        ka, ub = alg.k_gen(al, i), alg.u_gen(b, j)
                        _case(cases, f"distant-torus-stalk.{tag}.i{i}.j{j}.{al}.{table.classes[b].name}",
                              alg.mul_bruteforce(ka, ub) == alg.mul_bruteforce(ub, ka))
                    for be in vecs[:2]:
                        ka, kb = alg.k_gen(al, i), alg.k_gen(be, j)
                        _case(cases, f"distant-torus.{tag}.i{i}.j{j}.{al}.{be}",
                              alg.mul_bruteforce(ka, kb) == alg.mul_bruteforce(kb, ka))
    return cases


# ---------------------------------------------------------------------------
# engine agreement and associativity

def generator_pool(alg: SDHAlgebra, include_roots: bool = False):
    table = alg.table
    pool = []
    for i in range(alg.t):
        for c in small_classes(table):
            pool.append((f"U.{table.classes[c].name}@{i}", alg.u_gen(c, i)))
        for v in sample_k0_vectors(table):
            pool.append((f"K.{v}@{i}", alg.k_gen(v, i)))
            if include_roots:
                pool.append((f"sqrtK.{v}@{i}", alg.sqrt_k_gen(v, i)))
    return pool


def engine_agreement_suite(quivers=("a1", "a2"), qs=(2,), ts=(1, 3, 4)) -> dict:
    cases = []
    for quiver in quivers:
        for q in qs:
            for t in ts:
                alg = get_sdh(quiver, q, t)
                pool = generator_pool(alg)
                for na, xa in pool:
                    for nb, xb in pool:
                        ok = alg.mul_rewrite(xa, xb) == alg.mul_bruteforce(xa, xb)
                        _case(cases, f"agree.{quiver}.q{q}.t{t}.{na}*{nb}", ok)
    return _finish("engines", cases)


def associativity_suite(quivers=("a1", "a2"), qs=(2,), ts=(1, 3, 4), n_triples: int = 100,
                        seed: int = 20240901) -> dict:
    cases = []
    for t in ts:
        for q in qs:
            rng = random.Random(seed + t)
            per_quiver = max(1, n_triples // len(quivers))
            for quiver in quivers:
                alg = get_sdh(quiver, q, t)
                pool = generator_pool(alg)
                engines = ["brute"] if t == 2 else ["brute", "rewrite"]
                for k in range(per_quiver):
                    (na, xa), (nb, xb), (nc, xc) = (rng.choice(pool) for _ in range(3))
                    for eng in engines:
                        mul = alg.mul_bruteforce if eng == "brute" else alg.mul_rewrite
                        ok = mul(mul(xa, xb), xc) == mul(xa, mul(xb, xc))
                        _case(cases, f"assoc.{quiver}.q{q}.t{t}.{eng}.{k:03d}", ok,
                              f"{na} * {nb} * {nc}")
    return _finish("assoc", cases)


# ---------------------------------------------------------------------------
# normal-form / basis suite

def basis_suite(quivers=("a1", "a2"), qs=(2,), ts=(1, 2, 3), max_total: int = 4) -> dict:
    cases = []
    findings = []
    for quiver in quivers:
        for q in qs:
            for t in ts:
                alg = get_sdh(quiver, q, t)
                table = alg.table
                total_seen = 0
                for m in enumerate_complexes(table, t, max_total):
                    total_seen += 1
                    inv = invariants_of(table, m)
                    coeff, exp, h = alg.reduce_to_b8(m)
                    tag = f"{quiver}.q{q}.t{t}.c{total_seen:04d}"
                    ok_inv = h == inv.homology and exp == tuple(
                        tuple(2 * a for a in inv.image[(i - 1) % t]) for i in range(t))
                    _case(cases, f"invariants.{tag}", ok_inv)
                    nf = alg.reduce_complex(m)
                    again = alg.element()
                    for (e2, t2), c2 in alg._element_to_b8(nf).items():
                        again = again + alg._b8_to_normal(c2, e2, t2)
                    _case(cases, f"idempotent.{tag}", again == nf)
                    ok_printed, printed_detail = _printed_scalar_check(alg, m, inv)
                    _case(cases, f"printed-scalar.{tag}", ok_printed, printed_detail)
                _case(cases, f"coverage.{quiver}.q{q}.t{t}", total_seen > 0, f"{total_seen} complexes")
            # the period-4 printed coefficient is compared as a finding, never gated
            alg4 = get_sdh(quiver, qs[0], 4)
            mismatches = 0
            for m in enumerate_complexes(alg4.table, 4, 3):
                inv = invariants_of(alg4.table, m)
                ok, _ = _printed_scalar_check(alg4, m, inv)
                if not ok:
                    mismatches += 1
            if mismatches:
                findings.append(f"period-4 printed reduction scalar differs from counting on {mismatches} complexes")
            _case(cases, f"t4-scalar-comparison-ran.{quiver}", True,
                  "agrees" if not mismatches else "mismatch recorded as finding")
    return _finish("basis", cases, findings)


def _printed_scalar_check(alg: SDHAlgebra, m, inv):
    """The literal reduction formula: scalar * ordered product of torus
    monomials * split stalk sum, with the single seam cross-factor for t >= 2
    and no cross-factor for t = 1."""
    table, t = alg.table, alg.t
    euler = table.quiver.euler_additive
    e = 0
    if t >= 2:
        e += euler(inv.image[(t - 1) % t], inv.image[(t - 2) % t])
    for i in range(t):
        e += euler(inv.image[i], table.dim_vector(inv.homology[i]))
    rhs = alg.term(alg.qc(e), alg.zero_exp(), alg.zero_stalks())
    for i in range(t):
        beta = inv.image[(i - 1) % t]
        rhs = alg.mul_bruteforce(rhs, alg.k_gen(beta, i))
    rhs = alg.mul_bruteforce(rhs, alg._normal_form_of_split(inv.homology))
    lhs = alg.reduce_complex(m)
    return lhs == rhs, ""


# ---------------------------------------------------------------------------
# derived Hall suite

def derived_suite(quivers=("a1", "a2"), qs=(2, 3), ts=(1, 3), n_triples: int = 100,
                  seed: int = 20240902) -> dict:
    cases = []
    for quiver in quivers:
        for q in qs:
            table = get_table(quiver, q)
            classes = small_classes(table)
            for t in ts:
                dh = get_dh(quiver, q, t)
                tag = f"{quiver}.q{q}.t{t}"
                for a in classes:
                    for b in classes:
                        name = f"{table.classes[a].name}.{table.classes[b].name}"
                        if t == 1:
                            _case(cases, f"counted-vs-literal.{tag}.{name}",
                                  dh.relation_single_period(a, b)[2])
                        else:
                            for i in range(t):
                                _case(cases, f"same-degree.{tag}.{name}.i{i}",
                                      dh.relation_same_degree(a, b, i)[2])
                                _case(cases, f"adjacent.{tag}.{name}.i{i}",
                                      dh.relation_adjacent(a, b, i)[2])
                # cyclic rotation of structure constants
                if t > 1 and classes:
                    x = [0] * t
                    y = [0] * t
                    x[0], y[1] = classes[0], classes[-1]
                    _case(cases, f"rotation.{tag}", dh.rotation_invariant(tuple(x), tuple(y), 1))
            # Ext^1 in complexes equals derived Hom of the shift, on stalk sums
            for t in ts:
                for a in classes:
                    for b in classes:
                        for i in range(t):
                            for j in range(t):
                                xt = [0] * t
                                yt = [0] * t
                                xt[i] = a
                                yt[j] = b
                                lhs = ext1_cardinality(table, stalk_sum(table, xt), stalk_sum(table, yt))
                                rhs = derived_hom_count(table, tuple(xt), tuple(yt), 1)
                                _case(cases,
                                      f"ext-vs-derived-hom.{quiver}.q{q}.t{t}."
                                      f"{table.classes[a].name}@{i}.{table.classes[b].name}@{j}",
                                      lhs == rhs, f"{lhs} vs {rhs}")
    # associativity on seeded triples (q = 2 keeps the sweep within budget)
    for t in ts:
        rng = random.Random(seed + t)
        per_quiver = max(1, n_triples // len(quivers))
        for quiver in quivers:
            dh = get_dh(quiver, 2, t)
            classes = small_classes(dh.table)
            pool = [dh.z_gen(c, i) for c in classes for i in range(t)]
            for k in range(per_quiver):
                xa, xb, xc = (rng.choice(pool) for _ in range(3))
                ok = dh.mul(dh.mul(xa, xb), xc) == dh.mul(xa, dh.mul(xb, xc))
                _case(cases, f"assoc.{quiver}.t{t}.{k:03d}", ok)
    return _finish("derived", cases)


# ---------------------------------------------------------------------------
# embedding suite

def embedding_suite(quivers=("a1", "a2"), qs=(2, 3), ts=(1, 3), with_t5_report: bool = True) -> dict:
    cases = []
    findings = []
    for quiver in quivers:
        for q in qs:
            for t in ts:
                emb = Embedding(get_sdh(quiver, q, t), get_dh(quiver, q, t))
                table = emb.table
                classes = small_classes(table)
                tag = f"{quiver}.q{q}.t{t}"
                for a in classes:
                    for b in classes:
                        name = f"{table.classes[a].name}.{table.classes[b].name}"
                        for i in range(t):
                            for j in range(t):
                                _case(cases, f"multiplicative.{tag}.{name}.i{i}.j{j}",
                                      emb.check_pair(a, i, b, j)[2])
                keys = [(0,) * t]
                for c in classes:
                    for i in range(t):
                        key = [0] * t
                        key[i] = c
                        keys.append(tuple(key))
                if t > 1:
                    key = [0] * t
                    key[0], key[1] = classes[0], classes[-1]
                    keys.append(tuple(key))
                _case(cases, f"injective.{tag}", emb.check_injective_on(keys))
                if t > 1:
                    _case(cases, f"rotation.{tag}", emb.rotation_equivariant(classes[0], 0, 1))
    if with_t5_report:
        emb5 = Embedding(get_sdh("a1", 2, 5), get_dh("a1", 2, 5))
        s = small_classes(emb5.table)[0]
        failures = []
        for i in range(5):
            for j in range(5):
                if not emb5.check_pair(s, i, s, j)[2]:
                    failures.append((i, j))
        if failures:
            findings.append(f"period-5 multiplicativity fails on degree pairs {failures}")
        _case(cases, "t5-report-ran.a1.q2", True,
              "agrees" if not failures else "mismatch recorded as finding")
    return _finish("embedding", cases, findings)


# ---------------------------------------------------------------------------
# pinned worked examples

def pins_suite() -> dict:
    cases = []
    alg = get_sdh("a1", 2, 1)
    table = alg.table
    s = table.class_by_name("S")
    s2 = table.class_by_name("S+S")
    got = alg.mul_bruteforce(alg.u_gen(s, 0), alg.u_gen(s, 0))
    want = alg.u_gen(s2, 0).scaled(Fraction(1, 2)) + alg.k_gen((1,), 0).scaled(Fraction(1, 2))
    _case(cases, "sdh.USxUS", got == want)
    _case(cases, "sdh.USxUS.rewrite", alg.mul_rewrite(alg.u_gen(s, 0), alg.u_gen(s, 0)) == want)
    dh = get_dh("a1", 2, 1)
    got = dh.mul_generators(s, 0, s, 0)
    want = (dh.z_gen(s2, 0) + dh.one()).scaled(q_power(2, Fraction(-1, 2)))
    _case(cases, "dh.ZSxZS", got == want)
    return _finish("pins", cases)


SUITES = {
    "euler": euler_suite,
    "relations": relations_suite,
    "engines": engine_agreement_suite,
    "assoc": associativity_suite,
    "basis": basis_suite,
    "derived": derived_suite,
    "embedding": embedding_suite,
    "pins": pins_suite,
}
