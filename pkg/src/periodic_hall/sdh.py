"""The semi-derived Hall algebra of Z/t-graded complexes, in normal form.

Elements are finite sums of terms (coefficient, torus exponent, stalk tuple);
a term denotes

    coeff * mono(exponent) (x) [U_{A^(t-1), t-1}] * ... * [U_{A^0, 0}],

the ordered product basis: all torus factors on the left, stalk factors in
strictly descending degree order.  Integer (even-doubled) exponents with
coefficients in Q[v] form the plain algebra; half exponents and fourth
roots of q live only in the extended one.

Two independent multiplication engines are provided:

* ``mul_bruteforce`` lifts stalk parts to explicit zero-differential
  complexes, multiplies with the counted Hall product of the complex
  category, and reduces every middle term back to normal form;
* ``mul_rewrite`` never touches a complex for t != 1: it concatenates the
  factor words and normalizes with the generator relations (same-degree
  Hall merge, the four-term gamma rule for adjacent degrees and its
  inversion at the cyclic seam, free commutation for distant degrees, and
  the torus commutation scalars).

Their agreement on all generator products is the central acceptance
property of the whole package.
"""

from __future__ import annotations

from fractions import Fraction

from . import torus
from .coeffring import Coeff, q_power
from .complexcat import (
    ComplexBudget,
    DEFAULT_BUDGET,
    GradedComplex,
    _c0_dim,
    ext_invariant_spectrum,
    invariants_of,
    make_complex,
    stalk_sum,
)
from .errors import InternalCheckFailed, MismatchedContext, UnsupportedPresentation
from .repcat import CategoryTable, hom_elements


class SDHElement:
    """Finite linear combination of normal-form terms; zero coefficients are
    never stored and term keys have a canonical order."""

    __slots__ = ("q", "terms")

    def __init__(self, q: int, terms=None):
        self.q = q
        self.terms = {}
        if terms:
            for key, coeff in terms.items():
                if not coeff.is_zero():
                    self.terms[key] = coeff

    def _add_term(self, key, coeff: Coeff) -> None:
        cur = self.terms.get(key)
        new = coeff if cur is None else cur + coeff
        if new.is_zero():
            self.terms.pop(key, None)
        else:
            self.terms[key] = new

    def __add__(self, other: "SDHElement") -> "SDHElement":
        out = SDHElement(self.q, dict(self.terms))
        for key, coeff in other.terms.items():
            out._add_term(key, coeff)
        return out

    def __sub__(self, other: "SDHElement") -> "SDHElement":
        out = SDHElement(self.q, dict(self.terms))
        for key, coeff in other.terms.items():
            out._add_term(key, -coeff)
        return out

    def scaled(self, c) -> "SDHElement":
        if not isinstance(c, Coeff):
            c = Coeff.from_fraction(self.q, c)
        out = SDHElement(self.q)
        for key, coeff in self.terms.items():
            out._add_term(key, coeff * c)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def __eq__(self, other) -> bool:
        return isinstance(other, SDHElement) and self.q == other.q and self.terms == other.terms

    def __hash__(self):
        return hash((self.q, tuple(self.sorted_terms())))

    def leading_key(self):
        if not self.terms:
            return None
        return max(self.terms)

    def is_plain(self) -> bool:
        """True when the element lies in the non-extended algebra."""
        return all(
            torus.exp_is_integral(exp) and coeff.in_v_subring()
            for (exp, _), coeff in self.terms.items()
        )

    def to_json(self):
        return [
            {"coeff": coeff.to_json(), "torus": [list(v) for v in exp], "stalks": list(stalks)}
            for (exp, stalks), coeff in self.sorted_terms()
        ]

    def __repr__(self):
        return f"SDHElement({self.terms!r})"


class SDHAlgebra:
    """Multiplication engines and normal-form reduction for fixed (table, t)."""

    def __init__(self, table: CategoryTable, t: int, budget: ComplexBudget = DEFAULT_BUDGET):
        if t < 1:
            raise ValueError("period must be positive")
        self.table = table
        self.t = t
        self.q = table.q
        self.n = table.quiver.n
        self.budget = budget
        self._nf_cache = {}
        self._word_cache = {}
        self._stalk_mul_cache = {}
        self.rewrite_step_cap = 200_000

    # -- term constructors -------------------------------------------------
    def zero_exp(self):
        return torus.zero_exp(self.t, self.n)

    def zero_stalks(self):
        return (0,) * self.t

    def element(self, terms=None) -> SDHElement:
        return SDHElement(self.q, terms)

    def one(self) -> SDHElement:
        return self.element({(self.zero_exp(), self.zero_stalks()): Coeff.one(self.q)})

    def term(self, coeff, exp, stalks) -> SDHElement:
        if not isinstance(coeff, Coeff):
            coeff = Coeff.from_fraction(self.q, coeff)
        return self.element({(exp, tuple(stalks)): coeff})

    def u_gen(self, cls: int, degree: int) -> SDHElement:
        stalks = [0] * self.t
        stalks[degree % self.t] = cls
        return self.term(1, self.zero_exp(), tuple(stalks))

    def k_gen(self, alpha, degree: int) -> SDHElement:
        """The plain torus generator on the K_0 class alpha in one degree."""
        doubled = tuple(2 * a for a in alpha)
        return self.term(1, torus.monomial_exp(self.t, self.n, degree % self.t, doubled), self.zero_stalks())

    def sqrt_k_gen(self, alpha, degree: int) -> SDHElement:
        """Square root of the torus generator (extended algebra)."""
        doubled = tuple(int(a) for a in alpha)
        return self.term(1, torus.monomial_exp(self.t, self.n, degree % self.t, doubled), self.zero_stalks())

    def qc(self, e) -> Coeff:
        return q_power(self.q, e)

    # -- stalk bookkeeping ---------------------------------------------------
    def _stalk_dims(self, stalks):
        return tuple(self.table.dim_vector(c) for c in stalks)

    def _descending_factors(self, stalks):
        return [(stalks[d], d) for d in range(self.t - 1, -1, -1) if stalks[d] != 0]

    def _factors_to_stalks(self, factors):
        out = [0] * self.t
        for cls, d in factors:
            if out[d] != 0:
                raise InternalCheckFailed("two stalk factors left in one degree")
            out[d] = cls
        return tuple(out)

    # -- reduction to normal form ---------------------------------------------
    def reduce_to_b8(self, m: GradedComplex):
        """Express a complex class as coeff * mono(exp) * [stalk sum of its homology].

        The coefficient is prod_i <Im d^i, H^i>; the torus exponent places the
        image class of d^(i-1) in degree i.
        """
        inv = invariants_of(self.table, m)
        return self._reduce_invariants_to_b8(inv.homology, inv.image)

    def reduce_complex(self, m: GradedComplex) -> SDHElement:
        """Normal form of a complex class (idempotent on normal forms)."""
        if m.t != self.t:
            raise MismatchedContext("complex has the wrong period")
        coeff, exp, h = self.reduce_to_b8(m)
        return self._b8_to_normal(coeff, exp, h)

    def _word_corrections(self, stalks):
        """Nonzero seam differentials of the descending stalk word.

        The word [U_{A^{t-1},t-1}] * ... * [U_{A^0,0}] equals the sum of the
        complexes L_c with all differentials zero except d^(t-1) = c running
        over Hom(A^(t-1), A^0); c = 0 gives the split stalk sum.  Returns the
        reduced (coeff, exp, homology-tuple) triples of the c != 0 summands.
        """
        key = stalks
        hit = self._word_cache.get(key)
        if hit is not None:
            return hit
        out = []
        if self.t >= 2 and stalks[self.t - 1] != 0 and stalks[0] != 0:
            src, tgt = stalks[self.t - 1], stalks[0]
            basis = self.table.hom_basis_of(src, tgt)
            if basis:
                comps = tuple(self.table.rep(c) for c in stalks)
                for g in hom_elements(self.table.quiver, self.q, basis, self.n):
                    if g[0] is None or all(all(x == 0 for row in m for x in row) for m in g):
                        continue
                    diffs = []
                    for i in range(self.t):
                        if i == self.t - 1:
                            diffs.append(g)
                        else:
                            diffs.append(tuple(
                                [[0] * comps[i].dim[v] for _ in range(comps[(i + 1) % self.t].dim[v])]
                                for v in range(self.n)
                            ))
                    l_c = make_complex(self.table, comps, tuple(diffs))
                    out.append(self.reduce_to_b8(l_c))
        self._word_cache[key] = out
        return out

    def _normal_form_of_split(self, stalks) -> SDHElement:
        """[stalk sum] expanded in the ordered product basis (memoized)."""
        hit = self._nf_cache.get(stalks)
        if hit is not None:
            return hit
        out = self.term(1, self.zero_exp(), stalks)
        for coeff, exp, h in self._word_corrections(stalks):
            out = out - self._b8_to_normal(coeff, exp, h)
        self._nf_cache[stalks] = out
        return out

    def _b8_to_normal(self, coeff: Coeff, exp, stalks) -> SDHElement:
        nf = self._normal_form_of_split(stalks)
        out = self.element()
        for (f, t2), c2 in nf.terms.items():
            tw = self.qc(torus.mul_twist_exponent(self.table.quiver, exp, f))
            out._add_term((torus.exp_add(exp, f), t2), coeff * c2 * tw)
        return out

    def _element_to_b8(self, x: SDHElement):
        """Rewrite an element over the split-stalk-sum basis: list of (coeff, exp, stalks)."""
        out = {}
        for (exp, stalks), coeff in x.terms.items():
            entries = [(Coeff.one(self.q), self.zero_exp(), stalks)]
            entries.extend(self._word_corrections(stalks))
            for c2, e2, h in entries:
                tw = self.qc(torus.mul_twist_exponent(self.table.quiver, exp, e2))
                key = (torus.exp_add(exp, e2), h)
                add = coeff * c2 * tw
                cur = out.get(key)
                new = add if cur is None else cur + add
                if new.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = new
        return out

    # -- engine E2: counted Hall product ---------------------------------------
    def _reduce_invariants_to_b8(self, homology, image):
        exp = self.zero_exp()
        e_total = 0
        for i in range(self.t):
            exp = torus.exp_insert(exp, i, tuple(2 * a for a in image[(i - 1) % self.t]))
            e_total += self.table.quiver.euler_additive(image[i], self.table.dim_vector(homology[i]))
        return (self.qc(e_total), exp, homology)

    def _stalk_mul_b8(self, t1, t2):
        """[stalk sum t1] * [stalk sum t2] as reduced (coeff, exp, homology) triples.

        The Hall constant of a middle class L is (solutions landing on L) / |C0|
        and its reduction depends only on the invariants, so solutions are
        grouped by invariants directly."""
        key = (t1, t2)
        hit = self._stalk_mul_cache.get(key)
        if hit is not None:
            return hit
        a = stalk_sum(self.table, t1)
        b = stalk_sum(self.table, t2)
        c0 = _c0_dim(a, b, self.n)
        out = []
        for (h, im), count in sorted(ext_invariant_spectrum(self.table, a, b, self.budget).items()):
            coeff, exp, h2 = self._reduce_invariants_to_b8(h, im)
            out.append((coeff * Coeff.from_fraction(self.q, Fraction(count, self.q**c0)), exp, h2))
        self._stalk_mul_cache[key] = out
        return out

    def mul_bruteforce(self, x: SDHElement, y: SDHElement) -> SDHElement:
        """Engine E2: explicit extension counting in the complex category."""
        quiver = self.table.quiver
        out = self.element()
        for (e1, t1), c1 in self._element_to_b8(x).items():
            d1 = self._stalk_dims(t1)
            for (e2, t2), c2 in self._element_to_b8(y).items():
                swap = self.qc(torus.stalk_commute_exponent(quiver, d1, e2))
                tors = self.qc(torus.mul_twist_exponent(quiver, e1, e2))
                e12 = torus.exp_add(e1, e2)
                base = c1 * c2 * swap * tors
                for coeff_m, e_m, h in self._stalk_mul_b8(t1, t2):
                    tw = self.qc(torus.mul_twist_exponent(quiver, e12, e_m))
                    contrib = self._b8_to_normal(base * coeff_m * tw, torus.exp_add(e12, e_m), h)
                    out = out + contrib
        return out

    # -- engine E1: relation-driven rewriting ----------------------------------
    def mul_rewrite(self, x: SDHElement, y: SDHElement) -> SDHElement:
        """Engine E2's independent twin: normalize the concatenated words with
        the defining relations.  Unsupported for t = 2."""
        if self.t == 2:
            raise UnsupportedPresentation("no generator-relation presentation for period 2")
        quiver = self.table.quiver
        out = self.element()
        for (e1, t1), c1 in x.terms.items():
            d1 = self._stalk_dims(t1)
            for (e2, t2), c2 in y.terms.items():
                swap = self.qc(torus.stalk_commute_exponent(quiver, d1, e2))
                tors = self.qc(torus.mul_twist_exponent(quiver, e1, e2))
                factors = self._descending_factors(t1) + self._descending_factors(t2)
                out = out + self._rewrite_word(c1 * c2 * swap * tors, torus.exp_add(e1, e2), factors)
        return out

    def _commute_mono_past(self, doubled_alpha, degree, factors) -> Fraction:
        """q-exponent for moving mono(alpha at degree) left across stalk factors."""
        quiver = self.table.quiver
        total = Fraction(0)
        for cls, d in factors:
            cdim = self.table.dim_vector(cls)
            left = quiver.euler_additive(doubled_alpha, cdim) if (degree - 1) % self.t == d else 0
            right = quiver.euler_additive(cdim, doubled_alpha) if degree == d else 0
            total += Fraction(left, 2) - Fraction(right, 2)
        return total

    def _rewrite_word(self, coeff: Coeff, exp, factors) -> SDHElement:
        out = self.element()
        stack = [(coeff, exp, list(factors))]
        steps = 0
        while stack:
            steps += 1
            if steps > self.rewrite_step_cap:
                raise InternalCheckFailed("rewriting did not terminate within the step cap")
            coeff, exp, factors = stack.pop()
            pos = self._first_defect(factors)
            if pos is None:
                out._add_term((exp, self._factors_to_stalks(factors)), coeff)
                continue
            (left_cls, i), (right_cls, j) = factors[pos], factors[pos + 1]
            prefix, suffix = factors[:pos], factors[pos + 2 :]
            if i == j:
                stack.extend(self._merge_same_degree(coeff, exp, prefix, suffix, left_cls, right_cls, i))
            elif j == i + 1:
                stack.extend(self._gamma_forward(coeff, exp, prefix, suffix, left_cls, right_cls, i))
            elif (i, j) == (0, self.t - 1):
                stack.extend(self._gamma_wrap(coeff, exp, prefix, suffix, left_cls, right_cls))
            else:
                stack.append((coeff, exp, prefix + [(right_cls, j), (left_cls, i)] + suffix))
        return out

    def _first_defect(self, factors):
        for k in range(len(factors) - 1):
            if factors[k][1] <= factors[k + 1][1]:
                return k
        return None

    def _push_mono(self, coeff, exp, prefix, doubled_alpha, degree):
        """Fold a freshly emitted torus monomial into the accumulator."""
        if all(a == 0 for a in doubled_alpha):
            return coeff, exp
        coeff = coeff * self.qc(self._commute_mono_past(doubled_alpha, degree, prefix))
        mono = torus.monomial_exp(self.t, self.n, degree, doubled_alpha)
        coeff = coeff * self.qc(torus.mul_twist_exponent(self.table.quiver, exp, mono))
        return coeff, torus.exp_add(exp, mono)

    def _merge_same_degree(self, coeff, exp, prefix, suffix, a_cls, b_cls, i):
        table = self.table
        branches = []
        if self.t == 1:
            a = stalk_sum(table, (a_cls,))
            b = stalk_sum(table, (b_cls,))
            c0 = _c0_dim(a, b, self.n)
            for (hs, ims), count in sorted(ext_invariant_spectrum(table, a, b, self.budget).items()):
                h, im = hs[0], ims[0]
                c2 = coeff * Coeff.from_fraction(self.q, Fraction(count, self.q**c0))
                c2 = c2 * self.qc(table.quiver.euler_additive(im, table.dim_vector(h)))
                c2, e2 = self._push_mono(c2, exp, prefix, tuple(2 * v for v in im), 0)
                mids = [(h, 0)] if h != 0 else []
                branches.append((c2, e2, prefix + mids + suffix))
        else:
            target = tuple(x + y for x, y in zip(table.dim_vector(a_cls), table.dim_vector(b_cls)))
            for cls in table.classes:
                if cls.dim != target:
                    continue
                g = table.hall_constant(a_cls, b_cls, cls.id)
                if g == 0:
                    continue
                branches.append((coeff * Coeff.from_fraction(self.q, g), exp, prefix + [(cls.id, i)] + suffix))
        return branches

    def _gamma_terms(self, a_cls, b_cls):
        """Coefficient data of U_{B,i} * U_{A,i+1} = sum gamma-term K * U_N * U_M."""
        table = self.table
        out = []
        for (m, n), gamma in sorted(table.gamma_table(a_cls, b_cls).items()):
            scale = gamma * Fraction(table.aut(a_cls) * table.aut(b_cls), table.aut(m) * table.aut(n))
            beta = tuple(x - y for x, y in zip(table.dim_vector(b_cls), table.dim_vector(m)))
            epow = table.quiver.euler_additive(beta, table.dim_vector(m))
            out.append((m, n, scale, beta, epow))
        return out

    def _gamma_forward(self, coeff, exp, prefix, suffix, left_cls, right_cls, i):
        """Left factor at degree i, right factor at i+1: rewrite forward.

        In the four-term rule the left factor plays B and the right plays A."""
        branches = []
        for m, n, scale, beta, epow in self._gamma_terms(right_cls, left_cls):
            c2 = coeff * Coeff.from_fraction(self.q, scale) * self.qc(epow)
            c2, e2 = self._push_mono(c2, exp, prefix, tuple(2 * x for x in beta), (i + 1) % self.t)
            mids = [(n, (i + 1) % self.t)] if n else []
            mids += [(m, i)] if m else []
            branches.append((c2, e2, prefix + mids + suffix))
        return branches

    def _gamma_wrap(self, coeff, exp, prefix, suffix, left_cls, right_cls):
        """Left factor at degree 0, right factor at t-1: invert the seam relation.

        The four-term rule at the seam reads  U_{B,t-1} * U_{A,0} = principal
        + rest with A = left, B = right; the principal term is exactly
        U_{A,0} * U_{B,t-1} with coefficient 1, and every other term has
        strictly smaller total class, which is the termination measure.
        """
        table = self.table
        branches = [(coeff, exp, prefix + [(right_cls, self.t - 1), (left_cls, 0)] + suffix)]
        bound = sum(table.dim_vector(left_cls)) + sum(table.dim_vector(right_cls))
        for m, n, scale, beta, epow in self._gamma_terms(left_cls, right_cls):
            if (m, n) == (right_cls, left_cls):
                continue
            if sum(table.dim_vector(m)) + sum(table.dim_vector(n)) >= bound:
                raise InternalCheckFailed("seam inversion does not decrease the total class")
            c2 = -coeff * Coeff.from_fraction(self.q, scale) * self.qc(epow)
            c2, e2 = self._push_mono(c2, exp, prefix, tuple(2 * x for x in beta), 0)
            mids = [(n, 0)] if n else []
            mids += [(m, self.t - 1)] if m else []
            branches.append((c2, e2, prefix + mids + suffix))
        return branches

    # -- public dispatch ----------------------------------------------------
    def mul(self, x: SDHElement, y: SDHElement, engine: str = "rewrite") -> SDHElement:
        if engine == "brute":
            return self.mul_bruteforce(x, y)
        if engine == "rewrite":
            if self.t == 2:
                return self.mul_bruteforce(x, y)
            return self.mul_rewrite(x, y)
        if engine == "both":
            got = self.mul_bruteforce(x, y)
            if self.t != 2:
                alt = self.mul_rewrite(x, y)
                if alt != got:
                    raise InternalCheckFailed("multiplication engines disagree")
            return got
        raise ValueError(f"unknown engine {engine!r}")

    def mul_extended(self, x: SDHElement, y: SDHElement, engine: str = "rewrite") -> SDHElement:
        """Product in the extended algebra (half torus exponents allowed).

        The torus-past-stalk commutation scalars are computed on the half
        lattice, so this is the same routine as ``mul``; the name documents
        the contract."""
        return self.mul(x, y, engine=engine)
