"""Embedding of the derived Hall algebra into the extended semi-derived one.

A generator in slot i maps to a torus-dressed stalk class: the word of
square-root torus factors carries -A in degrees i+1 and i (through the seam
i+t = i) and +A in all degrees between, scaled by the inverse fourth root
of <A, A> (square root when t = 1).  Non-generator tuples are mapped by
triangularity: the product of the slot generators in descending degree
order equals the tuple plus strictly smaller tuples, so images are solved
recursively along the total-class order.
"""

from __future__ import annotations

from fractions import Fraction

from . import torus
from .coeffring import Coeff, q_power
from .dhall import DHAlgebra, DHElement
from .errors import InternalCheckFailed
from .sdh import SDHAlgebra, SDHElement


class Embedding:
    def __init__(self, sdh: SDHAlgebra, dh: DHAlgebra, engine: str = "rewrite"):
        if sdh.t != dh.t:
            raise ValueError("periods differ")
        if dh.t % 2 == 0:
            raise ValueError("defined only for odd periods")
        self.sdh = sdh
        self.dh = dh
        self.t = sdh.t
        self.q = sdh.q
        self.table = sdh.table
        self.engine = engine
        self._tuple_cache = {}

    # -- generator images -------------------------------------------------------
    def iota_generator(self, cls: int, degree: int) -> SDHElement:
        table, t = self.table, self.t
        alpha = table.dim_vector(cls)
        neg = tuple(-a for a in alpha)
        pos = tuple(alpha)
        self_pair = table.quiver.euler_additive(alpha, alpha)
        if t == 1:
            coeff = q_power(self.q, -Fraction(self_pair, 2))
            word = self.sdh.sqrt_k_gen(neg, 0)
        else:
            coeff = q_power(self.q, -Fraction(self_pair, 4))
            word = self.sdh.sqrt_k_gen(neg, (degree + 1) % t)
            for step in range(2, t):
                word = self.sdh.mul_extended(word, self.sdh.sqrt_k_gen(pos, (degree + step) % t), engine=self.engine)
            word = self.sdh.mul_extended(word, self.sdh.sqrt_k_gen(neg, degree % t), engine=self.engine)
        return self.sdh.mul_extended(word.scaled(coeff), self.sdh.u_gen(cls, degree), engine=self.engine)

    # -- linear extension over the tuple basis -----------------------------------
    def tuple_image(self, key) -> SDHElement:
        key = tuple(key)
        hit = self._tuple_cache.get(key)
        if hit is not None:
            return hit
        nonzero = [(d, c) for d, c in enumerate(key) if c != 0]
        if len(nonzero) <= 1:
            if not nonzero:
                out = self.sdh.one()
            else:
                d, c = nonzero[0]
                out = self.iota_generator(c, d)
            self._tuple_cache[key] = out
            return out
        # product of the slot generators in descending degree order
        dh_word = self.dh.one()
        img_word = self.sdh.one()
        for d, c in sorted(nonzero, reverse=True):
            dh_word = self.dh.mul(dh_word, self.dh.z_gen(c, d))
            img_word = self.sdh.mul_extended(img_word, self.iota_generator(c, d), engine=self.engine)
        lead = dh_word.terms.get(key)
        if lead is None or lead.is_zero():
            raise InternalCheckFailed("tuple is not the leading term of its slot product")
        total = sum(sum(self.table.dim_vector(c)) for c in key)
        corr = self.sdh.element()
        for other, coeff in dh_word.terms.items():
            if other == key:
                continue
            if sum(sum(self.table.dim_vector(c)) for c in other) >= total:
                raise InternalCheckFailed("slot product is not triangular")
            corr = corr + self.tuple_image(other).scaled(coeff)
        out = (img_word - corr).scaled(lead.inverse())
        self._tuple_cache[key] = out
        return out

    def iota(self, x: DHElement) -> SDHElement:
        out = self.sdh.element()
        for key, coeff in x.terms.items():
            out = out + self.tuple_image(key).scaled(coeff)
        return out

    # -- verification --------------------------------------------------------------
    def check_pair(self, cls_a: int, i: int, cls_b: int, j: int):
        """Multiplicativity on one generator pair; returns (lhs, rhs, equal)."""
        lhs = self.sdh.mul_extended(self.iota_generator(cls_a, i), self.iota_generator(cls_b, j),
                                    engine=self.engine)
        rhs = self.iota(self.dh.mul_generators(cls_a, i, cls_b, j))
        return lhs, rhs, lhs == rhs

    def check_injective_on(self, keys) -> bool:
        """Distinct basis tuples must have images with distinct leading terms."""
        leads = {}
        for key in keys:
            img = self.tuple_image(key)
            lead = img.leading_key()
            if lead is None or lead in leads:
                return False
            leads[lead] = key
        return True

    def rotation_equivariant(self, cls: int, i: int, shift: int) -> bool:
        """iota commutes with simultaneous degree rotation."""
        img = self.iota_generator(cls, (i + shift) % self.t)
        rot = self._rotate_element(self.iota_generator(cls, i), shift)
        return img == rot

    def _rotate_element(self, x: SDHElement, shift: int) -> SDHElement:
        out = self.sdh.element()
        for (exp, stalks), coeff in x.terms.items():
            exp2 = tuple(exp[(k - shift) % self.t] for k in range(self.t))
            st2 = tuple(stalks[(k - shift) % self.t] for k in range(self.t))
            out._add_term((exp2, st2), coeff)
        return out
