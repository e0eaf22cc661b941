"""The quantum torus of acyclic complex classes, and its square-root extension.

A torus exponent assigns to each degree i in Z/t a vector in (1/2)Z^n,
stored as doubled integers so keys stay exact and hashable.  The monomial
with exponent alpha concentrated in degree i is the class of the
contractible pair on alpha (doubled entries 2*alpha); odd doubled entries
are the adjoined square roots.

Products twist by the Euler pairing of contractible pairs: a pair in degree
i meets a class in degree j through the exponent (delta_i^j + delta_{i-1}^j),
which for t = 1 collapses to the factor 2.  Everything here is a q-power
exponent computed as an exact Fraction; coefficients live in the quartic
field so quarter-integer exponents are representable.
"""

from __future__ import annotations

from fractions import Fraction

from .repcat import Quiver


def zero_exp(t: int, n: int):
    return tuple((0,) * n for _ in range(t))


def exp_insert(exp, degree: int, doubled_alpha):
    out = [list(v) for v in exp]
    out[degree] = [a + b for a, b in zip(out[degree], doubled_alpha)]
    return tuple(tuple(v) for v in out)


def monomial_exp(t: int, n: int, degree: int, doubled_alpha):
    return exp_insert(zero_exp(t, n), degree, doubled_alpha)


def exp_add(e, f):
    return tuple(tuple(a + b for a, b in zip(ve, vf)) for ve, vf in zip(e, f))


def exp_neg(e):
    return tuple(tuple(-a for a in v) for v in e)


def exp_is_integral(e) -> bool:
    """True when every doubled entry is even, i.e. the plain (non-root) torus."""
    return all(a % 2 == 0 for v in e for a in v)


def pairing_exponent(quiver: Quiver, e, f) -> Fraction:
    """Exponent of q in the Euler pairing of two torus exponents.

    Bilinear extension of: degree-i pair against degree-j pair contributes
    <alpha, beta> * (delta_i^j + delta_{i-1}^j).
    """
    t = len(e)
    total = 0
    for i in range(t):
        total += quiver.euler_additive(e[i], f[i])
        total += quiver.euler_additive(e[i], f[(i - 1) % t])
    return Fraction(total, 4)  # both arguments are doubled


def mul_twist_exponent(quiver: Quiver, e, f) -> Fraction:
    """mono(e) * mono(f) = q^(-pairing(e,f)) mono(e+f)."""
    return -pairing_exponent(quiver, e, f)


def commutator_exponent(quiver: Quiver, e, f) -> Fraction:
    """mono(e) * mono(f) = q^(this) * mono(f) * mono(e)."""
    return pairing_exponent(quiver, f, e) - pairing_exponent(quiver, e, f)


def acyclic_on_stalks_exponent(quiver: Quiver, e, stalk_dims) -> Fraction:
    """Exponent of the pairing <torus exponent e, stalk-sum with the given
    degreewise K_0 classes>: degree i of e meets the class in degree i-1."""
    t = len(e)
    total = 0
    for i in range(t):
        total += quiver.euler_additive(e[i], stalk_dims[(i - 1) % t])
    return Fraction(total, 2)


def stalks_on_acyclic_exponent(quiver: Quiver, stalk_dims, e) -> Fraction:
    """Exponent of <stalk-sum, torus exponent e>: degree i meets degree i."""
    t = len(e)
    total = 0
    for i in range(t):
        total += quiver.euler_additive(stalk_dims[i], e[i])
    return Fraction(total, 2)


def stalk_commute_exponent(quiver: Quiver, stalk_dims, e) -> Fraction:
    """[stalks] * mono(e) = q^(this) * mono(e) * [stalks]."""
    return acyclic_on_stalks_exponent(quiver, e, stalk_dims) - stalks_on_acyclic_exponent(quiver, stalk_dims, e)
