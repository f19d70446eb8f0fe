"""Independent oracles for test expectations.

Everything here is computed straight from textbook definitions, without
importing the package under test: integer q-series for the classical
modular forms, plain tuple arithmetic for 2x2 matrices, the classical
reduction loop for the modular domain, and exponent sums for the degree
homomorphism.  Tests freeze expected values against these.
"""

from __future__ import annotations

import cmath
import math

import mpmath

N_TERMS = 20

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# integer q-expansions


def sigma(n: int, k: int) -> int:
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def e4_coeffs(terms: int = N_TERMS) -> list[int]:
    return [1] + [240 * sigma(n, 3) for n in range(1, terms + 1)]


def e6_coeffs(terms: int = N_TERMS) -> list[int]:
    return [1] + [-504 * sigma(n, 5) for n in range(1, terms + 1)]


def _mul(a: list[int], b: list[int], terms: int) -> list[int]:
    out = [0] * (terms + 1)
    for i, ai in enumerate(a[:terms + 1]):
        if ai == 0:
            continue
        for j, bj in enumerate(b[:terms + 1 - i]):
            out[i + j] += ai * bj
    return out


def delta_coeffs(terms: int = N_TERMS) -> list[int]:
    """Coefficients of Delta = (E4^3 - E6^2) / 1728; index 0 is the q^1
    coefficient (the constant term vanishes)."""
    e4 = e4_coeffs(terms + 1)
    e6 = e6_coeffs(terms + 1)
    num = [x - y for x, y in zip(_mul(_mul(e4, e4, terms + 1), e4, terms + 1),
                                 _mul(e6, e6, terms + 1))]
    assert num[0] == 0 and all(c % 1728 == 0 for c in num)
    return [c // 1728 for c in num[1:]]


def _series_inverse(a: list[int], terms: int) -> list[int]:
    """Inverse of a monic integer power series; the result is integral."""
    assert a[0] == 1
    inv = [1] + [0] * terms
    for n in range(1, terms + 1):
        acc = 0
        for k in range(1, min(n, len(a) - 1) + 1):
            acc += a[k] * inv[n - k]
        inv[n] = -acc
    return inv


def j_coeffs(terms: int = N_TERMS) -> list[int]:
    """Laurent coefficients of j starting at q^-1: [1, 744, 196884, ...]."""
    e4 = e4_coeffs(terms + 2)
    num = _mul(_mul(e4, e4, terms + 2), e4, terms + 2)
    den = delta_coeffs(terms + 2)      # q * (monic series)
    inv = _series_inverse(den, terms + 1)
    return _mul(num, inv, terms + 1)[:terms + 1]


def eval_q_series(coeffs, z: complex, shift: int = 0) -> complex:
    q = cmath.exp(2j * math.pi * z)
    return sum(c * q ** (n + shift) for n, c in enumerate(coeffs))


def e4(z: complex) -> complex:
    return eval_q_series(e4_coeffs(), z)


def e6(z: complex) -> complex:
    return eval_q_series(e6_coeffs(), z)


def delta(z: complex) -> complex:
    return eval_q_series(delta_coeffs(), z, shift=1)


def j_invariant(z: complex) -> complex:
    return eval_q_series(j_coeffs(), z, shift=-1)


# ---------------------------------------------------------------------------
# derivatives


def finite_difference(f, z: complex, h: float = 1e-5) -> complex:
    """Fourth-order central difference."""
    return (-f(z + 2 * h) + 8 * f(z + h) - 8 * f(z - h) + f(z - 2 * h)) \
        / (12 * h)


# ---------------------------------------------------------------------------
# plain 2x2 matrices over float tuples


def mat_mul(m1, m2):
    a1, b1, c1, d1 = m1
    a2, b2, c2, d2 = m2
    return (a1 * a2 + b1 * c2, a1 * b2 + b1 * d2,
            c1 * a2 + d1 * c2, c1 * b2 + d1 * d2)


def mat_inv(m):
    a, b, c, d = m
    return (d, -b, -c, a)


def generator_mats(p: int, q: int):
    cp = math.cos(math.pi / p)
    cq = math.cos(math.pi / q)
    return (2 * cp, 1.0, -1.0, 0.0), (0.0, 1.0, -1.0, 2 * cq)


def mat_of_word(letters, p: int, q: int):
    """letters: sequence of ('a'|'b', exponent)."""
    A, B = generator_mats(p, q)
    out = (1.0, 0.0, 0.0, 1.0)
    for gen, e in letters:
        base = A if gen == "a" else B
        step = base if e > 0 else mat_inv(base)
        for _ in range(abs(e)):
            out = mat_mul(out, step)
    return out


def mats_equal_psl(m1, m2, tol: float = 1e-9) -> bool:
    same = all(abs(x - y) <= tol for x, y in zip(m1, m2))
    flip = all(abs(x + y) <= tol for x, y in zip(m1, m2))
    return same or flip


# ---------------------------------------------------------------------------
# classical modular reduction (the (2,3) fundamental domain)


def modular_reduce(z: complex, max_steps: int = 200) -> complex:
    for _ in range(max_steps):
        n = round(z.real)
        z = z - n
        if abs(z) < 1.0 - 1e-15:
            z = -1.0 / z
        else:
            return z
    raise RuntimeError("modular reduction did not settle for %r" % (z,))


# ---------------------------------------------------------------------------
# degree homomorphism of the torus knot group


def knot_degree(letters, p: int, q: int) -> int:
    """deg(a) = q, deg(b) = p on the abelianization of <a, b | a^p = b^q>."""
    return sum(q * e if gen == "a" else p * e for gen, e in letters)


# ---------------------------------------------------------------------------
# hypergeometric reference


def hyp2f1_reference(a, b, c, t) -> complex:
    return complex(mpmath.hyp2f1(a, b, c, mpmath.mpc(t)))
