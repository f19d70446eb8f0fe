"""Exact word algebra in the torus knot group  <alpha, beta ; alpha^p = beta^q>.

Words are sequences of letters ('a' or 'b', nonzero integer exponent).
The canonical normal form extracts the central element c = alpha^p = beta^q
to the front and leaves an alternating product of syllables alpha^e with
1 <= e <= p-1 and beta^f with 1 <= f <= q-1.  Two words are equal in the
group iff their normal forms are identical, so equality testing needs no
matrix tolerance.

Characters are encoded by their rational rotation number t at the element
x = alpha^q1 beta^p1 of abelian degree 1: chi(w) = exp(2 pi i t deg(w)).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError
from .moebius import IDENTITY_LIFT, LiftedMoebius, lift_compose, lift_inverse, lift_power

_GENS = ("a", "b")


@dataclass(frozen=True)
class GroupWord:
    """A word in the abstract generators. Adjacent letters with the same
    generator are merged at construction; zero exponents are dropped."""

    letters: tuple[tuple[str, int], ...]

    def __post_init__(self):
        merged: list[tuple[str, int]] = []
        for gen, exp in self.letters:
            if gen not in _GENS:
                raise DomainError("unknown generator %r" % (gen,))
            if exp == 0:
                continue
            if merged and merged[-1][0] == gen:
                e = merged[-1][1] + exp
                merged.pop()
                if e != 0:
                    merged.append((gen, e))
            else:
                merged.append((gen, int(exp)))
        object.__setattr__(self, "letters", tuple(merged))

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + other.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple((g, -e) for g, e in reversed(self.letters)))

    def __pow__(self, n: int) -> "GroupWord":
        if n < 0:
            return self.inverse() ** (-n)
        return GroupWord(self.letters * n)

    @property
    def length(self) -> int:
        return sum(abs(e) for _, e in self.letters)


IDENTITY_WORD = GroupWord(())


def word(*letters) -> GroupWord:
    return GroupWord(tuple(letters))


def parse_word(text: str) -> GroupWord:
    """Parse the CLI word syntax: letters a, b with optional ^exponent,
    whitespace separated, e.g. 'a^2 b^-3 a'."""
    letters = []
    for tok in text.split():
        if "^" in tok:
            gen, _, exp = tok.partition("^")
            try:
                letters.append((gen, int(exp)))
            except ValueError:
                raise DomainError("bad exponent in token %r" % tok)
        else:
            letters.append((tok, 1))
    return GroupWord(tuple(letters))


def format_word(w: GroupWord) -> str:
    if not w.letters:
        return "1"
    return " ".join(g if e == 1 else "%s^%d" % (g, e) for g, e in w.letters)


def commutator(u: GroupWord, v: GroupWord) -> GroupWord:
    return u * v * u.inverse() * v.inverse()


@dataclass(frozen=True)
class NormalForm:
    """Canonical form c^m s_1 ... s_k with alternating syllables."""

    p: int
    q: int
    m: int
    syllables: tuple[tuple[str, int], ...]

    def __post_init__(self):
        prev = None
        for gen, exp in self.syllables:
            n = self.p if gen == "a" else self.q
            if not 1 <= exp <= n - 1:
                raise DomainError("syllable %s^%d out of range for n=%d" % (gen, exp, n))
            if gen == prev:
                raise DomainError("syllables must alternate")
            prev = gen

    @property
    def is_identity(self) -> bool:
        return self.m == 0 and not self.syllables

    def to_word(self) -> GroupWord:
        letters = []
        if self.m != 0:
            letters.append(("a", self.p * self.m))
        letters.extend(self.syllables)
        return GroupWord(tuple(letters))


def format_normal_form(nf: NormalForm) -> str:
    body = " ".join("%s^%d" % (g, e) for g, e in nf.syllables)
    if body:
        return "c^%d · %s" % (nf.m, body)
    return "c^%d" % nf.m


def _run_letters(letters, p: int, q: int) -> tuple[int, list[tuple[str, int]]]:
    """Push letters through the amalgam rewriting stack.  Each push merges
    with a same-generator top (the stack alternates, so one merge suffices),
    then extracts full powers of alpha^p or beta^q as central carries."""
    center = 0
    stack: list[tuple[str, int]] = []
    for gen, exp in letters:
        n = p if gen == "a" else q
        if stack and stack[-1][0] == gen:
            exp += stack.pop()[1]
        carry, e0 = divmod(exp, n)
        center += carry
        if e0 != 0:
            stack.append((gen, e0))
    return center, stack


def normal_form(w: GroupWord | NormalForm, p: int, q: int) -> NormalForm:
    if isinstance(w, NormalForm):
        return w
    _check_pq(p, q)
    center, stack = _run_letters(w.letters, p, q)
    # the push-time merge keeps the stack alternating with exponents already
    # reduced, so one pass is canonical; the constructor revalidates
    return NormalForm(p, q, center, tuple(stack))


def multiply(u: NormalForm, v: NormalForm) -> NormalForm:
    if (u.p, u.q) != (v.p, v.q):
        raise DomainError("normal forms over different groups")
    nf = normal_form(GroupWord(u.syllables + v.syllables), u.p, u.q)
    return NormalForm(u.p, u.q, u.m + v.m + nf.m, nf.syllables)


def inverse(u: NormalForm) -> NormalForm:
    inv = GroupWord(tuple((g, -e) for g, e in reversed(u.syllables)))
    nf = normal_form(inv, u.p, u.q)
    return NormalForm(u.p, u.q, -u.m + nf.m, nf.syllables)


def identity_nf(p: int, q: int) -> NormalForm:
    return NormalForm(p, q, 0, ())


def abelian_degree(w: GroupWord | NormalForm, p: int, q: int) -> int:
    """deg(alpha) = q, deg(beta) = p; the relation maps to pq on both sides."""
    if isinstance(w, NormalForm):
        return w.m * p * q + abelian_degree(GroupWord(w.syllables), p, q)
    da = sum(e for g, e in w.letters if g == "a")
    db = sum(e for g, e in w.letters if g == "b")
    return q * da + p * db


def _check_pq(p: int, q: int):
    if not (isinstance(p, int) and isinstance(q, int)):
        raise DomainError("p, q must be integers")
    if not (2 <= p < q):
        raise DomainError("need 2 <= p < q, got (%r, %r)" % (p, q))
    if math.gcd(p, q) != 1:
        raise DomainError("p and q must be coprime, got (%d, %d)" % (p, q))


def bezout(p: int, q: int) -> tuple[int, int]:
    """Integers (p1, q1) with p p1 + q q1 = 1 and 0 < q1 < p."""
    _check_pq(p, q)
    q1 = pow(q, -1, p)
    p1 = (1 - q * q1) // p
    assert p * p1 + q * q1 == 1
    return p1, q1


def distinguished_element(p: int, q: int) -> GroupWord:
    """x = alpha^q1 beta^p1, the element of abelian degree 1."""
    p1, q1 = bezout(p, q)
    return word(("a", q1), ("b", p1))


def _check_r(p: int, q: int, r: int):
    if r < 1:
        raise DomainError("subgroup index r must be >= 1")
    if math.gcd(r, p * q) != 1:
        raise DomainError("r must be coprime to pq")


def is_in_subgroup_gr(w: GroupWord | NormalForm, p: int, q: int, r: int) -> bool:
    """Membership in the subgroup generated by alpha^r and beta^r, decided
    by the degree criterion: the subgroup is exactly the kernel of
    deg mod r (the index-r kernel fact; cross-checked in the tests by an
    independent constructive decision)."""
    _check_pq(p, q)
    _check_r(p, q, r)
    return abelian_degree(w, p, q) % r == 0


def subgroup_gr_generators(p: int, q: int, r: int) -> list[GroupWord]:
    _check_pq(p, q)
    _check_r(p, q, r)
    return [word(("a", r)), word(("b", r))]


def coset_representatives(p: int, q: int, r: int) -> list[GroupWord]:
    """x^0, ..., x^(r-1); their degrees are 0, ..., r-1, pairwise distinct
    mod r, so they represent the r cosets."""
    _check_pq(p, q)
    _check_r(p, q, r)
    x = distinguished_element(p, q)
    reps = [x ** k for k in range(r)]
    degs = sorted(abelian_degree(g, p, q) % r for g in reps)
    assert degs == list(range(r)), "coset representatives are not inequivalent"
    return reps


@dataclass(frozen=True)
class Character:
    """chi(w) = exp(2 pi i t deg(w)) for a rational rotation number t."""

    p: int
    q: int
    t: Fraction

    @property
    def order(self) -> int:
        return (self.t % 1).denominator

    def rotation(self, w: GroupWord | NormalForm) -> Fraction:
        return (self.t * abelian_degree(w, self.p, self.q)) % 1

    def value(self, w: GroupWord | NormalForm) -> complex:
        return cmath.exp(2j * math.pi * float(self.rotation(w)))

    def is_trivial_on(self, w: GroupWord | NormalForm) -> bool:
        return self.rotation(w) == 0


def standard_characters(p: int, q: int) -> tuple[Character, Character, Character]:
    """(chi_o, chi_a, chi_b).  The two published forms of t_a agree exactly,
    not just mod 1; both are asserted."""
    _check_pq(p, q)
    r = p * q - p - q
    p1, q1 = bezout(p, q)
    t_o = Fraction(1, r)
    t_a = Fraction(1, p * r) + Fraction(q1, p)
    t_b = Fraction(1, q * r) + Fraction(p1, q)
    assert t_a == Fraction(p1 + q * q1 - q1, r)
    assert (p * t_a - t_o) % 1 == 0 and (q * t_b - t_o) % 1 == 0
    return (Character(p, q, t_o % 1), Character(p, q, t_a % 1), Character(p, q, t_b % 1))


def character_kernel_report(p: int, q: int, max_len: int = 6,
                            extra: list[GroupWord] | None = None) -> dict:
    """Check chi_a(w) = 1  <=>  chi_b(w) = 1  <=>  deg(w) = 0 mod r over all
    words of length <= max_len plus any extra words."""
    _check_pq(p, q)
    r = p * q - p - q
    _, chi_a, chi_b = standard_characters(p, q)
    checked = 0
    failures = []
    for w in enumerate_words(max_len):
        deg = abelian_degree(w, p, q)
        in_g = deg % r == 0
        if (chi_a.rotation(w) == 0) != in_g or (chi_b.rotation(w) == 0) != in_g:
            failures.append(w)
        checked += 1
    for w in extra or []:
        deg = abelian_degree(w, p, q)
        in_g = deg % r == 0
        if (chi_a.rotation(w) == 0) != in_g or (chi_b.rotation(w) == 0) != in_g:
            failures.append(w)
        checked += 1
    return {"p": p, "q": q, "r": r, "checked": checked,
            "passed": not failures, "failures": failures}


def enumerate_words(max_len: int):
    """All words over {a, a^-1, b, b^-1} of length <= max_len (freely
    reduced by the GroupWord constructor; duplicates possible but harmless)."""
    alphabet = (("a", 1), ("a", -1), ("b", 1), ("b", -1))
    stack = [()]
    while stack:
        cur = stack.pop()
        yield GroupWord(cur)
        if len(cur) < max_len:
            for letter in alphabet:
                stack.append(cur + (letter,))


def represent(w: GroupWord | NormalForm, group) -> LiftedMoebius:
    """The homomorphic image in the universal cover: alpha, beta go to the
    lifts of A0, B0 with branch 0 (their lifted-derivative arguments at the
    fixed points are +2pi/p and +2pi/q; asserted in tests)."""
    if isinstance(w, NormalForm):
        w = w.to_word()
    out = IDENTITY_LIFT
    for gen, exp in w.letters:
        base = group.alpha_lift if gen == "a" else group.beta_lift
        out = lift_compose(out, lift_power(base, exp))
    return out
