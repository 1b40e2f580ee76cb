"""Finite coefficient vectors over the booleans or the nonnegative rationals.

A finite vector is a `Sum`; infinite vectors such as promotions only ever appear
through coefficient queries (callables or finite vectors read pointwise).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .rewrite import _place, normal_form_d
from .syntax import (Sum, bag, cons, isotropy_degree, kind, occurrences)

FiniteVector = Sum


@dataclass(frozen=True)
class Semiring:
    name: str

    @property
    def zero(self):
        return False if self.name == 'bool' else 0

    @property
    def one(self):
        return True if self.name == 'bool' else 1

    def add(self, a, b):
        return (a or b) if self.name == 'bool' else a + b

    def mul(self, a, b):
        return (a and b) if self.name == 'bool' else a * b

    def inv(self, n: int):
        # both semirings have fractions
        return True if self.name == 'bool' else Fraction(1, n)

    def coerce(self, c):
        return bool(c) if self.name == 'bool' else c


RAT = Semiring('rat')
BOOL = Semiring('bool')


def semiring(name: str) -> Semiring:
    if name == 'rat':
        return RAT
    if name == 'bool':
        return BOOL
    raise ValueError(f"unknown semiring {name!r}")


def _category(V: Sum):
    cats = {kind(t) for t in V.support()}
    if len(cats) > 1:
        raise TypeError(f"mixed categories in vector: {sorted(cats)}")
    return cats.pop() if cats else None


def _check(V: Sum, expected: str):
    c = _category(V)
    if c is not None and c != expected:
        raise TypeError(f"expected a {expected} vector, got {c}")


def vec_add(a: Sum, b: Sum) -> Sum:
    if a.semiring != b.semiring:
        raise TypeError("semiring mismatch")
    ca, cb = _category(a), _category(b)
    if ca and cb and ca != cb:
        raise TypeError(f"category mismatch: {ca} vs {cb}")
    return a + b


def vec_scale(c, a: Sum) -> Sum:
    return a.scale(c)


def _multilinear(vectors: Sequence[Sum], build, sr: str) -> Sum:
    S = semiring(sr)
    out = {}
    for combo in itertools.product(*[v.items() for v in vectors]):
        c = S.one
        for _, k in combo:
            c = S.mul(c, k)
        t = build([t for t, _ in combo])
        out[t] = S.add(out.get(t, S.zero), c)
    return Sum(out, sr)


def v_abs(A: Sum) -> Sum:
    _check(A, 'base')
    return Sum({('L', t): c for t, c in A.items()}, A.semiring)


def v_app(H: Sum, S: Sum) -> Sum:
    for t in H.support():
        if kind(t) not in ('value', 'var'):
            raise TypeError("application head must be a head vector")
    _check(S, 'stream')
    return _multilinear([H, S], lambda ts: ('A', ts[0], ts[1]), H.semiring)


def v_bag(*Vs: Sum, semiring_name: str = 'rat') -> Sum:
    for V in Vs:
        _check(V, 'value')
    sr = Vs[0].semiring if Vs else semiring_name
    return _multilinear(list(Vs), bag, sr)


def v_cons(B: Sum, S: Sum) -> Sum:
    _check(B, 'bag')
    _check(S, 'stream')
    return _multilinear([B, S], lambda ts: cons(ts[0], ts[1]), B.semiring)


# -- ordinary substitution ---------------------------------------------------------

def subst_ordinary(e, F, x, semiring_name: str = 'rat') -> Sum:
    """e{F/x}: every occurrence of x replaced by F, one independent choice each."""
    if isinstance(F, tuple):
        F = Sum.single(F, semiring=semiring_name)
    S = semiring(F.semiring)
    n = occurrences(e, x)
    if n == 0:
        return Sum.single(e, semiring=F.semiring)
    out = {}
    for combo in itertools.product(F.items(), repeat=n):
        c = S.one
        for _, k in combo:
            c = S.mul(c, k)
        t = _place(e, x, iter([f for f, _ in combo]), 0)
        out[t] = S.add(out.get(t, S.zero), c)
    return Sum(out, F.semiring)


def subst_ordinary_vec(Q: Sum, F, x) -> Sum:
    sr = Q.semiring
    out = Sum.zero(sr)
    for q, c in Q.items():
        out = out + subst_ordinary(q, F, x, sr).scale(c)
    return out


# -- promotion --------------------------------------------------------------------

Query = Callable[[tuple], object]


def as_query(M) -> Query:
    if callable(M):
        return M
    if isinstance(M, Sum):
        return M.coeff
    if M is None:
        return lambda t: 0
    raise TypeError("expected a vector or coefficient query")


def promotion_coeff(M, b) -> Fraction:
    """(M^!) at the bag b: product of M at the elements, over d(b)."""
    q = as_query(M)
    c = Fraction(1)
    for m in b[1]:
        c *= q(m)
        if c == 0:
            return Fraction(0)
    return c / isotropy_degree(b)


def stream_promotion_coeff(Ms: Sequence, s) -> Fraction:
    c = Fraction(1)
    for i, b in enumerate(s[1]):
        M = Ms[i] if i < len(Ms) else None
        c *= promotion_coeff(M, b)
        if c == 0:
            break
    return c


@dataclass(frozen=True)
class DegreeStream:
    degrees: tuple

    def __post_init__(self):
        d = list(self.degrees)
        while d and d[-1] == 0:
            d.pop()
        object.__setattr__(self, 'degrees', tuple(d))

    @classmethod
    def of(cls, s) -> 'DegreeStream':
        return cls(tuple(len(b[1]) for b in s[1]))

    def factorial(self) -> int:
        return math.prod(math.factorial(k) for k in self.degrees)

    def __getitem__(self, i):
        return self.degrees[i] if i < len(self.degrees) else 0


def power_coeff(Ms: Sequence[Sum], k: DegreeStream, s) -> Fraction:
    """(M⃗^k⃗) at s, by expanding each bag [M_i, ..., M_i] (k_i copies) literally."""
    if DegreeStream.of(s) != k:
        return Fraction(0)
    c = Fraction(1)
    for i, b in enumerate(s[1]):
        M = Ms[i] if i < len(Ms) else Sum.zero()
        if not b[1]:
            continue
        power = _multilinear([M] * k[i], bag, 'rat')
        c *= power.coeff(b)
    return c


# -- normal forms ------------------------------------------------------------------

def normalize_vector(V: Sum) -> Sum:
    S = semiring(V.semiring)
    memo: dict = {}
    out: dict = {}
    for t, c in V.items():
        for t2, c2 in normal_form_d(t, memo).items():
            out[t2] = S.add(out.get(t2, S.zero), S.mul(c, S.coerce(c2)))
    return Sum(out, V.semiring)
