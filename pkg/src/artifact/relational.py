"""Relational types for resource terms and λ-terms.

Type terms are tagged tuples, mirroring resource terms:
    value type   ('V', stream type)            written  S -o o
    bag type     ('G', sorted value types)
    stream type  ('S', bag types, trimmed)     ι is ('S', ())
    base type    ('O',)
A context is a sorted tuple of (variable, bag type) pairs with nonempty bags;
variables are resource variables ('F', name, i) or ('B', depth, i).
"""
from __future__ import annotations

import itertools
from functools import lru_cache

from .rewrite import big_step_reducts, small_step_reducts
from .syntax import (Abs, App, ParseError, Var, _Tokens, bag, stream)

__all__ = [
    'O', 'IOTA_T', 'vtype', 'type_size', 'type_range', 'fits', 'STAR', 'ctx', 'ctx_get',
    'ctx_union', 'ctx_remove', 'infer', 'typecheck_lambda', 'typings_of_lambda',
    'value_types', 'eta_witness_for_type', 'subject_reduction_check', 'print_type',
    'print_ctx', 'parse_type', 'parse_ctx', 'random_value_type',
]

O = ('O',)
IOTA_T = ('S', ())
STAR = ()


def vtype(s=IOTA_T):
    """The value type s -o o."""
    return ('V', s)


def type_size(t) -> int:
    """Number of -o nodes."""
    tag = t[0]
    if tag == 'V':
        return 1 + type_size(t[1])
    if tag == 'O':
        return 0
    return sum(type_size(x) for x in t[1])


def random_value_type(rng, max_size: int, max_range: int = 3):
    """A random value type with at most max_size -o nodes (max_size >= 1)."""
    budget = rng.randint(1, max_size) - 1
    n = rng.randint(0, max_range) if budget else 0
    sizes = [0] * n
    for _ in range(budget if n else 0):
        sizes[rng.randrange(n)] += 1
    bags = []
    for k in sizes:
        items = []
        while k:
            c = rng.randint(1, k)
            items.append(random_value_type(rng, c, max_range))
            k -= type_size(items[-1])
        bags.append(bag(items))
    return vtype(stream(bags))


def type_range(t) -> int:
    """Largest stream range occurring in t."""
    tag = t[0]
    if tag == 'V':
        return type_range(t[1])
    if tag == 'O':
        return 0
    r = len(t[1]) if tag == 'S' else 0
    return max([r] + [type_range(x) for x in t[1]])


def fits(t, bound: int) -> bool:
    return type_size(t) <= bound and type_range(t) <= bound


# -- contexts ------------------------------------------------------------------------

def ctx(mapping) -> tuple:
    items = mapping.items() if isinstance(mapping, dict) else mapping
    return tuple(sorted((v, b) for v, b in items if b[1]))


def ctx_get(G, v):
    for w, b in G:
        if w == v:
            return b
    return ('G', ())


def ctx_union(*Gs) -> tuple:
    acc: dict = {}
    for G in Gs:
        for v, b in G:
            acc[v] = acc.get(v, ()) + b[1]
    return ctx({v: bag(xs) for v, xs in acc.items()})


def ctx_remove(G, v) -> tuple:
    return tuple((w, b) for w, b in G if w != v)


def _ctx_size(G) -> int:
    return sum(type_size(b) for _, b in G)


# -- resource terms -------------------------------------------------------------------

def infer(e):
    """(cont(e), type(e)) or None when e is untypable."""
    tag = e[0]
    if tag in ('B', 'F'):
        raise TypeError("a bare variable is not a resource term")
    if tag == 'A':
        h, s = e[1], e[2]
        ts = infer(s)
        if ts is None:
            return None
        D, st = ts
        if h[0] in ('B', 'F'):
            return ctx_union(D, ((h, ('G', (vtype(st),))),)), O
        th = infer(h)
        if th is None or th[1] != vtype(st):
            return None
        return ctx_union(th[0], D), O
    if tag == 'L':
        ta = infer(e[1])
        if ta is None:
            return None
        G = ta[0]
        own = {v[2]: b for v, b in G if v[0] == 'B' and v[1] == 0}
        n = max(own, default=-1) + 1
        s = stream(own.get(i, ('G', ())) for i in range(n))
        rest = tuple((_lower_var(v), b) for v, b in G if not (v[0] == 'B' and v[1] == 0))
        return ctx(rest), vtype(s)
    parts = [infer(x) for x in e[1]]
    if any(p is None for p in parts):
        return None
    G = ctx_union(*(p[0] for p in parts))
    if tag == 'G':
        return G, bag(p[1] for p in parts)
    return G, stream(p[1] for p in parts)


def _lower_var(v):
    return ('B', v[1] - 1, v[2]) if v[0] == 'B' else v


def subject_reduction_check(e) -> bool:
    """Every one-step reduct sum carries exactly the typing of e (or none)."""
    t = infer(e)
    for U in small_step_reducts(e) | big_step_reducts(e):
        typings = {infer(u) for u in U.support()} - {None}
        if t is None and typings:
            return False
        if t is not None and typings != {t}:
            return False
    return True


# -- witnesses in expansions of variables ----------------------------------------------

def eta_witness_for_type(x, a):
    """w_x(α), w_x^!(ᾱ) or w_x⃗(α⃗) depending on the sort of a.

    x is a value variable for value and bag types, a sequence variable
    (a 2-tuple such as ('B', 0)) for stream types."""
    tag = a[0]
    if tag == 'V':
        y = ('B', 0)
        return ('L', ('A', _under(x), eta_witness_for_type(y, a[1])))
    if tag == 'G':
        return bag(eta_witness_for_type(x, t) for t in a[1])
    if tag == 'S':
        return stream(eta_witness_for_type(x + (i,), b) for i, b in enumerate(a[1]))
    raise ValueError("no witness for the base type")


def _under(v):
    return ('B', v[1] + 1, v[2]) if v[0] == 'B' else v


# -- enumeration of types ------------------------------------------------------------

@lru_cache(maxsize=None)
def _bags_exact(n: int, r: int) -> tuple:
    """Bag types with exactly n nodes (every inner range <= r)."""
    if n == 0:
        return (('G', ()),)
    out = set()
    for first in range(1, n + 1):
        for a in _values_exact(first, r):
            for rest in _bags_exact(n - first, r):
                out.add(bag((a,) + rest[1]))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _streams_exact(n: int, r: int, length: int) -> tuple:
    """Streams of at most `length` positions with exactly n nodes."""
    if length == 0:
        return (IOTA_T,) if n == 0 else ()
    out = set()
    for k in range(n + 1):
        for b in _bags_exact(k, r):
            for rest in _streams_exact(n - k, r, length - 1):
                out.add(stream((b,) + rest[1]))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _values_exact(n: int, r: int) -> tuple:
    if n < 1:
        return ()
    return tuple(vtype(s) for s in _streams_exact(n - 1, r, r))


def value_types(bound: int) -> list:
    """All value types with at most `bound` nodes and ranges at most `bound`."""
    return [a for n in range(1, bound + 1) for a in _values_exact(n, bound)]


def _bag_types(bound: int) -> list:
    return [b for n in range(bound + 1) for b in _bags_exact(n, bound)]


# -- λ-terms ---------------------------------------------------------------------------

def _key(name):
    return ('F', name, 0)


def _splits(G, k: int):
    """All ways to write G as an ordered concatenation of k contexts."""
    flat = [(v, t) for v, b in G for t in b[1]]
    seen = set()
    for assign in itertools.product(range(k), repeat=len(flat)):
        parts = [[] for _ in range(k)]
        for (v, t), j in zip(flat, assign):
            parts[j].append((v, t))
        key = tuple(tuple(sorted(p)) for p in parts)
        if key in seen:
            continue
        seen.add(key)
        yield [ctx_union(*(((v, ('G', (t,))),) for v, t in p)) for p in parts]


def typecheck_lambda(G, M, a, bound: int | None = None) -> bool:
    """Derivability of G ⊢ M : a.

    Spines with a variable head are checked exactly; the argument bag type of a
    β-redex is searched among bag types of at most `bound` nodes (by default
    the size of the judgement), which is exact whenever M is β-normal."""
    G = ctx(G) if isinstance(G, dict) else G
    if bound is None:
        bound = _ctx_size(G) + type_size(a)
    memo: dict = {}
    return _check(G, M, a, bound, memo)


def _spine(M):
    args = []
    while isinstance(M, App):
        args.append(M.arg)
        M = M.fun
    return M, args[::-1]


def _check(G, M, a, bound, memo) -> bool:
    key = (G, M, a)
    if key in memo:
        return memo[key]
    memo[key] = False   # guards cycles; a derivation never revisits a judgement
    memo[key] = r = _check_raw(G, M, a, bound, memo)
    return r


def _check_raw(G, M, a, bound, memo) -> bool:
    if a[0] != 'V':
        return False
    if isinstance(M, Var):
        return G == ((_key(M.name), ('G', (a,))),)
    if isinstance(M, Abs):
        s = a[1]
        first = s[1][0] if s[1] else ('G', ())
        rest = ('S', s[1][1:])
        x = _key(M.name)
        if ctx_get(G, x)[1]:
            return False
        return _check(ctx_union(G, ((x, first),)) if first[1] else G, M.body, vtype(rest),
                      bound, memo)
    h, args = _spine(M)
    if isinstance(h, Var):
        x = _key(h.name)
        for t in set(ctx_get(G, x)[1]):
            s = t[1]
            bags = [s[1][j] if j < len(s[1]) else ('G', ()) for j in range(len(args))]
            if ('S', s[1][len(args):]) != a[1]:
                continue
            G0 = ctx_union(ctx_remove(G, x), ((x, bag(_remove_one(ctx_get(G, x)[1], t))),))
            for parts in _splits(G0, len(args)):
                if all(_check_bang(P, N, b, bound, memo) for P, N, b in zip(parts, args, bags)):
                    return True
        return False
    # β-redex in head position: guess the bag type of the first argument
    fun, arg = M.fun, M.arg
    for b in _bag_types(bound):
        for G1, G2 in _splits(G, 2):
            if _check_bang(G2, arg, b, bound, memo) and \
                    _check(G1, fun, vtype(stream((b,) + a[1][1])), bound, memo):
                return True
    return False


def _remove_one(xs, t):
    xs = list(xs)
    xs.remove(t)
    return xs


def _check_bang(G, N, b, bound, memo) -> bool:
    k = len(b[1])
    if k == 0:
        return G == ()
    for parts in _splits(G, k):
        if all(_check(P, N, t, bound, memo) for P, t in zip(parts, b[1])):
            return True
    return False


def typings_of_lambda(M, bound: int) -> set:
    """Derivable (context, value type) pairs whose derivation uses only value
    types with at most `bound` nodes and stream ranges at most `bound`."""
    memo: dict = {}
    return set(_typings(M, bound, memo))


def _typings(M, bound, memo) -> frozenset:
    key = M
    if key in memo:
        return memo[key]
    out = set()
    if isinstance(M, Var):
        for a in value_types(bound):
            out.add((((_key(M.name), ('G', (a,))),), a))
    elif isinstance(M, Abs):
        x = _key(M.name)
        for G, a in _typings(M.body, bound, memo):
            t = vtype(stream((ctx_get(G, x),) + a[1][1]))
            if fits(t, bound):
                out.add((ctx_remove(G, x), t))
    else:
        by_type: dict = {}
        for D, t in _typings(M.arg, bound, memo):
            by_type.setdefault(t, []).append(D)
        for G, a in _typings(M.fun, bound, memo):
            s = a[1]
            first = s[1][0] if s[1] else ('G', ())
            rest = vtype(('S', s[1][1:]))
            choices = [by_type.get(t, []) for t in first[1]]
            for combo in itertools.product(*choices):
                out.add((ctx_union(G, *combo), rest))
    memo[key] = r = frozenset(out)
    return r


# -- concrete syntax ------------------------------------------------------------------

def print_type(t) -> str:
    tag = t[0]
    if tag == 'O':
        return 'o'
    if tag == 'V':
        s = print_type(t[1])
        return f"{s} -o o" if not t[1][1] else f"({s}) -o o"
    if tag == 'G':
        return '[' + ', '.join(print_type(a) for a in t[1]) + ']'
    return ''.join(print_type(b) + ' :: ' for b in t[1]) + '()'


def _var_name(v) -> str:
    if v[0] == 'F':
        return v[1] if v[2] == 0 else f"{v[1]}.{v[2]}"
    return f"#{v[1]}.{v[2]}"


def print_ctx(G) -> str:
    if not G:
        return '*'
    return ', '.join(f"{_var_name(v)}:{print_type(b)}" for v, b in G)


def parse_type(text: str):
    ts = _Tokens(text)
    t = _pt_any(ts)
    if not ts.at('EOF'):
        tok = ts.peek()
        raise ParseError(f"trailing input {tok[1]!r}", tok[2])
    return t


def _pt_any(ts):
    if ts.at('IDENT') and ts.peek()[1] == 'o':
        ts.next()
        return O
    if ts.at('['):
        b = _pt_bag(ts)
        if ts.at('::'):
            ts.next()
            return stream((b,) + _pt_stream(ts)[1])
        return b
    s = _pt_stream_atom(ts)
    if ts.at('-o'):
        ts.next()
        tok = ts.expect('IDENT')
        if tok[1] != 'o':
            raise ParseError("expected 'o' after '-o'", tok[2])
        return vtype(s)
    return s


def _pt_value(ts):
    s = _pt_stream_atom(ts)
    ts.expect('-o')
    tok = ts.expect('IDENT')
    if tok[1] != 'o':
        raise ParseError("expected 'o' after '-o'", tok[2])
    return vtype(s)


def _pt_bag(ts):
    ts.expect('[')
    items = []
    if not ts.at(']'):
        items.append(_pt_value(ts))
        while ts.at(','):
            ts.next()
            items.append(_pt_value(ts))
    ts.expect(']')
    return bag(items)


def _pt_stream(ts):
    if ts.at('['):
        b = _pt_bag(ts)
        ts.expect('::')
        return stream((b,) + _pt_stream(ts)[1])
    return _pt_stream_atom(ts)


def _pt_stream_atom(ts):
    ts.expect('(')
    if ts.at(')'):
        ts.next()
        return IOTA_T
    s = _pt_stream(ts)
    ts.expect(')')
    return s


def parse_ctx(text: str) -> tuple:
    """'x:[...], y.1:[...]' or '*' for the empty context."""
    text = text.strip()
    if text in ('', '*', '⋆'):
        return STAR
    ts = _Tokens(text)
    acc = []
    while True:
        name = ts.expect('IDENT')[1]
        idx = 0
        if ts.at('.'):
            ts.next()
            idx = int(ts.expect('NAT')[1])
        ts.expect(':')
        acc.append((('F', name, idx), _pt_bag(ts)))
        if not ts.at(','):
            break
        ts.next()
    if not ts.at('EOF'):
        tok = ts.peek()
        raise ParseError(f"trailing input {tok[1]!r}", tok[2])
    return ctx_union(*[(p,) for p in acc])
