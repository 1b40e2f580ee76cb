"""Canonical resource expressions, lambda terms, and bag combinatorics.

Resource expressions are plain tagged tuples, so that structural equality is
alpha-equivalence and Python's tuple ordering gives the global term order:

    ('L', base)              value      \\x. base   (nameless sequence binder)
    ('A', head, stream)      base       head applied to a stream
    ('B', depth, index)      bound value variable, depth 0 = innermost binder
    ('F', name, index)       free value variable name.index
    ('G', (v1, v2, ...))     bag, elements sorted
    ('S', (b0, b1, ...))     stream, no trailing empty bag

A sequence variable is ('B', depth) or ('F', name).
"""
from __future__ import annotations

import itertools
import math
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

EMPTY_BAG = ('G', ())
IOTA = ('S', ())


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


# -- constructors -----------------------------------------------------------

def bvar(depth: int, index: int):
    return ('B', depth, index)


def fvar(name: str, index: int = 0):
    return ('F', name, index)


def value(body):
    return ('L', body)


def base(head, args=IOTA):
    return ('A', head, args)


def bag(elements=()):
    return ('G', tuple(sorted(elements)))


def stream(bags=()):
    bags = list(bags)
    while bags and bags[-1] == EMPTY_BAG:
        bags.pop()
    return ('S', tuple(bags))


def cons(b, s):
    return stream((b,) + s[1])


def bag_union(*bags):
    return ('G', tuple(sorted(itertools.chain.from_iterable(b[1] for b in bags))))


def stream_at(s, i: int):
    """The i-th bag of a stream (empty past the range)."""
    return s[1][i] if i < len(s[1]) else EMPTY_BAG


def kind(e) -> str:
    tag = e[0]
    if tag == 'L':
        return 'value'
    if tag == 'A':
        return 'base'
    if tag == 'G':
        return 'bag'
    if tag == 'S':
        return 'stream'
    if tag in ('B', 'F'):
        return 'var'
    raise TypeError(f"not a resource expression: {e!r}")


def is_var(e) -> bool:
    return e[0] in ('B', 'F')


# -- measures ---------------------------------------------------------------

def size(e) -> int:
    tag = e[0]
    if tag in ('B', 'F'):
        return 1
    if tag == 'L':
        return 1 + size(e[1])
    if tag == 'A':
        return 1 + size(e[1]) + size(e[2])
    return sum(size(x) for x in e[1])


def width(e) -> int:
    """Max over stream ranges and variable indices."""
    tag = e[0]
    if tag in ('B', 'F'):
        return e[2]
    if tag == 'L':
        return width(e[1])
    if tag == 'A':
        return max(width(e[1]), width(e[2]))
    w = len(e[1]) if tag == 'S' else 0
    for x in e[1]:
        w = max(w, width(x))
    return w


def occurrences(e, v) -> int:
    """Free occurrences of the value variable v, given relative to e's top."""
    tag = e[0]
    if tag in ('B', 'F'):
        return 1 if e == v else 0
    if tag == 'L':
        if v[0] == 'B':
            v = ('B', v[1] + 1, v[2])
        return occurrences(e[1], v)
    if tag == 'A':
        return occurrences(e[1], v) + occurrences(e[2], v)
    return sum(occurrences(x, v) for x in e[1])


def variables(e, depth: int = 0) -> Counter:
    """Multiset of free value variables (bound ones re-expressed from the top)."""
    out: Counter = Counter()
    _collect_vars(e, depth, out)
    return out


def _collect_vars(e, depth, out):
    tag = e[0]
    if tag == 'F':
        out[e] += 1
    elif tag == 'B':
        if e[1] >= depth:
            out[('B', e[1] - depth, e[2])] += 1
    elif tag == 'L':
        _collect_vars(e[1], depth + 1, out)
    elif tag == 'A':
        _collect_vars(e[1], depth, out)
        _collect_vars(e[2], depth, out)
    else:
        for x in e[1]:
            _collect_vars(x, depth, out)


def free_names(e) -> set:
    return {v[1] for v in variables(e) if v[0] == 'F'}


def is_closed(e) -> bool:
    return not variables(e)


def is_normal(e) -> bool:
    tag = e[0]
    if tag in ('B', 'F'):
        return True
    if tag == 'L':
        return is_normal(e[1])
    if tag == 'A':
        return e[1][0] != 'L' and is_normal(e[2])
    return all(is_normal(x) for x in e[1])


# -- bag combinatorics --------------------------------------------------------

def isotropy_degree(b) -> int:
    d = 1
    for c in Counter(b[1]).values():
        d *= math.factorial(c)
    return d


def multiplicity(e) -> int:
    tag = e[0]
    if tag in ('B', 'F'):
        return 1
    if tag == 'L':
        return multiplicity(e[1])
    if tag == 'A':
        return multiplicity(e[1]) * multiplicity(e[2])
    m = isotropy_degree(e) if tag == 'G' else 1
    for x in e[1]:
        m *= multiplicity(x)
    return m


@dataclass(frozen=True)
class Partitioning:
    """A function from positions of a fixed enumeration of a bag to 0..k-1."""
    source: tuple
    assignment: tuple
    k: int

    def parts(self) -> tuple:
        buckets = [[] for _ in range(self.k)]
        for x, j in zip(self.source[1], self.assignment):
            buckets[j].append(x)
        return tuple(bag(p) for p in buckets)


def partitioning_functions(b, k: int) -> Iterator[Partitioning]:
    for a in itertools.product(range(k), repeat=len(b[1])):
        yield Partitioning(b, a, k)


def partitionings(b, k: int) -> Iterator[tuple]:
    """All k**|b| restriction tuples, repeated according to raw functions."""
    if k == 0:
        if not b[1]:
            yield ()
        return
    for p in partitioning_functions(b, k):
        yield p.parts()


def count_splits(b, parts) -> int:
    """Number of raw partitionings of b whose restriction tuple is `parts`."""
    if bag_union(*parts) != b:
        return 0
    n = isotropy_degree(b)
    for p in parts:
        n //= isotropy_degree(p)
    return n


def split_bag_distinct(b, k: int) -> Iterator[tuple[tuple, int]]:
    """Distinct k-tuples of sub-bags with their raw-function counts."""
    items = sorted(Counter(b[1]).items())

    def go(i):
        if i == len(items):
            yield [[] for _ in range(k)], 1
            return
        x, c = items[i]
        for rest, w in go(i + 1):
            for comp in _compositions(c, k):
                w2 = w * math.factorial(c)
                for q in comp:
                    w2 //= math.factorial(q)
                yield [r + [x] * q for r, q in zip(rest, comp)], w2

    for parts, w in go(0):
        yield tuple(bag(p) for p in parts), w


def _compositions(n: int, k: int):
    if k == 0:
        if n == 0:
            yield ()
        return
    if k == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


# -- sums -------------------------------------------------------------------

SEMIRINGS = ('rat', 'bool')


class Sum:
    """Finite formal combination of canonical expressions.

    Coefficients are ints/Fractions for 'rat' and True for 'bool'.
    """
    __slots__ = ('_d', 'semiring')

    def __init__(self, entries=None, semiring: str = 'rat'):
        if semiring not in SEMIRINGS:
            raise ValueError(f"unknown semiring {semiring!r}")
        self.semiring = semiring
        d = {}
        if entries:
            items = entries.items() if isinstance(entries, dict) else entries
            for t, c in items:
                _acc(d, t, c, semiring)
        self._d = d

    @classmethod
    def _raw(cls, d: dict, semiring: str = 'rat') -> 'Sum':
        s = cls.__new__(cls)
        s._d = d
        s.semiring = semiring
        return s

    @classmethod
    def zero(cls, semiring='rat'):
        return cls._raw({}, semiring)

    @classmethod
    def single(cls, t, c=1, semiring='rat'):
        return cls({t: c}, semiring)

    def coeff(self, t):
        return self._d.get(t, False if self.semiring == 'bool' else 0)

    def items(self):
        return sorted(self._d.items())

    def terms(self):
        return sorted(self._d)

    def support(self) -> frozenset:
        return frozenset(self._d)

    def as_dict(self) -> dict:
        return dict(self._d)

    def __iter__(self):
        return iter(self.terms())

    def __len__(self):
        return len(self._d)

    def __bool__(self):
        return bool(self._d)

    def __contains__(self, t):
        return t in self._d

    def __add__(self, other: 'Sum') -> 'Sum':
        if not isinstance(other, Sum):
            return NotImplemented
        d = dict(self._d)
        for t, c in other._d.items():
            _acc(d, t, c, self.semiring)
        return Sum._raw(d, self.semiring)

    def scale(self, c) -> 'Sum':
        if self.semiring == 'bool':
            return self if c else Sum.zero('bool')
        if c == 0:
            return Sum.zero(self.semiring)
        return Sum._raw({t: _norm(k * c) for t, k in self._d.items()}, self.semiring)

    def to_semiring(self, semiring: str) -> 'Sum':
        if semiring == self.semiring:
            return self
        if semiring == 'bool':
            return Sum._raw({t: True for t in self._d}, 'bool')
        return Sum._raw({t: 1 for t in self._d}, 'rat')

    def __eq__(self, other):
        if not isinstance(other, Sum):
            return NotImplemented
        if self.semiring != other.semiring:
            return False
        return self._d == other._d

    def __hash__(self):
        return hash((self.semiring, frozenset(self._d.items())))

    def __repr__(self):
        return f"Sum({print_sum(self)!r})"

    def __str__(self):
        return print_sum(self)


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


def _acc(d: dict, t, c, semiring):
    if semiring == 'bool':
        if c:
            d[t] = True
        return
    if c == 0:
        return
    n = d.get(t, 0) + c
    if n == 0:
        del d[t]
    else:
        d[t] = _norm(n)


def sum_of(pairs, semiring='rat') -> Sum:
    return Sum(list(pairs), semiring)


def format_coeff(c) -> str:
    if c is True:
        return "1"
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return str(c)


def print_sum(s: Sum) -> str:
    if not s:
        return "0"
    return " + ".join(f"{format_coeff(c)} * {print_resource(t)}" for t, c in s.items())


# -- resource printer ----------------------------------------------------------

_BASE_NAMES = ('x', 'y', 'z', 'u', 'v', 'w')


def binder_names(avoid, count: int) -> list[str]:
    names = []
    k = 0
    while len(names) < count:
        n = _BASE_NAMES[k] if k < len(_BASE_NAMES) else f"x{k}"
        if n not in avoid:
            names.append(n)
        k += 1
    return names


def _max_depth(e) -> int:
    tag = e[0]
    if tag == 'L':
        return 1 + _max_depth(e[1])
    if tag == 'A':
        return max(_max_depth(e[1]), _max_depth(e[2]))
    if tag in ('G', 'S'):
        return max((_max_depth(x) for x in e[1]), default=0)
    return 0


def print_resource(e) -> str:
    names = binder_names(free_names(e), _max_depth(e))
    return _pr(e, [], names)


def _pr(e, env, names):
    tag = e[0]
    if tag == 'B':
        if e[1] >= len(env):
            raise ValueError(f"dangling bound variable {e!r}")
        return f"{env[-1 - e[1]]}.{e[2]}"
    if tag == 'F':
        return f"{e[1]}.{e[2]}"
    if tag == 'L':
        n = names[len(env)]
        return f"\\{n}. " + _pr(e[1], env + [n], names)
    if tag == 'A':
        h = e[1]
        hs = f"({_pr(h, env, names)})" if h[0] == 'L' else _pr(h, env, names)
        return f"{hs} {_pr(e[2], env, names)}"
    if tag == 'G':
        return "[" + ", ".join(_pr(x, env, names) for x in e[1]) + "]"
    parts = [_pr(b, env, names) for b in e[1]]
    return " :: ".join(parts + ["()"])


# -- tokenizer / resource parser ----------------------------------------------

_TOKEN = re.compile(r"\s*(?:(::)|([\\λ.()\[\],Ω@{}:=])|(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(-o))")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(('::', '::', start))
        elif m.group(2):
            ch = m.group(2)
            out.append(('\\' if ch == 'λ' else ch, ch, start))
        elif m.group(3):
            out.append(('NAT', m.group(3), start))
        elif m.group(4):
            out.append(('IDENT', m.group(4), start))
        else:
            out.append(('-o', '-o', start))
        pos = m.end()
    out.append(('EOF', '', n))
    return out


class _Tokens:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind):
        t = self.next()
        if t[0] != kind:
            raise ParseError(f"expected {kind!r}, found {t[1] or 'end of input'!r}", t[2])
        return t

    def at(self, kind, k=0):
        return self.peek(k)[0] == kind


def parse_resource(text: str):
    """Parse a value, base, bag or stream expression."""
    ts = _Tokens(text)
    e = _p_any(ts, [])
    if not ts.at('EOF'):
        t = ts.peek()
        raise ParseError(f"trailing input {t[1]!r}", t[2])
    return e


def _p_any(ts, env):
    if ts.at('\\'):
        return _p_value(ts, env)
    if ts.at('['):
        b = _p_bag(ts, env)
        if ts.at('::'):
            ts.next()
            return cons(b, _p_stream(ts, env))
        return b
    if ts.at('(') and ts.at(')', 1):
        return _p_stream(ts, env)
    return _p_base(ts, env)


def _p_value(ts, env):
    ts.expect('\\')
    name = ts.expect('IDENT')[1]
    ts.expect('.')
    return value(_p_base(ts, env + [name]))


def _p_head(ts, env):
    t = ts.peek()
    if t[0] == '(':
        ts.next()
        v = _p_value(ts, env)
        ts.expect(')')
        return v
    if t[0] == 'IDENT':
        ts.next()
        ts.expect('.')
        idx = int(ts.expect('NAT')[1])
        name = t[1]
        for d, n in enumerate(reversed(env)):
            if n == name:
                return bvar(d, idx)
        return fvar(name, idx)
    raise ParseError(f"expected head, found {t[1] or 'end of input'!r}", t[2])


def _p_base(ts, env):
    h = _p_head(ts, env)
    return base(h, _p_stream(ts, env))


def _p_bag(ts, env):
    ts.expect('[')
    items = []
    if not ts.at(']'):
        items.append(_p_value(ts, env))
        while ts.at(','):
            ts.next()
            items.append(_p_value(ts, env))
    ts.expect(']')
    return bag(items)


def _p_stream(ts, env):
    bags = []
    while ts.at('['):
        bags.append(_p_bag(ts, env))
        ts.expect('::')
    ts.expect('(')
    ts.expect(')')
    return stream(bags)


# -- lambda terms -------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Abs:
    name: str
    body: 'LambdaTerm'


@dataclass(frozen=True)
class App:
    fun: 'LambdaTerm'
    arg: 'LambdaTerm'


LambdaTerm = Var | Abs | App


def lam(names: str, body) -> LambdaTerm:
    for n in reversed(names.split()):
        body = Abs(n, body)
    return body


def apps(f, *args) -> LambdaTerm:
    for a in args:
        f = App(f, a)
    return f


DELTA = Abs('x', App(Var('x'), Var('x')))
OMEGA = App(DELTA, DELTA)


def lambda_free_vars(M) -> set[str]:
    if isinstance(M, Var):
        return {M.name}
    if isinstance(M, Abs):
        return lambda_free_vars(M.body) - {M.name}
    return lambda_free_vars(M.fun) | lambda_free_vars(M.arg)


def lambda_size(M) -> int:
    if isinstance(M, Var):
        return 1
    if isinstance(M, Abs):
        return 1 + lambda_size(M.body)
    return 1 + lambda_size(M.fun) + lambda_size(M.arg)


def de_bruijn(M, env=()):
    """Nameless form, used for alpha-equivalence."""
    if isinstance(M, Var):
        for i, n in enumerate(reversed(env)):
            if n == M.name:
                return ('b', i)
        return ('f', M.name)
    if isinstance(M, Abs):
        return ('l', de_bruijn(M.body, env + (M.name,)))
    return ('a', de_bruijn(M.fun, env), de_bruijn(M.arg, env))


def alpha_eq(M, N) -> bool:
    return de_bruijn(M) == de_bruijn(N)


def parse_lambda(text: str) -> LambdaTerm:
    ts = _Tokens(text)
    M = _pl_term(ts)
    if not ts.at('EOF'):
        t = ts.peek()
        raise ParseError(f"trailing input {t[1]!r}", t[2])
    return M


def _pl_term(ts):
    if ts.at('\\'):
        ts.next()
        names = [ts.expect('IDENT')[1]]
        while ts.at('IDENT'):
            names.append(ts.next()[1])
        ts.expect('.')
        body = _pl_term(ts)
        for n in reversed(names):
            body = Abs(n, body)
        return body
    M = _pl_atom(ts)
    while ts.peek()[0] in ('IDENT', '(', 'Ω', '\\'):
        if ts.at('\\'):
            M = App(M, _pl_term(ts))
            break
        M = App(M, _pl_atom(ts))
    return M


def _pl_atom(ts):
    t = ts.next()
    if t[0] == 'IDENT':
        return Var(t[1])
    if t[0] == 'Ω':
        return OMEGA
    if t[0] == '(':
        M = _pl_term(ts)
        ts.expect(')')
        return M
    raise ParseError(f"expected term, found {t[1] or 'end of input'!r}", t[2])


def print_lambda(M) -> str:
    if M == OMEGA:
        return 'Ω'
    if isinstance(M, Var):
        return M.name
    if isinstance(M, Abs):
        return f"\\{M.name}.{print_lambda(M.body)}"
    f = print_lambda(M.fun)
    if isinstance(M.fun, Abs):
        f = f"({f})"
    a = print_lambda(M.arg)
    if not isinstance(M.arg, Var) and M.arg != OMEGA:
        a = f"({a})"
    return f"{f} {a}"


# -- random generation -----------------------------------------------------------------

def random_value(rng, max_size: int, max_width: int, free=('x', 'y'),
                 redex_rate: float = 0.35, depth: int = 0):
    """A random value term with size <= max_size (needs max_size >= 3)."""
    return value(_rand_base(rng, max(max_size, 3) - 1, max(max_width, 1), free,
                            redex_rate, depth + 1))


def random_normal(rng, max_size: int, max_width: int, free=('x', 'y')):
    return random_value(rng, max_size, max_width, free, redex_rate=0.0)


def random_resource(rng, max_size: int, max_width: int, free=('x', 'y'),
                    redex_rate: float = 0.35):
    """A random base term (the category where redexes live)."""
    return _rand_base(rng, max(max_size, 2), max(max_width, 1), free, redex_rate, 0)


def _rand_var(rng, width, free, depth):
    i = rng.randrange(width)
    if depth and (not free or rng.random() < 0.7):
        return bvar(rng.randrange(depth), i)
    return fvar(rng.choice(free), i)


def _rand_base(rng, budget, width, free, rr, depth):
    # budget >= 2; one node for the application itself
    budget -= 1
    if budget >= 3 and rng.random() < rr:
        hb = rng.randint(3, min(budget, 3 + budget // 2))
        head = value(_rand_base(rng, hb - 1, width, free, rr, depth + 1))
    else:
        head = _rand_var(rng, width, free, depth)
    budget -= size(head)
    if head[0] == 'L' and rng.random() < 0.75:
        s = _matched_stream(rng, head, budget, width, free, rr, depth)
        if s is not None:
            return base(head, s)
    return base(head, _rand_stream(rng, budget, width, free, rr, depth))


def _matched_stream(rng, head, budget, width, free, rr, depth):
    # one argument per occurrence of the head's bound variables, so that the
    # redex has a chance to survive
    counts = [occurrences(head[1], bvar(0, i)) for i in range(width)]
    if 3 * sum(counts) > budget:
        return None
    spare = budget - 3 * sum(counts)
    cells = []
    for c in counts:
        cell = []
        for _ in range(c):
            s = 3 + rng.randint(0, min(spare, 3))
            v = value(_rand_base(rng, s - 1, width, free, rr, depth + 1))
            spare -= size(v) - 3
            cell.append(v)
        cells.append(cell)
    return stream(bag(c) for c in cells)


def _rand_stream(rng, budget, width, free, rr, depth):
    cells = [[] for _ in range(width)]
    while budget >= 3 and rng.random() < 0.75:
        s = rng.randint(3, min(budget, 6))
        v = value(_rand_base(rng, s - 1, width, free, rr, depth + 1))
        cells[rng.randrange(width)].append(v)
        budget -= size(v)
    return stream(bag(c) for c in cells)


def random_lambda(rng, max_size: int, free=('a',), depth_names=()):
    if max_size <= 1 or (max_size <= 2 and depth_names):
        pool = list(depth_names) + list(free)
        return Var(rng.choice(pool))
    r = rng.random()
    if r < 0.35:
        n = f"v{len(depth_names)}"
        return Abs(n, random_lambda(rng, max_size - 1, free, depth_names + (n,)))
    if r < 0.75:
        k = rng.randint(1, max_size - 2)
        return App(random_lambda(rng, k, free, depth_names),
                   random_lambda(rng, max_size - 1 - k, free, depth_names))
    pool = list(depth_names) + list(free)
    return Var(rng.choice(pool))
