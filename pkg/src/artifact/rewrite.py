"""Resource substitution, shifts, small-step and big-step reduction, normal forms.

Internally sums are plain dicts {term: int}; the public functions wrap them in
`Sum`. Variables passed in are expressed relative to the top of the expression
they act on: ('B', d, i) names the i-th variable of the d-th enclosing binder
outside the expression.
"""
from __future__ import annotations

import random as _random
from collections import Counter
from dataclasses import dataclass, field

from .syntax import (IOTA, EMPTY_BAG, Sum, bag, base, isotropy_degree, occurrences, size,
                     stream, value)


# -- de Bruijn plumbing ------------------------------------------------------------

def lift(e, k: int = 1, cutoff: int = 0):
    """Add k to the depth of bound variables reaching past `cutoff` binders."""
    if k == 0:
        return e
    tag = e[0]
    if tag == 'B':
        return ('B', e[1] + k, e[2]) if e[1] >= cutoff else e
    if tag == 'F':
        return e
    if tag == 'L':
        return ('L', lift(e[1], k, cutoff + 1))
    if tag == 'A':
        return ('A', lift(e[1], k, cutoff), lift(e[2], k, cutoff))
    return (tag, tuple(lift(x, k, cutoff) for x in e[1]))


def lower(e, cutoff: int = 0):
    """Inverse of lift(e, 1, cutoff); variables of the dropped binder must be absent."""
    tag = e[0]
    if tag == 'B':
        if e[1] == cutoff:
            raise ValueError("lower: variable of the removed binder occurs")
        return ('B', e[1] - 1, e[2]) if e[1] > cutoff else e
    if tag == 'F':
        return e
    if tag == 'L':
        return ('L', lower(e[1], cutoff + 1))
    if tag == 'A':
        return ('A', lower(e[1], cutoff), lower(e[2], cutoff))
    return (tag, tuple(lower(x, cutoff) for x in e[1]))


def _under(v):
    """A variable or sequence variable seen from one binder deeper."""
    if v[0] == 'B':
        return ('B', v[1] + 1) + tuple(v[2:])
    return v


def mentions_seq(e, X) -> bool:
    tag = e[0]
    if tag in ('B', 'F'):
        return e[0] == X[0] and e[1] == X[1]
    if tag == 'L':
        return mentions_seq(e[1], _under(X))
    if tag == 'A':
        return mentions_seq(e[1], X) or mentions_seq(e[2], X)
    return any(mentions_seq(x, X) for x in e[1])


def _reindex(e, X, delta):
    tag = e[0]
    if tag in ('B', 'F'):
        if e[0] == X[0] and e[1] == X[1]:
            return (e[0], e[1], e[2] + delta)
        return e
    if tag == 'L':
        return ('L', _reindex(e[1], _under(X), delta))
    if tag == 'A':
        return ('A', _reindex(e[1], X, delta), _reindex(e[2], X, delta))
    if tag == 'G':
        return bag(_reindex(x, X, delta) for x in e[1])
    return stream(_reindex(x, X, delta) for x in e[1])


def shift_up(e, X):
    return _reindex(e, X, 1)


def shift_down(e, X):
    if occurrences(e, (X[0], X[1], 0)):
        raise ValueError("shift_down: the variable at index 0 occurs free")
    return _reindex(e, X, -1)


def erase(e, X) -> Sum:
    return Sum.zero() if mentions_seq(e, X) else Sum.single(e)


def rename(e, x, y):
    """Replace the value variable x by the value variable y (both top-relative)."""
    tag = e[0]
    if tag in ('B', 'F'):
        return y if e == x else e
    if tag == 'L':
        return ('L', rename(e[1], _under(x), _under(y)))
    if tag == 'A':
        return ('A', rename(e[1], x, y), rename(e[2], x, y))
    if tag == 'G':
        return bag(rename(v, x, y) for v in e[1])
    return (tag, tuple(rename(v, x, y) for v in e[1]))


def lambda_single(x, m):
    """Fold an ordinary abstraction over x into the sequence binder of m."""
    body = _reindex(m[1], ('B', 0), 1)
    return ('L', rename(body, _under(x), ('B', 0, 0)))


# -- bag substitution -------------------------------------------------------------

def _distinct_arrangements(items):
    counts = Counter(items)
    keys = sorted(counts)
    n = len(items)
    cur = []

    def go():
        if len(cur) == n:
            yield tuple(cur)
            return
        for k in keys:
            if counts[k]:
                counts[k] -= 1
                cur.append(k)
                yield from go()
                cur.pop()
                counts[k] += 1

    yield from go()


def _place(e, x, it, depth):
    tag = e[0]
    if tag in ('B', 'F'):
        if e == x:
            return lift(next(it), depth)
        return e
    if tag == 'L':
        return ('L', _place(e[1], _under(x), it, depth + 1))
    if tag == 'A':
        h = _place(e[1], x, it, depth)
        return ('A', h, _place(e[2], x, it, depth))
    if tag == 'G':
        return bag(_place(v, x, it, depth) for v in e[1])
    return (tag, tuple(_place(v, x, it, depth) for v in e[1]))


def subst_bag_d(e, b, x) -> dict:
    """e[b/x] as a dict; a result equals the sum over bijections occurrences -> bag."""
    n = len(b[1])
    if occurrences(e, x) != n:
        return {}
    if n == 0:
        return {e: 1}
    w = isotropy_degree(b)
    out: dict = {}
    for arr in _distinct_arrangements(b[1]):
        t = _place(e, x, iter(arr), 0)
        out[t] = out.get(t, 0) + w
    return out


def subst_bag(e, b, x) -> Sum:
    return Sum._raw(subst_bag_d(e, b, x))


# -- stream substitution ------------------------------------------------------------

def _drop_binder(a):
    """a with its enclosing binder erased: None if that binder's variables occur."""
    if mentions_seq(a, ('B', 0)):
        return None
    return lower(a)


def subst_stream_d(e, s, X) -> dict:
    """e[s/X] via iterated bag substitution on X[0] and shifting down, then erasure."""
    for b in s[1]:
        for v in b[1]:
            if mentions_seq(v, X):
                raise ValueError("subst_stream: the sequence variable occurs in the stream")
    cur = {e: 1}
    x0 = (X[0], X[1], 0)
    for b in s[1]:
        nxt: dict = {}
        for t, c in cur.items():
            for t2, c2 in subst_bag_d(t, b, x0).items():
                t3 = _reindex(t2, X, -1)
                nxt[t3] = nxt.get(t3, 0) + c * c2
        cur = nxt
    return {t: c for t, c in cur.items() if not mentions_seq(t, X)}


def subst_stream(e, s, X) -> Sum:
    return Sum._raw(subst_stream_d(e, s, X))


def beta_big(redex) -> dict:
    """(Rβ) at the root of a base term whose head is an abstraction."""
    _, h, s = redex
    body = h[1]
    out: dict = {}
    for t, c in subst_stream_d(body, lift(s, 1), ('B', 0)).items():
        t = lower(t)
        out[t] = out.get(t, 0) + c
    return out


def beta_small(redex) -> dict:
    """(rβ): consume the first bag of the argument stream (also when it is ι)."""
    _, h, s = redex
    first = s[1][0] if s[1] else EMPTY_BAG
    rest = ('S', s[1][1:])
    out: dict = {}
    for t, c in subst_bag_d(h[1], lift(first, 1), ('B', 0, 0)).items():
        t = ('A', ('L', _reindex(t, ('B', 0), -1)), rest)
        out[t] = out.get(t, 0) + c
    return out


def iota_small(redex) -> dict:
    """(rι): (λx⃗.a) ι reduces to the erasure of x⃗ in a."""
    a = _drop_binder(redex[1][1])
    return {} if a is None else {a: 1}


# -- contexts --------------------------------------------------------------------

def _children(e):
    tag = e[0]
    if tag == 'L':
        return [e[1]]
    if tag == 'A':
        return [e[1], e[2]] if e[1][0] == 'L' else [e[2]]
    if tag in ('G', 'S'):
        return list(e[1])
    return []


def _rebuild(e, idx, t):
    tag = e[0]
    if tag == 'L':
        return ('L', t)
    if tag == 'A':
        if e[1][0] == 'L' and idx == 0:
            return ('A', t, e[2])
        return ('A', e[1], t)
    items = list(e[1])
    items[idx] = t
    return bag(items) if tag == 'G' else stream(items)


def plug(e, idx, d: dict) -> dict:
    out: dict = {}
    for t, c in d.items():
        t2 = _rebuild(e, idx, t)
        out[t2] = out.get(t2, 0) + c
    return out


def _freeze(d: dict) -> Sum:
    return Sum._raw(dict(d))


def _step_reducts(e, root_rules) -> list[dict]:
    out = list(root_rules(e)) if e[0] == 'A' and e[1][0] == 'L' else []
    seen = set()
    for i, ch in enumerate(_children(e)):
        if e[0] == 'G':
            if ch in seen:
                continue
            seen.add(ch)
        for d in _step_reducts(ch, root_rules):
            out.append(plug(e, i, d))
    return out


def _small_root(e):
    yield beta_small(e)
    if e[2] == IOTA:
        yield iota_small(e)


def _big_root(e):
    yield beta_big(e)


def small_step_reducts(e) -> set[Sum]:
    return {_freeze(d) for d in _step_reducts(e, _small_root)}


def big_step_reducts(e) -> set[Sum]:
    return {_freeze(d) for d in _step_reducts(e, _big_root)}


def has_redex(e) -> bool:
    tag = e[0]
    if tag == 'A' and e[1][0] == 'L':
        return True
    return any(has_redex(c) for c in _children(e))


# -- normal forms ------------------------------------------------------------------

def _product(parts: list[dict], build) -> dict:
    acc = {(): 1}
    for p in parts:
        nxt: dict = {}
        for ts, c in acc.items():
            for t, c2 in p.items():
                k = ts + (t,)
                nxt[k] = nxt.get(k, 0) + c * c2
        acc = nxt
        if not acc:
            return {}
    out: dict = {}
    for ts, c in acc.items():
        t = build(ts)
        out[t] = out.get(t, 0) + c
    return out


def normal_form_d(e, memo=None) -> dict:
    """Bottom-up normalization; redexes created by a head step are normalized again."""
    if memo is None:
        memo = {}
    r = memo.get(e)
    if r is not None:
        return r
    tag = e[0]
    if tag in ('B', 'F'):
        r = {e: 1}
    elif tag == 'L':
        r = {('L', t): c for t, c in normal_form_d(e[1], memo).items()}
    elif tag == 'G':
        r = _product([normal_form_d(x, memo) for x in e[1]], bag)
    elif tag == 'S':
        r = _product([normal_form_d(x, memo) for x in e[1]], stream)
    else:
        h, s = e[1], e[2]
        hs = normal_form_d(h, memo) if h[0] == 'L' else {h: 1}
        ss = normal_form_d(s, memo)
        r = {}
        for h2, c1 in hs.items():
            for s2, c2 in ss.items():
                if h2[0] != 'L':
                    t = ('A', h2, s2)
                    r[t] = r.get(t, 0) + c1 * c2
                    continue
                for t, c3 in beta_big(('A', h2, s2)).items():
                    for t2, c4 in normal_form_d(t, memo).items():
                        r[t2] = r.get(t2, 0) + c1 * c2 * c3 * c4
        r = {t: c for t, c in r.items() if c}
    memo[e] = r
    return r


def normalize(e) -> Sum:
    return Sum._raw(dict(normal_form_d(e)))


def normalize_sum(U: Sum) -> Sum:
    memo: dict = {}
    out: dict = {}
    for t, c in U.items():
        for t2, c2 in normal_form_d(t, memo).items():
            out[t2] = out.get(t2, 0) + c * c2
    return Sum(out, U.semiring)


# -- strategies and traces ------------------------------------------------------------

def redex_paths(e, prefix=()) -> list[tuple]:
    """Paths to abstraction-headed base subterms, in leftmost-outermost order."""
    out = [prefix] if e[0] == 'A' and e[1][0] == 'L' else []
    for i, ch in enumerate(_children(e)):
        out.extend(redex_paths(ch, prefix + (i,)))
    return out


def fire_at(e, path, rule=beta_big) -> dict:
    if not path:
        return rule(e)
    ch = _children(e)[path[0]]
    return plug(e, path[0], fire_at(ch, path[1:], rule))


@dataclass
class ReductionTrace:
    source: object
    steps: list = field(default_factory=list)
    terminal: Sum | None = None

    def log(self) -> str:
        lines = [f"{rule} at {'.'.join(map(str, path)) or 'root'} on #{k} -> {n} terms"
                 for k, path, rule, n in self.steps]
        return "\n".join(lines)

    def replay(self) -> Sum:
        cur = {self.source: 1}
        for k, path, rule, _ in self.steps:
            t = sorted(cur)[k]
            c = cur.pop(t)
            for t2, c2 in fire_at(t, path).items():
                cur[t2] = cur.get(t2, 0) + c * c2
            cur = {a: b for a, b in cur.items() if b}
        return Sum._raw(cur)


def normalize_with_strategy(e, strategy: str = 'leftmost', seed: int = 0,
                            max_steps: int = 100000) -> tuple[Sum, ReductionTrace]:
    """Iterate big steps on single elements of the current sum until none applies."""
    rng = _random.Random(seed)
    trace = ReductionTrace(e)
    cur = {e: 1}
    for _ in range(max_steps):
        keys = sorted(cur)
        reducible = [k for k, t in enumerate(keys) if has_redex(t)]
        if not reducible:
            break
        if strategy == 'leftmost':
            k = reducible[0]
            path = redex_paths(keys[k])[0]
        elif strategy == 'random':
            k = rng.choice(reducible)
            path = rng.choice(redex_paths(keys[k]))
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        t = keys[k]
        c = cur.pop(t)
        for t2, c2 in fire_at(t, path).items():
            cur[t2] = cur.get(t2, 0) + c * c2
        cur = {a: b for a, b in cur.items() if b}
        trace.steps.append((k, path, 'Rβ', len(cur)))
    else:
        raise RuntimeError("normalize_with_strategy: step budget exhausted")
    trace.terminal = Sum._raw(cur)
    return trace.terminal, trace


# -- sums under one-step →r --------------------------------------------------------

def sum_reducts(U: dict, limit: int = 200000) -> set:
    """All U' with U →r U' (each copy of each element reduced or kept)."""
    from itertools import combinations_with_replacement

    per_term = []
    for t, c in U.items():
        opts = [{t: 1}] + _step_reducts(t, _small_root)
        uniq = {frozenset(o.items()): o for o in opts}
        opts = list(uniq.values())
        per_term.append((opts, c))
    results = {frozenset()}
    for opts, c in per_term:
        choices = set()
        for combo in combinations_with_replacement(range(len(opts)), c):
            d: Counter = Counter()
            for j in combo:
                for t, k in opts[j].items():
                    d[t] += k
            choices.add(frozenset(d.items()))
        nxt = set()
        for r in results:
            for ch in choices:
                d = Counter(dict(r))
                for t, k in ch:
                    d[t] += k
                nxt.add(frozenset((t, k) for t, k in d.items() if k))
        results = nxt
        if len(results) > limit:
            raise RuntimeError("sum_reducts: too many reducts")
    return results


def diamond_holds(e) -> bool:
    """Every two one-step →r reducts of the singleton sum e share a one-step reduct."""
    first = sum_reducts({e: 1})
    closure = {r: sum_reducts(dict(r)) for r in first}
    firsts = sorted(first, key=lambda r: sorted(r))
    for i, r1 in enumerate(firsts):
        for r2 in firsts[i + 1:]:
            if not (closure[r1] & closure[r2]):
                return False
    return True


def size_decreases(e) -> bool:
    n = size(e)
    return all(size(t) < n for U in big_step_reducts(e) for t in U)


__all__ = [
    'lift', 'lower', 'shift_up', 'shift_down', 'erase', 'rename', 'lambda_single',
    'subst_bag', 'subst_stream', 'small_step_reducts', 'big_step_reducts', 'normalize',
    'normalize_sum', 'normalize_with_strategy', 'ReductionTrace', 'diamond_holds',
    'sum_reducts', 'redex_paths', 'fire_at', 'has_redex', 'value', 'base',
]
