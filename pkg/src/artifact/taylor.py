"""Taylor expansion of λ-terms into resource terms, truncated to finite windows.

Enumeration works on λ-terms whose binders were renamed to fresh names ('#0',
'#1', ...). Abstractions are enumerated with the bound variable free and then
folded into the sequence binder with `lambda_single`, which is injective and
never lowers size or width; so filtering intermediate elements is sound.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .rewrite import (_reindex, _under, beta_big, lambda_single, lower, mentions_seq,
                      normal_form_d, rename)
from .syntax import (Abs, App, Sum, Var, bag, isotropy_degree, lambda_free_vars,
                     size, stream, width)
from .vectors import promotion_coeff

__all__ = [
    'Truncation', 'ExpansionHandle', 'T_h', 'T_eta', 'eta_var_enum', 'eta_var_coeff',
    'copycat_witness', 'taylor_enum', 'taylor_coeff', 'nt_truncated', 'nt_window',
    'restrict', 'head_reduce_lambda', 'head_reduce_resource', 'head_reduce_sum',
    'subst_lambda', 'Verdict', 'equiv_T',
]

_HOLE = ('F', '@', 0)


@dataclass(frozen=True)
class Truncation:
    max_size: int
    max_width: int

    def __post_init__(self):
        if self.max_size < 0 or self.max_width < 0:
            raise ValueError("truncation bounds must be nonnegative")

    def grow(self, ds: int = 1, dw: int = 1) -> 'Truncation':
        return Truncation(self.max_size + ds, self.max_width + dw)

    def admits(self, e) -> bool:
        return size(e) <= self.max_size and width(e) <= self.max_width


def _order(e):
    return (size(e), width(e), e)


# -- bags and streams over enumerated elements --------------------------------------

def _bags(elems, budget):
    """Multisets over elems [(term, coeff, size)] with total size <= budget.

    Yields (bag, coeff, size) where coeff is the promotion coefficient."""
    elems = sorted(elems, key=lambda p: p[2])
    out = []

    def go(start, chosen, used, c):
        b = bag(t for t, _, _ in chosen)
        out.append((b, c / isotropy_degree(b), used))
        for i in range(start, len(elems)):
            t, ct, st = elems[i]
            if used + st > budget:
                break
            chosen.append(elems[i])
            go(i, chosen, used + st, c * ct)
            chosen.pop()

    go(0, [], 0, Fraction(1))
    return out


def _streams(positions, budget):
    """Streams whose i-th bag is drawn over positions[i], total size <= budget."""
    bag_tables = [None] * len(positions)

    def bags_at(i):
        if bag_tables[i] is None:
            bag_tables[i] = _bags(positions[i], budget)
        return bag_tables[i]

    out = []

    def go(i, chosen, used, c):
        if i == len(positions):
            out.append((stream(chosen), c, used))
            return
        for b, cb, sb in bags_at(i):
            if used + sb > budget:
                continue
            chosen.append(b)
            go(i + 1, chosen, used + sb, c * cb)
            chosen.pop()

    go(0, [], 0, Fraction(1))
    return out


# -- variable expansions ------------------------------------------------------------

_eta_cache: dict = {}


def _eta_templates(S: int, W: int):
    """Elements of @^η (head _HOLE) with size <= S and width <= W."""
    key = (S, W)
    if key in _eta_cache:
        return _eta_cache[key]
    out = []
    if S >= 3:
        inner = _eta_templates(S - 3, W)
        positions = [[(rename(t, _HOLE, ('B', 0, i)), c, s) for t, c, s in inner]
                     for i in range(W)]
        for st, c, s in _streams(positions, S - 3):
            out.append((('L', ('A', _HOLE, st)), c, s + 3))
    _eta_cache[key] = out
    return out


def _eta_elems(x, S, W):
    if x[2] > W:
        return []
    return [(rename(t, _HOLE, x), c, s) for t, c, s in _eta_templates(S, W)]


def eta_var_enum(x, t: Truncation) -> list:
    """Elements of x^η inside t, ordered by size, width, term."""
    return list(_eta_sorted(x, t.max_size, t.max_width))


@lru_cache(maxsize=64)
def _eta_sorted(x, S, W) -> tuple:
    return tuple(sorted((m for m, _, _ in _eta_elems(x, S, W)), key=_order))


def eta_var_coeff(x, m) -> Fraction:
    """Coefficient of m in x^η, by recursion on m (x is relative to m's top)."""
    if m[0] != 'L' or m[1][0] != 'A':
        return Fraction(0)
    head, s = m[1][1], m[1][2]
    if head != _under(x):
        return Fraction(0)
    c = Fraction(1)
    for i, b in enumerate(s[1]):
        c *= promotion_coeff(lambda e, i=i: eta_var_coeff(('B', 0, i), e), b)
        if c == 0:
            break
    return c


# -- copycat witnesses ----------------------------------------------------------------

def _c_minus(x, u):
    """c⁻⟨x, u⟩ as a bag; x is a value variable relative to u's top."""
    tag = u[0]
    if tag == 'L':
        inner = _c_minus(_under(x), u[1])
        return bag(lower(e) for e in inner[1])
    if tag == 'A':
        h, s = u[1], u[2]
        rest = _c_minus(x, s)
        if h == x:
            return bag((_c_applied(x, s),) + rest[1])
        if h[0] == 'L':
            return bag(_c_minus(x, h)[1] + rest[1])
        return rest
    if tag in ('G', 'S'):
        return bag(itertools.chain.from_iterable(_c_minus(x, v)[1] for v in u[1]))
    return bag()


def _max_index(e, X):
    """Largest i with X[i] occurring in e, or -1."""
    tag = e[0]
    if tag in ('B', 'F'):
        return e[2] if (e[0], e[1]) == X else -1
    if tag == 'L':
        return _max_index(e[1], _under(X))
    if tag == 'A':
        return max(_max_index(e[1], X), _max_index(e[2], X))
    return max((_max_index(v, X) for v in e[1]), default=-1)


def _c_minus_seq(X, u):
    k = _max_index(u, X) + 1
    return stream(_c_minus(X + (i,), u) for i in range(k))


def _c_plus(x, m):
    """c⁺⟨x, m⟩ for a value m: λy⃗. x c⁻⟨y⃗, b⟩."""
    return ('L', ('A', _under(x), _c_minus_seq(('B', 0), m[1])))


def _c_plus_seq(X, s):
    return stream(bag(_c_plus(X + (i,), m) for m in b[1]) for i, b in enumerate(s[1]))


def _c_applied(x, s):
    """c⟨x, m⃗⟩ = λz⃗. x c⁺⟨z⃗, m⃗⟩."""
    from .rewrite import lift
    return ('L', ('A', _under(x), _c_plus_seq(('B', 0), lift(s, 1))))


def copycat_witness(u, target, mode: str):
    """Canonical copycat element for u.

    mode 'minus': bag c⁻⟨x, u⟩ (value target) or stream c⁻⟨x⃗, u⟩ (sequence target).
    mode 'plus': c⁺⟨x, m⟩ / c⁺⟨x, m̄⟩ for a value target, c⁺⟨x⃗, m⃗⟩ for a sequence one.
    mode 'applied': c⟨x, m⃗⟩ for a value target and a stream u.
    """
    seq = len(target) == 2
    k = u[0]
    if mode == 'minus':
        return _c_minus_seq(target, u) if seq else _c_minus(target, u)
    if mode == 'plus':
        if seq and k == 'S':
            return _c_plus_seq(target, u)
        if not seq and k == 'L':
            return _c_plus(target, u)
        if not seq and k == 'G':
            return bag(_c_plus(target, m) for m in u[1])
    if mode == 'applied' and not seq and k == 'S':
        return _c_applied(target, u)
    raise ValueError(f"no copycat construction for mode {mode!r} on this input")


# -- expansions of λ-terms ------------------------------------------------------------

def _fresh(M, env=None, counter=None):
    """Rename every binder to '#k' so binder names never clash with free names."""
    env = env or {}
    counter = counter if counter is not None else itertools.count()
    if isinstance(M, Var):
        return Var(env.get(M.name, M.name))
    if isinstance(M, Abs):
        n = f"#{next(counter)}"
        return Abs(n, _fresh(M.body, {**env, M.name: n}, counter))
    return App(_fresh(M.fun, env, counter), _fresh(M.arg, env, counter))


def _spine(M):
    args = []
    while isinstance(M, App):
        args.append(M.arg)
        M = M.fun
    return M, args[::-1]


def _unfold(m, name):
    """Inverse of lambda_single(('F', name, 0), ·)."""
    body = rename(m[1], ('B', 0, 0), ('F', name, 0))
    return ('L', _reindex(body, ('B', 0), -1))


class _Enumerator:
    def __init__(self, flavor: str):
        self.flavor = flavor
        self.memo: dict = {}

    def run(self, M, S, W):
        key = (M, S, W)
        if key not in self.memo:
            self.memo[key] = self._run(M, S, W)
        return self.memo[key]

    def _run(self, M, S, W):
        if isinstance(M, Abs):
            out = []
            for m, c, s in self.run(M.body, S, W):
                m2 = lambda_single(('F', M.name, 0), m)
                if width(m2) <= W:
                    out.append((m2, c, s))
            return out
        if S < 3:
            return []
        if self.flavor == 'head':
            h, args = _spine(M)
        elif isinstance(M, App):
            h, args = M.fun, [M.arg]
        else:
            h, args = M, []
        if isinstance(h, Var) and (self.flavor == 'head' or not args):
            heads = [(('F', h.name, 0), Fraction(1), 1)]
        else:
            heads = self.run(h, S - 2, W)
        if not heads:
            return []
        budget = S - 2 - min(s for _, _, s in heads)
        positions = []
        for j in range(W):
            if j < len(args):
                positions.append(self.run(args[j], budget, W))
            else:
                positions.append(_eta_elems(('B', 0, j - len(args)), budget, W))
        streams = _streams(positions, budget) if budget >= 0 else []
        out = []
        for hd, ch, sh in heads:
            for st, cs, ss in streams:
                total = 2 + sh + ss
                if total <= S:
                    out.append((('L', ('A', hd, st)), ch * cs, total))
        return out


@dataclass(frozen=True)
class ExpansionHandle:
    """T_h(source) or T_η(source), as an enumerator plus a coefficient query."""
    source: object
    flavor: str = 'head'
    _renamed: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.flavor not in ('head', 'structural'):
            raise ValueError(f"unknown flavor {self.flavor!r}")
        object.__setattr__(self, '_renamed', _fresh(self.source))

    def enumerate(self, t: Truncation) -> list:
        return taylor_enum(self, t)

    def coeff(self, m) -> Fraction:
        return taylor_coeff(self, m)


def T_h(M) -> ExpansionHandle:
    return ExpansionHandle(M, 'head')


def T_eta(M) -> ExpansionHandle:
    return ExpansionHandle(M, 'structural')


def _weighted(h: ExpansionHandle, t: Truncation) -> dict:
    E = _Enumerator(h.flavor)
    out: dict = {}
    for m, c, _ in E.run(h._renamed, t.max_size, t.max_width):
        out[m] = out.get(m, 0) + c
    return out


def taylor_enum(h: ExpansionHandle, t: Truncation) -> list:
    return sorted(_weighted(h, t), key=_order)


def _bag_query(q, b):
    """Promotion coefficient for a bag sitting under the sequence binder y⃗ = B(0)."""
    def elem(e):
        if mentions_seq(e, ('B', 0)):
            return 0
        return q(lower(e))
    return promotion_coeff(elem, b)


def _coeff(M, m, flavor) -> Fraction:
    if m[0] != 'L':
        return Fraction(0)
    if isinstance(M, Abs):
        if mentions_seq(m, ('F', M.name)):
            return Fraction(0)
        return _coeff(M.body, _unfold(m, M.name), flavor)
    if m[1][0] != 'A':
        return Fraction(0)
    hd, s = m[1][1], m[1][2]
    if flavor == 'head':
        h, args = _spine(M)
    elif isinstance(M, App):
        h, args = M.fun, [M.arg]
    else:
        h, args = M, []
    if isinstance(h, Var) and (flavor == 'head' or not args):
        if hd != ('F', h.name, 0):
            return Fraction(0)
        c = Fraction(1)
    else:
        if hd[0] != 'L' or mentions_seq(hd, ('B', 0)):
            return Fraction(0)
        c = _coeff(h, lower(hd), flavor)
    for j, b in enumerate(s[1]):
        if c == 0:
            break
        if j < len(args):
            c *= _bag_query(lambda e, N=args[j]: _coeff(N, e, flavor), b)
        else:
            c *= promotion_coeff(lambda e, i=j - len(args): eta_var_coeff(('B', 0, i), e), b)
    return c


def taylor_coeff(h: ExpansionHandle, m) -> Fraction:
    """Coefficient of m in the expansion, by structural recursion on m."""
    return _coeff(h._renamed, m, h.flavor)


# -- normal forms of truncated expansions ------------------------------------------

def nt_truncated(M, t: Truncation, semiring: str = 'rat') -> Sum:
    """Σ coeff·normalize(m) over the elements of T_h(M) inside t."""
    memo: dict = {}
    out: dict = {}
    for m, c in _weighted(T_h(M), t).items():
        for n, k in normal_form_d(m, memo).items():
            if width(n) > t.max_width:
                raise RuntimeError(f"normal form {n!r} of {m!r} leaves the width bound {t.max_width}")
            out[n] = out.get(n, 0) + c * k
    return Sum(out).to_semiring(semiring)


def restrict(V: Sum, t: Truncation) -> Sum:
    return Sum({u: c for u, c in V.items() if t.admits(u)}, V.semiring)


def nt_window(M, t_enum: Truncation, window: Truncation, semiring: str = 'rat') -> Sum:
    """Truncated NT restricted to outputs inside `window`."""
    return restrict(nt_truncated(M, t_enum, semiring), window)


# -- head reduction -----------------------------------------------------------------

def subst_lambda(M, x: str, N):
    """Capture-avoiding M[N/x]."""
    if isinstance(M, Var):
        return N if M.name == x else M
    if isinstance(M, App):
        return App(subst_lambda(M.fun, x, N), subst_lambda(M.arg, x, N))
    if M.name == x:
        return M
    fv = lambda_free_vars(N)
    if M.name in fv and x in lambda_free_vars(M.body):
        avoid = fv | lambda_free_vars(M.body)
        k = 1
        while f"{M.name}{k}" in avoid:
            k += 1
        y = f"{M.name}{k}"
        return Abs(y, subst_lambda(subst_lambda(M.body, M.name, Var(y)), x, N))
    return Abs(M.name, subst_lambda(M.body, x, N))


def head_reduce_lambda(M):
    """One head β-step, or M itself when it is a head normal form."""
    if isinstance(M, Abs):
        return Abs(M.name, head_reduce_lambda(M.body))
    h, args = _spine(M)
    if isinstance(h, Abs) and args:
        R = subst_lambda(h.body, h.name, args[0])
        for a in args[1:]:
            R = App(R, a)
        return R
    return M


def head_reduce_resource(e) -> Sum:
    """H_R on a value or base term; fixed exactly on head normal forms."""
    if e[0] == 'L':
        return Sum({('L', a): c for a, c in head_reduce_resource(e[1]).items()})
    if e[0] == 'A' and e[1][0] == 'L':
        return Sum(beta_big(e))
    return Sum.single(e)


def head_reduce_sum(U: Sum) -> Sum:
    out = Sum.zero(U.semiring)
    for u, c in U.items():
        out = out + head_reduce_resource(u).scale(c)
    return out


# -- truncated =_T -----------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    distinct: bool
    witness: object = None
    side: int = 0          # 1 if the witness is in NT(M) only, 2 if in NT(N) only
    bound: Truncation | None = None

    def __str__(self):
        if not self.distinct:
            return f"indistinguishable at bound ({self.bound.max_size}, {self.bound.max_width})"
        from .syntax import print_resource
        return f"distinct: {print_resource(self.witness)} only in NT of term {self.side}"


def equiv_T(M, N, t: Truncation, semiring: str = 'rat') -> Verdict:
    """Compare truncated NT supports; a witness must survive t.grow()."""
    a = nt_truncated(M, t, semiring).support()
    b = nt_truncated(N, t, semiring).support()
    if a == b:
        return Verdict(False, bound=t)
    t2 = t.grow()
    a2 = nt_truncated(M, t2, semiring).support()
    b2 = nt_truncated(N, t2, semiring).support()
    for w in sorted(a ^ b, key=_order):
        side = 1 if w in a else 2
        if (w in a2) != (w in b2) and (w in a2) == (side == 1):
            return Verdict(True, w, side, t)
    return Verdict(False, bound=t)
