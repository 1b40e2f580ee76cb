"""Böhm transformations and separation of λ-terms with distinct truncated NT."""
from __future__ import annotations

from dataclasses import dataclass

from .syntax import Abs, App, OMEGA, Var, alpha_eq, lambda_free_vars, print_lambda
from .taylor import Truncation, _spine, equiv_T, head_reduce_lambda, subst_lambda

__all__ = ['Apply', 'Subst', 'rho', 'proj', 'apply_transform', 'print_transform',
           'head_normalizable', 'head_normal_form', 'separate', 'Separation', 'IDENTITY']

IDENTITY = Abs('z', Var('z'))


@dataclass(frozen=True)
class Apply:
    arg: object

    def __str__(self):
        if isinstance(self.arg, Var):
            return f"@{self.arg.name}"
        return f"@({print_lambda(self.arg)})"


@dataclass(frozen=True)
class Subst:
    var: str
    arg: object

    def __str__(self):
        return f"{{{self.var}:={print_lambda(self.arg)}}}"


def print_transform(tau) -> str:
    return ' '.join(str(b) for b in tau)


def rho(k: int):
    """λx1 … λxk.λy.y x1 … xk"""
    body = Var('y')
    for i in range(1, k + 1):
        body = App(body, Var(f"x{i}"))
    body = Abs('y', body)
    for i in range(k, 0, -1):
        body = Abs(f"x{i}", body)
    return body


def proj(k: int, i: int):
    """λx1 … λxk.xi"""
    if not 1 <= i <= k:
        raise ValueError(f"projection index {i} out of range 1..{k}")
    body = Var(f"x{i}")
    for j in range(k, 0, -1):
        body = Abs(f"x{j}", body)
    return body


def apply_transform(M, tau):
    for b in tau:
        M = App(M, b.arg) if isinstance(b, Apply) else subst_lambda(M, b.var, b.arg)
    return M


def _is_hnf(M) -> bool:
    while isinstance(M, Abs):
        M = M.body
    h, _ = _spine(M)
    return isinstance(h, Var)


def head_normal_form(M, fuel: int):
    """(hnf, steps), or None when fuel runs out first."""
    for steps in range(fuel + 1):
        if _is_hnf(M):
            return M, steps
        if steps < fuel:
            M = head_reduce_lambda(M)
    return None


def head_normalizable(M, fuel: int):
    """('yes', steps) or ('exhausted', fuel); never claims divergence."""
    r = head_normal_form(M, fuel)
    return ('yes', r[1]) if r else ('exhausted', fuel)


@dataclass(frozen=True)
class Separation:
    transform: tuple
    winner: int        # 1: first term head-normalizes, second exhausts fuel; 2: the converse

    def __str__(self):
        return print_transform(self.transform)


def _strip(M):
    xs = []
    while isinstance(M, Abs):
        xs.append(M.name)
        M = M.body
    return xs, M


def _sound(M, N, tau, winner, fuel) -> bool:
    a = head_normalizable(apply_transform(M, tau), fuel)[0]
    b = head_normalizable(apply_transform(N, tau), fuel)[0]
    return (a, b) == (('yes', 'exhausted') if winner == 1 else ('exhausted', 'yes'))


class _Search:
    def __init__(self, M, N, t, fuel, k_base):
        self.M, self.N, self.t, self.fuel = M, N, t, fuel
        self.k_next = k_base
        self.used = set(lambda_free_vars(M) | lambda_free_vars(N))
        self.fresh = []

    def fresh_var(self):
        k = 1
        while f"z{k}" in self.used:
            k += 1
        z = f"z{k}"
        self.used.add(z)
        self.fresh.append(z)
        return z

    def big_k(self, at_least):
        k = max(self.k_next, at_least)
        self.k_next = k + 1
        return k

    def run(self, tau, depth):
        if depth > 2 * self.t.max_size + 4:
            return None
        hm = head_normal_form(apply_transform(self.M, tau), self.fuel)
        hn = head_normal_form(apply_transform(self.N, tau), self.fuel)
        if hm and not hn:
            return tau, 1
        if hn and not hm:
            return tau, 2
        if not hm:
            return None
        (xs, bm), (ys, bn) = _strip(hm[0]), _strip(hn[0])
        if len(xs) or len(ys):
            # bring both bodies to the top by applying fresh variables
            zs = [Var(self.fresh_var()) for _ in range(max(len(xs), len(ys)))]
            return self.run(tau + tuple(Apply(z) for z in zs), depth + 1)
        (h, margs), (g, nargs) = _spine(bm), _spine(bn)
        p, q = len(margs), len(nargs)
        if h != g:
            return self.run(tau + (Subst(g.name, OMEGA),), depth + 1)
        if p != q:
            k = self.big_k(max(p, q))
            fill = tuple(Apply(IDENTITY) for _ in range(k - max(p, q)))
            return self.run(tau + (Subst(h.name, rho(k)),) + fill + (Apply(OMEGA),), depth + 1)
        order = self._argument_order(margs, nargs)
        for i in order:
            k = self.big_k(p)
            step = (Subst(h.name, rho(k)),) + tuple(Apply(IDENTITY) for _ in range(k - p)) \
                + (Apply(proj(k, i + 1)),)
            r = self.run(tau + step, depth + 1)
            if r:
                return r
        return None

    def _argument_order(self, margs, nargs):
        # arguments whose truncated NT differ come first
        distinct, same = [], []
        for i, (a, b) in enumerate(zip(margs, nargs)):
            if alpha_eq(a, b):
                continue
            (distinct if equiv_T(a, b, self.t).distinct else same).append(i)
        return distinct + same


def _simplify(tau, fresh):
    """Fold {z:=N} into the @z that introduced the fresh variable z."""
    tau = list(tau)
    changed = True
    while changed:
        changed = False
        for j, b in enumerate(tau):
            if isinstance(b, Subst) and b.var in fresh:
                for i in range(j):
                    if tau[i] == Apply(Var(b.var)):
                        tau[i] = Apply(b.arg)
                        del tau[j]
                        changed = True
                        break
            if changed:
                break
    return tuple(tau)


def separate(M, N, t: Truncation, fuel: int = 200, retries: int = 3):
    """A Böhm transformation making exactly one of M, N head-normalizable, or None."""
    if not equiv_T(M, N, t).distinct:
        return None
    k_base = _max_arity(M) + _max_arity(N) + len(lambda_free_vars(M) | lambda_free_vars(N)) + 1
    for _ in range(retries + 1):
        s = _Search(M, N, t, fuel, k_base)
        r = s.run((), 0)
        if r:
            tau = _simplify(r[0], set(s.fresh))
            if not _sound(M, N, tau, r[1], fuel):
                tau = r[0]
            # leftover fresh variables are replaced by the identity when that stays sound
            for i, b in enumerate(tau):
                if isinstance(b, Apply) and isinstance(b.arg, Var) and b.arg.name in s.fresh:
                    alt = tau[:i] + (Apply(IDENTITY),) + tau[i + 1:]
                    if _sound(M, N, alt, r[1], fuel):
                        tau = alt
            if _sound(M, N, tau, r[1], fuel):
                return Separation(tau, r[1])
        k_base *= 2
    return None


def _max_arity(M) -> int:
    if isinstance(M, Var):
        return 0
    if isinstance(M, Abs):
        return _max_arity(M.body)
    h, args = _spine(M)
    return max([len(args), _max_arity(h)] + [_max_arity(a) for a in args])
