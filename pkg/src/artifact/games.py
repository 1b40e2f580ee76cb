"""Positions and augmentations on the universal arena, and the codec with normal terms.

Arena addresses are concrete tuples:
    U         a tuple of naturals (ε is ())
    U^ℕ       (i, l) with l an address of U
    o         'q'
    Γ ⊢ A     (1, g) on the left, (2, a) on the right
    Γ = (U^ℕ)^V   g = (x, (i, l)) where x names a sequence variable
Sequence variables are ('f', name) for free ones and ('b', level) for the
binder at nesting level `level` (counted from the top of the encoded term).
"""
from __future__ import annotations

from dataclasses import dataclass

from .syntax import bag, is_normal, stream

__all__ = [
    'fun', 'unfun', 'pack', 'unpack', 'unfold', 'fold', 'curry', 'uncurry',
    'Config', 'canonicalize_position', 'pos_arrow', 'pos_unarrow', 'pos_pack', 'pos_unpack',
    'pos_bag', 'pos_unbag', 'EMPTY_POS', 'kappa', 'kappa_inv',
    'Aug', 'validate', 'AugmentationError', 'canonical', 'desequentialize', 'empty_aug',
    'tupling', 'aug_bag', 'aug_cons', 'aug_uncons', 'lift_box', 'unlift_box', 'curry_aug',
    'uncurry_aug', 'encode', 'decode', 'export_dot', 'serialize', 'polarity',
]


# -- arena isomorphisms on addresses --------------------------------------------------

def _nat_list(l) -> bool:
    return isinstance(l, tuple) and all(isinstance(n, int) and n >= 0 for n in l)


def _bad(what, a):
    return ValueError(f"malformed address for {what}: {a!r}")


def fun(l):
    """U → U ⇒ U."""
    if not _nat_list(l):
        raise _bad('fun', l)
    if not l:
        return (2, ())
    if l[0] == 0:
        return (1, l[1:])
    return (2, (l[0] - 1,) + l[1:])


def unfun(a):
    if not (isinstance(a, tuple) and len(a) == 2 and a[0] in (1, 2) and _nat_list(a[1])):
        raise _bad('unfun', a)
    tag, l = a
    if tag == 1:
        return (0,) + l
    if not l:
        return ()
    return (l[0] + 1,) + l[1:]


def pack(a):
    """A ⊗ A^ℕ → A^ℕ."""
    if not (isinstance(a, tuple) and len(a) == 2 and a[0] in (1, 2)):
        raise _bad('pack', a)
    if a[0] == 1:
        return (0, a[1])
    inner = a[1]
    if not (isinstance(inner, tuple) and len(inner) == 2 and isinstance(inner[0], int)):
        raise _bad('pack', a)
    return (inner[0] + 1, inner[1])


def unpack(a):
    if not (isinstance(a, tuple) and len(a) == 2 and isinstance(a[0], int) and a[0] >= 0):
        raise _bad('unpack', a)
    if a[0] == 0:
        return (1, a[1])
    return (2, (a[0] - 1, a[1]))


def unfold(l):
    """U → U^ℕ ⇒ o."""
    if not _nat_list(l):
        raise _bad('unfold', l)
    if not l:
        return (2, 'q')
    return (1, (l[0], l[1:]))


def fold(a):
    if a == (2, 'q'):
        return ()
    if isinstance(a, tuple) and len(a) == 2 and a[0] == 1 and isinstance(a[1], tuple) \
            and len(a[1]) == 2 and _nat_list(a[1][1]):
        return (a[1][0],) + a[1][1]
    raise _bad('fold', a)


def curry(a):
    """Γ ⊗ A ⇒ B → Γ ⇒ (A ⇒ B)."""
    if isinstance(a, tuple) and len(a) == 2:
        if a[0] == 2:
            return (2, (2, a[1]))
        if a[0] == 1 and isinstance(a[1], tuple) and len(a[1]) == 2 and a[1][0] in (1, 2):
            return (1, a[1][1]) if a[1][0] == 1 else (2, (1, a[1][1]))
    raise _bad('curry', a)


def uncurry(a):
    if isinstance(a, tuple) and len(a) == 2:
        if a[0] == 1:
            return (1, (1, a[1]))
        if a[0] == 2 and isinstance(a[1], tuple) and len(a[1]) == 2 and a[1][0] in (1, 2):
            return (1, (2, a[1][1])) if a[1][0] == 1 else (2, a[1][1])
    raise _bad('uncurry', a)


# -- positions ----------------------------------------------------------------------

@dataclass(frozen=True)
class Config:
    """A configuration: parent pointers of a finite forest and a display map."""
    parent: tuple
    display: tuple

    def __len__(self):
        return len(self.display)

    def roots(self):
        return [e for e, p in enumerate(self.parent) if p < 0]

    def children(self):
        ch = [[] for _ in self.parent]
        for e, p in enumerate(self.parent):
            if p >= 0:
                ch[p].append(e)
        return ch


EMPTY_POS = Config((), ())


def _tree_key(conf: Config, e, ch):
    return (repr(conf.display[e]), tuple(sorted(_tree_key(conf, c, ch) for c in ch[e])))


def _u_parent(l):
    return l[:-1] if l else None


def _check_config_u(conf: Config, parent_of):
    for e, p in enumerate(conf.parent):
        ap = parent_of(conf.display[e])
        if p < 0:
            if ap is not None:
                raise ValueError(f"event {e} is minimal but its display is not")
        elif conf.display[p] != ap:
            raise ValueError(f"event {e}: causality not preserved by the display map")


def _pos_parent(a):
    """Arena parent for addresses of U (tuples of ints) or U^ℕ ((i, l) pairs)."""
    if a and isinstance(a[-1], tuple):
        i, l = a
        return None if not l else (i, l[:-1])
    return _u_parent(a)


def canonicalize_position(c: Config) -> Config:
    """Canonical representative of the symmetry class of c."""
    _check_config_u(c, _pos_parent)
    ch = c.children()
    keys = sorted(_tree_key(c, r, ch) for r in c.roots())
    parent, display = [], []

    def emit(k, p):
        idx = len(display)
        display.append(_unrepr(k[0]))
        parent.append(p)
        for sub in k[1]:
            emit(sub, idx)

    for k in keys:
        emit(k, -1)
    return Config(tuple(parent), tuple(display))


def _unrepr(s):
    import ast
    return ast.literal_eval(s)


def _union(confs) -> Config:
    parent, display = [], []
    for c in confs:
        off = len(display)
        parent.extend(p + off if p >= 0 else -1 for p in c.parent)
        display.extend(c.display)
    return Config(tuple(parent), tuple(display))


def pos_arrow(x: Config) -> Config:
    """x ⇒ o, read on U through fold: a new root at ε above x."""
    parent = (-1,) + tuple(p + 1 if p >= 0 else 0 for p in x.parent)
    display = ((),) + tuple((i,) + l for i, l in x.display)
    return canonicalize_position(Config(parent, display))


def pos_unarrow(x: Config) -> Config:
    if len(x.roots()) != 1 or x.display[x.roots()[0]] != ():
        raise ValueError("expected a pointed position rooted at ε")
    r = x.roots()[0]
    keep = [e for e in range(len(x)) if e != r]
    idx = {e: k for k, e in enumerate(keep)}
    parent = tuple(-1 if x.parent[e] == r else idx[x.parent[e]] for e in keep)
    display = tuple((x.display[e][0], x.display[e][1:]) for e in keep)
    return canonicalize_position(Config(parent, display))


def pos_pack(y: Config, z: Config) -> Config:
    """y ⊛ z: y on U goes to component 0, z on U^ℕ is shifted by one."""
    y2 = Config(y.parent, tuple((0, l) for l in y.display))
    z2 = Config(z.parent, tuple((i + 1, l) for i, l in z.display))
    return canonicalize_position(_union([y2, z2]))


def _restrict(x: Config, keep) -> Config:
    idx = {e: k for k, e in enumerate(keep)}
    return Config(tuple(idx[x.parent[e]] if x.parent[e] >= 0 else -1 for e in keep),
                  tuple(x.display[e] for e in keep))


def pos_unpack(x: Config):
    first = [e for e in range(len(x)) if x.display[e][0] == 0]
    rest = [e for e in range(len(x)) if x.display[e][0] > 0]
    y = _restrict(x, first)
    z = _restrict(x, rest)
    y = Config(y.parent, tuple(l for _, l in y.display))
    z = Config(z.parent, tuple((i - 1, l) for i, l in z.display))
    return canonicalize_position(y), canonicalize_position(z)


def pos_bag(xs) -> Config:
    for x in xs:
        if len(x.roots()) != 1:
            raise ValueError("bag components must be pointed")
    return canonicalize_position(_union(xs))


def _trees(x: Config):
    ch = x.children()
    out = []
    for r in x.roots():
        keep, todo = [], [r]
        while todo:
            e = todo.pop()
            keep.append(e)
            todo.extend(ch[e])
        out.append(_restrict(x, sorted(keep)))
    return out


def pos_unbag(x: Config) -> list:
    return sorted((canonicalize_position(t) for t in _trees(x)), key=repr)


def kappa(t) -> Config:
    """κ on value, bag and stream types."""
    tag = t[0]
    if tag == 'V':
        return pos_arrow(kappa(t[1]))
    if tag == 'G':
        return pos_bag([kappa(a) for a in t[1]])
    if tag == 'S':
        if not t[1]:
            return EMPTY_POS
        return pos_pack(kappa(t[1][0]), kappa(('S', t[1][1:])))
    raise ValueError(f"κ is not defined on {t!r}")


def kappa_inv(p: Config, sort: str):
    if sort == 'value':
        return ('V', kappa_inv(pos_unarrow(p), 'stream'))
    if sort == 'bag':
        return bag(kappa_inv(x, 'value') for x in pos_unbag(p))
    if sort == 'stream':
        if not len(p):
            return ('S', ())
        y, z = pos_unpack(p)
        return stream((kappa_inv(y, 'bag'),) + kappa_inv(z, 'stream')[1])
    raise ValueError(f"unknown sort {sort!r}")


# -- augmentations --------------------------------------------------------------------

class AugmentationError(ValueError):
    pass


@dataclass(frozen=True)
class Aug:
    """Events 0..n-1 with a dynamic forest, a static forest and a display map.

    `right` names the right-hand arena: 'o', 'U' or 'UN'."""
    dyn: tuple
    static: tuple
    display: tuple
    right: str

    def __len__(self):
        return len(self.display)

    def roots(self):
        return [e for e, p in enumerate(self.dyn) if p < 0]

    def children(self):
        ch = [[] for _ in self.dyn]
        for e, p in enumerate(self.dyn):
            if p >= 0:
                ch[p].append(e)
        return ch


def empty_aug(right: str) -> Aug:
    return Aug((), (), (), right)


def polarity(a, right: str) -> str:
    side, x = a
    if side == 2:
        if right == 'o':
            return '-'
        l = x if right == 'U' else x[1]
        return '-' if len(l) % 2 == 0 else '+'
    l = x[1][1]
    return '+' if len(l) % 2 == 0 else '-'


def _arena_parent(a, right: str):
    side, x = a
    if side == 2:
        if right == 'o':
            return None
        if right == 'U':
            return None if not x else (2, x[:-1])
        i, l = x
        return None if not l else (2, (i, l[:-1]))
    v, (i, l) = x
    return None if not l else (1, (v, (i, l[:-1])))


def _check_display(a, right):
    try:
        side, x = a
        if side == 2:
            ok = (x == 'q') if right == 'o' else (
                _nat_list(x) if right == 'U' else
                isinstance(x, tuple) and len(x) == 2 and isinstance(x[0], int) and _nat_list(x[1]))
        else:
            v, (i, l) = x
            ok = side == 1 and isinstance(i, int) and i >= 0 and _nat_list(l)
    except (TypeError, ValueError):
        ok = False
    if not ok:
        raise AugmentationError(f"display {a!r} does not belong to the arena")


def _ancestors(parent, e):
    out = []
    p = parent[e]
    while p >= 0:
        out.append(p)
        p = parent[p]
    return out


def validate(q: Aug) -> Aug:
    """Check the configuration conditions and the five conditions on augmentations."""
    n = len(q)
    if not (len(q.dyn) == len(q.static) == n):
        raise AugmentationError("inconsistent event count")
    for a in q.display:
        _check_display(a, q.right)
    for parent, what in ((q.dyn, 'dynamic'), (q.static, 'static')):
        for e in range(n):
            seen = {e}
            for p in _ancestors(parent, e):
                if p in seen or p >= n:
                    raise AugmentationError(f"{what} order is not a forest")
                seen.add(p)
    pol = [polarity(a, q.right) for a in q.display]
    for e in range(n):
        ap = _arena_parent(q.display[e], q.right)
        p = q.static[e]
        if (p < 0) != (ap is None):
            raise AugmentationError(f"event {e}: minimality not respected")
        if p >= 0 and q.display[p] != ap:
            raise AugmentationError(f"event {e}: causality not preserved")
        # rule-abiding
        if p >= 0 and p not in _ancestors(q.dyn, e):
            raise AugmentationError(f"event {e}: static dependency not dynamic")
        d = q.dyn[e]
        # courteous
        if d >= 0 and (pol[d] == '+' or pol[e] == '-') and q.static[e] != d:
            raise AugmentationError(f"event {e}: discourteous dynamic edge")
        # negative
        if d < 0 and pol[e] != '-':
            raise AugmentationError(f"event {e}: positive minimal event")
    ch = q.children()
    for e in range(n):
        if pol[e] == '-' and sum(1 for c in ch[e] if pol[c] == '+') > 1:
            raise AugmentationError(f"event {e}: nondeterministic")
        if not ch[e] and pol[e] != '+':
            raise AugmentationError(f"event {e}: negative maximal event")
    return q


def _akey(q: Aug, e, ch, depth_of):
    s = q.static[e]
    up = -1 if s < 0 else depth_of[e] - depth_of[s]
    return (repr(q.display[e]), up, tuple(sorted(_akey(q, c, ch, depth_of) for c in ch[e])))


def canonical(q: Aug) -> Aug:
    """Canonical representative of the isomorphism class (the isogmentation)."""
    ch = q.children()
    depth_of = [len(_ancestors(q.dyn, e)) for e in range(len(q))]
    keys = sorted(_akey(q, r, ch, depth_of) for r in q.roots())
    dyn, static, display = [], [], []

    def emit(k, p, path):
        idx = len(display)
        display.append(_unrepr(k[0]))
        dyn.append(p)
        static.append(-1 if k[1] < 0 else path[-k[1]])
        for sub in k[2]:
            emit(sub, idx, path + [idx])

    for k in keys:
        emit(k, -1, [])
    return Aug(tuple(dyn), tuple(static), tuple(display), q.right)


def desequentialize(q: Aug) -> Config:
    return Config(q.static, q.display)


def _aug_union(qs, right) -> Aug:
    dyn, static, display = [], [], []
    for q in qs:
        off = len(display)
        dyn.extend(p + off if p >= 0 else -1 for p in q.dyn)
        static.extend(p + off if p >= 0 else -1 for p in q.static)
        display.extend(q.display)
    return Aug(tuple(dyn), tuple(static), tuple(display), right)


def _redisplay(q: Aug, f, right) -> Aug:
    return Aug(q.dyn, q.static, tuple(f(a) for a in q.display), right)


def tupling(qs, right: str = 'T') -> Aug:
    """⟨⟨q_1, ..., q_k⟩⟩: right events of q_i are tagged with i (from 1)."""
    parts = []
    for i, q in enumerate(qs, 1):
        parts.append(_redisplay(q, lambda a, i=i: a if a[0] == 1 else (2, (i, a[1])), right))
    return _aug_union(parts, right)


def aug_bag(qs, right: str = 'U') -> Aug:
    """⟦q_1, ..., q_k⟧ (and binary ∗ for k = 2)."""
    for q in qs:
        if q.right != right:
            raise AugmentationError("bag components live on different arenas")
    out = validate(canonical(_aug_union(qs, right)))
    assert len(out) == sum(len(q) for q in qs)
    return out


def aug_cons(p: Aug, q: Aug) -> Aug:
    """p ⊛ q = pack(⟨⟨p, q⟩⟩), for p on Γ ⊢ U and q on Γ ⊢ U^ℕ."""
    if p.right != 'U' or q.right != 'UN':
        raise AugmentationError("cons expects Γ ⊢ U and Γ ⊢ U^ℕ")
    t = tupling([p, q])
    r = validate(canonical(_redisplay(t, lambda a: a if a[0] == 1 else (2, pack(a[1])), 'UN')))
    assert len(r) == len(p) + len(q)
    return r


def _split_trees(q: Aug, pred):
    """Partition events by a predicate on the display of their dynamic root."""
    root = list(range(len(q)))
    for e in range(len(q)):
        anc = _ancestors(q.dyn, e)
        root[e] = anc[-1] if anc else e
    yes = [e for e in range(len(q)) if pred(q.display[root[e]])]
    no = [e for e in range(len(q)) if not pred(q.display[root[e]])]
    return _aug_restrict(q, yes), _aug_restrict(q, no)


def _aug_restrict(q: Aug, keep) -> Aug:
    idx = {e: k for k, e in enumerate(keep)}

    def m(p):
        if p < 0:
            return -1
        if p not in idx:
            raise AugmentationError("component split cuts a causal link")
        return idx[p]
    return Aug(tuple(m(q.dyn[e]) for e in keep), tuple(m(q.static[e]) for e in keep),
               tuple(q.display[e] for e in keep), q.right)


def aug_uncons(q: Aug):
    if q.right != 'UN':
        raise AugmentationError("uncons expects Γ ⊢ U^ℕ")
    for r in q.roots():
        if q.display[r][0] != 2:
            raise AugmentationError("a minimal event is displayed on the left")
    first, rest = _split_trees(q, lambda a: a[1][0] == 0)
    first = Aug(first.dyn, first.static,
                tuple(a if a[0] == 1 else (2, a[1][1]) for a in first.display), 'U')
    rest = Aug(rest.dyn, rest.static,
               tuple(a if a[0] == 1 else (2, (a[1][0] - 1, a[1][1])) for a in rest.display), 'UN')
    return canonical(first), canonical(rest)


def lift_box(x, i: int, q: Aug) -> Aug:
    """□_{x,i}(q): ⊖ then ⊕ (calling x[i]) then q, right moves redisplayed under ⊕."""
    if q.right != 'UN':
        raise AugmentationError("lifting expects Γ ⊢ U^ℕ")
    n = len(q)
    dyn = (-1, 0) + tuple(p + 2 if p >= 0 else 1 for p in q.dyn)
    static = [-1, -1]
    display = [(2, 'q'), (1, (x, (i, ())))]
    for e in range(n):
        a = q.display[e]
        s = q.static[e]
        if a[0] == 1:
            display.append(a)
            static.append(s + 2 if s >= 0 else -1)
        else:
            k, l = a[1]
            display.append((1, (x, (i, (k,) + l))))
            static.append(s + 2 if s >= 0 else 1)
    out = validate(canonical(Aug(dyn, tuple(static), tuple(display), 'o')))
    assert len(out) == n + 2
    return out


def unlift_box(q: Aug):
    """Inverse of lift_box: (x, i, p)."""
    if q.right != 'o' or len(q.roots()) != 1:
        raise AugmentationError("expected a pointed augmentation on Γ ⊢ o")
    r = q.roots()[0]
    ch = q.children()
    if len(ch[r]) != 1:
        raise AugmentationError("the initial move must have exactly one successor")
    plus = ch[r][0]
    a = q.display[plus]
    if a[0] != 1 or a[1][1][1] != ():
        raise AugmentationError("the second move must call a variable")
    x, i = a[1][0], a[1][1][0]
    under = set()
    for e in range(len(q)):
        if plus in _ancestors(q.static, e):
            under.add(e)
    keep = [e for e in range(len(q)) if e not in (r, plus)]
    idx = {e: k for k, e in enumerate(keep)}
    dyn, static, display = [], [], []
    for e in keep:
        d = q.dyn[e]
        dyn.append(-1 if d == plus else idx[d])
        s = q.static[e]
        static.append(-1 if s in (plus, -1) else idx[s])
        if e in under:
            l = q.display[e][1][1][1]
            display.append((2, (l[0], l[1:])))
        else:
            display.append(q.display[e])
    return x, i, canonical(Aug(tuple(dyn), tuple(static), tuple(display), 'UN'))


def curry_aug(x, q: Aug) -> Aug:
    """Λ: Γ, x ⊢ o  to  Γ ⊢ U^ℕ ⇒ o, read on Γ ⊢ U through fold."""
    if q.right != 'o' or len(q.roots()) > 1:
        raise AugmentationError("currying expects a pointed augmentation on Γ ⊢ o")
    roots = q.roots()
    display, static = [], []
    for e, a in enumerate(q.display):
        s = q.static[e]
        if a == (2, 'q'):
            display.append((2, ()))
        elif a[0] == 1 and a[1][0] == x:
            i, l = a[1][1]
            display.append((2, (i,) + l))
            if s < 0:
                s = roots[0]
        else:
            display.append(a)
        static.append(s)
    return validate(canonical(Aug(q.dyn, tuple(static), tuple(display), 'U')))


def uncurry_aug(x, q: Aug) -> Aug:
    if q.right != 'U' or len(q.roots()) != 1:
        raise AugmentationError("uncurrying expects a pointed augmentation on Γ ⊢ U")
    r = q.roots()[0]
    display, static = [], []
    for e, a in enumerate(q.display):
        s = q.static[e]
        if a[0] == 2:
            if a[1] == ():
                display.append((2, 'q'))
            else:
                l = a[1]
                display.append((1, (x, (l[0], l[1:]))))
                if s == r and len(l) == 1:
                    s = -1
        else:
            display.append(a)
        static.append(s)
    return canonical(Aug(q.dyn, tuple(static), tuple(display), 'o'))


# -- the codec ----------------------------------------------------------------------

def _key(v, depth):
    if v[0] == 'F':
        return ('f', v[1])
    return ('b', depth - 1 - v[1])


def encode(m, G=(), trace: list | None = None) -> Aug:
    """‖m‖ for a normal value, base, bag or stream term whose free sequence
    variables are named in G. `trace` collects (construction, input sizes, size)."""
    if not is_normal(m):
        raise ValueError("encode expects a normal term")
    return _enc(m, 0, frozenset(G), trace)


def _log(trace, op, inputs, out):
    if trace is not None:
        trace.append((op, tuple(len(p) for p in inputs), len(out)))
    return out


def _enc(e, depth, G, trace):
    tag = e[0]
    if tag == 'A':
        h = e[1]
        if h[0] not in ('B', 'F'):
            raise ValueError("encode expects a normal term")
        if h[0] == 'F' and h[1] not in G:
            raise ValueError(f"free sequence variable {h[1]!r} not declared")
        p = _enc(e[2], depth, G, trace)
        return _log(trace, 'box', [p], lift_box(_key(h, depth), h[2], p))
    if tag == 'L':
        p = _enc(e[1], depth + 1, G, trace)
        return _log(trace, 'lambda', [p], curry_aug(('b', depth), p))
    if tag == 'G':
        ps = [_enc(x, depth, G, trace) for x in e[1]]
        return _log(trace, 'bag', ps, aug_bag(ps, 'U'))
    if tag == 'S':
        if not e[1]:
            return empty_aug('UN')
        p = _enc(e[1][0], depth, G, trace)
        q = _enc(('S', e[1][1:]), depth, G, trace)
        return _log(trace, 'cons', [p, q], aug_cons(p, q))
    raise ValueError("encode expects a resource term")


_SORT_ARENA = {'base': 'o', 'value': 'U', 'bag': 'U', 'stream': 'UN'}


def decode(q: Aug, G=(), sort: str = 'value'):
    validate(q)
    if _SORT_ARENA.get(sort) != q.right:
        raise AugmentationError(f"sort {sort!r} does not match the arena of q")
    return _dec(q, 0, frozenset(G), sort)


def _var(x, i, depth, G):
    if x[0] == 'f':
        if x[1] not in G:
            raise AugmentationError(f"undeclared sequence variable {x[1]!r}")
        return ('F', x[1], i)
    return ('B', depth - 1 - x[1], i)


def _dec(q, depth, G, sort):
    if sort == 'base':
        x, i, p = unlift_box(q)
        return ('A', _var(x, i, depth, G), _dec(p, depth, G, 'stream'))
    if sort == 'value':
        if len(q.roots()) != 1:
            raise AugmentationError("a value needs a pointed augmentation")
        return ('L', _dec(uncurry_aug(('b', depth), q), depth + 1, G, 'base'))
    if sort == 'bag':
        parts = [canonical(_aug_restrict(q, _tree_events(q, r))) for r in q.roots()]
        return bag(_dec(p, depth, G, 'value') for p in parts)
    if not len(q):
        return ('S', ())
    first, rest = aug_uncons(q)
    return stream((_dec(first, depth, G, 'bag'),) + _dec(rest, depth, G, 'stream')[1])


def _tree_events(q: Aug, r):
    return [e for e in range(len(q)) if e == r or r in _ancestors(q.dyn, e)]


# -- text output ----------------------------------------------------------------------

def _label(a) -> str:
    side, x = a
    if side == 2:
        return f"R {x}" if x == 'q' else f"R {x}"
    v, (i, l) = x
    name = v[1] if v[0] == 'f' else f"#{v[1]}"
    return f"L {name}[{i}] {l}"


def export_dot(q: Aug, name: str = 'aug') -> str:
    """DOT digraph: solid edges for the dynamic order, dashed for the static one."""
    lines = [f"digraph {name} {{"]
    for e, a in enumerate(q.display):
        sign = '+' if polarity(a, q.right) == '+' else '-'
        label = f"{_label(a)} {sign}".replace('"', "'")
        lines.append(f'  e{e} [label="{label}"];')
    for e, p in enumerate(q.dyn):
        if p >= 0:
            lines.append(f"  e{p} -> e{e};")
    for e, p in enumerate(q.static):
        if p >= 0:
            lines.append(f"  e{p} -> e{e} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def serialize(q: Aug) -> str:
    """One event per line: id, dynamic parent, static parent, display."""
    out = [f"# arena {q.right}"]
    for e in range(len(q)):
        out.append(f"{e} {q.dyn[e]} {q.static[e]} {q.display[e]!r}")
    return "\n".join(out) + "\n"
