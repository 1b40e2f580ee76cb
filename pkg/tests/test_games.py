import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from artifact import games as g
from artifact.relational import infer, random_value_type
from artifact.syntax import IOTA, parse_resource as P, random_normal

seeds = st.integers(min_value=0, max_value=10 ** 6)
TERM1 = r'\x. x.2 [\y. x.3 (), \y. x.2 ()] :: [] :: [\y. y.0 ()] :: ()'


# -- arena isomorphisms --

def test_fun_table():
    assert g.fun(()) == (2, ())
    assert g.fun((0, 4, 1)) == (1, (4, 1))
    assert g.fun((3, 1)) == (2, (2, 1))


def test_pack_table():
    assert g.pack((1, (5,))) == (0, (5,))
    assert g.pack((2, (3, (5,)))) == (4, (5,))


def test_curry_table():
    assert g.curry((1, (1, 'g'))) == (1, 'g')
    assert g.curry((1, (2, 'a'))) == (2, (1, 'a'))
    assert g.curry((2, 'b')) == (2, (2, 'b'))


addresses = st.lists(st.integers(min_value=0, max_value=5), max_size=5).map(tuple)


@given(addresses)
def test_isos_are_bijections(l):
    assert g.unfun(g.fun(l)) == l
    assert g.fold(g.unfold(l)) == l
    if l:
        a = (l[0], l[1:])
        assert g.pack(g.unpack(a)) == a


@given(st.sampled_from([(1, (1, 'g')), (1, (2, (3,))), (2, 'q'), (2, (0, ()))]))
def test_curry_round_trip(a):
    assert g.uncurry(g.curry(a)) == a


def test_malformed_addresses_rejected():
    with pytest.raises(ValueError):
        g.fun((-1,))
    with pytest.raises(ValueError):
        g.unpack(('a', ()))
    with pytest.raises(ValueError):
        g.fold((1, 'bad'))


# -- positions --

def _random_config(rng, n):
    parent, display = [], []
    for e in range(n):
        if e and rng.random() < 0.7:
            p = rng.randrange(e)
            parent.append(p)
            display.append(display[p] + (rng.randrange(2),))
        else:
            parent.append(-1)
            display.append(())
    return g.Config(tuple(parent), tuple(display))


def _permute(c, perm):
    inv = {old: new for new, old in enumerate(perm)}
    return g.Config(tuple(inv[c.parent[o]] if c.parent[o] >= 0 else -1 for o in perm),
                    tuple(c.display[o] for o in perm))


def _symmetric(a, b):
    if len(a) != len(b):
        return False
    for perm in itertools.permutations(range(len(a))):
        if all(b.display[perm[e]] == a.display[e] and
               (a.parent[e] < 0 and b.parent[perm[e]] < 0 or
                a.parent[e] >= 0 and b.parent[perm[e]] == perm[a.parent[e]])
               for e in range(len(a))):
            return True
    return False


def test_canonical_empty():
    assert g.canonicalize_position(g.EMPTY_POS) == g.EMPTY_POS


def test_canonical_sibling_swap():
    a = g.Config((-1, 0, 0, 1), ((), (0,), (0,), (0, 1)))
    b = g.Config((-1, 0, 0, 2), ((), (0,), (0,), (0, 1)))
    assert g.canonicalize_position(a) == g.canonicalize_position(b)


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_canonical_form_matches_brute_force_symmetry(seed):
    rng = random.Random(seed)
    a = _random_config(rng, rng.randint(0, 6))
    perm = list(range(len(a)))
    rng.shuffle(perm)
    b = _permute(a, perm)
    assert g.canonicalize_position(a) == g.canonicalize_position(b)
    c = _random_config(rng, len(a))
    assert (g.canonicalize_position(a) == g.canonicalize_position(c)) == _symmetric(a, c)


def test_position_constructors():
    assert g.pos_bag([]) == g.EMPTY_POS
    x = g.kappa(random_value_type(random.Random(1), 5)[1])
    assert len(g.pos_arrow(x)) == len(x) + 1
    y = g.kappa(random_value_type(random.Random(2), 4))
    z = g.kappa(random_value_type(random.Random(3), 4)[1])
    assert len(g.pos_pack(g.pos_bag([y]), z)) == len(y) + len(z)
    assert g.pos_unpack(g.pos_pack(g.pos_bag([y]), z)) == (g.pos_bag([y]), z)


def test_kappa_examples():
    assert g.kappa(IOTA) == g.EMPTY_POS
    p = g.kappa(('V', IOTA))
    assert p == g.Config((-1,), ((),))


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_kappa_round_trips(seed):
    a = random_value_type(random.Random(seed), 12)
    p = g.kappa(a)
    assert g.kappa_inv(p, 'value') == a
    assert g.kappa(g.kappa_inv(p, 'value')) == p


# -- augmentations --

def test_lifting_and_currying_sizes():
    x = ('f', 'x')
    q = g.lift_box(x, 0, g.empty_aug('UN'))
    assert len(q) == 2
    assert [g.polarity(a, q.right) for a in q.display] == ['-', '+']
    # the called move is statically minimal; its dynamic predecessor is the initial move
    assert q.static == (-1, -1) and q.dyn == (-1, 0)
    lam = g.curry_aug(('b', 0), g.lift_box(('b', 0), 0, g.empty_aug('UN')))
    assert len(lam) == 2


def test_empty_bag_is_neutral():
    q = g.encode(P(r'\y. x.0 ()'), {'x'})
    assert g.aug_bag([]) == g.empty_aug('U')
    assert g.aug_bag([q, g.aug_bag([])]) == g.aug_bag([q])


def test_encode_examples():
    assert g.encode(IOTA) == g.empty_aug('UN')
    q = g.encode(P(r'\y. x.0 ()'), {'x'})
    assert len(q) == 2
    assert g.decode(q, {'x'}) == P(r'\y. x.0 ()')
    q = g.encode(P(r'\y. y.0 ()'))
    assert g.decode(q) == P(r'\y. y.0 ()')
    assert g.decode(g.empty_aug('UN'), (), 'stream') == IOTA


def test_term1():
    m = P(TERM1)
    q = g.encode(m)
    pols = [g.polarity(a, q.right) for a in q.display]
    assert len(q) == 8 and pols.count('-') == 4
    assert g.decode(q) == m


def test_encode_rejects_bad_input():
    with pytest.raises(ValueError):
        g.encode(P(r'(\x. x.0 ()) ()'))
    with pytest.raises(ValueError):
        g.encode(P(r'\y. x.0 ()'))


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_codec_round_trips_and_coherence(seed):
    m = random_normal(random.Random(seed), 12, 2)
    G = ('x', 'y')
    q = g.encode(m, G)
    assert g.validate(q) is q
    assert g.decode(q, G) == m
    # the right part of the desequentialization is κ of the type
    ctx, a = infer(m)
    d = g.desequentialize(q)
    right = [e for e in range(len(q)) if q.display[e][0] == 2]
    keep = {e: k for k, e in enumerate(right)}
    pos = g.Config(tuple(keep[d.parent[e]] if d.parent[e] >= 0 else -1 for e in right),
                   tuple(d.display[e][1] for e in right))
    assert g.canonicalize_position(pos) == g.kappa(a)


def test_canonical_augmentation_ignores_labels():
    q = g.encode(P(TERM1))
    rng = random.Random(0)
    perm = list(range(len(q)))
    rng.shuffle(perm)
    inv = {old: new for new, old in enumerate(perm)}
    r = g.Aug(tuple(inv[q.dyn[o]] if q.dyn[o] >= 0 else -1 for o in perm),
              tuple(inv[q.static[o]] if q.static[o] >= 0 else -1 for o in perm),
              tuple(q.display[o] for o in perm), q.right)
    assert r != q and g.canonical(r) == q


def _two(dyn, static, display, right='o'):
    return g.Aug(dyn, static, display, right)


X0 = (1, (('f', 'x'), (0, ())))


@pytest.mark.parametrize('q', [
    _two((-1,), (-1,), (X0,)),                                  # positive minimal move
    _two((-1,), (-1,), ((2, 'q'),)),                            # negative maximal move
    _two((-1, 0), (-1, 0), ((2, 'q'), X0)),                     # static order off the arena
    _two((-1, 0, 0), (-1, -1, -1), ((2, 'q'), X0, X0)),         # two answers to one question
    _two((-1, 0), (-1, -1), ((2, 'q'), (2, 'bad'))),            # display outside the arena
])
def test_validator_rejects(q):
    with pytest.raises(g.AugmentationError):
        g.validate(q)


def test_validator_rejects_static_without_dynamic():
    # U-arena: ε then an answer (0,) statically below it but dynamically unrelated
    q = g.Aug((-1, -1), (-1, 0), ((2, ()), (2, (0,))), 'U')
    with pytest.raises(g.AugmentationError):
        g.validate(q)


def test_validator_rejects_discourteous_edge():
    # x called twice in a row: the second call hangs dynamically off the first
    # positive move without depending on it statically
    x1 = (1, (('f', 'x'), (1, ())))
    q = g.Aug((-1, 0, 1), (-1, -1, -1), ((2, 'q'), X0, x1), 'o')
    with pytest.raises(g.AugmentationError):
        g.validate(q)


def test_dot_export():
    assert g.export_dot(g.empty_aug('UN')) == "digraph aug {\n}\n"
    dot = g.export_dot(g.lift_box(('f', 'x'), 0, g.empty_aug('UN')))
    assert dot.count('[label=') == 2
    assert dot.count(' -> ') == 1 and 'dashed' not in dot
    q = g.encode(P(TERM1))
    dot = g.export_dot(q)
    assert dot.count('[label=') == 8 and len(q.roots()) == 1
    solid = [line for line in dot.splitlines() if '->' in line and 'dashed' not in line]
    assert len(solid) == 7


def test_serialize_lists_every_event():
    q = g.encode(P(TERM1))
    assert len(g.serialize(q).splitlines()) == 9
