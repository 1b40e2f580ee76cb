import random

from hypothesis import given, settings, strategies as st

from artifact.rewrite import (big_step_reducts, erase, lambda_single, normalize,
                              normalize_with_strategy, shift_up, small_step_reducts, subst_bag,
                              subst_stream)
from artifact.syntax import (Sum, bag, fvar, parse_resource as P, random_resource, size,
                             stream)

seeds = st.integers(min_value=0, max_value=10 ** 6)
X = fvar('x')
XS = ('F', 'x')


def S(*terms):
    return Sum({P(t): 1 for t in terms})


def test_subst_bag_variable_cases():
    n = P(r'\y. n.0 ()')
    assert subst_bag(X, bag([n]), X) == Sum.single(n)
    assert subst_bag(fvar('y'), bag(), X) == Sum.single(fvar('y'))
    assert not subst_bag(X, bag(), X)


def test_subst_bag_distributes_over_occurrences():
    m, n = P(r'\a. m.0 ()'), P(r'\a. n.0 ()')
    got = subst_bag(P(r'x.0 [\y. x.0 ()] :: ()'), bag([m, n]), X)
    assert got == S(r'(\a. m.0 ()) [\y. (\b. n.0 ()) ()] :: ()',
                    r'(\a. n.0 ()) [\y. (\b. m.0 ()) ()] :: ()')


def test_subst_stream():
    assert subst_stream(P('z.0 ()'), stream(), XS) == S('z.0 ()')
    m = P(r'\a. m.0 ()')
    assert subst_stream(P('x.0 ()'), stream([bag([m])]), XS) == Sum.single(P(r'(\a. m.0 ()) ()'))
    assert not subst_stream(P('x.0 ()'), stream(), XS)


def test_shift_and_erase():
    assert shift_up(P('x.0 ()'), XS) == P('x.1 ()')
    assert erase(P('z.0 ()'), XS) == S('z.0 ()')
    assert not erase(P('x.2 ()'), XS)


def test_lambda_single():
    assert lambda_single(X, P(r'\y. x.0 ()')) == P(r'\y. y.0 ()')
    assert lambda_single(X, P(r'\y. z.0 ()')) == P(r'\y. z.0 ()')
    assert lambda_single(X, P(r'\y. x.0 [\z. y.0 ()] :: ()')) == \
        P(r'\y. y.0 [\z. y.1 ()] :: ()')


def test_small_step_examples():
    e = P(r'(\x. z.0 ()) ()')
    reducts = small_step_reducts(e)
    assert S('z.0 ()') in reducts and Sum.single(e) in reducts
    assert small_step_reducts(P(r'\y. z.0 ()')) == set()


def test_big_step_examples():
    e = P(r'(\x. x.0 ()) [\y. z.0 ()] :: ()')
    assert big_step_reducts(e) == {S(r'(\y. z.0 ()) ()')}
    assert big_step_reducts(P(r'(\x. x.0 ()) ()')) == {Sum.zero()}
    assert big_step_reducts(P(r'\y. z.0 ()')) == set()


def test_normalize_examples():
    assert normalize(P(r'(\x. x.0 ()) [\y. z.0 ()] :: ()')) == S('z.0 ()')
    assert normalize(P(r'\y. z.0 ()')) == S(r'\y. z.0 ()')
    assert not normalize(P(r'(\x. x.0 ()) ()'))


def test_normalize_is_linear():
    # one occurrence cannot consume two copies
    assert not normalize(P(r'(\x. x.0 ()) [\a. z.0 (), \a. z.0 ()] :: ()'))
    # only the placement with the projecting value in head position survives
    e = P(r'(\x. x.0 [\u. x.0 ()] :: ()) [\a. a.0 (), \a. z.0 ()] :: ()')
    assert normalize(e) == S('z.0 ()')


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_big_steps_shrink_terms(seed):
    e = random_resource(random.Random(seed), 12, 2)
    for U in big_step_reducts(e):
        assert all(size(t) < size(e) for t in U)


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_strategies_agree(seed):
    e = random_resource(random.Random(seed), 12, 2)
    a, _ = normalize_with_strategy(e, 'leftmost')
    b, _ = normalize_with_strategy(e, 'random', seed=seed)
    assert a == b == normalize(e)
