import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from artifact.syntax import (IOTA, ParseError, bag, base, bvar, fvar, isotropy_degree,
                             multiplicity, occurrences, parse_lambda, parse_resource,
                             partitionings, print_lambda, print_resource, random_resource,
                             size, stream, value, width, alpha_eq, OMEGA)

P = parse_resource
seeds = st.integers(min_value=0, max_value=10 ** 6)


def test_size_clauses():
    assert size(bvar(0, 0)) == 1
    assert size(IOTA) == 0
    assert size(P(r'\y. x.0 ()')) == 3


def test_width_is_largest_index_or_stream_length():
    assert width(P(r'\y. x.0 ()')) == 0
    assert width(P(r'\y. x.2 ()')) == 2
    assert width(P(r'\y. x.0 [] :: [] :: [\z. z.0 ()] :: ()')) == 3


def test_occurrences():
    x = fvar('x')
    assert occurrences(P('x.0 ()'), x) == 1
    assert occurrences(P(r'x.0 [\y. x.0 ()] :: ()'), x) == 2
    assert occurrences(P(r'\y. y.0 ()'), bvar(0, 0)) == 0


def _brute_isotropy(b):
    xs = b[1]
    return sum(1 for p in itertools.permutations(range(len(xs)))
               if all(xs[i] == xs[p[i]] for i in range(len(xs))))


def test_isotropy_degree():
    m, n = P(r'\y. x.0 ()'), P(r'\y. y.0 ()')
    assert isotropy_degree(bag()) == 1
    assert isotropy_degree(bag([m, m])) == 2
    assert isotropy_degree(bag([m, m, n])) == 2 == _brute_isotropy(bag([m, m, n]))


def test_multiplicity():
    assert multiplicity(fvar('x')) == 1
    assert multiplicity(P(r'\y. x.0 ()')) == 1
    assert multiplicity(P(r'\y. x.0 [\z. y.0 (), \z. y.0 ()] :: ()')) == 2


def test_partitionings():
    m, n = P(r'\y. x.0 ()'), P(r'\y. y.0 ()')
    assert list(partitionings(bag(), 2)) == [(bag(), bag())]
    assert len(list(partitionings(bag([m, n]), 2))) == 4
    parts = list(partitionings(bag([m, m]), 2))
    assert parts.count((bag([m]), bag([m]))) == 2


def test_parse_examples():
    e = P(r'\x. x.0 ()')
    assert e == value(base(bvar(0, 0), IOTA))
    text = r'\x. x.0 [\y. x.1 ()] :: ()'
    assert print_resource(P(text)) == text
    assert P(r'\x. x.0 [] :: ()') == P(r'\x. x.0 ()')


def test_stream_trailing_empty_bags_trimmed():
    assert stream([bag(), bag()]) == IOTA


def test_bag_is_order_insensitive():
    m, n = P(r'\y. x.0 ()'), P(r'\y. y.0 ()')
    assert bag([m, n]) == bag([n, m])


def test_alpha_equivalent_terms_are_identical():
    assert P(r'\x. x.0 ()') == P(r'\u. u.0 ()')


def test_parse_error_position():
    with pytest.raises(ParseError) as err:
        P(r'\x. x.0 [')
    assert err.value.pos == 9


def test_lambda_parser():
    M = parse_lambda(r'(\x.x x)(\x.x x)')
    assert M == OMEGA and parse_lambda('Ω') == OMEGA
    assert alpha_eq(parse_lambda(r'\x y.x'), parse_lambda(r'\a.\b.a'))
    assert print_lambda(parse_lambda(r'\f.\x.f (f x)')) == r'\f.\x.f (f x)'


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_print_parse_round_trip(seed):
    e = random_resource(random.Random(seed), 14, 3)
    assert P(print_resource(e)) == e


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_isotropy_matches_brute_force(seed):
    rng = random.Random(seed)
    pool = [P(r'\y. x.0 ()'), P(r'\y. y.0 ()'), P(r'\y. z.1 ()')]
    b = bag(rng.choice(pool) for _ in range(rng.randint(0, 5)))
    assert isotropy_degree(b) == _brute_isotropy(b)
