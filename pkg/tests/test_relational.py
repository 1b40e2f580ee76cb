import random

import pytest
from hypothesis import given, settings, strategies as st

from artifact.relational import (STAR, eta_witness_for_type, fits, infer,
                                 parse_ctx, parse_type, print_ctx, print_type,
                                 random_value_type, subject_reduction_check, type_size,
                                 typecheck_lambda, typings_of_lambda, vtype)
from artifact.syntax import (OMEGA, Var, bag, fvar, parse_lambda as L, parse_resource as P,
                             random_resource, stream)
from artifact.taylor import T_h, Truncation, taylor_enum

A = parse_type('() -o o')
IDT = parse_type('([() -o o] :: ()) -o o')


def test_infer_examples():
    G, a = infer(P(r'\y. x.0 ()'))
    assert (print_ctx(G), print_type(a)) == ('x:[() -o o]', '() -o o')
    assert infer(P(r'(\x. x.0 ()) ()')) is None


def test_infer_ignores_bag_order_within_streams():
    m = r'\u. u.0 ()'
    m1 = P(rf'[\y. x.0 ()] :: [\y. x.0 [{m}] :: ()] :: ()')
    m2 = P(rf'[\y. x.0 [{m}] :: ()] :: [\y. x.0 ()] :: ()')
    G, a = infer(m1)
    assert infer(m2) == (G, a)
    assert a == stream([bag([A]), bag([A])])
    # x is used at ι ⊸ o and at [type(m)] :: ι ⊸ o
    assert G == ((fvar('x'), bag([A, vtype(stream([bag([IDT])]))])),)


def test_typecheck_examples():
    assert typecheck_lambda(((fvar('x'), bag([A])),), Var('x'), A)
    assert typecheck_lambda(STAR, L(r'\x.x'), IDT)
    assert not typecheck_lambda(STAR, L(r'\x.x'), A)


def test_typings_examples():
    assert (STAR, IDT) in typings_of_lambda(L(r'\x.x'), 2)
    assert typings_of_lambda(OMEGA, 4) == set()
    assert typings_of_lambda(Var('x'), 1) == {(((fvar('x'), bag([A])),), A)}


def test_eta_witnesses():
    x = fvar('x')
    assert eta_witness_for_type(x, A) == P(r'\y. x.0 ()')
    assert eta_witness_for_type(x, bag()) == bag()
    assert eta_witness_for_type(x, IDT) == P(r'\y. x.0 [\z. y.0 ()] :: ()')


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6))
def test_eta_witness_has_the_type(seed):
    a = random_value_type(random.Random(seed), 6)
    w = eta_witness_for_type(fvar('x'), a)
    assert infer(w) == (((fvar('x'), bag([a])),), a)


def test_type_printing_round_trip():
    for text in ['() -o o', '([() -o o] :: ()) -o o', '([] :: [() -o o, () -o o] :: ()) -o o']:
        assert print_type(parse_type(text)) == text
    G = parse_ctx('x:[() -o o], y:[() -o o, ([() -o o] :: ()) -o o]')
    assert parse_ctx(print_ctx(G)) == G


def test_bound_checks():
    assert type_size(IDT) == 2
    assert fits(IDT, 2) and not fits(IDT, 1)


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6))
def test_subject_reduction(seed):
    assert subject_reduction_check(random_resource(random.Random(seed), 12, 2))


def _taylor_typings(M, t, bound):
    out = set()
    for m in taylor_enum(T_h(M), t):
        r = infer(m)
        if r and fits(r[1], bound) and all(fits(a, bound) for _, b in r[0] for a in b[1]):
            out.add(r)
    return out


@pytest.mark.parametrize('term,t,count', [
    (r'\x.x', Truncation(6, 3), 4),
    (r'\x.\y.x', Truncation(6, 3), 3),
    (r'\x.x x', Truncation(6, 4), 5),
])
def test_typings_match_taylor_side_at_bound_4(term, t, count):
    M = L(term)
    T = typings_of_lambda(M, 4)
    assert len(T) == count
    assert T == _taylor_typings(M, t, 4)
    assert all(typecheck_lambda(G, M, a, 4) for G, a in T)


def test_empty_bag_derivation_for_arguments():
    # the argument gets the empty bag, so an unsolvable argument is harmless
    T = typings_of_lambda(L('x Ω'), 2)
    assert (((fvar('x'), bag([A])),), A) in T
    assert typecheck_lambda(((fvar('x'), bag([A])),), L('x Ω'), A)
