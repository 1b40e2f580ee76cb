import pytest

from artifact.separation import (IDENTITY, Apply, Subst, apply_transform, head_normal_form,
                                 head_normalizable, print_transform, proj, rho, separate)
from artifact.syntax import Abs, App, OMEGA, Var, alpha_eq, parse_lambda as L, print_lambda
from artifact.taylor import Truncation

T = Truncation(12, 2)


def _nf(M, fuel=100):
    # full normal form by repeated head normalization of arguments
    r = head_normal_form(M, fuel)
    assert r is not None
    M = r[0]
    names = []
    while isinstance(M, Abs):
        names.append(M.name)
        M = M.body
    args = []
    while isinstance(M, App):
        args.append(_nf(M.arg, fuel))
        M = M.fun
    for a in reversed(args):
        M = App(M, a)
    for n in reversed(names):
        M = Abs(n, M)
    return M


def test_rho():
    assert alpha_eq(rho(0), L(r'\y.y'))
    assert alpha_eq(rho(1), L(r'\a.\y.y a'))
    M = apply_transform(rho(2), [Apply(Var('A')), Apply(Var('B')), Apply(IDENTITY)])
    assert alpha_eq(_nf(M), L('A B'))


def test_proj():
    assert alpha_eq(proj(1, 1), L(r'\a.a'))
    assert alpha_eq(proj(2, 1), L(r'\a.\b.a'))
    M = apply_transform(proj(3, 2), [Apply(Var('A')), Apply(Var('B')), Apply(Var('C'))])
    assert _nf(M) == Var('B')
    with pytest.raises(ValueError):
        proj(2, 3)


@pytest.mark.parametrize('k', [1, 2, 3, 4])
def test_rho_applied_then_identity(k):
    args = [L(r'\u.u'), L(r'\u.\v.u'), L(r'\u.u u'), L(r'\u.\v.v')][:k]
    M = apply_transform(rho(k), [Apply(a) for a in args] + [Apply(IDENTITY)])
    expected = args[0]
    for a in args[1:]:
        expected = App(expected, a)
    assert alpha_eq(_nf(M), _nf(expected))


def test_apply_transform():
    assert apply_transform(Var('x'), [Apply(Var('y'))]) == L('x y')
    assert apply_transform(Var('x'), [Subst('x', IDENTITY)]) == IDENTITY
    M = apply_transform(L(r'\x.\y.x'), [Apply(IDENTITY), Apply(OMEGA)])
    assert alpha_eq(head_normal_form(M, 10)[0], IDENTITY)


def test_head_normalizable():
    assert head_normalizable(L(r'\x.x'), 0) == ('yes', 0)
    assert head_normalizable(OMEGA, 100) == ('exhausted', 100)
    assert head_normalizable(L(r'(\x.x) y'), 1) == ('yes', 1)


def test_transform_printing():
    assert print_transform([Apply(IDENTITY), Apply(OMEGA)]) == r'@(\z.z) @(Ω)'
    assert print_transform([Subst('y', OMEGA)]) == '{y:=Ω}'
    assert print_lambda(OMEGA) == 'Ω'


def _check(M, N, r, fuel=200):
    a = head_normalizable(apply_transform(M, r.transform), fuel)[0]
    b = head_normalizable(apply_transform(N, r.transform), fuel)[0]
    assert (a, b) == (('yes', 'exhausted') if r.winner == 1 else ('exhausted', 'yes'))


def test_separate_examples():
    M, N = L(r'\x.\y.x'), L(r'\x.\y.y')
    r = separate(M, N, T)
    assert str(r) == r'@(\z.z) @(Ω)' and r.winner == 1
    _check(M, N, r)
    r = separate(Var('x'), Var('y'), T)
    assert str(r) == '{y:=Ω}' and r.winner == 1
    assert separate(M, M, T) is None


@pytest.mark.parametrize('left,right', [
    (r'\x.x', r'\x.\y.y'),
    (r'\x.x x', r'\x.x (x x)'),
    (r'\x.x (\y.y)', r'\x.x (\y.\z.z)'),
    (r'\x.x x x', r'\x.x x'),
    (r'\f.\x.f (f x)', r'\f.\x.f x'),
    (r'\x.\y.x y y', r'\x.\y.x y'),
])
def test_separation_is_sound(left, right):
    M, N = L(left), L(right)
    r = separate(M, N, T)
    assert r is not None
    _check(M, N, r)


def test_indistinguishable_terms_are_not_separated():
    assert separate(L(r'\x.x'), L(r'\x.\y.x y'), T) is None
