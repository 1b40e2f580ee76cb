"""Command-line front end.

Exit codes: 0 on success, 1 for a "distinct", "untypable" or "none" outcome,
2 on malformed input.
"""
from __future__ import annotations

import random
import sys
import time
from dataclasses import dataclass

import click

from . import games, relational, rewrite, separation, syntax, taylor
from .syntax import ParseError, parse_lambda, parse_resource, print_resource, print_sum


@dataclass(frozen=True)
class RunConfig:
    semiring: str = 'rat'
    max_size: int = 12
    max_width: int = 2
    fuel: int = 200
    seed: int = 0

    @property
    def truncation(self):
        return taylor.Truncation(self.max_size, self.max_width)


def _bounds(f):
    f = click.option('--semiring', type=click.Choice(['rat', 'bool']), default='rat',
                     show_default=True)(f)
    f = click.option('--size', 'max_size', type=click.IntRange(min=0), default=12,
                     show_default=True, help='truncation size bound')(f)
    f = click.option('--width', 'max_width', type=click.IntRange(min=0), default=2,
                     show_default=True, help='truncation width bound')(f)
    return f


def _fail(msg):
    click.echo(f"error: {msg}", err=True)
    sys.exit(2)


def _parse(fn, text):
    try:
        return fn(text)
    except ParseError as e:
        _fail(f"{e}\n  {text}\n  {' ' * e.pos}^")


@click.group()
def main():
    """Resource terms, extensional Taylor expansion, relational types and games."""


@main.command()
@click.argument('term')
def normalize(term):
    """Normal form of a resource term."""
    e = _parse(parse_resource, term)
    click.echo(print_sum(rewrite.normalize(e)))


@main.command()
@click.argument('term')
@click.option('--flavor', type=click.Choice(['eta', 'head']), default='eta', show_default=True)
@_bounds
def expand(term, flavor, semiring, max_size, max_width):
    """Truncated Taylor expansion of a λ-term, one "coeff * term" per line."""
    M = _parse(parse_lambda, term)
    h = taylor.T_eta(M) if flavor == 'eta' else taylor.T_h(M)
    w = taylor._weighted(h, taylor.Truncation(max_size, max_width))
    for m in sorted(w, key=taylor._order):
        c = True if semiring == 'bool' else w[m]
        click.echo(f"{syntax.format_coeff(c)} * {print_resource(m)}")


@main.command()
@click.argument('term')
@_bounds
def nt(term, semiring, max_size, max_width):
    """Truncated normal form of the Taylor expansion of a λ-term."""
    M = _parse(parse_lambda, term)
    click.echo(print_sum(taylor.nt_truncated(M, taylor.Truncation(max_size, max_width), semiring)))


@main.command()
@click.argument('left')
@click.argument('right')
@_bounds
def equiv(left, right, semiring, max_size, max_width):
    """Compare two λ-terms through their truncated NT."""
    M, N = _parse(parse_lambda, left), _parse(parse_lambda, right)
    v = taylor.equiv_T(M, N, taylor.Truncation(max_size, max_width), semiring)
    if not v.distinct:
        click.echo("indistinguishable-at-bound")
        return
    click.echo(str(v))
    sys.exit(1)


@main.command('type')
@click.argument('term')
def type_(term):
    """Context and type of a resource term."""
    e = _parse(parse_resource, term)
    r = relational.infer(e)
    if r is None:
        click.echo("untypable")
        sys.exit(1)
    G, a = r
    click.echo(f"({relational.print_ctx(G)} ; {relational.print_type(a)})")


@main.command()
@click.argument('term')
@click.option('--bound', type=click.IntRange(min=0), default=3, show_default=True)
@click.option('--check', 'check', nargs=2, default=None, metavar='CTX TYPE',
              help='check one judgement instead of listing typings')
def typelam(term, bound, check):
    """Typings of a λ-term whose types and contexts fit the bound."""
    M = _parse(parse_lambda, term)
    if check:
        G = _parse(relational.parse_ctx, check[0])
        a = _parse(relational.parse_type, check[1])
        ok = relational.typecheck_lambda(G, M, a, bound)
        click.echo("typable" if ok else "untypable")
        sys.exit(0 if ok else 1)
    rows = sorted(f"({relational.print_ctx(G)} ; {relational.print_type(a)})"
                  for G, a in relational.typings_of_lambda(M, bound))
    for r in rows:
        click.echo(r)
    if not rows:
        click.echo("untypable")
        sys.exit(1)


@main.command()
@click.argument('term')
@click.option('--dot', 'dot', type=click.Path(dir_okay=False, writable=True), default=None,
              help='write the DOT graph to PATH')
def game(term, dot):
    """Isogmentation of a normal resource term."""
    e = _parse(parse_resource, term)
    try:
        q = games.encode(e, syntax.free_names(e))
    except ValueError as err:
        _fail(str(err))
    if dot:
        with open(dot, 'w') as fh:
            fh.write(games.export_dot(q))
        click.echo(f"{len(q)} events written to {dot}")
    else:
        click.echo(games.serialize(q), nl=False)


@main.command()
@click.argument('left')
@click.argument('right')
@_bounds
@click.option('--fuel', type=click.IntRange(min=0), default=200, show_default=True)
def separate(left, right, semiring, max_size, max_width, fuel):
    """Böhm transformation making exactly one of the terms head-normalizable."""
    M, N = _parse(parse_lambda, left), _parse(parse_lambda, right)
    r = separation.separate(M, N, taylor.Truncation(max_size, max_width), fuel)
    if r is None:
        click.echo("none")
        sys.exit(1)
    click.echo(str(r))
    click.echo("first head-normalizes, second exhausts fuel" if r.winner == 1
               else "second head-normalizes, first exhausts fuel")


@main.command()
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--count', type=click.IntRange(min=1), default=50, show_default=True)
def selftest(seed, count):
    """Run quick property suites and print a pass/fail table."""
    suites = [
        ('diamond', _st_diamond),
        ('unique normal forms', _st_unique_nf),
        ('typable iff normalizable', _st_typing),
        ('codec round trip', _st_codec),
        ('kappa round trip', _st_kappa),
        ('parse/print round trip', _st_print),
    ]
    failed = 0
    for name, fn in suites:
        t0 = time.time()
        rng = random.Random(seed)
        bad = sum(1 for _ in range(count) if not fn(rng))
        failed += bool(bad)
        status = 'PASS' if not bad else f'FAIL ({bad}/{count})'
        click.echo(f"{name:<28} {status:<14} {time.time() - t0:6.2f}s")
    sys.exit(1 if failed else 0)


def _st_diamond(rng):
    return rewrite.diamond_holds(syntax.random_resource(rng, 10, 2))


def _st_unique_nf(rng):
    e = syntax.random_resource(rng, 12, 2)
    a, _ = rewrite.normalize_with_strategy(e, 'leftmost')
    b, _ = rewrite.normalize_with_strategy(e, 'random', seed=rng.randrange(10 ** 6))
    return a.as_dict() == b.as_dict()


def _st_typing(rng):
    e = syntax.random_resource(rng, 12, 2)
    return (relational.infer(e) is None) == (not rewrite.normalize(e))


def _st_codec(rng):
    m = syntax.random_normal(rng, 12, 2)
    G = syntax.free_names(m)
    return games.decode(games.encode(m, G), G, 'value') == m


def _st_kappa(rng):
    a = relational.random_value_type(rng, 12)
    return games.kappa_inv(games.kappa(a), 'value') == a


def _st_print(rng):
    e = syntax.random_resource(rng, 12, 2)
    return parse_resource(print_resource(e)) == e


if __name__ == '__main__':
    main()
