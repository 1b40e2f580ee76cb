from click.testing import CliRunner

from artifact.cli import main
from artifact.syntax import parse_resource, print_resource


def run(*args):
    return CliRunner().invoke(main, list(args))


def test_normalize():
    r = run('normalize', r'(\x. x.0 ()) [\y. z.0 ()] :: ()')
    assert r.exit_code == 0 and r.output == '1 * z.0 ()\n'
    r = run('normalize', r'\y. z.0 ()')
    assert parse_resource(r.output.strip()[4:]) == parse_resource(r'\y. z.0 ()')
    assert run('normalize', r'(\x. x.0 ()) ()').output == '0\n'


def test_parse_error_exit_code():
    r = run('normalize', r'(\x. x.0 ')
    assert r.exit_code == 2 and 'position 9' in r.output


def test_expand():
    r = run('expand', 'x', '--size', '3', '--width', '0')
    assert r.output == '1 * \\y. x.0 ()\n'
    assert run('expand', r'\x.x', '--size', '3', '--width', '0').output.count('\n') == 1
    assert run('expand', 'x', '--size', '0', '--width', '0').output == ''


def test_expand_output_parses_back():
    r = run('expand', r'\x.x x', '--size', '8', '--width', '1', '--flavor', 'head')
    for line in r.output.splitlines():
        coeff, term = line.split(' * ', 1)
        assert print_resource(parse_resource(term)) == term


def test_equiv():
    r = run('equiv', r'\x.x', r'\x.\y.x y')
    assert r.exit_code == 0 and r.output == 'indistinguishable-at-bound\n'
    r = run('equiv', r'\x.\y.x', r'\x.\y.y')
    assert r.exit_code == 1 and r.output.startswith('distinct')


def test_type():
    r = run('type', r'\y. x.0 ()')
    assert r.output == '(x:[() -o o] ; () -o o)\n' and r.exit_code == 0
    r = run('type', r'(\x. x.0 ()) ()')
    assert r.output == 'untypable\n' and r.exit_code == 1


def test_typelam():
    r = run('typelam', r'\x.x', '--bound', '2')
    assert r.output == '(* ; ([() -o o] :: ()) -o o)\n'
    assert run('typelam', 'Ω').exit_code == 1
    r = run('typelam', r'\x.x', '--check', '*', '() -o o')
    assert r.exit_code == 1


def test_separate():
    r = run('separate', r'\x.\y.x', r'\x.\y.y')
    assert r.exit_code == 0 and r.output.splitlines()[0] == r'@(\z.z) @(Ω)'
    assert 'first head-normalizes' in r.output
    r = run('separate', r'\x.x', r'\x.x')
    assert r.exit_code == 1 and r.output == 'none\n'


def test_game(tmp_path):
    term = r'\x. x.2 [\y. x.3 (), \y. x.2 ()] :: [] :: [\y. y.0 ()] :: ()'
    path = tmp_path / 'g.dot'
    r = run('game', term, '--dot', str(path))
    assert r.exit_code == 0
    assert path.read_text().count('[label=') == 8
    assert run('game', term).output.count('\n') == 9
    assert run('game', r'(\x. x.0 ()) ()').exit_code == 2


def test_runs_are_deterministic():
    a = run('nt', r'\f.\x.f (f x)', '--size', '10').output
    assert a == run('nt', r'\f.\x.f (f x)', '--size', '10').output


def test_selftest():
    r = run('selftest', '--count', '10')
    assert r.exit_code == 0 and 'FAIL' not in r.output
