import epq
import pytest

LOOP = """signature E/2
universe a
tuple E a a
"""

EDGE = """signature E/2
universe a b
tuple E a b
"""


def test_eval_strategies_agree():
    s = epq.parse_formula("exists x . E(x,x)")
    b = epq.parse_structure(LOOP)
    for strategy in ("naive", "kvar", "dnf-hom", "pp-reduction"):
        verdict, stats = epq.evaluate(s, b, strategy)
        assert verdict is True
    verdict, _ = epq.evaluate(s, epq.parse_structure(EDGE), "naive")
    assert verdict is False


def test_homomorphism_and_core():
    a = epq.parse_structure(EDGE)
    b = epq.parse_structure(LOOP)
    assert epq.find_homomorphism(a, b) == {"a": "a", "b": "a"}
    assert epq.find_homomorphism(b, a) is None
    assert len(epq.core(a)) == 2


def test_normal_form():
    s = epq.parse_formula("exists x . (E(x,x) | exists y . E(x,y))")
    assert len(epq.to_pp_disjunction(s)) == 2
    members = epq.m_normalize(s)
    assert [str(m) for m in members] == ["exists x . exists y . E(x,y)"]


def test_treewidth_of_k4():
    text = "signature E/2\nuniverse 1 2 3 4\n" + "".join(
        f"tuple E {i} {j}\n" for i in range(1, 5) for j in range(1, 5) if i < j)
    assert epq.treewidth(epq.parse_structure(text)) == 3


def test_sat_reduction_unsatisfiable():
    sentence, structure = epq.reduce_sat("p cnf 1 2\n1 0\n-1 0\n", "unary")
    assert epq.evaluate(sentence, structure, "dnf-hom")[0] is False


def test_gdnf_product():
    g = "arity 2\nblock {a b} {c}\n"
    h = "arity 2\nblock {x} {y z}\n"
    assert epq.gdnf_to_explicit(epq.gdnf_product(g, h)) == [
        ["a|x", "c|y"], ["a|x", "c|z"], ["b|x", "c|y"], ["b|x", "c|z"]]


def test_errors_are_python_exceptions():
    with pytest.raises(ValueError):
        epq.parse_formula("exists x . E(x")
    with pytest.raises(ValueError):
        epq.evaluate(epq.parse_formula("exists x . E(x,x)"), epq.parse_structure(LOOP), "bogus")


def test_cli_round_trip():
    code, out, err = epq.run_cli(["hn", "--n", "2", "--format", "json"])
    assert code == 0
    assert '"variables":20' in out
