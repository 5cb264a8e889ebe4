import pytest

from hallforge.errors import InvalidPartialIso, NotAHomomorphism, ParseError
from hallforge.groups.catalog import catalog
from hallforge.groups.specfile import (format_group, load_group, parse_amalgam_spec,
                                       parse_automorphism, parse_group, parse_map,
                                       parse_partial_iso, parse_word)

GROUP_FILE = """
group G   # the dihedral group of the square
degree 4
gen a (1 2 3 4)
gen (1 2)
"""

SPEC = """
group A catalog:C2
group B catalog:C4
group C catalog:C6

embed f A B
map x -> x^2
embed g A C
map x -> x^3
"""


def test_parse_group_names_generators():
    G = parse_group(GROUP_FILE)
    assert G.generator_names == ("a", "y")
    assert G.order == 8
    assert G.name == "G"


def test_parse_word():
    G = parse_group(GROUP_FILE)
    assert str(parse_word(G, "y a")) == "(1 3 4)"
    assert parse_word(G, "y * a") == parse_word(G, "y a")
    assert parse_word(G, "a^-1") == parse_word(G, "a^3")
    assert parse_word(G, "(a y)^2").is_identity
    assert parse_word(G, "1").is_identity
    assert parse_word(G, "e").is_identity


@pytest.mark.parametrize("text", ["b", "a^", "(a y", "a)", ""])
def test_parse_word_rejects(text):
    with pytest.raises(ParseError):
        parse_word(parse_group(GROUP_FILE), text)


@pytest.mark.parametrize("text", ["gen (1 2)", "degree 3\ngen e (1 2)",
                                  "degree 3\ngen a (1 2)\ngen a (2 3)", "degree three",
                                  "group G\ngen (1 2)", "degree 3\norder 6"])
def test_parse_group_rejects(text):
    with pytest.raises(ParseError):
        parse_group(text)


def test_catalog_reference():
    assert parse_group("catalog:Q8").order == 8
    assert load_group("S4").order == 24
    assert load_group("catalog:A5").order == 60


def test_format_group_reads_back(tmp_path):
    G = parse_group(GROUP_FILE)
    path = tmp_path / "square.grp"
    path.write_text(format_group(G))
    H = load_group(str(path))
    assert H.generators == G.generators
    assert H.generator_names == G.generator_names


def test_parse_map_and_automorphism():
    C2, C4 = catalog("C2"), catalog("C4")
    f = parse_map(C2, C4, "map x -> x^2")
    assert f.injective
    with pytest.raises(NotAHomomorphism):
        parse_map(C2, C4, "map x -> x")
    inv = parse_automorphism(C4, "map x -> x^3")
    assert inv(C4.generators[0]) == C4.generators[0] ** -1
    with pytest.raises(ParseError):
        parse_map(C2, C4, "x -> x^2")


def test_parse_partial_iso():
    C6 = catalog("C6")
    x = C6.generators[0]
    psi = parse_partial_iso("domain x^2\ncodomain x^4\nmap x^2 -> x^4", C6)
    assert psi(x ** 2) == x ** 4
    assert parse_partial_iso("map x^3 -> x^3; map x^2 -> x^2", C6).domain.order == 6
    assert parse_partial_iso("", C6).domain.order == 1
    with pytest.raises(InvalidPartialIso):
        parse_partial_iso("domain x^3\nmap x^2 -> x^4", C6)
    with pytest.raises(InvalidPartialIso):
        parse_partial_iso("map x -> x^2", C6)


def test_parse_amalgam_spec():
    spec = parse_amalgam_spec(SPEC)
    assert list(spec.groups) == ["A", "B", "C"]
    assert [e[:3] for e in spec.embeddings] == [("f", "A", "B"), ("g", "A", "C")]
    f = spec.embeddings[0][3]
    assert f(spec.groups["A"].generators[0]) == spec.groups["B"].generators[0] ** 2
    assert spec.autos == {"A": [], "B": [], "C": []}


def test_parse_amalgam_spec_inline_group_and_autos():
    text = """
    group A catalog:C3
    group S
    degree 3
    gen r (1 2 3)
    gen t (1 2)
    auto A
    map x -> x^2
    auto S
    map r -> r^2
    map t -> t
    embed f A S
    map x -> r
    """
    spec = parse_amalgam_spec(text)
    assert spec.groups["S"].order == 6
    assert len(spec.autos["A"]) == 1 and len(spec.autos["S"]) == 1
    assert spec.autos["S"][0](spec.groups["S"].generators[0]) == \
        spec.groups["S"].generators[0] ** 2


def test_parse_amalgam_spec_group_file(tmp_path):
    (tmp_path / "square.grp").write_text(GROUP_FILE)
    spec = parse_amalgam_spec("group D square.grp\n", str(tmp_path))
    assert spec.groups["D"].order == 8


@pytest.mark.parametrize("text", [
    "map x -> x",
    "group A catalog:C2\ngroup A catalog:C3",
    "group A catalog:C2\nembed f A B\nmap x -> x",
    "group A catalog:C2\nembed f A\n",
    "degree 3",
    "hello",
])
def test_parse_amalgam_spec_rejects(text):
    with pytest.raises(ParseError):
        parse_amalgam_spec(text)
