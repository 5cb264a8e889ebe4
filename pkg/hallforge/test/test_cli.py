import json

import pytest

from hallforge.certify.verify import verify_certificate
from hallforge.cli import (EXIT_CONSTRUCTION, EXIT_OK, EXIT_USAGE, EXIT_VERIFY,
                           cli_dispatch)

EQUIVARIANT_SPEC = """
group A catalog:C3
group B catalog:S3
group C catalog:C6

auto A
map x -> x^2
auto B
map x -> x
map y -> y^2
auto C
map x -> x^5

embed f A B
map x -> y
embed g A C
map x -> x^2
"""


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_extend_then_verify(tmp_path):
    out = str(tmp_path / "ext.json")
    assert cli_dispatch(["extend", "--group", "C6", "--iso", "map x^2 -> x^4",
                         "--out", out]) == EXIT_OK
    assert cli_dispatch(["verify", out]) == EXIT_OK
    with open(out, encoding="utf-8") as handle:
        assert json.load(handle)["kind"] == "extension"


def test_extend_to_stdout(capsys):
    assert cli_dispatch(["extend", "--group", "S3"]) == EXIT_OK
    report = verify_certificate(capsys.readouterr().out)
    assert report.passed


def test_iso_from_file(tmp_path):
    iso = _write(tmp_path, "psi.iso", "domain x^2\nmap x^2 -> x^4\n")
    assert cli_dispatch(["extend", "--group", "C6", "--iso", iso,
                         "--out", str(tmp_path / "c.json")]) == EXIT_OK


def test_tampered_certificate_fails_verification(tmp_path):
    out = str(tmp_path / "ext.json")
    cli_dispatch(["extend", "--group", "C6", "--iso", "map x^2 -> x^4", "--out", out])
    with open(out, encoding="utf-8") as handle:
        raw = json.load(handle)
    raw["payload"]["perm_tables"]["conjugators"]["perms"][0] = "()"
    with open(out, "w", encoding="utf-8") as handle:
        json.dump(raw, handle)
    assert cli_dispatch(["verify", out]) == EXIT_VERIFY
    assert cli_dispatch(["verify", _write(tmp_path, "junk.json", "[1, 2")]) == EXIT_VERIFY


def test_amalgamate_plain_and_equivariant(tmp_path):
    spec = _write(tmp_path, "square.spec", EQUIVARIANT_SPEC)
    assert cli_dispatch(["amalgamate", "--spec", spec,
                         "--out", str(tmp_path / "plain.json")]) == EXIT_OK
    out = str(tmp_path / "eq.json")
    assert cli_dispatch(["amalgamate", "--spec", spec, "--equivariant",
                         "--out", out]) == EXIT_OK
    assert cli_dispatch(["verify", out]) == EXIT_OK


def test_amalgamate_rejects_non_injective(tmp_path):
    spec = _write(tmp_path, "bad.spec", "group A catalog:C2\ngroup B catalog:C4\n"
                  "group C catalog:C6\nembed f A B\nmap x -> x^2\n"
                  "embed g A C\nmap x -> e\n")
    assert cli_dispatch(["amalgamate", "--spec", spec]) == EXIT_CONSTRUCTION


def test_commute_and_root(tmp_path):
    common = ["--group", "C4", "--subgroup", "x^2", "--alpha", "map x^2 -> x^2",
              "--beta", "map x -> x^3"]
    assert cli_dispatch(["commute", *common, "--out", str(tmp_path / "c.json")]) == EXIT_OK
    out = str(tmp_path / "r.json")
    assert cli_dispatch(["root", *common, "--n", "2", "--out", out]) == EXIT_OK
    assert cli_dispatch(["verify", out]) == EXIT_OK


def test_root_hypothesis_failure():
    assert cli_dispatch(["root", "--group", "C3", "--subgroup", "x", "--alpha",
                         "map x -> x^2", "--beta", "map x -> x^2", "--n", "2"]) \
        == EXIT_CONSTRUCTION


def test_tower(tmp_path):
    out = str(tmp_path / "hall.json")
    assert cli_dispatch(["tower", "--kind", "hall", "--depth", "2", "--check-stage", "1",
                         "--out", out]) == EXIT_OK
    assert cli_dispatch(["verify", out]) == EXIT_OK
    assert cli_dispatch(["tower", "--kind", "power", "--depth", "1",
                         "--out", str(tmp_path / "power.json")]) == EXIT_OK


def test_catalog_lists_groups(capsys):
    assert cli_dispatch(["catalog"]) == EXIT_OK
    assert "Q8\torder 8" in capsys.readouterr().out


def test_degree_cap_option():
    assert cli_dispatch(["--degree-cap", "10", "extend", "--group", "C12"]) \
        == EXIT_CONSTRUCTION


@pytest.mark.parametrize("argv", [["frobnicate"], ["tower", "--kind", "wreath"],
                                  ["root", "--group", "C4", "--subgroup", "x^2",
                                   "--alpha", "map x^2 -> x^2", "--beta", "map x -> x^3",
                                   "--n", "0"],
                                  ["extend"]])
def test_usage_errors(argv):
    assert cli_dispatch(argv) == EXIT_USAGE


def test_unreadable_certificate_is_a_usage_error(tmp_path):
    assert cli_dispatch(["verify", str(tmp_path / "missing.json")]) == EXIT_USAGE


def test_stray_value_error_is_a_usage_error(monkeypatch):
    def bad_group(_name):
        raise ValueError("not a group")

    monkeypatch.setattr("hallforge.cli.load_group", bad_group)
    assert cli_dispatch(["extend", "--group", "C6"]) == EXIT_USAGE
