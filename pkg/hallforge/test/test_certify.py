import json
import random
import re

import pytest

from hallforge.certify import build
from hallforge.certify.verify import (EvalError, MAX_REPORTED, mul, power, read_cycles,
                                      verify, verify_certificate)
from hallforge.certify.wire import (Certificate, EquationFamily, NamedPerm, Payload,
                                    PermTable, emit_certificate, parse_certificate)
from hallforge.constructions.amalgam import amalgamate, equivariant_amalgamate
from hallforge.constructions.hrushovski import hrushovski_extend
from hallforge.constructions.roots import commuting_extension, root_extension
from hallforge.constructions.tower import (generic_power_tower, hall_tower,
                                           stage_conjugacy_check)
from hallforge.errors import CertificateError
from hallforge.groups.catalog import catalog
from hallforge.groups.hom import (EquivariantSystem, inversion_automorphism,
                                  make_homomorphism, make_partial_iso)


def _extension():
    C6 = catalog("C6")
    x = C6.generators[0]
    psi = make_partial_iso(C6, [x ** 2], [x ** 4])
    return build.extension_certificate(hrushovski_extend(C6, [psi]))


def _amalgam():
    A, B, C = catalog("C2"), catalog("C4"), catalog("C6")
    f = make_homomorphism(A, B, [B.generators[0] ** 2])
    g = make_homomorphism(A, C, [C.generators[0] ** 3])
    return build.amalgam_certificate(amalgamate(f, g))


def _hall():
    tower = hall_tower(2)
    return build.hall_tower_certificate(tower, [stage_conjugacy_check(tower, 0)])


def _power():
    C3 = catalog("C3")
    seed = EquivariantSystem(C3, [inversion_automorphism(C3)])
    return build.power_tower_certificate(generic_power_tower(2, 1, seed, ("C2",)), 2, ("C2",))


@pytest.fixture
def certificates(c4_pair, equivariant_instance):
    A, B, alpha, beta = c4_pair
    return {
        "extension": _extension(),
        "amalgam": _amalgam(),
        "equivariant": build.equivariant_certificate(
            equivariant_amalgamate(*equivariant_instance)),
        "commuting": build.commuting_certificate(commuting_extension(A, B, alpha, beta)),
        "root": build.root_certificate(root_extension(A, B, alpha, beta, 2)),
        "hall": _hall(),
        "power": _power(),
    }


def test_read_cycles_and_products():
    assert read_cycles("(1 2 3)", 3) == (1, 2, 0)
    assert read_cycles("()", 2) == (0, 1)
    assert mul(read_cycles("(1 2)", 3), read_cycles("(2 3)", 3)) == read_cycles("(1 3 2)", 3)
    assert power(read_cycles("(1 2 3)", 3), -1) == read_cycles("(1 3 2)", 3)
    with pytest.raises(EvalError):
        mul((0, 1), (0, 1, 2))
    for text in ("(1 4)", "(1 2)(2 3)", "1 2", ""):
        with pytest.raises(CertificateError):
            read_cycles(text, 3)


def test_emit_is_canonical():
    cert = _extension()
    text = emit_certificate(cert)
    assert emit_certificate(parse_certificate(text)) == text
    assert text == emit_certificate(_extension())
    assert text == json.dumps(json.loads(text), sort_keys=True, separators=(",", ":"),
                              ensure_ascii=False)


def test_parse_rejects():
    text = emit_certificate(_amalgam())
    raw = json.loads(text)
    raw["version"] = 99
    with pytest.raises(CertificateError):
        parse_certificate(json.dumps(raw))
    raw["version"] = 1
    raw["kind"] = "wreath"
    with pytest.raises(CertificateError):
        parse_certificate(json.dumps(raw))
    with pytest.raises(CertificateError):
        parse_certificate("{not json")
    with pytest.raises(CertificateError):
        verify_certificate('{"kind": "amalgam", "payload": {"perms": '
                           '{"p": {"degree": 2, "cycles": "(1 5)"}}}}')


def test_emit_rejects_missing_table():
    cert = Certificate(kind="amalgam", equations=[
        EquationFamily(name="G", check="generates", table="nope")])
    with pytest.raises(CertificateError):
        emit_certificate(cert)


def test_empty_certificate_passes_with_warning():
    report = verify(Certificate(kind="commuting"))
    assert report.passed
    assert report.warning == "certificate has no equations"
    assert "warning" in report.summary()


def test_symmetric_and_distinct_checks():
    payload = Payload(
        perms={"t": NamedPerm(degree=3, cycles="(1 2)"),
               "c": NamedPerm(degree=3, cycles="(1 2 3)")},
        perm_tables={"T": PermTable(degree=3, perms=["()", "(1 2)", "()"])},
        data={"order_S": "6", "wrong": "5"})
    cert = Certificate(kind="extension", payload=payload, equations=[
        EquationFamily(name="S", check="symmetric", generators=["t", "c"],
                       members=["T[x]"], variables={"x": [0, 1, 2]}, claim="order_S"),
        EquationFamily(name="S_swapped", check="symmetric", generators=["c", "t"],
                       claim="order_S"),
        EquationFamily(name="S_wrong", check="symmetric", generators=["t", "c"],
                       claim="wrong"),
        EquationFamily(name="distinct_ok", check="distinct", lhs="T[x]",
                       variables={"x": [0, 1]}),
        EquationFamily(name="distinct_bad", check="distinct", lhs="T[x]",
                       variables={"x": [0, 1, 2]}),
    ])
    report = verify(cert)
    failed = {f.name for f in report.failed_families}
    assert failed == {"S_swapped", "S_wrong", "distinct_bad"}


def test_generates_check():
    payload = Payload(
        perms={"c": NamedPerm(degree=3, cycles="(1 2 3)")},
        perm_tables={"C": PermTable(degree=3, perms=["()", "(1 2 3)", "(1 3 2)"]),
                     "short": PermTable(degree=3, perms=["()", "(1 2 3)"])},
        data={"three": "3", "two": "2"})
    cert = Certificate(kind="amalgam", payload=payload, equations=[
        EquationFamily(name="ok", check="generates", table="C", generators=["c"],
                       claim="three"),
        EquationFamily(name="short", check="generates", table="short",
                       generators=["c"], claim="two"),
        EquationFamily(name="claim", check="generates", table="C", generators=["c"],
                       claim="two"),
    ])
    report = verify(cert)
    assert [f.name for f in report.failed_families] == ["short", "claim"]


def test_violations_are_capped():
    payload = Payload(perms={"p": NamedPerm(degree=2, cycles="(1 2)"),
                             "e": NamedPerm(degree=2, cycles="()")},
                      perm_tables={"T": PermTable(degree=2, perms=["(1 2)"] * 10)})
    cert = Certificate(kind="amalgam", payload=payload, equations=[
        EquationFamily(name="bad", check="equal", lhs="T[x]", rhs="e",
                       variables={"x": list(range(10))})])
    family = verify(cert).families[0]
    assert family.failures == 10
    assert len(family.violations) == MAX_REPORTED


def test_unknown_names_fail_the_family():
    cert = Certificate(kind="amalgam", equations=[
        EquationFamily(name="bad", check="equal", lhs="missing", rhs="missing")])
    report = verify(cert)
    assert not report.passed


def test_tampered_conjugator_is_caught():
    cert = _extension()
    cert.payload.perm_tables["conjugators"].perms[0] = "()"
    report = verify_certificate(emit_certificate(cert))
    assert not report.passed
    assert "psi1_conjugation" in [f.name for f in report.failed_families]


def test_all_kinds_verify(certificates):
    for name, cert in certificates.items():
        report = verify_certificate(emit_certificate(cert))
        assert report.passed, f"{name}\n{report.summary()}"


def test_tampered_amalgam_conjugator_is_caught():
    cert = _amalgam()
    assert cert.notes["construction"] == "product"
    square = next(f for f in cert.equations if f.name == "square")
    assert square.source == "amalgamation (product route): r∘f = s∘g on A"
    assert cert.payload.perms["conjugator"].cycles != "()"
    cert.payload.perms["conjugator"].cycles = "()"
    report = verify(cert)
    assert "r_conjugated" in [f.name for f in report.failed_families]


def _family_text(cert) -> str:
    parts = []
    for family in cert.equations:
        parts += [family.lhs, family.rhs, family.table, family.claim]
        parts += family.generators + family.members
    return "\n".join(parts)


def test_every_payload_entry_is_checked(certificates):
    for kind, cert in certificates.items():
        text = _family_text(cert)
        payload = cert.payload
        for key in [*payload.perms, *payload.perm_tables, *payload.index_tables,
                    *payload.data]:
            assert re.search(rf"(?<![A-Za-z0-9_]){re.escape(key)}(?![A-Za-z0-9_])", text), \
                f"{kind}: {key} is never read"


def _closure_size(table, degree, gens) -> int:
    perms = [read_cycles(table[i], degree) for i in gens]
    identity = tuple(range(degree))
    seen, queue = {identity}, [identity]
    while queue:
        x = queue.pop()
        for g in perms:
            y = mul(x, g)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen)


def _assign(entries, i, value):
    def apply(payload):
        entries(payload)[i] = value
    return apply


def _mutations(cert, rng):
    """One callable per single-entry change that the families must reject."""
    payload = cert.payload
    sites = []
    for name in sorted(payload.perm_tables):
        perms = payload.perm_tables[name].perms
        for i, value in enumerate(perms):
            others = sorted(set(perms) - {value})
            if others:
                sites.append((f"table {name}[{i}]",
                              _assign(lambda p, n=name: p.perm_tables[n].perms, i,
                                      rng.choice(others))))
    for name in sorted(payload.index_tables):
        values = payload.index_tables[name]
        if name.endswith("_gens"):
            table = payload.perm_tables[name[:-len("_gens")]]
            for i, value in enumerate(values):
                kept = values[:i] + values[i + 1:]
                if value and _closure_size(table.perms, table.degree, kept) < len(table.perms):
                    sites.append((f"generator {name}[{i}]",
                                  _assign(lambda p, n=name: p.index_tables[n], i, 0)))
            continue
        for i, value in enumerate(values):
            others = sorted(set(values) - {value})
            if others:
                sites.append((f"index {name}[{i}]",
                              _assign(lambda p, n=name: p.index_tables[n], i,
                                      rng.choice(others))))
    for name in sorted(payload.perms):
        def widen(p, n=name):
            p.perms[n].degree += 1
        sites.append((f"perm {name}", widen))
    for name in sorted(payload.data):
        def bump(p, n=name):
            p.data[n] = str(int(p.data[n]) + 1)
        sites.append((f"data {name}", bump))
    return sites


def test_single_entry_mutations_are_caught(certificates):
    """Changing any one payload entry makes some family fail."""
    rng = random.Random(7)
    for kind, cert in certificates.items():
        sites = _mutations(cert, rng)
        assert len(sites) >= 20, kind
        for where, apply in rng.sample(sites, min(100, len(sites))):
            mutated = cert.model_copy(deep=True)
            apply(mutated.payload)
            assert not verify(mutated).passed, f"{kind}: {where}"
