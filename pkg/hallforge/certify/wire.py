"""Certificate wire models and their canonical JSON form."""

import json
from typing import Dict, List, Literal

import pydantic

from hallforge import config
from hallforge.errors import CertificateError

KINDS = ("extension", "amalgam", "equivariant-amalgam", "commuting", "root",
         "hall-tower", "power-tower")
CHECKS = ("equal", "distinct", "generates", "symmetric")


class NamedPerm(pydantic.BaseModel):
    degree: int
    cycles: str


class PermTable(pydantic.BaseModel):
    """Permutations of one degree, listed in a canonical element order."""
    degree: int
    perms: List[str]


class EquationFamily(pydantic.BaseModel):
    """One family of equations, checked for every assignment of its variables.

    Attributes:
        check: "equal" compares `lhs` and `rhs`; "distinct" requires the
            values of `lhs` to be pairwise different; "generates" requires
            the permutation table `table` to be exactly the group generated
            by `generators`; "symmetric" requires `generators` to be the
            standard generators of Sym(n), `claim` to name the decimal n!,
            and every value of each word in `members` to have degree n.
        variables: Quantifier domains, as explicit index lists.
        orientation: How conjugation is written in this family, when it is.
    """
    name: str
    source: str = ""
    check: Literal["equal", "distinct", "generates", "symmetric"]
    lhs: str = ""
    rhs: str = ""
    variables: Dict[str, List[int]] = {}
    generators: List[str] = []
    members: List[str] = []
    table: str = ""
    claim: str = ""
    orientation: str = ""


class Payload(pydantic.BaseModel):
    """Named permutations, permutation tables, index tables and order claims.

    Tables indexed by a group are listed in that group's canonical order.
    """
    perms: Dict[str, NamedPerm] = {}
    perm_tables: Dict[str, PermTable] = {}
    index_tables: Dict[str, List[int]] = {}
    data: Dict[str, str] = {}


class Certificate(pydantic.BaseModel):
    """A construction record.

    Attributes:
        inputs: The command inputs, as given.
        notes: Labels for readers (construction route, realization,
            stage degrees). The verifier never reads them.
        payload: Everything the equations refer to; every entry is used by
            at least one family.
    """
    kind: Literal["extension", "amalgam", "equivariant-amalgam", "commuting",
                  "root", "hall-tower", "power-tower"]
    version: int = config.CERTIFICATE_VERSION
    inputs: Dict[str, str] = {}
    notes: Dict[str, str] = {}
    payload: Payload = pydantic.Field(default_factory=Payload)
    equations: List[EquationFamily] = []


def emit_certificate(cert: Certificate) -> str:
    """Canonical JSON: sorted keys, no insignificant whitespace.

    Raises:
        CertificateError: a family refers to a table the payload lacks.
    """
    payload = cert.payload
    for family in cert.equations:
        if family.table and family.table not in payload.perm_tables:
            raise CertificateError(
                f"family {family.name!r} refers to missing table {family.table!r}")
        if family.claim and family.claim not in payload.data:
            raise CertificateError(
                f"family {family.name!r} refers to missing claim {family.claim!r}")
    for name, table in payload.perm_tables.items():
        if table.degree < 1:
            raise CertificateError(f"table {name!r} has degree {table.degree}")
    return json.dumps(cert.model_dump(mode="json"), sort_keys=True,
                      separators=(",", ":"), ensure_ascii=False)


def parse_certificate(text: str) -> Certificate:
    """Parses certificate JSON.

    Raises:
        CertificateError: malformed JSON, schema violations, unknown kind
            or unsupported version.
    """
    try:
        raw = json.loads(text)
    except (json.JSONDecodeError, TypeError) as e:
        raise CertificateError(f"certificate is not JSON: {e}") from e
    if isinstance(raw, dict) and raw.get("version") not in (None, config.CERTIFICATE_VERSION):
        raise CertificateError(f"unsupported certificate version {raw.get('version')!r}")
    try:
        return Certificate.model_validate(raw)
    except pydantic.ValidationError as e:
        raise CertificateError(f"malformed certificate: {e}") from e
