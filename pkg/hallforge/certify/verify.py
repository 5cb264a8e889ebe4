"""Independent certificate verifier.

Nothing here touches the construction code: permutations are plain tuples
of 0-based images with their own parsing and multiplication, and every
equation is evaluated from the payload alone.
"""

import dataclasses
import itertools
import logging
import math
import re
from typing import Dict, List, Optional, Tuple

from hallforge.certify.wire import Certificate, EquationFamily, parse_certificate
from hallforge.errors import CertificateError

logger = logging.getLogger(__name__)

MAX_REPORTED = 5

Perm = Tuple[int, ...]

_CYCLE_RE = re.compile(r"\(\s*(\d+(?:\s+\d+)*)?\s*\)")
_TOKEN_RE = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>-?\d+)"
                       r"|(?P<sym>[\^\[\](){}|#]))")


class EvalError(Exception):
    """A word could not be evaluated under an assignment."""


def read_cycles(text: str, degree: int) -> Perm:
    images = list(range(degree))
    seen = set()
    pos = 0
    text = text.strip()
    if not text:
        raise CertificateError("empty permutation")
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = _CYCLE_RE.match(text, pos)
        if match is None:
            raise CertificateError(f"malformed permutation {text[:40]!r}")
        points = [int(t) for t in match.group(1).split()] if match.group(1) else []
        for p in points:
            if not 1 <= p <= degree or p in seen:
                raise CertificateError(f"bad point {p} in permutation of degree {degree}")
            seen.add(p)
        for a, b in zip(points, points[1:] + points[:1]):
            images[a - 1] = b - 1
        pos = match.end()
    return tuple(images)


def mul(p: Perm, q: Perm) -> Perm:
    """p then q."""
    if len(p) != len(q):
        raise EvalError(f"degree mismatch {len(p)} vs {len(q)}")
    return tuple(q[i] for i in p)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def power(p: Perm, k: int) -> Perm:
    base = p if k >= 0 else inverse(p)
    k = abs(k)
    result = tuple(range(len(p)))
    while k:
        if k & 1:
            result = mul(result, base)
        base = mul(base, base)
        k >>= 1
    return result


def block_sum(parts: List[Perm]) -> Perm:
    out: List[int] = []
    for p in parts:
        offset = len(out)
        out.extend(x + offset for x in p)
    return tuple(out)


class _Parser:
    """Recursive descent over the word and index grammar."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            match = _TOKEN_RE.match(stripped, pos)
            if match is None or match.end() == pos:
                raise EvalError(f"cannot tokenize {text!r} at {pos}")
            kind = match.lastgroup
            self.tokens.append((kind, match.group(kind)))
            pos = match.end()
        self.pos = 0

    def peek(self, offset: int = 0):
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else (None, None)

    def take(self, expected: Optional[str] = None):
        kind, tok = self.peek()
        if kind is None or (expected is not None and tok != expected):
            raise EvalError(f"expected {expected or 'a token'} in {self.text!r}")
        self.pos += 1
        return kind, tok

    def parse(self):
        node = self.word()
        if self.pos != len(self.tokens):
            raise EvalError(f"trailing input in {self.text!r}")
        return node

    def word(self):
        factors = []
        while True:
            kind, tok = self.peek()
            if kind is None or tok in (")", "|", "}", "]"):
                break
            factors.append(self.factor())
        if not factors:
            raise EvalError(f"empty word in {self.text!r}")
        return ("prod", factors)

    def factor(self):
        atom = self.atom()
        if self.peek()[1] == "^":
            self.take("^")
            kind, tok = self.take()
            if kind != "int":
                raise EvalError(f"expected exponent in {self.text!r}")
            return ("pow", atom, int(tok))
        return atom

    def atom(self):
        kind, tok = self.take()
        if tok == "(":
            node = self.word()
            self.take(")")
            return node
        if tok == "{":
            parts = [self.word()]
            while self.peek()[1] == "|":
                self.take("|")
                parts.append(self.word())
            self.take("}")
            return ("block", parts)
        if kind != "name":
            raise EvalError(f"unexpected {tok!r} in {self.text!r}")
        if self.peek()[1] == "[":
            self.take("[")
            index = self.index()
            self.take("]")
            return ("entry", tok, index)
        return ("perm", tok)

    def index(self):
        kind, tok = self.take()
        if kind == "int":
            return ("int", int(tok))
        if tok == "#":
            _, table = self.take()
            self.take("(")
            node = self.word()
            self.take(")")
            return ("pos", table, node)
        if kind != "name":
            raise EvalError(f"unexpected {tok!r} in index of {self.text!r}")
        if self.peek()[1] == "[":
            self.take("[")
            inner = self.index()
            self.take("]")
            return ("lookup", tok, inner)
        return ("var", tok)


class _Evaluator:

    def __init__(self, cert: Certificate):
        payload = cert.payload
        self.data = payload.data
        self.perms: Dict[str, Perm] = {}
        for name, entry in payload.perms.items():
            self.perms[name] = read_cycles(entry.cycles, entry.degree)
        self.tables: Dict[str, List[Perm]] = {}
        self.degrees: Dict[str, int] = {}
        for name, table in payload.perm_tables.items():
            self.tables[name] = [read_cycles(c, table.degree) for c in table.perms]
            self.degrees[name] = table.degree
        self.index_tables = payload.index_tables
        self._positions: Dict[str, Dict[Perm, int]] = {}
        self._parsed: Dict[str, tuple] = {}

    def parse(self, text: str):
        if text not in self._parsed:
            self._parsed[text] = _Parser(text).parse()
        return self._parsed[text]

    def position(self, table: str, p: Perm) -> int:
        if table not in self._positions:
            if table not in self.tables:
                raise EvalError(f"unknown table {table!r}")
            positions: Dict[Perm, int] = {}
            for i, q in enumerate(self.tables[table]):
                positions.setdefault(q, i)
            self._positions[table] = positions
        try:
            return self._positions[table][p]
        except KeyError:
            raise EvalError(f"value not found in table {table!r}") from None

    def word(self, node, env: Dict[str, int]) -> Perm:
        tag = node[0]
        if tag == "prod":
            value = self.word(node[1][0], env)
            for factor in node[1][1:]:
                value = mul(value, self.word(factor, env))
            return value
        if tag == "pow":
            return power(self.word(node[1], env), node[2])
        if tag == "block":
            return block_sum([self.word(part, env) for part in node[1]])
        if tag == "perm":
            if node[1] not in self.perms:
                raise EvalError(f"unknown permutation {node[1]!r}")
            return self.perms[node[1]]
        if tag == "entry":
            name = node[1]
            if name not in self.tables:
                raise EvalError(f"unknown permutation table {name!r}")
            i = self.index(node[2], env)
            table = self.tables[name]
            if not 0 <= i < len(table):
                raise EvalError(f"{name}[{i}] out of range")
            return table[i]
        raise EvalError(f"bad node {tag}")

    def index(self, node, env: Dict[str, int]) -> int:
        tag = node[0]
        if tag == "int":
            return node[1]
        if tag == "var":
            if node[1] not in env:
                raise EvalError(f"unbound variable {node[1]!r}")
            return env[node[1]]
        if tag == "lookup":
            name = node[1]
            if name not in self.index_tables:
                raise EvalError(f"unknown index table {name!r}")
            i = self.index(node[2], env)
            table = self.index_tables[name]
            if not 0 <= i < len(table):
                raise EvalError(f"{name}[{i}] out of range")
            return table[i]
        if tag == "pos":
            return self.position(node[1], self.word(node[2], env))
        raise EvalError(f"bad index node {tag}")

    def eval(self, text: str, env: Dict[str, int]) -> Perm:
        return self.word(self.parse(text), env)


@dataclasses.dataclass
class FamilyResult:
    name: str
    source: str
    check: str
    checked: int = 0
    failures: int = 0
    violations: List[str] = dataclasses.field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def fail(self, message: str):
        self.failures += 1
        if len(self.violations) < MAX_REPORTED:
            self.violations.append(message)


@dataclasses.dataclass
class VerificationReport:
    kind: str
    families: List[FamilyResult]
    warning: Optional[str] = None

    @property
    def passed(self) -> bool:
        return all(f.passed for f in self.families)

    @property
    def failed_families(self) -> List[FamilyResult]:
        return [f for f in self.families if not f.passed]

    def summary(self) -> str:
        lines = []
        for f in self.families:
            status = "ok" if f.passed else "FAIL"
            lines.append(f"{status:4} {f.name}: {f.checked} checked, {f.failures} failed")
            for v in f.violations:
                lines.append(f"       {v}")
        if self.warning:
            lines.append(f"warning: {self.warning}")
        verdict = "PASS" if self.passed else "FAIL"
        lines.append(f"{verdict} ({self.kind}, {len(self.families)} families)")
        return "\n".join(lines)


def _assignments(family: EquationFamily):
    names = sorted(family.variables)
    for values in itertools.product(*(family.variables[n] for n in names)):
        yield dict(zip(names, values))


def _describe(env: Dict[str, int]) -> str:
    return ", ".join(f"{k}={v}" for k, v in env.items()) or "(no variables)"


def _check_equal(ev: _Evaluator, family: EquationFamily, result: FamilyResult):
    lhs, rhs = ev.parse(family.lhs), ev.parse(family.rhs)
    for env in _assignments(family):
        result.checked += 1
        try:
            if ev.word(lhs, env) != ev.word(rhs, env):
                result.fail(f"{_describe(env)}: {family.lhs} != {family.rhs}")
        except EvalError as e:
            result.fail(f"{_describe(env)}: {e}")


def _check_distinct(ev: _Evaluator, family: EquationFamily, result: FamilyResult):
    seen: Dict[Perm, str] = {}
    lhs = ev.parse(family.lhs)
    for env in _assignments(family):
        result.checked += 1
        try:
            value = ev.word(lhs, env)
        except EvalError as e:
            result.fail(f"{_describe(env)}: {e}")
            continue
        here = _describe(env)
        if value in seen:
            result.fail(f"{here} and {seen[value]} give the same value")
        else:
            seen[value] = here


def _closure(gens: List[Perm], degree: int, bound: int) -> Optional[set]:
    identity = tuple(range(degree))
    seen = {identity}
    queue = [identity]
    i = 0
    while i < len(queue):
        x = queue[i]
        i += 1
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                if len(seen) >= bound:
                    return None
                seen.add(y)
                queue.append(y)
    return seen


def _check_generates(ev: _Evaluator, family: EquationFamily, result: FamilyResult):
    if family.table not in ev.tables:
        result.fail(f"unknown table {family.table!r}")
        return
    table = ev.tables[family.table]
    degree = ev.degrees[family.table]
    result.checked = len(table)
    try:
        gens = [ev.eval(w, {}) for w in family.generators]
    except EvalError as e:
        result.fail(f"generators: {e}")
        return
    if any(len(g) != degree for g in gens):
        result.fail("generator degree differs from the table's")
        return
    members = set(table)
    if len(members) != len(table):
        result.fail(f"{family.table} lists an element twice")
    group = _closure(gens, degree, len(table))
    if group is None:
        result.fail(f"the generators produce more than {len(table)} elements")
    elif group != members:
        result.fail(f"{family.table} is not the group generated by the generators")
    if family.claim and ev.data.get(family.claim) != str(len(table)):
        result.fail(f"claimed order {ev.data.get(family.claim)!r} != {len(table)}")


def _standard_symmetric(n: int) -> List[Perm]:
    if n == 1:
        return [(0,)]
    transposition = (1, 0) + tuple(range(2, n))
    if n == 2:
        return [transposition]
    return [transposition, tuple(range(1, n)) + (0,)]


def _check_symmetric(ev: _Evaluator, family: EquationFamily, result: FamilyResult):
    try:
        gens = [ev.eval(w, {}) for w in family.generators]
    except EvalError as e:
        result.fail(f"generators: {e}")
        return
    if not gens:
        result.fail("no generators")
        return
    n = len(gens[0])
    if gens != _standard_symmetric(n):
        result.fail(f"generators are not the standard generators of Sym({n})")
    if ev.data.get(family.claim) != str(math.factorial(n)):
        result.fail(f"claimed order is not {n}!")
    for env in _assignments(family):
        for w in family.members:
            result.checked += 1
            try:
                value = ev.eval(w, env)
            except EvalError as e:
                result.fail(f"{_describe(env)}: {e}")
                continue
            if len(value) != n:
                result.fail(f"{_describe(env)}: {w} has degree {len(value)}, not {n}")


_CHECKS = {
    "equal": _check_equal,
    "distinct": _check_distinct,
    "generates": _check_generates,
    "symmetric": _check_symmetric,
}


def verify(cert: Certificate) -> VerificationReport:
    """Evaluates every equation family of a parsed certificate.

    Raises:
        CertificateError: a permutation in the payload does not parse.
    """
    ev = _Evaluator(cert)
    families = []
    for family in cert.equations:
        result = FamilyResult(family.name, family.source, family.check)
        try:
            _CHECKS[family.check](ev, family, result)
        except EvalError as e:
            result.fail(str(e))
        families.append(result)
        logger.debug("%s: %d checked, %d failed", family.name, result.checked,
                     result.failures)
    warning = None if cert.equations else "certificate has no equations"
    return VerificationReport(cert.kind, families, warning)


def verify_certificate(text: str) -> VerificationReport:
    """Parses and verifies certificate text.

    Raises:
        CertificateError: the text is not a well-formed certificate.
    """
    return verify(parse_certificate(text))
