"""Text formats: group files, words, maps, partial isomorphisms, amalgam specs.

A group file lists its degree and generators in cycle notation:

    group G
    degree 4
    gen a (1 2 3 4)
    gen (1 2)

or names a built-in with `catalog:<name>`. Unnamed generators are called
x, y, z, u, v, w, then g7, g8, .... Words are products of generator names
separated by spaces or `*`, with `^k` powers and `1` or `e` for the identity.
Maps are `map <word> -> <word>` lines.
"""

import dataclasses
import logging
import os
import re
from typing import Dict, List, Optional, Sequence, Tuple

from hallforge.errors import InvalidPartialIso, ParseError
from hallforge.groups.base import FiniteGroup, default_generator_names
from hallforge.groups.catalog import catalog
from hallforge.groups.hom import (GroupHom, PartialIso, make_automorphism,
                                  make_homomorphism, make_partial_iso)
from hallforge.groups.perm import PermGroup, parse_cycles

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>-?\d+)"
                       r"|(?P<op>[\^*()]))")
_MAP_RE = re.compile(r"^map\s+(?P<lhs>.+?)\s*->\s*(?P<rhs>.+)$")


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _tokenize(text: str) -> List[Tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None or match.end() == pos:
            raise ParseError(f"unexpected character in word {text!r} at {pos}")
        kind = match.lastgroup
        tokens.append((kind, match.group(kind)))
        pos = match.end()
    return tokens


def parse_word(group: FiniteGroup, text: str):
    """Evaluates a word over the generator names of `group`.

    Raises:
        ParseError: unknown generator name or malformed word.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty word")
    names = dict(zip(group.generator_names, group.generators))
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def word():
        nonlocal pos
        value = group.identity
        while True:
            kind, tok = peek()
            if kind is None or tok == ")":
                return value
            if tok == "*":
                pos += 1
                continue
            value = group.mul(value, factor())

    def factor():
        nonlocal pos
        kind, tok = peek()
        pos += 1
        if tok == "(":
            value = word()
            if peek()[1] != ")":
                raise ParseError(f"unbalanced parentheses in {text!r}")
            pos += 1
        elif kind == "name" and tok in names:
            value = names[tok]
        elif tok in ("1", "e"):
            value = group.identity
        else:
            raise ParseError(f"unknown generator {tok!r} in {text!r}; "
                             f"known: {', '.join(group.generator_names)}")
        if peek()[1] == "^":
            pos += 1
            kind, exp = peek()
            if kind != "int":
                raise ParseError(f"expected an integer exponent in {text!r}")
            pos += 1
            value = group.power(value, int(exp))
        return value

    value = word()
    if pos != len(tokens):
        raise ParseError(f"unbalanced parentheses in {text!r}")
    return value


def parse_group(text: str, name: str = "") -> PermGroup:
    """Reads a group file (or a `catalog:<name>` reference).

    Raises:
        ParseError: missing degree, malformed generator lines.
    """
    lines = [_strip_comment(line) for line in text.splitlines()]
    lines = [line for line in lines if line]
    if len(lines) == 1 and lines[0].startswith("catalog:"):
        return catalog(lines[0][len("catalog:"):])
    degree = None
    gens, gen_names = [], []
    for line in lines:
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "group":
            if rest.startswith("catalog:"):
                group = catalog(rest[len("catalog:"):])
                return group
            name = name or rest
        elif keyword == "degree":
            try:
                degree = int(rest)
            except ValueError:
                raise ParseError(f"bad degree line {line!r}") from None
        elif keyword == "gen":
            if degree is None:
                raise ParseError("`degree` must come before `gen` lines")
            gen_name = None
            if rest and not rest.startswith("("):
                gen_name, _, rest = rest.partition(" ")
            gens.append(parse_cycles(rest, degree))
            gen_names.append(gen_name)
        else:
            raise ParseError(f"unexpected line {line!r} in group file")
    if degree is None:
        raise ParseError("group file has no `degree` line")
    group = PermGroup(gens, degree, name)
    _name_generators(group, gen_names)
    return group


def _name_generators(group: FiniteGroup, names: Sequence[Optional[str]]):
    defaults = default_generator_names(len(names))
    chosen = tuple(n or d for n, d in zip(names, defaults))
    if len(set(chosen)) != len(chosen):
        raise ParseError(f"duplicate generator names {chosen}")
    if any(n in ("e", "1") for n in chosen):
        raise ParseError("`e` and `1` are reserved for the identity")
    group.generator_names = chosen


def format_group(group: PermGroup) -> str:
    lines = []
    if group.name:
        lines.append(f"group {group.name}")
    lines.append(f"degree {group.degree}")
    for name, g in zip(group.generator_names, group.generators):
        lines.append(f"gen {name} {g}")
    return "\n".join(lines) + "\n"


def load_group(ref: str) -> PermGroup:
    """A group from `catalog:<name>`, a bare catalog name, or a file path."""
    if ref.startswith("catalog:"):
        return catalog(ref[len("catalog:"):])
    if os.path.exists(ref):
        with open(ref, encoding="utf-8") as handle:
            return parse_group(handle.read(), os.path.basename(ref))
    return catalog(ref)


def _map_lines(text: str) -> List[Tuple[str, str]]:
    out = []
    for raw in re.split(r"[\n;]", text):
        line = _strip_comment(raw)
        if not line:
            continue
        match = _MAP_RE.match(line)
        if match is None:
            raise ParseError(f"expected `map <word> -> <word>`, got {line!r}")
        out.append((match.group("lhs"), match.group("rhs")))
    return out


def parse_assignments(text: str, source: FiniteGroup,
                      target: FiniteGroup) -> Dict:
    """Map lines as a dict from source elements to target elements."""
    pairs = {}
    for lhs, rhs in _map_lines(text):
        key = parse_word(source, lhs)
        value = parse_word(target, rhs)
        if key in pairs and pairs[key] != value:
            raise ParseError(f"{lhs!r} is mapped twice")
        pairs[key] = value
    return pairs


def parse_map(domain: FiniteGroup, codomain: FiniteGroup, text: str,
              alphabet: Optional[FiniteGroup] = None) -> GroupHom:
    """A verified homomorphism from map lines.

    Args:
        alphabet: Group whose generator names the words use, for domains
            that are subgroups of a named group. Defaults to the domain for
            keys and the codomain for values.
    """
    pairs = parse_assignments(text, alphabet or domain, alphabet or codomain)
    return make_homomorphism(domain, codomain, pairs)


def parse_automorphism(group: FiniteGroup, text: str,
                       alphabet: Optional[FiniteGroup] = None) -> GroupHom:
    pairs = parse_assignments(text, alphabet or group, alphabet or group)
    return make_automorphism(group, pairs)


def _word_list(text: str) -> List[str]:
    return [w.strip() for w in text.split(",") if w.strip()]


def parse_partial_iso(text: str, ambient: FiniteGroup) -> PartialIso:
    """A partial isomorphism file: optional `domain`/`codomain` lines with
    comma-separated generator words, and `map` lines.

    Raises:
        InvalidPartialIso: the map is not an isomorphism between the
            declared subgroups.
    """
    domain_words, codomain_words, map_text = None, None, []
    for raw in text.splitlines():
        line = _strip_comment(raw)
        if line.startswith("domain"):
            domain_words = _word_list(line[len("domain"):])
        elif line.startswith("codomain"):
            codomain_words = _word_list(line[len("codomain"):])
        elif line:
            map_text.append(line)
    pairs = parse_assignments("\n".join(map_text), ambient, ambient)
    if not pairs:
        iso = make_partial_iso(ambient, [], [])
    else:
        iso = make_partial_iso(ambient, list(pairs), list(pairs.values()))
    for words, side in ((domain_words, iso.domain), (codomain_words, iso.codomain)):
        if words is None:
            continue
        declared = ambient.subgroup([parse_word(ambient, w) for w in words])
        if set(declared.elements()) != set(side.elements()):
            raise InvalidPartialIso(
                f"declared subgroup <{', '.join(words)}> differs from the "
                "one the map lines generate")
    return iso


@dataclasses.dataclass
class AmalgamSpec:
    """Groups, automorphism tuples and embeddings declared in a spec file."""
    groups: Dict[str, PermGroup]
    autos: Dict[str, List[GroupHom]]
    embeddings: List[Tuple[str, str, str, GroupHom]]


def parse_amalgam_spec(text: str, base_dir: str = ".") -> AmalgamSpec:
    """Reads an amalgam spec file.

    Blocks start with `group <name> [catalog:<c>|<file>]` (an inline group
    continues with `degree`/`gen` lines), `auto <group>` or
    `embed <name> <source> <target>`, and the last two continue with `map`
    lines. The i-th `auto` block of a group is its i-th automorphism.

    Raises:
        ParseError: malformed blocks or unknown group names.
    """
    group_texts: Dict[str, List[str]] = {}
    group_order: List[str] = []
    blocks: List[Tuple[Tuple[str, ...], List[str]]] = []
    current = None
    for number, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line:
            continue
        words = line.split()
        if words[0] == "group":
            if len(words) < 2:
                raise ParseError(f"line {number}: `group` needs a name")
            name = words[1]
            if name in group_texts:
                raise ParseError(f"line {number}: group {name} declared twice")
            group_order.append(name)
            group_texts[name] = [] if len(words) == 2 else [" ".join(words[2:])]
            current = ("group", name)
        elif words[0] == "auto":
            if len(words) != 2:
                raise ParseError(f"line {number}: expected `auto <group>`")
            blocks.append((("auto", words[1]), []))
            current = ("block",)
        elif words[0] == "embed":
            if len(words) != 4:
                raise ParseError(
                    f"line {number}: expected `embed <name> <source> <target>`")
            blocks.append((("embed",) + tuple(words[1:]), []))
            current = ("block",)
        elif words[0] in ("degree", "gen"):
            if current is None or current[0] != "group":
                raise ParseError(f"line {number}: {words[0]} outside a group block")
            group_texts[current[1]].append(line)
        elif words[0] == "map":
            if current != ("block",):
                raise ParseError(f"line {number}: map outside an auto/embed block")
            blocks[-1][1].append(line)
        else:
            raise ParseError(f"line {number}: unexpected {words[0]!r}")

    groups = {}
    for name in group_order:
        body = group_texts[name]
        if len(body) == 1 and not body[0].startswith(("degree", "gen")):
            ref = body[0]
            if not ref.startswith("catalog:"):
                ref = os.path.join(base_dir, ref)
            groups[name] = load_group(ref)
        else:
            groups[name] = parse_group("\n".join(body), name)

    def lookup(name: str) -> PermGroup:
        if name not in groups:
            raise ParseError(f"unknown group {name!r}")
        return groups[name]

    autos: Dict[str, List[GroupHom]] = {name: [] for name in groups}
    embeddings = []
    for header, lines in blocks:
        body = "\n".join(lines)
        if header[0] == "auto":
            group = lookup(header[1])
            autos[header[1]].append(parse_automorphism(group, body))
        else:
            name, source, target = header[1:]
            embeddings.append(
                (name, source, target, parse_map(lookup(source), lookup(target), body)))
    logger.debug("amalgam spec: groups %s, %d embeddings", list(groups),
                 len(embeddings))
    return AmalgamSpec(groups, autos, embeddings)
