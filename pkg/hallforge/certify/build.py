"""Turns construction results into certificates.

Groups travel as permutation tables in canonical element order, maps as
index tables over those orders, and every claim as an equation family in
the word language of `hallforge.certify.verify`. Names written `$name` in
words are scoped: a builder with prefix "s1_" turns `$B[x]` into `s1_B[x]`.

Every payload entry is read by some family. Labels that no equation can
check (the construction route, a realization, stage degrees) go to the
certificate's notes instead.
"""

import logging
import math
import re
from typing import Callable, Dict, List, Optional, Sequence

from hallforge.certify.wire import Certificate, EquationFamily, NamedPerm, PermTable
from hallforge.constructions.amalgam import AmalgamResult, EquivariantAmalgamResult
from hallforge.constructions.hrushovski import ExtensionResult
from hallforge.constructions.roots import CommutingResult, RootResult
from hallforge.constructions.tower import (ConjugacyReport, HallTower,
                                           PowerTowerStage)
from hallforge.errors import CertificateError
from hallforge.groups.base import FiniteGroup
from hallforge.groups.hom import regular_representation
from hallforge.groups.perm import PermGroup, Permutation

logger = logging.getLogger(__name__)

_SCOPED_RE = re.compile(r"\$([A-Za-z_][A-Za-z0-9_]*)")


def standard_symmetric_generators(degree: int) -> List[Permutation]:
    if degree == 1:
        return [Permutation.identity(1)]
    if degree == 2:
        return [Permutation.transposition(2, 1, 2)]
    return [Permutation.transposition(degree, 1, 2),
            Permutation.cycle(degree, range(1, degree + 1))]


class CertificateBuilder:
    """Accumulates payload entries and equation families for one certificate.

    `scoped` returns a builder sharing the same certificate under a name
    prefix, so one construction can be certified several times side by side.
    """

    def __init__(self, kind: str, inputs: Optional[Dict[str, str]] = None,
                 prefix: str = "", _cert: Optional[Certificate] = None,
                 _realizations: Optional[Dict] = None):
        self.cert = _cert or Certificate(kind=kind, inputs=dict(inputs or {}))
        self.prefix = prefix
        self._realizations: Dict[str, tuple] = {} if _realizations is None else _realizations

    def scoped(self, prefix: str) -> "CertificateBuilder":
        return CertificateBuilder(self.cert.kind, prefix=self.prefix + prefix,
                                  _cert=self.cert, _realizations=self._realizations)

    def name(self, local: str) -> str:
        return self.prefix + local

    def words(self, text: str) -> str:
        return _SCOPED_RE.sub(lambda m: self.prefix + m.group(1), text)

    @property
    def payload(self):
        return self.cert.payload

    def data(self, key: str, value) -> str:
        key = self.name(key)
        self.payload.data[key] = str(value)
        return key

    def note(self, key: str, value):
        self.cert.notes[self.name(key)] = str(value)

    def perm(self, local: str, p: Permutation) -> str:
        key = self.name(local)
        self.payload.perms[key] = NamedPerm(degree=p.degree, cycles=str(p))
        return key

    def perm_table(self, local: str, perms: Sequence[Permutation], degree: int) -> str:
        key = self.name(local)
        for p in perms:
            if p.degree != degree:
                raise CertificateError(f"table {key} mixes degrees {degree} and {p.degree}")
        self.payload.perm_tables[key] = PermTable(degree=degree,
                                                  perms=[str(p) for p in perms])
        return key

    def index_table(self, local: str, values: Sequence[int]) -> str:
        key = self.name(local)
        self.payload.index_tables[key] = [int(v) for v in values]
        return key

    def family(self, name: str, check: str, source: str = "", **fields) -> EquationFamily:
        for key in ("lhs", "rhs", "table", "claim"):
            if key in fields:
                fields[key] = self.words(fields[key])
        for key in ("generators", "members"):
            if key in fields:
                fields[key] = [self.words(w) for w in fields[key]]
        family = EquationFamily(name=self.name(name), check=check, source=source,
                                **fields)
        self.cert.equations.append(family)
        return family

    def add_group(self, local: str, G: FiniteGroup,
                  realize: Optional[Callable] = None) -> Callable:
        """Emits G as a permutation table, its generators and a generates family.

        Permutation groups are their own realization; other groups go
        through their regular representation unless `realize` is given.
        """
        if realize is None:
            if isinstance(G, PermGroup):
                realize = lambda x: x  # noqa: E731
            else:
                realize = regular_representation(G).hom
        perms = [realize(x) for x in G.elements()]
        degree = perms[0].degree
        self.perm_table(local, perms, degree)
        self.index_table(f"{local}_gens", [G.index(g) for g in G.generators])
        self.data(f"order_{local}", G.order)
        self.family(
            f"{local}_generated", "generates",
            source=f"group table: {local} is generated by its listed generators",
            table=f"${local}",
            generators=[f"${local}[${local}_gens[{j}]]" for j in range(len(G.generators))],
            claim=f"$order_{local}")
        self._realizations[self.name(local)] = (G, realize)
        return realize

    def group(self, local: str) -> FiniteGroup:
        return self._realizations[self.name(local)][0]

    def _hom_families(self, local: str, src: str, lookup: Callable[[str], str],
                      source: str, injective: bool):
        G = self.group(src)
        gens = range(len(G.generators))
        step = f"#${src}(${src}[x] ${src}[${src}_gens[j]])"
        self.family(
            f"{local}_multiplicative", "equal", source=source,
            lhs=lookup(step), rhs=f"{lookup('x')} {lookup(f'${src}_gens[j]')}",
            variables={"x": list(range(G.order)), "j": list(gens)})
        self.family(
            f"{local}_identity", "equal", source=source,
            lhs=lookup(f"#${src}(${src}[0]^0)"), rhs=f"{lookup('0')}^0")
        if injective:
            self.family(f"{local}_injective", "distinct", source=source,
                        lhs=lookup("x"), variables={"x": list(range(G.order))})

    def index_map(self, local: str, src: str, dst: str, fn: Callable,
                  source: str = "", injective: bool = True) -> str:
        """A map between two emitted groups, as canonical indices of `dst`."""
        G, H = self.group(src), self.group(dst)
        key = self.index_table(local, [H.index(fn(x)) for x in G.elements()])
        self._hom_families(local, src, lambda i: f"${dst}[${local}[{i}]]",
                           source or f"homomorphism: {local} maps {src} to {dst}",
                           injective)
        return key

    def perm_map(self, local: str, src: str, fn: Callable, source: str = "",
                 injective: bool = True) -> str:
        """A map from an emitted group into permutations, as a table over `src`."""
        G = self.group(src)
        perms = [fn(x) for x in G.elements()]
        self.perm_table(local, perms, perms[0].degree)
        self._hom_families(local, src, lambda i: f"${local}[{i}]",
                           source or f"homomorphism: {local} maps {src} to permutations",
                           injective)
        return self.name(local)

    def symmetric(self, local: str, degree: int, members: Sequence[str] = (),
                  variables: Optional[Dict[str, List[int]]] = None,
                  generators: Optional[Sequence[str]] = None, source: str = ""):
        """Claims Sym(degree) by its standard generators; `members` must have its degree."""
        if generators is None:
            std = standard_symmetric_generators(degree)
            names = ["t", "c"][:len(std)]
            for n, p in zip(names, std):
                self.perm(f"{local}_{n}", p)
            generators = [f"${local}_{n}" for n in names[:len(std)]]
        self.data(f"order_{local}", math.factorial(degree))
        self.family(local, "symmetric",
                    source=source or f"ambient: {local} is Sym({degree})",
                    generators=list(generators), members=list(members),
                    variables=dict(variables or {}),
                    claim=f"$order_{local}")

    def build(self) -> Certificate:
        logger.debug("certificate %s: %d families, %d tables", self.cert.kind,
                     len(self.cert.equations), len(self.payload.perm_tables))
        return self.cert


def _range(G: FiniteGroup) -> List[int]:
    return list(range(G.order))


def _existing_symmetric(local: str, degree: int) -> List[str]:
    return [f"${local}_t", f"${local}_c"][:len(standard_symmetric_generators(degree))]


def extension_certificate(result: ExtensionResult,
                          inputs: Optional[Dict[str, str]] = None) -> Certificate:
    b = CertificateBuilder("extension", inputs)
    A = result.group
    realize_a = b.add_group("A", A)
    b.perm_map("rho", "A", result.rho,
               source="extension: rho is the regular embedding of A")
    degree = result.ambient.degree
    b.symmetric("H", degree, members=["$rho[x]"], variables={"x": _range(A)},
                source=f"extension: the ambient H is Sym({degree})")
    if result.conjugators:
        b.perm_table("conjugators", result.conjugators, degree)
        b.symmetric("H_conjugators", degree, members=["$conjugators[i]"],
                    variables={"i": list(range(len(result.conjugators)))},
                    generators=_existing_symmetric("H", degree),
                    source="extension: every conjugator lies in H")
    for i, psi in enumerate(result.psis, 1):
        K = psi.domain
        b.add_group(f"K{i}", K, realize=realize_a)
        b.index_table(f"dom{i}", [A.index(k) for k in K.elements()])
        b.family(f"K{i}_inside_A", "equal", source=f"extension: K{i} is a subgroup of A",
                 lhs=f"$K{i}[x]", rhs=f"$A[$dom{i}[x]]", variables={"x": _range(K)})
        b.index_table(f"psi{i}", [A.index(psi(k)) for k in K.elements()])
        b._hom_families(f"psi{i}", f"K{i}", lambda s, i=i: f"$A[$psi{i}[{s}]]",
                        f"extension: psi{i} is an injective homomorphism K{i} -> A", True)
        b.family(f"psi{i}_conjugation", "equal",
                 source=f"extension: rho(k)^h{i} = rho(psi{i}(k)) on K{i}",
                 lhs=f"$conjugators[{i - 1}]^-1 $rho[$dom{i}[x]] $conjugators[{i - 1}]",
                 rhs=f"$rho[$psi{i}[x]]", variables={"x": _range(K)},
                 orientation="x^h")
    b.note("conjugators", len(result.conjugators))
    return b.build()


def _product_route_families(b: CertificateBuilder, result: AmalgamResult, route: str):
    """r is the B factor of B x C conjugated; that factor commutes with s(C)."""
    h = result.conjugator
    h_inv = h.inverse()
    b.perm("conjugator", h)
    b.perm_map("r_factor", "B", lambda y: h * result.r(y) * h_inv,
               source=f"{route}: r_factor is the B factor of B x C")
    b.family("r_conjugated", "equal",
             source=f"{route}: r(y) = r_factor(y)^conjugator on B",
             lhs="$conjugator^-1 $r_factor[y] $conjugator", rhs="$r[y]",
             variables={"y": _range(b.group("B"))}, orientation="x^h")
    b.family("factors_commute", "equal",
             source=f"{route}: the B factor commutes with s(C)",
             lhs="$r_factor[$B_gens[j]] $s[$C_gens[k]]",
             rhs="$s[$C_gens[k]] $r_factor[$B_gens[j]]",
             variables={"j": list(range(len(b.group("B").generators))),
                        "k": list(range(len(b.group("C").generators)))})


def amalgam_certificate(result: AmalgamResult,
                        inputs: Optional[Dict[str, str]] = None) -> Certificate:
    b = CertificateBuilder("amalgam", inputs)
    route = f"amalgamation ({result.construction} route)"
    A, B, C = result.f.domain, result.f.codomain, result.g.codomain
    b.add_group("A", A)
    b.add_group("B", B)
    b.add_group("C", C)
    b.index_map("f", "A", "B", result.f, source=f"{route}: f embeds A in B")
    b.index_map("g", "A", "C", result.g, source=f"{route}: g embeds A in C")
    b.perm_map("r", "B", result.r, source=f"{route}: r embeds B in K")
    b.perm_map("s", "C", result.s, source=f"{route}: s embeds C in K")
    b.family("square", "equal", source=f"{route}: r∘f = s∘g on A",
             lhs="$r[$f[x]]", rhs="$s[$g[x]]", variables={"x": _range(A)})
    degree = result.ambient.degree
    b.symmetric("K", degree, members=["$r[y]"], variables={"y": _range(B)},
                source=f"{route}: r maps into K = Sym({degree})")
    b.symmetric("K_s", degree, members=["$s[z]"], variables={"z": _range(C)},
                generators=_existing_symmetric("K", degree),
                source=f"{route}: s maps into K")
    if result.conjugator is not None:
        _product_route_families(b, result, route)
    b.note("construction", result.construction)
    return b.build()


def equivariant_certificate(result: EquivariantAmalgamResult,
                            inputs: Optional[Dict[str, str]] = None) -> Certificate:
    b = CertificateBuilder("equivariant-amalgam", inputs)
    route = f"equivariant amalgamation ({result.inner.construction} route)"
    sys_a, sys_b, sys_c = result.systems
    A, B, C = sys_a.group, sys_b.group, sys_c.group
    b.add_group("A", A)
    b.add_group("B", B)
    b.add_group("C", C)
    b.index_map("f", "A", "B", result.f.hom, source=f"{route}: f embeds A in B")
    b.index_map("g", "A", "C", result.g.hom, source=f"{route}: g embeds A in C")
    for i, (alpha, beta, gamma) in enumerate(zip(sys_a.autos, sys_b.autos,
                                                 sys_c.autos), 1):
        b.index_map(f"alpha{i}", "A", "A", alpha,
                    source=f"{route}: alpha{i} is an automorphism of A")
        b.index_map(f"beta{i}", "B", "B", beta,
                    source=f"{route}: beta{i} is an automorphism of B")
        b.index_map(f"gamma{i}", "C", "C", gamma,
                    source=f"{route}: gamma{i} is an automorphism of C")
        b.family(f"f_equivariant{i}", "equal", source=f"{route}: f∘alpha{i} = beta{i}∘f",
                 lhs=f"$B[$f[$alpha{i}[x]]]", rhs=f"$B[$beta{i}[$f[x]]]",
                 variables={"x": _range(A)})
        b.family(f"g_equivariant{i}", "equal", source=f"{route}: g∘alpha{i} = gamma{i}∘g",
                 lhs=f"$C[$g[$alpha{i}[x]]]", rhs=f"$C[$gamma{i}[$g[x]]]",
                 variables={"x": _range(A)})
    b.perm_map("s", "B", result.s, source=f"{route}: s embeds B in K")
    b.perm_map("t", "C", result.t, source=f"{route}: t embeds C in K")
    b.family("square", "equal", source=f"{route}: s∘f = t∘g on A",
             lhs="$s[$f[x]]", rhs="$t[$g[x]]", variables={"x": _range(A)})
    degree = result.ambient.degree
    if result.delta_tildes:
        b.perm_table("delta_tilde", result.delta_tildes, degree)
    for i in range(sys_a.arity):
        b.family(f"delta{i + 1}_on_s", "equal",
                 source=f"{route}: delta{i + 1}∘s = s∘beta{i + 1}",
                 lhs=f"$delta_tilde[{i}] $s[y] $delta_tilde[{i}]^-1",
                 rhs=f"$s[$beta{i + 1}[y]]", variables={"y": _range(B)},
                 orientation="h x h^-1")
        b.family(f"delta{i + 1}_on_t", "equal",
                 source=f"{route}: delta{i + 1}∘t = t∘gamma{i + 1}",
                 lhs=f"$delta_tilde[{i}] $t[z] $delta_tilde[{i}]^-1",
                 rhs=f"$t[$gamma{i + 1}[z]]", variables={"z": _range(C)},
                 orientation="h x h^-1")
    b.symmetric("K", degree, members=["$s[y]"], variables={"y": _range(B)},
                source=f"{route}: s maps into K = Sym({degree})")
    b.symmetric("K_t", degree, members=["$t[z]"], variables={"z": _range(C)},
                generators=_existing_symmetric("K", degree),
                source=f"{route}: t maps into K")
    if sys_a.arity:
        b.symmetric("K_delta", degree, members=["$delta_tilde[i]"],
                    variables={"i": list(range(sys_a.arity))},
                    generators=_existing_symmetric("K", degree),
                    source=f"{route}: every delta_tilde lies in K")
    for key, group in (("X", result.X), ("Y", result.Y), ("Z", result.Z),
                       ("W", result.fiber.W), ("L", result.L), ("M", result.M),
                       ("N", result.N)):
        b.note(f"order_{key}", group.order)
    b.note("construction", result.inner.construction)
    return b.build()


def _commuting_families(b: CertificateBuilder, result: CommutingResult):
    A, B = result.A, result.B
    realize_b = b.add_group("B", B)
    b.add_group("A", A, realize=realize_b)
    b.index_map("inc", "A", "B", lambda x: x,
                source="commuting extension: A is a subgroup of B")
    b.family("inc_inclusion", "equal", source="commuting extension: A is a subgroup of B",
             lhs="$A[x]", rhs="$B[$inc[x]]", variables={"x": _range(A)})
    b.index_map("alpha", "A", "A", result.alpha,
                source="commuting extension: alpha is an automorphism of A")
    b.index_map("beta", "B", "B", result.beta,
                source="commuting extension: beta is an automorphism of B")
    b.family("beta_keeps_A", "equal", source="commuting extension: beta(A) = A",
             lhs="$B[$beta[$inc[x]]]", rhs="$A[#$A($B[$beta[$inc[x]]])]",
             variables={"x": _range(A)})
    b.family("alpha_beta_commute", "equal",
             source="commuting extension: alpha∘beta = beta∘alpha on A",
             lhs="$B[$beta[$inc[$alpha[x]]]]",
             rhs="$B[$inc[$alpha[#$A($B[$beta[$inc[x]]])]]]",
             variables={"x": _range(A)})
    b.perm_map("e", "B", result.e, source="commuting extension: e embeds B")
    b.perm("f", result.f)
    b.perm("g", result.g)
    b.family("f_g_commute", "equal", source="commuting extension: fg = gf",
             lhs="$f $g", rhs="$g $f")
    b.family("f_realizes_alpha", "equal",
             source="commuting extension: e(x)^f = e(alpha(x)) on A",
             lhs="$f^-1 $e[$inc[x]] $f", rhs="$e[$inc[$alpha[x]]]",
             variables={"x": _range(A)}, orientation="x^h")
    b.family("g_realizes_beta", "equal",
             source="commuting extension: e(y)^g = e(beta(y)) on B",
             lhs="$g^-1 $e[y] $g", rhs="$e[$beta[y]]",
             variables={"y": _range(B)}, orientation="x^h")
    b.symmetric("K", result.ambient.degree, members=["$e[y]", "$f", "$g"],
                variables={"y": _range(B)},
                source="commuting extension: e, f and g lie in "
                       f"K = Sym({result.ambient.degree})")
    b.note("order_alpha_top", result.H.factors[0].order)
    b.note("order_beta_top", result.H.factors[1].order)
    b.note("construction", result.amalgam.construction)


def commuting_certificate(result: CommutingResult,
                          inputs: Optional[Dict[str, str]] = None) -> Certificate:
    b = CertificateBuilder("commuting", inputs)
    _commuting_families(b, result)
    return b.build()


def _block(parts: Sequence[str]) -> str:
    return "{" + " | ".join(parts) + "}"


def _root_families(b: CertificateBuilder, result: RootResult):
    commuting = result.commuting
    _commuting_families(b, commuting)
    n, B = result.n, commuting.B
    degree = commuting.ambient.degree
    b.perm("Gamma", result.Gamma)

    b.perm_table("phi_e", [result.as_permutation(result.embed(y)) for y in B.elements()],
                 n * degree)
    twisted = ["$e[y]"] + [f"$f^-{k} $e[y] $f^{k}" for k in range(1, n)]
    b.family("twisted_diagonal", "equal",
             source="root extension: phi(y) = (y, y^f, ..., y^(f^(n-1)))",
             lhs="$phi_e[y]", rhs=_block(twisted), variables={"y": _range(B)})
    b.family("gamma_extends_alpha", "equal",
             source="root extension: gamma∘phi = phi∘alpha on A",
             lhs="$Gamma^-1 $phi_e[$inc[x]] $Gamma", rhs="$phi_e[$inc[$alpha[x]]]",
             variables={"x": _range(commuting.A)}, orientation="x^h")
    b.family("gamma_power_extends_beta", "equal",
             source=f"root extension: gamma^{n}∘phi = phi∘beta on B",
             lhs=f"$Gamma^-{n} $phi_e[y] $Gamma^{n}", rhs="$phi_e[$beta[y]]",
             variables={"y": _range(B)}, orientation="x^h")

    d_gens = commuting.c_generators
    b.perm_table("D_gens", d_gens, degree)
    k = len(B.generators)
    if k:
        b.family("D_gens_from_B", "equal",
                 source="root extension: D is generated by e(B), f and g",
                 lhs="$D_gens[j]", rhs="$e[$B_gens[j]]",
                 variables={"j": list(range(k))})
    b.family("D_gens_f", "equal", source="root extension: D is generated by e(B), f and g",
             lhs=f"$D_gens[{k}]", rhs="$f")
    b.family("D_gens_g", "equal", source="root extension: D is generated by e(B), f and g",
             lhs=f"$D_gens[{k + 1}]", rhs="$g")
    for i in range(n):
        parts = ["$f^0"] * n
        parts[i] = "$D_gens[j]"
        image = ["$f^0"] * n
        if i > 0:
            image[i - 1] = "$D_gens[j]"
        else:
            image[n - 1] = "$g^-1 $D_gens[j] $g"
        b.family(f"gamma_keeps_C_block{i + 1}", "equal",
                 source="root extension: gamma maps the generators of C = D^n into C",
                 lhs=f"$Gamma^-1 {_block(parts)} $Gamma", rhs=_block(image),
                 variables={"j": list(range(len(d_gens)))}, orientation="x^h")
    b.note("n", n)
    b.note("realization", result.realization)
    b.note("order_D", result.D.order)


def root_certificate(result: RootResult,
                     inputs: Optional[Dict[str, str]] = None) -> Certificate:
    b = CertificateBuilder("root", inputs)
    _root_families(b, result)
    return b.build()


def hall_tower_certificate(tower: HallTower,
                           conjugacy: Sequence[ConjugacyReport] = (),
                           inputs: Optional[Dict[str, str]] = None) -> Certificate:
    """Stages with enumerable order become tables; the last stage only a claim."""
    b = CertificateBuilder("hall-tower", inputs)
    b.add_group("H0", tower.stages[0])
    for k in range(1, tower.depth + 1):
        H = tower.stages[k]
        prev = f"H{k - 1}"
        b.perm_map(f"rho{k}", prev, tower.embeddings[k - 1],
                   source=f"hall tower: rho{k} is the regular embedding of {prev}")
        members, variables = [f"$rho{k}[x]"], {"x": _range(tower.stages[k - 1])}
        source = f"hall tower: H{k} is Sym(|{prev}|) = Sym({H.degree})"
        if k < tower.depth:
            b.add_group(f"H{k}", H)
            b.symmetric(f"H{k}_symmetric", H.degree, members=members,
                        variables=variables, source=source,
                        generators=[f"$H{k}[$H{k}_gens[{j}]]"
                                    for j in range(len(H.generators))])
        else:
            b.symmetric(f"H{k}_symmetric", H.degree, members=members,
                        variables=variables, source=source)
    for report in conjugacy:
        k = report.stage
        H = tower.stages[k]
        rho = f"$rho{k + 1}"
        for e, entry in enumerate(report.entries):
            if entry.conjugator is None:
                continue
            tag = f"conj{k}_{e}"
            K = entry.domain
            b.index_table(f"{tag}_dom", [H.index(x) for x in K.elements()])
            b.index_table(f"{tag}_img", [H.index(entry.iso(x)) for x in K.elements()])
            b.perm(f"{tag}_h", entry.conjugator)
            b.family(f"{tag}_conjugation", "equal",
                     source=f"hall tower: isomorphic subgroups of H{k} are "
                            f"conjugate in H{k + 1}",
                     lhs=f"${tag}_h^-1 {rho}[${tag}_dom[x]] ${tag}_h",
                     rhs=f"{rho}[${tag}_img[x]]", variables={"x": _range(K)},
                     orientation="x^h")
            b.family(f"{tag}_bijective", "distinct",
                     source=f"hall tower: the isomorphism of subgroup pair {e} is injective",
                     lhs=f"{rho}[${tag}_img[x]]", variables={"x": _range(K)})
    b.note("depth", tower.depth)
    b.note("degrees", ",".join(str(d) for d in tower.degrees))
    return b.build()


def _stage_group(b: CertificateBuilder, root: RootResult):
    """A_i = C = D^n as a table, also generated by D's generators in each block."""
    b.add_group("T", root.C, realize=root.as_permutation)
    n, k = root.n, len(root.commuting.c_generators)
    gens = []
    for block in range(n):
        for j in range(k):
            parts = ["$f^0"] * n
            parts[block] = f"$D_gens[{j}]"
            gens.append(_block(parts))
    b.family("T_is_D_power", "generates", source=f"power tower: A_i = D^{n}",
             table="$T", generators=gens, claim="$order_T")


def _join_families(b: CertificateBuilder, prev: PowerTowerStage, stage: PowerTowerStage):
    """B_i joins A_{i-1} and the joined group, and g_i, f_i extend g_{i-1}, f_{i-1}."""
    i, n = stage.index, stage.root.n
    here, before = f"s{i}_", f"s{i - 1}_"
    scoped = b.scoped(here)
    J = stage.joined_into.domain
    scoped.add_group("J", J)
    b.index_map(f"{here}into", f"{before}T", f"{here}B", stage.into,
                source=f"power tower: A_{i - 1} embeds in B_{i}")
    scoped.index_map("into_J", "J", "B", stage.joined_into,
                     source=f"power tower: {stage.joined} embeds in B_{i}")
    gens = [f"${here}B[${here}into[${before}T_gens[{j}]]]"
            for j in range(len(prev.group.generators))]
    gens += [f"${here}B[${here}into_J[${here}J_gens[{j}]]]" for j in range(len(J.generators))]
    b.family(f"{here}B_is_join", "generates",
             source=f"power tower: B_{i} is generated by A_{i - 1} and {stage.joined}",
             table=f"${here}B", generators=gens, claim=f"${here}order_B")
    scoped.family("joined_fixed", "equal",
                  source=f"power tower: g_{i} is the identity on {stage.joined}",
                  lhs="$A[$alpha[#$A($B[$into_J[x]])]]", rhs="$B[$into_J[x]]",
                  variables={"x": _range(J)})

    if prev.index == 0:
        g_prev, f_prev = "$s0_g[x]", "$s0_f[x]"
    else:
        table, shift = f"${before}T", f"${before}Gamma"
        g_prev = f"#{table}({shift}^-1 {table}[x] {shift})"
        f_prev = f"#{table}({shift}^-{n} {table}[x] {shift}^{n})"

    def image(index: str) -> str:
        return f"${here}phi_e[${here}into[{index}]]"

    shift = f"${here}Gamma"
    b.family(f"{here}extends_g", "equal",
             source=f"power tower: g_{i}∘iota = iota∘g_{i - 1} on A_{i - 1}",
             lhs=f"{shift}^-1 {image('x')} {shift}", rhs=image(g_prev),
             variables={"x": _range(prev.group)}, orientation="x^h")
    b.family(f"{here}extends_f", "equal",
             source=f"power tower: f_{i}∘iota = iota∘f_{i - 1} on A_{i - 1}, "
                    f"with f_{i} conjugation by Gamma^{n}",
             lhs=f"{shift}^-{n} {image('x')} {shift}^{n}", rhs=image(f_prev),
             variables={"x": _range(prev.group)}, orientation="x^h")


def power_tower_certificate(stages: Sequence[PowerTowerStage], n: int,
                            schedule: Sequence[str],
                            inputs: Optional[Dict[str, str]] = None) -> Certificate:
    """The seed (A_0, g_0, f_0), one scoped root certificate per stage, and the links.

    Stage i is prefixed s{i}_. Each stage i >= 1 is tied to stage i - 1 by
    the embedding iota = phi_e∘into and the extension equations for g and f.

    Raises:
        CertificateError: a stage was not built on the stage before it.
    """
    b = CertificateBuilder("power-tower", inputs)
    depth = len(stages) - 1
    seed = stages[0]
    s0 = b.scoped("s0_")
    s0.add_group("T", seed.group)
    s0.index_map("g", "T", "T", seed.g, source="power tower: g_0 is an automorphism of A_0")
    s0.index_map("f", "T", "T", seed.f, source="power tower: f_0 is an automorphism of A_0")
    nested = "x"
    for _ in range(n):
        nested = f"$g[{nested}]"
    s0.family("f_is_g_power", "equal", source=f"power tower: f_0 = g_0^{n}",
              lhs="$T[$f[x]]", rhs=f"$T[{nested}]", variables={"x": _range(seed.group)})

    for prev, stage in zip(stages, stages[1:]):
        i = stage.index
        if (stage.root is None or stage.into is None or stage.joined_into is None
                or stage.into.domain is not prev.group or stage.root.n != n):
            raise CertificateError(f"stage {i} is not built on stage {i - 1}")
        scoped = b.scoped(f"s{i}_")
        _root_families(scoped, stage.root)
        _join_families(b, prev, stage)
        if i < depth:
            if stage.root.realization != "table":
                raise CertificateError(f"stage {i} is not enumerable but has a successor")
            _stage_group(scoped, stage.root)
        scoped.note("joined", stage.joined)
    b.note("n", n)
    b.note("depth", depth)
    b.note("schedule", ",".join(schedule))
    return b.build()
