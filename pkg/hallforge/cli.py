"""The hall-forge command line.

Every construction command builds its certificate, re-checks it with the
independent verifier and only then writes it. Exit codes: 0 success,
1 construction error, 2 verification failure, 3 usage error (including
unreadable input files and malformed values).
"""

import logging
import os
import sys
from typing import List, Optional

import click
import typer

from hallforge import config
from hallforge.certify import build
from hallforge.certify.verify import verify_certificate
from hallforge.certify.wire import Certificate, emit_certificate
from hallforge.constructions.amalgam import amalgamate as amalgamate_groups
from hallforge.constructions.amalgam import equivariant_amalgamate
from hallforge.constructions.hrushovski import hrushovski_extend
from hallforge.constructions.roots import commuting_extension, root_extension
from hallforge.constructions.tower import (generic_power_tower, hall_tower,
                                           stage_conjugacy_check)
from hallforge.errors import CertificateError, HallForgeError, ParseError
from hallforge.groups.catalog import catalog as catalog_group
from hallforge.groups.catalog import catalog_names
from hallforge.groups.hom import (EquivariantEmbedding, EquivariantSystem,
                                  identity_hom, inversion_automorphism,
                                  subgroup_generated)
from hallforge.groups.specfile import (load_group, parse_amalgam_spec,
                                       parse_automorphism, parse_partial_iso,
                                       parse_word)

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_CONSTRUCTION, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2, 3

app = typer.Typer(name="hall-forge", no_args_is_help=True, add_completion=False,
                  help="Finite group constructions with verifiable certificates.")


@app.callback()
def main_options(
        degree_cap: Optional[int] = typer.Option(
            None, "--degree-cap", help="Largest regular representation to build."),
        verbose: bool = typer.Option(False, "--verbose", "-v"),
        quiet: bool = typer.Option(False, "--quiet", "-q")):
    """Finite group constructions with verifiable certificates."""
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger("hallforge").setLevel(level)
    if degree_cap is not None:
        config.limits.degree_cap = degree_cap


def _read_text(value: str) -> str:
    """The contents of `value` when it names a file, else `value` itself."""
    if os.path.isfile(value):
        with open(value, encoding="utf-8") as handle:
            return handle.read()
    return value


def _finish(cert: Certificate, out: Optional[str]):
    text = emit_certificate(cert)
    report = verify_certificate(text)
    for line in report.summary().splitlines():
        logger.debug(line)
    if not report.passed:
        for family in report.failed_families:
            logger.error("family %s failed: %s", family.name,
                         "; ".join(family.violations))
        raise typer.Exit(EXIT_VERIFY)
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
        logger.info("wrote %s certificate (%d families) to %s", cert.kind,
                    len(cert.equations), out)
    else:
        typer.echo(text)


@app.command()
def extend(group: str = typer.Option(..., "--group", help="Catalog name or group file."),
           iso: List[str] = typer.Option([], "--iso",
                                         help="Partial isomorphism file or map text."),
           out: Optional[str] = typer.Option(None, "--out")):
    """Realize partial isomorphisms of a group as conjugations."""
    A = load_group(group)
    psis = [parse_partial_iso(_read_text(text), A) for text in iso]
    result = hrushovski_extend(A, psis)
    _finish(build.extension_certificate(result, {"group": group, "isos": str(len(iso))}),
            out)


@app.command()
def amalgamate(spec: str = typer.Option(..., "--spec", help="Amalgam spec file."),
               equivariant: bool = typer.Option(False, "--equivariant/--plain"),
               out: Optional[str] = typer.Option(None, "--out")):
    """Amalgamate two embeddings A -> B, A -> C from a spec file."""
    parsed = parse_amalgam_spec(_read_text(spec), os.path.dirname(os.path.abspath(spec)))
    if len(parsed.embeddings) != 2:
        raise ParseError(f"the spec declares {len(parsed.embeddings)} embeddings, "
                         "expected two")
    (_, src_f, dst_f, f), (_, src_g, dst_g, g) = parsed.embeddings
    if src_f != src_g:
        raise ParseError("both embeddings must start at the same group")
    inputs = {"spec": spec, "equivariant": str(equivariant).lower()}
    if not equivariant:
        _finish(build.amalgam_certificate(amalgamate_groups(f, g), inputs), out)
        return
    systems = {name: EquivariantSystem(G, parsed.autos[name])
               for name, G in parsed.groups.items()}
    sys_a, sys_b, sys_c = systems[src_f], systems[dst_f], systems[dst_g]
    result = equivariant_amalgamate(sys_a, sys_b, sys_c,
                                    EquivariantEmbedding(f, sys_a, sys_b),
                                    EquivariantEmbedding(g, sys_a, sys_c))
    _finish(build.equivariant_certificate(result, inputs), out)


def _subgroup_and_maps(group: str, subgroup: str, alpha: str, beta: str):
    B = load_group(group)
    words = [w.strip() for w in subgroup.split(",") if w.strip()]
    A = subgroup_generated(B, [parse_word(B, w) for w in words], "A")
    alpha_hom = parse_automorphism(A, _read_text(alpha), alphabet=B)
    beta_hom = parse_automorphism(B, _read_text(beta))
    return A, B, alpha_hom, beta_hom


@app.command()
def commute(group: str = typer.Option(..., "--group"),
            subgroup: str = typer.Option(..., "--subgroup",
                                         help="Comma-separated generator words."),
            alpha: str = typer.Option(..., "--alpha", help="Map text or file."),
            beta: str = typer.Option(..., "--beta", help="Map text or file."),
            out: Optional[str] = typer.Option(None, "--out")):
    """Realize commuting automorphisms by commuting elements."""
    A, B, alpha_hom, beta_hom = _subgroup_and_maps(group, subgroup, alpha, beta)
    result = commuting_extension(A, B, alpha_hom, beta_hom)
    inputs = {"group": group, "subgroup": subgroup, "alpha": alpha, "beta": beta}
    _finish(build.commuting_certificate(result, inputs), out)


@app.command()
def root(group: str = typer.Option(..., "--group"),
         subgroup: str = typer.Option(..., "--subgroup"),
         alpha: str = typer.Option(..., "--alpha"),
         beta: str = typer.Option(..., "--beta"),
         n: int = typer.Option(..., "--n", min=1),
         out: Optional[str] = typer.Option(None, "--out")):
    """Extend alpha to gamma on D^n with gamma^n extending beta."""
    A, B, alpha_hom, beta_hom = _subgroup_and_maps(group, subgroup, alpha, beta)
    result = root_extension(A, B, alpha_hom, beta_hom, n)
    inputs = {"group": group, "subgroup": subgroup, "alpha": alpha, "beta": beta,
              "n": str(n)}
    _finish(build.root_certificate(result, inputs), out)


@app.command()
def tower(kind: str = typer.Option("hall", "--kind", help="hall or power."),
          depth: int = typer.Option(3, "--depth", min=0),
          n: int = typer.Option(2, "--n", min=1),
          seed: str = typer.Option("C3", "--seed"),
          alpha: Optional[str] = typer.Option(None, "--alpha",
                                              help="Seed automorphism (power tower)."),
          check_stage: List[int] = typer.Option([], "--check-stage",
                                                 help="Hall stage to conjugacy-check."),
          out: Optional[str] = typer.Option(None, "--out")):
    """Build a Hall tower or a power tower."""
    inputs = {"kind": kind, "depth": str(depth), "seed": seed}
    if kind == "hall":
        result = hall_tower(depth, load_group(seed))
        reports = [stage_conjugacy_check(result, k) for k in check_stage]
        _finish(build.hall_tower_certificate(result, reports, inputs), out)
    elif kind == "power":
        G = load_group(seed)
        if alpha is not None:
            g0 = parse_automorphism(G, _read_text(alpha))
        elif G.is_abelian():
            g0 = inversion_automorphism(G)
        else:
            g0 = identity_hom(G)
        schedule = config.limits.power_schedule
        stages = generic_power_tower(n, depth, EquivariantSystem(G, [g0]), schedule)
        inputs.update(n=str(n), alpha=alpha or "")
        _finish(build.power_tower_certificate(stages, n, schedule, inputs), out)
    else:
        raise click.BadParameter(f"unknown tower kind {kind!r}", param_hint="--kind")


@app.command()
def verify(path: str = typer.Argument(..., help="Certificate file.")):
    """Re-check every equation of a certificate."""
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    try:
        report = verify_certificate(text)
    except CertificateError as e:
        logger.error("%s", e)
        raise typer.Exit(EXIT_VERIFY)
    typer.echo(report.summary(), err=True)
    if not report.passed:
        raise typer.Exit(EXIT_VERIFY)


@app.command()
def catalog():
    """List the built-in groups."""
    for name in catalog_names():
        G = catalog_group(name)
        typer.echo(f"{name}\torder {G.order}\tdegree {G.degree}")


def cli_dispatch(argv: Optional[List[str]] = None) -> int:
    """Runs the CLI on `argv` and returns the exit code."""
    command = typer.main.get_command(app)
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        result = command.main(args, prog_name="hall-forge", standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return EXIT_CONSTRUCTION
    except click.exceptions.Abort:
        return EXIT_CONSTRUCTION
    except HallForgeError as e:
        logger.error("%s", e)
        return EXIT_CONSTRUCTION
    except (ValueError, OSError) as e:
        logger.error("%s", e)
        return EXIT_USAGE
    return result if isinstance(result, int) else EXIT_OK


def main():
    sys.exit(cli_dispatch())
