"""Batch command-line interface.

Subcommands parse one structured document (see :mod:`depthzero.inputs`),
dispatch to the computation layers, and emit a single report object on
stdout or to a file. Exit codes: 0 when every verdict passes, 1 when at
least one case fails, 2 on invalid input. ``sweep`` needs no document;
it drives the built-in catalogs.
"""

from __future__ import annotations

import random
import sys
import time
from pathlib import Path

import click

from depthzero.catalogs import (
    finite_order_matrices,
    group_catalog,
    module_family,
    torus_catalog,
    unramified_torus,
)
from depthzero.cohomology import (
    CapExceeded,
    corestriction,
    h1,
    h1_cyclic_closed_form,
    restriction,
    verify_transfer_compatibility,
)
from depthzero.galois import FiniteGroup
from depthzero.gmodule import permutation_module
from depthzero.inputs import DocumentError, SchemaError, parse_input
from depthzero.langlands import (
    TorusDatum,
    TorusError,
    archimedean_norm_check,
    center_dual,
    depth_zero_center_classes,
    kottwitz_quotient,
    random_archimedean_datum,
    random_archimedean_samples,
    verify_depth_zero_match,
    weakly_unramified_chars,
)
from depthzero.report import build_report


@click.group()
def main():
    """Depth-zero computations for tori over local fields.

    Every subcommand reads one JSON document (--input), runs its
    computation, and writes one report object with task, cases, verdict
    and timing_ms. `sweep` runs the built-in catalogs instead.
    """


def _io_options(fn):
    fn = click.option(
        "--no-timing",
        is_flag=True,
        help="Report timing_ms as 0, for byte-comparable output.",
    )(fn)
    fn = click.option(
        "--figures",
        type=click.Path(file_okay=False),
        default=None,
        help="Directory for cases.csv and rendered figures.",
    )(fn)
    fn = click.option(
        "--pretty", "fmt", flag_value="pretty", help="Human-readable report."
    )(fn)
    fn = click.option(
        "--json",
        "fmt",
        flag_value="json",
        default=True,
        help="Machine-readable report (default).",
    )(fn)
    fn = click.option(
        "--output",
        type=click.Path(dir_okay=False),
        default=None,
        help="Write the report here instead of stdout.",
    )(fn)
    return fn


def _input_option(fn):
    return click.option(
        "--input",
        "input_path",
        type=click.Path(exists=True, dir_okay=False),
        required=True,
        help="Path of the JSON input document.",
    )(fn)


def _finish(report, output, fmt, figures):
    text = report.to_json() if fmt == "json" else report.to_text()
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
    else:
        click.echo(text)
    if figures:
        from depthzero.figures import render_report_files

        for path in render_report_files(report.to_payload(), figures):
            click.echo(f"wrote {path}", err=True)
    sys.exit(0 if report.verdict == "pass" else 1)


def _execute(task_name, needs, runner, input_path, output, fmt, figures, no_timing):
    """Shared command body: parse, check sections, run, emit, exit."""
    try:
        text = Path(input_path).read_text(encoding="utf-8")
    except OSError as exc:
        click.echo(f"input error: {exc}", err=True)
        sys.exit(2)
    try:
        doc = parse_input(text)
        doc.require(*needs)
        start = time.perf_counter()
        cases = runner(doc)
        elapsed = 0 if no_timing else (time.perf_counter() - start) * 1000
        report = build_report(task_name, cases, elapsed, doc.echo())
    except DocumentError as exc:
        for err in exc.errors:
            click.echo(f"input error: {err}", err=True)
        sys.exit(2)
    except ValueError as exc:
        click.echo(f"input error: {exc}", err=True)
        sys.exit(2)
    except Exception as exc:  # pragma: no cover - defensive catch-all
        click.echo(f"internal error: {type(exc).__name__}: {exc}", err=True)
        sys.exit(2)
    _finish(report, output, fmt, figures)


def _named_subgroup(doc, key):
    name = doc.task.get(key)
    if name is None:
        return None, None
    if name not in doc.subgroups:
        raise DocumentError(
            [
                SchemaError(
                    f"task.{key}",
                    "unknown-name",
                    f"'{name}' is not a named subgroup",
                )
            ]
        )
    return name, doc.subgroups[name]


@main.command("h1")
@_input_option
@_io_options
def cmd_h1(input_path, output, fmt, figures, no_timing):
    """First cohomology of the document's module."""

    def runner(doc):
        name, sub = _named_subgroup(doc, "subgroup")
        label = "h1" if name is None else f"h1/{name}"
        result = h1(doc.group, doc.module, subgroup=sub)
        return [{"case": label, "group": result.group, "verdict": "pass"}]

    _execute("h1", ("group", "module"), runner, input_path, output, fmt, figures, no_timing)


@main.command("cor-check")
@_input_option
@_io_options
def cmd_cor_check(input_path, output, fmt, figures, no_timing):
    """Transfer identities: cor after res is the index, and the two
    corestriction expressions agree on classes for normal subgroups."""

    def runner(doc):
        group, module = doc.group, doc.module
        if doc.subgroups:
            named = doc.subgroups
        else:
            named = {
                "subgroup-" + "-".join(map(str, h)): h for h in group.subgroups()
            }
        full = h1(group, module)
        full_classes = list(full.all_classes())
        cases = []
        for name in sorted(named):
            sub = named[name]
            index = group.order // len(sub)
            failures = []
            for coords, z in full_classes:
                back = corestriction(restriction(z, sub))
                expected = full.class_of(z.scale(index))
                got = full.class_of(back)
                if got != expected:
                    failures.append(
                        {
                            "identity": "cor-res-index",
                            "class": list(coords),
                            "cocycle": z.table,
                            "got": list(got),
                            "expected": list(expected),
                        }
                    )
            if group.is_normal(sub):
                sub_classes = h1(group, module, subgroup=sub)
                for coords, z in sub_classes.all_classes():
                    a = corestriction(z, method="double_coset")
                    b = corestriction(z, method="normalized")
                    if full.class_of(a) != full.class_of(b):
                        failures.append(
                            {
                                "identity": "two-expressions",
                                "class": list(coords),
                                "cocycle": z.table,
                                "double_coset": list(full.class_of(a)),
                                "normalized": list(full.class_of(b)),
                            }
                        )
            case = {
                "case": f"cor/{name}",
                "subgroup": list(sub),
                "index": index,
                "classes": len(full_classes),
                "verdict": "fail" if failures else "pass",
            }
            if failures:
                case["counterexample"] = failures[0]
            cases.append(case)
        return cases

    _execute(
        "cor-check", ("group", "module"), runner, input_path, output, fmt, figures, no_timing
    )


@main.command("prop18-check")
@_input_option
@_io_options
def cmd_prop18_check(input_path, output, fmt, figures, no_timing):
    """Transfer against averaging on subgroup chains.

    With subgroups named "inner" and "middle" the single chain
    inner <= middle <= G is checked (inner normal in G); otherwise
    every chain in the document's named subgroups, or in the full
    subgroup lattice when none are named.
    """

    def runner(doc):
        group, module = doc.group, doc.module
        if "inner" in doc.subgroups and "middle" in doc.subgroups:
            chains = [(doc.subgroups["inner"], doc.subgroups["middle"])]
        else:
            pool = (
                sorted(doc.subgroups.values())
                if doc.subgroups
                else group.subgroups()
            )
            chains = [
                (hk, he)
                for hk in pool
                if group.is_normal(hk)
                for he in pool
                if set(hk) <= set(he)
            ]
        cases = []
        for hk, he in chains:
            label = (
                "prop18/k=" + "-".join(map(str, hk)) + "/e=" + "-".join(map(str, he))
            )
            rep = verify_transfer_compatibility(group, he, hk, module)
            case = {
                "case": label,
                "classes": rep.cases,
                "verdict": "pass" if rep.ok else "fail",
            }
            if not rep.ok:
                coords, table, lhs, rhs = rep.counterexamples[0]
                case["counterexample"] = {
                    "class": list(coords),
                    "cocycle": table,
                    "lhs_class": list(lhs),
                    "rhs_class": list(rhs),
                }
            cases.append(case)
        return cases

    _execute(
        "prop18-check",
        ("group", "module"),
        runner,
        input_path,
        output,
        fmt,
        figures,
        no_timing,
    )


def _torus_from(doc):
    return TorusDatum(field=doc.local_datum, cochar=doc.module)


@main.command("depth-zero")
@_input_option
@_io_options
def cmd_depth_zero(input_path, output, fmt, figures, no_timing):
    """Compare character-side and parameter-side depth-zero pieces."""

    def runner(doc):
        rep = verify_depth_zero_match(_torus_from(doc), level=doc.task.get("level"))
        cases = []
        for piece in rep.pieces:
            case = {
                "case": piece.name,
                "character_side": piece.character_side,
                "parameter_side": piece.parameter_side,
                "verdict": piece.verdict,
            }
            if piece.verdict == "fail":
                case["counterexample"] = {
                    "character_side": piece.character_side,
                    "parameter_side": piece.parameter_side,
                }
            cases.append(case)
        return cases

    _execute(
        "depth-zero",
        ("group", "local_datum", "module"),
        runner,
        input_path,
        output,
        fmt,
        figures,
        no_timing,
    )


@main.command("wur")
@_input_option
@_io_options
def cmd_wur(input_path, output, fmt, figures, no_timing):
    """Weakly unramified characters of the document's torus."""

    def runner(doc):
        torus = _torus_from(doc)
        return [
            {
                "case": "weakly-unramified-characters",
                "value_group": kottwitz_quotient(torus),
                "group": weakly_unramified_chars(torus),
                "verdict": "pass",
            }
        ]

    _execute(
        "wur",
        ("group", "local_datum", "module"),
        runner,
        input_path,
        output,
        fmt,
        figures,
        no_timing,
    )


@main.command("center")
@_input_option
@_io_options
def cmd_center(input_path, output, fmt, figures, no_timing):
    """Center of the dual group; central depth-zero classes when the
    document also carries a local datum."""

    def runner(doc):
        center = center_dual(doc.root_datum)
        cases = [
            {
                "case": "center-dual",
                "group": center.underlying_group(),
                "verdict": "pass",
            }
        ]
        if doc.local_datum is not None:
            classes = depth_zero_center_classes(
                doc.root_datum, doc.local_datum, level=doc.task.get("level")
            )
            cases.append(
                {"case": "depth-zero-center", "group": classes, "verdict": "pass"}
            )
        return cases

    _execute(
        "center",
        ("group", "root_datum"),
        runner,
        input_path,
        output,
        fmt,
        figures,
        no_timing,
    )


def _as_complex(value):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, list) and len(value) == 2:
        return complex(value[0], value[1])
    raise ValueError(f"bad complex entry {value!r}")


@main.command("arch-check")
@_input_option
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=0, show_default=True)
@_io_options
def cmd_arch_check(input_path, output, fmt, figures, no_timing, seed):
    """Numerical check of the archimedean norm identity.

    Sample points come from the task section ("sample_points"), or are
    drawn at random (task keys "samples" and "bound", default 200 points
    with entries bounded by 5)."""

    def runner(doc):
        datum = doc.archimedean
        task = doc.task
        tolerance = float(task.get("tolerance", 1e-9))
        explicit = task.get("sample_points")
        if explicit is not None:
            samples = [tuple(_as_complex(x) for x in vec) for vec in explicit]
        else:
            rng = random.Random(seed)
            samples = random_archimedean_samples(
                rng,
                datum.rank,
                int(task.get("samples", 200)),
                bound=float(task.get("bound", 5.0)),
            )
        rep = archimedean_norm_check(datum, samples, tolerance=tolerance)
        case = {
            "case": "archimedean-norm-identity",
            "samples": rep.samples,
            "max_deviation": rep.max_deviation,
            "tolerance": rep.tolerance,
            "verdict": "pass" if rep.ok else "fail",
        }
        if not rep.ok:
            case["counterexample"] = {"input": rep.worst_input}
        return [case]

    _execute(
        "arch-check", ("archimedean",), runner, input_path, output, fmt, figures, no_timing
    )


def _q_char(q):
    """The residue characteristic of a prime-power q; rejects the rest."""
    p = next(d for d in range(2, q + 1) if q % d == 0)
    n = q
    while n % p == 0:
        n //= p
    if n != 1:
        raise ValueError(f"q = {q} is not a prime power")
    return p


def _parse_q_list(text):
    text = text.strip()
    if not text:
        return []
    out = []
    for part in text.split(","):
        q = int(part.strip())
        if not 2 <= q <= 13:
            raise DocumentError(
                [SchemaError("--q", "q-range", f"q = {q} outside 2..13")]
            )
        _q_char(q)
        out.append(q)
    return out


@main.command("sweep")
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=0, show_default=True)
@click.option(
    "--max-order",
    type=click.IntRange(0, 12),
    default=12,
    show_default=True,
    help="Largest catalog group order (cap 12).",
)
@click.option(
    "--q",
    "q_text",
    default="2,3,5",
    show_default=True,
    help="Comma-separated residue field sizes (prime powers, 2..13).",
)
@click.option(
    "--max-rank",
    type=click.IntRange(0, 3),
    default=3,
    show_default=True,
    help="Largest lattice rank (cap 3).",
)
@_io_options
def cmd_sweep(seed, max_order, q_text, max_rank, output, fmt, figures, no_timing):
    """Catalog-driven verification sweep.

    Runs Shapiro vanishing, cyclic closed forms on a seeded sample of
    the module family, character duality on the named tori, the
    depth-zero match over the finite-order matrix catalog, and the
    archimedean identity. Deterministic for a fixed seed."""
    try:
        q_list = _parse_q_list(q_text)
    except DocumentError as exc:
        for err in exc.errors:
            click.echo(f"input error: {err}", err=True)
        sys.exit(2)
    except ValueError as exc:
        click.echo(f"input error: --q: {exc}", err=True)
        sys.exit(2)

    rng = random.Random(seed)
    cases = []
    start = time.perf_counter()

    groups = group_catalog(max_order)
    for name in sorted(groups, key=lambda n: (groups[n].order, n)):
        g = groups[name]
        res = h1(g, permutation_module(g, (g.identity,)))
        cases.append(
            {
                "case": f"shapiro/{name}",
                "group": res.group,
                "verdict": "pass" if res.group.is_trivial() else "fail",
            }
        )

    if max_rank >= 1:
        for n in range(2, min(8, max_order) + 1):
            g = FiniteGroup.cyclic(n)
            family = module_family(g, max_rank=min(2, max_rank), max_order=9)
            picks = rng.sample(range(len(family)), k=min(6, len(family)))
            for idx in sorted(picks):
                module = family[idx]
                label = f"cyclic/C{n}/{module.name}"
                try:
                    engine = h1(g, module).group
                except CapExceeded as exc:
                    cases.append(
                        {"case": label, "detail": str(exc), "verdict": "not-computed"}
                    )
                    continue
                closed = h1_cyclic_closed_form(module)
                cases.append(
                    {
                        "case": label,
                        "group": engine,
                        "verdict": "pass" if engine == closed else "fail",
                    }
                )

    for name, torus in sorted(torus_catalog().items()):
        if torus.rank > max_rank:
            continue
        try:
            chars = weakly_unramified_chars(torus)
            cases.append(
                {"case": f"duality/{name}", "group": chars, "verdict": "pass"}
            )
        except TorusError as exc:
            cases.append(
                {"case": f"duality/{name}", "detail": str(exc), "verdict": "fail"}
            )

    for r in range(1, min(3, max_rank) + 1):
        for mat_name, sigma in finite_order_matrices(r):
            for q in q_list:
                p = _q_char(q)
                label = f"depth-zero/r{r}/{mat_name}/q{q}"
                try:
                    rep = verify_depth_zero_match(unramified_torus(sigma, p, q))
                except CapExceeded as exc:
                    cases.append(
                        {"case": label, "detail": str(exc), "verdict": "not-computed"}
                    )
                    continue
                cases.append(
                    {
                        "case": label,
                        "pieces": {
                            piece.name: {
                                "character_side": piece.character_side,
                                "parameter_side": piece.parameter_side,
                            }
                            for piece in rep.pieces
                        },
                        "verdict": "pass" if rep.ok else "fail",
                    }
                )

    for r in range(1, min(3, max_rank) + 1):
        datum = random_archimedean_datum(rng, r)
        samples = random_archimedean_samples(rng, r, 20)
        rep = archimedean_norm_check(datum, samples)
        cases.append(
            {
                "case": f"arch/r{r}",
                "samples": rep.samples,
                "max_deviation": rep.max_deviation,
                "verdict": "pass" if rep.ok else "fail",
            }
        )

    cases.sort(key=lambda c: c["case"])
    elapsed = 0 if no_timing else (time.perf_counter() - start) * 1000
    report = build_report(
        "sweep",
        cases,
        elapsed,
        {"seed": seed, "max_order": max_order, "q": q_list, "max_rank": max_rank},
    )
    _finish(report, output, fmt, figures)


if __name__ == "__main__":
    main()
