#!/usr/bin/env python3
"""virtquad CLI - command-line interface for virtual quadratic spaces."""

import io
import logging
import random
from typing import Callable, Optional

import click
from rich.console import Console
from rich.markdown import Markdown
from rich.panel import Panel
from rich.table import Table

from virtquad import __version__, config
from virtquad.classify import block_decompose, canonical_form, class_census, count_singular_vectors
from virtquad.embedding import embed_ambient, minimalize
from virtquad.errors import InputError, ParityMismatch, VQSError
from virtquad.field import field_for_order
from virtquad.isometry import check_group_axioms, enumerate_cell, order_formula
from virtquad.models import CheckStatus, GroupOrderReport, RunConfig, Semantics
from virtquad.quadratic import QuadraticSpace, VirtualQuadraticSpace, is_nondegenerate_virtual
from virtquad.serialization import dumps, form_dict, parse_form
from virtquad.sweep import sweep
from virtquad.utils import format_order, prime_powers, setup_logging

console = Console()
err_console = Console(stderr=True)
logger = logging.getLogger("virtquad.cli")

COMMANDS = ("classify", "embed", "minimalize", "order", "enumerate", "census", "verify")


def _epsilon(form_type: Optional[str]) -> Optional[int]:
    if form_type is None:
        return None
    if form_type not in ("+", "-"):
        raise InputError(f"--type must be + or -, got {form_type}")
    return 1 if form_type == "+" else -1


def validate_config(cfg: RunConfig) -> None:
    """Check the flags a command needs before anything is computed."""
    if cfg.command not in COMMANDS:
        raise InputError(f"unknown command: {cfg.command}")
    if cfg.output not in ("json", "table"):
        raise InputError(f"--output must be json or table, got {cfg.output}")
    if cfg.command in ("order", "enumerate", "census"):
        if cfg.q is None or cfg.dim is None:
            raise InputError(f"{cfg.command} needs --q and --dim")
        if cfg.dim < 1:
            raise InputError(f"--dim must be at least 1, got {cfg.dim}")
        if not prime_powers(cfg.q, cfg.q):
            raise InputError(f"--q must be a prime power, got {cfg.q}")
    if cfg.command in ("order", "enumerate"):
        epsilon = _epsilon(cfg.form_type)
        if cfg.dim % 2 == 0 and epsilon is None:
            raise ParityMismatch(f"even dimension {cfg.dim} needs --type + or -")
        if cfg.dim % 2 == 1 and epsilon is not None:
            raise ParityMismatch(f"odd dimension {cfg.dim} takes no --type")
    if cfg.command == "verify":
        if cfg.qmax is None or cfg.dimmax is None:
            raise InputError("verify needs --qmax and --dimmax")
        if cfg.export_format not in ("json", "csv"):
            raise InputError(f"--format must be json or csv, got {cfg.export_format}")
    for name in ("budget_nodes", "max_dim", "max_q"):
        value = getattr(cfg, name)
        if value is not None and value < 1:
            raise InputError(f"--{name.replace('_', '-')} must be positive")


def _budget(cfg: RunConfig) -> config.Budget:
    return config.Budget.from_env().with_overrides(
        max_nodes=cfg.budget_nodes, max_dim=cfg.max_dim, max_q=cfg.max_q
    )


def _read_form(cfg: RunConfig):
    if cfg.input_path in (None, "-"):
        text = click.get_text_stream("stdin").read()
    else:
        try:
            with open(cfg.input_path) as f:
                text = f.read()
        except OSError as e:
            raise InputError(f"cannot read {cfg.input_path}: {e.strerror}") from e
    return parse_form(text)


def _render(*renderables) -> str:
    buffer = io.StringIO()
    out = Console(file=buffer, width=120, color_system=None)
    for r in renderables:
        out.print(r)
    return buffer.getvalue().rstrip("\n")


def _kv_table(title: str, rows: list[tuple[str, str]]) -> Table:
    table = Table(title=title, show_header=True, header_style="bold cyan")
    table.add_column("Metric")
    table.add_column("Value")
    for key, value in rows:
        table.add_row(key, value)
    return table


# command bodies: each returns (exit status, payload dict, table renderer)

def _classify(cfg: RunConfig, budget: config.Budget):
    parsed = _read_form(cfg)
    qs = parsed.form if isinstance(parsed, VirtualQuadraticSpace) else parsed
    report = canonical_form(qs, budget)
    payload = report.to_dict()
    payload["singular_vectors"] = str(count_singular_vectors(qs, budget))
    if qs.spec.is_even:
        blocks = block_decompose(qs)
        payload["blocks"] = [
            {"kind": b.kind, "a": str(b.a), "b": None if b.b is None else str(b.b)} for b in blocks.blocks
        ]

    def table() -> str:
        return _render(_kv_table("Classification", [
            ("Field", str(report.field)),
            ("Dimension", str(report.dim)),
            ("Kind", report.canonical_kind.value),
            ("Witt index", str(report.witt_index)),
            ("e", "-" if report.e_used is None else str(report.e_used)),
            ("Square class", "-" if report.square_class is None else report.square_class.value),
            ("Singular vectors", payload["singular_vectors"]),
        ]))

    return 0, payload, table


def _embed(cfg: RunConfig, budget: config.Budget):
    parsed = _read_form(cfg)
    qs: QuadraticSpace = parsed.form if isinstance(parsed, VirtualQuadraticSpace) else parsed
    vqs = embed_ambient(qs)
    _, dec = minimalize(vqs)
    payload = {
        "virtual_space": form_dict(vqs),
        "dim_u": qs.n,
        "dim_v": vqs.ambient.n,
        "dim_n": vqs.n_sub.dim,
        "minimal": True,
        "nondegenerate": is_nondegenerate_virtual(vqs),
        "decomposition": dec.to_dict(),
    }

    def table() -> str:
        return _render(_kv_table("Embedding", [
            ("dim U", str(qs.n)),
            ("dim V", str(vqs.ambient.n)),
            ("dim N", str(vqs.n_sub.dim)),
            ("Ambient form", str(vqs.ambient)),
            ("Non-degenerate", str(payload["nondegenerate"])),
        ]))

    return 0, payload, table


def _minimalize(cfg: RunConfig, budget: config.Budget):
    parsed = _read_form(cfg)
    if not isinstance(parsed, VirtualQuadraticSpace):
        raise InputError("minimalize needs a virtual space (a form with a \"subspace\")")
    result, dec = minimalize(parsed)
    payload = {"virtual_space": form_dict(result), "decomposition": dec.to_dict()}

    def table() -> str:
        rows = [(name, str(d["dim"])) for name, d in payload["decomposition"].items()]
        rows.append(("Minimal ambient form", str(result.ambient)))
        return _render(_kv_table("Minimal decomposition (dimensions)", rows))

    return 0, payload, table


def _order(cfg: RunConfig, budget: config.Budget):
    epsilon = _epsilon(cfg.form_type)
    semantics = cfg.semantics if cfg.dim % 2 else Semantics.CLASSICAL
    value = order_formula(cfg.q, cfg.dim, epsilon, semantics)
    payload = {
        "q": cfg.q,
        "dim": cfg.dim,
        "epsilon": epsilon,
        "semantics": semantics.value,
        "order": str(value),
    }

    def table() -> str:
        return _render(_kv_table("Group order", [
            ("q", str(cfg.q)),
            ("dim", str(cfg.dim)),
            ("type", cfg.form_type or "odd"),
            ("semantics", semantics.value),
            ("order", format_order(value)),
        ]))

    return 0, payload, table


def _enumerate(cfg: RunConfig, budget: config.Budget):
    epsilon = _epsilon(cfg.form_type)
    semantics = cfg.semantics if cfg.dim % 2 else Semantics.CLASSICAL
    iso = enumerate_cell(cfg.q, cfg.dim, epsilon, semantics, budget)
    report = GroupOrderReport(
        q=cfg.q, k=cfg.dim // 2, epsilon=epsilon, dim=cfg.dim, semantics=semantics,
        formula_value=order_formula(cfg.q, cfg.dim, epsilon, semantics),
        enumerated_value=iso.order,
    )
    report.status = CheckStatus.MATCH if report.match else CheckStatus.MISMATCH
    axioms = check_group_axioms(iso, random.Random(cfg.seed))
    payload = report.to_dict()
    payload["nodes"] = str(iso.nodes)
    payload["group_axioms"] = axioms
    status = 0 if report.match and axioms else 1

    def table() -> str:
        return _render(_kv_table("Enumeration", [
            ("q", str(cfg.q)),
            ("dim", str(cfg.dim)),
            ("type", report.type_label),
            ("semantics", semantics.value),
            ("formula", format_order(report.formula_value)),
            ("enumerated", format_order(iso.order)),
            ("nodes", format_order(iso.nodes)),
            ("group axioms", str(axioms)),
            ("match", str(report.match)),
        ]))

    return status, payload, table


def _census(cfg: RunConfig, budget: config.Budget):
    report = class_census(field_for_order(cfg.q), cfg.dim, budget)
    payload = report.to_dict()

    def table() -> str:
        table = Table(
            title=f"Census GF({cfg.q}) dim {cfg.dim}: {report.class_count} classes (expected {report.expected})",
            show_header=True, header_style="bold cyan",
        )
        for col in ("Kind", "Witt index", "Forms", "Square classes"):
            table.add_column(col)
        for c in report.classes:
            squares = ", ".join(f"{k}: {v}" for k, v in sorted(c.square_classes.items())) or "-"
            table.add_row(c.kind.value, str(c.witt_index), format_order(c.count), squares)
        return _render(table)

    return (0 if report.match else 1), payload, table


def _verify(cfg: RunConfig, budget: config.Budget):
    view = sweep(cfg.qmax, cfg.dimmax, budget).all()
    reports = view.reports
    payload = {"reports": [r.to_dict() for r in reports], "metadata": view.metadata()}
    if cfg.export_path:
        view.export(cfg.export_path, cfg.export_format)
    mismatch = any(r.status == CheckStatus.MISMATCH for r in reports)

    def table() -> str:
        table = Table(title="Group order verification", show_header=True, header_style="bold cyan")
        for col in ("q", "dim", "type", "semantics", "formula", "enumerated", "status"):
            table.add_column(col)
        style = {CheckStatus.MATCH: "green", CheckStatus.MISMATCH: "red", CheckStatus.SKIPPED: "yellow"}
        for r in reports:
            table.add_row(
                str(r.q), str(r.dim), r.type_label, r.semantics.value,
                format_order(r.formula_value),
                "-" if r.enumerated_value is None else format_order(r.enumerated_value),
                f"[{style[r.status]}]{r.status.value}[/{style[r.status]}]",
            )
        return _render(table)

    return (1 if mismatch else 0), payload, table


HANDLERS: dict[str, Callable] = {
    "classify": _classify,
    "embed": _embed,
    "minimalize": _minimalize,
    "order": _order,
    "enumerate": _enumerate,
    "census": _census,
    "verify": _verify,
}


def run(cfg: RunConfig) -> tuple[int, str]:
    """
    Validate the config, dispatch to the command and render the report.

    Returns the exit status (0 ok, 1 mismatch, 2 bad input, 3 budget) and
    the text for stdout. Errors are printed to stderr.
    """
    try:
        validate_config(cfg)
        status, payload, table = HANDLERS[cfg.command](cfg, _budget(cfg))
    except VQSError as e:
        err_console.print(f"[red]❌ Error:[/red] {e.msg}")
        err_console.print(f"[dim]{type(e).__name__}[/dim]")
        return e.exit_code, ""
    text = dumps(payload) if cfg.output == "json" else table()
    return status, text


def _finish(ctx: click.Context, cfg: RunConfig):
    status, text = run(cfg)
    if text:
        click.echo(text)
    ctx.exit(status)


def common_options(f):
    """Output, seed, budget and logging flags shared by every command."""
    options = [
        click.option("--output", default="json", type=click.Choice(["json", "table"]), help="Report format"),
        click.option("--seed", default=0, type=int, help="Seed for randomized checks"),
        click.option("--budget-nodes", default=None, type=int, help="Backtracking node cap"),
        click.option("--max-dim", default=None, type=int, help="Largest ambient dimension to enumerate"),
        click.option("--max-q", default=None, type=int, help="Largest field order to enumerate"),
        click.option("--verbose", is_flag=True, help="Debug logging on stderr"),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _base_config(command: str, output, seed, budget_nodes, max_dim, max_q, verbose, **extra) -> RunConfig:
    setup_logging(verbose)
    return RunConfig(
        command=command, output=output, seed=seed, budget_nodes=budget_nodes,
        max_dim=max_dim, max_q=max_q, **extra,
    )


@click.group(invoke_without_command=True)
@click.pass_context
@click.version_option(version=__version__)
def main(ctx):
    """
    virtquad - virtual quadratic spaces over finite fields

    Classify forms, embed them into minimal virtual spaces, and check the
    orthogonal group order formulas by exhaustive enumeration.
    """
    if ctx.invoked_subcommand is None:
        console.print(Panel.fit(
            "[bold cyan]virtquad[/bold cyan]\n\n"
            "Virtual quadratic spaces over finite fields\n\n"
            "[dim]Use --help for commands, `virtquad guide` to get started[/dim]",
            border_style="cyan",
        ))


def _form_command(name: str, summary: str):
    @main.command(name=name, help=summary)
    @click.option("--input", "input_path", default="-", help="Form JSON file, - for stdin")
    @common_options
    @click.pass_context
    def command(ctx, input_path, **kwargs):
        _finish(ctx, _base_config(name, input_path=input_path, **kwargs))

    return command


classify = _form_command("classify", "Reduce a trivial-radical form to its normal form.")
embed = _form_command("embed", "Embed a form into a minimal virtual quadratic space.")
minimalize_cmd = _form_command("minimalize", "Cut a virtual space down to its minimal ambient.")


def _semantics_option(f):
    return click.option(
        "--classical/--virtual", "classical", default=False,
        help="Iso(U) or Iso(V, U) for odd dimensions (default --virtual)",
    )(f)


@main.command()
@click.option("--q", "q", required=True, type=int, help="Field order")
@click.option("--dim", required=True, type=int, help="Dimension")
@click.option("--type", "form_type", default=None, type=click.Choice(["+", "-"]), help="Type for even dimensions")
@_semantics_option
@common_options
@click.pass_context
def order(ctx, q, dim, form_type, classical, **kwargs):
    """Print the exact group order from the closed formula."""
    semantics = Semantics.CLASSICAL if classical else Semantics.VIRTUAL
    _finish(ctx, _base_config("order", q=q, dim=dim, form_type=form_type, semantics=semantics, **kwargs))


@main.command(name="enumerate")
@click.option("--q", "q", required=True, type=int, help="Field order")
@click.option("--dim", required=True, type=int, help="Dimension")
@click.option("--type", "form_type", default=None, type=click.Choice(["+", "-"]), help="Type for even dimensions")
@_semantics_option
@common_options
@click.pass_context
def enumerate_cmd(ctx, q, dim, form_type, classical, **kwargs):
    """Enumerate the group by backtracking and compare with the formula."""
    semantics = Semantics.CLASSICAL if classical else Semantics.VIRTUAL
    _finish(ctx, _base_config("enumerate", q=q, dim=dim, form_type=form_type, semantics=semantics, **kwargs))


@main.command()
@click.option("--q", "q", required=True, type=int, help="Field order")
@click.option("--n", "dim", required=True, type=int, help="Dimension")
@common_options
@click.pass_context
def census(ctx, q, dim, **kwargs):
    """Count classes of non-degenerate virtual spaces (2 for even n, 1 for odd n)."""
    _finish(ctx, _base_config("census", q=q, dim=dim, **kwargs))


@main.command()
@click.option("--qmax", required=True, type=int, help="Largest field order")
@click.option("--dimmax", required=True, type=int, help="Largest dimension")
@click.option("--export", "export_path", default=None, help="Also write the reports to this file")
@click.option("--format", "export_format", default="json", type=click.Choice(["json", "csv"]), help="Export format")
@common_options
@click.pass_context
def verify(ctx, qmax, dimmax, export_path, export_format, **kwargs):
    """
    Compare every order formula with enumeration.

    Exits 1 when any cell mismatches; cells over budget are reported as skipped.
    """
    _finish(ctx, _base_config(
        "verify", qmax=qmax, dimmax=dimmax, export_path=export_path, export_format=export_format, **kwargs
    ))


@main.command()
def guide():
    """
    Quick start for first-time users.
    """
    guide_text = """
# virtquad Quick Start Guide

## What is virtquad?

virtquad works with quadratic forms over finite fields GF(p^d), in every
characteristic. A *virtual quadratic space* is a non-degenerate ambient
(V, Q) together with a subspace U; its isometries are the isometries of V
that fix U^perp pointwise.

## Form JSON

```json
{"field": {"p": 2, "d": 1}, "dim": 3, "coeffs": [[0,1,0],[0,0,0],[0,0,1]]}
```

`coeffs` is upper triangular: Q(x) = sum over i <= j of C_ij x_i x_j. Add
`"subspace": [[1,0,0,0], ...]` to describe a virtual space. Extension field
elements are coefficient lists, constant term first, or integer codes.

## Step-by-Step Example

1. **Classify a form:**
   ```bash
   virtquad classify --input form.json
   ```

2. **Embed it into a minimal virtual space:**
   ```bash
   virtquad embed --input form.json
   ```

3. **Exact group orders:**
   ```bash
   virtquad order --q 7 --dim 6 --type -
   ```

4. **Check a formula by enumeration:**
   ```bash
   virtquad enumerate --q 2 --dim 3 --virtual
   ```

5. **Sweep everything within budget:**
   ```bash
   virtquad verify --qmax 3 --dimmax 4 --output table
   ```

## Exit statuses

- **0** - success
- **1** - a verification mismatch
- **2** - invalid input
- **3** - budget exhausted

## Budgets

Exhaustive work is capped. Override with `--budget-nodes`, `--max-dim`,
`--max-q`, or the environment variables `VQS_BUDGET_NODES`, `VQS_MAX_DIM`,
`VQS_MAX_Q`, `VQS_MAX_SCAN`.

For more help: `virtquad --help`
"""

    console.print(Markdown(guide_text))


@main.command()
def examples():
    """
    Show usage examples.
    """
    examples_text = """
# virtquad Examples

## Classification

**The anisotropic plane over GF(2):**
```bash
echo '{"field": {"p": 2}, "dim": 2, "coeffs": [[1,1],[0,1]]}' | virtquad classify
```

## Group orders

**O-(6, 7), exactly:**
```bash
virtquad order --q 7 --dim 6 --type -
```

**Classical against virtual in characteristic 2:**
```bash
virtquad order --q 2 --dim 3 --classical
virtquad order --q 2 --dim 3 --virtual
```

## Census

```bash
virtquad census --q 3 --n 2 --output table
```

## Verification

**Export the sweep:**
```bash
virtquad verify --qmax 3 --dimmax 4 --export orders.csv --format csv
```
"""

    console.print(Markdown(examples_text))


if __name__ == '__main__':
    main()
