"""Command-line interface.

Every subcommand is a thin wrapper over the library: resolve inputs, call
one core function, print. Names prefixed with "@" are file paths; anything
else is a catalog name. Exit codes: 0 pass, 1 mismatch or domain failure,
2 usage error. TANGLE_SEED serves as the fallback seed.
"""

from __future__ import annotations

import json
import os
import sys

import click

from . import QcombError, __version__
from .evaluate import eval_brute, eval_planned
from .filter_ir import FilterDef, catalog as filter_catalog
from .filter_parser import parse as parse_filters, serialize
from .invariance import (
    check_permutation_invariance,
    check_product_vanishing,
    check_sl_invariance,
)
from .measures import (
    ConcurrenceReport,
    classify_max_entanglement,
    concurrence_mixed,
    concurrence_pure,
    tangle3,
)
from .statevec import PureState, load_density, load_state, to_density
from .states import catalog as state_catalog
from .table import DEFAULT_TABLE_TOL, compute_table, render_csv, render_json, render_markdown


def _default_seed() -> int:
    return int(os.environ.get("TANGLE_SEED", "0"))


def _echo_meta(**fields) -> None:
    parts = [f"qcomb {__version__}"] + [f"{k}={v}" for k, v in fields.items() if v is not None]
    click.echo(" ".join(parts), err=True)


def _resolve_filter(ref: str) -> FilterDef:
    if ref.startswith("@"):
        with open(ref[1:], "r", encoding="utf-8") as fh:
            filters = parse_filters(fh.read())
        if len(filters) != 1:
            raise QcombError(f"{ref[1:]}: expected exactly one filter, found {len(filters)}")
        return filters[0]
    return filter_catalog().get(ref)


def _resolve_state(ref: str) -> tuple[str, PureState]:
    if ref.startswith("@"):
        return ref[1:], load_state(ref[1:])
    return ref, state_catalog().get(ref)


def _print_json(payload: dict) -> None:
    click.echo(json.dumps(payload, indent=2))


@click.group()
@click.version_option(__version__, prog_name="qcomb")
def cli() -> None:
    """Comb/filter entanglement monotones on 1-6 qubit pure states."""


@cli.command("eval")
@click.option("--filter", "filter_ref", required=True, help="catalog name or @file")
@click.option("--state", "state_ref", required=True, help="catalog name or @file")
@click.option("--brute", is_flag=True, help="use the brute-force reference sum")
def eval_cmd(filter_ref: str, state_ref: str, brute: bool) -> None:
    """Evaluate one filter on one state."""
    _echo_meta(seed=None)
    f = _resolve_filter(filter_ref)
    label, s = _resolve_state(state_ref)
    value = eval_brute(f, s) if brute else eval_planned(f, s)
    click.echo(f"filter:  {f.name} (order {f.order}, degree {f.degree})")
    click.echo(f"state:   {label} (norm_sq {s.norm_sq!r})")
    click.echo(f"value:   {value.real!r} {value.imag:+}j")
    click.echo(f"modulus: {abs(value)!r}")


@cli.command("table")
@click.option("--format", "fmt", type=click.Choice(["md", "csv", "json"]), default="md")
@click.option("--tol", type=float, default=DEFAULT_TABLE_TOL, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
def table_cmd(fmt: str, tol: float, workers: int) -> None:
    """Reference-value grid; exits 0 only when every cell matches."""
    _echo_meta(tol=tol, workers=workers)
    report = compute_table(tol=tol, workers=workers)
    if fmt == "csv":
        click.echo(render_csv(report), nl=False)
    elif fmt == "json":
        _print_json({"meta": {"version": __version__, "tol": tol}, **render_json(report)})
    else:
        click.echo(render_markdown(report), nl=False)
    if not report.all_match:
        bad = ", ".join(f"{c.filter_name}/{c.state_name}" for c in report.mismatches())
        click.echo(f"MISMATCH: {bad}", err=True)
        sys.exit(1)


@cli.command("check")
@click.argument("kind", type=click.Choice(["product", "slocc", "perm"]))
@click.option("--filter", "filter_ref", required=True, help="catalog name or @file")
@click.option("--state", "state_ref", default=None, help="catalog name or @file (slocc/perm)")
@click.option("--samples", type=int, default=200, show_default=True)
@click.option("--seed", type=int, default=None, help="defaults to TANGLE_SEED or 0")
@click.option("--tol", type=float, default=None, help="per-check default when omitted")
@click.option("--workers", type=int, default=1, show_default=True)
def check_cmd(kind: str, filter_ref: str, state_ref: str | None, samples: int, seed: int | None, tol: float | None, workers: int) -> None:
    """Property checks: product vanishing, det-one invariance, permutations."""
    seed = _default_seed() if seed is None else seed
    f = _resolve_filter(filter_ref)
    meta = {"version": __version__, "seed": seed, "samples": samples, "workers": workers}
    if kind == "product":
        tol = 1e-10 if tol is None else tol
        _echo_meta(seed=seed, tol=tol, workers=workers)
        reports = [check_product_vanishing(f, trials=samples, seed=seed, tol=tol, workers=workers)]
    else:
        if state_ref is not None:
            states = [_resolve_state(state_ref)]
        else:
            cat = state_catalog()
            states = [(n, cat.get(n)) for n in cat.names_for_qubits(f.num_qubits)]
            if not states:
                raise QcombError(f"no catalog states on {f.num_qubits} qubits; give --state")
        if kind == "slocc":
            tol = 1e-8 if tol is None else tol
            _echo_meta(seed=seed, tol=tol, workers=workers)
            reports = [
                {"state": label, **check_sl_invariance(f, s, trials=samples, seed=seed, tol=tol, workers=workers)}
                for label, s in states
            ]
        else:
            tol = 1e-9 if tol is None else tol
            _echo_meta(seed=seed, tol=tol, workers=workers)
            reports = [{"state": label, **check_permutation_invariance(f, s, tol=tol)} for label, s in states]
    payload = {"meta": {**meta, "tol": tol}, "reports": reports}
    _print_json(payload)
    if any(r["pass"] is False for r in reports):
        sys.exit(1)


@cli.command("classify")
@click.option("--state", "state_ref", required=True, help="catalog name or @file")
@click.option("--tol", type=float, default=1e-8, show_default=True)
@click.option("--rank-tol", type=float, default=1e-10, show_default=True, help="eigenvalue cutoff for numerical rank")
@click.option("--seed", type=int, default=None, help="phase-test seed; defaults to TANGLE_SEED or 202")
def classify_cmd(state_ref: str, tol: float, rank_tol: float, seed: int | None) -> None:
    """Maximal-entanglement scan of every reduced density matrix."""
    seed = int(os.environ.get("TANGLE_SEED", "202")) if seed is None else seed
    _echo_meta(seed=seed, tol=tol, rank_tol=rank_tol)
    label, s = _resolve_state(state_ref)
    report = classify_max_entanglement(s, tol=tol, name=label, seed=seed, rank_tol=rank_tol)
    _print_json(
        {"meta": {"version": __version__, "seed": seed, "tol": tol, "rank_tol": rank_tol}, **report.as_dict()}
    )


@cli.command("concurrence")
@click.option("--state", "state_ref", default=None, help="catalog name or @file (pure state)")
@click.option("--rho", "rho_ref", default=None, help="@file with a density matrix")
def concurrence_cmd(state_ref: str | None, rho_ref: str | None) -> None:
    """Two-qubit concurrence: both pure filter forms and the mixed roof."""
    _echo_meta()
    if (state_ref is None) == (rho_ref is None):
        raise click.UsageError("give exactly one of --state or --rho")
    if rho_ref is not None:
        if not rho_ref.startswith("@"):
            raise click.UsageError("--rho expects @file")
        rho = load_density(rho_ref[1:])
        report = ConcurrenceReport(None, None, concurrence_mixed(rho))
    else:
        _, s = _resolve_state(state_ref)
        pure = concurrence_pure(s)
        report = ConcurrenceReport(pure.pure_value, pure.squared_value, concurrence_mixed(to_density(s)))
    _print_json({"meta": {"version": __version__}, **report.as_dict()})


@cli.command("tangle3")
@click.option("--state", "state_ref", required=True, help="catalog name or @file")
def tangle3_cmd(state_ref: str) -> None:
    """3-tangle via both filter forms and the polynomial oracle."""
    _echo_meta()
    _, s = _resolve_state(state_ref)
    _print_json({"meta": {"version": __version__}, **tangle3(s).as_dict()})


@cli.command("parse")
@click.argument("source", metavar="@FILE")
def parse_cmd(source: str) -> None:
    """Parse a filter file and print its canonical form."""
    _echo_meta()
    if not source.startswith("@"):
        raise click.UsageError("expected @file")
    with open(source[1:], "r", encoding="utf-8") as fh:
        text = fh.read()
    filters = parse_filters(text)
    for f in filters:
        click.echo(serialize(f))


@cli.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve_cmd(host: str, port: int) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


def main() -> None:
    try:
        cli(standalone_mode=False)
    except click.exceptions.Exit as exc:  # --help / --version
        sys.exit(exc.exit_code)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        sys.exit(2)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        sys.exit(130)
    except QcombError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
