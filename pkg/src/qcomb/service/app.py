"""FastAPI service exposing the evaluation engine over HTTP."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import QcombError, __version__
from ..evaluate import eval_brute, eval_planned
from ..filter_ir import FilterDef, catalog as filter_catalog
from ..filter_parser import parse as parse_filters, serialize
from ..invariance import (
    check_permutation_invariance,
    check_product_vanishing,
    check_sl_invariance,
)
from ..measures import (
    ConcurrenceReport,
    classify_max_entanglement,
    concurrence_mixed,
    concurrence_pure,
    tangle3,
)
from ..statevec import PureState, parse_density_text, parse_state_text, to_density
from ..states import catalog as state_catalog
from ..table import DEFAULT_TABLE_TOL, compute_table, render_json
from . import schemas


def _resolve_filter(name: str | None, source: str | None) -> FilterDef:
    if name is not None:
        return filter_catalog().get(name)
    filters = parse_filters(source or "")
    if len(filters) != 1:
        raise QcombError(f"inline source must define exactly one filter, found {len(filters)}")
    return filters[0]


def _resolve_state(name: str | None, text: str | None) -> tuple[str, PureState]:
    if name is not None:
        return name, state_catalog().get(name)
    return "<inline>", parse_state_text(text or "")


def create_app() -> FastAPI:
    app = FastAPI(title="qcomb", version=__version__)

    @app.exception_handler(QcombError)
    async def _domain_error(_: Request, exc: QcombError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return {"status": "ok", "version": __version__}

    @app.get("/filters", response_model=list[schemas.FilterInfo])
    def list_filters():
        return [
            {
                "name": f.name,
                "num_qubits": f.num_qubits,
                "order": f.order,
                "degree": f.degree,
                "prefactor": f"{f.prefactor.numerator}/{f.prefactor.denominator}",
                "labels": list(f.labels),
            }
            for f in filter_catalog()
        ]

    @app.get("/filters/{name}", response_model=schemas.ParsedFilter)
    def get_filter(name: str):
        f = filter_catalog().get(name)
        return {
            "name": f.name,
            "num_qubits": f.num_qubits,
            "order": f.order,
            "degree": f.degree,
            "labels": list(f.labels),
            "canonical": serialize(f),
        }

    @app.get("/states", response_model=list[schemas.StateInfo])
    def list_states():
        return [
            {
                "name": e.name,
                "num_qubits": e.num_qubits,
                "length": e.length,
                "normalized": e.normalized,
            }
            for e in state_catalog()
        ]

    @app.post("/eval", response_model=schemas.EvalResponse)
    def eval_filter(req: schemas.EvalRequest):
        f = _resolve_filter(req.filter_name, req.filter_source)
        state_label, s = _resolve_state(req.state_name, req.state_text)
        value = eval_brute(f, s) if req.brute else eval_planned(f, s)
        return {
            "filter": f.name,
            "state": state_label,
            "value_re": value.real,
            "value_im": value.imag,
            "modulus": abs(value),
            "degree": f.degree,
        }

    @app.get("/table")
    def table(tol: float = DEFAULT_TABLE_TOL, workers: int = 1):
        return render_json(compute_table(tol=tol, workers=workers))

    @app.post("/check")
    def check(req: schemas.CheckRequest):
        f = _resolve_filter(req.filter_name, req.filter_source)
        if req.check == "product":
            tol = req.tol if req.tol is not None else 1e-10
            return check_product_vanishing(f, trials=req.samples, seed=req.seed, tol=tol, workers=req.workers)
        if req.state_name is None and req.state_text is None:
            raise QcombError(f"{req.check} checks need a state")
        _, s = _resolve_state(req.state_name, req.state_text)
        if req.check == "slocc":
            tol = req.tol if req.tol is not None else 1e-8
            return check_sl_invariance(f, s, trials=req.samples, seed=req.seed, tol=tol, workers=req.workers)
        tol = req.tol if req.tol is not None else 1e-9
        return check_permutation_invariance(f, s, tol=tol)

    @app.post("/classify")
    def classify(req: schemas.ClassifyRequest):
        label, s = _resolve_state(req.state_name, req.state_text)
        report = classify_max_entanglement(
            s, tol=req.tol, name=label, seed=req.seed, rank_tol=req.rank_tol
        )
        return report.as_dict()

    @app.post("/concurrence", response_model=schemas.ConcurrenceResponse)
    def concurrence(req: schemas.ConcurrenceRequest):
        if req.rho_text is not None:
            rho = parse_density_text(req.rho_text)
            report = ConcurrenceReport(None, None, concurrence_mixed(rho))
        else:
            _, s = _resolve_state(req.state_name, req.state_text)
            pure = concurrence_pure(s)
            report = ConcurrenceReport(
                pure.pure_value, pure.squared_value, concurrence_mixed(to_density(s))
            )
        return report.as_dict()

    @app.post("/tangle3", response_model=schemas.Tangle3Response)
    def tangle(req: schemas.Tangle3Request):
        _, s = _resolve_state(req.state_name, req.state_text)
        report = tangle3(s)
        values = (report.via_first_form, report.via_symmetric_form, report.via_polynomial)
        return {
            "via_F3_1": report.via_first_form,
            "via_F3_2": report.via_symmetric_form,
            "via_polynomial": report.via_polynomial,
            "agree": max(values) - min(values) < 1e-9,
        }

    @app.post("/parse", response_model=schemas.ParseResponse)
    def parse_source(req: schemas.ParseRequest):
        filters = parse_filters(req.source)
        return {
            "filters": [
                {
                    "name": f.name,
                    "num_qubits": f.num_qubits,
                    "order": f.order,
                    "degree": f.degree,
                    "labels": list(f.labels),
                    "canonical": serialize(f),
                }
                for f in filters
            ]
        }

    return app


app = create_app()
