"""HTTP front end wrapping the simulator core.

Every endpoint is a thin adapter: parse the request model, call the same
functions the CLI uses, shape the response. Input problems map to 422,
runtime diagnostics (timing violations, event storms) to 409.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from ..kernel import DeliveryLimitError, SchedulingError, TimingError, ValidationError
from ..experiment import run_experiment
from ..margins import MarginSweepSpec, run_margin_sweep
from ..neuron import timing_parameter_names
from ..scenario import (
    bundled_scenario_names,
    load_scenario,
    run_scenario,
    scenario_from_dict,
    validate_scenario,
)
from .schemas import (
    DiagnosticModel,
    ExperimentRequest,
    SimulateRequest,
    SimulateResponse,
    SweepRequest,
    TraceEvent,
    ValidateRequest,
    ValidateResponse,
)


def _scenario_from(request: SimulateRequest | ValidateRequest):
    if request.bundled is not None:
        return load_scenario(request.bundled)
    return scenario_from_dict(request.scenario)


def _adapt_errors(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (TimingError, SchedulingError, DeliveryLimitError) as err:
        raise HTTPException(status_code=409, detail=str(err)) from None
    except ValidationError as err:
        raise HTTPException(status_code=422, detail=str(err)) from None


def create_app() -> FastAPI:
    app = FastAPI(title="sfqneuron", version="0.1.0")

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/scenarios")
    def scenarios() -> list[str]:
        return bundled_scenario_names()

    @app.post("/simulate", response_model=SimulateResponse)
    def simulate(request: SimulateRequest) -> SimulateResponse:
        scenario = _adapt_errors(_scenario_from, request)
        result = _adapt_errors(run_scenario, scenario)
        trace = None
        if request.include_trace:
            trace = [TraceEvent(time_fs=t, wire=w) for t, w in result.trace]
        return SimulateResponse(
            name=result.name,
            event_count=len(result.trace),
            fires_per_cycle=result.fires_per_cycle,
            expect_ok=result.expect_ok,
            golden_ok=result.golden_ok,
            passed=result.passed,
            trace=trace,
        )

    @app.post("/validate", response_model=ValidateResponse)
    def validate(request: ValidateRequest) -> ValidateResponse:
        scenario = _adapt_errors(_scenario_from, request)
        diags = _adapt_errors(validate_scenario, scenario)
        return ValidateResponse(
            name=scenario.name,
            ok=not diags,
            diagnostics=[
                DiagnosticModel(code=d.code, subject=d.subject, message=d.message)
                for d in diags
            ],
        )

    @app.post("/sweep")
    def sweep(request: SweepRequest) -> dict:
        spec = _adapt_errors(
            MarginSweepSpec,
            scenarios=request.scenarios,
            parameters=request.parameters or list(timing_parameter_names()),
            range_pct=request.range_pct,
            step_pct=request.step_pct,
        )
        return _adapt_errors(run_margin_sweep, spec)

    @app.post("/experiment")
    def experiment(request: ExperimentRequest) -> dict:
        return _adapt_errors(run_experiment, request.config)

    return app


app = create_app()
