"""FastAPI application exposing the solvers, simulator, and figure datasets.

The service keeps a small cache of ``ScaleEngine`` instances keyed by
(model, q) so repeated requests against the same model reuse the warm
scale-function grids instead of re-running the Laplace inversion.
"""

from __future__ import annotations

import math
import threading
from collections import OrderedDict

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import constrained as cs
from .. import datasets as ds
from .. import dividends as dv
from ..errors import DomainError, NumericalError
from ..scale import ScaleEngine
from ..simulate import simulate_exit, simulate_policy
from . import schemas as sc

_ENGINE_CACHE_SIZE = 8


class _EngineCache:
    """LRU cache of scale engines; engines themselves are thread-safe."""

    def __init__(self, maxsize: int = _ENGINE_CACHE_SIZE):
        self._lock = threading.Lock()
        self._entries: OrderedDict[tuple, ScaleEngine] = OrderedDict()
        self._maxsize = maxsize

    def get(self, spec: sc.ModelSpec, q: float) -> ScaleEngine:
        key = (spec.model_dump_json(), q)
        with self._lock:
            engine = self._entries.get(key)
            if engine is not None:
                self._entries.move_to_end(key)
                return engine
        engine = ScaleEngine(spec.to_model(), q)
        with self._lock:
            self._entries[key] = engine
            while len(self._entries) > self._maxsize:
                self._entries.popitem(last=False)
        return engine


def create_app() -> FastAPI:
    app = FastAPI(title="bailout-dividends",
                  description="Optimal dividends with capital injections and "
                              "fixed transaction costs for spectrally negative "
                              "Levy risk processes.")
    cache = _EngineCache()

    @app.exception_handler(DomainError)
    async def _domain_error(request: Request, exc: DomainError):
        body = sc.ErrorBody(error=str(exc), kind="domain")
        return JSONResponse(status_code=400, content=body.model_dump())

    @app.exception_handler(NumericalError)
    async def _numerical_error(request: Request, exc: NumericalError):
        body = sc.ErrorBody(error=str(exc), kind="numerical")
        return JSONResponse(status_code=500, content=body.model_dump())

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/scale/evaluate", response_model=sc.ScaleResponse)
    def scale_evaluate(req: sc.ScaleRequest) -> sc.ScaleResponse:
        engine = cache.get(req.model, req.q)
        values: dict[str, list[float]] = {}
        for name in req.functions:
            fn = getattr(engine, name)
            values[name] = [float(fn(x)) for x in req.points]
        return sc.ScaleResponse(points=req.points, values=values, phi=engine.phi)

    @app.post("/solve/barrier", response_model=sc.BarrierResponse)
    def solve_barrier(req: sc.BarrierRequest) -> sc.BarrierResponse:
        engine = cache.get(req.model, req.q)
        a = dv.optimal_barrier(engine, req.lam)
        value = None
        if req.x is not None:
            if a > 0:
                rep = dv.barrier_value(engine, req.lam, a, req.x)
                value = sc.ValueReportSpec.from_report(rep)
            elif engine.model.is_bounded_variation():
                # barrier at 0: pay x at once, then skim all premium income;
                # every jump is refilled by an injection
                div = req.x + engine.model.drift / engine.q
                inj = (engine.model.drift - engine.mean) / engine.q
                value = sc.ValueReportSpec(dividends_npv=div, injections_npv=inj,
                                           combined=div - req.lam * inj)
            # unbounded variation with a = 0 (lam = 1): the dividend and
            # injection streams are individually infinite, so no report
        return sc.BarrierResponse(a_lambda=a, value=value)

    @app.post("/solve/thresholds", response_model=sc.ThresholdsResponse)
    def solve_thresholds(req: sc.ThresholdsRequest) -> sc.ThresholdsResponse:
        engine = cache.get(req.model, req.q)
        th = dv.optimal_thresholds(engine, req.lam, req.delta)
        value = None
        if req.x is not None:
            pair = dv.ReflectedPair(th.c1, th.c2, req.delta)
            value = sc.ValueReportSpec.from_report(
                dv.pair_value(engine, req.lam, pair, req.x))
        return sc.ThresholdsResponse(c1=th.c1, c2=th.c2, a_lambda=th.a_lambda,
                                     g_max=th.g_max, foc_residual=th.foc_residual,
                                     match_residual=th.match_residual, value=value)

    @app.post("/solve/constrained", response_model=sc.ConstrainedResponse)
    def solve_constrained(req: sc.ConstrainedRequest) -> sc.ConstrainedResponse:
        engine = cache.get(req.model, req.q)
        sol = cs.solve(engine, req.x, req.K, delta=req.delta)
        value = None if math.isinf(sol.value) and sol.value < 0 else sol.value
        return sc.ConstrainedResponse(status=sol.status.value, value=value,
                                      lambda_star=sol.lambda_star,
                                      injections_check=sol.injections_check,
                                      policy=sc.PolicySpec.from_policy(sol.policy))

    @app.post("/simulate", response_model=sc.SimResultSpec)
    def simulate(req: sc.SimulateRequest) -> sc.SimResultSpec:
        result = simulate_policy(req.model.to_model(), req.policy.to_policy(),
                                 req.x, req.q, req.config.to_config())
        return sc.SimResultSpec.from_result(result)

    @app.post("/simulate/exit", response_model=sc.ExitResponse)
    def simulate_exit_endpoint(req: sc.ExitRequest) -> sc.ExitResponse:
        up, down = simulate_exit(req.model.to_model(), req.x, req.b, req.a,
                                 req.q, req.config.to_config())
        return sc.ExitResponse(up=sc.SimResultSpec.from_result(up),
                               down=sc.SimResultSpec.from_result(down))

    @app.post("/figures/{figure_id}", response_model=sc.FigureResponse)
    def figures(figure_id: int, req: sc.FigureRequest) -> sc.FigureResponse:
        engine = cache.get(req.model, req.q)
        dataset = ds.build_figure(engine, figure_id, K=req.K, delta=req.delta,
                                  x_grid=req.x_grid, lambda_grid=req.lambda_grid)
        tables = {}
        for name, (headers, rows) in dataset.items():
            safe_rows = [[v if isinstance(v, str) else _json_safe(v) for v in row]
                         for row in rows]
            tables[name] = sc.TableSpec(headers=headers, rows=safe_rows)
        return sc.FigureResponse(figure_id=figure_id, tables=tables)

    return app


def _json_safe(v: float):
    v = float(v)
    if math.isnan(v) or math.isinf(v):
        # strict JSON has no NaN/Infinity literals
        return None
    return v
