"""Command-line client for the dividend/injection solvers.

Every command talks to the HTTP service: against ``--server-url`` when given,
otherwise against an in-process application instance, so the CLI exercises
exactly the same code path as a deployed service (including the warm
scale-engine cache within one invocation).

Exit codes: 0 success, 2 configuration/domain error, 3 numerical failure.
"""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click

from .errors import DomainError
from .levy import paper_model

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class _Remote:
    """Minimal JSON-over-HTTP wrapper shared by both client flavors."""

    def __init__(self, server_url: str | None):
        if server_url:
            import httpx

            self._client = httpx.Client(base_url=server_url, timeout=600.0)
        else:
            from fastapi.testclient import TestClient

            from .service import create_app

            self._client = TestClient(create_app())

    def post(self, path: str, payload: dict) -> dict:
        resp = self._client.post(path, json=payload)
        if resp.status_code == 200:
            return resp.json()
        try:
            body = resp.json()
        except Exception:
            body = {"error": resp.text, "kind": "numerical"}
        detail = body.get("detail")
        if detail is not None:  # pydantic request validation
            click.echo(f"error: invalid request: {detail}", err=True)
            sys.exit(EXIT_CONFIG)
        click.echo(f"error: {body.get('error', 'unknown failure')}", err=True)
        sys.exit(EXIT_CONFIG if body.get("kind") == "domain" else EXIT_NUMERICAL)


def _load_model(path: str | None) -> dict:
    if path is None:
        return paper_model().to_dict()
    try:
        with open(path) as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        click.echo(f"error: cannot read model config {path}: {exc}", err=True)
        sys.exit(EXIT_CONFIG)


def _emit(data: dict, out: str | None) -> None:
    text = json.dumps(data, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        click.echo(text)


_model_opt = click.option("--model", "model_path", type=click.Path(), default=None,
                          help="Model config JSON; defaults to the built-in reference model.")
_q_opt = click.option("--q", type=float, required=True,
                      help="Discount rate (must be explicit; no silent default).")
_server_opt = click.option("--server-url", default=None,
                           help="Base URL of a running service; in-process when omitted.")
_out_opt = click.option("--out", type=click.Path(), default=None,
                        help="Output file (JSON commands) or directory (figure commands).")


@click.group()
def main() -> None:
    """Optimal dividends with capital injections: solvers, simulation, datasets."""


@main.command()
@_model_opt
@_q_opt
@_server_opt
@_out_opt
@click.option("--points", required=True,
              help="Comma-separated evaluation points, e.g. '0.5,1,2'.")
@click.option("--functions", default="w,w_prime,w_bar,z,z_bar,k,h",
              help="Comma-separated subset of w,w_prime,w_bar,z,z_bar,k,h.")
def scale(model_path, q, server_url, out, points, functions):
    """Evaluate the q-scale functions at the given points."""
    try:
        pts = [float(p) for p in points.split(",") if p.strip()]
    except ValueError as exc:
        click.echo(f"error: bad --points: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    remote = _Remote(server_url)
    data = remote.post("/scale/evaluate", {
        "model": _load_model(model_path), "q": q, "points": pts,
        "functions": [f.strip() for f in functions.split(",") if f.strip()],
    })
    _emit(data, out)


@main.command()
@_model_opt
@_q_opt
@_server_opt
@_out_opt
@click.option("--lam", type=float, required=True, help="Injection cost multiplier (>= 1).")
@click.option("--x", type=float, default=None, help="Initial capital for a value report.")
def barrier(model_path, q, server_url, out, lam, x):
    """Optimal barrier level and value for a given multiplier."""
    remote = _Remote(server_url)
    payload = {"model": _load_model(model_path), "q": q, "lam": lam}
    if x is not None:
        payload["x"] = x
    _emit(remote.post("/solve/barrier", payload), out)


@main.command()
@_model_opt
@_q_opt
@_server_opt
@_out_opt
@click.option("--lam", type=float, required=True, help="Injection cost multiplier (>= 1).")
@click.option("--delta", type=float, default=0.05, show_default=True,
              help="Fixed transaction cost per dividend payment.")
@click.option("--x", type=float, default=None, help="Initial capital for a value report.")
def thresholds(model_path, q, server_url, out, lam, delta, x):
    """Optimal reflected-pair thresholds (c1, c2) for a given multiplier."""
    remote = _Remote(server_url)
    payload = {"model": _load_model(model_path), "q": q, "lam": lam, "delta": delta}
    if x is not None:
        payload["x"] = x
    _emit(remote.post("/solve/thresholds", payload), out)


@main.command()
@_model_opt
@_q_opt
@_server_opt
@_out_opt
@click.option("--x", type=float, required=True, help="Initial capital.")
@click.option("--K", "K", type=float, default=2.7, show_default=True,
              help="Bound on expected discounted injections.")
@click.option("--delta", type=float, default=0.0, show_default=True,
              help="Fixed transaction cost (0 for the barrier family).")
def constrained(model_path, q, server_url, out, x, K, delta):
    """Solve the injection-constrained problem; infeasibility is a status, not a crash."""
    remote = _Remote(server_url)
    data = remote.post("/solve/constrained", {
        "model": _load_model(model_path), "q": q, "x": x, "K": K, "delta": delta})
    _emit(data, out)


def _sim_config(paths, time_step, horizon, seed, antithetic, correction) -> dict:
    cfg = {"n_paths": paths, "time_step": time_step, "seed": seed,
           "antithetic": antithetic, "boundary_correction": correction}
    if horizon is not None:
        cfg["horizon"] = horizon
    return cfg


_sim_opts = [
    click.option("--paths", type=int, default=10000, show_default=True),
    click.option("--time-step", type=float, default=1e-3, show_default=True),
    click.option("--horizon", type=float, default=None,
                 help="Simulation horizon; defaults to 6*ln(10)/q."),
    click.option("--seed", type=int, default=0, show_default=True),
    click.option("--antithetic/--no-antithetic", default=False, show_default=True),
    click.option("--boundary-correction/--no-boundary-correction", default=True,
                 show_default=True),
]


def _with(opts):
    def deco(f):
        for opt in reversed(opts):
            f = opt(f)
        return f
    return deco


@main.command()
@_model_opt
@_q_opt
@_server_opt
@_out_opt
@click.option("--x", type=float, required=True, help="Initial capital.")
@click.option("--policy", "policy_json", required=True,
              help='Policy JSON, e.g. \'{"type":"barrier","a":2.0}\' or '
                   '\'{"type":"pair","c1":1,"c2":3,"delta":0.05}\'.')
@_with(_sim_opts)
def simulate(model_path, q, server_url, out, x, policy_json,
             paths, time_step, horizon, seed, antithetic, boundary_correction):
    """Monte Carlo estimate of the dividend and injection streams of a policy."""
    try:
        policy = json.loads(policy_json)
    except json.JSONDecodeError as exc:
        click.echo(f"error: bad --policy JSON: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    remote = _Remote(server_url)
    data = remote.post("/simulate", {
        "model": _load_model(model_path), "q": q, "x": x, "policy": policy,
        "config": _sim_config(paths, time_step, horizon, seed,
                              antithetic, boundary_correction)})
    _emit(data, out)


@main.command("simulate-exit")
@_model_opt
@_q_opt
@_server_opt
@_out_opt
@click.option("--x", type=float, required=True)
@click.option("--b", type=float, required=True, help="Lower exit level (b <= x).")
@click.option("--a", type=float, required=True, help="Upper exit level (x <= a).")
@_with(_sim_opts)
def simulate_exit(model_path, q, server_url, out, x, b, a,
                  paths, time_step, horizon, seed, antithetic, boundary_correction):
    """Monte Carlo estimate of the two-sided exit identities."""
    remote = _Remote(server_url)
    data = remote.post("/simulate/exit", {
        "model": _load_model(model_path), "q": q, "x": x, "b": b, "a": a,
        "config": _sim_config(paths, time_step, horizon, seed,
                              antithetic, boundary_correction)})
    _emit(data, out)


def _figure_command(figure_id: int, help_text: str):
    @main.command(f"figure{figure_id}", help=help_text)
    @_model_opt
    @_q_opt
    @_server_opt
    @click.option("--out", type=click.Path(), required=True,
                  help="Output directory for the dataset tables.")
    @click.option("--K", "K", type=float, default=2.7, show_default=True)
    @click.option("--delta", type=float, default=None,
                  help="Transaction cost; command-specific default when omitted.")
    @click.option("--x-grid", default=None,
                  help="Comma-separated x grid overriding the default.")
    @click.option("--lambda-grid", default=None,
                  help="Comma-separated multiplier grid overriding the default.")
    @click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
                  default="csv", show_default=True)
    def _cmd(model_path, q, server_url, out, K, delta, x_grid, lambda_grid, fmt):
        payload = {"model": _load_model(model_path), "q": q, "K": K}
        if delta is not None:
            payload["delta"] = delta
        for key, raw in (("x_grid", x_grid), ("lambda_grid", lambda_grid)):
            if raw is not None:
                try:
                    payload[key] = [float(v) for v in raw.split(",") if v.strip()]
                except ValueError as exc:
                    click.echo(f"error: bad --{key.replace('_', '-')}: {exc}", err=True)
                    sys.exit(EXIT_CONFIG)
        remote = _Remote(server_url)
        data = remote.post(f"/figures/{figure_id}", payload)
        out_dir = Path(out)
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, table in data["tables"].items():
            path = out_dir / f"figure{figure_id}_{name}.{fmt}"
            if fmt == "csv":
                with open(path, "w", newline="") as f:
                    writer = csv.writer(f)
                    writer.writerow(table["headers"])
                    for row in table["rows"]:
                        writer.writerow(
                            ["" if v is None else (v if isinstance(v, str) else f"{v:.12g}")
                             for v in row])
            else:
                with open(path, "w") as f:
                    json.dump(table, f, indent=2)
                    f.write("\n")
            click.echo(str(path))

    return _cmd


_figure_command(1, "Dual-envelope curves lam*K + V_lam(x) without transaction cost.")
_figure_command(2, "Constrained value and multiplier surfaces over (x, K).")
_figure_command(3, "Slope curves zeta_lam(x) and optimal thresholds per multiplier.")
_figure_command(4, "Dual-envelope curves with transaction cost plus multiplier comparison.")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
