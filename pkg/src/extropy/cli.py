"""Command-line front end.

Subcommands: measure | curve | bivariate | transform | claims | mc.
Distribution specs are JSON documents, inline or in a file; see the
distributions and bivariate modules for the schemas.  Output is a table in
JSON or CSV (12 significant digits in CSV; -inf rendered as the literal
string "-inf" in both).  Exit codes: 0 success, 2 validation error,
3 numerical failure, 4 claim violations present under --strict.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import claims as cl
from . import distributions as ds
from . import measures as ms
from . import transforms as tf
from .bivariate import (
    bivariate_extropy,
    bivariate_weighted_extropy,
    independence_factorization_check,
    make_bivariate,
)
from .quadrature import (
    DivergenceUndecidedError,
    EvaluationBudgetError,
    EvaluationError,
)
from .reporting import VIOLATED

__all__ = ["main", "RunConfig"]

_BIVARIATE_MEASURES = ("bivariate_extropy", "bivariate_weighted_extropy")


@dataclass(frozen=True)
class RunConfig:
    """Parsed invocation; together with the seed it fully determines output."""

    command: str
    dist_specs: tuple[str, ...]
    measures: tuple[str, ...]
    claims: tuple[str, ...]
    transform: str | None
    t: float | None
    grid: str | None
    tol: float | None
    n: int
    seed: int
    fmt: str
    out: str | None
    strict: bool
    method: str

    def __post_init__(self):
        if self.tol is not None and self.tol < 1e-12:
            raise ds.ValidationError("tolerance override must be >= 1e-12")


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="extropy",
        description="Extropy-family information measures for lifetime distributions.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("measure", "compute measures of one distribution"),
        ("curve", "tabulate a t-indexed measure over a grid"),
        ("bivariate", "bivariate extropy measures of a joint distribution"),
        ("transform", "measures under a monotone transform"),
        ("claims", "run claim checks"),
        ("mc", "Monte-Carlo estimates against quadrature references"),
    ]:
        q = sub.add_parser(name, help=help_)
        q.add_argument("--dist", action="append", default=[],
                       help="distribution spec: inline JSON or a path to a JSON file "
                            "(repeatable where a claim needs two)")
        q.add_argument("--measure", default=None,
                       help="comma-separated measure identifiers")
        q.add_argument("--t", type=float, default=None, help="conditioning time")
        q.add_argument("--grid", default=None,
                       help="t-grid: lo:hi:n (linear) or geometric:lo:hi:n")
        q.add_argument("--claims", default=None, help="comma-separated claim identifiers")
        q.add_argument("--transform", default=None,
                       help="transform name: scale:a | affine:a,b | square | exp | pit")
        q.add_argument("--tol", type=float, default=None, help="tolerance override (>= 1e-12)")
        q.add_argument("--seed", type=int, default=0, help="RNG seed (mc)")
        q.add_argument("--n", type=int, default=10**6, help="Monte-Carlo sample count")
        q.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
        q.add_argument("--out", default=None, help="output path (default stdout)")
        q.add_argument("--strict", action="store_true",
                       help="exit 4 when any claim verdict is 'violated'")
        q.add_argument("--method", choices=("auto", "quadrature"), default="auto",
                       help="force the quadrature path instead of closed forms")
    return p


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    def split(s):
        return tuple(x.strip() for x in s.split(",") if x.strip()) if s else ()

    return RunConfig(
        command=args.command, dist_specs=tuple(args.dist),
        measures=split(args.measure), claims=split(args.claims),
        transform=args.transform, t=args.t, grid=args.grid, tol=args.tol,
        n=args.n, seed=args.seed, fmt=args.fmt, out=args.out,
        strict=args.strict, method=args.method)


def _load_spec(text: str) -> dict:
    s = text.strip()
    if s.startswith("{"):
        try:
            return json.loads(s)
        except json.JSONDecodeError as exc:
            raise ds.ValidationError(f"invalid inline JSON spec: {exc}") from exc
    try:
        with open(s, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ds.ValidationError(f"cannot read spec file {s!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ds.ValidationError(f"invalid JSON in spec file {s!r}: {exc}") from exc


def _one_dist(cfg: RunConfig) -> ds.UnivariateDistribution:
    if len(cfg.dist_specs) != 1:
        raise ds.ValidationError(
            f"command {cfg.command!r} needs exactly one --dist, got {len(cfg.dist_specs)}")
    return ds.make_distribution(_load_spec(cfg.dist_specs[0]))


def _parse_grid(cfg: RunConfig, dist) -> np.ndarray:
    if cfg.grid is None:
        if cfg.t is not None:
            return np.asarray([cfg.t])
        return ms.default_t_grid(dist)
    spec = cfg.grid
    geometric = spec.startswith("geometric:")
    body = spec.split(":", 1)[1] if geometric else spec
    parts = body.split(":")
    if len(parts) != 3:
        raise ds.ValidationError(
            f"grid spec {spec!r} must be lo:hi:n or geometric:lo:hi:n")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ds.ValidationError(f"grid spec {spec!r} has non-numeric fields") from exc
    if not (lo < hi and n >= 2):
        raise ds.ValidationError("grid needs lo < hi and n >= 2")
    if geometric:
        if lo <= 0:
            raise ds.ValidationError("geometric grid needs lo > 0")
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


# -- value rendering -----------------------------------------------------------

def _json_value(v):
    if isinstance(v, float):
        if math.isinf(v):
            return "-inf" if v < 0 else "inf"
        if math.isnan(v):
            return "nan"
    return v


def _render_json(meta: dict, rows: list[dict]) -> str:
    doc = {**meta, "rows": [{k: _json_value(v) for k, v in r.items()} for r in rows]}
    return json.dumps(doc, indent=2) + "\n"


def _csv_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, dict):
        return json.dumps({k: _json_value(x) for k, x in sorted(v.items())})
    return "" if v is None else str(v)


def _render_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    fields = list(rows[0].keys())
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        w.writerow([_csv_cell(r.get(k)) for k in fields])
    return buf.getvalue()


def _mv_row(mv: ms.MeasureValue) -> dict:
    return {"value": mv.value, "abs_error": mv.abs_error,
            "method": mv.method, "diverged": mv.diverged}


def _claim_row(rep, dist_label: str, t) -> dict:
    return {"claim": rep.claim_id, "dist": dist_label, "t": t,
            "lhs": rep.lhs, "rhs": rep.rhs, "gap": rep.gap,
            "verdict": rep.verdict, "notes": rep.notes, "extras": dict(rep.extras)}


# -- subcommands ---------------------------------------------------------------

def _cmd_measure(cfg: RunConfig):
    dist = _one_dist(cfg)
    if not cfg.measures:
        raise ds.ValidationError(
            f"--measure required; valid measures: {', '.join(ds.MEASURE_IDS)}")
    force = cfg.method == "quadrature"
    tol = cfg.tol if cfg.tol is not None else ms.ENGINE_TOL
    rows = []
    for mid in cfg.measures:
        mv = ms.compute_measure(dist, mid, t=cfg.t, force_quadrature=force, tol=tol)
        rows.append({"measure": mid, **_mv_row(mv)})
    return {"command": "measure", "dist": dist.label}, rows


def _cmd_curve(cfg: RunConfig):
    dist = _one_dist(cfg)
    if len(cfg.measures) != 1:
        raise ds.ValidationError(
            "curve needs exactly one --measure; t-indexed measures: "
            + ", ".join(ds.T_INDEXED_MEASURES))
    mid = cfg.measures[0]
    if mid not in ds.T_INDEXED_MEASURES:
        raise ds.ValidationError(
            f"{mid!r} is not t-indexed; t-indexed measures: "
            + ", ".join(ds.T_INDEXED_MEASURES))
    force = cfg.method == "quadrature"
    tol = cfg.tol if cfg.tol is not None else ms.ENGINE_TOL
    rows = []
    for t in _parse_grid(cfg, dist):
        row = {"t": float(t), "value": None, "abs_error": None,
               "method": None, "diverged": None, "error": ""}
        try:
            mv = ms.compute_measure(dist, mid, t=float(t), force_quadrature=force, tol=tol)
            row.update(_mv_row(mv))
        except (ms.DomainError, ds.ValidationError) as exc:
            row["error"] = str(exc)
        rows.append(row)
    return {"command": "curve", "dist": dist.label, "measure": mid}, rows


def _cmd_bivariate(cfg: RunConfig):
    if len(cfg.dist_specs) != 1:
        raise ds.ValidationError("bivariate needs exactly one --dist (a bivariate spec)")
    bd = make_bivariate(_load_spec(cfg.dist_specs[0]))
    wanted = cfg.measures or _BIVARIATE_MEASURES
    force = cfg.method == "quadrature"
    tol = cfg.tol if cfg.tol is not None else 1e-7
    rows = []
    for mid in wanted:
        if mid == "bivariate_extropy":
            mv = bivariate_extropy(bd, force_quadrature=force, tol=tol)
        elif mid == "bivariate_weighted_extropy":
            mv = bivariate_weighted_extropy(bd, force_quadrature=force, tol=tol)
        else:
            raise ds.ValidationError(
                f"unknown bivariate measure {mid!r}; valid: "
                + ", ".join(_BIVARIATE_MEASURES))
        rows.append({"measure": mid, **_mv_row(mv)})
    return {"command": "bivariate", "dist": bd.label}, rows


def _cmd_transform(cfg: RunConfig):
    dist = _one_dist(cfg)
    if not cfg.transform:
        raise ds.ValidationError(
            "--transform required; vocabulary: " + ", ".join(tf.TRANSFORM_VOCABULARY))
    tr = tf.transform_from_name(cfg.transform, dist)
    rows = []
    xdom = tf.transformed_weighted_extropy(dist, tr)
    rows.append({"quantity": "weighted_extropy_xdomain", **_mv_row(xdom)})
    pushed = tf.pushforward_distribution(dist, tr)
    direct = ms.weighted_extropy(pushed, force_quadrature=True)
    rows.append({"quantity": "weighted_extropy_pushforward", **_mv_row(direct)})
    if cfg.transform.startswith(("scale:", "affine:")):
        a, b = (tr.phi(np.asarray(1.0)) - tr.phi(np.asarray(0.0)),
                tr.phi(np.asarray(0.0)))
        j, jw = tf.linear_transform_extropy(dist, float(a), float(b))
        rows.append({"quantity": "extropy_linear_rule", **_mv_row(j)})
        rows.append({"quantity": "weighted_extropy_linear_rule", **_mv_row(jw)})
        direct_j = ms.extropy(pushed, force_quadrature=True)
        rows.append({"quantity": "extropy_pushforward", **_mv_row(direct_j)})
    if cfg.t is not None:
        res, past = tf.transformed_residual_past(dist, tr, cfg.t)
        rows.append({"quantity": "weighted_residual_extropy_xdomain", **_mv_row(res)})
        rows.append({"quantity": "weighted_past_extropy_xdomain", **_mv_row(past)})
    return {"command": "transform", "dist": dist.label, "transform": tr.label}, rows


_PAIR_CLAIMS = ("sum_bound", "independence_factorization")


def _cmd_claims(cfg: RunConfig):
    wanted = cfg.claims or cl.CLAIM_IDS
    unknown = [c for c in wanted if c not in cl.CLAIM_IDS]
    if unknown:
        raise ds.ValidationError(
            f"unknown claims: {', '.join(unknown)}; valid: {', '.join(cl.CLAIM_IDS)}")
    if not cfg.dist_specs:
        raise ds.ValidationError("claims needs at least one --dist")
    dists = [ds.make_distribution(_load_spec(s)) for s in cfg.dist_specs]
    rows = []
    for claim in wanted:
        if claim in _PAIR_CLAIMS:
            if len(dists) != 2:
                raise ds.ValidationError(
                    f"claim {claim!r} needs exactly two --dist (X then Y)")
            x, y = dists
            rep = (cl.sum_bound_check(x, y) if claim == "sum_bound"
                   else independence_factorization_check(x, y))
            rows.append(_claim_row(rep, f"{x.label}+{y.label}", None))
            continue
        for dist in dists:
            if claim == "constancy":
                grid = _parse_grid(cfg, dist)
                if dist.family == "pareto":
                    rep_c = cl.constancy_explorer(dist, grid)
                    rows.append({
                        "claim": "constancy", "dist": dist.label, "t": None,
                        "lhs": rep_c.spread, "rhs": 0.0, "gap": rep_c.spread,
                        "verdict": "indeterminate",
                        "notes": rep_c.notes,
                        "extras": {"mean_value": float(np.mean(rep_c.values)),
                                   "reference": rep_c.reference,
                                   "max_deviation": rep_c.max_deviation_from_reference}})
                else:
                    rows.append({
                        "claim": "constancy", "dist": dist.label, "t": None,
                        "lhs": math.nan, "rhs": math.nan, "gap": math.nan,
                        "verdict": "indeterminate",
                        "notes": "constancy exploration needs a pareto member "
                                 "(hazard shape/t)", "extras": {}})
                continue
            for t in _parse_grid(cfg, dist):
                t = float(t)
                if claim == "decomposition":
                    rep = ms.decomposition_check(dist, t)
                elif claim == "residual_bound":
                    rep = cl.residual_bound_check(dist, t)
                elif claim == "past_bound":
                    q999 = float(dist.quantile(np.asarray(0.999)))
                    rep = cl.past_bound_check(dist, t, T=max(q999, t * (1 + 1e-9)))
                elif claim == "lemma1_residual":
                    rep = cl.lemma1_residual_check(dist, t)
                else:
                    rep = cl.lemma1_past_check(dist, t)
                rows.append(_claim_row(rep, dist.label, t))
    summary = {"holds": sum(r["verdict"] == "holds" for r in rows),
               "violated": sum(r["verdict"] == VIOLATED for r in rows),
               "indeterminate": sum(r["verdict"] == "indeterminate" for r in rows)}
    return {"command": "claims", "summary": summary}, rows


def _cmd_mc(cfg: RunConfig):
    if len(cfg.dist_specs) != 1:
        raise ds.ValidationError("mc needs exactly one --dist")
    spec = _load_spec(cfg.dist_specs[0])
    if cfg.n < 2:
        raise ds.ValidationError("mc needs --n >= 2")
    rng = np.random.default_rng(cfg.seed)
    rows = []
    if spec.get("family") in ("bivariate_beta", "product"):
        bd = make_bivariate(spec)
        if bd.sampler is None:
            raise ds.ValidationError(f"{bd.label} has no sampler")
        wanted = cfg.measures or _BIVARIATE_MEASURES
        xs, ys = bd.sampler(rng, cfg.n)
        fvals = bd.pdf_pairs(xs, ys)
        for mid in wanted:
            if mid == "bivariate_extropy":
                samples = 0.25 * fvals
                ref = bivariate_extropy(bd, force_quadrature=True)
            elif mid == "bivariate_weighted_extropy":
                samples = 0.25 * xs * ys * fvals
                ref = bivariate_weighted_extropy(bd, force_quadrature=True)
            else:
                raise ds.ValidationError(
                    f"mc bivariate measures: {', '.join(_BIVARIATE_MEASURES)}")
            rows.append(_mc_row(mid, samples, ref))
        label = bd.label
    else:
        dist = ds.make_distribution(spec)
        wanted = cfg.measures or ("extropy", "weighted_extropy")
        bad = [m for m in wanted if m not in ("extropy", "weighted_extropy")]
        if bad:
            raise ds.ValidationError(
                "mc estimators exist for extropy and weighted_extropy "
                f"(got {', '.join(bad)})")
        xs = dist.sample(rng, cfg.n)
        fvals = dist.pdf(xs)
        for mid in wanted:
            samples = -0.5 * fvals if mid == "extropy" else -0.5 * xs * fvals
            ref = ms.compute_measure(dist, mid, force_quadrature=True)
            rows.append(_mc_row(mid, samples, ref))
        label = dist.label
    return {"command": "mc", "dist": label, "n": cfg.n, "seed": cfg.seed}, rows


def _mc_row(mid: str, samples: np.ndarray, ref: ms.MeasureValue) -> dict:
    if ref.diverged:
        return {"measure": mid, "estimate": None, "reference": ref.value,
                "std_error": None, "z": None,
                "note": "reference diverged; mc skipped"}
    est = float(np.mean(samples))
    se = float(np.std(samples, ddof=1) / math.sqrt(samples.size))
    # A numerically constant estimator has no meaningful standardized gap.
    if se <= 1e-13 * max(1.0, abs(est)):
        z = 0.0
    else:
        z = (est - ref.value) / se
    return {"measure": mid, "estimate": est, "reference": ref.value,
            "std_error": se, "z": z, "note": ""}


_COMMANDS = {
    "measure": _cmd_measure,
    "curve": _cmd_curve,
    "bivariate": _cmd_bivariate,
    "transform": _cmd_transform,
    "claims": _cmd_claims,
    "mc": _cmd_mc,
}


def _emit_error(kind: str, exc: Exception) -> None:
    doc = {"error": {"type": kind, "class": type(exc).__name__, "message": str(exc)}}
    sys.stderr.write(json.dumps(doc) + "\n")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        meta, rows = _COMMANDS[cfg.command](cfg)
    except (ds.ValidationError, ms.DomainError) as exc:
        _emit_error("validation", exc)
        return 2
    except (EvaluationBudgetError, DivergenceUndecidedError, EvaluationError,
            cl.InversionError, cl.ResolutionError) as exc:
        _emit_error("numerical", exc)
        return 3

    text = _render_json(meta, rows) if cfg.fmt == "json" else _render_csv(rows)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if cfg.strict and cfg.command == "claims":
        if any(r.get("verdict") == VIOLATED for r in rows):
            return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
