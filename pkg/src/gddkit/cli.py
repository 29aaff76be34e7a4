"""Command-line front end.

Commands: classify, criteria, regions, verify, report. Reports are JSON with
sorted keys and shortest round-trip floats, so identical inputs give
byte-identical output. Exit status is 0 on success, 1 when ``verify`` finds
an eigenvalue outside a region set, and 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from gddkit.classify import classify_h
from gddkit.eigen import eigenvalues, read_spectrum, verify_inclusion
from gddkit.gfun.catalog import (
    DEFAULT_GRID,
    ScalingChoice,
    SweepPlan,
    catalog_listing,
    certificate_scalings,
    random_scalings,
    sweep_criteria,
)
from gddkit.matcore import COLUMN, ROW, as_scaling, deleted_sums
from gddkit.mmio import read_matrix_market
from gddkit.regions import (
    CONCRETE_KINDS,
    DEFAULT_MEMBERSHIP_TOL,
    DEFINITIONS,
    GENERIC,
    SCALED,
    TILDE_SCALED,
    approx_intersection,
    build_catalog_region_set,
    build_region_set,
    kind_count,
    rasterize,
    region_shape,
    render_svg,
)

SCHEMA = "gddkit/1"
COMMANDS = ("classify", "criteria", "regions", "verify", "report")
EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2
REGION_GRID_POINTS = 33
REGION_RANDOM_SCALINGS = 16
# Draw at most this many individual sets per kind in the SVG; larger samples show only their intersection.
SVG_SET_LIMIT = 8


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    definition: str = "5.5"
    kinds: tuple[int, ...] = (1,)
    alpha_grid: tuple[float, ...] | None = None
    beta_grid: tuple[float, ...] | None = None
    scalings: tuple[str, ...] | None = None
    tol: float = DEFAULT_MEMBERSHIP_TOL
    resolution: tuple[int, int] = (256, 256)
    seed: int = 0
    spectrum: str | None = None
    out: str | None = None
    list_catalog: bool = False
    extra: dict = field(default_factory=dict)


# ------------------------------------------------------------------ parsing helpers


def parse_grid(text: str) -> tuple[float, ...]:
    """Comma list of weights in [0, 1], or 'uniform:N' for N equally spaced points."""
    text = text.strip()
    if text.startswith("uniform:"):
        count = int(text.split(":", 1)[1])
        if count < 1:
            raise InputError("uniform grid needs at least one point")
        if count == 1:
            return (0.5,)
        return tuple(float(t) for t in np.linspace(0.0, 1.0, count))
    try:
        vals = tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise InputError(f"bad grid {text!r}") from None
    if not vals or any(not 0.0 <= v <= 1.0 for v in vals):
        raise InputError(f"grid values must lie in [0, 1]: {text!r}")
    return vals


def parse_kinds(text: str, definition: str) -> tuple[int, ...]:
    top = kind_count(definition)
    if text.strip() == "all":
        return tuple(range(1, top + 1))
    kinds: list[int] = []
    for part in text.split(","):
        part = part.strip()
        try:
            if "-" in part:
                lo, hi = (int(t) for t in part.split("-", 1))
                kinds.extend(range(lo, hi + 1))
            elif part:
                kinds.append(int(part))
        except ValueError:
            raise InputError(f"bad kind list {text!r}") from None
    bad = [k for k in kinds if not 1 <= k <= top]
    if not kinds or bad:
        raise InputError(f"kinds must lie in 1..{top} for definition {definition}: {text!r}")
    return tuple(dict.fromkeys(kinds))


def parse_resolution(text: str) -> tuple[int, int]:
    try:
        parts = [int(t) for t in text.lower().split("x")]
    except ValueError:
        raise InputError(f"bad resolution {text!r}") from None
    if len(parts) == 1:
        parts = parts * 2
    if len(parts) != 2 or min(parts) < 2:
        raise InputError("resolution must be N or NXxNY with both at least 2")
    return parts[0], parts[1]


def _read_scaling_file(path: str, n: int) -> ScalingChoice:
    try:
        rows = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip() and not ln.startswith("#")]
        x = as_scaling([float(t) for t in rows[0]], n)
        y = as_scaling([float(t) for t in rows[1]], n) if len(rows) > 1 else x
    except (OSError, IndexError, ValueError) as exc:
        raise InputError(f"scaling file {path}: {exc}") from None
    return ScalingChoice(f"file:{path}", tuple(map(float, x)), tuple(map(float, y)))


def resolve_scalings(sources: tuple[str, ...], a: np.ndarray, seed: int) -> tuple[list[ScalingChoice], list[str]]:
    """Expand scaling sources; returns the choices and notes about sources that were unavailable."""
    n = a.shape[0]
    rng = np.random.default_rng(seed)
    out: list[ScalingChoice] = []
    notes: list[str] = []
    cert = None
    for src in sources:
        if src == "ones":
            out.append(ScalingChoice("ones", (1.0,) * n, (1.0,) * n))
        elif src == "certificate":
            if cert is None:
                cert = [c for c in certificate_scalings(a) if c.label == "certificate"]
            if cert:
                out.extend(cert)
            else:
                notes.append("certificate scaling unavailable: matrix not certified GDD")
        elif src.startswith("file:"):
            out.append(_read_scaling_file(src[5:], n))
        elif src.startswith("random:"):
            try:
                k = int(src.split(":", 1)[1])
            except ValueError:
                raise InputError(f"bad scaling source {src!r}") from None
            out.extend(random_scalings(n, k, rng))
        else:
            raise InputError(f"unknown scaling source {src!r}; use ones, certificate, file:PATH or random:K")
    seen: dict[str, ScalingChoice] = {}
    for s in out:
        seen.setdefault(s.label, s)
    return list(seen.values()), notes


# ------------------------------------------------------------------ JSON


def jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": jsonable(obj.real), "im": jsonable(obj.imag)}
    return obj


def dumps(report: dict) -> str:
    return json.dumps(jsonable(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


# ------------------------------------------------------------------ commands


def _classify(a) -> dict:
    return classify_h(a).to_dict()


def _criteria(a, cfg: RunConfig) -> dict:
    sources = cfg.scalings or ("ones", "certificate")
    scalings, notes = resolve_scalings(sources, a, cfg.seed)
    plan = SweepPlan(alphas=cfg.alpha_grid or DEFAULT_GRID, betas=cfg.beta_grid or DEFAULT_GRID,
                     scalings=tuple(scalings))
    results = sweep_criteria(a, plan)
    fired_ids = list(dict.fromkeys(r.catalog_id for r in results if r.fired))
    return {
        "alpha_grid": list(plan.alphas),
        "beta_grid": list(plan.betas),
        "scalings": [{"label": s.label, "x": list(s.x), "y": list(s.y)} for s in scalings],
        "notes": notes,
        "results": [r.to_dict() for r in results],
        "fired": fired_ids,
        "certifies_gdd": bool(fired_ids),
    }


def _criteria_csv(section: dict) -> str:
    lines = ["catalog_id,alpha,beta,g,h,scaling,fired,margin"]
    for r in section["results"]:
        lines.append(",".join([
            r["catalog_id"],
            "" if r.get("alpha") is None else repr(r["alpha"]),
            "" if r.get("beta") is None else repr(r["beta"]),
            r["g"]["family"], r["h"]["family"], r.get("scaling", ""),
            "1" if r["fired"] else "0", repr(r["margin"]),
        ]))
    return "\n".join(lines) + "\n"


def _region_plan(a, cfg: RunConfig, k: int, default_points: int, scalings: list[ScalingChoice]):
    """Yield (params dict, RegionSet) for every sampled parameter point of kind k."""
    grid_a = cfg.alpha_grid or tuple(np.linspace(0, 1, default_points).tolist())
    grid_b = cfg.beta_grid or tuple(np.linspace(0, 1, default_points).tolist())
    uses = _kind_params(cfg.definition, k)
    alphas = grid_a if "a" in uses else (1.0,)
    betas = grid_b if "b" in uses else (1.0,)
    scaled = cfg.definition in (TILDE_SCALED, SCALED)
    for s in (scalings if scaled else [None]):
        for al in alphas:
            for be in betas:
                params = {"alpha": al, "beta": be}
                if s is not None:
                    params["scaling"] = s.label
                if cfg.definition == GENERIC:
                    g, h = deleted_sums(a, ROW), deleted_sums(a, COLUMN)
                    rs = build_region_set(a, GENERIC, k, g, h, al, be, {"g": "r", "h": "c"})
                else:
                    rs = build_catalog_region_set(a, cfg.definition, k, al, be,
                                                  None if s is None else s.x, None if s is None else s.y,
                                                  None if s is None else {"scaling": s.label})
                yield params, rs


def _kind_params(definition: str, k: int) -> str:
    gk = k if definition == GENERIC else CONCRETE_KINDS[k][0]
    if gk in (1, 4, 5):
        return ""
    if gk <= 17:
        return "a"
    return "ab"


def _scalings_for_regions(a, cfg: RunConfig):
    if cfg.definition not in (TILDE_SCALED, SCALED):
        return [], []
    default = ("ones", "certificate", f"random:{REGION_RANDOM_SCALINGS}")
    return resolve_scalings(cfg.scalings or default, a, cfg.seed)


def _regions(a, cfg: RunConfig, out: Path | None) -> dict:
    scalings, notes = _scalings_for_regions(a, cfg)
    layers = []
    kinds = []
    for k in cfg.kinds:
        sampled = list(_region_plan(a, cfg, k, REGION_GRID_POINTS, scalings))
        sets = [rs for _, rs in sampled]
        inter = approx_intersection(sets)
        mask = inter.rasterize(None, cfg.resolution)
        entry = {
            "k": k,
            "shape": region_shape(cfg.definition, k),
            "sets": len(sets),
            "label": inter.label,
            "bbox": [mask.bbox[0], mask.bbox[1]],
            "resolution": list(mask.resolution),
            "fill_fraction": mask.fill_fraction,
        }
        if out is not None:
            name = f"regions_def{cfg.definition}_k{k}.csv"
            (out / name).write_text(mask.to_csv())
            entry["csv"] = name
            if len(sets) <= SVG_SET_LIMIT:
                layers.extend((rs, rasterize(rs, mask.bbox, mask.resolution)) for rs in sets)
            prov = {"definition": cfg.definition, "k": k, "sets": len(sets), "label": inter.label}
            layers.append((_provenance_view(sets[0], prov), mask))
        kinds.append(entry)
    section = {"definition": cfg.definition, "kinds": kinds, "notes": notes,
               "scalings": [s.label for s in scalings]}
    if out is not None and layers:
        name = f"regions_def{cfg.definition}.svg"
        (out / name).write_text(render_svg(layers, f"definition {cfg.definition} regions"))
        section["svg"] = name
    return section


def _provenance_view(rs, prov: dict):
    """Same region set with provenance replaced; used to label an intersection layer (no circles)."""
    return replace(rs, shape="intersection", provenance=prov)


def _verify(a, cfg: RunConfig) -> tuple[dict, bool]:
    if cfg.spectrum:
        try:
            lam = read_spectrum(Path(cfg.spectrum).read_text())
        except OSError as exc:
            raise InputError(f"spectrum file: {exc}") from None
        except ValueError as exc:
            raise InputError(f"spectrum file {cfg.spectrum}: {exc}") from None
        source, residual = "file", None
    else:
        spec = eigenvalues(a)
        lam, source, residual = spec.eigenvalues, "oracle", spec.residual
    scalings, notes = _scalings_for_regions(a, cfg)
    checks = []
    violations = []
    for k in cfg.kinds:
        for params, rs in _region_plan(a, cfg, k, len(DEFAULT_GRID), scalings):
            report = verify_inclusion(a, rs, cfg.tol, lam)
            records = [r.to_dict() for r in report.records]
            checks.append({"k": k, **params, "records": records})
            for r in report.violations:
                violations.append({"k": k, **params, "eigenvalue": r.eigenvalue, "margin": r.margin})
    section = {
        "definition": cfg.definition,
        "spectrum": list(lam),
        "spectrum_source": source,
        "residual": residual,
        "tol": cfg.tol,
        "notes": notes,
        "checks": checks,
        "violations": violations,
    }
    return section, bool(violations)


def run(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        if cfg.command not in COMMANDS:
            raise InputError(f"unknown command {cfg.command!r}")
        if cfg.definition not in DEFINITIONS:
            raise InputError(f"unknown definition {cfg.definition!r}")
        report: dict = {"schema": SCHEMA, "command": cfg.command, "seed": cfg.seed}
        if cfg.command == "criteria" and cfg.list_catalog:
            report["catalog"] = catalog_listing()
            return _emit(report, cfg, stdout, EXIT_OK)
        if not cfg.input:
            raise InputError("--input is required")
        try:
            a = read_matrix_market(cfg.input)
        except OSError as exc:
            raise InputError(f"cannot read {cfg.input}: {exc.strerror or exc}") from None
        except ValueError as exc:
            raise InputError(f"{cfg.input}: {exc}") from None
        out = Path(cfg.out) if cfg.out else None
        if out is not None:
            out.mkdir(parents=True, exist_ok=True)
        report["input"] = {"path": cfg.input, "n": int(a.shape[0])}
        status = EXIT_OK
        if cfg.command in ("classify", "report"):
            report["classification"] = _classify(a)
        if cfg.command in ("criteria", "report"):
            report["criteria"] = _criteria(a, cfg)
            if out is not None:
                (out / "criteria.csv").write_text(_criteria_csv(jsonable(report["criteria"])))
        if cfg.command == "regions" or (cfg.command == "report" and out is not None):
            report["regions"] = _regions(a, cfg, out)
        if cfg.command in ("verify", "report"):
            report["verify"], violated = _verify(a, cfg)
            if violated:
                status = EXIT_VIOLATION
        return _emit(report, cfg, stdout, status)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def _emit(report: dict, cfg: RunConfig, stdout, status: int) -> int:
    text = dumps(report)
    if cfg.out:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{cfg.command}.json").write_text(text)
    else:
        stdout.write(text)
    return status


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gddkit", description=__doc__.split("\n\n")[0])
    p.add_argument("command_pos", nargs="?", choices=COMMANDS, metavar="COMMAND",
                   help="one of: " + ", ".join(COMMANDS))
    p.add_argument("--command", choices=COMMANDS, help="alternative to the positional command")
    p.add_argument("--input", help="Matrix Market file")
    p.add_argument("--def", dest="definition", default="5.5", choices=DEFINITIONS,
                   help="region table: 5.1 generic (g, h) = (r, c); 5.2 blockwise scaled; "
                        "5.3 scaled; 5.4 blockwise; 5.5 plain (default)")
    p.add_argument("--k", default="1", help="kinds: comma list, ranges like 5-9, or 'all' (default 1)")
    p.add_argument("--alpha-grid", help="comma list in [0,1] or uniform:N")
    p.add_argument("--beta-grid", help="comma list in [0,1] or uniform:N")
    p.add_argument("--scalings", help="comma list of ones, certificate, file:PATH, random:K")
    p.add_argument("--tol", type=float, default=DEFAULT_MEMBERSHIP_TOL,
                   help="relative membership tolerance for verify (default 1e-12)")
    p.add_argument("--resolution", default="256", help="raster size N or NXxNY (default 256)")
    p.add_argument("--seed", type=int, default=0, help="seed for random:K scalings (default 0)")
    p.add_argument("--spectrum", help="file of 're im' lines used instead of the built-in eigensolver")
    p.add_argument("--out", help="directory for JSON, CSV and SVG outputs (default: JSON to stdout)")
    p.add_argument("--list", dest="list_catalog", action="store_true", help="criteria: list the catalog")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    command = ns.command or ns.command_pos
    if command is None:
        raise InputError("a command is required")
    if ns.command and ns.command_pos and ns.command != ns.command_pos:
        raise InputError("conflicting commands")
    if ns.tol < 0 or not math.isfinite(ns.tol):
        raise InputError("--tol must be a finite nonnegative number")
    return RunConfig(
        command=command,
        input=ns.input,
        definition=ns.definition,
        kinds=parse_kinds(ns.k, ns.definition),
        alpha_grid=parse_grid(ns.alpha_grid) if ns.alpha_grid else None,
        beta_grid=parse_grid(ns.beta_grid) if ns.beta_grid else None,
        scalings=tuple(t.strip() for t in ns.scalings.split(",") if t.strip()) if ns.scalings else None,
        tol=ns.tol,
        resolution=parse_resolution(ns.resolution),
        seed=ns.seed,
        spectrum=ns.spectrum,
        out=ns.out,
        list_catalog=ns.list_catalog,
    )


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return run(cfg)
    except BrokenPipeError:
        # Reader went away (e.g. piped into head); silence the flush at exit too.
        sys.stdout = open(os.devnull, "w")
        return 0


if __name__ == "__main__":
    sys.exit(main())
