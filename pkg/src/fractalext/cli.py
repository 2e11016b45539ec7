"""Command-line front end.

Subcommands: ``measure build|dims|decay``, ``extend norm|ratio``,
``convolve run|verify-thm31``, ``knapp build|validate|ratio-trend``,
``oracle count|identity``, ``regions plot``, ``accept``.

Every run writes its artifacts plus a ``manifest.json`` (command,
parameters, seed, code version) into the output directory.  Exit codes:
0 success, 2 config/schema violation (the failing path is printed),
3 infeasible construction (the violated constraint is printed).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, _kernels
from .acceptance import run_all
from .convolution import convolve_grid, verify_transfer_bound
from .counting import (
    count_solutions,
    cs_lower_bound,
    g_histogram,
    gamma_bound,
    norm_identity_check,
)
from .dimensions import (
    box_counts,
    decay_samples,
    fourier_decay_fit,
    frostman_fit,
    lq_dimension_homogeneous,
)
from .errors import InfeasibleParametersError
from .knapp import KnappParams, build_family, validate_family
from .measures import (
    DiscreteMeasure,
    PowerDensity,
    SimilarityIFS,
    build_self_similar,
    check_separation,
    discretize_power_density,
)
from .regions import RegionBoundary, region_report, region_svg
from .transform import FrequencyGrid, extension_transform, lq_freq_norm, multilinear_ratio


class ConfigError(Exception):
    def __init__(self, path: str, message: str):
        super().__init__(f"config error at {path}: {message}")
        self.path = path


def _require(cfg: dict, path: str, typ=None):
    cur = cfg
    for part in path.split("."):
        if not isinstance(cur, dict) or part not in cur:
            raise ConfigError(path, "missing")
        cur = cur[part]
    if typ is not None and not isinstance(cur, typ):
        raise ConfigError(path, f"expected {typ.__name__}")
    return cur


def _measure_from_config(cfg: dict, cap_atoms: int) -> DiscreteMeasure:
    if "ifs" in cfg:
        ifs = SimilarityIFS.from_json(_require(cfg, "ifs", dict))
        depth = int(_require(cfg, "depth", int))
        return build_self_similar(ifs, depth, cap_atoms=cap_atoms)
    if "power_density" in cfg:
        exponent = float(_require(cfg, "power_density.exponent"))
        cells = int(_require(cfg, "cells", int))
        return discretize_power_density(PowerDensity(exponent), cells)
    if "uniform" in cfg:
        cells = int(_require(cfg, "uniform.cells"))
        return DiscreteMeasure.uniform_blocks(cells)
    raise ConfigError("measure", "need one of ifs/power_density/uniform")


def _write_manifest(outdir: Path, command: str, params: dict, seed: int):
    outdir.mkdir(parents=True, exist_ok=True)
    manifest = {
        "command": command,
        "params": params,
        "seed": seed,
        "version": __version__,
        "kernel_backend": _kernels.backend_name(),
    }
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2, default=str))


def _write_csv(path: Path, header: list[str], rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _write_json(path: Path, obj):
    path.write_text(json.dumps(obj, indent=2, default=str))


# -- command handlers ---------------------------------------------------------


def cmd_measure_build(cfg, out: Path, seed: int, cap: int) -> int:
    mu = _measure_from_config(cfg, cap)
    obj = {
        "kind": mu.kind,
        "block_width": str(mu.block_width) if mu.block_width else None,
        "total_mass": mu.total_mass,
        "atoms": [[str(p), float(w)] for p, w in zip(mu.positions, mu.weights)],
    }
    if "ifs" in cfg:
        obj["separation"] = check_separation(SimilarityIFS.from_json(cfg["ifs"]))
    _write_json(out / "measure.json", obj)
    print(f"wrote {len(mu.positions)} atoms to {out/'measure.json'}")
    return 0


def cmd_measure_dims(cfg, out: Path, seed: int, cap: int) -> int:
    mu = _measure_from_config(cfg, cap)
    report: dict = {}
    if "ifs" in cfg:
        ifs = SimilarityIFS.from_json(cfg["ifs"])
        if ifs.homogeneous:
            lam = abs(ifs.maps[0][0])
            report["lq_dims"] = {
                str(q): lq_dimension_homogeneous(
                    [float(p) for p in ifs.probs], float(lam), q
                )
                for q in cfg.get("qs", [0.0, 1.0, 2.0])
            }
        report["separation"] = check_separation(ifs)
    scales = cfg.get("scales")
    if scales:
        lo, hi = frostman_fit(mu, [float(s) for s in scales])
        report["frostman"] = {"upper_exponent": lo, "lower_exponent": hi}
    deltas = cfg.get("deltas")
    if deltas:
        counts = box_counts(mu, deltas)
        _write_csv(
            out / "box_counts.csv",
            ["delta", "N_delta"],
            [[str(d), n] for d, n in counts],
        )
        report["box_counts_csv"] = "box_counts.csv"
    _write_json(out / "dims.json", report)
    print(json.dumps(report, indent=2, default=str))
    return 0


def cmd_measure_decay(cfg, out: Path, seed: int, cap: int) -> int:
    mu = _measure_from_config(cfg, cap)
    xi_min = float(cfg.get("xi_min", 1.0))
    xi_max = float(cfg.get("xi_max", 1e3))
    samples = int(cfg.get("samples", 2000))
    fit = fourier_decay_fit(mu, xi_min, xi_max, samples)
    xs, vals = decay_samples(mu, xi_min, xi_max, samples)
    n_windows = max(2, samples // 20)
    env = np.empty_like(vals)
    for idx in np.array_split(np.arange(samples), n_windows):
        env[idx] = np.max(vals[idx])
    _write_csv(
        out / "decay.csv",
        ["xi", "abs_fhat", "envelope"],
        [[f"{x:.10g}", f"{v:.12g}", f"{e:.12g}"] for x, v, e in zip(xs, vals, env)],
    )
    _write_json(
        out / "decay.json",
        {
            "exponent": fit.exponent,
            "constant": fit.constant,
            "sup_product": fit.sup_product,
            "freq_range": fit.freq_range,
        },
    )
    print(f"decay exponent {fit.exponent:.4f}, sup product {fit.sup_product:.4g}")
    return 0


def cmd_extend_norm(cfg, out: Path, seed: int, cap: int) -> int:
    mu = _measure_from_config(cfg, cap)
    grid = FrequencyGrid(float(cfg.get("R", 32.0)), float(cfg.get("step", 0.01)))
    if not grid.nyquist_ok(mu.diameter):
        raise ConfigError("step", f"needs step <= 1/(4*{mu.diameter}) for this support")
    xs = grid.xs()
    vals = extension_transform(mu, None, xs)
    q = float(cfg.get("q", 2.0))
    norm = lq_freq_norm(np.abs(vals), q, grid)
    _write_csv(
        out / "transform.csv",
        ["xi", "re", "im", "abs"],
        [
            [f"{x:.10g}", f"{v.real:.12g}", f"{v.imag:.12g}", f"{abs(v):.12g}"]
            for x, v in zip(xs, vals)
        ],
    )
    _write_json(out / "norm.json", {"q": q, "norm": norm, "R": grid.R, "step": grid.step})
    print(f"L^{q} frequency norm = {norm:.6g}")
    return 0


def cmd_extend_ratio(cfg, out: Path, seed: int, cap: int) -> int:
    specs = _require(cfg, "measures", list)
    measures = [_measure_from_config(s, cap) for s in specs]
    grid = FrequencyGrid(float(cfg.get("R", 32.0)), float(cfg.get("step", 0.01)))
    p, q = float(cfg.get("p", 2.0)), float(cfg.get("q", 4.0))
    rng = np.random.default_rng(seed)
    fs = []
    for m, spec in zip(measures, specs):
        if spec.get("f") == "random":
            fs.append(rng.uniform(0, 1, len(m.positions)))
        else:
            fs.append(None)
    ratio = multilinear_ratio(measures, fs, p, q, grid)
    _write_json(out / "ratio.json", {"p": p, "q": q, "ratio": ratio})
    print(f"multilinear ratio = {ratio:.6g}")
    return 0


def cmd_convolve_run(cfg, out: Path, seed: int, cap: int) -> int:
    specs = _require(cfg, "measures", list)
    cells = int(cfg.get("cells", 4096))
    measures = [_measure_from_config({"cells": cells, **s}, cap) for s in specs]
    dens = convolve_grid(measures, cells)
    _write_csv(
        out / "density.csv",
        ["x", "density"],
        [[f"{x:.10g}", f"{v:.12g}"] for x, v in zip(dens.centers(), dens.values)],
    )
    _write_json(
        out / "density.json",
        {
            "cells": cells,
            "cell_width": dens.cell_width,
            "integral": dens.integral(),
        },
    )
    print(f"density integral = {dens.integral():.12g}")
    return 0


def cmd_convolve_verify(cfg, out: Path, seed: int, cap: int) -> int:
    specs = _require(cfg, "measures", list)
    cells_levels = cfg.get("cells_levels", [1024, 2048])
    levels = []
    for c in cells_levels:
        level = []
        for s in specs:
            s2 = dict(s)
            s2["cells"] = int(c)
            if "uniform" in s2:
                s2["uniform"] = {"cells": int(c)}
            level.append(_measure_from_config(s2, cap))
        levels.append(level)
    rep = verify_transfer_bound(
        levels,
        p=float(cfg.get("p", 2.0)),
        q=float(cfg.get("q", 4.0)),
        trials=int(cfg.get("trials", 64)),
        seed=seed,
        conv_cells=[int(c) for c in cells_levels],
    )
    _write_json(out / "verify.json", rep)
    print(f"verdict: {rep['verdict']}")
    return 0


def cmd_knapp_build(cfg, out: Path, seed: int, cap: int) -> int:
    params = KnappParams.from_json({**cfg, "seed": cfg.get("seed", seed)})
    fam = build_family(params, cap_atoms=cap)
    _write_json(out / "family.json", fam.to_json())
    print(
        f"built depth-{fam.depth} family, start level {fam.n0}, "
        f"ratio constant {fam.ratio_constant:.3f}"
    )
    return 0


def cmd_knapp_validate(cfg, out: Path, seed: int, cap: int) -> int:
    params = KnappParams.from_json({**cfg, "seed": cfg.get("seed", seed)})
    fam = build_family(params, cap_atoms=cap)
    rep = validate_family(fam)
    _write_json(out / "validate.json", rep)
    print(f"validation passed: {rep['passed']}")
    return 0


def cmd_knapp_ratio_trend(cfg, out: Path, seed: int, cap: int) -> int:
    params = KnappParams.from_json({**cfg, "seed": cfg.get("seed", seed)})
    fam = build_family(params, cap_atoms=cap)
    q = float(cfg.get("q", 2.0))
    p = float(cfg.get("p", 2.0))
    ells = range(1, fam.depth)
    vals = [gamma_bound(fam, ell, q, p, fam.r_coef) for ell in ells]
    _write_csv(
        out / "ratio_trend.csv",
        ["ell", "gamma_inverse"],
        [[ell, f"{v:.12g}"] for ell, v in zip(ells, vals)],
    )
    trend = (
        "increasing"
        if all(b > a for a, b in zip(vals, vals[1:]))
        else "non-increasing"
        if all(b <= a for a, b in zip(vals, vals[1:]))
        else "mixed"
    )
    _write_json(out / "ratio_trend.json", {"q": q, "p": p, "values": vals, "trend": trend})
    print(f"trend at q={q}: {trend}")
    return 0


def cmd_oracle_count(cfg, out: Path, seed: int, cap: int) -> int:
    sets = _require(cfg, "atom_sets", list)
    r = int(cfg.get("r", 1))
    h = g_histogram([[int(x) for x in s] for s in sets], r)
    _write_csv(
        out / "histogram.csv",
        ["z", "g"],
        sorted((z, g) for z, g in h.entries.items()),
    )
    count = count_solutions(h)
    bound = cs_lower_bound(h)
    _write_json(
        out / "count.json",
        {"count": str(count), "cs_lower_bound": str(bound), "l1": str(h.l1())},
    )
    print(f"solutions {count}, lower bound {bound}")
    return 0


def cmd_oracle_identity(cfg, out: Path, seed: int, cap: int) -> int:
    params = KnappParams.from_json({**cfg["family"], "seed": cfg["family"].get("seed", seed)})
    fam = build_family(params, cap_atoms=cap)
    grid = None
    if "R" in cfg:
        grid = FrequencyGrid(float(cfg["R"]), float(cfg.get("step", 1.0 / 64)))
    rep = norm_identity_check(
        fam,
        ell=int(cfg.get("ell", 1)),
        level=cfg.get("level"),
        r=int(cfg.get("r", 1)),
        grid=grid,
    )
    _write_json(out / "identity.json", rep)
    print(f"relative error {rep['rel_error']:.3e}")
    return 0


def cmd_regions_plot(cfg, out: Path, seed: int, cap: int) -> int:
    alphas = [float(a) for a in _require(cfg, "alphas", list)]
    betas = [float(b) for b in cfg.get("betas", alphas)]
    p_grid = tuple(float(p) for p in cfg.get("p_grid", (1.25, 1.5, 2.0, 4.0, 16.0)))
    extra = []
    if "p0" in cfg:
        extra.append(RegionBoundary("suff31", {"p0": float(cfg["p0"])}))
    rep = region_report(alphas, betas, p_grid=p_grid, extra_boundaries=extra)
    _write_csv(
        out / "region.csv",
        ["kind", "inv_p", "inv_q", "direction"],
        [[k, f"{ip:.8g}", f"{iq:.8g}", d] for k, ip, iq, d in rep.rows],
    )
    (out / "region.svg").write_text(region_svg(alphas, betas))
    _write_json(
        out / "region.json",
        {
            "containment": rep.containment,
            "containment_by_p": {str(k): v for k, v in rep.containment_by_p.items()},
            "gap_interval": rep.gap_interval,
            "notes": rep.notes,
        },
    )
    print(f"containment verdict: {rep.containment}; gap: {rep.gap_interval}")
    return 0


def cmd_accept(cfg, out: Path, seed: int, cap: int) -> int:
    results = run_all()
    for r in results:
        print(r.line())
    _write_json(
        out / "acceptance.json",
        [
            {
                "criterion": r.cid,
                "name": r.name,
                "passed": r.passed,
                "elapsed_s": r.elapsed,
                "limit_s": r.limit,
                "details": r.details,
            }
            for r in results
        ],
    )
    return 0 if all(r.passed for r in results) else 1


HANDLERS = {
    ("measure", "build"): cmd_measure_build,
    ("measure", "dims"): cmd_measure_dims,
    ("measure", "decay"): cmd_measure_decay,
    ("extend", "norm"): cmd_extend_norm,
    ("extend", "ratio"): cmd_extend_ratio,
    ("convolve", "run"): cmd_convolve_run,
    ("convolve", "verify-thm31"): cmd_convolve_verify,
    ("knapp", "build"): cmd_knapp_build,
    ("knapp", "validate"): cmd_knapp_validate,
    ("knapp", "ratio-trend"): cmd_knapp_ratio_trend,
    ("oracle", "count"): cmd_oracle_count,
    ("oracle", "identity"): cmd_oracle_identity,
    ("regions", "plot"): cmd_regions_plot,
    ("accept", None): cmd_accept,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fractalext", description=__doc__)
    ap.add_argument("--config", type=Path, help="JSON config file")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, default=Path("fractalext-out"))
    ap.add_argument("--threads", type=int, default=0, help="cap numba worker threads")
    ap.add_argument("--cap-atoms", type=int, default=10**7)
    sub = ap.add_subparsers(dest="group", required=True)
    groups = {
        "measure": ["build", "dims", "decay"],
        "extend": ["norm", "ratio"],
        "convolve": ["run", "verify-thm31"],
        "knapp": ["build", "validate", "ratio-trend"],
        "oracle": ["count", "identity"],
        "regions": ["plot"],
    }
    for g, cmds in groups.items():
        gp = sub.add_parser(g)
        gsub = gp.add_subparsers(dest="command", required=True)
        for c in cmds:
            gsub.add_parser(c)
    sub.add_parser("accept")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = {}
    if args.config:
        try:
            cfg = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            print(f"config error at {args.config}: {exc}", file=sys.stderr)
            return 2
    if args.threads and _kernels.backend_name() == "numba":
        import numba

        numba.set_num_threads(args.threads)
    key = (args.group, getattr(args, "command", None))
    handler = HANDLERS[key]
    command = args.group if key[1] is None else f"{args.group} {key[1]}"
    try:
        args.out.mkdir(parents=True, exist_ok=True)
        _write_manifest(args.out, command, cfg, args.seed)
        return handler(cfg, args.out, args.seed, args.cap_atoms)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except InfeasibleParametersError as exc:
        print(f"infeasible parameters: {exc.constraint}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
