"""Command line driver.

Each subcommand loads one JSON config, prints its findings as a JSON
fragment on stdout, and writes any data files into the output
directory.  `report` chains every analysis into a single report.json,
recording per-analysis failures in place instead of aborting the run.

Exit codes: 0 success, 2 bad configuration or usage, 3 budget
exhausted, 4 precondition violated.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from bisect import bisect_left, bisect_right
from fractions import Fraction

from . import __version__
from .config import RunConfig, apply_overrides, load_config
from .dimension import (
    DimensionFit,
    attractor_box_counts,
    density_profile,
    dual_attractor_hull,
    estimate_beurling_dimension,
    estimate_box_dimension,
    estimate_discrete_hausdorff,
    estimate_mass_dimension,
    integerize,
    renewal_constant,
    solve_similarity_dimension,
)
from .errors import BudgetExceededError, ConfigError, DomainError
from .orbit import (
    counting_profile,
    enumerate_orbit,
    min_gap,
    overlap_probe,
    residual_points,
    write_orbit_dump,
)
from .padic import (
    attractor_sample,
    ball_count,
    compare_mass_and_box,
    mass_box_sandwich,
    padic_box_dimension,
)
from .rational import format_rational, parse_rational
from .systems import (
    common_fixed_point,
    find_exact_overlaps,
    has_incongruent_offsets,
    min_word_separation,
)


def _f(x) -> str:
    return format(float(x), ".17g")


def _write_csv(path, header, rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _fit_dict(fit: DimensionFit) -> dict:
    return {
        "lower": fit.lower,
        "upper": fit.upper,
        "slope": fit.slope,
        "window": [fit.window[0], fit.window[1]],
        "r_squared": fit.r_squared,
    }


def _tail_window(length: int, width: int = 10) -> tuple[int, int]:
    return (max(0, length - width), length)


class _Session:
    """One config plus caches shared between the fragments of a run.

    Orbit enumeration dominates the runtime, so samples are cached per
    radius and `report` reuses one sample across its analyses.
    """

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self._samples: dict[Fraction, object] = {}
        self._similarity = None

    def orbit(self, radius) -> object:
        key = Fraction(radius)
        if key not in self._samples:
            self._samples[key] = enumerate_orbit(
                self.cfg.system, self.cfg.seed, key,
                node_budget=self.cfg.node_budget)
        return self._samples[key]

    def similarity(self):
        if self._similarity is None:
            self._similarity = solve_similarity_dimension(
                [m.ratio for m in self.cfg.system.maps],
                tolerance=self.cfg.residual_tolerance)
        return self._similarity


def _frag_solve_s(ses: _Session, out_dir: str, args) -> dict:
    sol = ses.similarity()
    return {"s": sol.value, "residual": sol.residual,
            "iterations": sol.iterations}


def _frag_diagnose(ses: _Session, out_dir: str, args) -> dict:
    cfg = ses.cfg
    scan_length = args.depth if args.depth else cfg.overlap_scan_length
    degenerate_at = common_fixed_point(cfg.system)
    sol = ses.similarity()
    overlaps = find_exact_overlaps(cfg.system, scan_length,
                                   word_budget=cfg.node_budget)
    table = []
    for n in range(1, cfg.separation_max_n + 1):
        sep = min_word_separation(cfg.system, n)
        rate = None
        if sep is not None and sep != 0:
            rate = -math.log(float(sep)) / n
        table.append({
            "n": n,
            "delta": format_rational(sep) if sep is not None else None,
            "rate": rate,
        })
    witness = None
    if overlaps:
        witness = [list(overlaps[0][0]), list(overlaps[0][1])]
    return {
        "degenerate": degenerate_at is not None,
        "degenerate_at": (format_rational(degenerate_at)
                          if degenerate_at is not None else None),
        "similarity": {"s": sol.value, "residual": sol.residual},
        "exact_overlaps": {
            "scanned_to_length": scan_length,
            "count": len(overlaps),
            "first_witness": witness,
            "conditional": True,
        },
        "separation_table": table,
        "residue_criterion": has_incongruent_offsets(cfg.system),
    }


def _probe_depths(cfg: RunConfig, args) -> tuple[int, ...]:
    if not args.depth:
        return cfg.probe_depths
    kept = [d for d in cfg.probe_depths if d <= args.depth]
    if not kept or kept[-1] != args.depth:
        kept.append(args.depth)
    return tuple(kept)


def _frag_orbit(ses: _Session, out_dir: str, args) -> dict:
    cfg = ses.cfg
    sample = ses.orbit(cfg.radius)
    write_orbit_dump(sample, os.path.join(out_dir, "orbit.txt"))
    gap = min_gap(sample)
    depths = _probe_depths(cfg, args)
    matrices = []
    for m in overlap_probe(cfg.system, cfg.seed, depths, cfg.node_budget):
        matrices.append({
            "depth": m.depth,
            "orbit_size": m.truncated_orbit_size,
            "cells": [list(row) for row in m.cells],
            "max_offdiagonal": m.max_offdiagonal,
        })
    frag = {
        "size": len(sample.points),
        "complete": sample.complete,
        "radius": format_rational(sample.radius),
        "node_budget_used": sample.node_budget_used,
        "dump": "orbit.txt",
        "min_gap": {
            "value": format_rational(gap) if gap is not None else None,
            "conditional": True,
            "radius": format_rational(sample.radius),
        },
        "overlap_probe": {
            "conditional": True,
            "depths": list(depths),
            "matrices": matrices,
            "overlaps_observed": any(m["max_offdiagonal"] > 0
                                     for m in matrices),
        },
    }
    try:
        frag["residual_points"] = [format_rational(y)
                                   for y in residual_points(sample)]
    except DomainError as exc:
        frag["residual_points_error"] = str(exc)
    return frag


def _frag_dims(ses: _Session, out_dir: str, args) -> dict:
    cfg = ses.cfg
    sample = ses.orbit(cfg.radius)
    grid = cfg.h_grid()
    profile = counting_profile(sample, grid)
    rows = []
    for h, n in profile.entries:
        hf = float(h)
        exponent = math.log(n) / math.log(hf) if n >= 1 and hf > 1 else math.nan
        rows.append((_f(hf), str(n), _f(exponent)))
    _write_csv(os.path.join(out_dir, "dims.csv"),
               ["h", "N", "logN/logh"], rows)
    window = _tail_window(len(grid))
    mass = estimate_mass_dimension(profile, window=window)
    beurling = estimate_beurling_dimension(sample, grid, window=window)
    return {
        "complete": sample.complete,
        "radius": format_rational(sample.radius),
        "mass": _fit_dict(mass),
        "beurling": _fit_dict(beurling),
        "csv": "dims.csv",
    }


def _frag_dhd(ses: _Session, out_dir: str, args) -> dict:
    cfg = ses.cfg
    sample = ses.orbit(cfg.radius)
    points, scale = integerize(sample)
    report = estimate_discrete_hausdorff(points, cfg.alpha_values(),
                                         cfg.nu_levels(), tau=cfg.tau)
    rows = [(_f(alpha), str(n), _f(cost), _f(partial))
            for alpha, n, cost, partial in report.rows]
    _write_csv(os.path.join(out_dir, "nu.csv"),
               ["alpha", "n", "nu", "partial_sum"], rows)
    return {
        "scale": scale,
        "dim_estimate": report.dim_estimate,
        "decay_estimate": report.decay_estimate,
        "alpha_resolution": cfg.alpha_step,
        "tau": cfg.tau,
        "csv": "nu.csv",
    }


def _frag_attractor(ses: _Session, out_dir: str, args) -> dict:
    cfg = ses.cfg
    hull = dual_attractor_hull(cfg.system)
    box = attractor_box_counts(cfg.system, cfg.grid_kmax,
                               word_budget=cfg.node_budget)
    fit = estimate_box_dimension(box, window=_tail_window(len(box.ks)))
    return {
        "hull": [format_rational(hull[0]), format_rational(hull[1])],
        "delta": format_rational(box.delta),
        "counts": [[k, n] for k, n in zip(box.ks, box.counts)],
        "fit": _fit_dict(fit),
    }


def _jumps_in(pts, lo, hi) -> set:
    jumps = set(pts[bisect_left(pts, lo):bisect_right(pts, hi)])
    jumps.update(-x for x in pts[bisect_left(pts, -hi):bisect_right(pts, -lo)])
    return {x for x in jumps if lo <= x <= hi}


def _density_grid(cfg: RunConfig, sample, ratio, periods: int = 3,
                  fill: int = 40,
                  max_jumps: int = 200_000) -> list[Fraction]:
    """Grid for the density profile: a linear fill of each period plus
    every orbit jump in the span, so the tail extrema and the
    periodicity defect are exact for the sample.

    Orbits of nearly full density have as many jumps as integers in the
    span; beyond max_jumps the grid keeps only the fill, whose sampled
    extrema are then approximate but tight (the normalized count varies
    little between adjacent integers of a dense orbit).
    """
    top = cfg.grid_base**cfg.grid_kmax
    pts = sample.points
    if ratio is None:
        spine = cfg.h_grid()
        lo = spine[_tail_window(len(spine))[0]]
        grid = set(spine)
        jumps = _jumps_in(pts, lo, top)
        if len(jumps) <= max_jumps:
            grid |= jumps
        return sorted(x for x in grid if x <= top)
    span_lo = top / ratio**periods
    grid = set()
    for t in range(periods):
        period_lo = top / ratio ** (t + 1)
        step = period_lo * (ratio - 1) / fill
        grid.add(period_lo)
        for i in range(1, fill + 1):
            grid.add(period_lo + i * step)
    jumps = _jumps_in(pts, span_lo, top)
    if len(jumps) <= max_jumps:
        grid |= jumps
        # the defect fold needs ratio*h on the grid for jumps one period
        # down
        grid |= {ratio * x for x in jumps
                 if top / ratio**2 <= x <= top / ratio}
    return sorted(grid)


def _density_ratio(cfg: RunConfig) -> Fraction | None:
    if cfg.density_period is not None:
        return cfg.density_period
    mags = {abs(m.ratio) for m in cfg.system.maps}
    if len(mags) == 1:
        return mags.pop()
    return None


def _frag_density(ses: _Session, out_dir: str, args) -> dict:
    cfg = ses.cfg
    s = ses.similarity().value
    sample = ses.orbit(cfg.radius)
    ratio = _density_ratio(cfg)
    grid = _density_grid(cfg, sample, ratio)
    profile = counting_profile(sample, grid)
    report = density_profile(profile, s, period_ratio=ratio)
    rows = [(_f(h), _f(phase) if phase is not None else "nan", _f(value))
            for h, phase, value in report.samples]
    _write_csv(os.path.join(out_dir, "density.csv"),
               ["h", "phase", "N_over_hs"], rows)
    return {
        "s": s,
        "period": format_rational(ratio) if ratio is not None else None,
        "sup_tail": report.sup_tail,
        "inf_tail": report.inf_tail,
        "tail_window": [report.tail_window[0], report.tail_window[1]],
        "defect": report.defect,
        "csv": "density.csv",
    }


def _frag_renewal(ses: _Session, out_dir: str, args) -> dict:
    cfg = ses.cfg
    system = cfg.system
    s = ses.similarity().value
    cutoff = cfg.cutoff
    # enlarge the radius until the truncated sums and the residual scan
    # are decidable from the sample
    needed = system.max_ratio_mag * cutoff + system.max_offset_mag
    for candidate in sorted({m(cfg.seed) for m in system.maps}):
        needed = max(needed, abs(candidate))
        for m in system.maps:
            needed = max(needed, abs(m.inverse()(candidate)))
    sample = ses.orbit(max(cfg.radius, needed))
    residuals = residual_points(sample)
    estimate = renewal_constant(system, sample, residuals, s, cutoff)
    gap = min_gap(sample)
    depths = _probe_depths(cfg, args)
    probe = overlap_probe(system, cfg.seed, depths, cfg.node_budget)
    overlaps_observed = any(m.max_offdiagonal > 0 for m in probe)
    residue = has_incongruent_offsets(system)
    frag = {
        "value": estimate.value,
        "tail_bound": estimate.tail_bound,
        "cutoff": estimate.cutoff,
        "tail_density_sup": estimate.tail_density_sup,
        "s": s,
        "residual_points": [format_rational(y) for y in residuals],
        "conditional": True,
        "probe_depths": list(depths),
        "overlaps_observed": overlaps_observed,
        "residue_criterion": residue,
        "min_gap": format_rational(gap) if gap is not None else None,
        "radius": format_rational(sample.radius),
        "file": "renewal.txt",
    }
    lines = [
        f"value = {_f(estimate.value)}",
        f"tail_bound = {_f(estimate.tail_bound)}",
        f"cutoff = {_f(estimate.cutoff)}",
        f"tail_density_sup = {_f(estimate.tail_density_sup)}",
        f"s = {_f(s)}",
        "residual_points = " + ",".join(frag["residual_points"]),
        "conditional = true",
        "probe_depths = " + ",".join(str(d) for d in depths),
        f"overlaps_observed = {'true' if overlaps_observed else 'false'}",
        f"residue_criterion = {'true' if residue else 'false'}",
        f"min_gap = {frag['min_gap'] if gap is not None else 'none'}",
    ]
    with open(os.path.join(out_dir, "renewal.txt"), "w",
              encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return frag


def _frag_padic(ses: _Session, out_dir: str, args) -> dict:
    cfg = ses.cfg
    if cfg.padic is None:
        raise ConfigError("padic: block required for this command")
    psys = cfg.padic
    p = psys.p
    sample = ses.orbit(cfg.radius)
    clustering = [[k, ball_count(sample.points, p, k).count]
                  for k in range(1, cfg.grid_kmax + 1)]

    if args.depth:
        depth = args.depth
    else:
        depth = 1
        while cfg.system.m ** (depth + 1) <= 2**16:
            depth += 1
    att = attractor_sample(psys, cfg.seed, depth, cfg.node_budget)
    k_top = min(att.certified_k, 12)
    box = padic_box_dimension(att.points, p, range(2, k_top + 1),
                              certified_k=att.certified_k)
    log_p = math.log(p)
    rows = [(str(k), str(n), _f(math.log(n) / (k * log_p)))
            for k, n in zip(box.ks, box.counts)]
    _write_csv(os.path.join(out_dir, "padic.csv"),
               ["k", "N_k", "logN_k/(k log p)"], rows)

    frag = {
        "p": p,
        "clustering": clustering,
        "attractor": {
            "depth": att.depth,
            "size": len(att.points),
            "certified_k": att.certified_k,
        },
        "box": {
            "counts": [[k, n] for k, n in zip(box.ks, box.counts)],
            "fit": _fit_dict(box.fit),
        },
        "csv": "padic.csv",
    }
    try:
        rows_sw = mass_box_sandwich(psys, sample,
                                    range(1, cfg.grid_kmax + 1))
        frag["sandwich"] = {
            "rows": [{"k": r.k, "lower": r.lower, "balls": r.balls,
                      "upper": r.upper, "holds": r.holds}
                     for r in rows_sw],
            "all_hold": all(r.holds for r in rows_sw),
        }
    except DomainError as exc:
        frag["sandwich"] = {"error": str(exc)}
    try:
        check = compare_mass_and_box(psys, cfg.seed,
                                     mass_kmax=cfg.grid_kmax,
                                     node_budget=cfg.node_budget)
        frag["mass_vs_box"] = {
            "mass": _fit_dict(check.mass_fit),
            "box": _fit_dict(check.box_fit),
            "difference": check.difference,
        }
    except DomainError as exc:
        frag["mass_vs_box"] = {"error": str(exc)}
    return frag


_ANALYSES = (
    ("similarity", _frag_solve_s),
    ("diagnosis", _frag_diagnose),
    ("orbit", _frag_orbit),
    ("dims", _frag_dims),
    ("discrete_hausdorff", _frag_dhd),
    ("attractor", _frag_attractor),
    ("density", _frag_density),
    ("renewal", _frag_renewal),
    ("padic", _frag_padic),
)


def _frag_report(ses: _Session, out_dir: str, args) -> dict:
    cfg = ses.cfg
    doc = {
        "version": __version__,
        "system": cfg.system.describe(),
        "seed": format_rational(cfg.seed),
    }
    for name, builder in _ANALYSES:
        if name == "padic" and cfg.padic is None:
            doc[name] = {"skipped": "no padic block in config"}
            continue
        try:
            doc[name] = builder(ses, out_dir, args)
        except (ConfigError, DomainError, BudgetExceededError) as exc:
            doc[name] = {"error": str(exc)}
    with open(os.path.join(out_dir, "report.json"), "w",
              encoding="utf-8") as fh:
        fh.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return doc


_DISPATCH = {
    "solve-s": _frag_solve_s,
    "diagnose": _frag_diagnose,
    "orbit": _frag_orbit,
    "dims": _frag_dims,
    "dhd": _frag_dhd,
    "attractor": _frag_attractor,
    "density": _frag_density,
    "renewal": _frag_renewal,
    "padic": _frag_padic,
    "report": _frag_report,
}

_HELP = {
    "solve-s": "solve the similarity dimension",
    "diagnose": "degeneracy, exact overlaps, separation table",
    "orbit": "enumerate the orbit and dump it",
    "dims": "mass and window-maximum dimension fits",
    "dhd": "cover-cost table and discrete Hausdorff estimates",
    "attractor": "dual attractor hull and box counts",
    "density": "normalized counts, extrema, periodicity",
    "renewal": "density constant with tail bound and evidence",
    "padic": "ball clustering, p-adic box fit, mass-vs-box check",
    "report": "run every analysis into one report.json",
}


def _parse_alpha_grid(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError("--alpha-grid: expected START:STOP:STEP")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"--alpha-grid: not numeric: {text!r}") from None
    return start, stop, step


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rifslab",
        description="orbit statistics for expanding affine systems")
    parser.add_argument("--version", action="version",
                        version=f"rifslab {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, metavar="PATH",
                        help="JSON run configuration")
    common.add_argument("--out", metavar="DIR",
                        help="output directory (default from config)")
    common.add_argument("--budget", type=int, metavar="N",
                        help="override the node budget")
    common.add_argument("--grid-base", metavar="Q",
                        help="override the h-grid base (rational)")
    common.add_argument("--kmax", type=int, metavar="N",
                        help="override the largest grid exponent")
    common.add_argument("--depth", type=int, metavar="N",
                        help="override probe, scan, or sample depth")
    common.add_argument("--alpha-grid", metavar="START:STOP:STEP",
                        help="override the cover-cost exponent grid")
    common.add_argument("--cutoff", metavar="X",
                        help="override the renewal truncation (rational)")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name in _DISPATCH:
        subparsers.add_parser(name, parents=[common], help=_HELP[name])
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.depth is not None and args.depth < 1:
            raise ConfigError("--depth: must be >= 1")
        cfg = load_config(args.config)
        cfg = apply_overrides(
            cfg,
            budget=args.budget,
            grid_base=(parse_rational(args.grid_base)
                       if args.grid_base else None),
            kmax=args.kmax,
            cutoff=parse_rational(args.cutoff) if args.cutoff else None,
            alpha_grid=(_parse_alpha_grid(args.alpha_grid)
                        if args.alpha_grid else None),
            out_dir=args.out,
        )
        session = _Session(cfg)
        os.makedirs(cfg.out_dir, exist_ok=True)
        fragment = _DISPATCH[args.command](session, cfg.out_dir, args)
        print(json.dumps(fragment, indent=2, sort_keys=True))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
