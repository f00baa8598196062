"""Run configuration: a JSON document describing one system and the
knobs every subcommand shares.

Rational values are strings ("3", "-5/2") so they survive JSON without
floating-point damage.  Unknown keys are rejected rather than ignored;
a silently misspelled knob would change results without a trace.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import ConfigError
from .padic import PAdicSystem
from .rational import parse_rational
from .systems import Rifs, make_system

_TOP_KEYS = {
    "maps", "seed", "grid", "radius", "depths", "separation_max_n",
    "overlap_scan_length", "padic", "tolerances", "alpha_grid", "nu_range",
    "cutoff", "node_budget", "density_period", "out",
}


@dataclass(frozen=True)
class RunConfig:
    system: Rifs
    seed: Fraction
    grid_base: Fraction
    grid_kmin: int
    grid_kmax: int
    radius: Fraction
    probe_depths: tuple[int, ...]
    separation_max_n: int
    overlap_scan_length: int
    padic: PAdicSystem | None
    residual_tolerance: float
    tau: float
    alpha_start: float
    alpha_stop: float
    alpha_step: float
    nu_start: int
    nu_stop: int
    cutoff: Fraction
    node_budget: int
    density_period: Fraction | None
    out_dir: str

    def h_grid(self) -> list[Fraction]:
        return [self.grid_base**k
                for k in range(self.grid_kmin, self.grid_kmax + 1)]

    def alpha_values(self) -> list[float]:
        values = []
        a = self.alpha_start
        while a <= self.alpha_stop + 1e-12:
            values.append(round(a, 12))
            a += self.alpha_step
        return values

    def nu_levels(self) -> list[int]:
        return list(range(self.nu_start, self.nu_stop + 1))


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


def _get(doc: dict, key: str, default):
    value = doc.get(key, default)
    return value


def _rat(value, field: str) -> Fraction:
    _require(isinstance(value, str),
             f"{field}: must be a rational string like \"3\" or \"-5/2\"")
    try:
        return parse_rational(value)
    except ConfigError as exc:
        raise ConfigError(f"{field}: {exc}") from None


def _parse_maps(doc: dict) -> Rifs:
    maps = doc.get("maps")
    _require(isinstance(maps, list), "maps: must be a list of {r, b} objects")
    pairs = []
    for i, entry in enumerate(maps):
        _require(isinstance(entry, dict) and set(entry) == {"r", "b"},
                 f"maps[{i}]: must be an object with keys r and b")
        pairs.append((_rat(entry["r"], f"maps[{i}].r"),
                      _rat(entry["b"], f"maps[{i}].b")))
    return make_system(pairs)


def _parse_padic(doc: dict, system: Rifs) -> PAdicSystem | None:
    block = doc.get("padic")
    if block is None:
        return None
    _require(isinstance(block, dict) and set(block) <= {"p", "exponents", "signs"},
             "padic: must be an object with keys p, exponents, signs")
    for key in ("p", "exponents", "signs"):
        _require(key in block, f"padic.{key}: required")
    p = block["p"]
    _require(isinstance(p, int), "padic.p: must be an integer")
    exponents, signs = block["exponents"], block["signs"]
    _require(isinstance(exponents, list) and isinstance(signs, list)
             and len(exponents) == len(signs) == system.m,
             "padic: exponents and signs must list one entry per map")
    terms = []
    for i, (m, e, sg) in enumerate(zip(system.maps, exponents, signs)):
        _require(isinstance(e, int) and isinstance(sg, int),
                 f"padic entry {i}: exponent and sign must be integers")
        _require(m.ratio == sg * Fraction(p) ** e,
                 f"padic entry {i}: sign {sg} * {p}^{e} does not equal "
                 f"the ratio of maps[{i}]")
        terms.append((sg, e, m.offset))
    return PAdicSystem(p, tuple(terms))


def parse_config(doc: dict) -> RunConfig:
    """Validate a config document and fill defaults.

    The default h-grid uses the smallest ratio magnitude as base, so
    grid points line up with the system's own scales.
    """
    _require(isinstance(doc, dict), "config: must be a JSON object")
    unknown = set(doc) - _TOP_KEYS
    _require(not unknown, f"config: unknown keys {sorted(unknown)}")
    _require("maps" in doc, "maps: required")
    _require("seed" in doc, "seed: required")

    system = _parse_maps(doc)
    seed = _rat(doc["seed"], "seed")

    grid = _get(doc, "grid", {})
    _require(isinstance(grid, dict) and set(grid) <= {"base", "kmin", "kmax"},
             "grid: must be an object with keys base, kmin, kmax")
    base = (_rat(grid["base"], "grid.base") if "base" in grid
            else system.min_ratio_mag)
    _require(base > 1, "grid.base: must exceed 1")
    kmin = _get(grid, "kmin", 1)
    kmax = _get(grid, "kmax", 12)
    _require(isinstance(kmin, int) and isinstance(kmax, int)
             and 0 <= kmin < kmax, "grid: needs integers 0 <= kmin < kmax")

    radius = (_rat(doc["radius"], "radius") if "radius" in doc
              else base**kmax)
    _require(radius >= base**kmax, "radius: must cover the h-grid")

    depths = _get(doc, "depths", [2, 4, 6, 8])
    _require(isinstance(depths, list) and depths
             and all(isinstance(d, int) and d >= 1 for d in depths)
             and depths == sorted(depths),
             "depths: must be an ascending list of integers >= 1")

    separation_max_n = _get(doc, "separation_max_n", 8)
    _require(isinstance(separation_max_n, int) and separation_max_n >= 1,
             "separation_max_n: must be an integer >= 1")
    overlap_scan_length = _get(doc, "overlap_scan_length", 6)
    _require(isinstance(overlap_scan_length, int) and overlap_scan_length >= 1,
             "overlap_scan_length: must be an integer >= 1")

    tol = _get(doc, "tolerances", {})
    _require(isinstance(tol, dict) and set(tol) <= {"residual", "tau"},
             "tolerances: must be an object with keys residual, tau")
    residual = float(_get(tol, "residual", 1e-12))
    tau = float(_get(tol, "tau", 0.05))
    _require(residual > 0, "tolerances.residual: must be positive")
    _require(tau > 0, "tolerances.tau: must be positive")

    alpha = _get(doc, "alpha_grid", {})
    _require(isinstance(alpha, dict) and set(alpha) <= {"start", "stop", "step"},
             "alpha_grid: must be an object with keys start, stop, step")
    alpha_start = float(_get(alpha, "start", 0.1))
    alpha_stop = float(_get(alpha, "stop", 1.2))
    alpha_step = float(_get(alpha, "step", 0.1))
    _require(alpha_start > 0 and alpha_step > 0 and alpha_stop > alpha_start,
             "alpha_grid: needs 0 < start < stop and step > 0")

    nu_range = _get(doc, "nu_range", {})
    _require(isinstance(nu_range, dict) and set(nu_range) <= {"start", "stop"},
             "nu_range: must be an object with keys start, stop")
    nu_start = _get(nu_range, "start", 0)
    nu_stop = _get(nu_range, "stop", 18)
    _require(isinstance(nu_start, int) and isinstance(nu_stop, int)
             and 0 <= nu_start < nu_stop,
             "nu_range: needs integers 0 <= start < stop")

    cutoff = _rat(_get(doc, "cutoff", "10000"), "cutoff")
    _require(cutoff > 1, "cutoff: must exceed 1")

    node_budget = _get(doc, "node_budget", 10_000_000)
    _require(isinstance(node_budget, int) and node_budget >= 1,
             "node_budget: must be an integer >= 1")

    period = doc.get("density_period")
    density_period = (_rat(period, "density_period")
                      if period is not None else None)
    if density_period is not None:
        _require(density_period > 1, "density_period: must exceed 1")

    out_dir = _get(doc, "out", "out")
    _require(isinstance(out_dir, str) and out_dir, "out: must be a path string")

    return RunConfig(
        system=system, seed=seed, grid_base=base, grid_kmin=kmin,
        grid_kmax=kmax, radius=radius, probe_depths=tuple(depths),
        separation_max_n=separation_max_n,
        overlap_scan_length=overlap_scan_length,
        padic=_parse_padic(doc, system), residual_tolerance=residual, tau=tau,
        alpha_start=alpha_start, alpha_stop=alpha_stop, alpha_step=alpha_step,
        nu_start=nu_start, nu_stop=nu_stop, cutoff=cutoff,
        node_budget=node_budget, density_period=density_period,
        out_dir=out_dir)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(doc)


def apply_overrides(config: RunConfig, *, budget: int | None = None,
                    grid_base: Fraction | None = None,
                    kmax: int | None = None, cutoff: Fraction | None = None,
                    alpha_grid: tuple[float, float, float] | None = None,
                    out_dir: str | None = None) -> RunConfig:
    """Fold command-line overrides into a parsed config."""
    updates: dict = {}
    if budget is not None:
        _require(budget >= 1, "--budget: must be >= 1")
        updates["node_budget"] = budget
    if grid_base is not None:
        _require(grid_base > 1, "--grid-base: must exceed 1")
        updates["grid_base"] = grid_base
    if kmax is not None:
        _require(kmax > config.grid_kmin, "--kmax: must exceed grid kmin")
        updates["grid_kmax"] = kmax
    if cutoff is not None:
        _require(cutoff > 1, "--cutoff: must exceed 1")
        updates["cutoff"] = cutoff
    if alpha_grid is not None:
        start, stop, step = alpha_grid
        _require(start > 0 and step > 0 and stop > start,
                 "--alpha-grid: needs 0 < start < stop and step > 0")
        updates["alpha_start"] = start
        updates["alpha_stop"] = stop
        updates["alpha_step"] = step
    if out_dir is not None:
        updates["out_dir"] = out_dir
    if not updates:
        return config
    cfg = replace(config, **updates)
    if cfg.radius < cfg.grid_base**cfg.grid_kmax:
        # a radius that merely tracked the old default grows with it
        if config.radius == config.grid_base**config.grid_kmax:
            cfg = replace(cfg, radius=cfg.grid_base**cfg.grid_kmax)
        else:
            raise ConfigError("radius: must cover the h-grid after overrides")
    return cfg
