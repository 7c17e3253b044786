"""Command line front-end.

Every command reads one JSON config (``--config``), writes its files into
``--out`` and optionally renders SVG figures (``--svg``).  Exit codes: 0 on
success, 1 on a computational failure, 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import growth
from .families import OperatorFamily, concatenate, linear_family
from .growth import family_constants, safe_step
from .io import parse_matrix, read_window, write_json, write_track_csv, write_window
from .lifting import TrackingError, spectral_flow, track_path
from .linalg import as_hermitian, eigvalsh
from .spectrum import SpectrumWindow, canonical_window, d_a, quotient_distance
from .torus import UNIT_SHEAR, FlatTorus, as_unimodular, pullback, standard_torus, torus_spectrum

log = logging.getLogger("specflow")

EXIT_OK, EXIT_COMPUTE, EXIT_INVALID = 0, 1, 2


class ConfigError(ValueError):
    pass


def _check_keys(cfg: dict, allowed: set, required: set = frozenset(), where: str = "config"):
    if not isinstance(cfg, dict):
        raise ConfigError(f"{where} must be a JSON object")
    unknown = set(cfg) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")
    missing = set(required) - set(cfg)
    if missing:
        raise ConfigError(f"missing keys in {where}: {sorted(missing)}")


def _load_config(path) -> tuple[dict, Path]:
    if path is None:
        return {}, Path.cwd()
    p = Path(path)
    try:
        cfg = json.loads(p.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {p}: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg, p.parent


def _torus(desc) -> FlatTorus:
    try:
        return FlatTorus.from_dict(desc)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid torus descriptor: {exc}") from None


def _matrix(desc, base) -> np.ndarray:
    try:
        return as_hermitian(parse_matrix(desc, base))
    except (OSError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid matrix: {exc}") from None


def _positive(cfg, key, default, kind=float):
    val = cfg.get(key, default)
    if isinstance(val, bool) or not isinstance(val, (int, float)) or not val > 0:
        raise ConfigError(f"{key} must be a positive number")
    if kind is int and int(val) != val:
        raise ConfigError(f"{key} must be an integer")
    return kind(val)


# spectrum ------------------------------------------------------------------

def cmd_spectrum(cfg: dict, base: Path, out: Path, svg: bool) -> int:
    _check_keys(cfg, {"torus", "matrix", "count", "name"})
    if ("torus" in cfg) == ("matrix" in cfg):
        raise ConfigError("give exactly one of 'torus' or 'matrix'")
    name = cfg.get("name", "spectrum")
    if "torus" in cfg:
        torus = _torus(cfg["torus"])
        count = _positive(cfg, "count", 10, int)
        compute = lambda: torus_spectrum(torus, count)  # noqa: E731
    else:
        if "count" in cfg:
            raise ConfigError("'count' only applies to torus spectra")
        mat = _matrix(cfg["matrix"], base)
        compute = lambda: canonical_window(eigvalsh(mat))  # noqa: E731
    window = compute()
    out.mkdir(parents=True, exist_ok=True)
    write_window(window, out / name)
    if svg:
        from .plotting import plot_window

        plot_window(window, out / f"{name}.svg")
    return EXIT_OK


# track ---------------------------------------------------------------------

def _family(desc, base) -> OperatorFamily:
    _check_keys(desc, {"type", "A0", "A1", "matrix"}, {"type"}, "family")
    kind = desc["type"]
    if kind == "linear":
        _check_keys(desc, {"type", "A0", "A1"}, {"A0", "A1"}, "family")
        a0, a1 = _matrix(desc["A0"], base), _matrix(desc["A1"], base)
        if a0.shape != a1.shape:
            raise ConfigError("A0 and A1 differ in dimension")
        return linear_family(a0, a1)
    if kind == "constant":
        _check_keys(desc, {"type", "matrix"}, {"matrix"}, "family")
        m = _matrix(desc["matrix"], base)
        return linear_family(m, m)
    raise ConfigError(f"unknown family type {kind!r}")


def _path_family(family: OperatorFamily, how: str) -> OperatorFamily:
    if how == "forward":
        return family
    if how == "reverse":
        return family.reversed()
    if how == "loop":
        return concatenate(family, family.reversed())
    raise ConfigError(f"path must be forward, reverse or loop, not {how!r}")


def cmd_track(cfg: dict, base: Path, out: Path, svg: bool) -> int:
    _check_keys(
        cfg,
        {"family", "eps", "controller", "steps", "grid_points", "band", "path", "interval", "name"},
        {"family", "eps"},
    )
    family = _family(cfg["family"], base)
    eps = _positive(cfg, "eps", None)
    controller = cfg.get("controller", "adaptive")
    if controller not in ("adaptive", "fixed"):
        raise ConfigError("controller must be 'adaptive' or 'fixed'")
    steps = _positive(cfg, "steps", 100, int)
    grid_points = _positive(cfg, "grid_points", growth.DEFAULT_GRID, int)
    if grid_points < 2:
        raise ConfigError("grid_points must be at least 2")
    band = cfg.get("band")
    if band is not None:
        if not (isinstance(band, list) and len(band) == 2 and band[0] < 0 < band[1]):
            raise ConfigError("band must be [lo, hi] with lo < 0 < hi")
        band = (float(band[0]), float(band[1]))
    if "interval" in cfg:
        iv = cfg["interval"]
        if not (isinstance(iv, list) and len(iv) == 2 and 0 <= iv[0] < iv[1] <= 1):
            raise ConfigError("interval must be [a, b] with 0 <= a < b <= 1")
        family = family.restrict(float(iv[0]), float(iv[1]))
    family = _path_family(family, cfg.get("path", "forward"))
    name = cfg.get("name", "track")

    out.mkdir(parents=True, exist_ok=True)
    try:
        path = track_path(family, eps, controller, steps=steps, band=band, grid_points=grid_points)
    except TrackingError as exc:
        write_json(out / f"{name}.json", {"error": str(exc), "interval": list(exc.interval or [])})
        log.error("%s", exc)
        return EXIT_COMPUTE
    write_track_csv(out / f"{name}.csv", path.rows())
    write_json(out / f"{name}.json", path.summary())
    if svg:
        from .plotting import plot_branches

        plot_branches(path, out / f"{name}.svg")
    print(json.dumps({"flow": spectral_flow(path), "steps": path.steps}))
    return EXIT_OK


# distance ------------------------------------------------------------------

def _window(desc, base) -> SpectrumWindow:
    try:
        if isinstance(desc, dict):
            return SpectrumWindow.from_dict(desc)
        p = Path(desc)
        return read_window(p if p.is_absolute() else base / p)
    except (OSError, TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"unreadable window {desc!r}: {exc}") from None


def cmd_distance(cfg: dict, base: Path, out: Path | None, svg: bool) -> int:
    _check_keys(cfg, {"u", "v", "max_shift", "min_overlap"}, {"u", "v"})
    u, v = _window(cfg["u"], base), _window(cfg["v"], base)
    max_shift = cfg.get("max_shift", max(len(u), len(v)))
    if isinstance(max_shift, bool) or not isinstance(max_shift, int) or max_shift < 0:
        raise ConfigError("max_shift must be a non-negative integer")
    min_overlap = cfg.get("min_overlap")
    if min_overlap is not None and (not isinstance(min_overlap, int) or min_overlap < 1):
        raise ConfigError("min_overlap must be a positive integer")
    aligned = u.index_lo == v.index_lo and len(u) == len(v)
    q = quotient_distance(u, v, max_shift, min_overlap)
    result = {
        "d_a": d_a(u, v) if aligned else None,
        "dbar": q.distance if math.isfinite(q.distance) else None,
        "shift": q.shift,
    }
    print(json.dumps(result))
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        write_json(out / "distance.json", result)
    return EXIT_OK


# counterexample ------------------------------------------------------------

def _int_vector(text, n=3, name="delta"):
    try:
        vals = [int(x) for x in str(text).replace(" ", "").split(",")]
    except ValueError:
        raise ConfigError(f"{name} must be comma separated integers") from None
    if len(vals) != n or any(x not in (0, 1) for x in vals):
        raise ConfigError(f"{name} must be a 0/1 vector of length {n}")
    return tuple(vals)


def _int_matrix(text):
    if isinstance(text, list):
        rows = text
    else:
        rows = [[x for x in r.split(",")] for r in str(text).replace(" ", "").split(";")]
    try:
        arr = np.array(rows, dtype=float)
        return as_unimodular(arr)
    except ValueError as exc:
        raise ConfigError(f"invalid map: {exc}") from None


def _same_spectrum(a: SpectrumWindow, b: SpectrumWindow, count: int, rtol=1e-10) -> bool:
    lo, hi = -count, count - 1
    if lo not in a or hi not in a or lo not in b or hi not in b:
        return False
    x, y = a.restrict(lo, hi).values, b.restrict(lo, hi).values
    return bool(np.all(np.abs(x - y) <= rtol * np.maximum(1.0, np.abs(x))))


def cmd_counterexample(cfg: dict, base: Path, out: Path | None, svg: bool, args=None) -> int:
    _check_keys(cfg, {"delta", "compare", "map", "count"})
    opts = dict(cfg)
    for key in ("delta", "compare", "map", "count"):
        val = getattr(args, key, None) if args is not None else None
        if val is not None:
            opts[key] = val
    delta = _int_vector(opts.get("delta", "1,1,0"))
    f = _int_matrix(opts.get("map", UNIT_SHEAR.tolist()))
    if f.shape != (3, 3):
        raise ConfigError("map must be 3x3")
    count = _positive(opts, "count", 200, int)
    source = standard_torus(3, delta)
    pulled = pullback(source, f)
    compare = _int_vector(opts["compare"], name="compare") if "compare" in opts else pulled.delta
    other = standard_torus(3, compare)

    s_src = torus_spectrum(source, count)
    s_pull = torus_spectrum(pulled, count)
    s_cmp = torus_spectrum(other, count)
    iso = _same_spectrum(s_src, s_pull, count)
    distinct = not _same_spectrum(s_src, s_cmp, count)

    def fmt_delta(d):
        return "(" + ",".join(map(str, d)) + ")"

    first_pos = {k: float(w.values[w.values > 0][0]) for k, w in
                 (("source", s_src), ("pullback", s_pull), ("compare", s_cmp))}
    lines = [
        f"source:   gram=I      delta={fmt_delta(delta)}  smallest positive {first_pos['source']!r}",
        f"pullback: gram=f^T f  delta={fmt_delta(pulled.delta)}  smallest positive {first_pos['pullback']!r}",
        f"compare:  gram=I      delta={fmt_delta(compare)}  smallest positive {first_pos['compare']!r}",
        f"isospectral: {str(iso).lower()}, distinct: {str(distinct).lower()}",
    ]
    print("\n".join(lines))
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        write_json(out / "counterexample.json", {
            "delta": list(delta), "pullback_delta": list(pulled.delta), "compare": list(compare),
            "map": f.tolist(), "count": count, "smallest_positive": first_pos,
            "isospectral": iso, "distinct": distinct,
        })
        if svg:
            from .plotting import plot_spectra

            plot_spectra({
                f"I, {fmt_delta(delta)}": s_src,
                f"f*I, {fmt_delta(pulled.delta)}": s_pull,
                f"I, {fmt_delta(compare)}": s_cmp,
            }, out / "counterexample.svg")
    return EXIT_OK if (iso and distinct) else EXIT_COMPUTE


# constants -----------------------------------------------------------------

DEFAULT_C_TABLE = [0.5, 1.0, 2.0, 5.0]
DEFAULT_EPS_TABLE = [0.01, 0.1, 0.3, 1.0]


def cmd_constants(cfg: dict, base: Path, out: Path | None, svg: bool) -> int:
    _check_keys(cfg, {"C", "eps", "family", "grid_points"})
    cs = cfg.get("C", DEFAULT_C_TABLE)
    epss = cfg.get("eps", DEFAULT_EPS_TABLE)
    for name, vals in (("C", cs), ("eps", epss)):
        if not isinstance(vals, list) or not vals or any(
            isinstance(x, bool) or not isinstance(x, (int, float)) or not x > 0 for x in vals
        ):
            raise ConfigError(f"{name} must be a non-empty list of positive numbers")
    family = _family(cfg["family"], base) if "family" in cfg else None
    grid_points = _positive(cfg, "grid_points", growth.DEFAULT_GRID, int)

    lines = [
        f"C0,{growth.C0!r}",
        f"C1,{growth.C1!r}",
        f"C2,{growth.C2!r}",
        f"R,{growth.R!r}",
        "C,eps,safe_step",
    ]
    lines += [f"{c!r},{e!r},{safe_step(c, e)!r}" for c in cs for e in epss]
    if family is not None:
        fc = family_constants(family, grid_points=grid_points)
        lines += ["alpha,beta,family_C", f"{fc.alpha!r},{fc.beta!r},{fc.C!r}"]
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / "constants.csv").write_text(text)
    return EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "track": cmd_track,
    "distance": cmd_distance,
    "counterexample": cmd_counterexample,
    "constants": cmd_constants,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="specflow", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=str, default=None, help="JSON run config")
        p.add_argument("--out", type=str, default=None, help="output directory")
        p.add_argument("--svg", action="store_true", help="also render SVG figures")
        if name == "counterexample":
            p.add_argument("--delta", help="spin structure of the source torus, e.g. 1,1,0")
            p.add_argument("--compare", help="spin structure compared against, default: pulled back delta")
            p.add_argument("--map", help="unimodular map, rows separated by ';'")
            p.add_argument("--count", type=int, help="eigenvalues per sign to compare")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    needs_config = args.command in ("spectrum", "track", "distance")
    try:
        if needs_config and args.config is None:
            raise ConfigError(f"{args.command} requires --config")
        cfg, base = _load_config(args.config)
        out = Path(args.out) if args.out else None
        if args.command in ("spectrum", "track") and out is None:
            out = Path.cwd()
        if args.command == "counterexample":
            return cmd_counterexample(cfg, base, out, args.svg, args)
        return COMMANDS[args.command](cfg, base, out, args.svg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ArithmeticError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
