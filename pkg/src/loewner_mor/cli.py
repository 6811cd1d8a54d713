"""Command-line interface.

Exit codes: 0 success, 2 configuration error, 3 numerical degeneracy or
bad data, 4 I/O error.  Failures print one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import error_profile, log_grid, matched_pole_pairs, ratio_summary, reduced_poles, reduced_zeros, sample_values
from .beam import spectrum as beam_spectrum
from .config import build_config, load_config_file, parse_grid
from .exceptions import ConfigError, DataError, DegeneracyError, DomainError, EvaluationError
from .fem import assemble_second_order, to_first_order
from .loewner import RankWarning, build_pencil, close_under_conjugation, partition_arrays, realify, reduce, sv_analysis
from .plants import parse_plant
from .serialization import (
    config_hash,
    fem_to_dict,
    read_samples_csv,
    save_model,
    write_csv,
    write_json,
    write_samples_csv,
)
from .svg import line_plot

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def _grid(cfg):
    g = cfg.grid
    return log_grid(g["lo_exp"], g["hi_exp"], g["count"])


def _meta(cfg, command, **extra):
    config = cfg.to_dict()
    return {
        "command": command,
        "config": config,
        "config_hash": config_hash(config),
        "tool_version": __version__,
        **extra,
    }


def _load_data(cfg):
    """Samples from ``cfg.samples`` if given, else from the plant on the grid."""
    if cfg.samples:
        points, values = read_samples_csv(cfg.samples)
        return points, values, {"samples": cfg.samples}
    plant = parse_plant(cfg.plant, cfg.beam_params())
    grid = _grid(cfg)
    values = sample_values(plant, grid, n_jobs=cfg.n_jobs)
    return grid.points, values, {"plant": plant.metadata, "grid": grid.to_dict()}


def _pencil(points, values, partition):
    data = close_under_conjugation(partition_arrays(points, values, partition))
    return realify(build_pencil(data))


def _probe(pencil, seed):
    src = pencil.source
    scale = np.median(np.abs(np.concatenate([src.right_points, src.left_points]))) or 1.0
    theta = np.random.default_rng(seed).uniform(0.55 * np.pi, 0.95 * np.pi)
    return scale * 1.37 * np.exp(1j * theta)


def _write_sv(path, svs):
    n = max(len(svs.sv_row), len(svs.sv_col))
    row = np.pad(svs.sv_row, (0, n - len(svs.sv_row)), constant_values=np.nan)
    col = np.pad(svs.sv_col, (0, n - len(svs.sv_col)), constant_values=np.nan)
    rows = [(k + 1, row[k], col[k], row[k] / row[0], col[k] / col[0]) for k in range(n)]
    write_csv(path, ("index", "sv_row", "sv_col", "normalized_row", "normalized_col"), rows)


def _sv_svg(path, svs):
    k = np.arange(1, len(svs.sv_row) + 1)
    kc = np.arange(1, len(svs.sv_col) + 1)
    svg = line_plot(
        [("[L, Ls]", k, svs.normalized_row), ("[L; Ls]", kc, svs.normalized_col)],
        title="Normalized singular value decay",
        xlabel="index",
        ylabel="sigma_k / sigma_1",
        logx=False,
    )
    Path(path).write_text(svg)


def cmd_sample(cfg):
    out = Path(cfg.out)
    points, values, source = _load_data(cfg)
    write_samples_csv(out / "samples.csv", points, values)
    write_json(out / "samples.json", _meta(cfg, "sample", rows=len(points), **source))
    if cfg.svg:
        svg = line_plot([("|H|", points.imag, np.abs(values))], title="Samples", xlabel="omega [rad/s]", ylabel="|H(j omega)|")
        (out / "samples.svg").write_text(svg)
    return EXIT_OK


def cmd_sv(cfg):
    out = Path(cfg.out)
    points, values, source = _load_data(cfg)
    svs = sv_analysis(_pencil(points, values, cfg.partition))
    _write_sv(out / "singular_values.csv", svs)
    write_json(out / "sv.json", _meta(cfg, "sv", **source))
    if cfg.svg:
        _sv_svg(out / "singular_values.svg", svs)
    return EXIT_OK


def cmd_reduce(cfg):
    out = Path(cfg.out)
    points, values, source = _load_data(cfg)
    if cfg.order is not None and 2 * cfg.order > len(points):
        raise ConfigError(f"order {cfg.order} needs at least {2 * cfg.order} samples, got {len(points)}")
    pencil = _pencil(points, values, cfg.partition)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RankWarning)
        model = reduce(pencil, order=cfg.order, tol=cfg.tol, probe=_probe(pencil, cfg.seed))
    notes = [str(w.message) for w in caught if issubclass(w.category, RankWarning)]
    meta = _meta(cfg, "reduce", order=model.order, partition=cfg.partition, warnings=notes, **source)
    save_model(out / "model.json", model, meta)
    _write_sv(out / "singular_values.csv", model.singular_values)
    if cfg.svg:
        _sv_svg(out / "singular_values.svg", model.singular_values)
    for note in notes:
        print(f"warning: {note}", file=sys.stderr)
    return EXIT_OK


def _label(spec):
    if spec.endswith(".json"):
        return Path(spec.split(":", 1)[-1]).stem
    return spec.replace(":", "")


def cmd_compare(cfg):
    if not cfg.models:
        raise ConfigError("compare needs at least one --model")
    out = Path(cfg.out)
    params = cfg.beam_params()
    reference = parse_plant(cfg.plant, params)
    grid = _grid(cfg)
    ref_values = sample_values(reference, grid, n_jobs=cfg.n_jobs)
    labels, profiles, values = [], [], []
    for spec in cfg.models:
        plant = parse_plant(spec, params)
        vals = sample_values(plant, grid, n_jobs=cfg.n_jobs)
        labels.append(_label(spec))
        values.append(vals)
        profiles.append(error_profile(lambda s, v=ref_values: v, lambda s, v=vals: v, grid))
    header = ["omega", "abs_ref"]
    for lab in labels:
        header += [f"abs_H_{lab}", f"abs_err_{lab}", f"rel_err_{lab}"]
    rows = []
    for k, z in enumerate(grid.points):
        row = [z.imag, abs(ref_values[k])]
        for vals, prof in zip(values, profiles):
            row += [abs(vals[k]), prof.abs_err[k], prof.rel_err[k]]
        rows.append(row)
    write_csv(out / "compare.csv", header, rows)
    summary = {
        lab: {"max_rel": prof.max_rel, "median_rel": prof.median_rel, "zero_reference_points": int(prof.zero_reference.sum())}
        for lab, prof in zip(labels, profiles)
    }
    ratios = {}
    for lab, prof in zip(labels[1:], profiles[1:]):
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios[f"{lab}/{labels[0]}"] = ratio_summary(prof, profiles[0])
    meta = _meta(
        cfg,
        "compare",
        reference=reference.metadata,
        reference_convention="errors are normalized by the reference plant",
        grid=grid.to_dict(),
        models=dict(zip(labels, cfg.models)),
        summary=summary,
        ratios=ratios,
    )
    write_json(out / "compare.json", meta)
    if cfg.svg:
        omega = grid.omega
        resp = [("reference", omega, np.abs(ref_values))] + [(lab, omega, np.abs(v)) for lab, v in zip(labels, values)]
        (out / "compare_response.svg").write_text(
            line_plot(resp, title="Frequency response", xlabel="omega [rad/s]", ylabel="|H(j omega)|")
        )
        errs = [(lab, omega, prof.rel_err) for lab, prof in zip(labels, profiles)]
        (out / "compare_error.svg").write_text(
            line_plot(errs, title="Relative error", xlabel="omega [rad/s]", ylabel="relative error")
        )
    return EXIT_OK


def _analytic_rows(cfg, params):
    kind = cfg.plant.split(":", 1)[0]
    if kind == "beam":
        spec = beam_spectrum(cfg.count, params)
        rows = [("pole", z.real, z.imag, "analytic") for z in spec.poles()]
        rows.append(("pole", spec.real_pole, 0.0, "analytic"))
        if cfg.zeros:
            rows += [("zero", z.real, z.imag, "analytic") for z in spec.zeros()]
        return rows, spec.pole_pairs, spec.zero_pairs
    if kind == "fem":
        import scipy.linalg

        system = to_first_order(assemble_second_order(int(cfg.plant.split(":")[1]), params))
        poles = scipy.linalg.eigvals(system.state_A.toarray(), system.desc_G.toarray())
        poles = poles[np.lexsort((poles.real, poles.imag, np.abs(poles.imag)))]
        return [("pole", z.real, z.imag, "fem") for z in poles], None, None
    raise ConfigError(f"spectrum supports plants beam and fem:<N>, got {cfg.plant!r}")


def cmd_spectrum(cfg, explicit_plant=True):
    out = Path(cfg.out)
    params = cfg.beam_params()
    rows = []
    pole_pairs = zero_pairs = None
    if explicit_plant or not cfg.models:
        rows, pole_pairs, zero_pairs = _analytic_rows(cfg, params)
    pairing = []
    for spec in cfg.models:
        model = parse_plant(spec, params).evaluator
        label = _label(spec)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            poles = reduced_poles(model)
            zeros = reduced_zeros(model) if cfg.zeros else None
        for w in caught:
            print(f"warning: {label}: {w.message}", file=sys.stderr)
        rows += [("pole", z.real, z.imag, "reduced") for z in poles]
        if zeros is not None:
            rows += [("zero", z.real, z.imag, "reduced") for z in zeros]
        if pole_pairs is not None:
            for kind, pairs, cands in (("pole", pole_pairs, poles), ("zero", zero_pairs, zeros)):
                if cands is None:
                    continue
                _, matches = matched_pole_pairs(pairs, cands, rtol=np.inf)
                flat = pairs.reshape(-1)
                for m in matches:
                    a, c = flat[m.reference], cands[m.candidate]
                    pairing.append((label, kind, m.reference // 2 + 1, a.real, a.imag, c.real, c.imag, m.rel_distance))
    write_csv(out / "spectrum.csv", ("kind", "re", "im", "source"), rows)
    if pairing:
        write_csv(
            out / "pairing.csv",
            ("model", "kind", "mode", "analytic_re", "analytic_im", "reduced_re", "reduced_im", "rel_distance"),
            pairing,
        )
    write_json(out / "spectrum.json", _meta(cfg, "spectrum", rows=len(rows)))
    return EXIT_OK


def cmd_fem_assemble(cfg):
    if cfg.plant.split(":", 1)[0] != "fem":
        raise ConfigError(f"fem-assemble needs --plant fem:<N>, got {cfg.plant!r}")
    params = cfg.beam_params()
    second = assemble_second_order(int(cfg.plant.split(":")[1]), params)
    first = to_first_order(second)
    doc = fem_to_dict(second, first, params)
    doc["provenance"].update(config_hash=config_hash(cfg.to_dict()))
    write_json(Path(cfg.out) / "fem_system.json", doc)
    return EXIT_OK


COMMANDS = {
    "sample": cmd_sample,
    "reduce": cmd_reduce,
    "compare": cmd_compare,
    "spectrum": cmd_spectrum,
    "fem-assemble": cmd_fem_assemble,
    "sv": cmd_sv,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON experiment configuration")
    common.add_argument("--plant", help="beam | fem:<N> | modal:<N> | const | archive:<path> | samples:<path>")
    common.add_argument("--grid", help="lo:hi:count, exponents of 10 in rad/s")
    common.add_argument("--order", type=int, help="reduced order r")
    common.add_argument("--tol", type=float, help="singular value threshold for automatic order")
    common.add_argument("--out", help="output directory")
    common.add_argument("--svg", action="store_true", default=None, help="also write SVG plots")
    common.add_argument("--samples", help="samples CSV to use instead of sampling a plant")
    common.add_argument("--model", dest="models", action="append", help="model archive or plant spec (repeatable)")
    common.add_argument("--partition", choices=["alternating", "half-split"])
    common.add_argument("--count", type=int, help="number of analytic pole pairs")
    common.add_argument("--zeros", action="store_true", default=None, help="include zeros in spectrum output")
    common.add_argument("--seed", type=int)
    common.add_argument("--jobs", dest="n_jobs", type=int, help="threads used for sampling")

    parser = argparse.ArgumentParser(prog="loewner-mor", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "sample": "evaluate a plant on a frequency grid",
        "reduce": "build a Loewner reduced model",
        "compare": "error profiles of models against a reference plant",
        "spectrum": "analytic and reduced poles/zeros",
        "fem-assemble": "export the finite-difference matrices",
        "sv": "singular value decay of the Loewner pencil",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return parser


def _fail(code, kind, exc):
    print(json.dumps({"error": kind, "exit_code": code, "message": str(exc)}), file=sys.stderr)
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    overrides = {
        key: getattr(args, key)
        for key in ("plant", "order", "tol", "out", "svg", "samples", "models", "partition", "count", "zeros", "seed", "n_jobs")
    }
    try:
        if args.grid is not None:
            overrides["grid"] = parse_grid(args.grid)
        file_values = load_config_file(args.config) if args.config else {}
        cfg = build_config(file_values, overrides)
        command = COMMANDS[args.command]
        if args.command == "spectrum":
            explicit = args.plant is not None or "plant" in file_values
            return command(cfg, explicit_plant=explicit)
        return command(cfg)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, "config", exc)
    except (DegeneracyError, DataError, EvaluationError, DomainError, np.linalg.LinAlgError) as exc:
        return _fail(EXIT_NUMERIC, "numerical", exc)
    except OSError as exc:
        return _fail(EXIT_IO, "io", exc)


if __name__ == "__main__":
    sys.exit(main())
