"""Command-line front end: scenario files, result serialization, subcommands.

Scenario files are YAML with nested sections and explicit units (GHz,
meters, dBm, dB). Every run writes a JSON manifest next to its outputs
with the scenario hash, seed, tool version, and command line; numeric
output files (CSV) are byte-identical when re-run with the same inputs.
"""

import argparse
import hashlib
import json
import sys
import time
import warnings
from pathlib import Path as FsPath

import numpy as np
import yaml

from . import __version__
from . import harness
from .harness import Scenario, farfield_table

FORMAT_VERSION = 1

# YAML section/key -> Scenario field, with a unit conversion where needed
_SCHEMA = {
    "carrier_ghz": ("carrier_hz", lambda v: float(v) * 1e9, lambda s: s.carrier_hz / 1e9),
    "bs": {
        "center": ("bs_center", tuple, lambda s: list(s.bs_center)),
        "array": (("bs_n_x", "bs_n_z"), None, lambda s: [s.bs_n_x, s.bs_n_z]),
        "spacing_wavelengths": ("bs_spacing_wl", float, lambda s: s.bs_spacing_wl),
    },
    "ris": {
        "center": ("ris_center", tuple, lambda s: list(s.ris_center)),
        "size_m": (("ris_size_y_m", "ris_size_z_m"), None,
                   lambda s: [s.ris_size_y_m, s.ris_size_z_m]),
        "spacing_wavelengths": ("ris_spacing_wl", float, lambda s: s.ris_spacing_wl),
    },
    "blockage": {
        "center": ("blockage_center", tuple, lambda s: list(s.blockage_center)),
        "extent_m": (("blockage_r_x", "blockage_r_y"), None,
                     lambda s: [s.blockage_r_x, s.blockage_r_y]),
        "loss_db": ("blockage_loss_db", float, lambda s: s.blockage_loss_db),
    },
    "mu": {
        "antennas": ("n_mu", int, lambda s: s.n_mu),
        "spacing_wavelengths": ("mu_spacing_wl", float, lambda s: s.mu_spacing_wl),
    },
    "paths": {
        "per_link": (("paths_direct", "paths_bs_ris", "paths_ris_mu"), None,
                     lambda s: [s.paths_direct, s.paths_bs_ris, s.paths_ris_mu]),
        "scatterer_box": (("scatterer_box_min", "scatterer_box_max"), None,
                          lambda s: [list(s.scatterer_box_min), list(s.scatterer_box_max)]),
        "beta_semantics": ("beta_semantics", str, lambda s: s.beta_semantics),
    },
    "rf": {
        "transmit_power_dbm": ("p_bs_dbm", float, lambda s: s.p_bs_dbm),
        "noise_psd_dbm_per_hz": ("noise_psd_dbm_hz", float, lambda s: s.noise_psd_dbm_hz),
        "bandwidth_hz": ("bandwidth_hz", float, lambda s: s.bandwidth_hz),
        "noise_figure_db": ("noise_figure_db", float, lambda s: s.noise_figure_db),
    },
    "codebook": {
        "levels": ("codebook_levels", lambda v: tuple(tuple(x) for x in v),
                   lambda s: [list(x) for x in s.codebook_levels]),
        "alpha": ("codebook_alpha", float, lambda s: s.codebook_alpha),
    },
    "campaign": {
        "beta_list_db": ("beta_list_db", lambda v: tuple(float(x) for x in v),
                         lambda s: list(s.beta_list_db)),
        "trials": ("trials", int, lambda s: s.trials),
        "master_seed": ("master_seed", int, lambda s: s.master_seed),
        "workers": ("workers", int, lambda s: s.workers),
        "average": ("average", str, lambda s: s.average),
    },
    "illumination": {
        "reference_power_w": ("illum_reference_power_w", float,
                              lambda s: s.illum_reference_power_w),
        "grid": ("illum_grid", int, lambda s: s.illum_grid),
    },
}

_REQUIRED = ["carrier_ghz"]


def _apply_entry(kwargs, spec, value, where):
    target, conv, _ = spec
    if isinstance(target, tuple):
        if not isinstance(value, (list, tuple)) or len(value) != len(target):
            raise ValueError(f"scenario key {where}: expected {len(target)} values")
        for name, v in zip(target, value):
            kwargs[name] = tuple(v) if isinstance(v, list) else v
    else:
        kwargs[target] = conv(value) if conv else value


def load_scenario(path, strict=True):
    """Parse and validate a scenario file; raises ValueError naming bad fields."""
    with open(path) as fh:
        raw = yaml.safe_load(fh)
    if not isinstance(raw, dict):
        raise ValueError(f"scenario file {path} is not a mapping")
    raw = dict(raw)
    raw.pop("format_version", None)
    for req in _REQUIRED:
        if req not in raw:
            raise ValueError(f"scenario file missing required key: {req}")
    kwargs = {}
    for key, value in raw.items():
        spec = _SCHEMA.get(key)
        if spec is None:
            if strict:
                raise ValueError(f"unknown scenario key: {key}")
            warnings.warn(f"ignoring unknown scenario key: {key}")
            continue
        if isinstance(spec, dict):
            if not isinstance(value, dict):
                raise ValueError(f"scenario section {key} must be a mapping")
            for sub, subval in value.items():
                subspec = spec.get(sub)
                if subspec is None:
                    if strict:
                        raise ValueError(f"unknown scenario key: {key}.{sub}")
                    warnings.warn(f"ignoring unknown scenario key: {key}.{sub}")
                    continue
                _apply_entry(kwargs, subspec, subval, f"{key}.{sub}")
        else:
            _apply_entry(kwargs, spec, value, key)
    return Scenario(**kwargs)


def save_scenario(scenario, path):
    """Write a scenario back to YAML; load(save(x)) is field-identical to x."""
    doc = {"format_version": FORMAT_VERSION}
    for key, spec in _SCHEMA.items():
        if isinstance(spec, dict):
            doc[key] = {sub: subspec[2](scenario) for sub, subspec in spec.items()}
        else:
            doc[key] = spec[2](scenario)
    with open(path, "w") as fh:
        yaml.safe_dump(doc, fh, sort_keys=False)


def scenario_hash(scenario):
    canon = json.dumps(scenario.to_dict(), sort_keys=True)
    return hashlib.sha256(canon.encode()).hexdigest()


def default_scenario_path():
    return FsPath(__file__).parent / "scenarios" / "reference.scn"


def _fmt(x):
    return f"{x:.6g}"


def write_manifest(out_dir, scenario, argv, extra=None):
    man = {
        "format_version": FORMAT_VERSION,
        "tool": f"nearris {__version__}",
        "command_line": list(argv),
        "scenario_sha256": scenario_hash(scenario),
        "master_seed": scenario.master_seed,
        "timestamp_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    if extra:
        man.update(extra)
    p = FsPath(out_dir) / "manifest.json"
    with open(p, "w") as fh:
        json.dump(man, fh, indent=2)
        fh.write("\n")
    return p


def write_trials_csv(path, results):
    lines = [f"# format_version={FORMAT_VERSION}",
             "trial,beta_db,scheme,snr_db,mu_x,mu_y,mu_z,pilots,winners"]
    for r in results:
        win = "|".join(f"{wx},{wy}" for wx, wy in r.winners)
        for scheme in sorted(r.snr_db):
            pilots = r.pilots if scheme == "proposed" else ""
            winners = win if scheme == "proposed" else ""
            lines.append(
                f"{r.trial},{_fmt(r.beta_db)},{scheme},{_fmt(r.snr_db[scheme])},"
                f"{_fmt(r.mu_position[0])},{_fmt(r.mu_position[1])},{_fmt(r.mu_position[2])},"
                f"{pilots},{winners}"
            )
    FsPath(path).write_text("\n".join(lines) + "\n")


def write_aggregates_csv(path, rows):
    lines = [f"# format_version={FORMAT_VERSION}",
             "scheme,beta_db,mean_snr_db,std_snr_db,n_trials"]
    for a in rows:
        lines.append(f"{a.scheme},{_fmt(a.beta_db)},{_fmt(a.mean_snr_db)},"
                     f"{_fmt(a.std_snr_db)},{a.n_trials}")
    FsPath(path).write_text("\n".join(lines) + "\n")


def write_raster_csv(path, xs, ys, grid):
    lines = [f"# format_version={FORMAT_VERSION}", "x_m,y_m,snr_db"]
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            lines.append(f"{_fmt(x)},{_fmt(y)},{_fmt(grid[i, j])}")
    FsPath(path).write_text("\n".join(lines) + "\n")


def write_cut_csv(path, deltas, snr_db):
    lines = [f"# format_version={FORMAT_VERSION}", "displacement_m,snr_db"]
    for d, s in zip(deltas, snr_db):
        lines.append(f"{_fmt(d)},{_fmt(s)}")
    FsPath(path).write_text("\n".join(lines) + "\n")


def write_codebook_json(path, codebook, level_indices=None):
    sel = range(len(codebook.levels)) if level_indices is None else level_indices
    doc = {
        "format_version": FORMAT_VERSION,
        "alpha": codebook.levels[0].alpha,
        "area": {
            "center": [float(v) for v in codebook.area.center],
            "extent_m": [codebook.area.r_x, codebook.area.r_y],
        },
        "element_order": "row-major in (q_y, q_z)",
        "phase_unit": "radians in [0, 2*pi)",
        "levels": [],
    }
    for li in sel:
        lev = codebook.levels[li]
        doc["levels"].append({
            "level": li + 1,
            "shape": [lev.big_w_x, lev.big_w_y],
            "codewords": {
                f"{wx},{wy}": [round(float(p), 9) for p in np.mod(lev.codewords[(wx, wy)], 2 * np.pi)]
                for wx, wy in lev.indices()
            },
        })
    with open(path, "w") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def write_traces_json(path, results, traces):
    doc = {
        "format_version": FORMAT_VERSION,
        "traces": [
            {"trial": r.trial, "beta_db": r.beta_db, **t.to_dict()}
            for r, t in zip(results, traces)
        ],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def write_channel_set(path, channels):
    """Binary ChannelSet container: named complex arrays, row-major."""
    np.savez(path, format_version=np.int64(FORMAT_VERSION),
             h=channels.h, h1=channels.h1, h2=channels.h2)


def read_channel_set(path):
    from .channel import ChannelSet
    with np.load(path) as z:
        return ChannelSet(h=z["h"], h1=z["h1"], h2=z["h2"])


def write_farfield_csv(path, rows):
    lines = [f"# format_version={FORMAT_VERSION}", "size_L_m,aperture_D_m,far_field_distance_m"]
    for size, d_ap, d_f in rows:
        lines.append(f"{_fmt(size)},{_fmt(d_ap)},{_fmt(d_f)}")
    FsPath(path).write_text("\n".join(lines) + "\n")


# --- subcommand implementations ------------------------------------------


def _load(args):
    path = args.config or default_scenario_path()
    scenario = load_scenario(path, strict=not args.lax)
    if args.seed is not None:
        scenario.master_seed = args.seed
    if getattr(args, "trials", None) is not None:
        scenario.trials = args.trials
    if getattr(args, "workers", None) is not None:
        scenario.workers = args.workers
    return scenario


def _out_dir(args):
    d = FsPath(args.out_dir)
    d.mkdir(parents=True, exist_ok=True)
    return d


def cmd_simulate(args, argv):
    scenario = _load(args)
    out = _out_dir(args)
    beta = args.beta if args.beta is not None else 10.0
    results = harness.run_campaign(scenario, beta_list_db=[beta])
    rows = harness.aggregate(results, scenario.average)
    write_trials_csv(out / "trials.csv", results)
    write_aggregates_csv(out / "aggregates.csv", rows)
    if args.dump_channels:
        channels, _ = harness.build_trial_channels(scenario, beta, 0)
        write_channel_set(out / "channels_trial0.npz", channels)
    write_manifest(out, scenario, argv, extra={"subcommand": "simulate", "beta_db": beta})
    print(f"simulate: {len(results)} trials at beta={beta:g} dB -> {out}")
    for a in rows:
        print(f"  {a.scheme:>16s}: mean {a.mean_snr_db:7.2f} dB  (std {a.std_snr_db:.2f})")
    return 0


def cmd_sweep_beta(args, argv):
    scenario = _load(args)
    out = _out_dir(args)
    results, rows = harness.sweep_beta(scenario)
    write_trials_csv(out / "trials.csv", results)
    write_aggregates_csv(out / "aggregates.csv", rows)
    write_manifest(out, scenario, argv, extra={"subcommand": "sweep-beta"})
    print(f"sweep-beta: {len(results)} trials over beta={list(scenario.beta_list_db)} -> {out}")
    return 0


def cmd_heatmap(args, argv):
    scenario = _load(args)
    out = _out_dir(args)
    codebook = scenario.build_codebook()
    level = args.level - 1
    if not 0 <= level < len(codebook.levels):
        raise ValueError(f"level {args.level} out of range 1..{len(codebook.levels)}")
    hm = harness.heatmap(scenario, level, grid_n=args.grid, codebook=codebook)
    write_raster_csv(out / f"heatmap_level{args.level}_composite.csv", hm.xs, hm.ys, hm.composite)
    if args.cells == "all":
        for (wx, wy), grid in sorted(hm.per_cell.items()):
            write_raster_csv(out / f"heatmap_level{args.level}_cell_{wx}_{wy}.csv",
                             hm.xs, hm.ys, grid)
    elif args.cells not in (None, "composite"):
        for token in args.cells.split(";"):
            wx, wy = (int(t) for t in token.split(","))
            write_raster_csv(out / f"heatmap_level{args.level}_cell_{wx}_{wy}.csv",
                             hm.xs, hm.ys, hm.per_cell[(wx, wy)])
    write_manifest(out, scenario, argv, extra={"subcommand": "heatmap", "level": args.level})
    print(f"heatmap: level {args.level} peak {hm.composite.max():.2f} dB -> {out}")
    return 0


def cmd_focus_cut(args, argv):
    scenario = _load(args)
    out = _out_dir(args)
    axes = ["x", "y"] if args.axis == "both" else [args.axis]
    for ax in axes:
        deltas, snr = harness.focusing_cut(scenario, ax, args.range, args.steps)
        write_cut_csv(out / f"focus_cut_{ax}.csv", deltas, snr)
        print(f"focus-cut {ax}: peak {snr.max():.2f} dB at "
              f"{deltas[int(np.argmax(snr))]:+.3f} m -> {out}")
    write_manifest(out, scenario, argv, extra={"subcommand": "focus-cut"})
    return 0


def cmd_codebook_dump(args, argv):
    scenario = _load(args)
    out = _out_dir(args)
    codebook = scenario.build_codebook()
    sel = None if args.level is None else [args.level - 1]
    write_codebook_json(out / "codebook.json", codebook, sel)
    write_manifest(out, scenario, argv, extra={"subcommand": "codebook dump"})
    total = sum(codebook.levels[i].size
                for i in (sel if sel is not None else range(len(codebook.levels))))
    print(f"codebook dump: {total} codewords -> {out / 'codebook.json'}")
    return 0


def cmd_farfield(args, argv):
    scenario = _load(args) if args.config else None
    f_hz = scenario.carrier_hz if scenario else args.freq_ghz * 1e9
    sizes = [float(s) for s in args.sizes.split(",")]
    rows = farfield_table(f_hz, sizes)
    out = _out_dir(args)
    write_farfield_csv(out / "farfield.csv", rows)
    if scenario is None:
        scenario = Scenario(carrier_hz=f_hz)
    write_manifest(out, scenario, argv, extra={"subcommand": "farfield"})
    print(f"{'L (m)':>8s} {'D (m)':>8s} {'d_F (m)':>10s}")
    for size, d_ap, d_f in rows:
        print(f"{size:8.3f} {d_ap:8.4f} {d_f:10.2f}")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="nearris",
        description="Near-field RIS link simulator: codebooks, beam management, Monte Carlo SNR",
    )
    ap.add_argument("--version", action="version", version=f"nearris {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, trials=False):
        p.add_argument("--config", help="scenario file (default: bundled reference scenario)")
        p.add_argument("--seed", type=int, help="override the scenario master seed")
        p.add_argument("--out-dir", default="out", help="output directory (default: ./out)")
        p.add_argument("--lax", action="store_true",
                       help="warn instead of failing on unknown scenario keys")
        if trials:
            p.add_argument("--trials", type=int, help="override the scenario trial count")
            p.add_argument("--workers", type=int, help="override the scenario worker count")

    p = sub.add_parser("simulate", help="single-beta Monte Carlo campaign")
    common(p, trials=True)
    p.add_argument("--beta", type=float, help="LOS/NLOS power ratio in dB (default 10)")
    p.add_argument("--dump-channels", action="store_true",
                   help="also write trial 0's channel matrices (npz)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep-beta", help="campaign over the scenario's beta grid")
    common(p, trials=True)
    p.set_defaults(func=cmd_sweep_beta)

    p = sub.add_parser("heatmap", help="illumination SNR rasters for one codebook level")
    common(p)
    p.add_argument("--level", type=int, default=4, help="codebook level, 1-based (default 4)")
    p.add_argument("--grid", type=int, default=None, help="raster points per axis")
    p.add_argument("--cells", default="composite",
                   help="'composite' (default), 'all', or 'wx,wy[;wx,wy...]'")
    p.set_defaults(func=cmd_heatmap)

    p = sub.add_parser("focus-cut", help="SNR vs displacement under full focusing")
    common(p)
    p.add_argument("--axis", choices=["x", "y", "both"], default="both")
    p.add_argument("--range", type=float, default=8.0, help="half-range in meters (default 8)")
    p.add_argument("--steps", type=int, default=801)
    p.set_defaults(func=cmd_focus_cut)

    p = sub.add_parser("codebook", help="codebook utilities")
    csub = p.add_subparsers(dest="codebook_command", required=True)
    pd = csub.add_parser("dump", help="export codeword phase vectors to JSON")
    common(pd)
    pd.add_argument("--level", type=int, help="restrict to one level, 1-based")
    pd.set_defaults(func=cmd_codebook_dump)

    p = sub.add_parser("farfield", help="far-field distance table over aperture sizes")
    common(p)
    p.add_argument("--freq-ghz", type=float, default=28.0,
                   help="carrier frequency when no --config is given (default 28)")
    p.add_argument("--sizes", default="0.05,0.1,0.2,0.3,0.5,0.75,1.0",
                   help="comma-separated square RIS side lengths in meters")
    p.set_defaults(func=cmd_farfield)
    return ap


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args, ["nearris"] + argv)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
