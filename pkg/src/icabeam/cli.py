"""Command-line interface.

Subcommands cover the full workflow: simulate a phantom dataset, beamform it
with a fixed or data-estimated window, measure image quality, inspect the
estimated window, sweep channel noise, and build a side-by-side method
comparison.  Report commands write a CSV and render a matplotlib figure
next to it; every run also writes a provenance record (config, seeds,
convergence) so outputs are reproducible byte for byte.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import beamform as bf
from . import metrics as mtx
from . import simulate as sim
from .fastica import IcaConfig, IcaConvergenceError, apodization_seed_spread
from .io_native import FormatError, NativeDataset, load_dataset, write_native
from .model import BModeImage, ValidationError
from .output import read_image_csv, write_image, write_provenance, write_report
from .windows import window_by_name, window_spectrum

METHODS = ("das", "ica", "cf", "das+compound", "ica+compound")
REPORT_HEADER = (
    "dataset", "method", "n_angles", "FWHM_axial_mm", "FWHM_lateral_mm", "CNR_db",
    "seed", "converged",
)


class CliError(RuntimeError):
    pass


def _add_beamform_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("beamforming")
    group.add_argument("--f-number", type=float, default=1.75, help="receive f-number (default 1.75)")
    group.add_argument("--window", default="tukey:0.25", help="fixed window: boxcar, hann, tukey:T")
    group.add_argument("--interp", choices=("linear", "nearest"), default="linear")
    group.add_argument("--no-renormalize", action="store_true", help="skip per-aperture unit-sum weight rescaling")
    group.add_argument("--dynamic-range", type=float, default=60.0, help="display dynamic range in dB")
    ica = parser.add_argument_group("window estimation")
    ica.add_argument("--ica-seed", type=int, default=0)
    ica.add_argument("--ica-contrast", choices=("logcosh", "gauss"), default="logcosh")
    ica.add_argument("--ica-a1", type=float, default=1.0)
    ica.add_argument("--ica-max-iter", type=int, default=100)
    ica.add_argument("--ica-epsilon", type=float, default=1e-6)
    ica.add_argument("--allow-nonconverged", action="store_true",
                     help="keep going when the estimate does not converge")


def _bf_config(args) -> bf.BeamformConfig:
    return bf.BeamformConfig(
        f_number=args.f_number,
        window=args.window,
        interpolation=args.interp,
        renormalize=not args.no_renormalize,
    )


def _ica_config(args) -> IcaConfig:
    return IcaConfig(
        max_iterations=args.ica_max_iter,
        epsilon=args.ica_epsilon,
        contrast=args.ica_contrast,
        a1=args.ica_a1,
        seed=args.ica_seed,
    )


def _load(path: str) -> NativeDataset:
    dataset = load_dataset(path)
    if dataset.grid is None:
        raise CliError(f"{path} carries no image grid")
    return dataset


def _angle_indices(args, dataset: NativeDataset, method: str) -> list[int]:
    angles = dataset.acquisition.angles
    explicit = getattr(args, "angle_indices", None)
    if explicit:
        if args.angles is not None:
            raise CliError("give either --angles or --angle-indices, not both")
        indices = [int(v) for v in explicit.split(",")]
        for i in indices:
            if not 0 <= i < angles.size:
                raise CliError(f"angle index {i} outside [0, {angles.size - 1}]")
        return indices
    count = args.angles
    if count is None:
        count = angles.size if method.endswith("+compound") else 1
    return bf.symmetric_angle_subset(angles, int(count))


def _beamform_once(dataset: NativeDataset, method: str, angle_indices, config, ica_config,
                   allow_nonconverged: bool, initial_weights=None):
    """Run one method over an angle subset; returns (RFImage, ica_results)."""
    acq, probe, grid = dataset.acquisition, dataset.probe, dataset.grid
    if method not in METHODS:
        raise CliError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    if method.startswith("ica"):
        image, results = bf.ica_beamform_compound(
            acq, grid, probe, ica_config, config, angle_indices, allow_nonconverged,
            initial_weights=initial_weights,
        )
        return image, results
    if method == "cf":
        images = [
            bf.cf_das(bf.delayed_channel_cube(acq, a, grid, probe, config))
            for a in angle_indices
        ]
        return bf.compound(images), ()
    image = bf.das_compound(acq, grid, probe, config, angle_indices)
    return image, ()


def _ica_provenance(results) -> dict | None:
    if not results:
        return None
    first = results[0]
    return {
        "seed": first.seed,
        "converged": bool(all(r.converged for r in results)),
        "iterations_used": [r.iterations_used for r in results],
        "weights": results[0].w_aperture.weights,
    }


# ---------------------------------------------------------------- simulate

PHANTOMS = ("sr", "sc", "er")


def cmd_simulate(args) -> int:
    defaults = sim.SimDefaults()
    probe = sim.default_probe(defaults)
    pulse = sim.default_pulse(defaults)
    element_width = None
    if args.phantom == "sr":
        # Resolution study uses idealized point receivers: a single static
        # per-element gain then holds across the whole field of view.
        phantom = sim.point_resolution_phantom(args.seed)
        element_width = 0.0
        z_span, ground_truth = (12e-3, 36e-3), {
            "points": [[float(x), float(z)]
                       for x in sim.RESOLUTION_TARGET_X for z in sim.RESOLUTION_TARGET_Z]
        }
    elif args.phantom == "sc":
        phantom = sim.cyst_contrast_phantom(args.seed)
        z_span, ground_truth = (16e-3, 32e-3), {
            "cysts": [[float(x), float(z), sim.CYST_RADIUS] for x, z in sim.CYST_CENTERS],
            "pins": [[float(x), float(z)] for x, z in zip(sim.PIN_X, sim.PIN_Z)],
            "speckle_region": [-19.2e-3, 19.2e-3, 15e-3, 33e-3],
        }
    else:
        phantom = sim.wires_in_speckle_phantom(args.seed)
        z_span, ground_truth = (16e-3, 32e-3), {
            "points": [[float(x), float(z)]
                       for x in sim.WIRE_TARGET_X for z in sim.WIRE_TARGET_Z],
            "speckle_region": [-19.2e-3, 19.2e-3, 17e-3, 31e-3],
        }
    angles = sim.steering_angles(args.n_angles, defaults.max_angle_deg)
    acquisition = sim.synth_channel_data(
        phantom, probe, pulse, angles, defaults.sampling_rate, defaults.sound_speed,
        element_width=element_width,
    )
    grid = sim.default_grid(probe, z_span, defaults.sound_speed, defaults.center_frequency)
    write_native(
        args.out, acquisition, probe, grid, ground_truth,
        provenance={
            "command": "simulate",
            "phantom": args.phantom,
            "seed": args.seed,
            "n_angles": args.n_angles,
            "n_scatterers": phantom.n_scatterers,
            "pulse": {"center_frequency": pulse.center_frequency,
                      "fractional_bandwidth": pulse.fractional_bandwidth},
        },
    )
    print(f"wrote {args.out} ({args.phantom}, {args.n_angles} angles, "
          f"{phantom.n_scatterers} scatterers)")
    return 0


# ---------------------------------------------------------------- beamform

def cmd_beamform(args) -> int:
    dataset = _load(args.input)
    config = _bf_config(args)
    ica_config = _ica_config(args)
    indices = _angle_indices(args, dataset, args.method)
    image, results = _beamform_once(
        dataset, args.method, indices, config, ica_config, args.allow_nonconverged
    )
    bm = mtx.bmode_from_rf(image, args.dynamic_range)
    out = write_image(bm, args.out)
    record = {
        "command": "beamform",
        "dataset": Path(args.input).name,
        "method": args.method,
        "angle_indices": indices,
        "n_angles": len(indices),
        "f_number": config.f_number,
        "window": config.window,
        "interpolation": config.interpolation,
        "renormalize": config.renormalize,
        "dynamic_range_db": args.dynamic_range,
        "ica": _ica_provenance(results),
        "image": out.name,
    }
    write_provenance(str(out) + ".provenance.json", record)
    if args.figure:
        from .plotting import save_bmode_figure

        save_bmode_figure(bm, args.figure, title=f"{args.method}, {len(indices)} angle(s)")
    converged = record["ica"] is None or record["ica"]["converged"]
    print(f"wrote {out} ({args.method}, {len(indices)} angle(s))")
    if not converged:
        print("warning: window estimate did not converge", file=sys.stderr)
    return 0


# ---------------------------------------------------------------- metrics

def _parse_mm_pairs(text: str) -> list[tuple[float, float]]:
    points = []
    for chunk in text.split(";"):
        x, z = (float(v) for v in chunk.split(","))
        points.append((x * 1e-3, z * 1e-3))
    return points


def _provenance_for(path: Path) -> dict:
    sidecar = Path(str(path) + ".provenance.json")
    if sidecar.is_file():
        import json

        return json.loads(sidecar.read_text())
    return {}


def _metric_row(dataset_name, values_db, grid, dynamic_range, points, cysts, provenance):
    bm = BModeImage(values=values_db, grid=grid, dynamic_range_db=dynamic_range)
    env = 10.0 ** (values_db / 20.0)
    fwhm_axial = fwhm_lateral = ""
    if points:
        fwhm_axial, _ = mtx.fwhm_batch(env, grid, points, "axial")
        fwhm_lateral, _ = mtx.fwhm_batch(env, grid, points, "lateral")
    cnr_db = ""
    if cysts:
        cx, cz, radius = cysts[0]
        inside, outside = mtx.cyst_masks(grid, (cx, cz), radius)
        cnr_db = mtx.cnr(bm, inside, outside)
    ica = provenance.get("ica") or {}
    return [
        dataset_name,
        provenance.get("method", ""),
        provenance.get("n_angles", ""),
        fwhm_axial,
        fwhm_lateral,
        cnr_db,
        ica.get("seed", ""),
        ica.get("converged", "") if ica else "",
    ]


def cmd_metrics(args) -> int:
    dataset = _load(args.dataset)
    grid = dataset.grid
    image_path = Path(args.input)
    if image_path.suffix.lower() != ".csv":
        raise CliError("metrics needs the csv image variant; raster formats are 8-bit quantized")
    values = read_image_csv(image_path)
    if values.shape != grid.shape:
        raise CliError(f"image shape {values.shape} does not match dataset grid {grid.shape}")
    provenance = _provenance_for(image_path)
    dynamic_range = float(provenance.get("dynamic_range_db", args.dynamic_range))

    if args.points:
        points = _parse_mm_pairs(args.points)
    else:
        points = [tuple(p) for p in dataset.ground_truth.get("points", [])]
    cysts = [tuple(c) for c in dataset.ground_truth.get("cysts", [])]
    if args.cyst:
        cysts = [tuple(v * 1e-3 for v in (float(s) for s in args.cyst.split(",")))]
    if not points and not cysts:
        env = 10.0 ** (values / 20.0)
        points = mtx.detect_point_targets(env, grid)
        if not points:
            raise CliError("no ground truth in the dataset and no targets detected; "
                           "pass --points or --cyst")

    row = _metric_row(Path(args.dataset).name, values, grid, dynamic_range, points, cysts,
                      provenance)
    report = write_report(args.report, REPORT_HEADER, [row])
    record = {
        "command": "metrics",
        "image": image_path.name,
        "dataset": Path(args.dataset).name,
        "points": [[float(x), float(z)] for x, z in points],
        "cysts": [[float(a), float(b), float(c)] for a, b, c in cysts],
        "image_provenance": provenance,
    }
    write_provenance(str(report) + ".provenance.json", record)
    if not args.no_figure:
        from .plotting import save_bmode_figure

        bm = BModeImage(values=values, grid=grid, dynamic_range_db=dynamic_range)
        overlays = [(x, z, "r+") for x, z in points]
        overlays += [(c[0], c[1], "co") for c in cysts]
        save_bmode_figure(bm, report.with_suffix(".png"), title=image_path.name,
                          overlays=overlays)
    print(f"wrote {report}")
    return 0


# ---------------------------------------------------------------- weights

def cmd_weights(args) -> int:
    dataset = _load(args.input)
    config = _bf_config(args)
    ica_config = _ica_config(args)
    acq, probe, grid = dataset.acquisition, dataset.probe, dataset.grid
    cube = bf.delayed_channel_cube(acq, acq.zero_angle_index, grid, probe, config)
    crop = bf.central_crop_region(grid, probe, config.f_number, float(grid.z_coords[-1]))
    observations = bf.build_observation_matrix(cube, crop)
    from .fastica import estimate_apodization

    result = estimate_apodization(observations, ica_config)
    if not result.converged and not args.allow_nonconverged:
        raise CliError(f"window estimate did not converge in {result.iterations_used} iterations")

    n = probe.n_elements
    reference = window_by_name(config.window, n).canonicalized()
    estimated = result.w_aperture
    n_fft = max(4 * n, 512)
    spec_ref = window_spectrum(reference, n_fft)
    spec_est = window_spectrum(estimated, n_fft)

    out = Path(args.out)
    rows = [
        [i, probe.element_x[i] * 1e3, reference.weights[i], estimated.weights[i]]
        for i in range(n)
    ]
    write_report(out, ("element_index", "element_x_mm", "reference_weight", "estimated_weight"),
                 rows)
    spectrum_path = out.with_name(out.stem + "_spectrum" + out.suffix)
    spec_rows = [
        [spec_ref.frequencies[i], spec_ref.magnitude_db[i], spec_est.magnitude_db[i]]
        for i in range(spec_ref.frequencies.size)
    ]
    write_report(spectrum_path,
                 ("frequency_cycles_per_element", "reference_db", "estimated_db"), spec_rows)

    spread = apodization_seed_spread(observations, ica_config,
                                     seeds=[ica_config.seed + k for k in range(args.seed_check)])
    record = {
        "command": "weights",
        "dataset": Path(args.input).name,
        "reference_window": config.window,
        "ica": _ica_provenance((result,)),
        "seed_spread": spread,
        "descriptors": {
            "reference": {
                "mainlobe_width_cycles": spec_ref.mainlobe_width_cycles,
                "sidelobe_level_db": spec_ref.sidelobe_level_db,
                "leakage_fraction": spec_ref.leakage_fraction,
            },
            "estimated": {
                "mainlobe_width_cycles": spec_est.mainlobe_width_cycles,
                "sidelobe_level_db": spec_est.sidelobe_level_db,
                "leakage_fraction": spec_est.leakage_fraction,
            },
        },
    }
    write_provenance(str(out) + ".provenance.json", record)
    if not args.no_figure:
        from .plotting import save_window_figure

        save_window_figure(
            probe.element_x,
            {"reference": reference.weights, "estimated": estimated.weights},
            {"reference": spec_ref, "estimated": spec_est},
            out.with_suffix(".png"),
        )
    print(f"wrote {out} and {spectrum_path}")
    return 0


# ---------------------------------------------------------------- noise-sweep

def _parse_channels(text: str, n_elements: int) -> list[int]:
    """1-indexed channel list 'a,b,c' to sorted 0-based indices."""
    indices = sorted({int(v) for v in text.split(",")})
    for c in indices:
        if not 1 <= c <= n_elements:
            raise CliError(f"channel {c} outside [1, {n_elements}] (channels are 1-indexed)")
    return [c - 1 for c in indices]


def cmd_noise_sweep(args) -> int:
    dataset = _load(args.input)
    config = _bf_config(args)
    ica_config = _ica_config(args)
    methods = [m.strip() for m in args.methods.split(",")]
    snrs = [float(v) for v in args.snr_db.split(",")]
    scenarios = [_parse_channels(spec, dataset.acquisition.n_elements) for spec in args.channels]
    indices = _angle_indices(args, dataset, methods[0])

    rows = []
    figure_rows = []
    for method in methods:
        clean_image, clean_results = _beamform_once(
            dataset, method, indices, config, ica_config, args.allow_nonconverged
        )
        clean_bm = mtx.bmode_from_rf(clean_image, args.dynamic_range)
        # Re-estimation on corrupted data starts from the clean window so the
        # comparison tracks noise handling, not a change of negentropy extremum.
        warm = clean_results[0].w_aperture.weights if clean_results else None
        for channels in scenarios:
            for snr in snrs:
                noisy = sim.add_channel_noise(
                    dataset.acquisition, channels, snr, args.noise_seed
                )
                noisy_ds = replace_acquisition(dataset, noisy)
                image, results = _beamform_once(
                    noisy_ds, method, indices, config, ica_config, args.allow_nonconverged,
                    initial_weights=warm,
                )
                bm = mtx.bmode_from_rf(image, args.dynamic_range)
                err = mtx.rmse(bm, clean_bm)
                converged = all(r.converged for r in results) if results else ""
                row = {
                    "method": method,
                    "snr_db": snr,
                    "n_channels": len(channels),
                    "channels": ";".join(str(c + 1) for c in channels),
                    "rmse_db": err,
                    "seed": ica_config.seed if method.startswith("ica") else "",
                    "converged": converged,
                }
                rows.append(row)
                figure_rows.append(row)

    header = ("method", "snr_db", "n_channels", "channels", "rmse_db", "seed", "converged")
    report = write_report(args.report, header, [[r[k] for k in header] for r in rows])
    record = {
        "command": "noise-sweep",
        "dataset": Path(args.input).name,
        "methods": methods,
        "snr_db": snrs,
        "channel_scenarios": [[c + 1 for c in s] for s in scenarios],
        "noise_seed": args.noise_seed,
        "angle_indices": indices,
        "ica_seed": ica_config.seed,
    }
    write_provenance(str(report) + ".provenance.json", record)
    if not args.no_figure:
        from .plotting import save_noise_sweep_figure

        save_noise_sweep_figure(figure_rows, report.with_suffix(".png"))
    print(f"wrote {report} ({len(rows)} rows)")
    return 0


def replace_acquisition(dataset: NativeDataset, acquisition) -> NativeDataset:
    return NativeDataset(
        acquisition=acquisition,
        probe=dataset.probe,
        grid=dataset.grid,
        ground_truth=dataset.ground_truth,
        source=dataset.source,
        meta=dataset.meta,
    )


# ---------------------------------------------------------------- compare

def cmd_compare(args) -> int:
    dataset = _load(args.input)
    config = _bf_config(args)
    ica_config = _ica_config(args)
    methods = [m.strip() for m in args.methods.split(",")]
    counts = [int(v) for v in args.angles.split(",")]
    name = Path(args.input).name
    points = [tuple(p) for p in dataset.ground_truth.get("points", [])]
    cysts = [tuple(c) for c in dataset.ground_truth.get("cysts", [])]

    rows = []
    panels = {}
    for count in counts:
        indices = bf.symmetric_angle_subset(dataset.acquisition.angles, count)
        for method in methods:
            image, results = _beamform_once(
                dataset, method, indices, config, ica_config, args.allow_nonconverged
            )
            bm = mtx.bmode_from_rf(image, args.dynamic_range)
            panels[(method, f"{count} angle(s)")] = bm
            env = mtx.envelope(image)
            fwhm_axial = fwhm_lateral = ""
            if points:
                fwhm_axial, _ = mtx.fwhm_batch(env, dataset.grid, points, "axial")
                fwhm_lateral, _ = mtx.fwhm_batch(env, dataset.grid, points, "lateral")
            cnr_db = ""
            if cysts:
                inside, outside = mtx.cyst_masks(dataset.grid, cysts[0][:2], cysts[0][2])
                cnr_db = mtx.cnr(bm, inside, outside)
            ica = _ica_provenance(results)
            rows.append([
                name, method, len(indices), fwhm_axial, fwhm_lateral, cnr_db,
                ica["seed"] if ica else "",
                ica["converged"] if ica else "",
            ])

    report = write_report(args.report, REPORT_HEADER, rows)
    record = {
        "command": "compare",
        "dataset": name,
        "methods": methods,
        "angle_counts": counts,
        "f_number": config.f_number,
        "window": config.window,
        "ica_seed": ica_config.seed,
    }
    write_provenance(str(report) + ".provenance.json", record)
    if not args.no_figure:
        from .plotting import save_bmode_grid_figure

        save_bmode_grid_figure(panels, report.with_suffix(".png"), suptitle=name)
    print(f"wrote {report} ({len(rows)} rows)")
    return 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="icabeam",
        description="Plane-wave beamforming with data-estimated aperture windows.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="synthesize a phantom dataset")
    p_sim.add_argument("--phantom", choices=PHANTOMS, required=True,
                       help="sr: points, sc: cyst in speckle, er: wires in speckle")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--n-angles", type=int, default=11)
    p_sim.add_argument("--out", required=True, help="output dataset directory")
    p_sim.set_defaults(func=cmd_simulate)

    p_bf = sub.add_parser("beamform", help="beamform a dataset to a B-mode image")
    p_bf.add_argument("--in", dest="input", required=True)
    p_bf.add_argument("--method", choices=METHODS, default="das")
    p_bf.add_argument("--angles", type=int, default=None,
                      help="number of angles, symmetric about broadside (default 1; "
                           "+compound methods default to all)")
    p_bf.add_argument("--angle-indices", default=None, help="explicit 0-based indices a,b,c")
    p_bf.add_argument("--out", required=True, help="image file: .pgm, .png or .csv")
    p_bf.add_argument("--figure", default=None, help="optional rendered figure path")
    _add_beamform_options(p_bf)
    p_bf.set_defaults(func=cmd_beamform)

    p_met = sub.add_parser("metrics", help="measure FWHM and CNR on a beamformed image")
    p_met.add_argument("--in", dest="input", required=True, help="csv image from beamform")
    p_met.add_argument("--dataset", required=True, help="dataset the image came from")
    p_met.add_argument("--report", required=True, help="output CSV")
    p_met.add_argument("--points", default=None, help="override targets: 'x,z;x,z' in mm")
    p_met.add_argument("--cyst", default=None, help="override cyst: 'x,z,r' in mm")
    p_met.add_argument("--dynamic-range", type=float, default=60.0)
    p_met.add_argument("--no-figure", action="store_true")
    p_met.set_defaults(func=cmd_metrics)

    p_w = sub.add_parser("weights", help="estimate a window and report it with spectra")
    p_w.add_argument("--in", dest="input", required=True)
    p_w.add_argument("--out", required=True, help="output CSV (spectrum CSV written alongside)")
    p_w.add_argument("--seed-check", type=int, default=3,
                     help="number of seeds for the stability probe")
    p_w.add_argument("--no-figure", action="store_true")
    _add_beamform_options(p_w)
    p_w.set_defaults(func=cmd_weights)

    p_ns = sub.add_parser("noise-sweep", help="image degradation under channel noise")
    p_ns.add_argument("--in", dest="input", required=True)
    p_ns.add_argument("--channels", action="append", required=True,
                      help="1-indexed channel list 'a,b,c'; repeat for more scenarios")
    p_ns.add_argument("--snr-db", default="-40", help="comma list of per-channel SNRs in dB")
    p_ns.add_argument("--methods", default="das,ica", help="comma list of methods")
    p_ns.add_argument("--angles", type=int, default=1)
    p_ns.add_argument("--angle-indices", default=None)
    p_ns.add_argument("--noise-seed", type=int, default=0)
    p_ns.add_argument("--report", required=True)
    p_ns.add_argument("--no-figure", action="store_true")
    _add_beamform_options(p_ns)
    p_ns.set_defaults(func=cmd_noise_sweep)

    p_cmp = sub.add_parser("compare", help="methods x angle-counts metric table")
    p_cmp.add_argument("--in", dest="input", required=True)
    p_cmp.add_argument("--methods", default="das,ica")
    p_cmp.add_argument("--angles", default="1", help="comma list of angle counts")
    p_cmp.add_argument("--report", required=True)
    p_cmp.add_argument("--no-figure", action="store_true")
    _add_beamform_options(p_cmp)
    p_cmp.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except IcaConvergenceError as exc:
        print(f"error: {exc} (try another --ica-seed, --ica-contrast gauss, "
              "a larger --ica-max-iter, or --allow-nonconverged)", file=sys.stderr)
        return 1
    except (CliError, ValidationError, FormatError, mtx.MetricsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports, not raises
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
