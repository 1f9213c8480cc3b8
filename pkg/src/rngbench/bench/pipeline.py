"""Pipeline execution: generate -> extract -> measure -> export -> report.

Each source is processed independently; a failure in one stage is
recorded in the report and the run continues. All randomness flows from
config-recorded seed values, so two runs of the same config produce
byte-identical streams.
"""

from __future__ import annotations

import hashlib
import json
import os
import traceback
from datetime import datetime, timezone

from .. import __version__
from ..bitstream import BitStream, read_file, to_bytes, write_file
from ..measures import borel_normality, kolmogorov_report, lz76_normalized
from ..sources import generate, mt19937_bits
from ..sts import run_suite
from ..toeplitz import ToeplitzSpec, extract_stream
from .config import RunConfig

FLAKINESS_POLICY = (
    "Single-sequence mode: each test emits one p-value (or an adjusted "
    "family p-value) and passes at alpha=0.01. A borderline failure in a "
    "headline run is resolved by re-running with a different recorded "
    "generator seed, never by loosening alpha."
)


def resolve_toeplitz_spec(cfg: RunConfig) -> ToeplitzSpec:
    """Extractor seed bits: explicit file if given, else MT19937 expansion."""
    ex = cfg.extractor
    if ex.seed_file:
        seed = read_file(ex.seed_file, ex.seed_file_format)
        provenance = f"file:{os.path.basename(ex.seed_file)}"
    else:
        seed = mt19937_bits(ex.seed_value, ex.seed_length)
        provenance = f"mt19937:0x{ex.seed_value:08x}"
    return ToeplitzSpec(n=ex.n, m=ex.m, seed=seed, seed_provenance=provenance)


def _measure_stage(
    cfg: RunConfig, stream: BitStream, label: str, stage: str, ref_cache: dict
) -> tuple[dict, dict]:
    """Run enabled measures on one stream; returns (results, errors)."""
    results: dict = {}
    errors: dict = {}
    for measure in cfg.measures:
        try:
            if measure == "sts":
                rep = run_suite(stream, cfg.sts_profile, label=label, stage=stage)
                results["sts"] = rep.as_dict()
            elif measure == "lz76":
                n = stream.length
                if n not in ref_cache:
                    # Complexity reference: an MT19937 stream of the same
                    # length as the measured one (normalized LZ-76 is
                    # length dependent, so cross-length ratios mislead).
                    ref_cache[n] = lz76_normalized(
                        mt19937_bits(cfg.extractor.seed_value, n)
                    )
                rep = kolmogorov_report(
                    stream, seed_ref=ref_cache[n],
                    seed_label=f"mt19937:0x{cfg.extractor.seed_value:08x}:{n}b",
                )
                results["lz76"] = rep.as_dict()
            elif measure == "borel":
                rep = borel_normality(stream, max_level=cfg.borel_max_level)
                results["borel"] = rep.as_dict()
        except Exception as e:  # recorded per spec, pipeline continues
            errors[measure] = f"{type(e).__name__}: {e}"
    return results, errors


def export_predictor_dataset(
    stream: BitStream, path: str, label: str, stage: str, cfg: RunConfig
) -> dict:
    """Write a next-byte-predictor dataset: byte payload + JSON descriptor.

    Bits are packed MSB-first; a sub-byte remainder is dropped and
    recorded in the descriptor.
    """
    pe = cfg.predictor_export
    payload, remainder = to_bytes(stream)
    with open(path, "wb") as f:
        f.write(payload)
    descriptor = {
        "source_label": label,
        "stage": stage,
        "byte_length": len(payload),
        "dropped_remainder_bits": remainder,
        "window": pe.window,
        "stride": pe.stride,
        "split": pe.split,
        "shuffle_seed": pe.shuffle_seed,
        "sha256_of_payload": hashlib.sha256(payload).hexdigest(),
    }
    with open(path + ".meta", "w") as f:
        json.dump(descriptor, f, indent=2)
        f.write("\n")
    return descriptor


def _stream_entry(stream: BitStream, path: str, label: str) -> dict:
    write_file(stream, path, source_label=label)
    return {
        "bits": stream.length,
        "stream_file": os.path.basename(path),
        "sha256": hashlib.sha256(to_bytes(stream)[0]).hexdigest(),
    }


def run_pipeline(cfg: RunConfig, out_dir: str) -> dict:
    """Execute a full run, writing streams, datasets, and report.json."""
    os.makedirs(out_dir, exist_ok=True)
    streams_dir = os.path.join(out_dir, "streams")
    datasets_dir = os.path.join(out_dir, "datasets")
    os.makedirs(streams_dir, exist_ok=True)

    report: dict = {
        "tool_version": __version__,
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "config_echo": cfg.echo(),
        "config_sha256": cfg.content_hash(),
        "flakiness_policy": FLAKINESS_POLICY,
        "sources": {},
        "stage_errors": 0,
    }

    spec = resolve_toeplitz_spec(cfg) if cfg.extractor.enabled else None
    ref_cache: dict = {}

    for source in cfg.sources:
        entry: dict = {"stages": {}}
        report["sources"][source.label] = entry
        try:
            raw, label = generate(source)
        except Exception as e:
            entry["generate_error"] = f"{type(e).__name__}: {e}"
            entry["traceback"] = traceback.format_exc()
            report["stage_errors"] += 1
            continue

        pre = _stream_entry(raw, os.path.join(streams_dir, f"{label}_pre.bits"), label)
        if "pre" in cfg.measure_stages:
            results, errors = _measure_stage(cfg, raw, label, "pre", ref_cache)
            pre.update(results)
            if errors:
                pre["errors"] = errors
                report["stage_errors"] += len(errors)
        entry["stages"]["pre"] = pre

        post_streams: dict[str, BitStream] = {}
        if spec is not None:
            primary_target = cfg.extractor.target_bits[0] if cfg.extractor.target_bits else None
            for target in cfg.extractor.target_bits or (None,):
                stage_name = "post" if target == primary_target else f"post_{target}"
                try:
                    hashed, ext_report = extract_stream(spec, raw, target)
                except Exception as e:
                    entry["stages"][stage_name] = {
                        "extract_error": f"{type(e).__name__}: {e}"
                    }
                    report["stage_errors"] += 1
                    continue
                post = _stream_entry(
                    hashed,
                    os.path.join(streams_dir, f"{label}_{stage_name}.bits"),
                    label,
                )
                post["extraction"] = ext_report.as_dict()
                if stage_name == "post" and "post" in cfg.measure_stages:
                    results, errors = _measure_stage(
                        cfg, hashed, label, "post", ref_cache
                    )
                    post.update(results)
                    if errors:
                        post["errors"] = errors
                        report["stage_errors"] += len(errors)
                entry["stages"][stage_name] = post
                post_streams[stage_name] = hashed

        if cfg.predictor_export.enabled:
            os.makedirs(datasets_dir, exist_ok=True)
            export_targets: list[tuple[str, BitStream]] = []
            if "pre" in cfg.predictor_export.stages:
                export_targets.append(("pre", raw))
            if "post" in cfg.predictor_export.stages:
                export_targets.extend(sorted(post_streams.items()))
            for stage_name, stream in export_targets:
                try:
                    desc = export_predictor_dataset(
                        stream,
                        os.path.join(datasets_dir, f"{label}_{stage_name}.bytes"),
                        label,
                        stage_name,
                        cfg,
                    )
                    entry["stages"].setdefault(stage_name, {})["dataset"] = desc
                except Exception as e:
                    entry["stages"].setdefault(stage_name, {})[
                        "export_error"
                    ] = f"{type(e).__name__}: {e}"
                    report["stage_errors"] += 1

    with open(os.path.join(out_dir, "report.json"), "w") as f:
        json.dump(report, f, indent=2)
        f.write("\n")
    return report


def export_from_run(run_dir: str, label: str, stage: str, cfg: RunConfig) -> str:
    """Export a dataset for a stream already produced by a run."""
    path = os.path.join(run_dir, "streams", f"{label}_{stage}.bits")
    if not os.path.exists(path):
        raise FileNotFoundError(f"no stored stream for {label}/{stage} in {run_dir}")
    stream = read_file(path)
    datasets_dir = os.path.join(run_dir, "datasets")
    os.makedirs(datasets_dir, exist_ok=True)
    out_path = os.path.join(datasets_dir, f"{label}_{stage}.bytes")
    export_predictor_dataset(stream, out_path, label, stage, cfg)
    return out_path
