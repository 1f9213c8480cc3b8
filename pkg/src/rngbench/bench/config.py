"""Run configuration: INI-style file with strict key validation.

Sections: ``[run]``, ``[source.<label>]`` (one per stream), ``[extractor]``,
``[sts]``, ``[measures]``, ``[predictor_export]``. Unknown sections or keys
are errors, not warnings, so a typo cannot silently fall back to a default.
"""

from __future__ import annotations

import configparser
import hashlib
import json
import os
from dataclasses import dataclass, field

from ..bitstream import ASCII, FORMATS, PACKED, read_file
from ..sources import CHACHA20, EXTERNAL, LCG, ChaChaParams, LcgParams, SourceSpec

MEASURES = ("sts", "lz76", "borel")
STAGES = ("pre", "post")


class ConfigError(Exception):
    """Invalid or inconsistent run configuration."""


@dataclass
class ExtractorConfig:
    enabled: bool = False
    n: int = 4000
    m: int = 960
    seed_value: int = 0x00C0FFEE
    seed_file: str | None = None
    seed_file_format: str = ASCII
    target_bits: tuple[int, ...] = ()

    @property
    def seed_length(self) -> int:
        return self.n + self.m - 1


@dataclass
class PredictorExportConfig:
    enabled: bool = False
    window: int = 100
    stride: int = 1
    split: float = 0.8
    shuffle_seed: int = 7
    stages: tuple[str, ...] = ("post",)


@dataclass
class RunConfig:
    sources: list[SourceSpec]
    extractor: ExtractorConfig
    measures: tuple[str, ...] = ("sts",)
    measure_stages: tuple[str, ...] = ("pre", "post")
    borel_max_level: int = 4
    sts_profile: dict = field(default_factory=dict)
    predictor_export: PredictorExportConfig = field(default_factory=PredictorExportConfig)
    defaults_applied: list[str] = field(default_factory=list)

    def echo(self) -> dict:
        """JSON-serializable picture of the resolved config."""
        srcs = []
        for s in self.sources:
            d = {"label": s.label, "kind": s.kind, "requested_bits": s.requested_bits}
            if s.kind == LCG:
                d.update(a=s.lcg.a, c=s.lcg.c, k=s.lcg.k, x0=s.lcg.x0)
            elif s.kind == CHACHA20:
                d.update(
                    key_hex=s.chacha.key.hex(),
                    nonce_hex=s.chacha.nonce.hex(),
                    counter=s.chacha.initial_counter,
                )
            else:
                d.update(path=s.path, format=s.file_format)
            srcs.append(d)
        return {
            "sources": srcs,
            "extractor": {
                "enabled": self.extractor.enabled,
                "n": self.extractor.n,
                "m": self.extractor.m,
                "seed_value": self.extractor.seed_value,
                "seed_file": self.extractor.seed_file,
                "target_bits": list(self.extractor.target_bits),
            },
            "measures": list(self.measures),
            "measure_stages": list(self.measure_stages),
            "borel_max_level": self.borel_max_level,
            "sts_profile": self.sts_profile,
            "predictor_export": {
                "enabled": self.predictor_export.enabled,
                "window": self.predictor_export.window,
                "stride": self.predictor_export.stride,
                "split": self.predictor_export.split,
                "shuffle_seed": self.predictor_export.shuffle_seed,
                "stages": list(self.predictor_export.stages),
            },
            "defaults_applied": self.defaults_applied,
        }

    def content_hash(self) -> str:
        return hashlib.sha256(
            json.dumps(self.echo(), sort_keys=True).encode()
        ).hexdigest()


def _take(section: dict, key: str, default=None, *, required=False, where=""):
    if key in section:
        return section.pop(key)
    if required:
        raise ConfigError(f"missing key {key!r} in [{where}]")
    return default


def _to_int(value, key):
    try:
        return int(str(value), 0)
    except ValueError as e:
        raise ConfigError(f"key {key!r}: not an integer: {value!r}") from e


def _to_bool(value, key):
    v = str(value).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"key {key!r}: not a boolean: {value!r}")


def _reject_unknown(section: dict, where: str):
    if section:
        raise ConfigError(f"unknown keys in [{where}]: {sorted(section)}")


def _parse_source(
    label: str, raw: dict, default_bits: int, notes: list[str], base_dir: str = "."
) -> SourceSpec:
    where = f"source.{label}"
    kind = _take(raw, "kind", required=True, where=where)
    if kind not in (LCG, CHACHA20, EXTERNAL):
        raise ConfigError(f"[{where}]: unknown kind {kind!r}")
    bits = _take(raw, "bits")
    if bits is None:
        bits = default_bits
        notes.append(f"{where}.bits defaulted to run.raw_bits={default_bits}")
    else:
        bits = _to_int(bits, f"{where}.bits")
    if kind == LCG:
        spec = SourceSpec(
            label=label,
            kind=LCG,
            requested_bits=bits,
            lcg=LcgParams(
                a=_to_int(_take(raw, "a", required=True, where=where), "a"),
                c=_to_int(_take(raw, "c", required=True, where=where), "c"),
                k=_to_int(_take(raw, "k", required=True, where=where), "k"),
                x0=_to_int(_take(raw, "x0", 1), "x0"),
            ),
        )
    elif kind == CHACHA20:
        key_hex = _take(raw, "key_hex", required=True, where=where)
        nonce_hex = _take(raw, "nonce_hex", required=True, where=where)
        try:
            key = bytes.fromhex(key_hex)
            nonce = bytes.fromhex(nonce_hex)
        except ValueError as e:
            raise ConfigError(f"[{where}]: bad hex value: {e}") from e
        spec = SourceSpec(
            label=label,
            kind=CHACHA20,
            requested_bits=bits,
            chacha=ChaChaParams(
                key=key,
                nonce=nonce,
                initial_counter=_to_int(_take(raw, "counter", 0), "counter"),
            ),
        )
    else:
        path = os.path.join(base_dir, _take(raw, "path", required=True, where=where))
        fmt = _take(raw, "format", PACKED)
        if fmt not in FORMATS:
            raise ConfigError(f"[{where}]: unknown format {fmt!r}")
        if not os.path.exists(path):
            raise ConfigError(f"[{where}]: file not found: {path}")
        spec = SourceSpec(
            label=label, kind=EXTERNAL, requested_bits=bits, path=path, file_format=fmt
        )
    _reject_unknown(raw, where)
    return spec


def _parse_list(value: str) -> list[str]:
    return [v.strip() for v in str(value).split(",") if v.strip()]


def parse_config(text: str, base_dir: str = ".") -> RunConfig:
    """Parse and fully validate a config document."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # parameter names are case-sensitive (M vs m)
    try:
        cp.read_string(text)
    except configparser.Error as e:
        raise ConfigError(f"malformed config: {e}") from e

    sections = {name: dict(cp[name]) for name in cp.sections()}
    notes: list[str] = []

    run_raw = sections.pop("run", {})
    raw_bits = _to_int(_take(run_raw, "raw_bits", 5_000_000), "run.raw_bits")
    _reject_unknown(run_raw, "run")

    sources = []
    labels = set()
    for name in list(sections):
        if not name.startswith("source."):
            continue
        label = name[len("source."):]
        if not label:
            raise ConfigError("empty source label")
        if label in labels:
            raise ConfigError(f"duplicate source label {label!r}")
        labels.add(label)
        sources.append(
            _parse_source(label, sections.pop(name), raw_bits, notes, base_dir)
        )
    if not sources:
        raise ConfigError("no [source.<label>] sections")

    ex_raw = sections.pop("extractor", {})
    extractor = ExtractorConfig(
        enabled=_to_bool(_take(ex_raw, "enabled", "false"), "extractor.enabled"),
        n=_to_int(_take(ex_raw, "n", 4000), "extractor.n"),
        m=_to_int(_take(ex_raw, "m", 960), "extractor.m"),
        seed_value=_to_int(_take(ex_raw, "seed_value", 0x00C0FFEE), "extractor.seed_value"),
        seed_file=_take(ex_raw, "seed_file"),
        seed_file_format=_take(ex_raw, "seed_file_format", ASCII),
        target_bits=tuple(
            _to_int(v, "extractor.target_bits")
            for v in _parse_list(_take(ex_raw, "target_bits", "1200000"))
        ),
    )
    _reject_unknown(ex_raw, "extractor")
    if not 0 < extractor.m < extractor.n:
        raise ConfigError(f"extractor geometry needs 0 < m < n, got n={extractor.n} m={extractor.m}")
    if extractor.seed_file is not None:
        seed_path = os.path.join(base_dir, extractor.seed_file)
        if not os.path.exists(seed_path):
            raise ConfigError(f"extractor seed_file not found: {seed_path}")
        seed = read_file(seed_path, extractor.seed_file_format)
        if seed.length != extractor.seed_length:
            raise ConfigError(
                f"extractor seed_file has {seed.length} bits, "
                f"need n+m-1 = {extractor.seed_length}"
            )
        extractor.seed_file = seed_path

    sts_raw = sections.pop("sts", {})
    profile: dict = {}
    from ..sts import TestId  # late import to keep config importable alone

    valid_tests = {t.value for t in TestId}
    for key, value in sts_raw.items():
        if "." not in key:
            raise ConfigError(f"[sts] keys are <test>.<param>, got {key!r}")
        test, param = key.split(".", 1)
        if test not in valid_tests:
            raise ConfigError(f"[sts]: unknown test {test!r}")
        profile.setdefault(test, {})[param] = _to_int(value, key)

    meas_raw = sections.pop("measures", {})
    measures = tuple(_parse_list(_take(meas_raw, "enabled", "sts")))
    for m in measures:
        if m not in MEASURES:
            raise ConfigError(f"[measures]: unknown measure {m!r}")
    stages = tuple(_parse_list(_take(meas_raw, "stages", "pre,post")))
    for st in stages:
        if st not in STAGES:
            raise ConfigError(f"[measures]: unknown stage {st!r}")
    borel_max_level = _to_int(_take(meas_raw, "borel_max_level", 4), "borel_max_level")
    _reject_unknown(meas_raw, "measures")

    pe_raw = sections.pop("predictor_export", {})
    pe = PredictorExportConfig(
        enabled=_to_bool(_take(pe_raw, "enabled", "false"), "predictor_export.enabled"),
        window=_to_int(_take(pe_raw, "window", 100), "window"),
        stride=_to_int(_take(pe_raw, "stride", 1), "stride"),
        split=float(_take(pe_raw, "split", 0.8)),
        shuffle_seed=_to_int(_take(pe_raw, "shuffle_seed", 7), "shuffle_seed"),
        stages=tuple(_parse_list(_take(pe_raw, "stages", "post"))),
    )
    for st in pe.stages:
        if st not in STAGES:
            raise ConfigError(f"[predictor_export]: unknown stage {st!r}")
    _reject_unknown(pe_raw, "predictor_export")

    if sections:
        raise ConfigError(f"unknown sections: {sorted(sections)}")

    return RunConfig(
        sources=sources,
        extractor=extractor,
        measures=measures,
        measure_stages=stages,
        borel_max_level=borel_max_level,
        sts_profile=profile,
        predictor_export=pe,
        defaults_applied=notes,
    )


def validate_config(path: str) -> RunConfig:
    """Load and validate a config file, resolving defaults."""
    try:
        with open(path) as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    return parse_config(text, base_dir=os.path.dirname(os.path.abspath(path)))
