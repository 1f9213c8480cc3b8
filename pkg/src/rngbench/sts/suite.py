"""Test registry, suite runner, and pass/fail matrix rendering."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..bitstream import BitStream, ParameterError
from . import tests as _t

ALPHA = 0.01


class TestId(str, enum.Enum):
    __test__ = False  # library enum, not a pytest class

    frequency = "frequency"
    block_frequency = "block_frequency"
    runs = "runs"
    longest_run = "longest_run"
    matrix_rank = "matrix_rank"
    spectral_dft = "spectral_dft"
    nonoverlapping_template = "nonoverlapping_template"
    overlapping_template = "overlapping_template"
    universal = "universal"
    linear_complexity = "linear_complexity"
    serial = "serial"
    approximate_entropy = "approximate_entropy"
    cumulative_sums = "cumulative_sums"
    random_excursions = "random_excursions"
    random_excursions_variant = "random_excursions_variant"


_REGISTRY = {
    TestId.frequency: _t.frequency,
    TestId.block_frequency: _t.block_frequency,
    TestId.runs: _t.runs,
    TestId.longest_run: _t.longest_run,
    TestId.matrix_rank: _t.matrix_rank,
    TestId.spectral_dft: _t.spectral_dft,
    TestId.nonoverlapping_template: _t.nonoverlapping_template,
    TestId.overlapping_template: _t.overlapping_template,
    TestId.universal: _t.universal,
    TestId.linear_complexity: _t.linear_complexity,
    TestId.serial: _t.serial,
    TestId.approximate_entropy: _t.approximate_entropy,
    TestId.cumulative_sums: _t.cumulative_sums,
    TestId.random_excursions: _t.random_excursions,
    TestId.random_excursions_variant: _t.random_excursions_variant,
}

TEST_ORDER = list(_REGISTRY)


@dataclass
class TestResult:
    test: TestId
    p_values: list[float]
    passed: bool
    applicable: bool
    alpha: float = ALPHA
    params_used: dict = field(default_factory=dict)
    detail: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "test": self.test.value,
            "p_values": self.p_values,
            "pass": self.passed,
            "applicable": self.applicable,
            "alpha": self.alpha,
            "params_used": self.params_used,
            "detail": self.detail,
        }


@dataclass
class SuiteReport:
    label: str
    length: int
    stage: str  # "pre" or "post"
    results: list[TestResult]

    @property
    def all_pass(self) -> bool:
        return all(r.passed for r in self.results if r.applicable)

    @property
    def failing(self) -> list[TestId]:
        return [r.test for r in self.results if r.applicable and not r.passed]

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "length": self.length,
            "stage": self.stage,
            "all_pass": self.all_pass,
            "results": [r.as_dict() for r in self.results],
        }


def run_test(test: TestId | str, s: BitStream, params: dict | None = None) -> TestResult:
    """Run one test; a too-short stream comes back applicable=False."""
    test = TestId(test)
    fn = _REGISTRY[test]
    try:
        outcome = fn(s.bits, **(params or {}))
    except TypeError as e:
        raise ParameterError(f"invalid parameters for {test.value}: {e}") from e
    for p in outcome.p_values:
        if not 0.0 <= p <= 1.0:
            raise AssertionError(f"{test.value} produced p-value {p} outside [0,1]")
    passed = outcome.applicable and all(p >= ALPHA for p in outcome.p_values)
    return TestResult(
        test=test,
        p_values=[float(p) for p in outcome.p_values],
        passed=passed,
        applicable=outcome.applicable,
        params_used=outcome.params_used,
        detail=outcome.detail,
    )


def run_suite(
    s: BitStream,
    profile: dict | None = None,
    label: str = "",
    stage: str = "pre",
) -> SuiteReport:
    """Run all fifteen tests in fixed order.

    ``profile`` maps test name to a dict of parameter overrides,
    e.g. ``{"block_frequency": {"M": 128}}``.
    """
    profile = profile or {}
    results = [run_test(t, s, profile.get(t.value)) for t in TEST_ORDER]
    return SuiteReport(label=label, length=s.length, stage=stage, results=results)


_CELLS = {"pass": ".", "fail": "#", "n/a": "-"}


def render_matrix(reports: list[SuiteReport]) -> tuple[dict, str]:
    """Sources x tests grid of pass/fail/not-applicable.

    Returns structured data plus a monospace rendering ('.' pass,
    '#' fail, '-' not applicable).
    """
    if not reports:
        raise ParameterError("need at least one report")
    grid = []
    for rep in reports:
        row = {}
        for r in rep.results:
            row[r.test.value] = (
                "n/a" if not r.applicable else ("pass" if r.passed else "fail")
            )
        grid.append({"label": rep.label, "stage": rep.stage, "cells": row})
    width = max(len(r["label"] + "/" + r["stage"]) for r in grid) + 2
    lines = []
    header = " " * width + " ".join(f"{i + 1:>2d}" for i in range(len(TEST_ORDER)))
    lines.append(header)
    for row in grid:
        name = (row["label"] + "/" + row["stage"]).ljust(width)
        cells = " ".join(f"{_CELLS[row['cells'][t.value]]:>2s}" for t in TEST_ORDER)
        lines.append(name + cells)
    lines.append("")
    for i, t in enumerate(TEST_ORDER):
        lines.append(f"{i + 1:>3d}: {t.value}")
    return {"tests": [t.value for t in TEST_ORDER], "rows": grid}, "\n".join(lines)
