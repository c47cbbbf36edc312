"""Reports: the machine-readable record of one decision, and sweep tables."""
from __future__ import annotations

import csv
import io
from typing import Iterable, TextIO

import msgspec

from algebra.errors import LocohError, VerdictMismatchError
from algebra.vanish import Counters, Result, Verdict, Witness, build_instance, decide_vanishing, parse_bound

SWEEP_COLUMNS = (
    "p",
    "verdict",
    "peak_live_monomials",
    "max_degree",
    "degree_bound",
    "tuples",
    "compositions",
    "wall_time",
    "error",
)


class Report(msgspec.Struct, kw_only=True):
    instance: str
    prime: int
    degree: int
    mode: str
    bound: str | None = None
    verdict: Result
    witness: Witness | None = None
    r: int | None = None
    u: int | None = None
    per_prime_bound: bool = False
    reason: str | None = None
    warnings: list[str] = msgspec.field(default_factory=list)
    counters: Counters = msgspec.field(default_factory=Counters)
    timings: dict[str, float] = msgspec.field(default_factory=dict)

    @property
    def wall_time(self) -> float:
        return sum(self.timings.values())


class SweepRow(msgspec.Struct, kw_only=True):
    p: int
    verdict: str
    peak_live_monomials: int = 0
    max_degree: int = 0
    degree_bound: int = 0
    tuples: int = 0
    compositions: int = 0
    wall_time: float = 0.0
    error: str | None = None


def build_report(instance: str, prime: int, degree: int, verdict: Verdict, stable: bool = False) -> Report:
    return Report(
        instance=instance,
        prime=prime,
        degree=degree,
        mode=verdict.mode.value,
        bound=verdict.bound,
        verdict=verdict.result,
        witness=verdict.witness,
        r=verdict.r,
        u=verdict.u,
        per_prime_bound=verdict.per_prime_bound,
        reason=verdict.reason,
        warnings=list(verdict.warnings),
        counters=verdict.counters,
        timings={} if stable else dict(sorted(verdict.timings.items())),
    )


def error_report(instance: str, prime: int, degree: int, mode: str, message: str) -> Report:
    return Report(
        instance=instance, prime=prime, degree=degree, mode=mode,
        verdict=Result.INCONCLUSIVE, reason=message,
    )


def encode_report(report: Report | list[Report]) -> bytes:
    """Canonical JSON: sorted keys, no whitespace."""
    return msgspec.json.encode(report, order="sorted")


def decode_report(data: bytes | str) -> Report:
    return msgspec.json.decode(data, type=Report)


def exit_code(result: Result | str) -> int:
    return {Result.VANISHES: 0, Result.NONVANISHING: 1}.get(Result(result), 2)


def format_summary(report: Report) -> str:
    lines = [f"{report.instance}: H^{report.degree} over F_{report.prime}: {report.verdict.value}"]
    detail = [f"mode={report.mode}"]
    if report.bound:
        detail.append(f"bound={report.bound}")
    if report.u is not None:
        detail.append(f"u={report.u}" + (" (this prime only)" if report.per_prime_bound else ""))
    if report.r is not None:
        detail.append(f"r={report.r}")
    lines.append("  " + " ".join(detail))
    if report.witness is not None:
        w = report.witness
        lines.append(f"  witness: j={w.j} offset={tuple(w.offset)} generator={w.generator + 1}")
    if report.reason:
        lines.append(f"  reason: {report.reason}")
    for warning in report.warnings:
        lines.append(f"  warning: {warning}")
    c = report.counters
    lines.append(
        f"  peak_live_monomials={c.peak_live_monomials} max_degree={c.max_degree} "
        f"tuples={c.tuples} compositions={c.compositions} groebner_bases={c.gb_bases}"
    )
    if report.timings:
        lines.append("  time: " + " ".join(f"{k}={v:.3f}s" for k, v in report.timings.items()))
    return "\n".join(lines)


def sweep_row(report: Report) -> SweepRow:
    c = report.counters
    error = report.reason if report.verdict is Result.INCONCLUSIVE else None
    return SweepRow(
        p=report.prime,
        verdict=report.verdict.value,
        peak_live_monomials=c.peak_live_monomials,
        max_degree=c.max_degree,
        degree_bound=c.degree_bound,
        tuples=c.tuples,
        compositions=c.compositions,
        wall_time=round(report.wall_time, 6),
        error=error,
    )


def write_sweep_csv(rows: Iterable[SweepRow], out: TextIO | None = None) -> str:
    """Write rows under SWEEP_COLUMNS; returns the CSV text."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow(["" if getattr(row, col) is None else getattr(row, col) for col in SWEEP_COLUMNS])
    text = buffer.getvalue()
    if out is not None:
        out.write(text)
    return text


def decide_report(
    instance,
    prime: int,
    degree: int,
    mode: str = "streaming",
    bound: str = "finite-length",
    max_steps: int = 4,
    check: bool = True,
    stable: bool = False,
) -> Report:
    """Decide one (instance file, prime, degree) and wrap the verdict.

    LocohErrors other than a compare-mode disagreement become an INCONCLUSIVE
    report carrying the message.
    """
    try:
        spec = parse_bound(bound)
        inst = build_instance(instance.generators, prime, degree, names=instance.names, name=instance.name, check=check)
        verdict = decide_vanishing(inst, spec, mode, max_steps)
    except VerdictMismatchError:
        raise
    except LocohError as exc:
        return error_report(instance.name, prime, degree, mode, str(exc))
    return build_report(instance.name, prime, degree, verdict, stable=stable)
