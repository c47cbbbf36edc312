import io

import msgspec
import pytest

from algebra.polytext import parse_int_poly
from algebra.vanish import BoundSpec, BoundSource, Mode, Result, build_instance, decide_vanishing
from instances import parse_instance_text
from reports import (
    SWEEP_COLUMNS,
    Report,
    build_report,
    decide_report,
    decode_report,
    encode_report,
    exit_code,
    format_summary,
    sweep_row,
    write_sweep_csv,
)


@pytest.fixture
def single_report():
    inst = build_instance([parse_int_poly("x", ("x",))], 2, 1, names=("x",), name="single")
    verdict = decide_vanishing(inst, BoundSpec(BoundSource.FINITE_LENGTH), Mode.COMPARE)
    return build_report("single", 2, 1, verdict)


def test_json_roundtrip(single_report):
    data = encode_report(single_report)
    again = decode_report(data)
    assert encode_report(again) == data
    assert again.witness.offset == (0,)
    assert msgspec.json.decode(data)["verdict"] == "NONVANISHING"


def test_json_keys_are_sorted(single_report):
    keys = list(msgspec.json.decode(encode_report(single_report)))
    assert keys == sorted(keys)


def test_stable_reports_drop_timings():
    inst = build_instance([parse_int_poly("x", ("x",))], 3, 1, names=("x",))
    verdict = decide_vanishing(inst, BoundSpec(BoundSource.FINITE_LENGTH))
    assert verdict.timings
    assert build_report("single", 3, 1, verdict, stable=True).timings == {}


def test_summary_counts_generators_from_one(single_report):
    text = format_summary(single_report)
    assert text.startswith("single: H^1 over F_2: NONVANISHING")
    assert "witness: j=1 offset=(0,) generator=1" in text
    assert "mode=compare" in text


@pytest.mark.parametrize("result,code", [
    (Result.VANISHES, 0), (Result.NONVANISHING, 1), (Result.INCONCLUSIVE, 2), ("VANISHES", 0),
])
def test_exit_codes(result, code):
    assert exit_code(result) == code


def test_decide_report_records_errors():
    spec = parse_instance_text('variables = ["x"]\ngenerators = ["x"]\n')
    report = decide_report(spec, 4, 1)
    assert report.verdict is Result.INCONCLUSIVE
    assert report.reason == "4 is not prime"
    assert sweep_row(report).error == "4 is not prime"


def test_sweep_csv_layout(single_report):
    out = io.StringIO()
    text = write_sweep_csv([sweep_row(single_report)], out)
    assert out.getvalue() == text
    header, row = text.splitlines()
    assert header.split(",") == list(SWEEP_COLUMNS)
    values = dict(zip(SWEEP_COLUMNS, row.split(",")))
    assert values["p"] == "2"
    assert values["verdict"] == "NONVANISHING"
    assert values["peak_live_monomials"] == "3"
    assert values["error"] == ""


def test_report_defaults():
    report = Report(instance="i", prime=2, degree=1, mode="streaming", verdict=Result.VANISHES)
    assert report.counters.tuples == 0
    assert report.wall_time == 0
