import json
import math

import pytest

import seqprint as sp


def test_bit_sequence_round_trip():
    s = sp.BitSequence("0110100111")
    assert len(s) == 10
    assert str(s) == "0110100111"
    assert sp.BitSequence.from_bytes(s.to_bytes(), 10) == s


def test_arx_zero_key_vector():
    block = sp.arx_block([0] * 8, [0, 0, 0], 0)
    assert block.hex().startswith("76b8e0ada0f13d90405d6ae55386bd28")


def test_profile_and_metrics():
    p = sp.extract_profile(sp.BitSequence("0001011100"), 3)
    assert p.total_windows == 8
    assert p.distinct == 8
    assert sp.pattern_entropy(sp.normalize(p)) == pytest.approx(3.0)
    stats = sp.concentration_stats(p)
    assert stats.max_prob == 0.125
    assert stats.as_dict()["mean_recurrence"] == 0.0
    assert sp.recurrence_histogram(p).bins == [1.0, 0.0, 0.0, 0.0, 0.0]


def test_deviation_example():
    a = sp.normalize(sp.PatternProfile(2, {0: 2, 1: 2}))
    b = sp.normalize(sp.PatternProfile(2, {0: 1, 1: 1, 2: 2}))
    assert sp.deviation_score(a, b) == pytest.approx(1.0)


def test_errors_carry_kind():
    with pytest.raises(sp.SeqprintError) as info:
        sp.extract_profile(sp.BitSequence("01"), 3)
    assert info.value.kind == "empty-window"
    with pytest.raises(ValueError):
        sp.generate_corpus(sp.BiasedBits(1.5), 0, 2, 8)


def test_pipeline_end_to_end(tmp_path):
    biased = sp.generate_corpus(sp.BiasedBits(0.7), 1, 40, 512)
    uniform = sp.generate_corpus(sp.UniformRef(), 2, 40, 512)
    path = tmp_path / "u.sbfc"
    sp.write_corpus(path, uniform)
    again = sp.read_corpus(path)
    assert again.count == 40 and again.length_bits == 512
    assert again.sequences[3] == uniform.sequences[3]

    a = sp.analyze_corpus(biased, [6, 12])
    b = sp.analyze_corpus(uniform, [6, 12])
    assert a.m_set == [6, 12]
    assert a.fingerprint.dimension == 10
    assert a.fingerprint.provenance == "corpus"

    nulls = sp.permutation_nulls(biased, uniform, [6, 12], 20, 3)
    report = sp.compare(a, b, nulls)
    rows = report.rows
    assert [r["m"] for r in rows] == [6, 12]
    assert rows[0]["z"] > 5
    doc = json.loads(sp.report_to_json(report))
    assert doc["scales"][0]["deviation"] == rows[0]["deviation"]

    self_rows = sp.compare(b, b).rows
    assert all(r["deviation"] == 0.0 and r["z"] is None for r in self_rows)


def test_fingerprint_json_round_trip():
    fp = sp.compute_fingerprint([sp.extract_profile(sp.BitSequence("0" * 64), m) for m in (4, 8)])
    back = sp.Fingerprint.from_json(fp.to_json())
    assert back.features == fp.features
    assert sp.fingerprint_distance(fp, back) == 0.0
    assert fp.features[0] == 0.0 and not math.isnan(fp.features[4])
