"""Line-delimited sample serialization."""

import json

import pytest

from intentmerge.records import (
    MalformedRecord,
    dump_sample,
    iter_dataset,
    load_dataset,
    parse_record_line,
    read_dataset,
    sample_to_record,
    save_dataset,
    write_dataset,
)
from intentmerge.simgen import generate_dataset


@pytest.fixture(scope="module")
def samples(domain, tables):
    return generate_dataset("arity", "n2", 8, 13, domain, tables)


def test_record_schema(samples):
    record = sample_to_record(samples[0])
    assert set(record) == {"scene", "truth", "sentences", "meta"}
    assert set(record["sentences"]) == {"gesture", "language"}
    assert set(record["meta"]) >= {"kind", "noise", "seed"}
    assert record["meta"]["kind"] == "arity"
    for obj in record["scene"]["objects"]:
        assert set(obj) == {"id", "kind", "features"}
    word = record["sentences"]["gesture"]["words"][0]
    assert set(word) >= {"category", "options", "values", "empty"}


def test_floats_use_nine_significant_digits(samples):
    line = dump_sample(samples[0])
    payload = json.loads(line)
    for sentence in payload["sentences"].values():
        for word in sentence["words"]:
            if word["empty"]:
                continue
            for value in word["values"]:
                assert value == float(f"{value:.9g}")


def test_line_round_trip_is_byte_stable(samples):
    for sample in samples:
        line = dump_sample(sample)
        again = parse_record_line(line)
        assert dump_sample(again) == line
        assert again.truth == sample.truth
        assert again.kind == sample.kind
        assert again.noise == sample.noise
        assert again.seed == sample.seed
        assert again.scene == sample.scene


def test_decoy_meta_round_trips(samples):
    sample = samples[0]
    assert sample.decoy_action is not None
    again = parse_record_line(dump_sample(sample))
    assert again.decoy_action == sample.decoy_action
    assert again.decoy_modality == sample.decoy_modality


def test_write_and_read_handles(samples, tmp_path):
    path = tmp_path / "data.jsonl"
    with open(path, "w", encoding="utf-8") as handle:
        count = write_dataset(samples, handle)
    assert count == len(samples)
    with open(path, "r", encoding="utf-8") as handle:
        again = read_dataset(handle)
    assert [dump_sample(s) for s in again] == [dump_sample(s) for s in samples]
    with open(path, "r", encoding="utf-8") as handle:
        assert sum(1 for _ in iter_dataset(handle)) == len(samples)


def test_save_and_load_paths(samples, tmp_path):
    path = tmp_path / "data.jsonl"
    assert save_dataset(samples, path) == len(samples)
    first = path.read_bytes()
    save_dataset(samples, path)
    assert path.read_bytes() == first  # regeneration is byte-identical
    assert [dump_sample(s) for s in load_dataset(path)] == [
        dump_sample(s) for s in samples
    ]


def test_malformed_lines_raise():
    with pytest.raises(MalformedRecord):
        parse_record_line("not json at all")
    with pytest.raises(MalformedRecord):
        parse_record_line("[1, 2, 3]")
    with pytest.raises(MalformedRecord):
        parse_record_line('{"scene": {"objects": []}}')


def test_malformed_word_payload(samples):
    record = sample_to_record(samples[0])
    record["sentences"]["gesture"]["words"][0]["values"] = [0.5]  # length mismatch
    with pytest.raises(MalformedRecord):
        parse_record_line(json.dumps(record))
