import json
from importlib import resources

import jsonschema
import numpy as np
import pytest

from capbound.channels import BipartiteState, erasure
from capbound.cli import run
from capbound.serialize import channel_from_dict, channel_to_dict, state_to_dict

FAST = ["--restarts", "3", "--max-iter", "200"]


def _schema() -> dict:
    text = resources.files("capbound").joinpath("schemas/report.schema.json").read_text()
    return json.loads(text)


SCHEMA = _schema()


def _run_json(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    assert code == 0, out
    return json.loads(out)


@pytest.fixture
def erasure_file(tmp_path):
    path = tmp_path / "erasure.json"
    path.write_text(json.dumps(channel_to_dict(erasure(2, 0.25))))
    return str(path)


@pytest.fixture
def state_file(tmp_path):
    v = np.zeros(4, complex)
    v[0] = np.sqrt(0.8)
    v[3] = np.sqrt(0.2)
    state = BipartiteState(2, 2, np.outer(v, v.conj()))
    path = tmp_path / "state.json"
    path.write_text(json.dumps(state_to_dict(state)))
    return str(path)


# ---------------------------------------------------------------------------
# round trips and determinism


def test_builtin_roundtrip_bit_exact(capsys):
    payload = _run_json(capsys, ["builtin", "erasure", "2", "0.5"])
    ch = channel_from_dict(payload)
    again = channel_to_dict(ch)
    assert again["kraus"] == payload["kraus"]
    assert payload["dim_in"] == 2 and payload["dim_out"] == 3


def test_bounds_byte_identical(capsys, erasure_file):
    argv = ["bounds", erasure_file, "--seed", "7", *FAST]
    assert run(argv) == 0
    first = capsys.readouterr().out
    assert run(argv) == 0
    second = capsys.readouterr().out
    assert first == second


# ---------------------------------------------------------------------------
# schema validation of every subcommand


def test_bounds_schema(capsys, erasure_file):
    payload = _run_json(capsys, ["bounds", erasure_file, *FAST])
    jsonschema.validate(payload, SCHEMA)
    assert payload["schema"] == 1
    assert payload["verdict"]["bippt"] is False


def test_degradability_schema(capsys, tmp_path):
    path = tmp_path / "ch.json"
    path.write_text(json.dumps(channel_to_dict(erasure(2, 0.75))))
    payload = _run_json(capsys, ["degradability", str(path), *FAST])
    jsonschema.validate(payload, SCHEMA)
    assert payload["verdict"]["eps_antidegradable"] <= 1e-6


def test_state_bounds_schema(capsys, state_file):
    payload = _run_json(capsys, ["state-bounds", state_file, *FAST])
    jsonschema.validate(payload, SCHEMA)
    assert set(payload["reports"]) >= {"K1", "D", "K_two_term", "K"}


def test_search_bippt_schema(capsys, monkeypatch):
    monkeypatch.setenv("CAPBOUND_THREADS", "2")
    payload = _run_json(capsys, ["search-bippt", "--budget", "1", *FAST])
    jsonschema.validate(payload, SCHEMA)
    assert len(payload["records"]) == 1
    jsonschema.validate(payload["records"][0],
                        {**SCHEMA, "$ref": "#/definitions/searchRecord"})


def test_builtin_schema(capsys):
    payload = _run_json(capsys, ["builtin", "amplitude_damping", "0.3"])
    jsonschema.validate(payload, SCHEMA)


# ---------------------------------------------------------------------------
# text output


def test_text_format_smoke(capsys, erasure_file):
    assert run(["bounds", erasure_file, "--format", "text", *FAST]) == 0
    out = capsys.readouterr().out
    assert "# bounds" in out
    assert "certified" in out


# ---------------------------------------------------------------------------
# exit codes


def test_missing_file_exit_code(capsys):
    assert run(["bounds", "/does/not/exist.json"]) == 2


def test_malformed_json_exit_code(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert run(["bounds", str(path)]) == 2


def test_non_tp_channel_exit_code(capsys, tmp_path):
    payload = channel_to_dict(erasure(2, 0.25))
    payload["kraus"] = payload["kraus"][:1]  # drop Kraus terms: not TP
    path = tmp_path / "bad_channel.json"
    path.write_text(json.dumps(payload))
    assert run(["bounds", str(path)]) == 2


def test_bad_builtin_params_exit_code(capsys):
    assert run(["builtin", "erasure", "2"]) == 2  # missing probability
    assert run(["builtin", "erasure", "2", "oops"]) == 2


def test_unknown_subcommand_exit_code(capsys):
    assert run(["frobnicate"]) == 2
