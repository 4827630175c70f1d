import json
import re
import subprocess
import sys

import numpy as np
import pytest

from hadamard_bc import io
from hadamard_bc.channel import HadamardChannelSpec
from hadamard_bc.cli import main
from hadamard_bc.entropic import EnsembleEntry, InputEnsemble
from hadamard_bc.errors import IoError, ParseError, ValidationError
from hadamard_bc.region import Frontier, RatePoint
from hadamard_bc.sampling import random_rq_ensemble, random_small_spec

S2 = np.sqrt(0.5)
ERROR_LINE = re.compile(r"^[A-Za-z]+: \S.*$")


def channel_doc(phi, psi):
    phi, psi = np.asarray(phi, dtype=complex), np.asarray(psi, dtype=complex)
    return {
        "format_version": 1,
        "d_A": phi.shape[1],
        "d_C": psi.shape[1],
        "povm_vectors": [[[z.real, z.imag] for z in v] for v in phi],
        "output_states": [[[z.real, z.imag] for z in v] for v in psi],
    }


@pytest.fixture
def write(tmp_path):
    def _write(name, doc):
        path = tmp_path / name
        path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(path)
    return _write


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_channel_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    for _ in range(20):
        spec = random_small_spec(rng)
        path = tmp_path / "c.json"
        io.write_channel_file(spec, path)
        back = io.parse_channel_file(path)
        np.testing.assert_allclose(back.povm_vectors, spec.povm_vectors, atol=1e-12, rtol=0)
        np.testing.assert_allclose(back.output_states, spec.output_states, atol=1e-12, rtol=0)


def test_ensemble_round_trip(tmp_path):
    rng = np.random.default_rng(4)
    ens = random_rq_ensemble("eac", 2, 3, rng)
    path = tmp_path / "e.json"
    io.write_ensemble_file(ens, path)
    back = io.parse_ensemble_file(path, d_A=2)
    assert back.task == "eac"
    for a, b in zip(ens.entries, back.entries):
        assert (a.w, a.z, a.p) == (b.w, b.z, b.p)
        np.testing.assert_allclose(a.state, b.state, atol=1e-12)


def test_parse_basis_file(write):
    spec = io.parse_channel_file(write("c.json", channel_doc(np.eye(2), [[1, 0], [S2, S2]])))
    assert (spec.n_outcomes, spec.d_A) == (2, 2)


def test_short_output_state_names_index_and_norm(write):
    path = write("c.json", channel_doc(np.eye(2), [[1, 0], [0.9, 0]]))
    with pytest.raises(ValidationError) as info:
        io.parse_channel_file(path)
    assert any("output state 1" in p and "norm 0.9" in p for p in info.value.problems)


def test_overcounted_povm_reports_residual(write):
    path = write("c.json", channel_doc([[1, 0], [1, 0]], [[1, 0], [0, 1]]))
    with pytest.raises(ValidationError) as info:
        io.parse_channel_file(path)
    assert any("residual 1 " in p for p in info.value.problems)


def test_every_violation_is_listed(write):
    path = write("c.json", channel_doc([[1, 0], [1, 0]], [[1, 0], [0.9, 0]]))
    with pytest.raises(ValidationError) as info:
        io.parse_channel_file(path)
    assert len(info.value.problems) == 2


@pytest.mark.parametrize(
    "doc",
    [
        "{not json",
        "[]",
        {"format_version": 2, "d_A": 1, "d_C": 1, "povm_vectors": [[[1, 0]]], "output_states": [[[1, 0]]]},
        {"format_version": 1, "d_A": 1, "d_C": 1, "povm_vectors": [[[1, 0]]]},
        {"format_version": 1, "d_A": 2, "d_C": 1, "povm_vectors": [[[1, 0]]], "output_states": [[[1, 0]]]},
        {"format_version": 1, "d_A": 1, "d_C": 1, "povm_vectors": [[1, 0]], "output_states": [[[1, 0]]]},
        {"format_version": 1, "d_A": 1, "d_C": 1, "povm_vectors": [[[1, 0]]], "output_states": [[[1, 0]], [[1, 0]]]},
    ],
)
def test_malformed_channel_documents(write, doc):
    with pytest.raises(ParseError):
        io.parse_channel_file(write("c.json", doc))


def test_missing_file(tmp_path):
    with pytest.raises(IoError):
        io.parse_channel_file(tmp_path / "absent.json")


def test_ensemble_labels_and_validation(write):
    doc = {"format_version": 1, "task": "cc",
           "entries": [{"w": 0, "z": "a", "p": 1.0, "state": [[1, 0], [0, 0]]}]}
    ens = io.parse_ensemble_file(write("e.json", doc), d_A=2)
    assert ens.entries[0].z == "a"
    with pytest.raises(ValidationError):
        io.parse_ensemble_file(write("e2.json", doc), d_A=3)
    doc["entries"][0]["w"] = [0]
    with pytest.raises(ParseError):
        io.parse_ensemble_file(write("e3.json", doc))
    with pytest.raises(ParseError):
        io.parse_ensemble_file(write("e4.json", {"format_version": 1, "task": "xx", "entries": []}))


def test_csv_empty_frontier():
    assert io.frontier_csv(Frontier("cc", [])) == "lambda,rate_b,rate_c\n"


def test_csv_single_point(tmp_path):
    path = tmp_path / "f.csv"
    io.emit_frontier_csv(Frontier("cc", [RatePoint(1.0, 0.0, lam=1.0)]), path)
    assert path.read_bytes() == b"lambda,rate_b,rate_c\n1.000000000,1.000000000,0.000000000\n"


def test_csv_sorted_rows():
    pts = [RatePoint(0.2, 0.7, lam=0.0), RatePoint(1.0, -0.0, lam=1.0), RatePoint(0.6, 0.3)]
    lines = io.frontier_csv(Frontier("cc", pts)).splitlines()
    assert lines == [
        "lambda,rate_b,rate_c",
        "1.000000000,1.000000000,0.000000000",
        "nan,0.600000000,0.300000000",
        "0.000000000,0.200000000,0.700000000",
    ]


def test_svg_is_self_contained():
    svg = io.frontier_svg(Frontier("cc", [RatePoint(1.0, 0.0), RatePoint(0.0, 1.0)]), "t")
    assert svg.startswith("<svg") and svg.count("<circle") == 2 and "href" not in svg


# command line


def test_cli_validate(write, capsys):
    good = write("g.json", channel_doc(np.eye(2), [[1, 0], [S2, S2]]))
    code, out, _ = run(["validate", good], capsys)
    assert code == 0 and "result=pass" in out
    bad = write("b.json", channel_doc(np.eye(2), [[1, 0], [0.9, 0]]))
    code, out, _ = run(["validate", bad], capsys)
    assert code == 1 and "result=fail" in out and "norm 0.9" in out


def test_cli_degrade_check(write, capsys):
    code, out, _ = run(["degrade-check", write("g.json", channel_doc(np.eye(2), [[1, 0], [S2, S2]]))], capsys)
    assert code == 0
    residual = float(re.search(r"choi_residual=(\S+)", out).group(1))
    assert residual <= 1e-10


def test_cli_evaluate(write, capsys):
    chan = write("c.json", channel_doc(np.eye(2), np.eye(2)))
    ens = write("e.json", {"format_version": 1, "task": "cc", "entries": [
        {"w": 0, "z": 0, "p": 0.5, "state": [[1, 0], [0, 0]]},
        {"w": 1, "z": 1, "p": 0.5, "state": [[0, 0], [1, 0]]},
    ]})
    code, out, _ = run(["evaluate", chan, ens], capsys)
    assert code == 0
    assert "primary_rate=0.000000000" in out and "charlie_rate_c=1.000000000" in out
    assert out.splitlines()[0] == "task=cc"


def test_cli_frontier_writes_csv_and_plot(write, tmp_path, capsys):
    chan = write("c.json", channel_doc(np.eye(2), [[1, 0], [1, 0]]))
    out_csv, out_svg = tmp_path / "f.csv", tmp_path / "f.svg"
    argv = ["frontier", chan, "--task", "cq", "--lambdas", "2", "--restarts", "2",
            "--out", str(out_csv), "--plot", str(out_svg)]
    code, out, _ = run(argv, capsys)
    assert code == 0 and out == ""
    rows = out_csv.read_text().splitlines()
    assert rows[0] == "lambda,rate_b,rate_c" and len(rows) >= 2
    assert out_svg.read_text().startswith("<svg")
    code, out, _ = run(argv[:-4], capsys)
    assert out == out_csv.read_text()


def test_cli_oracle(write, capsys):
    code, out, _ = run(["oracle", write("c.json", channel_doc(np.eye(2), np.eye(2))), "--grid", "4"], capsys)
    assert code == 0 and out.startswith("lambda,rate_b,rate_c\nnan,1.000000000,0.000000000\n")


@pytest.mark.parametrize(
    "argv_builder, expected_code, category",
    [
        (lambda w: ["validate", "/nonexistent/c.json"], 2, "IoError"),
        (lambda w: ["validate", w("x.json", "{oops")], 2, "ParseError"),
        (lambda w: ["degrade-check", w("b.json", channel_doc([[1, 0], [1, 0]], np.eye(2)))], 1, "ValidationError"),
        (lambda w: ["oracle", w("p.json", channel_doc(np.eye(2), [[1, 0], [S2, S2]]))], 3, "NotClassical"),
        (lambda w: ["oracle", w("q.json", channel_doc(np.eye(4), np.eye(4)))], 3, "SizeLimit"),
        (lambda w: ["frontier", w("r.json", channel_doc(np.eye(3), np.eye(3))),
                    "--task", "cc", "--restarts", "0"], 1, "InvalidParameters"),
        (lambda w: ["frontier", w("s.json", channel_doc(np.eye(8), np.eye(8))), "--task", "cc"], 3, "SizeLimit"),
        (lambda w: ["evaluate", w("c.json", channel_doc(np.eye(2), np.eye(2))),
                    w("e.json", {"format_version": 1, "task": "cq", "entries": [
                        {"w": 0, "p": 0.5, "state": [[1, 0], [0, 0], [0, 0], [0, 0]]}]})], 1, "ValidationError"),
    ],
)
def test_cli_failures_print_one_prefixed_line(write, capsys, argv_builder, expected_code, category):
    code, _, err = run(argv_builder(write), capsys)
    assert code == expected_code
    lines = err.strip().splitlines()
    assert len(lines) == 1 and ERROR_LINE.match(lines[0]) and lines[0].startswith(category + ":")


def test_console_script_entry_point(write):
    path = write("c.json", channel_doc(np.eye(2), np.eye(2)))
    proc = subprocess.run([sys.executable, "-m", "hadamard_bc.cli", "validate", path],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0 and "result=pass" in proc.stdout
