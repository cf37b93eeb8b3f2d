import json
import math

import numpy as np
import pytest

from qroof.cli import main
from qroof.qubit import h2

LN2 = math.log(2)


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)

    return {
        "ad_half": write("ad_half.json", {"kind": "amplitude_damping", "p": 0.5}),
        "ad_one": write("ad_one.json", {"kind": "amplitude_damping", "p": 1.0}),
        "pd_0": write("pd_0.json", {"kind": "phase_damping", "z": [0.0, 0.0]}),
        "pd": write("pd.json", {"kind": "phase_damping", "z": [0.6, 0.0]}),
        "kraus": write("kraus.json", {"kind": "kraus",
                                      "A": [[[1, 0], [0, 0]], [[0, 0], [0.6, 0]]],
                                      "B": [[[0, 0], [0.8, 0]], [[0, 0], [0, 0]]]}),
        "center": write("center.json", {"bloch": [0, 0, 0]}),
        "x": write("x.json", {"bloch": [0.6, 0, 0]}),
        "bad_state": write("bad_state.json", {"bloch": [1, 1, 1]}),
        "broken": write("broken.json", {"kind": "amplitude_damping", "q": 1}),
        "ensemble": write("ens.json", {"members": [{"weight": 0.5, "state": {"bloch": [0, 0, 1]}},
                                                   {"weight": 0.5, "state": {"bloch": [0, 0, -1]}}]}),
        "dir": tmp_path,
    }


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return json.loads(out)


def test_concurrence(files, capsys):
    doc = run_json(capsys, "concurrence", "--channel", files["ad_half"], "--state", files["center"])
    assert doc["concurrence"] == pytest.approx(0.5, abs=1e-15)
    assert doc["method"] == "named-closed-form"
    assert doc["channel_kind"] == "amplitude_damping"
    assert abs(doc["theta_path"] - doc["concurrence"]) < 1e-10


def test_concurrence_theta_route(files, capsys):
    doc = run_json(capsys, "concurrence", "--channel", files["kraus"], "--state", files["center"])
    assert doc["method"] == "theta" and doc["channel_kind"] == "kraus"
    assert "theta_path" not in doc


def test_capacity_noiseless(files, capsys):
    doc = run_json(capsys, "capacity", "--channel", files["ad_one"])
    assert doc["capacity_nats"] == pytest.approx(LN2, abs=1e-8)
    assert doc["r0"] == pytest.approx(0.5, abs=1e-6)
    assert doc["unit"] == "nats"
    bits = run_json(capsys, "capacity", "--channel", files["ad_one"], "--bits")
    assert bits["capacity_bits"] == pytest.approx(1.0, abs=1e-8)


def test_entanglement_zero_on_axis(files, capsys):
    doc = run_json(capsys, "entanglement", "--channel", files["pd_0"], "--state", files["center"])
    assert doc["E"] == 0.0 and doc["unit"] == "nats"


def test_entropy_bits(files, capsys):
    doc = run_json(capsys, "entropy", "--channel", files["ad_half"], "--state", files["center"], "--bits")
    assert doc["unit"] == "bits"
    assert doc["E"] == pytest.approx(h2(0.5) / LN2, abs=1e-15)


def test_chi(files, capsys):
    doc = run_json(capsys, "chi", "--ensemble", files["ensemble"])
    assert doc["chi"] == pytest.approx(LN2, abs=1e-15)
    doc = run_json(capsys, "chi", "--ensemble", files["ensemble"], "--channel", files["pd"])
    assert doc["chi"] <= doc["chi_input"] + 1e-12


def test_foliation(files, capsys):
    doc = run_json(capsys, "foliation", "--channel", files["pd"], "--state", files["x"])
    assert doc["leaf_kind"] == "line"
    assert doc["concurrence"] == pytest.approx(0.48, abs=1e-15)
    assert sum(m["weight"] for m in doc["decomposition"]) == pytest.approx(1.0)


def test_exit_codes(files, capsys):
    assert run(capsys, "concurrence", "--channel", files["broken"], "--state", files["center"])[0] == 2
    assert run(capsys, "concurrence", "--channel", files["pd"], "--state", files["bad_state"])[0] == 3
    assert run(capsys, "concurrence", "--channel", str(files["dir"] / "missing.json"),
               "--state", files["center"])[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    code, _, err = run(capsys, "verify", "--cases", "0")
    assert code == 2 and "cases" in err


def test_sweep_capacity(files, capsys):
    out = files["dir"] / "cap.csv"
    code, _, _ = run(capsys, "sweep", "capacity", "--channel", files["ad_half"], "--param", "p",
                     "--from", "0.05", "--to", "1.0", "--steps", "20", "--output", str(out))
    assert code == 0
    raw = out.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == "p,capacity_nats,r0"
    assert len(lines) == 21
    last = [float(x) for x in lines[-1].split(",")]
    assert last[0] == 1.0 and abs(last[1] - LN2) < 1e-8


def test_sweep_concurrence_over_z(files, capsys):
    code, out, _ = run(capsys, "sweep", "concurrence", "--channel", files["pd"], "--state", files["x"],
                       "--param", "z", "--from", "0", "--to", "0.9", "--steps", "10")
    assert code == 0
    rows = np.array([[float(v) for v in line.split(",")] for line in out.splitlines()[1:]])
    assert np.allclose(rows[:, 1], 0.6 * np.sqrt(1 - rows[:, 0] ** 2), atol=1e-15)


def test_sweep_entanglement_over_x1(files, capsys):
    code, out, _ = run(capsys, "sweep", "entanglement", "--channel", files["pd"], "--param", "x1",
                       "--from", "0", "--to", "1", "--steps", "11")
    assert code == 0
    rows = np.array([[float(v) for v in line.split(",")] for line in out.splitlines()[1:]])
    assert np.allclose(rows[:, 1], h2(0.8 * rows[:, 0]), atol=1e-14)
    assert np.all(np.diff(rows[:, 1]) >= 0)


def test_sweep_jobs_same_output(files, capsys):
    args = ["sweep", "entropy", "--channel", files["pd"], "--param", "x3",
            "--from", "-0.9", "--to", "0.9", "--steps", "7", "--state", files["x"]]
    _, serial, _ = run(capsys, *args)
    _, parallel, _ = run(capsys, *args, "--jobs", "3")
    assert serial == parallel


def test_sweep_digits(files, capsys):
    _, out, _ = run(capsys, "sweep", "concurrence", "--channel", files["pd"], "--state", files["x"],
                    "--param", "z", "--from", "0", "--to", "0.3", "--steps", "2")
    assert out.splitlines()[2].startswith("0.29999999999999999,")


def test_sweep_usage_errors(files, capsys):
    base = ["--from", "0", "--to", "1", "--steps", "3"]
    assert run(capsys, "sweep", "capacity", "--channel", files["ad_half"], "--param", "z", *base)[0] == 2
    assert run(capsys, "sweep", "capacity", "--channel", files["ad_half"], "--param", "p",
               "--from", "0", "--to", "1", "--steps", "1")[0] == 2
    assert run(capsys, "sweep", "concurrence", "--channel", files["pd"], "--param", "z", *base)[0] == 2
    # p = 0 is outside the amplitude-damping family
    assert run(capsys, "sweep", "capacity", "--channel", files["ad_half"], "--param", "p", *base)[0] == 3


def test_make_channel_round_trip(files, capsys):
    path = files["dir"] / "made.json"
    assert run(capsys, "make-channel", "phase_damping", "--z", "0.1", "0.7", "--output", str(path))[0] == 0
    doc = run_json(capsys, "concurrence", "--channel", str(path), "--state", files["x"])
    assert doc["concurrence"] == pytest.approx(0.6 * math.sqrt(1 - 0.5), abs=1e-15)
    assert run(capsys, "make-channel", "canonical", "--a00", "1", "0")[0] == 2


def test_verify_small_run_is_deterministic(capsys):
    args = ["verify", "--seed", "3", "--cases", "2"]
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == 0 and out1 == out2
    assert out1.rstrip().endswith("properties passed")
    assert all(line.startswith("PASS") for line in out1.splitlines()[1:-1])
