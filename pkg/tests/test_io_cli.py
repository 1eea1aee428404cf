import io
import json
import math

import numpy as np
import pytest

from opentropy.channel import KrausChannel
from opentropy.cli import main
from opentropy.errors import DimensionMismatch, NotTracePreserving
from opentropy.families import named_channel
from opentropy.io import (
    ChannelFileError,
    channel_from_dict,
    channel_to_dict,
    log_divisor,
    read_channel,
    write_channel,
)
from opentropy.linalg import RngStream
from opentropy.sampling import haar_block_channel

LN2 = math.log(2)


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def csv_rows(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return lines[0].split(","), [l.split(",") for l in lines[1:]]


@pytest.fixture
def channel_file(tmp_path):
    def make(ch, name="ch.json"):
        path = tmp_path / name
        with open(path, "w") as fh:
            write_channel(ch, fh)
        return str(path)
    return make


def test_round_trip(channel_file):
    ch = haar_block_channel(3, 2, RngStream(0))
    back = read_channel(channel_file(ch))
    assert back == ch
    assert channel_from_dict(channel_to_dict(named_channel("emission", 2))).label == "emission2"


def test_rejections(tmp_path):
    good = channel_to_dict(KrausChannel(np.eye(2)))
    with pytest.raises(ChannelFileError):
        channel_from_dict({**good, "schema": 2})
    with pytest.raises(ChannelFileError):
        channel_from_dict({k: v for k, v in good.items() if k != "kraus"})
    with pytest.raises(DimensionMismatch):
        channel_from_dict({**good, "dim_in": 3})
    with pytest.raises(NotTracePreserving):
        channel_from_dict(channel_to_dict(KrausChannel(0.5 * np.eye(2))))
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ChannelFileError):
        read_channel(str(path))
    with pytest.raises(ChannelFileError):
        read_channel(str(tmp_path / "missing.json"))


def test_log_divisor():
    assert log_divisor("e") == 1.0 and log_divisor("2") == LN2
    with pytest.raises(ValueError):
        log_divisor("10")


def test_sample_command():
    code, out, _ = run("sample", "--n", "2", "--env", "2", "--method", "stratified",
                       "--samples", "1000", "--seed", "7")
    assert code == 0
    header, rows = csv_rows(out)
    assert header == ["index", "S", "Stilde", "tag"]
    assert len(rows) == 1000
    assert [int(r[0]) for r in rows] == list(range(1000))
    assert all(r[3] == "stratified" for r in rows)
    assert run("sample", "--n", "2", "--env", "2", "--method", "stratified",
               "--samples", "1000", "--seed", "7")[1] == out


def test_sample_base_two():
    _, nats, _ = run("sample", "--n", "3", "--env", "3", "--samples", "200", "--seed", "1")
    _, bits, _ = run("sample", "--n", "3", "--env", "3", "--samples", "200", "--seed", "1",
                     "--log-base", "2")
    rows_e, rows_2 = csv_rows(nats)[1], csv_rows(bits)[1]
    for a, b in zip(rows_e, rows_2):
        assert float(b[1]) == float(a[1]) / LN2
        assert float(b[1]) <= 2 * math.log2(3) + 1e-9
        assert float(b[1]) <= math.log2(3) + 1e-9


def test_boundary_command():
    code, out, _ = run("boundary", "--n", "2")
    assert code == 0
    _, rows = csv_rows(out)
    assert len(rows) == 512
    assert (float(rows[0][1]), float(rows[0][2])) == (0.0, pytest.approx(LN2, abs=1e-15))
    _, rows = csv_rows(run("boundary", "--n", "3")[1])
    phi4 = math.log(27 / 4) / 3
    assert any(abs(float(r[1]) - phi4) < 1e-12 and abs(float(r[2]) - phi4) < 1e-12 for r in rows)
    assert {r[3] for r in rows} == {"main", "main_mirror"}
    _, rows = csv_rows(run("boundary", "--n", "4")[1])
    second = [r for r in rows if r[3] == "second"]
    assert (float(second[0][1]), float(second[0][2])) == pytest.approx((LN2, LN2), abs=1e-12)
    code, out, err = run("boundary", "--n", "5")
    assert code == 2 and out == "" and len(err.strip().splitlines()) == 1


def test_verify_command(channel_file):
    code, out, _ = run("verify", "--n", "2", "--env", "2", "--samples", "10000", "--seed", "1")
    report = json.loads(out)
    assert code == 0 and report["violations"] == 0
    assert report["min_sum"] >= 0.693146
    assert report["bound"] == LN2 and report["samples"] == 10000
    assert report["prop1_max_gap"] < 1e-9
    code, out, _ = run("verify", "--channel", channel_file(named_channel("identity", 2)))
    report = json.loads(out)
    assert code == 0 and report["min_sum"] == pytest.approx(LN2, abs=1e-12)
    code, out, _ = run("verify", "--n", "4", "--samples", "100")
    sat = json.loads(out)["saturation"]
    assert [(r["n_a"], r["n_b"]) for r in sat] == [(2, 2)]
    assert abs(sat[0]["sum"] - math.log(4)) < 1e-9


def test_evolve_command(channel_file):
    code, out, _ = run("evolve", "--n", "3", "--hamiltonians", "2", "--t-max", "0.05", "--dt", "0.01")
    assert code == 0
    header, rows = csv_rows(out)
    assert header == ["hamiltonian", "start", "t", "S", "Stilde"]
    starts = len({r[1] for r in rows})
    assert len(rows) == 2 * starts * 6
    summary = out.strip().splitlines()[-1]
    assert summary.startswith("# max_violation=")
    assert float(summary.split()[1].split("=")[1]) <= 1e-6

    _, out, _ = run("evolve", "--n", "3", "--hamiltonians", "1", "--t-max", "0", "--dt", "1")
    _, rows = csv_rows(out)
    assert {r[2] for r in rows} == {"0.0"}

    path = channel_file(named_channel("phi4", 3))
    code, out, _ = run("evolve", "--start", path, "--hamiltonians", "1", "--t-max", "1", "--dt", "0.001")
    _, rows = csv_rows(out)
    assert code == 0 and len(rows) == 1001
    code, _, err = run("evolve", "--dt", "0")
    assert code == 2 and err.count("\n") == 1


def test_channel_command(channel_file, tmp_path):
    code, out, _ = run("channel", "--named", "coarse_graining", "--n", "2")
    r = json.loads(out)
    assert code == 0
    assert r["S"] == pytest.approx(LN2, abs=1e-9) and r["Stilde"] == pytest.approx(LN2, abs=1e-9)
    r = json.loads(run("channel", "--L", "100;10;1")[1])
    assert r["S"] == pytest.approx(math.log(3), abs=1e-9) and abs(r["Stilde"]) < 1e-9
    assert r["coherent_information"] == pytest.approx(-math.log(3), abs=1e-9)
    assert len(r["choi_spectrum"]) == 9 and r["validity_residual"] == 0.0

    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2")
    code, out, err = run("channel", "--channel", str(bad))
    assert code == 2 and out == "" and len(err.strip().splitlines()) == 1
    code, _, err = run("channel", "--channel", channel_file(KrausChannel(0.5 * np.eye(2)), "half.json"))
    assert code == 2 and "7.500e-01" in err
    code, _, _ = run("channel", "--L", "10;0")
    assert code == 2
    code, _, _ = run("channel")
    assert code == 2


def test_usage_errors_exit_two():
    for argv in (["sample"], ["sample", "--n", "x"], ["sample", "--n", "2", "--method", "mcmc"],
                 ["frobnicate"], []):
        code, out, err = run(*argv)
        assert code == 2 and out == ""
        assert len(err.strip().splitlines()) == 1
