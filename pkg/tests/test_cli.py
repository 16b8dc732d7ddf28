import configparser
import csv
import io

import numpy as np
import pytest

from qcequiv.cli import main

KAON = """[kaon]
m_s = 5.29
m_l = 5.0
gamma_s = 1.0
gamma_l = 0.002
epsilon_re = {re!r}
epsilon_im = {im!r}

[gauge]
omega_o = 4.0
capacitance = 1.0

[sim]
dt = 0.001
steps = 500
psi0 = 1, 0
"""


def kaon_job(tmp_path, eps=0.0, name="kaon.ini"):
    path = tmp_path / name
    z = eps * np.exp(1j * np.pi / 4)
    path.write_text(KAON.format(re=float(z.real), im=float(z.imag)))
    return path


def run(*argv):
    return main([str(a) for a in argv] + ["--quiet"])


def read_report(path):
    cp = configparser.ConfigParser(interpolation=None)
    cp.read(path)
    return cp


def circuit_job(tmp_path, circuit_file, extra=""):
    path = tmp_path / "circuit_job.ini"
    path.write_text(f"[circuit]\nfile = {circuit_file.name}\n{extra}")
    return path


def synthesize(tmp_path, eps):
    out = tmp_path / f"circuit_{eps}.ini"
    assert run("synth", "--config", kaon_job(tmp_path, eps), "--out", out) == 0
    return out


def test_reciprocal_pipeline_conserves_cp(tmp_path):
    circuit = synthesize(tmp_path, 0.0)
    assert read_report(circuit).getfloat("circuit", "g") == 0.0
    out = tmp_path / "cp.ini"
    assert run("cptest", "--config", circuit_job(tmp_path, circuit), "--out", out) == 0
    rep = read_report(out)
    assert rep.get("cptest", "verdict") == "CP conserved"
    assert rep.getfloat("cptest", "xi_classical") < 1e-10


def test_violating_pipeline_recovers_epsilon(tmp_path):
    circuit = synthesize(tmp_path, 1e-3)
    out = tmp_path / "an.ini"
    assert run("analyze", "--config", circuit_job(tmp_path, circuit), "--out", out) == 0
    rep = read_report(out)
    eps = abs(complex(rep.getfloat("kaon", "epsilon_re"), rep.getfloat("kaon", "epsilon_im")))
    assert abs(eps - 1e-3) <= 0.05e-3
    assert rep.getfloat("kaon", "gamma_s") == pytest.approx(1.0, rel=1e-9)
    cp_out = tmp_path / "cp.ini"
    assert run("cptest", "--config", circuit_job(tmp_path, circuit), "--out", cp_out) == 0
    rep = read_report(cp_out)
    assert rep.get("cptest", "verdict") == "CP violated"
    assert rep.getfloat("cptest", "gramian_gap") <= 1e-8


def sweep_rows(path):
    lines = path.read_text().splitlines()
    comments = [l for l in lines if l.startswith("#")]
    rows = list(csv.DictReader(io.StringIO("\n".join(l for l in lines if not l.startswith("#")))))
    return comments, rows


def test_sweep_is_linear_in_g(tmp_path):
    circuit = synthesize(tmp_path, 0.0)
    job = circuit_job(tmp_path, circuit, "[sweep]\ncommand = cptest\nparameter = circuit.g\n"
                                         "start = 0\nstop = 1e-3\ncount = 11\n")
    out = tmp_path / "sweep.csv"
    assert run("sweep", "--config", job, "--out", out) == 0
    comments, rows = sweep_rows(out)
    assert comments[0].startswith("# sweep command=cptest parameter=circuit.g")
    assert [int(r["index"]) for r in rows] == list(range(11))
    g = np.array([float(r["circuit.g"]) for r in rows])
    xi = np.array([float(r["cptest.xi_classical"]) for r in rows])
    assert np.all(np.diff(xi) > 0)
    slope = np.dot(g, xi) / np.dot(g, g)
    assert np.abs(xi - slope * g).max() <= 0.01 * xi.max()


def test_reports_are_deterministic(tmp_path):
    job = kaon_job(tmp_path, 1e-3)
    outs = [tmp_path / f"r{k}.ini" for k in range(2)]
    for out in outs:
        assert run("synth", "--config", job, "--out", out) == 0
    assert outs[0].read_bytes() == outs[1].read_bytes()


def test_report_header_carries_config_hash(tmp_path):
    import hashlib

    job = kaon_job(tmp_path, 1e-3)
    out = tmp_path / "v.ini"
    assert run("verify", "--config", job, "--out", out) == 0
    rep = read_report(out)
    assert rep.get("report", "config_sha256") == hashlib.sha256(job.read_bytes()).hexdigest()
    assert rep.getfloat("verify", "max_deviation") <= 1e-6
    assert rep.getfloat("verify", "det_s_re") == pytest.approx(1.0, abs=1e-9)


def test_simulate_exports_table(tmp_path):
    out = tmp_path / "sim.txt"
    assert run("simulate", "--config", kaon_job(tmp_path), "--out", out) == 0
    text = out.read_text()
    table = text[text.index("t,re_psi1"):].splitlines()
    assert len(table) == 502
    assert table[1].split(",")[:2] == ["0.0", "1.0"]


def test_exit_codes(tmp_path):
    missing = tmp_path / "missing.ini"
    assert run("synth", "--config", missing) == 2
    bad = tmp_path / "bad.ini"
    bad.write_text("[kaon]\nm_s = 1\n")
    assert run("synth", "--config", bad) == 2
    # the tank frequency sits above both modes
    high = tmp_path / "high.ini"
    high.write_text(kaon_job(tmp_path).read_text().replace("omega_o = 4.0", "omega_o = 6.0"))
    assert run("synth", "--config", high) == 3
    with pytest.raises(SystemExit):
        main(["bogus", "--config", str(bad)])


def test_error_code_is_machine_readable(tmp_path, capsys):
    bad = tmp_path / "bad.ini"
    bad.write_text("[kaon]\nm_s = one\n")
    assert main(["synth", "--config", str(bad)]) == 2
    assert capsys.readouterr().err.startswith("error: ")


def test_partial_sweep_keeps_rows(tmp_path):
    circuit = synthesize(tmp_path, 0.0)
    job = circuit_job(tmp_path, circuit, "[sweep]\ncommand = analyze\nparameter = circuit.ga\n"
                                         "start = 0.004\nstop = 40\ncount = 4\n")
    out = tmp_path / "sweep.csv"
    status = run("sweep", "--config", job, "--out", out)
    assert status in (3, 4)
    comments, rows = sweep_rows(out)
    assert len(rows) >= 1
    assert comments[-1].startswith("# error index=")
    assert int(comments[-1].split("index=")[1].split()[0]) == len(rows)
