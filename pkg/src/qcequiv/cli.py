"""Command-line front end.

``qcequiv <command> --config job.ini [--out path] [--quiet]``

Configs and reports are INI documents. Exit status: 0 ok, 2 config error,
3 infeasible spectrum, 4 numerical failure.
"""
import argparse
import configparser
import csv
import hashlib
import io
import sys
import warnings
from pathlib import Path

import numpy as np

from .cptest import classical_eigenbasis, cp_verdict, gramian_check, hdot, quantum_basis
from .equivalence import build_similarity
from .errors import ConfigError, EpsilonPhaseResidual, QCEquivError
from .kaon import KaonParameters, hamiltonian_from_params
from .network import (
    CircuitParameters,
    analyze_network,
    nonreciprocal_system,
    synthesis_residuals,
    synthesize_from_kaon,
)
from .sim import integrate_linear, integrate_quantum, verify_diagram

CIRCUIT_FIELDS = ("c1", "c2", "l1", "l2", "ga", "gb", "gc", "la", "lb", "lc", "g")
COMMANDS = ("synth", "analyze", "cptest", "simulate", "verify", "sweep")


class Job:
    """Parsed config document plus the directory relative paths resolve against."""

    def __init__(self, parser, base, digest):
        self.cp = parser
        self.base = base
        self.digest = digest

    @classmethod
    def load(cls, path):
        path = Path(path)
        try:
            raw = path.read_bytes()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        cp = configparser.ConfigParser(interpolation=None)
        try:
            cp.read_string(raw.decode("utf-8"))
        except (configparser.Error, UnicodeDecodeError) as exc:
            raise ConfigError(f"unreadable config: {exc}") from None
        return cls(cp, path.parent, hashlib.sha256(raw).hexdigest())

    def copy(self):
        cp = configparser.ConfigParser(interpolation=None)
        cp.read_dict(self.cp)
        return Job(cp, self.base, self.digest)

    def get(self, section, key, default=None, kind=float):
        if not self.cp.has_option(section, key):
            if default is None:
                raise ConfigError(f"missing [{section}] {key}")
            return default
        value = self.cp.get(section, key)
        try:
            return kind(value)
        except ValueError:
            raise ConfigError(f"bad value for [{section}] {key}: {value!r}") from None

    def gauge(self):
        return self.get("gauge", "omega_o", 1.0), self.get("gauge", "capacitance", 1.0)

    def kaon(self):
        if not self.cp.has_section("kaon"):
            raise ConfigError("this command needs a [kaon] section")
        eps = complex(self.get("kaon", "epsilon_re", 0.0), self.get("kaon", "epsilon_im", 0.0))
        try:
            return KaonParameters.from_masses(
                self.get("kaon", "m_s"), self.get("kaon", "m_l"),
                self.get("kaon", "gamma_s"), self.get("kaon", "gamma_l"), eps)
        except ValueError as exc:
            raise ConfigError(f"invalid kaon parameters: {exc}") from None

    def circuit(self):
        if not self.cp.has_section("circuit"):
            raise ConfigError("this command needs a [circuit] section")
        section = dict(self.cp["circuit"])
        if "file" in section:
            path = self.base / section.pop("file")
            try:
                text = path.read_text()
            except OSError as exc:
                raise ConfigError(f"cannot read circuit file: {exc}") from None
            base = {k: repr(getattr(CircuitParameters.from_text(text), k)) for k in CIRCUIT_FIELDS}
            # inline keys override the file
            base.update(section)
            section = base
        return CircuitParameters.from_mapping(section)

    def vector(self, section, key, dtype):
        text = self.get(section, key, kind=str)
        try:
            return np.array([dtype(x.strip().replace(" ", "")) for x in text.split(",")])
        except ValueError:
            raise ConfigError(f"bad vector for [{section}] {key}: {text!r}") from None

    def sim(self):
        dt = self.get("sim", "dt")
        steps = self.get("sim", "steps", kind=int)
        if not (dt > 0 and steps > 0):
            raise ConfigError("dt and steps must be positive")
        return dt, steps


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


class Report:
    """Ordered sections of key/value pairs rendered as INI."""

    def __init__(self, command, job, gauge=None):
        self.sections = {"report": {"command": command, "config_sha256": job.digest}}
        omega_o, cap = job.gauge() if gauge is None else gauge
        self.sections["gauge"] = {"omega_o": omega_o, "capacitance": cap}
        self.table = None

    def add(self, section, **values):
        self.sections.setdefault(section, {}).update(values)

    def flat(self):
        """Scalar results for sweep rows (everything except the header sections)."""
        out = {}
        for name, values in self.sections.items():
            if name in ("report", "gauge"):
                continue
            for k, v in values.items():
                out[f"{name}.{k}"] = v
        return out

    def render(self):
        cp = configparser.ConfigParser(interpolation=None)
        for name, values in self.sections.items():
            cp[name] = {k: _fmt(v) for k, v in values.items()}
        buf = io.StringIO()
        cp.write(buf)
        text = buf.getvalue()
        if self.table is not None:
            text += self.table
        return text


def _kaon_section(p):
    return dict(m_s=p.m_S, m_l=p.m_L, gamma_s=p.gamma_S, gamma_l=p.gamma_L,
                epsilon_re=p.epsilon.real, epsilon_im=p.epsilon.imag)


def cmd_synth(job):
    p = job.kaon()
    omega_o, cap = job.gauge()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", EpsilonPhaseResidual)
        c = synthesize_from_kaon(p, omega_o, cap)
    report = Report("synth", job)
    report.add("circuit", **{k: getattr(c, k) for k in CIRCUIT_FIELDS})
    res = synthesis_residuals(p, c)
    report.add("residuals", **res)
    report.add("residuals", phase_warning=any(issubclass(w.category, EpsilonPhaseResidual)
                                              for w in caught))
    return report


def _circuit_gauge(c):
    """Gauge read off a circuit: tank frequency (NaN if detuned) and C1."""
    w = c.omega_tanks
    return (float(w[0]) if c.is_cpt() else float("nan")), c.c1


def cmd_analyze(job):
    c = job.circuit()
    p, res = analyze_network(c)
    report = Report("analyze", job, _circuit_gauge(c))
    report.add("kaon", **_kaon_section(p))
    report.add("residuals",
               first_order_residual=res["first_order_residual"],
               xi=res["xi"],
               epsilon_abs=abs(p.epsilon),
               epsilon_circuit_re=res["epsilon_circuit"].real,
               epsilon_circuit_im=res["epsilon_circuit"].imag,
               epsilon_first_order_re=res["epsilon_first_order"].real,
               epsilon_first_order_im=res["epsilon_first_order"].imag)
    return report


def cmd_cptest(job):
    c = job.circuit()
    Chat = nonreciprocal_system(c)
    basis = classical_eigenbasis(Chat)
    p, _ = analyze_network(c)
    K = hamiltonian_from_params(p).K
    S = build_similarity(K, Chat)
    U = quantum_basis(S.Q)
    xi_q = abs(hdot(S.Q[:, 0], S.Q[:, 1]))
    report = Report("cptest", job, _circuit_gauge(c))
    report.add("cptest", xi_classical=basis.xi, xi_quantum=xi_q,
               gramian_gap=gramian_check(S, U, basis.W),
               similarity_residual=S.residual, verdict=cp_verdict(basis.xi))
    return report


def cmd_simulate(job):
    dt, steps = job.sim()
    report = Report("simulate", job)
    if job.cp.has_option("sim", "psi0"):
        K = hamiltonian_from_params(job.kaon()).K
        traj = integrate_quantum(K, job.vector("sim", "psi0", complex), dt, steps)
    else:
        v0 = job.vector("sim", "v0", float)
        if v0.size != 2:
            raise ConfigError("v0 needs two node voltages")
        traj = integrate_linear(nonreciprocal_system(job.circuit()),
                                np.concatenate([v0, [0.0, 0.0]]), dt, steps)
    report.add("simulate", kind=traj.kind, dt=dt, steps=steps)
    report.table = traj.to_csv()
    return report


def cmd_verify(job):
    p = job.kaon()
    omega_o, cap = job.gauge()
    dt, steps = job.sim()
    psi0 = job.vector("sim", "psi0", complex) if job.cp.has_option("sim", "psi0") \
        else np.array([1.0, 0.0])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EpsilonPhaseResidual)
        c = synthesize_from_kaon(p, omega_o, cap)
    K = hamiltonian_from_params(p).K
    Chat = nonreciprocal_system(c)
    S = build_similarity(K, Chat)
    report = Report("verify", job)
    report.add("verify", max_deviation=verify_diagram(K, Chat, S, psi0, dt, steps),
               similarity_residual=S.residual,
               det_s_re=complex(np.linalg.det(S.S)).real,
               det_s_im=complex(np.linalg.det(S.S)).imag)
    return report


HANDLERS = {"synth": cmd_synth, "analyze": cmd_analyze, "cptest": cmd_cptest,
            "simulate": cmd_simulate, "verify": cmd_verify}


def sweep_values(job):
    start = job.get("sweep", "start")
    stop = job.get("sweep", "stop")
    count = job.get("sweep", "count", kind=int)
    if count < 1 or (count > 1 and start == stop):
        raise ConfigError("sweep range is empty")
    return np.linspace(start, stop, count)


def run_sweep(job, out, progress):
    """Run the inner command at each grid point; rows are emitted in grid order.

    Returns the exception that stopped the sweep, if any.
    """
    command = job.get("sweep", "command", kind=str)
    if command not in HANDLERS:
        raise ConfigError(f"cannot sweep command {command!r}")
    target = job.get("sweep", "parameter", kind=str)
    if "." not in target:
        raise ConfigError("sweep parameter must be section.key")
    section, key = target.split(".", 1)
    values = sweep_values(job)

    header = None
    writer = csv.writer(out, lineterminator="\n")
    out.write(f"# sweep command={command} parameter={target} config_sha256={job.digest}\n")
    if command in ("synth", "verify"):
        # circuit-driven commands carry their gauge in the circuit itself
        omega_o, cap = job.gauge()
        out.write(f"# gauge omega_o={_fmt(omega_o)} capacitance={_fmt(cap)}\n")
    for i, value in enumerate(values):
        point = job.copy()
        if not point.cp.has_section(section):
            point.cp.add_section(section)
        point.cp.set(section, key, repr(float(value)))
        try:
            row = HANDLERS[command](point).flat()
        except QCEquivError as exc:
            out.write(f"# error index={i} code={exc.code} message={exc}\n")
            return exc
        if header is None:
            header = list(row)
            writer.writerow(["index", target] + header)
        writer.writerow([i, _fmt(float(value))] + [_fmt(row.get(k, "")) for k in header])
        progress(f"sweep point {i + 1}/{len(values)}")
    return None


def build_parser():
    parser = argparse.ArgumentParser(prog="qcequiv", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="INI job description")
    parser.add_argument("--out", help="write the report here instead of stdout")
    parser.add_argument("--quiet", action="store_true", help="suppress progress messages")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    progress = (lambda msg: None) if args.quiet else (lambda msg: print(msg, file=sys.stderr))
    buf = io.StringIO()
    status = 0
    try:
        job = Job.load(args.config)
        if args.command == "sweep":
            err = run_sweep(job, buf, progress)
            if err is not None:
                print(f"error: {err.code}: {err}", file=sys.stderr)
                status = err.exit_status
        else:
            buf.write(HANDLERS[args.command](job).render())
    except QCEquivError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return exc.exit_status
    except FloatingPointError as exc:
        print(f"error: numerical_failure: {exc}", file=sys.stderr)
        return 4

    text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
