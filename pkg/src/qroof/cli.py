"""``qroof`` command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 invariant violation (invalid state, channel outside its domain, or two
computation routes disagreeing).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional

import numpy as np

from .channels import AmplitudeDamping, Canonical, PhaseDamping, channel_kind, holevo_chi
from .concurrence import concurrence, concurrence_via_theta
from .entanglement import (
    capacity_amplitude_damping,
    capacity_numeric,
    entanglement_E,
    entropy_H,
)
from .foliation import (
    FoliationError,
    foliation_forms,
    leaf_through,
    optimal_decomposition,
    zero_concurrence_states,
)
from .qubit import DensityOperator, DomainError, InvalidStateError, h2
from .roof import MIN_BUDGET
from .specfiles import SpecParseError, dump_channel, dump_state, parse_channel, parse_ensemble, parse_state
from .verify import format_report, run_suite

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2, 3
# named closed forms and the theta route must agree this closely
ROUTE_TOL = 1e-10


class InvariantError(RuntimeError):
    pass


class UsageError(ValueError):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise SpecParseError(f"cannot read {path}: {exc.strerror}") from exc


def _channel(args):
    return parse_channel(_read(args.channel))


def _state(args) -> DensityOperator:
    return parse_state(_read(args.state))


def _unit(args) -> tuple:
    return ("bits", 2) if args.bits else ("nats", None)


def _route_check(doc: dict, key: str, theta_value: float) -> dict:
    gap = abs(doc[key] - theta_value)
    doc["theta_path"] = theta_value
    doc["route_gap"] = gap
    if gap > ROUTE_TOL:
        raise InvariantError(f"{key}: closed form and theta path differ by {gap:.3e}")
    return doc


def _concurrence_doc(channel, rho) -> dict:
    value, method = concurrence(channel, rho)
    doc = {"quantity": "concurrence", "concurrence": value, "unit": "dimensionless",
           "channel_kind": channel_kind(channel), "method": method}
    if method != "theta":
        _route_check(doc, "concurrence", concurrence_via_theta(channel, rho))
    return doc


def _entanglement_doc(channel, rho, unit, base) -> dict:
    _, method = concurrence(channel, rho)
    doc = {"quantity": "entanglement", "E": entanglement_E(channel, rho, base), "unit": unit,
           "channel_kind": channel_kind(channel), "method": method}
    if method != "theta":
        c = concurrence_via_theta(channel, rho)
        _route_check(doc, "E", float(h2(min(c, 1.0))) / (math.log(base) if base else 1.0))
    return doc


def _entropy_doc(channel, rho, unit, base) -> dict:
    doc = _entanglement_doc(channel, rho, unit, base)
    e = doc["E"]
    h = entropy_H(channel, rho, base)
    out = {"quantity": "entropy", "H": h, "unit": unit, "channel_kind": doc["channel_kind"],
           "method": doc["method"], "output_entropy": h + e, "E": e}
    if "theta_path" in doc:
        out["theta_path_E"] = doc["theta_path"]
    return out


def _capacity_doc(channel, unit, base) -> dict:
    scale = 1.0 / math.log(base) if base else 1.0
    key = f"capacity_{unit}"
    if isinstance(channel, AmplitudeDamping):
        exact = capacity_amplitude_damping(channel.p)
        search = capacity_numeric(channel)
        doc = {"quantity": "capacity", key: exact.capacity * scale, "r0": exact.maximizer_r,
               "unit": unit, "channel_kind": channel_kind(channel), "method": "named-closed-form",
               "search_value": search.capacity * scale}
        return doc
    res = capacity_numeric(channel)
    return {"quantity": "capacity", key: res.capacity * scale, "r0": res.maximizer_r,
            "maximizer_bloch": [float(x) for x in res.maximizer_state.bloch],
            "unit": unit, "channel_kind": channel_kind(channel), "method": "theta",
            "converged": res.converged}


def _form_doc(form) -> dict:
    return {"c0": form.c0, "coeffs": [float(c) for c in form.coeffs]}


def _foliation_doc(channel, rho) -> dict:
    leaf = leaf_through(channel, rho)
    value, method = concurrence(channel, rho)
    l1, l2 = foliation_forms(channel)
    doc = {"quantity": "foliation", "channel_kind": channel_kind(channel), "method": method,
           "concurrence": value, "leaf_kind": leaf.kind,
           "directions": [[float(x) for x in d] for d in leaf.directions],
           "forms": {"L1": _form_doc(l1), "L2": _form_doc(l2)},
           "zero_concurrence_states": [[float(x) for x in s.bloch] for s in zero_concurrence_states(channel)]}
    if leaf.kind == "plane-disc":
        doc["normal"] = [float(x) for x in leaf.normal]
        doc["radius"] = leaf.radius
    dec = optimal_decomposition(channel, rho)
    doc["decomposition"] = [{"weight": w, "bloch": [float(x) for x in s.bloch]} for w, s in dec.members]
    return doc


def cmd_compute(args) -> dict:
    unit, base = _unit(args)
    if args.command == "chi":
        ensemble = parse_ensemble(_read(args.ensemble))
        channel = _channel(args) if args.channel else None
        doc = {"quantity": "chi", "chi": holevo_chi(ensemble, channel, base), "unit": unit,
               "channel_kind": channel_kind(channel) if channel is not None else "identity",
               "method": "spectrum"}
        if channel is not None:
            doc["chi_input"] = holevo_chi(ensemble, None, base)
        return doc
    channel = _channel(args)
    if args.command == "capacity":
        return _capacity_doc(channel, unit, base)
    rho = _state(args)
    if args.command == "concurrence":
        return _concurrence_doc(channel, rho)
    if args.command == "entanglement":
        return _entanglement_doc(channel, rho, unit, base)
    if args.command == "entropy":
        return _entropy_doc(channel, rho, unit, base)
    return _foliation_doc(channel, rho)


STATE_PARAMS = ("x1", "x2", "x3")
CHANNEL_PARAMS = {"amplitude_damping": ("p",), "phase_damping": ("z", "z_re", "z_im")}


def _sweep_point(channel, rho: Optional[DensityOperator], name: str, value: float):
    if name in STATE_PARAMS:
        b = np.zeros(3) if rho is None else rho.bloch.copy()
        b[STATE_PARAMS.index(name)] = value
        return channel, DensityOperator.from_bloch(b)
    if name == "p":
        return AmplitudeDamping(value), rho
    if name in ("z", "z_re"):
        return PhaseDamping(complex(value, channel.z.imag)), rho
    return PhaseDamping(complex(channel.z.real, value)), rho


def _sweep_columns(quantity: str, unit: str) -> List[str]:
    return {"concurrence": ["concurrence"], "entanglement": [f"E_{unit}"],
            "entropy": [f"H_{unit}"], "capacity": [f"capacity_{unit}", "r0"]}[quantity]


def _sweep_row(quantity, channel, rho, base) -> List[float]:
    if quantity == "concurrence":
        return [concurrence(channel, rho)[0]]
    if quantity == "entanglement":
        return [entanglement_E(channel, rho, base)]
    if quantity == "entropy":
        return [entropy_H(channel, rho, base)]
    if isinstance(channel, AmplitudeDamping):
        res = capacity_amplitude_damping(channel.p)
    else:
        res = capacity_numeric(channel)
    return [res.capacity / (math.log(base) if base else 1.0), res.maximizer_r]


def cmd_sweep(args) -> str:
    unit, base = _unit(args)
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    channel = _channel(args)
    kind = channel_kind(channel)
    name = args.param
    if name in STATE_PARAMS:
        if args.quantity == "capacity":
            raise UsageError("capacity does not depend on a state parameter")
    elif name not in CHANNEL_PARAMS.get(kind, ()):
        raise UsageError(f"parameter {name!r} does not apply to {kind} channels")
    rho = _state(args) if args.state else None
    if rho is None and args.quantity != "capacity" and name not in STATE_PARAMS:
        raise UsageError(f"{args.quantity} sweeps need --state")

    grid = np.linspace(args.start, args.stop, args.steps)

    def row(value: float) -> List[float]:
        ch, st = _sweep_point(channel, rho, name, float(value))
        return [float(value)] + _sweep_row(args.quantity, ch, st, base)

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(row, grid))
    else:
        rows = [row(v) for v in grid]

    lines = []
    writer = csv.writer(_Lines(lines), lineterminator="\n")
    writer.writerow([name] + _sweep_columns(args.quantity, unit))
    for r in rows:
        writer.writerow(["%.17g" % x for x in r])
    return "".join(lines)


class _Lines:
    def __init__(self, sink: list):
        self.sink = sink

    def write(self, s: str):
        self.sink.append(s)


def cmd_make_channel(args) -> dict:
    def cplx(pair):
        if pair is None:
            raise UsageError(f"{args.kind} needs all of its parameters")
        return complex(pair[0], pair[1])

    if args.kind == "amplitude_damping":
        if args.p is None:
            raise UsageError("amplitude_damping needs --p")
        spec = AmplitudeDamping(args.p)
    elif args.kind == "phase_damping":
        spec = PhaseDamping(cplx(args.z))
    else:
        spec = Canonical(cplx(args.a00), cplx(args.a11), cplx(args.b01), cplx(args.b10))
    return dump_channel(spec)


def cmd_make_state(args) -> dict:
    return dump_state(DensityOperator.from_bloch(args.bloch), form="bloch")


def _write(text: str, output: Optional[str]):
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(output, "w", newline="\n") as fh:
            fh.write(text)


def _document(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qroof",
        description="Concurrence, entanglement and capacity of length-two qubit channels.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, state=True, channel_required=True):
        p.add_argument("--channel", required=channel_required, help="channel spec JSON file")
        if state:
            p.add_argument("--state", required=True, help="state spec JSON file")
        p.add_argument("--bits", action="store_true", help="report entropies in bits (default nats)")

    common(sub.add_parser("concurrence", help="concurrence C(T; rho)"))
    common(sub.add_parser("entanglement", help="E(T; rho) = h2(C)"))
    common(sub.add_parser("entropy", help="H(T; rho) = S(T(rho)) - E(T; rho)"))
    chi = sub.add_parser("chi", help="Holevo quantity of an ensemble, optionally after a channel")
    common(chi, state=False, channel_required=False)
    chi.add_argument("--ensemble", required=True, help="ensemble spec JSON file")
    common(sub.add_parser("capacity", help="1-shot capacity"), state=False)
    common(sub.add_parser("foliation", help="leaf and optimal decomposition through a state"))

    sweep = sub.add_parser("sweep", help="tabulate a quantity over a parameter grid (CSV)")
    sweep.add_argument("quantity", choices=["concurrence", "entanglement", "entropy", "capacity"])
    sweep.add_argument("--channel", required=True, help="channel template spec JSON file")
    sweep.add_argument("--state", help="state spec JSON file (base point for x1/x2/x3 sweeps)")
    sweep.add_argument("--param", required=True, choices=["p", "z", "z_re", "z_im", *STATE_PARAMS])
    sweep.add_argument("--from", dest="start", type=float, required=True)
    sweep.add_argument("--to", dest="stop", type=float, required=True)
    sweep.add_argument("--steps", type=int, required=True)
    sweep.add_argument("--output", default="-", help="CSV path, '-' for stdout")
    sweep.add_argument("--jobs", type=int, default=1, help="worker threads (row order is kept)")
    sweep.add_argument("--bits", action="store_true")

    verify = sub.add_parser("verify", help="run the seeded property suite")
    verify.add_argument("--seed", type=int, default=42)
    verify.add_argument("--cases", type=int, default=50)
    verify.add_argument("--budget", type=int, default=20_000)

    mk = sub.add_parser("make-channel", help="write a channel spec file")
    mk.add_argument("kind", choices=["amplitude_damping", "phase_damping", "canonical"])
    mk.add_argument("--p", type=float)
    for name in ("z", "a00", "a11", "b01", "b10"):
        mk.add_argument(f"--{name}", type=float, nargs=2, metavar=("RE", "IM"))
    mk.add_argument("--output", default="-")

    ms = sub.add_parser("make-state", help="write a state spec file")
    ms.add_argument("--bloch", type=float, nargs=3, required=True, metavar=("X1", "X2", "X3"))
    ms.add_argument("--output", default="-")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            if args.cases < 1:
                raise UsageError("--cases must be at least 1")
            if args.budget < MIN_BUDGET:
                raise UsageError(f"--budget must be at least {MIN_BUDGET}")
            reports = run_suite(args.seed, args.cases, args.budget)
            sys.stdout.write(format_report(reports, args.seed, args.cases, args.budget))
            return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED
        if args.command == "sweep":
            _write(cmd_sweep(args), args.output)
        elif args.command == "make-channel":
            _write(_document(cmd_make_channel(args)), args.output)
        elif args.command == "make-state":
            _write(_document(cmd_make_state(args)), args.output)
        else:
            _write(_document(cmd_compute(args)), None)
        return EXIT_OK
    except (SpecParseError, UsageError) as exc:
        print(f"qroof: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, InvalidStateError, FoliationError, InvariantError) as exc:
        print(f"qroof: invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
