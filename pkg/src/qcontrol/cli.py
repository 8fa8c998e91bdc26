"""Command-line entry point: ``qcontrol verify | nogo {residual,search} | phase-demo``.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from itertools import permutations
from pathlib import Path

import numpy as np

from . import __version__
from .circuit import BlackboxGate, CircuitSandwich, control_u, known_unitary_sandwich
from .constructions import (
    PermutationGate,
    blackbox_stage_matrix,
    classical_control,
    classical_control_circuit,
    extend,
    interferometer_apply,
    interferometer_operator,
    kitaev_induced,
    map_overlap,
    no_cloning_witness,
)
from .linalg import basis_state, random_state, random_unitary, standard_gates
from .nogo import (
    ancilla_ladder,
    control_phase_distinguishability,
    feasible_starts,
    gate_preset,
    grid_process_fidelity,
    minimize_obstruction,
    obstruction_landscape,
    phase_covariance_check,
    phase_opt_process_fidelity,
)
from .optimize import MinimizerConfig, restart_rng

SCHEMA_PATH = Path(__file__).with_name("report_schema.json")


def default_seed() -> int:
    return int(os.environ.get("QCONTROL_SEED", "42"))


def _num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    return obj


def check(name: str, value: float, threshold: float | None, passed: bool) -> dict:
    return {"name": name, "value": _num(value), "threshold": _num(threshold), "pass": bool(passed)}


def at_most(name, value, threshold):
    return check(name, value, threshold, value <= threshold)


# ---------------------------------------------------------------------------
# verify


def verify_checks(d: int, seed: int, tol: float | None = None) -> list[dict]:
    """Construction and phase checks at target dimension ``d``.

    ``tol`` replaces every residual threshold; exact and witness checks keep
    their own thresholds.
    """
    t = lambda default: default if tol is None else tol
    rng = np.random.default_rng(seed)
    out = []

    leak, err, stage = 0.0, 0.0, 0.0
    for _ in range(50):
        u = random_unitary(d, rng)
        ab = random_state(2, rng)
        psi = random_state(d, rng)
        got = interferometer_apply(u, ab[0], ab[1], psi)
        want = np.kron([ab[0], 0], psi) + np.kron([0, ab[1]], u @ psi)
        err = max(err, float(np.abs(got - want).max()))
        op, lk = interferometer_operator(u)
        leak = max(leak, lk)
        err = max(err, float(np.abs(op - control_u(u)).max()))
        stage = max(stage, float(np.abs(blackbox_stage_matrix(u) - control_u(u)).max()))
    out.append(at_most("interferometer_equivalence", err, t(1e-12)))
    out.append(at_most("interferometer_path_leak", leak, t(1e-12)))
    out.append(at_most("blackbox_stage_equals_control_u", stage, t(1e-12)))

    defect, leak = 0.0, 0.0
    for _ in range(20):
        v = extend(random_unitary(d, rng), 1)
        gate = BlackboxGate(v, (basis_state(d + 1, 0), 1.0))
        induced, lk = kitaev_induced(gate)
        defect = max(defect, 1.0 - map_overlap(control_u(v), induced))
        leak = max(leak, lk)
    for _ in range(20):
        u = random_unitary(d, rng)
        w, vecs = np.linalg.eig(u)
        gate = BlackboxGate(u, (vecs[:, 0] / np.linalg.norm(vecs[:, 0]), w[0] / abs(w[0])))
        induced, lk = kitaev_induced(gate)
        defect = max(defect, 1.0 - map_overlap(control_u(u), induced))
        leak = max(leak, lk)
    out.append(at_most("eigenstate_control_map_defect", defect, t(1e-10)))
    out.append(at_most("eigenstate_control_aux_leak", leak, t(1e-10)))

    mismatches = 0
    perms = list(permutations(range(d)))
    if len(perms) > 720:
        idx = rng.choice(len(perms), size=720, replace=False)
        perms = [perms[i] for i in sorted(idx)]
    for perm in perms:
        g = PermutationGate.from_perm(perm)
        circuit = classical_control_circuit(g)
        for c in (0, 1):
            for x in range(d):
                o, garbage = classical_control(g, c, x)
                mismatches += o != (x if c == 0 else g(x)) or garbage != g(x)
                col = circuit[:, (c * d + x) * d]
                mismatches += abs(col[(c * d + garbage) * d + o] - 1) > 0
    out.append(check("classical_control_mismatches", mismatches, 0, mismatches == 0))
    witness = no_cloning_witness(2)
    out.append(check("no_cloning_witness_overlap", witness, 0.95, witness < 0.95))

    cov = 0.0
    for _ in range(20):
        n = 2 * 2 * d
        s = CircuitSandwich(2, d, random_unitary(n, rng), random_unitary(n, rng))
        u = random_unitary(d, rng)
        for phi in (0.1, 1.0, np.pi, 5.0):
            cov = max(cov, phase_covariance_check(s, u, phi))
    out.append(at_most("sandwich_phase_covariance", cov, t(1e-12)))

    dist = 0.0
    for _ in range(5):
        u = random_unitary(d, rng)
        for phi in np.linspace(0, 2 * np.pi, 32):
            dist = max(dist, abs(control_phase_distinguishability(u, phi) - abs(np.sin(phi / 2))))
    out.append(at_most("control_phase_distinguishability", dist, t(1e-10)))

    u0 = random_unitary(d, rng)
    f_known = phase_opt_process_fidelity(known_unitary_sandwich(u0), u0)
    out.append(at_most("fidelity_known_unitary_defect", 1.0 - f_known, t(1e-10)))
    if d == 2:
        x = standard_gates()["X"]
        s = CircuitSandwich.identity(1, 2)
        f = phase_opt_process_fidelity(s, x)
        fg = grid_process_fidelity(s, x)
        out.append(at_most("fidelity_unconditional_x_error", abs(f - 0.25), t(1e-9)))
        out.append(at_most("fidelity_closed_form_vs_grid", abs(f - fg), t(1e-9)))
    return out


def cmd_verify(args) -> tuple[dict, int]:
    if args.target_dim < 1:
        raise _Usage("--target-dim must be >= 1")
    results = verify_checks(args.target_dim, args.seed, args.tolerance)
    config = {"target_dim": args.target_dim, "tolerance": args.tolerance}
    return _report("verify", args.seed, config, results), 0 if all(r["pass"] for r in results) else 1


# ---------------------------------------------------------------------------
# nogo


def _cfg(args) -> MinimizerConfig:
    if args.restarts < 1 or args.max_iters < 1:
        raise _Usage("--restarts and --max-iters must be >= 1")
    return MinimizerConfig(restarts=args.restarts, max_iters=args.max_iters, seed=args.seed, workers=args.workers)


def _search_dict(report) -> dict:
    out = report.to_dict()
    out.pop("wall_time")
    return out


def cmd_nogo_residual(args) -> tuple[dict, int]:
    if args.ancilla_dim < 1:
        raise _Usage("--ancilla-dim must be >= 1")
    if not 0 < args.cap <= 1:
        raise _Usage("--cap must lie in (0, 1]")
    cfg = _cfg(args)
    report = minimize_obstruction(args.ancilla_dim, cfg, projected=args.projected, cap=args.cap)
    # A positive gap is only guaranteed when the overlaps are capped below 1.
    threshold = 0.05 if args.projected and args.cap <= 0.9 else None
    passed = threshold is None or report.best_value >= threshold
    results = [check("min_obstruction_residual", report.best_value, threshold, passed)]
    if args.csv:
        rows = obstruction_landscape(report.best_params, args.ancilla_dim, args.projected, args.cap)
        _write_csv(args.csv, ["param_index", "sweep_value", "residual"], rows)
    config = {
        "ancilla_dim": args.ancilla_dim,
        "projected": args.projected,
        "cap": args.cap,
        "restarts": args.restarts,
        "max_iters": args.max_iters,
    }
    payload = _report("nogo residual", args.seed, config, results)
    payload["report"] = _search_dict(report)
    return payload, 0 if passed else 1


def cmd_nogo_search(args) -> tuple[dict, int]:
    if args.ancilla_dim < 1 or args.target_dim < 1:
        raise _Usage("dimensions must be >= 1")
    try:
        gates = gate_preset(args.gates, args.target_dim, args.seed)
    except ValueError as exc:
        raise _Usage(str(exc)) from exc
    cfg = _cfg(args)
    reports = ancilla_ladder(gates, range(1, args.ancilla_dim + 1), args.target_dim, cfg, fixed_phase=args.fixed_phase)
    results = []
    for a, rep in enumerate(reports, start=1):
        threshold = None
        if len(gates) == 1:
            threshold = 1 - 1e-6
        elif a >= args.target_dim and any(name == "eigenstate" for name, _ in feasible_starts(gates, a, args.target_dim)):
            threshold = 1 - 1e-4
        fid = 1.0 - rep.best_value
        results.append(check(f"worst_case_fidelity_a{a}", fid, threshold, threshold is None or fid >= threshold))
        for label, f in rep.per_gate:
            results.append(check(f"fidelity_a{a}_{label}", f, None, True))
    config = {
        "gates": args.gates,
        "ancilla_dim": args.ancilla_dim,
        "target_dim": args.target_dim,
        "restarts": args.restarts,
        "max_iters": args.max_iters,
        "fixed_phase": args.fixed_phase,
    }
    payload = _report("nogo search", args.seed, config, results)
    payload["report"] = _search_dict(reports[-1])
    return payload, 0 if all(r["pass"] for r in results) else 1


# ---------------------------------------------------------------------------
# phase demo


def phase_demo_rows(phis, seed: int) -> list[tuple[float, float, float, float]]:
    """Rows ``(phi, lhs_covariance_residual, rhs_trace_distance, sin_half_phi)``."""
    rng = restart_rng(seed, 0)
    d = 2
    n = 2 * 2 * d
    s = CircuitSandwich(2, d, random_unitary(n, rng), random_unitary(n, rng))
    u = random_unitary(d, rng)
    return [
        (float(phi), phase_covariance_check(s, u, phi), control_phase_distinguishability(u, phi), abs(np.sin(phi / 2)))
        for phi in phis
    ]


def cmd_phase_demo(args) -> tuple[str, int]:
    if args.phi:
        phis = args.phi
    else:
        if args.grid_points < 1:
            raise _Usage("--grid-points must be >= 1")
        phis = list(np.linspace(0.0, 2 * np.pi, args.grid_points))
    rows = phase_demo_rows(phis, args.seed)
    ok = all(r[1] <= 1e-12 and abs(r[2] - r[3]) <= 1e-10 for r in rows)
    return _csv_text(["phi", "lhs_covariance_residual", "rhs_trace_distance", "sin_half_phi"], rows), 0 if ok else 1


# ---------------------------------------------------------------------------
# output helpers


class _Usage(Exception):
    pass


def _report(command: str, seed: int, config: dict, results: list[dict]) -> dict:
    return {
        "command": command,
        "seed": seed,
        "config": config,
        "results": results,
        "wall_time_s": 0.0,
        "version": __version__,
    }


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".17g")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _write_csv(path, header, rows) -> None:
    Path(path).write_text(_csv_text(header, rows))


def _emit(text: str, path) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcontrol", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=default_seed())
        p.add_argument("--output", type=Path, default=None)

    def search_opts(p):
        p.add_argument("--ancilla-dim", type=int, default=1)
        p.add_argument("--restarts", type=int, default=64)
        p.add_argument("--max-iters", type=int, default=2000)
        p.add_argument("--workers", type=int, default=1)

    v = sub.add_parser("verify", help="run the construction checks")
    common(v)
    v.add_argument("--tolerance", type=float, default=None, help="override every residual threshold")
    v.add_argument("--target-dim", type=int, default=2)

    ng = sub.add_parser("nogo", help="obstruction minimization and adversarial search")
    nsub = ng.add_subparsers(dest="nogo_command", required=True)
    r = nsub.add_parser("residual", help="minimize the obstruction residual")
    common(r)
    search_opts(r)
    r.add_argument("--projected", action="store_true")
    r.add_argument("--cap", type=float, default=1.0, help="upper bound on |<H|X>|, |<H|Z>| (projected only)")
    r.add_argument("--csv", type=Path, default=None, help="write 1-D residual slices through the argmin")
    s = nsub.add_parser("search", help="maximize worst-case fidelity over sandwiches")
    common(s)
    search_opts(s)
    s.add_argument("--gates", default="xzh", help="xzh | haar:<n> | diagonal | singleton:<gate>")
    s.add_argument("--target-dim", type=int, default=2)
    s.add_argument("--fixed-phase", action="store_true", help="share one phase u across all gates")

    p = sub.add_parser("phase-demo", help="CSV of sandwich covariance vs control-U phase sensitivity")
    common(p)
    p.add_argument("--phi", type=float, nargs="+", default=None)
    p.add_argument("--grid-points", type=int, default=32)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not 0 <= args.seed < 2**64:
        parser.error("--seed must be a 64-bit unsigned integer")
    t0 = time.perf_counter()
    try:
        if args.command == "phase-demo":
            text, code = cmd_phase_demo(args)
            _emit(text, args.output)
            return code
        handler = {"verify": cmd_verify, "residual": cmd_nogo_residual, "search": cmd_nogo_search}
        payload, code = handler[args.nogo_command if args.command == "nogo" else args.command](args)
    except _Usage as exc:
        parser.error(str(exc))
    payload["wall_time_s"] = time.perf_counter() - t0
    _emit(json.dumps(_clean(payload), indent=2) + "\n", args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
