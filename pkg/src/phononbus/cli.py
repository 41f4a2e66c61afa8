"""Command-line interface.

Exit codes: 0 success, 1 configuration error, 2 numerical failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import copy
import dataclasses
import math
import sys
import warnings
from typing import Callable, Sequence

from . import csvio
from .dephasing import coupling_table, distinguishability
from .errors import ConfigError, NumericalError, SchemaError
from .exciton import build_states, dipole_table, envelope_root, state_norm
from .feasibility import (
    cusp,
    default_omega_range,
    feasibility_curve,
    operating_point,
    table1,
)
from .materials import (
    PRESETS,
    Scenario,
    apply_overrides,
    read_scenario_document,
    scenario_from_dict,
)
from .oracle import OracleSystem, scan_offresonant, simulate_sideband
from .support import fig2_curve, spectrum, with_fundamental
from .units import LAMBDA0

EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 1, 2, 3

DEFAULT_DOCUMENT = {
    "material": "CdTe",
    "support": {
        "kind": "string",
        "derive_from_N": True,
        "lambda_kg_per_m": {"value": 1, "unit": "lambda0"},
        "l_m": {"value": 3, "unit": "um"},
    },
    "scenario": {"N": 10, "epsilon": 0.1, "wave_config": "standing", "cos_theta": 1.0},
}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # usage problems are configuration errors
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise SchemaError(f"expected a comma-separated list of numbers, got {text!r}") from None
    if not vals:
        raise SchemaError("empty number list")
    return vals


def _scenario(args: argparse.Namespace) -> Scenario:
    doc = read_scenario_document(args.scenario) if args.scenario else copy.deepcopy(DEFAULT_DOCUMENT)
    if args.set:
        doc = apply_overrides(doc, args.set)
    return scenario_from_dict(doc)


def _bus_frequency(sc: Scenario, given: float | None) -> float:
    if given is not None:
        if not given > 0:
            raise SchemaError("--omega1 must be positive")
        return given
    sup = sc.support
    if sup.tension is not None or sup.stiffness is not None:
        return spectrum(sup, 1).mode(1).omega
    return cusp(sc)[0]


def cmd_modes(args: argparse.Namespace) -> None:
    sc = _scenario(args)
    sup = sc.support
    if args.omega1 is not None:
        sup = with_fundamental(sup, args.omega1)
    elif sup.tension is None and sup.stiffness is None:
        raise SchemaError("support needs tension, stiffness or omega1 (or pass --omega1)")
    sp = spectrum(sup, args.modes)
    csvio.write(("m", "k_per_m", "omega_rad_per_s", "q0_m"), sp.rows(), args.out)


def cmd_exciton(args: argparse.Namespace) -> None:
    sc = _scenario(args)
    states = build_states(sc.material)
    csvio.write(("bra", "ket", "polarization", "re_over_R", "im_over_R"), dipole_table(states), args.out)
    if args.states:
        rows = []
        for label, st in states.items():
            for t in st.terms:
                rows.append((label, st.F_z, t.coeff.real, t.coeff.imag, t.electron_ms,
                             t.envelope.value, t.l, t.m, t.bloch_mj))
        csvio.write(("state", "F_z", "coeff_re", "coeff_im", "electron_ms", "envelope", "l", "m", "bloch_mj"),
                    rows, args.states)
    b = sc.material.beta
    print(f"beta={b} phi_S={envelope_root(b, 'S'):.12f} phi_P={envelope_root(b, 'P'):.12f} "
          + " ".join(f"norm[{k}]={state_norm(v):.12f}" for k, v in states.items()), file=sys.stderr)


def cmd_coupling(args: argparse.Namespace) -> None:
    sc = _scenario(args)
    omega1 = _bus_frequency(sc, args.omega1)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        op = operating_point(sc, omega1)
    g, f = op.gate, op.fidelity
    rows = [
        ("omega1_s_rad_per_s", omega1),
        ("omega2_rad_per_s", g.omega2),
        ("eta", g.eta),
        ("I1_W_per_m2", g.I1),
        ("I2_W_per_m2", g.I2),
        ("tau_A_s", g.tau_A),
        ("tau_cphase_s", g.tau_cphase),
        ("background_loss", f.background),
        ("offresonant_loss", f.offresonant_loss),
        ("fidelity", f.fidelity),
    ]
    csvio.write(("quantity", "value"), rows, args.out)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)


def cmd_nmax_scan(args: argparse.Namespace) -> None:
    sc = _scenario(args)
    lo, hi = default_omega_range(sc)
    lo = args.omega_min if args.omega_min is not None else lo
    hi = args.omega_max if args.omega_max is not None else hi
    if not (lo > 0 and hi > lo):
        raise SchemaError(f"empty omega range [{lo}, {hi}]")
    curve = feasibility_curve(sc, (lo, hi), args.samples)
    csvio.write(("omega1_s", "n_small", "n_big", "n_max"), curve.rows(), args.out)
    print(f"N_c={curve.n_c} omega_c={curve.omega_c:.6e}", file=sys.stderr)


def cmd_table1(args: argparse.Namespace) -> None:
    mats: list = list(PRESETS)
    adjust: Callable[[Scenario], Scenario] | None = None
    if args.scenario or args.set:
        sc = _scenario(args)
        if sc.material.name not in PRESETS or sc.material != PRESETS[sc.material.name]:
            mats.append(sc.material)

        def adjust(base: Scenario) -> Scenario:
            sup = dataclasses.replace(
                base.support,
                unit_length=sc.support.unit_length,
                length_L=sc.support.unit_length * base.n_dots,
            )
            return dataclasses.replace(base, support=sup, cos_theta=sc.cos_theta, k2_magnitude=sc.k2_magnitude)

    header = ["neg_log10_epsilon", "lambda_over_lambda0"] + [
        f"N_c_{m if isinstance(m, str) else m.name}" for m in mats
    ]
    csvio.write(header, table1(mats, overrides=adjust), args.out)


def cmd_fig2(args: argparse.Namespace) -> None:
    base = LAMBDA0
    if args.scenario or args.set:
        base = _scenario(args).support.linear_density
    pts = fig2_curve(_floats(args.ratios), base_lambda=base, grid_points=args.grid_points)
    rows = [(p.ratio, math.log10(p.ratio), p.exact, p.averaged) for p in pts]
    csvio.write(("density_ratio", "log10_ratio", "S11_over_S0_exact", "S11_over_S0_average"), rows, args.out)


def cmd_simulate(args: argparse.Namespace) -> None:
    omega1 = args.omega1 if args.omega1 is not None else 1e8
    gamma = args.gamma
    n = 1
    if args.scenario or args.set:
        sc = _scenario(args)
        if gamma is None:
            gamma = sc.material.gamma_rec
        n = sc.n_dots
    modes = tuple(omega1 * (m + 1) for m in range(args.modes))
    system = OracleSystem(args.ratio * omega1, omega1, modes, args.truncation, gamma or 0.0, n)
    if args.scan:
        rows = scan_offresonant(system, _floats(args.scan), workers=args.workers)
        csvio.write(("ratio", "simulated_loss", "model_loss"), rows, args.out)
        return
    res = simulate_sideband(system, args.pulse_k)
    labels = list(res.populations)
    rows = [
        (t, *(res.populations[lab][i] for lab in labels), res.norm[i])
        for i, t in enumerate(res.times)
    ]
    csvio.write(("t_s", *(f"P[{lab}]" for lab in labels), "norm"), rows, args.out)
    print(f"target={res.target_population:.12f} overlap={res.achieved_operator_overlap:.12f} "
          f"mean_spectator={res.mean_spectator:.6e} norm_loss={res.norm_loss:.6e}", file=sys.stderr)


def _radial_scales(items: Sequence[str] | None) -> dict[int, float]:
    out = {}
    for item in items or ():
        key, sep, val = item.partition("=")
        try:
            out[int(key)] = float(val)
        except ValueError:
            raise SchemaError(f"--radial-scale expects l=value, got {item!r}") from None
        if not sep:
            raise SchemaError(f"--radial-scale expects l=value, got {item!r}")
    return out


def cmd_dephasing(args: argparse.Namespace) -> None:
    sc = _scenario(args)
    states = build_states(sc.material)
    table = coupling_table(states, args.l_max, _radial_scales(args.radial_scale))
    csvio.write(("state", "l", "m", "coupling"), table.rows(), args.out)
    labels = list(states)
    pairs = " ".join(
        f"D({a},{b})={distinguishability(a, b, table):.3e}" for i, a in enumerate(labels) for b in labels[i + 1:]
    )
    print(pairs, file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="phononbus", description="Feasibility engine for phonon-bus gates between quantum dots.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, func: Callable, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--scenario", help="scenario JSON file (defaults to a CdTe preset scenario)")
        p.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a scenario key (repeatable)")
        p.set_defaults(func=func)
        return p

    p = add("modes", cmd_modes, "support mode spectrum")
    p.add_argument("--modes", type=int, default=10)
    p.add_argument("--omega1", type=float, help="fundamental frequency in rad/s")

    p = add("exciton", cmd_exciton, "exciton states and dipole elements")
    p.add_argument("--states", help="also write the state expansions to this CSV")

    p = add("coupling", cmd_coupling, "gate operating point at the fidelity optimum")
    p.add_argument("--omega1", type=float, help="bus frequency in rad/s (default: support or cusp)")

    p = add("nmax-scan", cmd_nmax_scan, "N_max versus support frequency")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--omega-min", type=float)
    p.add_argument("--omega-max", type=float)

    add("table1", cmd_table1, "N_c grid for CdTe and Si")

    p = add("fig2", cmd_fig2, "mass-loading effect on the dot modal displacement")
    p.add_argument("--ratios", default="2,10,100,1000")
    p.add_argument("--grid-points", type=int, default=4000)

    p = add("simulate", cmd_simulate, "time-domain sideband pulse")
    p.add_argument("--ratio", type=float, default=0.05, help="Omega2/omega1_s")
    p.add_argument("--omega1", type=float, help="bus frequency in rad/s (default 1e8)")
    p.add_argument("--gamma", type=float, help="recombination rate in 1/s")
    p.add_argument("--pulse-k", type=int, default=1)
    p.add_argument("--modes", type=int, default=2)
    p.add_argument("--truncation", type=int, default=3)
    p.add_argument("--scan", help="comma-separated ratios; writes a scan instead of a time series")
    p.add_argument("--workers", type=int, default=1)

    p = add("dephasing", cmd_dephasing, "diagonal internal-phonon coupling table")
    p.add_argument("--l-max", type=int, default=4)
    p.add_argument("--radial-scale", action="append", metavar="L=VALUE")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
