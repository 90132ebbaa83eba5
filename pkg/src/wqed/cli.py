"""Command-line front end.

Subcommands
-----------
spectrum     transmission/reflection spectrum over a wavenumber grid
occupations  polariton occupation probabilities over a grid
bound        bound-state energies and profiles
figure       reproduce the data behind the three reference figures
verify       run the condensed oracle suite and print a pass/fail table

Energies passed in absolute units are normalized to the hopping constant
(g = 1) before computing, so all emitted energies are in units of g.

CSV contract: header row, columns ``k,E,T,R,Re_s,Im_s,uA2,uB2`` for spectra,
floats as shortest round-trip decimals, newline ``\\n``.  A flat ``key=value``
config file can seed any flag; explicit flags win.  ``WQED_THREADS`` caps
sweep parallelism.  Exit codes: 0 success, 1 validation failure, 2 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import boundstates, scattering
from .errors import ValidationError, WqedError
from .model import HoppingSign, ModelParams, effective_coupling
from .verify import run_all

# parameter sets of the three reference curves: (label, omega, Omega), G = 3, g = 1
FIGURE_CASES = [("a", 3.0, 2.0), ("b", 5.0, 8.0), ("c", 15.0, 5.0)]
FIGURE_IDS = ("fig5d", "fig7", "fig9")
DEFAULT_K_COUNT = 1001


def _fmt(x: float) -> str:
    return repr(float(x))


def _grid(k_min: float, k_max: float, count: int) -> list[float]:
    if count < 2:
        raise ValidationError(f"k-count must be >= 2, got {count}")
    if not (0.0 < k_min < k_max < math.pi):
        raise ValidationError(
            f"grid [{k_min}, {k_max}] must lie strictly inside (0, pi) with k-min < k-max")
    step = (k_max - k_min) / (count - 1)
    return [k_min + i * step for i in range(count)]


def _read_zeta_file(path: str) -> list[complex]:
    values = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValidationError(
                f"{path}:{lineno}: expected 're im' with two fields, got {line!r}")
        try:
            values.append(complex(float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise ValidationError(f"{path}:{lineno}: bad number in {line!r}") from exc
    if not values:
        raise ValidationError(f"{path}: no coupling entries found")
    return values


def _resolve_params(args: argparse.Namespace) -> ModelParams:
    g = args.g
    if g is None or g <= 0:
        raise ValidationError(f"--g must be positive, got {g}")
    if args.G is not None:
        G = args.G
    elif args.zeta_file is not None:
        G = effective_coupling(args.xi, _read_zeta_file(args.zeta_file))
    elif args.n_atoms is not None:
        if args.n_atoms < 1:
            raise ValidationError(f"--n-atoms must be >= 1, got {args.n_atoms}")
        G = args.xi * math.sqrt(args.n_atoms)
    else:
        raise ValidationError("specify the coupling: --G, or --xi with --n-atoms/--zeta-file")
    sign = HoppingSign(args.convention)
    # normalize to units of the hopping constant
    return ModelParams(omega=args.omega / g, g=1.0, Omega=args.Omega / g,
                       G=G / g, hopping_sign=sign)


def _spectrum_rows(params: ModelParams, ks: Sequence[float]) -> list[list[float]]:
    rows = []
    for sol in scattering.transmission_spectrum(params, ks):
        rows.append([sol.k, sol.E, sol.T, sol.R, sol.s.real, sol.s.imag,
                     abs(sol.u_A) ** 2, abs(sol.u_B) ** 2])
    return rows


SPECTRUM_HEADER = ["k", "E", "T", "R", "Re_s", "Im_s", "uA2", "uB2"]


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[float]],
              comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(header))
    lines.extend(",".join(_fmt(x) for x in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_text(header: Sequence[str], rows: Sequence[Sequence[float]],
               extra: Optional[dict] = None) -> str:
    payload = dict(extra or {})
    payload["columns"] = list(header)
    payload["rows"] = [[float(x) for x in row] for row in rows]
    return json.dumps(payload, indent=2) + "\n"


def _write_table(args: argparse.Namespace, header: Sequence[str],
                 rows: Sequence[Sequence[float]], comments: Sequence[str] = (),
                 extra: Optional[dict] = None) -> None:
    if args.format == "json":
        _emit(_json_text(header, rows, extra), args.out)
    else:
        _emit(_csv_text(header, rows, comments), args.out)


def figure_rows(figure_id: str, k_count: int = DEFAULT_K_COUNT
                ) -> tuple[list[str], list[list[float]], list[str]]:
    """(header, rows, comments) for one reference figure; shared with verify."""
    if figure_id == "fig9":
        params = ModelParams(omega=15.0, g=1.0, Omega=5.0, G=3.0)
        upper, lower = boundstates.bound_energies(params)
        up = boundstates.bound_wavefunction(params, upper, boundstates.Branch.UPPER)
        lo = boundstates.bound_wavefunction(params, lower, boundstates.Branch.LOWER)
        rows = [[float(j), abs(up.amplitude(j)), abs(lo.amplitude(j))]
                for j in range(-30, 31)]
        comments = [f"E_b1={_fmt(upper)}", f"E_b2={_fmt(lower)}"]
        return ["j", "u_upper", "u_lower"], rows, comments

    ks = _grid(0.01 * math.pi, 0.99 * math.pi, k_count)
    case_solutions = []
    for _, omega, Omega in FIGURE_CASES:
        params = ModelParams(omega=omega, g=1.0, Omega=Omega, G=3.0)
        case_solutions.append(scattering.transmission_spectrum(params, ks))
    if figure_id == "fig5d":
        header = ["k"] + [f"T_{label}" for label, _, _ in FIGURE_CASES]
        rows = [[k] + [sols[i].T for sols in case_solutions]
                for i, k in enumerate(ks)]
    elif figure_id == "fig7":
        header = ["k"]
        for label, _, _ in FIGURE_CASES:
            header += [f"uA2_{label}", f"uB2_{label}"]
        rows = []
        for i, k in enumerate(ks):
            row = [k]
            for sols in case_solutions:
                row += [abs(sols[i].u_A) ** 2, abs(sols[i].u_B) ** 2]
            rows.append(row)
    else:
        raise ValidationError(f"unknown figure id {figure_id!r}; choose from {FIGURE_IDS}")
    return header, rows, []


def _cmd_spectrum(args: argparse.Namespace) -> int:
    params = _resolve_params(args)
    rows = _spectrum_rows(params, _grid(args.k_min, args.k_max, args.k_count))
    _write_table(args, SPECTRUM_HEADER, rows)
    return 0


def _cmd_occupations(args: argparse.Namespace) -> int:
    params = _resolve_params(args)
    ks = _grid(args.k_min, args.k_max, args.k_count)
    rows = []
    for sol in scattering.transmission_spectrum(params, ks):
        rows.append([sol.k, sol.E, abs(sol.u_A) ** 2, abs(sol.u_B) ** 2,
                     abs(sol.u0) ** 2])
    _write_table(args, ["k", "E", "uA2", "uB2", "u02"], rows)
    return 0


def _cmd_bound(args: argparse.Namespace) -> int:
    params = _resolve_params(args)
    header = ["branch_sign", "E_b", "beta", "u0", "u_e", "localization_length", "norm_check"]
    states = boundstates.bound_states(params)
    rows = [[1.0 if st.branch is boundstates.Branch.UPPER else -1.0,
             st.E_b, st.beta, st.u0, st.u_e, st.localization_length, st.norm_check]
            for st in states]
    comments = [] if states else ["no bound states: G = 0"]
    _write_table(args, header, rows, comments,
                 extra=None if states else {"bound_states": "none (G = 0)"})
    return 0


def _cmd_figure(args: argparse.Namespace) -> int:
    header, rows, comments = figure_rows(args.figure_id, args.k_count)
    extra = {c.split("=")[0]: float(c.split("=")[1]) for c in comments} or None
    _write_table(args, header, rows, comments, extra)
    if args.plot:
        from .plotting import render_figure

        stem = Path(args.out).with_suffix(".png") if args.out else Path(f"{args.figure_id}.png")
        render_figure(args.figure_id, header, rows, comments, stem)
        print(f"wrote {stem}", file=sys.stderr)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    results = run_all()
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.name:<{width}}  {status}  {r.detail}")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 2


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--omega", type=float, default=5.0, help="cavity frequency")
    p.add_argument("--g", type=float, default=1.0, help="nearest-neighbor hopping (> 0)")
    p.add_argument("--Omega", type=float, default=8.0, help="atomic level spacing")
    p.add_argument("--G", type=float, default=None, help="effective collective coupling")
    p.add_argument("--n-atoms", type=int, default=None,
                   help="ensemble size N for G = xi*sqrt(N)")
    p.add_argument("--xi", type=float, default=1.0, help="single-atom coupling")
    p.add_argument("--zeta-file", default=None,
                   help="per-atom couplings, one complex zeta per line as 're im'")
    p.add_argument("--convention", choices=["plus", "minus"], default="plus",
                   help="hopping sign convention for reported wavenumbers")


def _add_grid_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k-min", type=float, default=0.01 * math.pi)
    p.add_argument("--k-max", type=float, default=0.99 * math.pi)
    p.add_argument("--k-count", type=int, default=DEFAULT_K_COUNT)


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")


def _apply_config_file(argv: list[str]) -> list[str]:
    """Prepend flag defaults from a flat key=value config file; CLI flags win."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise ValidationError("--config requires a file path")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2:]
    injected: list[str] = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        injected += [f"--{key.strip().replace('_', '-')}", value.strip()]
    # subcommand first, then config-file values, then explicit flags (which win)
    if rest and not rest[0].startswith("-"):
        return [rest[0]] + injected + rest[1:]
    return injected + rest


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wqed",
        description="Single-photon transport in a coupled-resonator waveguide "
                    "with an atomic-ensemble quantum node.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="transmission/reflection spectrum")
    _add_param_flags(sp)
    _add_grid_flags(sp)
    _add_output_flags(sp)
    sp.set_defaults(func=_cmd_spectrum)

    oc = sub.add_parser("occupations", help="polariton occupations over a grid")
    _add_param_flags(oc)
    _add_grid_flags(oc)
    _add_output_flags(oc)
    oc.set_defaults(func=_cmd_occupations)

    bd = sub.add_parser("bound", help="bound-state energies and profiles")
    _add_param_flags(bd)
    _add_output_flags(bd)
    bd.set_defaults(func=_cmd_bound)

    fg = sub.add_parser("figure", help="reproduce reference-figure data")
    fg.add_argument("figure_id", choices=FIGURE_IDS)
    fg.add_argument("--k-count", type=int, default=DEFAULT_K_COUNT)
    fg.add_argument("--plot", action="store_true",
                    help="also render a matplotlib PNG next to the data file")
    _add_output_flags(fg)
    fg.set_defaults(func=_cmd_figure)

    vf = sub.add_parser("verify", help="run the oracle suite")
    vf.set_defaults(func=_cmd_verify)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _apply_config_file(argv)
        args = build_parser().parse_args(argv)
        return args.func(args)
    except ValidationError as exc:
        print(f"wqed: invalid input: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"wqed: {exc}", file=sys.stderr)
        return 1
    except WqedError as exc:
        print(f"wqed: numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
