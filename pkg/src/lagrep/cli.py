"""Command-line front end.

Every subcommand reads one JSON document (``--input``, or stdin when it is
omitted or ``-``), runs a single library operation and writes JSON (or CSV
where supported) to ``--output`` or stdout.

Exit codes: 0 success, 1 domain failure (infeasible target, solver failure,
failed identity), 2 input error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from . import io as lio
from .lagrangian import LagrangianTuple, pairwise_symmetrizers, symmetry_defect, tau2_split
from .maslov import check_index_identities
from .representation import bend, expected_dimensions, phi_tilde, spectral_projection, twist
from .solver import SCAN_OPTIONS, SolveOptions, chamber_scan, compose_triple, realize_lagrangian, realize_unitary
from .spectra import MultiplicityStructure, feasible, multiplicity_structure
from .symplectic import isotropy_report

EXIT_OK, EXIT_DOMAIN, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# --- argument parsing ---------------------------------------------------------


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _seed(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("seed must be non-negative")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", help="input JSON file (default: stdin)")
    common.add_argument("--output", "-o", help="output file (default: stdout)")
    common.add_argument("--seed", type=_seed, help="random seed (falls back to LAGREP_SEED, then 0)")
    common.add_argument("--tol", type=_positive_float, help="residual / acceptance tolerance")
    common.add_argument("--restarts", type=_positive_int, help="solver restarts")
    common.add_argument("--max-iters", type=_positive_int, help="solver iterations per restart")
    common.add_argument("--resolution", type=_positive_float, default=0.05, help="scan grid spacing")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    parser = argparse.ArgumentParser(prog="lagrep", description="Lagrangian representations of unitary tuples.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text, description=help_text)

    add("spec", "angle tuple of a representation or Lagrangian tuple")
    add("split", "write a unitary {\"g\": matrix} as tau2(L1, L2)")
    add("maslov", "index and Maslov identities of a Lagrangian tuple")
    add("walls", "feasibility predicate for a U(2) or U(3) angle triple")
    add("realize", "search for a unitary representation with given angles")
    add("realize-lagrangian", "search for a Lagrangian tuple with given angles")
    add("compose", "glue {\"sol_ell\": tuple, \"sol_3\": tuple} into a longer tuple")
    p = add("scan", "compare the predicate with both solvers on an index plane")
    p.add_argument("--n", type=int, choices=(2, 3), default=2)
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--margin", type=float, default=0.02, help="minimum distance from every wall")
    p.add_argument("--samples", type=_positive_int, help="sample this many grid points (default: full grid for n=2)")
    add("deform", "apply a twist or a bend to {\"lagrangians\": tuple, \"twist\"|\"bend\": ...}")
    add("isotropy", "isotropy defect of the fixed-class Lagrangian tangents")
    add("symmetrize", "pairwise symmetrizers of a Lagrangian tuple")
    p = add("dims", "expected stratum dimensions (use --input for a multiplicity structure)")
    p.add_argument("--n", type=_positive_int)
    p.add_argument("--ell", type=int)
    return parser


# --- helpers ------------------------------------------------------------------


def _read(args):
    if args.input in (None, "-"):
        text = sys.stdin.read()
    else:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {args.input}: {exc.strerror}") from None
    return lio.loads(text)


def _seed_value(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("LAGREP_SEED")
    if env is None:
        return 0
    try:
        return _seed(env)
    except (ValueError, argparse.ArgumentTypeError):
        raise InputError(f"LAGREP_SEED must be a non-negative integer, got {env!r}") from None


def _solve_options(args, base=None):
    base = SolveOptions() if base is None else base
    return SolveOptions(
        max_iters=args.max_iters or base.max_iters,
        restarts=args.restarts or base.restarts,
        step=base.step,
        tol_residual=args.tol or base.tol_residual,
        seed=_seed_value(args),
        chunk=base.chunk,
    )


def _tuple_or_rep(doc):
    if isinstance(doc, list):
        return phi_tilde(lio.decode_lagrangian_tuple(doc))
    return lio.decode_representation(doc)


def _field(doc, key):
    if not isinstance(doc, dict) or key not in doc:
        raise lio.SchemaError(f"/{key}", "missing required field")
    return doc[key]


def _outcome_doc(o):
    return {
        "success": o.success,
        "residual": o.residual if np.isfinite(o.residual) else None,
        "restarts_used": o.restarts_used,
        "residual_floor": o.residual_floor if np.isfinite(o.residual_floor) else None,
        "reason": o.reason,
        "witness": o.witness,
    }


# --- subcommands --------------------------------------------------------------
# Each returns (payload, exit code); payload is JSON-encodable or CSV text.


def cmd_spec(args, doc):
    a = spectral_projection(_tuple_or_rep(doc))
    if args.format == "csv":
        return "\n".join(",".join(repr(float(x)) for x in row) for row in a.alpha) + "\n", EXIT_OK
    return a, EXIT_OK


def cmd_split(args, doc):
    g = lio.decode_unitary(_field(doc, "g"), "/g")
    L1, L2 = tau2_split(g)
    return LagrangianTuple((L1, L2)), EXIT_OK


def cmd_maslov(args, doc):
    report = check_index_identities(lio.decode_lagrangian_tuple(doc))
    return report, EXIT_OK if all(report["identities"].values()) else EXIT_DOMAIN


def cmd_walls(args, doc):
    a = lio.decode_spectrum(doc)
    if a.n not in (2, 3):
        raise lio.SchemaError("/n", "the predicate is tabulated for n = 2 and n = 3 only")
    res = feasible(a)
    return {"feasible": res.feasible, "violated": res.violated}, EXIT_OK if res.feasible else EXIT_DOMAIN


def cmd_realize(args, doc):
    o = realize_unitary(lio.decode_spectrum(doc), _solve_options(args))
    return _outcome_doc(o), EXIT_OK if o.success else EXIT_DOMAIN


def cmd_realize_lagrangian(args, doc):
    o = realize_lagrangian(lio.decode_spectrum(doc), _solve_options(args))
    return _outcome_doc(o), EXIT_OK if o.success else EXIT_DOMAIN


def cmd_compose(args, doc):
    sol_ell = lio.decode_lagrangian_tuple(_field(doc, "sol_ell"), "/sol_ell")
    sol_3 = lio.decode_lagrangian_tuple(_field(doc, "sol_3"), "/sol_3")
    try:
        out = compose_triple(sol_ell, sol_3, tol=args.tol or 1e-7)
    except ValueError as exc:
        return {"error": str(exc)}, EXIT_DOMAIN
    return out, EXIT_OK


def cmd_scan(args, doc):
    opts = _solve_options(args, SCAN_OPTIONS)
    samples = args.samples if args.samples is not None else (100 if args.n == 3 else None)
    rep = chamber_scan(args.n, args.index, args.resolution, opts, args.margin, samples, seed=opts.seed)
    if args.format == "csv":
        return rep.to_csv(), EXIT_OK
    return {"agreement": rep.agreement(), "disagreements": rep.disagreements()}, EXIT_OK


def cmd_deform(args, doc):
    lam = lio.decode_lagrangian_tuple(_field(doc, "lagrangians"), "/lagrangians")
    if "twist" in doc:
        raw = doc["twist"]
        if not isinstance(raw, list):
            raise lio.SchemaError("/twist", "expected a list of unit complex numbers")
        phases = [lio.decode_complex(x, f"/twist/{s}") for s, x in enumerate(raw)]
        return twist(lam, phases), EXIT_OK
    spec = _field(doc, "bend")
    if not isinstance(spec, dict):
        raise lio.SchemaError("/bend", "expected an object with s, r and A")
    for key in ("s", "r"):
        if not isinstance(_field(spec, key), int) or isinstance(spec[key], bool):
            raise lio.SchemaError(f"/bend/{key}", "expected an integer")
    _field(spec, "A")
    A = lio.decode_matrix(spec["A"], "/bend/A", lam.n)
    if np.linalg.norm(A.imag) > 0:
        raise lio.SchemaError("/bend/A", "bending parameter must be real")
    return bend(lam, spec["s"], spec["r"], A.real), EXIT_OK


def cmd_isotropy(args, doc):
    report = isotropy_report(lio.decode_lagrangian_tuple(doc))
    threshold = args.tol or 1e-8
    report["isotropic"] = bool(report["defect"] < threshold)
    return report, EXIT_OK if report["isotropic"] else EXIT_DOMAIN


def cmd_symmetrize(args, doc):
    lam = lio.decode_lagrangian_tuple(doc)
    rho = phi_tilde(lam)
    cs = pairwise_symmetrizers(lam)
    ell = lam.ell
    defects = [max(symmetry_defect(c, rho.gammas[s]), symmetry_defect(c, rho.gammas[(s + 1) % ell])) for s, c in enumerate(cs)]
    return {"symmetrizers": cs, "defects": defects}, EXIT_OK


def cmd_dims(args, doc):
    if doc is not None:
        a = lio.decode_spectrum(doc)
        n, ell, m = a.n, a.ell, multiplicity_structure(a)
    else:
        if args.n is None or args.ell is None:
            raise InputError("dims needs --input or both --n and --ell")
        n, ell, m = args.n, args.ell, MultiplicityStructure.generic(args.n, args.ell)
    return expected_dimensions(n, ell, m), EXIT_OK


COMMANDS = {
    "spec": cmd_spec,
    "split": cmd_split,
    "maslov": cmd_maslov,
    "walls": cmd_walls,
    "realize": cmd_realize,
    "realize-lagrangian": cmd_realize_lagrangian,
    "compose": cmd_compose,
    "scan": cmd_scan,
    "deform": cmd_deform,
    "isotropy": cmd_isotropy,
    "symmetrize": cmd_symmetrize,
    "dims": cmd_dims,
}

# subcommands that run without an input document
NO_INPUT = {"scan"}


def _write(args, payload):
    text = payload if isinstance(payload, str) else lio.dumps(payload)
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format == "csv" and args.command not in ("scan", "spec"):
        parser.error(f"--format csv is not available for {args.command}")
    try:
        if args.command in NO_INPUT:
            doc = None
        elif args.command == "dims" and args.input is None:
            doc = None
        else:
            doc = _read(args)
        payload, code = COMMANDS[args.command](args, doc)
    except (lio.SchemaError, InputError) as exc:
        print(f"lagrep {args.command}: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"lagrep {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        _write(args, payload)
        sys.stdout.flush()
    except BrokenPipeError:
        # downstream reader closed early (e.g. `| head`); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    return code


if __name__ == "__main__":
    sys.exit(main())
