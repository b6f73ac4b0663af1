"""Command-line interface.

Subcommands::

    crossframes bounds FILE [--side frame|coframe]
    crossframes verify FILE
    crossframes dual FILE --candidate FILE2 [--direction U|V] [--family-output PATH]
    crossframes intertwine FILE --given A|B SPEC [--a0 zero|random]
    crossframes group FILE --lambdas l1,l2,... [--delta d] [--t-samples t1,t2,...]

FILE is a frame file path or the name of a bundled fixture. Every
subcommand accepts ``--tol``, ``--seed``, ``--restarts``, ``--output`` and
``--format human|machine``. Exit codes: 0 ran with a verdict, 2 parse
error, 3 semantic or input error.
"""

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import frameio, optim
from .crossframe import (build_operators, certify_cross_frame, equivalence_operator_U,
                         equivalence_operator_V)
from .frameio import FrameFile, FrameFileError
from .frames import COFRAME, FRAME, InvalidFamilyError, family_bounds, hilbert_frame_bounds
from .intertwine import (InvarianceError, SeparationError, completeness_check,
                         diagonal_group_obstruction, group_axioms_check, lift_A, push_forward_B)
from .linmap import PreconditionError, projector_pair
from .spaces import DomainError, ShapeError

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_SEMANTIC = 3


class InputError(Exception):
    """Semantic problem with the inputs (exit code 3)."""


def _number_list(text):
    try:
        return [_parse_real(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _parse_real(v):
    v = v.strip().lower()
    named = {"pi": math.pi, "-pi": -math.pi, "inf": math.inf}
    return named[v] if v in named else float(v)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-10,
                        help="tolerance for algebraic residuals (default 1e-10)")
    common.add_argument("--seed", type=int, default=0, help="master random seed (default 0)")
    common.add_argument("--restarts", type=int, default=optim.DEFAULT_RESTARTS,
                        help="optimizer restarts (default %(default)s)")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("human", "machine"), default="human")
    common.add_argument("--timing", action="store_true",
                        help="add a wall_time field (makes reports run-dependent)")

    parser = argparse.ArgumentParser(prog="crossframes",
                                     description="Frames and cross-frames in finite lp spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common], help="frame or co-frame bounds")
    p.add_argument("file")
    p.add_argument("--side", choices=(FRAME, COFRAME), default=FRAME)

    p = sub.add_parser("verify", parents=[common], help="certify a cross-frame pair")
    p.add_argument("file")

    p = sub.add_parser("dual", parents=[common], help="equivalence to an alternate dual")
    p.add_argument("file")
    p.add_argument("--candidate", required=True)
    p.add_argument("--direction", choices=("U", "V"), default="U")
    p.add_argument("--family-output", help="write the pair with the transformed family here")

    p = sub.add_parser("intertwine", parents=[common], help="intertwining partners of S")
    p.add_argument("file")
    p.add_argument("--given", nargs=2, metavar=("A|B", "SPEC"), required=True,
                   help="SPEC: identity, zero, P, Q, diag:v1,v2,... or a JSON matrix file")
    p.add_argument("--a0", choices=("zero", "random"), default="zero")

    p = sub.add_parser("group", parents=[common], help="diagonal one-parameter groups")
    p.add_argument("file")
    p.add_argument("--lambdas", type=_number_list, required=True)
    p.add_argument("--delta", type=float)
    p.add_argument("--t-samples", type=_number_list, default=[0.0, 0.5, 1.0, math.pi])
    return parser


def cmd_bounds(args, ff):
    F = ff.family(args.side)
    fb = family_bounds(F, args.restarts, args.seed)
    names = ("A", "B") if args.side == FRAME else ("At", "Bt")
    report = {
        "verdict": ("frame" if args.side == FRAME else "co-frame") if fb.is_frame
        else ("not a frame" if args.side == FRAME else "not a co-frame"),
        "is_frame": fb.is_frame,
        "side": args.side,
        "exponents": {"p": F.p, "r": F.r},
        "constants": {names[0]: fb.A, names[1]: fb.B},
        "witnesses": {"lower": fb.lower.witness, "upper": fb.upper.witness},
    }
    M = F.analysis()
    if M.domain.p == 2 and M.codomain.p == 2:
        report["oracle"] = {"svd_min": optim.svd_oracle(M, "min").value,
                            "svd_max": optim.svd_oracle(M, "max").value}
        if F.side == FRAME:
            report["oracle"]["hilbert_bounds"] = list(hilbert_frame_bounds(F))
    return report


def _pair(ff, tol):
    if ff.y is None:
        raise InputError("the file has no y family; this command needs a pair")
    return ff.pair(tol)


def cmd_verify(args, ff):
    pair = _pair(ff, args.tol)
    cert = certify_cross_frame(pair, args.restarts, args.seed)
    report = {
        "verdict": "certified" if cert.certified else "rejected",
        "reason": cert.reason,
        "residuals": {"reconstruction": cert.reconstruction.residual,
                      "reconstruction_samples_max": float(np.max(cert.reconstruction.sample_residuals))},
    }
    if cert.dual_reconstruction is not None:
        report["residuals"]["dual_reconstruction"] = cert.dual_reconstruction.residual
        report["constants"] = cert.constants
        report["witnesses"] = {"A": cert.frame.lower.witness, "B": cert.frame.upper.witness,
                               "At": cert.coframe.lower.witness, "Bt": cert.coframe.upper.witness}
    return report


def cmd_dual(args, ff):
    pair = _pair(ff, args.tol)
    cand_file = frameio.resolve(args.candidate)
    if (cand_file.m, cand_file.n) != (ff.m, ff.n):
        raise InputError(f"candidate has m={cand_file.m}, n={cand_file.n}; "
                         f"expected m={ff.m}, n={ff.n}")
    if args.direction == "U":
        res = equivalence_operator_U(pair, cand_file.x)
    else:
        if cand_file.y is None:
            raise InputError("direction V needs a candidate y family")
        res = equivalence_operator_V(pair, cand_file.y)
    report = {
        "verdict": res.verdict,
        "direction": args.direction,
        "invertible": res.invertible,
        "cond": res.cond,
        "operator": res.operator.entries,
    }
    if res.transformed is not None:
        report["transformed"] = res.transformed.vectors
        rec = res.checks["reconstruction"]
        report["residuals"] = {"reconstruction": rec.residual}
        if "dual_residual" in res.checks:
            report["residuals"]["dual_reconstruction"] = res.checks["dual_residual"]
        if args.family_output and res.equivalent:
            new = FrameFile(ff.scalar, ff.m, ff.n, ff.p, ff.r,
                            res.transformed.vectors if args.direction == "U" else ff.x,
                            ff.y if args.direction == "U" else res.transformed.vectors,
                            {"name": f"{ff.name}-{args.direction}-dual",
                             "description": f"transformed by {args.direction}^-1"})
            frameio.save(new, args.family_output)
            report["family_output"] = str(args.family_output)
    return report


def _operator_spec(spec, dim, projectors):
    key = spec.strip()
    if key == "identity":
        return np.eye(dim)
    if key == "zero":
        return np.zeros((dim, dim))
    if key in ("P", "Q"):
        if projectors is None:
            raise InputError("P and Q are only defined on X_d")
        return getattr(projectors, key).entries
    if key.startswith("diag:"):
        vals = _number_list(key[5:])
        if len(vals) != dim:
            raise InputError(f"diag needs {dim} entries, got {len(vals)}")
        return np.diag(vals)
    path = Path(key)
    if not path.exists():
        raise InputError(f"unknown operator spec {spec!r}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        raw = np.asarray(data["matrix"], dtype=float)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise FrameFileError(f"cannot read operator file {path}: {exc}") from None
    a = raw[..., 0] + 1j * raw[..., 1] if raw.ndim == 3 else raw
    if a.shape != (dim, dim):
        raise InputError(f"operator must be {dim}x{dim}, got {a.shape}")
    return a


def cmd_intertwine(args, ff):
    pair = _pair(ff, args.tol)
    bundle = build_operators(pair)
    try:
        projectors = projector_pair(bundle.S, bundle.Rt, args.tol)
    except PreconditionError as exc:
        raise InputError(f"the pair does not reconstruct: {exc}") from None
    kind, spec = args.given
    report = {"given": kind}
    if kind == "A":
        A = _operator_spec(spec, ff.n, projectors)
        try:
            res = push_forward_B(A, bundle, args.tol, args.seed)
        except InvarianceError as exc:
            report.update({"verdict": "invariance failure", "violating_kernel_vector": exc.vector,
                           "invariance_residual": exc.residual})
            return report
        comp = completeness_check(A, res.partner, bundle, args.tol)
        report.update({
            "verdict": "intertwined" if res.residual <= args.tol else "residual too large",
            "partner": res.partner.entries,
            "residuals": {"intertwining": res.residual,
                          "uniqueness": res.checks["uniqueness"],
                          "range_of_A0": comp.range_residual,
                          "A0_formula": comp.formula_residual},
        })
    elif kind == "B":
        B = _operator_spec(spec, ff.m, None)
        a0 = "zero" if args.a0 == "zero" else "random-in-N"
        res = lift_A(B, bundle, a0, args.seed, args.tol)
        comp = completeness_check(res.partner, B, bundle, args.tol)
        report.update({
            "verdict": "intertwined" if res.residual <= args.tol else "residual too large",
            "partner": res.partner.entries,
            "decomposition": {"RtBS": res.decomposition[0].entries,
                              "A0": res.decomposition[1].entries},
            "residuals": {"intertwining": res.residual,
                          "range_of_A0": res.checks["range_of_A0"],
                          "completeness": comp.range_residual},
        })
    else:
        raise InputError(f"--given must be A or B, got {kind!r}")
    return report


def cmd_group(args, ff):
    lam = np.asarray(args.lambdas, dtype=float)
    if lam.size != ff.n:
        raise InputError(f"expected {ff.n} lambdas, got {lam.size}")
    delta = args.delta
    if delta is None:
        gaps = np.abs(np.subtract.outer(lam, lam))[~np.eye(lam.size, dtype=bool)]
        # half the smallest gap; a repeated value then fails the separation check
        delta = float(gaps.min()) / 2 if gaps.size else 1.0
        delta = delta or np.finfo(float).tiny
    source = ff.pair(args.tol) if ff.y is not None else ff.family(COFRAME)
    verdict = diagonal_group_obstruction(source, lam, delta, args.tol, t=1.0)
    report = {"verdict": verdict.verdict, "delta": delta, "kernel_dim": verdict.kernel_dim,
              "t": verdict.t}
    if verdict.obstructed:
        report["evidence"] = {"off_kernel_residuals": verdict.evidence,
                              "kernel": verdict.details["kernel"]}
        if "lift_residual" in verdict.details:
            report["evidence"]["lift_residual"] = verdict.details["lift_residual"]
    else:
        axioms = group_axioms_check(lam, args.t_samples, tol=1e-12, seed=args.seed)
        report["axioms"] = {"passed": axioms.passed, "identity": axioms.identity_residual,
                            "group_law": axioms.law_residual,
                            "isometry": {str(k): v for k, v in axioms.isometry_residuals.items()},
                            "uniform_bound": axioms.uniform_bound}
        report["evidence"] = {"eigen_residual": verdict.details["eigen_residual"]}
    return report


COMMANDS = {"bounds": cmd_bounds, "verify": cmd_verify, "dual": cmd_dual,
            "intertwine": cmd_intertwine, "group": cmd_group}


def _flatten(obj, prefix=""):
    obj = frameio._plain(obj)
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    else:
        yield prefix, obj


def _human_value(v):
    v = frameio._plain(v)
    if isinstance(v, list):
        return "[" + ", ".join(_human_value(x) for x in v) + "]"
    if isinstance(v, bool) or v is None:
        return str(v).lower()
    if isinstance(v, (int, float, np.floating, np.integer)):
        return f"{float(v):.10g}" if isinstance(v, (float, np.floating)) else str(v)
    return str(v)


def render(report, fmt):
    if fmt == "machine":
        return frameio.dumps(report)
    rows = list(_flatten(report))
    width = max(len(k) for k, _ in rows)
    return "".join(f"{k:<{width}}  {_human_value(v)}\n" for k, v in rows)


def run(argv):
    """Run the CLI on `argv`; returns ``(exit_code, report_text)``.

    Argument errors raise SystemExit as usual with argparse.
    """
    return _run(build_parser().parse_args(argv), argv)


def _run(args, argv):
    started = time.perf_counter()
    head = {"command": " ".join([args.command] + [a for a in argv if a != args.command]),
            "seed": args.seed, "tolerances": {"algebraic": args.tol,
                                              "optimizer_rtol": 1e-6},
            "restarts": args.restarts}
    try:
        ff = frameio.resolve(args.file)
        if ff.name:
            head["file"] = ff.name
        body = COMMANDS[args.command](args, ff)
        code = EXIT_OK
    except FrameFileError as exc:
        body, code = {"verdict": "error", "error": f"parse error: {exc}"}, EXIT_PARSE
    except SeparationError as exc:
        body = {"verdict": "error", "error": str(exc)}
        if exc.pair is not None:
            body["violating_pair"] = list(exc.pair)
        code = EXIT_SEMANTIC
    except (InputError, InvalidFamilyError, ShapeError, DomainError, PreconditionError) as exc:
        body, code = {"verdict": "error", "error": str(exc)}, EXIT_SEMANTIC
    report = {**head, **body}
    if args.timing:
        report["wall_time"] = time.perf_counter() - started
    return code, render(report, args.format)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    code, text = _run(args, argv)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
