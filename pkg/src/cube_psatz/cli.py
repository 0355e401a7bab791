"""Command-line front end: ``cube-psatz {verify,construct,lift,bounds,diagnose}``.

Exit codes: 0 pass, 1 mathematical failure, 2 usage or input error.
Reports are JSON on stdout; artifacts are written atomically with ``--out``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time
from fractions import Fraction

from . import bounds as B
from .certificates import GeneratorSet, QModCertificate, SosExpression, certificate_from_json, verify
from .identities import (
    ShiftParams,
    box_target,
    build_fq,
    cert_box_in_lnorm,
    cert_lnorm_in_cube,
    cert_pow2_recurrence,
    cert_univariate_shift,
    fq_closed_form,
    lnorm_target,
    one_minus_x2,
)
from .lifting import LiftingError, lift_preorder_to_cube
from .polycore import as_rational, parse

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON ({exc})") from exc
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from exc


def _load_certificate(path: str):
    data = _read_json(path)
    try:
        return certificate_from_json(data)
    except (KeyError, ValueError, TypeError, IndexError, ZeroDivisionError) as exc:
        raise UsageError(f"{path}: invalid certificate ({exc})") from exc


def _digest(argv, paths) -> str:
    h = hashlib.sha256(json.dumps(list(argv)).encode())
    for p in paths:
        if p and os.path.exists(p):
            with open(p, "rb") as fh:
                h.update(fh.read())
    return h.hexdigest()


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


# ---------------------------------------------------------------------------
# subcommands; each returns (exit_code, result_dict, artifacts)


def cmd_verify(args):
    cert = _load_certificate(args.certificate)
    try:
        target = parse(args.target, cert.n)
    except (ValueError, IndexError) as exc:
        raise UsageError(f"target: {exc}") from exc
    report = verify(cert, target)
    result = report.to_dict()
    # the command line reports what the certificate over- or under-shoots by
    result["residual"] = (-report.residual).format()
    result["residual_convention"] = "expansion - target"
    return (EXIT_PASS if report.passed else EXIT_FAIL), result, []


def _construct(args):
    name = args.identity
    if name == "fq":
        q = _need(args.q, "--q")
        cert = QModCertificate(GeneratorSet.custom([], 1), (build_fq(q),), 2 * q)
        return cert, fq_closed_form(q)
    if name == "univariate-shift":
        q = _need(args.q, "--q")
        return cert_univariate_shift(q), one_minus_x2()
    if name == "pow2":
        m = _need(args.m, "--m")
        return cert_pow2_recurrence(m), one_minus_x2()
    if name == "box-in-lnorm":
        n, q = _need(args.n, "--n"), _need(args.q, "--q")
        if args.eta is None and args.eta2 is None:
            params = ShiftParams.auto(n, q)
        else:
            params = ShiftParams(n, q, args.eta, args.eta2)
        i = args.i or 1
        return cert_box_in_lnorm(params, i), box_target(params, i)
    if name == "lnorm-in-cube":
        n, q = _need(args.n, "--n"), _need(args.q, "--q")
        return cert_lnorm_in_cube(n, q), lnorm_target(n, q)
    raise UsageError(f"unknown identity {name!r}")


def _need(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required")
    if value < 1:
        raise UsageError(f"{flag} must be >= 1")
    return value


def cmd_construct(args):
    try:
        cert, target = _construct(args)
    except (ValueError, IndexError) as exc:
        raise UsageError(str(exc)) from exc
    report = verify(cert, target)
    if not report.passed:
        return EXIT_FAIL, {"error": "internal: constructed certificate failed self-check", "verify": report.to_dict()}, []
    text = _dump(cert.to_json())
    result = {"identity": args.identity, "target": target.format(), "r": cert.r, "verify": report.to_dict()}
    if args.out:
        write_atomic(args.out, text)
        back = certificate_from_json(_read_json(args.out))
        if back != cert or not verify(back, target).passed:
            return EXIT_FAIL, {"error": "internal: artifact failed read-back verification"}, [args.out]
        return EXIT_PASS, result, [args.out]
    result["certificate"] = cert.to_json()
    return EXIT_PASS, result, []


def cmd_lift(args):
    cert = _load_certificate(args.certificate)
    if cert.gens.label != "scaled-cube":
        raise UsageError("lift expects a preorder certificate over scaled-cube generators")
    if args.eta is not None and args.eta * args.eta != cert.gens.eta2:
        raise UsageError(f"--eta {args.eta} does not match the certificate's generators")
    if args.eta2 is not None and args.eta2 != cert.gens.eta2:
        raise UsageError(f"--eta2 {args.eta2} does not match the certificate's generators")
    if isinstance(cert, QModCertificate):
        cert = cert.as_preorder()
    try:
        params = ShiftParams(cert.n, args.q, eta2=cert.gens.eta2)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    target = None
    if args.target:
        try:
            target = parse(args.target, cert.n)
        except (ValueError, IndexError) as exc:
            raise UsageError(f"target: {exc}") from exc
    try:
        out, ledger = lift_preorder_to_cube(cert, params, target)
    except LiftingError as exc:
        if exc.stage == "input":
            raise UsageError(str(exc)) from exc
        return EXIT_FAIL, {"error": str(exc), "stage": exc.stage}, []
    f = cert.expand()
    report = verify(out, f)
    result = {"target": f.format(), "ledger": ledger.to_dict(), "verify": report.to_dict()}
    artifacts = []
    if args.out:
        write_atomic(args.out, _dump(out.to_json()))
        artifacts.append(args.out)
        back = certificate_from_json(_read_json(args.out))
        if not verify(back, f).passed:
            return EXIT_FAIL, {"error": "internal: artifact failed read-back verification"}, artifacts
    else:
        result["certificate"] = out.to_json()
    if args.ledger:
        write_atomic(args.ledger, _dump(ledger.to_dict()))
        artifacts.append(args.ledger)
    return (EXIT_PASS if report.passed else EXIT_FAIL), result, artifacts


def _bound_inputs(args) -> B.BoundInputs:
    if args.n is None or args.d is None:
        raise UsageError("--n and --d are required")
    fmin, fmax, estimated = args.fmin, args.fmax, False
    if (fmin is None or fmax is None) and args.f:
        try:
            f = parse(args.f, args.n)
        except (ValueError, IndexError) as exc:
            raise UsageError(f"--f: {exc}") from exc
        lo, hi = B.estimate_extrema(f, seed=args.seed)
        fmin = lo if fmin is None else fmin
        fmax = hi if fmax is None else fmax
        estimated = True
    if fmin is None or fmax is None:
        raise UsageError("--fmin and --fmax are required (or --f to estimate them)")
    kw = {}
    if args.c is not None:
        kw["c_frak"] = args.c
    try:
        return B.BoundInputs(
            args.n, args.d, fmin, fmax, C_nd=args.C, illustrative=args.illustrative, extrema_estimated=estimated, **kw
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_bounds(args):
    kind = args.bound
    if kind == "lower":
        if args.epsilon is None:
            raise UsageError("--epsilon is required")
        try:
            rep = B.lower_bound_report(args.epsilon)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        return EXIT_PASS, rep.to_dict(), []
    inputs = _bound_inputs(args)
    if kind in ("schmudgen", "putinar") and args.C is None and not args.illustrative:
        raise UsageError("--C is required (or --illustrative for the placeholder C(n,d)=1)")
    fn = {
        "epsilon": B.epsilon_report,
        "q": B.choose_q_report,
        "schmudgen": B.schmudgen_report,
        "putinar": B.putinar_report,
    }[kind]
    rep = fn(inputs).to_dict()
    if inputs.extrema_estimated:
        rep["notes"].append("fmin/fmax estimated by sampling (not certified)")
    return EXIT_PASS, rep, []


def cmd_diagnose(args):
    cert = _load_certificate(args.certificate)
    if not isinstance(cert, QModCertificate):
        raise UsageError("diagnose expects a qmod certificate over the square")
    try:
        rep = B.fact_diagnostics(cert, args.epsilon, args.delta, samples=args.samples, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return (EXIT_PASS if rep.passed else EXIT_FAIL), rep.to_dict(), []


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cube-psatz", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="verify a certificate against a target polynomial")
    p.add_argument("certificate")
    p.add_argument("target", help='polynomial text, e.g. "(1-x1^2)*(1-x2^2)+1"')
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", help="build an explicit identity certificate")
    p.add_argument("identity", choices=["fq", "univariate-shift", "pow2", "box-in-lnorm", "lnorm-in-cube"])
    p.add_argument("--q", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--i", type=int)
    p.add_argument("--eta", type=_rational)
    p.add_argument("--eta2", type=_rational, help="eta^2, for irrational eta")
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("lift", help="lift a scaled-cube preorder certificate to the cube quadratic module")
    p.add_argument("certificate")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--eta", type=_rational)
    p.add_argument("--eta2", type=_rational)
    p.add_argument("--target")
    p.add_argument("--out")
    p.add_argument("--ledger")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("bounds", help="evaluate effective degree bounds")
    p.add_argument("bound", choices=["epsilon", "q", "schmudgen", "putinar", "lower"])
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--fmin", type=_rational)
    p.add_argument("--fmax", type=_rational)
    p.add_argument("--f", help="polynomial whose extrema are estimated by sampling")
    p.add_argument("--c", type=_rational, help="the constant c (default: rational upper bound of e^5)")
    p.add_argument("--C", type=_rational, help="Schmudgen constant C(n,d)")
    p.add_argument("--illustrative", action="store_true")
    p.add_argument("--epsilon", type=_rational)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("diagnose", help="lower-bound fact diagnostics on a square certificate")
    p.add_argument("certificate")
    p.add_argument("--epsilon", type=_rational, required=True)
    p.add_argument("--delta", type=_rational)
    p.add_argument("--samples", type=int, default=4096)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_diagnose)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    inputs = [getattr(args, "certificate", None)]
    try:
        code, result, artifacts = args.func(args)
    except UsageError as exc:
        code, result, artifacts = EXIT_USAGE, {"error": str(exc)}, []
    outcome = {EXIT_PASS: "pass", EXIT_FAIL: "fail", EXIT_USAGE: "usage-error"}[code]
    report = {
        "command": ["cube-psatz"] + argv,
        "inputs_digest": _digest(argv, inputs),
        "outcome": outcome,
        "result": result,
        "artifacts": artifacts,
        "elapsed_s": round(time.perf_counter() - start, 6),
    }
    text = _dump(report)
    out = getattr(args, "out", None)
    if out and args.command in ("verify", "bounds", "diagnose"):
        write_atomic(out, text)
        report["artifacts"] = [out]
    sys.stdout.write(text)
    if code == EXIT_USAGE:
        print(f"cube-psatz: error: {result['error']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
