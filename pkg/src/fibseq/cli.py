"""Command-line front end: ``fibseq generate | analyze | fibrep | verify-suite``.

Every command writes one report (JSON by default) to stdout, or to the file
named by ``--out``.  Exit codes: 0 ok (including a non-existence
certificate), 1 identity failure, 2 usage, 3 I/O, 4 parse, 5 precondition.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import exactla as xla
from . import fibrep, frames, sequences, suite
from .errors import DimTooSmall, EmptyWindow, FibseqError, NoRepresentation, NotIndependent, UnknownName
from .frames import to_jsonable
from .sequences import DerivedSpec, Tail

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO, EXIT_PARSE, EXIT_PRECONDITION = 0, 1, 2, 3, 4, 5


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--format", choices=("json", "text"), default=default("json"))
    parser.add_argument("--tolerance", type=float, default=default(1e-9),
                        help="relative slack for floating-point checks")
    parser.add_argument("--seed", type=int, default=default(0))
    parser.add_argument("--out", default=default(None), help="write the output here instead of stdout")
    parser.add_argument("--timing", action="store_true", default=default(False),
                        help="record wall-clock time (reports are byte-identical without it)")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fibseq", description="Fibonacci representations of sequences in Hilbert space.")
    _global_options(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)

    g = sub.add_parser("generate", parents=[common], help="write a named or random sequence window")
    g.add_argument("name", help=f"one of {', '.join(sequences.CANONICAL_NAMES)}, or 'random'")
    g.add_argument("--n", type=int, required=True, help="window length N")
    g.add_argument("--dim", type=int, required=True, help="ambient dimension d")
    g.add_argument("--kind", choices=("independent", "dependent"), default="independent")
    g.add_argument("--tail", choices=[t.value for t in Tail], default=None)

    a = sub.add_parser("analyze", parents=[common], help="frame report of F and of its sum/difference sequences")
    a.add_argument("path")

    f = sub.add_parser("fibrep", parents=[common], help="construct and certify a Fibonacci representation")
    f.add_argument("path")
    f.add_argument("--policy", choices=("zero", "half-f3", "alternating", "pinned"), default="zero")
    f.add_argument("--pin-file", help='JSON {"vector": [...]} giving T f_1 for --policy pinned')

    v = sub.add_parser("verify-suite", parents=[common], help="run the randomized identity suite")
    v.add_argument("--seeds", type=int, default=200)
    v.add_argument("--max-n", type=int, default=10)
    v.add_argument("--max-dim", type=int, default=10)
    v.add_argument("--mutate-plan", help=argparse.SUPPRESS)  # "n:index:f1|f2", flips one coefficient
    return p


# ---------------------------------------------------------------------------
# input helpers


def _load_window(path: str) -> sequences.SequenceWindow:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return sequences.loads(text)
    except (ValueError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_PARSE, f"cannot parse {path}: {exc}") from exc


def _load_pin(path: str | None, dim: int) -> list:
    if path is None:
        raise CliError(EXIT_USAGE, "--policy pinned needs --pin-file")
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_PARSE, f"cannot parse {path}: {exc}") from exc
    try:
        vec = [xla.parse_scalar(str(s)) for s in obj["vector"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(EXIT_PARSE, f"malformed pin file {path}: {exc}") from exc
    if len(vec) != dim:
        raise CliError(EXIT_PRECONDITION, f"pin vector has length {len(vec)}, window dimension is {dim}")
    return vec


# ---------------------------------------------------------------------------
# commands; each returns (inputs, results, exit code)


def cmd_generate(args):
    try:
        if args.name == "random":
            w = sequences.random_window(args.n, args.dim, args.seed, args.kind)
        else:
            w = sequences.canonical(args.name, args.n, args.dim)
    except (UnknownName, DimTooSmall, EmptyWindow, ValueError) as exc:
        raise CliError(EXIT_USAGE, str(exc).strip("'\"")) from exc
    if args.tail is not None:
        w = w.with_tail(Tail(args.tail))
    inputs = {"name": args.name, "n": args.n, "dim": args.dim}
    if args.name == "random":
        inputs.update(seed=args.seed, kind=args.kind)
    return inputs, w, EXIT_OK


def _window_summary(name: str, w: sequences.SequenceWindow, tol: float) -> dict:
    rep = frames.analyze(w, tol).to_dict()
    kernel = frames.synthesis_kernel(w) if w.exact else None
    out = {"name": name, "label": w.label, "tail": w.tail.value, **rep}
    if kernel is not None:
        out["kernel_basis"] = to_jsonable([list(c) for c in kernel.basis])
    return out


def cmd_analyze(args):
    w = _load_window(args.path)
    results = [_window_summary("F", w, args.tolerance)]
    if len(w) >= 1 and (w.tail is Tail.ZERO or len(w) >= 2):
        plus = sequences.derive(w, DerivedSpec(sign=1))
        minus = sequences.derive(w, DerivedSpec(sign=-1))
        results.append(_window_summary("M", plus, args.tolerance))
        results.append(_window_summary("N", minus, args.tolerance))
    return {"path": args.path, "tolerance": args.tolerance}, results, EXIT_OK


def _operator_for(args, w):
    if args.policy == "alternating":
        return fibrep.construct_alternating(w)
    if args.policy == "half-f3":
        try:
            return fibrep.construct_half_f3(w)
        except NotIndependent:
            # dependent window: fall back to the constraint solve with the same intent
            return fibrep.construct(w, fibrep.HALF_F3)
    if args.policy == "pinned":
        return fibrep.construct(w, fibrep.Extension.pinned(_load_pin(args.pin_file, w.dim)))
    return fibrep.construct(w, fibrep.ZERO)


def cmd_fibrep(args):
    w = _load_window(args.path)
    inputs = {"path": args.path, "policy": args.policy}
    if args.pin_file:
        inputs["pin_file"] = args.pin_file
    if not w.exact:
        raise CliError(EXIT_PRECONDITION, "representations are computed for exact windows only")
    try:
        t = _operator_for(args, w)
    except NoRepresentation as cert:
        block = {
            "name": "certificate",
            "status": "no_representation",
            "witness": to_jsonable(list(cert.witness)),
            "image": to_jsonable(list(cert.image)),
            "detail": "sum c_n (f_n + f_(n+1)) = 0 while sum c_n f_(n+2) != 0",
        }
        return inputs, [block], EXIT_OK
    results = [{"name": "operator", **t.to_dict()}]
    checks = [fibrep.verify(w, t), fibrep.range_check(w, t)]
    if len(w) >= 4:
        checks.append(fibrep.check_mn_equivalence(w, t))
    if not xla.is_zero(w[1]) and frames.find_breakpoint(w) is not None:
        checks.append(fibrep.containment_check(w, t))
    if w.tail is Tail.ZERO:
        checks.append(fibrep.norm_bound_check(w, t, args.tolerance))
    checks.append(fibrep.injectivity_check(w, t))
    results.extend(c.to_dict() for c in checks)
    failed = any(not c.passed and not c.skipped for c in checks)
    return inputs, results, EXIT_FAIL if failed else EXIT_OK


def _parse_mutation(spec: str):
    try:
        n_s, idx_s, part = spec.split(":")
        n, idx = int(n_s), int(idx_s)
        if part not in ("f1", "f2"):
            raise ValueError(part)
        bad = fibrep.binomial_plan(n).flipped(idx, part)
    except (ValueError, IndexError, FibseqError) as exc:
        raise CliError(EXIT_USAGE, f"bad --mutate-plan {spec!r}") from exc
    return lambda k: bad if k == n else fibrep.binomial_plan(k)


def cmd_verify_suite(args):
    if args.seeds < 1 or args.max_n < 2 or args.max_dim < 1:
        raise CliError(EXIT_USAGE, "--seeds >= 1, --max-n >= 2 and --max-dim >= 1 are required")
    plan_for = _parse_mutation(args.mutate_plan) if args.mutate_plan else None
    reports = suite.run_all(args.seeds, args.max_n, args.max_dim, plan_for)
    inputs = {"seeds": args.seeds, "max_n": args.max_n, "max_dim": args.max_dim}
    if args.mutate_plan:
        inputs["mutate_plan"] = args.mutate_plan
    ok = all(r.passed for r in reports)
    return inputs, [r.to_dict() for r in reports], EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "generate": cmd_generate,
    "analyze": cmd_analyze,
    "fibrep": cmd_fibrep,
    "verify-suite": cmd_verify_suite,
}


# ---------------------------------------------------------------------------
# output


def _render_text(report: dict) -> str:
    lines = [f"fibseq {report['command']} (schema {report['schema_version']})"]
    for k, v in report["inputs"].items():
        lines.append(f"  {k}: {v}")
    for item in report["results"]:
        name = item.get("name", "?")
        status = item.get("status")
        head = f"{name}: {status}" if status else f"{name}:"
        lines.append(head)
        for k, v in item.items():
            if k in ("name", "status"):
                continue
            lines.append(f"    {k}: {json.dumps(v, sort_keys=True)}")
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {out}: {exc.strerror or exc}") from exc


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        inputs, results, code = COMMANDS[args.command](args)
        if args.command == "generate":
            if args.out is None:
                _emit(sequences.dumps(results), None)
            else:
                _emit(sequences.dumps(results), args.out)
                print(results.label)
            return code
        report = {
            "schema_version": SCHEMA_VERSION,
            "command": args.command,
            "inputs": inputs,
            "results": results,
            "timing_ms": int((time.perf_counter() - start) * 1000) if args.timing else 0,
        }
        if args.format == "json":
            text = json.dumps(report, indent=2, sort_keys=False) + "\n"
        else:
            text = _render_text(report)
        _emit(text, args.out)
        if code == EXIT_FAIL:
            print("fibseq: identity failure (see report)", file=sys.stderr)
        return code
    except CliError as exc:
        print(f"fibseq: {exc}", file=sys.stderr)
        return exc.code
    except FibseqError as exc:
        print(f"fibseq: precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
