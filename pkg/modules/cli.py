"""
Command-line frontend.

Every subcommand prints one JSON document on stdout: {command, inputs,
limits, result}. Prose and timing go to stderr, and --manifest-out also
writes the argv plus timing to a file that `replay` can re-run.

Exit codes: 0 ok, 1 domain error, 2 usage or syntax error, 3 resource limit.
"""
import argparse
import io
import json
import logging
import re
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, TextIO, Tuple

import numpy as np

import config
from . import density, intsets, jin, prcalc, ramsey, strcalc, structure
from .errors import HypercombError, ResourceLimitExceeded, SpecSyntaxError, UnsupportedSetError, VerificationError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3

# options that never reach "inputs"
_PLUMBING = {"handler", "threads", "max_window", "max_search_nodes", "time_budget",
             "manifest_out", "verbose"}


@dataclass
class RunManifest:
    command: str
    argv: List[str]
    inputs: Dict
    limits: Dict
    result: Dict
    timing_ms: float = 0.0
    threads: int = 1

    def stdout_payload(self) -> Dict:
        return {"command": self.command, "inputs": self.inputs, "limits": self.limits, "result": self.result}

    def file_payload(self) -> Dict:
        payload = self.stdout_payload()
        payload.update({"argv": self.argv, "timing_ms": self.timing_ms, "threads": self.threads})
        return payload


def _json_default(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, Fraction):
        return density.rational_json(value)
    if isinstance(value, (tuple, set, frozenset)):
        return list(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def to_json(payload: Dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, default=_json_default)


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _window_range(text: str) -> Tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            raise ValueError(text)
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a window lo..hi such as 1..100, got {text!r}") from None


# integer lists and windows that start with a minus sign are values, not options
_NEGATIVE_VALUE = re.compile(r"^-\d+(,-?\d*)*$|^-\d+\.\.-?\d+$")


class _Parser(argparse.ArgumentParser):
    def _parse_optional(self, arg_string):
        if _NEGATIVE_VALUE.match(arg_string):
            return None
        return super()._parse_optional(arg_string)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational number such as 9/10, got {text!r}") from None


def _window_of(args, s, limits):
    # --M M is shorthand for the window 1..M
    lo, hi = args.window if args.window else (1, args.M)
    return intsets.window(s, lo, hi, limits)


# -------------------------- Handlers --------------------------- #
# each returns (result dict, one-line summary for stderr)

def _cmd_density(args, limits) -> Tuple[Dict, str]:
    s = intsets.parse_set_spec(args.set)
    result: Dict = {"set": intsets.render(s)}
    for name, report in density.report_all(s, limits).items():
        result[name] = report.as_dict() if report is not None else None
    if args.window:
        w = _window_of(args, s, limits)
        result["windowed"] = density.windowed_report(w, args.L or len(w)).as_dict()
    shown = {k: v["value"] for k, v in result.items() if isinstance(v, dict)}
    summary = ", ".join(f"{k}={v['num']}/{v['den']}" for k, v in shown.items())
    return result, summary or "no density applies"


def _cmd_structure_classify(args, limits):
    s = intsets.parse_set_spec(args.set)
    if not isinstance(s, intsets.EventuallyPeriodic):
        raise UnsupportedSetError("classify decides eventually periodic sets only; use `structure ps`")
    flags = structure.classify_ep(s)
    complement_flags = structure.classify_ep(intsets.complement(s))
    result = {"set": intsets.render(s), **flags.as_dict(), "complement": complement_flags.as_dict()}
    return result, f"thick={flags.thick} syndetic={flags.syndetic} ps={flags.ps}"


def _cmd_structure_ps(args, limits):
    s = intsets.parse_set_spec(args.set)
    w = _window_of(args, s, limits)
    witness = structure.is_ps_window(w, args.k, args.L)
    result = {"witness": witness.as_dict() if witness else None}
    if witness:
        result["verified"] = structure.verify_ps_witness(w.bits, w.lo, witness)
    return result, f"witness {witness.interval if witness else None}"


def _cmd_structure_split(args, limits):
    s = intsets.parse_set_spec(args.set)
    w = _window_of(args, s, limits)
    col = ramsey.read_coloring(Path(args.coloring).read_text(), args.r)
    if col.N != len(w):
        raise SpecSyntaxError(f"coloring has {col.N} entries for a window of {len(w)}")
    colors = np.array(col.assign, dtype=np.int64)
    color, witness = structure.ps_partition_split_multi(w, colors, args.k, args.K, col.r)
    return {"color": color, "witness": witness.as_dict()}, f"colour {color} on {witness.interval}"


def _cmd_embed(args, limits):
    s = intsets.parse_set_spec(args.set)
    report = structure.embed_report(args.F, s, args.bound, limits)
    result = {"report": report.as_dict()}
    if args.differences:
        result["differences"] = structure.fe_difference_property(args.F, s, args.bound, limits)
    return result, f"{report.verdict} (shift {report.as_dict()['shift']})"


def _cmd_jin(args, limits):
    s = intsets.parse_set_spec(args.set)
    w = _window_of(args, s, limits)
    outcome = jin.jin_search_or_refute(w, args.k, args.beta, limits)
    if isinstance(outcome, jin.JinCertificate):
        result = {"kind": "certificate", "certificate": outcome.as_dict(),
                  "verified": jin.jin_embed_check(outcome, s)}
        return result, f"xi={outcome.xi}"
    result = {"kind": "trace", "trace": outcome.as_dict()}
    return result, f"{len(outcome.steps)} steps, bound holds: {outcome.holds}"


def _cmd_ramsey_clique(args, limits):
    pc = ramsey.read_pair_coloring(Path(args.coloring).read_text(), args.r)
    H, color = ramsey.ramsey_greedy(pc)
    return {"H": H, "color": color, "monochromatic": ramsey.is_monochromatic(pc, H)}, f"|H|={len(H)} colour {color}"


def _cmd_ramsey_ap3(args, limits):
    col = ramsey.read_coloring(Path(args.coloring).read_text(), args.r)
    found = ramsey.find_mono_3ap(col)
    result = {"ap": list(found) if found else None}
    return result, f"a, d = {found}" if found else "no monochromatic 3-AP"


def _equation(args) -> prcalc.Equation:
    if args.square:
        return prcalc.SumEqualsSquare()
    if args.c is None:
        raise SpecSyntaxError("give --c <coefficients> or --square")
    return prcalc.Linear(tuple(args.c))


def _cmd_pr_rado(args, limits):
    subset = prcalc.rado_condition(args.c)
    return {"rado_subset": list(subset) if subset else None}, f"F={subset}"


def _cmd_pr_search(args, limits):
    e = _equation(args)
    col = prcalc.search_avoiding_coloring(e, args.r, args.N, args.injective, limits)
    result = {"equation": e.describe(), "coloring": col.as_dict() if col else None, "exhausted": col is None}
    return result, "avoiding coloring found" if col else "every coloring has a monochromatic solution"


def _cmd_pr_quintic(args, limits):
    found = prcalc.quintic_solutions(args.N)
    coarse = prcalc.quintic_solutions(args.N, refined=False)
    result = {"N": args.N, "solutions": len(found), "first": list(found[0]) if found else None,
              "holds": not found,
              "residue_unit_only": {"solutions": len(coarse), "first": list(coarse[0]) if coarse else None}}
    return result, f"{len(found)} monochromatic solutions of x+y=z^2 up to {args.N}"


def _cmd_pr_coeffs(args, limits):
    solution = prcalc.injective_pr_coeffs(args.c, limits)
    matrix = prcalc.build_mu_matrix(args.c, solution)
    result = {"solution": solution.as_dict(), "mu": matrix.as_dict(),
              "combos": [strcalc.render_combo(row) for row in matrix.rows]}
    return result, f"a={list(solution.a)}"


def _cmd_strings_canon(args, limits):
    s = strcalc.parse_string(args.string)
    canon = strcalc.canonical_form(s)
    return {"canonical": list(canon), "combo": strcalc.render_combo(s)}, strcalc.render_string(canon)


def _cmd_strings_eq(args, limits):
    s, t = strcalc.parse_string(args.s), strcalc.parse_string(args.t)
    same = strcalc.equivalent(s, t)
    result = {"equivalent": same,
              "canonical": [list(strcalc.canonical_form(s)), list(strcalc.canonical_form(t))]}
    return result, "equivalent" if same else "not equivalent"


def _cmd_replay(args, limits):
    stored = json.loads(Path(args.manifest).read_text())
    argv = stored.get("argv")
    if not isinstance(argv, list) or not argv or argv[0] == "replay":
        raise SpecSyntaxError("manifest has no replayable argv")
    buffer = io.StringIO()
    manifest, code = dispatch(argv, stdout=buffer, stderr=io.StringIO())
    if manifest is None:
        raise VerificationError(f"replayed command exited with code {code}")
    same = to_json(manifest.stdout_payload()) == to_json(
        {k: stored.get(k) for k in ("command", "inputs", "limits", "result")})
    if not same:
        raise VerificationError("replayed result differs from the manifest")
    return {"argv": argv, "reproduced": True}, "manifest reproduced"


# -------------------------- Parser --------------------------- #

def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: HYPERCOMB_THREADS or 1)")
    common.add_argument("--max-window", type=int, default=None)
    common.add_argument("--max-search-nodes", type=int, default=None)
    common.add_argument("--time-budget", type=float, default=None, help="seconds")
    common.add_argument("--manifest-out", default=None, help="write the run manifest to this file")
    common.add_argument("-v", "--verbose", action="store_true")
    return common


def _add(sub, name: str, handler: Callable, help_text: str, common) -> argparse.ArgumentParser:
    p = sub.add_parser(name, help=help_text, parents=[common])
    p.set_defaults(handler=handler)
    return p


def _embed_arguments(p: argparse.ArgumentParser) -> None:
    p.add_argument("--F", type=_int_list, required=True)
    p.add_argument("--Y", dest="set", required=True, help="set spec the shifts of F must land in")
    p.add_argument("--bound", type=int, default=1000)
    p.add_argument("--differences", action="store_true", help="also check F - F against the set")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="hypercomb", description="Finite combinatorics of integer sets")
    sub = parser.add_subparsers(dest="command", required=True)

    p = _add(sub, "density", _cmd_density, "Schnirelmann, upper and Banach density of a set", common)
    p.add_argument("set", help='set spec, e.g. "periodic p=2 r=0"')
    p.add_argument("--window", type=_window_range, metavar="LO..HI")
    p.add_argument("--L", "--length", dest="L", type=int, default=None,
                   help="subwindow length for the windowed density")

    structure_parser = sub.add_parser("structure", help="thick / syndetic / piecewise syndetic")
    structure_sub = structure_parser.add_subparsers(dest="structure_command", required=True)
    p = _add(structure_sub, "classify", _cmd_structure_classify, "exact flags of a periodic set", common)
    p.add_argument("set")
    p = _add(structure_sub, "ps", _cmd_structure_ps, "piecewise syndetic witness in a window", common)
    p.add_argument("set")
    p.add_argument("--window", type=_window_range, metavar="LO..HI", required=True)
    p.add_argument("-k", type=int, required=True, help="gap bound")
    p.add_argument("-L", type=int, required=True, help="minimum interval length")
    p = _add(structure_sub, "split", _cmd_structure_split, "PS colour class of a partition", common)
    p.add_argument("set")
    p.add_argument("--window", type=_window_range, metavar="LO..HI", required=True)
    p.add_argument("--coloring", required=True, help="one colour per window position")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-K", type=int, required=True)
    p.add_argument("-r", type=int, default=None)
    p = _add(structure_sub, "embed", _cmd_embed, "least shift t with t + F inside a set", common)
    _embed_arguments(p)

    p = _add(sub, "embed", _cmd_embed, "same as `structure embed`", common)
    _embed_arguments(p)

    p = _add(sub, "jin", _cmd_jin, "prefix-density certificate or stepping trace", common)
    p.add_argument("--spec", dest="set", required=True, help="set spec")
    span = p.add_mutually_exclusive_group(required=True)
    span.add_argument("--M", type=int, help="scan the window 1..M")
    span.add_argument("--window", type=_window_range, metavar="LO..HI")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--beta", type=_fraction, required=True)

    ramsey_parser = sub.add_parser("ramsey", help="finite Ramsey tools")
    ramsey_sub = ramsey_parser.add_subparsers(dest="ramsey_command", required=True)
    p = _add(ramsey_sub, "clique", _cmd_ramsey_clique, "greedy monochromatic set of a pair coloring", common)
    p.add_argument("--coloring", required=True, help='file of "i j c" lines')
    p.add_argument("-r", type=int, default=None)
    p = _add(ramsey_sub, "ap3", _cmd_ramsey_ap3, "least monochromatic 3-term progression", common)
    p.add_argument("--coloring", required=True, help="one colour per line")
    p.add_argument("-r", type=int, default=None)

    pr_parser = sub.add_parser("pr", help="partition regularity")
    pr_sub = pr_parser.add_subparsers(dest="pr_command", required=True)
    p = _add(pr_sub, "rado", _cmd_pr_rado, "Rado subset of a coefficient list", common)
    p.add_argument("--c", type=_int_list, required=True)
    p = _add(pr_sub, "search", _cmd_pr_search, "coloring with no monochromatic solution", common)
    p.add_argument("--c", type=_int_list, default=None)
    p.add_argument("--square", action="store_true", help="use x + y = z^2")
    p.add_argument("-r", type=int, required=True)
    p.add_argument("-N", type=int, required=True)
    p.add_argument("--injective", action="store_true")
    p = _add(pr_sub, "quintic", _cmd_pr_quintic, "check the base-5 coloring against x + y = z^2", common)
    p.add_argument("-N", type=int, required=True)
    p = _add(pr_sub, "coeffs", _cmd_pr_coeffs, "coefficients and rows for sum(c) = 0", common)
    p.add_argument("--c", type=_int_list, required=True)

    strings_parser = sub.add_parser("strings", help="the string equivalence calculus")
    strings_sub = strings_parser.add_subparsers(dest="strings_command", required=True)
    p = _add(strings_sub, "canon", _cmd_strings_canon, "canonical form", common)
    p.add_argument("string")
    p = _add(strings_sub, "eq", _cmd_strings_eq, "decide equivalence", common)
    p.add_argument("s")
    p.add_argument("t")

    p = _add(sub, "replay", _cmd_replay, "re-run a manifest and compare", common)
    p.add_argument("manifest")
    return parser


def _command_name(args) -> str:
    parts = [args.command]
    for key in ("structure_command", "ramsey_command", "pr_command", "strings_command"):
        if getattr(args, key, None):
            parts.append(getattr(args, key))
    return " ".join(parts)


def dispatch(argv: Sequence[str], stdout: Optional[TextIO] = None,
             stderr: Optional[TextIO] = None) -> Tuple[Optional[RunManifest], int]:
    """
    Parse argv, run the operation and print its JSON.

    Args:
        argv: Arguments without the program name
        stdout: Stream for the JSON document (default sys.stdout)
        stderr: Stream for the summary (default sys.stderr)

    Returns:
        (RunManifest or None when nothing ran, exit code)
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return None, int(exc.code or 0)

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    limits = config.load_limits(
        threads=args.threads,
        max_window=args.max_window,
        max_search_nodes=args.max_search_nodes,
        time_budget=args.time_budget,
    )
    command = _command_name(args)
    inputs = {k: v for k, v in sorted(vars(args).items())
              if k not in _PLUMBING and not k.endswith("_command") and k != "command"}
    echoed_limits = {k: v for k, v in limits.as_dict().items() if k != "threads"}

    started = time.perf_counter()
    try:
        result, summary = args.handler(args, limits)
    except SpecSyntaxError as exc:
        print(f"hypercomb {command}: {exc}", file=stderr)
        return None, EXIT_USAGE
    except ResourceLimitExceeded as exc:
        print(f"hypercomb {command}: resource limit: {exc}", file=stderr)
        return None, EXIT_LIMIT
    except (HypercombError, OSError) as exc:
        print(f"hypercomb {command}: {exc}", file=stderr)
        return None, EXIT_DOMAIN
    elapsed_ms = (time.perf_counter() - started) * 1000.0

    manifest = RunManifest(command, argv, inputs, echoed_limits, result, round(elapsed_ms, 3), limits.threads)
    print(to_json(manifest.stdout_payload()), file=stdout)
    print(f"hypercomb {command}: {summary} ({elapsed_ms:.1f} ms)", file=stderr)
    if args.manifest_out:
        Path(args.manifest_out).write_text(to_json(manifest.file_payload()) + "\n")
        logger.info("[dispatch] manifest written to %s", args.manifest_out)
    return manifest, EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(
        level=getattr(logging, config.LOG_LEVEL, logging.WARNING),
        stream=sys.stderr,
        format="%(levelname)s %(name)s %(message)s",
    )
    _, code = dispatch(sys.argv[1:] if argv is None else argv)
    return code
