"""Command line front end: ``knotword reduce|check|enumerate|oracle|euler``.

Exit codes: 0 success (reducible, all checks pass), 1 negative result,
2 bad input.  Every command ends its output with a fenced JSON block that
is byte-identical across runs with the same arguments.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .diagram import DiagramError, check_normal_position, label_curve, load_presentation
from .pullback import (PullbackError, build_pullback, check_bounds, classify, config_digest,
                       enumerate_configurations, euler)
from .virtual import check_main_theorem, expand_virtual
from .wordcore import (ReductionTrace, WordError, brute_force_oracle, cyclic_sr_words, is_omega_reducible,
                       is_R_omega_reducible, parse_word)

EXIT_OK, EXIT_NO, EXIT_INPUT = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    target: str | None = None
    partial: bool = False
    replay: str | None = None
    r: int | None = None
    genus_max: int | None = None
    out: str | None = None
    emit_virtual: str | None = None
    jobs: int = 1
    max_length: int = 12
    verbose: int = 0
    extra: dict = field(default_factory=dict)


def _block(data: dict) -> str:
    return "```json\n" + json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n```"


def _emit(lines: list[str], data: dict) -> None:
    print(f"# knotword {__version__}")
    for line in lines:
        print(line)
    print(_block(data))


class _Outputs:
    """Files written under ``--out``, listed with their hashes in a manifest."""

    def __init__(self, root: str | None):
        self.root = Path(root) if root else None
        self.files: dict[str, str] = {}

    def write(self, name: str, text: str) -> None:
        if self.root is None:
            return
        path = self.root / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        self.files[name] = hashlib.sha256(text.encode()).hexdigest()

    def close(self) -> None:
        if self.root is None:
            return
        manifest = json.dumps({"artifacts": dict(sorted(self.files.items()))}, indent=2, sort_keys=True)
        (self.root / "manifest.json").write_text(manifest + "\n")


# --------------------------------------------------------------------------
# commands

def cmd_reduce(cfg: RunConfig) -> int:
    if cfg.replay:
        try:
            trace = ReductionTrace.from_json(Path(cfg.replay).read_text())
        except (OSError, ValueError, KeyError, TypeError) as exc:
            print(f"error: cannot read trace: {exc}", file=sys.stderr)
            return EXIT_INPUT
        try:
            ok = trace.replay()
        except WordError as exc:
            _emit([f"replay failed: {exc}"], {"command": "replay", "valid": False})
            return EXIT_NO
        _emit([f"replay {'verified' if ok else 'did not reach ' + repr(trace.target)}: {trace.initial}"],
              {"command": "replay", "valid": ok, "initial": trace.initial, "steps": len(trace.steps)})
        return EXIT_OK if ok else EXIT_NO
    if cfg.target is None:
        print("error: reduce needs a word or --replay", file=sys.stderr)
        return EXIT_INPUT
    try:
        w = parse_word(cfg.target, cyclic=not cfg.partial)
        ok, trace = (is_R_omega_reducible if cfg.partial else is_omega_reducible)(w)
    except WordError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    prefix = "R-omega" if cfg.partial else "omega"
    verdict = f"{prefix}-{'reducible' if ok else 'irreducible'}"
    lines = [verdict]
    if trace is not None:
        lines.append(str(trace))
    out = _Outputs(cfg.out)
    if trace is not None:
        out.write("trace.json", trace.to_json() + "\n")
    out.close()
    _emit(lines, {"command": "reduce", "word": str(w), "cyclic": not cfg.partial, "verdict": verdict,
                  "trace": json.loads(trace.to_json()) if trace else None})
    return EXIT_OK if ok else EXIT_NO


def cmd_check(cfg: RunConfig) -> int:
    try:
        p = load_presentation(cfg.target)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DiagramError as exc:
        print(f"error: {exc.kind}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = check_normal_position(p)
    try:
        verdicts = check_main_theorem(p)
    except DiagramError as exc:
        print(f"error: {exc.kind}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    lines = [f"presentation {p.name or cfg.target}"]
    for k, r in sorted(report.conditions.items()):
        wit = f"  {list(r.witnesses)}" if r.witnesses else ""
        lines.append(f"condition ({k}): {r.status}{wit}")
    for v in verdicts:
        state = {True: "reducible", False: "IRREDUCIBLE", None: "n/a"}[v.reducible]
        extra = f"  [{v.witness}]" if v.witness else ""
        note = f"  ({v.note})" if v.note else ""
        lines.append(f"curve {v.sign}{v.curve}: {v.word} -> {v.virtual_word}: {state}{extra}{note}")
    out = _Outputs(cfg.emit_virtual)
    if cfg.emit_virtual:
        for c in p.curves():
            if c.arcs:
                vd, _ = expand_virtual(c, p)
                out.write(f"virtual_{'plus' if c.sign == '+' else 'minus'}_{c.id}.dot", vd.to_dot())
    out.close()
    passed = report.ok and all(v.reducible is not False for v in verdicts)
    lines.append("all checks pass" if passed else "checks FAILED")
    _emit(lines, {"command": "check", "conditions": report.to_dict(),
                  "verdicts": [v.to_dict() for v in verdicts], "pass": passed})
    return EXIT_OK if passed else EXIT_NO


def cmd_enumerate(cfg: RunConfig) -> int:
    r = cfg.r
    if r is None or r % 2 or not 4 <= r <= 12:
        print(f"error: --r must be even with 4 <= r <= 12, got {r}", file=sys.stderr)
        return EXIT_INPUT
    report = enumerate_configurations(r, cfg.genus_max, jobs=cfg.jobs)
    lines = ["#    saddles  chi  genus  max_face  faces  census"]
    for k, v, chi, genus, mf, nf, census in report.summary_rows():
        lines.append(f"{k:<4} {v:<8} {chi:<4} {genus:<6} {mf:<9} {nf:<6} {census}")
    lines.append(f"total {len(report.configurations)}; modulo sign swap {report.sign_swap_classes}")
    out = _Outputs(cfg.out)
    for k, g in enumerate(report.configurations):
        stem = f"r{r}_{k:03d}"
        out.write(f"{stem}.dot", g.to_dot(stem))
        out.write(f"{stem}.json", json.dumps(g.to_dict(), sort_keys=True, indent=2) + "\n")
    summary = {"r": r, "genus_max": cfg.genus_max,
               "counts_by_genus": {str(k): v for k, v in report.counts_by_genus().items()},
               "euler_distribution": {str(k): v for k, v in report.euler_distribution().items()},
               "digests": [config_digest(g) for g in report.configurations], "max_face": report.max_face(),
               "total": len(report.configurations), "sign_swap_classes": report.sign_swap_classes}
    out.write("summary.json", json.dumps(summary, sort_keys=True, indent=2) + "\n")
    out.close()
    _emit(lines, {"command": "enumerate", **summary})
    return EXIT_OK


def cmd_oracle(cfg: RunConfig) -> int:
    n = cfg.max_length
    if n < 0 or n > 16:
        print("error: --max-length must lie in 0..16", file=sys.stderr)
        return EXIT_INPUT
    start = time.perf_counter()
    classes = reducible = 0
    bad = []
    for w in cyclic_sr_words(n):
        classes += 1
        fast = is_omega_reducible(w)[0]
        reducible += fast
        if fast != brute_force_oracle(w):
            bad.append(str(w))
    elapsed = time.perf_counter() - start
    lines = [f"{classes} classes up to length {n}, {reducible} reducible, {len(bad)} disagreements",
             f"elapsed {elapsed:.1f}s"]
    _emit(lines, {"command": "oracle", "max_length": n, "classes": classes, "reducible": reducible,
                  "disagreements": bad})
    return EXIT_OK if not bad else EXIT_NO


def cmd_euler(cfg: RunConfig) -> int:
    try:
        p = load_presentation(cfg.target)
        g = build_pullback(p)
        chi = euler(g)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DiagramError, PullbackError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    bounds = check_bounds(g)
    genus = classify(chi)
    lines = [f"V={g.num_saddles} E={2 * g.num_saddles} F={len(g.faces())} chi={chi} genus={genus}",
             f"census {g.census()}  |R|={g.r_count}  bounds {'ok' if bounds.ok else 'VIOLATED'}"]
    out = _Outputs(cfg.out)
    out.write("pullback.dot", g.to_dot())
    out.write("pullback.json", json.dumps(g.to_dict(), sort_keys=True, indent=2) + "\n")
    out.close()
    _emit(lines, {"command": "euler", "euler": chi, "genus": genus, "census": {str(k): v for k, v in g.census().items()},
                  "r": g.r_count, "saddles": g.num_saddles, "bounds": bounds.margins, "bounds_ok": bounds.ok})
    return EXIT_OK if bounds.ok else EXIT_NO


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="knotword", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"knotword {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="decide reducibility of a word")
    p.add_argument("word", nargs="?")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--cyclic", action="store_true", help="cyclic word (default)")
    mode.add_argument("--partial", action="store_true", help="partial word, target a single R")
    p.add_argument("--replay", metavar="TRACE", help="re-apply a stored trace and verify it")
    p.add_argument("--out")

    p = sub.add_parser("check", help="normal position and virtual word verdicts for a presentation")
    p.add_argument("file")
    p.add_argument("--emit-virtual", metavar="DIR")

    p = sub.add_parser("enumerate", help="pullback graph configurations with a given |R|")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--genus-max", type=int)
    p.add_argument("--out")
    p.add_argument("--jobs", type=int, default=None)

    p = sub.add_parser("oracle", help="compare the decider with brute force on all short words")
    p.add_argument("--max-length", type=int, default=12)

    p = sub.add_parser("euler", help="pullback graph and Euler characteristic of a closed presentation")
    p.add_argument("file")
    p.add_argument("--out")
    return parser


def _config(args) -> RunConfig:
    jobs = getattr(args, "jobs", None)
    if jobs is None:
        jobs = int(os.environ.get("KNOTWORD_JOBS", "1") or 1)
    return RunConfig(
        command=args.command,
        target=getattr(args, "word", None) or getattr(args, "file", None),
        partial=getattr(args, "partial", False),
        replay=getattr(args, "replay", None),
        r=getattr(args, "r", None),
        genus_max=getattr(args, "genus_max", None),
        out=getattr(args, "out", None),
        emit_virtual=getattr(args, "emit_virtual", None),
        jobs=max(1, jobs),
        max_length=getattr(args, "max_length", 12),
        verbose=args.verbose,
    )


COMMANDS = {"reduce": cmd_reduce, "check": cmd_check, "enumerate": cmd_enumerate,
            "oracle": cmd_oracle, "euler": cmd_euler}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        cfg = _config(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return COMMANDS[cfg.command](cfg)


if __name__ == "__main__":
    sys.exit(main())
