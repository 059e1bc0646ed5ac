"""Command-line front end: build specs, corrupt words, sweep, report.

Exit codes are a contract for CI: 0 success, 1 a within-budget trial
falsified a decoding guarantee (a real bug), 2 configuration or
feasibility trouble.  Every command is deterministic given its flags
including --seed; rationals are passed as NUM/DEN so threshold
integerizations stay exact.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .channel import (
    STRATEGY_NAMES,
    Strategy,
    read_reports,
    run_trials,
    trial_line,
    write_reports,
)
from .common import Profile
from .errors import DeletionCodeError, InfeasibleAtDeskScale
from .highnoise import HighNoiseSpec, hn_rate_report
from .hirate import HiRateSpec, br_guarantee_report, br_rate_report
from .innercode import check_codebook, load_codebook, rate_report
from .listdec import ListDecSpec, ld_report
from .presets import SCHEMES, make_scheme_spec
from .seqkit import (
    Word,
    count_bound_binary,
    count_bound_general,
    count_supersequences,
)

_PROFILES = {"paper": Profile.PAPER_ASYMPTOTIC, "desk": Profile.DESK}


@dataclass
class RunConfig:
    command: str
    scheme: str = "highnoise"
    profile: Profile = Profile.DESK
    eps: Fraction | None = None
    seed: int = 0
    codebook: str | None = None
    out: str | None = None
    strategies: list[str] | None = None
    fractions: list[Fraction] = field(default_factory=list)
    trials: int = 1
    fmt: str = "text"
    overrides: dict = field(default_factory=dict)
    q: int | None = None
    h: int | None = None
    outer: tuple[int, int, int] | None = None
    path: str | None = None
    word: str | None = None
    k: int = 2
    length: int | None = None


def _parse_fraction(text: str) -> Fraction:
    return Fraction(text)


def _parse_overrides(items: list[str]) -> dict:
    out = {}
    for item in items:
        if "=" not in item:
            raise ValueError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        try:
            out[key] = int(value)
        except ValueError:
            try:
                out[key] = Fraction(value)
            except ValueError:
                out[key] = value
    return out


def _parse_strategies(text: str) -> list[str]:
    names = [t.strip().upper() for t in text.split(",") if t.strip()]
    for n in names:
        if n not in STRATEGY_NAMES:
            raise argparse.ArgumentTypeError(
                f"unknown strategy {n!r}; valid: {', '.join(STRATEGY_NAMES)}")
    return names


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="delcodes",
        description="Worst-case deletion codes: build, corrupt, decode, report.")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, spec_flags=True):
        if spec_flags:
            p.add_argument("--scheme", choices=SCHEMES, default="highnoise")
            p.add_argument("--profile", choices=sorted(_PROFILES),
                           default="desk")
            p.add_argument("--eps", type=_parse_fraction, default=None,
                           metavar="NUM/DEN")
            p.add_argument("--q", type=int, default=None)
            p.add_argument("--h", type=int, default=None)
            p.add_argument("--outer", type=int, nargs=3, default=None,
                           metavar=("Q", "N", "K"))
            p.add_argument("--set", action="append", default=[],
                           metavar="KEY=VALUE", dest="overrides")
        p.add_argument("--seed", type=int, default=0, metavar="U64")
        p.add_argument("--codebook", default=None, metavar="PATH")
        p.add_argument("--out", default=None, metavar="PATH")
        p.add_argument("--format", choices=["text", "records"],
                       default="text", dest="fmt")

    p = sub.add_parser("build", help="construct a spec, cache its codebook, "
                                     "print the rate report")
    common(p)

    p = sub.add_parser("roundtrip",
                       help="encode a random message, attack, decode, compare")
    common(p)
    p.add_argument("--strategy", type=_parse_strategies, default=["RANDOM"],
                   metavar="NAME[,NAME...]")
    p.add_argument("--fraction", type=_parse_fraction, default=None,
                   metavar="NUM/DEN")
    p.add_argument("--trials", type=int, default=1)

    p = sub.add_parser("sweep", help="full strategy x fraction x seed sweep")
    common(p)
    p.add_argument("--strategy", type=_parse_strategies, default=None,
                   metavar="NAME[,NAME...]")
    p.add_argument("--fraction", type=lambda t: [Fraction(x) for x in t.split(",")],
                   default=None, metavar="NUM/DEN[,NUM/DEN...]")
    p.add_argument("--trials", type=int, default=20)

    p = sub.add_parser("report", help="summarize a sweep records file")
    p.add_argument("path", metavar="RECORDS")
    p.add_argument("--format", choices=["text", "records"], default="text",
                   dest="fmt")

    p = sub.add_parser("verify-inner",
                       help="re-verify a cached codebook's defining property")
    p.add_argument("--codebook", required=True, metavar="PATH")

    p = sub.add_parser("count",
                       help="supersequence counting oracle and its bounds")
    p.add_argument("--word", required=True, metavar="DIGITS")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--length", type=int, required=True, metavar="M")

    return top


def _config(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=ns.command)
    for name in ("scheme", "eps", "seed", "codebook", "out", "fmt",
                 "trials", "q", "h", "path", "word", "k", "length"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    if hasattr(ns, "profile"):
        cfg.profile = _PROFILES[ns.profile]
    if hasattr(ns, "outer") and ns.outer is not None:
        cfg.outer = tuple(ns.outer)
    if hasattr(ns, "overrides"):
        cfg.overrides = _parse_overrides(ns.overrides)
    if hasattr(ns, "strategy") and ns.strategy is not None:
        cfg.strategies = list(ns.strategy)
    if hasattr(ns, "fraction") and ns.fraction is not None:
        fr = ns.fraction
        cfg.fractions = list(fr) if isinstance(fr, list) else [fr]
    return cfg


def _spec_for(cfg: RunConfig):
    return make_scheme_spec(cfg.scheme, cfg.profile, epsilon=cfg.eps,
                            overrides=cfg.overrides, q=cfg.q, h=cfg.h,
                            outer=cfg.outer, cache_path=cfg.codebook)


def _guarantee_fraction(spec) -> Fraction:
    """Largest deletion fraction the scheme's theorem still covers."""
    if isinstance(spec, HighNoiseSpec):
        return 1 - spec.epsilon
    if isinstance(spec, HiRateSpec):
        return spec.epsilon
    return Fraction(1, 2) - spec.epsilon


def _print_report(title: str, report: dict) -> None:
    print(f"[{title}]")
    for key, value in report.items():
        print(f"  {key} = {value}")


def cmd_build(cfg: RunConfig) -> int:
    spec = _spec_for(cfg)
    if isinstance(spec, HighNoiseSpec):
        _print_report("rate", hn_rate_report(spec))
    elif isinstance(spec, HiRateSpec):
        _print_report("rate", br_rate_report(spec))
        _print_report("guarantee", br_guarantee_report(spec))
    else:
        _print_report("rate and recovery", ld_report(spec))
    book = spec.inner
    inner = rate_report(book)
    _print_report("inner counting", {
        "kind": inner.kind.value,
        "achieved_size": inner.achieved_size,
        "rate": inner.rate,
        "counting_size_bound": inner.size_bound,
        "counting_rate_bound": inner.paper_lower_bound,
        "bound_satisfied": inner.satisfied,
    })
    print(f"inner codebook: {len(book.codewords)} codewords, kind "
          f"{book.kind.value}, full_book={spec.full_book}")
    if cfg.codebook:
        print(f"codebook cached at {cfg.codebook}")
    return 0


def _default_strategies() -> list[str]:
    return [n for n in STRATEGY_NAMES if n != "GREEDY_LCS"]


def _sweep(cfg: RunConfig, default_fraction_list, always_lines=False) -> int:
    spec = _spec_for(cfg)
    guarantee = _guarantee_fraction(spec)
    names = cfg.strategies if cfg.strategies is not None else _default_strategies()
    strategies = [Strategy(n) for n in names]
    fractions = cfg.fractions or default_fraction_list(guarantee)
    reports = run_trials(spec, strategies, fractions, cfg.trials,
                         master_seed=cfg.seed)
    if cfg.out:
        write_reports(reports, cfg.out)
        print(f"{len(reports)} trial records written to {cfg.out}")
    if always_lines or cfg.fmt == "records":
        for r in reports:
            print(trial_line(r))
    else:
        _summary(reports)
    bad = [r for r in reports
           if r.fraction <= guarantee and r.outcome != "ok"]
    if bad:
        print(f"FALSIFIED: {len(bad)} within-budget trials failed "
              f"(guarantee fraction {guarantee})", file=sys.stderr)
        return 1
    return 0


def cmd_roundtrip(cfg: RunConfig) -> int:
    return _sweep(cfg, lambda guarantee: [guarantee], always_lines=True)


def cmd_sweep(cfg: RunConfig) -> int:
    return _sweep(cfg, lambda guarantee: [Fraction(0), guarantee])


def _summary(reports) -> None:
    cells: dict[tuple[str, Fraction], list[int]] = {}
    for r in reports:
        ok, total = cells.setdefault((r.strategy, r.fraction), [0, 0])
        cells[(r.strategy, r.fraction)] = [ok + (r.outcome == "ok"), total + 1]
    if not cells:
        print("no trials")
        return
    width = max(len(s) for s, _ in cells) + 2
    print(f"{'strategy':<{width}}{'fraction':>12}{'ok/total':>12}")
    for (strategy, fraction), (ok, total) in sorted(
            cells.items(), key=lambda kv: (kv[0][0], kv[0][1])):
        print(f"{strategy:<{width}}{str(fraction):>12}{f'{ok}/{total}':>12}")


def cmd_report(cfg: RunConfig) -> int:
    reports = read_reports(cfg.path)
    if cfg.fmt == "records":
        for r in reports:
            print(trial_line(r))
    else:
        _summary(reports)
    return 0


def cmd_verify_inner(cfg: RunConfig) -> int:
    book = load_codebook(cfg.codebook)
    report = check_codebook(book)
    for key, value in report.items():
        if key != "violations":
            print(f"{key} = {value}")
    for v in report["violations"]:
        print(f"violation: {v}")
    return 0 if report["ok"] else 1


def cmd_count(cfg: RunConfig) -> int:
    if cfg.k <= 10:
        digits = [int(c) for c in cfg.word]
    else:
        digits = [int(c) for c in cfg.word.split(",")]
    w = Word(tuple(digits), cfg.k)
    ell = len(digits)
    m = cfg.length
    exact = count_supersequences(w, m, cfg.k)
    general = count_bound_general(ell, m, cfg.k)
    print(f"word length {ell}, target length {m}, alphabet {cfg.k}")
    print(f"exact supersequence count = {exact}")
    print(f"general bound k^(m-l)*C(m,l) = {general}")
    if cfg.k == 2:
        if 2 * ell > m:
            print(f"binary bound (m-l)*C(m,l) = {count_bound_binary(ell, m)}")
        else:
            print("binary bound (m-l)*C(m,l): not stated for l <= m/2")
    return 0


_COMMANDS = {
    "build": cmd_build,
    "roundtrip": cmd_roundtrip,
    "sweep": cmd_sweep,
    "report": cmd_report,
    "verify-inner": cmd_verify_inner,
    "count": cmd_count,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags already; normalize other codes
        return 2 if exc.code not in (0,) else 0
    try:
        cfg = _config(ns)
        return _COMMANDS[ns.command](cfg)
    except InfeasibleAtDeskScale as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    except (DeletionCodeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
