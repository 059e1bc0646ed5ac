"""Greedy inner code constructions and their decoders.

Three codebook kinds share one greedy engine:

* UNIQUE: every pair of codewords has LCS below the separation threshold, so
  any sufficiently long received subsequence identifies its codeword.
* DENSE: UNIQUE restricted to binary words that are beta-dense and begin and
  end with 1, which keeps zero runs short enough to never look like a buffer.
* LISTDEC: no ``list_size`` codewords share a common subsequence of threshold
  length, so every long-enough received word matches at most list_size - 1
  codewords.

The separation threshold for a codebook correcting a delta fraction of
deletions is ell = ceil((1 - delta) * m); acceptance tests are strict
(LCS <= ell - 1, or no full subset sharing an ell-subsequence).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path

from . import seqkit
from .errors import (
    Ambiguous,
    AlphabetMismatch,
    GuardExceeded,
    IndexOutOfRange,
    NoMatch,
    NotBinary,
    OutOfRange,
    TargetUnreachable,
)
from .seqkit import Word

DEFAULT_ATTEMPT_CAP = 200_000


class CodebookKind(Enum):
    UNIQUE = "UNIQUE"
    DENSE = "DENSE"
    LISTDEC = "LISTDEC"


class CandidatePolicy(Enum):
    LEX = "LEX"
    SEEDED_RANDOM = "SEEDED_RANDOM"


@dataclass(frozen=True)
class Codebook:
    """An ordered collection of codewords plus the parameters that built it."""

    kind: CodebookKind
    k: int
    m: int
    delta: Fraction
    beta: Fraction | None
    list_size: int | None
    codewords: tuple[Word, ...]
    seed: int
    candidate_policy: CandidatePolicy

    def __len__(self) -> int:
        return len(self.codewords)

    @property
    def separation_threshold(self) -> int:
        """Codeword pairs (or list_size-subsets) share no common subsequence
        of this length."""
        return separation_threshold(self.m, self.delta)


def separation_threshold(m: int, delta: Fraction) -> int:
    return math.ceil((1 - Fraction(delta)) * m)


def _lex_stream(k: int, m: int):
    for code in range(k**m):
        syms = []
        v = code
        for _ in range(m):
            syms.append(v % k)
            v //= k
        yield tuple(reversed(syms))


def _random_stream(k: int, m: int, rng: random.Random, cap: int):
    for _ in range(cap):
        yield tuple(rng.randrange(k) for _ in range(m))


def dense_layout(m: int, delta: Fraction,
                 zeros: int | None = None,
                 min_gap: int | None = None) -> tuple[int, int]:
    """Default (zeros, min_gap) for dense candidates of length m.

    Candidates carry `zeros` isolated zeros, each consecutive pair separated
    by at least `min_gap` ones, with a one at both ends.  Wide gaps keep every
    internal zero run short (boundary markers stay unambiguous downstream) and
    same-zero-count words with scattered placements separate well under LCS.
    The default picks the largest zero count that still leaves placement slack
    of at least `zeros`, so the candidate stream has room to vary.
    """
    if m < 2:
        raise OutOfRange(f"dense words need m >= 2, got {m}")
    d = max(1, int(delta * m))
    g = min_gap if min_gap is not None else max(2, d)
    if zeros is not None:
        z = zeros
    else:
        fit = (m - 2 + g) // (g + 1)
        rich = (m - 2 + g) // (g + 2)
        z = max(0, min(rich if rich >= 1 else fit, fit, (m - 1) // 2))
    if z > 0 and (z - 1) * g + 2 + z > m:
        raise OutOfRange(
            f"cannot fit {z} zeros with gaps >= {g} into length {m}")
    return z, g


def _random_dense_stream(m: int, rng: random.Random, cap: int, z: int, g: int):
    # One candidate = a composition of the slack over z + 1 one-runs, drawn
    # uniformly via stars and bars.
    slack = m - z - 2 - max(0, z - 1) * g
    if z == 0:
        for _ in range(cap):
            yield (1,) * m
        return
    for _ in range(cap):
        bars = sorted(rng.sample(range(slack + z), z))
        runs = []
        prev = -1
        for b in bars:
            runs.append(b - prev - 1)
            prev = b
        runs.append(slack + z - 1 - prev)
        syms = [1] * (runs[0] + 1)
        for i in range(1, z + 1):
            base = g if i < z else 0
            syms.append(0)
            syms.extend([1] * (runs[i] + base))
        syms.append(1)
        yield tuple(syms)


def _dense_ok(syms: tuple[int, ...], win: int, need: int) -> bool:
    if syms[0] != 1 or syms[-1] != 1:
        return False
    m = len(syms)
    if win >= m:
        return sum(syms) >= need
    count = sum(syms[:win])
    if count < need:
        return False
    for i in range(win, m):
        count += syms[i] - syms[i - win]
        if count < need:
            return False
    return True


def _build(kind: CodebookKind, k: int, m: int, delta: Fraction,
           beta: Fraction | None, list_size: int | None,
           target_size: int | None, policy: CandidatePolicy, seed: int,
           attempt_cap: int, guard: int,
           zeros: int | None = None, min_gap: int | None = None) -> Codebook:
    delta = Fraction(delta)
    if k < 2:
        raise OutOfRange(f"alphabet size must be >= 2, got {k}")
    if m < 1:
        raise OutOfRange(f"codeword length must be >= 1, got {m}")
    if not 0 < delta <= 1:
        raise OutOfRange(f"deletion fraction must lie in (0, 1], got {delta}")
    if target_size is not None and target_size < 1:
        raise OutOfRange(f"target size must be >= 1, got {target_size}")
    ell = separation_threshold(m, delta)

    win = need = 0
    if kind is CodebookKind.DENSE:
        if k != 2:
            raise NotBinary("dense codebooks are binary")
        beta = Fraction(beta)
        if not 0 < beta <= 1:
            raise OutOfRange(f"beta must lie in (0, 1], got {beta}")
        if beta * m < 1:
            raise OutOfRange(f"beta * m = {beta * m} is below 1")
        win = math.ceil(beta * m)
        need = math.ceil(beta * m / 10)
    if kind is CodebookKind.LISTDEC:
        if k != 2:
            raise NotBinary("list-decodable codebooks are binary")
        if list_size is None or list_size < 2:
            raise OutOfRange(f"list size must be >= 2, got {list_size}")

    rng = random.Random(seed)
    if policy is CandidatePolicy.LEX:
        stream = _lex_stream(k, m)
    elif kind is CodebookKind.DENSE:
        z, g = dense_layout(m, delta, zeros, min_gap)
        stream = _random_dense_stream(m, rng, attempt_cap, z, g)
    else:
        stream = _random_stream(k, m, rng, attempt_cap)

    accepted: list[Word] = []
    accepted_syms: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    # For LISTDEC: sharing_levels[j] holds the index-(j+1)-subsets of accepted
    # codewords that still share a common subsequence of length ell.  A new
    # codeword can only complete a violating full subset through one of these.
    # Built lazily: with fewer than list_size - 1 accepted words no violating
    # subset can exist, and at asymptotic-recipe list sizes (list_size far
    # beyond the target book) that moment never arrives.
    sharing_levels: list[list[tuple[int, ...]]] | None = None

    def extend_sharing(syms: tuple[int, ...], cw: Word, idx: int) -> None:
        # Thread word idx through the structure; words 0..idx-1 are in.
        cache: dict[int, int] = {}

        def lcs_with(i: int) -> int:
            if i not in cache:
                cache[i] = seqkit._lcs_seq(syms, accepted_syms[i])
            return cache[i]

        new_by_size: list[list[tuple[int, ...]]] = [[(idx,)]]
        for j in range(1, list_size - 1):
            grown = []
            for base in sharing_levels[j - 1]:
                if all(lcs_with(i) >= ell for i in base):
                    group = [accepted[i] for i in base] + [cw]
                    if seqkit.common_subsequence_at_least(group, ell, guard=guard):
                        grown.append(base + (idx,))
            new_by_size.append(grown)
        for j in range(list_size - 1):
            sharing_levels[j].extend(new_by_size[j])

    def listdec_accepts(cand: tuple[int, ...]) -> bool:
        nonlocal sharing_levels
        if cand in seen:
            return False
        if len(accepted) + 1 < list_size:
            return True
        if sharing_levels is None:
            sharing_levels = [[] for _ in range(list_size - 1)]
            for i, syms in enumerate(accepted_syms):
                extend_sharing(syms, accepted[i], i)
        cw = Word(cand, k)
        cache: dict[int, int] = {}

        def lcs_with(i: int) -> int:
            if i not in cache:
                cache[i] = seqkit._lcs_seq(cand, accepted_syms[i])
            return cache[i]

        top = sharing_levels[list_size - 2]
        for subset in top:
            if all(lcs_with(i) >= ell for i in subset):
                group = [accepted[i] for i in subset] + [cw]
                if seqkit.common_subsequence_at_least(group, ell, guard=guard):
                    return False
        extend_sharing(cand, cw, len(accepted))
        return True

    target = target_size
    for cand in stream:
        if kind is CodebookKind.DENSE and not _dense_ok(cand, win, need):
            continue
        if kind is CodebookKind.LISTDEC:
            ok = listdec_accepts(cand)
        else:
            ok = all(seqkit._lcs_seq(cand, a) < ell for a in accepted_syms)
        if ok:
            accepted.append(Word(cand, k))
            accepted_syms.append(cand)
            seen.add(cand)
            if target is not None and len(accepted) >= target:
                break

    cb = Codebook(kind, k, m, delta, beta if kind is CodebookKind.DENSE else None,
                  list_size if kind is CodebookKind.LISTDEC else None,
                  tuple(accepted), seed, policy)
    if target is not None and len(accepted) < target:
        raise TargetUnreachable(
            f"{kind.value} construction reached {len(accepted)} of {target} codewords",
            codebook=cb,
        )
    return cb


def greedy_unique(k: int, m: int, delta: Fraction,
                  target_size: int | None = None,
                  policy: CandidatePolicy = CandidatePolicy.LEX,
                  seed: int = 0, attempt_cap: int = DEFAULT_ATTEMPT_CAP,
                  guard: int = seqkit.DEFAULT_TABLE_GUARD) -> Codebook:
    """Greedily collect words over [k]^m whose pairwise LCS stays below the
    separation threshold for a delta fraction of deletions."""
    return _build(CodebookKind.UNIQUE, k, m, delta, None, None,
                  target_size, policy, seed, attempt_cap, guard)


def greedy_dense(m: int, delta: Fraction, beta: Fraction,
                 target_size: int | None = None,
                 policy: CandidatePolicy = CandidatePolicy.LEX,
                 seed: int = 0, attempt_cap: int = DEFAULT_ATTEMPT_CAP,
                 guard: int = seqkit.DEFAULT_TABLE_GUARD,
                 zeros: int | None = None,
                 min_gap: int | None = None) -> Codebook:
    """greedy_unique over binary words restricted to beta-dense candidates
    that begin and end with 1.

    Under the RANDOM policy candidates follow the wide-gap layout from
    dense_layout; zeros/min_gap override its defaults.
    """
    return _build(CodebookKind.DENSE, 2, m, delta, beta, None,
                  target_size, policy, seed, attempt_cap, guard,
                  zeros=zeros, min_gap=min_gap)


def greedy_listdec(m: int, delta: Fraction, list_size: int,
                   target_size: int | None = None,
                   policy: CandidatePolicy = CandidatePolicy.LEX,
                   seed: int = 0, attempt_cap: int = DEFAULT_ATTEMPT_CAP,
                   guard: int = seqkit.DEFAULT_TABLE_GUARD) -> Codebook:
    """Greedily collect binary words so that no list_size of them share a
    common subsequence of the threshold length."""
    return _build(CodebookKind.LISTDEC, 2, m, delta, None, list_size,
                  target_size, policy, seed, attempt_cap, guard)


def inner_encode(cb: Codebook, index: int) -> Word:
    if not 0 <= index < len(cb.codewords):
        raise IndexOutOfRange(
            f"index {index} outside codebook of size {len(cb.codewords)}"
        )
    return cb.codewords[index]


def inner_decode_unique(cb: Codebook, received: Word) -> int:
    """Index of the unique codeword containing received as a subsequence."""
    if received.alphabet_size != cb.k:
        raise AlphabetMismatch(
            f"received alphabet {received.alphabet_size} vs codebook {cb.k}"
        )
    found = -1
    for i, cw in enumerate(cb.codewords):
        if seqkit._is_subseq_seq(received.symbols, cw.symbols):
            if found >= 0:
                raise Ambiguous(f"codewords {found} and {i} both contain received")
            found = i
    if found < 0:
        raise NoMatch("no codeword contains the received word")
    return found


def inner_decode_list(cb: Codebook, received: Word) -> list[int]:
    """Indices of all codewords containing received as a subsequence."""
    if received.alphabet_size != cb.k:
        raise AlphabetMismatch(
            f"received alphabet {received.alphabet_size} vs codebook {cb.k}"
        )
    return [i for i, cw in enumerate(cb.codewords)
            if seqkit._is_subseq_seq(received.symbols, cw.symbols)]


# ---------------------------------------------------------------------------
# Rate accounting


@dataclass(frozen=True)
class RateReport:
    """Achieved rate next to the greedy counting guarantee.

    size_bound is the largest codebook size the counting argument promises;
    satisfied records whether the built codebook reached it.  For LISTDEC
    books the bound comes from the random-coding rate 1 - h(delta) - 3/L
    instead of the blocking count.
    """

    kind: CodebookKind
    achieved_size: int
    rate: float
    size_bound: int
    paper_lower_bound: float
    satisfied: bool


def count_dense_words(m: int, beta: Fraction, guard_states: int = 1 << 21) -> int:
    """Exact number of binary length-m words that are beta-dense and begin
    and end with 1, via a sliding-window transfer dynamic program."""
    beta = Fraction(beta)
    if not 0 < beta <= 1:
        raise OutOfRange(f"beta must lie in (0, 1], got {beta}")
    if beta * m < 1:
        raise OutOfRange(f"beta * m = {beta * m} is below 1")
    win = math.ceil(beta * m)
    need = math.ceil(beta * m / 10)
    if m == 1:
        return 1 if need <= 1 else 0
    if win >= m:
        return sum(math.comb(m - 2, j - 2) for j in range(max(need, 2), m + 1))
    if win == 1:
        return 1 if need <= 1 else 0
    if 1 << (win - 1) > guard_states:
        raise GuardExceeded(f"window of {win} needs too many states")
    states: dict[tuple[int, ...], int] = {(1,): 1}
    for _ in range(1, m):
        nxt: dict[tuple[int, ...], int] = {}
        for hist, cnt in states.items():
            for b in (0, 1):
                grown = hist + (b,)
                if len(grown) >= win and sum(grown[-win:]) < need:
                    continue
                key = grown[-(win - 1):] if win > 1 else ()
                nxt[key] = nxt.get(key, 0) + cnt
        states = nxt
    return sum(cnt for hist, cnt in states.items() if hist[-1] == 1)


def rate_report(cb: Codebook) -> RateReport:
    m, k = cb.m, cb.k
    ell = cb.separation_threshold
    size = len(cb.codewords)
    rate = math.log(size, k) / m if size >= 1 else 0.0

    if cb.kind is CodebookKind.LISTDEC:
        r_exist = 1.0 - seqkit.entropy(cb.delta) - 3.0 / cb.list_size
        bound = math.floor(2 ** (r_exist * m)) if r_exist > 0 else 0
        return RateReport(cb.kind, size, rate, bound,
                          max(r_exist, 0.0), size >= bound)

    # Each chosen word blocks at most (number of its ell-subsequences) times
    # (supersequence count per ell-pattern) later candidates.
    blocked = math.comb(m, ell) * seqkit.count_bound_general(ell, m, k)
    if k == 2 and 2 * ell > m and ell < m:
        blocked = min(blocked, math.comb(m, ell) * seqkit.count_bound_binary(ell, m))
    if cb.kind is CodebookKind.DENSE:
        pool = count_dense_words(m, cb.beta)
    else:
        pool = k**m
    bound = pool // blocked if blocked > 0 else 0
    paper_rate = math.log(bound, k) / m if bound >= 1 else 0.0
    return RateReport(cb.kind, size, rate, bound, paper_rate, size >= bound)


# ---------------------------------------------------------------------------
# Persistence

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def _format_codeword(w: Word) -> str:
    if w.alphabet_size <= 36:
        return w.digits()
    return ",".join(str(s) for s in w.symbols)


def _parse_codeword(text: str, k: int) -> Word:
    if k <= 36:
        return Word.from_digits(text, k)
    return Word(tuple(int(p) for p in text.split(",")), k)


def save_codebook(cb: Codebook, path: str | Path) -> None:
    """Write the one-header-line text form; symbols above base 36 fall back
    to comma-separated integers."""
    beta = cb.beta if cb.beta is not None else Fraction(0, 1)
    lsz = cb.list_size if cb.list_size is not None else 0
    lines = [
        f"{cb.kind.value} {cb.k} {cb.m} {cb.delta.numerator} {cb.delta.denominator} "
        f"{beta.numerator} {beta.denominator} {lsz} {cb.seed} "
        f"{cb.candidate_policy.value} {len(cb.codewords)}"
    ]
    lines.extend(_format_codeword(w) for w in cb.codewords)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_codebook(path: str | Path) -> Codebook:
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    if len(head) != 11:
        raise ValueError(f"bad codebook header: {lines[0]!r}")
    kind = CodebookKind(head[0])
    k, m = int(head[1]), int(head[2])
    delta = Fraction(int(head[3]), int(head[4]))
    beta = Fraction(int(head[5]), int(head[6]))
    lsz = int(head[7])
    seed = int(head[8])
    policy = CandidatePolicy(head[9])
    count = int(head[10])
    words = tuple(_parse_codeword(ln, k) for ln in lines[1:])
    if len(words) != count:
        raise ValueError(f"expected {count} codewords, found {len(words)}")
    return Codebook(kind, k, m, delta,
                    beta if kind is CodebookKind.DENSE else None,
                    lsz if kind is CodebookKind.LISTDEC else None,
                    words, seed, policy)


# ---------------------------------------------------------------------------
# Invariant checking (used by the verify-inner command and the test suite)


def check_codebook(cb: Codebook, exhaustive_limit: int = 1 << 14,
                   sample: int = 2000, seed: int = 0) -> dict:
    """Re-verify the defining property of a codebook.

    Returns a report dict with an ``ok`` flag.  UNIQUE and DENSE books get
    the full pairwise LCS check; LISTDEC books get the every-received-word
    check, exhaustive when 2^ell is at most exhaustive_limit, else sampled.
    """
    ell = cb.separation_threshold
    report: dict = {"kind": cb.kind.value, "size": len(cb.codewords),
                    "separation_threshold": ell, "ok": True, "violations": []}
    words = cb.codewords
    if len(set(w.symbols for w in words)) != len(words):
        report["ok"] = False
        report["violations"].append("duplicate codewords")
    for w in words:
        if len(w) != cb.m or w.alphabet_size != cb.k:
            report["ok"] = False
            report["violations"].append("codeword shape mismatch")
            break

    if cb.kind in (CodebookKind.UNIQUE, CodebookKind.DENSE):
        worst = 0
        for i in range(len(words)):
            for j in range(i + 1, len(words)):
                v = seqkit._lcs_seq(words[i].symbols, words[j].symbols)
                worst = max(worst, v)
                if v >= ell:
                    report["ok"] = False
                    report["violations"].append(f"pair ({i}, {j}) has lcs {v}")
        report["max_pairwise_lcs"] = worst
        if cb.kind is CodebookKind.DENSE:
            for i, w in enumerate(words):
                if not (w.symbols and w.symbols[0] == 1 and w.symbols[-1] == 1
                        and seqkit.is_beta_dense(w, cb.beta)):
                    report["ok"] = False
                    report["violations"].append(f"codeword {i} not dense")
        return report

    # LISTDEC: no received word of length ell may match list_size codewords.
    lsz = cb.list_size
    worst_list = 0
    if 2**ell <= exhaustive_limit:
        space = range(2**ell)
        report["mode"] = "exhaustive"
    else:
        rng = random.Random(seed)
        space = [rng.getrandbits(ell) for _ in range(sample)]
        report["mode"] = f"sampled({sample})"
    for enc in space:
        probe = tuple((enc >> (ell - 1 - i)) & 1 for i in range(ell))
        hits = sum(1 for w in words if seqkit._is_subseq_seq(probe, w.symbols))
        worst_list = max(worst_list, hits)
        if hits >= lsz:
            report["ok"] = False
            report["violations"].append(
                f"word {''.join(map(str, probe))} matches {hits} codewords"
            )
    report["max_list_size"] = worst_list
    return report
