"""Binary list decoding past the unique-decoding barrier at one half.

With n/2 deletions an adversary can flatten any binary word into all-ones
or all-zeros, so unique decoding is dead there.  This scheme instead
returns a short list while tolerating a 1/2 - epsilon deletion fraction.
A message is outer-encoded, each coordinate c_i is replaced by the
self-identifying pair (i, c_i), and each pair is inner-encoded with a
codebook in which no list_size words share a common subsequence of the
threshold length.  Inner blocks are concatenated directly: no buffers,
because the decoder never tries to find block boundaries.

Decoding slides a grid of windows of length ceil((1/2+delta)*m) over the
received word, pitch ceil(delta*m), plus one window flush with the end.
Every window is inner list-decoded and the surviving pairs are pooled into
per-position candidate sets for the outer list recovery.  An inner block
that kept at least a (1/2+2*delta) fraction of its symbols contains some
grid window as a substring, so its pair always surfaces; averaging the
global deletion budget over blocks leaves at least an epsilon fraction of
such blocks, which is exactly the outer agreement threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .common import Profile
from .errors import (
    AlphabetMismatch,
    InfeasibleAtDeskScale,
    InvalidOverride,
    LengthMismatch,
    OutOfRange,
    TargetUnreachable,
)
from .gf import FieldElem, make_field
from .innercode import (
    CandidatePolicy,
    Codebook,
    CodebookKind,
    greedy_listdec,
    inner_decode_list,
    inner_encode,
    load_codebook,
    save_codebook,
)
from .rsouter import (
    DEFAULT_LIST_GUARD,
    RsParams,
    rs_encode,
    rs_list_recover_bruteforce,
)
from .seqkit import Word

# Largest lexicographic search space before spec construction switches to
# seeded random candidates.
_LEX_SPACE_CAP = 1 << 20


@dataclass(frozen=True)
class ListDecSpec:
    epsilon: Fraction
    delta: Fraction
    m: int
    inner: Codebook
    n_out: int
    k_out: int
    q: int
    ell: int
    rs: RsParams
    profile: Profile

    @property
    def alpha(self) -> Fraction:
        """Agreement fraction the outer recovery demands."""
        return self.epsilon

    @property
    def agree_count(self) -> int:
        return math.ceil(self.alpha * self.n_out)

    @property
    def delta_inner(self) -> Fraction:
        """Deletion fraction the inner codebook list-decodes from."""
        return Fraction(1, 2) - self.delta

    @property
    def window_len(self) -> int:
        return math.ceil((Fraction(1, 2) + self.delta) * self.m)

    @property
    def window_step(self) -> int:
        return math.ceil(self.delta * self.m)

    @property
    def encoded_length(self) -> int:
        return self.n_out * self.m

    @property
    def pair_count(self) -> int:
        return self.n_out * self.q

    @property
    def full_book(self) -> bool:
        return len(self.inner.codewords) >= self.pair_count

    def pair_index(self, position: int, value: int) -> int:
        if not 0 <= position < self.n_out:
            raise OutOfRange(f"position {position} outside [0, {self.n_out})")
        if not 0 <= value < self.q:
            raise OutOfRange(f"value {value} outside [0, {self.q})")
        return position * self.q + value

    def pair_of_index(self, index: int) -> tuple[int, int]:
        return divmod(index, self.q)


@dataclass(frozen=True)
class CandidateList:
    """Union of inner list-decoding results across all windows."""

    n_out: int
    pairs: tuple[tuple[int, int], ...]

    @property
    def per_index_sets(self) -> tuple[frozenset[int], ...]:
        sets: list[set[int]] = [set() for _ in range(self.n_out)]
        for i, v in self.pairs:
            sets[i].add(v)
        return tuple(frozenset(s) for s in sets)

    @property
    def total_size(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class LdTelemetry:
    window_count: int
    max_inner_list: int
    candidates: CandidateList
    output_size: int


@dataclass(frozen=True)
class LdDecodeResult:
    messages: tuple[tuple[FieldElem, ...], ...]
    telemetry: LdTelemetry


_PAPER_KEYS = {"m", "seed", "policy", "attempt_cap"}
_DESK_KEYS = _PAPER_KEYS | {"delta", "list_size", "ell"}


def ld_make_spec(epsilon, outer_params, profile: Profile = Profile.DESK,
                 overrides: dict | None = None, *,
                 cache_path=None) -> ListDecSpec:
    """Validate parameters and build (or load) the inner codebook.

    outer_params is (q, n_out, k_out).  PAPER_ASYMPTOTIC pins the grid
    pitch at delta = epsilon/4, the inner list size at ceil(1/delta^2),
    and the recovery budget at ell = ceil(1/delta^3); DESK may override
    all three.  The inner block length m has no closed form at finite
    scale, so both profiles take it from overrides.  The inner target is
    one codeword per (position, value) pair; a DESK book that comes up
    short stays valid, with the shortfall visible via full_book.
    """
    eps = Fraction(epsilon)
    if not 0 < eps < Fraction(1, 2):
        raise OutOfRange(f"epsilon {eps} out of theorem range (0, 1/2)")
    q, n_out, k_out = (int(x) for x in outer_params)
    overrides = dict(overrides or {})
    allowed = _PAPER_KEYS if profile is Profile.PAPER_ASYMPTOTIC else _DESK_KEYS
    unknown = set(overrides) - allowed
    if unknown:
        raise InvalidOverride(
            f"override keys {sorted(unknown)} not allowed under {profile.name}")
    if "m" not in overrides:
        raise InvalidOverride("inner block length m must be supplied")

    field = make_field(q)
    if not 1 <= k_out <= n_out <= q:
        raise OutOfRange(f"need 1 <= k_out <= n_out <= q, got "
                         f"{k_out}, {n_out}, {q}")
    if field.order ** k_out > DEFAULT_LIST_GUARD:
        raise InfeasibleAtDeskScale(
            f"outer recovery would enumerate {field.order}^{k_out} messages, "
            f"above the brute-force guard {DEFAULT_LIST_GUARD}")

    delta = Fraction(overrides.get("delta", eps / 4))
    if not 0 < delta < Fraction(1, 2):
        raise OutOfRange(f"window pitch delta {delta} outside (0, 1/2)")
    m = int(overrides["m"])
    if m < 1:
        raise OutOfRange(f"inner length must be >= 1, got {m}")
    list_size = int(overrides.get("list_size", math.ceil(1 / delta**2)))
    if list_size < 2:
        raise OutOfRange(f"inner list size must be >= 2, got {list_size}")
    ell = int(overrides.get("ell", math.ceil(1 / delta**3)))
    if ell < 1:
        raise OutOfRange(f"recovery budget must be >= 1, got {ell}")

    delta_in = Fraction(1, 2) - delta
    target = n_out * q
    seed = int(overrides.get("seed", 0))
    if "policy" in overrides:
        policy = CandidatePolicy(overrides["policy"])
    else:
        policy = (CandidatePolicy.LEX if 2**m <= _LEX_SPACE_CAP
                  else CandidatePolicy.SEEDED_RANDOM)
    attempt_cap = int(overrides.get("attempt_cap", 200_000))

    inner = None
    if cache_path is not None:
        try:
            cached = load_codebook(cache_path)
        except FileNotFoundError:
            cached = None
        if cached is not None:
            if (cached.kind is not CodebookKind.LISTDEC or cached.m != m
                    or cached.delta != delta_in
                    or cached.list_size != list_size):
                raise InvalidOverride(
                    f"cache {cache_path} holds a different codebook shape")
            inner = cached
    if inner is None:
        try:
            inner = greedy_listdec(m, delta_in, list_size, target_size=target,
                                   policy=policy, seed=seed,
                                   attempt_cap=attempt_cap)
        except TargetUnreachable as exc:
            if profile is Profile.PAPER_ASYMPTOTIC:
                raise InfeasibleAtDeskScale(
                    f"inner codebook reached {len(exc.codebook.codewords)} of "
                    f"{target} codewords within {attempt_cap} attempts"
                ) from exc
            inner = exc.codebook
        if cache_path is not None:
            save_codebook(inner, cache_path)

    rs = RsParams(field, n_out, k_out)
    return ListDecSpec(eps, delta, m, inner, n_out, k_out, q, ell, rs, profile)


def ld_report(spec: ListDecSpec) -> dict:
    """Achieved rate and list-size budget next to the asymptotic recipe.

    The outer recovery is consumed through its interface (candidate sets
    in, agreement threshold, list out), so the recipe parameters s and r
    and the threshold condition alpha > (s+1) (K/N)^(s/(s+1)) ell^(1/(s+1))
    are evaluated here for inspection only; nothing downstream depends on
    them.
    """
    eps = float(spec.epsilon)
    achieved = (spec.k_out * math.log2(spec.q)) / spec.encoded_length
    s = max(1, math.ceil(math.log2(1 / eps)))
    ratio = spec.k_out / spec.n_out
    threshold_rhs = (s + 1) * ratio ** (s / (s + 1)) * spec.ell ** (1 / (s + 1))
    return {
        "achieved_rate": achieved,
        "claimed_rate_scale": eps**3,
        "window_len": spec.window_len,
        "window_step": spec.window_step,
        "inner_list_size": spec.inner.list_size,
        "inner_book_size": len(spec.inner.codewords),
        "pair_count": spec.pair_count,
        "ell": spec.ell,
        "candidate_budget": spec.ell * spec.n_out,
        "alpha": float(spec.alpha),
        "agree_count": spec.agree_count,
        "recipe_s": s,
        "recipe_r": 2,
        "recipe_threshold_rhs": threshold_rhs,
        "recipe_threshold_met": eps > threshold_rhs,
    }


def ld_encode(spec: ListDecSpec, message) -> Word:
    """Outer-encode, pair-label each coordinate, inner-encode, concatenate."""
    values = _message_values(spec, message)
    code = rs_encode(spec.rs.field, values, spec.n_out)
    out: list[int] = []
    for i, c in enumerate(code):
        pair = spec.pair_index(i, c.value)
        if pair >= len(spec.inner.codewords):
            raise InfeasibleAtDeskScale(
                f"pair ({i}, {c.value}) needs inner index {pair} but the book "
                f"holds {len(spec.inner.codewords)} codewords")
        out.extend(inner_encode(spec.inner, pair).symbols)
    return Word(tuple(out), 2)


def _message_values(spec: ListDecSpec, message) -> list[int]:
    msg = list(message)
    if len(msg) != spec.k_out:
        raise LengthMismatch(
            f"message length {len(msg)} != dimension {spec.k_out}")
    out = []
    for v in msg:
        if isinstance(v, FieldElem):
            if v.field != spec.rs.field:
                raise AlphabetMismatch("message element from a different field")
            out.append(v.value)
        else:
            out.append(spec.rs.field.elem(int(v)).value)
    return out


def ld_windows(spec: ListDecSpec, received: Word) -> list[tuple[int, Word]]:
    """Fixed grid of windows over the received word.

    Full windows of length window_len start at multiples of window_step,
    as far as the received length allows, plus one window flush with the
    end.  A received word shorter than a window becomes a single window.
    The grid is position arithmetic only; nothing here inspects symbols.
    """
    if received.alphabet_size != 2:
        raise AlphabetMismatch("received word must be binary")
    syms = received.symbols
    w = spec.window_len
    if len(syms) <= w:
        return [(0, received)]
    starts = list(range(0, len(syms) - w + 1, spec.window_step))
    if starts[-1] != len(syms) - w:
        starts.append(len(syms) - w)
    return [(s, Word(syms[s:s + w], 2)) for s in starts]


def ld_decode(spec: ListDecSpec, received: Word) -> LdDecodeResult:
    """List-decode every window, pool pairs, run outer list recovery.

    Candidates only ever accumulate, so a window that decodes to garbage
    can enlarge the sets but never evict the transmitted pair; the
    returned list is guaranteed to contain the transmitted message while
    deletions stay within floor((1/2 - epsilon) * encoded_length).
    """
    windows = ld_windows(spec, received)
    pairs: set[tuple[int, int]] = set()
    max_list = 0
    for _, win in windows:
        hits = inner_decode_list(spec.inner, win)
        max_list = max(max_list, len(hits))
        for idx in hits:
            i, v = spec.pair_of_index(idx)
            if i < spec.n_out:
                pairs.add((i, v))
    candidates = CandidateList(spec.n_out, tuple(sorted(pairs)))
    sets = [set(s) for s in candidates.per_index_sets]
    messages = rs_list_recover_bruteforce(spec.rs.field, sets, spec.k_out,
                                          spec.agree_count)
    telemetry = LdTelemetry(
        window_count=len(windows),
        max_inner_list=max_list,
        candidates=candidates,
        output_size=len(messages),
    )
    return LdDecodeResult(tuple(tuple(m) for m in messages), telemetry)
