"""Agreement counts and per-coordinate plurality calculus over codeword sets.

For a set of codewords, the plurality at coordinate j is the largest
fraction sharing one symbol there. The coordinate-wise plurality word
maximizes the total agreement with the set over all received words, which
turns several otherwise-exponential maxima into per-coordinate counts.
Counts stay exact integers; fractions are rationals; floats appear only in
report payloads.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InfeasibleError
from .galois import Field
from .linear_code import DEFAULT_CODEWORD_BUDGET, LinearCode
from .seeds import rng_for

DEFAULT_SUBSET_BUDGET = 1 << 22
DEFAULT_SCAN_BUDGET = 1 << 28


def agreement(x, y) -> int:
    """Number of coordinates where two equal-length words agree."""
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    return sum(a == b for a, b in zip(x, y))


@dataclass(frozen=True)
class MessageSet:
    """An ordered, duplicate-free set of messages."""

    messages: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        msgs = tuple(tuple(int(v) for v in m) for m in self.messages)
        object.__setattr__(self, "messages", msgs)
        if not msgs:
            raise ValueError("message set must be non-empty")
        if len(set(msgs)) != len(msgs):
            raise ValueError("duplicate messages")
        if len({len(m) for m in msgs}) != 1:
            raise ValueError("messages of mixed length")

    def __len__(self) -> int:
        return len(self.messages)

    def __iter__(self):
        return iter(self.messages)


@dataclass(frozen=True)
class PluralityProfile:
    """Per-coordinate plurality data for a fixed codeword set of size L.

    tallies[j] lists (symbol, count) pairs sorted by symbol; counts[j] is
    the plurality count; maximizers[j] is the smallest symbol attaining it.
    """

    size: int
    length: int
    tallies: tuple[tuple[tuple[int, int], ...], ...]
    counts: tuple[int, ...]
    maximizers: tuple[int, ...]

    @property
    def pl(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.size) for c in self.counts)

    def support(self, j: int) -> tuple[int, ...]:
        return tuple(s for s, _ in self.tallies[j])

    def count(self, j: int, symbol: int) -> int:
        for s, c in self.tallies[j]:
            if s == symbol:
                return c
        return 0

    def mass(self) -> Fraction:
        """Sum of the plurality fractions over all coordinates."""
        return Fraction(sum(self.counts), self.size)


def profile_from_words(words) -> PluralityProfile:
    words = [tuple(w) for w in words]
    n = len(words[0])
    tallies = []
    counts = []
    maximizers = []
    for j in range(n):
        tally = Counter(w[j] for w in words)
        best = max(tally.values())
        counts.append(best)
        maximizers.append(min(s for s, c in tally.items() if c == best))
        tallies.append(tuple(sorted(tally.items())))
    return PluralityProfile(
        size=len(words),
        length=n,
        tallies=tuple(tallies),
        counts=tuple(counts),
        maximizers=tuple(maximizers),
    )


def plurality_profile(code: LinearCode, lam: MessageSet) -> PluralityProfile:
    """Plurality profile of the codewords of a message set."""
    return profile_from_words([code.encode(m) for m in lam])


def plurality_counts_array(words: np.ndarray, q: int) -> tuple[np.ndarray, np.ndarray]:
    """(plurality counts, smallest maximizing symbol) per coordinate, vectorized.

    words is an (L, n) integer array; ties resolve to the smallest symbol
    because argmax returns the first maximum.
    """
    symbol_counts = (words[None, :, :] == np.arange(q)[:, None, None]).sum(axis=1)
    return symbol_counts.max(axis=0), symbol_counts.argmax(axis=0)


def max_agreement_sum(code: LinearCode, lam: MessageSet) -> tuple[int, tuple[int, ...]]:
    """Maximum over received words z of the summed agreement with the set.

    The maximum is attained by the coordinate-wise plurality word, so the
    value equals the sum of plurality counts (size L times the plurality
    mass). Returns (value, witness z).
    """
    prof = plurality_profile(code, lam)
    return sum(prof.counts), prof.maximizers


# -- received-word enumeration helpers (shared with the oracle) --------------


def iter_received_blocks(q: int, n: int, chunk: int = 1 << 14):
    """Yield (start_index, block) over all q^n received words in lexicographic
    order, first coordinate most significant."""
    total = q**n
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        block = np.empty((len(idx), n), dtype=np.int64)
        rem = idx
        for j in range(n - 1, -1, -1):
            block[:, j] = rem % q
            rem = rem // q
        yield start, block


def agreement_block(received: np.ndarray, words: np.ndarray) -> np.ndarray:
    """(m, N) agreement counts between m received words and N codewords."""
    acc = np.zeros((received.shape[0], words.shape[0]), dtype=np.int32)
    for j in range(received.shape[1]):
        acc += received[:, j : j + 1] == words[None, :, j]
    return acc


def received_word(q: int, n: int, index: int) -> tuple[int, ...]:
    digits = []
    for _ in range(n):
        index, d = divmod(index, q)
        digits.append(d)
    return tuple(reversed(digits))


# -- plurality mass (max over codeword sets) ---------------------------------


@dataclass(frozen=True)
class MassResult:
    """Result of a plurality-mass computation at list size L."""

    list_size: int
    value: Fraction
    exact: bool
    lower_bound: bool
    mode: str
    route: str | None
    witness_codewords: tuple[tuple[int, ...], ...]
    witness_received: tuple[int, ...] | None

    def as_dict(self) -> dict:
        return {
            "list_size": self.list_size,
            "value": str(self.value),
            "value_float": float(self.value),
            "exact": self.exact,
            "lower_bound": self.lower_bound,
            "mode": self.mode,
            "route": self.route,
            "witness_codewords": [list(w) for w in self.witness_codewords],
            "witness_received": list(self.witness_received) if self.witness_received else None,
        }


def top_agreement_scan(words: np.ndarray, q: int, top: int, chunk: int = 1 << 13):
    """Exact max over all received words of the top-`top` agreement sum.

    Returns (best_sum, best_z_index); the received-word index is the first
    attaining the maximum in lexicographic order.
    """
    n = words.shape[1]
    n_words = words.shape[0]
    best = -1
    best_idx = 0
    for start, block in iter_received_blocks(q, n, chunk):
        agr = agreement_block(block, words)
        if top >= n_words:
            sums = agr.sum(axis=1)
        else:
            sums = np.partition(agr, n_words - top, axis=1)[:, n_words - top :].sum(axis=1)
        pos = int(sums.argmax())
        if int(sums[pos]) > best:
            best = int(sums[pos])
            best_idx = start + pos
    return best, best_idx


def _scan_witness(words: np.ndarray, q: int, top: int, z_index: int):
    n = words.shape[1]
    z = received_word(q, n, z_index)
    agr = agreement_block(np.array([z], dtype=np.int64), words)[0]
    order = np.argsort(-agr, kind="stable")[:top]
    chosen = sorted(int(i) for i in order)
    return tuple(tuple(int(v) for v in words[i]) for i in chosen), z


def _mass_by_subsets(words: np.ndarray, q: int, L: int) -> tuple[int, tuple[int, ...]]:
    n = words.shape[1]
    rows = [tuple(int(v) for v in w) for w in words]
    counts = [[0] * q for _ in range(n)]
    best = [-1, None]

    def visit(chosen: list[int], start: int) -> None:
        if len(chosen) == L:
            total = sum(max(c) for c in counts)
            if total > best[0]:
                best[0] = total
                best[1] = tuple(chosen)
            return
        for i in range(start, len(rows) - (L - len(chosen)) + 1):
            for j, s in enumerate(rows[i]):
                counts[j][s] += 1
            chosen.append(i)
            visit(chosen, i + 1)
            chosen.pop()
            for j, s in enumerate(rows[i]):
                counts[j][s] -= 1

    visit([], 0)
    return best[0], best[1]


def plurality_mass(
    code: LinearCode,
    L: int,
    mode: str = "exact",
    *,
    trials: int = 200,
    seed: int = 0,
    max_subsets: int = DEFAULT_SUBSET_BUDGET,
    max_received_words: int = DEFAULT_SCAN_BUDGET,
    max_codewords: int = DEFAULT_CODEWORD_BUDGET,
) -> MassResult:
    """Largest plurality mass over sets of L distinct codewords.

    exact mode is a true maximum (via either a received-word scan using the
    plurality identity, or subset enumeration, whichever is feasible);
    greedy and sampled modes return flagged lower bounds.
    """
    if L < 1:
        raise ValueError("list size must be >= 1")
    words = code.codeword_matrix(max_codewords=max_codewords)
    n_words = words.shape[0]
    if L > n_words:
        raise ValueError(f"list size {L} exceeds code size {n_words}")
    q = code.field.q

    if mode == "exact":
        scan_cost = q**code.n * n_words
        subset_count = math.comb(n_words, L)
        scan_ok = scan_cost <= max_received_words
        subsets_ok = subset_count <= max_subsets
        if not scan_ok and not subsets_ok:
            raise InfeasibleError(
                f"exact mass needs a scan of {scan_cost} comparisons or {subset_count} subsets; "
                f"budgets are {max_received_words} and {max_subsets}"
            )
        if scan_ok and (not subsets_ok or scan_cost <= subset_count):
            value, z_idx = top_agreement_scan(words, q, L)
            witness, z = _scan_witness(words, q, L, z_idx)
            return MassResult(L, Fraction(value, L), True, False, mode, "scan", witness, z)
        value, chosen = _mass_by_subsets(words, q, L)
        witness_words = [tuple(int(v) for v in words[i]) for i in chosen]
        prof = profile_from_words(witness_words)
        return MassResult(
            L, Fraction(value, L), True, False, mode, "subsets", tuple(witness_words), prof.maximizers
        )

    if mode == "greedy":
        chosen = [0]
        tallies = [Counter([int(words[0, j])]) for j in range(code.n)]
        while len(chosen) < L:
            best_gain, best_row = -1, None
            for i in range(n_words):
                if i in chosen:
                    continue
                total = 0
                for j in range(code.n):
                    t = tallies[j]
                    s = int(words[i, j])
                    cur = max(t.values())
                    total += max(cur, t[s] + 1)
                if total > best_gain:
                    best_gain, best_row = total, i
            chosen.append(best_row)
            for j in range(code.n):
                tallies[j][int(words[best_row, j])] += 1
        witness_words = tuple(tuple(int(v) for v in words[i]) for i in sorted(chosen))
        prof = profile_from_words(witness_words)
        return MassResult(
            L, Fraction(sum(prof.counts), L), False, True, mode, None, witness_words, prof.maximizers
        )

    if mode == "sampled":
        rng = rng_for(seed, 0)
        best_val, best_rows = -1, None
        for _ in range(trials):
            rows = np.sort(rng.choice(n_words, size=L, replace=False))
            cnt, _ = plurality_counts_array(words[rows], q)
            total = int(cnt.sum())
            if total > best_val:
                best_val, best_rows = total, rows
        witness_words = tuple(tuple(int(v) for v in words[i]) for i in best_rows)
        prof = profile_from_words(witness_words)
        return MassResult(
            L, Fraction(best_val, L), False, True, mode, None, witness_words, prof.maximizers
        )

    raise ValueError(f"unknown mode {mode!r}")


# -- randomized code families and the E / F estimators -----------------------


class CodeFamily:
    """A randomized code construction: i.i.d. uniformly sampled columns of a
    fixed parent (Reed-Solomon on all field elements, or Hadamard), or a
    fixed code for zero-variance baselines."""

    def __init__(self, kind: str, *, field: Field | None = None, k: int | None = None,
                 n: int | None = None, code: LinearCode | None = None):
        if kind in ("sampled-rs", "sampled-hadamard"):
            if field is None or k is None or n is None:
                raise ValueError("sampled families need field, k, and n")
            from .linear_code import full_rs_code, hadamard_code

            self.parent = full_rs_code(field, k) if kind == "sampled-rs" else hadamard_code(field, k)
            self.field = field
            self.k = k
            self.n = n
        elif kind == "fixed":
            if code is None:
                raise ValueError("fixed family needs a code")
            self.parent = code
            self.field = code.field
            self.k = code.k
            self.n = code.n
        else:
            raise ValueError(f"unknown family kind {kind!r}")
        self.kind = kind

    def draw(self, seed: int, index: int) -> LinearCode:
        if self.kind == "fixed":
            return self.parent
        from .linear_code import sample_code
        from .seeds import child_seed

        return sample_code(self.parent, self.n, seed=child_seed(seed, index))

    def descriptor(self) -> dict:
        return {"kind": self.kind, "q": self.field.q, "poly": self.field.poly,
                "k": self.k, "n": self.n}


def index_to_message(q: int, k: int, index: int) -> tuple[int, ...]:
    digits = []
    for _ in range(k):
        index, d = divmod(index, q)
        digits.append(d)
    return tuple(reversed(digits))


def _sample_distinct(rng: np.random.Generator, total: int, count: int) -> list[int]:
    if total <= 1 << 22:
        return sorted(int(i) for i in rng.choice(total, size=count, replace=False))
    picked: set[int] = set()
    while len(picked) < count:
        picked.add(int(rng.integers(0, total)))
    return sorted(picked)


def candidate_message_sets(field: Field, k: int, L: int, count: int, seed: int) -> list[MessageSet]:
    """Uniform random message sets plus structured near-maximizer candidates.

    Structured candidates are "boxes": the lexicographically first L messages
    supported on the leading coordinates (for Reed-Solomon messages these are
    the low-degree polynomials, for Hadamard messages a subgroup), plus a few
    random additive shifts of that box (cosets).
    """
    q = field.q
    total = q**k
    if L > total:
        raise ValueError(f"L = {L} exceeds message count {total}")
    rng = rng_for(seed, 0xC0DE)
    out: list[MessageSet] = []

    j = 1
    while q**j < L:
        j += 1
    box = []
    for a in range(L):
        prefix = index_to_message(q, j, a)
        box.append(prefix + (0,) * (k - j))
    out.append(MessageSet(tuple(box)))
    n_shifts = min(2, max(0, count - 1))
    for _ in range(n_shifts):
        shift = index_to_message(q, k, int(rng.integers(0, total)))
        shifted = tuple(tuple(field.add(a, b) for a, b in zip(m, shift)) for m in box)
        out.append(MessageSet(shifted))

    while len(out) < count:
        idxs = _sample_distinct(rng, total, L)
        out.append(MessageSet(tuple(index_to_message(q, k, i) for i in idxs)))
    return out[:count]


@dataclass(frozen=True)
class EstimateReport:
    """Monte Carlo estimate with its standard error and lower-bound flag."""

    name: str
    value: float
    std_error: float
    lower_bound: bool
    draws: int
    detail: tuple

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "std_error": self.std_error,
            "lower_bound": self.lower_bound,
            "draws": self.draws,
            "detail": [dict(d) for d in self.detail],
        }


def estimate_expected_max_agreement(
    family: CodeFamily, L: int, n_candidates: int, code_draws: int, seed: int
) -> EstimateReport:
    """Estimate of max over codeword sets of E over code draws of the maximum
    agreement sum. The max runs over a sampled candidate family only, so the
    value is a lower bound on the true maximum."""
    candidates = candidate_message_sets(family.field, family.k, L, n_candidates, seed)
    codes = [family.draw(seed, d) for d in range(code_draws)]
    detail = []
    best = None
    for ci, lam in enumerate(candidates):
        vals = np.array([max_agreement_sum(code, lam)[0] for code in codes], dtype=float)
        mean = float(vals.mean())
        se = float(vals.std(ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0
        row = {"candidate": ci, "mean": mean, "std_error": se}
        detail.append(tuple(row.items()))
        if best is None or mean > best[0]:
            best = (mean, se)
    return EstimateReport(
        name="expected_max_agreement",
        value=best[0],
        std_error=best[1],
        lower_bound=True,
        draws=code_draws,
        detail=tuple(detail),
    )


def estimate_mean_max_deviation(
    family: CodeFamily, L: int, trials: int, seed: int, n_candidates: int = 8
) -> EstimateReport:
    """Estimate of L times E over code draws of the largest absolute deviation
    of a candidate set's plurality-fraction sum from its per-draw mean.

    The per-candidate means come from an independent pilot run of the same
    size; the max runs over sampled candidates only (lower-bound semantics).
    """
    candidates = candidate_message_sets(family.field, family.k, L, n_candidates, seed)
    pilot_means = []
    for ci, lam in enumerate(candidates):
        masses = [
            plurality_profile(family.draw(seed + 1_000_003, d), lam).mass()
            for d in range(trials)
        ]
        pilot_means.append(sum(masses, Fraction(0)) / len(masses))
    devs = []
    for d in range(trials):
        code = family.draw(seed, d)
        dev = max(
            abs(plurality_profile(code, lam).mass() - pilot_means[ci])
            for ci, lam in enumerate(candidates)
        )
        devs.append(float(L * dev))
    arr = np.array(devs)
    se = float(arr.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    detail = tuple(
        tuple({"candidate": ci, "pilot_mean_mass": float(m)}.items())
        for ci, m in enumerate(pilot_means)
    )
    return EstimateReport(
        name="mean_max_deviation",
        value=float(arr.mean()),
        std_error=se,
        lower_bound=True,
        draws=trials,
        detail=detail,
    )
