"""Exhaustive list-decodability oracles with re-verifiable certificates.

Ground truth for everything else in the package: a code is probed either in
the standard sense (no Hamming ball of relative radius rho holds more than L
codewords) or in the average-radius sense (no set of L+1 codewords sits at
average relative distance below rho from any received word). Verdicts come
with witnesses that re-verify by direct recomputation, independently of the
search that found them, and serialize to JSON for offline re-checking.

All radius comparisons are exact: radii are rationals, distances are integer
counts, and every threshold test is an integer or Fraction comparison.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InfeasibleError
from .linear_code import DEFAULT_CODEWORD_BUDGET, LinearCode, code_from_json_dict
from .plurality import (
    DEFAULT_SCAN_BUDGET,
    DEFAULT_SUBSET_BUDGET,
    agreement,
    agreement_block,
    iter_received_blocks,
    plurality_mass,
)
from .seeds import rng_for

STANDARD = "standard"
AVERAGE_RADIUS = "average-radius"

DECODABLE = "decodable"
VIOLATED = "violated"

EXHAUSTIVE = "exhaustive"
BOUNDED = "bounded"


@dataclass(frozen=True)
class ListDecQuery:
    """A decodability question: relative radius, list bound, and mode.

    The list bound may be zero: average-radius questions about single
    codewords and downgraded standard questions both need it.
    """

    radius: Fraction
    list_bound: int
    mode: str = STANDARD

    def __post_init__(self):
        r = Fraction(self.radius)
        if not (0 <= r <= 1):
            raise ValueError(f"radius must lie in [0, 1], got {r}")
        object.__setattr__(self, "radius", r)
        lb = int(self.list_bound)
        if lb != self.list_bound or lb < 0:
            raise ValueError(f"list bound must be an integer >= 0, got {self.list_bound!r}")
        object.__setattr__(self, "list_bound", lb)
        if self.mode not in (STANDARD, AVERAGE_RADIUS):
            raise ValueError(f"mode must be {STANDARD!r} or {AVERAGE_RADIUS!r}, got {self.mode!r}")

    def agreement_threshold(self, n: int) -> int:
        """Smallest agreement count that puts a word inside the radius ball."""
        return n - math.floor(self.radius * n)

    def to_json_dict(self) -> dict:
        return {"radius": str(self.radius), "list_bound": self.list_bound, "mode": self.mode}


def query_from_json_dict(doc: dict) -> ListDecQuery:
    return ListDecQuery(Fraction(doc["radius"]), doc["list_bound"], doc["mode"])


@dataclass(frozen=True)
class Certificate:
    """A decodability verdict plus everything needed to re-check it.

    `search` records how the verdict was reached: "exhaustive" verdicts cover
    the whole space; "bounded" ones only the sampled part, so a bounded
    "decodable" is merely "no violation found".
    """

    code: LinearCode
    query: ListDecQuery
    verdict: str
    search: str
    witness_received: tuple[int, ...] | None = None
    witness_codewords: tuple[tuple[int, ...], ...] | None = None

    def verify(self) -> bool:
        """Re-check the verdict from the stored witness alone.

        Violations are re-proved by direct recomputation (ball recount in
        standard mode, exact average-distance comparison in average-radius
        mode). Decodable verdicts carry no witness; for them this only checks
        structural consistency.
        """
        if self.verdict == DECODABLE:
            return self.witness_received is None and self.witness_codewords is None
        if self.verdict != VIOLATED:
            return False
        code, query = self.code, self.query
        n, q = code.n, code.field.q
        z = self.witness_received
        lam = self.witness_codewords
        if z is None or lam is None or len(z) != n:
            return False
        if any(not (0 <= int(x) < q) for x in z):
            return False
        if len(set(lam)) != len(lam):
            return False
        for c in lam:
            if len(c) != n or not code.contains(c):
                return False
        if query.mode == STANDARD:
            t = query.agreement_threshold(n)
            if len(lam) <= query.list_bound:
                return False
            if any(agreement(z, c) < t for c in lam):
                return False
            return len(list_at(code, z, query.radius)) > query.list_bound
        size = query.list_bound + 1
        if len(lam) != size:
            return False
        total_distance = sum(n - agreement(z, c) for c in lam)
        return Fraction(total_distance) < size * n * query.radius

    def to_json_dict(self) -> dict:
        return {
            "schema": 1,
            "kind": "list-decodability-certificate",
            "code": self.code.to_json_dict(),
            "query": self.query.to_json_dict(),
            "verdict": self.verdict,
            "search": self.search,
            "witness_received": list(self.witness_received) if self.witness_received else None,
            "witness_codewords": (
                [list(c) for c in self.witness_codewords] if self.witness_codewords else None
            ),
        }


def certificate_from_json_dict(doc: dict) -> Certificate:
    wr = doc.get("witness_received")
    wc = doc.get("witness_codewords")
    return Certificate(
        code=code_from_json_dict(doc["code"]),
        query=query_from_json_dict(doc["query"]),
        verdict=doc["verdict"],
        search=doc["search"],
        witness_received=tuple(int(x) for x in wr) if wr is not None else None,
        witness_codewords=(
            tuple(tuple(int(x) for x in c) for c in wc) if wc is not None else None
        ),
    )


def certificate_to_json(cert: Certificate) -> str:
    return json.dumps(cert.to_json_dict(), sort_keys=True)


def certificate_from_json(text: str) -> Certificate:
    return certificate_from_json_dict(json.loads(text))


# -- ball membership ----------------------------------------------------------


def list_at(
    code: LinearCode,
    received,
    radius,
    max_codewords: int = DEFAULT_CODEWORD_BUDGET,
) -> tuple[tuple[int, ...], ...]:
    """All codewords within relative distance `radius` of `received`.

    Exact Hamming-ball membership over the full row space, in enumeration
    order.
    """
    rho = Fraction(radius)
    if not (0 <= rho <= 1):
        raise ValueError(f"radius must lie in [0, 1], got {rho}")
    n = code.n
    z = np.array([tuple(int(x) for x in received)], dtype=np.int64)
    if z.shape[1] != n:
        raise ValueError(f"received word length {z.shape[1]} != n = {n}")
    t = n - math.floor(rho * n)
    members: list[tuple[int, ...]] = []
    for block in code.iter_codeword_chunks(max_codewords=max_codewords):
        agr = agreement_block(z, block)[0]
        for i in np.nonzero(agr >= t)[0]:
            members.append(tuple(int(v) for v in block[i]))
    return tuple(members)


# -- standard-mode oracle ------------------------------------------------------


def _received_chunk_rows(n_codewords: int) -> int:
    # cap the (chunk, N) agreement buffer at ~2^23 int32 entries
    return max(1, min(1 << 13, (1 << 23) // max(1, n_codewords)))


def is_list_decodable(
    code: LinearCode,
    query: ListDecQuery,
    *,
    max_received_words: int = DEFAULT_SCAN_BUDGET,
    max_codewords: int = DEFAULT_CODEWORD_BUDGET,
    sample_received: int | None = None,
    seed: int = 0,
) -> Certificate:
    """Standard-mode verdict by scanning received words.

    With `sample_received=None` the scan is exhaustive over all q^n received
    words (requires q^n * N within `max_received_words` elementary
    comparisons) and a violation reports the lexicographically first bad
    received word. Otherwise `sample_received` uniform words are tried and
    the certificate is marked "bounded".
    """
    if query.mode != STANDARD:
        raise ValueError(f"standard-mode oracle got a {query.mode!r} query")
    q, n = code.field.q, code.n
    n_words = code.size
    if sample_received is None:
        scan_cost = q**n * n_words
        if scan_cost > max_received_words:
            raise InfeasibleError(
                f"exhaustive scan needs {scan_cost} comparisons, budget {max_received_words}"
            )
    words = code.codeword_matrix(max_codewords=max_codewords)
    t = query.agreement_threshold(n)
    bound = query.list_bound

    def scan_block(block: np.ndarray):
        agr = agreement_block(block, words)
        counts = (agr >= t).sum(axis=1)
        bad = np.nonzero(counts > bound)[0]
        if not bad.size:
            return None
        pos = int(bad[0])
        inside = np.nonzero(agr[pos] >= t)[0][: bound + 1]
        return (
            tuple(int(v) for v in block[pos]),
            tuple(tuple(int(v) for v in words[i]) for i in inside),
        )

    if sample_received is None:
        for _, block in iter_received_blocks(q, n, _received_chunk_rows(n_words)):
            hit = scan_block(block)
            if hit is not None:
                return Certificate(code, query, VIOLATED, EXHAUSTIVE, hit[0], hit[1])
        return Certificate(code, query, DECODABLE, EXHAUSTIVE)

    if sample_received < 1:
        raise ValueError("sample_received must be >= 1 when given")
    rng = rng_for(seed)
    remaining = sample_received
    chunk = _received_chunk_rows(n_words)
    while remaining > 0:
        take = min(chunk, remaining)
        block = rng.integers(0, q, size=(take, n), dtype=np.int64)
        hit = scan_block(block)
        if hit is not None:
            return Certificate(code, query, VIOLATED, BOUNDED, hit[0], hit[1])
        remaining -= take
    return Certificate(code, query, DECODABLE, BOUNDED)


# -- average-radius oracle -----------------------------------------------------


def is_avg_radius_list_decodable(
    code: LinearCode,
    query: ListDecQuery,
    *,
    max_subsets: int = DEFAULT_SUBSET_BUDGET,
    max_received_words: int = DEFAULT_SCAN_BUDGET,
    max_codewords: int = DEFAULT_CODEWORD_BUDGET,
) -> Certificate:
    """Average-radius verdict via the largest plurality mass at size L+1.

    Decodable iff every set of L+1 distinct codewords keeps its maximal total
    agreement at or below (L+1) * n * (1 - rho); by the plurality identity the
    inner maximum over received words needs no word-by-word search. Fewer
    than L+1 codewords in the whole code makes the question vacuously
    decodable.
    """
    if query.mode != AVERAGE_RADIUS:
        raise ValueError(f"average-radius oracle got a {query.mode!r} query")
    size = query.list_bound + 1
    if code.size < size:
        return Certificate(code, query, DECODABLE, EXHAUSTIVE)
    mass = plurality_mass(
        code,
        size,
        mode="exact",
        max_subsets=max_subsets,
        max_received_words=max_received_words,
        max_codewords=max_codewords,
    )
    threshold = Fraction(code.n) * (1 - query.radius)
    if mass.value <= threshold:
        return Certificate(code, query, DECODABLE, EXHAUSTIVE)
    return Certificate(
        code, query, VIOLATED, EXHAUSTIVE, mass.witness_received, mass.witness_codewords
    )


# -- radius profile -------------------------------------------------------------


@dataclass(frozen=True)
class ProfileRow:
    """Largest decodable radius at one list size, both modes."""

    list_size: int
    standard_radius: Fraction
    average_radius: Fraction

    def as_dict(self) -> dict:
        return {
            "list_size": self.list_size,
            "standard_radius": str(self.standard_radius),
            "average_radius": str(self.average_radius),
        }


def decoding_radius_profile(
    code: LinearCode,
    max_list_size: int,
    *,
    max_received_words: int = DEFAULT_SCAN_BUDGET,
    max_codewords: int = DEFAULT_CODEWORD_BUDGET,
) -> tuple[ProfileRow, ...]:
    """For each list size up to `max_list_size`, the largest decodable m/n.

    One exhaustive pass over received words collects, per word, the sorted
    top agreement counts; the per-list-size maxima determine both radii
    exactly. List sizes at or above the code size decode at radius 1 in both
    modes (no ball and no codeword set can overfill).
    """
    if max_list_size < 1:
        raise ValueError("max_list_size must be >= 1")
    q, n = code.field.q, code.n
    n_words = code.size
    scan_cost = q**n * n_words
    if scan_cost > max_received_words:
        raise InfeasibleError(
            f"profile scan needs {scan_cost} comparisons, budget {max_received_words}"
        )
    words = code.codeword_matrix(max_codewords=max_codewords)
    top = min(max_list_size + 1, n_words)
    best_kth = np.zeros(top, dtype=np.int64)
    best_topsum = np.zeros(top, dtype=np.int64)
    for _, block in iter_received_blocks(q, n, _received_chunk_rows(n_words)):
        agr = agreement_block(block, words)
        if top >= n_words:
            ordered = np.sort(agr, axis=1)[:, ::-1]
        else:
            part = np.partition(agr, n_words - top, axis=1)[:, n_words - top :]
            ordered = np.sort(part, axis=1)[:, ::-1]
        best_kth = np.maximum(best_kth, ordered.max(axis=0))
        best_topsum = np.maximum(best_topsum, np.cumsum(ordered, axis=1).max(axis=0))
    rows = []
    for ell in range(1, max_list_size + 1):
        if ell >= n_words:
            rows.append(ProfileRow(ell, Fraction(1), Fraction(1)))
            continue
        crowd = int(best_kth[ell])  # largest (ell+1)-th agreement over all words
        total = int(best_topsum[ell])  # largest top-(ell+1) agreement sum
        m_standard = n - 1 - crowd
        m_average = n - (-(-total // (ell + 1)))
        rows.append(ProfileRow(ell, Fraction(m_standard, n), Fraction(m_average, n)))
    return tuple(rows)
