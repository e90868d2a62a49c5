"""Closed-form bound calculators: agreement bounds, capacity, tails.

Everything here is a pure function of its inputs. The two agreement bounds
keep exact arithmetic when fed Fractions (no hidden float conversions), so
boundary cases can be decided exactly; the capacity, rate, and tail helpers
are float-valued.

Logarithms in list-size and rate expressions are base 2. The small-epsilon
capacity expansion and the Gaussian maximum bound use natural logs (they come
from calculus, not from counting).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from fractions import Fraction

_LOG2 = math.log(2.0)


def _log2(x: float) -> float:
    return math.log(float(x)) / _LOG2


@dataclass(frozen=True)
class ConstantsConfig:
    """Tunable constants for the sampled-code bound and the chaining checks.

    Defaults are 1.0 except the chaining knobs: c1 defaults to 16.0 so the
    coupling c1 >= 16 * C5 holds at the default C5 = 1.0, and c0 (the list
    size below which chaining degenerates to a single level) defaults to 16.
    """

    C0: float = 1.0
    C3: float = 1.0
    C4: float = 1.0
    C5: float = 1.0
    C6: float = 1.0
    C7: float = 1.0
    c0: float = 16.0
    c1: float = 16.0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ValueError(f"constant {f.name} must be a positive finite real, got {v!r}")
            object.__setattr__(self, f.name, float(v))

    def validate_chaining(self) -> None:
        """Coupling required whenever the chaining checks run."""
        if self.c1 < 16 * self.C5:
            raise ValueError(f"chaining requires c1 >= 16*C5, got c1={self.c1}, C5={self.C5}")

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def constants_from_dict(doc: dict) -> ConstantsConfig:
    known = {f.name for f in fields(ConstantsConfig)}
    extra = set(doc) - known
    if extra:
        raise ValueError(f"unknown constants: {sorted(extra)}")
    return ConstantsConfig(**doc)


@dataclass(frozen=True)
class BoundReport:
    """One evaluated bound: name, echoed inputs, value, optional target."""

    name: str
    inputs: tuple[tuple[str, object], ...]
    value: float
    target: float | None = None

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"bound value must be finite, got {self.value}")

    @property
    def margin(self) -> float | None:
        return None if self.target is None else self.value - self.target

    def as_dict(self) -> dict:
        doc = {"name": self.name, "inputs": dict(self.inputs), "value": self.value}
        if self.target is not None:
            doc["target"] = self.target
            doc["margin"] = self.margin
        return doc


# -- entropy and capacity ------------------------------------------------------


def q_ary_entropy(q: int, x) -> float:
    """H_q(x) with the boundary convention 0*log(0) = 0."""
    if q < 2:
        raise ValueError(f"alphabet size must be >= 2, got {q}")
    x = float(x)
    if not (0 <= x <= 1):
        raise ValueError(f"entropy argument must lie in [0, 1], got {x}")
    lq = math.log(q)
    out = x * math.log(q - 1) / lq  # the q = 2 case contributes log(1) = 0
    if 0 < x:
        out -= x * math.log(x) / lq
    if x < 1:
        out -= (1 - x) * math.log(1 - x) / lq
    return out


def capacity_rate(q: int, eps) -> float:
    """Best possible rate at relative radius 1 - 1/q - eps."""
    eps = float(eps)
    if not (0 <= eps <= 1 - 1 / q):
        raise ValueError(f"eps must lie in [0, 1 - 1/q], got {eps}")
    return 1 - q_ary_entropy(q, 1 - 1 / q - eps)


def capacity_rate_small_eps(q: int, eps) -> float:
    """Leading term of capacity_rate as eps -> 0 (natural-log calculus)."""
    eps = float(eps)
    if q < 2 or eps < 0:
        raise ValueError("need q >= 2 and eps >= 0")
    return q * eps * eps / (2 * math.log(q) * (1 - 1 / q))


# -- average-radius agreement bounds --------------------------------------------


def johnson_agreement_bound_eps(n, q, L, eps, pairwise_distance_sum):
    """Distance-sensitive agreement bound with a tunable slack parameter.

    Upper-bounds the total agreement of any L codewords with any received
    word, given the sum of relative distances over ordered pairs of the L
    codewords (a value in [0, L*(L-1)]). Exact when fed exact inputs.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    _check_pair_sum(L, pairwise_distance_sum)
    one = Fraction(1) if isinstance(eps, (int, Fraction)) else 1.0
    return (
        one * n * L / q
        + (n * L / (2 * eps)) * (one + eps * eps) * (one - one / q)
        - (n / (2 * L * eps)) * pairwise_distance_sum
    )


def johnson_agreement_bound_root(n, L, pairwise_distance_sum) -> float:
    """Square-root agreement bound: no alphabet or slack parameter."""
    _check_pair_sum(L, pairwise_distance_sum)
    radicand = n * n + 4 * n * n * (L * (L - 1) - pairwise_distance_sum)
    assert radicand >= 0  # guaranteed by the pair-sum range
    return 0.5 * (n + math.sqrt(float(radicand)))


def root_bound_exceeded(n, L, pairwise_distance_sum, agreement_sum) -> bool:
    """Exact test for agreement_sum > johnson_agreement_bound_root(...).

    Avoids the float square root: S > (n + sqrt(r))/2 iff 2S - n > 0 and
    (2S - n)^2 > r. All arithmetic stays in integers/Fractions.
    """
    _check_pair_sum(L, pairwise_distance_sum)
    radicand = n * n + 4 * n * n * (L * (L - 1) - pairwise_distance_sum)
    lhs = 2 * agreement_sum - n
    return lhs > 0 and lhs * lhs > radicand


def _check_pair_sum(L, pairwise_distance_sum) -> None:
    if L < 1:
        raise ValueError(f"need at least one codeword, got L={L}")
    if not (0 <= pairwise_distance_sum <= L * (L - 1)):
        raise ValueError(
            f"ordered-pair distance sum must lie in [0, {L * (L - 1)}], "
            f"got {pairwise_distance_sum}"
        )


# -- sampled-code agreement bound ------------------------------------------------


def random_code_agreement_bound(
    E, L: int, N: int, cfg: ConstantsConfig | None = None, *, q: int | None = None
) -> float:
    """Expected-maximum agreement bound for column-sampled codes.

    Returns E + Y + sqrt(E*Y) with Y = C0 * L * log2(N) * log2(L)^5. Passing
    an alphabet size `q` replaces one log2(L) factor by min(log2(L),
    log2(q)); this sharper variant is off by default.
    """
    cfg = cfg or ConstantsConfig()
    E = float(E)
    if E < 0:
        raise ValueError(f"expected-value term must be >= 0, got {E}")
    if L < 2:
        raise ValueError(f"list size must be >= 2, got {L}")
    if N < 2:
        raise ValueError(f"code size must be >= 2, got {N}")
    log_l = _log2(L)
    last = log_l if q is None else min(log_l, _log2(q))
    y = cfg.C0 * L * _log2(N) * log_l**4 * last
    return E + y + math.sqrt(E * y)


def decodable_blocklength(q: int, eps: float, variant: str, k: int, cfg: ConstantsConfig | None = None) -> int:
    """Minimal blocklength the sampling guarantees need, rounded up.

    variant "small-q": list size 2/eps^2, denominator min(eps, q*eps^2);
    variant "large-q": needs q > 1/eps^2, list size 1/eps, a factor-2
    numerator, and denominator eps. List sizes are rounded up before the
    log2^5 factor is taken.
    """
    cfg = cfg or ConstantsConfig()
    eps = float(eps)
    if q < 2 or k < 1:
        raise ValueError("need q >= 2 and k >= 1")
    if not (0 < eps < 1):
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    log_n_codewords = k * _log2(q)
    if variant == "small-q":
        lst = math.ceil(2 / eps**2)
        denom = min(eps, q * eps**2)
        value = cfg.C0 * log_n_codewords * _log2(lst) ** 5 / denom
    elif variant == "large-q":
        if q <= 1 / eps**2:
            raise ValueError(f"large-q variant needs q > 1/eps^2, got q={q}, eps={eps}")
        lst = math.ceil(1 / eps)
        if lst < 2:
            raise ValueError(f"large-q list size 1/eps must be >= 2, got eps={eps}")
        value = 2 * cfg.C0 * log_n_codewords * _log2(lst) ** 5 / eps
    else:
        raise ValueError(f"variant must be 'small-q' or 'large-q', got {variant!r}")
    return math.ceil(value)


# -- rate comparison --------------------------------------------------------------


@dataclass(frozen=True)
class RateSummary:
    """The three displayed rate expressions at one (q, eps) point."""

    q: int
    eps: float
    rs_rate: float
    rlc_rate: float
    johnson_rate: float

    @property
    def beats_johnson(self) -> bool:
        return self.rs_rate > self.johnson_rate

    def as_dict(self) -> dict:
        return {
            "q": self.q,
            "eps": self.eps,
            "rs_rate": self.rs_rate,
            "rlc_rate": self.rlc_rate,
            "johnson_rate": self.johnson_rate,
            "beats_johnson": self.beats_johnson,
        }


def rate_summary(q: int, eps: float, cfg: ConstantsConfig | None = None) -> RateSummary:
    """Rates of the sampled evaluation-point and sampled linear constructions
    against the generic square-root-bound rate eps^2."""
    cfg = cfg or ConstantsConfig()
    eps = float(eps)
    if q < 2:
        raise ValueError(f"alphabet size must be >= 2, got {q}")
    if not (0 < eps < 0.5):
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")
    log_inv = _log2(1 / eps) ** 5
    rs = eps / (_log2(q) * log_inv)
    rlc = min(eps, q * eps * eps) / (2 * cfg.C0 * _log2(q) * log_inv)
    return RateSummary(q, eps, rs, rlc, eps * eps)


# -- tail helpers -------------------------------------------------------------------


def hoeffding_tail(ranges, v) -> float:
    """Two-sided tail bound 2*exp(-2 v^2 / sum (b-a)^2) for bounded sums."""
    v = float(v)
    if v < 0:
        raise ValueError(f"deviation must be >= 0, got {v}")
    denom = 0.0
    for a, b in ranges:
        if b < a:
            raise ValueError(f"range ({a}, {b}) has b < a")
        denom += (float(b) - float(a)) ** 2
    if denom == 0:
        return 2.0 if v == 0 else 0.0
    return 2.0 * math.exp(-2.0 * v * v / denom)


def gaussian_max_bound(sigma: float, n: int) -> float:
    """Upper bound on the expected maximum absolute value of n Gaussians
    with standard deviations at most sigma."""
    sigma = float(sigma)
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if n < 2:
        raise ValueError(f"need n >= 2 variables, got {n}")
    ln_n = math.log(n)
    return sigma * math.sqrt(2 * ln_n) + sigma / math.sqrt(math.pi * ln_n)


# -- CLI-facing dispatcher -----------------------------------------------------------


def evaluate_bound(name: str, params: dict, cfg: ConstantsConfig | None = None) -> BoundReport:
    """Evaluate one named bound from a flat parameter dict."""
    cfg = cfg or ConstantsConfig()
    p = dict(params)
    if name == "entropy":
        value = q_ary_entropy(p["q"], p["x"])
    elif name == "capacity":
        value = capacity_rate(p["q"], p["eps"])
    elif name == "capacity-small-eps":
        value = capacity_rate_small_eps(p["q"], p["eps"])
    elif name == "johnson-eps":
        value = float(
            johnson_agreement_bound_eps(p["n"], p["q"], p["L"], p["eps"], p["pair_sum"])
        )
    elif name == "johnson-root":
        value = johnson_agreement_bound_root(p["n"], p["L"], p["pair_sum"])
    elif name == "sampled-agreement":
        value = random_code_agreement_bound(p["E"], p["L"], p["N"], cfg, q=p.get("q"))
    elif name == "blocklength":
        value = float(decodable_blocklength(p["q"], p["eps"], p["variant"], p["k"], cfg))
    elif name == "hoeffding":
        value = hoeffding_tail(p["ranges"], p["v"])
    elif name == "gaussian-max":
        value = gaussian_max_bound(p["sigma"], p["n"])
    else:
        raise ValueError(f"unknown bound {name!r}")
    return BoundReport(name, tuple(sorted(p.items())), float(value))
