"""Exact arithmetic over small finite fields GF(q), q <= 2^16.

Prime fields use modular arithmetic; binary extension fields GF(2^m) use
log/antilog tables built over an irreducible polynomial. Elements are plain
integers in [0, q); for extension fields the integer is the coefficient
bitmask of the residue polynomial. The canonical integer encoding gives a
total order used for deterministic tie-breaking elsewhere in the package.
"""

from __future__ import annotations

import numpy as np

# Irreducible (in fact primitive) polynomials over GF(2), one per degree.
# Bitmask includes the leading x^m term, e.g. 19 = 0b10011 = x^4 + x + 1.
DEFAULT_POLY = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
    13: 0b10000000011011,
    14: 0b100010001000011,
    15: 0b1000000000000011,
    16: 0b10001000000001011,
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def poly_mul_gf2(a: int, b: int) -> int:
    """Carry-less product of two GF(2) coefficient bitmasks."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_mod_gf2(a: int, mod: int) -> int:
    """Remainder of bitmask polynomial division over GF(2)."""
    dm = mod.bit_length() - 1
    while a.bit_length() - 1 >= dm and a:
        a ^= mod << (a.bit_length() - 1 - dm)
    return a


def is_irreducible_gf2(poly: int) -> bool:
    """Brute-force irreducibility test: trial division by every lower-degree factor."""
    m = poly.bit_length() - 1
    if m < 1:
        return False
    for f in range(2, 1 << (m // 2 + 1)):
        if f.bit_length() - 1 < 1:
            continue
        if poly_mod_gf2(poly, f) == 0:
            return False
    return True


class Field:
    """A finite field of order q, either prime or a power of 2.

    Immutable after construction; all tables are built eagerly so the
    arithmetic methods are safe in hot loops and across threads.
    """

    def __init__(self, q: int, poly: int | None = None):
        if q < 2 or q > 1 << 16:
            raise ValueError(f"field order {q} out of supported range [2, 2^16]")
        if is_prime(q):
            if poly is not None:
                raise ValueError("prime fields take no modulus polynomial")
            self.q = q
            self.kind = "prime"
            self.poly = None
            self.characteristic = q
            self.degree = 1
        elif q & (q - 1) == 0:
            m = q.bit_length() - 1
            if poly is None:
                poly = DEFAULT_POLY[m]
            if poly.bit_length() - 1 != m:
                raise ValueError(f"modulus polynomial degree {poly.bit_length() - 1} != {m}")
            if not is_irreducible_gf2(poly):
                raise ValueError(f"polynomial bitmask {poly} is reducible over GF(2)")
            self.q = q
            self.kind = "binary-extension"
            self.poly = poly
            self.characteristic = 2
            self.degree = m
            self._build_tables()
        else:
            raise ValueError(f"{q} is neither prime nor a power of 2")
        self._mul_table_cache: np.ndarray | None = None

    def _build_tables(self) -> None:
        q, poly = self.q, self.poly
        mul = lambda a, b: poly_mod_gf2(poly_mul_gf2(a, b), poly)
        # Find a multiplicative generator (the default polynomials are
        # primitive, so 2 = "x" works immediately; the search keeps custom
        # irreducible-but-not-primitive moduli correct).
        for g in range(2, q):
            seen = 1
            x = g
            order = 1
            while x != 1:
                x = mul(x, g)
                order += 1
                if order > q - 1:
                    break
            if order == q - 1:
                break
        else:  # pragma: no cover - every GF(2^m) has a generator
            raise ValueError("no multiplicative generator found")
        exp = [1] * (2 * (q - 1))
        log = [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            exp[i + q - 1] = x
            log[x] = i
            x = mul(x, g)
        self._exp = exp
        self._log = log
        self._exp_np = np.array(exp, dtype=np.int64)
        self._log_np = np.array(log, dtype=np.int64)

    # -- scalar operations ----------------------------------------------

    def _check(self, *els: int) -> None:
        for a in els:
            if not 0 <= a < self.q:
                raise ValueError(f"{a} is not an element of GF({self.q})")

    def add(self, a: int, b: int) -> int:
        self._check(a, b)
        if self.kind == "prime":
            return (a + b) % self.q
        return a ^ b

    def sub(self, a: int, b: int) -> int:
        self._check(a, b)
        if self.kind == "prime":
            return (a - b) % self.q
        return a ^ b

    def neg(self, a: int) -> int:
        self._check(a)
        if self.kind == "prime":
            return (-a) % self.q
        return a

    def mul(self, a: int, b: int) -> int:
        self._check(a, b)
        if self.kind == "prime":
            return (a * b) % self.q
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        self._check(a)
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        if self.kind == "prime":
            return pow(a, self.q - 2, self.q)
        return self._exp[self.q - 1 - self._log[a]]

    def pow(self, a: int, e: int) -> int:
        self._check(a)
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        if self.kind == "prime":
            return pow(a, e, self.q)
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def elements(self) -> range:
        return range(self.q)

    # -- vectorized helpers (trusted internal paths, no per-op checks) ---

    def add_array(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if self.kind == "prime":
            return (x + y) % self.q
        return np.bitwise_xor(x, y)

    def scale_array(self, s: int, x: np.ndarray) -> np.ndarray:
        self._check(s)
        if self.kind == "prime":
            return (s * x) % self.q
        if s == 0:
            return np.zeros(x.shape, dtype=np.int64)
        out = np.zeros(x.shape, dtype=np.int64)
        nz = x != 0
        out[nz] = self._exp_np[self._log_np[x[nz]] + self._log[s]]
        return out

    def mul_table(self) -> np.ndarray:
        """Full q-by-q multiplication table (cached; used by exhaustive checks)."""
        if self._mul_table_cache is None:
            a = np.arange(self.q)
            if self.kind == "prime":
                t = (a[:, None] * a[None, :]) % self.q
            else:
                t = np.zeros((self.q, self.q), dtype=np.int64)
                for i in range(1, self.q):
                    t[i, 1:] = self.scale_array(i, a[1:])
            self._mul_table_cache = t
        return self._mul_table_cache

    def add_table(self) -> np.ndarray:
        a = np.arange(self.q)
        if self.kind == "prime":
            return (a[:, None] + a[None, :]) % self.q
        return np.bitwise_xor(a[:, None], a[None, :])

    # -- identity ---------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and (self.q, self.poly) == (other.q, other.poly)

    def __hash__(self) -> int:
        return hash((self.q, self.poly))

    def __repr__(self) -> str:
        if self.kind == "prime":
            return f"GF({self.q})"
        return f"GF({self.q}, poly={bin(self.poly)})"


def field_new(q: int, poly: int | None = None) -> Field:
    """Construct GF(q). q must be prime or a power of 2 up to 2^16."""
    return Field(q, poly)
