"""Linear codes as generator matrices over small finite fields.

Constructors for Reed-Solomon codes in the monomial basis, Hadamard codes,
and randomized column sampling/puncturing. Rank, exact minimum distance,
and row-space enumeration are computed on the actual matrix, never assumed
from construction formulas (repeated evaluation points are legal and do
change the answers).
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .errors import InfeasibleError
from .galois import Field, field_new

DEFAULT_CODEWORD_BUDGET = 1 << 22
DEFAULT_COLUMN_BUDGET = 1 << 20


class LinearCode:
    """A code given by a k-by-n generator matrix; immutable after construction."""

    def __init__(self, field: Field, generator, provenance: dict | None = None):
        rows = tuple(tuple(int(x) for x in row) for row in generator)
        if not rows or not rows[0]:
            raise ValueError("generator must have at least one row and one column")
        n = len(rows[0])
        for row in rows:
            if len(row) != n:
                raise ValueError("ragged generator matrix")
            field._check(*row)
        self.field = field
        self.generator = rows
        self.k = len(rows)
        self.n = n
        self.provenance = provenance or {"kind": "explicit"}
        self._basis: tuple[tuple[int, ...], ...] | None = None
        self._scaled_rows: list[np.ndarray] | None = None

    # -- structure --------------------------------------------------------

    def basis(self) -> tuple[tuple[int, ...], ...]:
        """Reduced row-echelon basis of the row space (deterministic)."""
        if self._basis is None:
            self._basis = _row_reduce(self.field, self.generator)
        return self._basis

    def rank(self) -> int:
        return len(self.basis())

    def contains(self, word) -> bool:
        """True iff `word` lies in the row space of the generator."""
        w = tuple(int(x) for x in word)
        if len(w) != self.n:
            return False
        self.field._check(*w)
        return len(_row_reduce(self.field, self.basis() + (w,))) == self.rank()

    @property
    def dimension(self) -> int:
        return self.rank()

    @property
    def size(self) -> int:
        """Number of distinct codewords, q^rank."""
        return self.field.q ** self.rank()

    @property
    def rate(self) -> Fraction:
        return Fraction(self.rank(), self.n)

    # -- encoding ---------------------------------------------------------

    def encode(self, message) -> tuple[int, ...]:
        """Codeword of a length-k message vector (x^T G)."""
        if len(message) != self.k:
            raise ValueError(f"message length {len(message)} != k = {self.k}")
        f = self.field
        word = [0] * self.n
        for xi, row in zip(message, self.generator):
            if xi == 0:
                continue
            for j, gij in enumerate(row):
                word[j] = f.add(word[j], f.mul(xi, gij))
        return tuple(word)

    def _scaled_row_tables(self) -> list[np.ndarray]:
        # table[i][a] = a * generator_row_i, used by vectorized encoders
        if self._scaled_rows is None:
            f = self.field
            self._scaled_rows = [
                np.stack([f.scale_array(a, np.array(row, dtype=np.int64)) for a in range(f.q)])
                for row in self.generator
            ]
        return self._scaled_rows

    def encode_array(self, messages: np.ndarray) -> np.ndarray:
        """Vectorized encode of an (M, k) integer array to an (M, n) array."""
        tables = self._scaled_row_tables()
        acc = tables[0][messages[:, 0]]
        for i in range(1, self.k):
            acc = self.field.add_array(acc, tables[i][messages[:, i]])
        return acc

    # -- row-space enumeration ---------------------------------------------

    def codeword_matrix(self, max_codewords: int = DEFAULT_CODEWORD_BUDGET) -> np.ndarray:
        """All N = q^rank distinct codewords as an (N, n) array.

        Rows are ordered by the coefficient tuple over the reduced basis,
        first coefficient most significant.
        """
        n_words = self.size
        if n_words > max_codewords:
            raise InfeasibleError(f"row space has {n_words} codewords, budget {max_codewords}")
        return next(self.iter_codeword_chunks(chunk=n_words, max_codewords=max_codewords))

    def iter_codeword_chunks(self, chunk: int = 1 << 14, max_codewords: int = DEFAULT_CODEWORD_BUDGET):
        """Yield the row space in order as arrays of up to `chunk` rows."""
        basis = self.basis()
        r = len(basis)
        q = self.field.q
        n_words = q**r
        if n_words > max_codewords:
            raise InfeasibleError(f"row space has {n_words} codewords, budget {max_codewords}")
        if r == 0:
            yield np.zeros((1, self.n), dtype=np.int64)
            return
        f = self.field
        tables = [
            np.stack([f.scale_array(a, np.array(row, dtype=np.int64)) for a in range(q)])
            for row in basis
        ]
        for start in range(0, n_words, chunk):
            idx = np.arange(start, min(start + chunk, n_words))
            acc = None
            rem = idx
            for i in range(r - 1, -1, -1):
                digits = rem % q
                rem = rem // q
                part = tables[i][digits]
                acc = part if acc is None else f.add_array(acc, part)
            yield acc

    def min_distance_exact(self, max_codewords: int = DEFAULT_CODEWORD_BUDGET) -> Fraction:
        """Exact relative minimum distance by full row-space enumeration."""
        if self.rank() == 0:
            raise ValueError("degenerate code: all-zero generator (rank 0)")
        best = None
        first = True
        for block in self.iter_codeword_chunks(max_codewords=max_codewords):
            weights = np.count_nonzero(block, axis=1)
            if first:
                weights = weights[1:]  # skip the zero codeword
                first = False
            if weights.size:
                w = int(weights.min())
                best = w if best is None else min(best, w)
        return Fraction(best, self.n)

    # -- serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "field": {"q": self.field.q, "poly": self.field.poly},
            "k": self.k,
            "n": self.n,
            "generator": [x for row in self.generator for x in row],
            "provenance": self.provenance,
        }

    def __repr__(self) -> str:
        return f"LinearCode(q={self.field.q}, k={self.k}, n={self.n}, {self.provenance.get('kind')})"


def code_from_json_dict(doc: dict) -> LinearCode:
    field = field_new(doc["field"]["q"], doc["field"].get("poly"))
    k, n = doc["k"], doc["n"]
    flat = doc["generator"]
    if len(flat) != k * n:
        raise ValueError("generator length does not match k*n")
    rows = [flat[i * n : (i + 1) * n] for i in range(k)]
    return LinearCode(field, rows, provenance=doc.get("provenance"))


def code_to_json(code: LinearCode) -> str:
    return json.dumps(code.to_json_dict(), sort_keys=True)


def code_from_json(text: str) -> LinearCode:
    return code_from_json_dict(json.loads(text))


def _row_reduce(field: Field, rows) -> tuple[tuple[int, ...], ...]:
    mat = [list(r) for r in rows]
    n = len(mat[0])
    pivot_row = 0
    for col in range(n):
        sel = None
        for r in range(pivot_row, len(mat)):
            if mat[r][col] != 0:
                sel = r
                break
        if sel is None:
            continue
        mat[pivot_row], mat[sel] = mat[sel], mat[pivot_row]
        inv = field.inv(mat[pivot_row][col])
        mat[pivot_row] = [field.mul(inv, x) for x in mat[pivot_row]]
        for r in range(len(mat)):
            if r != pivot_row and mat[r][col] != 0:
                c = mat[r][col]
                mat[r] = [field.sub(x, field.mul(c, p)) for x, p in zip(mat[r], mat[pivot_row])]
        pivot_row += 1
        if pivot_row == len(mat):
            break
    return tuple(tuple(row) for row in mat[:pivot_row])


# -- constructors -----------------------------------------------------------


def rs_code(field: Field, k: int, evals) -> LinearCode:
    """Reed-Solomon code in the monomial basis: G[i][j] = evals[j]^i.

    Messages are coefficient vectors of polynomials of degree < k; the
    codeword of f is its value at each evaluation point. Duplicate points
    are allowed (they model sampling with replacement).
    """
    points = [int(a) for a in evals]
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > field.q:
        raise ValueError(f"k = {k} exceeds field size {field.q}")
    if not points:
        raise ValueError("need at least one evaluation point")
    field._check(*points)
    gen = [[field.pow(a, i) for a in points] for i in range(k)]
    return LinearCode(field, gen, provenance={"kind": "rs", "k": k, "evals": points})


def full_rs_code(field: Field, k: int) -> LinearCode:
    """Reed-Solomon code evaluated at every field element in canonical order."""
    return rs_code(field, k, list(range(field.q)))


def hadamard_code(field: Field, k: int, max_columns: int = DEFAULT_COLUMN_BUDGET) -> LinearCode:
    """Code whose columns enumerate all of F_q^k in canonical order (n = q^k)."""
    q = field.q
    n = q**k
    if n > max_columns:
        raise InfeasibleError(f"hadamard code needs {n} columns, budget {max_columns}")
    cols = np.arange(n)
    gen = []
    for i in range(k):
        gen.append(((cols // q ** (k - 1 - i)) % q).tolist())
    return LinearCode(field, gen, provenance={"kind": "hadamard", "k": k})


def sample_code(parent: LinearCode, n: int, seed: int) -> LinearCode:
    """Keep n generator columns chosen independently uniformly WITH replacement."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, parent.n, size=n)
    gen = [[row[j] for j in idx] for row in parent.generator]
    prov = {
        "kind": "sampled",
        "seed": int(seed),
        "columns": [int(j) for j in idx],
        "parent": parent.provenance,
    }
    return LinearCode(parent.field, gen, provenance=prov)


def puncture_code(parent: LinearCode, n: int, seed: int) -> LinearCode:
    """Keep n distinct generator columns chosen uniformly WITHOUT replacement."""
    if not 1 <= n <= parent.n:
        raise ValueError(f"n must be in [1, {parent.n}]")
    rng = np.random.default_rng(seed)
    idx = rng.choice(parent.n, size=n, replace=False)
    gen = [[row[j] for j in idx] for row in parent.generator]
    prov = {
        "kind": "punctured",
        "seed": int(seed),
        "columns": [int(j) for j in idx],
        "parent": parent.provenance,
    }
    return LinearCode(parent.field, gen, provenance=prov)
