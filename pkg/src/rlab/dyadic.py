"""Exact piecewise-constant functions on dyadic partitions of [0,1].

A StepFunction stores run-length encoded exact rational values on the grid
of 2**level equal cells.  Canonical form merges equal adjacent runs and
drops the level as far as possible, so function equality is equality of
the canonical representations.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    LengthMismatch,
    LevelCapExceeded,
    LevelTooLow,
    NotPowerOfTwo,
    TooLarge,
)

DEFAULT_LEVEL_CAP = 26
_LEVEL_CAP_HARD_MAX = 28


def level_cap() -> int:
    """Current cell-level cap; RLAB_LEVEL_CAP overrides, bounded at 28."""
    raw = os.environ.get("RLAB_LEVEL_CAP")
    if raw is None:
        return DEFAULT_LEVEL_CAP
    try:
        cap = int(raw)
    except ValueError:
        return DEFAULT_LEVEL_CAP
    return max(0, min(cap, _LEVEL_CAP_HARD_MAX))


def _check_level(level: int) -> None:
    if level < 0:
        raise LevelTooLow(f"negative level {level}")
    if level > level_cap():
        raise LevelCapExceeded(f"level {level} exceeds cap {level_cap()}")


def _canonical_runs(runs: Iterable[tuple[int, Fraction]]) -> tuple[tuple[int, Fraction], ...]:
    out: list[tuple[int, Fraction]] = []
    for length, value in runs:
        if length == 0:
            continue
        if out and out[-1][1] == value:
            out[-1] = (out[-1][0] + length, value)
        else:
            out.append((length, value))
    return tuple(out)


@dataclass(frozen=True)
class StepFunction:
    """Canonical run-length encoded step function on 2**level dyadic cells."""

    level: int
    runs: tuple[tuple[int, Fraction], ...]

    @staticmethod
    def from_runs(level: int, runs: Iterable[tuple[int, Fraction]]) -> "StepFunction":
        _check_level(level)
        merged = list(_canonical_runs(runs))
        total = sum(length for length, _ in merged)
        if total != 2**level:
            raise LengthMismatch(f"runs cover {total} cells, expected {2**level}")
        # merged runs have distinct adjacent values, so the level can drop
        # exactly when every run length is even
        while level > 0 and all(length % 2 == 0 for length, _ in merged):
            merged = [(length // 2, value) for length, value in merged]
            level -= 1
        return StepFunction(level, tuple(merged))

    @staticmethod
    def constant(value) -> "StepFunction":
        return StepFunction(0, ((1, Fraction(value)),))

    @staticmethod
    def zero() -> "StepFunction":
        return StepFunction.constant(0)

    @property
    def num_cells(self) -> int:
        return 2**self.level

    def values(self) -> list[Fraction]:
        """Materialize the per-cell values at the function's own level."""
        out: list[Fraction] = []
        for length, value in self.runs:
            out.extend([value] * length)
        return out

    def values_at(self, level: int) -> list[Fraction]:
        if level < self.level:
            raise LevelTooLow(f"level {level} below function level {self.level}")
        _check_level(level)
        rep = 2 ** (level - self.level)
        out: list[Fraction] = []
        for length, value in self.runs:
            out.extend([value] * (length * rep))
        return out

    def cells(self) -> Iterator[tuple[Fraction, Fraction, Fraction]]:
        """Yield (start, end, value) for each constant run."""
        width = Fraction(1, 2**self.level)
        pos = Fraction(0)
        for length, value in self.runs:
            end = pos + length * width
            yield pos, end, value
            pos = end

    def value_at(self, t: Fraction) -> Fraction:
        """Value on the cell containing t (left-closed convention)."""
        t = Fraction(t)
        idx = min(int(t * 2**self.level), 2**self.level - 1)
        pos = 0
        for length, value in self.runs:
            pos += length
            if idx < pos:
                return value
        return self.runs[-1][1]

    def integral(self) -> Fraction:
        width = Fraction(1, 2**self.level)
        return sum((length * value for length, value in self.runs), Fraction(0)) * width

    def abs_integral(self) -> Fraction:
        width = Fraction(1, 2**self.level)
        return sum((length * abs(value) for length, value in self.runs), Fraction(0)) * width

    def sup_abs(self) -> Fraction:
        return max(abs(value) for _, value in self.runs)

    def support_measure(self) -> Fraction:
        width = Fraction(1, 2**self.level)
        return sum((length for length, value in self.runs if value != 0), 0) * width

    def is_zero(self) -> bool:
        return all(value == 0 for _, value in self.runs)

    def map(self, fn) -> "StepFunction":
        return StepFunction.from_runs(
            self.level, ((length, Fraction(fn(value))) for length, value in self.runs)
        )

    def __abs__(self) -> "StepFunction":
        return self.map(abs)

    def scale(self, c) -> "StepFunction":
        c = Fraction(c)
        return self.map(lambda v: v * c)

    def __neg__(self) -> "StepFunction":
        return self.scale(-1)

    def _zip(self, other: "StepFunction", fn) -> "StepFunction":
        level = max(self.level, other.level)
        _check_level(level)
        a = [(length * 2 ** (level - self.level), value) for length, value in self.runs]
        b = [(length * 2 ** (level - other.level), value) for length, value in other.runs]
        out: list[tuple[int, Fraction]] = []
        i = j = 0
        ra, va = a[0]
        rb, vb = b[0]
        while True:
            step = min(ra, rb)
            out.append((step, Fraction(fn(va, vb))))
            ra -= step
            rb -= step
            if ra == 0:
                i += 1
                if i == len(a):
                    break
                ra, va = a[i]
            if rb == 0:
                j += 1
                rb, vb = b[j]
        return StepFunction.from_runs(level, out)

    def __add__(self, other: "StepFunction") -> "StepFunction":
        return self._zip(other, lambda x, y: x + y)

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        return self._zip(other, lambda x, y: x - y)

    def __mul__(self, other: "StepFunction") -> "StepFunction":
        return self._zip(other, lambda x, y: x * y)

    def reciprocal(self) -> "StepFunction":
        if any(value == 0 for _, value in self.runs):
            raise ZeroDivisionError("step function has zero cells")
        return self.map(lambda v: 1 / v)

    def inner(self, other: "StepFunction") -> Fraction:
        """Exact L2 pairing <f, g> = integral of f*g."""
        return (self * other).integral()

    def to_json_dict(self) -> dict:
        return {
            "level": self.level,
            "runs": [[length, f"{value.numerator}/{value.denominator}"] for length, value in self.runs],
        }

    @staticmethod
    def from_json_dict(doc: dict) -> "StepFunction":
        runs = [(int(length), Fraction(text)) for length, text in doc["runs"]]
        return StepFunction.from_runs(int(doc["level"]), runs)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "StepFunction":
        return StepFunction.from_json_dict(json.loads(text))


def make_step(level: int, values: Sequence) -> StepFunction:
    """Build a canonical StepFunction from 2**level per-cell values."""
    _check_level(level)
    vals = [Fraction(v) for v in values]
    if len(vals) != 2**level:
        raise LengthMismatch(f"got {len(vals)} values, expected {2**level}")
    return StepFunction.from_runs(level, ((1, v) for v in vals))


def indicator(level: int, indices: Iterable[int]) -> StepFunction:
    """Characteristic function of a union of rank-`level` dyadic cells.

    `indices` are 1-based cell indices j with cell [(j-1)2^-level, j2^-level].
    """
    _check_level(level)
    chosen = sorted(set(indices))
    if chosen and (chosen[0] < 1 or chosen[-1] > 2**level):
        raise LengthMismatch("cell index out of range")
    runs: list[tuple[int, Fraction]] = []
    pos = 0
    for j in chosen:
        if j - 1 > pos:
            runs.append((j - 1 - pos, Fraction(0)))
        runs.append((1, Fraction(1)))
        pos = j
    if pos < 2**level:
        runs.append((2**level - pos, Fraction(0)))
    if not runs:
        runs = [(2**level, Fraction(0))]
    return StepFunction.from_runs(level, runs)


def chi_prefix(t: Fraction, level: int | None = None) -> StepFunction:
    """Indicator of [0, t] for dyadic-rational t."""
    t = Fraction(t)
    if t <= 0:
        return StepFunction.zero()
    if t >= 1:
        return StepFunction.constant(1)
    if level is None:
        level = (t.denominator - 1).bit_length()
    cells = int(t * 2**level)
    if cells * Fraction(1, 2**level) != t:
        raise LengthMismatch(f"{t} is not a rank-{level} dyadic rational")
    return indicator(level, range(1, cells + 1))


def rademacher(k: int, level: int | None = None) -> StepFunction:
    """Rademacher function r_k = sign(sin 2^k pi t), constant on rank-k cells."""
    if k < 1:
        raise LevelTooLow(f"k must be >= 1, got {k}")
    if level is None:
        level = k
    if level < k:
        raise LevelTooLow(f"level {level} < k = {k}")
    _check_level(level)
    runs = []
    for j in range(2**k):
        runs.append((1, Fraction(1) if j % 2 == 0 else Fraction(-1)))
    return StepFunction.from_runs(k, runs)


def rademacher_sum(a: Sequence) -> StepFunction:
    """Exact finite Rademacher sum sum_k a_k r_k at level n = len(a)."""
    import math

    coeffs = [Fraction(v) for v in a]
    n = len(coeffs)
    _check_level(n)
    den = math.lcm(*(c.denominator for c in coeffs)) if coeffs else 1
    if den.bit_length() <= 48:
        nums = [int(c * den) for c in coeffs]
        if (sum(abs(v) for v in nums) + 1).bit_length() <= 62:
            cells = np.zeros(1, dtype=np.int64)
            for c in nums:
                # each current cell splits into the adjacent pair (v+c, v-c)
                nxt = np.empty(2 * len(cells), dtype=np.int64)
                nxt[0::2] = cells + c
                nxt[1::2] = cells - c
                cells = nxt
            return StepFunction.from_runs(
                n, ((1, Fraction(int(v), den)) for v in cells)
            )
    vals = [Fraction(0)]
    for ak in coeffs:
        # r_{k+1} alternates sign on each half of every current cell
        nxt = []
        for v in vals:
            nxt.append(v + ak)
            nxt.append(v - ak)
        vals = nxt
    return StepFunction.from_runs(n, ((1, v) for v in vals))


SIGN_MATRIX_MAX_N = 16


@dataclass(frozen=True)
class SignMatrix:
    """Values of r_1..r_n on the 2**n rank-n dyadic intervals."""

    n: int
    entries: np.ndarray  # shape (n, 2**n), entries +-1, int8
    selection: tuple[int, ...] | None = None  # 1-based column indices

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.entries[:, j - 1])

    def select(self, js: Iterable[int]) -> "SignMatrix":
        return SignMatrix(self.n, self.entries, tuple(sorted(js)))

    def selected_block(self) -> np.ndarray:
        if self.selection is None:
            return self.entries
        return self.entries[:, [j - 1 for j in self.selection]]


def sign_matrix(n: int) -> SignMatrix:
    if n < 1 or n > SIGN_MATRIX_MAX_N:
        raise TooLarge(f"n must be in 1..{SIGN_MATRIX_MAX_N}, got {n}")
    cols = np.arange(2**n, dtype=np.int64)
    entries = np.empty((n, 2**n), dtype=np.int8)
    for i in range(1, n + 1):
        bits = (cols >> (n - i)) & 1
        entries[i - 1] = 1 - 2 * bits
    return SignMatrix(n, entries)


def _sylvester(n: int) -> np.ndarray:
    if n & (n - 1) != 0 or n < 1:
        raise NotPowerOfTwo(f"n = {n} is not a power of two")
    h = np.array([[1]], dtype=np.int64)
    while h.shape[0] < n:
        h = np.block([[h, h], [h, -h]])
    return h


def pattern_to_index(signs: Sequence[int]) -> int:
    """Map a +-1 sign pattern (s_1..s_n) to the 1-based rank-n cell index.

    Big-endian digits: j = 1 + sum_i b_i 2^(n-i) with b_i = (1 - s_i) / 2.
    """
    n = len(signs)
    j = 1
    for i, s in enumerate(signs, start=1):
        b = (1 - int(s)) // 2
        j += b * 2 ** (n - i)
    return j


def hadamard_select(n: int) -> tuple[int, ...]:
    """Columns J1(n): n rank-n cells whose sign patterns form a Hadamard matrix.

    The returned block satisfies eps^T eps = n I exactly.
    """
    h = _sylvester(n)
    js = sorted(pattern_to_index(h[:, c]) for c in range(n))
    if n <= SIGN_MATRIX_MAX_N:
        block = sign_matrix(n).select(js).selected_block().astype(np.int64)
        gram = block.T @ block
        assert np.array_equal(gram, n * np.eye(n, dtype=np.int64))
    return tuple(js)


def single_negative_select(n: int) -> tuple[int, ...]:
    """Columns J2(n): the n rank-n cells whose pattern has exactly one -1."""
    if n < 2:
        raise TooLarge(f"n must be >= 2, got {n}")
    return tuple(sorted(1 + 2 ** (n - i) for i in range(1, n + 1)))


def combine(f: StepFunction, g: StepFunction | None, op: str, *, c=None, indices=None) -> StepFunction:
    """Dispatch for cellwise algebra: add, sub, mul, abs, scale, indicator."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "abs":
        return abs(f)
    if op == "scale":
        return f.scale(c)
    if op == "indicator":
        return f * indicator(f.level, indices)
    raise ValueError(f"unknown op {op!r}")
