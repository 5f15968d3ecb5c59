"""Exact functions and set families on the discrete cube {0,1}^n.

Conventions
-----------
A point of the cube is an integer mask ``m`` in ``range(2**n)``; element
``i`` of ``[n] = {1..n}`` belongs to the subset encoded by ``m`` iff bit
``i-1`` of ``m`` is set.  Fourier masks use the same convention.  A set
family is stored as one Python int of ``2**n`` bits (bit ``m`` set iff the
subset with mask ``m`` is a member), so most predicates are a handful of
big-int operations.

Real-valued functions are stored as an integer array ``num`` plus a shared
exponent, value ``num[m] / 2**exp``.  The array is ``int64`` whenever every
intermediate of the transform provably fits, and ``object`` (Python ints)
otherwise.
"""

from __future__ import annotations

import hashlib
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache, reduce
from operator import or_
from typing import Iterable, Sequence

import numpy as np

from .dyadic import Dyadic, as_dyadic, to_fraction
from .errors import ClassViolation, DimensionMismatch

__all__ = [
    "MAX_N",
    "CubeFunction",
    "Spectrum",
    "SetFamily",
    "InfluenceVector",
    "FamilyPredicates",
    "NonAntipodalWarning",
    "wht",
    "inverse_wht",
    "influence",
    "influences",
    "correlation",
    "spectral_correlation",
    "predicates",
    "dual",
    "plus_minus_parts",
    "directional_difference",
    "m_alpha",
    "s_gamma",
    "antipodal_lift",
    "f_star",
    "mask_to_set",
    "set_to_mask",
    "popcounts",
]

MAX_N = 24
_INT64_BITS = 62


class NonAntipodalWarning(UserWarning):
    pass


# --------------------------------------------------------------------------
# mask helpers

def set_to_mask(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        if e < 1:
            raise ValueError(f"elements are 1-based, got {e}")
        m |= 1 << (e - 1)
    return m


def mask_to_set(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


@lru_cache(maxsize=None)
def popcounts(n: int) -> np.ndarray:
    """``|S|`` for every mask ``S`` of the n-cube."""
    idx = np.arange(1 << n, dtype=np.int64)
    pc = np.zeros(1 << n, dtype=np.int64)
    for k in range(n):
        pc += (idx >> k) & 1
    pc.flags.writeable = False
    return pc


@lru_cache(maxsize=None)
def _low_masks(n: int) -> tuple[int, ...]:
    """Bitset of points whose bit k is clear, for k = 0..n-1."""
    size = 1 << n
    out = []
    for k in range(n):
        h = 1 << k
        repunit = ((1 << size) - 1) // ((1 << (2 * h)) - 1)
        out.append(((1 << h) - 1) * repunit)
    return tuple(out)


_REV_BYTE = bytes(int(f"{b:08b}"[::-1], 2) for b in range(256))


def _reverse_bits(x: int, width: int) -> int:
    if width < 8:
        return int(format(x, f"0{width}b")[::-1], 2)
    raw = x.to_bytes(width // 8, "little")
    return int.from_bytes(raw[::-1].translate(_REV_BYTE), "little")


def _up_closure(bits: int, n: int) -> int:
    for k, low in enumerate(_low_masks(n)):
        bits |= (bits & low) << (1 << k)
    return bits


def _down_closure(bits: int, n: int) -> int:
    for k, low in enumerate(_low_masks(n)):
        bits |= (bits >> (1 << k)) & low
    return bits


def _check_n(n: int, lo: int = 0) -> None:
    if not isinstance(n, (int, np.integer)) or n < lo or n > MAX_N:
        raise ValueError(f"dimension must be an integer in [{lo}, {MAX_N}], got {n}")


# --------------------------------------------------------------------------
# scaled integer arrays

def _fits_int64(max_abs: int, growth_bits: int) -> bool:
    return max_abs.bit_length() + growth_bits <= _INT64_BITS


def _as_int_array(values: Sequence[int], growth_bits: int) -> np.ndarray:
    max_abs = max((abs(int(v)) for v in values), default=0)
    if _fits_int64(max_abs, growth_bits):
        return np.array([int(v) for v in values], dtype=np.int64)
    arr = np.empty(len(values), dtype=object)
    arr[:] = [int(v) for v in values]
    return arr


def _reduce_exp(num: np.ndarray, exp: int) -> tuple[np.ndarray, int]:
    if exp == 0:
        return num, 0
    if num.dtype == object:
        acc = reduce(or_, (abs(v) for v in num), 0)
    else:
        acc = int(np.bitwise_or.reduce(np.abs(num))) if num.size else 0
    if acc == 0:
        return np.zeros_like(num), 0
    tz = (acc & -acc).bit_length() - 1
    shift = min(tz, exp)
    if shift:
        num = num >> shift if num.dtype != object else np.array([v >> shift for v in num], dtype=object)
    return num, exp - shift


def _butterfly(num: np.ndarray, n: int) -> np.ndarray:
    """Unnormalized Walsh-Hadamard butterfly: out[S] = sum_T num[T] (-1)^|S&T|."""
    a = num.copy()
    for k in range(n):
        h = 1 << k
        v = a.reshape(-1, 2, h)
        lo = v[:, 0, :].copy()
        hi = v[:, 1, :]
        v[:, 0, :] = lo + hi
        v[:, 1, :] = lo - hi
    return a


def _to_pyints(num: np.ndarray) -> list[int]:
    return [int(v) for v in num]


# --------------------------------------------------------------------------
# core types

class CubeFunction:
    """An exact dyadic-valued function on ``{0,1}^n``, given by its truth table.

    >>> f = CubeFunction(2, [0, 1, 1, Dyadic(1, 1)])
    >>> f[3]
    Dyadic(1, 1)
    """

    __slots__ = ("n", "_num", "_exp")

    def __init__(self, n: int, values: Sequence):
        _check_n(n)
        if len(values) != 1 << n:
            raise ValueError(f"expected {1 << n} values, got {len(values)}")
        ds = [as_dyadic(v) for v in values]
        exp = max((d.exponent for d in ds), default=0)
        nums = [d.numerator << (exp - d.exponent) for d in ds]
        self.n = n
        self._num = _as_int_array(nums, n + 1)
        self._exp = exp

    @classmethod
    def _raw(cls, n: int, num: np.ndarray, exp: int) -> "CubeFunction":
        obj = cls.__new__(cls)
        obj.n = n
        if num.dtype != object:
            max_abs = int(np.max(np.abs(num))) if num.size else 0
            if not _fits_int64(max_abs, n + 1):
                num = num.astype(object)
        obj._num, obj._exp = _reduce_exp(num, exp)
        return obj

    @classmethod
    def constant(cls, n: int, value=1) -> "CubeFunction":
        d = as_dyadic(value)
        return cls._raw(n, np.full(1 << n, d.numerator, dtype=np.int64), d.exponent)

    @classmethod
    def character(cls, n: int, mask: int) -> "CubeFunction":
        """The Walsh character ``u_S(T) = (-1)^{|S & T|}``."""
        pc = popcounts(n)[np.arange(1 << n) & mask]
        return cls._raw(n, 1 - 2 * (pc & 1), 0)

    # access ----------------------------------------------------------------

    def __len__(self) -> int:
        return 1 << self.n

    def __getitem__(self, mask: int) -> Dyadic:
        return Dyadic(int(self._num[mask]), self._exp)

    @property
    def values(self) -> tuple[Dyadic, ...]:
        return tuple(Dyadic(v, self._exp) for v in _to_pyints(self._num))

    @property
    def scaled(self) -> tuple[np.ndarray, int]:
        """``(num, exp)`` with value ``num / 2**exp``; ``num`` must not be mutated."""
        return self._num, self._exp

    def to_fractions(self) -> list[Fraction]:
        d = 1 << self._exp
        return [Fraction(v, d) for v in _to_pyints(self._num)]

    def total(self) -> Dyadic:
        return Dyadic(sum(_to_pyints(self._num)), self._exp)

    def mean(self) -> Dyadic:
        return Dyadic(sum(_to_pyints(self._num)), self._exp + self.n)

    def norm2_squared(self) -> Dyadic:
        """``E[f^2]`` under the uniform measure."""
        return Dyadic(sum(v * v for v in _to_pyints(self._num)), 2 * self._exp + self.n)

    def norm1(self) -> Dyadic:
        return Dyadic(sum(abs(v) for v in _to_pyints(self._num)), self._exp + self.n)

    def is_antipodal(self) -> bool:
        """``f(A^c) = -f(A)`` for every A."""
        return bool(np.all(self._num == -self._num[::-1]))

    # arithmetic ------------------------------------------------------------

    def _aligned(self, other: "CubeFunction") -> tuple[np.ndarray, np.ndarray, int]:
        if self.n != other.n:
            raise DimensionMismatch(f"dimensions differ: {self.n} vs {other.n}")
        e = max(self._exp, other._exp)
        a = self._num.astype(object) * (1 << (e - self._exp))
        b = other._num.astype(object) * (1 << (e - other._exp))
        return a, b, e

    def __add__(self, other):
        if isinstance(other, CubeFunction):
            a, b, e = self._aligned(other)
            return CubeFunction._normalized(self.n, a + b, e)
        if isinstance(other, (int, Dyadic)):
            return self + CubeFunction.constant(self.n, other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return CubeFunction._raw(self.n, -self._num, self._exp)

    def __sub__(self, other):
        if isinstance(other, (CubeFunction, int, Dyadic)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, CubeFunction):
            a, b, e = self._aligned(other)
            return CubeFunction._normalized(self.n, a * b, 2 * e)
        if isinstance(other, (int, Dyadic)):
            d = as_dyadic(other)
            return CubeFunction._normalized(self.n, self._num.astype(object) * d.numerator,
                                            self._exp + d.exponent)
        return NotImplemented

    __rmul__ = __mul__

    @classmethod
    def _normalized(cls, n: int, obj_num: np.ndarray, exp: int) -> "CubeFunction":
        vals = _to_pyints(obj_num)
        return cls._raw(n, _as_int_array(vals, n + 1), exp)

    def __eq__(self, other):
        if not isinstance(other, CubeFunction):
            return NotImplemented
        if self.n != other.n:
            return False
        a, b, _ = self._aligned(other)
        return bool(np.all(a == b))

    def __hash__(self):
        return hash((self.n, self._exp, tuple(_to_pyints(self._num))))

    def __repr__(self) -> str:
        if self.n <= 4:
            return f"CubeFunction({self.n}, [{', '.join(str(v) for v in self.values)}])"
        return f"CubeFunction(n={self.n}, exp={self._exp})"


class Spectrum:
    """Fourier-Walsh coefficients ``f^(S)`` indexed by mask ``S``."""

    __slots__ = ("n", "_num", "_exp")

    def __init__(self, n: int, coeffs: Sequence):
        _check_n(n)
        if len(coeffs) != 1 << n:
            raise ValueError(f"expected {1 << n} coefficients, got {len(coeffs)}")
        ds = [as_dyadic(v) for v in coeffs]
        exp = max((d.exponent for d in ds), default=0)
        self.n = n
        self._num = _as_int_array([d.numerator << (exp - d.exponent) for d in ds], n + 1)
        self._exp = exp

    @classmethod
    def _raw(cls, n: int, num: np.ndarray, exp: int) -> "Spectrum":
        obj = cls.__new__(cls)
        obj.n = n
        obj._num, obj._exp = _reduce_exp(num, exp)
        return obj

    @classmethod
    def from_dict(cls, n: int, coeffs: dict) -> "Spectrum":
        """Build from ``{mask: value}``; missing masks are zero."""
        table = [0] * (1 << n)
        for mask, v in coeffs.items():
            table[mask] = v
        return cls(n, table)

    def __getitem__(self, mask: int) -> Dyadic:
        return Dyadic(int(self._num[mask]), self._exp)

    def __len__(self) -> int:
        return 1 << self.n

    @property
    def coeffs(self) -> tuple[Dyadic, ...]:
        return tuple(Dyadic(v, self._exp) for v in _to_pyints(self._num))

    @property
    def scaled(self) -> tuple[np.ndarray, int]:
        return self._num, self._exp

    def nonzero(self) -> dict[int, Dyadic]:
        return {int(s): Dyadic(int(self._num[s]), self._exp) for s in np.flatnonzero(self._num)}

    def squared_scaled(self) -> tuple[list[int], int]:
        """Exact squares as Python ints: ``f^(S)^2 = sq[S] / 2**exp2``."""
        vals = _to_pyints(self._num)
        return [v * v for v in vals], 2 * self._exp

    def sum_squares(self, include_empty: bool = True) -> Dyadic:
        sq, e = self.squared_scaled()
        total = sum(sq) - (0 if include_empty else sq[0])
        return Dyadic(total, e)

    def __eq__(self, other):
        if not isinstance(other, Spectrum):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, self.coeffs))

    def __repr__(self) -> str:
        nz = ", ".join(f"{set(mask_to_set(s)) or '{}'}: {v}" for s, v in self.nonzero().items())
        return f"Spectrum(n={self.n}, {{{nz}}})"


class SetFamily:
    """A family of subsets of ``[n]`` stored as a ``2**n``-bit membership bitset.

    >>> F = SetFamily.from_sets(3, [[1], [1, 2], [1, 3], [1, 2, 3]])
    >>> F.count, F.measure()
    (4, Dyadic(1, 1))
    """

    def __init__(self, n: int, bits: int = 0):
        _check_n(n)
        bits = int(bits)
        if bits < 0 or bits >> (1 << n):
            raise ValueError("membership bitset does not fit the cube")
        self.n = n
        self.bits = bits

    def __setattr__(self, name, value):
        if name in ("n", "bits") and name in self.__dict__:
            raise AttributeError("SetFamily is immutable")
        super().__setattr__(name, value)

    # constructors ----------------------------------------------------------

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int]) -> "SetFamily":
        bits = 0
        for m in masks:
            if not 0 <= m < 1 << n:
                raise ValueError(f"mask {m} outside the {n}-cube")
            bits |= 1 << m
        return cls(n, bits)

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> "SetFamily":
        masks = []
        for s in sets:
            m = set_to_mask(s)
            if m >> n:
                raise ValueError(f"set {sorted(s)} is not a subset of [{n}]")
            masks.append(m)
        return cls.from_masks(n, masks)

    @classmethod
    def empty(cls, n: int) -> "SetFamily":
        return cls(n, 0)

    @classmethod
    def full(cls, n: int) -> "SetFamily":
        return cls(n, (1 << (1 << n)) - 1)

    @classmethod
    def up_closure(cls, n: int, generators: Iterable[int]) -> "SetFamily":
        return cls(n, _up_closure(cls.from_masks(n, generators).bits, n))

    @classmethod
    def down_closure(cls, n: int, generators: Iterable[int]) -> "SetFamily":
        return cls(n, _down_closure(cls.from_masks(n, generators).bits, n))

    @classmethod
    def from_predicate(cls, n: int, pred) -> "SetFamily":
        return cls.from_masks(n, (m for m in range(1 << n) if pred(m)))

    # basic views -----------------------------------------------------------

    @property
    def size(self) -> int:
        """Number of points of the cube, ``2**n``."""
        return 1 << self.n

    @cached_property
    def count(self) -> int:
        return self.bits.bit_count()

    def __len__(self) -> int:
        return self.count

    def __contains__(self, item) -> bool:
        mask = item if isinstance(item, int) else set_to_mask(item)
        return bool(self.bits >> mask & 1)

    def masks(self) -> list[int]:
        return [m for m in range(1 << self.n) if self.bits >> m & 1]

    def __iter__(self):
        return iter(self.masks())

    def to_sets(self) -> list[tuple[int, ...]]:
        return [mask_to_set(m) for m in self.masks()]

    def measure(self) -> Dyadic:
        return Dyadic(self.count, self.n)

    @cached_property
    def indicator_array(self) -> np.ndarray:
        nbytes = max(1, (1 << self.n) // 8)
        raw = np.frombuffer(self.bits.to_bytes(nbytes, "little"), dtype=np.uint8)
        arr = np.unpackbits(raw, bitorder="little")[: 1 << self.n].astype(np.int64)
        arr.flags.writeable = False
        return arr

    def indicator(self) -> CubeFunction:
        return CubeFunction._raw(self.n, self.indicator_array.copy(), 0)

    @cached_property
    def spectrum(self) -> Spectrum:
        return wht(self.indicator())

    @cached_property
    def influence_counts(self) -> tuple[int, ...]:
        """Boundary edges in each direction; ``I_k = count_k / 2**(n-1)``."""
        out = []
        for k, low in enumerate(_low_masks(self.n)):
            lower = self.bits & low
            upper = (self.bits >> (1 << k)) & low
            out.append((lower ^ upper).bit_count())
        return tuple(out)

    def digest(self) -> str:
        return hashlib.sha256(f"{self.n}:{self.hex()}".encode()).hexdigest()[:16]

    def hex(self) -> str:
        width = max(1, ((1 << self.n) + 3) // 4)
        return format(self.bits, f"0{width}x")

    # set algebra -----------------------------------------------------------

    def _same(self, other: "SetFamily") -> None:
        if not isinstance(other, SetFamily):
            raise TypeError("expected a SetFamily")
        if other.n != self.n:
            raise DimensionMismatch(f"dimensions differ: {self.n} vs {other.n}")

    def __and__(self, other):
        self._same(other)
        return SetFamily(self.n, self.bits & other.bits)

    def __or__(self, other):
        self._same(other)
        return SetFamily(self.n, self.bits | other.bits)

    def __xor__(self, other):
        self._same(other)
        return SetFamily(self.n, self.bits ^ other.bits)

    def __sub__(self, other):
        self._same(other)
        return SetFamily(self.n, self.bits & ~other.bits)

    def complement(self) -> "SetFamily":
        """``Omega \\ F`` (not to be confused with :meth:`complements`)."""
        return SetFamily(self.n, ((1 << (1 << self.n)) - 1) ^ self.bits)

    def complements(self) -> "SetFamily":
        """``{A^c : A in F}``."""
        return SetFamily(self.n, _reverse_bits(self.bits, 1 << self.n))

    def __le__(self, other):
        self._same(other)
        return self.bits & ~other.bits == 0

    def __eq__(self, other):
        if not isinstance(other, SetFamily):
            return NotImplemented
        return self.n == other.n and self.bits == other.bits

    def __hash__(self):
        return hash((self.n, self.bits))

    def __repr__(self) -> str:
        if self.count <= 8:
            body = ", ".join("{" + ",".join(map(str, s)) + "}" for s in self.to_sets())
            return f"SetFamily(n={self.n}, [{body}])"
        return f"SetFamily(n={self.n}, count={self.count}, tt=0x{self.hex()[:16]}...)"

    # monotonicity ----------------------------------------------------------

    @cached_property
    def is_increasing(self) -> bool:
        b = self.bits
        return all(((b & low) << (1 << k)) & ~b == 0 for k, low in enumerate(_low_masks(self.n)))

    @cached_property
    def is_decreasing(self) -> bool:
        b = self.bits
        return all(((b >> (1 << k)) & low) & ~b == 0 for k, low in enumerate(_low_masks(self.n)))

    @cached_property
    def is_intersecting(self) -> bool:
        return self.bits & _down_closure(self.complements().bits, self.n) == 0

    @cached_property
    def is_antipodal(self) -> bool:
        full = (1 << (1 << self.n)) - 1
        return self.complements().bits == full ^ self.bits

    @property
    def is_maximal_intersecting(self) -> bool:
        return self.is_increasing and self.is_antipodal

    @property
    def is_balanced(self) -> bool:
        return 2 * self.count == 1 << self.n

    @property
    def is_regular(self) -> bool:
        return len(set(self.influence_counts)) <= 1


@dataclass(frozen=True)
class InfluenceVector:
    n: int
    entries: tuple[Dyadic, ...]

    @property
    def total(self) -> Dyadic:
        return sum(self.entries, Dyadic(0))

    @property
    def minimum(self) -> Dyadic:
        return min(self.entries) if self.entries else Dyadic(0)

    def __getitem__(self, k: int) -> Dyadic:
        """1-based coordinate access."""
        return self.entries[k - 1]

    def __iter__(self):
        return iter(self.entries)


@dataclass(frozen=True)
class FamilyPredicates:
    increasing: bool
    decreasing: bool
    intersecting: bool
    antipodal: bool
    regular: bool
    balanced: bool

    @property
    def maximal_intersecting(self) -> bool:
        return self.increasing and self.antipodal


# --------------------------------------------------------------------------
# operations

def wht(f: CubeFunction) -> Spectrum:
    """Fourier-Walsh coefficients ``f^(S) = 2^-n sum_T f(T) (-1)^{|S & T|}``, exactly.

    In-place butterfly, ``n * 2**n`` additions.
    """
    num, exp = f.scaled
    return Spectrum._raw(f.n, _butterfly(num, f.n), exp + f.n)


def inverse_wht(s: Spectrum) -> CubeFunction:
    """``f(T) = sum_S f^(S) (-1)^{|S & T|}``; exact inverse of :func:`wht`."""
    num, exp = s.scaled
    if num.dtype != object and not _fits_int64(int(np.max(np.abs(num))) if num.size else 0, s.n + 1):
        num = num.astype(object)
    return CubeFunction._raw(s.n, _butterfly(num, s.n), exp)


def _coord(F, k: int) -> None:
    if not 1 <= k <= F.n:
        raise ValueError(f"coordinate {k} outside [1, {F.n}]")


def influence(F: SetFamily, k: int) -> Dyadic:
    """``I_k(F) = 2 mu({x in F : x + e_k not in F})``."""
    _coord(F, k)
    return Dyadic(F.influence_counts[k - 1], F.n - 1) if F.n >= 1 else Dyadic(0)


def influences(F: SetFamily) -> InfluenceVector:
    return InfluenceVector(F.n, tuple(Dyadic(c, F.n - 1) for c in F.influence_counts))


def correlation(A, B) -> Dyadic:
    """``Cor(A, B) = E[AB] - E[A]E[B]`` for two families or two cube functions."""
    if isinstance(A, SetFamily) and isinstance(B, SetFamily):
        A._same(B)
        n = A.n
        return Dyadic((A.bits & B.bits).bit_count() * (1 << n) - A.count * B.count, 2 * n)
    if isinstance(A, SetFamily):
        A = A.indicator()
    if isinstance(B, SetFamily):
        B = B.indicator()
    return (A * B).mean() - A.mean() * B.mean()


def spectral_correlation(a: Spectrum, b: Spectrum) -> Dyadic:
    """``sum_{S != {}} a(S) b(S)``; equals the correlation by Parseval."""
    if a.n != b.n:
        raise DimensionMismatch(f"dimensions differ: {a.n} vs {b.n}")
    an, ae = a.scaled
    bn, be = b.scaled
    total = sum(x * y for x, y in zip(_to_pyints(an[1:]), _to_pyints(bn[1:])))
    return Dyadic(total, ae + be)


def predicates(F: SetFamily) -> FamilyPredicates:
    return FamilyPredicates(
        increasing=F.is_increasing,
        decreasing=F.is_decreasing,
        intersecting=F.is_intersecting,
        antipodal=F.is_antipodal,
        regular=F.is_regular,
        balanced=F.is_balanced,
    )


def dual(F: SetFamily) -> SetFamily:
    """``F' = {B : B^c not in F}``."""
    return F.complements().complement()


def plus_minus_parts(F: SetFamily) -> tuple[SetFamily, SetFamily]:
    """``(F & F', F | F')`` for increasing F."""
    if not F.is_increasing:
        raise ClassViolation("plus_minus_parts requires an increasing family")
    d = dual(F)
    return F & d, F | d


def _flip(num: np.ndarray, n: int, i: int) -> np.ndarray:
    h = 1 << (i - 1)
    return num.reshape(-1, 2, h)[:, ::-1, :].reshape(-1)


def directional_difference(f: CubeFunction, i: int, convention: str = "full") -> CubeFunction:
    """``f(x) - f(x + e_i)``, or half of it with ``convention="half"``.

    Under the half convention the spectrum is ``[i in S] f^(S)``; under the
    full one it is twice that.
    """
    _coord(f, i)
    if convention not in ("full", "half"):
        raise ValueError("convention must be 'full' or 'half'")
    num, exp = f.scaled
    diff = num - _flip(num, f.n, i)
    return CubeFunction._raw(f.n, diff, exp + (1 if convention == "half" else 0))


def m_alpha(f: CubeFunction | Spectrum, alpha: float) -> float:
    """``sum_{S != {}} f^(S)^2 / |S|^alpha`` for a mean-zero ``f``."""
    if not 0 <= alpha <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    spec = f if isinstance(f, Spectrum) else wht(f)
    num, exp = spec.scaled
    if num[0] != 0:
        raise ValueError("m_alpha requires a mean-zero function")
    sq, e2 = spec.squared_scaled()
    by_level = [0] * (spec.n + 1)
    for s, v in zip(popcounts(spec.n).tolist(), sq):
        by_level[s] += v
    den = 1 << e2
    if alpha == 0:
        return float(Fraction(sum(by_level), den))
    return sum(float(Fraction(t, den)) / k ** alpha for k, t in enumerate(by_level) if k and t)


def log2_exact(q) -> float:
    """``log2`` of a positive rational, exact when it is a power of two."""
    q = to_fraction(q)
    if q <= 0:
        raise ValueError("log2 of a non-positive value")
    num, den = q.numerator, q.denominator
    if num & (num - 1) == 0 and den & (den - 1) == 0:
        return float(num.bit_length() - den.bit_length())
    return math.log2(num) - math.log2(den)


def s_gamma(F: SetFamily, gamma: float) -> Dyadic:
    """Sum of the ``max(1, floor(gamma * log2(1/mu)))`` smallest influences."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if F.count == 0 or F.count == 1 << F.n:
        raise ValueError("s_gamma needs 0 < mu(F) < 1")
    q = max(1, math.floor(gamma * -log2_exact(F.measure())))
    q = min(q, F.n)
    order = sorted(range(F.n), key=lambda k: (F.influence_counts[k], k))
    return Dyadic(sum(F.influence_counts[k] for k in order[:q]), F.n - 1)


def antipodal_lift(F: SetFamily) -> CubeFunction:
    """``2 * 1_F - 1``; warns when F is not antipodal."""
    if not F.is_antipodal:
        warnings.warn("family is not antipodal; the lift is only +-1 valued",
                      NonAntipodalWarning, stacklevel=2)
    return CubeFunction._raw(F.n, 2 * F.indicator_array - 1, 0)


def f_star(f: CubeFunction) -> CubeFunction:
    """``max(f, 0)**2`` pointwise."""
    num, exp = f.scaled
    pos = np.where(num > 0, num, 0)
    return CubeFunction._normalized(f.n, pos.astype(object) ** 2, 2 * exp)
