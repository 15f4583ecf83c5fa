"""Hecke eigenvalue tables.

The degree-2 table holds lambda2(n) = a(n) / n^{(k-1)/2} for the weight-12
level-1 holomorphic cusp form, whose integer coefficients a(n) come from the
eta-product expansion

    q * prod_{n>=1} (1 - q^n)^24 = q * (sum_k (-1)^k (2k+1) q^{k(k+1)/2})^8,

using Jacobi's cube identity for prod(1-q^n)^3.  The degree-3 table is the
symmetric-square lift: at a prime p with Satake parameters {a, 1/a} (so
lambda2(p) = a + 1/a), the lift has parameters {a^2, 1, a^-2}.  Coefficients
at prime powers are Schur polynomials in these parameters,

    lam(p^r, p^s) = h_{r+s} h_s - h_{r+s+1} h_{s-1},

where h_k = lam(p^k, 1) satisfies h_k = c(h_{k-1} - h_{k-2}) + h_{k-3} with
c = lambda2(p)^2 - 1, and values extend multiplicatively across primes.

Tables are built once and immutable afterwards; reads are thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientBase, OutOfRange, UnsupportedWeight

try:
    import gmpy2

    _mpz = gmpy2.mpz
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _mpz = int

# Slot width for the Kronecker-substitution polynomial products.  Final
# coefficients satisfy |a(n)| <= d(n) n^{11/2} < 2^110 for n <= 10^6.
_SLOT_BITS = 128
_SLOT_BYTES = _SLOT_BITS // 8


def _eta_cube_terms(length):
    """Sparse coefficients of prod(1-q^n)^3 up to degree < length."""
    terms = []
    k = 0
    while k * (k + 1) // 2 < length:
        terms.append((k * (k + 1) // 2, (-1) ** k * (2 * k + 1)))
        k += 1
    return terms


def _encode(terms, length):
    pos = bytearray(length * _SLOT_BYTES)
    neg = bytearray(length * _SLOT_BYTES)
    for idx, c in terms:
        buf = pos if c > 0 else neg
        off = idx * _SLOT_BYTES
        buf[off : off + _SLOT_BYTES] = abs(c).to_bytes(_SLOT_BYTES, "little")
    return int.from_bytes(bytes(pos), "little") - int.from_bytes(bytes(neg), "little")


def _decode_balanced(value, length):
    """Recover signed slot coefficients (|c| < 2^127) from value mod 2^(B*length)."""
    value &= (1 << (_SLOT_BITS * length)) - 1
    raw = value.to_bytes(length * _SLOT_BYTES, "little")
    half = 1 << (_SLOT_BITS - 1)
    full = 1 << _SLOT_BITS
    out = [0] * length
    carry = 0
    for i in range(length):
        v = int.from_bytes(raw[i * _SLOT_BYTES : (i + 1) * _SLOT_BYTES], "little") + carry
        if v >= half:
            out[i] = v - full
            carry = 1
        else:
            out[i] = v
            carry = 0
    return out


def weight12_integer_coefficients(N: int) -> list[int]:
    """a(1..N) of the weight-12 form, exact integers.

    Three squarings of the encoded eta-cube series give (eta^3)^8; slot
    arithmetic stays below 2^127 so the balanced decode is unambiguous.
    """
    if N < 1:
        raise ValueError("need N >= 1")
    mod = 1 << (_SLOT_BITS * N)
    acc = _mpz(_encode(_eta_cube_terms(N), N))
    for _ in range(3):
        acc = (acc * acc) % mod
    coeffs = _decode_balanced(int(acc), N)
    return [0] + coeffs  # a(n) = coeffs[n-1]; index 0 is a dummy


@dataclass(frozen=True)
class GL2CoefficientTable:
    """Normalized degree-2 Hecke eigenvalues lambda(n), 1 <= n <= N."""

    weight: int
    N: int
    values: np.ndarray          # values[n] = lambda(n); values[0] unused
    integer_values: tuple       # exact a(n), same indexing

    def lam(self, n: int) -> float:
        if not 1 <= n <= self.N:
            raise OutOfRange(f"n={n} outside [1, {self.N}]")
        return float(self.values[n])


def build_gl2_table(k: int, N: int) -> GL2CoefficientTable:
    """Coefficient table of the weight-12 form; other weights are not wired."""
    if k != 12:
        raise UnsupportedWeight(f"weight {k} not supported (only 12)")
    ints = weight12_integer_coefficients(N)
    ns = np.arange(N + 1, dtype=float)
    ns[0] = 1.0
    values = np.array([float(a) for a in ints]) / ns ** ((k - 1) / 2.0)
    values.setflags(write=False)
    return GL2CoefficientTable(weight=k, N=N, values=values, integer_values=tuple(ints))


def _smallest_prime_factors(N):
    spf = np.zeros(N + 1, dtype=np.int64)
    for p in range(2, N + 1):
        if spf[p] == 0:
            spf[p::p] = np.where(spf[p::p] == 0, p, spf[p::p])
    return spf


@dataclass(frozen=True)
class GL3CoefficientTable:
    """Symmetric-square coefficients lam(m1, m2) for m1 * m2 <= N."""

    N: int
    base: GL2CoefficientTable
    h_tables: dict = field(repr=False)       # prime -> array of h_k values
    first_row: np.ndarray = field(repr=False)  # first_row[n] = lam(1, n)
    spf: np.ndarray = field(repr=False)

    def _local(self, p: int, r: int, s: int) -> float:
        h = self.h_tables[p]
        if r + s + 1 >= len(h):
            raise OutOfRange(f"prime power {p}^{r + s} beyond table")
        hm1 = h[s - 1] if s >= 1 else 0.0
        return h[r + s] * h[s] - h[r + s + 1] * hm1

    def lam(self, m1: int, m2: int) -> float:
        if m1 < 1 or m2 < 1 or m1 * m2 > self.N:
            raise OutOfRange(f"(m1, m2) = ({m1}, {m2}) outside m1*m2 <= {self.N}")
        val = 1.0
        n = m1 * m2
        while n > 1:
            p = int(self.spf[n])
            r = 0
            while m1 % p == 0:
                m1 //= p
                r += 1
            s = 0
            while m2 % p == 0:
                m2 //= p
                s += 1
            val *= self._local(p, r, s)
            n = m1 * m2
        return val


def sym2_local_expansion(lam_p: float, kmax: int) -> np.ndarray:
    """Independent oracle for h_k: expand the lift's local Euler factor.

    With lambda2(p) = 2 cos(theta), the parameters are (e^{2i theta}, 1,
    e^{-2i theta}); h_k is the complete homogeneous polynomial, computed by
    multiplying the three truncated geometric series directly.
    """
    theta = math.acos(max(-1.0, min(1.0, lam_p / 2.0)))
    params = [np.exp(2j * theta), 1.0 + 0j, np.exp(-2j * theta)]
    series = np.zeros(kmax + 1, dtype=complex)
    series[0] = 1.0
    for a in params:
        geo = a ** np.arange(kmax + 1)
        series = np.convolve(series, geo)[: kmax + 1]
    assert np.abs(series.imag).max() < 1e-9
    return series.real


def build_gl3_sym2_table(base: GL2CoefficientTable, N: int) -> GL3CoefficientTable:
    """Symmetric-square lift table on m1 * m2 <= N."""
    if base.N < N:
        raise InsufficientBase(f"base covers {base.N} < {N}")
    spf = _smallest_prime_factors(N)
    h_tables = {}
    for p in range(2, N + 1):
        if spf[p] != p:
            continue
        kmax = 1
        while p ** kmax <= N:
            kmax += 1
        c = base.lam(p) ** 2 - 1.0
        h = np.zeros(kmax + 3)
        h[0] = 1.0
        for k in range(1, kmax + 3):
            h[k] = c * (h[k - 1] - (h[k - 2] if k >= 2 else 0.0)) + (
                h[k - 3] if k >= 3 else 0.0
            )
        h.setflags(write=False)
        h_tables[p] = h
    # dense first row lam(1, n) via the smallest-prime-factor sieve
    first = np.ones(N + 1)
    for n in range(2, N + 1):
        p = int(spf[n])
        m, s = n, 0
        while m % p == 0:
            m //= p
            s += 1
        h = h_tables[p]
        local = h[s] * h[s] - h[s + 1] * h[s - 1]
        first[n] = first[m] * local
    first.setflags(write=False)
    return GL3CoefficientTable(N=N, base=base, h_tables=h_tables, first_row=first, spf=spf)


def rankin_selberg_average(table, x) -> float:
    """(1/x) sum_{n <= x} |lam(1,n)|^2 (degree-3) or |lam(n)|^2 (degree-2)."""
    x = int(x)
    if x < 1:
        raise OutOfRange("need x >= 1")
    if isinstance(table, GL3CoefficientTable):
        if x > table.N:
            raise OutOfRange(f"x={x} beyond table range {table.N}")
        row = table.first_row[1 : x + 1]
    elif isinstance(table, GL2CoefficientTable):
        if x > table.N:
            raise OutOfRange(f"x={x} beyond table range {table.N}")
        row = table.values[1 : x + 1]
    else:
        raise TypeError("expected a coefficient table")
    return float(np.sum(row * row) / x)


def hecke_inequality_check(table: GL3CoefficientTable, q1: int, m2: int) -> bool:
    """|lam(m2,q1)|^2 <= 2 |lam(m2,1)|^2 |lam(q1,1)|^2 + 2 |lam(m2/q1,1)|^2.

    The last term drops out when q1 does not divide m2.
    """
    q1 = int(q1)
    if q1 * m2 > table.N:
        raise OutOfRange(f"q1*m2 = {q1 * m2} beyond table range {table.N}")
    lhs = table.lam(m2, q1) ** 2
    rhs = 2.0 * table.lam(m2, 1) ** 2 * table.lam(q1, 1) ** 2
    if m2 % q1 == 0:
        rhs += 2.0 * table.lam(m2 // q1, 1) ** 2
    return lhs <= rhs + 1e-9 * (1.0 + abs(rhs))


def dump_table_csv(table, path) -> None:
    """Write (index, value) rows for cross-tool validation."""
    lines = []
    if isinstance(table, GL2CoefficientTable):
        lines.append("n,lambda")
        for n in range(1, table.N + 1):
            lines.append(f"{n},{float(table.values[n])!r}")
    elif isinstance(table, GL3CoefficientTable):
        lines.append("m1,m2,lambda")
        for n in range(1, table.N + 1):
            lines.append(f"1,{n},{float(table.first_row[n])!r}")
    else:
        raise TypeError("expected a coefficient table")
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def load_table_csv(path) -> dict:
    """Read a dump back as {index: value}; degree inferred from the header."""
    out = {}
    with open(path) as f:
        header = f.readline().strip().split(",")
        for line in f:
            parts = line.strip().split(",")
            if len(header) == 2:
                out[int(parts[0])] = float(parts[1])
            else:
                out[(int(parts[0]), int(parts[1]))] = float(parts[2])
    return out
