"""Composite Kloosterman-type character sums over factorable moduli.

Two families, with e_q(x) = exp(2 pi i x / q):

    S(m1, m2, n, h; q)
        = sum over units a mod q of e_q(a h) e_q(-abar n) S(abar, m2; q/m1),
      defined for m1 | q.  For m1 = q it degenerates to S(h, -n; q).

    T(n, m, h; q1, q1t, q2)
        = sum over alpha mod q1*q1t*q2 of
              S(1, alpha, n, h; q1 q2) conj(S(1, alpha, n, h; q1t q2))
              e_{q1 q1t q2}(m alpha).

Brute-force summation is the ground truth; the closed forms below are
verified against it, never assumed.  For q = q1 q2 a product of two distinct
primes, S factors through the residues mod q1 and mod q2, and for
q1 != q1t the sum T factors into three sums with moduli q1, q1t, q2:

    T = T1(q1) * T1(q1t)~ * T2,
    T1(q1)  = q1 S(q2bar h, -q2bar (n + q1t mbar); q1)   if (m, q1) = 1,
              0 otherwise,

where mbar is the inverse of m mod q1.  The factor coming from the
conjugated S is the mirror image of T1 with m replaced by -m (conjugation
flips the sign of the Poisson phase).  T2 is the mod-q2 factor written out
in t2_sum below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .arith import PrimeModulus, kloosterman_table, unit_inverses, unit_residues
from .errors import InvalidDivisor
from .reports import ExperimentReport


@dataclass(frozen=True)
class CompositeModulus:
    """q = q1 * q2 with q1, q2 distinct primes."""

    q1: PrimeModulus
    q2: PrimeModulus

    def __post_init__(self):
        if self.q1.p == self.q2.p:
            raise ValueError("q1 and q2 must be distinct primes")

    @property
    def q(self) -> int:
        return self.q1.p * self.q2.p


@dataclass(frozen=True)
class SCharParams:
    """Parameters (m1, m2, n, h) of S over the modulus q (m1 | q)."""

    m1: int
    m2: int
    n: int
    h: int
    modulus: Union[CompositeModulus, int]

    @property
    def q(self) -> int:
        return self.modulus.q if isinstance(self.modulus, CompositeModulus) else self.modulus

    def __post_init__(self):
        if self.q % self.m1 != 0:
            raise InvalidDivisor(f"m1={self.m1} does not divide q={self.q}")


@dataclass(frozen=True)
class TCharParams:
    """Parameters (n, m, h) of T over the prime triple (q1, q1t, q2).

    q1 = q1t is permitted (the two inner S then share a modulus); q2 must
    differ from both.
    """

    n: int
    m: int
    h: int
    q1: PrimeModulus
    q1t: PrimeModulus
    q2: PrimeModulus

    def __post_init__(self):
        if self.q2.p in (self.q1.p, self.q1t.p):
            raise ValueError("q2 must avoid {q1, q1t}")


def _eq_pow(q: int, exponents: np.ndarray) -> np.ndarray:
    return np.exp(2j * np.pi * (exponents % q) / q)


def char_sum_S(p: SCharParams) -> complex:
    """S(m1, m2, n, h; q) by direct double summation."""
    q = p.q
    if q == 1:
        return 1.0 + 0.0j
    qm = q // p.m1
    a = unit_residues(q)
    ab = unit_inverses(q)
    outer = _eq_pow(q, p.h * a - p.n * ab)
    kt = kloosterman_table(qm)
    inner = kt[ab % qm, p.m2 % qm]
    return complex(np.sum(outer * inner))


def char_sum_S_factored(m1: int, m2: int, n: int, h: int, q1: int, q2: int) -> complex:
    """S over q = q1 q2 (distinct primes) as a product of per-prime factors.

    For each prime p with cofactor c = q/p the factor is
        sum over units b mod p of e_p(cbar h b - cbar n bbar) * (inner),
    where the inner Kloosterman carries a cbar^2 twist on m2 when the
    Kloosterman modulus itself splits (m1 = 1), no twist when the modulus is
    the single prime p (p = q/m1), and reduces to 1 when p | m1 (then the
    b-sum is itself a Kloosterman sum).  Used by censuses; equals char_sum_S.
    """
    val = 1.0 + 0.0j
    for p, c in ((q1, q2), (q2, q1)):
        cb = pow(c, -1, p)
        kt = kloosterman_table(p)
        if m1 % p == 0:
            val *= kt[(cb * h) % p, (-cb * n) % p]
        else:
            m2_eff = (cb * cb * m2) % p if m1 == 1 else m2 % p
            b = unit_residues(p)
            bb = unit_inverses(p)
            phases = _eq_pow(p, cb * h * b - cb * n * bb)
            val *= complex(np.sum(phases * kt[bb, m2_eff]))
    return val


def char_sum_S_split(p: SCharParams) -> complex:
    """The m1 = q1 factorization: a Kloosterman factor times a complete
    two-variable unit sum mod q2; equals char_sum_S on the same parameters."""
    if not isinstance(p.modulus, CompositeModulus):
        raise InvalidDivisor("split form needs a CompositeModulus")
    q1, q2 = p.modulus.q1.p, p.modulus.q2.p
    if p.m1 != q1:
        raise InvalidDivisor(f"split form needs m1 = q1, got m1={p.m1}")
    q2b = pow(q2, -1, q1)
    kt1 = kloosterman_table(q1)
    front = kt1[(q2b * p.h) % q1, (-q2b * p.n) % q1]
    return complex(front * adolphson_sperber_sum(p.h, p.n, p.m2, p.modulus.q1, p.modulus.q2))


def adolphson_sperber_sum(
    h: int, n: int, m2: int, q1: PrimeModulus, q2: PrimeModulus
) -> complex:
    """sum over units a, b mod q2 of e_{q2}(q1bar a h - q1bar abar n + b abar + m2 bbar).

    Brute force over the (q2-1)^2 pairs; the b-sum is a Kloosterman sum,
    which keeps the evaluation at O(q2^2).  Generic tuples (q2 not dividing
    n m2) show |sum| of size about q2; degenerate tuples fall back to the
    q2^{3/2} scale.
    """
    p1, p2 = q1.p, q2.p
    if p1 == p2:
        raise ValueError("q1 and q2 must differ")
    q1b = pow(p1, -1, p2)
    a = unit_residues(p2)
    ab = unit_inverses(p2)
    kt = kloosterman_table(p2)
    phases = _eq_pow(p2, q1b * h * a - q1b * n * ab)
    return complex(np.sum(phases * kt[ab, m2 % p2]))


def adolphson_sperber_is_generic(n: int, m2: int, q2: PrimeModulus) -> bool:
    """Branch classification: generic iff q2 divides neither n nor m2."""
    return (n % q2.p != 0) and (m2 % q2.p != 0)


def adolphson_sperber_grid(m2: int, q1: PrimeModulus, q2: PrimeModulus) -> np.ndarray:
    """All values of the two-variable unit sum on the full (h, n) grid mod q2.

    Returns a q2 x q2 array indexed [h, n]; one einsum replaces q2^2 scalar
    calls, which keeps exhaustive censuses cheap.
    """
    p1, p2 = q1.p, q2.p
    q1b = pow(p1, -1, p2)
    a = unit_residues(p2)
    ab = unit_inverses(p2)
    om = np.exp(2j * np.pi / p2)
    eh = om ** (np.outer(np.arange(p2), q1b * a) % p2)          # [h, a]
    en = om ** (np.outer(np.arange(p2), (-q1b * ab) % p2) % p2)  # [n, a]
    v = kloosterman_table(p2)[ab, m2 % p2]
    return np.einsum("ha,na,a->hn", eh, en, v)


def s_alpha_table(n: int, h: int, q: int) -> np.ndarray:
    """S(1, alpha, n, h; q) for every alpha mod q, as one vector.

    Rewrites the double sum as sum over units u of K(u) e_q(alpha u) with
    K(u) = sum over units a of e_q(a h - abar n + abar ubar); each value is
    exactly the definitional sum, evaluated for all alpha at once.
    """
    return _s_alpha_table_cached(n % q, h % q, q)


@lru_cache(maxsize=512)
def _s_alpha_table_cached(n: int, h: int, q: int) -> np.ndarray:
    if q == 1:
        return np.ones(1, dtype=complex)
    a = unit_residues(q)
    ab = unit_inverses(q)
    om = np.exp(2j * np.pi / q)
    v = om ** ((h * a - n * ab) % q)
    phase_matrix = om ** (np.outer(ab, ab) % q)  # [u, a] = e_q(abar ubar)
    k = phase_matrix @ v
    dft = om ** (np.outer(np.arange(q), a) % q)  # [alpha, u] = e_q(alpha u)
    out = dft @ k
    out.setflags(write=False)
    return out


def char_sum_T(p: TCharParams) -> complex:
    """T(n, m, h; q1, q1t, q2) by direct summation over alpha.

    The inner S values have period q1*q2 (resp. q1t*q2) in alpha, so both
    tables are computed once and indexed; the alpha sum itself runs over the
    full modulus q1*q1t*q2.
    """
    q1, q1t, q2 = p.q1.p, p.q1t.p, p.q2.p
    qa, qb = q1 * q2, q1t * q2
    t1 = s_alpha_table(p.n, p.h, qa)
    t2 = t1 if q1t == q1 else s_alpha_table(p.n, p.h, qb)
    bigq = q1 * q1t * q2
    alpha = np.arange(bigq)
    phases = np.exp(2j * np.pi * ((p.m * alpha) % bigq) / bigq)
    return complex(np.sum(t1[alpha % qa] * np.conj(t2[alpha % qb]) * phases))


def char_sum_T_term_count(p: TCharParams) -> int:
    """Number of terms in the fully expanded triple sum (tolerance scale)."""
    from .arith import euler_phi

    return p.q1.p * p.q1t.p * p.q2.p * euler_phi(p.q1.p * p.q2.p) * euler_phi(p.q1t.p * p.q2.p)


def t1_closed_form(p: TCharParams, which: str = "q1") -> complex:
    """Closed form of the prime factor of T at q1 (or at q1t).

    For which="q1":   q1 * S(q2bar h, -q2bar (n + q1t mbar); q1), zero when
    q1 | m (a valid value, not an error).  The factor at q1t comes from the
    conjugated inner sum and is the same expression with the roles of q1 and
    q1t swapped and m replaced by -m.
    """
    if p.q1.p == p.q1t.p:
        raise InvalidDivisor("closed form applies to q1 != q1t")
    if which == "q1":
        pr, other, m = p.q1.p, p.q1t.p, p.m
    elif which == "q1t":
        pr, other, m = p.q1t.p, p.q1.p, -p.m
    else:
        raise ValueError("which must be 'q1' or 'q1t'")
    if m % pr == 0:
        return 0.0 + 0.0j
    q2b = pow(p.q2.p, -1, pr)
    mb = pow(m % pr, -1, pr)
    kt = kloosterman_table(pr)
    return complex(pr * kt[(q2b * p.h) % pr, (-q2b * (p.n + other * mb)) % pr])


def t2_sum(
    n: int, m: int, h: int, q1: PrimeModulus, q1t: PrimeModulus, q2: PrimeModulus
) -> complex:
    """The mod-q2 factor of T:

        q2 * sum over delta (delta and q1t*delta+m both invertible mod q2)
             of [sum over units beta of e(q1bar h beta - q1bar n betabar
                                          + q1bar betabar deltabar)]
              * [sum over units gamma of e(-q1tbar h gamma + q1tbar n gammabar
                                          - q1tbar q1 gammabar inv(q1t delta + m))].
    """
    p1, pt, p2 = q1.p, q1t.p, q2.p
    q1b = pow(p1, -1, p2)
    qtb = pow(pt, -1, p2)
    beta = unit_residues(p2)
    betab = unit_inverses(p2)
    base_b = _eq_pow(p2, q1b * h * beta - q1b * n * betab)
    base_g = _eq_pow(p2, -qtb * h * beta + qtb * n * betab)  # gamma shares the unit grid
    total = 0.0 + 0.0j
    for delta, deltab in zip(unit_residues(p2), unit_inverses(p2)):
        w = (pt * delta + m) % p2
        if w == 0:
            continue
        winv = pow(int(w), -1, p2)
        bsum = np.sum(base_b * _eq_pow(p2, q1b * betab * deltab))
        gsum = np.sum(base_g * _eq_pow(p2, -qtb * p1 * winv * betab))
        total += bsum * gsum
    return complex(p2 * total)


# ---------------------------------------------------------------------------
# bound censuses


@dataclass(frozen=True)
class SCensusFamily:
    """Sweep of S over pairs of distinct primes and small (m2, n, h) boxes.

    m1 runs over all divisors {1, q1, q2, q1 q2}; tuples with gcd(n h, q) > 1
    are skipped (the bound is stated for n, h coprime to q).
    """

    primes: tuple
    m2_max: int = 10
    n_max: int = 10
    h_max: int = 10


@dataclass(frozen=True)
class TCensusFamily:
    """Sweep of T; diagonal=True restricts to q1 = q1t with m = q1 m'."""

    q1_primes: tuple
    q2_primes: tuple
    m_max: int = 11
    n_values: tuple = (1, 2, 3)
    h_values: tuple = (1, 2)
    diagonal: bool = False


def _s_normalizer(q, m1, m2):
    return q / math.sqrt(m1) * math.sqrt(math.gcd(q // m1, m2))


def bound_census(family, normalizer: str | None = None) -> ExperimentReport:
    """Sweep a family, recording |sum|, the bound-shape normalizer and their
    ratio per tuple; the summary carries the max ratio.

    normalizer selects the bound shape; defaults follow the family type:
      's_lemma'   : (q / sqrt(m1)) sqrt(gcd(q/m1, m2))
      't_offdiag' : q1^{3/2} q1t^{3/2} q2^{5/2} gcd(m, q2)^{1/2}
      't_diag'    : q1^{5/2} q2^{5/2} sqrt(gcd(m', q1 q2)), m = q1 m'
    """
    if isinstance(family, SCensusFamily):
        return _census_s(family)
    if isinstance(family, TCensusFamily):
        if normalizer is None:
            normalizer = "t_diag" if family.diagonal else "t_offdiag"
        return _census_t(family, normalizer)
    raise TypeError("unknown census family")


def _census_s(family: SCensusFamily) -> ExperimentReport:
    cols = ["q1", "q2", "m1", "m2", "n", "h", "abs_sum", "normalizer", "ratio"]
    rep = ExperimentReport.for_config(cols, {"family": "S", **family.__dict__})
    for q1 in family.primes:
        for q2 in family.primes:
            if q1 == q2:
                continue
            q = q1 * q2
            for m1 in (1, q1, q2, q):
                for n in range(1, family.n_max + 1):
                    if math.gcd(n, q) != 1:
                        continue
                    for h in range(1, family.h_max + 1):
                        if math.gcd(h, q) != 1:
                            continue
                        for m2 in range(1, family.m2_max + 1):
                            v = abs(char_sum_S_factored(m1, m2, n, h, q1, q2))
                            norm = _s_normalizer(q, m1, m2)
                            rep.add(
                                q1=q1, q2=q2, m1=m1, m2=m2, n=n, h=h,
                                abs_sum=v, normalizer=norm, ratio=v / norm,
                            )
    return rep.finalize()


def _census_t(family: TCensusFamily, normalizer: str) -> ExperimentReport:
    cols = ["q1", "q1t", "q2", "n", "m", "h", "abs_sum", "normalizer", "ratio"]
    rep = ExperimentReport.for_config(
        cols, {"family": "T", "normalizer": normalizer, **family.__dict__}
    )
    vanish_checked = 0
    vanish_passed = 0
    for q1 in family.q1_primes:
        for q1t in family.q1_primes:
            if family.diagonal != (q1 == q1t):
                continue
            if not family.diagonal and q1 > q1t:
                continue  # T(q1t, q1) pairs with m -> -m; sweep unordered
            for q2 in family.q2_primes:
                if q2 in (q1, q1t):
                    continue
                for n in family.n_values:
                    for h in family.h_values:
                        for m in range(1, family.m_max + 1):
                            params = TCharParams(
                                n=n, m=(q1 * m if family.diagonal else m), h=h,
                                q1=PrimeModulus(q1), q1t=PrimeModulus(q1t),
                                q2=PrimeModulus(q2),
                            )
                            if not family.diagonal and math.gcd(m, q1 * q1t) != 1:
                                # vanishing law tuple: count it, expect ~0
                                v = abs(char_sum_T(params))
                                vanish_checked += 1
                                if v < 1e-6 * char_sum_T_term_count(params):
                                    vanish_passed += 1
                                continue
                            v = abs(char_sum_T(params))
                            if normalizer == "t_offdiag":
                                norm = (
                                    q1 ** 1.5 * q1t ** 1.5 * q2 ** 2.5
                                    * math.sqrt(math.gcd(params.m, q2))
                                )
                            elif normalizer == "t_diag":
                                norm = (
                                    q1 ** 2.5 * q2 ** 2.5
                                    * math.sqrt(math.gcd(m, q1 * q2))
                                )
                            else:
                                raise ValueError(f"unknown normalizer {normalizer}")
                            rep.add(
                                q1=q1, q1t=q1t, q2=q2, n=n, m=params.m, h=h,
                                abs_sum=v, normalizer=norm, ratio=v / norm,
                            )
    return rep.finalize(vanish_checked=vanish_checked, vanish_passed=vanish_passed)
