"""Counting solutions of x1^2 + x2^2 = x3^2 mod p^n in boxes.

Two routes for the smoothed count: a direct triple loop, and a
sqrt-bucket kernel that tabulates the square roots of every residue
mod q once and reduces the work to a double loop over (x1, x2) with a
table lookup, O((cutoff*N)^2 + q) instead of O((cutoff*N)^3).  An exact
integer path counts the sharp box, and the dual side counts ordinary
Pythagorean triples through the sum-of-two-squares function r2.

Floating sums use pairwise accumulation over a deterministic chunking
of the x1 range, so results are bit-identical for any thread count.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from .circle import excluded_param_count
from .errors import RangeViolation, SmallPrime, TooLarge
from .padic import PrimePowerModulus
from .weights import WeightSpec

TRIPLE_LOOP_MAX_CELLS = 10**9
BUCKET_MAX_Q = 2**26
PYTH_MAX_N = 10**7
DUAL_MAX_L = 10**4
R2_MAX_M = 10**18

CHUNK_ROWS = 256  # fixed chunking of the x1 range; independent of threads


@dataclass(frozen=True)
class CountConfig:
    """One smoothed-count experiment: modulus, box scale, weight, method."""

    modulus: PrimePowerModulus
    N: float
    weight: WeightSpec
    cutoff: float = 3.5
    method: str = "sqrt-bucket"
    threads: Optional[int] = None

    def __post_init__(self):
        if self.modulus.p <= 5:
            raise SmallPrime(
                f"p = {self.modulus.p}: unit solutions require p > 5"
            )
        if self.N < 1:
            raise ValueError(f"N = {self.N} must be at least 1")
        if self.method not in ("triple-loop", "sqrt-bucket"):
            raise ValueError(f"unknown method {self.method!r}")
        min_cut = self.weight.truncation_radius(1e-12)
        if self.cutoff < min_cut:
            raise ValueError(
                f"cutoff {self.cutoff} below truncation radius {min_cut:.3f}"
            )

    @property
    def nu(self) -> float:
        return math.log(self.N) / math.log(self.modulus.q)


@dataclass
class CountReport:
    """Measured smoothed count against the predicted main term."""

    p: int
    n: int
    q: int
    N: float
    nu: float
    phi_kind: str
    phi_scale: float
    cutoff: float
    method: str
    measured_T: float
    predicted_T0: float
    ratio: float
    seconds: float
    exact_box_count: Optional[int] = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def predict_main_term(cfg: CountConfig) -> float:
    """Main term: fourier_at_zero^3 * (p - s)(p - 1)/p^2 * N^3 / p^n,
    with s the number of excluded parameter classes mod p."""
    p = cfg.modulus.p
    s = excluded_param_count(p)
    mass = cfg.weight.fourier_at_zero
    return mass**3 * (p - s) * (p - 1) / p**2 * cfg.N**3 / cfg.modulus.q


def _unit_box(p: int, bound: int) -> np.ndarray:
    xs = np.arange(-bound, bound + 1, dtype=np.int64)
    return xs[xs % p != 0]


def _chunks(seq: List, size: int) -> List[List]:
    return [seq[i : i + size] for i in range(0, len(seq), size)]


def _smoothed_bucket(cfg: CountConfig) -> float:
    m = cfg.modulus
    q = m.q
    if q > BUCKET_MAX_Q:
        raise TooLarge(f"q = {q} above the bucket-table bound {BUCKET_MAX_Q}")
    C = int(math.floor(cfg.cutoff * cfg.N))
    xs = _unit_box(m.p, C)
    wts = cfg.weight.value(xs / cfg.N)
    res = xs % q

    # class_mass[rho] = total x3 weight in the box with x3 = rho mod q
    class_mass = np.zeros(q)
    np.add.at(class_mass, res, wts)
    # bucket[c] = total x3 weight with x3^2 = c mod q, x3 a unit
    rho = np.arange(q, dtype=np.int64)
    units = rho[rho % m.p != 0]
    bucket = np.zeros(q)
    np.add.at(bucket, (units * units) % q, class_mass[units])

    sq = (res * res) % q
    pos = xs > 0
    rows = list(zip(xs[pos].tolist(), wts[pos].tolist()))

    def row_sum(row) -> float:
        x1, w1 = row
        c = (x1 * x1 % q + sq) % q
        return w1 * float(np.dot(wts, bucket[c]))

    def chunk_sum(rows_chunk) -> float:
        return math.fsum(row_sum(r) for r in rows_chunk)

    chunks = _chunks(rows, CHUNK_ROWS)
    if cfg.threads is not None and cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            partials = list(pool.map(chunk_sum, chunks))
    else:
        partials = [chunk_sum(c) for c in chunks]
    # x1 -> -x1 symmetry: weights are even and x1 = 0 is not a unit
    return 2.0 * math.fsum(partials)


def _smoothed_triple_loop(cfg: CountConfig) -> float:
    m = cfg.modulus
    q = m.q
    C = int(math.floor(cfg.cutoff * cfg.N))
    if (2 * C + 1) ** 3 > TRIPLE_LOOP_MAX_CELLS:
        raise TooLarge(f"box (2*{C}+1)^3 exceeds {TRIPLE_LOOP_MAX_CELLS} cells")
    xs = _unit_box(m.p, C)
    wts = cfg.weight.value(xs / cfg.N)
    sq = (xs % q) ** 2 % q

    rows = list(zip(xs.tolist(), wts.tolist()))

    def row_sum(row) -> float:
        x1, w1 = row
        lhs = (x1 * x1 % q + sq[:, None] - sq[None, :]) % q  # (x2, x3) grid
        hits = (lhs == 0).astype(float)
        return w1 * float(wts @ hits @ wts)

    def chunk_sum(rows_chunk) -> float:
        return math.fsum(row_sum(r) for r in rows_chunk)

    chunks = _chunks(rows, CHUNK_ROWS)
    if cfg.threads is not None and cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            partials = list(pool.map(chunk_sum, chunks))
    else:
        partials = [chunk_sum(c) for c in chunks]
    return math.fsum(partials)


def count_smoothed(cfg: CountConfig) -> CountReport:
    """Weighted count of unit solutions of the congruence in the box
    |x_i| <= cutoff*N, by the configured method."""
    start = time.perf_counter()
    if cfg.method == "sqrt-bucket":
        measured = _smoothed_bucket(cfg)
    else:
        measured = _smoothed_triple_loop(cfg)
    predicted = predict_main_term(cfg)
    return CountReport(
        p=cfg.modulus.p,
        n=cfg.modulus.n,
        q=cfg.modulus.q,
        N=cfg.N,
        nu=cfg.nu,
        phi_kind=cfg.weight.kind,
        phi_scale=cfg.weight.scale,
        cutoff=cfg.cutoff,
        method=cfg.method,
        measured_T=measured,
        predicted_T0=predicted,
        ratio=measured / predicted,
        seconds=time.perf_counter() - start,
    )


def count_box_exact(m: PrimePowerModulus, N: int) -> int:
    """Exact number of unit solutions with max |x_i| <= N (integer path)."""
    if N < 0:
        raise ValueError(f"N = {N} must be nonnegative")
    if m.q > BUCKET_MAX_Q:
        raise TooLarge(f"q = {m.q} above the bucket-table bound {BUCKET_MAX_Q}")
    if N == 0:
        return 0
    q = m.q
    xs = _unit_box(m.p, N)
    res = xs % q
    class_count = np.bincount(res, minlength=q).astype(np.int64)
    rho = np.arange(q, dtype=np.int64)
    units = rho[rho % m.p != 0]
    bucket = np.zeros(q, dtype=np.int64)
    np.add.at(bucket, (units * units) % q, class_count[units])
    sq = (res * res) % q
    total = 0
    for x1 in xs[xs > 0].tolist():
        c = (x1 * x1 % q + sq) % q
        total += int(bucket[c].sum())
    return 2 * total


def count_equation_box(N: int, coprime_to: Optional[int] = None) -> int:
    """Exact equation count: x1^2 + x2^2 = x3^2, max |x_i| <= N, all x_i
    nonzero (and coprime to p when given)."""
    total = 0
    for x3 in range(1, N + 1):
        if coprime_to is not None and x3 % coprime_to == 0:
            continue
        for a in range(1, x3):
            if coprime_to is not None and a % coprime_to == 0:
                continue
            b2 = x3 * x3 - a * a
            b = math.isqrt(b2)
            if b >= 1 and b * b == b2:
                if coprime_to is None or b % coprime_to != 0:
                    total += 1
    return 8 * total  # 4 sign choices for (x1, x2), 2 for x3


class TransitionResult(NamedTuple):
    congruence_count: int
    equation_count: int
    equal: bool


def transition_check(m: PrimePowerModulus, N: int) -> TransitionResult:
    """Below N < sqrt(q/2) every congruence solution in the box is an
    exact Pythagorean triple; count both sides independently."""
    if N * N * 2 >= m.q:
        raise RangeViolation(
            f"N = {N} is not below sqrt(q/2) = {math.sqrt(m.q / 2):.2f}"
        )
    cong = count_box_exact(m, N)
    eq = count_equation_box(N, coprime_to=m.p)
    return TransitionResult(cong, eq, cong == eq)


def _factorize(m: int) -> List[Tuple[int, int]]:
    out = []
    for d in (2, 3, 5):
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            out.append((d, e))
    d = 7
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            out.append((d, e))
        d += 2
    if m > 1:
        out.append((m, 1))
    return out


def r2(m: int) -> int:
    """Ordered representations of m as a sum of two integer squares.

    Classical divisor form: 4 * prod(e+1) over primes 1 mod 4, zero when
    a prime 3 mod 4 divides m to an odd power; r2(0) = 1.
    """
    if m < 0:
        return 0
    if m == 0:
        return 1
    if m > R2_MAX_M:
        raise TooLarge(f"m = {m} above the factorization bound {R2_MAX_M}")
    total = 4
    for prime, e in _factorize(m):
        if prime % 4 == 1:
            total *= e + 1
        elif prime % 4 == 3 and e % 2 == 1:
            return 0
    return total


def _smallest_factor_sieve(n: int) -> np.ndarray:
    spf = np.zeros(n + 1, dtype=np.int32)
    for i in range(2, math.isqrt(n) + 1):
        if spf[i] == 0:
            block = spf[i * i :: i]
            block[block == 0] = i
            spf[i * i :: i] = block
    return spf


def count_pythagorean(N: int) -> int:
    """Number of integer triples with x1^2 + x2^2 = x3^2 and |x3| <= N.

    Computed as 1 + 2 * sum over m <= N of r2(m^2); the exponent of a
    prime 1 mod 4 in m^2 is twice its exponent e in m, giving the factor
    2e + 1.  Grows like (8/pi) N log N.
    """
    if N < 0:
        raise ValueError(f"N = {N} must be nonnegative")
    if N > PYTH_MAX_N:
        raise TooLarge(f"N = {N} above the sieve bound {PYTH_MAX_N}")
    if N == 0:
        return 1
    spf = _smallest_factor_sieve(N)
    acc = 0
    for m in range(1, N + 1):
        mm = m
        prod = 1
        while mm > 1:
            d = int(spf[mm]) or mm
            e = 0
            while mm % d == 0:
                mm //= d
                e += 1
            if d % 4 == 1:
                prod *= 2 * e + 1
        acc += prod
    return 1 + 8 * acc  # r2(m^2) = 4 * prod, and each m counts twice


def dual_triple_count(L: int, modulus: int) -> int:
    """Nonzero triples (l1, l2, l3) with |l_i| <= L and
    l1^2 + l2^2 = l3^2 mod modulus.

    For modulus > 2 L^2 the congruence forces the exact equation, which
    ties the dual side to the ordinary Pythagorean count.
    """
    if L < 0:
        raise ValueError(f"L = {L} must be nonnegative")
    if L > DUAL_MAX_L:
        raise TooLarge(f"L = {L} above the enumeration bound {DUAL_MAX_L}")
    if modulus < 1:
        raise ValueError(f"modulus = {modulus} must be positive")
    if L == 0:
        return 0
    if modulus > 2 * L * L:
        # |l1^2 + l2^2 - l3^2| <= 2 L^2 < modulus: congruence = equation
        return count_pythagorean(L) - 1
    ls = np.arange(-L, L + 1, dtype=np.int64)
    sq = (ls * ls) % modulus
    bucket = np.bincount(sq, minlength=modulus).astype(np.int64)
    total = 0
    for v in sq.tolist():
        c = (np.int64(v) + sq) % modulus
        total += int(bucket[c].sum())
    return total - 1  # drop (0, 0, 0)
