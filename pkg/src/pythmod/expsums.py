"""Complete exponential sums e_q(f(x)) to odd prime-power moduli.

Provides a termwise brute-force evaluator for rational phase functions, the
closed-form stationary-phase evaluation of sums over single residue classes,
quadratic Gauss sums, and the specialized quantities attached to the circle
phase f(t) = x3 * (k1*(1-t^2) + 2*k2*t) / (1+t^2): stationary points of
2*l1*a = l2*(1-a^2) mod p, their lifts, the curvature symbol, the unimodular
Gauss factor, and the sqrt(D)-weighted lattice factor.

Closed forms are verified against brute force elsewhere; the evaluators here
never share code with their oracles.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Tuple, Union

import numpy as np

from .circle import enumerate_admissible_t
from .errors import (
    DenominatorNotUnit,
    HypothesisViolated,
    NotResidue,
    TooLarge,
    UnitRequired,
)
from .padic import (
    Poly,
    PrimePowerModulus,
    RationalFunction,
    Residue,
    _sqrt_mod_prime,
    eval_rational_mod,
    inv_mod,
    jacobi_symbol,
    sqrt_mod,
)

BRUTE_MAX_Q = 10**7
GAUSS_MAX_Q = 10**6

TWO_PI = 2.0 * math.pi


def additive_character(z: Union[Residue, int], q: int) -> complex:
    """e_q(z) = exp(2 pi i z / q)."""
    return cmath.exp(TWO_PI * 1j * (int(z) % q) / q)


def gauss_sum_bruteforce(q: int) -> complex:
    """Sum of e_q(x^2) for x = 1..q, summed termwise."""
    if q % 2 == 0 or q < 1:
        raise ValueError(f"q = {q} must be odd and positive")
    if q > GAUSS_MAX_Q:
        raise TooLarge(f"q = {q} above the brute-force bound {GAUSS_MAX_Q}")
    x = np.arange(1, q + 1, dtype=np.int64)
    r = (x * x) % q
    return complex(np.exp(TWO_PI * 1j * r / q).sum())


def gauss_sum_closed(q: int) -> complex:
    """sqrt(q) for odd q = 1 mod 4, i*sqrt(q) for q = 3 mod 4."""
    if q % 2 == 0 or q < 1:
        raise ValueError(f"q = {q} must be odd and positive")
    root = math.sqrt(q)
    return complex(root) if q % 4 == 1 else root * 1j


def _prime_gauss_unit(p: int) -> complex:
    """G_p / sqrt(p): 1 for p = 1 mod 4, i for p = 3 mod 4."""
    return 1.0 + 0j if p % 4 == 1 else 1j


def phase_function(k1: int, k2: int, x3: int) -> RationalFunction:
    """The circle phase x3 * (k1*(1-t^2) + 2*k2*t) / (1 + t^2)."""
    return RationalFunction(
        Poly([x3 * k1, 2 * x3 * k2, -x3 * k1]), Poly([1, 0, 1])
    )


def _poly_eval_mod_vec(poly: Poly, xs: np.ndarray, q: int) -> np.ndarray:
    """Horner evaluation mod q; intermediates stay below q^2 < 2^63."""
    acc = np.zeros_like(xs)
    for c in reversed(poly.coeffs):
        acc = (acc * xs + c % q) % q
    return acc


def _pow_mod_vec(base: np.ndarray, e: int, q: int) -> np.ndarray:
    out = np.ones_like(base)
    b = base % q
    while e:
        if e & 1:
            out = (out * b) % q
        b = (b * b) % q
        e >>= 1
    return out


def _inv_unit_vec(arr: np.ndarray, m: PrimePowerModulus) -> np.ndarray:
    phi = m.q // m.p * (m.p - 1)
    return _pow_mod_vec(arr, phi - 1, m.q)


def _character_sum(f: RationalFunction, xs: np.ndarray, m: PrimePowerModulus) -> complex:
    num = _poly_eval_mod_vec(f.num, xs, m.q)
    den = _poly_eval_mod_vec(f.den, xs, m.q)
    z = (num * _inv_unit_vec(den, m)) % m.q
    return complex(np.exp(TWO_PI * 1j * z / m.q).sum())


def residue_class_sum(
    f: RationalFunction, alpha: int, m: PrimePowerModulus
) -> complex:
    """Brute force: sum of e_q(f(x)) over x = alpha mod p, x in [1, q].

    Every term is computed with exact residue arithmetic before the
    single transcendental call; np.sum gives deterministic pairwise
    accumulation.
    """
    if m.q > BRUTE_MAX_Q:
        raise TooLarge(f"q = {m.q} above the brute-force bound {BRUTE_MAX_Q}")
    if f.den.eval_mod(alpha, m.p) == 0:
        raise DenominatorNotUnit(f"denominator vanishes mod {m.p} at {alpha}")
    xs = np.arange(alpha % m.p, m.q, m.p, dtype=np.int64)
    return _character_sum(f, xs, m)


def _stripped(poly: Poly, p: int) -> Tuple[Poly, int]:
    e = poly.ord_p(p)
    if e is math.inf:
        return poly, 0
    return poly.strip_p(e, p), e


def _hensel_root(h: Poly, hp: Poly, alpha: int, p: int, levels: int) -> int:
    """Lift a simple root of h mod p to a root mod p^levels (Newton)."""
    val = alpha % p
    lvl = 1
    while lvl < levels:
        lvl = min(2 * lvl, levels)
        mod = p**lvl
        hv = h.eval_mod(val, mod)
        hd = hp.eval_mod(val, mod)
        val = (val - hv * pow(hd, -1, mod)) % mod
    return val


def residue_class_sum_closed(
    f: RationalFunction, alpha: int, m: PrimePowerModulus
) -> complex:
    """Stationary-phase evaluation of the class sum, for n >= 2.

    With r the p-adic order of f' and h = p^-r * f', the sum over the
    class of alpha vanishes unless h(alpha) = 0 mod p. At a root of
    multiplicity one, with a* the Hensel lift of alpha to a root of h
    mod p^floor((n-r+1)/2):

        S = e_q(f(a*)) * p^((n+r)/2)                  n - r even
        S = e_q(f(a*)) * p^((n+r)/2) * (A/p) * G_p/sqrt(p)   n - r odd

    where A = 2 * h'(a*) mod p is the scaled curvature of the phase.
    Raises HypothesisViolated when r > n-2, n < 2, the denominator is
    not a unit at alpha, or the root has higher multiplicity; callers
    should fall back to residue_class_sum.
    """
    p, n, q = m.p, m.n, m.q
    if n < 2:
        raise HypothesisViolated(f"n = {n} < 2")
    if f.den.eval_mod(alpha, p) == 0:
        raise HypothesisViolated(f"denominator vanishes mod {p} at {alpha}")
    fp = f.derivative()
    h_num, a_ord = _stripped(fp.num, p)
    h_den, b_ord = _stripped(fp.den, p)
    if fp.num.is_zero():
        raise HypothesisViolated("f' = 0: order of f' is infinite")
    r = a_ord - b_ord
    if r > n - 2:
        raise HypothesisViolated(f"ord_p(f') = {r} > n - 2 = {n - 2}")
    if r < 0:
        raise HypothesisViolated(f"ord_p(f') = {r} < 0")
    den_at = h_den.eval_mod(alpha, p)
    if den_at == 0:
        raise HypothesisViolated(f"stripped denominator vanishes mod {p} at {alpha}")
    if h_num.eval_mod(alpha, p) != 0:
        return 0j
    h_num_d = h_num.derivative()
    if h_num_d.eval_mod(alpha, p) == 0:
        raise HypothesisViolated(f"alpha = {alpha} is a root of multiplicity > 1")

    lift_levels = (n - r + 1) // 2
    astar = _hensel_root(h_num, h_num_d, alpha, p, lift_levels)
    amp = float(p ** ((n + r) // 2)) * (math.sqrt(p) if (n + r) % 2 else 1.0)
    phase = additive_character(eval_rational_mod(f, astar, m), q)
    if (n - r) % 2 == 0:
        return amp * phase
    curvature = 2 * h_num_d.eval_mod(astar, p) * pow(den_at, -1, p) % p
    return amp * phase * jacobi_symbol(curvature, p) * _prime_gauss_unit(p)


@dataclass(frozen=True)
class ExpSumSpec:
    """Parameters (k1, k2, x3) of the circle phase mod p^n.

    Derives r with p^r = gcd(k1, k2, p^n), the stripped pair
    (l1, l2) = (k1, k2)/p^r and D = l1^2 + l2^2.
    """

    k1: int
    k2: int
    x3: int
    modulus: PrimePowerModulus
    r: int = field(init=False)
    l1: int = field(init=False)
    l2: int = field(init=False)
    D: int = field(init=False)

    def __post_init__(self):
        m = self.modulus
        if self.k1 == 0 and self.k2 == 0:
            raise ValueError("(k1, k2) = (0, 0) is excluded")
        if self.x3 % m.p == 0:
            raise UnitRequired(f"x3 = {self.x3} is divisible by p = {m.p}")
        r = 0
        while r < m.n and self.k1 % m.p**(r + 1) == 0 and self.k2 % m.p**(r + 1) == 0:
            r += 1
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "l1", self.k1 // m.p**r)
        object.__setattr__(self, "l2", self.k2 // m.p**r)
        object.__setattr__(self, "D", self.l1**2 + self.l2**2)

    @property
    def levels(self) -> int:
        return self.modulus.n - self.r

    def phase(self) -> RationalFunction:
        return phase_function(self.k1, self.k2, self.x3)


class StationaryPoints(NamedTuple):
    roots: Tuple[int, ...]
    is_double: bool


def stationary_points(l1: int, l2: int, p: int) -> StationaryPoints:
    """Roots mod p of 2*l1*a = l2*(1 - a^2), for units l1, l2.

    Two simple roots when D = l1^2 + l2^2 is a unit square mod p, none
    when D is a non-residue, and one double root (flagged) when p | D.
    """
    if (l1 * l2) % p == 0:
        raise UnitRequired(f"l1*l2 = {l1 * l2} not a unit mod {p}")
    D = l1 * l1 + l2 * l2
    inv_l2 = pow(l2 % p, -1, p)
    if D % p == 0:
        return StationaryPoints(((-l1) * inv_l2 % p,), True)
    if jacobi_symbol(D, p) != 1:
        return StationaryPoints((), False)
    rho = _sqrt_mod_prime(D, p)
    roots = sorted(((-l1 + rho) * inv_l2 % p, (-l1 - rho) * inv_l2 % p))
    return StationaryPoints(tuple(roots), False)


def canonical_sqrt(a: int, m: PrimePowerModulus) -> Residue:
    """The smaller of the two roots of x^2 = a mod p^n, for a unit residue."""
    roots = sqrt_mod(a, m)
    if roots is None:
        raise NotResidue(f"{a} is not a quadratic residue mod {m.p}")
    return roots[0]


def lift_stationary_point(
    l1: int, l2: int, m: PrimePowerModulus, branch: int
) -> Residue:
    """The stationary point (-l1 + branch*sqrt(D)) / l2 mod p^(n-r).

    m is the modulus p^(n-r); branch is +1 or -1 and selects the sign in
    front of the canonical (smaller) root of x^2 = D. The result solves
    2*l1*a = l2*(1 - a^2) mod p^(n-r).
    """
    if branch not in (1, -1):
        raise ValueError(f"branch must be +1 or -1, got {branch}")
    if (l1 * l2) % m.p == 0:
        raise UnitRequired(f"l1*l2 = {l1 * l2} not a unit mod {m.p}")
    D = l1 * l1 + l2 * l2
    if D % m.p == 0:
        raise NotResidue(f"D = {D} is divisible by p = {m.p}")
    rho = canonical_sqrt(D % m.q, m).value
    astar = (-l1 + branch * rho) * inv_mod(l2, m).value % m.q
    assert (2 * l1 * astar - l2 * (1 - astar * astar)) % m.q == 0
    return Residue(astar, m)


def stationary_phase_identity(spec: ExpSumSpec, branch: int) -> Tuple[complex, complex]:
    """Both sides of e_q(f(a*)) = e_{p^(n-r)}(branch * x3 * sqrt(D)).

    The left side evaluates the full phase at the lifted stationary
    point; the right side is the closed form with the canonical root.
    """
    m = spec.modulus
    sub = PrimePowerModulus(m.p, spec.levels)
    astar = lift_stationary_point(spec.l1, spec.l2, sub, branch).value
    lhs = additive_character(eval_rational_mod(spec.phase(), astar, m), m.q)
    rho = canonical_sqrt(spec.D % sub.q, sub).value
    rhs = additive_character(branch * spec.x3 * rho, sub.q)
    return lhs, rhs


def curvature_symbol(spec: ExpSumSpec, branch: int) -> int:
    """Legendre symbol of A = 2 * p^-r * f''(a*) for the chosen branch.

    A is computed from the second quotient-rule derivative of the phase,
    stripped of its p-content, so this is the defining route for the
    curvature term in the stationary-phase formula.
    """
    m = spec.modulus
    p = m.p
    sub = PrimePowerModulus(p, spec.levels)
    astar = lift_stationary_point(spec.l1, spec.l2, sub, branch).value
    fpp = spec.phase().derivative().derivative()
    n2, a2 = _stripped(fpp.num, p)
    d2, b2 = _stripped(fpp.den, p)
    excess = a2 - b2 - spec.r
    assert excess >= 0
    value = 2 * p**excess * n2.eval_mod(astar, p) * pow(d2.eval_mod(astar, p), -1, p)
    sym = jacobi_symbol(value, p)
    assert sym != 0, "curvature degenerate at a simple stationary point"
    return sym


def curvature_symbol_sqrt_form(spec: ExpSumSpec, branch: int) -> int:
    """Closed form of the curvature symbol: (-2 * x3 * rho / p).

    rho = branch * canonical sqrt(D) is the root attached to the branch;
    the symbol pairs each branch with the NEGATED root, i.e. it equals
    (2 * x3 * rho' / p) for the opposite root rho' = -rho.  For
    p = 1 mod 4 the sign is invisible because (-1/p) = 1.
    """
    m = spec.modulus
    sub = PrimePowerModulus(m.p, spec.levels)
    rho = branch * canonical_sqrt(spec.D % sub.q, sub).value
    return jacobi_symbol(-2 * spec.x3 * rho, m.p)


def gauss_factor(levels: int, x3: int, D: int, p: int) -> complex:
    """Unimodular factor: 1 for even levels, (2*x3*sqrt(D)/p) * G_p/sqrt(p) for odd."""
    if levels < 1:
        raise ValueError(f"levels = {levels} must be positive")
    if (x3 * D) % p == 0:
        raise UnitRequired(f"x3*D = {x3 * D} not a unit mod {p}")
    if levels % 2 == 0:
        return 1.0 + 0j
    sub = PrimePowerModulus(p, levels)
    rho = canonical_sqrt(D % sub.q, sub).value
    return jacobi_symbol(2 * x3 * rho, p) * _prime_gauss_unit(p)


def gauss_factor_unified(levels: int, x3: int, D: int, p: int) -> complex:
    """Same factor as G_{p^levels}/p^(levels/2) * (2*x3*sqrt(D) / p^levels)."""
    if levels < 1:
        raise ValueError(f"levels = {levels} must be positive")
    if (x3 * D) % p == 0:
        raise UnitRequired(f"x3*D = {x3 * D} not a unit mod {p}")
    sub = PrimePowerModulus(p, levels)
    rho = canonical_sqrt(D % sub.q, sub).value
    scale = gauss_sum_closed(sub.q) / p ** (levels / 2.0)
    return scale * jacobi_symbol(2 * x3 * rho, sub.q)


def circle_exponential_sum(spec: ExpSumSpec, mode: str = "bruteforce") -> complex:
    """E(k1, k2, x3; p^n): sum of e_q(f(t)) over admissible parameters t.

    bruteforce sums termwise over every admissible t mod q (q <= 1e7).
    closed assembles the stationary-phase class sums over the roots of
    the stationary congruence; it is exactly 0 when no admissible root
    exists, and needs r <= n - 2.
    """
    m = spec.modulus
    f = spec.phase()
    if mode == "bruteforce":
        if m.q > BRUTE_MAX_Q:
            raise TooLarge(f"q = {m.q} above the brute-force bound {BRUTE_MAX_Q}")
        ts = np.asarray(enumerate_admissible_t(m), dtype=np.int64)
        return _character_sum(f, ts, m)
    if mode == "closed":
        if spec.r > m.n - 2:
            raise HypothesisViolated(
                f"r = {spec.r} > n - 2 = {m.n - 2}: closed form unavailable"
            )
        pts = stationary_points(spec.l1, spec.l2, m.p)
        total = 0j
        for root in pts.roots:
            sq = root * root % m.p
            if sq == 0 or sq == 1 or sq == m.p - 1:
                continue  # inadmissible class; only the double root lands here
            total += residue_class_sum_closed(f, root, m)
        return total
    raise ValueError(f"unknown mode {mode!r}")


def lattice_circle_weight(D: int, levels: int, N: float, w, p: int) -> complex:
    """Jacobi factor (2*sqrt(D) / p^levels) times the dual-weighted count
    of lattice points l1^2 + l2^2 = D with unit coordinates.

    Zero when D has no canonical root mod p (non-residue or p | D) or
    when no admissible lattice point exists.
    """
    if D < 1:
        raise ValueError(f"D = {D} must be positive")
    if levels < 1:
        raise ValueError(f"levels = {levels} must be positive")
    if D % p == 0 or jacobi_symbol(D, p) != 1:
        return 0j
    sub = PrimePowerModulus(p, levels)
    rho = canonical_sqrt(D % sub.q, sub).value
    factor = jacobi_symbol(2 * rho, sub.q)
    scale = sub.q / N  # dual argument is l * N / p^levels
    total = 0.0
    for l1 in range(-math.isqrt(D), math.isqrt(D) + 1):
        rest = D - l1 * l1
        l2 = math.isqrt(rest)
        if l2 * l2 != rest:
            continue
        for s2 in ({l2, -l2} if l2 else {0}):
            if (l1 * s2) % p == 0:
                continue
            total += w.fourier(l1 / scale) * w.fourier(s2 / scale)
    return complex(factor * total)
