"""F-pure thresholds of diagonal polynomials and a brute-force Frobenius oracle.

For f in the maximal ideal of F_p[[x_1..x_n]] and e >= 1, let

    nu_e(f) = max { nu >= 0 : f^nu not in (x_1^{p^e}, ..., x_n^{p^e}) }.

Then nu_e / p^e <= fpt(f) <= (nu_e + 1) / p^e, and fpt(f) is the supremum of
the lower ends.  :func:`frobenius_nu` computes nu_e by iterated truncated
multiplication; :func:`oracle_bracket` wraps it into the two-sided bound.

For a diagonal f = x_1^{s_1} + ... + x_n^{s_n} the threshold has a closed
form in terms of the non-terminating base-p expansions of the 1/s_i.  Writing
d_i^(e) for the e-th digit of 1/s_i, let

    L = min { e >= 0 : sum_i d_i^(e+1) >= p }   (:func:`compute_L`).

If L is infinite, fpt(f) = sum_i 1/s_i; otherwise

    fpt(f) = (p^L * sum_i trunc_i(L) + 1) / p^L,

where trunc_i(L) is the L-digit truncation of 1/s_i.  The non-terminating
digit convention of :mod:`.exact` is load-bearing here: with terminating
expansions the formula is simply wrong (already for two squares at p = 2).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

from .exact import BasePExpansion, Rat, expand_base_p, require_prime
from .poly import SparsePolyFp, mul_truncated

INFINITE = float("inf")

_DEFAULT_MAX_TERMS = 100_000_000
_MAX_TERMS_ENV = "THRESHOLD_LAB_MAX_TERMS"


class ResourceGuardError(ValueError):
    """Raised when an oracle call would exceed the configured monomial budget."""


@dataclass(frozen=True)
class DiagonalData:
    """A diagonal polynomial x_1^{s_1} + ... + x_n^{s_n} over F_p, s_i >= 2.

    Exponent 1 is rejected: a linear variable makes f a regular parameter up
    to the others, and neither digit formula below applies to it.
    """

    p: int
    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        require_prime(self.p)
        if not self.exponents:
            raise ValueError("at least one exponent is required")
        for s in self.exponents:
            if not isinstance(s, int) or s < 2:
                raise ValueError(f"diagonal exponents must be integers >= 2, got {s}")
        object.__setattr__(self, "exponents", tuple(self.exponents))

    def expansions(self) -> list[BasePExpansion]:
        return [expand_base_p(Rat(1, s), self.p) for s in self.exponents]


def compute_L(p: int, exponents: tuple[int, ...]) -> int | float:
    """Least L >= 0 with sum_i d_i^(L+1) >= p, or INFINITE if no digit column
    of the expansions of the 1/s_i ever sums to p or more.

    The digit columns are eventually periodic, so scanning one full
    preperiod-plus-period window decides finiteness.
    """
    diag = DiagonalData(p, tuple(exponents))
    exps = diag.expansions()
    window = max(len(x.preperiod) for x in exps) + math.lcm(
        *(len(x.period) for x in exps)
    )
    for j in range(1, window + 1):
        if sum(x.digit_at(j) for x in exps) >= p:
            return j - 1
    return INFINITE


def fpt_diagonal(p: int, exponents: tuple[int, ...]) -> Rat:
    """Exact F-pure threshold of x_1^{s_1} + ... + x_n^{s_n} over F_p."""
    diag = DiagonalData(p, tuple(exponents))
    level = compute_L(p, diag.exponents)
    if level == INFINITE:
        return sum(Rat(1, s) for s in diag.exponents)
    scaled = sum(x.truncation(level) for x in diag.expansions()) * p**level
    assert scaled.denominator == 1
    return Rat(scaled.numerator + 1, p**level)


def fpt_fermat(p: int, d: int) -> Rat:
    """F-pure threshold of the d-variable Fermat diagonal x_1^d + ... + x_d^d.

    Two regimes: for d >= p it is 1/p^s with p^s <= d < p^{s+1}; for
    2 <= d < p it is 1 - (a - 1)/p where a = p mod d.  Degree 1 fits
    neither regime and is rejected.
    """
    require_prime(p)
    if d < 2:
        raise ValueError(f"degree must be >= 2, got {d}")
    if d >= p:
        s = 0
        while p ** (s + 1) <= d:
            s += 1
        return Rat(1, p**s)
    a = p % d
    return 1 - Rat(a - 1, p)


def lct_diagonal(exponents: tuple[int, ...]) -> Rat:
    """Log canonical threshold of a diagonal: min(1, sum_i 1/s_i)."""
    for s in exponents:
        if not isinstance(s, int) or s < 2:
            raise ValueError(f"diagonal exponents must be integers >= 2, got {s}")
    return min(Rat(1), sum(Rat(1, s) for s in exponents))


def _max_terms_budget(max_terms: int | None) -> int:
    if max_terms is not None:
        return max_terms
    env = os.environ.get(_MAX_TERMS_ENV)
    return int(env) if env else _DEFAULT_MAX_TERMS


def frobenius_nu(f: SparsePolyFp, e: int, max_terms: int | None = None) -> int:
    """nu_e(f): the largest nu with f^nu outside (x_1^{p^e}, ..., x_n^{p^e}).

    Requires f nonzero with no constant term (so f lies in the maximal ideal
    and nu_e <= n(p^e - 1) by degree pigeonhole).  Work is bounded by one
    truncated multiplication per step; calls whose ambient monomial space
    p^(e*n) exceeds the budget (default 10^8, override via the
    THRESHOLD_LAB_MAX_TERMS environment variable or the ``max_terms``
    argument) are refused up front.
    """
    if e < 1:
        raise ValueError(f"Frobenius exponent e must be >= 1, got {e}")
    if f.is_zero():
        raise ValueError("nu_e is undefined for the zero polynomial")
    n = len(f.vars)
    if f.terms.get((0,) * n):
        raise ValueError("f must have no constant term (f must vanish at the origin)")
    p = f.p
    cap = p**e
    budget = _max_terms_budget(max_terms)
    space = cap**n
    if space > budget:
        raise ResourceGuardError(
            f"monomial space p^(e*n) = {space} exceeds budget {budget}; "
            f"raise {_MAX_TERMS_ENV} to override"
        )
    g = f.truncate(cap)
    if g.is_zero():
        return 0
    max_steps = n * (cap - 1)
    bits = (2 * cap - 1).bit_length()
    if n * bits <= 63:
        return _nu_packed(g, cap, max_steps)
    k = 1
    while True:
        g = mul_truncated(g, f, cap)
        if g.is_zero():
            return k
        k += 1
        if k > max_steps:
            raise AssertionError("step bound exceeded; f cannot lie in the maximal ideal")


def _nu_packed(g: SparsePolyFp, cap: int, max_steps: int) -> int:
    """Truncated-power loop with exponent vectors packed into int64 lanes.

    Each exponent gets ``bits`` bits sized to hold values below 2*cap, so
    packed addition of a kept monomial and a generator monomial never carries
    across lanes; per-lane masks then discard anything reaching cap.
    """
    import numpy as np

    p = g.p
    n = len(g.vars)
    bits = (2 * cap - 1).bit_length()
    shifts = [bits * i for i in range(n)]
    mask = (1 << bits) - 1

    def pack(exps: tuple[int, ...]) -> int:
        return sum(x << s for x, s in zip(exps, shifts))

    f_keys = np.array([pack(t) for t in g.terms], dtype=np.int64)
    f_coeffs = np.array(list(g.terms.values()), dtype=np.int64)
    keys, coeffs = f_keys.copy(), f_coeffs.copy()
    k = 1
    while True:
        nk = (keys[:, None] + f_keys[None, :]).ravel()
        nc = (coeffs[:, None] * f_coeffs[None, :]).ravel() % p
        keep = np.ones(nk.shape, dtype=bool)
        for s in shifts:
            keep &= ((nk >> s) & mask) < cap
        nk, nc = nk[keep], nc[keep]
        if nk.size:
            uk, inv = np.unique(nk, return_inverse=True)
            acc = np.bincount(inv, weights=nc, minlength=uk.size).astype(np.int64) % p
            nz = acc != 0
            uk, acc = uk[nz], acc[nz]
        else:
            uk = nk
        if uk.size == 0:
            return k
        k += 1
        if k > max_steps:
            raise AssertionError("step bound exceeded; f cannot lie in the maximal ideal")
        keys, coeffs = uk, acc


@dataclass(frozen=True)
class FptBracket:
    """The two-sided oracle bound nu_e/p^e <= fpt <= (nu_e + 1)/p^e."""

    e: int
    nu: int
    lower: Rat
    upper: Rat

    def contains(self, value: Rat) -> bool:
        return self.lower <= value <= self.upper

    def width(self) -> Rat:
        return self.upper - self.lower


def oracle_bracket(f: SparsePolyFp, e: int, max_terms: int | None = None) -> FptBracket:
    """Bracket fpt(f) between nu_e/p^e and (nu_e + 1)/p^e at level e."""
    nu = frobenius_nu(f, e, max_terms=max_terms)
    q = f.p**e
    return FptBracket(e=e, nu=nu, lower=Rat(nu, q), upper=Rat(nu + 1, q))


def diagonal_poly(
    p: int, exponents: tuple[int, ...], vars: tuple[str, ...] | None = None
) -> SparsePolyFp:
    """The diagonal x_1^{s_1} + ... + x_n^{s_n} as a SparsePolyFp."""
    n = len(exponents)
    if vars is None:
        vars = tuple(f"x{i}" for i in range(1, n + 1)) if n > 3 else ("x", "y", "z")[:n]
    terms = {}
    for i, s in enumerate(exponents):
        exps = [0] * n
        exps[i] = s
        terms[tuple(exps)] = terms.get(tuple(exps), 0) + 1
    return SparsePolyFp(p, vars, terms)
