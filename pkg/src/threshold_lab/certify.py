"""Certified bounds for plus-pure thresholds of mixed-characteristic hypersurfaces.

The plus-pure threshold ppt(f) of f in V[[x_1..x_n]] (V a possibly ramified
p-adic base, uniformizer pi) measures how far the pair stays pure inside the
absolute integral closure.  It is never computed directly here - no finite
computation could - instead this module mechanically checks the hypotheses of
a fixed list of theorems, each of which certifies a lower bound, an upper
bound, or an exact value, and intersects everything it can prove:

* ``rule_fpt_lower`` - ppt(f) >= fpt(f mod pi), the residual char-p threshold.
* ``rule_blowup_diagonal`` - for pi-power diagonals, the squeeze
  fpt(diagonal with pi replaced by a variable) <= ppt(f) <= lct.
* ``rule_ramified_upper`` / ``rule_exact_ramified`` - once the base contains a
  p^e-th root of the uniformizer of a ring of definition of f, the residual
  threshold caps ppt from above; with a terminating residual threshold the
  two sides meet.
* ``rule_diagonal_ramified`` - the digit-level-L comparison for diagonals with
  a pi-power slot, cross-checked by an explicit Frobenius-ideal containment.
* ``rule_extremal_strict`` and ``rule_frobenius_diagonal_strict`` - strict
  lower bounds beating the residual threshold for extremal forms and for
  p-power diagonals at odd p.
* ``rule_elliptic`` - the 1 - 1/p^2 upper bound for cones over certain plane
  cubics when p = 2 (mod 3).
* ``rule_pth_root_upper`` - f a p-th power modulo p^2 forces ppt <= 1 - 1/p;
  modulo (zeta_p - 1)^p over the p-cyclotomic base it forces ppt <= 1/p.
* ``known_values_registry`` - a small curated table of exactly known values.

Every certified bound is sound on its own, so the combined max-of-lowers /
min-of-uppers can only collide if the implementation is wrong; that collision
is surfaced as :class:`InternalInconsistencyError` and doubles as the
engine's cross-validation alarm.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .digits import padic_valuation
from .exact import Rat, format_rat, require_prime
from .fpt import (
    INFINITE,
    ResourceGuardError,
    compute_L,
    fpt_diagonal,
    lct_diagonal,
    oracle_bracket,
)
from .poly import (
    Exps,
    MixedPoly,
    SparsePolyFp,
    WeightedMonomialIdeal,
    pow_mixed,
    pth_root_mod_fp,
    reduce_mod_pi,
    weighted_membership,
)


class InternalInconsistencyError(RuntimeError):
    """Two certified bounds exclude each other.  Must never fire on sound rules."""


@dataclass(frozen=True)
class RingContext:
    """The ambient ring V[[x_1..x_n]] with V = W(k)[p^{1/p^a}] (a = ram_level).

    With ``cyclotomic`` set, V is instead W(k)[zeta_p] with uniformizer
    varpi = zeta_p - 1, so varpi^{p-1} is p up to a unit; this flag and
    ram_level > 0 are mutually exclusive.
    """

    p: int
    vars: tuple[str, ...]
    ram_level: int = 0
    cyclotomic: bool = False

    def __post_init__(self) -> None:
        require_prime(self.p)
        if not self.vars:
            raise ValueError("at least one x-variable is required")
        if self.ram_level < 0:
            raise ValueError(f"ram_level must be >= 0, got {self.ram_level}")
        if self.cyclotomic and self.ram_level > 0:
            raise ValueError("cyclotomic base and ram_level > 0 are mutually exclusive")

    @property
    def n_vars(self) -> int:
        return len(self.vars)

    @property
    def pi_multiplier(self) -> int:
        """Pi-order of p itself: p^a in the root tower, p - 1 cyclotomically."""
        return (self.p - 1) if self.cyclotomic else self.p**self.ram_level

    def to_doc(self) -> dict:
        return {
            "p": self.p,
            "ram_level": self.ram_level,
            "cyclotomic": self.cyclotomic,
            "vars": list(self.vars),
        }


@dataclass(frozen=True)
class Bound:
    value: Rat
    strict: bool = False


@dataclass
class RuleResult:
    """One rule's contribution: bounds plus the checked-hypothesis trail."""

    rule_id: str
    statement: str
    quote: str
    hypotheses: list[str]
    lower: Bound | None = None
    upper: Bound | None = None
    exact: Rat | None = None
    notes: list[str] = field(default_factory=list)

    def to_doc(self) -> dict:
        return {
            "id": self.rule_id,
            "paper_ref": self.statement,
            "quote": self.quote,
            "hypotheses": list(self.hypotheses),
        }


@dataclass
class BoundCertificate:
    """The intersected output of every rule that fired on one input."""

    lower: Rat | None
    lower_strict: bool
    upper: Rat | None
    upper_strict: bool
    exact: Rat | None
    rules: list[RuleResult]
    notes: list[str]
    poly: MixedPoly
    ctx: RingContext

    def __post_init__(self) -> None:
        if self.lower is not None and self.upper is not None:
            assert self.lower <= self.upper
        if self.exact is not None:
            assert self.lower == self.upper == self.exact
            assert not self.lower_strict and not self.upper_strict

    def to_doc(self) -> dict:
        def bound_doc(value: Rat | None, strict: bool) -> dict | None:
            if value is None:
                return None
            return {"value": format_rat(value), "strict": strict}

        input_doc = json.loads(self.poly.to_json())
        input_doc["ctx"] = self.ctx.to_doc()
        return {
            "input": input_doc,
            "lower": bound_doc(self.lower, self.lower_strict),
            "upper": bound_doc(self.upper, self.upper_strict),
            "exact": None if self.exact is None else format_rat(self.exact),
            "rules": [r.to_doc() for r in self.rules],
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_doc(), separators=(",", ":"))


# --------------------------------------------------------------------------
# Structural analysis shared by the rules.


@dataclass(frozen=True)
class MixedDiagonal:
    """Decomposition f = u_0 pi^t + sum_i u_i x_{j_i}^{s_i} (pure-power terms).

    ``pi_order`` is the effective pi-order t of the pi-pure term (None when f
    has no such term); ``pi_unit_one`` records whether its unit part is the
    literal 1.  ``entries`` hold (variable index, exponent, coefficient) for
    the x-terms, whose coefficients are prime to p.
    """

    pi_order: int | None
    pi_unit_one: bool
    entries: tuple[tuple[int, int, int], ...]

    def exponents(self) -> tuple[int, ...]:
        s = tuple(e for (_i, e, _c) in self.entries)
        return s if self.pi_order is None else (self.pi_order, *s)

    def x_exponents(self) -> tuple[int, ...]:
        return tuple(e for (_i, e, _c) in self.entries)

    def monic(self) -> bool:
        return (self.pi_order is None or self.pi_unit_one) and all(
            c == 1 for (_i, _e, c) in self.entries
        )


def match_mixed_diagonal(f: MixedPoly, ctx: RingContext) -> MixedDiagonal | None:
    """Match f against the pure-power diagonal shape, else None.

    At most one pi-pure term is allowed; its p-content is folded into the
    effective pi-order (so the coefficient 27 at p = 3, a = 0 counts as
    pi^3).  Each remaining term must be a single-variable pure power with
    coefficient prime to p, and the variables must be distinct.
    """
    pi_order: int | None = None
    pi_unit_one = False
    entries: list[tuple[int, int, int]] = []
    for (pi, exps), c in f.sorted_terms():
        support = [i for i, e in enumerate(exps) if e]
        if not support:
            if pi_order is not None:
                return None
            v = padic_valuation(c, ctx.p)
            order = pi + ctx.pi_multiplier * v
            if order == 0:
                return None
            pi_order = order
            pi_unit_one = abs(c) == ctx.p**v and c > 0
        elif len(support) == 1:
            if pi != 0 or c % ctx.p == 0:
                return None
            i = support[0]
            entries.append((i, exps[i], c))
        else:
            return None
    if len({i for (i, _e, _c) in entries}) != len(entries):
        return None
    if pi_order is None and not entries:
        return None
    return MixedDiagonal(pi_order, pi_unit_one, tuple(entries))


def exact_fpt_of_reduction(g: SparsePolyFp) -> Rat | None:
    """Exact fpt of g for the shapes with a closed form, else None.

    Covers a single monomial (fpt = min_i 1/e_i), any diagonal with distinct
    single-variable pure powers (a linear term makes g regular, so fpt = 1;
    otherwise the digit formula applies) - enough for every family the
    certification rules consume.
    """
    if g.is_zero():
        return None
    if len(g.terms) == 1:
        (exps,) = g.terms
        return min(Rat(1, e) for e in exps if e)
    seen: set[int] = set()
    exponents: list[int] = []
    for exps in g.terms:
        support = [i for i, e in enumerate(exps) if e]
        if len(support) != 1 or support[0] in seen:
            return None
        seen.add(support[0])
        exponents.append(exps[support[0]])
    if any(s == 1 for s in exponents):
        return Rat(1)
    return fpt_diagonal(g.p, tuple(exponents))


def base_ring_level(f: MixedPoly, ctx: RingContext) -> int:
    """Least c with f defined over W(k)[p^{1/p^c}] inside the level-a tower.

    A term's pi-exponent is divisible by p^{a-c} exactly when the term lives
    at level c; p-divisibility of coefficients never obstructs (p = pi^{p^a}
    has exponent divisible by every p-power up to a).  c = 0 means f has
    unramified coefficients.
    """
    a = ctx.ram_level
    positive = [pi for (pi, _e) in f.terms if pi > 0]
    if not positive:
        return 0
    v = min(padic_valuation(pi, ctx.p) for pi in positive)
    return a - min(a, v)


def _frobenius_ideal(ctx: RingContext, q: int) -> WeightedMonomialIdeal:
    """(pi^q, x_1^q, ..., x_n^q) as a weighted monomial ideal."""
    n = ctx.n_vars
    gens: list[tuple[int, Exps]] = [(q, (0,) * n)]
    for i in range(n):
        e = [0] * n
        e[i] = q
        gens.append((0, tuple(e)))
    return WeightedMonomialIdeal(ctx.p, ctx.ram_level, ctx.vars, gens)


def _effective_order(f: MixedPoly, ctx: RingContext, key: tuple[int, Exps]) -> int:
    pi, _ = key
    return pi + ctx.pi_multiplier * padic_valuation(f.terms[key], ctx.p)


# --------------------------------------------------------------------------
# Rules.  Each returns a RuleResult or None (abstention).


def rule_fpt_lower(
    f: MixedPoly, ctx: RingContext, oracle_level: int = 2, max_terms: int | None = None
) -> RuleResult | None:
    """ppt(f) >= fpt(f mod pi): purity descends along the residual reduction."""
    g = reduce_mod_pi(f)
    if g.is_zero():
        return None
    hyp = ["f mod pi is nonzero"]
    value = exact_fpt_of_reduction(g)
    if value is not None:
        hyp.append(f"fpt(f mod pi) = {format_rat(value)} in closed form")
    else:
        try:
            bracket = oracle_bracket(g, oracle_level, max_terms=max_terms)
        except ResourceGuardError:
            return None
        if bracket.nu == 0:
            return None
        value = bracket.lower
        hyp.append(
            f"fpt(f mod pi) >= nu_{oracle_level}/p^{oracle_level}"
            f" = {format_rat(value)} by the Frobenius oracle"
        )
    return RuleResult(
        rule_id="fpt_lower",
        statement="comparison with the residual characteristic-p threshold",
        quote="ppt(f) >= fpt(f mod pi)",
        hypotheses=hyp,
        lower=Bound(value, strict=False),
    )


def rule_blowup_diagonal(f: MixedPoly, ctx: RingContext) -> RuleResult | None:
    """Squeeze fpt(f_0) <= ppt(f) <= lct for pure-power diagonals.

    f_0 is the char-p diagonal obtained by replacing the pi-power slot with a
    fresh variable; its fpt bounds ppt from below, while the (diagonal) log
    canonical threshold bounds it from above.
    """
    if ctx.cyclotomic:
        return None
    diag = match_mixed_diagonal(f, ctx)
    if diag is None:
        return None
    exps = diag.exponents()
    if any(s == 1 for s in exps):
        lower = lct = Rat(1)
        shape = "a linear slot makes the blown-up diagonal regular"
    else:
        lower = fpt_diagonal(ctx.p, exps)
        lct = lct_diagonal(exps)
        shape = f"blown-up diagonal exponents {list(exps)}"
    hyp = [
        "f is a pure-power diagonal in pi and distinct variables",
        shape,
        f"fpt(f_0) = {format_rat(lower)}, lct = {format_rat(lct)}",
    ]
    return RuleResult(
        rule_id="blowup_diagonal",
        statement="blow-up comparison for diagonals in the uniformizer",
        quote="fpt(f_0) <= ppt(f) <= lct(f) for the diagonal with pi replaced by a variable",
        hypotheses=hyp,
        lower=Bound(lower, strict=False),
        upper=Bound(lct, strict=False),
        notes=[f"lct = {format_rat(lct)}"],
    )


def rule_ramified_upper(
    f: MixedPoly,
    ctx: RingContext,
    fpt_bar: Rat | None = None,
    max_terms: int | None = None,
) -> RuleResult | None:
    """ppt(f) <= ceil(q p^e)/p^e once V contains a p^e-th root of the
    uniformizer of a ring of definition of f, where q >= fpt(f mod pi).

    e = ram_level - (base ring level of f) is the deepest sound level; the
    rule abstains when that is zero, i.e. when f uses the full ramification
    of V itself.
    """
    if ctx.cyclotomic:
        return None
    c = base_ring_level(f, ctx)
    e = ctx.ram_level - c
    if e < 1:
        return None
    hyp = [f"f is defined over the level-{c} subring; p^{e}-th roots available"]
    q = fpt_bar
    if q is None:
        g = reduce_mod_pi(f)
        if g.is_zero():
            return None
        q = exact_fpt_of_reduction(g)
        if q is not None:
            hyp.append(f"fpt(f mod pi) = {format_rat(q)} in closed form")
        else:
            try:
                q = oracle_bracket(g, min(e, 2), max_terms=max_terms).upper
            except ResourceGuardError:
                return None
            hyp.append(f"fpt(f mod pi) <= {format_rat(q)} by the Frobenius oracle")
    else:
        hyp.append(f"fpt(f mod pi) <= {format_rat(q)} supplied by the caller")
    b = math.ceil(q * ctx.p**e)
    value = Rat(b, ctx.p**e)
    hyp.append(f"upper bound {b}/p^{e} = {format_rat(value)}")
    return RuleResult(
        rule_id="ramified_upper",
        statement="upper bound after adjoining p-power roots of the uniformizer",
        quote=(
            "ppt(f) <= b/p^e once the base contains a p^e-th root of the "
            "uniformizer of a ring of definition of f and fpt(f mod pi) <= b/p^e"
        ),
        hypotheses=hyp,
        upper=Bound(value, strict=False),
    )


def rule_exact_ramified(
    f: MixedPoly, ctx: RingContext, max_terms: int | None = None
) -> RuleResult | None:
    """Exact value where the residual threshold terminates inside the tower.

    Route (a): fpt(f mod pi) = b/p^e with e <= ram_level - (base level of f);
    the residual lower bound and the root-adjunction upper bound then agree.
    Route (b): for pure-power diagonals with ram_level >= e, the explicit
    containment f^b in (pi^{p^e}, x_i^{p^e}) certifies the upper side even
    when f itself uses the full ramification.
    """
    if ctx.cyclotomic:
        return None
    g = reduce_mod_pi(f)
    if g.is_zero():
        return None
    q = exact_fpt_of_reduction(g)
    if q is None:
        return None
    den = q.denominator
    e = 0
    while den % ctx.p == 0:
        den //= ctx.p
        e += 1
    if den != 1:
        return None
    hyp = [f"fpt(f mod pi) = {format_rat(q)} with p-power denominator p^{e}"]
    c = base_ring_level(f, ctx)
    if e <= ctx.ram_level - c:
        hyp.append(
            f"f is defined over the level-{c} subring and ram_level ({ctx.ram_level})"
            f" >= {c} + {e}"
        )
        return RuleResult(
            rule_id="exact_ramified",
            statement="equality at terminating residual thresholds over ramified bases",
            quote=(
                "if fpt(f mod pi) = b/p^e terminates and the base is ramified e "
                "levels past a ring of definition of f, then ppt(f) = fpt(f mod pi)"
            ),
            hypotheses=hyp,
            exact=q,
        )
    if e > ctx.ram_level or e == 0:
        return None
    diag = match_mixed_diagonal(f, ctx)
    if diag is None or not diag.monic():
        return None
    b = q * ctx.p**e
    assert b.denominator == 1
    contained = weighted_membership(
        pow_mixed(f, int(b)), _frobenius_ideal(ctx, ctx.p**e)
    )
    if not contained:
        return None
    hyp.append(
        f"f^{int(b)} lies termwise in (pi^{ctx.p**e}, x_i^{ctx.p**e}) and "
        f"ram_level >= {e}"
    )
    return RuleResult(
        rule_id="exact_ramified",
        statement="equality at terminating residual thresholds over ramified bases",
        quote=(
            "f^b in (pi^{p^e}, x_1^{p^e}, ..., x_n^{p^e}) with e <= ram_level "
            "forces ppt(f) <= b/p^e, meeting the residual lower bound"
        ),
        hypotheses=hyp,
        exact=q,
    )


def rule_diagonal_ramified(f: MixedPoly, ctx: RingContext) -> RuleResult | None:
    """Digit-level comparison for diagonals with a pi-power slot.

    For f = pi^{s_1} + x_2^{s_2} + ... + x_n^{s_n} with n < p, all s_i > 1 and
    ram_level >= L (the digit level of the full diagonal), ppt(f) is at most
    the full diagonal's fpt, with equality when n = 2 or all exponents agree.
    The bound is re-verified by the containment f^b in (pi^{p^L}, x_i^{p^L});
    disagreement raises the internal-inconsistency alarm.
    """
    if ctx.cyclotomic:
        return None
    diag = match_mixed_diagonal(f, ctx)
    if diag is None or diag.pi_order is None or not diag.entries:
        return None
    if not diag.monic():
        return None
    exps = diag.exponents()
    n = len(exps)
    if n >= ctx.p or any(s < 2 for s in exps):
        return None
    level = compute_L(ctx.p, exps)
    if level == INFINITE or level > ctx.ram_level:
        return None
    level = int(level)
    value = fpt_diagonal(ctx.p, exps)
    b = value * ctx.p**level
    assert b.denominator == 1
    contained = weighted_membership(
        pow_mixed(f, int(b)), _frobenius_ideal(ctx, ctx.p**level)
    )
    if not contained:
        raise InternalInconsistencyError(
            "diagonal_ramified: the digit formula promised "
            f"f^{int(b)} in (pi^{ctx.p**level}, x_i^{ctx.p**level}) but the "
            f"containment fails at term {contained.failure}"
        )
    exact = n == 2 or len(set(exps)) == 1
    hyp = [
        f"pure-power diagonal with pi-slot, exponents {list(exps)}",
        f"n = {n} < p = {ctx.p}; digit level L = {level} <= ram_level = {ctx.ram_level}",
        f"containment f^{int(b)} in (pi^{ctx.p**level}, x_i^{ctx.p**level}) verified",
    ]
    if exact:
        hyp.append("n = 2 or equal exponents: the comparison is an equality")
        return RuleResult(
            rule_id="diagonal_ramified",
            statement="ramified diagonal comparison at digit level L",
            quote=(
                "ppt(pi^{s_1} + x_2^{s_2} + ...) equals the full diagonal fpt "
                "once ram_level >= L, for n = 2 or equal exponents"
            ),
            hypotheses=hyp,
            exact=value,
        )
    return RuleResult(
        rule_id="diagonal_ramified",
        statement="ramified diagonal comparison at digit level L",
        quote=(
            "ppt(pi^{s_1} + x_2^{s_2} + ...) <= fpt of the full diagonal "
            "once ram_level >= L"
        ),
        hypotheses=hyp,
        upper=Bound(value, strict=False),
    )


def rule_extremal_strict(f: MixedPoly, ctx: RingContext) -> RuleResult | None:
    """Strict lower bound 1/p^e for extremal forms.

    Matches f = X^a Y^b + X^b Y^a + f' with {a, b} = {p^e + 1, 0} or
    {p^e, 1} over an unramified base, every monomial of f' lying in the
    e-th Frobenius power of (pi, all variables) and carrying either a
    positive pi-order or some third variable; then ppt(f) > 1/p^e.
    """
    if ctx.ram_level != 0 or ctx.cyclotomic:
        return None
    p, n = ctx.p, ctx.n_vars
    max_deg = max((sum(e) for (_pi, e) in f.terms), default=0)
    best: tuple[int, list[str]] | None = None
    e = 1
    while p**e + 1 <= max_deg:
        q = p**e
        ideal = _frobenius_ideal(ctx, q)
        for i in range(n):
            for j in range(i + 1, n):
                for pattern, name in (
                    (((q + 1, 0), (0, q + 1)), f"{{X^{q+1}, Y^{q+1}}}"),
                    (((q, 1), (1, q)), f"{{X^{q} Y, X Y^{q}}}"),
                ):
                    keys = []
                    for di, dj in pattern:
                        exp = [0] * n
                        exp[i], exp[j] = di, dj
                        keys.append((0, tuple(exp)))
                    if any(f.terms.get(k) != 1 for k in keys):
                        continue
                    ok = True
                    for key in f.terms:
                        if key in keys:
                            continue
                        pi, exps = key
                        others = sum(
                            exps[t] for t in range(n) if t not in (i, j)
                        )
                        if _effective_order(f, ctx, key) < 1 and others < 1:
                            ok = False
                            break
                        if ideal.divides_term(f, key) is None:
                            ok = False
                            break
                    if ok and (best is None or e < best[0]):
                        best = (
                            e,
                            [
                                f"pattern {name} on ({ctx.vars[i]}, {ctx.vars[j]})"
                                f" with unit coefficients",
                                "every remaining term lies in the e-th Frobenius"
                                " power of (pi, all variables)",
                                "every remaining term has positive pi-order or a"
                                " third variable",
                            ],
                        )
        e += 1
    if best is None:
        return None
    e, hyp = best
    value = Rat(1, ctx.p**e)
    hyp.append(f"strict lower bound 1/p^{e} = {format_rat(value)}")
    return RuleResult(
        rule_id="extremal_strict",
        statement="strict lower bound via an extremal-form cofactor certificate",
        quote=(
            "ppt(f) > 1/p^e for f = X^a Y^b + X^b Y^a + f' with "
            "{a, b} = {p^e + 1, 0} or {p^e, 1} and f' in the e-th Frobenius "
            "power of (pi, X, Y, rest)"
        ),
        hypotheses=hyp,
        lower=Bound(value, strict=True),
    )


def rule_frobenius_diagonal_strict(f: MixedPoly, ctx: RingContext) -> RuleResult | None:
    """Strict lower bound for p-power diagonals pi^{p^e} + sum x_i^{p^e}, p odd.

    At p = 2 the phenomenon reverses (x^2 + pi^2 has ppt exactly 1/2), so the
    rule abstains there.
    """
    if ctx.ram_level != 0 or ctx.cyclotomic or ctx.p == 2:
        return None
    diag = match_mixed_diagonal(f, ctx)
    if diag is None or diag.pi_order is None or not diag.entries:
        return None
    if not diag.monic():
        return None
    q = diag.pi_order
    if q < ctx.p or any(s != q for s in diag.x_exponents()):
        return None
    e = padic_valuation(q, ctx.p)
    if ctx.p**e != q:
        return None
    value = Rat(1, q)
    return RuleResult(
        rule_id="frobenius_diagonal_strict",
        statement="strict excess over the residual threshold for p-power diagonals",
        quote="ppt(pi^{p^e} + x_2^{p^e} + ... + x_n^{p^e}) > 1/p^e for p > 2",
        hypotheses=[
            f"f = pi^{q} + sum of {len(diag.entries)} distinct x^{q} with unit"
            " coefficients",
            f"p = {ctx.p} > 2 and the base is unramified",
            f"strict lower bound 1/p^{e} = {format_rat(value)}",
        ],
        lower=Bound(value, strict=True),
    )


ELLIPTIC_FAMILIES = ("diag_cubic_p3", "h_xy_linear")


def _match_elliptic(f: MixedPoly, ctx: RingContext) -> tuple[str, str] | None:
    """Recognize pi^3 + X^3 + Y^3 or pi^3 + (unit X^2 Y + unit X Y^2)."""
    diag = match_mixed_diagonal(f, ctx)
    if (
        diag is not None
        and diag.pi_order == 3
        and diag.pi_unit_one
        and diag.x_exponents() == (3, 3)
        and diag.monic()
        and len(diag.entries) == 2
    ):
        i, j = (diag.entries[0][0], diag.entries[1][0])
        return "diag_cubic_p3", f"pi^3 + {ctx.vars[i]}^3 + {ctx.vars[j]}^3"
    pi_keys = [k for k in f.terms if not any(k[1])]
    if len(pi_keys) != 1 or len(f.terms) != 3:
        return None
    if _effective_order(f, ctx, pi_keys[0]) != 3:
        return None
    cross = [k for k in f.terms if k != pi_keys[0]]
    supports = set()
    for pi, exps in cross:
        if pi != 0:
            return None
        supp = tuple(i for i, e in enumerate(exps) if e)
        if len(supp) != 2 or sum(exps) != 3 or min(exps[i] for i in supp) != 1:
            return None
        if f.terms[(pi, exps)] % ctx.p == 0:
            return None
        supports.add(supp)
    if len(supports) != 1:
        return None
    ((i, j),) = supports
    if sorted(exps[i] for (_pi, exps) in cross) != [1, 2]:
        return None
    return "h_xy_linear", f"pi^3 + {ctx.vars[i]} {ctx.vars[j]} (u {ctx.vars[i]} + v {ctx.vars[j]})"


def rule_elliptic(
    f: MixedPoly, ctx: RingContext, family: str | None = None
) -> RuleResult | None:
    """Upper bound 1 - 1/p^2 for cones over plane cubics with p = 2 (mod 3).

    Applies to pi^3 + X^3 + Y^3 and to pi^3 + XY(uX + vY); the lower side is
    left to the residual and blow-up rules (for p > 2 whether 1 - 1/p is
    strict is an open question, recorded as a note).
    """
    if ctx.ram_level != 0 or ctx.cyclotomic or ctx.p % 3 != 2:
        return None
    matched = _match_elliptic(f, ctx)
    if matched is None:
        return None
    form, shape = matched
    if family is not None and family != form:
        return None
    value = 1 - Rat(1, ctx.p**2)
    notes = []
    if ctx.p > 2:
        notes.append(
            "open question: whether ppt strictly exceeds 1 - 1/p for this family"
        )
    return RuleResult(
        rule_id="elliptic",
        statement="cubic cone bound via the second Frobenius level",
        quote=(
            "ppt(f) <= 1 - 1/p^2 for the cone over a plane cubic of this shape "
            "when p = 2 (mod 3)"
        ),
        hypotheses=[
            f"p = {ctx.p} = 2 (mod 3), unramified base",
            f"matched family {form}: {shape}",
        ],
        upper=Bound(value, strict=False),
        notes=notes,
    )


# --------------------------------------------------------------------------
# p-th roots modulo p^2 and modulo varpi^p.


def _cyclo_reduce(coeffs: list[int], p: int) -> list[int]:
    """Reduce an integer polynomial in t modulo Phi_p(t) = 1 + t + ... + t^{p-1}."""
    out = list(coeffs)
    for d in range(len(out) - 1, p - 2, -1):
        c = out[d]
        if c:
            out[d] = 0
            for k in range(d - (p - 1), d):
                out[k] -= c
    del out[p - 1 :]
    while len(out) < p - 1:
        out.append(0)
    return out


def _cyclo_pi_power(k: int, p: int) -> list[int]:
    """(t - 1)^k reduced modulo Phi_p(t)."""
    coeffs = [math.comb(k, j) * (-1) ** (k - j) for j in range(k + 1)]
    return _cyclo_reduce(coeffs, p)


def _in_varpi_pth(coeffs: list[int], p: int) -> bool:
    """Membership in (varpi^p) = (p varpi) inside Z[zeta_p].

    x lies in (p varpi) iff p divides every power-basis coordinate of x and
    the quotient x/p maps to 0 in the residue field Z[zeta_p]/(varpi) = F_p
    (evaluation at zeta_p -> 1).
    """
    if any(c % p for c in coeffs):
        return False
    return sum(c // p for c in coeffs) % p == 0


def pth_root_modulo(
    f: MixedPoly, ctx: RingContext, t: int
) -> MixedPoly | None:
    """A witness h with h^p = f modulo p^t (or modulo varpi^t cyclotomically).

    Only the moduli the upper-bound rules need are supported: t in {1, 2}
    over the unramified base and t = p over the cyclotomic base.  The residue
    of any root is pinned down mod p (mod varpi) by the Frobenius on F_p, and
    h^p at these moduli depends only on that residue, so checking the single
    canonical lift (coefficients in [0, p-1]) decides existence.
    """
    if ctx.ram_level != 0:
        raise ValueError("pth_root_modulo requires an unramified or cyclotomic base")
    p = ctx.p
    if ctx.cyclotomic:
        if t != p:
            raise ValueError(f"cyclotomic roots are checked modulo varpi^p only, got t={t}")
    elif t not in (1, 2):
        raise ValueError(f"unramified roots are checked modulo p or p^2 only, got t={t}")
    g = reduce_mod_pi(f)
    root_bar = pth_root_mod_fp(g)
    if root_bar is None:
        return None
    h = MixedPoly(p, 0, ctx.vars, {(0, e): c for e, c in root_bar.terms.items()})
    if not ctx.cyclotomic and t == 1:
        return h
    hp = pow_mixed(h, p)
    if not ctx.cyclotomic:
        for key in set(f.terms) | set(hp.terms):
            delta = f.terms.get(key, 0) - hp.terms.get(key, 0)
            pi, _ = key
            if delta and pi + padic_valuation(delta, p) < 2:
                return None
        return h
    by_monomial: dict[Exps, list[int]] = {}
    for (pi, exps), c in f.terms.items():
        acc = by_monomial.setdefault(exps, [0] * max(1, p - 1))
        for k, v in enumerate(_cyclo_pi_power(pi, p)):
            acc[k] += c * v
    for (pi, exps), c in hp.terms.items():
        assert pi == 0
        acc = by_monomial.setdefault(exps, [0] * max(1, p - 1))
        for k, v in enumerate(_cyclo_pi_power(0, p)):
            acc[k] -= c * v
    for coeffs in by_monomial.values():
        if not _in_varpi_pth(_cyclo_reduce(coeffs, p), p):
            return None
    return h


def rule_pth_root_upper(f: MixedPoly, ctx: RingContext) -> RuleResult | None:
    """ppt <= 1 - 1/p when f is a p-th power mod p^2; <= 1/p mod varpi^p."""
    if ctx.ram_level != 0:
        return None
    p = ctx.p
    t = p if ctx.cyclotomic else 2
    h = pth_root_modulo(f, ctx, t)
    if h is None:
        return None
    if ctx.cyclotomic:
        value = Rat(1, p)
        modulus = "varpi^p over the p-cyclotomic base"
    else:
        value = 1 - Rat(1, p)
        modulus = "p^2 over the unramified base"
    return RuleResult(
        rule_id="pth_root_upper",
        statement="upper bound from a p-th root at the second infinitesimal level",
        quote=(
            "if f = h^p modulo p^2 then ppt(f) <= 1 - 1/p; "
            "if f = h^p modulo varpi^p cyclotomically then ppt(f) <= 1/p"
        ),
        hypotheses=[
            f"witness h = {h} with f = h^{p} modulo {modulus}",
        ],
        upper=Bound(value, strict=False),
    )


def known_values_registry(f: MixedPoly, ctx: RingContext) -> RuleResult | None:
    """Curated exactly-known values for a few specific families."""
    if ctx.cyclotomic:
        return None
    diag = match_mixed_diagonal(f, ctx)
    if diag is None or not diag.monic():
        return None

    def result(value: Rat, shape: str, quote: str) -> RuleResult:
        return RuleResult(
            rule_id="known_values",
            statement="curated exact value for a registry family",
            quote=quote,
            hypotheses=[f"matched registry shape {shape}"],
            exact=value,
        )

    p = ctx.p
    if (
        diag.pi_order is None
        and diag.x_exponents() == (3, 3, 3)
        and len(diag.entries) == 3
        and p % 3 != 0
    ):
        if p % 3 == 1:
            return result(
                Rat(1),
                "x^3 + y^3 + z^3, p = 1 (mod 3)",
                "the diagonal cubic cone over the ordinary-type prime has ppt 1"
                " at every ramification level",
            )
        if ctx.ram_level == 0:
            return result(
                Rat(1),
                "x^3 + y^3 + z^3 over the unramified base, p = 2 (mod 3)",
                "the diagonal cubic cone is plus-pure up to 1 over the"
                " unramified base",
            )
        return result(
            1 - Rat(1, p),
            "x^3 + y^3 + z^3 over a base containing p^{1/p}, p = 2 (mod 3)",
            "after adjoining p^{1/p} the diagonal cubic cone has ppt 1 - 1/p",
        )
    if (
        p == 2
        and ctx.ram_level == 0
        and diag.pi_order == 2
        and diag.pi_unit_one
        and diag.x_exponents() == (2,)
    ):
        return result(
            Rat(1, 2),
            "x^2 + pi^2 over the 2-adic integers",
            "the 2-adic quadratic cone x^2 + 4 has ppt exactly 1/2",
        )
    return None


def rule_threshold_cap(f: MixedPoly, ctx: RingContext) -> RuleResult:
    """ppt(f) <= 1 for f in the maximal ideal (always fires)."""
    return RuleResult(
        rule_id="threshold_cap",
        statement="threshold bounded by one on the maximal ideal",
        quote="ppt(f) <= 1 for f in (pi, x_1, ..., x_n)",
        hypotheses=["f lies in the maximal ideal"],
        upper=Bound(Rat(1), strict=False),
    )


# --------------------------------------------------------------------------
# Orchestration.


def _validate_input(f: MixedPoly, ctx: RingContext) -> None:
    if f.p != ctx.p or f.ram_level != ctx.ram_level or f.vars != ctx.vars:
        raise ValueError("polynomial and ring context disagree")
    if f.is_zero():
        raise ValueError("cannot certify the zero power series")
    for key in f.terms:
        _pi, exps = key
        if not any(exps) and _effective_order(f, ctx, key) == 0:
            raise ValueError("f must lie in the maximal ideal (unit term found)")


def certify(
    f: MixedPoly,
    ctx: RingContext,
    family: str | None = None,
    oracle_level: int = 2,
    max_terms: int | None = None,
) -> BoundCertificate:
    """Run every applicable rule on f and intersect the certified bounds.

    Raises :class:`InternalInconsistencyError` when two rules exclude each
    other (max lower above min upper, or touching with a strict side) - the
    engine's cross-validation alarm.
    """
    _validate_input(f, ctx)
    if family is not None and family not in ELLIPTIC_FAMILIES:
        raise ValueError(
            f"unknown family {family!r}; expected one of {ELLIPTIC_FAMILIES}"
        )
    results: list[RuleResult] = []
    notes: list[str] = []
    for res in (
        known_values_registry(f, ctx),
        rule_fpt_lower(f, ctx, oracle_level=oracle_level, max_terms=max_terms),
        rule_blowup_diagonal(f, ctx),
        rule_extremal_strict(f, ctx),
        rule_frobenius_diagonal_strict(f, ctx),
        rule_elliptic(f, ctx, family=family),
        rule_pth_root_upper(f, ctx),
        rule_ramified_upper(f, ctx, max_terms=max_terms),
        rule_exact_ramified(f, ctx, max_terms=max_terms),
        rule_diagonal_ramified(f, ctx),
        rule_threshold_cap(f, ctx),
    ):
        if res is not None:
            results.append(res)
            notes.extend(res.notes)
    if family is not None and not any(r.rule_id == "elliptic" for r in results):
        notes.append(f"family {family} requested but the shape did not match; abstained")

    lowers: list[tuple[Rat, bool, str]] = []
    uppers: list[tuple[Rat, bool, str]] = []
    for res in results:
        if res.exact is not None:
            lowers.append((res.exact, False, res.rule_id))
            uppers.append((res.exact, False, res.rule_id))
        if res.lower is not None:
            assert res.lower.value > 0
            lowers.append((res.lower.value, res.lower.strict, res.rule_id))
        if res.upper is not None:
            assert res.upper.value > 0
            uppers.append((res.upper.value, res.upper.strict, res.rule_id))

    lower = lower_strict = None
    if lowers:
        lo = max(v for (v, _s, _r) in lowers)
        lower = lo
        lower_strict = any(s for (v, s, _r) in lowers if v == lo)
    upper = upper_strict = None
    if uppers:
        hi = min(v for (v, _s, _r) in uppers)
        upper = hi
        upper_strict = any(s for (v, s, _r) in uppers if v == hi)

    if lower is not None and upper is not None:
        crossing = lower > upper or (lower == upper and (lower_strict or upper_strict))
        if crossing:
            lo_rules = sorted({r for (v, _s, r) in lowers if v == lower})
            hi_rules = sorted({r for (v, _s, r) in uppers if v == upper})
            raise InternalInconsistencyError(
                f"certified lower {format_rat(lower)}"
                f"{' (strict)' if lower_strict else ''} from {lo_rules} excludes "
                f"certified upper {format_rat(upper)}"
                f"{' (strict)' if upper_strict else ''} from {hi_rules}"
            )
    exact = None
    if (
        lower is not None
        and upper is not None
        and lower == upper
        and not lower_strict
        and not upper_strict
    ):
        exact = lower

    if (
        lower is not None
        and upper is not None
        and lower_strict
    ):
        m = math.floor(ctx.p * lower)
        if m >= 1 and ctx.p * upper <= m + lower:
            notes.append(
                "p*ppt is not a jumping number: p*ppt lies in "
                f"({m}, {m} + ppt), an interval free of jumping numbers"
            )

    seen: set[str] = set()
    deduped = [n for n in notes if not (n in seen or seen.add(n))]
    return BoundCertificate(
        lower=lower,
        lower_strict=bool(lower_strict),
        upper=upper,
        upper_strict=bool(upper_strict),
        exact=exact,
        rules=results,
        notes=deduped,
        poly=f,
        ctx=ctx,
    )


# --------------------------------------------------------------------------
# Limit profiles across ramification levels.


@dataclass(frozen=True)
class ProfileStep:
    level: int
    lower: Rat | None
    lower_strict: bool
    upper: Rat | None
    upper_strict: bool
    exact: Rat | None


@dataclass
class LimitProfile:
    steps: list[ProfileStep]
    limit: Rat | None
    attained: bool | None
    notes: list[str]

    def to_doc(self) -> dict:
        return {
            "steps": [
                {
                    "ram_level": s.level,
                    "lower": None if s.lower is None else format_rat(s.lower),
                    "upper": None if s.upper is None else format_rat(s.upper),
                    "exact": None if s.exact is None else format_rat(s.exact),
                }
                for s in self.steps
            ],
            "limit": None if self.limit is None else format_rat(self.limit),
            "attained": self.attained,
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_doc(), separators=(",", ":"))


def relevel(f: MixedPoly, a: int) -> MixedPoly:
    """Re-express a level-0 polynomial at ramification level a.

    The same element of W(k)[[x]] has pi-exponents p^a times larger when
    written in units of the level-a uniformizer p^{1/p^a}.
    """
    if f.ram_level != 0:
        raise ValueError("relevel expects a polynomial written at level 0")
    scale = f.p**a
    return MixedPoly(
        f.p, a, f.vars, {(pi * scale, exps): c for (pi, exps), c in f.terms.items()}
    )


def limit_profile(
    f: MixedPoly,
    e_max: int,
    family: str | None = None,
    max_terms: int | None = None,
) -> LimitProfile:
    """Certified bounds for the same element viewed at ram levels 0..e_max.

    The best upper bounds form a nonincreasing sequence whose limit is the
    residual threshold fpt(f mod pi); the profile records, per level, the
    sharpest certified bounds, and notes when every finite level provably
    stays strictly above the limit (non-attainment).
    """
    if e_max < 0:
        raise ValueError(f"e_max must be >= 0, got {e_max}")
    steps: list[ProfileStep] = []
    for a in range(e_max + 1):
        fa = relevel(f, a)
        ctx = RingContext(f.p, f.vars, ram_level=a)
        cert = certify(fa, ctx, family=family, max_terms=max_terms)
        steps.append(
            ProfileStep(
                level=a,
                lower=cert.lower,
                lower_strict=cert.lower_strict,
                upper=cert.upper,
                upper_strict=cert.upper_strict,
                exact=cert.exact,
            )
        )
    limit = exact_fpt_of_reduction(reduce_mod_pi(f))
    notes: list[str] = []
    attained: bool | None = None
    if limit is not None:
        attained = any(s.exact == limit for s in steps)
        if all(s.lower is not None and s.lower > limit for s in steps):
            notes.append(
                f"the limiting value {format_rat(limit)} is not attained at any "
                "profiled level: every certified lower bound stays strictly above it"
            )
    else:
        notes.append("limit not computed in closed form (reduction is not diagonal)")
    return LimitProfile(steps=steps, limit=limit, attained=attained, notes=notes)
