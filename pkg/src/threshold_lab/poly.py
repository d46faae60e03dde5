"""Sparse multivariate polynomials over F_p and over ramified p-adic models.

Two term-level representations:

* :class:`SparsePolyFp` - polynomials over the prime field, coefficients
  normalized to {1, ..., p-1}, used by the Frobenius-power oracle.
* :class:`MixedPoly` - polynomials over Z with an extra uniformizer symbol pi,
  modelling W[pi]/(pi^{p^a} = p) with ramification level ``ram_level = a``.
  The pi-exponent of a term is an integer counted in units of p^{-a}, and the
  *effective* pi-order of a term c * pi^k * x^E is k + p^a * v_p(c), since
  every factor of p in the coefficient is pi^{p^a} times a unit.

Coefficients of :class:`MixedPoly` are exact integers and are never reduced;
all soundness arguments downstream rely on termwise effective pi-orders, so no
information may be lost here.  Serialization is byte-deterministic: terms are
emitted in descending graded-lexicographic order with pi treated as the
leading variable, and coefficients are rendered as decimal strings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .digits import padic_valuation
from .exact import require_prime

Exps = tuple[int, ...]


def _check_vars(vars: tuple[str, ...]) -> tuple[str, ...]:
    if len(set(vars)) != len(vars):
        raise ValueError(f"duplicate variable names in {vars}")
    return tuple(vars)


def _check_exps(exps: Exps, n: int) -> Exps:
    exps = tuple(exps)
    if len(exps) != n or any(e < 0 or not isinstance(e, int) for e in exps):
        raise ValueError(f"bad exponent vector {exps} for {n} variables")
    return exps


def _grlex_key(exps: Exps) -> tuple:
    return (sum(exps), exps)


class SparsePolyFp:
    """A polynomial over F_p with coefficients stored in {1, ..., p-1}."""

    __slots__ = ("p", "vars", "terms")

    def __init__(self, p: int, vars: tuple[str, ...], terms: dict[Exps, int]):
        require_prime(p)
        self.p = p
        self.vars = _check_vars(tuple(vars))
        clean: dict[Exps, int] = {}
        for exps, c in terms.items():
            exps = _check_exps(exps, len(self.vars))
            clean[exps] = (clean.get(exps, 0) + c) % p
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def zero(cls, p: int, vars: tuple[str, ...]) -> SparsePolyFp:
        return cls(p, vars, {})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def sorted_terms(self) -> list[tuple[Exps, int]]:
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def _same_ring(self, other: SparsePolyFp) -> None:
        if self.p != other.p or self.vars != other.vars:
            raise ValueError("polynomials live in different rings")

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SparsePolyFp)
            and self.p == other.p
            and self.vars == other.vars
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.p, self.vars, frozenset(self.terms.items())))

    def __add__(self, other: SparsePolyFp) -> SparsePolyFp:
        self._same_ring(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return SparsePolyFp(self.p, self.vars, out)

    def __mul__(self, other: SparsePolyFp) -> SparsePolyFp:
        self._same_ring(other)
        out: dict[Exps, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return SparsePolyFp(self.p, self.vars, out)

    def __pow__(self, n: int) -> SparsePolyFp:
        if n < 0:
            raise ValueError("negative power")
        out = SparsePolyFp(self.p, self.vars, {(0,) * len(self.vars): 1})
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def truncate(self, cap: int) -> SparsePolyFp:
        """Drop every term with some exponent >= cap (reduction mod (x_i^cap))."""
        return SparsePolyFp(
            self.p, self.vars, {e: c for e, c in self.terms.items() if max(e) < cap}
        )

    def evaluate(self, point: tuple[int, ...]) -> int:
        val = 0
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                t = t * pow(x, k, self.p) % self.p
            val = (val + t) % self.p
        return val

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            factors = [str(c)] if (c != 1 or not any(exps)) else []
            for name, k in zip(self.vars, exps):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    __repr__ = __str__

    def to_json(self) -> str:
        doc = {
            "p": self.p,
            "vars": list(self.vars),
            "terms": [
                {"exps": list(e), "coeff": str(c)} for e, c in self.sorted_terms()
            ],
        }
        return json.dumps(doc, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> SparsePolyFp:
        doc = json.loads(text)
        return cls(
            doc["p"],
            tuple(doc["vars"]),
            {tuple(t["exps"]): int(t["coeff"]) for t in doc["terms"]},
        )


def mul_truncated(f: SparsePolyFp, g: SparsePolyFp, cap: int) -> SparsePolyFp:
    """Product of f and g in F_p[x]/(x_1^cap, ..., x_n^cap).

    Terms acquiring any exponent >= cap are discarded as they are formed, so
    the cost is bounded by the number of surviving monomials, not the full
    product size.
    """
    f._same_ring(g)
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    out: dict[Exps, int] = {}
    for e1, c1 in f.terms.items():
        if max(e1, default=0) >= cap:
            continue
        for e2, c2 in g.terms.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            if max(e, default=0) < cap:
                out[e] = out.get(e, 0) + c1 * c2
    return SparsePolyFp(f.p, f.vars, out)


def pth_root_mod_fp(f: SparsePolyFp) -> SparsePolyFp | None:
    """The unique h over F_p with h^p = f, or None when f is not a p-th power.

    Over F_p the Frobenius is x -> x^p on coefficients (the identity) and
    multiplies exponents by p, so f has a p-th root exactly when every
    exponent in every term is divisible by p.
    """
    root: dict[Exps, int] = {}
    for exps, c in f.terms.items():
        if any(e % f.p for e in exps):
            return None
        root[tuple(e // f.p for e in exps)] = c
    return SparsePolyFp(f.p, f.vars, root)


class MixedPoly:
    """Integer-coefficient polynomial in pi and x_1..x_n over W[pi]/(pi^{p^a} = p)."""

    __slots__ = ("p", "ram_level", "vars", "terms")

    def __init__(
        self,
        p: int,
        ram_level: int,
        vars: tuple[str, ...],
        terms: dict[tuple[int, Exps], int],
    ):
        require_prime(p)
        if ram_level < 0:
            raise ValueError(f"ram_level must be >= 0, got {ram_level}")
        self.p = p
        self.ram_level = ram_level
        self.vars = _check_vars(tuple(vars))
        clean: dict[tuple[int, Exps], int] = {}
        for (pi, exps), c in terms.items():
            if pi < 0:
                raise ValueError(f"pi-exponent must be >= 0, got {pi}")
            exps = _check_exps(exps, len(self.vars))
            if c:
                key = (pi, exps)
                clean[key] = clean.get(key, 0) + c
        self.terms = {k: c for k, c in clean.items() if c}

    @classmethod
    def zero(cls, p: int, ram_level: int, vars: tuple[str, ...]) -> MixedPoly:
        return cls(p, ram_level, vars, {})

    def is_zero(self) -> bool:
        return not self.terms

    def effective_pi_order(self, key: tuple[int, Exps]) -> int:
        """pi-adic order of the term at ``key``: pi_exp + p^ram_level * v_p(coeff)."""
        pi, _ = key
        c = self.terms[key]
        return pi + self.p**self.ram_level * padic_valuation(c, self.p)

    def sorted_terms(self) -> list[tuple[tuple[int, Exps], int]]:
        return sorted(
            self.terms.items(),
            key=lambda t: (t[0][0] + sum(t[0][1]), t[0][0], t[0][1]),
            reverse=True,
        )

    def _same_ring(self, other: MixedPoly) -> None:
        if (
            self.p != other.p
            or self.ram_level != other.ram_level
            or self.vars != other.vars
        ):
            raise ValueError("polynomials live in different rings")

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, MixedPoly)
            and self.p == other.p
            and self.ram_level == other.ram_level
            and self.vars == other.vars
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash(
            (self.p, self.ram_level, self.vars, frozenset(self.terms.items()))
        )

    def __add__(self, other: MixedPoly) -> MixedPoly:
        self._same_ring(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return MixedPoly(self.p, self.ram_level, self.vars, out)

    def __mul__(self, other: MixedPoly) -> MixedPoly:
        self._same_ring(other)
        out: dict[tuple[int, Exps], int] = {}
        for (p1, e1), c1 in self.terms.items():
            for (p2, e2), c2 in other.terms.items():
                k = (p1 + p2, tuple(a + b for a, b in zip(e1, e2)))
                out[k] = out.get(k, 0) + c1 * c2
        return MixedPoly(self.p, self.ram_level, self.vars, out)

    def eval_at_one(self) -> int:
        """Image under pi -> 1, x_i -> 1 (a ring map to Z on formal terms)."""
        return sum(self.terms.values())

    def x_degree(self, key: tuple[int, Exps]) -> int:
        return sum(key[1])

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (pi, exps), c in self.sorted_terms():
            factors = []
            if c != 1 or (pi == 0 and not any(exps)):
                factors.append(str(c))
            if pi == 1:
                factors.append("pi")
            elif pi > 1:
                factors.append(f"pi^{pi}")
            for name, k in zip(self.vars, exps):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    __repr__ = __str__

    def to_json(self) -> str:
        doc = {
            "p": self.p,
            "ram_level": self.ram_level,
            "vars": list(self.vars),
            "terms": [
                {"pi": pi, "exps": list(e), "coeff": str(c)}
                for (pi, e), c in self.sorted_terms()
            ],
        }
        return json.dumps(doc, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> MixedPoly:
        doc = json.loads(text)
        return cls(
            doc["p"],
            doc["ram_level"],
            tuple(doc["vars"]),
            {(t["pi"], tuple(t["exps"])): int(t["coeff"]) for t in doc["terms"]},
        )


def pow_mixed(f: MixedPoly, n: int) -> MixedPoly:
    """f^n with exact integer coefficients (binary powering, no reduction)."""
    if n < 0:
        raise ValueError("negative power")
    out = MixedPoly(f.p, f.ram_level, f.vars, {(0, (0,) * len(f.vars)): 1})
    base = f
    while n:
        if n & 1:
            out = out * base
        base = base * base
        n >>= 1
    return out


def reduce_mod_pi(f: MixedPoly) -> SparsePolyFp:
    """The residue of f in F_p[x]: keep terms of effective pi-order zero, mod p."""
    out: dict[Exps, int] = {}
    for (pi, exps), c in f.terms.items():
        if pi == 0 and c % f.p:
            out[exps] = (out.get(exps, 0) + c) % f.p
    return SparsePolyFp(f.p, f.vars, out)


class WeightedMonomialIdeal:
    """An ideal generated by terms pi^g * x^E, stored as a minimal generating set."""

    __slots__ = ("p", "ram_level", "vars", "gens")

    def __init__(
        self,
        p: int,
        ram_level: int,
        vars: tuple[str, ...],
        gens: list[tuple[int, Exps]],
    ):
        require_prime(p)
        if ram_level < 0:
            raise ValueError(f"ram_level must be >= 0, got {ram_level}")
        self.p = p
        self.ram_level = ram_level
        self.vars = _check_vars(tuple(vars))
        n = len(self.vars)
        checked = []
        for pi, exps in gens:
            if pi < 0:
                raise ValueError(f"pi-exponent must be >= 0, got {pi}")
            checked.append((pi, _check_exps(exps, n)))
        minimal = [
            g
            for g in checked
            if not any(h != g and _divides(h, g) for h in checked)
        ]
        # Deduplicate while keeping a stable, deterministic order.
        self.gens = tuple(sorted(set(minimal)))

    def divides_term(self, f: MixedPoly, key: tuple[int, Exps]) -> tuple[int, Exps] | None:
        """A generator dividing the given term of f, or None.

        A generator pi^g * x^G divides c * pi^k * x^E iff G <= E componentwise
        and g <= k + p^a * v_p(c), the effective pi-order of the term.
        """
        order = f.effective_pi_order(key)
        _, exps = key
        for gpi, gexps in self.gens:
            if gpi <= order and all(a <= b for a, b in zip(gexps, exps)):
                return (gpi, gexps)
        return None


def _divides(g: tuple[int, Exps], h: tuple[int, Exps]) -> bool:
    return g[0] <= h[0] and all(a <= b for a, b in zip(g[1], h[1]))


@dataclass(frozen=True)
class MembershipResult:
    """Outcome of a termwise ideal-membership test.

    ``matches`` pairs each term key of f with the generator that absorbed it;
    when containment fails, ``failure`` is the first term (in graded-lex
    order) no generator divides.  Termwise membership is sufficient but not
    necessary for membership, which is the safe direction for upper bounds.
    """

    contained: bool
    matches: tuple[tuple[tuple[int, Exps], tuple[int, Exps]], ...]
    failure: tuple[int, Exps] | None

    def __bool__(self) -> bool:
        return self.contained


def weighted_membership(f: MixedPoly, ideal: WeightedMonomialIdeal) -> MembershipResult:
    """Test whether every term of f lies in the weighted monomial ideal."""
    if f.p != ideal.p or f.ram_level != ideal.ram_level or f.vars != ideal.vars:
        raise ValueError("polynomial and ideal live in different rings")
    matches = []
    for (key, _c) in f.sorted_terms():
        gen = ideal.divides_term(f, key)
        if gen is None:
            return MembershipResult(False, tuple(matches), key)
        matches.append((key, gen))
    return MembershipResult(True, tuple(matches), None)
