r"""The free de Morgan algebra on a countable set of names.

Elements are kept in a canonical join-of-meets normal form: an antichain
of clauses, each clause a non-empty set of literals ``i`` / ``-i``.  The
two lattice constants are tagged values, never encoded as empty
clause sets.  Because the algebra is free, a clause may contain both a
name and its complement; ``i /\ -i`` is *not* 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

_name_counter = itertools.count(1)


@dataclass(frozen=True, order=True)
class Name:
    """An interned symbol: identity lives in ``uid``, ``hint`` is for printing."""

    uid: int
    hint: str = field(default="i", compare=False)

    def __repr__(self):
        return f"{self.hint}#{self.uid}"


def fresh_name(hint: str = "i") -> Name:
    """A name guaranteed distinct from every other name of this session."""
    return Name(next(_name_counter), hint.split("#")[0] or "i")


# A literal is (name, polarity); polarity False means the complement 1-i.
Literal = tuple  # (Name, bool)
Clause = frozenset  # frozenset[Literal]


@dataclass(frozen=True)
class Interval:
    """Canonical element of the interval algebra.

    ``const`` is 0 or 1 for the endpoints; otherwise ``clauses`` is a
    non-empty antichain (no clause contains another) of non-empty clauses.
    Structural equality therefore decides equality in the algebra.
    """

    const: Optional[int] = None
    clauses: Optional[frozenset] = None

    def is_zero(self):
        return self.const == 0

    def is_one(self):
        return self.const == 1

    def is_const(self):
        return self.const is not None

    def support(self) -> set:
        if self.const is not None:
            return set()
        return {n for c in self.clauses for (n, _) in c}

    def __repr__(self):
        return pretty_interval(self)


IZERO = Interval(const=0)
IONE = Interval(const=1)


def ivar(n: Name) -> Interval:
    return Interval(clauses=frozenset({frozenset({(n, True)})}))


def _antichain(clauses: Iterable[Clause]) -> frozenset:
    """Drop clauses subsumed by a smaller one (absorption x \\/ (x /\\ y) = x)."""
    cs = set(clauses)
    return frozenset(c for c in cs if not any(o < c for o in cs))


def ior(r: Interval, s: Interval) -> Interval:
    if r.is_one() or s.is_one():
        return IONE
    if r.is_zero():
        return s
    if s.is_zero():
        return r
    return Interval(clauses=_antichain(r.clauses | s.clauses))


def iand(r: Interval, s: Interval) -> Interval:
    if r.is_zero() or s.is_zero():
        return IZERO
    if r.is_one():
        return s
    if s.is_one():
        return r
    return Interval(clauses=_antichain(a | b for a in r.clauses for b in s.clauses))


def ineg(r: Interval) -> Interval:
    """De Morgan involution, pushed down to the literals."""
    if r.is_zero():
        return IONE
    if r.is_one():
        return IZERO
    out = IONE
    for clause in r.clauses:
        lits = IZERO
        for (n, pos) in clause:
            lits = ior(lits, Interval(clauses=frozenset({frozenset({(n, not pos)})})))
        out = iand(out, lits)
    return out


def inorm(expr) -> Interval:
    """Normalize a raw interval expression.

    Raw expressions are nested tuples: ``("zero",)``, ``("one",)``,
    ``("var", name)``, ``("neg", e)``, ``("and", e1, e2)``, ``("or", e1, e2)``.
    A value that is already an Interval passes through unchanged, which
    makes the operation idempotent.
    """
    if isinstance(expr, Interval):
        return expr
    match expr:
        case ("zero",):
            return IZERO
        case ("one",):
            return IONE
        case ("var", n):
            return ivar(n)
        case ("neg", e):
            return ineg(inorm(e))
        case ("and", a, b):
            return iand(inorm(a), inorm(b))
        case ("or", a, b):
            return ior(inorm(a), inorm(b))
    raise ValueError(f"not an interval expression: {expr!r}")


def ieq(r: Interval, s: Interval) -> bool:
    return r == s


def isubst(r: Interval, n: Name, s: Interval) -> Interval:
    """Replace ``n`` by ``s`` (and ``1-n`` by ``1-s``), renormalizing."""
    if r.is_const() or n not in r.support():
        return r
    neg_s = ineg(s)
    out = IZERO
    for clause in r.clauses:
        acc = IONE
        for (m, pos) in clause:
            if m == n:
                acc = iand(acc, s if pos else neg_s)
            else:
                acc = iand(acc, Interval(clauses=frozenset({frozenset({(m, pos)})})))
        out = ior(out, acc)
    return out


def isubst_many(r: Interval, sub: dict) -> Interval:
    """Simultaneous substitution of names by intervals."""
    if r.is_const():
        return r
    touched = r.support() & set(sub)
    if not touched:
        return r
    negs = {n: ineg(v) for n, v in sub.items()}
    out = IZERO
    for clause in r.clauses:
        acc = IONE
        for (m, pos) in clause:
            if m in sub:
                acc = iand(acc, sub[m] if pos else negs[m])
            else:
                acc = iand(acc, Interval(clauses=frozenset({frozenset({(m, pos)})})))
        out = ior(out, acc)
    return out


def _lit_key(lit):
    n, pos = lit
    return (n.uid, not pos)


def _clause_key(clause):
    return sorted(_lit_key(l) for l in clause)


def sorted_clauses(r: Interval):
    """Clauses with a deterministic order, for printing and iteration."""
    return sorted(r.clauses, key=_clause_key)


def pretty_interval(r: Interval, names: Optional[dict] = None) -> str:
    def show_name(n):
        return names[n] if names and n in names else n.hint

    if r.is_zero():
        return "0"
    if r.is_one():
        return "1"
    parts = []
    for clause in sorted_clauses(r):
        lits = []
        for lit in sorted(clause, key=_lit_key):
            n, pos = lit
            lits.append(show_name(n) if pos else "-" + show_name(n))
        body = " /\\ ".join(lits)
        parts.append("(" + body + ")" if len(lits) > 1 and len(r.clauses) > 1 else body)
    return " \\/ ".join(parts)
