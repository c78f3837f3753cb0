"""The face lattice: formulas built from atoms (i=0), (i=1).

A face formula is kept as an antichain of irreducible faces, where a
face is a consistent finite assignment of sides to names (the empty
face is the top element).  The bottom element is a tagged constant.
The defining relation (i=0) /\\ (i=1) = 0 makes inconsistent conjuncts
collapse, unlike in the interval algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .interval import Interval, Name, ineg

# A face is a frozenset of atoms (name, side) with at most one side per name.
Face = frozenset


def face_names(f: Face) -> set:
    return {n for (n, _) in f}


def face_merge(f: Face, g: Face) -> Optional[Face]:
    """Conjunction of two faces; None when they bind a name to both sides."""
    merged = f | g
    if len({n for (n, _) in merged}) < len(merged):
        return None
    return merged


def face_key(f: Face):
    return sorted((n.uid, s) for (n, s) in f)


@dataclass(frozen=True)
class FaceFormula:
    """Either bottom (``faces is None``) or a non-empty antichain of faces."""

    faces: Optional[frozenset] = None

    def is_bot(self):
        return self.faces is None

    def is_top(self):
        return self.faces is not None and frozenset() in self.faces

    def support(self) -> set:
        if self.faces is None:
            return set()
        return {n for f in self.faces for (n, _) in f}

    def __repr__(self):
        return pretty_face(self)


FBOT = FaceFormula(None)
FTOP = FaceFormula(frozenset({frozenset()}))


def fatom(n: Name, side: int) -> FaceFormula:
    return FaceFormula(frozenset({frozenset({(n, side)})}))


def _antichain(faces: Iterable[Face]) -> FaceFormula:
    fs = set(faces)
    if not fs:
        return FBOT
    return FaceFormula(frozenset(f for f in fs if not any(o < f for o in fs)))


def for_(a: FaceFormula, b: FaceFormula) -> FaceFormula:
    if a.is_bot():
        return b
    if b.is_bot():
        return a
    if a.is_top() or b.is_top():
        return FTOP
    return _antichain(a.faces | b.faces)


def fand(a: FaceFormula, b: FaceFormula) -> FaceFormula:
    if a.is_bot() or b.is_bot():
        return FBOT
    out = set()
    for f in a.faces:
        for g in b.faces:
            m = face_merge(f, g)
            if m is not None:
                out.add(m)
    return _antichain(out)


def fnorm(expr) -> FaceFormula:
    """Normalize a raw face expression.

    Raw form: ``("bot",)``, ``("top",)``, ``("atom", name, side)``,
    ``("and", a, b)``, ``("or", a, b)``; canonical formulas pass through.
    """
    if isinstance(expr, FaceFormula):
        return expr
    match expr:
        case ("bot",):
            return FBOT
        case ("top",):
            return FTOP
        case ("atom", n, side):
            return fatom(n, side)
        case ("and", a, b):
            return fand(fnorm(a), fnorm(b))
        case ("or", a, b):
            return for_(fnorm(a), fnorm(b))
    raise ValueError(f"not a face expression: {expr!r}")


def fleq(a: FaceFormula, b: FaceFormula) -> bool:
    """a <= b: every face of a refines (is a superset of) some face of b."""
    if a.is_bot():
        return True
    if b.is_bot():
        return False
    return all(any(g <= f for g in b.faces) for f in a.faces)


def feq(a: FaceFormula, b: FaceFormula) -> bool:
    return a == b


def toface(r: Interval) -> FaceFormula:
    """The canonical lattice map sending i to (i=1) and 1-i to (i=0)."""
    if r.is_zero():
        return FBOT
    if r.is_one():
        return FTOP
    out = FBOT
    for clause in r.clauses:
        face = frozenset()
        ok = True
        for (n, pos) in clause:
            m = face_merge(face, frozenset({(n, 1 if pos else 0)}))
            if m is None:
                ok = False
                break
            face = m
        if ok:
            out = for_(out, FaceFormula(frozenset({face})))
    return out


def fsubst(phi: FaceFormula, n: Name, r: Interval) -> FaceFormula:
    """Send (n=1) to (r=1) and (n=0) to (r=0), fixing all other atoms."""
    if phi.is_bot() or n not in phi.support():
        return phi
    pos, neg = toface(r), toface(ineg(r))
    out = FBOT
    for f in phi.faces:
        acc = FTOP
        for (m, side) in f:
            if m == n:
                acc = fand(acc, pos if side == 1 else neg)
            else:
                acc = fand(acc, fatom(m, side))
        out = for_(out, acc)
    return out


def fsubst_many(phi: FaceFormula, sub: dict) -> FaceFormula:
    if phi.is_bot() or not (phi.support() & set(sub)):
        return phi
    pos = {n: toface(r) for n, r in sub.items()}
    neg = {n: toface(ineg(r)) for n, r in sub.items()}
    out = FBOT
    for f in phi.faces:
        acc = FTOP
        for (m, side) in f:
            if m in sub:
                acc = fand(acc, pos[m] if side == 1 else neg[m])
            else:
                acc = fand(acc, fatom(m, side))
        out = for_(out, acc)
    return out


def fforall(n: Name, phi: FaceFormula) -> FaceFormula:
    """Quantifier elimination: drop every face that mentions n."""
    if phi.is_bot():
        return FBOT
    kept = [f for f in phi.faces if n not in face_names(f)]
    return _antichain(kept)


def ffaces(phi: FaceFormula) -> list:
    """The antichain as a deterministically ordered list of faces."""
    if phi.is_bot():
        return []
    return sorted(phi.faces, key=face_key)


def boundary(names: Iterable[Name]) -> FaceFormula:
    out = FBOT
    for n in names:
        out = for_(out, for_(fatom(n, 0), fatom(n, 1)))
    return out


def face_formula(f: Face) -> FaceFormula:
    return FaceFormula(frozenset({f}))


def face_subst(f: Face) -> dict:
    """A face read as an interval substitution name -> 0/1."""
    from .interval import IONE, IZERO

    return {n: (IONE if side == 1 else IZERO) for (n, side) in f}


def pretty_face(phi: FaceFormula, names: Optional[dict] = None) -> str:
    def show_name(n):
        return names[n] if names and n in names else n.hint

    if phi.is_bot():
        return "0F"
    if phi.is_top():
        return "1F"
    parts = []
    for f in ffaces(phi):
        atoms = [f"({show_name(n)}={s})" for (n, s) in sorted(f, key=lambda a: (a[0].uid, a[1]))]
        body = " /\\ ".join(atoms)
        parts.append("(" + body + ")" if len(atoms) > 1 and len(phi.faces) > 1 else body)
    return " \\/ ".join(parts)
