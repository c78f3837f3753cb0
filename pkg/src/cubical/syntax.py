"""Abstract syntax: terms, contexts, and simultaneous substitution.

Binders carry globally unique names (allocated in binding order from the
session counter), so freshness is mechanical and alpha-equivalence is a
structural comparison modulo a name bijection.  Interval and face
annotations inside terms always store canonical lattice values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

from .face import FaceFormula, fsubst_many
from .interval import Interval, Name, fresh_name, isubst_many, ivar


class Term:
    __slots__ = ()


def _node(cls):
    return dataclass(frozen=True)(cls)


@_node
class Var(Term):
    name: Name


@_node
class Pi(Term):
    x: Name
    dom: Term
    cod: Term


@_node
class Lam(Term):
    x: Name
    dom: Term
    body: Term


@_node
class App(Term):
    fn: Term
    arg: Term


@_node
class Sigma(Term):
    x: Name
    dom: Term
    cod: Term


@_node
class Pair(Term):
    fst: Term
    snd: Term


@_node
class Fst(Term):
    t: Term


@_node
class Snd(Term):
    t: Term


@_node
class Nat(Term):
    pass


@_node
class Zero(Term):
    pass


@_node
class Suc(Term):
    n: Term


@_node
class NatRec(Term):
    motive: Term  # function N -> U
    z: Term
    s: Term
    n: Term


@_node
class PathP(Term):
    """Dependent path type; Path A t u is the degenerate case (i not in A)."""

    i: Name
    line: Term
    a0: Term
    a1: Term


@_node
class PAbs(Term):
    i: Name
    body: Term


@_node
class PApp(Term):
    fn: Term
    arg: Interval


@_node
class System(Term):
    branches: Tuple  # ((FaceFormula, Term), ...)


@_node
class Comp(Term):
    i: Name
    line: Term
    branches: Tuple  # ((FaceFormula, Term), ...) -- the tube, i bound
    base: Term


@_node
class GlueT(Term):
    branches: Tuple  # ((FaceFormula, Term, Term), ...) -- (phi, T, equiv)
    base: Term


@_node
class GlueElem(Term):
    branches: Tuple  # ((FaceFormula, Term), ...)
    base: Term


@_node
class Unglue(Term):
    branches: Tuple  # ((FaceFormula, Term), ...) -- (phi, equiv)
    t: Term


@_node
class U(Term):
    pass


@_node
class IdT(Term):
    ty: Term
    a0: Term
    a1: Term


@_node
class IdPair(Term):
    path: Term
    phi: FaceFormula


@_node
class IdJ(Term):
    motive: Term  # function (x:A) -> Id A a x -> U
    d: Term
    beta: Term


@_node
class S1(Term):
    pass


@_node
class Base(Term):
    pass


@_node
class Loop(Term):
    r: Interval


@_node
class HComp(Term):
    """Composition as constructor, only legal at S1 and inh A."""

    ty: Term
    i: Name
    branches: Tuple
    base: Term


@_node
class S1Elim(Term):
    motive: Term  # function S1 -> U
    base_case: Term
    loop_case: Term  # PathP (<i> motive (loop i)) b b
    scrut: Term


@_node
class Inh(Term):
    ty: Term


@_node
class Inc(Term):
    t: Term


@_node
class Squash(Term):
    a: Term
    b: Term
    r: Interval


@_node
class InhElim(Term):
    motive: Term  # the target type B, a proposition
    prop: Term  # (x y : B) -> Path B x y
    fn: Term  # A -> B
    scrut: Term


NAT = Nat()
ZERO = Zero()
UU = U()
S1T = S1()
BASE = Base()


@dataclass
class Subst:
    """Simultaneous substitution of term variables and interval names."""

    vars: dict = field(default_factory=dict)  # Name -> Term
    names: dict = field(default_factory=dict)  # Name -> Interval

    def is_empty(self):
        return not self.vars and not self.names

    def extended(self, var_map=None, name_map=None) -> "Subst":
        s = Subst(dict(self.vars), dict(self.names))
        if var_map:
            s.vars.update(var_map)
        if name_map:
            s.names.update(name_map)
        return s


def name_subst(sub: dict) -> Subst:
    return Subst(names=dict(sub))


def var_subst(sub: dict) -> Subst:
    return Subst(vars=dict(sub))


def _sub_interval(r: Interval, s: Subst) -> Interval:
    return isubst_many(r, s.names) if s.names else r


def _sub_face(phi: FaceFormula, s: Subst) -> FaceFormula:
    return fsubst_many(phi, s.names) if s.names else phi


def _sub_branches(branches, s, arity=2):
    out = []
    for br in branches:
        phi = _sub_face(br[0], s)
        out.append((phi,) + tuple(tsubst(t, s) for t in br[1:]))
    return tuple(out)


def tsubst(t: Term, s: Subst) -> Term:
    """Capture-avoiding simultaneous substitution; binders are freshened."""
    if s.is_empty():
        return t
    match t:
        case Var(name=x):
            return s.vars.get(x, t)
        case Pi(x=x, dom=dom, cod=cod):
            x2 = fresh_name(x.hint)
            s2 = s.extended(var_map={x: Var(x2)})
            return Pi(x2, tsubst(dom, s), tsubst(cod, s2))
        case Lam(x=x, dom=dom, body=body):
            x2 = fresh_name(x.hint)
            s2 = s.extended(var_map={x: Var(x2)})
            return Lam(x2, tsubst(dom, s), tsubst(body, s2))
        case App(fn=fn, arg=arg):
            return App(tsubst(fn, s), tsubst(arg, s))
        case Sigma(x=x, dom=dom, cod=cod):
            x2 = fresh_name(x.hint)
            s2 = s.extended(var_map={x: Var(x2)})
            return Sigma(x2, tsubst(dom, s), tsubst(cod, s2))
        case Pair(fst=a, snd=b):
            return Pair(tsubst(a, s), tsubst(b, s))
        case Fst(t=u):
            return Fst(tsubst(u, s))
        case Snd(t=u):
            return Snd(tsubst(u, s))
        case Nat() | Zero() | U() | S1() | Base():
            return t
        case Suc(n=n):
            return Suc(tsubst(n, s))
        case NatRec(motive=m, z=z, s=sc, n=n):
            return NatRec(tsubst(m, s), tsubst(z, s), tsubst(sc, s), tsubst(n, s))
        case PathP(i=i, line=line, a0=a0, a1=a1):
            j = fresh_name(i.hint)
            s2 = s.extended(name_map={i: ivar(j)})
            return PathP(j, tsubst(line, s2), tsubst(a0, s), tsubst(a1, s))
        case PAbs(i=i, body=body):
            j = fresh_name(i.hint)
            s2 = s.extended(name_map={i: ivar(j)})
            return PAbs(j, tsubst(body, s2))
        case PApp(fn=fn, arg=r):
            return PApp(tsubst(fn, s), _sub_interval(r, s))
        case System(branches=brs):
            return System(_sub_branches(brs, s))
        case Comp(i=i, line=line, branches=brs, base=base):
            j = fresh_name(i.hint)
            s2 = s.extended(name_map={i: ivar(j)})
            brs2 = tuple((_sub_face(phi, s), tsubst(u, s2)) for (phi, u) in brs)
            return Comp(j, tsubst(line, s2), brs2, tsubst(base, s))
        case GlueT(branches=brs, base=base):
            return GlueT(_sub_branches(brs, s), tsubst(base, s))
        case GlueElem(branches=brs, base=base):
            return GlueElem(_sub_branches(brs, s), tsubst(base, s))
        case Unglue(branches=brs, t=u):
            return Unglue(_sub_branches(brs, s), tsubst(u, s))
        case IdT(ty=a, a0=a0, a1=a1):
            return IdT(tsubst(a, s), tsubst(a0, s), tsubst(a1, s))
        case IdPair(path=w, phi=phi):
            return IdPair(tsubst(w, s), _sub_face(phi, s))
        case IdJ(motive=m, d=d, beta=b):
            return IdJ(tsubst(m, s), tsubst(d, s), tsubst(b, s))
        case Loop(r=r):
            return Loop(_sub_interval(r, s))
        case HComp(ty=ty, i=i, branches=brs, base=base):
            j = fresh_name(i.hint)
            s2 = s.extended(name_map={i: ivar(j)})
            brs2 = tuple((_sub_face(phi, s), tsubst(u, s2)) for (phi, u) in brs)
            return HComp(tsubst(ty, s), j, brs2, tsubst(base, s))
        case S1Elim(motive=m, base_case=b, loop_case=l, scrut=x):
            return S1Elim(tsubst(m, s), tsubst(b, s), tsubst(l, s), tsubst(x, s))
        case Inh(ty=a):
            return Inh(tsubst(a, s))
        case Inc(t=u):
            return Inc(tsubst(u, s))
        case Squash(a=a, b=b, r=r):
            return Squash(tsubst(a, s), tsubst(b, s), _sub_interval(r, s))
        case InhElim(motive=mo, prop=q, fn=f, scrut=x):
            return InhElim(tsubst(mo, s), tsubst(q, s), tsubst(f, s), tsubst(x, s))
    raise TypeError(f"tsubst: unknown term {t!r}")


def tsubst_face(t: Term, name_map: dict) -> Term:
    return tsubst(t, Subst(names=dict(name_map)))


def frees(t: Term) -> tuple:
    """Cached (free term variables, free interval names) of a term."""
    cached = t.__dict__.get("_frees")
    if cached is not None:
        return cached
    fv: set = set()
    fn: set = set()

    def add(u):
        v2, n2 = frees(u)
        fv.update(v2)
        fn.update(n2)

    match t:
        case Var(name=x):
            fv.add(x)
        case Pi(x=x, dom=d, cod=c) | Sigma(x=x, dom=d, cod=c) | Lam(x=x, dom=d, body=c):
            add(d)
            v2, n2 = frees(c)
            fv.update(v2 - {x})
            fn.update(n2)
        case PathP(i=i, line=line, a0=a0, a1=a1):
            v2, n2 = frees(line)
            fv.update(v2)
            fn.update(n2 - {i})
            add(a0)
            add(a1)
        case PAbs(i=i, body=b):
            v2, n2 = frees(b)
            fv.update(v2)
            fn.update(n2 - {i})
        case PApp(fn=f, arg=r):
            add(f)
            fn.update(r.support())
        case Loop(r=r):
            fn.update(r.support())
        case Squash(a=a, b=b, r=r):
            add(a)
            add(b)
            fn.update(r.support())
        case System(branches=brs):
            for br in brs:
                fn.update(br[0].support())
                for u in br[1:]:
                    add(u)
        case Comp(i=i, line=line, branches=brs, base=base):
            v2, n2 = frees(line)
            fv.update(v2)
            fn.update(n2 - {i})
            for (phi, u) in brs:
                fn.update(phi.support())
                v2, n2 = frees(u)
                fv.update(v2)
                fn.update(n2 - {i})
            add(base)
        case HComp(ty=ty, i=i, branches=brs, base=base):
            add(ty)
            for (phi, u) in brs:
                fn.update(phi.support())
                v2, n2 = frees(u)
                fv.update(v2)
                fn.update(n2 - {i})
            add(base)
        case GlueT(branches=brs, base=base) | GlueElem(branches=brs, base=base) | Unglue(branches=brs, t=base):
            add(base)
            for br in brs:
                fn.update(br[0].support())
                for u in br[1:]:
                    add(u)
        case IdPair(path=w, phi=phi):
            add(w)
            fn.update(phi.support())
        case _:
            for sub in _subterms(t):
                add(sub)

    out = (frozenset(fv), frozenset(fn))
    object.__setattr__(t, "_frees", out)
    return out


def free_vars(t: Term) -> set:
    return set(frees(t)[0])


def _subterms(t: Term):
    match t:
        case App(fn=a, arg=b) | Pair(fst=a, snd=b):
            return [a, b]
        case Fst(t=a) | Snd(t=a) | Suc(n=a) | Inc(t=a) | Inh(ty=a) | PApp(fn=a):
            return [a]
        case NatRec(motive=a, z=b, s=c, n=d) | S1Elim(motive=a, base_case=b, loop_case=c, scrut=d):
            return [a, b, c, d]
        case IdT(ty=a, a0=b, a1=c):
            return [a, b, c]
        case IdPair(path=a):
            return [a]
        case IdJ(motive=a, d=b, beta=c) | Squash(a=a, b=b, r=c):
            return [a, b] if isinstance(t, Squash) else [a, b, c]
        case InhElim(motive=a, prop=b, fn=c, scrut=d):
            return [a, b, c, d]
        case System(branches=brs):
            return [u for br in brs for u in br[1:]]
        case Comp(line=line, branches=brs, base=base) | HComp(ty=line, branches=brs, base=base):
            return [line, base] + [u for (_, u) in brs]
        case GlueT(branches=brs, base=base) | GlueElem(branches=brs, base=base):
            return [base] + [u for br in brs for u in br[1:]]
        case Unglue(branches=brs, t=base):
            return [base] + [u for br in brs for u in br[1:]]
        case _:
            return []


def support(t: Term) -> set:
    """Free interval names of a term, annotations included."""
    return set(frees(t)[1])


def alpha_eq(t1: Term, t2: Term, env: Optional[dict] = None) -> bool:
    """Structural equality modulo a bijective renaming of bound symbols."""
    env = env or {}

    def names_eq(a: Name, b: Name):
        return env.get(a, a) == b

    def interval_eq(r, s):
        if env:
            sub = {n: ivar(m) for n, m in env.items() if isinstance(m, Name)}
            r = isubst_many(r, sub)
        return r == s

    def face_eq(p, q):
        if env:
            sub = {n: ivar(m) for n, m in env.items() if isinstance(m, Name)}
            p = fsubst_many(p, sub)
        return p == q

    def brs_eq(brs1, brs2):
        if len(brs1) != len(brs2):
            return False
        return all(
            face_eq(b1[0], b2[0]) and all(alpha_eq(u1, u2, env) for u1, u2 in zip(b1[1:], b2[1:]))
            for b1, b2 in zip(brs1, brs2)
        )

    match t1, t2:
        case Var(name=x), Var(name=y):
            return names_eq(x, y)
        case (Pi(x=x1, dom=d1, cod=c1), Pi(x=x2, dom=d2, cod=c2)) | (
            Sigma(x=x1, dom=d1, cod=c1), Sigma(x=x2, dom=d2, cod=c2)
        ) | (Lam(x=x1, dom=d1, body=c1), Lam(x=x2, dom=d2, body=c2)):
            if type(t1) is not type(t2) or not alpha_eq(d1, d2, env):
                return False
            return alpha_eq(c1, c2, {**env, x1: x2})
        case PAbs(i=i1, body=b1), PAbs(i=i2, body=b2):
            return alpha_eq(b1, b2, {**env, i1: i2})
        case PathP(i=i1, line=l1, a0=a01, a1=a11), PathP(i=i2, line=l2, a0=a02, a1=a12):
            return (
                alpha_eq(l1, l2, {**env, i1: i2})
                and alpha_eq(a01, a02, env)
                and alpha_eq(a11, a12, env)
            )
        case PApp(fn=f1, arg=r1), PApp(fn=f2, arg=r2):
            return alpha_eq(f1, f2, env) and interval_eq(r1, r2)
        case Loop(r=r1), Loop(r=r2):
            return interval_eq(r1, r2)
        case Squash(a=a1, b=b1, r=r1), Squash(a=a2, b=b2, r=r2):
            return alpha_eq(a1, a2, env) and alpha_eq(b1, b2, env) and interval_eq(r1, r2)
        case System(branches=brs1), System(branches=brs2):
            return brs_eq(brs1, brs2)
        case Comp(i=i1, line=l1, branches=brs1, base=b1), Comp(i=i2, line=l2, branches=brs2, base=b2):
            env2 = {**env, i1: i2}
            if not (alpha_eq(l1, l2, env2) and alpha_eq(b1, b2, env)):
                return False
            if len(brs1) != len(brs2):
                return False
            return all(
                face_eq(p1, p2) and alpha_eq(u1, u2, env2)
                for (p1, u1), (p2, u2) in zip(brs1, brs2)
            )
        case HComp(ty=ty1, i=i1, branches=brs1, base=b1), HComp(ty=ty2, i=i2, branches=brs2, base=b2):
            env2 = {**env, i1: i2}
            if not (alpha_eq(ty1, ty2, env) and alpha_eq(b1, b2, env)):
                return False
            if len(brs1) != len(brs2):
                return False
            return all(
                face_eq(p1, p2) and alpha_eq(u1, u2, env2)
                for (p1, u1), (p2, u2) in zip(brs1, brs2)
            )
        case (GlueT(branches=brs1, base=b1), GlueT(branches=brs2, base=b2)) | (
            GlueElem(branches=brs1, base=b1), GlueElem(branches=brs2, base=b2)
        ) | (Unglue(branches=brs1, t=b1), Unglue(branches=brs2, t=b2)):
            return type(t1) is type(t2) and alpha_eq(b1, b2, env) and brs_eq(brs1, brs2)
        case IdPair(path=w1, phi=p1), IdPair(path=w2, phi=p2):
            return alpha_eq(w1, w2, env) and face_eq(p1, p2)
        case _:
            if type(t1) is not type(t2):
                return False
            subs1, subs2 = _subterms(t1), _subterms(t2)
            if not subs1 and not subs2:
                return type(t1) is type(t2)
            return len(subs1) == len(subs2) and all(
                alpha_eq(a, b, env) for a, b in zip(subs1, subs2)
            )


def path_type(a: Term, t: Term, u: Term) -> Term:
    """Non-dependent Path A t u as a degenerate PathP."""
    return PathP(fresh_name("_i"), a, t, u)


def arrow(a: Term, b: Term) -> Term:
    return Pi(fresh_name("_x"), a, b)


def times(a: Term, b: Term) -> Term:
    return Sigma(fresh_name("_x"), a, b)


def numeral(k: int) -> Term:
    t: Term = ZERO
    for _ in range(k):
        t = Suc(t)
    return t
