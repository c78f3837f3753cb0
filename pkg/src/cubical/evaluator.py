"""Weak-head evaluation and conversion checking.

Values form a nominal domain: binders carry globally fresh names and
every value supports the action of an interval substitution (``act``).
Acting on a neutral re-runs the corresponding smart constructor, so a
face map can unblock reductions; this is what makes evaluation commute
with restriction.  Partial elements (tubes, Glue parts, stuck systems)
are stored per irreducible face, each branch already evaluated under
its face substitution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

from . import syntax as S
from .face import (
    FBOT,
    FTOP,
    Face,
    FaceFormula,
    face_formula,
    face_key,
    face_merge,
    face_subst,
    fand,
    feq,
    ffaces,
    fleq,
    for_,
    fsubst_many,
)
from .interval import (
    IONE,
    IZERO,
    Interval,
    Name,
    fresh_name,
    iand,
    ineg,
    isubst_many,
    ivar,
)


class Value:
    __slots__ = ()


def _node(cls):
    return dataclass(frozen=True)(cls)


@dataclass
class Env:
    """Evaluation environment: values for variables, intervals for names."""

    vars: dict = field(default_factory=dict)
    intervals: dict = field(default_factory=dict)
    restriction: FaceFormula = FTOP

    def bind_var(self, x: Name, v: Value) -> "Env":
        return Env({**self.vars, x: v}, self.intervals, self.restriction)

    def bind_name(self, n: Name, r: Interval) -> "Env":
        return Env(self.vars, {**self.intervals, n: r}, self.restriction)

    def restrict(self, phi: FaceFormula) -> "Env":
        return Env(self.vars, self.intervals, fand(self.restriction, phi))

    def support(self) -> frozenset:
        cached = self.__dict__.get("_support")
        if cached is not None:
            return cached
        s = set(self.restriction.support())
        for v in self.vars.values():
            s |= val_support(v)
        for r in self.intervals.values():
            s |= r.support()
        out = frozenset(s)
        self.__dict__["_support"] = out
        return out

    def act(self, sub: dict) -> "Env":
        sub = {n: r for n, r in sub.items() if n in self.support()}
        if not sub:
            return self
        return Env(
            {x: act(v, sub) for x, v in self.vars.items()},
            {n: isubst_many(r, sub) for n, r in self.intervals.items()},
            fsubst_many(self.restriction, sub),
        )


EMPTY_ENV = Env()


@dataclass(frozen=True)
class Clo:
    """A term closure; instantiation evaluates the body."""

    env: Env
    x: Name
    body: S.Term

    def __call__(self, v: Value) -> Value:
        return eval_term(self.env.bind_var(self.x, v), self.body)

    def support(self) -> frozenset:
        cached = self.__dict__.get("_support")
        if cached is not None:
            return cached
        out = frozenset(
            self.env.support()
            | (S.frees(self.body)[1] - set(self.env.intervals))
        )
        object.__setattr__(self, "_support", out)
        return out


def close(env: Env, x: Name, body: S.Term) -> Clo:
    """A closure over the part of env the body actually mentions."""
    fv, fn = S.frees(body)
    trimmed = Env(
        {y: v for y, v in env.vars.items() if y in fv},
        {n: r for n, r in env.intervals.items() if n in fn},
        env.restriction,
    )
    return Clo(trimmed, x, body)


# Parts: a partial element stored per irreducible face, deterministically
# ordered.  Entries are (Face, payload...) tuples.
Parts = Tuple


def mkparts(pairs) -> Parts:
    out = {}
    for entry in pairs:
        f = entry[0]
        if f not in out:
            out[f] = tuple(entry[1:])
    return tuple((f,) + out[f] for f in sorted(out, key=face_key))


def parts_formula(parts: Parts) -> FaceFormula:
    out = FBOT
    for entry in parts:
        out = for_(out, face_formula(entry[0]))
    return out


def compose_face(sub: dict, f: Face) -> dict:
    """The substitution 'apply sub, then the face f'."""
    fs = face_subst(f)
    out = {n: isubst_many(r, fs) for n, r in sub.items()}
    for m, r in fs.items():
        if m not in out:
            out[m] = r
    return out


def act_parts(parts: Parts, sub: dict, binder: Optional[tuple] = None) -> Parts:
    """Push a substitution through a face-indexed family.

    ``binder`` renames a bound direction (old, new) inside the payloads
    without letting ``sub`` touch it.
    """
    out = []
    for entry in parts:
        f, payload = entry[0], entry[1:]
        phi = fsubst_many(face_formula(f), sub)
        for h in ffaces(phi):
            comp_sub = compose_face(sub, h)
            if binder is not None:
                comp_sub = dict(comp_sub)
                comp_sub[binder[0]] = ivar(binder[1])
            out.append((h,) + tuple(act(v, comp_sub) for v in payload))
    return mkparts(out)


def parts_at(parts: Parts, f: Face):
    """The payload of the part whose face becomes total under f, if any."""
    fs = face_subst(f)
    for entry in parts:
        if fsubst_many(face_formula(entry[0]), fs).is_top():
            return tuple(act(v, fs) for v in entry[1:])
    return None


# ---------------------------------------------------------------------------
# canonical values


@_node
class VU(Value):
    pass


@_node
class VNat(Value):
    pass


@_node
class VS1(Value):
    pass


@_node
class VPi(Value):
    dom: Value
    clo: Clo


@_node
class VSigma(Value):
    dom: Value
    clo: Clo


@_node
class VPathP(Value):
    i: Name
    line: Value
    a0: Value
    a1: Value


@_node
class VInh(Value):
    ty: Value


@_node
class VIdT(Value):
    ty: Value
    a0: Value
    a1: Value


@_node
class VGlueT(Value):
    parts: Parts  # (Face, T, equiv)
    base: Value


@_node
class VLam(Value):
    dom: Value
    clo: Clo


@_node
class VPair(Value):
    fst: Value
    snd: Value


@_node
class VZero(Value):
    pass


@_node
class VSuc(Value):
    n: Value


@_node
class VPAbs(Value):
    i: Name
    body: Value


@_node
class VGlueElem(Value):
    parts: Parts  # (Face, t)
    base: Value


@_node
class VIdPair(Value):
    path: Value
    phi: FaceFormula


@_node
class VBase(Value):
    pass


@_node
class VLoop(Value):
    r: Interval


@_node
class VHComp(Value):
    ty: Value
    i: Name
    parts: Parts
    base: Value


@_node
class VInc(Value):
    t: Value


@_node
class VSquash(Value):
    a: Value
    b: Value
    r: Interval


@_node
class VSystem(Value):
    """A system none of whose faces is total yet."""

    parts: Parts


# ---------------------------------------------------------------------------
# neutral values


@_node
class VVar(Value):
    name: Name
    ty: Value


@_node
class VApp(Value):
    fn: Value
    arg: Value


@_node
class VFst(Value):
    t: Value


@_node
class VSnd(Value):
    t: Value


@_node
class VPApp(Value):
    fn: Value
    r: Interval


@_node
class VNatRec(Value):
    motive: Value
    z: Value
    s: Value
    n: Value


@_node
class VIdJ(Value):
    motive: Value
    d: Value
    beta: Value


@_node
class VUnglue(Value):
    parts: Parts  # (Face, equiv)
    t: Value


@_node
class VS1Elim(Value):
    motive: Value
    base_case: Value
    loop_case: Value
    scrut: Value


@_node
class VInhElim(Value):
    motive: Value
    prop: Value
    fn: Value
    scrut: Value


@_node
class VCompStuck(Value):
    """comp at a Pi line or at a type that is not (yet) canonical."""

    i: Name
    line: Value
    parts: Parts
    base: Value


VUU = VU()
VNATT = VNat()
VS1T = VS1()
VZEROV = VZero()
VBASEV = VBase()

NEUTRAL_HEADS = (
    VVar,
    VApp,
    VFst,
    VSnd,
    VPApp,
    VNatRec,
    VIdJ,
    VUnglue,
    VS1Elim,
    VInhElim,
    VCompStuck,
)


def is_neutral(v: Value) -> bool:
    return isinstance(v, NEUTRAL_HEADS)


# ---------------------------------------------------------------------------
# support (free interval names) of a value, cached per object


def _parts_support(parts: Parts, binder: Optional[Name] = None) -> set:
    s: set = set()
    for entry in parts:
        s.update(n for (n, _side) in entry[0])
        for v in entry[1:]:
            s |= val_support(v)
    if binder is not None:
        s.discard(binder)
    return s


def val_support(v: Value) -> frozenset:
    cached = v.__dict__.get("_support")
    if cached is not None:
        return cached
    s: set = set()
    match v:
        case VU() | VNat() | VS1() | VZero() | VBase():
            pass
        case VPi(dom=d, clo=c) | VSigma(dom=d, clo=c) | VLam(dom=d, clo=c):
            s = set(val_support(d)) | c.support()
        case VPathP(i=i, line=line, a0=a0, a1=a1):
            s = (set(val_support(line)) - {i}) | val_support(a0) | val_support(a1)
        case VPAbs(i=i, body=b):
            s = set(val_support(b)) - {i}
        case VInh(ty=a) | VInc(t=a) | VSuc(n=a) | VFst(t=a) | VSnd(t=a):
            s = set(val_support(a))
        case VIdT(ty=a, a0=x, a1=y):
            s = set(val_support(a)) | val_support(x) | val_support(y)
        case VGlueT(parts=ps, base=b) | VGlueElem(parts=ps, base=b):
            s = _parts_support(ps) | val_support(b)
        case VPair(fst=a, snd=b):
            s = set(val_support(a)) | val_support(b)
        case VIdPair(path=w, phi=phi):
            s = set(val_support(w)) | phi.support()
        case VLoop(r=r):
            s = set(r.support())
        case VSquash(a=a, b=b, r=r):
            s = set(val_support(a)) | val_support(b) | r.support()
        case VHComp(ty=ty, i=i, parts=ps, base=b):
            s = set(val_support(ty)) | _parts_support(ps, i) | val_support(b)
        case VSystem(parts=ps):
            s = _parts_support(ps)
        case VVar(ty=ty):
            s = set(val_support(ty))
        case VApp(fn=f, arg=a):
            s = set(val_support(f)) | val_support(a)
        case VPApp(fn=f, r=r):
            s = set(val_support(f)) | r.support()
        case VNatRec(motive=m, z=z, s=st, n=n):
            s = set(val_support(m)) | val_support(z) | val_support(st) | val_support(n)
        case VIdJ(motive=m, d=d, beta=b):
            s = set(val_support(m)) | val_support(d) | val_support(b)
        case VUnglue(parts=ps, t=t):
            s = _parts_support(ps) | val_support(t)
        case VS1Elim(motive=m, base_case=b, loop_case=l, scrut=x):
            s = set(val_support(m)) | val_support(b) | val_support(l) | val_support(x)
        case VInhElim(motive=mo, prop=q, fn=f, scrut=x):
            s = set(val_support(mo)) | val_support(q) | val_support(f) | val_support(x)
        case VCompStuck(i=i, line=line, parts=ps, base=b):
            s = (set(val_support(line)) - {i}) | _parts_support(ps, i) | val_support(b)
        case _:
            raise TypeError(f"val_support: unknown value {v!r}")
    out = frozenset(s)
    object.__setattr__(v, "_support", out)
    return out


# ---------------------------------------------------------------------------
# the interval action


def act(v: Value, sub: dict) -> Value:
    if sub:
        sup = val_support(v)
        if not any(n in sup for n in sub):
            return v
        sub = {n: r for n, r in sub.items() if n in sup}
    if not sub:
        return v
    match v:
        case VU() | VNat() | VS1() | VZero() | VBase():
            return v
        case VPi(dom=d, clo=c):
            return VPi(act(d, sub), Clo(c.env.act(sub), c.x, c.body))
        case VSigma(dom=d, clo=c):
            return VSigma(act(d, sub), Clo(c.env.act(sub), c.x, c.body))
        case VLam(dom=d, clo=c):
            return VLam(act(d, sub), Clo(c.env.act(sub), c.x, c.body))
        case VPathP(i=i, line=line, a0=a0, a1=a1):
            j = fresh_name(i.hint)
            sub2 = {**sub, i: ivar(j)}
            return VPathP(j, act(line, sub2), act(a0, sub), act(a1, sub))
        case VPAbs(i=i, body=b):
            j = fresh_name(i.hint)
            return VPAbs(j, act(b, {**sub, i: ivar(j)}))
        case VInh(ty=a):
            return VInh(act(a, sub))
        case VIdT(ty=a, a0=x, a1=y):
            return VIdT(act(a, sub), act(x, sub), act(y, sub))
        case VGlueT(parts=ps, base=b):
            return make_glue_type(act_parts(ps, sub), act(b, sub))
        case VGlueElem(parts=ps, base=b):
            return make_glue_elem(act_parts(ps, sub), act(b, sub))
        case VPair(fst=a, snd=b):
            return VPair(act(a, sub), act(b, sub))
        case VSuc(n=n):
            return VSuc(act(n, sub))
        case VIdPair(path=w, phi=phi):
            return VIdPair(act(w, sub), fsubst_many(phi, sub))
        case VLoop(r=r):
            return make_loop(isubst_many(r, sub))
        case VSquash(a=a, b=b, r=r):
            return make_squash(act(a, sub), act(b, sub), isubst_many(r, sub))
        case VHComp(ty=ty, i=i, parts=ps, base=b):
            j = fresh_name(i.hint)
            return make_hcomp(
                j, act(ty, sub), act_parts(ps, sub, binder=(i, j)), act(b, sub)
            )
        case VInc(t=t):
            return VInc(act(t, sub))
        case VSystem(parts=ps):
            return make_system(act_parts(ps, sub))
        case VVar(name=x, ty=ty):
            return VVar(x, act(ty, sub))
        case VApp(fn=f, arg=a):
            return app(act(f, sub), act(a, sub))
        case VFst(t=t):
            return fstv(act(t, sub))
        case VSnd(t=t):
            return sndv(act(t, sub))
        case VPApp(fn=f, r=r):
            return papp(act(f, sub), isubst_many(r, sub))
        case VNatRec(motive=m, z=z, s=s, n=n):
            return natrec_val(act(m, sub), act(z, sub), act(s, sub), act(n, sub))
        case VIdJ(motive=m, d=d, beta=b):
            return idj_val(act(m, sub), act(d, sub), act(b, sub))
        case VUnglue(parts=ps, t=t):
            return unglue_val(act_parts(ps, sub), act(t, sub))
        case VS1Elim(motive=m, base_case=b, loop_case=l, scrut=x):
            return s1elim_val(act(m, sub), act(b, sub), act(l, sub), act(x, sub))
        case VInhElim(motive=mo, prop=q, fn=f, scrut=x):
            return inhelim_val(act(mo, sub), act(q, sub), act(f, sub), act(x, sub))
        case VCompStuck(i=i, line=line, parts=ps, base=b):
            from . import kan

            j = fresh_name(i.hint)
            return kan.comp(
                j,
                act(line, {**sub, i: ivar(j)}),
                act_parts(ps, sub, binder=(i, j)),
                act(b, sub),
            )
    raise TypeError(f"act: unknown value {v!r}")


def act_face(v: Value, f: Face) -> Value:
    return act(v, face_subst(f))


# ---------------------------------------------------------------------------
# smart constructors / eliminators


def make_system(parts: Parts) -> Value:
    for entry in parts:
        if not entry[0]:
            return entry[1]
    return VSystem(parts)


def make_glue_type(parts: Parts, base: Value) -> Value:
    for entry in parts:
        if not entry[0]:
            return entry[1]
    return VGlueT(parts, base)


def make_glue_elem(parts: Parts, base: Value) -> Value:
    for entry in parts:
        if not entry[0]:
            return entry[1]
    return VGlueElem(parts, base)


def make_loop(r: Interval) -> Value:
    if r.is_const():
        return VBASEV
    return VLoop(r)


def make_squash(a: Value, b: Value, r: Interval) -> Value:
    if r.is_zero():
        return a
    if r.is_one():
        return b
    return VSquash(a, b, r)


def make_hcomp(i: Name, ty: Value, parts: Parts, base: Value) -> Value:
    for entry in parts:
        if not entry[0]:
            return act(entry[1], {i: IONE})
    return VHComp(ty, i, parts, base)


def app(f: Value, a: Value) -> Value:
    match f:
        case VLam(clo=c):
            return c(a)
        case VCompStuck(line=VPi()):
            from . import kan

            return kan.app_comp_pi(f, a)
        case VSystem(parts=ps):
            return make_system(
                mkparts((h, app(v, act_face(a, h))) for (h, v) in ps)
            )
        case _ if is_neutral(f):
            return VApp(f, a)
    raise TypeError(f"app: not a function: {f!r}")


def papp(p: Value, r: Interval) -> Value:
    match p:
        case VPAbs(i=i, body=b):
            return act(b, {i: r})
        case VSystem(parts=ps):
            return make_system(
                mkparts((h, papp(v, isubst_many(r, face_subst(h)))) for (h, v) in ps)
            )
        case _ if is_neutral(p):
            if r.is_const():
                ty = infer_type(p)
                if isinstance(ty, VPathP):
                    return ty.a0 if r.is_zero() else ty.a1
            return VPApp(p, r)
    raise TypeError(f"papp: not a path: {p!r}")


def fstv(t: Value) -> Value:
    match t:
        case VPair(fst=a):
            return a
        case VSystem(parts=ps):
            return make_system(mkparts((h, fstv(v)) for (h, v) in ps))
        case _ if is_neutral(t):
            return VFst(t)
    raise TypeError(f"fst: not a pair: {t!r}")


def sndv(t: Value) -> Value:
    match t:
        case VPair(snd=b):
            return b
        case VSystem(parts=ps):
            return make_system(mkparts((h, sndv(v)) for (h, v) in ps))
        case _ if is_neutral(t):
            return VSnd(t)
    raise TypeError(f"snd: not a pair: {t!r}")


def natrec_val(m: Value, z: Value, s: Value, n: Value) -> Value:
    match n:
        case VZero():
            return z
        case VSuc(n=k):
            return app(app(s, k), natrec_val(m, z, s, k))
        case VSystem(parts=ps):
            return make_system(
                mkparts(
                    (h, natrec_val(act_face(m, h), act_face(z, h), act_face(s, h), v))
                    for (h, v) in ps
                )
            )
        case _ if is_neutral(n):
            return VNatRec(m, z, s, n)
    raise TypeError(f"natrec: not a numeral: {n!r}")


def idj_val(m: Value, d: Value, beta: Value) -> Value:
    match beta:
        case VIdPair():
            from . import kan

            return kan.jreduce(m, d, beta)
        case VSystem(parts=ps):
            return make_system(
                mkparts(
                    (h, idj_val(act_face(m, h), act_face(d, h), v)) for (h, v) in ps
                )
            )
        case _ if is_neutral(beta):
            return VIdJ(m, d, beta)
    raise TypeError(f"idJ: bad target {beta!r}")


def unglue_val(parts: Parts, t: Value) -> Value:
    for entry in parts:
        if not entry[0]:
            return app(fstv(entry[1]), t)
    match t:
        case VGlueElem(base=b):
            return b
        case VSystem(parts=ps):
            return make_system(
                mkparts(
                    (h, unglue_val(act_parts(parts, face_subst(h)), v)) for (h, v) in ps
                )
            )
        case _ if is_neutral(t):
            return VUnglue(parts, t)
    raise TypeError(f"unglue: bad argument {t!r}")


def s1elim_val(m: Value, b: Value, l: Value, x: Value) -> Value:
    match x:
        case VBase():
            return b
        case VLoop(r=r):
            return papp(l, r)
        case VHComp(i=i, parts=ps, base=u0):
            from . import kan

            v = kan.fill_hcomp(VS1T, i, ps, u0)
            line = app(m, v)
            tube = mkparts(
                (h, s1elim_val(act_face(m, h), act_face(b, h), act_face(l, h), w))
                for (h, w) in ps
            )
            return kan.comp(i, line, tube, s1elim_val(m, b, l, u0))
        case VSystem(parts=ps):
            return make_system(
                mkparts(
                    (
                        h,
                        s1elim_val(
                            act_face(m, h), act_face(b, h), act_face(l, h), w
                        ),
                    )
                    for (h, w) in ps
                )
            )
        case _ if is_neutral(x):
            return VS1Elim(m, b, l, x)
    raise TypeError(f"s1elim: bad scrutinee {x!r}")


def inhelim_val(mo: Value, q: Value, f: Value, x: Value) -> Value:
    match x:
        case VInc(t=a):
            return app(f, a)
        case VSquash(a=u0, b=u1, r=r):
            g0 = inhelim_val(mo, q, f, u0)
            g1 = inhelim_val(mo, q, f, u1)
            return papp(app(app(q, g0), g1), r)
        case VHComp(i=i, parts=ps, base=u0):
            from . import kan

            tube = mkparts(
                (
                    h,
                    inhelim_val(
                        act_face(mo, h), act_face(q, h), act_face(f, h), w
                    ),
                )
                for (h, w) in ps
            )
            return kan.comp(i, mo, tube, inhelim_val(mo, q, f, u0))
        case VSystem(parts=ps):
            return make_system(
                mkparts(
                    (
                        h,
                        inhelim_val(
                            act_face(mo, h), act_face(q, h), act_face(f, h), w
                        ),
                    )
                    for (h, w) in ps
                )
            )
        case _ if is_neutral(x):
            return VInhElim(mo, q, f, x)
    raise TypeError(f"inhelim: bad scrutinee {x!r}")


# ---------------------------------------------------------------------------
# type of a neutral


def infer_type(v: Value) -> Value:
    match v:
        case VVar(ty=ty):
            return ty
        case VApp(fn=f, arg=a):
            ty = infer_type(f)
            assert isinstance(ty, VPi), ty
            return ty.clo(a)
        case VFst(t=t):
            ty = infer_type(t)
            assert isinstance(ty, VSigma), ty
            return ty.dom
        case VSnd(t=t):
            ty = infer_type(t)
            assert isinstance(ty, VSigma), ty
            return ty.clo(fstv(t))
        case VPApp(fn=f, r=r):
            ty = infer_type(f)
            assert isinstance(ty, VPathP), ty
            return act(ty.line, {ty.i: r})
        case VNatRec(motive=m, n=n):
            return app(m, n)
        case VIdJ(motive=m, beta=b):
            ty = infer_type(b)
            assert isinstance(ty, VIdT), ty
            return app(app(m, ty.a1), b)
        case VUnglue(t=t):
            ty = infer_type(t)
            assert isinstance(ty, VGlueT), ty
            return ty.base
        case VS1Elim(motive=m, scrut=x):
            return app(m, x)
        case VInhElim(motive=mo):
            return mo
        case VCompStuck(i=i, line=line):
            return act(line, {i: IONE})
    raise TypeError(f"infer_type: not a typed neutral: {v!r}")


# ---------------------------------------------------------------------------
# evaluation


def eval_interval(env: Env, r: Interval) -> Interval:
    return isubst_many(r, env.intervals)


def eval_face(env: Env, phi: FaceFormula) -> FaceFormula:
    return fsubst_many(phi, env.intervals)


def _face_true(env: Env, phi: FaceFormula) -> bool:
    """Is phi = 1 under the environment's restriction?"""
    if phi.is_top():
        return True
    psi = env.restriction
    return not psi.is_bot() and fand(psi, phi) == psi


def eval_branches(env: Env, branches, i: Optional[Name] = None, i_fresh: Optional[Name] = None):
    """Evaluate system branches per irreducible face.

    Returns either ("total", value-thunk-args) when some branch formula is
    already true, or ("parts", parts).
    """
    collected = []
    for br in branches:
        phi = eval_face(env, br[0])
        if _face_true(env, phi):
            return ("total", br)
        for f in ffaces(phi):
            env_f = env.act(face_subst(f))
            if i is not None:
                env_f = env_f.bind_name(i, ivar(i_fresh))
            collected.append((f,) + tuple(eval_term(env_f, t) for t in br[1:]))
    return ("parts", mkparts(collected))


def eval_term(env: Env, t: S.Term) -> Value:
    match t:
        case S.Var(name=x):
            try:
                return env.vars[x]
            except KeyError:
                raise KeyError(f"unbound variable {x!r} during evaluation") from None
        case S.Pi(x=x, dom=dom, cod=cod):
            return VPi(eval_term(env, dom), close(env, x, cod))
        case S.Sigma(x=x, dom=dom, cod=cod):
            return VSigma(eval_term(env, dom), close(env, x, cod))
        case S.Lam(x=x, dom=dom, body=body):
            return VLam(eval_term(env, dom), close(env, x, body))
        case S.App(fn=fn, arg=arg):
            return app(eval_term(env, fn), eval_term(env, arg))
        case S.Pair(fst=a, snd=b):
            return VPair(eval_term(env, a), eval_term(env, b))
        case S.Fst(t=u):
            return fstv(eval_term(env, u))
        case S.Snd(t=u):
            return sndv(eval_term(env, u))
        case S.Nat():
            return VNATT
        case S.Zero():
            return VZEROV
        case S.Suc(n=n):
            return VSuc(eval_term(env, n))
        case S.NatRec(motive=m, z=z, s=s, n=n):
            return natrec_val(
                eval_term(env, m), eval_term(env, z), eval_term(env, s), eval_term(env, n)
            )
        case S.U():
            return VUU
        case S.PathP(i=i, line=line, a0=a0, a1=a1):
            j = fresh_name(i.hint)
            return VPathP(
                j,
                eval_term(env.bind_name(i, ivar(j)), line),
                eval_term(env, a0),
                eval_term(env, a1),
            )
        case S.PAbs(i=i, body=body):
            j = fresh_name(i.hint)
            return VPAbs(j, eval_term(env.bind_name(i, ivar(j)), body))
        case S.PApp(fn=fn, arg=r):
            return papp(eval_term(env, fn), eval_interval(env, r))
        case S.System(branches=brs):
            res = eval_branches(env, brs)
            if res[0] == "total":
                return eval_term(env, res[1][1])
            return make_system(res[1])
        case S.Comp(i=i, line=line, branches=brs, base=base):
            from . import kan

            j = fresh_name(i.hint)
            res = eval_branches(env, brs, i=i, i_fresh=j)
            if res[0] == "total":
                return eval_term(env.bind_name(i, IONE), res[1][1])
            line_v = eval_term(env.bind_name(i, ivar(j)), line)
            return kan.comp(j, line_v, res[1], eval_term(env, base))
        case S.GlueT(branches=brs, base=base):
            res = eval_branches(env, brs)
            if res[0] == "total":
                return eval_term(env, res[1][1])
            return make_glue_type(res[1], eval_term(env, base))
        case S.GlueElem(branches=brs, base=base):
            res = eval_branches(env, brs)
            if res[0] == "total":
                return eval_term(env, res[1][1])
            return make_glue_elem(res[1], eval_term(env, base))
        case S.Unglue(branches=brs, t=u):
            res = eval_branches(env, brs)
            if res[0] == "total":
                equiv = eval_term(env, res[1][1])
                return app(fstv(equiv), eval_term(env, u))
            return unglue_val(res[1], eval_term(env, u))
        case S.IdT(ty=a, a0=x, a1=y):
            return VIdT(eval_term(env, a), eval_term(env, x), eval_term(env, y))
        case S.IdPair(path=w, phi=phi):
            return VIdPair(eval_term(env, w), eval_face(env, phi))
        case S.IdJ(motive=m, d=d, beta=b):
            return idj_val(eval_term(env, m), eval_term(env, d), eval_term(env, b))
        case S.S1():
            return VS1T
        case S.Base():
            return VBASEV
        case S.Loop(r=r):
            return make_loop(eval_interval(env, r))
        case S.HComp(ty=ty, i=i, branches=brs, base=base):
            j = fresh_name(i.hint)
            res = eval_branches(env, brs, i=i, i_fresh=j)
            if res[0] == "total":
                return eval_term(env.bind_name(i, IONE), res[1][1])
            return make_hcomp(j, eval_term(env, ty), res[1], eval_term(env, base))
        case S.Inh(ty=a):
            return VInh(eval_term(env, a))
        case S.Inc(t=u):
            return VInc(eval_term(env, u))
        case S.Squash(a=a, b=b, r=r):
            return make_squash(
                eval_term(env, a), eval_term(env, b), eval_interval(env, r)
            )
        case S.S1Elim(motive=m, base_case=b, loop_case=l, scrut=x):
            return s1elim_val(
                eval_term(env, m), eval_term(env, b), eval_term(env, l), eval_term(env, x)
            )
        case S.InhElim(motive=mo, prop=q, fn=f, scrut=x):
            return inhelim_val(
                eval_term(env, mo), eval_term(env, q), eval_term(env, f), eval_term(env, x)
            )
    raise TypeError(f"eval: unknown term {t!r}")


# ---------------------------------------------------------------------------
# conversion


def ieq_mod(psi: FaceFormula, r: Interval, s: Interval) -> bool:
    """Equality in the interval algebra under the congruence of psi."""
    if r == s:
        return True
    return all(
        isubst_many(r, face_subst(f)) == isubst_many(s, face_subst(f))
        for f in ffaces(psi)
    )


def feq_mod(psi: FaceFormula, a: FaceFormula, b: FaceFormula) -> bool:
    return fand(psi, a) == fand(psi, b)


def fresh_var(hint: str, ty: Value) -> VVar:
    return VVar(fresh_name(hint), ty)


def conv(ty: Value, v: Value, w: Value, psi: FaceFormula = FTOP) -> bool:
    """Type-directed judgmental equality under the restriction psi."""
    if psi.is_bot():
        return True
    match ty:
        case VPi(dom=dom, clo=clo):
            x = fresh_var(clo.x.hint, dom)
            return conv(clo(x), app(v, x), app(w, x), psi)
        case VSigma(dom=dom, clo=clo):
            v1, w1 = fstv(v), fstv(w)
            return conv(dom, v1, w1, psi) and conv(clo(v1), sndv(v), sndv(w), psi)
        case VPathP(i=i, line=line, a0=a0, a1=a1):
            k = fresh_name(i.hint)
            return conv(act(line, {i: ivar(k)}), papp(v, ivar(k)), papp(w, ivar(k)), psi)
        case VU():
            return convtype(v, w, psi)
        case VGlueT(parts=ps, base=base):
            eparts = mkparts((f, e) for (f, t, e) in ps)
            if not conv(base, unglue_val(eparts, v), unglue_val(eparts, w), psi):
                return False
            for (f, tpart, _e) in ps:
                fs = face_subst(f)
                if not conv(
                    tpart, act(v, fs), act(w, fs), fsubst_many(psi, fs)
                ):
                    return False
            return True
        case VIdT(ty=a):
            if isinstance(v, VIdPair) and isinstance(w, VIdPair):
                k = fresh_name("i")
                if feq_mod(psi, v.phi, w.phi) and conv(
                    a, papp(v.path, ivar(k)), papp(w.path, ivar(k)), psi
                ):
                    return True
                return _conv_by_faces(ty, v, w, psi)
            return conv_generic(v, w, psi)
        case VSystem(parts=ps):
            return all(
                conv(
                    tyf,
                    act_face(v, f),
                    act_face(w, f),
                    fsubst_many(psi, face_subst(f)),
                )
                for (f, tyf) in ps
            )
        case _:
            return conv_generic(v, w, psi)


def _conv_by_faces(ty, v, w, psi) -> bool:
    if psi.is_top():
        return False
    return all(
        conv(act_face(ty, f), act_face(v, f), act_face(w, f), FTOP)
        for f in ffaces(psi)
    )


def conv_generic(v: Value, w: Value, psi: FaceFormula = FTOP) -> bool:
    """Structural comparison used where no type directs the equality."""
    if psi.is_bot():
        return True
    if v is w:
        return True
    if _conv_struct(v, w, psi):
        return True
    if not psi.is_top():
        return all(
            conv_generic(act_face(v, f), act_face(w, f), FTOP) for f in ffaces(psi)
        )
    return False


def _parts_conv(ps1: Parts, ps2: Parts, psi, binder1: Optional[Name] = None, binder2: Optional[Name] = None) -> bool:
    if len(ps1) != len(ps2):
        return False
    for e1, e2 in zip(ps1, ps2):
        if e1[0] != e2[0] or len(e1) != len(e2):
            return False
        psi_f = fsubst_many(psi, face_subst(e1[0]))
        for v1, v2 in zip(e1[1:], e2[1:]):
            if binder1 is not None:
                k = fresh_name(binder1.hint)
                v1 = act(v1, {binder1: ivar(k)})
                v2 = act(v2, {binder2: ivar(k)})
            if not conv_generic(v1, v2, psi_f):
                return False
    return True


def _conv_struct(v: Value, w: Value, psi) -> bool:
    match v, w:
        case (VU(), VU()) | (VNat(), VNat()) | (VS1(), VS1()) | (VZero(), VZero()) | (
            VBase(),
            VBase(),
        ):
            return True
        case VSuc(n=a), VSuc(n=b):
            return conv_generic(a, b, psi)
        case VVar(name=x), VVar(name=y):
            return x == y
        case VApp(fn=f1, arg=a1), VApp(fn=f2, arg=a2):
            return conv_generic(f1, f2, psi) and conv_generic(a1, a2, psi)
        case VFst(t=a), VFst(t=b):
            return conv_generic(a, b, psi)
        case VSnd(t=a), VSnd(t=b):
            return conv_generic(a, b, psi)
        case VPApp(fn=f1, r=r1), VPApp(fn=f2, r=r2):
            return conv_generic(f1, f2, psi) and ieq_mod(psi, r1, r2)
        case VNatRec(motive=m1, z=z1, s=s1, n=n1), VNatRec(motive=m2, z=z2, s=s2, n=n2):
            return (
                conv_generic(m1, m2, psi)
                and conv_generic(z1, z2, psi)
                and conv_generic(s1, s2, psi)
                and conv_generic(n1, n2, psi)
            )
        case VIdJ(motive=m1, d=d1, beta=b1), VIdJ(motive=m2, d=d2, beta=b2):
            return (
                conv_generic(m1, m2, psi)
                and conv_generic(d1, d2, psi)
                and conv_generic(b1, b2, psi)
            )
        case VIdPair(path=w1, phi=p1), VIdPair(path=w2, phi=p2):
            return feq_mod(psi, p1, p2) and conv_generic(w1, w2, psi)
        case VUnglue(t=t1), VUnglue(t=t2):
            return conv_generic(t1, t2, psi)
        case VS1Elim(motive=m1, base_case=b1, loop_case=l1, scrut=x1), VS1Elim(
            motive=m2, base_case=b2, loop_case=l2, scrut=x2
        ):
            return (
                conv_generic(m1, m2, psi)
                and conv_generic(b1, b2, psi)
                and conv_generic(l1, l2, psi)
                and conv_generic(x1, x2, psi)
            )
        case VInhElim(motive=mo1, prop=q1, fn=f1, scrut=x1), VInhElim(
            motive=mo2, prop=q2, fn=f2, scrut=x2
        ):
            return (
                conv_generic(mo1, mo2, psi)
                and conv_generic(q1, q2, psi)
                and conv_generic(f1, f2, psi)
                and conv_generic(x1, x2, psi)
            )
        case VCompStuck(i=i1, line=l1, parts=p1, base=b1), VCompStuck(
            i=i2, line=l2, parts=p2, base=b2
        ):
            k = fresh_name(i1.hint)
            if not conv_generic(act(l1, {i1: ivar(k)}), act(l2, {i2: ivar(k)}), psi):
                return False
            return _parts_conv(p1, p2, psi, i1, i2) and conv_generic(b1, b2, psi)
        case VHComp(ty=t1, i=i1, parts=p1, base=b1), VHComp(
            ty=t2, i=i2, parts=p2, base=b2
        ):
            return (
                conv_generic(t1, t2, psi)
                and _parts_conv(p1, p2, psi, i1, i2)
                and conv_generic(b1, b2, psi)
            )
        case VLoop(r=r1), VLoop(r=r2):
            return ieq_mod(psi, r1, r2)
        case VInc(t=a), VInc(t=b):
            return conv_generic(a, b, psi)
        case VSquash(a=a1, b=b1, r=r1), VSquash(a=a2, b=b2, r=r2):
            return (
                conv_generic(a1, a2, psi)
                and conv_generic(b1, b2, psi)
                and ieq_mod(psi, r1, r2)
            )
        case VPair(fst=a1, snd=b1), VPair(fst=a2, snd=b2):
            return conv_generic(a1, a2, psi) and conv_generic(b1, b2, psi)
        case VGlueElem(parts=p1, base=b1), VGlueElem(parts=p2, base=b2):
            return _parts_conv(p1, p2, psi) and conv_generic(b1, b2, psi)
        case VSystem(parts=p1), VSystem(parts=p2):
            if _parts_conv(p1, p2, psi):
                return True
            return False
        case VSystem(parts=p1), _:
            return all(
                conv_generic(u, act_face(w, f), fsubst_many(psi, face_subst(f)))
                for (f, u) in p1
            )
        case _, VSystem(parts=p2):
            return all(
                conv_generic(act_face(v, f), u, fsubst_many(psi, face_subst(f)))
                for (f, u) in p2
            )
        case (VPi(dom=d1, clo=c1), VPi(dom=d2, clo=c2)) | (
            VSigma(dom=d1, clo=c1),
            VSigma(dom=d2, clo=c2),
        ):
            if type(v) is not type(w) or not conv_generic(d1, d2, psi):
                return False
            x = fresh_var(c1.x.hint, d1)
            return conv_generic(c1(x), c2(x), psi)
        case VPathP(i=i1, line=l1, a0=a01, a1=a11), VPathP(i=i2, line=l2, a0=a02, a1=a12):
            k = fresh_name(i1.hint)
            return (
                conv_generic(act(l1, {i1: ivar(k)}), act(l2, {i2: ivar(k)}), psi)
                and conv_generic(a01, a02, psi)
                and conv_generic(a11, a12, psi)
            )
        case VInh(ty=a), VInh(ty=b):
            return conv_generic(a, b, psi)
        case VIdT(ty=a1, a0=x1, a1=y1), VIdT(ty=a2, a0=x2, a1=y2):
            return (
                conv_generic(a1, a2, psi)
                and conv_generic(x1, x2, psi)
                and conv_generic(y1, y2, psi)
            )
        case VGlueT(parts=p1, base=b1), VGlueT(parts=p2, base=b2):
            return conv_generic(b1, b2, psi) and _parts_conv(p1, p2, psi)
    # eta: a canonical introduction against a neutral (or a stuck comp at Pi)
    if isinstance(v, VLam) or isinstance(w, VLam):
        dom = v.dom if isinstance(v, VLam) else w.dom
        x = fresh_var("x", dom)
        return conv_generic(app(v, x), app(w, x), psi)
    if isinstance(v, VPAbs) or isinstance(w, VPAbs):
        k = fresh_name("i")
        try:
            return conv_generic(papp(v, ivar(k)), papp(w, ivar(k)), psi)
        except TypeError:
            return False
    if isinstance(v, VPair) or isinstance(w, VPair):
        try:
            return conv_generic(fstv(v), fstv(w), psi) and conv_generic(
                sndv(v), sndv(w), psi
            )
        except TypeError:
            return False
    if isinstance(v, VGlueElem) or isinstance(w, VGlueElem):
        ge, other = (v, w) if isinstance(v, VGlueElem) else (w, v)
        if not all(
            conv_generic(t, act_face(other, f), fsubst_many(psi, face_subst(f)))
            for (f, t) in ge.parts
        ):
            return False
        # compare the underlying total parts via unglue when typable
        try:
            oty = infer_type(other)
        except TypeError:
            return False
        if isinstance(oty, VGlueT):
            es = mkparts((f, e) for (f, _t, e) in oty.parts)
            return conv_generic(ge.base, unglue_val(es, other), psi)
        return False
    return False


def convtype(v: Value, w: Value, psi: FaceFormula = FTOP) -> bool:
    """Equality of types (values of the universe)."""
    return conv_generic(v, w, psi)
