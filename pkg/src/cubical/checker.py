"""Bidirectional type checking.

Introductions check, eliminations infer, and checking under a
restriction case-splits over its irreducible faces, each face applied
to context, term, and type as an honest substitution.  Conversion is
delegated to the evaluator with the accumulated restriction in force.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Tuple

from . import prelude
from . import syntax as S
from .evaluator import (
    Clo,
    Env,
    VGlueT,
    VIdPair,
    VIdT,
    VInh,
    VNATT,
    VNat,
    VPAbs,
    VPathP,
    VPi,
    VS1,
    VS1T,
    VSigma,
    VU,
    VUU,
    VVar,
    Value,
    act,
    app,
    conv,
    convtype,
    eval_face,
    eval_interval,
    eval_term,
    fstv,
    papp,
    parts_formula,
    sndv,
)
from .face import (
    FBOT,
    FTOP,
    FaceFormula,
    face_subst,
    fand,
    feq,
    ffaces,
    for_,
)
from .interval import IONE, IZERO, Interval, Name, fresh_name, ivar


class ErrorKind(enum.Enum):
    UnboundSymbol = "UnboundSymbol"
    Mismatch = "Mismatch"
    NotAFunction = "NotAFunction"
    NotASigma = "NotASigma"
    NotAPath = "NotAPath"
    SystemNotCompatible = "SystemNotCompatible"
    SystemNotCovering = "SystemNotCovering"
    FaceConditionFailed = "FaceConditionFailed"
    GlueShapeError = "GlueShapeError"
    IdShapeError = "IdShapeError"
    UniverseError = "UniverseError"


class CubicalTypeError(Exception):
    def __init__(self, kind: ErrorKind, message: str, restriction: FaceFormula = FTOP,
                 span: Optional[tuple] = None):
        super().__init__(message)
        self.kind = kind
        self.message = message
        self.restriction = restriction
        self.span = span

    def diagnostic(self, path: str = "<input>") -> str:
        line, col = self.span if self.span else (0, 0)
        return f"{path}:{line}:{col}: error: {self.kind.value}: {self.message}"


@dataclass
class Context:
    """Typing context; types and the evaluation environment move together."""

    env: Env = field(default_factory=Env)
    types: dict = field(default_factory=dict)  # Name -> Value
    names: frozenset = frozenset()  # interval names in scope
    scope: dict = field(default_factory=dict)  # surface name -> Name (definitions)

    @property
    def restriction(self) -> FaceFormula:
        return self.env.restriction

    def bind_var(self, x: Name, ty: Value) -> "Context":
        return Context(
            self.env.bind_var(x, VVar(x, ty)),
            {**self.types, x: ty},
            self.names,
            self.scope,
        )

    def bind_def(self, surface: str, x: Name, ty: Value, v: Value) -> "Context":
        return Context(
            self.env.bind_var(x, v),
            {**self.types, x: ty},
            self.names,
            {**self.scope, surface: x},
        )

    def bind_name(self, i: Name) -> "Context":
        return Context(
            self.env.bind_name(i, ivar(i)),
            self.types,
            self.names | {i},
            self.scope,
        )

    def restrict(self, phi: FaceFormula) -> "Context":
        return Context(self.env.restrict(phi), self.types, self.names, self.scope)

    def act_face(self, f: frozenset) -> "Context":
        sub = face_subst(f)
        return Context(
            self.env.act(sub),
            {x: act(ty, sub) for x, ty in self.types.items()},
            self.names - {n for (n, _s) in f},
            self.scope,
        )

    def instances(self, phi: FaceFormula):
        """Face-instance contexts for judgments under the restriction phi."""
        for f in ffaces(phi):
            yield f, self.act_face(f)


def ctxrestriction(ctx: Context) -> FaceFormula:
    return ctx.restriction


def _err(kind, msg, ctx):
    raise CubicalTypeError(kind, msg, ctx.restriction)


def check_interval(ctx: Context, r: Interval) -> Interval:
    loose = r.support() - set(ctx.names)
    if loose:
        _err(ErrorKind.UnboundSymbol,
             f"interval name not in scope: {sorted(n.hint for n in loose)}", ctx)
    return eval_interval(ctx.env, r)


def check_face(ctx: Context, phi: FaceFormula) -> FaceFormula:
    loose = phi.support() - set(ctx.names)
    if loose:
        _err(ErrorKind.UnboundSymbol,
             f"face name not in scope: {sorted(n.hint for n in loose)}", ctx)
    return eval_face(ctx.env, phi)


def _const_closure(v: Value) -> Clo:
    h = fresh_name("T")
    return Clo(Env(vars={h: v}), fresh_name("_"), S.Var(h))


# ---------------------------------------------------------------------------
# templates for expected types of eliminator arguments


_P = fresh_name("P")
_M = fresh_name("m")
_NATREC_STEP = S.Pi(
    _M,
    S.NAT,
    S.arrow(S.App(S.Var(_P), S.Var(_M)), S.App(S.Var(_P), S.Suc(S.Var(_M)))),
)

_A2, _a2, _X2 = fresh_name("A"), fresh_name("a"), fresh_name("x")
_IDJ_MOTIVE = S.Pi(
    _X2,
    S.Var(_A2),
    S.arrow(S.IdT(S.Var(_A2), S.Var(_a2), S.Var(_X2)), S.UU),
)

_C3, _B3, _i3 = fresh_name("C"), fresh_name("b"), fresh_name("i")
_LOOP_CASE = S.PathP(_i3, S.App(S.Var(_C3), S.Loop(ivar(_i3))), S.Var(_B3), S.Var(_B3))

_B4, _x4, _y4 = fresh_name("B"), fresh_name("x"), fresh_name("y")
_PROP_TMPL = S.Pi(
    _x4,
    S.Var(_B4),
    S.Pi(_y4, S.Var(_B4), S.path_type(S.Var(_B4), S.Var(_x4), S.Var(_y4))),
)


def natrec_step_type(p: Value) -> Value:
    return eval_term(Env(vars={_P: p}), _NATREC_STEP)


def idj_motive_type(a: Value, a0: Value) -> Value:
    return eval_term(Env(vars={_A2: a, _a2: a0}), _IDJ_MOTIVE)


def loop_case_type(c: Value, b: Value) -> Value:
    return eval_term(Env(vars={_C3: c, _B3: b}), _LOOP_CASE)


def prop_type(b: Value) -> Value:
    return eval_term(Env(vars={_B4: b}), _PROP_TMPL)


def idrefl(a: Value) -> Value:
    return VIdPair(VPAbs(fresh_name("i"), a), FTOP)


# ---------------------------------------------------------------------------
# the checker proper


def checktype(ctx: Context, t: S.Term) -> Value:
    """Check that t is a type and return its value."""
    match t:
        case S.U():
            return VUU
        case S.Pi(x=x, dom=dom, cod=cod) | S.Sigma(x=x, dom=dom, cod=cod):
            dv = checktype(ctx, dom)
            checktype(ctx.bind_var(x, dv), cod)
            return eval_term(ctx.env, t)
        case S.PathP(i=i, line=line, a0=a0, a1=a1):
            ctx2 = ctx.bind_name(i)
            checktype(ctx2, line)
            line_v = eval_term(ctx2.env, line)
            check(ctx, a0, act(line_v, {i: IZERO}))
            check(ctx, a1, act(line_v, {i: IONE}))
            return eval_term(ctx.env, t)
        case S.Nat() | S.S1():
            return eval_term(ctx.env, t)
        case S.Inh(ty=a):
            checktype(ctx, a)
            return eval_term(ctx.env, t)
        case S.IdT(ty=a, a0=x, a1=y):
            av = checktype(ctx, a)
            check(ctx, x, av)
            check(ctx, y, av)
            return eval_term(ctx.env, t)
        case S.GlueT(branches=brs, base=base):
            av = checktype(ctx, base)
            _check_glue_branches(ctx, brs, av)
            return eval_term(ctx.env, t)
        case S.System(branches=brs):
            _check_system_covering(ctx, [phi for (phi, _u) in brs])
            for (phi, a) in brs:
                phiv = check_face(ctx, phi)
                for f, inst in ctx.instances(phiv):
                    checktype(inst, S.tsubst_face(a, face_subst(f)))
            _check_system_compat(ctx, brs, None)
            return eval_term(ctx.env, t)
        case _:
            check(ctx, t, VUU)
            return eval_term(ctx.env, t)


def _check_glue_branches(ctx: Context, brs, av: Value):
    for (phi, tpart, epart) in brs:
        phiv = check_face(ctx, phi)
        for f, inst in ctx.instances(phiv):
            sub = face_subst(f)
            tv = checktype(inst, S.tsubst_face(tpart, sub))
            eq_ty = prelude.equiv_type(tv, act(av, sub))
            check(inst, S.tsubst_face(epart, sub), eq_ty)
    for a in range(len(brs)):
        for b in range(a + 1, len(brs)):
            phi_a = check_face(ctx, brs[a][0])
            phi_b = check_face(ctx, brs[b][0])
            for f, inst in ctx.instances(fand(phi_a, phi_b)):
                sub = face_subst(f)
                t1 = eval_term(inst.env, S.tsubst_face(brs[a][1], sub))
                t2 = eval_term(inst.env, S.tsubst_face(brs[b][1], sub))
                if not convtype(t1, t2, inst.restriction):
                    _err(ErrorKind.SystemNotCompatible,
                         "Glue parts disagree on overlapping faces", inst)
                e1 = eval_term(inst.env, S.tsubst_face(brs[a][2], sub))
                e2 = eval_term(inst.env, S.tsubst_face(brs[b][2], sub))
                if not conv(prelude.equiv_type(t1, act(av, sub)), e1, e2,
                            inst.restriction):
                    _err(ErrorKind.SystemNotCompatible,
                         "Glue equivalences disagree on overlapping faces", inst)


def _check_system_covering(ctx: Context, phis):
    total = FBOT
    for phi in phis:
        total = for_(total, check_face(ctx, phi))
    psi = ctx.restriction
    if fand(psi, total) != psi:
        _err(ErrorKind.SystemNotCovering,
             f"system extent {total} does not cover the context restriction {psi}",
             ctx)


def _check_system_compat(ctx: Context, brs, ty: Optional[Value]):
    for a in range(len(brs)):
        for b in range(a + 1, len(brs)):
            overlap = fand(check_face(ctx, brs[a][0]), check_face(ctx, brs[b][0]))
            for f, inst in ctx.instances(overlap):
                sub = face_subst(f)
                v1 = eval_term(inst.env, S.tsubst_face(brs[a][1], sub))
                v2 = eval_term(inst.env, S.tsubst_face(brs[b][1], sub))
                ok = (
                    convtype(v1, v2, inst.restriction)
                    if ty is None
                    else conv(act(ty, sub), v1, v2, inst.restriction)
                )
                if not ok:
                    _err(ErrorKind.SystemNotCompatible,
                         "system branches disagree on overlapping faces", inst)


def _check_tube(ctx: Context, i: Name, brs, line_v: Value, base_v: Value,
                kind_msg: str):
    """Check a comp/hcomp tube: each branch under its faces, adjacency at i=0."""
    for (phi, u) in brs:
        phiv = check_face(ctx, phi)
        for f, inst in ctx.instances(phiv):
            sub = face_subst(f)
            inst_i = inst.bind_name(i)
            u_f = S.tsubst_face(u, sub)
            check(inst_i, u_f, act(line_v, sub))
            u0 = eval_term(inst_i.env.bind_name(i, IZERO), u_f)
            if not conv(act(line_v, {**sub, i: IZERO}), act(base_v, sub), u0,
                        inst.restriction):
                _err(ErrorKind.FaceConditionFailed,
                     f"{kind_msg}: base disagrees with the tube at 0", inst)
    for a in range(len(brs)):
        for b in range(a + 1, len(brs)):
            overlap = fand(check_face(ctx, brs[a][0]), check_face(ctx, brs[b][0]))
            for f, inst in ctx.instances(overlap):
                sub = face_subst(f)
                inst_i = inst.bind_name(i)
                v1 = eval_term(inst_i.env, S.tsubst_face(brs[a][1], sub))
                v2 = eval_term(inst_i.env, S.tsubst_face(brs[b][1], sub))
                if not conv(act(line_v, sub), v1, v2, inst.restriction):
                    _err(ErrorKind.SystemNotCompatible,
                         f"{kind_msg}: tube branches disagree on overlapping faces",
                         inst)


def infer(ctx: Context, t: S.Term) -> Tuple[Value, Value]:
    """Synthesize: returns (value, type)."""
    match t:
        case S.Var(name=x):
            if x not in ctx.types:
                _err(ErrorKind.UnboundSymbol, f"unbound variable {x.hint}", ctx)
            return ctx.env.vars[x], ctx.types[x]
        case S.App(fn=S.Lam(x=x, dom=dom, body=body), arg=arg):
            # a beta redex in inference position: check the argument, then
            # continue on the substituted body
            dv = checktype(ctx, dom)
            check(ctx, arg, dv)
            return infer(ctx, S.tsubst(body, S.var_subst({x: arg})))
        case S.App(fn=fn, arg=arg):
            fv, fty = infer(ctx, fn)
            if not isinstance(fty, VPi):
                _err(ErrorKind.NotAFunction, "application of a non-function", ctx)
            av = check(ctx, arg, fty.dom)
            return app(fv, av), fty.clo(av)
        case S.Fst(t=p):
            pv, pty = infer(ctx, p)
            if not isinstance(pty, VSigma):
                _err(ErrorKind.NotASigma, "projection of a non-pair", ctx)
            return fstv(pv), pty.dom
        case S.Snd(t=p):
            pv, pty = infer(ctx, p)
            if not isinstance(pty, VSigma):
                _err(ErrorKind.NotASigma, "projection of a non-pair", ctx)
            return sndv(pv), pty.clo(fstv(pv))
        case S.PApp(fn=p, arg=r):
            rv = check_interval(ctx, r)
            pv, pty = infer(ctx, p)
            if not isinstance(pty, VPathP):
                _err(ErrorKind.NotAPath, "path application of a non-path", ctx)
            return papp(pv, rv), act(pty.line, {pty.i: rv})
        case S.Zero():
            return eval_term(ctx.env, t), VNATT
        case S.Suc(n=n):
            check(ctx, n, VNATT)
            return eval_term(ctx.env, t), VNATT
        case S.NatRec(motive=m, z=z, s=s, n=n):
            mv = check(ctx, m, VPi(VNATT, _const_closure(VUU)))
            check(ctx, z, app(mv, eval_term(Env(), S.ZERO)))
            check(ctx, s, natrec_step_type(mv))
            nv = check(ctx, n, VNATT)
            return eval_term(ctx.env, t), app(mv, nv)
        case S.Unglue(branches=brs, t=b):
            bv, bty = infer(ctx, b)
            if not isinstance(bty, VGlueT):
                _err(ErrorKind.GlueShapeError, "unglue of a non-Glue element", ctx)
            for (phi, e) in brs:
                phiv = check_face(ctx, phi)
                for f, inst in ctx.instances(phiv):
                    sub = face_subst(f)
                    ty_f = act(bty, sub)
                    if isinstance(ty_f, VGlueT):
                        _err(ErrorKind.GlueShapeError,
                             "unglue face does not collapse the Glue type", inst)
                    ev = eval_term(inst.env, S.tsubst_face(e, sub))
                    eq_ty = prelude.equiv_type(ty_f, act(bty.base, sub))
                    if not conv(eq_ty, ev, _glue_equiv_at(bty, sub, inst),
                                inst.restriction):
                        _err(ErrorKind.GlueShapeError,
                             "unglue annotation equivalence mismatch", inst)
            return eval_term(ctx.env, t), bty.base
        case S.IdJ(motive=m, d=d, beta=b):
            bv, bty = infer(ctx, b)
            if not isinstance(bty, VIdT):
                _err(ErrorKind.IdShapeError, "idJ target is not an Id element", ctx)
            mv = check(ctx, m, idj_motive_type(bty.ty, bty.a0))
            check(ctx, d, app(app(mv, bty.a0), idrefl(bty.a0)))
            return eval_term(ctx.env, t), app(app(mv, bty.a1), bv)
        case S.S1Elim(motive=m, base_case=b, loop_case=l, scrut=x):
            mv = check(ctx, m, VPi(VS1T, _const_closure(VUU)))
            bv = check(ctx, b, app(mv, eval_term(Env(), S.BASE)))
            check(ctx, l, loop_case_type(mv, bv))
            xv = check(ctx, x, VS1T)
            return eval_term(ctx.env, t), app(mv, xv)
        case S.InhElim(motive=mo, prop=q, fn=f, scrut=x):
            mov = checktype(ctx, mo)
            check(ctx, q, prop_type(mov))
            fv, fty = infer(ctx, f)
            if not isinstance(fty, VPi):
                _err(ErrorKind.NotAFunction, "inhelim expects a function", ctx)
            xk = fresh_name("x")
            if not convtype(fty.clo(VVar(xk, fty.dom)), mov, ctx.restriction):
                _err(ErrorKind.Mismatch, "inhelim function codomain mismatch", ctx)
            check(ctx, x, VInh(fty.dom))
            return eval_term(ctx.env, t), mov
        case S.Comp(i=i, line=line, branches=brs, base=base):
            ctx_i = ctx.bind_name(i)
            checktype(ctx_i, line)
            line_v = eval_term(ctx_i.env, line)
            base_v = check(ctx, base, act(line_v, {i: IZERO}))
            _check_tube(ctx, i, brs, line_v, base_v, "comp")
            return eval_term(ctx.env, t), act(line_v, {i: IONE})
        case S.Loop(r=r):
            check_interval(ctx, r)
            return eval_term(ctx.env, t), VS1T
        case S.Base():
            return eval_term(ctx.env, t), VS1T
        case (S.Nat() | S.S1() | S.Pi() | S.Sigma() | S.PathP() | S.Inh() | S.IdT()
              | S.GlueT()):
            checktype(ctx, t)
            return eval_term(ctx.env, t), VUU
        case S.U():
            _err(ErrorKind.UniverseError, "the universe has no type", ctx)
        case _:
            _err(ErrorKind.Mismatch,
                 f"cannot synthesize a type for {type(t).__name__}", ctx)


def _glue_equiv_at(bty: VGlueT, sub: dict, ctx) -> Value:
    from .kan import _glue_part_at

    part = _glue_part_at(bty.parts, sub)
    if part is None:
        _err(ErrorKind.GlueShapeError, "no Glue part on the given face", ctx)
    return part[1]


def check(ctx: Context, t: S.Term, ty: Value) -> Value:
    """Check t against the type value ty; returns the evaluated term."""
    if ctx.restriction.is_bot():
        return eval_term(ctx.env, t)
    match t, ty:
        case S.Lam(x=x, dom=dom, body=body), VPi(dom=d, clo=clo):
            dv = checktype(ctx, dom)
            if not convtype(dv, d, ctx.restriction):
                _err(ErrorKind.Mismatch,
                     "lambda domain disagrees with the expected type", ctx)
            check(ctx.bind_var(x, d), body, clo(VVar(x, d)))
            return eval_term(ctx.env, t)
        case S.Lam(), _:
            _err(ErrorKind.NotAFunction,
                 "lambda checked against a non-function type", ctx)
        case S.Pair(fst=a, snd=b), VSigma(dom=d, clo=clo):
            av = check(ctx, a, d)
            check(ctx, b, clo(av))
            return eval_term(ctx.env, t)
        case S.Pair(), _:
            _err(ErrorKind.NotASigma, "pair checked against a non-pair type", ctx)
        case S.PAbs(i=i, body=body), VPathP(i=k, line=line, a0=a0, a1=a1):
            ctx2 = ctx.bind_name(i)
            check(ctx2, body, act(line, {k: ivar(i)}))
            for endpoint, expected, side in ((IZERO, a0, "0"), (IONE, a1, "1")):
                got = eval_term(ctx.env.bind_name(i, endpoint), body)
                want = act(line, {k: endpoint})
                if not conv(want, got, expected, ctx.restriction):
                    _err(ErrorKind.FaceConditionFailed,
                         f"path endpoint at {side} does not match the type", ctx)
            return eval_term(ctx.env, t)
        case S.PAbs(), _:
            _err(ErrorKind.NotAPath,
                 "path abstraction checked against a non-path type", ctx)
        case S.System(branches=brs), _:
            _check_system_covering(ctx, [phi for (phi, _u) in brs])
            for (phi, u) in brs:
                phiv = check_face(ctx, phi)
                for f, inst in ctx.instances(phiv):
                    sub = face_subst(f)
                    check(inst, S.tsubst_face(u, sub), act(ty, sub))
            _check_system_compat(ctx, brs, ty)
            return eval_term(ctx.env, t)
        case S.GlueElem(branches=brs, base=a), VGlueT(parts=parts, base=av_ty):
            from .kan import _glue_part_at

            av = check(ctx, a, av_ty)
            term_phi = FBOT
            for (phi, _u) in brs:
                term_phi = for_(term_phi, check_face(ctx, phi))
            if not feq(fand(ctx.restriction, term_phi),
                       fand(ctx.restriction, parts_formula(parts))):
                _err(ErrorKind.GlueShapeError,
                     "glue extent differs from the Glue type extent", ctx)
            for (phi, u) in brs:
                phiv = check_face(ctx, phi)
                for f, inst in ctx.instances(phiv):
                    sub = face_subst(f)
                    part = _glue_part_at(parts, sub)
                    if part is None:
                        _err(ErrorKind.GlueShapeError,
                             "glue branch face is outside the Glue type extent", inst)
                    t_f, e_f = part
                    uv = check(inst, S.tsubst_face(u, sub), t_f)
                    if not conv(act(av_ty, sub), act(av, sub), app(fstv(e_f), uv),
                                inst.restriction):
                        _err(ErrorKind.FaceConditionFailed,
                             "glue base must be the image of the part under the equivalence",
                             inst)
            _check_system_compat(ctx, brs, None)
            return eval_term(ctx.env, t)
        case S.GlueElem(), _:
            _err(ErrorKind.GlueShapeError,
                 "glue checked against a non-Glue type", ctx)
        case S.IdPair(path=w, phi=phi), VIdT(ty=a, a0=x0, a1=x1):
            phiv = check_face(ctx, phi)
            k = fresh_name("i")
            wv = check(ctx, w, VPathP(k, a, x0, x1))
            for f, inst in ctx.instances(phiv):
                sub = face_subst(f)
                m = fresh_name("i")
                if not conv(act(a, sub), papp(act(wv, sub), ivar(m)), act(x0, sub),
                            inst.restriction):
                    _err(ErrorKind.FaceConditionFailed,
                         "idPair path is not constant on its constancy extent", inst)
            return eval_term(ctx.env, t)
        case S.IdPair(), _:
            _err(ErrorKind.IdShapeError, "idPair checked against a non-Id type", ctx)
        case S.Inc(t=u), VInh(ty=a):
            check(ctx, u, a)
            return eval_term(ctx.env, t)
        case S.Inc(), _:
            _err(ErrorKind.Mismatch, "inc checked against a non-inh type", ctx)
        case S.Squash(a=u0, b=u1, r=r), VInh():
            check(ctx, u0, ty)
            check(ctx, u1, ty)
            check_interval(ctx, r)
            return eval_term(ctx.env, t)
        case S.Squash(), _:
            _err(ErrorKind.Mismatch, "squash checked against a non-inh type", ctx)
        case S.HComp(ty=tyt, i=i, branches=brs, base=base), _:
            tyv = checktype(ctx, tyt)
            if not isinstance(tyv, (VS1, VInh)):
                _err(ErrorKind.Mismatch,
                     "hcomp is a constructor only at S1 and inh", ctx)
            if not convtype(tyv, ty, ctx.restriction):
                _err(ErrorKind.Mismatch, "hcomp type annotation mismatch", ctx)
            base_v = check(ctx, base, tyv)
            _check_tube(ctx, i, brs, tyv, base_v, "hcomp")
            return eval_term(ctx.env, t)
        case _, _:
            v, ty2 = infer(ctx, t)
            if not convtype(ty2, ty, ctx.restriction):
                _err(ErrorKind.Mismatch,
                     f"type mismatch: expected {ty!r} but inferred {ty2!r}", ctx)
            return v


# ---------------------------------------------------------------------------
# declarations


@dataclass
class Decl:
    name: str
    ty: S.Term
    body: S.Term
    span: tuple = (0, 0)
    var: Optional[Name] = None  # pre-allocated by the parser, if any


def checkdecls(ctx: Context, decls) -> Context:
    """Check a telescope of definitions, extending the context with each."""
    for d in decls:
        if d.name in ctx.scope:
            raise CubicalTypeError(
                ErrorKind.UnboundSymbol, f"duplicate definition of {d.name}",
                span=d.span)
        try:
            ty_v = checktype(ctx, d.ty)
            v = check(ctx, d.body, ty_v)
        except CubicalTypeError as e:
            if e.span is None:
                e.span = d.span
            e.message = f"in definition {d.name}: {e.message}"
            raise
        ctx = ctx.bind_def(d.name, d.var or fresh_name(d.name), ty_v, v)
    return ctx
