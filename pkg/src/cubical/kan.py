"""Kan composition for every type former.

``comp`` takes a direction, a type line (a value with the direction
free), a tube stored per irreducible face (branch values evaluated
under their face, direction still free), and a base.  Composition at
Pi stays suspended until applied; Sigma, naturals and Path compute
eagerly; Glue follows the five-step construction; the universe
composes to a Glue type whose parts carry the equivalence extracted
from the reversed partial line of types.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import prelude
from .evaluator import (
    Parts,
    VCompStuck,
    VGlueT,
    VHComp,
    VIdPair,
    VIdT,
    VInc,
    VInh,
    VNat,
    VPAbs,
    VPair,
    VPathP,
    VPi,
    VS1,
    VSigma,
    VSquash,
    VSuc,
    VSystem,
    VU,
    VZero,
    Value,
    act,
    act_face,
    act_parts,
    app,
    fstv,
    is_neutral,
    make_glue_elem,
    make_glue_type,
    make_hcomp,
    make_squash,
    make_system,
    mkparts,
    papp,
    parts_at,
    parts_formula,
    sndv,
    unglue_val,
)
from .face import (
    FBOT,
    Face,
    FaceFormula,
    face_formula,
    face_subst,
    fand,
    fatom,
    ffaces,
    fforall,
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
    ior,
    isubst_many,
    ivar,
)


@dataclass(frozen=True)
class CompProblem:
    """A composition problem: base at i=0, tube over the extent, lid at i=1."""

    direction: Name
    line: Value
    extent: FaceFormula
    tube: Parts
    base: Value


def problem(direction: Name, line: Value, tube: Parts, base: Value) -> CompProblem:
    return CompProblem(direction, line, parts_formula(tube), tube, base)


def comp_problem(p: CompProblem) -> Value:
    return comp(p.direction, p.line, p.tube, p.base)


class _Stuck(Exception):
    """Raised when a structural HIT recursion meets a neutral element."""


def comp(i: Name, line: Value, tube: Parts, base: Value) -> Value:
    for entry in tube:
        if not entry[0]:
            return act(entry[1], {i: IONE})
    match line:
        case VPathP():
            return _comp_path(i, line, tube, base)
        case VSigma():
            return _comp_sigma(i, line, tube, base)
        case VNat():
            return _comp_nat(i, line, tube, base)
        case VPi():
            return VCompStuck(i, line, tube, base)
        case VU():
            return comp_universe(i, tube, base)
        case VGlueT():
            return comp_glue(i, line, tube, base)
        case VIdT():
            return comp_id(i, line, tube, base)
        case VS1():
            return make_hcomp(i, line, tube, base)
        case VInh(ty=a):
            try:
                return comp_inh(i, a, tube, base)
            except _Stuck:
                return VCompStuck(i, line, tube, base)
        case _ if is_neutral(line) or isinstance(line, VSystem):
            return VCompStuck(i, line, tube, base)
    raise TypeError(f"comp: no composition defined at {line!r}")


def fill(i: Name, line: Value, tube: Parts, base: Value) -> Value:
    """The filler: the base at i=0, the composition at i=1, the tube on its extent."""
    j = fresh_name(i.hint)
    conn = {i: iand(ivar(i), ivar(j))}
    tube2 = [(f, act(v, conn)) for (f, v) in tube]
    tube2.append((frozenset({(i, 0)}), base))
    return comp(j, act(line, conn), mkparts(tube2), base)


def transport(i: Name, line: Value, base: Value) -> Value:
    return comp(i, line, (), base)


def _comp_path(i: Name, line: VPathP, tube: Parts, base: Value) -> Value:
    k = fresh_name("j")
    inner = act(line.line, {line.i: ivar(k)})
    tube2 = [(f, papp(v, ivar(k))) for (f, v) in tube]
    tube2.append((frozenset({(k, 0)}), line.a0))
    tube2.append((frozenset({(k, 1)}), line.a1))
    return VPAbs(k, comp(i, inner, mkparts(tube2), papp(base, ivar(k))))


def _comp_sigma(i: Name, line: VSigma, tube: Parts, base: Value) -> Value:
    tube1 = mkparts((f, fstv(v)) for (f, v) in tube)
    b1 = fstv(base)
    c1 = comp(i, line.dom, tube1, b1)
    a_fill = fill(i, line.dom, tube1, b1)
    c2 = comp(i, line.clo(a_fill), mkparts((f, sndv(v)) for (f, v) in tube), sndv(base))
    return VPair(c1, c2)


def _comp_nat(i: Name, line: Value, tube: Parts, base: Value) -> Value:
    if isinstance(base, VZero) and all(isinstance(v, VZero) for (_f, v) in tube):
        return base
    if isinstance(base, VSuc) and all(isinstance(v, VSuc) for (_f, v) in tube):
        return VSuc(comp(i, line, mkparts((f, v.n) for (f, v) in tube), base.n))
    return VCompStuck(i, line, tube, base)


def app_comp_pi(c: VCompStuck, u1: Value) -> Value:
    """Apply a suspended composition at a Pi line to an argument."""
    i, line, tube, lam0 = c.i, c.line, c.parts, c.base
    rev = {i: ineg(ivar(i))}
    w = fill(i, act(line.dom, rev), (), u1)
    v = act(w, rev)
    v0 = act(v, {i: IZERO})
    tube2 = mkparts((f, app(mu, act(v, face_subst(f)))) for (f, mu) in tube)
    return comp(i, line.clo(v), tube2, app(lam0, v0))


# ---------------------------------------------------------------------------
# contractibility, pres, equiv


def contr(p: Value, ty: Value, tube: Parts) -> Value:
    """Extend a partial element of ty along a contraction proof p : isContr ty."""
    i = fresh_name("i")
    tube2 = mkparts(
        (f, papp(app(sndv(act_face(p, f)), u), ivar(i))) for (f, u) in tube
    )
    return comp(i, ty, tube2, fstv(p))


def pres(i: Name, fn: Value, t_line: Value, a_line: Value, tube: Parts, t0: Value) -> Value:
    """A path from comp of the images to the image of comp (preservation)."""
    j = fresh_name("j")
    v = fill(i, t_line, tube, t0)
    fv = app(fn, v)
    tube2 = [(f, act(fv, face_subst(f))) for (f, _u) in tube]
    tube2.append((frozenset({(j, 1)}), fv))
    a0 = act(fv, {i: IZERO})
    return VPAbs(j, comp(i, a_line, mkparts(tube2), a0))


def equiv_partial(t_ty: Value, a_ty: Value, e: Value, a: Value, tube: Parts):
    """A point of the fiber of e over a extending the partial tube of pairs."""
    fib = prelude.fiber_type(t_ty, a_ty, e, a)
    res = contr(app(sndv(e), a), fib, tube)
    return fstv(res), sndv(res)


def line_to_equiv(i: Name, line: Value) -> Value:
    """The equivalence between the endpoints of a line of types."""
    a = act(line, {i: IZERO})
    b = act(line, {i: IONE})
    p = VPAbs(i, line)
    fn = prelude.equiv_line_value()
    return app(app(app(fn, a), b), p)


# ---------------------------------------------------------------------------
# Glue and universe composition


def _glue_part_at(parts: Parts, sub: dict):
    """The (T, e) of the part whose face becomes total under sub."""
    for (g, tpart, epart) in parts:
        if fsubst_many(face_formula(g), sub).is_top():
            return act(tpart, sub), act(epart, sub)
    return None


def _unglue_against(glue_parts: Parts, sub: dict, ty_sub: Value, v: Value) -> Value:
    """unglue v against the Glue line restricted by sub (it may have collapsed)."""
    if isinstance(ty_sub, VGlueT):
        return unglue_val(mkparts((g, e) for (g, _t, e) in ty_sub.parts), v)
    part = _glue_part_at(glue_parts, sub)
    assert part is not None, "collapsed Glue type with no total part"
    return app(fstv(part[1]), v)


def comp_glue(i: Name, line: VGlueT, tube: Parts, b0: Value) -> Value:
    glue_parts = line.parts  # part faces may mention the direction i
    a_line = line.base
    phi = parts_formula(glue_parts)
    delta = fforall(i, phi)
    phi1 = fsubst_many(phi, {i: IONE})

    a_tube = mkparts(
        (f, _unglue_against(glue_parts, face_subst(f), act_face(line, f), bf))
        for (f, bf) in tube
    )
    a0 = _unglue_against(glue_parts, {i: IZERO}, act(line, {i: IZERO}), b0)
    a1p = comp(i, a_line, a_tube, a0)

    # per forall-face: composition in T and the preservation path
    delta_data = []
    for d in ffaces(delta):
        ds = face_subst(d)
        part = _glue_part_at(glue_parts, ds)
        assert part is not None, "no total Glue part under a forall-face"
        t_d, e_d = part
        tube_d = act_parts(tube, ds)
        b0_d = act(b0, ds)
        t1p = comp(i, t_d, tube_d, b0_d)
        w = pres(i, fstv(e_d), t_d, act(a_line, ds), tube_d, b0_d)
        delta_data.append((d, VPair(t1p, w)))
    delta_parts = mkparts(delta_data)

    j = fresh_name("j")
    psi_pairs = mkparts(
        (f, VPair(act(bf, {i: IONE}), VPAbs(j, act(a1p, face_subst(f)))))
        for (f, bf) in tube
    )

    # the fiber point over a1' on each face of phi(i1)
    t1_parts, alpha_parts = [], []
    for h in ffaces(phi1):
        hs = face_subst(h)
        part1 = _glue_part_at(glue_parts, {**hs, i: IONE})
        assert part1 is not None
        t_h, e_h = part1
        fib_tube = mkparts(
            list(act_parts(delta_parts, hs)) + list(act_parts(psi_pairs, hs))
        )
        t1_h, alpha_h = equiv_partial(
            t_h, act(a_line, {**hs, i: IONE}), e_h, act(a1p, hs), fib_tube
        )
        t1_parts.append((h, t1_h))
        alpha_parts.append((h, alpha_h))

    # correct the lid so it is the image of t1 on phi(i1)
    k = fresh_name("j")
    a1_tube = [(h, papp(al, ivar(k))) for (h, al) in alpha_parts]
    for (f, af) in a_tube:
        a1_tube.append((f, act(af, {i: IONE})))
    a1 = comp(k, act(a_line, {i: IONE}), mkparts(a1_tube), a1p)
    return make_glue_elem(mkparts(t1_parts), a1)


def comp_universe(i: Name, tube: Parts, base: Value) -> Value:
    out = []
    for (f, e_line) in tube:
        t_f = act(e_line, {i: IONE})
        eq = line_to_equiv(i, act(e_line, {i: ineg(ivar(i))}))
        out.append((f, t_f, eq))
    return make_glue_type(mkparts(out), base)


# ---------------------------------------------------------------------------
# Id types


def comp_id(i: Name, line: VIdT, tube: Parts, base: Value) -> Value:
    if not isinstance(base, VIdPair) or not all(
        isinstance(v, VIdPair) for (_f, v) in tube
    ):
        return VCompStuck(i, line, tube, base)
    k = fresh_name("j")
    path_line = VPathP(k, line.ty, line.a0, line.a1)
    w1 = comp(i, path_line, mkparts((f, v.path) for (f, v) in tube), base.path)
    flag = FBOT
    for (f, v) in tube:
        flag = for_(flag, fand(face_formula(f), fsubst_many(v.phi, {i: IONE})))
    return VIdPair(w1, flag)


def jreduce(motive: Value, d: Value, beta: VIdPair) -> Value:
    """J on a canonical identity witness; on the constancy extent it is d."""
    w, phi = beta.path, beta.phi
    i = fresh_name("i")
    j = fresh_name("j")
    beta_star = VIdPair(
        VPAbs(j, papp(w, iand(ivar(i), ivar(j)))), for_(phi, fatom(i, 0))
    )
    line = app(app(motive, papp(w, ivar(i))), beta_star)
    tube = mkparts((f, act_face(d, f)) for f in ffaces(phi))
    return comp(i, line, tube, d)


# ---------------------------------------------------------------------------
# propositional truncation


def transp_inh(i: Name, a_line: Value, u0: Value) -> Value:
    match u0:
        case VInc(t=a):
            return VInc(comp(i, a_line, (), a))
        case VSquash(a=x, b=y, r=r):
            return make_squash(transp_inh(i, a_line, x), transp_inh(i, a_line, y), r)
        case VHComp(i=j, parts=ps, base=b):
            new = mkparts((f, transp_inh(i, act_face(a_line, f), v)) for (f, v) in ps)
            return make_hcomp(
                j, VInh(act(a_line, {i: IONE})), new, transp_inh(i, a_line, b)
            )
        case VSystem(parts=ps):
            return make_system(
                mkparts((f, transp_inh(i, act_face(a_line, f), v)) for (f, v) in ps)
            )
        case _ if is_neutral(u0):
            return VCompStuck(i, VInh(a_line), (), u0)
    raise TypeError(f"transp_inh: bad element {u0!r}")


def squeeze_inh(i: Name, a_line: Value, u: Value) -> Value:
    """A path in inh A(i1) from transp of u(i0) to u(i1)."""
    k = fresh_name("k")
    match u:
        case VInc(t=a):
            j = fresh_name("j")
            body = VInc(
                comp(
                    j,
                    act(a_line, {i: ior(ivar(k), ivar(j))}),
                    mkparts([(frozenset({(k, 1)}), act(a, {i: IONE}))]),
                    act(a, {i: ivar(k)}),
                )
            )
            return VPAbs(k, body)
        case VSquash(a=u0, b=u1, r=r):
            body = make_squash(
                papp(squeeze_inh(i, a_line, u0), ivar(k)),
                papp(squeeze_inh(i, a_line, u1), ivar(k)),
                isubst_many(r, {i: ivar(k)}),
            )
            return VPAbs(k, body)
        case VHComp(i=j, parts=ps, base=v):
            phi = parts_formula(ps)
            delta = fforall(i, phi)
            s_parts = []
            for d in ffaces(delta):
                ds = face_subst(d)
                entry = parts_at(ps, d)
                if entry is None:
                    raise _Stuck("no total tube part under a forall-face")
                s_parts.append(
                    (d, papp(squeeze_inh(i, act(a_line, ds), entry[0]), ivar(k)))
                )
            for (f, w) in act_parts(ps, {i: IZERO}):
                s_parts.append(
                    (frozenset(f | {(k, 0)}), transp_inh(i, act_face(a_line, f), w))
                )
            for (f, w) in act_parts(ps, {i: IONE}):
                s_parts.append((frozenset(f | {(k, 1)}), w))
            base = papp(squeeze_inh(i, a_line, v), ivar(k))
            body = make_hcomp(j, VInh(act(a_line, {i: IONE})), mkparts(s_parts), base)
            return VPAbs(k, body)
        case _:
            raise _Stuck(f"squeeze on a non-canonical element: {u!r}")


def comp_inh(i: Name, a_line: Value, tube: Parts, base: Value) -> Value:
    j = fresh_name("j")
    parts = mkparts(
        (f, papp(squeeze_inh(i, act_face(a_line, f), v), ivar(j))) for (f, v) in tube
    )
    return make_hcomp(
        j, VInh(act(a_line, {i: IONE})), parts, transp_inh(i, a_line, base)
    )


def fill_hcomp(ty: Value, i: Name, parts: Parts, base: Value) -> Value:
    """The filler of an hcomp box, via the connection on its direction."""
    j = fresh_name(i.hint)
    conn = {i: iand(ivar(i), ivar(j))}
    tube = [(f, act(v, conn)) for (f, v) in parts]
    tube.append((frozenset({(i, 0)}), base))
    return make_hcomp(j, ty, mkparts(tube), base)
