"""Internal value builders for types and operations the kernel needs.

Contractibility, fibers, equivalences, and the equivalence extracted
from a line of types are ordinary object-language constructions; they
are built here as closed terms once and evaluated on demand.  Keeping
them as term closures means the interval action works on them for free.
"""

from __future__ import annotations

from . import syntax as S
from .evaluator import Env, Value, eval_term
from .face import fatom
from .interval import IONE, IZERO, fresh_name, iand, ineg, ivar

# ---------------------------------------------------------------------------
# type templates


def iscontr_term(c: S.Term) -> S.Term:
    x, y = fresh_name("c"), fresh_name("y")
    return S.Sigma(x, c, S.Pi(y, c, S.path_type(c, S.Var(x), S.Var(y))))


def fiber_term(t: S.Term, a: S.Term, f: S.Term, av: S.Term) -> S.Term:
    x = fresh_name("x")
    return S.Sigma(x, t, S.path_type(a, av, S.App(f, S.Var(x))))


def equiv_term(t: S.Term, a: S.Term) -> S.Term:
    f, y = fresh_name("f"), fresh_name("y")
    return S.Sigma(
        f,
        S.arrow(t, a),
        S.Pi(y, a, iscontr_term(fiber_term(t, a, S.Var(f), S.Var(y)))),
    )


_T = fresh_name("T")
_A = fresh_name("A")
_E = fresh_name("e")
_a = fresh_name("a")

_EQUIV_TMPL = equiv_term(S.Var(_T), S.Var(_A))
_FIBER_TMPL = fiber_term(S.Var(_T), S.Var(_A), S.Fst(S.Var(_E)), S.Var(_a))
_ISCONTR_TMPL = iscontr_term(S.Var(_T))


def equiv_type(t: Value, a: Value) -> Value:
    return eval_term(Env(vars={_T: t, _A: a}), _EQUIV_TMPL)


def fiber_type(t: Value, a: Value, e: Value, av: Value) -> Value:
    return eval_term(Env(vars={_T: t, _A: a, _E: e, _a: av}), _FIBER_TMPL)


def iscontr_type(t: Value) -> Value:
    return eval_term(Env(vars={_T: t}), _ISCONTR_TMPL)


# ---------------------------------------------------------------------------
# term-level sugar shared with the parser


def fill_term(i, line: S.Term, branches, base: S.Term) -> S.Term:
    """fill as a composition over the connection, with the extra (i=0) face."""
    j = fresh_name("j")
    conn = S.name_subst({i: iand(ivar(i), ivar(j))})
    brs = tuple((phi, S.tsubst(u, conn)) for (phi, u) in branches)
    brs += ((fatom(i, 0), base),)
    return S.Comp(j, S.tsubst(line, conn), brs, base)


def transport_term(i, line: S.Term, base: S.Term) -> S.Term:
    return S.Comp(i, line, (), base)


# ---------------------------------------------------------------------------
# the equivalence extracted from a line of types


def build_equiv_line_term() -> S.Term:
    """(A B : U) -> Path U A B -> Equiv A B, by transport and filling."""
    A, B, P = fresh_name("A"), fresh_name("B"), fresh_name("P")
    vA, vB, vP = S.Var(A), S.Var(B), S.Var(P)
    i, j, k = fresh_name("i"), fresh_name("j"), fresh_name("k")

    def nsub(t, m):
        return S.tsubst(t, S.name_subst(m))

    def line_at(r):
        return S.PApp(vP, r)

    x0, y0 = fresh_name("x"), fresh_name("y")
    f_tm = S.Lam(x0, vA, transport_term(i, line_at(ivar(i)), S.Var(x0)))
    g_tm = S.Lam(y0, vB, transport_term(i, line_at(ineg(ivar(i))), S.Var(y0)))

    def u_of(x):
        # forward filler: x at i=0, its transport at i=1
        return fill_term(i, line_at(ivar(i)), (), x)

    def v_of(y):
        # backward filler reversed: the backward transport at i=0, y at i=1
        return nsub(fill_term(i, line_at(ineg(ivar(i))), (), y), {i: ineg(ivar(i))})

    y = fresh_name("y")
    vy = S.Var(y)
    g_y = S.App(g_tm, vy)

    theta0 = fill_term(
        i,
        line_at(ivar(i)),
        ((fatom(j, 0), v_of(vy)), (fatom(j, 1), u_of(g_y))),
        g_y,
    )
    center = S.Pair(g_y, S.PAbs(j, nsub(theta0, {i: IONE})))

    q = fresh_name("u")
    vq = S.Var(q)
    x_tm, beta = S.Fst(vq), S.Snd(vq)
    theta1 = nsub(
        fill_term(
            i,
            line_at(ineg(ivar(i))),
            (
                (fatom(j, 0), nsub(v_of(vy), {i: ineg(ivar(i))})),
                (fatom(j, 1), nsub(u_of(x_tm), {i: ineg(ivar(i))})),
            ),
            S.PApp(beta, ivar(j)),
        ),
        {i: ineg(ivar(i))},
    )
    omega = nsub(theta1, {i: IZERO})
    delta = S.Comp(
        i,
        line_at(ivar(i)),
        (
            (fatom(k, 0), theta0),
            (fatom(k, 1), theta1),
            (fatom(j, 0), v_of(vy)),
            (fatom(j, 1), u_of(nsub(omega, {j: ivar(k)}))),
        ),
        nsub(omega, {j: iand(ivar(j), ivar(k))}),
    )
    contraction = S.Lam(
        q,
        fiber_term(vA, vB, f_tm, vy),
        S.PAbs(k, S.Pair(nsub(omega, {j: ivar(k)}), S.PAbs(j, delta))),
    )
    body = S.Pair(f_tm, S.Lam(y, vB, S.Pair(center, contraction)))
    return S.Lam(
        A, S.UU, S.Lam(B, S.UU, S.Lam(P, S.path_type(S.UU, vA, vB), body))
    )


EQUIV_LINE_TERM = None
_EQUIV_LINE_VALUE = None


def equiv_line_term() -> S.Term:
    global EQUIV_LINE_TERM
    if EQUIV_LINE_TERM is None:
        EQUIV_LINE_TERM = build_equiv_line_term()
    return EQUIV_LINE_TERM


def equiv_line_value() -> Value:
    global _EQUIV_LINE_VALUE
    if _EQUIV_LINE_VALUE is None:
        _EQUIV_LINE_VALUE = eval_term(Env(), equiv_line_term())
    return _EQUIV_LINE_VALUE
