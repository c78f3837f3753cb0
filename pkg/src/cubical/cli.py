r"""Concrete syntax, file loader, and the check/normalize command line.

Grammar (line comments start with `--`):

    def name (x : A) (y : B) : T = t        declarations (telescope sugar)
    import other                            file other.cub, same directory

    \(x:A) -> t          lambda                (x:A) -> B   dependent function
    (x:A) * B            dependent pair type   (t, u)  t.1  t.2
    Path A t u           PathP (<i> A) t u     <i> t        p @ r
    0 1 i -r r/\s r\/s   interval expressions
    0F 1F (i=0) (i=1)    face formulas, with /\ and \/
    [ phi -> t, ... ]    systems
    comp^i A [phi -> u] a0       fill^i A [phi -> u] a0      transport^i A a
    refl t
    Glue [phi -> (T,e)] A        glue [phi -> t] a           unglue [phi -> e] b
    U  N  zero  suc n  natrec P z s n
    Id A a b   idPair p [phi]   idJ C d beta
    S1  base  loop r   hcomp^i T [phi -> u] u0
    inh A  inc a  squash a b r
    s1elim C b l x     inhelim B q f x
"""

from __future__ import annotations

import argparse
import os
import random
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

from . import evaluator as E
from . import prelude
from . import syntax as S
from .checker import Context, CubicalTypeError, Decl, checkdecls, infer
from .face import FBOT, FTOP, FaceFormula, face_formula, ffaces, fnorm
from .interval import Interval, Name, fresh_name, inorm, ivar, sorted_clauses


class ParseError(Exception):
    def __init__(self, msg, line=0, col=0):
        super().__init__(msg)
        self.msg = msg
        self.line = line
        self.col = col

    def diagnostic(self, path):
        return f"{path}:{self.line}:{self.col}: error: parse: {self.msg}"


# ---------------------------------------------------------------------------
# lexer

PUNCT = [
    "->", "/\\", "\\/", ".1", ".2", "(", ")", "[", "]", "<", ">", ":", "=",
    ",", "*", "@", "\\", "^", "-",
]

KEYWORDS = {
    "def", "import", "U", "N", "zero", "suc", "natrec", "Path", "PathP",
    "comp", "fill", "transport", "refl", "Glue", "glue", "unglue", "Id",
    "idPair", "idJ", "S1", "base", "loop", "hcomp", "inh", "inc", "squash",
    "s1elim", "inhelim", "0F", "1F",
}


@dataclass
class Tok:
    kind: str  # "ident", "kw", "punct", "num"
    text: str
    line: int
    col: int


def tokenize(src: str):
    toks = []
    i, line, col = 0, 1, 1
    n = len(src)
    while i < n:
        c = src[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if src.startswith("--", i):
            while i < n and src[i] != "\n":
                i += 1
            continue
        if src.startswith("0F", i) or src.startswith("1F", i):
            toks.append(Tok("kw", src[i : i + 2], line, col))
            i += 2
            col += 2
            continue
        for p in PUNCT:
            if src.startswith(p, i):
                toks.append(Tok("punct", p, line, col))
                i += len(p)
                col += len(p)
                break
        else:
            if c.isdigit():
                j = i
                while j < n and src[j].isdigit():
                    j += 1
                toks.append(Tok("num", src[i:j], line, col))
                col += j - i
                i = j
                continue
            if c.isalpha() or c == "_":
                j = i
                while j < n and (src[j].isalnum() or src[j] in "_'"):
                    j += 1
                word = src[i:j]
                toks.append(Tok("kw" if word in KEYWORDS else "ident", word, line, col))
                col += j - i
                i = j
                continue
            raise ParseError(f"stray character {c!r}", line, col)
    toks.append(Tok("eof", "", line, col))
    return toks


# ---------------------------------------------------------------------------
# parser / elaborator

INTERVAL_KIND = "interval"
VAR_KIND = "var"


@dataclass
class Scope:
    table: dict  # surface name -> (kind, Name)
    parent: Optional["Scope"] = None
    globals_: Optional[dict] = None  # shared surface name -> (kind, Name)

    def lookup(self, name):
        s = self
        while s is not None:
            if name in s.table:
                return s.table[name]
            if s.parent is None and s.globals_ is not None and name in s.globals_:
                return s.globals_[name]
            s = s.parent
        return None

    def child(self, **binds):
        return Scope(dict(binds), self)


@dataclass
class RawDecl:
    name: str
    var: Name
    ty: S.Term
    body: S.Term
    span: tuple


@dataclass
class SourceModule:
    path: str
    imports: list
    decls: list  # RawDecl


class Parser:
    def __init__(self, src: str, scope: Scope):
        self.toks = tokenize(src)
        self.pos = 0
        self.scope = scope

    # -- token helpers

    def peek(self, k=0) -> Tok:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def next(self) -> Tok:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def at(self, text) -> bool:
        t = self.peek()
        return t.text == text and t.kind in ("punct", "kw")

    def eat(self, text) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    def expect(self, text) -> Tok:
        t = self.next()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text!r}", t.line, t.col)
        return t

    def expect_ident(self) -> Tok:
        t = self.next()
        if t.kind != "ident":
            raise ParseError(f"expected an identifier, found {t.text!r}", t.line, t.col)
        return t

    def fail(self, msg):
        t = self.peek()
        raise ParseError(msg, t.line, t.col)

    # -- scope helpers

    def bind_var(self, surface) -> Name:
        x = fresh_name(surface)
        self.scope = self.scope.child(**{surface: (VAR_KIND, x)})
        return x

    def bind_ivar(self, surface) -> Name:
        i = fresh_name(surface)
        self.scope = self.scope.child(**{surface: (INTERVAL_KIND, i)})
        return i

    def pop_scope(self, saved):
        self.scope = saved

    # -- modules

    def parse_module(self, path) -> SourceModule:
        imports, decls = [], []
        while self.eat("import"):
            imports.append(self.expect_ident().text)
        while not self.at(""):
            if self.peek().kind == "eof":
                break
            decls.append(self.parse_decl())
        return SourceModule(path, imports, decls)

    def parse_decl(self) -> RawDecl:
        t0 = self.expect("def")
        name_tok = self.expect_ident()
        if self.scope.lookup(name_tok.text) is not None:
            raise ParseError(f"duplicate definition of {name_tok.text}",
                             name_tok.line, name_tok.col)
        saved = self.scope
        binders = []  # (x, dom)
        while self.at("("):
            self.next()
            group = [self.expect_ident().text]
            while self.peek().kind == "ident":
                group.append(self.expect_ident().text)
            self.expect(":")
            dom = self.parse_term()
            self.expect(")")
            for surf in group:
                binders.append((self.bind_var(surf), surf, dom))
        self.expect(":")
        ty = self.parse_term()
        self.expect("=")
        body = self.parse_term()
        self.pop_scope(saved)
        for (x, _surf, dom) in reversed(binders):
            ty = S.Pi(x, dom, ty)
            body = S.Lam(x, dom, body)
        var = fresh_name(name_tok.text)
        if self.scope.globals_ is not None:
            self.scope.globals_[name_tok.text] = (VAR_KIND, var)
        return RawDecl(name_tok.text, var, ty, body, (t0.line, t0.col))

    # -- interval expressions

    def parse_interval(self) -> Interval:
        return self._ior()

    def _ior(self):
        r = self._iand()
        while self.at("\\/"):
            self.next()
            r = inorm(("or", r, self._iand()))
        return r

    def _iand(self):
        r = self._iatom()
        while self.at("/\\"):
            self.next()
            r = inorm(("and", r, self._iatom()))
        return r

    def _iatom(self) -> Interval:
        t = self.peek()
        if self.eat("-"):
            return inorm(("neg", self._iatom()))
        if self.eat("("):
            r = self._ior()
            self.expect(")")
            return r
        if t.kind == "num" and t.text in ("0", "1"):
            self.next()
            return inorm(("zero",) if t.text == "0" else ("one",))
        if t.kind == "ident":
            found = self.scope.lookup(t.text)
            if found is None:
                raise ParseError(f"unknown name {t.text!r}", t.line, t.col)
            kind, n = found
            if kind != INTERVAL_KIND:
                raise ParseError(
                    f"{t.text!r} is a term variable, not an interval name",
                    t.line, t.col)
            self.next()
            return inorm(("var", n))
        self.fail("expected an interval expression")

    def parse_interval_atom(self) -> Interval:
        # an atom: endpoints, a name, -atom, or a parenthesized expression
        t = self.peek()
        if t.text in ("0", "1") or t.text == "-" or t.text == "(" or t.kind == "ident":
            if self.at("("):
                self.next()
                r = self._ior()
                self.expect(")")
                return r
            return self._iatom()
        self.fail("expected an interval argument")

    # -- face formulas

    def parse_face(self) -> FaceFormula:
        phi = self._face_conj()
        while self.at("\\/"):
            self.next()
            phi = fnorm(("or", phi, self._face_conj()))
        return phi

    def _face_conj(self):
        phi = self._face_atom()
        while self.at("/\\"):
            self.next()
            phi = fnorm(("and", phi, self._face_atom()))
        return phi

    def _face_atom(self) -> FaceFormula:
        if self.eat("0F"):
            return FBOT
        if self.eat("1F"):
            return FTOP
        tok = self.expect("(")
        if self.peek().kind == "ident" and self.peek(1).text == "=":
            name_tok = self.expect_ident()
            self.expect("=")
            side = self.next()
            if side.text not in ("0", "1"):
                raise ParseError("a face atom ends in =0) or =1)", side.line, side.col)
            self.expect(")")
            found = self.scope.lookup(name_tok.text)
            if found is None or found[0] != INTERVAL_KIND:
                raise ParseError(f"unknown interval name {name_tok.text!r}",
                                 name_tok.line, name_tok.col)
            return fnorm(("atom", found[1], int(side.text)))
        phi = self.parse_face()
        self.expect(")")
        return phi

    # -- systems

    def parse_system(self, nargs=1):
        """[ phi -> t, ... ]; nargs=2 parses pairs (T,e) per branch."""
        self.expect("[")
        branches = []
        if self.eat("]"):
            return tuple(branches)
        while True:
            phi = self.parse_face()
            self.expect("->")
            if nargs == 1:
                branches.append((phi, self.parse_term()))
            else:
                self.expect("(")
                t1 = self.parse_term()
                self.expect(",")
                t2 = self.parse_term()
                self.expect(")")
                branches.append((phi, t1, t2))
            if self.eat("]"):
                return tuple(branches)
            self.expect(",")

    def parse_direction(self) -> Name:
        self.expect("^")
        tok = self.expect_ident()
        return self.bind_ivar(tok.text)

    # -- terms

    def parse_term(self) -> S.Term:
        t = self.peek()
        if self.eat("\\"):
            saved = self.scope
            binders = []
            while self.at("("):
                self.next()
                group = [self.expect_ident().text]
                while self.peek().kind == "ident":
                    group.append(self.expect_ident().text)
                self.expect(":")
                dom = self.parse_term()
                self.expect(")")
                for surf in group:
                    binders.append((self.bind_var(surf), dom))
            self.expect("->")
            body = self.parse_term()
            self.pop_scope(saved)
            for (x, dom) in reversed(binders):
                body = S.Lam(x, dom, body)
            return body
        if self.at("<"):
            return self.parse_pabs()
        # dependent binder (x : A) -> B or (x : A) * B, detected by lookahead
        if self.at("(") and self._binder_ahead():
            saved = self.scope
            self.next()
            group = [self.expect_ident().text]
            while self.peek().kind == "ident":
                group.append(self.expect_ident().text)
            self.expect(":")
            dom = self.parse_term()
            self.expect(")")
            names = [(self.bind_var(surf), dom) for surf in group]
            if self.eat("->"):
                cod = self.parse_term()
                self.pop_scope(saved)
                for (x, d) in reversed(names):
                    cod = S.Pi(x, d, cod)
                return cod
            self.expect("*")
            cod = self.parse_term()
            self.pop_scope(saved)
            for (x, d) in reversed(names):
                cod = S.Sigma(x, d, cod)
            return cod
        left = self.parse_times()
        if self.eat("->"):
            right = self.parse_term()
            return S.arrow(left, right)
        return left

    def _binder_ahead(self) -> bool:
        # "(" ident+ ":"  begins a Pi/Sigma binder
        k = 1
        if self.peek(k).kind != "ident":
            return False
        while self.peek(k).kind == "ident":
            k += 1
        return self.peek(k).text == ":"

    def parse_pabs(self) -> S.Term:
        self.expect("<")
        saved = self.scope
        names = [self.bind_ivar(self.expect_ident().text)]
        while self.peek().kind == "ident":
            names.append(self.bind_ivar(self.expect_ident().text))
        self.expect(">")
        body = self.parse_term()
        self.pop_scope(saved)
        for i in reversed(names):
            body = S.PAbs(i, body)
        return body

    def parse_times(self) -> S.Term:
        left = self.parse_app()
        if self.eat("*"):
            right = self.parse_times()
            return S.times(left, right)
        return left

    def parse_app(self) -> S.Term:
        head = self.parse_atom()
        while True:
            t = self.peek()
            if self.eat(".1"):
                head = S.Fst(head)
                continue
            if self.eat(".2"):
                head = S.Snd(head)
                continue
            if self.eat("@"):
                head = S.PApp(head, self.parse_interval())
                continue
            if (
                t.kind in ("ident", "num")
                or t.text in ("(", "[", "<", "\\")
                or (t.kind == "kw" and t.text not in ("def", "import"))
            ):
                if t.kind == "num":
                    self.fail("numbers are not terms; use zero/suc")
                head = S.App(head, self.parse_atom())
                continue
            return head

    def parse_atom(self) -> S.Term:
        t = self.peek()
        if t.kind == "ident":
            found = self.scope.lookup(t.text)
            if found is None:
                raise ParseError(f"unknown identifier {t.text!r}", t.line, t.col)
            kind, n = found
            if kind != VAR_KIND:
                raise ParseError(
                    f"{t.text!r} is an interval name, not a term", t.line, t.col)
            self.next()
            return S.Var(n)
        if self.eat("("):
            tm = self.parse_term()
            if self.eat(","):
                parts = [tm, self.parse_term()]
                while self.eat(","):
                    parts.append(self.parse_term())
            else:
                parts = [tm]
            self.expect(")")
            out = parts[-1]
            for p in reversed(parts[:-1]):
                out = S.Pair(p, out)
            return out
        if self.at("["):
            return S.System(self.parse_system())
        if self.at("<"):
            return self.parse_pabs()
        if t.kind != "kw":
            self.fail(f"unexpected {t.text!r}")
        kw = t.text
        if kw == "U":
            self.next()
            return S.UU
        if kw == "N":
            self.next()
            return S.NAT
        if kw == "zero":
            self.next()
            return S.ZERO
        if kw == "S1":
            self.next()
            return S.S1T
        if kw == "base":
            self.next()
            return S.BASE
        if kw == "suc":
            self.next()
            return S.Suc(self.parse_atom())
        if kw == "inc":
            self.next()
            return S.Inc(self.parse_atom())
        if kw == "inh":
            self.next()
            return S.Inh(self.parse_atom())
        if kw == "natrec":
            self.next()
            return S.NatRec(self.parse_atom(), self.parse_atom(),
                            self.parse_atom(), self.parse_atom())
        if kw == "loop":
            self.next()
            return S.Loop(self.parse_interval_atom())
        if kw == "squash":
            self.next()
            return S.Squash(self.parse_atom(), self.parse_atom(),
                            self.parse_interval_atom())
        if kw == "Path":
            self.next()
            a = self.parse_atom()
            return S.path_type(a, self.parse_atom(), self.parse_atom())
        if kw == "PathP":
            self.next()
            line = self.parse_atom()
            if not isinstance(line, S.PAbs):
                self.fail("PathP expects a line of types <i> A")
            return S.PathP(line.i, line.body, self.parse_atom(), self.parse_atom())
        if kw == "Id":
            self.next()
            return S.IdT(self.parse_atom(), self.parse_atom(), self.parse_atom())
        if kw == "idPair":
            self.next()
            w = self.parse_atom()
            self.expect("[")
            phi = self.parse_face()
            self.expect("]")
            return S.IdPair(w, phi)
        if kw == "idJ":
            self.next()
            return S.IdJ(self.parse_atom(), self.parse_atom(), self.parse_atom())
        if kw == "refl":
            self.next()
            return S.PAbs(fresh_name("_i"), self.parse_atom())
        if kw == "s1elim":
            self.next()
            return S.S1Elim(self.parse_atom(), self.parse_atom(),
                            self.parse_atom(), self.parse_atom())
        if kw == "inhelim":
            self.next()
            return S.InhElim(self.parse_atom(), self.parse_atom(),
                             self.parse_atom(), self.parse_atom())
        if kw == "comp":
            self.next()
            saved = self.scope
            i = self.parse_direction()
            line = self.parse_atom()
            self.scope = saved
            branches = self._tube(i)
            base = self.parse_atom()
            return S.Comp(i, line, branches, base)
        if kw == "hcomp":
            self.next()
            saved = self.scope
            i = self.parse_direction()
            self.scope = saved
            ty = self.parse_atom()
            branches = self._tube(i)
            base = self.parse_atom()
            return S.HComp(ty, i, branches, base)
        if kw == "fill":
            self.next()
            saved = self.scope
            i = self.parse_direction()
            line = self.parse_atom()
            self.scope = saved
            branches = self._tube(i)
            base = self.parse_atom()
            return prelude.fill_term(i, line, branches, base)
        if kw == "transport":
            self.next()
            saved = self.scope
            i = self.parse_direction()
            line = self.parse_atom()
            self.scope = saved
            return prelude.transport_term(i, line, self.parse_atom())
        if kw == "Glue":
            self.next()
            branches = self.parse_system(nargs=2)
            return S.GlueT(branches, self.parse_atom())
        if kw == "glue":
            self.next()
            branches = self.parse_system()
            return S.GlueElem(branches, self.parse_atom())
        if kw == "unglue":
            self.next()
            branches = self.parse_system()
            return S.Unglue(branches, self.parse_atom())
        self.fail(f"unexpected keyword {kw!r}")

    def _tube(self, i: Name):
        """A system whose branches may mention the bound direction."""
        saved = self.scope
        self.scope = self.scope.child(**{i.hint: (INTERVAL_KIND, i)})
        branches = self.parse_system()
        self.scope = saved
        return branches


def parse_module_text(src: str, path: str = "<input>",
                      globals_: Optional[dict] = None) -> SourceModule:
    return Parser(src, Scope({}, globals_=globals_ if globals_ is not None else {})
                  ).parse_module(path)


# ---------------------------------------------------------------------------
# pretty-printer and readback


class Printer:
    def __init__(self):
        self.names = {}
        self.used = set()

    def bind(self, n: Name) -> str:
        base = n.hint.lstrip("_") or "x"
        cand = base
        k = 1
        while cand in self.used:
            cand = f"{base}{k}"
            k += 1
        self.used.add(cand)
        self.names[n] = cand
        return cand

    def name(self, n: Name) -> str:
        return self.names.get(n, n.hint)

    def interval(self, r: Interval) -> str:
        from .interval import pretty_interval

        return pretty_interval(r, self.names)

    def face(self, phi: FaceFormula) -> str:
        from .face import pretty_face

        return pretty_face(phi, self.names)

    def system(self, branches, arity=1) -> str:
        outs = []
        for br in branches:
            phi = self.face(br[0])
            if arity == 1:
                outs.append(f"{phi} -> {self.term(br[1])}")
            else:
                outs.append(f"{phi} -> ({self.term(br[1])},{self.term(br[2])})")
        return "[" + ", ".join(outs) + "]"

    def term(self, t: S.Term, prec: int = 0) -> str:
        # precedence: 0 term, 1 times, 2 app, 3 atom
        def wrap(s, p):
            return f"({s})" if prec > p else s

        match t:
            case S.Var(name=x):
                return self.name(x)
            case S.Pi(x=x, dom=d, cod=c):
                if x in S.free_vars(c):
                    xs = self.bind(x)
                    return wrap(f"({xs} : {self.term(d)}) -> {self.term(c)}", 0)
                return wrap(f"{self.term(d, 1)} -> {self.term(c)}", 0)
            case S.Sigma(x=x, dom=d, cod=c):
                if x in S.free_vars(c):
                    xs = self.bind(x)
                    return wrap(f"({xs} : {self.term(d)}) * {self.term(c, 1)}", 0)
                return wrap(f"{self.term(d, 2)} * {self.term(c, 1)}", 1)
            case S.Lam(x=x, dom=d, body=b):
                xs = self.bind(x)
                return wrap(f"\\({xs} : {self.term(d)}) -> {self.term(b)}", 0)
            case S.App(fn=f, arg=a):
                return wrap(f"{self.term(f, 2)} {self.term(a, 3)}", 2)
            case S.Pair(fst=a, snd=b):
                return f"({self.term(a)}, {self.term(b)})"
            case S.Fst(t=u):
                return f"{self.term(u, 3)}.1"
            case S.Snd(t=u):
                return f"{self.term(u, 3)}.2"
            case S.Nat():
                return "N"
            case S.Zero():
                return "zero"
            case S.Suc(n=n):
                return wrap(f"suc {self.term(n, 3)}", 2)
            case S.NatRec(motive=m, z=z, s=s, n=n):
                return wrap(
                    f"natrec {self.term(m, 3)} {self.term(z, 3)}"
                    f" {self.term(s, 3)} {self.term(n, 3)}", 2)
            case S.U():
                return "U"
            case S.PathP(i=i, line=line, a0=a0, a1=a1):
                if i not in S.support(line):
                    return wrap(
                        f"Path {self.term(line, 3)} {self.term(a0, 3)}"
                        f" {self.term(a1, 3)}", 2)
                isv = self.bind(i)
                return wrap(
                    f"PathP (<{isv}> {self.term(line)}) {self.term(a0, 3)}"
                    f" {self.term(a1, 3)}", 2)
            case S.PAbs(i=i, body=b):
                isv = self.bind(i)
                return wrap(f"<{isv}> {self.term(b)}", 0)
            case S.PApp(fn=f, arg=r):
                return wrap(f"{self.term(f, 2)} @ {self.interval(r)}", 2)
            case S.System(branches=brs):
                return self.system(brs)
            case S.Comp(i=i, line=line, branches=brs, base=b):
                isv = self.bind(i)
                return wrap(
                    f"comp^{isv} {self.term(line, 3)} {self.system(brs)}"
                    f" {self.term(b, 3)}", 2)
            case S.HComp(ty=ty, i=i, branches=brs, base=b):
                isv = self.bind(i)
                return wrap(
                    f"hcomp^{isv} {self.term(ty, 3)} {self.system(brs)}"
                    f" {self.term(b, 3)}", 2)
            case S.GlueT(branches=brs, base=b):
                return wrap(f"Glue {self.system(brs, 2)} {self.term(b, 3)}", 2)
            case S.GlueElem(branches=brs, base=b):
                return wrap(f"glue {self.system(brs)} {self.term(b, 3)}", 2)
            case S.Unglue(branches=brs, t=b):
                return wrap(f"unglue {self.system(brs)} {self.term(b, 3)}", 2)
            case S.IdT(ty=a, a0=x, a1=y):
                return wrap(
                    f"Id {self.term(a, 3)} {self.term(x, 3)} {self.term(y, 3)}", 2)
            case S.IdPair(path=w, phi=phi):
                return wrap(f"idPair {self.term(w, 3)} [{self.face(phi)}]", 2)
            case S.IdJ(motive=m, d=d, beta=b):
                return wrap(
                    f"idJ {self.term(m, 3)} {self.term(d, 3)} {self.term(b, 3)}", 2)
            case S.S1():
                return "S1"
            case S.Base():
                return "base"
            case S.Loop(r=r):
                return wrap(f"loop ({self.interval(r)})", 2)
            case S.Inh(ty=a):
                return wrap(f"inh {self.term(a, 3)}", 2)
            case S.Inc(t=u):
                return wrap(f"inc {self.term(u, 3)}", 2)
            case S.Squash(a=a, b=b, r=r):
                return wrap(
                    f"squash {self.term(a, 3)} {self.term(b, 3)}"
                    f" ({self.interval(r)})", 2)
            case S.S1Elim(motive=m, base_case=b, loop_case=l, scrut=x):
                return wrap(
                    f"s1elim {self.term(m, 3)} {self.term(b, 3)}"
                    f" {self.term(l, 3)} {self.term(x, 3)}", 2)
            case S.InhElim(motive=mo, prop=q, fn=f, scrut=x):
                return wrap(
                    f"inhelim {self.term(mo, 3)} {self.term(q, 3)}"
                    f" {self.term(f, 3)} {self.term(x, 3)}", 2)
        raise TypeError(f"print: unknown term {t!r}")


def show_term(t: S.Term) -> str:
    return Printer().term(t)


def quote(v: E.Value) -> S.Term:
    """Read a value back into a term (deep, best-effort normal form)."""
    match v:
        case E.VU():
            return S.UU
        case E.VNat():
            return S.NAT
        case E.VS1():
            return S.S1T
        case E.VZero():
            return S.ZERO
        case E.VBase():
            return S.BASE
        case E.VSuc(n=n):
            return S.Suc(quote(n))
        case E.VPi(dom=d, clo=c):
            x = fresh_name(c.x.hint)
            return S.Pi(x, quote(d), quote(c(E.VVar(x, d))))
        case E.VSigma(dom=d, clo=c):
            x = fresh_name(c.x.hint)
            return S.Sigma(x, quote(d), quote(c(E.VVar(x, d))))
        case E.VLam(dom=d, clo=c):
            x = fresh_name(c.x.hint)
            return S.Lam(x, quote(d), quote(c(E.VVar(x, d))))
        case E.VPathP(i=i, line=line, a0=a0, a1=a1):
            j = fresh_name(i.hint)
            return S.PathP(j, quote(E.act(line, {i: ivar(j)})), quote(a0), quote(a1))
        case E.VPAbs(i=i, body=b):
            j = fresh_name(i.hint)
            return S.PAbs(j, quote(E.act(b, {i: ivar(j)})))
        case E.VPair(fst=a, snd=b):
            return S.Pair(quote(a), quote(b))
        case E.VInh(ty=a):
            return S.Inh(quote(a))
        case E.VInc(t=u):
            return S.Inc(quote(u))
        case E.VSquash(a=a, b=b, r=r):
            return S.Squash(quote(a), quote(b), r)
        case E.VLoop(r=r):
            return S.Loop(r)
        case E.VIdT(ty=a, a0=x, a1=y):
            return S.IdT(quote(a), quote(x), quote(y))
        case E.VIdPair(path=w, phi=phi):
            return S.IdPair(quote(w), phi)
        case E.VGlueT(parts=ps, base=b):
            brs = tuple((face_formula(f), quote(tp), quote(e)) for (f, tp, e) in ps)
            return S.GlueT(brs, quote(b))
        case E.VGlueElem(parts=ps, base=b):
            brs = tuple((face_formula(f), quote(tp)) for (f, tp) in ps)
            return S.GlueElem(brs, quote(b))
        case E.VSystem(parts=ps):
            return S.System(tuple((face_formula(f), quote(u)) for (f, u) in ps))
        case E.VHComp(ty=ty, i=i, parts=ps, base=b):
            j = fresh_name(i.hint)
            brs = tuple(
                (face_formula(f), quote(E.act(u, {i: ivar(j)}))) for (f, u) in ps
            )
            return S.HComp(quote(ty), j, brs, quote(b))
        case E.VVar(name=x):
            return S.Var(x)
        case E.VApp(fn=f, arg=a):
            return S.App(quote(f), quote(a))
        case E.VFst(t=u):
            return S.Fst(quote(u))
        case E.VSnd(t=u):
            return S.Snd(quote(u))
        case E.VPApp(fn=f, r=r):
            return S.PApp(quote(f), r)
        case E.VNatRec(motive=m, z=z, s=s, n=n):
            return S.NatRec(quote(m), quote(z), quote(s), quote(n))
        case E.VIdJ(motive=m, d=d, beta=b):
            return S.IdJ(quote(m), quote(d), quote(b))
        case E.VUnglue(parts=ps, t=u):
            brs = tuple((face_formula(f), quote(e)) for (f, e) in ps)
            return S.Unglue(brs, quote(u))
        case E.VS1Elim(motive=m, base_case=b, loop_case=l, scrut=x):
            return S.S1Elim(quote(m), quote(b), quote(l), quote(x))
        case E.VInhElim(motive=mo, prop=q, fn=f, scrut=x):
            return S.InhElim(quote(mo), quote(q), quote(f), quote(x))
        case E.VCompStuck(i=i, line=line, parts=ps, base=b):
            j = fresh_name(i.hint)
            brs = tuple(
                (face_formula(f), quote(E.act(u, {i: ivar(j)}))) for (f, u) in ps
            )
            return S.Comp(j, quote(E.act(line, {i: ivar(j)})), brs, quote(b))
    raise TypeError(f"quote: unknown value {v!r}")


def normalize_value(v: E.Value) -> str:
    return show_term(quote(v))


# ---------------------------------------------------------------------------
# file loading and the command line


def load_module(path: str, loaded=None, stack=None, globals_=None):
    """Parse path and its imports; returns (path, decl) in dependency order.

    Imports must be acyclic; later declarations see earlier ones (and all
    imported ones) through a shared global scope.
    """
    loaded = loaded if loaded is not None else {}
    stack = stack if stack is not None else []
    globals_ = globals_ if globals_ is not None else {}
    apath = os.path.abspath(path)
    if apath in loaded:
        return []
    if apath in stack:
        raise ParseError(f"import cycle through {os.path.basename(path)}")
    try:
        src = open(apath, encoding="utf-8").read()
    except OSError as e:
        raise IOError(f"cannot read {path}: {e}") from None
    # read the import header first so dependencies parse before our decls
    header = Parser(src, Scope({}))
    imports = []
    while header.eat("import"):
        imports.append(header.expect_ident().text)
    decls = []
    for imp in imports:
        ipath = os.path.join(os.path.dirname(apath), imp + ".cub")
        decls += load_module(ipath, loaded, stack + [apath], globals_)
    mod = parse_module_text(src, apath, globals_)
    loaded[apath] = mod
    decls += [(apath, d) for d in mod.decls]
    return decls


def check_file(path: str, verbose=False):
    """Returns (context, count); raises ParseError/CubicalTypeError/IOError."""
    pairs = load_module(path)
    ctx = Context()
    count = 0
    for (apath, raw) in pairs:
        t0 = time.time()
        decl = Decl(raw.name, raw.ty, raw.body, raw.span, raw.var)
        try:
            ctx = checkdecls(ctx, [decl])
        except CubicalTypeError as e:
            e.path = apath
            raise
        count += 1
        if verbose:
            print(f"  {raw.name}: {1000 * (time.time() - t0):.0f} ms")
    return ctx, count


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="cubical", description="check and normalize cubical proof files")
    ap.add_argument("--verbose", action="store_true",
                    help="per-declaration timing")
    ap.add_argument("--no-eta", action="store_true",
                    help="disable eta rules in conversion (debug)")
    ap.add_argument("--seed", type=int, default=None,
                    help="seed forwarded to randomized self-tests")
    sub = ap.add_subparsers(dest="cmd", required=True)
    p_check = sub.add_parser("check", help="type-check a .cub file")
    p_check.add_argument("file")
    p_norm = sub.add_parser("normalize", help="normalize an expression")
    p_norm.add_argument("file")
    p_norm.add_argument("-e", "--expr", required=True)
    args = ap.parse_args(argv)

    sys.setrecursionlimit(200000)
    if args.seed is not None:
        random.seed(args.seed)

    try:
        if args.cmd == "check":
            _, count = check_file(args.file, verbose=args.verbose)
            print(f"OK {count} declarations")
            return 0
        ctx, _ = check_file(args.file)
        # parse the expression in the file's final scope
        binds = {surf: (VAR_KIND, n) for surf, n in ctx.scope.items()}
        parser = Parser(args.expr, Scope(binds))
        tm = parser.parse_term()
        if parser.peek().kind != "eof":
            parser.fail("trailing input after the expression")
        v, _ty = infer(ctx, tm)
        print(normalize_value(v))
        return 0
    except ParseError as e:
        print(e.diagnostic(getattr(args, "file", "<input>")), file=sys.stderr)
        return 2
    except CubicalTypeError as e:
        print(e.diagnostic(getattr(e, "path", getattr(args, "file", "<input>"))),
              file=sys.stderr)
        return 1
    except IOError as e:
        print(f"error: io: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
