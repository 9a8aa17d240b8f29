"""Recursive-descent parser for the surface language.

Keywords: let, in, letrec, match, as, if, then, else, fun, true, false,
dims.  Comprehensions are written ``[e | q, ...]``, generators ``p <- e``,
declarations ``let p = e`` (inside qualifiers), enumerations ``[e .. e]``,
matrix literals ``<< a, b; c, d >>``, matrix generators
``<| e | (i, j) in (m, n) |>``, lookups ``m!(i, j)``, operator sections
``(+)``.  ``--`` starts a line comment.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..syntax import Span
from .ast import (
    Clause, Pattern, PBool, PCons, PList, PListEnd, PListNext, PListRest,
    PNil, PRec, PVar, QDecl, QGen, QGuard, Qual, SApp, SBool, SCons,
    SFlt, SFun, SIf, SInt, SLet, SLetRec, SListComp, SListEnd, SListEnum,
    SListLit, SListNext, SListNil, SListRest, SMatch, SMatDims, SMatGen,
    SMatLit, SMatLookup, SOp, SPrim, SProj, SRec, SStr, SurfaceTerm, SVar,
)

KEYWORDS = {
    "let", "in", "letrec", "match", "as", "if", "then", "else", "fun",
    "true", "false", "dims",
}

# word operators parse at multiplicative precedence
WORD_OPS = {"quot", "mod"}

SYMBOLS = [
    "<|", "|>", "<<", ">>", "<-", "->", "..", "==", "/=", "<=", ">=", "++",
    "(", ")", "[", "]", "{", "}", ",", ";", "|", ":", "=", "<", ">", "+",
    "-", "*", "/", "!", ".",
]


class ParseError(Exception):
    def __init__(self, message: str, span: Optional[Span] = None):
        super().__init__(message)
        self.message = message
        self.span = span


@dataclass
class Token:
    kind: str  # int, float, str, ident, keyword, sym, eof
    text: str
    start: int
    end: int


def tokenize(src: str, file: str = "<input>") -> list[Token]:
    toks: list[Token] = []
    i, n = 0, len(src)
    while i < n:
        c = src[i]
        if c in " \t\r\n":
            i += 1
            continue
        if src.startswith("--", i):
            j = src.find("\n", i)
            i = n if j < 0 else j + 1
            continue
        start = i
        if c.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            if j < n and src[j] == "." and j + 1 < n and src[j + 1].isdigit():
                j += 1
                while j < n and src[j].isdigit():
                    j += 1
                toks.append(Token("float", src[i:j], start, j))
            else:
                toks.append(Token("int", src[i:j], start, j))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            word = src[i:j]
            kind = "keyword" if word in KEYWORDS else "ident"
            toks.append(Token(kind, word, start, j))
            i = j
            continue
        if c == '"':
            j = i + 1
            out = []
            while j < n and src[j] != '"':
                if src[j] == "\\" and j + 1 < n:
                    esc = src[j + 1]
                    out.append({"n": "\n", "t": "\t", '"': '"', "\\": "\\"}.get(esc, esc))
                    j += 2
                else:
                    out.append(src[j])
                    j += 1
            if j >= n:
                raise ParseError("unterminated string literal", Span(start, n, file))
            toks.append(Token("str", "".join(out), start, j + 1))
            i = j + 1
            continue
        for sym in SYMBOLS:
            if src.startswith(sym, i):
                toks.append(Token("sym", sym, start, i + len(sym)))
                i += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", Span(i, i + 1, file))
    toks.append(Token("eof", "", n, n))
    return toks


# precedence levels, loosest first; all left-associative except cons
COMPARE_OPS = {"==", "/=", "<", "<=", ">", ">="}
ADD_OPS = {"+", "-"}
MUL_OPS = {"*", "/"} | WORD_OPS


class Parser:
    def __init__(self, src: str, file: str = "<input>"):
        self.src = src
        self.file = file
        self.toks = tokenize(src, file)
        self.pos = 0

    # -- token plumbing ----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def at_sym(self, *texts: str) -> bool:
        t = self.peek()
        return t.kind == "sym" and t.text in texts

    def at_kw(self, *words: str) -> bool:
        t = self.peek()
        return t.kind == "keyword" and t.text in words

    def expect_sym(self, text: str) -> Token:
        t = self.next()
        if t.kind != "sym" or t.text != text:
            raise self.error(f"expected '{text}', found '{t.text or 'end of input'}'", t)
        return t

    def expect_kw(self, word: str) -> Token:
        t = self.next()
        if t.kind != "keyword" or t.text != word:
            raise self.error(f"expected '{word}', found '{t.text or 'end of input'}'", t)
        return t

    def expect_ident(self) -> Token:
        t = self.next()
        if t.kind != "ident":
            raise self.error(f"expected an identifier, found '{t.text or 'end of input'}'", t)
        return t

    def error(self, msg: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(msg, Span(tok.start, tok.end, self.file))

    def span_from(self, start: int) -> Span:
        end = self.toks[self.pos - 1].end if self.pos else start
        return Span(start, end, self.file)

    # -- entry points -------------------------------------------------------

    def parse_program(self) -> SurfaceTerm:
        term = self.parse_expr()
        t = self.peek()
        if t.kind != "eof":
            raise self.error(f"unexpected '{t.text}' after the program", t)
        return term

    # -- expressions ---------------------------------------------------------

    def parse_expr(self) -> SurfaceTerm:
        start = self.peek().start
        if self.at_kw("if"):
            self.next()
            cond = self.parse_expr()
            self.expect_kw("then")
            then = self.parse_expr()
            self.expect_kw("else")
            otherwise = self.parse_expr()
            return SIf(cond, then, otherwise, span=self.span_from(start))
        if self.at_kw("let"):
            self.next()
            bindings = [self.parse_let_binding()]
            while self.at_sym(";"):
                self.next()
                bindings.append(self.parse_let_binding())
            self.expect_kw("in")
            body = self.parse_expr()
            for pat, rhs in reversed(bindings):
                body = SLet(pat, rhs, body, span=self.span_from(start))
            return body
        if self.at_kw("letrec"):
            self.next()
            groups = self.parse_letrec_groups()
            self.expect_kw("in")
            body = self.parse_expr()
            return SLetRec(groups, body, span=self.span_from(start))
        if self.at_kw("match"):
            self.next()
            scrut = self.parse_expr()
            self.expect_kw("as")
            clauses = self.parse_clause_block(arity=1)
            return SMatch(scrut, clauses, span=self.span_from(start))
        if self.at_kw("fun"):
            self.next()
            if self.at_sym("{"):
                clauses = self.parse_clause_block(arity=None)
            else:
                pats = self.parse_pattern_seq()
                self.expect_sym("->")
                body = self.parse_expr()
                clauses = (Clause(tuple(pats), body, span=self.span_from(start)),)
            return SFun(clauses, span=self.span_from(start))
        return self.parse_binop()

    def parse_let_binding(self) -> tuple[Pattern, SurfaceTerm]:
        pat = self.parse_pattern()
        self.expect_sym("=")
        rhs = self.parse_expr()
        return pat, rhs

    def parse_letrec_groups(self) -> tuple[tuple[str, tuple[Clause, ...]], ...]:
        equations: list[tuple[str, Clause]] = []
        while True:
            start = self.peek().start
            name = self.expect_ident().text
            pats = self.parse_pattern_seq()
            if not pats:
                raise self.error(f"function '{name}' needs at least one parameter")
            self.expect_sym("=")
            body = self.parse_expr()
            equations.append((name, Clause(tuple(pats), body, span=self.span_from(start))))
            if self.at_sym(";"):
                self.next()
                continue
            break
        groups: list[tuple[str, list[Clause]]] = []
        for name, clause in equations:
            if groups and groups[-1][0] == name:
                groups[-1][1].append(clause)
            else:
                groups.append((name, [clause]))
        names = [n for n, _ in groups]
        if len(set(names)) != len(names):
            raise self.error("clauses of one function must be consecutive")
        for name, clauses in groups:
            arities = {len(c.patterns) for c in clauses}
            if len(arities) != 1:
                raise self.error(f"clauses of '{name}' have differing arities")
        return tuple((n, tuple(cs)) for n, cs in groups)

    def parse_clause_block(self, arity: Optional[int]) -> tuple[Clause, ...]:
        self.expect_sym("{")
        clauses = []
        while True:
            start = self.peek().start
            pats = self.parse_pattern_seq()
            if not pats:
                raise self.error("expected a pattern")
            if arity is not None and len(pats) != arity:
                raise self.error(f"expected {arity} pattern(s) per clause")
            self.expect_sym("->")
            body = self.parse_expr()
            clauses.append(Clause(tuple(pats), body, span=self.span_from(start)))
            if self.at_sym(";"):
                self.next()
                continue
            break
        self.expect_sym("}")
        arities = {len(c.patterns) for c in clauses}
        if len(arities) != 1:
            raise self.error("clauses must share one arity")
        return tuple(clauses)

    # binary operators, loosest to tightest: compare, ++, cons, +/-, mul

    def parse_binop(self) -> SurfaceTerm:
        return self.parse_compare()

    def parse_compare(self) -> SurfaceTerm:
        start = self.peek().start
        left = self.parse_concat()
        if self.at_sym(*COMPARE_OPS):
            op = self.next().text
            right = self.parse_concat()
            return SPrim(op, (left, right), span=self.span_from(start))
        return left

    def parse_concat(self) -> SurfaceTerm:
        start = self.peek().start
        left = self.parse_cons()
        while self.at_sym("++"):
            self.next()
            right = self.parse_cons()
            left = SPrim("++", (left, right), span=self.span_from(start))
        return left

    def parse_cons(self) -> SurfaceTerm:
        start = self.peek().start
        head = self.parse_additive()
        if self.at_sym(":"):
            tok = self.next()
            tail = self.parse_cons()  # right-associative
            return SCons(head, tail, span=Span(tok.start, tok.end, self.file))
        return head

    def parse_additive(self) -> SurfaceTerm:
        start = self.peek().start
        left = self.parse_multiplicative()
        while self.at_sym("+", "-"):
            op = self.next().text
            right = self.parse_multiplicative()
            left = SPrim(op, (left, right), span=self.span_from(start))
        return left

    def parse_multiplicative(self) -> SurfaceTerm:
        start = self.peek().start
        left = self.parse_application()
        while self.at_sym("*", "/") or (self.peek().kind == "ident" and self.peek().text in WORD_OPS):
            op = self.next().text
            right = self.parse_application()
            left = SPrim(op, (left, right), span=self.span_from(start))
        return left

    def parse_application(self) -> SurfaceTerm:
        start = self.peek().start
        if self.at_kw("dims"):
            self.next()
            arg = self.parse_postfix()
            return SMatDims(arg, span=self.span_from(start))
        term = self.parse_postfix()
        while self.starts_atom():
            arg = self.parse_postfix()
            term = SApp(term, arg, span=self.span_from(start))
        return term

    def starts_atom(self) -> bool:
        t = self.peek()
        if t.kind == "ident":
            return t.text not in WORD_OPS
        if t.kind in ("int", "float", "str"):
            return True
        if t.kind == "keyword":
            return t.text in ("true", "false")
        return t.kind == "sym" and t.text in ("(", "[", "{", "<<", "<|")

    def parse_postfix(self) -> SurfaceTerm:
        start = self.peek().start
        term = self.parse_atom()
        while True:
            if self.at_sym("."):
                self.next()
                name = self.expect_ident().text
                term = SProj(term, name, span=self.span_from(start))
            elif self.at_sym("!"):
                self.next()
                self.expect_sym("(")
                row = self.parse_expr()
                self.expect_sym(",")
                col = self.parse_expr()
                self.expect_sym(")")
                term = SMatLookup(term, row, col, span=self.span_from(start))
            else:
                return term

    def parse_atom(self) -> SurfaceTerm:
        t = self.peek()
        start = t.start
        if t.kind == "int":
            self.next()
            return SInt(int(t.text), span=self.span_from(start))
        if t.kind == "float":
            self.next()
            return SFlt(float(t.text), span=self.span_from(start))
        if t.kind == "str":
            self.next()
            return SStr(t.text, span=self.span_from(start))
        if t.kind == "keyword" and t.text in ("true", "false"):
            self.next()
            return SBool(t.text == "true", span=self.span_from(start))
        if t.kind == "ident" and t.text not in WORD_OPS:
            self.next()
            return SVar(t.text, span=self.span_from(start))
        if self.at_sym("("):
            self.next()
            # operator section
            nxt = self.peek()
            if (nxt.kind == "sym" and nxt.text in COMPARE_OPS | ADD_OPS | {"*", "/", "++", ":"}
                    and self.peek(1).kind == "sym" and self.peek(1).text == ")") or (
                    nxt.kind == "ident" and nxt.text in WORD_OPS
                    and self.peek(1).kind == "sym" and self.peek(1).text == ")"):
                op = self.next().text
                self.expect_sym(")")
                return SOp(op, span=self.span_from(start))
            if nxt.kind == "sym" and nxt.text == "-" and self.peek(1).kind in ("int", "float"):
                self.next()
                lit = self.next()
                self.expect_sym(")")
                if lit.kind == "int":
                    return SInt(-int(lit.text), span=self.span_from(start))
                return SFlt(-float(lit.text), span=self.span_from(start))
            inner = self.parse_expr()
            self.expect_sym(")")
            return inner
        if self.at_sym("["):
            return self.parse_bracketed_list()
        if self.at_sym("{"):
            return self.parse_record()
        if self.at_sym("<<"):
            return self.parse_matrix_literal()
        if self.at_sym("<|"):
            return self.parse_matrix_gen()
        raise self.error(f"unexpected '{t.text or 'end of input'}'", t)

    def parse_bracketed_list(self) -> SurfaceTerm:
        open_tok = self.expect_sym("[")
        start = open_tok.start
        if self.at_sym("]"):
            self.next()
            return SListNil(span=self.span_from(start))
        first = self.parse_expr()
        if self.at_sym("|"):
            self.next()
            quals = self.parse_qualifiers()
            self.expect_sym("]")
            return SListComp(first, quals, span=self.span_from(start))
        if self.at_sym(".."):
            self.next()
            hi = self.parse_expr()
            self.expect_sym("]")
            return SListEnum(first, hi, span=self.span_from(start))
        rest = self.parse_list_rest()
        return SListLit(first, rest, span=self.span_from(start))

    def parse_list_rest(self) -> SListRest:
        t = self.peek()
        if self.at_sym("]"):
            self.next()
            return SListEnd(span=Span(t.start, t.end, self.file))
        tok = self.expect_sym(",")
        item = self.parse_expr()
        rest = self.parse_list_rest()
        return SListNext(item, rest, span=Span(tok.start, tok.end, self.file))

    def parse_qualifiers(self) -> tuple[Qual, ...]:
        quals = [self.parse_qualifier()]
        while self.at_sym(","):
            self.next()
            quals.append(self.parse_qualifier())
        return tuple(quals)

    def parse_qualifier(self) -> Qual:
        start = self.peek().start
        if self.at_kw("let"):
            self.next()
            pat = self.parse_pattern()
            self.expect_sym("=")
            value = self.parse_expr()
            return QDecl(pat, value, span=self.span_from(start))
        # generator vs guard: try a pattern followed by '<-'
        save = self.pos
        try:
            pat = self.parse_pattern()
            if self.at_sym("<-"):
                self.next()
                src = self.parse_expr()
                return QGen(pat, src, span=self.span_from(start))
        except ParseError:
            pass
        self.pos = save
        cond = self.parse_expr()
        return QGuard(cond, span=self.span_from(start))

    def parse_record(self) -> SurfaceTerm:
        open_tok = self.expect_sym("{")
        start = open_tok.start
        fields = []
        if not self.at_sym("}"):
            while True:
                name = self.expect_ident().text
                self.expect_sym(":")
                value = self.parse_expr()
                fields.append((name, value))
                if self.at_sym(","):
                    self.next()
                    continue
                break
        self.expect_sym("}")
        if len({n for n, _ in fields}) != len(fields):
            raise self.error("duplicate record field")
        return SRec(tuple(fields), span=self.span_from(start))

    def parse_matrix_literal(self) -> SurfaceTerm:
        open_tok = self.expect_sym("<<")
        start = open_tok.start
        rows: list[tuple[SurfaceTerm, ...]] = []
        row: list[SurfaceTerm] = []
        while True:
            row.append(self.parse_expr())
            if self.at_sym(","):
                self.next()
                continue
            if self.at_sym(";"):
                self.next()
                rows.append(tuple(row))
                row = []
                continue
            break
        rows.append(tuple(row))
        self.expect_sym(">>")
        if len({len(r) for r in rows}) != 1:
            raise self.error("matrix rows have differing lengths")
        return SMatLit(tuple(rows), span=self.span_from(start))

    def parse_matrix_gen(self) -> SurfaceTerm:
        open_tok = self.expect_sym("<|")
        start = open_tok.start
        body = self.parse_expr()
        self.expect_sym("|")
        self.expect_sym("(")
        vi = self.expect_ident().text
        self.expect_sym(",")
        vj = self.expect_ident().text
        self.expect_sym(")")
        self.expect_kw("in")
        self.expect_sym("(")
        rows = self.parse_expr()
        self.expect_sym(",")
        cols = self.parse_expr()
        self.expect_sym(")")
        self.expect_sym("|>")
        return SMatGen(body, vi, vj, rows, cols, span=self.span_from(start))

    # -- patterns ------------------------------------------------------------

    def parse_pattern_seq(self) -> list[Pattern]:
        pats = []
        while self.starts_pattern():
            pats.append(self.parse_pattern_atom())
        return pats

    def starts_pattern(self) -> bool:
        t = self.peek()
        if t.kind == "ident" and t.text not in WORD_OPS:
            return True
        if t.kind == "keyword" and t.text in ("true", "false"):
            return True
        return t.kind == "sym" and t.text in ("(", "[", "{")

    def parse_pattern(self) -> Pattern:
        start = self.peek().start
        head = self.parse_pattern_atom()
        if self.at_sym(":"):
            self.next()
            tail = self.parse_pattern()
            return PCons(head, tail, span=self.span_from(start))
        return head

    def parse_pattern_atom(self) -> Pattern:
        t = self.peek()
        start = t.start
        if t.kind == "ident" and t.text not in WORD_OPS:
            self.next()
            return PVar(t.text, span=self.span_from(start))
        if t.kind == "keyword" and t.text in ("true", "false"):
            self.next()
            return PBool(t.text == "true", span=self.span_from(start))
        if self.at_sym("("):
            self.next()
            inner = self.parse_pattern()
            self.expect_sym(")")
            return inner
        if self.at_sym("["):
            self.next()
            if self.at_sym("]"):
                self.next()
                return PNil(span=self.span_from(start))
            first = self.parse_pattern()
            rest = self.parse_pattern_rest()
            return PList(first, rest, span=self.span_from(start))
        if self.at_sym("{"):
            self.next()
            fields = []
            if not self.at_sym("}"):
                while True:
                    name = self.expect_ident().text
                    if self.at_sym(":"):
                        self.next()
                        sub = self.parse_pattern()
                    else:
                        sub = PVar(name, span=self.span_from(start))
                    fields.append((name, sub))
                    if self.at_sym(","):
                        self.next()
                        continue
                    break
            self.expect_sym("}")
            return PRec(tuple(fields), span=self.span_from(start))
        raise self.error(f"expected a pattern, found '{t.text or 'end of input'}'", t)

    def parse_pattern_rest(self) -> PListRest:
        t = self.peek()
        if self.at_sym("]"):
            self.next()
            return PListEnd(span=Span(t.start, t.end, self.file))
        self.expect_sym(",")
        item = self.parse_pattern()
        rest = self.parse_pattern_rest()
        return PListNext(item, rest, span=Span(t.start, t.end, self.file))


def parse(src: str, file: str = "<input>") -> SurfaceTerm:
    return Parser(src, file).parse_program()


def parse_pattern(src: str, file: str = "<pattern>") -> Pattern:
    p = Parser(src, file)
    pat = p.parse_pattern()
    if p.peek().kind != "eof":
        raise p.error("unexpected input after pattern")
    return pat
