"""Formula AST for propositional team logics.

The AST mirrors the syntax tree: negation is its own node whose only
child is a variable reference, so a negative literal contributes two
nodes to the formula size, and connective chains in the surface syntax
fold left-associatively into binary nodes.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import ArityMismatchError, FormulaSyntaxError, MixedAtomsError

__all__ = [
    "LogicKind",
    "Top",
    "Bot",
    "VarRef",
    "Not",
    "And",
    "Or",
    "Dep",
    "Inc",
    "Indep",
    "Formula",
    "VarTuple",
    "parse_formula",
    "render_formula",
    "subformulas",
    "children",
    "atoms",
    "variables",
    "formula_size",
    "formula_depth",
    "split_count",
    "logic_kind",
    "is_split_free",
]

VAR_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

#: An ordered tuple of variable names.  Order is significant and
#: duplicates are permitted; semantics operations treat positions
#: independently.
VarTuple = tuple[str, ...]


class LogicKind(enum.Enum):
    PL = "PL"
    PDL = "PDL"
    PINC = "PINC"
    PIND = "PIND"


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class VarRef:
    name: str


@dataclass(frozen=True)
class Not:
    # Atomic negation only: the child is always a variable reference.
    child: VarRef


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Dep:
    xs: VarTuple
    ys: VarTuple


@dataclass(frozen=True)
class Inc:
    xs: VarTuple
    ys: VarTuple

    def __post_init__(self):
        if len(self.xs) != len(self.ys):
            raise ArityMismatchError(
                f"inclusion atom requires equal tuple lengths, "
                f"got {len(self.xs)} and {len(self.ys)}"
            )


@dataclass(frozen=True)
class Indep:
    xs: VarTuple
    ys: VarTuple
    zs: VarTuple


Formula = Union[Top, Bot, VarRef, Not, And, Or, Dep, Inc, Indep]

_ATOM_KINDS = {Dep: LogicKind.PDL, Inc: LogicKind.PINC, Indep: LogicKind.PIND}


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (And, Or)):
        return (f.left, f.right)
    if isinstance(f, Not):
        return (f.child,)
    return ()


def subformulas(f: Formula) -> list[Formula]:
    """All AST nodes of ``f`` in pre-order, including ``f`` itself."""
    out = []
    stack = [f]
    while stack:
        node = stack.pop()
        out.append(node)
        stack.extend(reversed(children(node)))
    return out


def atoms(f: Formula) -> list[Formula]:
    """Dependency atoms of ``f`` in pre-order."""
    return [g for g in subformulas(f) if type(g) in _ATOM_KINDS]


def atom_variables(atom: Formula) -> tuple[str, ...]:
    """Variables used by a dependency atom, in order of first occurrence."""
    if isinstance(atom, (Dep, Inc)):
        seq = atom.xs + atom.ys
    elif isinstance(atom, Indep):
        seq = atom.xs + atom.zs + atom.ys
    else:
        raise TypeError(f"not a dependency atom: {atom!r}")
    return tuple(dict.fromkeys(seq))


def variables(f: Formula) -> tuple[str, ...]:
    """Distinct variables of ``f``, sorted by name."""
    seen = set()
    for g in subformulas(f):
        if isinstance(g, VarRef):
            seen.add(g.name)
        elif type(g) in _ATOM_KINDS:
            seen.update(atom_variables(g))
    return tuple(sorted(seen))


def formula_size(f: Formula) -> int:
    """AST node count; a negative literal counts as two nodes."""
    return len(subformulas(f))


def formula_depth(f: Formula) -> int:
    """Length in edges of the longest root-to-leaf path."""
    depth = {}
    for node in reversed(subformulas(f)):
        kids = children(node)
        depth[id(node)] = 1 + max(depth[id(k)] for k in kids) if kids else 0
    return depth[id(f)]


def split_count(f: Formula) -> int:
    return sum(1 for g in subformulas(f) if isinstance(g, Or))


def is_split_free(f: Formula) -> bool:
    return split_count(f) == 0


def logic_kind(f: Formula) -> LogicKind:
    """Infer the logic of ``f`` from the dependency atoms it contains.

    Raises :class:`MixedAtomsError` if atoms of more than one kind occur.
    """
    kinds = {_ATOM_KINDS[type(a)] for a in atoms(f)}
    if not kinds:
        return LogicKind.PL
    if len(kinds) > 1:
        names = ", ".join(sorted(k.value for k in kinds))
        raise MixedAtomsError(f"formula mixes atoms of several logics: {names}")
    return kinds.pop()


# ---------------------------------------------------------------------------
# Rendering

def _render_vlist(vs: VarTuple) -> str:
    return ", ".join(vs)


def render_formula(f: Formula) -> str:
    """Canonical fully parenthesized text; parses back to an equal AST."""
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Bot):
        return "B"
    if isinstance(f, VarRef):
        return f.name
    if isinstance(f, Not):
        return f"!{f.child.name}"
    if isinstance(f, And):
        return f"({render_formula(f.left)} & {render_formula(f.right)})"
    if isinstance(f, Or):
        return f"({render_formula(f.left)} | {render_formula(f.right)})"
    if isinstance(f, Dep):
        return f"=({_render_vlist(f.xs)}; {_render_vlist(f.ys)})"
    if isinstance(f, Inc):
        return f"inc({_render_vlist(f.xs)}; {_render_vlist(f.ys)})"
    if isinstance(f, Indep):
        body = f"{_render_vlist(f.xs)}; {_render_vlist(f.ys)} |"
        if f.zs:
            body += f" {_render_vlist(f.zs)}"
        return f"ind({body})"
    raise TypeError(f"not a formula node: {f!r}")


# ---------------------------------------------------------------------------
# Parsing

_RESERVED = {"T", "B"}


class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind = kind
        self.text = text
        self.pos = pos


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "()&|!;,":
            kind = {
                "(": "lparen", ")": "rparen", "&": "amp", "|": "pipe",
                "!": "bang", ";": "semi", ",": "comma",
            }[c]
            tokens.append(_Token(kind, c, i))
            i += 1
            continue
        if c == "=":
            if i + 1 < n and text[i + 1] == "(":
                tokens.append(_Token("depopen", "=(", i))
                i += 2
                continue
            raise FormulaSyntaxError("'=' must start a dependence atom '=('", i)
        m = VAR_NAME_RE.match(text, i)
        if m:
            word = m.group()
            end = m.end()
            if word in ("inc", "ind") and end < n and text[end] == "(":
                tokens.append(_Token(word + "open", word + "(", i))
                i = end + 1
                continue
            if word in _RESERVED:
                tokens.append(_Token("top" if word == "T" else "bot", word, i))
            else:
                tokens.append(_Token("ident", word, i))
            i = end
            continue
        raise FormulaSyntaxError(f"unexpected character {c!r}", i)
    tokens.append(_Token("eof", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self, kind: str) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != kind:
            raise FormulaSyntaxError(
                f"expected {kind}, found {tok.text or 'end of input'!r}", tok.pos
            )
        self.pos += 1
        return tok

    def parse(self) -> Formula:
        f = self.disj()
        tok = self.peek()
        if tok.kind != "eof":
            raise FormulaSyntaxError(f"unexpected trailing {tok.text!r}", tok.pos)
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek().kind == "pipe":
            self.take("pipe")
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unit()
        while self.peek().kind == "amp":
            self.take("amp")
            f = And(f, self.unit())
        return f

    def unit(self) -> Formula:
        tok = self.peek()
        if tok.kind == "top":
            self.take("top")
            return Top()
        if tok.kind == "bot":
            self.take("bot")
            return Bot()
        if tok.kind == "ident":
            self.take("ident")
            return VarRef(tok.text)
        if tok.kind == "bang":
            self.take("bang")
            nxt = self.peek()
            if nxt.kind != "ident":
                raise FormulaSyntaxError(
                    "non-atomic negation: '!' may only precede a variable", nxt.pos
                )
            self.take("ident")
            return Not(VarRef(nxt.text))
        if tok.kind == "lparen":
            self.take("lparen")
            f = self.disj()
            self.take("rparen")
            return f
        if tok.kind == "depopen":
            self.take("depopen")
            xs = self.vlist()
            self.take("semi")
            ys = self.vlist()
            self.take("rparen")
            return Dep(xs, ys)
        if tok.kind == "incopen":
            self.take("incopen")
            xs = self.vlist()
            self.take("semi")
            ys = self.vlist()
            self.take("rparen")
            return Inc(xs, ys)
        if tok.kind == "indopen":
            self.take("indopen")
            xs = self.vlist()
            self.take("semi")
            ys = self.vlist()
            self.take("pipe")
            zs = self.vlist()
            self.take("rparen")
            return Indep(xs, ys, zs)
        raise FormulaSyntaxError(
            f"expected a formula, found {tok.text or 'end of input'!r}", tok.pos
        )

    def vlist(self) -> VarTuple:
        if self.peek().kind != "ident":
            return ()
        names = [self.take("ident").text]
        while self.peek().kind == "comma":
            self.take("comma")
            names.append(self.take("ident").text)
        return tuple(names)


def parse_formula(text: str) -> Formula:
    """Parse formula text into an AST.

    Rejects non-atomic negation, inclusion atoms with mismatched tuple
    lengths and formulas mixing dependency atoms of several kinds.
    """
    f = _Parser(text).parse()
    logic_kind(f)  # reject mixed atom kinds
    return f
