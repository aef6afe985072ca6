"""
Precedence-climbing parser for the function DSL.

Grammar (tightest binding first): ``^`` (right associative, real constant
exponent), unary ``-``, ``*`` ``/``, ``+`` ``-`` (left associative). Atoms are
decimal literals, ``z``, ``i``, ``pi``, parenthesised expressions and calls
``exp(e)``, ``log(e)``, ``coth(e)``, ``ellipticg(e, c=<real>)`` and builtin
calls such as ``example1(a=0.5)``. Sub-trees without ``z`` are folded into
constants.
"""

import cmath
from typing import Dict, List, Optional, Tuple

from hypdiskpy.exception import HypDiskError, HypDiskParseError
from hypdiskpy.expr import node as ast
from hypdiskpy.expr.builtins import BUILTINS, builtin
from hypdiskpy.expr.evaluate import eval_value
from hypdiskpy.expr.node import FUNCTION_NAMES, Node, NodeKind

OPERATORS = [
    [("+", "left"), ("-", "left")],
    [("*", "left"), ("/", "left")],
]

OPERATOR_PREC = {name: idx for (idx, group) in enumerate(OPERATORS) for (name, _) in group}

CONSTANTS = {
    "i": 1j,
    "pi": complex(cmath.pi),
}

Token = Tuple[str, object, int]


def tokenize(source: str) -> List[Token]:
    """
    Split the input into (kind, value, position) tokens; kinds are ``num``,
    ``name`` and ``op``.
    """
    if not source.isascii():
        raise HypDiskParseError("only ASCII characters are supported")
    result: List[Token] = []
    idx = 0
    n = len(source)
    while idx < n:
        c = source[idx]
        if c.isspace():
            idx += 1
            continue
        if c.isdigit() or (c == "." and idx + 1 < n and source[idx + 1].isdigit()):
            start = idx
            while idx < n and (source[idx].isdigit() or source[idx] == "."):
                idx += 1
            if idx < n and source[idx] in "eE":
                j = idx + 1
                if j < n and source[j] in "+-":
                    j += 1
                if j < n and source[j].isdigit():
                    idx = j
                    while idx < n and source[idx].isdigit():
                        idx += 1
            text = source[start:idx]
            try:
                value = float(text)
            except ValueError:
                raise HypDiskParseError(f"malformed number {text!r}", start)
            result.append(("num", value, start))
            continue
        if c.isalpha() or c == "_":
            start = idx
            while idx < n and (source[idx].isalnum() or source[idx] == "_"):
                idx += 1
            result.append(("name", source[start:idx], start))
            continue
        if c in "+-*/^(),=":
            result.append(("op", c, idx))
            idx += 1
            continue
        raise HypDiskParseError(f"unexpected character {c!r}", idx)
    return result


def _fold(node: Node) -> Node:
    """
    Replace a node whose operands are all constants by its value.
    """
    if node.kind in (NodeKind.VAR, NodeKind.CONST, NodeKind.ELLIPTIC_G):
        return node
    if not all(child.kind == NodeKind.CONST for child in node.children):
        return node
    try:
        return ast.const(eval_value(node, 0j))
    except HypDiskError:
        return node


class _Parser(object):
    def __init__(self, source: str):
        self.source = source
        self.tokens = tokenize(source)
        self.pos = 0

    def _peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _position(self) -> int:
        tok = self._peek()
        return tok[2] if tok is not None else len(self.source)

    def _advance(self) -> Token:
        tok = self._peek()
        if tok is None:
            raise HypDiskParseError("unexpected end of input", len(self.source))
        self.pos += 1
        return tok

    def _expect(self, op: str) -> Token:
        tok = self._peek()
        if tok is None or tok[0] != "op" or tok[1] != op:
            found = "end of input" if tok is None else repr(tok[1])
            raise HypDiskParseError(f"expected {op!r}, found {found}", self._position())
        return self._advance()

    def _is_op(self, op: str) -> bool:
        tok = self._peek()
        return tok is not None and tok[0] == "op" and tok[1] == op

    def parse(self) -> Node:
        if not self.tokens:
            raise HypDiskParseError("empty expression", 0)
        result = self.expression(0)
        tok = self._peek()
        if tok is not None:
            raise HypDiskParseError(f"unexpected token {tok[1]!r}", tok[2])
        return result

    def expression(self, min_prec: int) -> Node:
        lhs = self.unary()
        while True:
            tok = self._peek()
            if tok is None or tok[0] != "op" or tok[1] not in OPERATOR_PREC:
                return lhs
            op_prec = OPERATOR_PREC[tok[1]]
            if op_prec < min_prec:
                return lhs
            self._advance()
            rhs = self.expression(op_prec + 1)
            builder = {"+": ast.add, "-": ast.sub, "*": ast.mul, "/": ast.div}[tok[1]]
            lhs = _fold(builder(lhs, rhs))

    def unary(self) -> Node:
        if self._is_op("-"):
            self._advance()
            return _fold(ast.neg(self.unary()))
        if self._is_op("+"):
            self._advance()
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if not self._is_op("^"):
            return base
        caret = self._advance()
        # right associative; the exponent may carry its own sign
        exponent = self.unary_exponent()
        if exponent.kind != NodeKind.CONST:
            raise HypDiskParseError("exponent must be a real constant", caret[2] + 1)
        if exponent.value.imag != 0.0:
            raise HypDiskParseError("non-real exponent", caret[2] + 1)
        return _fold(ast.pow_real(base, exponent.value.real))

    def unary_exponent(self) -> Node:
        if self._is_op("-"):
            self._advance()
            return _fold(ast.neg(self.unary_exponent()))
        return self.power()

    def atom(self) -> Node:
        tok = self._advance()
        kind, value, position = tok
        if kind == "num":
            return ast.const(value)
        if kind == "op":
            if value == "(":
                inner = self.expression(0)
                self._expect(")")
                return inner
            raise HypDiskParseError(f"unexpected operator {value!r}", position)
        name = value
        if self._is_op("("):
            return self.call(name, position)
        if name == "z":
            return ast.var()
        if name in CONSTANTS:
            return ast.const(CONSTANTS[name])
        raise HypDiskParseError(f"unknown identifier {name!r}", position)

    def call(self, name: str, position: int) -> Node:
        self._expect("(")
        args: List[Node] = []
        kwargs: Dict[str, float] = {}
        if not self._is_op(")"):
            while True:
                tok = self._peek()
                nxt = self.tokens[self.pos + 1] if self.pos + 1 < len(self.tokens) else None
                if tok is not None and tok[0] == "name" and nxt is not None and nxt[0] == "op" and nxt[1] == "=":
                    self.pos += 2
                    kwargs[str(tok[1])] = self._real_constant(tok[2])
                else:
                    if kwargs:
                        raise HypDiskParseError("positional argument after keyword argument", self._position())
                    args.append(self.expression(0))
                if self._is_op(","):
                    self._advance()
                    continue
                break
        self._expect(")")
        if name in FUNCTION_NAMES:
            if len(args) != 1 or kwargs:
                raise HypDiskParseError(f"{name} takes exactly one argument", position)
            return _fold(Node(kind=FUNCTION_NAMES[name], children=(args[0],)))
        if name == "ellipticg":
            if len(args) != 1 or set(kwargs) != {"c"}:
                raise HypDiskParseError("ellipticg takes one argument and the keyword c", position)
            if not -1.0 < kwargs["c"] < 1.0:
                raise HypDiskParseError("ellipticg requires -1 < c < 1", position)
            return ast.elliptic_g(args[0], kwargs["c"])
        if name in BUILTINS:
            if args:
                raise HypDiskParseError(f"builtin {name} takes keyword parameters only", position)
            try:
                return builtin(name, **kwargs)
            except HypDiskParseError as e:
                raise HypDiskParseError(e.msg, position)
        raise HypDiskParseError(f"unknown identifier {name!r}", position)

    def _real_constant(self, position: int) -> float:
        value = self.expression(0)
        if value.kind != NodeKind.CONST:
            raise HypDiskParseError("parameter must be a constant", position)
        if value.value.imag != 0.0:
            raise HypDiskParseError("parameter must be real", position)
        return value.value.real


def parse(text: str) -> Node:
    """
    Parse DSL text into an expression tree.

    :param text: e.g. ``"exp(-((1+z)/(1-z))^0.5)"`` or ``"example4(c=0.6)"``
    :return: the tree; raises HypDiskParseError with the offending position
    """
    return _Parser(text).parse()
