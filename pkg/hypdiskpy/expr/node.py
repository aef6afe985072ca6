from enum import Enum
from typing import Optional, Tuple

from pydantic import model_validator

from hypdiskpy.model import FrozenModel


class NodeKind(str, Enum):
    VAR = "var"
    CONST = "const"
    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"
    NEG = "neg"
    POW_REAL = "pow_real"
    EXP = "exp"
    LOG = "log"
    COTH = "coth"
    # g(w) = integral from 0 to w of (1 - 2c s^2 + s^4)^(-1/2) ds
    ELLIPTIC_G = "elliptic_g"


_ARITY = {
    NodeKind.VAR: 0,
    NodeKind.CONST: 0,
    NodeKind.ADD: 2,
    NodeKind.SUB: 2,
    NodeKind.MUL: 2,
    NodeKind.DIV: 2,
    NodeKind.NEG: 1,
    NodeKind.POW_REAL: 1,
    NodeKind.EXP: 1,
    NodeKind.LOG: 1,
    NodeKind.COTH: 1,
    NodeKind.ELLIPTIC_G: 1,
}

# function-call spelling in the DSL
FUNCTION_NAMES = {
    "exp": NodeKind.EXP,
    "log": NodeKind.LOG,
    "coth": NodeKind.COTH,
}


class Node(FrozenModel):
    """
    Immutable expression tree for an analytic self-map of the disk. ``value`` is
    set for CONST, ``exponent`` for POW_REAL and ``c`` for ELLIPTIC_G.
    """

    kind: NodeKind
    children: Tuple["Node", ...] = ()
    value: Optional[complex] = None
    exponent: Optional[float] = None
    c: Optional[float] = None

    @model_validator(mode="after")
    def _check(self) -> "Node":
        if len(self.children) != _ARITY[self.kind]:
            raise ValueError(f"{self.kind.value} expects {_ARITY[self.kind]} operands, got {len(self.children)}")
        if self.kind == NodeKind.CONST and self.value is None:
            raise ValueError("const node without value")
        if self.kind == NodeKind.POW_REAL and self.exponent is None:
            raise ValueError("pow_real node without exponent")
        if self.kind == NodeKind.ELLIPTIC_G:
            if self.c is None or not -1.0 < self.c < 1.0:
                raise ValueError("elliptic_g requires -1 < c < 1")
        return self


Node.model_rebuild()


def var() -> Node:
    return Node(kind=NodeKind.VAR)


def const(value: complex) -> Node:
    return Node(kind=NodeKind.CONST, value=complex(value))


def add(a: Node, b: Node) -> Node:
    return Node(kind=NodeKind.ADD, children=(a, b))


def sub(a: Node, b: Node) -> Node:
    return Node(kind=NodeKind.SUB, children=(a, b))


def mul(a: Node, b: Node) -> Node:
    return Node(kind=NodeKind.MUL, children=(a, b))


def div(a: Node, b: Node) -> Node:
    return Node(kind=NodeKind.DIV, children=(a, b))


def neg(a: Node) -> Node:
    return Node(kind=NodeKind.NEG, children=(a,))


def pow_real(a: Node, exponent: float) -> Node:
    return Node(kind=NodeKind.POW_REAL, children=(a,), exponent=float(exponent))


def exp(a: Node) -> Node:
    return Node(kind=NodeKind.EXP, children=(a,))


def log(a: Node) -> Node:
    return Node(kind=NodeKind.LOG, children=(a,))


def coth(a: Node) -> Node:
    return Node(kind=NodeKind.COTH, children=(a,))


def elliptic_g(a: Node, c: float) -> Node:
    return Node(kind=NodeKind.ELLIPTIC_G, children=(a,), c=float(c))


def has_var(node: Node) -> bool:
    if node.kind == NodeKind.VAR:
        return True
    return any(has_var(child) for child in node.children)


def substitute(outer: Node, inner: Node) -> Node:
    """
    Composition outer(inner(z)): every VAR of ``outer`` is replaced by ``inner``.
    """
    if outer.kind == NodeKind.VAR:
        return inner
    if not outer.children:
        return outer
    return outer.model_copy(update={"children": tuple(substitute(child, inner) for child in outer.children)})


def _format_number(x: float) -> str:
    text = repr(float(x))
    if text in ("inf", "-inf", "nan"):
        raise ValueError(f"cannot unparse non-finite number {text}")
    return text


def _format_const(value: complex) -> str:
    re_text = _format_number(value.real)
    if value.imag == 0.0:
        return re_text if value.real >= 0 else f"({re_text})"
    im_text = _format_number(abs(value.imag))
    sign = "-" if value.imag < 0 else "+"
    return f"({re_text}{sign}{im_text}*i)"


def unparse(node: Node) -> str:
    """
    Fully parenthesised DSL text; ``parse(unparse(node))`` is structurally equal
    to ``node``.
    """
    kind = node.kind
    if kind == NodeKind.VAR:
        return "z"
    if kind == NodeKind.CONST:
        return _format_const(node.value)
    if kind in (NodeKind.ADD, NodeKind.SUB, NodeKind.MUL, NodeKind.DIV):
        symbol = {NodeKind.ADD: "+", NodeKind.SUB: "-", NodeKind.MUL: "*", NodeKind.DIV: "/"}[kind]
        left, right = node.children
        return f"({unparse(left)}{symbol}{unparse(right)})"
    if kind == NodeKind.NEG:
        return f"(-{unparse(node.children[0])})"
    if kind == NodeKind.POW_REAL:
        exponent = _format_number(node.exponent)
        if node.exponent < 0:
            exponent = f"({exponent})"
        return f"({unparse(node.children[0])}^{exponent})"
    if kind == NodeKind.ELLIPTIC_G:
        return f"ellipticg({unparse(node.children[0])}, c={_format_number(node.c)})"
    return f"{kind.value}({unparse(node.children[0])})"
