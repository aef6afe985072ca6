from .builtins import BUILTINS, BuiltinSpec, builtin, elliptic_k, list_builtins
from .evaluate import SelfMapReport, check_self_map, elliptic_g_value, eval_jet, eval_value
from .node import Node, NodeKind, has_var, substitute, unparse
from .parser import parse

__all__ = [
    "BUILTINS",
    "BuiltinSpec",
    "Node",
    "NodeKind",
    "SelfMapReport",
    "builtin",
    "check_self_map",
    "elliptic_g_value",
    "elliptic_k",
    "eval_jet",
    "eval_value",
    "has_var",
    "list_builtins",
    "parse",
    "substitute",
    "unparse",
]
