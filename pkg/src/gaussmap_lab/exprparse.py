"""Tiny arithmetic-expression evaluator for parameter files and tie rules.

Supports + - * / and unary minus, parentheses, the constants pi and i,
the functions sqrt, exp, conj, and (for tie rules) free variables looked
up in an environment mapping.  Everything evaluates to a complex double.
"""

from __future__ import annotations

import ast
import cmath
import math

from .errors import ConfigError

__all__ = ["eval_expr", "parse_complex"]

_FUNCS = {
    "sqrt": cmath.sqrt,
    "exp": cmath.exp,
    "conj": lambda z: complex(z).conjugate(),
}

_CONSTS = {
    "pi": complex(math.pi),
    "i": 1j,
    "j": 1j,
}


def eval_expr(text: str, env: dict | None = None) -> complex:
    """Evaluate a constant expression like "exp(i*pi/6)" or "-3/13*sigma"."""
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse expression {text!r}: {exc}") from None
    return _eval(tree.body, env or {})


def _eval(node, env):
    if isinstance(node, ast.Constant):
        if isinstance(node.value, (int, float, complex)):
            return complex(node.value)
        raise ConfigError(f"non-numeric literal {node.value!r}")
    if isinstance(node, ast.Name):
        if node.id in env:
            return complex(env[node.id])
        if node.id in _CONSTS:
            return _CONSTS[node.id]
        raise ConfigError(f"unknown name {node.id!r}")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, env)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        a = _eval(node.left, env)
        b = _eval(node.right, env)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            if b == 0:
                raise ConfigError("division by zero in expression")
            return a / b
        raise ConfigError(f"operator {type(node.op).__name__} not allowed")
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCS:
            raise ConfigError("only sqrt, exp, conj calls are allowed")
        if len(node.args) != 1 or node.keywords:
            raise ConfigError(f"{node.func.id} takes exactly one argument")
        return _FUNCS[node.func.id](_eval(node.args[0], env))
    raise ConfigError(f"disallowed syntax: {type(node).__name__}")


def parse_complex(value, env: dict | None = None) -> complex:
    """Interpret a JSON-ish value as a complex number.

    Accepts numbers, [re, im] pairs, and expression strings.
    """
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, complex):
        return value
    if isinstance(value, str):
        return eval_expr(value, env)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        re, im = value
        re = eval_expr(re, env).real if isinstance(re, str) else float(re)
        im = eval_expr(im, env).real if isinstance(im, str) else float(im)
        return complex(re, im)
    raise ConfigError(f"cannot interpret {value!r} as a complex number")
