"""A small expression language for game predicates over the variables x, y, a, b.

Grammar (lowest to highest precedence):

    expr    := or_e
    or_e    := xor_e ("or" xor_e)*
    xor_e   := and_e ("xor" and_e)*
    and_e   := cmp_e ("and" cmp_e)*
    cmp_e   := add_e (("==" | "!=") add_e)?
    add_e   := mul_e (("+" | "-") mul_e)*
    mul_e   := unary (("*" | "%") unary)*
    unary   := "not" unary | "-" unary | atom
    atom    := integer | "x" | "y" | "a" | "b" | "(" expr ")"

Values are integers. Boolean operators and comparisons return 0/1 and treat
any nonzero operand as true; % is the mathematical modulo (result has the
sign of the divisor, so non-negative here).
"""

from __future__ import annotations

import numpy as np

VARIABLES = ("x", "y", "a", "b")


class DslError(ValueError):
    """Lexing, parsing or evaluation error, carrying a 0-based position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TWO_CHAR = ("==", "!=")
_ONE_CHAR = "+-*%()"
_KEYWORDS = ("and", "or", "not", "xor")


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if text[i:i + 2] in _TWO_CHAR:
            tokens.append(("op", text[i:i + 2], i))
            i += 2
        elif c in _ONE_CHAR:
            tokens.append(("op", c, i))
            i += 1
        elif c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j]), i))
            i = j
        elif c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word in _KEYWORDS:
                tokens.append(("op", word, i))
            elif word in VARIABLES:
                tokens.append(("var", word, i))
            else:
                raise DslError(f"unknown identifier '{word}'", i)
            i = j
        else:
            raise DslError(f"unexpected character {c!r}", i)
    tokens.append(("end", None, n))
    return tokens


# AST nodes are ("int", v), ("var", name), ("unary", op, child),
# ("binary", op, left, right).


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, val, at = self.peek()
        if kind != "op" or val != op:
            raise DslError(f"expected '{op}'", at)
        return self.take()

    def parse(self):
        node = self.or_expr()
        kind, _, at = self.peek()
        if kind != "end":
            raise DslError("trailing input after expression", at)
        return node

    def _left_chain(self, sub, ops):
        node = sub()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in ops:
                self.take()
                node = ("binary", val, node, sub())
            else:
                return node

    def or_expr(self):
        return self._left_chain(self.xor_expr, ("or",))

    def xor_expr(self):
        return self._left_chain(self.and_expr, ("xor",))

    def and_expr(self):
        return self._left_chain(self.cmp_expr, ("and",))

    def cmp_expr(self):
        node = self.add_expr()
        kind, val, _ = self.peek()
        if kind == "op" and val in ("==", "!="):
            self.take()
            node = ("binary", val, node, self.add_expr())
        return node

    def add_expr(self):
        return self._left_chain(self.mul_expr, ("+", "-"))

    def mul_expr(self):
        return self._left_chain(self.unary_expr, ("*", "%"))

    def unary_expr(self):
        kind, val, at = self.peek()
        if kind == "op" and val in ("not", "-"):
            self.take()
            return ("unary", val, self.unary_expr())
        return self.atom()

    def atom(self):
        kind, val, at = self.take()
        if kind == "int":
            return ("int", val)
        if kind == "var":
            return ("var", val)
        if kind == "op" and val == "(":
            node = self.or_expr()
            self.expect_op(")")
            return node
        raise DslError("expected a value", at)


def parse_expr(text: str):
    """Parse the expression into an AST; raises DslError on malformed input."""
    return _Parser(_tokenize(text)).parse()


def eval_expr(node, env: dict[str, int]) -> int:
    """Evaluate an AST over integer variable bindings."""
    kind = node[0]
    if kind == "int":
        return node[1]
    if kind == "var":
        return env[node[1]]
    if kind == "unary":
        v = eval_expr(node[2], env)
        return (0 if v else 1) if node[1] == "not" else -v
    _, op, left, right = node
    lv = eval_expr(left, env)
    if op == "and":
        return 1 if (lv != 0 and eval_expr(right, env) != 0) else 0
    if op == "or":
        return 1 if (lv != 0 or eval_expr(right, env) != 0) else 0
    rv = eval_expr(right, env)
    if op == "xor":
        return 1 if (lv != 0) != (rv != 0) else 0
    if op == "==":
        return 1 if lv == rv else 0
    if op == "!=":
        return 1 if lv != rv else 0
    if op == "+":
        return lv + rv
    if op == "-":
        return lv - rv
    if op == "*":
        return lv * rv
    if op == "%":
        if rv == 0:
            raise DslError("modulo by zero", 0)
        return lv % rv
    raise AssertionError(f"unhandled operator {op}")


def parse_predicate_dsl(text: str, nx: int, ny: int, na: int, nb: int) -> np.ndarray:
    """Evaluate a predicate expression on every quadruple.

    Returns a 0/1 table of shape (nx, ny, na, nb); any nonzero integer result
    counts as a win.
    """
    ast = parse_expr(text)
    table = np.zeros((nx, ny, na, nb))
    for x in range(nx):
        for y in range(ny):
            for a in range(na):
                for b in range(nb):
                    v = eval_expr(ast, {"x": x, "y": y, "a": a, "b": b})
                    table[x, y, a, b] = 1.0 if v != 0 else 0.0
    return table
