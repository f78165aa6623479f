"""Parser for algebra element expressions.

Grammar (whitespace ignored)::

    expr   := ['-'] tensor (('+' | '-') tensor)*
    tensor := term ['#' term]
    term   := factor (['*'] factor)*
    factor := atom ['^' INT]
    atom   := INT | NAME | CYCLES | '(' expr ')'

``CYCLES`` is a run of parenthesised groups holding only digits and commas,
e.g. ``(123)`` or ``(1,2)(3,4)``.  Names may contain letters, digits, ``_``
and Greek letters.  ``b1#b2`` is the tensor b1 (x) b2 where the context
supports it.  ``a = b`` is read as ``a - b``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .exactcore import WorkbenchError


class ParseError(WorkbenchError):
    pass


_TOKEN = re.compile(
    r"\s*(?:(?P<cyc>(?:\([0-9,\s]+\))+)|(?P<int>\d+)|(?P<name>[^\W\d][\w']*)|(?P<op>[-+*^()=#]))",
    re.UNICODE,
)


def tokenize(text: str):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse {text[pos:]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


@dataclass
class Node:
    kind: str  # sum, prod, pow, neg, int, name, cycles
    args: tuple = ()
    value: object = None


def parse(text: str) -> Node:
    if "=" in text:
        lhs, _, rhs = text.partition("=")
        return Node("sum", (parse(lhs), Node("neg", (parse(rhs),))))
    toks = tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else (None, None)

    def take(kind=None, val=None):
        nonlocal pos
        k, v = peek()
        if k is None or (kind and k != kind) or (val and v != val):
            raise ParseError(f"unexpected {v!r} in {text!r}")
        pos += 1
        return v

    def expr():
        terms = []
        neg = False
        if peek() == ("op", "-"):
            take()
            neg = True
        t = tensor()
        terms.append(Node("neg", (t,)) if neg else t)
        while peek() in (("op", "+"), ("op", "-")):
            op = take()
            t = tensor()
            terms.append(Node("neg", (t,)) if op == "-" else t)
        return terms[0] if len(terms) == 1 else Node("sum", tuple(terms))

    def tensor():
        left = term()
        if peek() == ("op", "#"):
            take()
            return Node("tensor", (left, term()))
        return left

    def term():
        fs = [factor()]
        while True:
            k, v = peek()
            if (k, v) == ("op", "*"):
                take()
                fs.append(factor())
            elif k in ("int", "name", "cyc") or (k, v) == ("op", "("):
                fs.append(factor())
            else:
                break
        return fs[0] if len(fs) == 1 else Node("prod", tuple(fs))

    def factor():
        a = atom()
        if peek() == ("op", "^"):
            take()
            a = Node("pow", (a,), int(take("int")))
        return a

    def atom():
        k, v = peek()
        if k == "int":
            take()
            return Node("int", value=int(v))
        if k == "name":
            take()
            return Node("name", value=v)
        if k == "cyc":
            take()
            return Node("cycles", value=_read_cycles(v))
        if (k, v) == ("op", "("):
            take()
            e = expr()
            take("op", ")")
            return e
        raise ParseError(f"unexpected {v!r} in {text!r}")

    out = expr()
    if pos != len(toks):
        raise ParseError(f"trailing input in {text!r}")
    return out


def _read_cycles(text: str):
    cycles = []
    for body in re.findall(r"\(([^)]*)\)", text):
        body = body.replace(" ", "")
        if not body:
            continue
        pts = body.split(",") if "," in body else list(body)
        cycles.append([int(p) for p in pts])
    return cycles


class Context:
    """Arithmetic callbacks used by ``evaluate``."""

    def integer(self, n: int):
        raise NotImplementedError

    def name(self, s: str):
        raise NotImplementedError

    def cycles(self, cyc):
        raise ParseError("cycle notation not available here")

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def tensor(self, a, b):
        raise ParseError("tensors not available here")


def evaluate(node: Node, ctx: Context):
    k = node.kind
    if k == "int":
        return ctx.integer(node.value)
    if k == "name":
        return ctx.name(node.value)
    if k == "cycles":
        return ctx.cycles(node.value)
    if k == "neg":
        return ctx.neg(evaluate(node.args[0], ctx))
    if k == "tensor":
        return ctx.tensor(evaluate(node.args[0], ctx), evaluate(node.args[1], ctx))
    if k == "sum":
        vals = [evaluate(a, ctx) for a in node.args]
        out = vals[0]
        for v in vals[1:]:
            out = ctx.add(out, v)
        return out
    if k == "prod":
        vals = [evaluate(a, ctx) for a in node.args]
        out = vals[0]
        for v in vals[1:]:
            out = ctx.mul(out, v)
        return out
    if k == "pow":
        base = evaluate(node.args[0], ctx)
        if node.value < 1:
            raise ParseError("exponents must be positive")
        out = base
        for _ in range(node.value - 1):
            out = ctx.mul(out, base)
        return out
    raise ParseError(f"unknown node {k}")


class AlgebraContext(Context):
    """Evaluate into an Algebra; names resolve through ``names`` then field symbols."""

    def __init__(self, A, names=None):
        self.A = A
        self.names = dict(names or {})

    def _scalar(self, c):
        F = self.A.field
        return F.mul_table[c, self.A.unit]

    def integer(self, n):
        return self._scalar(self.A.field.coerce(n))

    def name(self, s):
        if s in self.names:
            return self.names[s]
        F = self.A.field
        if s in ("w", "ω") and F.m > 1:
            return self._scalar(F.gen)
        if s in self.A.labels:
            return self.A.basis_vector(self.A.labels.index(s))
        raise ParseError(f"unknown symbol {s!r}")

    def cycles(self, cyc):
        from . import permgroup as pg
        from .algebra import group_element

        G = self.A.meta.get("group")
        if G is None:
            raise ParseError("cycle notation needs a group algebra")
        return group_element(self.A, pg.from_cycles(G.degree, cyc))

    def add(self, a, b):
        return self.A.field.add_table[a, b]

    def mul(self, a, b):
        return self.A.mul(a, b)

    def neg(self, a):
        return self.A.field.neg_table[a]


def element(A, text: str, names=None):
    """Evaluate ``text`` as an element of A."""
    return evaluate(parse(text), AlgebraContext(A, names))


class TensorContext(AlgebraContext):
    """Evaluate into A (x)_k A; plain algebra elements act on tensors from either side."""

    def _is_t(self, x):
        return isinstance(x, tuple)

    def tensor(self, a, b):
        if self._is_t(a) or self._is_t(b):
            raise ParseError("nested tensor")
        F = self.A.field
        return ("T", F.mul_table[a[:, None], b[None, :]].reshape(-1))

    def add(self, a, b):
        if self._is_t(a) != self._is_t(b):
            raise ParseError("cannot add a tensor and an algebra element")
        if self._is_t(a):
            return ("T", self.A.field.add_table[a[1], b[1]])
        return super().add(a, b)

    def neg(self, a):
        if self._is_t(a):
            return ("T", self.A.field.neg_table[a[1]])
        return super().neg(a)

    def mul(self, a, b):
        A, F = self.A, self.A.field
        n = A.dim
        if self._is_t(a) and self._is_t(b):
            raise ParseError("cannot multiply two tensors")
        if self._is_t(b):
            return ("T", F.matmul(A.lmul(a).T.copy(), b[1].reshape(n, n)).reshape(-1))
        if self._is_t(a):
            return ("T", F.matmul(a[1].reshape(n, n), A.rmul(b)).reshape(-1))
        return super().mul(a, b)


def tensor_element(A, text: str, names=None):
    """Evaluate ``text`` (e.g. ``1#x - x#1``) as a flattened element of A (x)_k A."""
    val = evaluate(parse(text), TensorContext(A, names))
    if not isinstance(val, tuple):
        raise ParseError(f"{text!r} is not a tensor")
    return val[1]
