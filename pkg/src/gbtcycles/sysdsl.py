"""A small textual language for polynomial vector fields with parameters.

A system file is line-oriented UTF-8 text::

    # comment
    name: example01
    params: m
    ds1/dt = -s2 + s1*(s1^2 + s2^2 - m)
    ds2/dt =  s1 + s2*(s1^2 + s2^2 - m)

Each ``d<state>/dt =`` line declares one state variable; the order of those
lines fixes the coordinate order.  Right-hand sides admit ``+ - * / ^ ( )``,
integer and decimal literals, and symbols.  Division is allowed only by a
nonzero numeric literal and ``^`` only by a non-negative integer literal, so
every component is a polynomial by construction.  Symbols that are not states
are control parameters: either declared in the optional ``params:`` header
(in which case any undeclared symbol is an error) or, without that header,
collected implicitly in order of first appearance.

Parsing is a plain recursive-descent parser over a token stream; every error
carries a 1-based line and column.
"""

import re
from fractions import Fraction

from .algebra import Polynomial

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUM_RE = re.compile(r"\d+(\.\d+)?")
_STATE_LHS_RE = re.compile(r"^d([A-Za-z_][A-Za-z0-9_]*)/dt$")
_OPS = "+-*/^()"


class SystemFormatError(Exception):
    """Base class for system-text errors; carries a 1-based position."""

    def __init__(self, message, line, col):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(f"line {line}, col {col}: {message}")


class LexError(SystemFormatError):
    """Character that no token can start with."""


class ParseError(SystemFormatError):
    """Token stream does not match the grammar."""


class SemanticError(SystemFormatError):
    """Well-formed text with an invalid meaning (bad symbol, non-polynomial)."""


class _Token:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind, value, line, col):
        self.kind = kind
        self.value = value
        self.line = line
        self.col = col

    def describe(self):
        return "end of line" if self.kind == "END" else f"{self.value!r}"


def _tokenize(text, line, col_base):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in " \t":
            i += 1
            continue
        col = col_base + i
        if ch in _OPS:
            tokens.append(_Token("OP", ch, line, col))
            i += 1
            continue
        m = _NUM_RE.match(text, i)
        if m:
            tokens.append(_Token("NUM", m.group(0), line, col))
            i = m.end()
            continue
        m = _NAME_RE.match(text, i)
        if m:
            tokens.append(_Token("NAME", m.group(0), line, col))
            i = m.end()
            continue
        raise LexError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("END", None, line, col_base + n))
    return tokens


class _ExprParser:
    """Recursive-descent expression parser producing a Polynomial."""

    def __init__(self, tokens, variables):
        self.tokens = tokens
        self.pos = 0
        self.variables = variables

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        tok = self.peek()
        if tok.kind == "OP" and tok.value == op:
            return self.advance()
        raise ParseError(f"expected {op!r} but found {tok.describe()}", tok.line, tok.col)

    def parse(self):
        value = self.expr()
        tok = self.peek()
        if tok.kind != "END":
            raise ParseError(f"unexpected {tok.describe()} after expression", tok.line, tok.col)
        return value

    def expr(self):
        value = self.term()
        while True:
            tok = self.peek()
            if tok.kind == "OP" and tok.value in "+-":
                self.advance()
                rhs = self.term()
                value = value + rhs if tok.value == "+" else value - rhs
            else:
                return value

    def term(self):
        value = self.unary()
        while True:
            tok = self.peek()
            if tok.kind != "OP" or tok.value not in "*/":
                return value
            self.advance()
            if tok.value == "*":
                value = value * self.unary()
                continue
            num = self.peek()
            if num.kind != "NUM":
                raise SemanticError(
                    "division is only allowed by a nonzero numeric literal",
                    num.line,
                    num.col,
                )
            self.advance()
            divisor = _literal_value(num)
            if divisor == 0:
                raise SemanticError("division by zero", num.line, num.col)
            value = value * (1 / divisor)

    def unary(self):
        tok = self.peek()
        if tok.kind == "OP" and tok.value in "+-":
            self.advance()
            value = self.unary()
            return value if tok.value == "+" else -value
        return self.power()

    def power(self):
        value = self.atom()
        tok = self.peek()
        if not (tok.kind == "OP" and tok.value == "^"):
            return value
        self.advance()
        exp = self.peek()
        if exp.kind != "NUM" or "." in exp.value:
            raise ParseError(
                "exponent must be a non-negative integer literal", exp.line, exp.col
            )
        self.advance()
        nxt = self.peek()
        if nxt.kind == "OP" and nxt.value == "^":
            raise ParseError(
                "chained '^' is ambiguous; use parentheses", nxt.line, nxt.col
            )
        return value ** int(exp.value)

    def atom(self):
        tok = self.advance()
        if tok.kind == "NUM":
            return Polynomial.constant(_literal_value(tok), self.variables)
        if tok.kind == "NAME":
            if tok.value not in self.variables:
                raise SemanticError(
                    f"undeclared symbol {tok.value!r} (declare it in 'params:')",
                    tok.line,
                    tok.col,
                )
            exp = tuple(1 if v == tok.value else 0 for v in self.variables)
            return Polynomial(self.variables, {exp: Fraction(1)})
        if tok.kind == "OP" and tok.value == "(":
            value = self.expr()
            self.expect_op(")")
            return value
        raise ParseError(f"expected a value but found {tok.describe()}", tok.line, tok.col)


def _literal_value(tok):
    # Decimal literals are exact: Fraction("0.25") == 1/4.
    return Fraction(tok.value)


class VectorField:
    """Validated polynomial vector field with states and control parameters."""

    __slots__ = ("name", "states", "params", "components")

    def __init__(self, name, states, params, components):
        states = tuple(states)
        params = tuple(params)
        components = tuple(components)
        if len(components) != len(states):
            raise ValueError("one component per state required")
        if set(states) & set(params):
            raise ValueError("states and params overlap")
        table = states + params
        self.name = str(name)
        self.states = states
        self.params = params
        self.components = tuple(c.reordered(table) for c in components)

    @property
    def variables(self):
        return self.states + self.params

    def degree(self):
        """Maximum total degree in the state variables over all components."""
        ns = len(self.states)
        best = -1
        for comp in self.components:
            for exp in comp.terms:
                best = max(best, sum(exp[:ns]))
        return best

    def jacobian(self):
        """Matrix of exact partials, entry (i, j) = d(component i)/d(state j)."""
        return tuple(
            tuple(comp.diff(s) for s in self.states) for comp in self.components
        )

    def specialize(self, bindings):
        """Substitute exact values for some parameters; others stay symbolic."""
        for key in bindings:
            if key in self.states:
                raise ValueError(f"cannot bind state variable {key!r}")
            if key not in self.params:
                raise ValueError(f"unknown parameter {key!r}")
        bound = {k: v for k, v in bindings.items()}
        remaining = tuple(p for p in self.params if p not in bound)
        components = [c.subs(bound).drop_variables(bound) for c in self.components]
        return VectorField(self.name, self.states, remaining, components)

    def render(self):
        """Canonical system text; reparsing it reproduces this field."""
        lines = [f"name: {self.name}"]
        if self.params:
            lines.append("params: " + " ".join(self.params))
        for state, comp in zip(self.states, self.components):
            lines.append(f"d{state}/dt = {comp.text()}")
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return (
            self.name == other.name
            and self.states == other.states
            and self.params == other.params
            and self.components == other.components
        )

    def __hash__(self):
        return hash((self.name, self.states, self.params, self.components))

    def __repr__(self):
        return (
            f"VectorField(name={self.name!r}, states={self.states!r}, "
            f"params={self.params!r}, degree={self.degree()})"
        )


def parse_system(text, default_name="system"):
    """Parse system text into a VectorField.

    Raises LexError / ParseError / SemanticError with 1-based positions.
    """
    name = None
    declared_params = None
    params_pos = 1
    state_lines = []
    seen_states = set()

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        indent = len(line) - len(line.lstrip())
        if ":" in stripped.split("=", 1)[0] and "=" not in stripped.split(":", 1)[0]:
            key, _, rest = stripped.partition(":")
            key = key.strip()
            if key == "name":
                if name is not None:
                    raise SemanticError("duplicate 'name:' header", line_no, 1 + indent)
                name = rest.strip()
                if not name:
                    raise ParseError("empty system name", line_no, 1 + indent)
                continue
            if key == "params":
                if declared_params is not None:
                    raise SemanticError("duplicate 'params:' header", line_no, 1 + indent)
                declared_params = []
                params_pos = line_no
                for part in rest.replace(",", " ").split():
                    if not _NAME_RE.fullmatch(part):
                        raise ParseError(
                            f"invalid parameter name {part!r}", line_no, 1 + indent
                        )
                    if part in declared_params:
                        raise SemanticError(
                            f"duplicate parameter {part!r}", line_no, 1 + indent
                        )
                    declared_params.append(part)
                continue
            raise ParseError(f"unrecognized header {key!r}", line_no, 1 + indent)
        if "=" not in stripped:
            raise ParseError(
                "expected 'd<state>/dt = <expression>'", line_no, 1 + indent
            )
        lhs, _, rhs = line.partition("=")
        m = _STATE_LHS_RE.fullmatch(lhs.strip())
        if not m:
            raise ParseError(
                f"left-hand side must be 'd<state>/dt', got {lhs.strip()!r}",
                line_no,
                1 + indent,
            )
        state = m.group(1)
        if state in seen_states:
            raise SemanticError(f"duplicate state {state!r}", line_no, 1 + indent)
        seen_states.add(state)
        rhs_col = len(line) - len(rhs) + 1
        tokens = _tokenize(rhs, line_no, rhs_col)
        state_lines.append((state, tokens, line_no))

    if not state_lines:
        raise SemanticError("no state equations found", 1, 1)

    states = tuple(s for s, _, _ in state_lines)
    if declared_params is not None:
        for p in declared_params:
            if p in seen_states:
                raise SemanticError(
                    f"parameter {p!r} is already a state", params_pos, 1
                )
        params = tuple(declared_params)
    else:
        params_order = []
        for _, tokens, _ in state_lines:
            for tok in tokens:
                if tok.kind == "NAME" and tok.value not in seen_states:
                    if tok.value not in params_order:
                        params_order.append(tok.value)
        params = tuple(params_order)

    table = states + params
    components = []
    for state, tokens, _ in state_lines:
        parser = _ExprParser(tokens, table)
        components.append(parser.parse())

    return VectorField(name or default_name, states, params, components)


def parse_system_path(path):
    """Read and parse a system file; the filename stem is the default name."""
    from pathlib import Path

    p = Path(path)
    return parse_system(p.read_text(encoding="utf-8"), default_name=p.stem)


def jacobian(vf):
    """Module-level convenience wrapper around VectorField.jacobian."""
    return vf.jacobian()


def specialize(vf, bindings):
    """Module-level convenience wrapper around VectorField.specialize."""
    return vf.specialize(bindings)
