"""Reader and writer for a small OpenQASM 2.0 subset.

Accepted statements (one or more per line, each terminated by ``;``)::

    OPENQASM 2.0;
    include "qelib1.inc";          // accepted and ignored
    qreg q[5];                     // exactly one register, before any gate
    h q[0];
    rz(-pi/4) q[3];
    rzz(0.25*pi) q[1],q[2];
    barrier q;                     // accepted and ignored

Angle expressions may use float literals, ``pi``, ``+ - * /``, unary minus
and parentheses. ``//`` starts a comment running to the end of the line.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .circuit import Circuit
from .gates import CATALOG, CatalogError, Gate


class QasmError(ValueError):
    def __init__(self, msg: str, line: int, col: int) -> None:
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>//[^\n]*)
  | (?P<nl>\n)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<str>"[^"\n]*")
  | (?P<op>[-+*/()\[\],;])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise QasmError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str) -> None:
        self.toks = _tokenize(text)
        self.pos = 0
        self.reg: str | None = None
        self.size = 0
        self.gates: list[Gate] = []

    @property
    def tok(self) -> _Tok:
        return self.toks[self.pos]

    def fail(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        raise QasmError(msg, tok.line, tok.col)

    def advance(self) -> _Tok:
        t = self.tok
        self.pos += 1
        return t

    def expect(self, text: str) -> _Tok:
        if self.tok.text != text:
            self.fail(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def parse(self) -> Circuit:
        while self.tok.kind != "eof":
            self.statement()
        if self.reg is None:
            self.fail("missing qreg declaration")
        return Circuit(self.size, self.gates)

    def statement(self) -> None:
        t = self.tok
        if t.kind != "id":
            self.fail(f"expected a statement, found {t.text!r}")
        if t.text == "OPENQASM":
            self.advance()
            if self.tok.kind != "num" or self.tok.text not in ("2", "2.0"):
                self.fail("only OPENQASM 2.0 is supported")
            self.advance()
        elif t.text == "include":
            self.advance()
            if self.tok.kind != "str":
                self.fail("expected a quoted file name")
            self.advance()
        elif t.text == "qreg":
            self.advance()
            if self.reg is not None:
                self.fail("only one qreg is supported", t)
            name = self.advance()
            if name.kind != "id":
                self.fail("expected a register name", name)
            self.expect("[")
            size = self.advance()
            if size.kind != "num" or not size.text.isdigit() or int(size.text) < 1:
                self.fail("register size must be a positive integer", size)
            self.expect("]")
            self.reg, self.size = name.text, int(size.text)
        elif t.text == "barrier":
            self.advance()
            while self.tok.text != ";" and self.tok.kind != "eof":
                self.advance()
        elif t.text in ("creg", "measure", "reset", "if", "gate", "opaque"):
            self.fail(f"{t.text!r} is outside the supported subset")
        else:
            self.gate()
        self.expect(";")

    def gate(self) -> None:
        name = self.advance()
        kind = name.text.lower()
        if kind not in CATALOG:
            self.fail(f"unknown gate {name.text!r}", name)
        if self.reg is None:
            self.fail("gate before qreg declaration", name)
        params: list[float] = []
        if self.tok.text == "(":
            self.advance()
            params.append(self.expr())
            while self.tok.text == ",":
                self.advance()
                params.append(self.expr())
            self.expect(")")
        qubits = [self.qubit()]
        while self.tok.text == ",":
            self.advance()
            qubits.append(self.qubit())
        try:
            self.gates.append(Gate(kind, tuple(qubits), tuple(params)))
        except CatalogError as exc:
            self.fail(str(exc), name)

    def qubit(self) -> int:
        reg = self.advance()
        if reg.kind != "id" or reg.text != self.reg:
            self.fail(f"expected register {self.reg!r}, found {reg.text!r}", reg)
        self.expect("[")
        idx = self.advance()
        if idx.kind != "num" or not idx.text.isdigit():
            self.fail("qubit index must be a non-negative integer", idx)
        self.expect("]")
        q = int(idx.text)
        if q >= self.size:
            self.fail(f"qubit index {q} out of range for {self.reg}[{self.size}]", idx)
        return q

    # expr := term (('+'|'-') term)* ; term := unary (('*'|'/') unary)* ; unary := '-' unary | atom
    def expr(self) -> float:
        val = self.term()
        while self.tok.text in "+-" and self.tok.kind == "op":
            op = self.advance().text
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self) -> float:
        val = self.unary()
        while self.tok.text in ("*", "/"):
            op = self.advance()
            rhs = self.unary()
            if op.text == "*":
                val *= rhs
            elif rhs == 0:
                self.fail("division by zero", op)
            else:
                val /= rhs
        return val

    def unary(self) -> float:
        if self.tok.text in ("-", "+"):
            sign = -1.0 if self.advance().text == "-" else 1.0
            return sign * self.unary()
        t = self.advance()
        if t.kind == "num":
            return float(t.text)
        if t.kind == "id" and t.text == "pi":
            return math.pi
        if t.text == "(":
            val = self.expr()
            self.expect(")")
            return val
        self.fail(f"unexpected {t.text or 'end of input'!r} in angle expression", t)


def parse_qasm(text: str) -> Circuit:
    """Parse subset QASM text into a :class:`Circuit`.

    Raises:
        QasmError: With the line and column of the offending token.
    """
    return _Parser(text).parse()


def emit_qasm(c: Circuit) -> str:
    """Serialize ``c``; angles use 17 significant digits so doubles round-trip."""
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{c.num_qubits}];"]
    for g in c.gates:
        args = f"({','.join(format(p, '.17g') for p in g.params)})" if g.params else ""
        targets = ",".join(f"q[{q}]" for q in g.qubits)
        lines.append(f"{g.kind}{args} {targets};")
    return "\n".join(lines) + "\n"


def load_qasm(path) -> Circuit:
    with open(path, encoding="utf-8") as fh:
        return parse_qasm(fh.read())
