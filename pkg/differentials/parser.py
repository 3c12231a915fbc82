"""Text grammar for forms on the curve and for ambient expressions.

    form    := sum [',' 'dbar']
    sum     := ['+'|'-'] term (('+'|'-') term)*
    term    := factor ('*' factor)*
    factor  := number | number'i' | 'i' | '(' signed numbers ')'
             | 'tau' ['^' int] | '~tau' ['^' int]
             | 'bump(' real ',' real ')' | 'hole(' real ',' real ')'

Ambient expressions replace the tau factors by z1, z2, ~z1, ~z2 and end
in an optional ', dbar1' or ', dbar2'. Whitespace is ignored.
"""

import logging
import re
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from django.core.exceptions import ValidationError

from .models import AmbientForm, MonomialFormSum, RadialBump, assemble

logger = logging.getLogger(__name__)

TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?i?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*^(),~])"
    r")"
)

FORM_VARIABLES = ("tau",)
AMBIENT_VARIABLES = ("z1", "z2")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def _syntax_error(message: str, position: int) -> ValidationError:
    return ValidationError(
        "%(message)s at position %(position)s.",
        code="syntax",
        params={"message": message, "position": position},
    )


def tokenize(text: str) -> List[Token]:
    tokens = []
    position = 0
    while position < len(text):
        if text[position:].strip() == "":
            break
        match = TOKEN_RE.match(text, position)
        if match is None or match.end() == position:
            offset = position + (len(text[position:]) - len(text[position:].lstrip()))
            raise _syntax_error(f"Unexpected character {text[offset]!r}", offset)
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        position = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent over the token list.

    A parsed term is (coefficient, exponents, envelope) where exponents
    counts each variable name (with a leading '~' for conjugates).
    """

    def __init__(self, text: str, variables: Tuple[str, ...], tails: Dict[str, Optional[int]]):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0
        self.variables = variables
        self.tails = tails

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def _accept(self, text: str) -> bool:
        if self.current.text == text and self.current.kind != "end":
            self.index += 1
            return True
        return False

    def _expect(self, text: str) -> Token:
        if self.current.text != text or self.current.kind == "end":
            found = self.current.text or "end of input"
            raise _syntax_error(f"Expected {text!r} but found {found!r}", self.current.position)
        return self._advance()

    def parse(self):
        terms = self._sum()
        tail = None
        if self._accept(","):
            token = self._advance()
            if token.kind != "name" or token.text not in self.tails:
                expected = " or ".join(repr(t) for t in self.tails)
                raise _syntax_error(f"Expected {expected}", token.position)
            tail = self.tails[token.text]
        if self.current.kind != "end":
            raise _syntax_error(f"Unexpected {self.current.text!r}", self.current.position)
        return terms, tail

    def _sum(self):
        sign = -1 if self._accept("-") else 1
        if sign == 1:
            self._accept("+")
        terms = [self._term(sign)]
        while self.current.text in ("+", "-") and self.current.kind == "op":
            sign = 1 if self._advance().text == "+" else -1
            terms.append(self._term(sign))
        return terms

    def _term(self, sign: int):
        coeff_box = [complex(sign)]
        exponents: Counter = Counter()
        envelope: List[RadialBump] = []
        self._factor(exponents, envelope, coeff_box)
        while self._accept("*"):
            self._factor(exponents, envelope, coeff_box)
        return coeff_box[0], exponents, tuple(envelope)

    def _factor(self, exponents: Counter, envelope: List[RadialBump], coeff_box: List[complex]):
        token = self.current
        if token.kind == "number":
            self._advance()
            coeff_box[0] *= _number(token.text)
            return
        if token.text == "(":
            coeff_box[0] *= self._complex_literal()
            return
        conjugate = self._accept("~")
        token = self._advance()
        if token.kind != "name":
            found = token.text or "end of input"
            raise _syntax_error(f"Expected a factor but found {found!r}", token.position)
        if token.text == "i" and not conjugate:
            coeff_box[0] *= 1j
            return
        if token.text in ("bump", "hole") and not conjugate:
            envelope.append(self._envelope(token))
            return
        if token.text not in self.variables:
            raise _syntax_error(f"Unknown name {token.text!r}", token.position)
        key = ("~" if conjugate else "") + token.text
        exponents[key] += self._exponent()

    def _exponent(self) -> int:
        if not self._accept("^"):
            return 1
        if self.current.text == "-":
            raise ValidationError(
                "Negative exponent at position %(position)s.",
                code="negative_exponent",
                params={"position": self.current.position},
            )
        token = self._advance()
        if token.kind != "number" or not token.text.isdigit():
            raise _syntax_error("Expected a non-negative integer exponent", token.position)
        return int(token.text)

    def _real(self) -> float:
        sign = -1.0 if self._accept("-") else 1.0
        token = self._advance()
        if token.kind != "number" or token.text.endswith("i"):
            raise _syntax_error("Expected a real number", token.position)
        return sign * float(token.text)

    def _envelope(self, name: Token) -> RadialBump:
        self._expect("(")
        rho0sq = self._real()
        self._expect(",")
        rho1sq = self._real()
        self._expect(")")
        bump = RadialBump(rho0sq, rho1sq, inverted=name.text == "hole")
        bump.clean()
        return bump

    def _complex_literal(self) -> complex:
        """'(' ['+'|'-'] number (('+'|'-') number)* ')', numbers possibly imaginary."""
        self._expect("(")
        value = 0j
        sign = -1 if self._accept("-") else 1
        if sign == 1:
            self._accept("+")
        while True:
            token = self._advance()
            if token.kind == "number":
                value += sign * _number(token.text)
            elif token.kind == "name" and token.text == "i":
                value += sign * 1j
            else:
                raise _syntax_error("Expected a number", token.position)
            if self._accept(")"):
                return value
            if self.current.text not in ("+", "-"):
                raise _syntax_error("Expected '+', '-' or ')'", self.current.position)
            sign = 1 if self._advance().text == "+" else -1


def _number(text: str) -> complex:
    if text.endswith("i"):
        return 1j * float(text[:-1])
    return complex(float(text))


def parse_expr(text: str) -> MonomialFormSum:
    """Parse a function or (0,1)-form in τ, e.g. ``"bump(0.04,0.36)*~tau, dbar"``."""
    terms, tail = _Parser(text, FORM_VARIABLES, {"dbar": 1}).parse()
    by_envelope: Dict[tuple, list] = {}
    for coeff, exponents, envelope in terms:
        by_envelope.setdefault(tuple(sorted(envelope)), []).append(
            (exponents["tau"], exponents["~tau"], coeff)
        )
    form = assemble(by_envelope, tail or 0)
    logger.debug("parsed %r into %d piece(s)", text, len(list(form.pieces())))
    return form


def parse_ambient(text: str) -> AmbientForm:
    """Parse a polynomial in z1, z2, ~z1, ~z2 with an optional ``, dbar1``/``, dbar2``."""
    terms, tail = _Parser(text, AMBIENT_VARIABLES, {"dbar1": 1, "dbar2": 2}).parse()
    ambient_terms = []
    for coeff, exponents, envelope in terms:
        if envelope:
            raise ValidationError(
                "Envelopes are not allowed in ambient expressions.", code="syntax",
                params={"position": 0},
            )
        ambient_terms.append(
            (exponents["z1"], exponents["z2"], exponents["~z1"], exponents["~z2"], coeff)
        )
    return AmbientForm(tuple(ambient_terms), dzbar=tail)
