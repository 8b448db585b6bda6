"""
Term Parser Module
Reads and prints polynomials in the term grammar shared by the CLI and presentation files
"""

import re
from typing import Dict, List, NamedTuple

from errors import TermParseError
from rational_linalg import ONE, Rational, format_rational, rational
from term_algebra import GLYPH_NAMES, Monomial, Node, Polynomial, Signature, accumulate, is_leaf

LETTER_VARIABLES = {"a": 1, "b": 2, "c": 3, "d": 4}

_TOKEN = re.compile(r"\s*(?:(?P<number>\d+(?:/\d+)?)|(?P<word>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>\S))")


class Token(NamedTuple):
    kind: str  # number, var, glyph, open, close, sign
    value: object
    column: int


def tokenize(text: str, sig: Signature) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match or match.end() == pos:
            break
        column = match.start(match.lastgroup) + 1
        pos = match.end()
        if match.group("number") is not None:
            tokens.append(Token("number", match.group("number"), column))
        elif match.group("word") is not None:
            tokens.append(Token("var", _variable(match.group("word"), column), column))
        else:
            sym = match.group("sym")
            if sym == "(":
                tokens.append(Token("open", sym, column))
            elif sym == ")":
                tokens.append(Token("close", sym, column))
            elif sym in "+-":
                tokens.append(Token("sign", sym, column))
            elif sym in sig.glyphs:
                tokens.append(Token("glyph", sig.by_glyph(sym).name, column))
            elif sym in GLYPH_NAMES:
                raise TermParseError(f"glyph {sym!r} is not part of signature {' '.join(sig.glyphs)}", column)
            else:
                raise TermParseError(f"unknown glyph {sym!r}", column)
    return tokens


def _variable(word: str, column: int) -> int:
    if word in LETTER_VARIABLES:
        return LETTER_VARIABLES[word]
    if re.fullmatch(r"x[1-9][0-9]*", word):
        return int(word[1:])
    raise TermParseError(f"unknown variable token {word!r}", column)


class _Reader:
    def __init__(self, tokens: List[Token], text: str):
        self.tokens = tokens
        self.index = 0
        self.end_column = len(text) + 1

    def peek(self):
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def take(self) -> Token:
        token = self.peek()
        if token is None:
            raise TermParseError("unexpected end of term", self.end_column)
        self.index += 1
        return token


def parse(text: str, sig: Signature) -> Polynomial:
    """Parse a polynomial such as '(a<(b<c)) + ((b<c)>a)' or '-3/2 x1*x2'"""
    tokens = tokenize(text, sig)
    if not tokens:
        raise TermParseError("empty term", 1)
    if len(tokens) == 1 and tokens[0].kind == "number" and rational(tokens[0].value) == 0:
        return Polynomial.zero()
    reader = _Reader(tokens, text)
    terms: Dict[Monomial, Rational] = {}
    first = True
    while reader.peek() is not None:
        sign = ONE
        token = reader.peek()
        if token.kind == "sign":
            reader.take()
            sign = -ONE if token.value == "-" else ONE
        elif not first:
            raise TermParseError("expected '+' or '-' between terms", token.column)
        coeff = sign * _scalar(reader)
        monomial = _product(reader, top=True)
        accumulate(terms, {monomial: coeff})
        first = False
    return Polynomial(terms)


def parse_monomial(text: str, sig: Signature) -> Monomial:
    poly = parse(text, sig)
    if len(poly) != 1 or next(iter(poly.items()))[1] != ONE:
        raise TermParseError(f"expected a single monomial, got {text!r}")
    return next(iter(poly))


def _scalar(reader: _Reader) -> Rational:
    token = reader.peek()
    if token is None or token.kind != "number":
        return ONE
    reader.take()
    try:
        value = rational(token.value)
    except ZeroDivisionError:
        raise TermParseError(f"zero denominator in {token.value!r}", token.column) from None
    if value == 0:
        raise TermParseError("zero coefficient", token.column)
    return value


def _product(reader: _Reader, top: bool) -> Monomial:
    left = _atom(reader)
    token = reader.peek()
    if token is None or token.kind != "glyph":
        return left
    reader.take()
    right = _atom(reader)
    after = reader.peek()
    if after is not None and after.kind == "glyph":
        raise TermParseError("unparenthesized double product; add parentheses", after.column)
    if top and after is not None and after.kind != "sign":
        raise TermParseError(f"unexpected {after.value!r}", after.column)
    return Node(token.value, left, right)


def _atom(reader: _Reader) -> Monomial:
    token = reader.take()
    if token.kind == "var":
        return token.value
    if token.kind == "open":
        inner = _product(reader, top=False)
        close = reader.take()
        if close.kind != "close":
            raise TermParseError("expected ')'", close.column)
        return inner
    raise TermParseError(f"unexpected {token.value!r}", token.column)


def format_monomial(m: Monomial, sig: Signature, top: bool = True) -> str:
    if is_leaf(m):
        return f"x{m}"
    body = f"{format_monomial(m.left, sig, False)}{sig.glyph_of(m.op)}{format_monomial(m.right, sig, False)}"
    return body if top else f"({body})"


def format_polynomial(p: Polynomial, sig: Signature) -> str:
    """Leading term first; '-' attached to the first term, ' + ' and ' - ' between terms"""
    if p.is_zero():
        return "0"
    parts: List[str] = []
    for i, (m, c) in enumerate(p.sorted_terms(sig)):
        magnitude = -c if c < 0 else c
        body = format_monomial(m, sig)
        if magnitude != ONE:
            body = f"{format_rational(magnitude)} {body}"
        if i == 0:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(parts)


def parse_equation(text: str, sig: Signature) -> Polynomial:
    """'lhs = rhs' becomes lhs - rhs; a bare polynomial is taken as '= 0'"""
    if text.count("=") > 1:
        raise TermParseError("more than one '=' in relation")
    if "=" not in text:
        return parse(text, sig)
    lhs, rhs = text.split("=", 1)
    return parse(lhs, sig) - parse(rhs, sig)
