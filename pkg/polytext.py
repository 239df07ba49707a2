"""Text grammar for polynomials: ``x^2 + 1/2*s*x - 3`` where ``s`` is sqrt(d)."""
from functools import lru_cache

from ply import lex, yacc

from algebra import FieldConfig, Poly
from errors import DomainError, ParseError


class PolyGrammar:
    tokens = ("NUMBER", "X", "S", "PLUS", "MINUS", "TIMES", "DIVIDE", "POW",
              "LPAREN", "RPAREN")

    t_ignore = " \t"
    t_PLUS = r"\+"
    t_MINUS = r"-"
    t_TIMES = r"\*"
    t_DIVIDE = r"/"
    t_POW = r"\^|\*\*"
    t_LPAREN = r"\("
    t_RPAREN = r"\)"
    t_X = r"x"
    t_S = r"s"

    precedence = (
        ("left", "PLUS", "MINUS"),
        ("left", "TIMES", "DIVIDE"),
        ("right", "UMINUS"),
        ("right", "POW"),
    )

    def __init__(self, field):
        self.field = field
        self.text = ""
        self.lexer = lex.lex(module=self, errorlog=lex.NullLogger())
        self.parser = yacc.yacc(module=self, write_tables=False, debug=False,
                                errorlog=yacc.NullLogger())

    # --- lexer ---
    def t_NUMBER(self, t):
        r"\d+"
        t.value = int(t.value)
        return t

    def t_error(self, t):
        raise ParseError(f"unexpected character {t.value[0]!r}", self.text, t.lexpos)

    # --- grammar ---
    def p_expr_binary(self, p):
        """expr : expr PLUS expr
                | expr MINUS expr
                | expr TIMES expr"""
        if p[2] == "+":
            p[0] = p[1] + p[3]
        elif p[2] == "-":
            p[0] = p[1] - p[3]
        else:
            p[0] = p[1] * p[3]

    def p_expr_divide(self, p):
        "expr : expr DIVIDE expr"
        if not p[3].is_constant or p[3].is_zero:
            raise ParseError("division only by a nonzero constant", self.text, p.lexpos(2))
        p[0] = p[1].scale(p[3].constant_term.inverse())

    def p_expr_uminus(self, p):
        """expr : MINUS expr %prec UMINUS
                | PLUS expr %prec UMINUS"""
        p[0] = -p[2] if p[1] == "-" else p[2]

    def p_expr_pow(self, p):
        "expr : expr POW NUMBER"
        p[0] = p[1] ** p[3]

    def p_expr_group(self, p):
        "expr : LPAREN expr RPAREN"
        p[0] = p[2]

    def p_expr_number(self, p):
        "expr : NUMBER"
        p[0] = Poly.const(self.field, p[1])

    def p_expr_x(self, p):
        "expr : X"
        p[0] = Poly.x(self.field)

    def p_expr_s(self, p):
        "expr : S"
        if self.field.is_rational:
            raise ParseError("'s' needs a quadratic field (--d)", self.text, p.lexpos(1))
        p[0] = Poly.const(self.field, self.field.root_d)

    def p_error(self, tok):
        if tok is None:
            raise ParseError("unexpected end of input", self.text, len(self.text))
        raise ParseError(f"unexpected token {tok.value!r}", self.text, tok.lexpos)

    def parse(self, text):
        self.text = text
        if not text.strip():
            raise ParseError("empty polynomial", text, 0)
        return self.parser.parse(text, lexer=self.lexer)


@lru_cache(maxsize=None)
def _grammar(field):
    return PolyGrammar(field)


def parse_poly(text, field=None):
    """Parse `text` into a Poly over `field` (Q by default)."""
    field = field or FieldConfig()
    try:
        return _grammar(field).parse(text)
    except DomainError as e:
        raise ParseError(str(e), text, 0) from e


def parse_linear(text, field=None):
    f = parse_poly(text, field)
    if f.degree != 1:
        raise ParseError("expected a linear polynomial", text, 0)
    return f
