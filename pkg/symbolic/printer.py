import sympy
from sympy.printing.precedence import precedence
from sympy.printing.str import StrPrinter


class GrammarPrinter(StrPrinter):
    """Prints sympy trees back in the parser's grammar (^ for powers, ln for logs)."""

    def _print_Pow(self, expr, rational=False):
        prec = precedence(expr)
        if expr.exp is sympy.S.Half and not rational:
            return f"sqrt({self._print(expr.base)})"
        if expr.is_commutative:
            if -expr.exp is sympy.S.Half and not rational:
                return f"1/sqrt({self._print(expr.base)})"
            if expr.exp is sympy.S.NegativeOne:
                return f"1/{self.parenthesize(expr.base, prec, strict=False)}"
        base = self.parenthesize(expr.base, prec, strict=True)
        exponent = self.parenthesize(expr.exp, prec, strict=False)
        return f"{base}^{exponent}"

    def _print_Float(self, expr):
        # shortest text that reads back to the same double
        return repr(float(expr))

    def _print_log(self, expr):
        return f"ln({self._print(expr.args[0])})"

    def _print_Exp1(self, expr):
        return "exp(1)"

    def _print_Pi(self, expr):
        return "pi"


_printer = GrammarPrinter()


def to_text(expr) -> str:
    return _printer.doprint(sympy.sympify(expr))
