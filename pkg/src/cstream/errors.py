"""Exception hierarchy shared by the parser, evaluator, indexer and CLI."""


class CStreamError(Exception):
    """Base class for every error raised by this package."""


class ParseError(CStreamError):
    """Syntax error or statically detectable program error."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} at line {line}, column {column}"
        super().__init__(message)


class EvalError(CStreamError):
    """A runtime error; ``chain`` holds the pending calls, outermost first."""

    kind = "runtime error"

    def __init__(self, message=""):
        super().__init__(message)
        self.message = message
        self.chain = ()

    def diagnostic(self):
        text = f"{self.kind}: {self.message}" if self.message else self.kind
        if self.chain:
            chain = [c if len(c) <= 40 else c[:37] + "..." for c in self.chain]
            if len(chain) > 6:
                chain = chain[:3] + [f"... {len(chain) - 5} more ..."] + chain[-2:]
            text += " [in " + " -> ".join(chain) + "]"
        return text


class IllFormedStream(EvalError):
    kind = "ill-formed stream"

    def __init__(self, var, value):
        from .values import show_stream

        super().__init__(f"{var} = {show_stream(value)} fails the well-definedness check")
        self.var = var
        self.value = value


class OpenIndexAccess(EvalError):
    kind = "open index access"

    def __init__(self, var, index=None):
        where = f" at index {index}" if index is not None else ""
        super().__init__(f"variable {var} has no definition{where}")
        self.var = var
        self.index = index


class DivergentAccess(EvalError):
    kind = "divergent access"

    def __init__(self, var, index):
        super().__init__(f"element {index} of {var} depends on itself")
        self.var = var
        self.index = index


class DivisionByZero(EvalError):
    kind = "division by zero"


class BudgetExceeded(EvalError):
    kind = "budget exceeded"

    def __init__(self, limit, unit="steps"):
        if unit == "steps":
            super().__init__(f"no result within {limit} steps")
        else:
            super().__init__(f"more than {limit} {unit}")
        self.limit = limit
        self.unit = unit


class ArityMismatch(EvalError):
    kind = "arity mismatch"


class UnknownFunction(EvalError):
    kind = "unknown function"


class TypeMismatch(EvalError):
    kind = "type mismatch"
