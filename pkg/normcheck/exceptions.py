class NormcheckException(Exception):
    def __init__(self, *args: object) -> None:
        super().__init__(*args)


class ParameterError(NormcheckException):
    def __init__(self, *args: object) -> None:
        super().__init__(*args)


class ParameterTypeError(ParameterError, TypeError):
    def __init__(self, *args: object) -> None:
        super().__init__(*args)


class ParameterValueError(ParameterError, ValueError):
    def __init__(self, *args: object) -> None:
        super().__init__(*args)


class IllFormedModel(NormcheckException):
    def __init__(self, diagnostics, *args: object) -> None:
        if not args:
            args = ("The model is not well-formed ({count} error(s))".format(count=len(diagnostics)),)
        super().__init__(*args)
        self.diagnostics = list(diagnostics)


class UnknownSymbol(NormcheckException):
    def __init__(self, name, guessed=None, similarity=0, *args: object) -> None:
        if not args:
            message = "Unknown name `{name}`".format(name=name)
            if guessed is not None:
                message += "\nDid you mean: {guess} (Similarity: {similarity}%)?".format(guess=guessed, similarity=round(similarity, 2))
            args = (message,)
        super().__init__(*args)
        self.name = str(name)
        self.guessed = None if guessed is None else str(guessed)
        self.similarity = similarity


class UnboundVariable(NormcheckException, KeyError):
    def __init__(self, variable, *args: object) -> None:
        super().__init__(*(args or ("No value bound to variable `{variable}`".format(variable=variable),)))
        self.variable = str(variable)

    def __str__(self) -> str:
        return str(self.args[0])


class PreconditionViolated(NormcheckException):
    def __init__(self, act, state, *args: object) -> None:
        super().__init__(*(args or ("The precondition of {act} does not hold".format(act=act),)))
        self.act = act
        self.state = state


class ResourceLimitExceeded(NormcheckException):
    def __init__(self, what: str, limit: int, *args: object) -> None:
        super().__init__(*(args or ("{what} exceeded its limit of {limit}".format(what=what, limit=limit),)))
        self.what = str(what)
        self.limit = int(limit)


class SdlSyntaxError(NormcheckException, ValueError):
    def __init__(self, diagnostics, *args: object) -> None:
        diagnostics = list(diagnostics)
        if not args:
            args = ("; ".join(str(diagnostic) for diagnostic in diagnostics) or "Syntax error",)
        super().__init__(*args)
        self.diagnostics = diagnostics
