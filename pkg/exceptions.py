from typing import Optional


class NambuError(Exception):
    """Base class for every error raised by the library."""


class ExprSyntaxError(NambuError):
    def __init__(self, message: str, position: Optional[int] = None, text: Optional[str] = None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class UnknownFunctionError(ExprSyntaxError):
    pass


class UnknownVariableError(ExprSyntaxError):
    pass


class UnboundParameterError(NambuError):
    def __init__(self, names):
        self.names = sorted(names)
        super().__init__(f"Unbound parameter(s): {', '.join(self.names)}")


class EvaluationDomainError(NambuError):
    """Division by zero, ln/sqrt of a non-positive argument, complex or non-finite result."""


class DomainExhaustedError(NambuError):
    def __init__(self, wanted: int, found: int, attempts: int):
        self.wanted = wanted
        self.found = found
        self.attempts = attempts
        super().__init__(
            f"Could only find {found} of {wanted} safe sample points after {attempts} attempts"
        )


class MissingInverseError(NambuError):
    pass


class TimeDependentMapError(NambuError):
    pass


class TimeDependentGeneratorError(NambuError):
    pass


class IntegrationError(NambuError):
    def __init__(self, message: str, trajectory=None):
        self.trajectory = trajectory
        super().__init__(message)


class ExpressionBlowupError(NambuError):
    pass


class InvalidStepError(NambuError):
    pass


class NonCanonicalStepError(InvalidStepError):
    pass


class SingularMatrixError(InvalidStepError):
    pass


class InversionError(NambuError):
    pass


class UnknownExampleError(NambuError):
    def __init__(self, example_id: str, known):
        self.example_id = example_id
        super().__init__(f"Unknown example {example_id!r}; known: {', '.join(sorted(known))}")
