"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class BudgetExceeded(DomainError):
    """An exhaustive search was refused because it exceeds the configured budget."""

    def __init__(self, message: str, max_n: int):
        super().__init__(message)
        self.max_n = max_n


class ReadFileError(DomainError):
    """A read file could not be parsed."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line
