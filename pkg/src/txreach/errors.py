"""Exception types shared across the package."""


class TxError(Exception):
    """Base class for all txreach errors."""


class EmptyInput(TxError):
    pass


class NonPositiveRadius(TxError):
    def __init__(self, index: int, value: float):
        super().__init__(f"radius at index {index} must be positive, got {value!r}")
        self.index = index
        self.value = value


class NonFiniteCoordinate(TxError):
    def __init__(self, index: int, value: float):
        super().__init__(f"non-finite coordinate at index {index}: {value!r}")
        self.index = index
        self.value = value


class WrongDimension(TxError):
    def __init__(self, expected: int, got: int):
        super().__init__(f"operation requires dim == {expected}, point set has dim {got}")
        self.expected = expected
        self.got = got


class DimensionMismatch(TxError):
    def __init__(self, expected: int, got: int):
        super().__init__(f"query point has dimension {got}, point set has dimension {expected}")
        self.expected = expected
        self.got = got


class IndexOutOfRange(TxError, IndexError):
    def __init__(self, index: int, n: int):
        super().__init__(f"vertex id {index} out of range for {n} vertices")
        self.index = index
        self.n = n


class ParseError(TxError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class PsiTooLarge(TxError):
    def __init__(self, psi: float, limit: str):
        super().__init__(f"radius ratio {psi:.6g} exceeds the supported bound ({limit})")
        self.psi = psi


class PrecisionOverflow(TxError):
    pass


class LaminarityViolation(TxError):
    pass


class CannotSeparate(TxError):
    pass


class InvalidSpec(TxError):
    pass
