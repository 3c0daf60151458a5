"""
Exception hierarchy shared by every app.

Input problems (bad files, invalid measures, invalid configs) exit the CLI with code 2,
numerical failures (overflow, solver caps) with code 3.
"""

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3


class OptimalTransportError(Exception):
    """Base class for all library errors"""

    exit_code = EXIT_NUMERIC


# ---------------------------------------------------------------------------
# 입력 / 설정 오류 (exit 2)
# ---------------------------------------------------------------------------

class InputError(OptimalTransportError, ValueError):
    exit_code = EXIT_INPUT


class InvalidMeasureError(InputError):
    pass


class InvalidSimplexError(InputError):
    pass


class DimensionMismatchError(InputError):
    def __init__(self, expected, actual, what='dimension'):
        self.expected = expected
        self.actual = actual
        super().__init__(f"{what} mismatch: expected {expected}, got {actual}")


class EmptyClassError(InputError):
    def __init__(self, class_id):
        self.class_id = class_id
        super().__init__(f"class {class_id} has no observations")


class UnknownClassError(InputError):
    def __init__(self, class_id, n_classes):
        self.class_id = class_id
        self.n_classes = n_classes
        super().__init__(f"class id {class_id} is outside 1..{n_classes}")


class ConfigurationError(InputError):
    pass


class DataFormatError(InputError):
    pass


# ---------------------------------------------------------------------------
# 수치 오류 (exit 3)
# ---------------------------------------------------------------------------

class NumericalError(OptimalTransportError):
    exit_code = EXIT_NUMERIC


class NonFiniteError(NumericalError):
    pass


class ZeroWeightError(NumericalError):
    pass


class SolverError(NumericalError):
    def __init__(self, message, result_code=None):
        self.result_code = result_code
        super().__init__(message)


class InternalSolverError(SolverError):
    pass
