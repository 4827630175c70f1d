"""Exception hierarchy.

Every error carries a ``category`` used as the machine-parsable prefix on CLI
failures, and an ``exit_code`` that the CLI returns.
"""


class HadamardError(Exception):
    category = "Error"
    exit_code = 4


class InvalidDims(HadamardError, ValueError):
    category = "InvalidDims"
    exit_code = 1


class NotHermitian(HadamardError, ValueError):
    category = "NotHermitian"
    exit_code = 4


class InvalidState(HadamardError, ValueError):
    category = "InvalidState"
    exit_code = 1


class InvalidEnsemble(HadamardError, ValueError):
    category = "InvalidEnsemble"
    exit_code = 1


class InvalidParameters(HadamardError, ValueError):
    category = "InvalidParameters"
    exit_code = 1


class ValidationError(HadamardError, ValueError):
    category = "ValidationError"
    exit_code = 1

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class NotClassical(HadamardError):
    category = "NotClassical"
    exit_code = 3


class SizeLimit(HadamardError):
    category = "SizeLimit"
    exit_code = 3


class ParseError(HadamardError):
    category = "ParseError"
    exit_code = 2


class IoError(HadamardError, OSError):
    category = "IoError"
    exit_code = 2
