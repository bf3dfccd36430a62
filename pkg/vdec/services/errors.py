"""
Error Categories

Base exceptions shared by every service. Concrete errors are declared next to
the code that raises them and subclass one of the categories below; the CLI
maps each category to its exit code.
"""


class VdecError(Exception):
    """Base class for all library errors."""
    pass


class InputError(VdecError):
    """Raised when an input document cannot be read or parsed."""
    pass


class PreconditionFailed(VdecError):
    """Raised when an operation is called outside its hypotheses."""
    pass


class StageFailure(VdecError):
    """Raised when a search or construction stage gives up."""
    pass


class VerificationFailed(VdecError):
    """Raised when a final artifact is rejected by its checker."""
    pass


EXIT_CODES = {
    InputError: 2,
    PreconditionFailed: 3,
    StageFailure: 4,
    VerificationFailed: 5,
}


def exit_code_for(error: BaseException) -> int:
    """Map an exception to the CLI exit code of its category (1 if unknown)."""
    for category, code in EXIT_CODES.items():
        if isinstance(error, category):
            return code
    return 1


CATEGORY_NAMES = {
    InputError: "input",
    PreconditionFailed: "precondition",
    StageFailure: "stage",
    VerificationFailed: "verification",
}


def category_of(error: BaseException) -> str:
    """Category name of an exception ("internal" if unknown)."""
    for category, name in CATEGORY_NAMES.items():
        if isinstance(error, category):
            return name
    return "internal"
