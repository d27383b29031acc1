"""Exception types shared across the package.

Two broad branches let the command line map failures onto exit codes:
``InputError`` covers unreadable, malformed, or corrupt files and bad
configuration; ``DomainError`` covers well-formed queries the model cannot
answer (missing vocabulary, empty shared support, degenerate geometry).
"""


class AnalogySpaceError(Exception):
    """Base class for every error raised by this package."""

    slug = "error"


class InputError(AnalogySpaceError):
    """File, format, or configuration problem."""

    slug = "input"


class DomainError(AnalogySpaceError):
    """A well-formed query the model cannot answer."""

    slug = "domain"


class DecodeError(InputError):
    """Input text that is not valid UTF-8."""

    slug = "decode"

    def __init__(self, message: str, byte_offset: int, path: str | None = None):
        super().__init__(message)
        self.byte_offset = byte_offset
        self.path = path


class FormatError(InputError):
    """A space file with the wrong magic string or an unsupported version."""

    slug = "format"


class IntegrityError(InputError):
    """A space file that is truncated or internally inconsistent."""

    slug = "integrity"


class ConsistencyError(InputError):
    """A co-occurrence table whose marginals contradict its counts."""

    slug = "consistency"


class TestsetParseError(InputError):
    """A test-set line that is neither a section header nor four words."""

    __test__ = False  # keep pytest from collecting this as a test class
    slug = "testset-parse"

    def __init__(self, message: str, line_number: int):
        super().__init__(message)
        self.line_number = line_number


class OOVError(DomainError):
    """Query words missing from the target vocabulary."""

    slug = "oov"

    def __init__(self, words):
        self.words = tuple(words)
        super().__init__("words not in vocabulary: " + ", ".join(self.words))


class NoSharedContextError(DomainError):
    """Query words that share no context dimension."""

    slug = "no-shared-context"

    def __init__(self, words):
        self.words = tuple(words)
        super().__init__(
            "no shared context dimensions for: " + ", ".join(self.words)
        )


class DegenerateRowError(DomainError):
    """A word row with zero mass cannot be L1-normalized."""

    slug = "degenerate-row"


class NoCandidatesError(DomainError):
    """No candidate words remain after exclusions."""

    slug = "no-candidates"


class UnknownDimensionError(DomainError):
    """A context dimension that does not exist in the space."""

    slug = "unknown-dimension"


class DegenerateFigureError(DomainError):
    """Four points that do not span a measurable figure."""

    slug = "degenerate-figure"
