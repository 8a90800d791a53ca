"""Exception types shared across the package."""


class LSBError(Exception):
    """Base class for every error raised by this package."""


class SeedParseError(LSBError, ValueError):
    def __init__(self, message, text, position):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


class WordTooLongError(LSBError):
    def __init__(self, length, max_len):
        super().__init__(f"word has {length} digits, more than the cap of {max_len}")
        self.length = length
        self.max_len = max_len


class RunCountOverflowError(LSBError):
    """A rule that reads run counts back as single digits met a run longer than 9."""

    def __init__(self, digit, count):
        super().__init__(f"run {digit}^{count} is longer than 9")
        self.digit = digit
        self.count = count


class StepBudgetExceeded(LSBError):
    def __init__(self, seed, max_steps):
        super().__init__(f"no repeated word within {max_steps} steps from seed {seed}")
        self.seed = seed
        self.max_steps = max_steps


class PreconditionError(LSBError, ValueError):
    pass


class OverlappingSpaceError(LSBError, ValueError):
    pass
