"""Exception hierarchy for the mixling toolkit."""


class MixlingError(Exception):
    """Base class for all toolkit errors."""


class CorpusError(MixlingError):
    """Raised for unreadable or malformed corpus files."""


class PretokenizerError(CorpusError):
    """Raised when an external pre-tokenizer command fails or misbehaves."""


class DictionaryError(MixlingError):
    """Raised for malformed dictionary files or incompatible dictionaries."""


class CalibrationError(MixlingError):
    """Raised when replacement-probability calibration cannot proceed."""


class AlignmentError(MixlingError):
    """Raised for invalid alignment-probe inputs or a broken EM invariant."""
