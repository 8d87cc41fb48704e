"""Exception hierarchy shared by all lcmlab modules."""


class LcmlabError(Exception):
    """Base class for all lcmlab errors."""


class DomainError(LcmlabError, ValueError):
    """An argument is outside the mathematical domain of the operation."""


class OutOfDomainError(DomainError):
    """x lies below the first interval boundary of the construction."""


class CapacityError(LcmlabError):
    """A request exceeds the sieve limit or a configured hard cap."""


class EmptySetError(LcmlabError):
    """A statistic was requested on a weighted set with total weight zero."""


class PairwiseCapError(CapacityError):
    """Pairwise defect was requested on a set above the O(n^2) cap.

    Use defect_divisor_sum instead; it is exact and scales linearly.
    """


class CacheError(LcmlabError):
    """Base class for sieve cache file problems."""


class CacheFormatError(CacheError):
    """Magic bytes or header structure do not match the cache format."""


class CacheVersionError(CacheError):
    """Cache file has an unsupported format version."""


class CacheChecksumError(CacheError):
    """Cache file fails its whole-file CRC-32 check (truncation/corruption)."""


class ExplicitFileError(LcmlabError, ValueError):
    """An explicit set file is malformed; message includes the line number."""


class ConfigError(LcmlabError, ValueError):
    """A run configuration is inconsistent or out of range."""
