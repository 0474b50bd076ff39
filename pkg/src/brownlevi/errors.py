"""Exception types shared across the workbench."""


class BrownLeviError(Exception):
    """Base class for all workbench errors."""


class InvalidPrime(BrownLeviError):
    """ell divides q, or ell = 2 where the generic Sylow machinery needs it odd."""


class NotCyclotomicProduct(BrownLeviError):
    """A polynomial outside x^k * product-of-cyclotomics form was handed to the factorizer."""


class TooLarge(BrownLeviError):
    """Group enumeration bound exceeded."""


class TooManySubgroups(BrownLeviError):
    """Sylow subgroup-lattice bound exceeded."""


class TooLargeComplex(BrownLeviError):
    """Simplex-count bound for homology exceeded."""


class TooLargeForCharacters(BrownLeviError):
    """Group order or class count exceeds the character-table bounds."""


class NotCommuting(BrownLeviError):
    """Product of two subgroups requested without elementwise commuting."""


class NotAbelian(BrownLeviError):
    """An operation defined on abelian subgroups received a nonabelian one."""


class DefiningCharacteristic(BrownLeviError):
    """ell equals the defining prime p; the reductive layer requires ell != p."""


class NotEClosed(BrownLeviError):
    """delta received a chain with a term that is not e-closed."""


class InDomainError(BrownLeviError):
    """An alternation was applied to a chain already inside the target subcomplex."""


class HypothesisError(BrownLeviError):
    """The prime conditions required by the construction do not hold."""


class GroupSpecError(BrownLeviError):
    """Malformed group specification string."""


class ConfigError(BrownLeviError):
    """Malformed job configuration."""
