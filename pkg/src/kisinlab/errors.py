"""Exception taxonomy shared by all kisinlab modules."""


class KisinlabError(Exception):
    pass


class NotAUnit(KisinlabError):
    """Inversion of a series/ring element with non-unit constant term."""


class NotInvertible(KisinlabError):
    """Matrix whose constant-term matrix is singular."""


class BadParameters(KisinlabError):
    """Unsupported (p, m, e0, ...) parameter combination."""


class PrecisionExhausted(KisinlabError):
    """A valuation query cannot be certified at the model precision."""


class EntryOutsideRing(KisinlabError):
    """Matrix entry has a term u^j with 0 < j < Delta."""


class HypothesisViolation(KisinlabError):
    """Verified lemma hypothesis or conclusion failed on the given input."""


class GapViolation(HypothesisViolation):
    """A required separation/gap condition on exponents fails."""


class DivisibilityViolation(HypothesisViolation):
    """A required u-power column divisibility fails."""


class IllegalStep(KisinlabError):
    """Allowable step with s_i >= s_j."""


class NotPropertyP(KisinlabError):
    """Input matrix does not satisfy the (P) pattern."""


class NotNormalizable(KisinlabError):
    """Degree normalization failed to contract within the iteration bound."""


class WitnessMismatch(KisinlabError):
    """Stored witness factorization does not reproduce the matrix family."""


class DimensionMismatch(KisinlabError):
    pass


class InputNotFactored(KisinlabError):
    """A claimed block factorization does not hold exactly."""


class SearchSpaceTooLarge(KisinlabError):
    pass


class ConfigError(KisinlabError):
    pass
