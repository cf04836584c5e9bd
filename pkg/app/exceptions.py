"""
Exception hierarchy shared by the engines and the CLI.
The CLI maps these onto exit codes (see app/main.py).
"""


class KhovanovError(Exception):
    pass


class DiagramError(KhovanovError, ValueError):
    """Malformed braid word, diagram, crossing id, basepoint or saddle."""


class DimensionMismatch(KhovanovError, ValueError):
    pass


class NotACycle(KhovanovError):
    pass


class ChainMapError(KhovanovError):
    """A map failed to be a chain map, or circles could not be matched."""


class ResourceLimitError(KhovanovError):
    pass


class CertificationError(KhovanovError):
    """A stable bidegree could not be certified at a feasible stage."""


class VerificationFailure(KhovanovError):
    pass


class EmptyTableError(KhovanovError, ValueError):
    """Width and δ-regrouping are undefined for a table with no classes."""
