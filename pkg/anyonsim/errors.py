"""
Exception hierarchy shared by every anyonsim area.
The CLI maps ConfigError and UnknownSuiteError to exit code 2.
"""


class AnyonSimError(Exception):
    """Base class for all anyonsim errors."""


class ConfigError(AnyonSimError):
    """Invalid run configuration or unreadable config file."""


class UnknownStabilizerError(AnyonSimError):
    """Stabilizer kind not known to the lab."""


class LatticeError(AnyonSimError):
    """Site outside the lattice, or lattice too large for exact work."""


class SupportMismatchError(AnyonSimError):
    """Operator word acts on edges the state does not carry."""


class InconsistentOutcomeError(AnyonSimError):
    """Qubit outcome pattern with an odd boundary."""


class MissingReadingError(AnyonSimError):
    """A detector needs a reading that is absent."""


class RegionError(AnyonSimError):
    """Gauge-region contract violation."""


class NeutralityError(AnyonSimError):
    """A correction or regauge left charge behind."""


class DecoderEscalationError(AnyonSimError):
    """The decoder would need a region beyond the volume or one holding two computational anyons."""

    def __init__(self, msg, cluster_id=None):
        super().__init__(msg)
        self.cluster_id = cluster_id


class UnknownInequalityError(AnyonSimError):
    """Constant-chain inequality identifier not known."""


class UnknownSuiteError(AnyonSimError):
    """Verification suite name not known."""
