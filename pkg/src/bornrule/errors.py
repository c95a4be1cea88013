"""Exception hierarchy.

Each leaf maps onto a distinct CLI exit code (see :mod:`bornrule.cli`).
"""


class BornRuleError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(BornRuleError, ValueError):
    """Inputs are inconsistent: arity mismatch, malformed config, bad field."""


class AxiomConflictError(ConfigurationError):
    """The axiom set does not admit a derivation (e.g. both or neither
    of measurement neutrality and branch counting are set)."""


class UnsupportedError(ConfigurationError):
    """Operation is only defined for a narrower class of inputs."""


class SizeError(BornRuleError, ValueError):
    """Problem size outside the supported range."""
