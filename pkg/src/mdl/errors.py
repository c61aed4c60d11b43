"""Exception hierarchy shared by every module."""


class MDLError(Exception):
    """Base class for all package errors."""


class DomainError(MDLError, ValueError):
    """An input lies outside the domain of an operation."""


class ResourceLimitError(MDLError):
    """An exhaustive search was asked to run on an instance that is too large."""


class ConfigError(MDLError, ValueError):
    """Invalid experiment or generator configuration."""


class CertificateParseError(MDLError, ValueError):
    """A serialized certificate does not match the expected schema."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class LemmaViolation(MDLError, RuntimeError):
    """A construction could not deliver any of the outcomes it promises.

    ``instance`` carries enough state (usually the serialized graph and the
    parameters) to replay the failure offline.
    """

    def __init__(self, message, instance=None):
        super().__init__(message)
        self.instance = instance or {}
