class QKDBenchException(Exception):
    """Base exception for simulator and analysis failures."""

    def __init__(self, message: str):
        self.message = message
        super().__init__(self.message)


class DomainValueException(QKDBenchException, ValueError):
    """Raised when a value lies outside the domain of an operation."""

    pass


class ConfigurationException(QKDBenchException):
    """Raised when experiment or device configuration is invalid."""

    pass


class EstimationException(QKDBenchException):
    """Raised when statistics are insufficient for an estimate."""

    pass


class DecoyEstimationException(EstimationException):
    """Raised when the decoy-state bounds cannot be established."""

    pass


class ReportPersistenceException(QKDBenchException):
    """Raised when a report cannot be written or read."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{message} [{path}]" if path else message)
