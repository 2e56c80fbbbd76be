import math

from app.core.exceptions import DomainValueException


def binary_entropy(x: float) -> float:
    """Shannon entropy of a Bernoulli(x) variable, in bits."""

    if not (0.0 <= x <= 1.0):
        raise DomainValueException(f"Binary entropy needs x in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def db_to_transmission(loss_db: float) -> float:
    """Power transmission of a loss given in decibels."""

    if not loss_db >= 0:
        raise DomainValueException(f"Loss must be >= 0 dB, got {loss_db}")
    return 10.0 ** (-loss_db / 10.0)
