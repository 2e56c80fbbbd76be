from enum import Enum as PyEnum


class Protocol(str, PyEnum):
    """QKD protocols the transmitter/receiver pair can be configured for."""

    BB84 = "bb84"
    COW = "cow"
    DPS = "dps"


class Basis(str, PyEnum):
    """BB84 preparation/measurement bases."""

    Z = "Z"
    X = "X"


class CowSymbol(str, PyEnum):
    """Symbols of the coherent one-way protocol."""

    BIT0 = "bit0"
    BIT1 = "bit1"
    DECOY = "decoy"


class SlotLabel(str, PyEnum):
    """Detection time-slots behind a one-bin AMZI."""

    EARLY = "early"
    MIDDLE = "middle"
    LATE = "late"


class SimulationMode(str, PyEnum):
    """How a run computes its statistics."""

    MONTECARLO = "montecarlo"
    ANALYTIC = "analytic"


class ReportFormat(str, PyEnum):
    """Report sinks supported by emit_report."""

    CSV = "csv"
    JSONLINES = "jsonlines"
    SQLITE = "sqlite"


class EveBoundKind(str, PyEnum):
    """Eavesdropper-information bounds for COW/DPS."""

    OPTIMISTIC_DEFAULT = "optimistic-default"
    COLLECTIVE = "collective"
