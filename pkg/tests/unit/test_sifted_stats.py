"""
Unit tests for the SiftedStats and ClassTally entities.
"""

import pytest

from app.core.enums import Protocol
from app.core.exceptions import DomainValueException
from app.domain.entities.sifted_stats import ClassTally, SiftedStats


class TestClassTally:
    """Test per-class counters."""

    def test_ordering_invariant(self):
        """Should reject errors > sifted > detections > frames_sent violations."""
        with pytest.raises(DomainValueException):
            ClassTally(frames_sent=10, detections=11)
        with pytest.raises(DomainValueException):
            ClassTally(frames_sent=10, detections=5, sifted=6)
        with pytest.raises(DomainValueException):
            ClassTally(frames_sent=10, detections=5, sifted=2, errors=3)

    def test_merge_adds_fields(self):
        """Should add every counter."""
        a = ClassTally(frames_sent=10, detections=4, sifted=2, errors=1)
        b = ClassTally(frames_sent=5, detections=1, sifted=1)

        merged = a.merge(b)

        assert merged.frames_sent == 15
        assert merged.detections == 5
        assert merged.sifted == 3
        assert merged.errors == 1


class TestSiftedStats:
    """Test mergeable run statistics."""

    def _stats(self, frames: float, detections: float, **kwargs) -> SiftedStats:
        return SiftedStats(
            protocol=Protocol.COW,
            classes={"signal": ClassTally(frames_sent=frames, detections=detections)},
            **kwargs,
        )

    def test_merge(self):
        """Should merge class tallies, monitor counts and durations."""
        a = self._stats(10, 2, monitor_max=3, detector_events=(2.0,), duration=1.0)
        b = self._stats(20, 1, monitor_min=1, detector_events=(1.0, 4.0), duration=2.0)

        merged = a.merge(b)

        assert merged.tally("signal").frames_sent == 30
        assert merged.monitor_max == 3
        assert merged.monitor_min == 1
        assert merged.detector_events == (3.0, 4.0)
        assert merged.duration == 3.0

    def test_merge_is_commutative(self):
        """Should give the same result in either order."""
        a = self._stats(10, 2, duration=1.0)
        b = self._stats(20, 1, duration=2.0)

        assert a.merge(b) == b.merge(a)

    def test_merge_different_protocols_raises(self):
        """Should refuse to merge statistics of different protocols."""
        other = SiftedStats(protocol=Protocol.DPS)

        with pytest.raises(DomainValueException):
            self._stats(1, 0).merge(other)

    def test_reduce(self):
        """Should fold a sequence of partial statistics."""
        total = SiftedStats.reduce([self._stats(1, 1), self._stats(2, 0), self._stats(3, 1)])

        assert total.tally("signal").frames_sent == 6
        assert total.tally("signal").detections == 2

    def test_reduce_empty_raises(self):
        """Should raise when there is nothing to reduce."""
        with pytest.raises(DomainValueException):
            SiftedStats.reduce([])

    def test_unknown_class_tally_is_empty(self):
        """Should return an empty tally for classes without frames."""
        assert SiftedStats(protocol=Protocol.BB84).tally("decoy") == ClassTally()

    def test_total(self):
        """Should sum all classes."""
        stats = SiftedStats(
            protocol=Protocol.BB84,
            classes={
                "signal": ClassTally(frames_sent=8, detections=2),
                "decoy": ClassTally(frames_sent=2, detections=1),
            },
        )

        assert stats.total().frames_sent == 10
        assert stats.total().detections == 3
