"""
Unit tests for the per-protocol simulation pipelines.

Tests batch planning, reproducible batch simulation, the dead-time filter and
error-free sifting on ideal devices.
"""

import numpy as np
import pytest

from app.application.services.montecarlo_engine import MonteCarloEngine
from app.application.services.protocol_pipelines import (
    Bb84Pipeline,
    CowPipeline,
    DpsPipeline,
    build_pipeline,
    crosstalk_probability,
)
from app.core.enums import Protocol
from app.domain.entities.receiver_params import DetectorParams, ReceiverParams
from app.domain.services.detector import default_crosstalk_probability
from tests.conftest import noiseless_config


class TestBatchPlanning:
    """Test how runs are split into independent batches."""

    def test_bb84_batches_cover_all_frames(self):
        """Should split 20000 frames into 8192-frame batches."""
        pipeline = build_pipeline(noiseless_config(Protocol.BB84))

        plans = pipeline.plan_batches(8192)

        assert [(p.index, p.offset, p.size) for p in plans] == [
            (0, 0, 8192),
            (1, 8192, 8192),
            (2, 16384, 3616),
        ]

    def test_dps_batches_count_trains(self):
        """Should plan whole 16-pulse trains for DPS."""
        pipeline = build_pipeline(noiseless_config(Protocol.DPS))

        plans = pipeline.plan_batches(1000)

        assert all(p.size <= 62 for p in plans)
        assert sum(p.size for p in plans) == 1250
        assert pipeline.units_per_frame == 16

    def test_build_pipeline_by_protocol(self):
        """Should pick the pipeline matching the protocol."""
        assert isinstance(build_pipeline(noiseless_config(Protocol.BB84)), Bb84Pipeline)
        assert isinstance(build_pipeline(noiseless_config(Protocol.COW)), CowPipeline)
        assert isinstance(build_pipeline(noiseless_config(Protocol.DPS)), DpsPipeline)

    def test_slot_layout(self):
        """Should examine 3 slots for BB84, 2 for COW and L + 2 for DPS."""
        assert build_pipeline(noiseless_config(Protocol.BB84)).n_slots == 3
        assert build_pipeline(noiseless_config(Protocol.COW)).n_slots == 2
        dps = build_pipeline(noiseless_config(Protocol.DPS))
        assert dps.n_slots == 18
        assert dps.frame_period == pytest.approx(18 * 600e-12)


class TestBatchSimulation:
    """Test candidate generation and the dead-time filter."""

    def test_same_plan_same_events(self):
        """Should reproduce a batch exactly from seed and batch index."""
        pipeline = build_pipeline(noiseless_config(Protocol.BB84))
        plan = pipeline.plan_batches(4096)[1]

        first = pipeline.simulate_batch(plan)
        second = pipeline.simulate_batch(plan)

        np.testing.assert_array_equal(first.events.timestamp, second.events.timestamp)
        np.testing.assert_array_equal(first.records.bits, second.records.bits)

    def test_batches_differ(self):
        """Should draw independent streams for different batches."""
        pipeline = build_pipeline(noiseless_config(Protocol.BB84))
        plans = pipeline.plan_batches(4096)

        first = pipeline.simulate_batch(plans[0]).records.bits
        second = pipeline.simulate_batch(plans[1]).records.bits

        assert not np.array_equal(first, second)

    def test_dead_time_spacing(self):
        """Should leave at least one dead time between kept clicks of a detector."""
        dead_time = 10e-9
        config = noiseless_config(
            Protocol.BB84,
            detector=DetectorParams(
                efficiency=1.0, dark_count_rate=0.0, jitter_sigma=0.0, dead_time=dead_time
            ),
        )
        pipeline = build_pipeline(config)
        candidate = pipeline.simulate_batch(pipeline.plan_batches(20_000)[0])

        survivors, states = pipeline.detector.apply_dead_time(candidate.events, {})

        assert len(survivors) < len(candidate.events)
        for detector in (0, 1):
            times = survivors.timestamp[survivors.detector == detector]
            assert np.all(np.diff(times) >= dead_time * (1 - 1e-12))
            assert states[detector].last_click_time == times[-1]

    def test_crosstalk_derived_when_unset(self, bb84_config):
        """Should derive crosstalk from jitter and pulse width when not configured."""
        config = noiseless_config(
            Protocol.BB84, receiver=ReceiverParams(slot_crosstalk_prob=None)
        )

        assert crosstalk_probability(bb84_config) == pytest.approx(0.0214)
        assert crosstalk_probability(config) == pytest.approx(
            default_crosstalk_probability(0.0, 136e-12, 600e-12, 400e-12)
        )


class TestNoiselessSifting:
    """Test end-to-end sifting on ideal devices."""

    def test_bb84_error_free(self):
        """Should sift BB84 without errors in either basis."""
        stats = MonteCarloEngine(build_pipeline(noiseless_config(Protocol.BB84)), 8192).run()
        signal = stats.tally("signal")

        assert stats.total().frames_sent == 20_000
        assert signal.sifted_z > 0
        assert signal.sifted_x > 0
        assert stats.total().errors == 0
        assert stats.tally("vacuum").detections == 0

    def test_bb84_signal_gain(self):
        """Should detect 1 - exp(-mu) of lossless signal frames."""
        stats = MonteCarloEngine(build_pipeline(noiseless_config(Protocol.BB84)), 8192).run()
        signal = stats.tally("signal")

        assert signal.detections / signal.frames_sent == pytest.approx(
            1 - np.exp(-0.5), abs=0.02
        )

    def test_dps_error_free(self):
        """Should decode every DPS bit at the right port."""
        stats = MonteCarloEngine(build_pipeline(noiseless_config(Protocol.DPS)), 4096).run()

        assert stats.total().frames_sent == 20_000
        assert stats.total().sifted > 0
        assert stats.wrong_port == 0

    def test_cow_error_free_with_perfect_visibility(self):
        """Should sift COW without errors and see no destructive monitor clicks."""
        stats = MonteCarloEngine(build_pipeline(noiseless_config(Protocol.COW)), 8192).run()

        assert stats.total().sifted > 0
        assert stats.total().errors == 0
        assert stats.monitor_max > 0
        assert stats.monitor_min == 0
        assert len(stats.detector_events) == 3
