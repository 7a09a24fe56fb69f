# -*- coding: utf-8 -*-
"""
test_receiver
~~~~~~~~~~~~~

Tests for reverse-diffusion symbol reconstruction.
"""
import numpy as np
import pytest

import diffshape.channel
import diffshape.constellation
import diffshape.receiver
import diffshape.shaping
from diffshape.exceptions import ShapeMismatchError


def _received(n=200, seed=0):
    return np.random.default_rng(seed).standard_normal((n, 2))


class TestReconstruct(object):
    """
    Tests for hard-decision reconstruction.
    """
    def test_output_lies_on_constellation(self, small_model, short_schedule,
                                          qam16):
        """
        Every output is a constellation point with its own index.
        """
        points, indices = diffshape.receiver.reconstruct(
            small_model, short_schedule, qam16, _received(),
            np.random.default_rng(1),
        )
        assert points.shape == (200, 2)
        assert indices.min() >= 1 and indices.max() <= 16
        assert np.array_equal(points, qam16.points[indices - 1])

    def test_deterministic_given_generator_seed(self, small_model,
                                                short_schedule, qam16):
        """
        Identical generators give identical decisions.
        """
        y = _received()
        _, a = diffshape.receiver.reconstruct(
            small_model, short_schedule, qam16, y, np.random.default_rng(5)
        )
        _, b = diffshape.receiver.reconstruct(
            small_model, short_schedule, qam16, y, np.random.default_rng(5)
        )
        assert np.array_equal(a, b)

    def test_matches_reverse_loop(self, small_model, short_schedule, qam4):
        """
        Reconstruction is the reverse loop from y followed by projection.
        """
        y = _received(50, seed=3)
        x0, _ = diffshape.shaping.run_reverse(
            small_model, short_schedule, y, np.random.default_rng(2)
        )
        _, expected = diffshape.constellation.project(x0, qam4)
        _, indices = diffshape.receiver.reconstruct(
            small_model, short_schedule, qam4, y, np.random.default_rng(2)
        )
        assert np.array_equal(indices, expected)

    def test_chunk_size_does_not_matter(self, small_model, short_schedule,
                                        qam16):
        """
        Chunked evaluation gives the same decisions.
        """
        y = _received(300, seed=4)
        _, a = diffshape.receiver.reconstruct(
            small_model, short_schedule, qam16, y, np.random.default_rng(6)
        )
        _, b = diffshape.receiver.reconstruct(
            small_model, short_schedule, qam16, y, np.random.default_rng(6),
            chunk_size=32,
        )
        assert np.array_equal(a, b)

    def test_trajectory(self, small_model, short_schedule, qam4):
        """
        Requested intermediate batches come back as a third value.
        """
        y = _received(20)
        points, indices, snapshots = diffshape.receiver.reconstruct(
            small_model, short_schedule, qam4, y, np.random.default_rng(0),
            trajectory=[10, 1, 0],
        )
        assert sorted(snapshots) == [0, 1, 10]
        assert np.array_equal(snapshots[10], y)
        assert indices.shape == (20,)

    @pytest.mark.parametrize('y', [
        np.zeros((0, 2)), np.zeros((4, 1)), [[np.inf, 0.0]],
    ])
    def test_invalid_input(self, small_model, short_schedule, qam4, y):
        """
        Received batches are non-empty, N x 2 and finite.
        """
        with pytest.raises(ShapeMismatchError):
            diffshape.receiver.reconstruct(
                small_model, short_schedule, qam4, y,
                np.random.default_rng(0),
            )


class TestPosterior(object):
    """
    Tests for the repeated-decoding soft output.
    """
    def test_rows_are_histograms(self, small_model, short_schedule, qam16):
        """
        Each row holds vote fractions summing to one.
        """
        posterior = diffshape.receiver.reconstruct_posterior(
            small_model, short_schedule, qam16, _received(40), 5,
            np.random.default_rng(1),
        )
        assert posterior.shape == (40, 16)
        assert np.allclose(posterior.sum(axis=1), 1.0)
        assert np.allclose(posterior * 5, np.round(posterior * 5))

    def test_single_pass_matches_reconstruct(self, small_model,
                                             short_schedule, qam16):
        """
        One pass decides exactly what reconstruct decides.
        """
        y = _received(60, seed=9)
        posterior = diffshape.receiver.reconstruct_posterior(
            small_model, short_schedule, qam16, y, 1,
            np.random.default_rng(11),
        )
        _, indices = diffshape.receiver.reconstruct(
            small_model, short_schedule, qam16, y, np.random.default_rng(11)
        )
        assert np.array_equal(
            diffshape.receiver.hard_decisions(posterior), indices
        )

    @pytest.mark.parametrize('passes', [0, -1, 2.0, True])
    def test_invalid_passes(self, small_model, short_schedule, qam4,
                            passes):
        """
        The number of passes is a positive int.
        """
        with pytest.raises(ValueError):
            diffshape.receiver.reconstruct_posterior(
                small_model, short_schedule, qam4, _received(4), passes,
                np.random.default_rng(0),
            )

    def test_hard_decisions_break_ties_low(self):
        """
        The most voted symbol wins; ties go to the lowest index.
        """
        posterior = np.array([
            [0.1, 0.7, 0.1, 0.1],
            [0.5, 0.0, 0.0, 0.5],
            [0.0, 0.0, 0.0, 1.0],
        ])
        decisions = diffshape.receiver.hard_decisions(posterior)
        assert decisions.tolist() == [2, 1, 4]


class TestEntryPoint(object):
    """
    Tests for where the reverse pass over received samples starts.
    """
    def test_unknown_noise_starts_raw_at_t(self, short_schedule):
        """
        Without a noise level the samples are x_T as they are.
        """
        y = _received(5)
        x_start, t_start = diffshape.receiver.entry_point(short_schedule, y)
        assert t_start == 10
        assert x_start is y

    def test_clean_samples_skip_the_reverse_pass(self, short_schedule):
        """
        Zero noise starts at t = 0 with the samples untouched.
        """
        y = _received(5)
        x_start, t_start = diffshape.receiver.entry_point(
            short_schedule, y, 0.0
        )
        assert t_start == 0
        assert np.array_equal(x_start, y)

    @pytest.mark.parametrize('t', [1, 4, 10])
    def test_matching_step_and_scaling(self, short_schedule, t):
        """
        The total noise power is split over I and Q, matched to a step, and
        the samples are scaled by sqrt(alpha_bar) of that step.
        """
        ab = short_schedule.alpha_bar[t - 1]
        noise_power = 2.0 * (1.0 - ab) / ab
        y = _received(5)
        x_start, t_start = diffshape.receiver.entry_point(
            short_schedule, y, noise_power
        )
        assert t_start == t
        assert np.allclose(x_start, np.sqrt(ab) * y, rtol=0, atol=1e-15)


class TestKnownNoiseReconstruct(object):
    """
    Tests for reconstruction given the channel noise power.
    """
    def test_noiseless_samples_are_projected(self, small_model,
                                             short_schedule, qam16):
        """
        With zero noise the decision is the nearest point, and no noise is
        drawn.
        """
        y = _received(50, seed=8)
        rng = np.random.default_rng(3)
        state = rng.bit_generator.state
        _, indices = diffshape.receiver.reconstruct(
            small_model, short_schedule, qam16, y, rng, noise_power=0.0
        )
        _, nearest = diffshape.constellation.project(y, qam16)
        assert np.array_equal(indices, nearest)
        assert rng.bit_generator.state == state

    def test_matches_partial_reverse_loop(self, small_model, short_schedule,
                                          qam4):
        """
        Reconstruction is the reverse loop from the matched step over the
        scaled samples, followed by projection.
        """
        y = _received(40, seed=5)
        noise_power = 0.05
        x_start, t_start = diffshape.receiver.entry_point(
            short_schedule, y, noise_power
        )
        assert 0 < t_start < 10
        x0, _ = diffshape.shaping.run_reverse(
            small_model, short_schedule, x_start, np.random.default_rng(2),
            t_start=t_start,
        )
        _, expected = diffshape.constellation.project(x0, qam4)
        _, indices = diffshape.receiver.reconstruct(
            small_model, short_schedule, qam4, y, np.random.default_rng(2),
            noise_power=noise_power,
        )
        assert np.array_equal(indices, expected)

    def test_trajectory_starts_at_matched_step(self, small_model,
                                               short_schedule, qam4):
        """
        Snapshots above the starting step are not recorded.
        """
        y = _received(10)
        noise_power = 0.05
        _, t_start = diffshape.receiver.entry_point(
            short_schedule, y, noise_power
        )
        _, _, snapshots = diffshape.receiver.reconstruct(
            small_model, short_schedule, qam4, y, np.random.default_rng(0),
            trajectory=range(11), noise_power=noise_power,
        )
        assert sorted(snapshots) == list(range(t_start + 1))

    def test_posterior_uses_noise_power(self, small_model, short_schedule,
                                        qam16):
        """
        The soft output with zero noise is a point mass on the nearest
        point.
        """
        y = _received(30, seed=12)
        posterior = diffshape.receiver.reconstruct_posterior(
            small_model, short_schedule, qam16, y, 3,
            np.random.default_rng(0), noise_power=0.0,
        )
        _, nearest = diffshape.constellation.project(y, qam16)
        assert np.array_equal(posterior.max(axis=1), np.ones(30))
        assert np.array_equal(
            diffshape.receiver.hard_decisions(posterior), nearest
        )

    def test_negative_noise_power(self, small_model, short_schedule, qam4):
        """
        Noise powers are non-negative.
        """
        with pytest.raises(ValueError):
            diffshape.receiver.reconstruct(
                small_model, short_schedule, qam4, _received(4),
                np.random.default_rng(0), noise_power=-1.0,
            )


@pytest.fixture(scope='module')
def trained_accuracy(trained_16qam):
    """
    Symbol accuracy of the trained 16-QAM receiver on uniformly drawn
    symbols sent over AWGN, as a function of the SNR.
    """
    params, sched, _ = trained_16qam
    qam = diffshape.constellation.make_qam(16)

    def accuracy(snr_db, n=10000):
        rng = np.random.default_rng(2024)
        sent = rng.integers(1, 17, size=n)
        spec = diffshape.channel.ChannelSpec('awgn', snr_db)
        y = diffshape.channel.transmit(qam.points[sent - 1], spec, rng)
        _, decided = diffshape.receiver.reconstruct(
            params, sched, qam, y, rng, noise_power=spec.noise_power
        )
        return float(np.mean(decided == sent))

    return {snr_db: accuracy(snr_db)
            for snr_db in (float('inf'), 20.0, 10.0, 0.0)}


class TestTrainedReceiver(object):
    """
    Reconstruction with the 16-QAM model trained with the default options.
    """
    def test_noiseless_round_trip(self, trained_accuracy):
        """
        Noiseless samples come back as the symbols that were sent.
        """
        assert trained_accuracy[float('inf')] == 1.0

    def test_high_snr(self, trained_accuracy):
        """
        At 20 dB nearly every symbol is recovered.
        """
        assert trained_accuracy[20.0] >= 0.9

    def test_ten_db(self, trained_accuracy):
        """
        At 10 dB most symbols are recovered. A maximum-likelihood detector
        gets about 78% of uniform 16-QAM symbols right here.
        """
        assert trained_accuracy[10.0] >= 0.45

    def test_accuracy_falls_with_snr(self, trained_accuracy):
        """
        Accuracy never rises by more than two points as the SNR drops.
        """
        ordered = [trained_accuracy[s]
                   for s in (float('inf'), 20.0, 10.0, 0.0)]
        assert all(b <= a + 0.02 for a, b in zip(ordered, ordered[1:]))
