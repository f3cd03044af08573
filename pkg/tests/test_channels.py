import numpy as np
import pytest

from signalcap import boxes, channels
from signalcap.channels import BinaryChannel, binary_entropy, capacity


class TestBinaryEntropy:
    def test_fair_coin(self):
        assert binary_entropy(0.5) == 1.0

    def test_endpoints(self):
        assert binary_entropy(0.0) == 0.0
        assert binary_entropy(1.0) == 0.0

    def test_two_thirds(self):
        # log2(3) - 2/3 = 0.9182958340544896
        assert binary_entropy(2 / 3) == pytest.approx(0.9183, abs=1e-4)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            binary_entropy(1.5)


class TestCapacity:
    def test_identical_rows_useless(self):
        assert capacity(BinaryChannel(0.3, 0.3)) == 0.0

    def test_noiseless(self):
        assert capacity(BinaryChannel(1.0, 0.0)) == 1.0

    def test_half_noisy_arm(self):
        # log2(5) - 2 = 0.3219281
        assert capacity(BinaryChannel(1.0, 0.5)) == pytest.approx(0.322, abs=1e-3)

    def test_symmetric_channel_reduces_to_one_minus_entropy(self):
        assert capacity(BinaryChannel(0.75, 0.25)) == pytest.approx(
            1.0 - binary_entropy(0.75), abs=1e-12)
        assert capacity(BinaryChannel(0.75, 0.25)) == pytest.approx(0.1887, abs=1e-4)

    def test_range_and_symmetries(self):
        rng = np.random.default_rng(1)
        for _ in range(1000):
            p, q = rng.uniform(0, 1, 2)
            c = capacity(BinaryChannel(p, q))
            assert 0.0 <= c <= 1.0
            assert capacity(BinaryChannel(q, p)) == pytest.approx(c, abs=1e-12)
            assert capacity(BinaryChannel(1 - p, 1 - q)) == pytest.approx(c, abs=1e-12)

    def test_zero_iff_equal_rows(self):
        assert capacity(BinaryChannel(0.4, 0.4 + 5e-13)) == 0.0
        assert capacity(BinaryChannel(0.4, 0.4 + 1e-9)) > 0.0

    @pytest.mark.parametrize("p", [0.1, 0.25, 0.5, 0.75, 0.9])
    def test_continuity_at_diagonal(self, p):
        assert capacity(BinaryChannel(p, p + 1e-6)) < 1e-10

    def test_midpoint_convexity(self):
        rng = np.random.default_rng(2)
        for _ in range(1000):
            p1, p2, q = rng.uniform(0, 1, 3)
            mid = channels._capacity_pq(0.5 * (p1 + p2), q)
            avg = 0.5 * (channels._capacity_pq(p1, q) + channels._capacity_pq(p2, q))
            assert mid <= avg + 1e-12
            mid = channels._capacity_pq(q, 0.5 * (p1 + p2))
            avg = 0.5 * (channels._capacity_pq(q, p1) + channels._capacity_pq(q, p2))
            assert mid <= avg + 1e-12

    def test_vectorized_matches_scalar(self):
        rng = np.random.default_rng(3)
        p = rng.uniform(0, 1, 200)
        q = rng.uniform(0, 1, 200)
        vec = channels.capacity_array(p, q)
        for k in range(200):
            assert vec[k] == pytest.approx(channels._capacity_pq(p[k], q[k]), abs=1e-12)


class TestCapacityOracle:
    def test_noiseless(self):
        assert channels.capacity_oracle(BinaryChannel(1.0, 0.0)) == pytest.approx(1.0, abs=1e-6)

    def test_useless(self):
        assert channels.capacity_oracle(BinaryChannel(0.5, 0.5)) == pytest.approx(0.0, abs=1e-6)

    def test_matches_closed_form_on_random_channels(self):
        rng = np.random.default_rng(4)
        worst = 0.0
        for _ in range(1000):
            p, q = rng.uniform(0, 1, 2)
            ch = BinaryChannel(p, q)
            worst = max(worst, abs(capacity(ch) - channels.capacity_oracle(ch)))
        assert worst <= 1e-6

    def test_raises_when_budget_too_small(self):
        with pytest.raises(channels.NoConvergence):
            channels.capacity_oracle(BinaryChannel(0.07356, 0.07033), iters=10, tol=1e-12)


class TestCapacityGradient:
    def test_matches_finite_differences(self):
        rng = np.random.default_rng(5)
        h = 1e-6
        for _ in range(200):
            p, q = rng.uniform(0.05, 0.95, 2)
            if abs(p - q) < 1e-3:
                continue
            gp, gq = channels.capacity_gradient(BinaryChannel(p, q))
            fd_p = (channels._capacity_pq(p + h, q) - channels._capacity_pq(p - h, q)) / (2 * h)
            fd_q = (channels._capacity_pq(p, q + h) - channels._capacity_pq(p, q - h)) / (2 * h)
            assert gp == pytest.approx(fd_p, abs=1e-5)
            assert gq == pytest.approx(fd_q, abs=1e-5)

    def test_zero_at_diagonal(self):
        assert channels.capacity_gradient(BinaryChannel(0.3, 0.3)) == (0.0, 0.0)


class TestChannelFamilies:
    def test_all_zero_correlators(self):
        vec = boxes.CorrelatorVector.from_array(2, np.zeros(6))
        fam = channels.channels_from_correlators(vec)
        assert len(fam) == 3
        for _, ch in fam.channels:
            assert (ch.p, ch.q) == (0.5, 0.5)
        assert fam.max_capacity() == 0.0

    def test_equalized_triple_at_maximal_violation(self):
        # the equalization root of C((1+1)/2... , .) computed by bisection:
        # alpha* = 0.4589374, common capacity 0.1577740
        a = 0.4589374
        arr = np.array([a, -a, 1.0, a, 1.0, a])
        fam = channels.channels_from_correlators(boxes.CorrelatorVector.from_array(2, arr))
        caps = list(fam.capacities().values())
        assert caps == pytest.approx([0.1577740] * 3, abs=1e-4)
        for c in caps:
            assert c == pytest.approx(0.158, abs=2e-3)

    def test_m3_single_symmetric_pair(self):
        # channel from (x_B^0, y_B^0) = (delta/10, -delta/10) is symmetric
        delta = 1.4
        arr = np.zeros(10)
        arr[4] = delta / 10.0
        arr[5] = -delta / 10.0
        fam = channels.channels_from_correlators(boxes.CorrelatorVector.from_array(3, arr))
        caps = fam.capacities()
        want = 1.0 - binary_entropy((1.0 + delta / 10.0) / 2.0)
        assert caps["S^0_{B->AE}"] == pytest.approx(want, abs=1e-12)
        assert len(fam) == 5

    def test_family_counts(self):
        for m in (2, 3, 4):
            vec = boxes.correlator_vector(boxes.random_nonsignaling(m, 1))
            assert len(channels.channels_from_correlators(vec)) == 2 * m - 1
        vec = boxes.correlator_vector(boxes.random_nonsignaling(2, 1), relaxed=True)
        assert len(channels.channels_from_correlators(vec, relaxed=True)) == 4

    def test_relaxed_needs_relaxed_vector(self):
        vec = boxes.correlator_vector(boxes.random_nonsignaling(2, 1))
        with pytest.raises(ValueError):
            channels.channels_from_correlators(vec, relaxed=True)

    def test_nonsignaling_boxes_have_zero_capacities(self):
        for seed in range(100):
            fam = channels.channels_from_box(boxes.random_nonsignaling(2, seed))
            assert fam.max_capacity() == 0.0

    def test_reference_box_capacities_at_family_root(self):
        from signalcap import strength
        fam_root = strength.optimal_family(2.0)
        box = boxes.reference_box(2.0, fam_root.x_star)
        caps = list(channels.channels_from_box(box).capacities().values())
        assert caps == pytest.approx([fam_root.value] * 3, abs=1e-9)
