import itertools
import math

import numpy as np
import pytest

from lorentzgas import (
    InvalidDirectionError,
    InvalidOriginError,
    LatticeConfig,
    ObstacleOverlapError,
    OracleBudgetError,
    RayQuery,
    UnimodularityError,
    UnsupportedDimensionError,
    free_path,
    free_path_batch,
    free_path_bruteforce,
    free_path_bruteforce_batch,
    shortest_vector_bound,
)
from lorentzgas.ensembles import RngStream, sample_boundary, sample_phase


class TestLatticeConfig:
    def test_rejects_non_unimodular(self):
        with pytest.raises(UnimodularityError):
            LatticeConfig(d=2, m=2.0 * np.eye(2), alpha=np.zeros(2), r=0.1)

    def test_rejects_overlap(self):
        with pytest.raises(ObstacleOverlapError):
            LatticeConfig(d=2, m=np.eye(2), alpha=np.zeros(2), r=0.5)

    def test_rejects_bad_dimension(self):
        with pytest.raises(UnsupportedDimensionError):
            LatticeConfig(d=9, m=np.eye(9), alpha=np.zeros(9), r=0.01)

    def test_rational_tag_checked(self):
        LatticeConfig(
            d=2, m=np.eye(2), alpha=np.array([1 / 3, 2 / 3]),
            alpha_class="rational", rational_q=3, r=0.1,
        )
        with pytest.raises(Exception):
            LatticeConfig(
                d=2, m=np.eye(2), alpha=np.array([0.3, 0.3]),
                alpha_class="rational", rational_q=3, r=0.1,
            )

    def test_window_immutable(self, square_lattice):
        with pytest.raises(ValueError):
            square_lattice.window[0, 0] = 99


class TestShortestVector:
    def test_identity_d3(self):
        cfg = LatticeConfig(d=3, m=np.eye(3), alpha=np.zeros(3), r=0.1)
        assert shortest_vector_bound(cfg) == pytest.approx(1.0, abs=1e-14)

    def test_identity_d2(self, square_lattice):
        assert shortest_vector_bound(square_lattice) == pytest.approx(1.0, abs=1e-14)

    def test_shear(self):
        cfg = LatticeConfig(d=2, m=[[1.0, 0.5], [0.0, 1.0]], alpha=np.zeros(2), r=0.1)
        # brute force over the sup-norm box of radius 3 confirms the value
        best = min(
            np.linalg.norm(np.array(z) @ np.array([[1.0, 0.5], [0.0, 1.0]]))
            for z in itertools.product(range(-3, 4), repeat=2)
            if z != (0, 0)
        )
        assert shortest_vector_bound(cfg) == pytest.approx(best, abs=1e-14)
        assert best == pytest.approx(1.0, abs=1e-14)

    def test_d5_lower_bound(self):
        cfg = LatticeConfig(d=5, m=np.eye(5), alpha=np.zeros(5), r=0.1)
        assert shortest_vector_bound(cfg) <= 1.0 + 1e-12
        assert not cfg.lambda1_exact


class TestFreePathExamples:
    def test_censored_line(self, square_lattice):
        s = free_path(square_lattice, RayQuery(q=[0.5, 0.5], v=[1.0, 0.0], t_max=1e6))
        assert s.censored
        assert s.tau == 1e6
        assert s.hit_center is None

    def test_head_on(self, square_lattice):
        s = free_path(square_lattice, RayQuery(q=[-0.3, 0.0], v=[1.0, 0.0], t_max=100.0))
        assert s.tau == pytest.approx(0.2, abs=1e-14)
        assert np.array_equal(s.hit_lattice_index, [0, 0])
        assert s.incidence_cos == pytest.approx(1.0, abs=1e-12)

    def test_off_axis_quadratic(self, square_lattice):
        s = free_path(square_lattice, RayQuery(q=[0.5, 0.05], v=[1.0, 0.0], t_max=100.0))
        assert s.tau == pytest.approx(0.5 - math.sqrt(0.01 - 0.0025), abs=1e-12)
        assert np.array_equal(s.hit_lattice_index, [1, 0])

    def test_invalid_origin(self, square_lattice):
        with pytest.raises(InvalidOriginError):
            free_path(square_lattice, RayQuery(q=[0.05, 0.0], v=[1.0, 0.0], t_max=10.0))

    def test_invalid_direction(self):
        with pytest.raises(InvalidDirectionError):
            RayQuery(q=[0.5, 0.5], v=[1.0, 1.0], t_max=10.0)

    def test_tangency_counts_as_hit(self, square_lattice):
        # ray grazing the sphere at exact distance r
        s = free_path(square_lattice, RayQuery(q=[-0.5, 0.1], v=[1.0, 0.0], t_max=10.0))
        assert not s.censored
        assert s.tau == pytest.approx(0.5, abs=1e-9)

    def test_boundary_origin_outgoing(self, square_lattice):
        q = np.array([0.1 * (1 + 1e-12), 0.0])
        s = free_path(square_lattice, RayQuery(q=q, v=[1.0, 0.0], t_max=100.0))
        assert not s.censored
        assert s.tau == pytest.approx(0.8, rel=1e-9)
        assert np.array_equal(s.hit_lattice_index, [1, 0])

    def test_boundary_origin_ingoing_rejected(self, square_lattice):
        q = np.array([0.1 * (1 + 1e-12), 0.0])
        with pytest.raises(InvalidOriginError):
            free_path(square_lattice, RayQuery(q=q, v=[-1.0, 0.0], t_max=100.0))


class TestOracle:
    def test_same_inputs_same_outputs(self, square_lattice):
        for q, v in [([-0.3, 0.0], [1.0, 0.0]), ([0.5, 0.05], [1.0, 0.0])]:
            a = free_path(square_lattice, RayQuery(q=q, v=v, t_max=50.0))
            b = free_path_bruteforce(square_lattice, RayQuery(q=q, v=v, t_max=50.0))
            assert a.tau == b.tau
            assert a.censored == b.censored

    def test_budget_guard(self, square_lattice):
        with pytest.raises(OracleBudgetError):
            free_path_bruteforce(
                square_lattice, RayQuery(q=[0.5, 0.5], v=[1.0, 0.0], t_max=5e3)
            )

    def test_zero_radius_always_censored(self):
        cfg = LatticeConfig(d=2, m=np.eye(2), alpha=np.zeros(2), r=0.0)
        gen = RngStream(seed=3, stream_id=0).generator()
        q = gen.random((200, 2))
        v = gen.normal(size=(200, 2))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        tau, cens, _, _ = free_path_bruteforce_batch(cfg, q, v, 20.0)
        assert cens.all()
        assert (tau == 20.0).all()

    @pytest.mark.parametrize("d,r,t_max", [(2, 0.2, 25.0), (2, 0.05, 25.0),
                                           (3, 0.2, 8.0), (3, 0.05, 8.0)])
    def test_randomized_agreement(self, d, r, t_max):
        cfg = LatticeConfig(d=d, m=np.eye(d), alpha=np.zeros(d), r=r)
        gen = RngStream(seed=d * 100 + 7, stream_id=0).generator()
        n = 600
        q, v = sample_phase(cfg, gen, n)
        tau_a, cens_a, z_a, _ = free_path_batch(cfg, q, v, t_max)
        tau_b, cens_b, z_b, _ = free_path_bruteforce_batch(cfg, q, v, t_max)
        assert np.array_equal(cens_a, cens_b)
        assert np.all(np.abs(tau_a - tau_b) <= 1e-10 * (1.0 + tau_a))
        assert np.array_equal(z_a[~cens_a], z_b[~cens_b])

    def test_shifted_lattice_agreement(self):
        cfg = LatticeConfig(
            d=2, m=np.eye(2), alpha=np.array([0.37, 0.61]),
            alpha_class="irrational", r=0.15,
        )
        gen = RngStream(seed=19, stream_id=0).generator()
        q, v = sample_phase(cfg, gen, 500)
        tau_a, cens_a, _, _ = free_path_batch(cfg, q, v, 25.0)
        tau_b, cens_b, _, _ = free_path_bruteforce_batch(cfg, q, v, 25.0)
        assert np.array_equal(cens_a, cens_b)
        assert np.array_equal(tau_a, tau_b)

    def test_sheared_basis_agreement(self):
        cfg = LatticeConfig(d=2, m=[[1.0, 0.5], [0.0, 1.0]], alpha=np.zeros(2), r=0.15)
        gen = RngStream(seed=23, stream_id=0).generator()
        q, v = sample_phase(cfg, gen, 500)
        tau_a, cens_a, _, _ = free_path_batch(cfg, q, v, 25.0)
        tau_b, cens_b, _, _ = free_path_bruteforce_batch(cfg, q, v, 25.0)
        assert np.array_equal(cens_a, cens_b)
        assert np.array_equal(tau_a, tau_b)


class TestInvariants:
    def test_symmetry_permutation_and_signs(self, cubic_lattice):
        gen = RngStream(seed=31, stream_id=0).generator()
        q0 = np.array([0.37, 0.21, 0.11])
        v0 = gen.normal(size=3)
        v0 /= np.linalg.norm(v0)
        ref = free_path(cubic_lattice, RayQuery(q=q0, v=v0, t_max=200.0))
        for perm in itertools.permutations(range(3)):
            for signs in itertools.product((-1.0, 1.0), repeat=3):
                sg = np.array(signs)
                q = sg * q0[list(perm)]
                v = sg * v0[list(perm)]
                s = free_path(cubic_lattice, RayQuery(q=q, v=v, t_max=200.0))
                assert s.censored == ref.censored
                if not s.censored:
                    assert abs(s.tau - ref.tau) <= 1e-12

    def test_integer_translation(self, cubic_lattice):
        gen = RngStream(seed=37, stream_id=0).generator()
        q0 = np.array([0.4, 0.2, 0.3])
        v0 = gen.normal(size=3)
        v0 /= np.linalg.norm(v0)
        ref = free_path(cubic_lattice, RayQuery(q=q0, v=v0, t_max=200.0))
        for z in [(1, 0, 0), (0, -2, 5), (3, 3, 3)]:
            s = free_path(cubic_lattice, RayQuery(q=q0 + np.array(z), v=v0, t_max=200.0))
            assert s.censored == ref.censored
            assert abs(s.tau - ref.tau) <= 1e-12

    def test_lower_bound_and_hit_consistency(self, square_lattice):
        gen = RngStream(seed=41, stream_id=0).generator()
        q, v = sample_phase(square_lattice, gen, 400)
        tau, cens, z, cos = free_path_batch(square_lattice, q, v, 100.0)
        hits = ~cens
        centers = z[hits].astype(float)  # alpha = 0, M = identity
        dist_to_center = np.linalg.norm(centers - q[hits], axis=1)
        assert np.all(tau[hits] >= dist_to_center - square_lattice.r - 1e-12)
        hit_points = q[hits] + tau[hits, None] * v[hits]
        assert np.all(
            np.abs(np.linalg.norm(hit_points - centers, axis=1) - square_lattice.r) <= 1e-10
        )
        assert np.all((cos[hits] > 0.0) & (cos[hits] <= 1.0 + 1e-12))

    def test_boundary_launch_never_self_hits(self, cubic_lattice):
        gen = RngStream(seed=43, stream_id=0).generator()
        q, v = sample_boundary(cubic_lattice, gen, 2000)
        tau, cens, z, _ = free_path_batch(cubic_lattice, q, v, 50.0)
        hits = ~cens
        assert np.all(tau[hits] > cubic_lattice.r)
