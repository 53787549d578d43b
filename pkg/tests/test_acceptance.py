"""Acceptance suite: every criterion at its stated scale and tolerance.

Each criterion prints one PASS/FAIL line (bypassing capture) in addition to
asserting, so a full run leaves a human-readable scoreboard.  The two
10^7-sample runs at d = 3, r = 0.02 dominate the runtime; they are shared
session fixtures feeding the tail, near-zero, and slope criteria.
"""

import math
import sys

import numpy as np
import pytest

from lorentzgas import (
    EmpiricalDistribution,
    EnsembleSpec,
    LatticeConfig,
    RunConfig,
    boca_zaharescu_bridge,
    ccdf,
    cross_ensemble_check,
    diophantine_exponent_probe,
    entropy_constant,
    free_path_batch,
    free_path_bruteforce_batch,
    mean_free_path_exact,
    riemann_zeta,
    run_simulation,
    tail_constant,
    tail_fit,
    vol_ball,
    zeta_fn,
    zeta_fn_oracle,
)
from lorentzgas.ensembles import RngStream, sample_phase
from lorentzgas.runner import censor_corrected_mean

D3_RADIUS = 0.02
BIG_N = 10_000_000
PAIR_N = 1_000_000
SANTALO_N = 1_000_000
LADDER = (0.04, 0.02, 0.01, 0.005)


def _report(criterion: str, ok: bool, detail: str):
    line = f"[acceptance] {criterion}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line, file=sys.__stdout__, flush=True)
    assert ok, line


def _run(d, r, kind, n, seed, workers=1):
    lattice = LatticeConfig(d=d, m=np.eye(d), alpha=np.zeros(d), r=r)
    cfg = RunConfig(
        lattice=lattice, ensemble=EnsembleSpec(kind=kind), n_samples=n,
        seed=seed, workers=workers,
    )
    return run_simulation(cfg)


def _to_dist(result) -> EmpiricalDistribution:
    return result.to_distribution()


@pytest.fixture(scope="session")
def nu_big():
    """Boundary ensemble, d=3, r=0.02, 1e7 samples."""
    result = _run(3, D3_RADIUS, "boundary", BIG_N, seed=20240901)
    dist = _to_dist(result)
    mean = censor_corrected_mean(result.tau, result.censored, result.config.t_max)
    del result
    return dist, mean


@pytest.fixture(scope="session")
def mu_big():
    """Phase ensemble, d=3, r=0.02, 1e7 samples."""
    result = _run(3, D3_RADIUS, "phase", BIG_N, seed=20240902)
    dist = _to_dist(result)
    del result
    return dist


@pytest.fixture(scope="session")
def pair_runs():
    """Paired 1e6 phase/boundary runs at d=3, r=0.02."""
    mu = _to_dist(_run(3, D3_RADIUS, "phase", PAIR_N, seed=51))
    nu = _to_dist(_run(3, D3_RADIUS, "boundary", PAIR_N, seed=52))
    return mu, nu


@pytest.fixture(scope="session")
def ladder_runs():
    """d=2 boundary runs along the radius ladder, common seed per rung."""
    out = {}
    for r in LADDER:
        result = _run(2, r, "boundary", SANTALO_N, seed=606)
        out[r] = (result.to_distribution(),
                  censor_corrected_mean(result.tau, result.censored,
                                        result.config.t_max))
        del result
    return out


class TestCriterion1Santalo:
    @pytest.mark.parametrize("d,r,seed", [
        (2, 0.01, 11), (2, 0.005, 12), (3, 0.05, 13), (3, 0.02, 14),
    ])
    def test_exact_mean_free_path(self, d, r, seed):
        result = _run(d, r, "boundary", SANTALO_N, seed=seed)
        est, half, se = censor_corrected_mean(
            result.tau, result.censored, result.config.t_max
        )
        exact = mean_free_path_exact(d, r).mfp
        ok = abs(est - exact) <= 3.0 * se + half
        _report(
            f"criterion 1 (Santalo d={d} r={r})", ok,
            f"mean={est:.5f} exact={exact:.5f} z={(est - exact) / se:+.2f} "
            f"corr={half:.2e}",
        )


class TestCriterion2TailExponents:
    def test_nu_slope_minus_two(self, nu_big):
        dist, _ = nu_big
        fit = tail_fit(dist, 3.0, 20.0)
        ok = abs(fit.exponent + 2.0) <= 0.15
        _report(
            "criterion 2a (collision-law tail slope)", ok,
            f"slope={fit.exponent:.4f} target=-2+-0.15 r2={fit.r_squared:.4f}",
        )

    def test_mu_slope_minus_one(self, mu_big):
        fit = tail_fit(mu_big, 3.0, 20.0)
        ok = abs(fit.exponent + 1.0) <= 0.15
        _report(
            "criterion 2b (volume-law tail slope)", ok,
            f"slope={fit.exponent:.4f} target=-1+-0.15 r2={fit.r_squared:.4f}",
        )


class TestCriterion3TailConstant:
    def test_scaled_tail_level(self, nu_big):
        dist, _ = nu_big
        target = tail_constant(3) / vol_ball(2)
        worst = 0.0
        for a in (5.0, 7.5, 10.0, 12.5, 15.0):
            level = ccdf(dist, a).value * a * a
            rel = abs(level - target) / target
            worst = max(worst, rel)
        ok = worst <= 0.25
        _report(
            "criterion 3 (tail constant)", ok,
            f"max relative deviation {worst:.3f} from c_3/|B^2|={target:.6f} (tol 0.25)",
        )


class TestCriterion4NearZero:
    def test_linear_law(self, nu_big):
        dist, _ = nu_big
        slope = vol_ball(2) / riemann_zeta(3)
        details = []
        ok = True
        for a in (0.02, 0.05):
            c = ccdf(dist, a)
            predicted = 1.0 - slope * a
            tol = 3.0 * (c.band + 2.0 * a * a)
            ok = ok and abs(c.value - predicted) <= tol
            details.append(f"a={a}: obs={c.value:.5f} pred={predicted:.5f} tol={tol:.1e}")
        _report("criterion 4 (near-zero law)", ok, "; ".join(details))


class TestCriterion5CrossEnsemble:
    def test_identity_on_grid(self, pair_runs):
        mu, nu = pair_runs
        rows = cross_ensemble_check(mu, nu, [0.5, 1.0, 2.0])
        ok = all(row.within_bound for row in rows)
        detail = "; ".join(
            f"a={row.a}: res={row.residual:+.2e} bound={row.combined_bound:.2e}"
            for row in rows
        )
        _report("criterion 5 (cross-ensemble consistency)", ok, detail)


class TestCriterion6Entropy:
    def test_ladder_structure(self, ladder_runs):
        ln2 = math.log(2.0)
        devs, dev_ses, crs, cr_ses = [], [], [], []
        for r in LADDER:
            dist, (mean_est, half, se) = ladder_runs[r]
            est = entropy_constant(dist)
            # (a) Jensen non-negativity at every rung
            assert est.c_r >= 0.0
            dev = abs(math.log(est.mean_xi) + ln2)
            devs.append(dev)
            dev_ses.append(est.se_mean_xi / est.mean_xi)
            crs.append(est.c_r)
            cr_ses.append(est.se_c_r)
        _report("criterion 6a (Jensen C_r >= 0)", True,
                "C_r = " + ", ".join(f"{c:.5f}" for c in crs))

        # (b) deviation of ln E[xi] from -ln 2 shrinks along the ladder
        # (within 3-s.e. noise bands; see decisions ledger) and ends <= 0.01
        mono_b = all(
            devs[i] + 3.0 * dev_ses[i] >= devs[i + 1] - 3.0 * dev_ses[i + 1]
            for i in range(len(devs) - 1)
        )
        ok_b = mono_b and devs[-1] <= 0.01
        _report(
            "criterion 6b (scaled-mean convergence)", ok_b,
            "dev = " + ", ".join(f"{x:.2e}" for x in devs) + f"; final tol 0.01",
        )

        # (c) successive C_r differences shrink (Cauchy), within noise bands
        diffs = [abs(b - a) for a, b in zip(crs, crs[1:])]
        diff_ses = [math.hypot(x, y) for x, y in zip(cr_ses, cr_ses[1:])]
        ok_c = all(
            diffs[i] + 3.0 * diff_ses[i] >= diffs[i + 1] - 3.0 * diff_ses[i + 1]
            for i in range(len(diffs) - 1)
        )
        _report(
            "criterion 6c (C_r Cauchy behaviour)", ok_c,
            "diffs = " + ", ".join(f"{x:.2e}" for x in diffs),
        )

    def test_bridge_identity(self, ladder_runs):
        dist, _ = ladder_runs[LADDER[-1]]
        a, b = boca_zaharescu_bridge(dist.xi_ordered)
        ok = abs(a - b) <= 1e-12
        _report("criterion 6d (half-argument bridge)", ok,
                f"|delta|={abs(a - b):.2e} C0_est={a:.5f}")


def _aimed_queries(cfg, gen, n, t_max):
    """Half uniform phase points, half rays aimed near a lattice point so the
    non-censored branch gets real coverage at small radii."""
    q, v = sample_phase(cfg, gen, n)
    half = n // 2
    z = gen.integers(1, max(2, int(t_max) - 1), size=(half, cfg.d)).astype(float)
    signs = gen.integers(0, 2, size=(half, cfg.d)) * 2.0 - 1.0
    target = z * signs
    w = target - q[:half]
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    w += gen.normal(size=(half, cfg.d)) * cfg.r
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    v[:half] = w
    return q, v


class TestCriterion7Oracles:
    @pytest.mark.parametrize("d,t_max", [(2, 25.0), (3, 8.0), (4, 5.0)])
    def test_free_path_oracle(self, d, t_max):
        total = 0
        hits = 0
        worst = 0.0
        for r, seed in ((0.05, 71), (0.2, 72)):
            cfg = LatticeConfig(d=d, m=np.eye(d), alpha=np.zeros(d), r=r)
            gen = RngStream(seed=seed, stream_id=d).generator()
            n = 5000
            q, v = _aimed_queries(cfg, gen, n, t_max)
            tau_a, cens_a, z_a, _ = free_path_batch(cfg, q, v, t_max)
            tau_b, cens_b, z_b, _ = free_path_bruteforce_batch(cfg, q, v, t_max)
            assert np.array_equal(cens_a, cens_b)
            assert np.array_equal(z_a[~cens_a], z_b[~cens_b])
            err = np.abs(tau_a - tau_b) / (1.0 + tau_a)
            worst = max(worst, float(err.max()))
            assert np.all(err <= 1e-10)
            total += n
            hits += int((~cens_a).sum())
        _report(
            f"criterion 7 (free path oracle, d={d})", True,
            f"{total} queries, {hits} non-censored, max rel dev {worst:.1e}",
        )

    def test_zeta_oracle(self):
        rng = np.random.default_rng(73)
        for _ in range(1000):
            dim = int(rng.integers(1, 4))
            b = rng.random(dim)
            t = 10 ** rng.uniform(0.5, 9)
            assert zeta_fn(b, t, n_cap=100_000) == zeta_fn_oracle(b, t, n_cap=100_000)
        _report("criterion 7 (zeta oracle)", True, "1000 randomized queries, exact agreement")


class TestCriterion8DiophantineGrowth:
    def test_golden_growth(self):
        golden = (math.sqrt(5.0) - 1.0) / 2.0
        probe = diophantine_exponent_probe(
            np.array([golden]), np.geomspace(1e3, 1e9, 13)
        )
        ok = 0.28 <= probe.slope <= 0.38
        _report("criterion 8a (golden growth exponent)", ok,
                f"slope={probe.slope:.4f} target [0.28, 0.38]")

    def test_rational_plateau(self):
        b = np.array([3.0 / 7.0])
        values = [zeta_fn(b, t).value for t in np.geomspace(10.0, 2.0**53, 25)]
        ok = max(values) <= 7
        _report("criterion 8b (rational 3/7 plateau)", ok,
                f"max zeta = {max(values)} <= 7")


class TestCriterion9PropertySubstitute:
    """The error exponents of the finite-radius convergence theorem and the
    entropy remainder constant are existential or externally cited; they are
    measured (converge report), never gated.  The substitute acceptance is
    the property suites of every module, which this test re-asserts on a
    fast representative subset (the full suites live in the unit tests)."""

    def test_invariants_subset(self):
        # determinism
        a = RngStream(seed=9, stream_id=1).generator().random(100)
        b = RngStream(seed=9, stream_id=1).generator().random(100)
        assert np.array_equal(a, b)
        # Jensen positivity on adversarial two-point data
        dist = EmpiricalDistribution.from_samples(
            np.tile([1e-3, 1e3], 500), np.zeros(1000, bool), 1e6, "boundary", 2, 0.01
        )
        assert entropy_constant(dist).c_r >= 0.0
        # ccdf monotone on random data
        rng = np.random.default_rng(0)
        d2 = EmpiricalDistribution.from_samples(
            rng.exponential(size=2000), np.zeros(2000, bool), 1e6, "phase", 2, 0.01
        )
        grid = np.linspace(0, 5, 30)
        vals = [ccdf(d2, x).value for x in grid]
        assert all(p >= q for p, q in zip(vals, vals[1:]))
        # zeta monotone in T
        golden = (math.sqrt(5.0) - 1.0) / 2.0
        zs = [zeta_fn(np.array([golden]), t).value for t in (1e3, 1e5, 1e7)]
        assert zs == sorted(zs)
        _report(
            "criterion 9 (unreproduced constants)", True,
            "error exponents and the entropy remainder are reported, not gated; "
            "module invariant suites pass",
        )
