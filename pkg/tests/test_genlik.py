import numpy as np
import pytest


from lnre.divergences import TuningPair
from lnre.errors import AllOutsideSupport, EnumerationTooLarge
from lnre.genlik import (
    GenLikKind,
    alpha_norm,
    deformed_pmf,
    eq14_residual,
    generalized_likelihood,
)
from lnre.kde import WeightedSample, weighted_sample
from lnre.models import (
    StudentParams,
    bernoulli_density,
    normal_density,
    student_density,
    student_sample,
    student_score,
)

bern_family = lambda p: bernoulli_density(p)
normal_family = lambda lam: normal_density(lam[0], lam[1])
t3_family = lambda lam: student_density(StudentParams(lam[0], lam[1], 3.0))


class TestAlphaNorm:
    def test_bernoulli(self):
        assert alpha_norm(bern_family, 0.5, 2.0) == pytest.approx(np.sqrt(0.5))

    def test_alpha_one_is_unity(self):
        assert alpha_norm(bern_family, 0.3, 1.0) == pytest.approx(1.0)
        assert alpha_norm(normal_family, (0.4, 1.7), 1.0) == pytest.approx(
            1.0, abs=1e-9
        )

    def test_gaussian_square_norm(self):
        # integral of phi^2 = 1/(2 sqrt(pi))
        assert alpha_norm(normal_family, (0.0, 1.0), 2.0) == pytest.approx(
            (1 / (2 * np.sqrt(np.pi))) ** 0.5, abs=1e-10
        )


class TestGeneralizedLikelihood:
    def test_ml_is_mean_log_density(self):
        sample = np.array([0.3, -1.2, 0.7, 2.0])
        ws = weighted_sample(sample, 1.0)
        got = generalized_likelihood(GenLikKind.ml(), ws, t3_family, (0.0, 1.0))
        dens = t3_family((0.0, 1.0))
        assert got == pytest.approx(float(np.mean(np.log(dens.pdf(ws.values)))))

    def test_lnre_limit_matches_ml(self):
        rng = np.random.default_rng(4)
        sample = rng.normal(0.2, 1.0, size=40)
        beta = 1.0 - 1e-6
        ws = weighted_sample(sample, beta)
        kind = GenLikKind.lnre(TuningPair(beta, beta))
        lam = (0.1, 1.3)
        lnre_val = generalized_likelihood(kind, ws, normal_family, lam)
        ml_val = generalized_likelihood(
            GenLikKind.ml(), weighted_sample(sample, 1.0), normal_family, lam
        )
        assert lnre_val == pytest.approx(ml_val, abs=1e-4)

    def test_weights_must_match_tuning(self):
        ws = weighted_sample(np.array([0.0, 1.0]), 1.0)
        kind = GenLikKind.lnre(TuningPair(0.5, 0.9))
        with pytest.raises(ValueError):
            generalized_likelihood(kind, ws, t3_family, (0.0, 1.0))

    def test_all_outside_support(self):
        r_family = lambda lam: student_density(StudentParams(lam[0], lam[1], -3.0))
        ws = weighted_sample(np.array([10.0, 12.0]), 1.0)
        with pytest.raises(AllOutsideSupport):
            generalized_likelihood(
                GenLikKind.lnre(TuningPair(2.0, 1.0)), ws, r_family, (0.0, 1.0)
            )

    def test_closed_form_is_local_max(self):
        from lnre.estimators import mlnree_student_t

        sample = student_sample(60, StudentParams(0.0, 1.0, 3.0), seed=21)
        beta = 1.0
        ws = weighted_sample(sample, beta)
        rec = mlnree_student_t(sample, 3.0, beta, weights=ws)
        kind = GenLikKind.lnre(TuningPair(rec.alpha, beta))
        at_hat = generalized_likelihood(kind, ws, t3_family, rec.estimate)
        rng = np.random.default_rng(77)
        mu_hat, s2_hat = rec.estimate
        for _ in range(50):
            lam = (mu_hat + rng.normal() * 0.3, s2_hat * np.exp(rng.normal() * 0.3))
            assert at_hat >= generalized_likelihood(kind, ws, t3_family, lam) - 1e-12


class TestLikelihoodDifferenceInvariance:
    """Minimal sufficiency: samples with equal weighted ratio statistic give a
    parameter-free likelihood difference equal to log(hbar_r/hbar_s)/(a-b)."""

    def test_bernoulli_equal_hbar(self):
        # tuning (1, 0) keeps the Bernoulli model in power-law form; with the
        # empirical-pmf weights both tuples share fbar/hbar = 1/2 and hbar = 2
        kind = GenLikKind.lnre(TuningPair(1.0, 0.0))
        r = np.array([0.0, 0.0, 1.0, 1.0])
        s = np.array([0.0, 1.0, 1.0, 1.0])

        def emp_ws(vals):
            counts = np.array([(vals == v).sum() for v in vals])
            return WeightedSample(vals, (counts / vals.size) ** (0.0 - 1.0), 0.0)

        ws_r, ws_s = emp_ws(r), emp_ws(s)
        hbar_r = ws_r.weights.mean()
        hbar_s = ws_s.weights.mean()
        assert hbar_r == pytest.approx(2.0, abs=1e-15)
        assert hbar_s == pytest.approx(2.0, abs=1e-15)
        diffs = [
            generalized_likelihood(kind, ws_r, bern_family, lam)
            - generalized_likelihood(kind, ws_s, bern_family, lam)
            for lam in np.linspace(0.55, 0.95, 9)
        ]
        assert max(diffs) - min(diffs) < 1e-10
        assert abs(diffs[0]) < 1e-10  # equal hbar: the constant is log(1) = 0

    def test_student_t_unequal_hbar(self):
        # two samples on disjoint point sets with identical weighted ratio
        # statistic [T2, T1] but different hbar; any positive weight pattern
        # on distinct abscissae is realizable by some reference density
        beta = 1.4
        kind = GenLikKind.lnre(TuningPair(beta - 0.5, beta))  # nu = 3 pairing
        r = np.array([-1.0, 0.0, 1.0])
        w_r = np.array([1.0, 0.5, 1.0])
        t1 = np.dot(w_r, r) / w_r.sum()
        t2 = np.dot(w_r, r**2) / w_r.sum()
        s = np.array([-1.5, 0.25, 1.75])
        # solve sum v = 1, sum v s = t1, sum v s^2 = t2, then rescale
        A = np.vstack([np.ones(3), s, s**2])
        v = np.linalg.solve(A, np.array([1.0, t1, t2]))
        assert np.all(v > 0)
        w_s = 2.0 * v
        hbar_r, hbar_s = w_r.mean(), w_s.mean()
        assert abs(hbar_r - hbar_s) > 0.05
        ws_r = WeightedSample(r, w_r, beta)
        ws_s = WeightedSample(s, w_s, beta)
        expected = np.log(hbar_r / hbar_s) / (kind.alpha - kind.beta)
        for mu, s2 in [(0.0, 1.0), (0.4, 2.0), (-1.0, 0.6), (0.9, 1.4)]:
            diff = generalized_likelihood(
                kind, ws_r, t3_family, (mu, s2)
            ) - generalized_likelihood(kind, ws_s, t3_family, (mu, s2))
            assert diff == pytest.approx(expected, abs=1e-10)


class TestEq14Residual:
    @pytest.mark.parametrize("beta", [1.0, 0.9, 1.1])
    def test_vanishes_at_closed_form(self, beta):
        from lnre.estimators import mlnree_student_t

        nu = 3.0
        sample = student_sample(80, StudentParams(0.2, 1.5, nu), seed=31)
        ws = weighted_sample(sample, beta)
        rec = mlnree_student_t(sample, nu, beta, weights=ws)
        t = TuningPair(rec.alpha, beta)
        model = lambda lam: student_density(StudentParams(lam[0], lam[1], nu))
        score = lambda y, lam: student_score(y, StudentParams(lam[0], lam[1], nu))
        res = eq14_residual(ws, model, rec.estimate, t, score)
        assert np.all(np.abs(res) < 1e-6)

    def test_nonzero_away_from_solution(self):
        nu = 3.0
        sample = student_sample(80, StudentParams(0.2, 1.5, nu), seed=31)
        ws = weighted_sample(sample, 1.0)
        t = TuningPair(0.5, 1.0)
        model = lambda lam: student_density(StudentParams(lam[0], lam[1], nu))
        score = lambda y, lam: student_score(y, StudentParams(lam[0], lam[1], nu))
        res = eq14_residual(ws, model, (5.0, 1.0), t, score)
        assert np.max(np.abs(res)) > 1e-3


class TestDeformedPmf:
    def test_ex3_probabilities(self):
        pmf = deformed_pmf(GenLikKind.lnre(TuningPair(2.0, 1.0)), bern_family, 2, 0.75)
        table = {
            tuple(map(int, o)): p for o, p in zip(pmf.outcomes, pmf.probs)
        }
        assert table[(0, 0)] == pytest.approx(1 / 8, abs=1e-14)
        assert table[(0, 1)] == pytest.approx(1 / 4, abs=1e-14)
        assert table[(1, 0)] == pytest.approx(1 / 4, abs=1e-14)
        assert table[(1, 1)] == pytest.approx(3 / 8, abs=1e-14)

    def test_probs_sum_to_one(self):
        for kind in (
            GenLikKind.ml(),
            GenLikKind.dpd(2.0),
            GenLikKind.ldpd(2.0),
            GenLikKind.lnre(TuningPair(2.0, 1.5)),
        ):
            pmf = deformed_pmf(kind, bern_family, 3, 0.7)
            assert abs(pmf.probs.sum() - 1.0) < 1e-12

    def test_single_observation_ml_reduces_to_model(self):
        pmf = deformed_pmf(GenLikKind.ml(), bern_family, 1, 0.7)
        np.testing.assert_allclose(pmf.probs, [0.3, 0.7], atol=1e-15)

    def test_ml_is_product_measure(self):
        pmf = deformed_pmf(GenLikKind.ml(), bern_family, 3, 0.6)
        dens = bern_family(0.6)
        expected = np.prod(dens.pdf(pmf.outcomes), axis=1)
        np.testing.assert_allclose(pmf.probs, expected, atol=1e-14)

    def test_enumeration_bound(self):
        with pytest.raises(EnumerationTooLarge):
            deformed_pmf(GenLikKind.ml(), bern_family, 21, 0.5)

    def test_empirical_weights_beta_not_one(self):
        kind = GenLikKind.lnre(TuningPair(2.5, 1.5))
        pmf = deformed_pmf(kind, bern_family, 2, 0.7)
        w = pmf.outcome_weights()
        # (0, 1) has per-point empirical mass 1/2 -> weight (1/2)^(beta-1)
        mixed = np.where((pmf.outcomes[:, 0] != pmf.outcomes[:, 1]))[0][0]
        assert w[mixed, 0] == pytest.approx(0.5 ** 0.5)
        same = np.where((pmf.outcomes[:, 0] == pmf.outcomes[:, 1]))[0][0]
        assert w[same, 0] == pytest.approx(1.0)
        assert abs(pmf.probs.sum() - 1.0) < 1e-12
