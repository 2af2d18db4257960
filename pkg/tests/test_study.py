import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from lnre.divergences import ScalarDensity
from lnre.errors import QuadratureFailure
from lnre.models import StudentParams, normal_density, student_density
from lnre.study import (
    StudyConfig,
    ks_distance,
    newcomb_pipeline,
    numeric_cdf,
    run_contamination_study,
)

UNIFORM = ScalarDensity(
    pdf=lambda y: ((np.asarray(y) >= 0) & (np.asarray(y) <= 1)).astype(float),
    support=(0.0, 1.0),
    kind="continuous",
    loc=0.5,
    scale=1.0,
)


class TestNumericCdf:
    def test_cauchy_closed_form(self):
        cdf = numeric_cdf(student_density(StudentParams(0.0, 1.0, 1.0)))
        for y in (-3.0, -1.0, 0.0, 0.5, 2.0, 10.0):
            assert cdf(y) == pytest.approx(0.5 + np.arctan(y) / np.pi, abs=1e-9)

    def test_normal_closed_form(self):
        cdf = numeric_cdf(normal_density(0.3, 2.0))
        for y in (-2.0, 0.0, 0.3, 1.5):
            expected = 0.5 * (1 + special.erf((y - 0.3) / np.sqrt(4.0)))
            assert cdf(y) == pytest.approx(expected, abs=1e-9)

    def test_r_branch_support_ends(self):
        cdf = numeric_cdf(student_density(StudentParams(0.0, 1.0, -3.0)))
        assert cdf(-np.sqrt(3)) == 0.0
        assert cdf(np.sqrt(3)) == 1.0
        assert cdf(0.0) == pytest.approx(0.5, abs=1e-10)

    def test_monotone(self):
        cdf = numeric_cdf(student_density(StudentParams(0.5, 2.0, 3.0)))
        grid = np.linspace(-30, 30, 2001)
        vals = cdf(grid)
        assert np.all(np.diff(vals) >= 0)
        assert abs(cdf.total - 1.0) < 1e-8

    def test_rejects_unnormalized_density(self):
        bogus = ScalarDensity(
            pdf=lambda y: 2.0 * UNIFORM.pdf(y), support=(0.0, 1.0),
            kind="continuous", loc=0.5, scale=1.0,
        )
        with pytest.raises(QuadratureFailure):
            numeric_cdf(bogus)


class TestKsDistance:
    def test_one_jump(self):
        assert ks_distance([0.5], numeric_cdf(UNIFORM)).d_ks == pytest.approx(0.5)

    def test_perfect_grid_sample(self):
        # F(y_(i)) exactly halfway between (i-1)/n and i/n -> D = 1/(2n)
        n = 10
        sample = (np.arange(1, n + 1) - 0.5) / n
        assert ks_distance(sample, numeric_cdf(UNIFORM)).d_ks == pytest.approx(
            1 / (2 * n), abs=1e-9
        )

    @given(st.lists(st.floats(0.001, 0.999), min_size=1, max_size=40))
    @settings(max_examples=50, deadline=None)
    def test_matches_brute_force_on_grid(self, sample):
        sample = np.asarray(sample)
        cdf = lambda y: np.clip(np.asarray(y, dtype=float), 0.0, 1.0)  # U(0,1)
        exact = ks_distance(sample, cdf).d_ks
        # half-spacing grid so the one-sided jump limits are resolved to the
        # stated 1/(2e5) bound
        grid = np.linspace(0.0, 1.0, 200_001)
        ecdf = np.searchsorted(np.sort(sample), grid, side="right") / sample.size
        brute = np.max(np.abs(ecdf - cdf(grid)))
        assert brute <= exact + 1e-12
        assert exact <= brute + 1 / (2 * 100_000) + 1e-9


class TestContaminationStudy:
    def small_cfg(self, **kw):
        base = dict(
            n=30,
            reps=8,
            eta_grid=(0.0, 0.2),
            beta_grid=(1.0, 0.96),
            nu=3.0,
            seed=7,
            estimand="t",
        )
        base.update(kw)
        return StudyConfig(**base)

    def test_determinism(self):
        a = run_contamination_study(self.small_cfg())
        b = run_contamination_study(self.small_cfg())
        for ra, rb in zip(a.rows, b.rows):
            assert ra == rb

    def test_row_structure_and_se(self):
        table = run_contamination_study(self.small_cfg())
        assert len(table.rows) == 4
        for row in table.rows:
            assert row.n_used == 8
            assert row.n_dropped == 0
            assert row.se_sigma2 > 0
        assert sum(r.best for r in table.rows) == 2  # one per eta

    def test_se_scaling_with_reps(self):
        small = run_contamination_study(
            self.small_cfg(reps=250, eta_grid=(0.0,), beta_grid=(1.0,), n=50)
        )
        large = run_contamination_study(
            self.small_cfg(reps=1000, eta_grid=(0.0,), beta_grid=(1.0,), n=50)
        )
        # the location column has finite replicate variance (the scale
        # column inherits the infinite fourth moment of t_3 and its SE is
        # itself too noisy for a clean scaling check)
        ratio = small.rows[0].se_mu / large.rows[0].se_mu
        assert 1.6 <= ratio <= 2.4

    def test_location_study_rows(self):
        cfg = StudyConfig(
            n=20,
            reps=5,
            eta_grid=(0.2,),
            beta_grid=(1.0,),
            nu=-3.0,
            cont_mean=10.0,
            cont_var=1.0,
            seed=3,
            estimand="r_location",
        )
        table = run_contamination_study(cfg)
        row = table.rows[0]
        assert row.mean_sigma2 is None
        assert row.mean_mu is not None and row.best

    def test_beta_admissibility_validated(self):
        with pytest.raises(ValueError):
            StudyConfig(
                n=10, reps=2, eta_grid=(0.0,), beta_grid=(0.5,), nu=3.0, estimand="t"
            )


@pytest.fixture(scope="module")
def analysis():
    return newcomb_pipeline(beta_grid=(1.0, 2.0))


class TestNewcombPipeline:

    def test_mu_hat(self, analysis):
        assert analysis.mu_hat == pytest.approx(26.21, abs=0.01)

    def test_beta_one_scale_and_ks(self, analysis):
        fit = analysis.fits[0]
        assert fit.beta == 1.0
        assert fit.sigma2 == pytest.approx(35.74, abs=0.05)
        assert fit.d_ks == pytest.approx(0.1530, abs=0.003)

    def test_partition_first_cell(self, analysis):
        first = analysis.partition.cells[0]
        assert first.lower == pytest.approx(0.0064, abs=1e-3)
        assert first.upper == pytest.approx(0.0886, abs=1e-3)
        assert len(analysis.partition.cells) == 23

    def test_figure_data_shapes(self, analysis):
        assert analysis.hist_edges.size == analysis.hist_density.size + 1
        curves = list(analysis.curves())
        assert [b for b, _ in curves] == [1.0, 2.0]
        for _, vals in curves:
            assert vals.shape == analysis.curve_grid.shape
            assert np.all(vals >= 0)
