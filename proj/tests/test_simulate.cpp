#include <doctest.h>

#include "jsat/genotype.hpp"
#include "jsat/simulate.hpp"
#include "oracles.hpp"

using namespace jsat;

TEST_CASE("genotype frequencies under the disease model") {
  const auto null_model = case_control_genotype_freqs(0.3, 1.0, 1.0);
  for (int k = 0; k < 3; ++k)
    CHECK(null_model.case_[static_cast<std::size_t>(k)] ==
          doctest::Approx(null_model.control[static_cast<std::size_t>(k)]).epsilon(1e-14));

  // or_het 1.2, or_hom 2.4 at maf 0.05: tilt (1, 1.2, 2.4), normalizer 1.0225
  const auto d4 = case_control_genotype_freqs(0.05, 1.2, 2.4);
  CHECK(d4.control[0] == doctest::Approx(0.9025).epsilon(1e-14));
  CHECK(d4.control[1] == doctest::Approx(0.0950).epsilon(1e-14));
  CHECK(d4.control[2] == doctest::Approx(0.0025).epsilon(1e-14));
  CHECK(d4.case_[0] == doctest::Approx(0.9025 / 1.0225).epsilon(1e-12));
  CHECK(d4.case_[1] == doctest::Approx(0.1140 / 1.0225).epsilon(1e-12));
  CHECK(d4.case_[2] == doctest::Approx(0.0060 / 1.0225).epsilon(1e-12));
  CHECK(d4.case_[0] == doctest::Approx(0.882640586797).epsilon(1e-10));
  CHECK(d4.case_[1] == doctest::Approx(0.111491442543).epsilon(1e-10));
  CHECK(d4.case_[2] == doctest::Approx(0.005867970660).epsilon(1e-10));

  // vanishing maf concentrates the case distribution on dosage zero
  const auto rare = case_control_genotype_freqs(1e-12, 1.2, 2.4);
  CHECK(rare.case_[0] == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(case_control_genotype_freqs(0.05, 0.0, 2.0), Error);
}

TEST_CASE("haplotype table") {
  const auto indep = haplotype_table(0.2, 0.3, 0.0);
  CHECK(indep.minor_minor == doctest::Approx(0.06).epsilon(1e-14));
  CHECK(indep.minor_major == doctest::Approx(0.14).epsilon(1e-14));
  CHECK(indep.major_minor == doctest::Approx(0.24).epsilon(1e-14));
  CHECK(indep.major_major == doctest::Approx(0.56).epsilon(1e-14));

  // p = q = 0.05, r = 0.4: D = 0.019
  const auto d1 = haplotype_table(0.05, 0.05, 0.4);
  CHECK(d1.minor_minor == doctest::Approx(0.0215).epsilon(1e-12));

  // r = 0.96 stays feasible: minor-minor = 0.0481 <= 0.05
  const auto d2 = haplotype_table(0.05, 0.05, 0.96);
  CHECK(d2.minor_minor == doctest::Approx(0.0481).epsilon(1e-12));
  CHECK(d2.minor_minor <= 0.05);

  // the four cells always sum to one
  for (double r : {-0.1, 0.0, 0.3, 0.6}) {
    const auto t = haplotype_table(0.1, 0.2, r);
    CHECK(t.minor_minor + t.minor_major + t.major_minor + t.major_major ==
          doctest::Approx(1.0).epsilon(1e-12));
  }

  CHECK_THROWS_WITH_AS(haplotype_table(0.05, 0.5, 0.9), doctest::Contains("LD_INFEASIBLE"),
                       Error);
  CHECK_THROWS_WITH_AS(haplotype_table(0.05, 0.5, 0.9), doctest::Contains("minor-major"), Error);
}

TEST_CASE("perfect LD duplicates the causal column") {
  SimScenario s;
  s.dataset_id = "perfect";
  s.maf = 0.2;
  s.ld_r = 1.0;
  s.or_het = 1.5;
  s.or_hom = 2.25;
  s.n_pairs = 3;
  s.n_cases = 40;
  s.n_controls = 40;
  s.seed = 31;
  const auto [matrix, pheno] = generate_replicate(s, 0);
  for (std::int64_t k = 0; k < 3; ++k)
    CHECK(matrix.dosages.col(k) == matrix.dosages.col(3 + k));
  (void)pheno;
}

TEST_CASE("replicates are deterministic and distinct") {
  SimScenario s;
  s.dataset_id = "det";
  s.maf = 0.1;
  s.ld_r = 0.8;
  s.n_pairs = 5;
  s.n_cases = 30;
  s.n_controls = 30;
  s.seed = 5;
  const auto a = generate_replicate(s, 3);
  const auto b = generate_replicate(s, 3);
  CHECK(a.first.dosages == b.first.dosages);
  const auto c = generate_replicate(s, 4);
  CHECK(a.first.dosages != c.first.dosages);
}

TEST_CASE("null model leaves case and control frequencies equal") {
  SimScenario s;
  s.dataset_id = "null";
  s.maf = 0.2;
  s.ld_r = 0.8;
  s.or_het = 1.0;
  s.or_hom = 1.0;
  s.n_pairs = 2;
  s.n_cases = 4000;
  s.n_controls = 4000;
  s.seed = 17;
  const auto [matrix, pheno] = generate_replicate(s, 0);
  for (Eigen::Index j = 0; j < matrix.n_variants(); ++j) {
    double case_sum = 0.0, ctrl_sum = 0.0;
    for (Eigen::Index i = 0; i < matrix.n_samples(); ++i)
      (pheno.is_case(i) ? case_sum : ctrl_sum) += matrix.dosages(i, j);
    const double f_case = case_sum / (2.0 * 4000.0);
    const double f_ctrl = ctrl_sum / (2.0 * 4000.0);
    // 3 sigma on the frequency difference
    const double sigma = std::sqrt(2.0 * 0.2 * 0.8 / (2.0 * 4000.0));
    CHECK(std::fabs(f_case - f_ctrl) < 3.0 * sigma);
  }
}

TEST_CASE("marker marginal maf matches the causal maf in controls") {
  SimScenario s;
  s.dataset_id = "marg";
  s.maf = 0.05;
  s.ld_r = 0.8;
  s.or_het = 1.2;
  s.or_hom = 2.4;
  s.n_pairs = 5;
  s.n_cases = 100;
  s.n_controls = 20000;
  s.seed = 23;
  const auto [matrix, pheno] = generate_replicate(s, 0);
  for (std::int64_t k = 0; k < 5; ++k) {
    double sum = 0.0;
    std::int64_t n_ctrl = 0;
    for (Eigen::Index i = 0; i < matrix.n_samples(); ++i) {
      if (pheno.is_case(i)) continue;
      sum += matrix.dosages(i, 5 + k);
      ++n_ctrl;
    }
    const double f = sum / (2.0 * static_cast<double>(n_ctrl));
    const double sigma = std::sqrt(0.05 * 0.95 / (2.0 * static_cast<double>(n_ctrl)));
    CHECK(std::fabs(f - 0.05) < 3.0 * sigma);
  }
}

TEST_CASE("control genotypes stay in Hardy-Weinberg proportions") {
  // chi-square goodness of fit over 1e5 control draws, df = 2
  SimScenario s;
  s.dataset_id = "hwe";
  s.maf = 0.05;
  s.ld_r = 0.8;
  s.n_pairs = 1;
  s.n_cases = 1;
  s.n_controls = 100000;
  s.seed = 29;
  const auto [matrix, pheno] = generate_replicate(s, 0);
  std::array<double, 3> counts{0, 0, 0};
  for (Eigen::Index i = 0; i < matrix.n_samples(); ++i) {
    if (pheno.is_case(i)) continue;
    counts[static_cast<std::size_t>(matrix.dosages(i, 0))] += 1.0;
  }
  const double n = counts[0] + counts[1] + counts[2];
  const std::array<double, 3> expected{0.95 * 0.95 * n, 2 * 0.05 * 0.95 * n, 0.05 * 0.05 * n};
  double chisq = 0.0;
  for (int k = 0; k < 3; ++k)
    chisq += (counts[static_cast<std::size_t>(k)] - expected[static_cast<std::size_t>(k)]) *
             (counts[static_cast<std::size_t>(k)] - expected[static_cast<std::size_t>(k)]) /
             expected[static_cast<std::size_t>(k)];
  CHECK(oracles::chisq_sf_even_df(chisq, 1) > 0.001);  // df 2
}

TEST_CASE("dosage correlation between causal and marker tracks the ld parameter") {
  SimScenario s;
  for (const auto& sc : builtin_scenarios())
    if (sc.dataset_id == "Dataset4" && sc.n_cases == 1000) s = sc;
  double corr_sum = 0.0;
  const int reps = 5;
  for (int rep = 0; rep < reps; ++rep) {
    const auto [matrix, pheno] = generate_replicate(s, rep);
    for (std::int64_t k = 0; k < 5; ++k) {
      const auto causal = matrix.dosages.col(k);
      const auto marker = matrix.dosages.col(5 + k);
      const double mc = causal.mean(), mm = marker.mean();
      double num = 0.0, vc = 0.0, vm = 0.0;
      for (Eigen::Index i = 0; i < matrix.n_samples(); ++i) {
        num += (causal[i] - mc) * (marker[i] - mm);
        vc += (causal[i] - mc) * (causal[i] - mc);
        vm += (marker[i] - mm) * (marker[i] - mm);
      }
      corr_sum += num / std::sqrt(vc * vm);
    }
  }
  const double mean_corr = corr_sum / (5.0 * reps);
  CHECK(std::fabs(mean_corr - 0.8) < 0.05);
}

TEST_CASE("builtin scenarios cover the seven settings at three sizes") {
  const auto scenarios = builtin_scenarios();
  CHECK(scenarios.size() == 21);
  std::int64_t d6 = 0, d2 = 0;
  for (const auto& s : scenarios) {
    CHECK(s.n_pairs == 5);
    CHECK(s.n_replicates == 1000);
    CHECK_NOTHROW(haplotype_table(s.maf, s.maf, s.ld_r));  // all feasible
    if (s.dataset_id == "Dataset6") {
      CHECK(s.maf == 0.01);
      ++d6;
    }
    if (s.dataset_id == "Dataset2") {
      CHECK(s.ld_r == 0.96);
      ++d2;
    }
  }
  CHECK(d6 == 3);
  CHECK(d2 == 3);
  for (const auto& s : scenarios)
    CHECK((s.n_cases == 100 || s.n_cases == 500 || s.n_cases == 1000));
}

TEST_CASE("run_power is deterministic and thread-count independent") {
  SimScenario s;
  s.dataset_id = "smoke";
  s.maf = 0.2;
  s.ld_r = 0.8;
  s.or_het = 1.4;
  s.or_hom = 1.96;
  s.n_pairs = 2;
  s.n_cases = 25;
  s.n_controls = 25;
  s.n_replicates = 16;
  s.seed = 51;

  PowerOptions opt;
  opt.plan.n_permutations = 120;
  opt.plan.seed = 9;
  opt.threads = 1;
  const auto a = run_power(s, opt);
  opt.threads = 3;
  const auto b = run_power(s, opt);
  REQUIRE(a.rows.size() == 6);
  REQUIRE(b.rows.size() == 6);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].power == b.rows[i].power);
    CHECK(a.rows[i].mean_p == b.rows[i].mean_p);
    CHECK(a.rows[i].power >= 0.0);
    CHECK(a.rows[i].power <= 1.0);
    CHECK(a.rows[i].n_replicates == 16);
  }

  PowerOptions markers = opt;
  markers.markers_only = true;
  const auto c = run_power(s, markers);
  CHECK(c.rows.size() == 6);
}

TEST_CASE("infeasible scenarios are rejected by name") {
  SimScenario s;
  s.dataset_id = "bad";
  s.maf = 0.05;
  s.ld_r = 0.9;
  s.n_pairs = 1;
  s.n_cases = 10;
  s.n_controls = 10;
  // feasible at equal mafs; force infeasibility through an extreme negative r
  s.ld_r = -0.9;
  CHECK_THROWS_WITH_AS(generate_replicate(s, 0), doctest::Contains("LD_INFEASIBLE"), Error);
}
