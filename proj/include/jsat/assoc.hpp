#ifndef JSAT_ASSOC_HPP
#define JSAT_ASSOC_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "jsat/perm.hpp"
#include "jsat/types.hpp"

namespace jsat {

enum class Method { hotelling, sumstat, skat, skato, fisher, sbbt };

const char* method_name(Method m);
std::optional<Method> method_from_name(const std::string& name);
std::vector<Method> all_methods();

struct TestResult {
  Method method = Method::hotelling;
  double statistic = 0.0;
  double p_value = 1.0;
  Eigen::Index n_variants = 0;
  std::int64_t n_permutations = -1;  // -1 for analytic tests
  bool p_clamped = false;            // a per-variant P hit the floating-point floor
};

enum class WeightScheme { beta_1_25, flat };

struct TestConfig {
  WeightScheme weights = WeightScheme::beta_1_25;
  std::vector<double> rho_grid = {0.0, 0.01, 0.04, 0.09, 0.16, 0.25, 0.5, 1.0};
  // reproduce the combination with no rho on the burden term
  bool skato_literal_combination = false;
  double sbbt_eigen_epsilon = 1e-8;
  std::int64_t sbbt_min_permutations = 100;
};

// Cochran-Armitage trend statistic in z form: difference of case/control mean
// dosages over its null standard error. Positive z means higher dosage in
// cases; a zero-variance column gives z = 0.
double per_snv_trend_z(const Eigen::Ref<const Eigen::VectorXd>& column,
                       const PhenotypeVector& phenotype);

// Per-variant weights for the variance-component tests; beta_1_25 evaluates
// the Beta(1,25) density at each column's MAF.
Eigen::VectorXd skat_weights(const Eigen::Ref<const Eigen::MatrixXd>& unit, WeightScheme scheme);

// Two-sample Hotelling t-squared with F conversion for the P-value.
TestResult hotelling_t2(const Eigen::Ref<const Eigen::MatrixXd>& unit,
                        const PhenotypeVector& phenotype);

// Sum of per-variant trend z over the unit; two-sided permutation P.
TestResult sumstat_test(const Eigen::Ref<const Eigen::MatrixXd>& unit,
                        const PhenotypeVector& phenotype, const PermutationPlan& plan);

// Variance-component score statistic Q = (y - mu)' G W^2 G' (y - mu).
double skat_q(const Eigen::Ref<const Eigen::MatrixXd>& unit, const PhenotypeVector& phenotype,
              const Eigen::Ref<const Eigen::VectorXd>& weights);

TestResult skat_test(const Eigen::Ref<const Eigen::MatrixXd>& unit,
                     const PhenotypeVector& phenotype,
                     const Eigen::Ref<const Eigen::VectorXd>& weights,
                     const PermutationPlan& plan);

// Optimal convex combination of the variance-component and burden statistics
// over a rho grid; omnibus P from the per-permutation minimum rank P.
TestResult skato_test(const Eigen::Ref<const Eigen::MatrixXd>& unit,
                      const PhenotypeVector& phenotype,
                      const Eigen::Ref<const Eigen::VectorXd>& weights,
                      const std::vector<double>& rho_grid, const PermutationPlan& plan,
                      const TestConfig& config = {});

// Combination core: X = -2 sum(ln p), P from the chi-square with 2k df.
struct FisherCombination {
  double statistic = 0.0;
  double p_value = 1.0;
  bool clamped = false;
};
FisherCombination fisher_combine_pvalues(const std::vector<double>& p_values);

// Fisher's combined test over the unit's per-variant two-sided trend P-values.
TestResult fisher_combined(const Eigen::Ref<const Eigen::MatrixXd>& unit,
                           const PhenotypeVector& phenotype);

// Statistic-space boundary test: whitened per-variant score vectors, a
// sign-anchored rejection domain past the observed vector, raw permutation
// tail mass, and a leave-one-out rank calibration of that mass.
TestResult sbbt_test(const Eigen::Ref<const Eigen::MatrixXd>& unit,
                     const PhenotypeVector& phenotype, const PermutationPlan& plan,
                     const TestConfig& config = {});

// Run the requested methods on one unit, sharing the permutation stream.
std::vector<TestResult> run_unit_tests(const Eigen::Ref<const Eigen::MatrixXd>& unit,
                                       const PhenotypeVector& phenotype,
                                       const std::vector<Method>& methods,
                                       const PermutationPlan& plan, const TestConfig& config = {});

struct AssocRow {
  std::string unit;
  TestResult result;
};

// Per-unit testing pipeline shared by the CLI and the harnesses. The matrix
// must be complete (imputed) already; units run in parallel across `threads`
// with results ordered by (unit, method) regardless of thread count.
std::vector<AssocRow> run_assoc(const GenotypeMatrix& matrix, const PhenotypeVector& phenotype,
                                const std::vector<UnitDefinition>& units,
                                const std::vector<Method>& methods, const PermutationPlan& plan,
                                const TestConfig& config, int threads);

}  // namespace jsat

#endif
