#include "jsat/assoc.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

#include "jsat/dist.hpp"
#include "jsat/genotype.hpp"
#include "jsat/parallel.hpp"

namespace jsat {

const char* method_name(Method m) {
  switch (m) {
    case Method::hotelling: return "hotelling";
    case Method::sumstat: return "sumstat";
    case Method::skat: return "skat";
    case Method::skato: return "skato";
    case Method::fisher: return "fisher";
    case Method::sbbt: return "sbbt";
  }
  return "?";
}

std::optional<Method> method_from_name(const std::string& name) {
  for (Method m : all_methods())
    if (name == method_name(m)) return m;
  return std::nullopt;
}

std::vector<Method> all_methods() {
  return {Method::hotelling, Method::sumstat, Method::skat,
          Method::skato,     Method::fisher,  Method::sbbt};
}

namespace {

constexpr double kVarianceGuard = 1e-12;  // relative floor below which a column is constant

// Unit data in working order, plus the label-independent column summaries
// every score-based statistic is built from. For hard-call dosages the score
// numerators are exact integers, which keeps the flip/permutation symmetries
// of the statistics exact in floating point as well.
struct UnitData {
  Eigen::MatrixXd g;  // n x m
  std::vector<std::uint8_t> labels;
  double n_case = 0.0;
  double n_ctrl = 0.0;
  double n_total = 0.0;
  Eigen::VectorXd col_sum;  // S_j
  Eigen::VectorXd sigma2;   // pooled divide-by-N variance per column
  Eigen::VectorXd z_denom;  // sqrt(sigma2 * case*ctrl / N); 0 when constant

  Eigen::Index m() const { return g.cols(); }
  Eigen::Index n() const { return static_cast<Eigen::Index>(labels.size()); }
};

UnitData prepare_unit(const Eigen::Ref<const Eigen::MatrixXd>& unit,
                      const PhenotypeVector& phenotype, bool canonicalize) {
  phenotype.require_both_classes();
  if (unit.rows() != phenotype.size())
    fail(errc::size_mismatch, "unit rows do not match phenotype length");
  if (unit.cols() < 1) fail(errc::invalid_argument, "unit has no variants");
  if (unit.hasNaN()) fail(errc::invalid_argument, "unit has missing dosages; impute first");

  UnitData d;
  if (canonicalize) {
    const auto order = canonical_sample_order(unit, phenotype);
    d.g.resize(unit.rows(), unit.cols());
    d.labels.resize(static_cast<std::size_t>(unit.rows()));
    for (Eigen::Index i = 0; i < unit.rows(); ++i) {
      d.g.row(i) = unit.row(order[static_cast<std::size_t>(i)]);
      d.labels[static_cast<std::size_t>(i)] =
          phenotype.labels[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    }
  } else {
    d.g = unit;
    d.labels = phenotype.labels;
  }
  d.n_case = static_cast<double>(phenotype.n_cases());
  d.n_ctrl = static_cast<double>(phenotype.n_controls());
  d.n_total = d.n_case + d.n_ctrl;

  d.col_sum = d.g.colwise().sum().transpose();
  const Eigen::VectorXd col_sumsq = d.g.array().square().matrix().colwise().sum().transpose();
  d.sigma2.resize(d.m());
  d.z_denom.resize(d.m());
  for (Eigen::Index j = 0; j < d.m(); ++j) {
    const double num = d.n_total * col_sumsq[j] - d.col_sum[j] * d.col_sum[j];
    const bool constant = num <= kVarianceGuard * std::max(1.0, d.n_total * col_sumsq[j]);
    d.sigma2[j] = constant ? 0.0 : num / (d.n_total * d.n_total);
    d.z_denom[j] =
        constant ? 0.0 : std::sqrt(d.sigma2[j] * d.n_case * d.n_ctrl / d.n_total);
  }
  return d;
}

// u_j = sum_i (y_i - mu) g_ij computed as (N*Sc_j - m*S_j)/N; exact for
// integer dosages.
Eigen::VectorXd score_vector(const UnitData& d, const std::vector<std::uint8_t>& labels) {
  Eigen::VectorXd case_sum = Eigen::VectorXd::Zero(d.m());
  for (Eigen::Index i = 0; i < d.n(); ++i)
    if (labels[static_cast<std::size_t>(i)]) case_sum += d.g.row(i).transpose();
  return (d.n_total * case_sum - d.n_case * d.col_sum) / d.n_total;
}

struct NullScores {
  Eigen::VectorXd u_obs;   // m
  Eigen::MatrixXd u_null;  // m x B
};

NullScores build_scores(const UnitData& d, const PermutationStream& stream) {
  NullScores s;
  s.u_obs = score_vector(d, d.labels);
  const std::int64_t B = stream.size();
  s.u_null.resize(d.m(), B);

  const Eigen::Index block = 256;
  Eigen::MatrixXd y(d.n(), block);
  for (std::int64_t b0 = 0; b0 < B; b0 += block) {
    const Eigen::Index k = static_cast<Eigen::Index>(std::min<std::int64_t>(block, B - b0));
    for (Eigen::Index c = 0; c < k; ++c) {
      const auto labels = stream.assignment(b0 + c);
      for (Eigen::Index i = 0; i < d.n(); ++i)
        y(i, c) = labels[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
    }
    s.u_null.middleCols(b0, k) =
        (d.n_total * (d.g.transpose() * y.leftCols(k)) - d.n_case * d.col_sum *
                                                             Eigen::RowVectorXd::Ones(k)) /
        d.n_total;
  }
  return s;
}

Eigen::VectorXd z_from_scores(const UnitData& d, const Eigen::Ref<const Eigen::VectorXd>& u) {
  Eigen::VectorXd z = Eigen::VectorXd::Zero(d.m());
  for (Eigen::Index j = 0; j < d.m(); ++j)
    if (d.z_denom[j] > 0.0) z[j] = u[j] / d.z_denom[j];
  return z;
}

TestResult make_result(Method method, double statistic, double p, Eigen::Index n_variants,
                       std::int64_t n_permutations) {
  TestResult r;
  r.method = method;
  r.statistic = statistic;
  r.p_value = p;
  r.n_variants = n_variants;
  r.n_permutations = n_permutations;
  return r;
}

// The reductions over variants are written as plain sequential loops so that
// permutation ties are reproducible: a vectorized sum may associate terms
// differently and flip a >= comparison between two algebraically equal
// statistics.
double sum_sequential(const Eigen::Ref<const Eigen::VectorXd>& v) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) s += v[j];
  return s;
}

double skat_q_from_scores(const Eigen::Ref<const Eigen::VectorXd>& u,
                          const Eigen::Ref<const Eigen::VectorXd>& w) {
  double q = 0.0;
  for (Eigen::Index j = 0; j < u.size(); ++j) q += w[j] * w[j] * u[j] * u[j];
  return q;
}

double burden_q_from_scores(const Eigen::Ref<const Eigen::VectorXd>& u,
                            const Eigen::Ref<const Eigen::VectorXd>& w) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < u.size(); ++j) s += w[j] * u[j];
  return s * s;
}

// #{values >= v} via a sorted copy
struct SortedCounter {
  std::vector<double> sorted;
  explicit SortedCounter(const std::vector<double>& values) : sorted(values) {
    std::sort(sorted.begin(), sorted.end());
  }
  std::int64_t count_ge(double v) const {
    return static_cast<std::int64_t>(sorted.end() -
                                     std::lower_bound(sorted.begin(), sorted.end(), v));
  }
};

}  // namespace

namespace {

TestResult sumstat_core(const UnitData& d, const NullScores& scores, std::int64_t B) {
  const double s_obs = sum_sequential(z_from_scores(d, scores.u_obs));
  std::vector<double> s_null(static_cast<std::size_t>(B));
  for (std::int64_t b = 0; b < B; ++b)
    s_null[static_cast<std::size_t>(b)] = sum_sequential(z_from_scores(d, scores.u_null.col(b)));
  const EmpiricalP ep = empirical_p(s_obs, s_null, Tail::two_sided_abs);
  return make_result(Method::sumstat, s_obs, ep.p, d.m(), ep.n_permutations);
}

TestResult skat_core(const UnitData& d, const NullScores& scores, std::int64_t B,
                     const Eigen::Ref<const Eigen::VectorXd>& weights) {
  const double q_obs = skat_q_from_scores(scores.u_obs, weights);
  std::vector<double> q_null(static_cast<std::size_t>(B));
  for (std::int64_t b = 0; b < B; ++b)
    q_null[static_cast<std::size_t>(b)] = skat_q_from_scores(scores.u_null.col(b), weights);
  const EmpiricalP ep = empirical_p(q_obs, q_null, Tail::upper);
  return make_result(Method::skat, q_obs, ep.p, d.m(), ep.n_permutations);
}

TestResult skato_core(const UnitData& d, const NullScores& scores, std::int64_t B,
                      const Eigen::Ref<const Eigen::VectorXd>& weights,
                      const std::vector<double>& rho_grid, const TestConfig& config) {
  if (rho_grid.empty()) fail(errc::invalid_argument, "rho grid must be non-empty");
  for (double rho : rho_grid)
    if (rho < 0.0 || rho > 1.0) fail(errc::invalid_argument, "rho must lie in [0,1]");

  // the burden sum counts minor alleles regardless of the stored orientation,
  // so single-column flips leave the statistic unchanged (columns at exactly
  // 0.5 frequency have no distinguishable orientation and keep their sign)
  Eigen::VectorXd w_burden = weights;
  for (Eigen::Index j = 0; j < d.m(); ++j)
    if (d.col_sum[j] > d.n_total) w_burden[j] = -w_burden[j];

  const auto q_rho = [&](const Eigen::Ref<const Eigen::VectorXd>& u, double rho) {
    const double qs = skat_q_from_scores(u, weights);
    const double qb = burden_q_from_scores(u, w_burden);
    return config.skato_literal_combination ? (1.0 - rho) * qs + qb
                                            : (1.0 - rho) * qs + rho * qb;
  };

  // minimum rank-P across the grid, for the observation and each permutation
  double t_obs = 1.0;
  std::vector<double> t_null(static_cast<std::size_t>(B), 1.0);
  std::vector<double> q_null(static_cast<std::size_t>(B));
  for (double rho : rho_grid) {
    const double q_obs = q_rho(scores.u_obs, rho);
    for (std::int64_t b = 0; b < B; ++b)
      q_null[static_cast<std::size_t>(b)] = q_rho(scores.u_null.col(b), rho);
    const SortedCounter counter(q_null);
    t_obs = std::min(t_obs, static_cast<double>(1 + counter.count_ge(q_obs)) /
                                static_cast<double>(1 + B));
    for (std::int64_t b = 0; b < B; ++b) {
      const double p_b = static_cast<double>(
                             1 + counter.count_ge(q_null[static_cast<std::size_t>(b)])) /
                         static_cast<double>(1 + B);
      auto& t = t_null[static_cast<std::size_t>(b)];
      t = std::min(t, p_b);
    }
  }

  std::int64_t extreme = 0;
  for (double t : t_null) extreme += t <= t_obs;
  const double p = static_cast<double>(1 + extreme) / static_cast<double>(1 + B);
  return make_result(Method::skato, t_obs, p, d.m(), B);
}

// Signed distance of v past the boundary through the anchor that is normal
// to the anchor's sign pattern: sum_j sign(a_j) (v_j - a_j) over the nonzero
// coordinates. Positive means v lies in the rejection domain.
double boundary_excess(const Eigen::Ref<const Eigen::VectorXd>& anchor,
                       const Eigen::Ref<const Eigen::VectorXd>& v, bool& degenerate) {
  double s = 0.0;
  degenerate = true;
  for (Eigen::Index j = 0; j < anchor.size(); ++j) {
    const double a = anchor[j];
    if (a == 0.0) continue;
    degenerate = false;
    s += a > 0.0 ? v[j] - a : a - v[j];
  }
  return s;
}

// Tail behaviour of one anchor against a set of vectors: how many lie
// strictly past its boundary, and how close the nearest non-member comes.
// An all-zero anchor has a degenerate boundary: everything is inside.
struct BoundaryTail {
  std::int64_t members = 0;
  double margin = -std::numeric_limits<double>::infinity();  // max boundary excess

  // lexicographic "at least as extreme": fewer members, then a boundary the
  // null sample approaches less closely (breaks the heavy count ties that
  // otherwise floor the calibration in higher dimensions)
  bool at_least_as_extreme_as(const BoundaryTail& other) const {
    if (members != other.members) return members < other.members;
    return margin <= other.margin;
  }
};

BoundaryTail boundary_tail(const Eigen::Ref<const Eigen::VectorXd>& anchor,
                           const Eigen::Ref<const Eigen::MatrixXd>& vectors, std::int64_t skip) {
  BoundaryTail t;
  for (std::int64_t o = 0; o < vectors.cols(); ++o) {
    if (o == skip) continue;
    bool degenerate = false;
    const double excess = boundary_excess(anchor, vectors.col(o), degenerate);
    if (degenerate) {
      ++t.members;
      t.margin = std::numeric_limits<double>::infinity();
      continue;
    }
    t.members += excess > 0.0;
    t.margin = std::max(t.margin, excess);
  }
  return t;
}

TestResult sbbt_core(const UnitData& d, const NullScores& scores, std::int64_t B,
                     const TestConfig& config) {
  if (B < config.sbbt_min_permutations)
    fail(errc::invalid_argument, "sbbt needs at least " +
                                     std::to_string(config.sbbt_min_permutations) +
                                     " permutations for the rank calibration");

  Eigen::VectorXd z_obs = z_from_scores(d, scores.u_obs);
  Eigen::MatrixXd z_null(d.m(), B);
  for (std::int64_t b = 0; b < B; ++b) z_null.col(b) = z_from_scores(d, scores.u_null.col(b));

  // whitening transform from the permutation-null covariance of the scores
  const Eigen::VectorXd z_mean = z_null.rowwise().mean();
  const Eigen::MatrixXd centered = z_null.colwise() - z_mean;
  const Eigen::MatrixXd cov =
      centered * centered.transpose() / static_cast<double>(B - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  const double lambda_max = es.eigenvalues()[d.m() - 1];

  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < d.m(); ++j)
    if (es.eigenvalues()[j] > 0.0 && es.eigenvalues()[j] > config.sbbt_eigen_epsilon * lambda_max)
      kept.push_back(j);

  const Eigen::Index r = static_cast<Eigen::Index>(kept.size());
  Eigen::MatrixXd whitener(r, d.m());
  for (Eigen::Index k = 0; k < r; ++k) {
    Eigen::VectorXd v = es.eigenvectors().col(kept[static_cast<std::size_t>(k)]);
    Eigen::Index argmax = 0;
    v.array().abs().maxCoeff(&argmax);
    if (v[argmax] < 0.0) v = -v;  // fixes the eigenvector sign convention
    whitener.row(k) =
        v.transpose() / std::sqrt(es.eigenvalues()[kept[static_cast<std::size_t>(k)]]);
  }

  const Eigen::VectorXd w_obs = whitener * z_obs;
  const Eigen::MatrixXd w_null = whitener * z_null;

  const BoundaryTail obs_tail = boundary_tail(w_obs, w_null, -1);
  const double q_obs =
      static_cast<double>(1 + obs_tail.members) / static_cast<double>(1 + B);

  // an all-zero score vector carries no signal and no direction
  if ((z_obs.array() == 0.0).all()) return make_result(Method::sbbt, q_obs, 1.0, d.m(), B);

  // Component 1, boundary: rank of each anchor's tail against the others
  // (an anchor never lies past its own boundary).
  std::vector<BoundaryTail> tails(static_cast<std::size_t>(B));
  for (std::int64_t b = 0; b < B; ++b)
    tails[static_cast<std::size_t>(b)] = boundary_tail(w_null.col(b), w_null, b);

  const auto boundary_rank_p = [&](const BoundaryTail& tail) {
    std::int64_t count = 0;
    for (const auto& t : tails) count += t.at_least_as_extreme_as(tail);
    return static_cast<double>(1 + count) / static_cast<double>(1 + B);
  };

  // Component 2, direction: projection of the whitened scores onto the
  // whitened image of the all-deleterious direction (minor-allele oriented,
  // like the burden sum), upper tail. This is the directional part of the
  // combination; the boundary alone is symmetric in the effect signs and
  // blind to their agreement.
  Eigen::VectorXd orient = Eigen::VectorXd::Ones(d.m());
  for (Eigen::Index j = 0; j < d.m(); ++j)
    if (d.col_sum[j] > d.n_total) orient[j] = -1.0;
  const Eigen::VectorXd direction = whitener * orient;
  const auto project = [&](const Eigen::Ref<const Eigen::VectorXd>& v) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < direction.size(); ++j) s += direction[j] * v[j];
    return s;
  };
  std::vector<double> proj_null(static_cast<std::size_t>(B));
  for (std::int64_t b = 0; b < B; ++b)
    proj_null[static_cast<std::size_t>(b)] = project(w_null.col(b));
  const SortedCounter proj_counter(proj_null);
  const auto direction_rank_p = [&](double value) {
    return static_cast<double>(1 + proj_counter.count_ge(value)) / static_cast<double>(1 + B);
  };

  // omnibus: the smaller of the two component ranks, itself rank-calibrated
  const double t_obs =
      std::min(boundary_rank_p(obs_tail), direction_rank_p(project(w_obs)));
  std::int64_t extreme = 0;
  for (std::int64_t b = 0; b < B; ++b) {
    const double t_b = std::min(boundary_rank_p(tails[static_cast<std::size_t>(b)]),
                                direction_rank_p(proj_null[static_cast<std::size_t>(b)]));
    extreme += t_b <= t_obs;
  }
  const double p = static_cast<double>(1 + extreme) / static_cast<double>(1 + B);
  return make_result(Method::sbbt, q_obs, p, d.m(), B);
}

}  // namespace

double per_snv_trend_z(const Eigen::Ref<const Eigen::VectorXd>& column,
                       const PhenotypeVector& phenotype) {
  const UnitData d = prepare_unit(column, phenotype, false);
  const Eigen::VectorXd u = score_vector(d, d.labels);
  return z_from_scores(d, u)[0];
}

Eigen::VectorXd skat_weights(const Eigen::Ref<const Eigen::MatrixXd>& unit, WeightScheme scheme) {
  Eigen::VectorXd w = Eigen::VectorXd::Ones(unit.cols());
  if (scheme == WeightScheme::flat) return w;
  for (Eigen::Index j = 0; j < unit.cols(); ++j) {
    const double f = unit.col(j).mean() / 2.0;
    const double maf = std::min(f, 1.0 - f);
    w[j] = dist::beta_density(maf, 1.0, 25.0);
  }
  return w;
}

TestResult hotelling_t2(const Eigen::Ref<const Eigen::MatrixXd>& unit,
                        const PhenotypeVector& phenotype) {
  phenotype.require_both_classes();
  if (unit.rows() != phenotype.size())
    fail(errc::size_mismatch, "unit rows do not match phenotype length");
  const double m = static_cast<double>(phenotype.n_cases());
  const double n = static_cast<double>(phenotype.n_controls());
  const double N = m + n;
  const Eigen::Index p = unit.cols();
  if (N - 1.0 - static_cast<double>(p) < 1.0 || N - 2.0 < 1.0)
    fail(errc::insufficient_samples, "need m+n-1-p >= 1 for the F conversion");

  Eigen::VectorXd mean_case = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd mean_ctrl = Eigen::VectorXd::Zero(p);
  for (Eigen::Index i = 0; i < unit.rows(); ++i)
    (phenotype.is_case(i) ? mean_case : mean_ctrl) += unit.row(i).transpose();
  mean_case /= m;
  mean_ctrl /= n;

  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < unit.rows(); ++i) {
    const Eigen::VectorXd c =
        unit.row(i).transpose() - (phenotype.is_case(i) ? mean_case : mean_ctrl);
    scatter.selfadjointView<Eigen::Lower>().rankUpdate(c);
  }
  Eigen::MatrixXd sigma = scatter.selfadjointView<Eigen::Lower>();
  sigma /= N - 2.0;

  // regularize only when the pooled covariance is numerically rank-deficient
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
  if (es.eigenvalues()[0] <= 1e-10 * es.eigenvalues()[p - 1]) {
    const double ridge = 1e-8 * sigma.trace() / static_cast<double>(p);
    sigma.diagonal().array() += ridge;
    es.compute(sigma);
    if (es.eigenvalues()[0] <= 0.0)
      fail(errc::singular_covariance, "pooled covariance is singular after regularization");
  }

  const Eigen::VectorXd diff = mean_case - mean_ctrl;
  const Eigen::VectorXd rotated = es.eigenvectors().transpose() * diff;
  const double quad = (rotated.array().square() / es.eigenvalues().array()).sum();
  const double t2 = (m * n / N) * quad;
  const double f_stat = (N - static_cast<double>(p) - 1.0) /
                        ((N - 2.0) * static_cast<double>(p)) * t2;
  const double pval = dist::f_sf(f_stat, static_cast<double>(p),
                                 N - 1.0 - static_cast<double>(p));
  return make_result(Method::hotelling, t2, pval, p, -1);
}

TestResult sumstat_test(const Eigen::Ref<const Eigen::MatrixXd>& unit,
                        const PhenotypeVector& phenotype, const PermutationPlan& plan) {
  const UnitData d = prepare_unit(unit, phenotype, plan.canonicalize);
  const PermutationStream stream(PhenotypeVector{d.labels}, plan);
  return sumstat_core(d, build_scores(d, stream), stream.size());
}

double skat_q(const Eigen::Ref<const Eigen::MatrixXd>& unit, const PhenotypeVector& phenotype,
              const Eigen::Ref<const Eigen::VectorXd>& weights) {
  const UnitData d = prepare_unit(unit, phenotype, false);
  if (weights.size() != d.m()) fail(errc::size_mismatch, "weight length does not match unit");
  for (Eigen::Index j = 0; j < weights.size(); ++j)
    if (!(weights[j] > 0.0)) fail(errc::invalid_argument, "weights must be positive");
  return skat_q_from_scores(score_vector(d, d.labels), weights);
}

TestResult skat_test(const Eigen::Ref<const Eigen::MatrixXd>& unit,
                     const PhenotypeVector& phenotype,
                     const Eigen::Ref<const Eigen::VectorXd>& weights,
                     const PermutationPlan& plan) {
  const UnitData d = prepare_unit(unit, phenotype, plan.canonicalize);
  const PermutationStream stream(PhenotypeVector{d.labels}, plan);
  return skat_core(d, build_scores(d, stream), stream.size(), weights);
}

TestResult skato_test(const Eigen::Ref<const Eigen::MatrixXd>& unit,
                      const PhenotypeVector& phenotype,
                      const Eigen::Ref<const Eigen::VectorXd>& weights,
                      const std::vector<double>& rho_grid, const PermutationPlan& plan,
                      const TestConfig& config) {
  const UnitData d = prepare_unit(unit, phenotype, plan.canonicalize);
  const PermutationStream stream(PhenotypeVector{d.labels}, plan);
  return skato_core(d, build_scores(d, stream), stream.size(), weights, rho_grid, config);
}

FisherCombination fisher_combine_pvalues(const std::vector<double>& p_values) {
  if (p_values.empty()) fail(errc::invalid_argument, "need at least one P-value");
  FisherCombination out;
  double x = 0.0;
  for (double p : p_values) {
    if (p < 0.0 || p > 1.0) fail(errc::invalid_argument, "P-value outside [0,1]");
    if (p <= 0.0) {
      p = DBL_MIN;
      out.clamped = true;
    }
    x += -2.0 * std::log(p);
  }
  out.statistic = x;
  out.p_value = dist::chisq_sf(x, 2.0 * static_cast<double>(p_values.size()));
  return out;
}

TestResult fisher_combined(const Eigen::Ref<const Eigen::MatrixXd>& unit,
                           const PhenotypeVector& phenotype) {
  const UnitData d = prepare_unit(unit, phenotype, false);
  const Eigen::VectorXd z = z_from_scores(d, score_vector(d, d.labels));
  std::vector<double> p_values(static_cast<std::size_t>(d.m()));
  for (Eigen::Index j = 0; j < d.m(); ++j)
    p_values[static_cast<std::size_t>(j)] = dist::normal_two_sided_p(z[j]);
  const FisherCombination c = fisher_combine_pvalues(p_values);
  TestResult r = make_result(Method::fisher, c.statistic, c.p_value, d.m(), -1);
  r.p_clamped = c.clamped;
  return r;
}

TestResult sbbt_test(const Eigen::Ref<const Eigen::MatrixXd>& unit,
                     const PhenotypeVector& phenotype, const PermutationPlan& plan,
                     const TestConfig& config) {
  const UnitData d = prepare_unit(unit, phenotype, plan.canonicalize);
  const PermutationStream stream(PhenotypeVector{d.labels}, plan);
  return sbbt_core(d, build_scores(d, stream), stream.size(), config);
}

std::vector<TestResult> run_unit_tests(const Eigen::Ref<const Eigen::MatrixXd>& unit,
                                       const PhenotypeVector& phenotype,
                                       const std::vector<Method>& methods,
                                       const PermutationPlan& plan, const TestConfig& config) {
  bool needs_scores = false;
  bool needs_weights = false;
  for (Method m : methods) {
    needs_scores |= m == Method::sumstat || m == Method::skat || m == Method::skato ||
                    m == Method::sbbt;
    needs_weights |= m == Method::skat || m == Method::skato;
  }

  // one stream and one score matrix shared by every permutation test
  UnitData d;
  NullScores scores;
  std::int64_t B = 0;
  if (needs_scores) {
    d = prepare_unit(unit, phenotype, plan.canonicalize);
    const PermutationStream stream(PhenotypeVector{d.labels}, plan);
    scores = build_scores(d, stream);
    B = stream.size();
  }
  Eigen::VectorXd weights;
  if (needs_weights) weights = skat_weights(unit, config.weights);

  std::vector<TestResult> results;
  results.reserve(methods.size());
  for (Method m : methods) {
    switch (m) {
      case Method::hotelling:
        results.push_back(hotelling_t2(unit, phenotype));
        break;
      case Method::sumstat:
        results.push_back(sumstat_core(d, scores, B));
        break;
      case Method::skat:
        results.push_back(skat_core(d, scores, B, weights));
        break;
      case Method::skato:
        results.push_back(skato_core(d, scores, B, weights, config.rho_grid, config));
        break;
      case Method::fisher:
        results.push_back(fisher_combined(unit, phenotype));
        break;
      case Method::sbbt:
        results.push_back(sbbt_core(d, scores, B, config));
        break;
    }
  }
  return results;
}

std::vector<AssocRow> run_assoc(const GenotypeMatrix& matrix, const PhenotypeVector& phenotype,
                                const std::vector<UnitDefinition>& units,
                                const std::vector<Method>& methods, const PermutationPlan& plan,
                                const TestConfig& config, int threads) {
  std::vector<std::vector<TestResult>> per_unit(units.size());
  parallel_for(static_cast<std::int64_t>(units.size()), threads, [&](std::int64_t i) {
    const auto g = unit_matrix(matrix, units[static_cast<std::size_t>(i)]);
    per_unit[static_cast<std::size_t>(i)] =
        run_unit_tests(g, phenotype, methods, plan, config);
  });

  std::vector<AssocRow> rows;
  rows.reserve(units.size() * methods.size());
  for (std::size_t i = 0; i < units.size(); ++i)
    for (const auto& result : per_unit[i]) rows.push_back({units[i].name, result});
  return rows;
}

}  // namespace jsat
