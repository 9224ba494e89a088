#include "jsat/perm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace jsat {

std::int64_t count_assignments(std::int64_t n, std::int64_t k, std::int64_t cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  // exact while the running value stays integral and below cap
  long double c = 1.0L;
  for (std::int64_t i = 1; i <= k; ++i) {
    c = c * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (c > static_cast<long double>(cap) * 2.0L) return cap + 1;
  }
  std::int64_t v = static_cast<std::int64_t>(std::llroundl(c));
  return std::min(v, cap + 1);
}

namespace {

// all k-of-n case index sets in lexicographic order
void enumerate_combinations(std::int64_t n, std::int64_t k,
                            const std::vector<std::uint8_t>& skip,
                            std::vector<std::vector<std::uint8_t>>& out) {
  std::vector<std::int64_t> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    std::vector<std::uint8_t> labels(static_cast<std::size_t>(n), 0);
    for (auto i : idx) labels[static_cast<std::size_t>(i)] = 1;
    if (labels != skip) out.push_back(std::move(labels));
    // advance to the next combination
    std::int64_t pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (std::int64_t j = pos + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace

PermutationStream::PermutationStream(const PhenotypeVector& observed,
                                     const PermutationPlan& plan) {
  plan.validate();
  observed.require_both_classes();
  observed_ = observed.labels;
  seed_ = plan.seed;
  n_cases_ = observed.n_cases();
  const std::int64_t n = observed.size();
  if (plan.exhaustive) {
    const std::int64_t c = count_assignments(n, n_cases_, plan.exhaustive_limit);
    if (c > plan.exhaustive_limit)
      fail(errc::invalid_argument, "too many distinct assignments for exhaustive mode");
    exhaustive_ = true;
    enumerated_.reserve(static_cast<std::size_t>(c - 1));
    enumerate_combinations(n, n_cases_, observed_, enumerated_);
    size_ = static_cast<std::int64_t>(enumerated_.size());
  } else {
    size_ = plan.n_permutations;
  }
}

std::vector<std::uint8_t> PermutationStream::assignment(std::int64_t b) const {
  if (b < 0 || b >= size_) fail(errc::invalid_argument, "permutation index out of range");
  if (exhaustive_) return enumerated_[static_cast<std::size_t>(b)];
  std::vector<std::uint8_t> labels = observed_;
  Rng rng = Rng::from_stream(seed_, static_cast<std::uint64_t>(b));
  for (std::size_t i = labels.size() - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.bounded(i + 1));
    std::swap(labels[i], labels[j]);
  }
  return labels;
}

EmpiricalP empirical_p(double observed_stat, const std::vector<double>& null_stats, Tail tail) {
  if (null_stats.empty()) fail(errc::invalid_argument, "need at least one permutation");
  std::int64_t extreme = 0;
  if (tail == Tail::upper) {
    for (double s : null_stats) extreme += s >= observed_stat;
  } else {
    const double a = std::fabs(observed_stat);
    for (double s : null_stats) extreme += std::fabs(s) >= a;
  }
  EmpiricalP r;
  r.n_as_extreme = extreme;
  r.n_permutations = static_cast<std::int64_t>(null_stats.size());
  r.p = static_cast<double>(1 + extreme) / static_cast<double>(1 + r.n_permutations);
  return r;
}

std::vector<Eigen::Index> canonical_sample_order(const Eigen::MatrixXd& unit,
                                                 const PhenotypeVector& phenotype) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(unit.rows()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index j = 0; j < unit.cols(); ++j) {
      if (unit(a, j) != unit(b, j)) return unit(a, j) < unit(b, j);
    }
    return phenotype.labels[static_cast<std::size_t>(a)] <
           phenotype.labels[static_cast<std::size_t>(b)];
  });
  return order;
}

}  // namespace jsat
