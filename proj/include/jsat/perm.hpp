#ifndef JSAT_PERM_HPP
#define JSAT_PERM_HPP

#include <cstdint>
#include <vector>

#include "jsat/error.hpp"
#include "jsat/rng.hpp"
#include "jsat/types.hpp"

namespace jsat {

enum class Tail { upper, two_sided_abs };

struct PermutationPlan {
  std::uint64_t seed = 0;
  std::int64_t n_permutations = 1000;
  // When set, the stream enumerates every distinct case/control assignment
  // except the observed one (feasible when C(n, n_case) <= exhaustive_limit);
  // the add-one estimator then reproduces the classical exhaustive P exactly.
  bool exhaustive = false;
  std::int64_t exhaustive_limit = 10000;
  // Re-derive the working sample order from the data itself so permutation
  // P-values do not depend on input row order.
  bool canonicalize = false;

  void validate() const {
    if (n_permutations < 1) fail(errc::invalid_argument, "n_permutations must be >= 1");
  }
};

struct EmpiricalP {
  double p = 1.0;
  std::int64_t n_as_extreme = 0;
  std::int64_t n_permutations = 0;
};

// Number of distinct case/control assignments C(n, k), saturating at `cap`.
std::int64_t count_assignments(std::int64_t n, std::int64_t k, std::int64_t cap);

// Deterministic stream of phenotype label assignments. Assignment b is a
// function of (seed, b) alone; random mode draws Fisher-Yates shuffles of the
// observed labels, exhaustive mode walks all distinct assignments minus the
// observed labelling in lexicographic order.
class PermutationStream {
 public:
  PermutationStream(const PhenotypeVector& observed, const PermutationPlan& plan);

  std::int64_t size() const { return size_; }
  bool exhaustive() const { return exhaustive_; }

  // Label assignment for permutation b as a 0/1 case-indicator vector.
  std::vector<std::uint8_t> assignment(std::int64_t b) const;

 private:
  std::vector<std::uint8_t> observed_;
  std::uint64_t seed_ = 0;
  std::int64_t size_ = 0;
  bool exhaustive_ = false;
  std::int64_t n_cases_ = 0;
  std::vector<std::vector<std::uint8_t>> enumerated_;  // exhaustive mode only
};

// Add-one permutation estimator: p = (1 + #extreme) / (1 + B).
EmpiricalP empirical_p(double observed_stat, const std::vector<double>& null_stats, Tail tail);

// Lexicographically smallest row order of (unit dosages, label); identical
// (row, label) pairs are interchangeable, so this order is canonical.
std::vector<Eigen::Index> canonical_sample_order(const Eigen::MatrixXd& unit,
                                                 const PhenotypeVector& phenotype);

}  // namespace jsat

#endif
