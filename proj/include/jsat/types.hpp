#ifndef JSAT_TYPES_HPP
#define JSAT_TYPES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "jsat/error.hpp"

namespace jsat {

// Hard-call dosages are 0/1/2 counts of the A1 allele; missing is NaN.
// After mean imputation a column may hold arbitrary reals in [0,2].
namespace dosage {
inline constexpr double missing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double d) { return std::isnan(d); }
inline bool is_hard_call(double d) { return d == 0.0 || d == 1.0 || d == 2.0; }
inline bool is_valid_raw(double d) { return is_missing(d) || is_hard_call(d); }
}  // namespace dosage

struct VariantRecord {
  std::string id;
  std::string chromosome;
  std::int64_t position = 0;  // base pairs
  std::string allele_a1;      // dosage-counted allele (minor by convention)
  std::string allele_a2;

  void validate() const {
    if (id.empty()) fail(errc::invalid_argument, "variant id must be non-empty");
    if (position < 0) fail(errc::invalid_argument, "variant " + id + " has negative position");
    if (!allele_a1.empty() && allele_a1 == allele_a2)
      fail(errc::invalid_argument, "variant " + id + " has identical alleles");
  }
};

// samples x variants dosage matrix; immutable after construction by convention
// (all operations return new objects), so safe to share across threads.
struct GenotypeMatrix {
  std::vector<VariantRecord> variants;
  Eigen::MatrixXd dosages;  // n_samples x n_variants
  bool imputed = false;     // true once columns may hold non-hard-call reals

  Eigen::Index n_samples() const { return dosages.rows(); }
  Eigen::Index n_variants() const { return dosages.cols(); }

  void validate() const {
    if (static_cast<std::size_t>(dosages.cols()) != variants.size())
      fail(errc::size_mismatch, "variant metadata does not match dosage columns");
    for (const auto& v : variants) v.validate();
    if (!imputed) {
      for (Eigen::Index j = 0; j < dosages.cols(); ++j)
        for (Eigen::Index i = 0; i < dosages.rows(); ++i)
          if (!dosage::is_valid_raw(dosages(i, j)))
            fail(errc::invalid_argument, "non hard-call dosage in raw matrix at variant " +
                                             variants[static_cast<std::size_t>(j)].id);
    }
  }
};

enum class Label : std::uint8_t { control = 0, case_ = 1 };

struct PhenotypeVector {
  std::vector<std::uint8_t> labels;  // 1 = case, 0 = control

  Eigen::Index size() const { return static_cast<Eigen::Index>(labels.size()); }
  bool is_case(Eigen::Index i) const { return labels[static_cast<std::size_t>(i)] != 0; }

  Eigen::Index n_cases() const {
    Eigen::Index n = 0;
    for (auto l : labels) n += l != 0;
    return n;
  }
  Eigen::Index n_controls() const { return size() - n_cases(); }

  void require_both_classes() const {
    if (n_cases() == 0) fail(errc::no_cases, "phenotype has no cases");
    if (n_controls() == 0) fail(errc::no_controls, "phenotype has no controls");
  }

  // 0/1 vector aligned with matrix rows
  Eigen::VectorXd as_vector() const {
    Eigen::VectorXd y(size());
    for (Eigen::Index i = 0; i < size(); ++i) y[i] = is_case(i) ? 1.0 : 0.0;
    return y;
  }
};

// A named group of variant columns tested jointly (gene or window).
struct UnitDefinition {
  std::string name;
  std::vector<Eigen::Index> member_indices;

  void validate(Eigen::Index n_variants) const {
    if (member_indices.empty()) fail(errc::invalid_argument, "unit " + name + " is empty");
    std::vector<bool> seen(static_cast<std::size_t>(n_variants), false);
    for (auto j : member_indices) {
      if (j < 0 || j >= n_variants)
        fail(errc::invalid_argument, "unit " + name + " has out-of-range index");
      if (seen[static_cast<std::size_t>(j)])
        fail(errc::invalid_argument, "unit " + name + " has duplicate index");
      seen[static_cast<std::size_t>(j)] = true;
    }
  }
};

}  // namespace jsat

#endif
