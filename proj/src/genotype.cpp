#include "jsat/genotype.hpp"

#include <unordered_set>

namespace jsat {

MafResult minor_allele_frequency(const Eigen::Ref<const Eigen::VectorXd>& column) {
  double sum = 0.0;
  Eigen::Index n_called = 0;
  for (Eigen::Index i = 0; i < column.size(); ++i) {
    if (dosage::is_missing(column[i])) continue;
    sum += column[i];
    ++n_called;
  }
  if (n_called == 0) fail(errc::all_missing, "column has no called genotypes");
  const double f = sum / (2.0 * static_cast<double>(n_called));
  MafResult r;
  r.flipped = f > 0.5;
  r.maf = r.flipped ? 1.0 - f : f;
  return r;
}

double missing_rate(const Eigen::Ref<const Eigen::VectorXd>& column) {
  if (column.size() == 0) fail(errc::invalid_argument, "empty column");
  Eigen::Index n_missing = 0;
  for (Eigen::Index i = 0; i < column.size(); ++i) n_missing += dosage::is_missing(column[i]);
  return static_cast<double>(n_missing) / static_cast<double>(column.size());
}

GenotypeMatrix impute_missing(const GenotypeMatrix& matrix) {
  GenotypeMatrix out = matrix;
  for (Eigen::Index j = 0; j < out.n_variants(); ++j) {
    auto col = out.dosages.col(j);
    double sum = 0.0;
    Eigen::Index n_called = 0;
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (dosage::is_missing(col[i])) continue;
      sum += col[i];
      ++n_called;
    }
    if (n_called == 0)
      fail(errc::all_missing,
           "cannot impute variant " + matrix.variants[static_cast<std::size_t>(j)].id);
    if (n_called == col.size()) continue;
    const double mean = sum / static_cast<double>(n_called);  // = 2 * raw allele frequency
    for (Eigen::Index i = 0; i < col.size(); ++i)
      if (dosage::is_missing(col[i])) col[i] = mean;
    out.imputed = true;  // a complete matrix passes through unchanged
  }
  return out;
}

GenotypeMatrix dedup_variants(const GenotypeMatrix& matrix) {
  std::unordered_set<std::string> seen;
  std::vector<Eigen::Index> keep;
  keep.reserve(static_cast<std::size_t>(matrix.n_variants()));
  for (Eigen::Index j = 0; j < matrix.n_variants(); ++j)
    if (seen.insert(matrix.variants[static_cast<std::size_t>(j)].id).second) keep.push_back(j);
  if (static_cast<Eigen::Index>(keep.size()) == matrix.n_variants()) return matrix;

  GenotypeMatrix out;
  out.imputed = matrix.imputed;
  out.variants.reserve(keep.size());
  out.dosages.resize(matrix.n_samples(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    out.variants.push_back(matrix.variants[static_cast<std::size_t>(keep[k])]);
    out.dosages.col(static_cast<Eigen::Index>(k)) = matrix.dosages.col(keep[k]);
  }
  return out;
}

void flip_column(GenotypeMatrix& matrix, Eigen::Index j) {
  auto col = matrix.dosages.col(j);
  for (Eigen::Index i = 0; i < col.size(); ++i)
    if (!dosage::is_missing(col[i])) col[i] = 2.0 - col[i];
  auto& v = matrix.variants[static_cast<std::size_t>(j)];
  std::swap(v.allele_a1, v.allele_a2);
}

Eigen::MatrixXd unit_matrix(const GenotypeMatrix& matrix, const UnitDefinition& unit) {
  unit.validate(matrix.n_variants());
  Eigen::MatrixXd g(matrix.n_samples(), static_cast<Eigen::Index>(unit.member_indices.size()));
  for (std::size_t k = 0; k < unit.member_indices.size(); ++k) {
    auto col = matrix.dosages.col(unit.member_indices[k]);
    if (col.hasNaN())
      fail(errc::invalid_argument, "unit " + unit.name + " has missing dosages; impute first");
    g.col(static_cast<Eigen::Index>(k)) = col;
  }
  return g;
}

}  // namespace jsat
