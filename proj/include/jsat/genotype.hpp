#ifndef JSAT_GENOTYPE_HPP
#define JSAT_GENOTYPE_HPP

#include <Eigen/Dense>

#include "jsat/types.hpp"

namespace jsat {

struct MafResult {
  double maf = 0.0;    // in [0, 0.5]
  bool flipped = false;  // true when the raw A1 frequency exceeds 0.5
};

// Minor allele frequency of one dosage column; throws errc::all_missing when
// no entry is callable.
MafResult minor_allele_frequency(const Eigen::Ref<const Eigen::VectorXd>& column);

// Fraction of missing entries.
double missing_rate(const Eigen::Ref<const Eigen::VectorXd>& column);

// Replace each missing entry by its column's expected dosage 2*MAF computed on
// the non-missing entries; column means are preserved exactly.
GenotypeMatrix impute_missing(const GenotypeMatrix& matrix);

// Keep the first occurrence of each variant id, dropping later duplicates.
GenotypeMatrix dedup_variants(const GenotypeMatrix& matrix);

// Reorient one column so that dosage counts the other allele (d -> 2 - d),
// swapping the allele labels. Missing entries stay missing.
void flip_column(GenotypeMatrix& matrix, Eigen::Index j);

// Extract a unit's columns as a dense real matrix for the tests; requires the
// matrix to be complete (impute first when missingness is present).
Eigen::MatrixXd unit_matrix(const GenotypeMatrix& matrix, const UnitDefinition& unit);

}  // namespace jsat

#endif
