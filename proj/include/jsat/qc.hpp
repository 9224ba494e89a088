#ifndef JSAT_QC_HPP
#define JSAT_QC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "jsat/types.hpp"

namespace jsat {

struct QcConfig {
  double max_missing_rate = 0.05;
  double hwe_p_threshold = 1e-4;
  bool hwe_in_controls_only = true;

  void validate() const {
    if (max_missing_rate < 0.0 || max_missing_rate > 1.0)
      fail(errc::invalid_argument, "max_missing_rate must lie in [0,1]");
    if (hwe_p_threshold < 0.0 || hwe_p_threshold > 1.0)
      fail(errc::invalid_argument, "hwe_p_threshold must lie in [0,1]");
  }
};

struct QcReport {
  std::int64_t n_input_variants = 0;
  std::int64_t n_removed_duplicate = 0;
  std::int64_t n_removed_missing = 0;
  std::int64_t n_removed_hwe = 0;
  std::int64_t n_retained = 0;
};

// Levene-Haldane exact test for Hardy-Weinberg equilibrium. Two-sided P in
// (0,1]: the summed probability of every heterozygote count (given the allele
// counts) no more probable than the observed one. Monomorphic input gives 1.
double hwe_exact_test(std::int64_t n_hom_minor, std::int64_t n_het, std::int64_t n_hom_major);

// Variant filtering with fixed removal precedence: duplicate id (keep first),
// then missing rate > max_missing_rate, then HWE P < hwe_p_threshold. Each
// variant is counted once, under the first rule that removed it.
std::pair<GenotypeMatrix, QcReport> run_qc(const GenotypeMatrix& matrix,
                                           const PhenotypeVector& phenotype,
                                           const QcConfig& config);

struct GeneAnnotationRow {
  std::string gene;
  std::string chromosome;
  std::int64_t start_bp = 0;
  std::int64_t end_bp = 0;
};

using GeneAnnotation = std::vector<GeneAnnotationRow>;

// One unit per gene holding every variant inside [start, end] on the gene's
// chromosome; genes with no variants are omitted.
std::vector<UnitDefinition> build_gene_units(const GenotypeMatrix& matrix,
                                             const GeneAnnotation& annotation);

// All variants within half_width_bp of the index variant on its chromosome,
// boundary inclusive, index included.
UnitDefinition window_unit(const GenotypeMatrix& matrix, const std::string& index_variant_id,
                           std::int64_t half_width_bp = 20000);

}  // namespace jsat

#endif
