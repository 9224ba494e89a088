#include "jsat/qc.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "jsat/genotype.hpp"

namespace jsat {

double hwe_exact_test(std::int64_t n_hom_minor, std::int64_t n_het, std::int64_t n_hom_major) {
  if (n_hom_minor < 0 || n_het < 0 || n_hom_major < 0)
    fail(errc::invalid_argument, "negative genotype count");
  const std::int64_t n = n_hom_minor + n_het + n_hom_major;
  if (n < 1) fail(errc::invalid_argument, "need at least one genotype");

  const std::int64_t rare = 2 * std::min(n_hom_minor, n_hom_major) + n_het;
  if (rare == 0) return 1.0;  // monomorphic

  // Conditional distribution of the heterozygote count given the allele
  // counts, built by the usual two-sided recurrence (Wigginton et al. 2005).
  std::vector<double> het_probs(static_cast<std::size_t>(rare) + 1, 0.0);
  std::int64_t mid = rare * (2 * n - rare) / (2 * n);
  if ((mid % 2) != (rare % 2)) ++mid;

  het_probs[static_cast<std::size_t>(mid)] = 1.0;
  double sum = 1.0;
  std::int64_t het = mid;
  std::int64_t hom_r = (rare - mid) / 2;
  std::int64_t hom_c = n - het - hom_r;
  while (het > 1) {
    const double next = het_probs[static_cast<std::size_t>(het)] *
                        static_cast<double>(het) * static_cast<double>(het - 1) /
                        (4.0 * static_cast<double>(hom_r + 1) * static_cast<double>(hom_c + 1));
    het_probs[static_cast<std::size_t>(het - 2)] = next;
    sum += next;
    het -= 2;
    ++hom_r;
    ++hom_c;
  }
  het = mid;
  hom_r = (rare - mid) / 2;
  hom_c = n - het - hom_r;
  while (het <= rare - 2) {
    const double next = het_probs[static_cast<std::size_t>(het)] * 4.0 *
                        static_cast<double>(hom_r) * static_cast<double>(hom_c) /
                        (static_cast<double>(het + 2) * static_cast<double>(het + 1));
    het_probs[static_cast<std::size_t>(het + 2)] = next;
    sum += next;
    het += 2;
    --hom_r;
    --hom_c;
  }
  for (auto& p : het_probs) p /= sum;

  // tiny slack so outcomes tied with the observed mass are counted even when
  // the two probabilities differ by rounding noise
  const double p_obs = het_probs[static_cast<std::size_t>(n_het)];
  double p_value = 0.0;
  for (std::int64_t h = rare % 2; h <= rare; h += 2) {
    const double p = het_probs[static_cast<std::size_t>(h)];
    if (p <= p_obs * (1.0 + 1e-12)) p_value += p;
  }
  return std::min(p_value, 1.0);
}

namespace {

struct GenotypeCounts {
  std::int64_t hom_minor = 0;  // dosage 2
  std::int64_t het = 0;
  std::int64_t hom_major = 0;  // dosage 0
};

GenotypeCounts count_genotypes(const Eigen::Ref<const Eigen::VectorXd>& col,
                               const PhenotypeVector& phenotype, bool controls_only) {
  GenotypeCounts c;
  for (Eigen::Index i = 0; i < col.size(); ++i) {
    if (controls_only && phenotype.is_case(i)) continue;
    const double d = col[i];
    if (dosage::is_missing(d)) continue;
    if (d == 2.0)
      ++c.hom_minor;
    else if (d == 1.0)
      ++c.het;
    else
      ++c.hom_major;
  }
  return c;
}

}  // namespace

std::pair<GenotypeMatrix, QcReport> run_qc(const GenotypeMatrix& matrix,
                                           const PhenotypeVector& phenotype,
                                           const QcConfig& config) {
  config.validate();
  if (phenotype.size() != matrix.n_samples())
    fail(errc::size_mismatch, "phenotype and matrix are not aligned");
  if (matrix.imputed) fail(errc::invalid_argument, "QC expects hard-call dosages");

  QcReport report;
  report.n_input_variants = matrix.n_variants();

  std::unordered_set<std::string> seen;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < matrix.n_variants(); ++j) {
    const auto& id = matrix.variants[static_cast<std::size_t>(j)].id;
    if (!seen.insert(id).second) {
      ++report.n_removed_duplicate;
      continue;
    }
    const auto col = matrix.dosages.col(j);
    if (missing_rate(col) > config.max_missing_rate) {
      ++report.n_removed_missing;
      continue;
    }
    const auto counts = count_genotypes(col, phenotype, config.hwe_in_controls_only);
    const std::int64_t total = counts.hom_minor + counts.het + counts.hom_major;
    const double hwe_p = total >= 1 ? hwe_exact_test(counts.hom_minor, counts.het, counts.hom_major)
                                    : 1.0;
    if (hwe_p < config.hwe_p_threshold) {
      ++report.n_removed_hwe;
      continue;
    }
    keep.push_back(j);
  }
  report.n_retained = static_cast<std::int64_t>(keep.size());

  GenotypeMatrix out;
  out.imputed = false;
  out.variants.reserve(keep.size());
  out.dosages.resize(matrix.n_samples(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    out.variants.push_back(matrix.variants[static_cast<std::size_t>(keep[k])]);
    out.dosages.col(static_cast<Eigen::Index>(k)) = matrix.dosages.col(keep[k]);
  }
  return {std::move(out), report};
}

std::vector<UnitDefinition> build_gene_units(const GenotypeMatrix& matrix,
                                             const GeneAnnotation& annotation) {
  std::vector<UnitDefinition> units;
  for (const auto& row : annotation) {
    UnitDefinition unit;
    unit.name = row.gene;
    for (Eigen::Index j = 0; j < matrix.n_variants(); ++j) {
      const auto& v = matrix.variants[static_cast<std::size_t>(j)];
      if (v.chromosome == row.chromosome && v.position >= row.start_bp && v.position <= row.end_bp)
        unit.member_indices.push_back(j);
    }
    if (!unit.member_indices.empty()) units.push_back(std::move(unit));
  }
  return units;
}

UnitDefinition window_unit(const GenotypeMatrix& matrix, const std::string& index_variant_id,
                           std::int64_t half_width_bp) {
  Eigen::Index index = -1;
  for (Eigen::Index j = 0; j < matrix.n_variants(); ++j)
    if (matrix.variants[static_cast<std::size_t>(j)].id == index_variant_id) {
      index = j;
      break;
    }
  if (index < 0) fail(errc::unknown_variant, "index variant " + index_variant_id + " not found");

  const auto& anchor = matrix.variants[static_cast<std::size_t>(index)];
  UnitDefinition unit;
  unit.name = index_variant_id + "_window";
  for (Eigen::Index j = 0; j < matrix.n_variants(); ++j) {
    const auto& v = matrix.variants[static_cast<std::size_t>(j)];
    if (v.chromosome != anchor.chromosome) continue;
    if (std::llabs(v.position - anchor.position) <= half_width_bp) unit.member_indices.push_back(j);
  }
  return unit;
}

}  // namespace jsat
