#ifndef JSAT_IO_HPP
#define JSAT_IO_HPP

#include <string>
#include <vector>

#include "jsat/assoc.hpp"
#include "jsat/qc.hpp"
#include "jsat/simulate.hpp"
#include "jsat/types.hpp"

namespace jsat::io {

struct Dataset {
  GenotypeMatrix matrix;
  PhenotypeVector phenotype;
  std::int64_t n_dropped_missing_phenotype = 0;
};

// PLINK text pair. Alleles are re-oriented at load so dosage counts the minor
// allele; samples with missing phenotype (0 or -9) are dropped and counted.
Dataset read_ped_map(const std::string& ped_path, const std::string& map_path);
void write_ped_map(const GenotypeMatrix& matrix, const PhenotypeVector& phenotype,
                   const std::string& prefix);

// PLINK binary trio, variant-major only. Dosage counts the A1 allele exactly
// as stored; writing an imputed matrix is refused.
Dataset read_bed_bim_fam(const std::string& bed_path, const std::string& bim_path,
                         const std::string& fam_path);
void write_bed_bim_fam(const GenotypeMatrix& matrix, const PhenotypeVector& phenotype,
                       const std::string& prefix);

// Dispatch on <prefix>.bed vs <prefix>.ped.
Dataset read_plink_prefix(const std::string& prefix);

// 4-column TSV: gene, chromosome, start_bp, end_bp; header row optional.
GeneAnnotation load_gene_annotation(const std::string& tsv_path);

void write_results_csv(const std::string& path, const std::vector<AssocRow>& rows);
void write_qc_report_csv(const std::string& path, const QcReport& report);

// One row per (scenario, method); infeasible scenarios contribute a row with
// method "error" so a sweep never silently drops a condition.
void write_power_csv(const std::string& path, const std::vector<PowerReport>& reports,
                     const std::vector<std::string>& error_rows = {});

struct PowerCsvRow {
  std::string dataset;
  std::string method;
  std::int64_t n_cases = 0;
  std::int64_t n_controls = 0;
  double alpha = 0.05;
  double power = 0.0;
  std::int64_t n_replicates = 0;
};

std::vector<PowerCsvRow> read_power_csv(const std::string& path);

// stable float formatting shared by every CSV writer
std::string format_double(double value);

}  // namespace jsat::io

#endif
