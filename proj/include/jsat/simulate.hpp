#ifndef JSAT_SIMULATE_HPP
#define JSAT_SIMULATE_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "jsat/assoc.hpp"
#include "jsat/types.hpp"

namespace jsat {

// One simulated condition: paired causal/marker variants with a genotype
// relative-risk disease model and haplotype-level LD within each pair.
struct SimScenario {
  std::string dataset_id;
  double or_het = 1.0;
  double or_hom = 1.0;
  double maf = 0.05;
  double ld_r = 0.8;  // causal/marker correlation coefficient
  std::int64_t n_pairs = 5;
  std::int64_t n_cases = 0;
  std::int64_t n_controls = 0;
  std::int64_t n_replicates = 1000;
  std::uint64_t seed = 0;
};

// P(dosage = 0, 1, 2) for one class
using GenotypeDistribution = std::array<double, 3>;

struct CaseControlFreqs {
  GenotypeDistribution control;  // Hardy-Weinberg at the MAF
  GenotypeDistribution case_;    // control tilted by (1, or_het, or_hom)
};

CaseControlFreqs case_control_genotype_freqs(double maf, double or_het, double or_hom);

// Haplotype frequencies over (causal allele, marker allele) with
// D = r * sqrt(p(1-p)q(1-q)); throws errc::ld_infeasible naming the violated
// bound when any cell leaves [0,1].
struct HaplotypeTable {
  double minor_minor = 0.0;
  double minor_major = 0.0;
  double major_minor = 0.0;
  double major_major = 0.0;

  double p_marker_minor_given_causal_minor() const {
    return minor_minor / (minor_minor + minor_major);
  }
  double p_marker_minor_given_causal_major() const {
    return major_minor / (major_minor + major_major);
  }
};

HaplotypeTable haplotype_table(double maf_causal, double maf_marker, double ld_r);

// One replicate: columns causal_1..causal_k then marker_1..marker_k, cases
// first; deterministic in (scenario.seed, replicate_index).
std::pair<GenotypeMatrix, PhenotypeVector> generate_replicate(const SimScenario& scenario,
                                                              std::int64_t replicate_index);

struct PowerRow {
  Method method = Method::hotelling;
  double alpha = 0.05;
  double power = 0.0;
  std::int64_t n_replicates = 0;
  double mean_p = 1.0;
};

struct PowerReport {
  SimScenario scenario;
  std::vector<PowerRow> rows;
};

struct PowerOptions {
  std::vector<Method> methods = all_methods();
  double alpha = 0.05;
  PermutationPlan plan;       // plan.seed is re-derived per replicate
  TestConfig test_config;
  bool markers_only = false;  // test the marker columns only, not all pairs
  int threads = 1;
};

// Empirical power per method: the proportion of replicates with P <= alpha.
PowerReport run_power(const SimScenario& scenario, const PowerOptions& options);

// The seven tabulated parameter settings crossed with the three sample sizes.
std::vector<SimScenario> builtin_scenarios();

}  // namespace jsat

#endif
