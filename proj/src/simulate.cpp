#include "jsat/simulate.hpp"

#include <cmath>

#include "jsat/genotype.hpp"
#include "jsat/parallel.hpp"
#include "jsat/rng.hpp"

namespace jsat {

CaseControlFreqs case_control_genotype_freqs(double maf, double or_het, double or_hom) {
  if (maf < 0.0 || maf > 1.0) fail(errc::invalid_argument, "maf must lie in [0,1]");
  if (!(or_het > 0.0) || !(or_hom > 0.0)) fail(errc::invalid_argument, "odds ratios must be > 0");
  const double p = maf;
  const double q = 1.0 - maf;
  CaseControlFreqs f;
  f.control = {q * q, 2.0 * p * q, p * p};
  GenotypeDistribution tilted = {f.control[0], f.control[1] * or_het, f.control[2] * or_hom};
  const double norm = tilted[0] + tilted[1] + tilted[2];
  f.case_ = {tilted[0] / norm, tilted[1] / norm, tilted[2] / norm};
  return f;
}

HaplotypeTable haplotype_table(double maf_causal, double maf_marker, double ld_r) {
  if (maf_causal <= 0.0 || maf_causal >= 1.0 || maf_marker <= 0.0 || maf_marker >= 1.0)
    fail(errc::invalid_argument, "allele frequencies must lie in (0,1)");
  if (ld_r < -1.0 || ld_r > 1.0) fail(errc::invalid_argument, "ld_r must lie in [-1,1]");
  const double p = maf_causal;
  const double q = maf_marker;
  const double d = ld_r * std::sqrt(p * (1.0 - p) * q * (1.0 - q));

  HaplotypeTable t;
  t.minor_minor = p * q + d;
  t.minor_major = p * (1.0 - q) - d;
  t.major_minor = (1.0 - p) * q - d;
  t.major_major = (1.0 - p) * (1.0 - q) + d;

  const auto check = [&](double freq, const char* name) {
    if (freq < 0.0 || freq > 1.0)
      fail(errc::ld_infeasible, std::string("haplotype frequency ") + name + " = " +
                                    std::to_string(freq) + " outside [0,1]");
  };
  check(t.minor_minor, "minor-minor");
  check(t.minor_major, "minor-major");
  check(t.major_minor, "major-minor");
  check(t.major_major, "major-major");
  return t;
}

namespace {

int sample_dosage(const GenotypeDistribution& dist, Rng& rng) {
  const double u = rng.uniform01();
  if (u < dist[0]) return 0;
  if (u < dist[0] + dist[1]) return 1;
  return 2;
}

}  // namespace

std::pair<GenotypeMatrix, PhenotypeVector> generate_replicate(const SimScenario& scenario,
                                                              std::int64_t replicate_index) {
  if (scenario.n_pairs < 1) fail(errc::invalid_argument, "need at least one causal/marker pair");
  if (scenario.n_cases < 1 || scenario.n_controls < 1)
    fail(errc::invalid_argument, "need at least one case and one control");

  const CaseControlFreqs freqs =
      case_control_genotype_freqs(scenario.maf, scenario.or_het, scenario.or_hom);
  const HaplotypeTable hap = haplotype_table(scenario.maf, scenario.maf, scenario.ld_r);
  const double marker_given_minor = hap.p_marker_minor_given_causal_minor();
  const double marker_given_major = hap.p_marker_minor_given_causal_major();

  const std::int64_t n = scenario.n_cases + scenario.n_controls;
  const std::int64_t k = scenario.n_pairs;

  GenotypeMatrix matrix;
  matrix.dosages.resize(n, 2 * k);
  matrix.variants.resize(static_cast<std::size_t>(2 * k));
  for (std::int64_t j = 0; j < k; ++j) {
    auto& causal = matrix.variants[static_cast<std::size_t>(j)];
    causal.id = "causal" + std::to_string(j + 1);
    causal.chromosome = "1";
    causal.position = 100000 * (j + 1);
    causal.allele_a1 = "A";
    causal.allele_a2 = "B";
    auto& marker = matrix.variants[static_cast<std::size_t>(k + j)];
    marker.id = "marker" + std::to_string(j + 1);
    marker.chromosome = "1";
    marker.position = 100000 * (j + 1) + 500;
    marker.allele_a1 = "A";
    marker.allele_a2 = "B";
  }

  PhenotypeVector phenotype;
  phenotype.labels.resize(static_cast<std::size_t>(n));
  Rng rng = Rng::from_stream(scenario.seed, static_cast<std::uint64_t>(replicate_index));
  for (std::int64_t i = 0; i < n; ++i) {
    const bool is_case = i < scenario.n_cases;
    phenotype.labels[static_cast<std::size_t>(i)] = is_case ? 1 : 0;
    const GenotypeDistribution& dist = is_case ? freqs.case_ : freqs.control;
    for (std::int64_t j = 0; j < k; ++j) {
      const int causal_dosage = sample_dosage(dist, rng);
      // each causal allele drags its linked marker allele along
      int marker_dosage = 0;
      for (int a = 0; a < 2; ++a) {
        const bool causal_minor = a < causal_dosage;
        const double p_minor = causal_minor ? marker_given_minor : marker_given_major;
        marker_dosage += rng.uniform01() < p_minor ? 1 : 0;
      }
      matrix.dosages(i, j) = static_cast<double>(causal_dosage);
      matrix.dosages(i, k + j) = static_cast<double>(marker_dosage);
    }
  }
  return {std::move(matrix), std::move(phenotype)};
}

PowerReport run_power(const SimScenario& scenario, const PowerOptions& options) {
  if (options.methods.empty()) fail(errc::invalid_argument, "no methods requested");
  if (scenario.n_replicates < 1) fail(errc::invalid_argument, "need at least one replicate");
  haplotype_table(scenario.maf, scenario.maf, scenario.ld_r);  // fail fast if infeasible

  const std::int64_t R = scenario.n_replicates;
  const std::size_t n_methods = options.methods.size();
  std::vector<std::vector<double>> p_values(n_methods,
                                            std::vector<double>(static_cast<std::size_t>(R)));

  parallel_for(R, options.threads, [&](std::int64_t rep) {
    auto [matrix, phenotype] = generate_replicate(scenario, rep);
    UnitDefinition unit;
    unit.name = scenario.dataset_id;
    const std::int64_t first = options.markers_only ? scenario.n_pairs : 0;
    for (std::int64_t j = first; j < 2 * scenario.n_pairs; ++j) unit.member_indices.push_back(j);

    PermutationPlan plan = options.plan;
    plan.seed = mix64(options.plan.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(rep + 1));
    const auto results = run_unit_tests(unit_matrix(matrix, unit), phenotype, options.methods,
                                        plan, options.test_config);
    for (std::size_t m = 0; m < n_methods; ++m)
      p_values[m][static_cast<std::size_t>(rep)] = results[m].p_value;
  });

  PowerReport report;
  report.scenario = scenario;
  for (std::size_t m = 0; m < n_methods; ++m) {
    PowerRow row;
    row.method = options.methods[m];
    row.alpha = options.alpha;
    row.n_replicates = R;
    std::int64_t hits = 0;
    double sum_p = 0.0;
    for (double p : p_values[m]) {
      hits += p <= options.alpha;
      sum_p += p;
    }
    row.power = static_cast<double>(hits) / static_cast<double>(R);
    row.mean_p = sum_p / static_cast<double>(R);
    report.rows.push_back(row);
  }
  return report;
}

std::vector<SimScenario> builtin_scenarios() {
  struct Params {
    const char* id;
    double or_het, or_hom, maf, ld;
  };
  const Params table[] = {
      {"Dataset1", 1.2, 2.4, 0.05, 0.4},  {"Dataset2", 1.2, 2.4, 0.05, 0.96},
      {"Dataset3", 1.1, 2.2, 0.05, 0.8},  {"Dataset4", 1.2, 2.4, 0.05, 0.8},
      {"Dataset5", 1.3, 2.6, 0.05, 0.8},  {"Dataset6", 1.2, 2.4, 0.01, 0.8},
      {"Dataset7", 1.2, 2.4, 0.03, 0.8},
  };
  const std::int64_t sizes[] = {100, 500, 1000};

  std::vector<SimScenario> scenarios;
  for (const auto& p : table)
    for (std::int64_t size : sizes) {
      SimScenario s;
      s.dataset_id = p.id;
      s.or_het = p.or_het;
      s.or_hom = p.or_hom;
      s.maf = p.maf;
      s.ld_r = p.ld;
      s.n_pairs = 5;
      s.n_cases = size;
      s.n_controls = size;
      s.n_replicates = 1000;
      // distinct default stream per scenario; CLI seeds are mixed on top
      std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a, stable across platforms
      for (const char* c = p.id; *c; ++c) h = (h ^ static_cast<std::uint64_t>(*c)) * 0x100000001B3ULL;
      s.seed = mix64(h + static_cast<std::uint64_t>(size));
      scenarios.push_back(std::move(s));
    }
  return scenarios;
}

}  // namespace jsat
