#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>

#include "jsat/assoc.hpp"
#include "jsat/genotype.hpp"
#include "jsat/io.hpp"
#include "jsat/qc.hpp"
#include "jsat/rng.hpp"
#include "jsat/simulate.hpp"
#include "jsat/svg.hpp"

namespace fs = std::filesystem;
using namespace jsat;

namespace {

constexpr int kExitError = 1;
constexpr int kExitBadInput = 2;

std::vector<Method> parse_methods(const std::string& spec) {
  if (spec == "all") return all_methods();
  std::vector<Method> methods;
  std::string token;
  std::istringstream ss(spec);
  while (std::getline(ss, token, ',')) {
    const auto m = method_from_name(token);
    if (!m) throw CLI::ValidationError("--methods", "unknown method '" + token + "'");
    methods.push_back(*m);
  }
  if (methods.empty()) throw CLI::ValidationError("--methods", "no methods given");
  return methods;
}

struct CommonTestFlags {
  std::uint64_t seed = 0;
  std::int64_t permutations = 1000;
  int threads = 1;
  std::string methods = "all";
  bool exhaustive = false;
  bool canonical_order = false;
  bool flat_weights = false;
  bool skato_literal_eq3 = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "base seed for all random streams")->capture_default_str();
    cmd->add_option("--permutations", permutations, "permutations per test")
        ->capture_default_str();
    cmd->add_option("--threads", threads, "worker threads (results identical for any count)")
        ->capture_default_str();
    cmd->add_option("--methods", methods, "comma-separated subset of " +
                                              [] {
                                                std::string s;
                                                for (Method m : all_methods()) {
                                                  if (!s.empty()) s += ",";
                                                  s += method_name(m);
                                                }
                                                return s;
                                              }() +
                                              " or 'all'")
        ->capture_default_str();
    cmd->add_flag("--exhaustive", exhaustive,
                  "enumerate all distinct label assignments instead of sampling");
    cmd->add_flag("--canonical-order", canonical_order,
                  "derive permutations from a canonical sample order so results do not depend "
                  "on input row order");
    cmd->add_flag("--flat-weights", flat_weights, "unit weights instead of Beta(1,25)(MAF)");
    cmd->add_flag("--skato-literal-eq3", skato_literal_eq3,
                  "skato combination without rho on the burden term");
  }

  PermutationPlan plan() const {
    PermutationPlan p;
    p.seed = seed;
    p.n_permutations = permutations;
    p.exhaustive = exhaustive;
    p.canonicalize = canonical_order;
    return p;
  }

  TestConfig test_config() const {
    TestConfig c;
    c.weights = flat_weights ? WeightScheme::flat : WeightScheme::beta_1_25;
    c.skato_literal_combination = skato_literal_eq3;
    return c;
  }
};

void add_config_option(CLI::App* cmd, std::string& path) {
  cmd->add_option("--config", path,
                  "key = value file of long option names; command-line flags take precedence");
}

// Expand "--config FILE" into option tokens inserted after the subcommand,
// skipping keys already present on the command line. Unknown keys are
// rejected.
std::vector<std::string> merge_config_args(const CLI::App& app, int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  if (args.size() < 2) return args;
  const CLI::App* sub = nullptr;
  for (const auto* s : app.get_subcommands(nullptr))
    if (s->get_name() == args[1]) sub = s;
  if (sub == nullptr) return args;

  std::string config_path;
  for (std::size_t i = 2; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;

  std::ifstream in(config_path);
  if (!in) fail(errc::io_error, "cannot open config file " + config_path);

  const auto given = [&](const std::string& flag) {
    for (std::size_t i = 2; i < args.size(); ++i)
      if (args[i] == flag || args[i].rfind(flag + "=", 0) == 0) return true;
    return false;
  };

  std::vector<std::string> inserted;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(errc::parse_error,
           config_path + ":" + std::to_string(line_no) + ": expected key = value");
    const auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string flag = "--" + key;
    if (key.empty() || key == "config")
      fail(errc::invalid_argument,
           config_path + ":" + std::to_string(line_no) + ": invalid key '" + key + "'");
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (opt == nullptr)
      fail(errc::invalid_argument, config_path + ":" + std::to_string(line_no) +
                                       ": unknown key '" + key + "' for subcommand " +
                                       sub->get_name());
    if (given(flag)) continue;  // command line wins
    if (opt->get_expected_min() == 0) {  // flag-style option
      if (value == "true" || value == "1" || value == "yes") inserted.push_back(flag);
      else if (value != "false" && value != "0" && value != "no")
        fail(errc::invalid_argument, config_path + ":" + std::to_string(line_no) + ": flag '" +
                                         key + "' must be true or false");
    } else {
      inserted.push_back(flag);
      inserted.push_back(value);
    }
  }

  std::vector<std::string> merged;
  merged.push_back(args[0]);
  merged.push_back(args[1]);
  merged.insert(merged.end(), inserted.begin(), inserted.end());
  merged.insert(merged.end(), args.begin() + 2, args.end());
  return merged;
}

int run_qc_cmd(const std::string& input_prefix, const std::string& out_dir, QcConfig config) {
  const io::Dataset data = io::read_plink_prefix(input_prefix);
  if (data.n_dropped_missing_phenotype > 0)
    std::cerr << "warning: dropped " << data.n_dropped_missing_phenotype
              << " samples with missing phenotype\n";
  auto [filtered, report] = run_qc(data.matrix, data.phenotype, config);

  fs::create_directories(out_dir);
  io::write_bed_bim_fam(filtered, data.phenotype, (fs::path(out_dir) / "filtered").string());
  io::write_qc_report_csv((fs::path(out_dir) / "qc_report.csv").string(), report);
  std::cout << "qc: " << report.n_input_variants << " variants in, " << report.n_retained
            << " retained (" << report.n_removed_duplicate << " duplicate, "
            << report.n_removed_missing << " missing-rate, " << report.n_removed_hwe
            << " hwe)\n";
  return 0;
}

int run_assoc_cmd(const std::string& input_prefix, const std::string& out_dir,
                  const std::string& genes_tsv, const std::string& index_variant,
                  double window_kb, const CommonTestFlags& flags) {
  const io::Dataset data = io::read_plink_prefix(input_prefix);
  if (data.n_dropped_missing_phenotype > 0)
    std::cerr << "warning: dropped " << data.n_dropped_missing_phenotype
              << " samples with missing phenotype\n";
  const std::vector<Method> methods = parse_methods(flags.methods);

  std::vector<UnitDefinition> units;
  if (!genes_tsv.empty()) {
    units = build_gene_units(data.matrix, io::load_gene_annotation(genes_tsv));
  } else if (!index_variant.empty()) {
    units.push_back(window_unit(data.matrix, index_variant,
                                static_cast<std::int64_t>(window_kb * 1000.0)));
  } else {
    UnitDefinition unit;
    unit.name = "all";
    for (Eigen::Index j = 0; j < data.matrix.n_variants(); ++j) unit.member_indices.push_back(j);
    units.push_back(std::move(unit));
  }
  units.erase(std::remove_if(units.begin(), units.end(),
                             [](const UnitDefinition& u) {
                               if (u.member_indices.empty())
                                 std::cerr << "warning: skipping empty unit " << u.name << "\n";
                               return u.member_indices.empty();
                             }),
              units.end());

  const GenotypeMatrix imputed = impute_missing(data.matrix);
  const auto rows = run_assoc(imputed, data.phenotype, units, methods, flags.plan(),
                              flags.test_config(), flags.threads);

  fs::create_directories(out_dir);
  io::write_results_csv((fs::path(out_dir) / "results.csv").string(), rows);
  std::cout << "assoc: " << rows.size() << " result rows over " << units.size() << " units\n";
  return 0;
}

SimScenario resolve_scenario(const std::string& dataset_id, std::int64_t n_cases,
                             std::int64_t n_controls, std::int64_t replicates,
                             std::uint64_t seed) {
  for (const auto& s : builtin_scenarios()) {
    if (s.dataset_id == dataset_id && s.n_cases == n_cases && s.n_controls == n_controls) {
      SimScenario out = s;
      if (replicates > 0) out.n_replicates = replicates;
      out.seed = mix64(out.seed + seed);
      return out;
    }
  }
  // any builtin id with custom sizes
  for (const auto& s : builtin_scenarios()) {
    if (s.dataset_id == dataset_id) {
      SimScenario out = s;
      out.n_cases = n_cases;
      out.n_controls = n_controls;
      if (replicates > 0) out.n_replicates = replicates;
      out.seed = mix64(out.seed + seed);
      return out;
    }
  }
  throw CLI::ValidationError("--dataset", "unknown builtin dataset '" + dataset_id + "'");
}

int run_simulate_cmd(const std::string& dataset_id, std::int64_t n_cases, std::int64_t n_controls,
                     std::int64_t replicates, std::uint64_t seed, const std::string& out_dir) {
  const SimScenario scenario = resolve_scenario(dataset_id, n_cases, n_controls, replicates, seed);
  fs::create_directories(out_dir);
  for (std::int64_t rep = 0; rep < scenario.n_replicates; ++rep) {
    auto [matrix, phenotype] = generate_replicate(scenario, rep);
    char name[32];
    std::snprintf(name, sizeof(name), "rep%04lld", static_cast<long long>(rep + 1));
    io::write_bed_bim_fam(matrix, phenotype, (fs::path(out_dir) / name).string());
  }
  std::cout << "simulate: wrote " << scenario.n_replicates << " replicates of "
            << scenario.dataset_id << " (" << scenario.n_cases << "v" << scenario.n_controls
            << ") to " << out_dir << "\n";
  return 0;
}

std::vector<SimScenario> load_scenario_file(const std::string& path) {
  // CSV: dataset,or_het,or_hom,maf,ld,n_cases,n_controls,n_replicates
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open " + path);
  std::vector<SimScenario> scenarios;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> tokens;
    std::istringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) tokens.push_back(tok);
    if (line_no == 1 && !tokens.empty() && tokens[0] == "dataset") continue;
    if (tokens.size() < 8)
      fail(errc::parse_error, path + ":" + std::to_string(line_no) + ": expected 8 columns");
    SimScenario s;
    s.dataset_id = tokens[0];
    s.or_het = std::stod(tokens[1]);
    s.or_hom = std::stod(tokens[2]);
    s.maf = std::stod(tokens[3]);
    s.ld_r = std::stod(tokens[4]);
    s.n_cases = std::stoll(tokens[5]);
    s.n_controls = std::stoll(tokens[6]);
    s.n_replicates = std::stoll(tokens[7]);
    scenarios.push_back(std::move(s));
  }
  return scenarios;
}

void write_power_plots(const std::string& out_dir, const std::vector<io::PowerCsvRow>& rows) {
  const std::vector<std::pair<std::string, std::vector<std::string>>> groups = {
      {"ld", {"Dataset1", "Dataset4", "Dataset2"}},
      {"or", {"Dataset3", "Dataset4", "Dataset5"}},
      {"maf", {"Dataset6", "Dataset7", "Dataset4"}},
  };
  std::set<std::string> grouped;
  for (const auto& [name, datasets] : groups)
    for (const auto& d : datasets) grouped.insert(d);

  std::set<std::string> present;
  for (const auto& row : rows) present.insert(row.dataset);

  const auto panel_for = [&](const std::string& dataset) {
    svg::Panel panel;
    panel.subtitle = dataset;
    std::set<std::int64_t> sizes;
    for (const auto& row : rows)
      if (row.dataset == dataset) sizes.insert(row.n_cases + row.n_controls);
    std::map<std::int64_t, std::size_t> size_index;
    for (auto s : sizes) {
      size_index[s] = panel.x_labels.size();
      panel.x_labels.push_back(std::to_string(s));
    }
    for (Method m : all_methods()) {
      svg::Series series;
      series.label = method_name(m);
      series.values.assign(panel.x_labels.size(), std::nan(""));
      bool any = false;
      for (const auto& row : rows)
        if (row.dataset == dataset && row.method == method_name(m)) {
          series.values[size_index[row.n_cases + row.n_controls]] = row.power;
          any = true;
        }
      if (any) panel.series.push_back(std::move(series));
    }
    return panel;
  };

  for (const auto& [name, datasets] : groups) {
    std::vector<svg::Panel> panels;
    for (const auto& d : datasets)
      if (present.count(d)) panels.push_back(panel_for(d));
    if (!panels.empty())
      svg::write_line_chart((fs::path(out_dir) / ("power_" + name + ".svg")).string(),
                            "power vs total sample size (" + name + ")", panels);
  }
  std::vector<svg::Panel> other;
  for (const auto& d : present)
    if (!grouped.count(d)) other.push_back(panel_for(d));
  if (!other.empty())
    svg::write_line_chart((fs::path(out_dir) / "power_other.svg").string(),
                          "power vs total sample size", other);
}

int run_power_cmd(const std::string& builtin, const std::string& scenario_file,
                  std::int64_t replicates, double alpha, bool markers_only, bool plot,
                  const CommonTestFlags& flags, const std::string& out_dir) {
  std::vector<SimScenario> scenarios;
  if (!scenario_file.empty()) {
    scenarios = load_scenario_file(scenario_file);
  } else if (builtin == "table1") {
    scenarios = builtin_scenarios();
  } else {
    throw CLI::ValidationError("--builtin", "unknown scenario set '" + builtin + "'");
  }

  PowerOptions options;
  options.methods = parse_methods(flags.methods);
  options.alpha = alpha;
  options.plan = flags.plan();
  options.test_config = flags.test_config();
  options.markers_only = markers_only;
  options.threads = flags.threads;

  std::vector<PowerReport> reports;
  std::vector<std::string> error_rows;
  for (auto scenario : scenarios) {
    if (replicates > 0) scenario.n_replicates = replicates;
    scenario.seed = mix64(scenario.seed + flags.seed);
    PowerOptions opt = options;
    opt.plan.seed = mix64(scenario.seed ^ 0x5DEECE66DULL);
    try {
      reports.push_back(run_power(scenario, opt));
      const auto& r = reports.back();
      std::cout << scenario.dataset_id << " " << scenario.n_cases << "v" << scenario.n_controls
                << ":";
      for (const auto& row : r.rows)
        std::cout << " " << method_name(row.method) << "=" << row.power;
      std::cout << "\n";
    } catch (const Error& e) {
      if (e.code() != errc::ld_infeasible) throw;
      std::cerr << "warning: " << scenario.dataset_id << ": " << e.what() << "\n";
      error_rows.push_back(scenario.dataset_id + ",error," + std::to_string(scenario.n_cases) +
                           "," + std::to_string(scenario.n_controls) + "," +
                           io::format_double(alpha) + ",NA,0");
    }
  }

  fs::create_directories(out_dir);
  const std::string csv_path = (fs::path(out_dir) / "power.csv").string();
  io::write_power_csv(csv_path, reports, error_rows);
  if (plot) write_power_plots(out_dir, io::read_power_csv(csv_path));
  std::cout << "power: wrote " << csv_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"joint SNV-set association tests, QC, simulation and power benchmarks"};
  app.require_subcommand(1);

  // qc
  auto* qc_cmd = app.add_subcommand("qc", "filter variants and write the filtered dataset");
  std::string qc_input, qc_out;
  QcConfig qc_config;
  bool hwe_all_samples = false;
  qc_cmd->add_option("--bfile", qc_input, "input prefix (.bed/.bim/.fam or .ped/.map)")
      ->required();
  qc_cmd->add_option("--out", qc_out, "output directory")->required();
  qc_cmd->add_option("--max-missing", qc_config.max_missing_rate, "missing-rate threshold")
      ->capture_default_str();
  qc_cmd->add_option("--hwe-p", qc_config.hwe_p_threshold, "HWE exact-test P threshold")
      ->capture_default_str();
  qc_cmd->add_flag("--hwe-all-samples", hwe_all_samples,
                   "compute HWE on all samples instead of controls only");
  std::string qc_config_file;
  add_config_option(qc_cmd, qc_config_file);

  // assoc
  auto* assoc_cmd = app.add_subcommand("assoc", "run the joint tests per unit");
  std::string assoc_input, assoc_out, assoc_genes, assoc_index;
  double assoc_window_kb = 20.0;
  CommonTestFlags assoc_flags;
  assoc_cmd->add_option("--bfile", assoc_input, "input prefix (.bed/.bim/.fam or .ped/.map)")
      ->required();
  assoc_cmd->add_option("--out", assoc_out, "output directory")->required();
  assoc_cmd->add_option("--genes", assoc_genes, "gene annotation TSV defining the units");
  assoc_cmd->add_option("--index", assoc_index, "index variant id for window mode");
  assoc_cmd->add_option("--window-kb", assoc_window_kb, "half-width around the index variant")
      ->capture_default_str();
  assoc_flags.attach(assoc_cmd);
  std::string assoc_config;
  add_config_option(assoc_cmd, assoc_config);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "write simulated replicates as PLINK trios");
  std::string sim_dataset = "Dataset4", sim_out;
  std::int64_t sim_cases = 1000, sim_controls = 1000, sim_replicates = 1;
  std::uint64_t sim_seed = 0;
  sim_cmd->add_option("--dataset", sim_dataset, "builtin dataset id")->capture_default_str();
  sim_cmd->add_option("--n-cases", sim_cases, "cases per replicate")->capture_default_str();
  sim_cmd->add_option("--n-controls", sim_controls, "controls per replicate")
      ->capture_default_str();
  sim_cmd->add_option("--replicates", sim_replicates, "replicates to write")
      ->capture_default_str();
  sim_cmd->add_option("--seed", sim_seed, "generator seed")->capture_default_str();
  sim_cmd->add_option("--out", sim_out, "output directory")->required();
  std::string sim_config;
  add_config_option(sim_cmd, sim_config);

  // power
  auto* power_cmd = app.add_subcommand("power", "empirical power sweep over scenarios");
  std::string power_builtin = "table1", power_scenarios, power_out;
  std::int64_t power_replicates = 0;
  double power_alpha = 0.05;
  bool power_markers_only = false, power_plot = false;
  CommonTestFlags power_flags;
  power_cmd->add_option("--builtin", power_builtin, "builtin scenario set")
      ->capture_default_str();
  power_cmd->add_option("--scenarios", power_scenarios,
                        "CSV of scenarios: dataset,or_het,or_hom,maf,ld,n_cases,n_controls,"
                        "n_replicates");
  power_cmd->add_option("--replicates", power_replicates,
                        "override the per-scenario replicate count");
  power_cmd->add_option("--alpha", power_alpha, "significance threshold")->capture_default_str();
  power_cmd->add_flag("--markers-only", power_markers_only,
                      "test only the marker columns, not the causal ones");
  power_cmd->add_flag("--plot", power_plot, "also write SVG power curves");
  power_cmd->add_option("--out", power_out, "output directory")->required();
  power_flags.attach(power_cmd);
  std::string power_config;
  add_config_option(power_cmd, power_config);

  // report
  auto* report_cmd = app.add_subcommand("report", "render SVG power curves from a power CSV");
  std::string report_csv, report_out;
  report_cmd->add_option("--power-csv", report_csv, "power.csv from a previous run")->required();
  report_cmd->add_option("--out", report_out, "output directory")->required();
  std::string report_config;
  add_config_option(report_cmd, report_config);

  try {
    const auto args = merge_config_args(app, argc, argv);
    std::vector<const char*> ptrs;
    ptrs.reserve(args.size());
    for (const auto& a : args) ptrs.push_back(a.c_str());
    app.parse(static_cast<int>(ptrs.size()), ptrs.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }

  try {
    if (qc_cmd->parsed()) {
      qc_config.hwe_in_controls_only = !hwe_all_samples;
      return run_qc_cmd(qc_input, qc_out, qc_config);
    }
    if (assoc_cmd->parsed())
      return run_assoc_cmd(assoc_input, assoc_out, assoc_genes, assoc_index, assoc_window_kb,
                           assoc_flags);
    if (sim_cmd->parsed())
      return run_simulate_cmd(sim_dataset, sim_cases, sim_controls, sim_replicates, sim_seed,
                              sim_out);
    if (power_cmd->parsed())
      return run_power_cmd(power_builtin, power_scenarios, power_replicates, power_alpha,
                           power_markers_only, power_plot, power_flags, power_out);
    if (report_cmd->parsed()) {
      fs::create_directories(report_out);
      write_power_plots(report_out, io::read_power_csv(report_csv));
      std::cout << "report: wrote plots to " << report_out << "\n";
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return (e.code() == errc::io_error || e.code() == errc::parse_error ||
            e.code() == errc::invalid_argument)
               ? kExitBadInput
               : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
