#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "jsat/io.hpp"
#include "jsat/rng.hpp"
#include "jsat/simulate.hpp"

using namespace jsat;
namespace fs = std::filesystem;

namespace {

std::string jsat_bin() {
  const char* env = std::getenv("JSAT_BIN");
  return env ? env : "";
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("jsat_cli_" + std::to_string(Rng(std::random_device{}()).next_u64()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
  const std::string cmd = jsat_bin() + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// small dataset with a planted signal gene written as a PLINK trio
void write_dataset(const TempDir& dir, const std::string& prefix) {
  SimScenario s;
  s.dataset_id = "cli";
  s.maf = 0.2;
  s.ld_r = 0.9;
  s.or_het = 1.8;
  s.or_hom = 3.24;
  s.n_pairs = 3;
  s.n_cases = 60;
  s.n_controls = 60;
  s.seed = 4242;
  auto [matrix, pheno] = generate_replicate(s, 0);
  io::write_bed_bim_fam(matrix, pheno, dir.file(prefix));
}

}  // namespace

TEST_CASE("cli qc applies the default thresholds") {
  REQUIRE_FALSE(jsat_bin().empty());
  TempDir dir;
  write_dataset(dir, "data");
  CHECK(run("qc --bfile " + dir.file("data") + " --out " + dir.file("qc")) == 0);
  CHECK(fs::exists(dir.file("qc") + "/qc_report.csv"));
  CHECK(fs::exists(dir.file("qc") + "/filtered.bed"));

  const std::string report = slurp(dir.file("qc") + "/qc_report.csv");
  CHECK(report.find("n_input_variants") != std::string::npos);
  CHECK(report.find("6,0,0,0,6") != std::string::npos);  // clean data passes through

  // pass-through thresholds keep everything as well
  CHECK(run("qc --bfile " + dir.file("data") + " --out " + dir.file("qc2") +
            " --max-missing 1.0 --hwe-p 0") == 0);
}

TEST_CASE("cli qc exits with code 2 on a missing input and writes nothing") {
  REQUIRE_FALSE(jsat_bin().empty());
  TempDir dir;
  CHECK(run("qc --bfile " + dir.file("absent") + " --out " + dir.file("out")) == 2);
  CHECK_FALSE(fs::exists(dir.file("out")));
}

TEST_CASE("cli assoc produces one row per unit and method, deterministically") {
  REQUIRE_FALSE(jsat_bin().empty());
  TempDir dir;
  write_dataset(dir, "data");
  // variant positions interleave causal and marker columns: 100000, 200000,
  // 300000 and 100500, 200500, 300500
  std::ofstream genes(dir.file("genes.tsv"));
  genes << "GENE1\t1\t100000\t100500\nGENE2\t1\t200000\t300500\nEMPTY\t1\t900000\t990000\n";
  genes.close();

  const std::string flags = " --bfile " + dir.file("data") + " --genes " + dir.file("genes.tsv") +
                            " --permutations 200";
  CHECK(run("assoc" + flags + " --seed 11 --out " + dir.file("a1")) == 0);
  const std::string csv = slurp(dir.file("a1") + "/results.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "unit,method,statistic,p_value,n_permutations,n_variants");
  std::size_t rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 12);  // 2 non-empty units x 6 methods
  CHECK(csv.find("GENE1,hotelling") != std::string::npos);
  CHECK(csv.find("GENE2,sbbt") != std::string::npos);
  CHECK(csv.find("EMPTY") == std::string::npos);

  // same seed: byte identical; more threads: still identical
  CHECK(run("assoc" + flags + " --seed 11 --out " + dir.file("a2")) == 0);
  CHECK(slurp(dir.file("a2") + "/results.csv") == csv);
  CHECK(run("assoc" + flags + " --seed 11 --threads 4 --out " + dir.file("a3")) == 0);
  CHECK(slurp(dir.file("a3") + "/results.csv") == csv);
  CHECK(run("assoc" + flags + " --seed 12 --out " + dir.file("a4")) == 0);
  CHECK(slurp(dir.file("a4") + "/results.csv") != csv);
}

TEST_CASE("cli assoc window mode builds the unit around the index variant") {
  REQUIRE_FALSE(jsat_bin().empty());
  TempDir dir;
  write_dataset(dir, "data");
  CHECK(run("assoc --bfile " + dir.file("data") +
            " --index causal2 --window-kb 100.5 --permutations 150 --seed 3 --out " +
            dir.file("w")) == 0);
  const std::string csv = slurp(dir.file("w") + "/results.csv");
  // variants within 100500 bp of position 200000 on chromosome 1: all six
  CHECK(csv.find("causal2_window,hotelling") != std::string::npos);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    CHECK(line.substr(line.size() - 1) == "6");  // n_variants column
    ++rows;
  }
  CHECK(rows == 6);
}

TEST_CASE("cli simulate then assoc round trips through the filesystem") {
  REQUIRE_FALSE(jsat_bin().empty());
  TempDir dir;
  CHECK(run("simulate --dataset Dataset4 --n-cases 30 --n-controls 30 --replicates 2 --seed 5 "
            "--out " +
            dir.file("sim")) == 0);
  CHECK(fs::exists(dir.file("sim") + "/rep0001.bed"));
  CHECK(fs::exists(dir.file("sim") + "/rep0002.fam"));
  CHECK(run("assoc --bfile " + dir.file("sim") + "/rep0001 --permutations 150 --seed 2 --out " +
            dir.file("simassoc")) == 0);
  const std::string csv = slurp(dir.file("simassoc") + "/results.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  std::size_t rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 6);
}

TEST_CASE("cli power runs a scenario file, skips infeasible rows, and plots") {
  REQUIRE_FALSE(jsat_bin().empty());
  TempDir dir;
  std::ofstream scen(dir.file("scen.csv"));
  scen << "dataset,or_het,or_hom,maf,ld,n_cases,n_controls,n_replicates\n";
  scen << "Tiny,1.5,2.25,0.2,0.8,25,25,8\n";
  scen << "Broken,1.5,2.25,0.05,-0.9,25,25,8\n";  // infeasible haplotypes
  scen.close();

  const std::string flags = " --scenarios " + dir.file("scen.csv") +
                            " --permutations 120 --seed 7 --plot";
  CHECK(run("power" + flags + " --out " + dir.file("p1")) == 0);
  const std::string csv = slurp(dir.file("p1") + "/power.csv");
  CHECK(csv.find("dataset,method,n_cases,n_controls,alpha,power,n_replicates") !=
        std::string::npos);
  CHECK(csv.find("Tiny,hotelling,25,25,") != std::string::npos);
  CHECK(csv.find("Broken,error,25,25,0.05,NA,0") != std::string::npos);
  CHECK(fs::exists(dir.file("p1") + "/power_other.svg"));

  // identical rerun with a different thread count
  CHECK(run("power" + flags + " --threads 3 --out " + dir.file("p2")) == 0);
  CHECK(slurp(dir.file("p2") + "/power.csv") == csv);

  // report regenerates plots from the csv alone
  CHECK(run("report --power-csv " + dir.file("p1") + "/power.csv --out " + dir.file("rep")) == 0);
  CHECK(fs::exists(dir.file("rep") + "/power_other.svg"));
  const std::string svg = slurp(dir.file("rep") + "/power_other.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("sbbt") != std::string::npos);
}

TEST_CASE("cli power smoke over the builtin table") {
  REQUIRE_FALSE(jsat_bin().empty());
  TempDir dir;
  CHECK(run("power --builtin table1 --replicates 2 --permutations 120 --seed 1 --out " +
            dir.file("t1")) == 0);
  const auto rows = io::read_power_csv(dir.file("t1") + "/power.csv");
  CHECK(rows.size() == 21 * 6);
}

TEST_CASE("cli config file supplies defaults that flags override") {
  REQUIRE_FALSE(jsat_bin().empty());
  TempDir dir;
  write_dataset(dir, "data");
  std::ofstream conf(dir.file("conf.ini"));
  conf << "permutations = 130\nseed = 21\n";
  conf.close();

  CHECK(run("assoc --bfile " + dir.file("data") + " --config " + dir.file("conf.ini") +
            " --out " + dir.file("c1")) == 0);
  const std::string csv = slurp(dir.file("c1") + "/results.csv");
  CHECK(csv.find(",130,") != std::string::npos);  // config value applied

  CHECK(run("assoc --bfile " + dir.file("data") + " --config " + dir.file("conf.ini") +
            " --permutations 140 --out " + dir.file("c2")) == 0);
  CHECK(slurp(dir.file("c2") + "/results.csv").find(",140,") != std::string::npos);

  std::ofstream bad(dir.file("bad.ini"));
  bad << "permutatoins = 130\n";  // unknown key
  bad.close();
  CHECK(run("assoc --bfile " + dir.file("data") + " --config " + dir.file("bad.ini") +
            " --out " + dir.file("c3")) != 0);
}

TEST_CASE("cli rejects unknown methods and missing subcommands") {
  REQUIRE_FALSE(jsat_bin().empty());
  TempDir dir;
  write_dataset(dir, "data");
  CHECK(run("assoc --bfile " + dir.file("data") + " --methods sbbt,warp --out " +
            dir.file("x")) != 0);
  CHECK(run("") != 0);
}
