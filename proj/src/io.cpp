#include "jsat/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace jsat::io {

namespace {

std::ifstream open_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open " + path);
  return in;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) tokens.push_back(tok);
  return tokens;
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no,
                             const std::string& what) {
  fail(errc::parse_error, path + ":" + std::to_string(line_no) + ": " + what);
}

std::int64_t parse_int(const std::string& tok, const std::string& path, std::size_t line_no,
                       const std::string& what) {
  try {
    std::size_t pos = 0;
    const std::int64_t v = std::stoll(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    parse_fail(path, line_no, what + " '" + tok + "' is not an integer");
  }
}

// phenotype column: 1 = control, 2 = case, 0 / -9 = missing
enum class Pheno { control, case_, missing };

Pheno parse_phenotype(const std::string& tok, const std::string& path, std::size_t line_no) {
  if (tok == "1") return Pheno::control;
  if (tok == "2") return Pheno::case_;
  if (tok == "0" || tok == "-9") return Pheno::missing;
  parse_fail(path, line_no, "phenotype '" + tok + "' is not one of 1/2/0/-9");
}

Dataset drop_missing_phenotypes(GenotypeMatrix matrix, const std::vector<Pheno>& phenos) {
  Dataset out;
  std::vector<Eigen::Index> keep;
  for (std::size_t i = 0; i < phenos.size(); ++i) {
    if (phenos[i] == Pheno::missing) {
      ++out.n_dropped_missing_phenotype;
      continue;
    }
    keep.push_back(static_cast<Eigen::Index>(i));
    out.phenotype.labels.push_back(phenos[i] == Pheno::case_ ? 1 : 0);
  }
  if (out.n_dropped_missing_phenotype == 0) {
    out.matrix = std::move(matrix);
    return out;
  }
  out.matrix.variants = std::move(matrix.variants);
  out.matrix.imputed = false;
  out.matrix.dosages.resize(static_cast<Eigen::Index>(keep.size()), matrix.dosages.cols());
  for (std::size_t i = 0; i < keep.size(); ++i)
    out.matrix.dosages.row(static_cast<Eigen::Index>(i)) = matrix.dosages.row(keep[i]);
  return out;
}

}  // namespace

Dataset read_ped_map(const std::string& ped_path, const std::string& map_path) {
  // .map: chromosome, id, genetic distance, position
  std::vector<VariantRecord> variants;
  {
    auto in = open_text(map_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto tokens = split_ws(line);
      if (tokens.empty()) continue;
      if (tokens.size() < 4) parse_fail(map_path, line_no, "expected 4 columns");
      VariantRecord v;
      v.chromosome = tokens[0];
      v.id = tokens[1];
      v.position = parse_int(tokens[3], map_path, line_no, "position");
      if (v.id.empty()) parse_fail(map_path, line_no, "empty variant id");
      if (v.position < 0) parse_fail(map_path, line_no, "negative position");
      variants.push_back(std::move(v));
    }
  }
  const std::size_t m = variants.size();

  // .ped rows: FID IID PID MID SEX PHENO then two allele columns per variant
  std::vector<Pheno> phenos;
  std::vector<std::vector<std::pair<std::string, std::string>>> allele_rows;
  std::vector<std::vector<std::string>> seen_alleles(m);
  {
    auto in = open_text(ped_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto tokens = split_ws(line);
      if (tokens.empty()) continue;
      if (tokens.size() != 6 + 2 * m)
        parse_fail(ped_path, line_no,
                   "expected " + std::to_string(6 + 2 * m) + " fields, found " +
                       std::to_string(tokens.size()));
      phenos.push_back(parse_phenotype(tokens[5], ped_path, line_no));
      std::vector<std::pair<std::string, std::string>> row(m);
      for (std::size_t j = 0; j < m; ++j) {
        const std::string& a = tokens[6 + 2 * j];
        const std::string& b = tokens[6 + 2 * j + 1];
        for (const std::string* al : {&a, &b}) {
          if (*al == "0") continue;
          auto& seen = seen_alleles[j];
          if (std::find(seen.begin(), seen.end(), *al) == seen.end()) {
            if (seen.size() == 2)
              parse_fail(ped_path, line_no,
                         "variant " + variants[j].id + " has a third allele '" + *al + "'");
            seen.push_back(*al);
          }
        }
        row[j] = {a, b};
      }
      allele_rows.push_back(std::move(row));
    }
  }
  const std::size_t n = allele_rows.size();

  // orient each variant so dosage counts the minor allele
  GenotypeMatrix matrix;
  matrix.dosages.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < m; ++j) {
    auto& seen = seen_alleles[j];
    std::sort(seen.begin(), seen.end());
    // a lone observed allele is the major one (frequency 1); ties at 0.5 give
    // the lexicographically smaller symbol the minor slot
    std::string minor = seen.size() > 1 ? seen[0] : "0";
    std::string major = seen.size() > 1 ? seen[1] : (seen.empty() ? "0" : seen[0]);
    if (seen.size() == 2) {
      std::int64_t count_first = 0, count_second = 0, total = 0;
      for (const auto& row : allele_rows) {
        for (const std::string* al : {&row[j].first, &row[j].second}) {
          if (*al == "0") continue;
          ++total;
          if (*al == seen[0]) ++count_first;
          if (*al == seen[1]) ++count_second;
        }
      }
      (void)total;
      if (count_second < count_first) std::swap(minor, major);
    }
    variants[j].allele_a1 = minor;
    variants[j].allele_a2 = major;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& [a, b] = allele_rows[i][j];
      if (a == "0" || b == "0") {
        matrix.dosages(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            dosage::missing;
      } else {
        matrix.dosages(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            static_cast<double>((a == minor) + (b == minor));
      }
    }
  }
  matrix.variants = std::move(variants);
  return drop_missing_phenotypes(std::move(matrix), phenos);
}

void write_ped_map(const GenotypeMatrix& matrix, const PhenotypeVector& phenotype,
                   const std::string& prefix) {
  if (matrix.imputed)
    fail(errc::imputed_not_serializable, "imputed dosages cannot be written as PLINK text");
  if (phenotype.size() != matrix.n_samples())
    fail(errc::size_mismatch, "phenotype and matrix are not aligned");

  std::ofstream map_out(prefix + ".map");
  if (!map_out) fail(errc::io_error, "cannot write " + prefix + ".map");
  for (const auto& v : matrix.variants)
    map_out << v.chromosome << '\t' << v.id << "\t0\t" << v.position << '\n';

  std::ofstream ped_out(prefix + ".ped");
  if (!ped_out) fail(errc::io_error, "cannot write " + prefix + ".ped");
  for (Eigen::Index i = 0; i < matrix.n_samples(); ++i) {
    const std::string id = "S" + std::to_string(i + 1);
    ped_out << id << ' ' << id << " 0 0 0 " << (phenotype.is_case(i) ? 2 : 1);
    for (Eigen::Index j = 0; j < matrix.n_variants(); ++j) {
      const auto& v = matrix.variants[static_cast<std::size_t>(j)];
      const double d = matrix.dosages(i, j);
      if (dosage::is_missing(d))
        ped_out << " 0 0";
      else if (d == 2.0)
        ped_out << ' ' << v.allele_a1 << ' ' << v.allele_a1;
      else if (d == 1.0)
        ped_out << ' ' << v.allele_a1 << ' ' << v.allele_a2;
      else
        ped_out << ' ' << v.allele_a2 << ' ' << v.allele_a2;
    }
    ped_out << '\n';
  }
}

namespace {

constexpr unsigned char kBedMagic1 = 0x6C;
constexpr unsigned char kBedMagic2 = 0x1B;
constexpr unsigned char kVariantMajor = 0x01;

double decode_bed_pair(unsigned code) {
  switch (code) {
    case 0b00: return 2.0;  // hom A1
    case 0b01: return dosage::missing;
    case 0b10: return 1.0;  // het
    default: return 0.0;    // hom A2
  }
}

unsigned encode_bed_pair(double d) {
  if (dosage::is_missing(d)) return 0b01;
  if (d == 2.0) return 0b00;
  if (d == 1.0) return 0b10;
  return 0b11;
}

}  // namespace

Dataset read_bed_bim_fam(const std::string& bed_path, const std::string& bim_path,
                         const std::string& fam_path) {
  // .fam: FID IID PID MID SEX PHENO
  std::vector<Pheno> phenos;
  {
    auto in = open_text(fam_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto tokens = split_ws(line);
      if (tokens.empty()) continue;
      if (tokens.size() < 6) parse_fail(fam_path, line_no, "expected 6 columns");
      phenos.push_back(parse_phenotype(tokens[5], fam_path, line_no));
    }
  }

  // .bim: chromosome, id, genetic distance, position, A1, A2
  std::vector<VariantRecord> variants;
  {
    auto in = open_text(bim_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto tokens = split_ws(line);
      if (tokens.empty()) continue;
      if (tokens.size() < 6) parse_fail(bim_path, line_no, "expected 6 columns");
      VariantRecord v;
      v.chromosome = tokens[0];
      v.id = tokens[1];
      v.position = parse_int(tokens[3], bim_path, line_no, "position");
      v.allele_a1 = tokens[4];
      v.allele_a2 = tokens[5];
      if (v.id.empty()) parse_fail(bim_path, line_no, "empty variant id");
      if (v.allele_a1 == v.allele_a2) parse_fail(bim_path, line_no, "identical alleles");
      variants.push_back(std::move(v));
    }
  }

  const std::int64_t n = static_cast<std::int64_t>(phenos.size());
  const std::int64_t m = static_cast<std::int64_t>(variants.size());
  const std::int64_t bytes_per_variant = (n + 3) / 4;
  const std::int64_t expected = 3 + m * bytes_per_variant;

  std::ifstream in(bed_path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot open " + bed_path);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 3 || static_cast<unsigned char>(bytes[0]) != kBedMagic1 ||
      static_cast<unsigned char>(bytes[1]) != kBedMagic2)
    fail(errc::not_a_bed, bed_path + " does not start with the bed magic bytes");
  if (static_cast<unsigned char>(bytes[2]) != kVariantMajor)
    fail(errc::unsupported_mode, bed_path + " is not variant-major (mode 0x01)");
  if (static_cast<std::int64_t>(bytes.size()) != expected)
    fail(errc::size_mismatch, bed_path + " holds " + std::to_string(bytes.size()) +
                                  " bytes, expected ceil(" + std::to_string(n) + "/4) x " +
                                  std::to_string(m) + " + 3 = " + std::to_string(expected));

  GenotypeMatrix matrix;
  matrix.variants = std::move(variants);
  matrix.dosages.resize(n, m);
  for (std::int64_t j = 0; j < m; ++j) {
    const char* payload = bytes.data() + 3 + j * bytes_per_variant;
    for (std::int64_t i = 0; i < n; ++i) {
      const unsigned byte = static_cast<unsigned char>(payload[i / 4]);
      const unsigned code = (byte >> (2 * (i % 4))) & 0b11;
      matrix.dosages(i, j) = decode_bed_pair(code);
    }
  }
  return drop_missing_phenotypes(std::move(matrix), phenos);
}

void write_bed_bim_fam(const GenotypeMatrix& matrix, const PhenotypeVector& phenotype,
                       const std::string& prefix) {
  if (phenotype.size() != matrix.n_samples())
    fail(errc::size_mismatch, "phenotype and matrix are not aligned");
  if (matrix.imputed)
    fail(errc::imputed_not_serializable, "imputed dosages cannot be packed into 2-bit calls");
  for (Eigen::Index j = 0; j < matrix.n_variants(); ++j)
    for (Eigen::Index i = 0; i < matrix.n_samples(); ++i)
      if (!dosage::is_valid_raw(matrix.dosages(i, j)))
        fail(errc::imputed_not_serializable,
             "real-valued dosage at variant " + matrix.variants[static_cast<std::size_t>(j)].id);

  std::ofstream fam(prefix + ".fam");
  if (!fam) fail(errc::io_error, "cannot write " + prefix + ".fam");
  for (Eigen::Index i = 0; i < matrix.n_samples(); ++i) {
    const std::string id = "S" + std::to_string(i + 1);
    fam << id << ' ' << id << " 0 0 0 " << (phenotype.is_case(i) ? 2 : 1) << '\n';
  }

  std::ofstream bim(prefix + ".bim");
  if (!bim) fail(errc::io_error, "cannot write " + prefix + ".bim");
  for (const auto& v : matrix.variants)
    bim << v.chromosome << '\t' << v.id << "\t0\t" << v.position << '\t' << v.allele_a1 << '\t'
        << v.allele_a2 << '\n';

  std::ofstream bed(prefix + ".bed", std::ios::binary);
  if (!bed) fail(errc::io_error, "cannot write " + prefix + ".bed");
  const char header[3] = {static_cast<char>(kBedMagic1), static_cast<char>(kBedMagic2),
                          static_cast<char>(kVariantMajor)};
  bed.write(header, 3);
  const Eigen::Index n = matrix.n_samples();
  const Eigen::Index bytes_per_variant = (n + 3) / 4;
  std::vector<char> payload(static_cast<std::size_t>(bytes_per_variant));
  for (Eigen::Index j = 0; j < matrix.n_variants(); ++j) {
    std::fill(payload.begin(), payload.end(), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const unsigned code = encode_bed_pair(matrix.dosages(i, j));
      payload[static_cast<std::size_t>(i / 4)] |=
          static_cast<char>(code << (2 * (i % 4)));
    }
    bed.write(payload.data(), bytes_per_variant);
  }
}

Dataset read_plink_prefix(const std::string& prefix) {
  namespace fs = std::filesystem;
  if (fs::exists(prefix + ".bed"))
    return read_bed_bim_fam(prefix + ".bed", prefix + ".bim", prefix + ".fam");
  if (fs::exists(prefix + ".ped")) return read_ped_map(prefix + ".ped", prefix + ".map");
  fail(errc::io_error, "neither " + prefix + ".bed nor " + prefix + ".ped exists");
}

GeneAnnotation load_gene_annotation(const std::string& tsv_path) {
  auto in = open_text(tsv_path);
  GeneAnnotation rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() < 4) parse_fail(tsv_path, line_no, "expected 4 columns");
    if (line_no == 1) {
      // optional header: skip the first line when positions do not parse
      try {
        (void)std::stoll(tokens[2]);
        (void)std::stoll(tokens[3]);
      } catch (const std::exception&) {
        continue;
      }
    }
    GeneAnnotationRow row;
    row.gene = tokens[0];
    row.chromosome = tokens[1];
    row.start_bp = parse_int(tokens[2], tsv_path, line_no, "start");
    row.end_bp = parse_int(tokens[3], tsv_path, line_no, "end");
    if (row.start_bp > row.end_bp) parse_fail(tsv_path, line_no, "start exceeds end");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_double(double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

void write_results_csv(const std::string& path, const std::vector<AssocRow>& rows) {
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot write " + path);
  out << "unit,method,statistic,p_value,n_permutations,n_variants\n";
  for (const auto& row : rows) {
    out << row.unit << ',' << method_name(row.result.method) << ','
        << format_double(row.result.statistic) << ',' << format_double(row.result.p_value) << ',';
    if (row.result.n_permutations < 0)
      out << "NA";
    else
      out << row.result.n_permutations;
    out << ',' << row.result.n_variants << '\n';
  }
}

void write_qc_report_csv(const std::string& path, const QcReport& report) {
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot write " + path);
  out << "n_input_variants,n_removed_duplicate,n_removed_missing,n_removed_hwe,n_retained\n";
  out << report.n_input_variants << ',' << report.n_removed_duplicate << ','
      << report.n_removed_missing << ',' << report.n_removed_hwe << ',' << report.n_retained
      << '\n';
}

void write_power_csv(const std::string& path, const std::vector<PowerReport>& reports,
                     const std::vector<std::string>& error_rows) {
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot write " + path);
  out << "dataset,method,n_cases,n_controls,alpha,power,n_replicates\n";
  for (const auto& report : reports)
    for (const auto& row : report.rows)
      out << report.scenario.dataset_id << ',' << method_name(row.method) << ','
          << report.scenario.n_cases << ',' << report.scenario.n_controls << ','
          << format_double(row.alpha) << ',' << format_double(row.power) << ','
          << row.n_replicates << '\n';
  for (const auto& row : error_rows) out << row << '\n';
}

std::vector<PowerCsvRow> read_power_csv(const std::string& path) {
  auto in = open_text(path);
  std::vector<PowerCsvRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty()) continue;
    std::vector<std::string> tokens;
    std::istringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) tokens.push_back(tok);
    if (tokens.size() < 7) parse_fail(path, line_no, "expected 7 columns");
    if (tokens[1] == "error") continue;
    PowerCsvRow row;
    row.dataset = tokens[0];
    row.method = tokens[1];
    row.n_cases = parse_int(tokens[2], path, line_no, "n_cases");
    row.n_controls = parse_int(tokens[3], path, line_no, "n_controls");
    row.alpha = std::stod(tokens[4]);
    row.power = std::stod(tokens[5]);
    row.n_replicates = parse_int(tokens[6], path, line_no, "n_replicates");
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace jsat::io
