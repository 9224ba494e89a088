// Independent reference implementations used only to check the library. They
// recompute everything from first principles with plain loops so that a bug in
// the production path cannot hide in its own oracle.
#ifndef JSAT_TESTS_ORACLES_HPP
#define JSAT_TESTS_ORACLES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace oracles {

// ---------------------------------------------------------------- HWE -----

// Levene-Haldane mass via log-factorials:
// P(het | n, rare) = 2^het n! / (hom_r! het! hom_c!) * rare! common! / (2n)!
inline double hwe_mass(std::int64_t n, std::int64_t rare, std::int64_t het) {
  const std::int64_t hom_rare = (rare - het) / 2;
  const std::int64_t hom_common = n - het - hom_rare;
  const auto lf = [](std::int64_t k) { return std::lgamma(static_cast<double>(k) + 1.0); };
  const double log_p = het * std::log(2.0) + lf(n) - lf(hom_rare) - lf(het) - lf(hom_common) +
                       lf(rare) + lf(2 * n - rare) - lf(2 * n);
  return std::exp(log_p);
}

inline std::vector<std::int64_t> hwe_het_support(std::int64_t rare) {
  std::vector<std::int64_t> hets;
  for (std::int64_t h = rare % 2; h <= rare; h += 2) hets.push_back(h);
  return hets;
}

// two-sided exact P: total mass of heterozygote counts no more probable than
// the observed one
inline double hwe_pvalue(std::int64_t hom_minor, std::int64_t het, std::int64_t hom_major) {
  const std::int64_t n = hom_minor + het + hom_major;
  const std::int64_t rare = 2 * std::min(hom_minor, hom_major) + het;
  if (rare == 0) return 1.0;
  const double p_obs = hwe_mass(n, rare, het);
  double total = 0.0;
  for (std::int64_t h : hwe_het_support(rare)) {
    const double p = hwe_mass(n, rare, h);
    if (p <= p_obs * (1.0 + 1e-12)) total += p;
  }
  return std::min(total, 1.0);
}

// ------------------------------------------------------- trend test -------

// Cochran-Armitage trend chi-square straight from the 2x3 table with scores
// (0,1,2); cases are row one.
inline double trend_chisq_from_table(const std::array<std::int64_t, 3>& case_counts,
                                     const std::array<std::int64_t, 3>& control_counts) {
  const double t[3] = {0.0, 1.0, 2.0};
  double n1 = 0.0, n2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    n1 += static_cast<double>(case_counts[i]);
    n2 += static_cast<double>(control_counts[i]);
  }
  const double n = n1 + n2;
  double num = 0.0, sum_tm = 0.0, sum_ttm = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double m_i = static_cast<double>(case_counts[i] + control_counts[i]);
    num += t[i] * (static_cast<double>(case_counts[i]) * n2 -
                   static_cast<double>(control_counts[i]) * n1);
    sum_tm += t[i] * m_i;
    sum_ttm += t[i] * t[i] * m_i;
  }
  const double denom = n1 * n2 * (n * sum_ttm - sum_tm * sum_tm);
  if (denom == 0.0) return 0.0;
  return num * num * n / denom;
}

// --------------------------------------------------- two-sample t ---------

struct TTest {
  double t = 0.0;
  double p = 1.0;
};

inline TTest pooled_two_sample_t(const std::vector<double>& cases,
                                 const std::vector<double>& controls) {
  const double m = static_cast<double>(cases.size());
  const double n = static_cast<double>(controls.size());
  const double mean_x = std::accumulate(cases.begin(), cases.end(), 0.0) / m;
  const double mean_y = std::accumulate(controls.begin(), controls.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : cases) ss += (v - mean_x) * (v - mean_x);
  for (double v : controls) ss += (v - mean_y) * (v - mean_y);
  const double s2 = ss / (m + n - 2.0);
  TTest r;
  r.t = (mean_x - mean_y) / std::sqrt(s2 * (1.0 / m + 1.0 / n));
  boost::math::students_t dist(m + n - 2.0);
  r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t)));
  return r;
}

// ------------------------------------------- Hotelling brute force --------

// 3x3 inverse by the adjugate; dies loudly on a singular input
inline std::array<std::array<double, 3>, 3> invert3(const std::array<std::array<double, 3>, 3>& a) {
  const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                     a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                     a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  std::array<std::array<double, 3>, 3> inv{};
  inv[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / det;
  inv[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / det;
  inv[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / det;
  inv[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / det;
  inv[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / det;
  inv[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / det;
  inv[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / det;
  inv[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / det;
  inv[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det;
  return inv;
}

// t^2 = mn/(m+n) (x-y)' S^-1 (x-y) with the pooled covariance, p = 3
inline double hotelling_t2_bruteforce_p3(const std::vector<std::array<double, 3>>& cases,
                                         const std::vector<std::array<double, 3>>& controls) {
  const double m = static_cast<double>(cases.size());
  const double n = static_cast<double>(controls.size());
  std::array<double, 3> mean_x{}, mean_y{};
  for (const auto& row : cases)
    for (int j = 0; j < 3; ++j) mean_x[j] += row[j] / m;
  for (const auto& row : controls)
    for (int j = 0; j < 3; ++j) mean_y[j] += row[j] / n;

  std::array<std::array<double, 3>, 3> s{};
  for (const auto& row : cases)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) s[j][k] += (row[j] - mean_x[j]) * (row[k] - mean_x[k]);
  for (const auto& row : controls)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) s[j][k] += (row[j] - mean_y[j]) * (row[k] - mean_y[k]);
  for (auto& r : s)
    for (auto& v : r) v /= m + n - 2.0;

  const auto inv = invert3(s);
  std::array<double, 3> d{};
  for (int j = 0; j < 3; ++j) d[j] = mean_x[j] - mean_y[j];
  double quad = 0.0;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) quad += d[j] * inv[j][k] * d[k];
  return m * n / (m + n) * quad;
}

// --------------------------------------------- chi-square, even df --------

// closed-form survival function for df = 2k
inline double chisq_sf_even_df(double x, std::int64_t k) {
  double term = 1.0, sum = 1.0;
  for (std::int64_t i = 1; i < k; ++i) {
    term *= (x / 2.0) / static_cast<double>(i);
    sum += term;
  }
  return std::exp(-x / 2.0) * sum;
}

// ------------------------------------- exhaustive permutation tools -------

// every way to choose n_case of n indices, as 0/1 label vectors
inline std::vector<std::vector<std::uint8_t>> all_assignments(std::int64_t n,
                                                              std::int64_t n_case) {
  std::vector<std::vector<std::uint8_t>> out;
  std::vector<std::int64_t> idx(static_cast<std::size_t>(n_case));
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    std::vector<std::uint8_t> labels(static_cast<std::size_t>(n), 0);
    for (auto i : idx) labels[static_cast<std::size_t>(i)] = 1;
    out.push_back(std::move(labels));
    std::int64_t pos = n_case - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - n_case + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (std::int64_t j = pos + 1; j < n_case; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

// score u_j = sum_i (y_i - m/N) g_ij in the exact rational form
inline std::vector<double> score_u(const std::vector<std::vector<double>>& g,
                                   const std::vector<std::uint8_t>& labels) {
  const std::int64_t n = static_cast<std::int64_t>(g.size());
  const std::int64_t m = static_cast<std::int64_t>(g[0].size());
  double n_case = 0.0;
  for (auto l : labels) n_case += l;
  std::vector<double> u(static_cast<std::size_t>(m), 0.0);
  for (std::int64_t j = 0; j < m; ++j) {
    double s = 0.0, sc = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      s += g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (labels[static_cast<std::size_t>(i)])
        sc += g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    u[static_cast<std::size_t>(j)] =
        (static_cast<double>(n) * sc - n_case * s) / static_cast<double>(n);
  }
  return u;
}

inline std::vector<double> trend_z(const std::vector<std::vector<double>>& g,
                                   const std::vector<std::uint8_t>& labels) {
  const std::int64_t n = static_cast<std::int64_t>(g.size());
  const std::int64_t m = static_cast<std::int64_t>(g[0].size());
  double n_case = 0.0;
  for (auto l : labels) n_case += l;
  const double n_ctrl = static_cast<double>(n) - n_case;
  const auto u = score_u(g, labels);
  std::vector<double> z(static_cast<std::size_t>(m), 0.0);
  for (std::int64_t j = 0; j < m; ++j) {
    double s = 0.0, q = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      const double v = g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      s += v;
      q += v * v;
    }
    const double num = static_cast<double>(n) * q - s * s;
    if (num <= 1e-12 * std::max(1.0, static_cast<double>(n) * q)) continue;
    const double sigma2 = num / (static_cast<double>(n) * static_cast<double>(n));
    z[static_cast<std::size_t>(j)] =
        u[static_cast<std::size_t>(j)] /
        std::sqrt(sigma2 * n_case * n_ctrl / static_cast<double>(n));
  }
  return z;
}

}  // namespace oracles

#endif
