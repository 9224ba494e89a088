#include "jsat/dist.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <cmath>

namespace jsat::dist {

double normal_two_sided_p(double z) { return std::erfc(std::fabs(z) / std::sqrt(2.0)); }

double chisq_sf(double x, double df) {
  if (x <= 0.0) return 1.0;
  boost::math::chi_squared chi(df);
  return boost::math::cdf(boost::math::complement(chi, x));
}

double f_sf(double x, double df1, double df2) {
  if (x <= 0.0) return 1.0;
  boost::math::fisher_f f(df1, df2);
  return boost::math::cdf(boost::math::complement(f, x));
}

double beta_density(double x, double a1, double a2) {
  boost::math::beta_distribution<double> b(a1, a2);
  return boost::math::pdf(b, x);
}

}  // namespace jsat::dist
