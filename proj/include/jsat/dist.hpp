#ifndef JSAT_DIST_HPP
#define JSAT_DIST_HPP

namespace jsat::dist {

// two-sided standard normal tail: P(|Z| >= |z|)
double normal_two_sided_p(double z);

// upper tail of the chi-square distribution
double chisq_sf(double x, double df);

// upper tail of the F distribution
double f_sf(double x, double df1, double df2);

// Beta(a1, a2) density, the usual variant-weight kernel
double beta_density(double x, double a1, double a2);

}  // namespace jsat::dist

#endif
