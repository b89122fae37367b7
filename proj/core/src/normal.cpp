#include "wassci/normal.hpp"

#include <cmath>
#include <limits>

#include "wassci/errors.hpp"

namespace wassci {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kLogSqrt2Pi = 0.9189385332046727;  // log(sqrt(2*pi))
const double kNegInf = -std::numeric_limits<double>::infinity();

// Asymptotic series for the Mills ratio, valid for large positive x:
// sf(x) = phi(x)/x * (1 - 1/x^2 + 3/x^4 - 15/x^6 + 105/x^8 - 945/x^10 ...).
// At x >= 30 the truncation error is below 2e-14 relative.
double log_sf_asymptotic(double x) {
  const double r = 1.0 / (x * x);
  const double series_minus_one =
      -r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r * (1.0 - 9.0 * r))));
  return -0.5 * x * x - std::log(x) - kLogSqrt2Pi + std::log1p(series_minus_one);
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / kSqrt2); }

double normal_log_sf(double x) {
  if (std::isnan(x)) throw DomainError("normal_log_sf: NaN argument");
  if (x == std::numeric_limits<double>::infinity()) return kNegInf;
  if (x == -std::numeric_limits<double>::infinity()) return 0.0;
  if (x < -1.0) return std::log1p(-normal_sf(-x));
  if (x <= 30.0) return std::log(normal_sf(x));
  return log_sf_asymptotic(x);
}

double normal_log_cdf(double x) { return normal_log_sf(-x); }

// Wichura (1988), algorithm AS 241, PPND16. Relative error below 1e-15
// across (0,1) at double precision.
double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("normal_quantile: p must lie in (0,1)");

  static const double a[8] = {
      3.3871328727963666080e0,  1.3314166789178437745e2,
      1.9715909503065514427e3,  1.3731693765509461125e4,
      4.5921953931549871457e4,  6.7265770927008700853e4,
      3.3430575583588128105e4,  2.5090809287301226727e3};
  static const double b[8] = {
      1.0,                     4.2313330701600911252e1,
      6.8718700749205790830e2, 5.3941960214247511077e3,
      2.1213794301586595867e4, 3.9307895800092710610e4,
      2.8729085735721942674e4, 5.2264952788528545610e3};
  static const double c[8] = {
      1.42343711074968357734e0,  4.63033784615654529590e0,
      5.76949722146069140550e0,  3.64784832476320460504e0,
      1.27045825245236838258e0,  2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static const double d[8] = {
      1.0,                       2.05319162663775882187e0,
      1.67638483018380384940e0,  6.89767334985100004550e-1,
      1.48103976427480074590e-1, 1.51986665636164571966e-2,
      5.47593808499534494600e-4, 1.05075007164441684324e-9};
  static const double e[8] = {
      6.65790464350110377720e0,  5.46378491116411436990e0,
      1.78482653991729133580e0,  2.96560571828504891230e-1,
      2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static const double f[8] = {
      1.0,                       5.99832206555887937690e-1,
      1.36929880922735805310e-1, 1.48753612908506148525e-2,
      7.86869131145613259100e-4, 1.84631831751005468180e-5,
      1.42151175831644588870e-7, 2.04426310338993978564e-15};

  auto poly = [](const double* k, double x) {
    return ((((((k[7] * x + k[6]) * x + k[5]) * x + k[4]) * x + k[3]) * x +
             k[2]) * x + k[1]) * x + k[0];
  };

  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * poly(a, r) / poly(b, r);
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = poly(c, r) / poly(d, r);
  } else {
    r -= 5.0;
    value = poly(e, r) / poly(f, r);
  }
  return (q < 0.0) ? -value : value;
}

double log_gauss_mass(double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi) || lo > hi)
    throw DomainError("log_gauss_mass: requires lo <= hi");
  if (lo == hi) return kNegInf;

  if (lo >= 0.0) {
    // Right tail: mass = sf(lo) - sf(hi), with sf(lo) the larger term.
    const double la = normal_log_sf(lo);
    const double lb = normal_log_sf(hi);  // -inf when hi = +inf
    if (lb == kNegInf) return la;
    const double diff = lb - la;  // <= 0
    if (diff >= 0.0) return kNegInf;
    const double tail = std::log1p(-std::exp(diff));
    const double result = la + tail;
    return std::isfinite(result) ? result : kNegInf;
  }
  if (hi <= 0.0) {
    return log_gauss_mass(-hi, -lo);
  }
  // Interval straddles zero: two erf halves add, no cancellation.
  const double upper = std::isinf(hi) ? 1.0 : std::erf(hi / kSqrt2);
  const double lower = std::isinf(lo) ? 1.0 : std::erf(-lo / kSqrt2);
  return std::log(0.5 * (upper + lower));
}

}  // namespace wassci
