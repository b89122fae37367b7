#pragma once

namespace wassci {

/// Standard normal CDF via the complementary error function.
double normal_cdf(double x);

/// Upper-tail probability P(Z > x).
double normal_sf(double x);

/// log P(Z <= x), stable far into the left tail (relative accuracy of the
/// tail value ~1e-12 down to x = -38 and beyond, where the plain CDF has
/// already left the normal double range).
double normal_log_cdf(double x);

/// log P(Z > x); mirror of normal_log_cdf.
double normal_log_sf(double x);

/// Inverse standard normal CDF (Wichura's PPND16 rational approximations).
/// Throws DomainError for p outside (0, 1).
double normal_quantile(double p);

/// log of the standard normal mass over [lo, hi]; endpoints may be infinite.
/// Evaluated through the larger tail so adjacent far-tail intervals do not
/// cancel. Returns -inf when the mass is zero at working precision (the
/// underflow signal); finite for any interval with mass >= exp(-745).
double log_gauss_mass(double lo, double hi);

}  // namespace wassci
