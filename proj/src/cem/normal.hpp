#pragma once

namespace cem {

/// Standard normal CDF.
double normal_cdf(double x);

/// Inverse of normal_cdf on (0, 1), Wichura's AS 241 (PPND16), relative
/// accuracy about 1e-16. Throws DomainError outside (0, 1).
double normal_quantile(double p);

}  // namespace cem
