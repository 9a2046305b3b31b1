#pragma once

namespace olagg::estimation {

// Standard normal CDF.
double normal_cdf(double z);

// Inverse of the standard normal CDF: z with Phi(z) = p. Acklam's rational
// approximation followed by one Halley step; absolute error below 1e-8 over
// (0, 1). Throws kInvalidArgument outside the open interval.
double normal_quantile(double p);

}  // namespace olagg::estimation
