#pragma once

namespace expeng {

/// Standard normal CDF.
double normal_cdf(double z);

/// Standard normal quantile (Wichura's AS241, ~1e-15 accurate).
/// p must lie in (0,1).
double normal_quantile(double p);

/// Two-sided p-value for a z statistic.
double two_sided_p(double z);

}  // namespace expeng
