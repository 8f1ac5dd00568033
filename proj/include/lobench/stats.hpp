#pragma once

#include <vector>

namespace lobench {

double mean_of(const std::vector<double>& xs);

/// Sample standard deviation (n-1 denominator); 0 for fewer than two values.
double sample_std(const std::vector<double>& xs);

/// Population standard deviation (n denominator); 0 for fewer than two values.
double population_std(const std::vector<double>& xs);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value. With tied
/// (integer) samples the test is conservative, which is the safe direction for
/// "not rejected" checks.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace lobench
