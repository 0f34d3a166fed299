#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace pneuro {

struct SampleStats {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased (n-1)
    double min = 0.0;
    double max = 0.0;
    double skewness = 0.0;  // g1 = m3 / m2^(3/2); 0 for degenerate samples
};

// Standard sample moments. Throws std::invalid_argument below 2 samples.
SampleStats distribution_stats(std::span<const double> samples);

// Sup-norm distance between the empirical CDF of `samples` and `cdf`.
// `cdf(x)` must be a monotone CDF evaluated as P(X <= x). Sorts a copy.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);
double ks_statistic_sorted(std::span<const double> sorted, const std::function<double(double)>& cdf);

// KS distance to the uniform fitted on the observed support [min, max].
double ks_to_uniform_support(std::span<const double> samples);

// Histogram bin counts over [lo, hi].
std::vector<std::uint64_t> histogram(std::span<const double> samples, double lo, double hi,
                                     std::size_t bins);

// Single-peak check with a noise allowance of `slack_sigmas`*sqrt(count) per
// neighbour comparison.
bool is_unimodal(std::span<const std::uint64_t> counts, double slack_sigmas = 4.0);

// First lag where the normalized autocorrelation drops below 1/e, estimated
// on at most `max_points` leading samples. Degenerate series report lag 1.
std::size_t autocorrelation_time(std::span<const double> series, std::size_t max_lag = 100000,
                                 std::size_t max_points = 2000000);

}  // namespace pneuro
