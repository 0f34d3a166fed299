#include "pneuro/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pneuro {

SampleStats distribution_stats(std::span<const double> samples) {
    if (samples.size() < 2)
        throw std::invalid_argument("distribution_stats: need at least 2 samples");
    SampleStats s;
    s.n = samples.size();
    double sum = 0.0;
    s.min = samples[0];
    s.max = samples[0];
    for (double v : samples) {
        sum += v;
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    s.mean = sum / static_cast<double>(s.n);
    double m2 = 0.0, m3 = 0.0;
    for (double v : samples) {
        const double d = v - s.mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    s.variance = m2 / static_cast<double>(s.n - 1);
    m2 /= static_cast<double>(s.n);
    m3 /= static_cast<double>(s.n);
    s.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    return s;
}

double ks_statistic_sorted(std::span<const double> sorted,
                           const std::function<double(double)>& cdf) {
    if (sorted.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    const double n = static_cast<double>(sorted.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        ks = std::max(ks, std::abs((static_cast<double>(i) + 1.0) / n - f));
        ks = std::max(ks, std::abs(static_cast<double>(i) / n - f));
    }
    return ks;
}

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    return ks_statistic_sorted(sorted, cdf);
}

double ks_to_uniform_support(std::span<const double> samples) {
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.empty()) throw std::invalid_argument("ks_to_uniform_support: empty sample");
    const double lo = sorted.front(), hi = sorted.back();
    if (hi <= lo) return 0.5;  // point mass: maximal mismatch to any continuous uniform
    return ks_statistic_sorted(sorted, [lo, hi](double x) {
        return std::clamp((x - lo) / (hi - lo), 0.0, 1.0);
    });
}

std::vector<std::uint64_t> histogram(std::span<const double> samples, double lo, double hi,
                                     std::size_t bins) {
    if (bins == 0 || hi <= lo) throw std::invalid_argument("histogram: bad bin layout");
    std::vector<std::uint64_t> counts(bins, 0);
    const double scale = static_cast<double>(bins) / (hi - lo);
    for (double v : samples) {
        if (v < lo || v > hi) continue;
        auto idx = static_cast<std::size_t>((v - lo) * scale);
        if (idx >= bins) idx = bins - 1;
        ++counts[idx];
    }
    return counts;
}

bool is_unimodal(std::span<const std::uint64_t> counts, double slack_sigmas) {
    if (counts.size() < 3) return true;
    std::size_t peak = 0;
    for (std::size_t i = 1; i < counts.size(); ++i)
        if (counts[i] > counts[peak]) peak = i;
    auto slack = [&](std::size_t i, std::size_t k) {
        const double c = static_cast<double>(std::max(counts[i], counts[k]));
        return slack_sigmas * std::sqrt(c + 1.0);
    };
    for (std::size_t i = 0; i < peak; ++i)
        if (static_cast<double>(counts[i]) >
            static_cast<double>(counts[i + 1]) + slack(i, i + 1))
            return false;
    for (std::size_t i = peak; i + 1 < counts.size(); ++i)
        if (static_cast<double>(counts[i + 1]) >
            static_cast<double>(counts[i]) + slack(i, i + 1))
            return false;
    return true;
}

std::size_t autocorrelation_time(std::span<const double> series, std::size_t max_lag,
                                 std::size_t max_points) {
    const std::size_t n = std::min(series.size(), max_points);
    if (n < 3) return 1;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += series[i];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = series[i] - mean;
        var += d * d;
    }
    if (var <= 0.0) return 1;  // constant series
    const double threshold = std::exp(-1.0);
    const std::size_t lag_cap = std::min(max_lag, n / 2);
    for (std::size_t lag = 1; lag <= lag_cap; ++lag) {
        double c = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i)
            c += (series[i] - mean) * (series[i + lag] - mean);
        if (c / var < threshold) return lag;
    }
    return lag_cap;
}

}  // namespace pneuro
