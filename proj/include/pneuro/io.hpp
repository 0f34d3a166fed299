#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pneuro/network.hpp"
#include "pneuro/pneuron.hpp"
#include "pneuro/sllg.hpp"

namespace pneuro {

// All writers are atomic (buffer then rename) so a failed run never leaves a
// partial output file. Numeric fields use 9 significant digits, enough to
// round-trip 32-bit-derived quantities.
void atomic_write(const std::string& path, const std::string& content);

std::string format_g9(double v);

// Curve CSV: header `input,mean,n`; digital word inputs print as integers.
std::string curve_csv(const TransferCurve& curve);
// Structured-text sidecar: key = value lines (seed, kind, beta, encoding, ...).
std::string curve_meta_text(const TransferCurve& curve);

// Trace CSV: header `t_s,mx,my,mz,G_S`.
std::string trace_csv(std::span<const TraceRow> rows, std::size_t thin = 1);

// Histogram CSV: header `state_bits,count,empirical_p,exact_p`.
std::string histogram_csv(const StateHistogram& hist, std::span<const double> exact, int n);

std::string samples_csv(std::span<const double> samples);

// Golden-vector file: first line is the seed, then one hex word per line.
struct GoldenVector {
    Word32 seed = 0;
    std::vector<Word32> words;
};
GoldenVector read_golden_file(const std::string& path);
std::string golden_file_text(const GoldenVector& g);
// Number of leading draws from the default 32-bit register matching the file;
// throws if the seed is invalid.
std::size_t golden_match_count(const GoldenVector& g);

// Run manifest: artifact version plus the fully resolved configuration, from
// which any output can be regenerated bit-identically.
std::string manifest_json(const std::string& experiment,
                          const std::map<std::string, std::string>& config,
                          const std::vector<std::string>& outputs);

}  // namespace pneuro
