#include "pneuro/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pneuro {

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed for '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot move '" + tmp + "' to '" + path + "'");
}

std::string format_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

namespace {

std::string format_input(double v) {
    if (std::floor(v) == v && std::abs(v) < 9.0e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
        return buf;
    }
    return format_g9(v);
}

const char* encoding_name(ActivationKind k) {
    const DigitalEncoding e = encoding_for(k);
    if (e.signedness == Signedness::unsigned_word)
        return e.polarity == Polarity::bipolar ? "unsigned,bipolar" : "unsigned,unipolar";
    return e.polarity == Polarity::bipolar ? "twos_complement,bipolar"
                                           : "twos_complement,unipolar";
}

}  // namespace

std::string curve_csv(const TransferCurve& curve) {
    std::string out = "input,mean,n\n";
    for (const auto& p : curve.points) {
        out += format_input(p.input);
        out += ',';
        out += format_g9(p.mean);
        out += ',';
        out += std::to_string(p.n);
        out += '\n';
    }
    return out;
}

std::string curve_meta_text(const TransferCurve& curve) {
    std::ostringstream os;
    os << "seed = " << curve.meta.seed << '\n'
       << "kind = " << to_string(curve.meta.kind) << '\n'
       << "impl = " << curve.meta.impl << '\n'
       << "beta = " << format_g9(curve.meta.beta) << '\n'
       << "samples_per_point = " << curve.meta.samples_per_point << '\n'
       << "points = " << curve.points.size() << '\n'
       << "encoding = " << encoding_name(curve.meta.kind) << '\n';
    return os.str();
}

std::string trace_csv(std::span<const TraceRow> rows, std::size_t thin) {
    if (thin == 0) thin = 1;
    std::string out = "t_s,mx,my,mz,G_S\n";
    for (std::size_t i = 0; i < rows.size(); i += thin) {
        const auto& r = rows[i];
        out += format_g9(r.t);
        out += ',';
        out += format_g9(r.m.x);
        out += ',';
        out += format_g9(r.m.y);
        out += ',';
        out += format_g9(r.m.z);
        out += ',';
        out += format_g9(r.g);
        out += '\n';
    }
    return out;
}

std::string histogram_csv(const StateHistogram& hist, std::span<const double> exact, int n) {
    if (hist.counts.size() != exact.size())
        throw std::invalid_argument("histogram_csv: size mismatch");
    const double total = static_cast<double>(hist.total());
    std::string out = "state_bits,count,empirical_p,exact_p\n";
    for (std::size_t idx = 0; idx < hist.counts.size(); ++idx) {
        out += state_bits(idx, n);
        out += ',';
        out += std::to_string(hist.counts[idx]);
        out += ',';
        out += format_g9(static_cast<double>(hist.counts[idx]) / total);
        out += ',';
        out += format_g9(exact[idx]);
        out += '\n';
    }
    return out;
}

std::string samples_csv(std::span<const double> samples) {
    std::string out = "sample\n";
    for (double v : samples) {
        out += format_g9(v);
        out += '\n';
    }
    return out;
}

GoldenVector read_golden_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("golden: cannot open '" + path + "'");
    GoldenVector g;
    std::string line;
    bool have_seed = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        std::string tok = line.substr(first, last - first + 1);
        if (tok.empty() || tok[0] == '#') continue;
        unsigned long v;
        try {
            v = std::stoul(tok, nullptr, 16);
        } catch (const std::exception&) {
            throw std::invalid_argument("golden: '" + path + "' line " +
                                        std::to_string(lineno) + ": bad hex word");
        }
        if (v > 0xFFFFFFFFul)
            throw std::invalid_argument("golden: '" + path + "' line " +
                                        std::to_string(lineno) + ": word exceeds 32 bits");
        if (!have_seed) {
            g.seed = static_cast<Word32>(v);
            have_seed = true;
        } else {
            g.words.push_back(static_cast<Word32>(v));
        }
    }
    if (!have_seed) throw std::invalid_argument("golden: '" + path + "' has no seed line");
    return g;
}

std::string golden_file_text(const GoldenVector& g) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%08X", g.seed);
    std::string out = buf;
    out += '\n';
    for (Word32 w : g.words) {
        std::snprintf(buf, sizeof buf, "%08X", w);
        out += buf;
        out += '\n';
    }
    return out;
}

std::size_t golden_match_count(const GoldenVector& g) {
    Lfsr reg(g.seed);  // throws on zero seed
    std::size_t matched = 0;
    for (Word32 expect : g.words) {
        if (reg.step() != expect) break;
        ++matched;
    }
    return matched;
}

std::string manifest_json(const std::string& experiment,
                          const std::map<std::string, std::string>& config,
                          const std::vector<std::string>& outputs) {
    nlohmann::json j;
    j["artifact"] = "pneuro";
    j["version"] = "0.1.0";
    j["experiment"] = experiment;
    j["config"] = config;
    j["outputs"] = outputs;
    return j.dump(2) + "\n";
}

}  // namespace pneuro
