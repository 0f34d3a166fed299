#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pneuro/fit.hpp"
#include "pneuro/harness.hpp"
#include "pneuro/io.hpp"
#include "pneuro/pneuron.hpp"
#include "pneuro/stats.hpp"

using namespace pneuro;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path fresh_dir(const char* name) {
    const fs::path dir = fs::temp_directory_path() / "pneuro-tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

harness::ExperimentConfig make_cfg(std::vector<std::pair<std::string, std::string>> kv) {
    return harness::resolve_config({}, kv);
}

}  // namespace

TEST_CASE("ks statistic reference cases") {
    auto uniform01 = [](double x) { return std::clamp(x, 0.0, 1.0); };

    // a single sample at the median of its law
    CHECK(ks_statistic(std::vector<double>{0.5}, uniform01) == doctest::Approx(0.5));

    // samples placed at the k/(n+1) quantiles: known small statistic 1/(n+1)... n=9: 0.1
    std::vector<double> quantiles;
    for (int k = 1; k <= 9; ++k) quantiles.push_back(k / 10.0);
    CHECK(ks_statistic(quantiles, uniform01) == doctest::Approx(0.1).epsilon(1e-12));

    // degenerate pile at the support minimum
    const std::vector<double> pile(100, 0.0);
    CHECK(ks_statistic(pile, uniform01) == doctest::Approx(1.0));

    CHECK_THROWS_AS(ks_statistic(std::vector<double>{}, uniform01), std::invalid_argument);
}

TEST_CASE("fit: exactly linear data has zero residual") {
    TransferCurve c;
    c.meta.kind = ActivationKind::p_linear;
    for (int i = 0; i < 16; ++i)
        c.points.push_back({static_cast<double>(i), 0.25 * i - 1.0, 1});
    const FitResult r = fit_reference(c, FitFamily::linear);
    CHECK(r.rmse < 1e-12);
    CHECK_FALSE(r.degenerate);
    // recomposed slope a/b and intercept reproduce the line
    CHECK(r.a / r.b == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("fit: the digital bell-family curve is tanh-like") {
    // noise-free analytic curve: the triangular-CDF response
    TransferCurve c;
    c.meta.kind = ActivationKind::p_tanh;
    const RngCdf cdf = RngCdf::triangular_words();
    const auto sweep = linspace_words(input_domain_for(ActivationKind::p_tanh), 33);
    for (std::int64_t x : sweep)
        c.points.push_back({static_cast<double>(x),
                            analytic_transfer(ActivationKind::p_tanh, cdf, x), 1});
    const FitResult r = fit_reference(c, FitFamily::tanh_like);
    CHECK(r.rmse < 0.03);  // close to tanh, but not exactly tanh
    CHECK(r.rmse > 1e-6);
    CHECK_FALSE(r.degenerate);
    CHECK(r.a == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("fit: constant data degenerates to a flagged zero-amplitude fit") {
    TransferCurve c;
    c.meta.kind = ActivationKind::p_sigmoid;
    for (int i = 0; i < 8; ++i) c.points.push_back({static_cast<double>(i), 0.4, 1});
    const FitResult r = fit_reference(c, FitFamily::tanh_like);
    CHECK(r.degenerate);
    CHECK(r.a == 0.0);
    CHECK(r.d == doctest::Approx(0.4));
}

TEST_CASE("fit: needs at least four points") {
    TransferCurve c;
    c.points = {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}};
    CHECK_THROWS_AS(fit_reference(c, FitFamily::linear), std::invalid_argument);
}

TEST_CASE("config text: sections flatten, errors carry line numbers") {
    std::istringstream ok(
        "experiment = transfer\n"
        "seed = 9\n"
        "# comment\n"
        "[transfer]\n"
        "kind = sigmoid\n"
        "points = 17\n");
    const auto cf = harness::parse_config_text(ok, "test.cfg");
    CHECK(cf.values.at("experiment") == "transfer");
    CHECK(cf.values.at("transfer.kind") == "sigmoid");
    CHECK(cf.lines.at("transfer.points") == 6);

    std::istringstream bad("experiment = transfer\nnonsense line\n");
    CHECK_THROWS_WITH_AS(harness::parse_config_text(bad, "b.cfg"),
                         doctest::Contains("b.cfg:2"), std::invalid_argument);

    std::istringstream dup("a = 1\na = 2\n");
    CHECK_THROWS_WITH_AS(harness::parse_config_text(dup, "d.cfg"),
                         doctest::Contains("d.cfg:2"), std::invalid_argument);

    std::istringstream sec("[open\na = 1\n");
    CHECK_THROWS_AS(harness::parse_config_text(sec, "s.cfg"), std::invalid_argument);
}

TEST_CASE("config resolution: precedence, schema, typed accessors") {
    std::istringstream file(
        "experiment = transfer\n"
        "seed = 5\n"
        "[transfer]\n"
        "kind = sigmoid\n");
    const auto cf = harness::parse_config_text(file, "t.cfg");

    const auto cfg = harness::resolve_config(cf, {{"seed", "42"}});
    CHECK(cfg.get_u64("seed", 0) == 42);  // flag wins
    CHECK(cfg.get_str("transfer.kind", "") == "sigmoid");

    CHECK_THROWS_WITH_AS(harness::resolve_config(cf, {{"transfer.bogus", "1"}}),
                         doctest::Contains("transfer.bogus"), std::invalid_argument);
    CHECK_THROWS_AS(harness::resolve_config({}, {}), std::invalid_argument);  // no experiment
    CHECK_THROWS_AS(harness::resolve_config({}, {{"experiment", "warp"}}),
                    std::invalid_argument);

    const auto c2 = make_cfg({{"experiment", "transfer"}, {"seed", "xyz"}});
    CHECK_THROWS_WITH_AS(c2.get_u64("seed", 0), doctest::Contains("seed"),
                         std::invalid_argument);
    const auto c3 = make_cfg({{"experiment", "transfer"}, {"transfer.beta", "fast"}});
    CHECK_THROWS_AS(c3.get_double("transfer.beta", 1.0), std::invalid_argument);
}

TEST_CASE("experiment aliases map to canonical names") {
    CHECK(make_cfg({{"experiment", "sllg_trace"}}).experiment == "sllg");
    CHECK(make_cfg({{"experiment", "distribution"}}).experiment == "dist");
    CHECK(make_cfg({{"experiment", "range_sweep"}}).experiment == "range");
}

TEST_CASE("transfer run: outputs, re-run byte identity, manifest regeneration") {
    const fs::path dir = fresh_dir("transfer");
    const std::string out = (dir / "curve.csv").string();
    const auto cfg = make_cfg({{"experiment", "transfer"},
                               {"seed", "42"},
                               {"out", out},
                               {"transfer.kind", "sigmoid"},
                               {"transfer.points", "9"},
                               {"transfer.samples", "2000"}});
    harness::run(cfg);
    REQUIRE(fs::exists(out));
    REQUIRE(fs::exists(out + ".meta"));
    REQUIRE(fs::exists(out + ".manifest.json"));
    const std::string first = slurp(out);
    const std::string meta1 = slurp(out + ".meta");

    harness::run(cfg);
    CHECK(slurp(out) == first);
    CHECK(slurp(out + ".meta") == meta1);

    // regenerate from the manifest alone
    const std::string manifest = slurp(out + ".manifest.json");
    fs::remove(out);
    harness::run_from_manifest((out + ".manifest.json"));
    CHECK(slurp(out) == first);
    CHECK(slurp(out + ".manifest.json") == manifest);

    // csv schema sanity
    CHECK(first.rfind("input,mean,n\n", 0) == 0);
}

TEST_CASE("network run writes the histogram schema with the exact column") {
    const fs::path dir = fresh_dir("network");
    const std::string out = (dir / "hist.csv").string();
    harness::run(make_cfg({{"experiment", "network"},
                           {"seed", "7"},
                           {"out", out},
                           {"network.sweeps", "5000"},
                           {"network.burn_in", "100"}}));
    const std::string csv = slurp(out);
    CHECK(csv.rfind("state_bits,count,empirical_p,exact_p\n", 0) == 0);
    int lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    CHECK(lines == 9);  // header + 8 states
}

TEST_CASE("schema violations never produce output files") {
    const fs::path dir = fresh_dir("schema");
    const std::string out = (dir / "never.csv").string();
    CHECK_THROWS_AS(harness::run(make_cfg({{"experiment", "transfer"},
                                           {"seed", "1"},
                                           {"out", out},
                                           {"transfer.kind", "sigmoid"},
                                           {"transfer.impl", "holographic"}})),
                    std::invalid_argument);
    CHECK_FALSE(fs::exists(out));
    CHECK_FALSE(fs::exists(out + ".manifest.json"));

    CHECK_THROWS_AS(harness::run(make_cfg({{"experiment", "transfer"}, {"seed", "1"}})),
                    std::invalid_argument);  // missing out
}

TEST_CASE("dist and range runs are deterministic") {
    const fs::path dir = fresh_dir("dist");
    const std::string out = (dir / "d.csv").string();
    const auto cfg = make_cfg({{"experiment", "dist"},
                               {"seed", "3"},
                               {"out", out},
                               {"dist.source", "irwin_hall"},
                               {"dist.samples", "5000"}});
    harness::run(cfg);
    const std::string first = slurp(out);
    CHECK(first.rfind("sample\n", 0) == 0);
    harness::run(cfg);
    CHECK(slurp(out) == first);

    const std::string rout = (dir / "r.csv").string();
    const auto rcfg = make_cfg({{"experiment", "range"},
                                {"seed", "4"},
                                {"out", rout},
                                {"range.samples", "20000"}});
    harness::run(rcfg);
    const std::string rfirst = slurp(rout);
    CHECK(rfirst.rfind("v_dd,range_v,range_ratio,theory_ratio\n", 0) == 0);
    harness::run(rcfg);
    CHECK(slurp(rout) == rfirst);
}

TEST_CASE("golden-vector file round trip and mismatch detection") {
    const fs::path dir = fresh_dir("golden");
    GoldenVector g;
    g.seed = 1;
    {
        Lfsr reg(1);
        for (int i = 0; i < 8; ++i) g.words.push_back(reg.step());
    }
    const std::string path = (dir / "ok.txt").string();
    atomic_write(path, golden_file_text(g));
    const GoldenVector back = read_golden_file(path);
    CHECK(back.seed == g.seed);
    CHECK(back.words == g.words);
    CHECK(golden_match_count(back) == 8);

    g.words[5] ^= 0x4;  // corrupt one word
    const std::string bad = (dir / "bad.txt").string();
    atomic_write(bad, golden_file_text(g));
    CHECK(golden_match_count(read_golden_file(bad)) == 5);

    atomic_write((dir / "junk.txt").string(), "zzzz\n");
    CHECK_THROWS_AS(read_golden_file((dir / "junk.txt").string()), std::invalid_argument);
    CHECK_THROWS_AS(read_golden_file((dir / "missing.txt").string()), std::invalid_argument);
}
