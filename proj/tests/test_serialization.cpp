#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <random>
#include <sstream>

#include "riesz/pointfields.hpp"
#include "riesz/serialization.hpp"

using riesz::Configuration;
using riesz::Json;
using riesz::Points;

namespace {

bool same_bits(const Points& a, const Points& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

}  // namespace

TEST_CASE("shortest round-trip doubles") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::uint64_t> bits;
    for (int k = 0; k < 20000; ++k) {
        std::uint64_t raw = bits(rng);
        double v;
        std::memcpy(&v, &raw, sizeof v);
        if (!std::isfinite(v)) continue;
        const std::string s = riesz::format_double(v);
        const double back = std::strtod(s.c_str(), nullptr);
        CHECK(std::memcmp(&v, &back, sizeof v) == 0);
    }
    CHECK(riesz::format_double(0.1) == "0.1");
    CHECK(riesz::format_double(1e-300) == "1e-300");
    CHECK(riesz::format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(riesz::format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(riesz::format_double(std::nan("")) == "nan");
}

TEST_CASE("configuration records round-trip bit-exactly") {
    std::vector<Configuration> configs;
    configs.push_back(riesz::sample_ginibre(50, 3));
    configs.push_back(riesz::sample_loggas_mcmc({riesz::dyson_spec(), 6}, 2, 50, 0.5, 9));
    Points tiny(2, 2);
    tiny << 5e-324, -0.0, 1.7976931348623157e308, 1.0 / 3.0;
    configs.push_back(Configuration::from_points(tiny, {"manual", 77, {{"x", 0.1}}}));
    configs.push_back(Configuration::from_points(Points(0, 2)));

    std::stringstream buf;
    riesz::write_configurations_jsonl(buf, configs);
    const auto back = riesz::read_configurations_jsonl(buf);
    REQUIRE(back.size() == configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i) {
        CHECK(same_bits(back[i].points, configs[i].points));
        CHECK(back[i] == configs[i]);
    }
    CHECK(std::signbit(back[2].points(0, 1)));

    const auto j = riesz::to_json(configs[0]);
    CHECK(j["dim"] == 2);
    CHECK(j["n"] == 50);
    CHECK(j["points"].size() == 100);
    CHECK(j["sampler"] == "ginibre");
    CHECK(j["seed"] == 3);
}

TEST_CASE("parameter records round-trip") {
    const riesz::PotentialSpec spec{2.5, 1, 0.75, riesz::FreePotential::harmonic(0.3)};
    CHECK(riesz::potential_spec_from_json(riesz::to_json(spec)) == spec);
    CHECK(riesz::potential_spec_from_json(riesz::to_json(riesz::ginibre_spec())) == riesz::ginibre_spec());

    for (const auto scheme : {riesz::TruncationScheme::particle(3.25),
                              riesz::TruncationScheme::origin(std::numeric_limits<double>::infinity())}) {
        const auto j = riesz::to_json(scheme);
        CHECK(riesz::truncation_scheme_from_json(Json::parse(j.dump())) == scheme);
    }
    CHECK(riesz::to_json(riesz::TruncationScheme::origin(std::numeric_limits<double>::infinity()))["radius"].is_null());

    riesz::IntegratorConfig icfg{3e-5, 123, 40.0, 2e-4, 7, 0xFFFFFFFFFFFFFFFFull, 9};
    CHECK(riesz::integrator_config_from_json(Json::parse(riesz::to_json(icfg).dump())) == icfg);

    Json bad = riesz::to_json(spec);
    bad["free"] = "quartic";
    CHECK_THROWS_AS(riesz::potential_spec_from_json(bad), riesz::DomainError);
}

TEST_CASE("trajectory files round-trip") {
    const auto start = riesz::sample_ginibre(10, 5);
    riesz::IntegratorConfig icfg;
    icfg.steps = 40;
    icfg.record_every = 8;
    icfg.seed = 12;
    const auto traj =
        riesz::simulate(start, riesz::ginibre_spec(), riesz::TruncationScheme::origin(20.0), icfg);

    std::stringstream buf;
    riesz::write_trajectory(buf, traj, Json{{"experiment", "simulate"}});
    const std::string text = buf.str();
    std::stringstream again(text);
    const auto back = riesz::read_trajectory(again);
    CHECK(back == traj);
    for (std::size_t f = 0; f < traj.frames.size(); ++f) CHECK(same_bits(back.frames[f], traj.frames[f]));

    std::stringstream head(text);
    const auto header = riesz::read_trajectory_header(head);
    CHECK(header["format"] == "riesz-trajectory");
    CHECK(header["version"] == 1);
    CHECK(header["frames"] == 6);
    CHECK(header["n"] == 10);
    CHECK(header["provenance"]["experiment"] == "simulate");

    std::stringstream rewritten;
    riesz::write_trajectory(rewritten, back, Json{{"experiment", "simulate"}});
    CHECK(rewritten.str() == text);

    std::stringstream truncated(text.substr(0, text.rfind('{')));
    CHECK_THROWS_AS(riesz::read_trajectory(truncated), riesz::DomainError);
    std::stringstream empty;
    CHECK_THROWS_AS(riesz::read_trajectory(empty), riesz::DomainError);
    std::stringstream foreign("{\"format\":\"other\"}\n");
    CHECK_THROWS_AS(riesz::read_trajectory(foreign), riesz::DomainError);
}

TEST_CASE("CSV layout") {
    riesz::CsvTable table{{"t", "a,b"}, {{0.0, 1.5}, {0.1, -2.0}}};
    std::ostringstream out;
    riesz::write_csv(out, table, {"seed=1"});
    CHECK(out.str() == "# seed=1\r\nt,\"a,b\"\r\n0,1.5\r\n0.1,-2\r\n");

    std::ostringstream lines;
    riesz::write_jsonl(lines, table, Json{{"seed", 1}});
    std::istringstream in(lines.str());
    std::string line;
    std::getline(in, line);
    CHECK(Json::parse(line)["provenance"]["seed"] == 1);
    std::getline(in, line);
    CHECK(Json::parse(line)["a,b"] == 1.5);

    riesz::VarianceSeries v;
    v.radii = {1.0};
    v.count_mean = {3.0};
    v.count_variance = {2.0};
    v.beyond_bulk = {true};
    v.replicas = 4;
    const auto vt = riesz::variance_table(v);
    CHECK(vt.rows.front()[3] == doctest::Approx(2.0 / std::numbers::pi));
    CHECK(vt.rows.front()[4] == 1.0);
}
