#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "pmot/experiments.hpp"
#include "pmot/io.hpp"

using namespace pmot;

TEST_CASE("gap diagram of points on the line") {
    const auto d = rips_h0_diagram_1d({3.0, 0.0, 1.0});
    REQUIRE(d.size() == 2);
    CHECK(d.atoms()[0].point == PlanarPoint(0.0, 1.0));
    CHECK(d.atoms()[1].point == PlanarPoint(0.0, 2.0));
    CHECK(d.atoms()[0].mass == 1.0);

    CHECK_THROWS_AS(rips_h0_diagram_1d({1.0}), std::invalid_argument);
    // duplicate points produce no bar
    CHECK(rips_h0_diagram_1d({1.0, 1.0}).size() == 0);
    // equal gaps merge into one atom of mass 2
    const auto e = rips_h0_diagram_1d({0.0, 1.0, 2.0});
    REQUIRE(e.size() == 1);
    CHECK(e.atoms()[0].mass == 2.0);
}

TEST_CASE("rescaling multiplies deaths by n and masses by 1/n") {
    const auto m = rescaled_empirical_measure({0.2, 0.5, 0.9});
    REQUIRE(m.size() == 2);
    CHECK(m.atoms()[0].point.death == doctest::Approx(3.0 * 0.3));
    CHECK(m.atoms()[1].point.death == doctest::Approx(3.0 * 0.4));
    CHECK(m.atoms()[0].mass == doctest::Approx(1.0 / 3.0));
    CHECK(m.total_mass() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("limit discretization hits exponential midpoint quantiles") {
    const auto m = limit_measure_discretization(4);
    REQUIRE(m.size() == 4);
    for (int j = 0; j < 4; ++j) {
        const double q = (j + 0.5) / 4.0;
        CHECK(m.atoms()[j].point.death == doctest::Approx(-std::log1p(-q)));
        CHECK(m.atoms()[j].mass == doctest::Approx(0.25));
        CHECK(m.atoms()[j].point.birth == 0.0);
    }
    CHECK(m.total_mass() == doctest::Approx(1.0));
    CHECK_THROWS_AS(limit_measure_discretization(0), std::invalid_argument);
}

TEST_CASE("percentile interpolates linearly between order statistics") {
    const std::vector<double> v{1.0, 2.0, 4.0, 8.0};
    CHECK(percentile(v, 0.0) == 1.0);
    CHECK(percentile(v, 1.0) == 8.0);
    CHECK(percentile(v, 0.5) == doctest::Approx(3.0));
    CHECK(percentile(v, 1.0 / 3.0) == doctest::Approx(2.0));
    const std::vector<double> single{5.0};
    CHECK(percentile(single, 0.9) == 5.0);
}

TEST_CASE("stream seeds separate trials and sizes") {
    CHECK(derive_stream_seed(7, 10, 3) == derive_stream_seed(7, 10, 3));
    CHECK(derive_stream_seed(7, 10, 3) != derive_stream_seed(7, 10, 4));
    CHECK(derive_stream_seed(7, 11, 3) != derive_stream_seed(7, 10, 3));
    CHECK(derive_stream_seed(8, 10, 3) != derive_stream_seed(7, 10, 3));
}

TEST_CASE("sampled measures are deterministic per seed") {
    std::mt19937_64 a(derive_stream_seed(1, 10, 0)), b(derive_stream_seed(1, 10, 0));
    const auto ma = sample_rescaled_empirical_measure(10, a);
    const auto mb = sample_rescaled_empirical_measure(10, b);
    REQUIRE(ma.size() == mb.size());
    for (std::size_t i = 0; i < ma.size(); ++i)
        CHECK(ma.atoms()[i].point == mb.atoms()[i].point);
}

TEST_CASE("experiment rows are reproducible and ordered") {
    ExperimentConfig config;
    config.n_values = {8, 4, 16};
    config.trials = 5;
    config.p = 2.0;
    config.limit_atoms = 50;
    config.seed = 123;
    const auto rows = convergence_experiment(config);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].n == 4);
    CHECK(rows[1].n == 8);
    CHECK(rows[2].n == 16);
    for (const auto& r : rows) {
        CHECK(r.median > 0.0);
        CHECK(r.p10 <= r.median);
        CHECK(r.median <= r.p90);
    }
    const auto again = convergence_experiment(config);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].median == again[i].median);
        CHECK(rows[i].p10 == again[i].p10);
        CHECK(rows[i].p90 == again[i].p90);
    }
}

TEST_CASE("config validation") {
    ExperimentConfig c;
    c.n_values = {1};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.n_values = {2};
    c.trials = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.trials = 1;
    c.limit_atoms = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.limit_atoms = 10;
    c.p = 0.5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("experiment csv embeds its configuration") {
    ExperimentConfig config;
    config.n_values = {4};
    config.trials = 2;
    config.limit_atoms = 10;
    config.seed = 9;
    const auto rows = convergence_experiment(config);
    std::ostringstream os;
    write_experiment_csv(os, config, rows);
    const std::string text = os.str();
    REQUIRE(text.rfind("# ", 0) == 0);
    const auto j = nlohmann::json::parse(text.substr(2, text.find('\n') - 2));
    CHECK(j["seed"] == 9);
    CHECK(j["trials"] == 2);
    CHECK(j["m"] == 10);
    CHECK(text.find("n,median,p10,p90\n") != std::string::npos);
}
