#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "pmot/representations.hpp"
#include "pmot/transport.hpp"
#include "oracles.hpp"

using namespace pmot;

namespace {

PersistenceMeasure merged(const PersistenceMeasure& a, const PersistenceMeasure& b) {
    std::vector<WeightedAtom> atoms(a.atoms().begin(), a.atoms().end());
    atoms.insert(atoms.end(), b.atoms().begin(), b.atoms().end());
    return PersistenceMeasure(std::move(atoms));
}

}  // namespace

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(Grid1D(1.0, 0.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(Grid1D(0.0, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(Grid2D(0, 1, 1, 0, 4, 4), std::invalid_argument);
    const Grid1D g(0.0, 1.0, 5);
    CHECK(g.node(0) == 0.0);
    CHECK(g.node(4) == 1.0);
    CHECK(g.node(2) == 0.5);
    CHECK(Grid1D(3.0, 4.0, 1).node(0) == 3.0);
}

TEST_CASE("surface of one atom is a scaled gaussian") {
    const PersistenceMeasure mu({{PlanarPoint(1.0, 2.0), 2.0}});
    const Grid2D grid(0.0, 2.0, 1.0, 3.0, 3, 3);
    const SurfaceConfig config{0.5, 2.0};
    const auto v = persistence_surface(mu, config, grid);
    REQUIRE(v.size() == 9);
    const double dd = 1.0 / std::sqrt(2.0);
    const double w = 2.0 * dd * dd;  // mass * persistence^2
    // node (1, 2) is the atom itself
    CHECK(v[1 * 3 + 1] == doctest::Approx(w));
    // node (0, 1): squared distance 2
    CHECK(v[0] == doctest::Approx(w * std::exp(-2.0 / 0.5)));
    // symmetry of the kernel around the atom
    CHECK(v[0 * 3 + 1] == doctest::Approx(v[2 * 3 + 1]));
    CHECK_THROWS_AS(persistence_surface(mu, {0.0, 1.0}, grid), std::invalid_argument);
    CHECK_THROWS_AS(persistence_surface(mu, {1.0, 0.5}, grid), std::invalid_argument);
}

TEST_CASE("silhouette is a weighted tent") {
    const PersistenceMeasure mu({{PlanarPoint(0.0, 2.0), 3.0}});
    const Grid1D grid(0.0, 2.0, 5);
    SUBCASE("p = 1 ignores persistence in the weight") {
        const auto v = silhouette(mu, 1.0, grid);
        CHECK(v[2] == doctest::Approx(3.0 * 1.0));  // peak height = half the bar
        CHECK(v[1] == doctest::Approx(3.0 * 0.5));
        CHECK(v[0] == 0.0);
        CHECK(v[4] == 0.0);
    }
    SUBCASE("p = 2 weights by diagonal distance") {
        const auto v = silhouette(mu, 2.0, grid);
        const double w = 3.0 * std::sqrt(2.0);
        CHECK(v[2] == doctest::Approx(w * 1.0));
    }
    CHECK_THROWS_AS(silhouette(mu, 0.5, grid), std::invalid_argument);
}

TEST_CASE("betti curve counts live mass inclusively") {
    const PersistenceMeasure mu({{PlanarPoint(0.0, 1.0), 2.0}, {PlanarPoint(0.5, 2.0), 1.0}});
    const Grid1D grid(0.0, 2.0, 5);  // nodes 0, .5, 1, 1.5, 2
    const auto v = betti_curve(mu, 1.0, 1.0, grid);
    CHECK(v[0] == doctest::Approx(2.0));  // only the first bar is born
    CHECK(v[1] == doctest::Approx(3.0));  // both alive at 0.5
    CHECK(v[2] == doctest::Approx(3.0));  // death endpoint counts
    CHECK(v[3] == doctest::Approx(1.0));
    CHECK(v[4] == doctest::Approx(1.0));
    CHECK_THROWS_AS(betti_curve(mu, 1.0, 0.9, grid), std::invalid_argument);
}

TEST_CASE("betti curve weight uses p and q") {
    const PersistenceMeasure mu({{PlanarPoint(0.0, 2.0), 1.0}});
    const Grid1D grid(1.0, 2.0, 3);  // node 0 sits at t = 1, inside the bar
    const double dd = std::sqrt(2.0);
    CHECK(betti_curve(mu, 2.0, 1.0, grid)[0] == doctest::Approx(dd));
    CHECK(betti_curve(mu, 3.0, 2.0, grid)[0] == doctest::Approx(std::pow(dd, 2.5)));
}

TEST_CASE("representations are linear in the measure") {
    std::mt19937_64 rng(113);
    const Grid1D g1(0.0, 12.0, 33);
    const Grid2D g2(0.0, 8.0, 0.0, 12.0, 9, 9);
    for (int it = 0; it < 20; ++it) {
        const auto a = oracle::random_measure(rng, 5, 8.0, 1);
        const auto b = oracle::random_measure(rng, 5, 8.0, 1);
        const auto ab = merged(a, b);

        const auto sa = persistence_surface(a, {0.7, 1.0}, g2);
        const auto sb = persistence_surface(b, {0.7, 1.0}, g2);
        const auto sab = persistence_surface(ab, {0.7, 1.0}, g2);
        for (std::size_t i = 0; i < sab.size(); ++i)
            CHECK(sab[i] == doctest::Approx(sa[i] + sb[i]).epsilon(1e-12));

        const auto la = silhouette(a, 2.0, g1);
        const auto lb = silhouette(b, 2.0, g1);
        const auto lab = silhouette(ab, 2.0, g1);
        for (std::size_t i = 0; i < lab.size(); ++i)
            CHECK(lab[i] == doctest::Approx(la[i] + lb[i]).epsilon(1e-12));

        const auto ba = betti_curve(a, 2.0, 1.0, g1);
        const auto bb = betti_curve(b, 2.0, 1.0, g1);
        const auto bab = betti_curve(ab, 2.0, 1.0, g1);
        for (std::size_t i = 0; i < bab.size(); ++i)
            CHECK(bab[i] == doctest::Approx(ba[i] + bb[i]).epsilon(1e-12));
    }
}

TEST_CASE("a vanishing atom fades from every representation") {
    const PersistenceMeasure base({{PlanarPoint(1.0, 3.0), 1.0}});
    const Grid1D g1(0.0, 4.0, 101);
    const Grid2D g2(0.0, 4.0, 0.0, 4.0, 41, 41);
    double prev_s = 1e300, prev_l = 1e300, prev_b = 1e300;
    for (int n = 1; n <= 10; ++n) {
        const double eps = std::pow(2.0, -n);
        const PersistenceMeasure jit(
            {{PlanarPoint(1.0, 3.0), 1.0}, {PlanarPoint(2.0, 2.0 + std::sqrt(2.0) * eps), 1.0}});
        auto sup_gap = [](std::span<const double> x, std::span<const double> y) {
            double m = 0;
            for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
            return m;
        };
        const double gs = sup_gap(persistence_surface(jit, {0.5, 2.0}, g2),
                                  persistence_surface(base, {0.5, 2.0}, g2));
        const double gl = sup_gap(silhouette(jit, 2.0, g1), silhouette(base, 2.0, g1));
        const double gb = sup_gap(betti_curve(jit, 3.0, 1.0, g1), betti_curve(base, 3.0, 1.0, g1));
        CHECK(gs <= prev_s);
        CHECK(gl <= prev_l);
        CHECK(gb <= prev_b);
        prev_s = gs;
        prev_l = gl;
        prev_b = gb;
    }
    CHECK(prev_s < 1e-4);
    CHECK(prev_l < 1e-4);
    CHECK(prev_b < 1e-4);
}

TEST_CASE("capped persistence features evaluate min(persistence distance, cap)") {
    const PersistenceMeasure mu({{PlanarPoint(0.0, 2.0), 2.0}, {PlanarPoint(0.0, 10.0), 1.0}});
    const std::vector<double> caps{1.0};
    const auto features = capped_persistence_features(caps);
    REQUIRE(features.size() == 1);
    const double dd_small = std::sqrt(2.0);
    CHECK(features[0](PlanarPoint(0.0, 2.0)) == doctest::Approx(std::min(dd_small, 1.0)));

    // the gap against the empty measure is the largest feature integral
    const PersistenceMeasure empty;
    const double gap = lipschitz_feature_gap(mu, empty, features);
    CHECK(gap == doctest::Approx(2.0 * 1.0 + 1.0 * 1.0));
}

TEST_CASE("feature gap is controlled by the transport distance") {
    std::mt19937_64 rng(127);
    std::vector<double> caps;
    for (double c = 0.25; c <= 4.0; c += 0.25) caps.push_back(c);
    const auto features = capped_persistence_features(caps);
    for (int it = 0; it < 100; ++it) {
        const auto a = oracle::random_measure(rng, 6);
        const auto b = oracle::random_measure(rng, 6);
        const double gap = lipschitz_feature_gap(a, b, features);
        CHECK(gap <= ot_distance(a, b, Exponent(1.0)) + 1e-9);
    }
}

TEST_CASE("csv writers") {
    const Grid1D g(0.0, 1.0, 3);
    std::ostringstream os;
    write_curve_csv(os, g, std::vector<double>{1.0, 2.0, 3.0});
    CHECK(os.str() == "0 1\n0.5 2\n1 3\n");
    std::ostringstream os2;
    CHECK_THROWS_AS(write_curve_csv(os2, g, std::vector<double>{1.0}), std::invalid_argument);

    const Grid2D g2(0.0, 1.0, 0.0, 1.0, 2, 2);
    std::ostringstream os3;
    write_surface_csv(os3, g2, std::vector<double>{1, 2, 3, 4});
    CHECK(os3.str() == "# surface x:[0,1] nx=2 y:[0,1] ny=2\n1,2\n3,4\n");
}
