#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "disklab/measures.hpp"
#include "disklab/sequences.hpp"

using namespace disklab;

namespace {

// Reference sweep straight from the definition: for every dyadic arc, add up
// the atoms its Carleson square contains, in atom order.  The library result
// must match this bitwise (same additions in the same order).
CarlesonReport brute_force_carleson(const DiscreteMeasure& mu, int alpha, int max_level) {
    CarlesonReport out;
    for (int level = 0; level <= max_level; ++level) {
        const double m = std::ldexp(1.0, -level);
        const double denom = alpha == 1 ? m : m * m;
        double best = 0.0;
        for (std::int64_t k = 0; k < (std::int64_t{1} << level); ++k) {
            const DyadicArc arc(level, k);
            double mass = 0.0;
            for (const Atom& a : mu.atoms())
                if (arc.square_contains(a.point)) mass += a.weight;
            if (mass > 0.0) best = std::max(best, mass / denom);
        }
        out.per_level.push_back(best);
        out.value = std::max(out.value, best);
    }
    return out;
}

DiscreteMeasure random_measure(std::mt19937& rng, int max_atoms) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> natoms(1, max_atoms);
    std::vector<Atom> atoms;
    const int n = natoms(rng);
    for (int i = 0; i < n; ++i) {
        const double r = 0.999 * std::sqrt(unit(rng));
        const double t = kTwoPi * unit(rng);
        atoms.push_back({DiskPoint(r * std::cos(t), r * std::sin(t)), 0.05 + unit(rng)});
    }
    return DiscreteMeasure(atoms);
}

}  // namespace

TEST_CASE("discrete measures merge duplicate atoms and reject bad weights") {
    const DiskPoint z(0.5, 0.0), w(0.0, 0.25);
    const DiscreteMeasure mu({{z, 0.25}, {w, 1.0}, {z, 0.5}});
    REQUIRE(mu.size() == 2);
    CHECK(mu.atoms()[0].point == z);
    CHECK(mu.atoms()[0].weight == 0.75);
    CHECK(mu.atoms()[1].point == w);
    CHECK(mu.total_mass() == 1.75);

    CHECK_THROWS_AS(DiscreteMeasure({{z, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteMeasure({{z, -1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteMeasure({{z, std::nan("")}}), std::invalid_argument);

    const DiscreteMeasure head = mu.prefix(1);
    CHECK(head.size() == 1);
    CHECK(head.total_mass() == 0.75);
    CHECK_THROWS_AS(mu.prefix(3), std::invalid_argument);
}

TEST_CASE("canonical measure builders") {
    const std::vector<DiskPoint> pts{DiskPoint(0.5, 0.0), DiskPoint(0.0, -0.75)};
    SECTION("boundary-distance weights") {
        const DiscreteMeasure mu = build_mu_Z(pts);
        CHECK(mu.atoms()[0].weight == 0.5);
        CHECK(mu.atoms()[1].weight == 0.25);
        const DiscreteMeasure nu = build_nu_Z(pts);
        CHECK(nu.atoms()[0].weight == 0.25);
        CHECK(nu.atoms()[1].weight == 0.0625);
    }
    SECTION("duplicate points are rejected, not merged") {
        const std::vector<DiskPoint> dup{pts[0], pts[1], pts[0]};
        CHECK_THROWS_AS(build_mu_Z(dup), std::invalid_argument);
        CHECK_THROWS_AS(build_nu_Z(dup), std::invalid_argument);
    }
    SECTION("area grid carries unit mass spread over equal cells") {
        const GridMeasure sigma = build_sigma_grid(64, 32);
        CHECK(sigma.total_mass() == 1.0);
        CHECK(std::abs(sigma.cell_weight() * 64 * 32 - 1.0) <= 1e-9);
        CHECK(std::string(GridMeasure::kind) == "continuous-approximation");
        CHECK_THROWS_AS(build_sigma_grid(4, 64), std::invalid_argument);
        CHECK_THROWS_AS(GridMeasure(64, 64, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(GridMeasure(64, 64, -2.0), std::invalid_argument);
    }
    SECTION("grid cell geometry") {
        const GridMeasure g(16, 16, 1.0);
        const DiskPoint c = g.cell_center(0, 0);
        CHECK(c.abs() == Catch::Approx(std::sqrt(0.5 / 16.0)));
        CHECK(c.angle() == Catch::Approx(kPi / 16.0));
        CHECK(g.u_edge(0) == 0.0);
        CHECK(g.u_edge(16) == 1.0);
    }
}

TEST_CASE("dyadic arcs and their Carleson squares") {
    CHECK(DyadicArc(0, 0).length() == 1.0);
    CHECK(DyadicArc(3, 5).length() == 0.125);
    CHECK(DyadicArc(3, 5).theta_lo() == Catch::Approx(kTwoPi * 5.0 / 8.0));
    CHECK_THROWS_AS(DyadicArc(2, 4), std::invalid_argument);
    CHECK_THROWS_AS(DyadicArc(2, -1), std::invalid_argument);
    CHECK_THROWS_AS(DyadicArc(-1, 0), std::invalid_argument);

    // The level-0 square is the whole disk; the origin projects to angle 0.
    CHECK(DyadicArc(0, 0).square_contains(DiskPoint(0.0, 0.0)));
    CHECK(DyadicArc(1, 0).square_contains(DiskPoint(0.6, 0.0)));
    CHECK_FALSE(DyadicArc(1, 1).square_contains(DiskPoint(0.6, 0.0)));
    CHECK(DyadicArc(1, 1).square_contains(DiskPoint(-0.6, 0.0)));
    // Ties on the radial cut count as inside.
    CHECK(DyadicArc(1, 0).square_contains(DiskPoint(0.5, 0.0)));
    CHECK_FALSE(DyadicArc(1, 0).square_contains(DiskPoint(0.49, 0.0)));
}

TEST_CASE("Carleson sweep of discrete measures") {
    SECTION("matches the arc-by-arc reference exactly") {
        std::mt19937 rng(201);
        for (int trial = 0; trial < 30; ++trial) {
            const DiscreteMeasure mu = random_measure(rng, 8);
            for (int alpha : {1, 2}) {
                const CarlesonReport fast = carleson_constant(mu, alpha, 6);
                const CarlesonReport slow = brute_force_carleson(mu, alpha, 6);
                REQUIRE(fast.per_level.size() == slow.per_level.size());
                for (std::size_t l = 0; l < slow.per_level.size(); ++l)
                    CHECK(fast.per_level[l] == slow.per_level[l]);
                CHECK(fast.value == slow.value);
            }
        }
    }
    SECTION("boundary-tie atoms agree with the reference too") {
        // Atoms parked exactly on radial cuts and on the angle-pi arc seam.
        const DiscreteMeasure mu({{DiskPoint(0.5, 0.0), 0.25},
                                  {DiskPoint(-0.75, 0.0), 0.5},
                                  {DiskPoint(0.0, 0.875), 0.125}});
        for (int alpha : {1, 2}) {
            const CarlesonReport fast = carleson_constant(mu, alpha, 5);
            const CarlesonReport slow = brute_force_carleson(mu, alpha, 5);
            for (std::size_t l = 0; l < slow.per_level.size(); ++l)
                CHECK(fast.per_level[l] == slow.per_level[l]);
        }
    }
    SECTION("frozen values for the radial-5 canonical measure") {
        const DiscreteMeasure mu = build_mu_Z(gen_radial(0.5, 5).points());
        const CarlesonReport r = carleson_constant(mu, 1, 4);
        const std::vector<double> expected{0.96875, 1.9375, 1.875, 1.75, 1.5};
        REQUIRE(r.per_level.size() == 5);
        for (std::size_t l = 0; l < expected.size(); ++l) CHECK(r.per_level[l] == expected[l]);
        CHECK(r.value == 1.9375);
    }
    SECTION("single atom at the origin only sees the level-0 square") {
        const DiscreteMeasure mu({{DiskPoint(0.0, 0.0), 0.6}});
        const CarlesonReport r = carleson_constant(mu, 1, 5);
        CHECK(r.per_level[0] == 0.6);
        for (std::size_t l = 1; l < r.per_level.size(); ++l) CHECK(r.per_level[l] == 0.0);
        CHECK(r.value == 0.6);
    }
    SECTION("value never decreases when the sweep deepens") {
        std::mt19937 rng(202);
        for (int trial = 0; trial < 10; ++trial) {
            const DiscreteMeasure mu = random_measure(rng, 6);
            double prev = 0.0;
            for (int lmax = 0; lmax <= 8; ++lmax) {
                const double v = carleson_constant(mu, 1, lmax).value;
                CHECK(v >= prev);
                prev = v;
            }
        }
    }
    SECTION("homogeneous in the measure") {
        std::mt19937 rng(203);
        const DiscreteMeasure mu = random_measure(rng, 8);
        const CarlesonReport base = carleson_constant(mu, 2, 6);
        const CarlesonReport twice = carleson_constant(scale_weights(mu, 2.0), 2, 6);
        for (std::size_t l = 0; l < base.per_level.size(); ++l)
            CHECK(twice.per_level[l] == 2.0 * base.per_level[l]);
        const CarlesonReport thrice = carleson_constant(scale_weights(mu, 3.0), 2, 6);
        for (std::size_t l = 0; l < base.per_level.size(); ++l) {
            if (base.per_level[l] == 0.0)
                CHECK(thrice.per_level[l] == 0.0);
            else
                CHECK(thrice.per_level[l] == Catch::Approx(3.0 * base.per_level[l]).epsilon(1e-14));
        }
    }
    SECTION("argument validation") {
        const DiscreteMeasure mu({{DiskPoint(0.0, 0.0), 1.0}});
        CHECK_THROWS_AS(carleson_constant(mu, 3, 4), std::invalid_argument);
        CHECK_THROWS_AS(carleson_constant(mu, 1, -1), std::invalid_argument);
    }
}

TEST_CASE("Carleson sweep of grid measures") {
    const GridMeasure sigma = build_sigma_grid(256, 256);
    SECTION("normalized area at alpha = 2: ratio 2 - m(I) at every level") {
        const CarlesonReport r = carleson_constant(Measure(sigma), 2, 10);
        REQUIRE(r.per_level.size() == 11);
        for (int l = 0; l <= 10; ++l)
            CHECK(r.per_level[l] == 2.0 - std::ldexp(1.0, -l));
        CHECK(r.value == 2.0 - std::ldexp(1.0, -10));
    }
    SECTION("normalized area at alpha = 1 peaks on the whole disk") {
        const CarlesonReport r = carleson_constant(Measure(sigma), 1, 8);
        CHECK(r.per_level[0] == 1.0);
        CHECK(r.value == 1.0);
        for (std::size_t l = 1; l < r.per_level.size(); ++l)
            CHECK(r.per_level[l] < r.per_level[l - 1]);
    }
    SECTION("rotation leaves the grid sweep untouched") {
        const CarlesonReport a = carleson_constant(sigma, 2, 8);
        const CarlesonReport b = carleson_constant(rotate(sigma, 1.234), 2, 8);
        for (std::size_t l = 0; l < a.per_level.size(); ++l)
            CHECK(a.per_level[l] == b.per_level[l]);
    }
    SECTION("resolution does not change the exact cell-overlap masses") {
        const CarlesonReport coarse = carleson_constant(build_sigma_grid(32, 32), 2, 6);
        const CarlesonReport fine = carleson_constant(build_sigma_grid(512, 512), 2, 6);
        for (std::size_t l = 0; l < coarse.per_level.size(); ++l)
            CHECK(coarse.per_level[l] == fine.per_level[l]);
    }
}

TEST_CASE("Blaschke sums and weight equivalence") {
    SECTION("geometric radial sequence sums to 1 - 2^-N") {
        const DiscreteMeasure mu = build_mu_Z(gen_radial(0.5, 8).points());
        CHECK(blaschke_sum(mu) == 1.0 - std::ldexp(1.0, -8));
    }
    SECTION("atom at the origin contributes exactly 1") {
        CHECK(blaschke_sum(DiscreteMeasure({{DiskPoint(0.0, 0.0), 7.0}})) == 1.0);
        CHECK(blaschke_sum(DiscreteMeasure()) == 0.0);
    }
    SECTION("sub-measures contribute no more than the whole") {
        std::mt19937 rng(204);
        const DiscreteMeasure mu = random_measure(rng, 8);
        for (std::size_t n = 0; n <= mu.size(); ++n)
            CHECK(blaschke_sum(mu.prefix(n)) <= blaschke_sum(mu) + 1e-15);
    }
    SECTION("canonical weights have unit equivalence ratio") {
        const DiscreteMeasure mu = build_mu_Z(gen_radial(0.5, 10).points());
        const WeightEquivalence we = weight_equivalence_ratio(mu, 1);
        CHECK(we.lo == 1.0);
        CHECK(we.hi == 1.0);
        const WeightEquivalence scaled = weight_equivalence_ratio(scale_weights(mu, 3.0), 1);
        CHECK(scaled.lo == 3.0);
        CHECK(scaled.hi == 3.0);
        CHECK(scaled.ratio() == 1.0);
    }
    SECTION("unit weights against alpha = 1 distances") {
        const DiscreteMeasure mu({{DiskPoint(0.5, 0.0), 1.0}, {DiskPoint(0.75, 0.0), 1.0}});
        const WeightEquivalence we = weight_equivalence_ratio(mu, 1);
        CHECK(we.lo == 2.0);
        CHECK(we.hi == 4.0);
        CHECK(we.ratio() == 2.0);
    }
    SECTION("validation") {
        CHECK_THROWS_AS(weight_equivalence_ratio(DiscreteMeasure(), 1), std::invalid_argument);
        const DiscreteMeasure mu({{DiskPoint(0.0, 0.0), 1.0}});
        CHECK_THROWS_AS(weight_equivalence_ratio(mu, 3), std::invalid_argument);
    }
}

TEST_CASE("measure transforms") {
    std::mt19937 rng(205);
    const DiscreteMeasure mu = random_measure(rng, 6);
    SECTION("rotation preserves weights and radii") {
        const DiscreteMeasure rot = rotate(mu, 0.9);
        REQUIRE(rot.size() == mu.size());
        for (std::size_t i = 0; i < mu.size(); ++i) {
            CHECK(rot.atoms()[i].weight == mu.atoms()[i].weight);
            CHECK(rot.atoms()[i].point.abs() ==
                  Catch::Approx(mu.atoms()[i].point.abs()).epsilon(1e-14));
        }
    }
    SECTION("weight scaling validates its factor") {
        CHECK_THROWS_AS(scale_weights(mu, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(scale_weights(mu, -2.0), std::invalid_argument);
        CHECK(scale_weights(Measure(mu), 2.0).index() == 0);
    }
    SECTION("variant helpers") {
        CHECK(is_discrete(Measure(mu)));
        CHECK_FALSE(is_discrete(Measure(build_sigma_grid(16, 16))));
        CHECK(total_mass(Measure(build_sigma_grid(16, 16))) == 1.0);
        const GridMeasure g = rotate(build_sigma_grid(16, 16), 2.0);
        CHECK(g.theta_offset() == 2.0);
    }
}
