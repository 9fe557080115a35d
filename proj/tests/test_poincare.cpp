#include <doctest.h>

#include <random>
#include <sstream>

#include "reset_lab/errors.hpp"
#include "reset_lab/hybrid_sim.hpp"
#include "reset_lab/poincare.hpp"
#include "support.hpp"

using namespace reset_lab;
using namespace reset_lab::poincare;
using testsupport::kPi;

namespace {

const double kSqrt19 = std::sqrt(19.0);

Vec unit(double theta) { return Parameterization::circle().point(theta); }

// Discontinuity of the tau_m = const branch of the 1-D map.
double discontinuity(double tau_m, double branch) {
    return branch + std::atan(0.5 * (1.0 - kSqrt19 / std::tan(kSqrt19 / 2.0 * tau_m)));
}

}  // namespace

TEST_CASE("reset intervals of the Horowitz loop") {
    const PoincareMap pm025(testsupport::horowitz(), 0.25);
    CHECK(interval_map(pm025, unit(kPi / 2)) == doctest::Approx(2 * kPi / kSqrt19).epsilon(1e-10));
    const PoincareMap pm135(testsupport::horowitz(), 1.35);
    CHECK(interval_map(pm135, unit(0.5322323585908855)) == 1.35);
    CHECK(interval_map(pm135, unit(1.424616601167445)) == 1.35);
    CHECK(interval_map(pm135, unit(kPi / 2)) == doctest::Approx(2 * kPi / kSqrt19).epsilon(1e-10));
}

TEST_CASE("default cap and validation") {
    const auto sys = testsupport::horowitz();
    CHECK(PoincareMap::default_cap(sys, 0.25) == doctest::Approx(10 * (0.25 + 4 * kPi / kSqrt19)));
    CHECK_THROWS_AS(PoincareMap(sys, 0.0), ArgumentError);
    CHECK_THROWS_AS(PoincareMap(sys, 1.0, 0.5), ArgumentError);
    const PoincareMap pm(sys, 0.25);
    CHECK_THROWS_AS((void)interval_map(pm, Vec::Zero(2)), ArgumentError);
    CHECK_THROWS_AS((void)interval_map(pm, Vec::Ones(3)), DimensionError);
}

TEST_CASE("a cap that is too short gives NotFound and says whether A is Hurwitz") {
    const PoincareMap pm(testsupport::classical_fore(), 0.1, 0.2);
    Vec z(2);
    z << 0.0, 1.0;  // -x_p starts negative and needs time to turn
    CHECK_THROWS_WITH_AS((void)interval_map(pm, z), doctest::Contains("Hurwitz"), NotFoundError);
}

TEST_CASE("homogeneity of I and g") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    const PoincareMap pm(testsupport::horowitz(), 0.25);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec z = testsupport::random_vector(rng, 2);
        const double lam = scale(rng);
        CHECK(interval_map(pm, lam * z) == interval_map(pm, z));
        CHECK((g_map(pm, lam * z) - lam * g_map(pm, z)).norm() <= 1e-9 * lam * z.norm());
    }
}

TEST_CASE("pi/2 is a fixed direction for tau_m = 0.25") {
    const PoincareMap pm(testsupport::horowitz(), 0.25);
    const Vec g = g_map(pm, unit(kPi / 2));
    CHECK(std::abs(g(0)) < 1e-6);
    CHECK(g(1) == doctest::Approx(0.1891).epsilon(1e-3));
    CHECK(angle_map_1d(pm, Parameterization::circle(), kPi / 2) == doctest::Approx(kPi / 2).epsilon(1e-10));
    const auto o = orbit(pm, Parameterization::circle(), -2.5, 50);
    CHECK(o.size() == 51);
    CHECK(std::abs(o.back() - kPi / 2) < 1e-6);
    CHECK(orbit(pm, Parameterization::circle(), 0.3, 0) == std::vector<double>{0.3});
}

TEST_CASE("angle map outputs unit vectors") {
    std::mt19937_64 rng(9);
    const PoincareMap pm(testsupport::horowitz(), 1.35);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = angle_map(pm, SpherePoint(testsupport::random_vector(rng, 2)));
        CHECK(std::abs(s.vec().norm() - 1.0) <= 1e-9);
    }
}

TEST_CASE("the 1-D map jumps at the predicted discontinuity") {
    for (const auto& [tau_m, branch] : {std::pair{0.25, kPi}, std::pair{1.35, -kPi}}) {
        const PoincareMap pm(testsupport::horowitz(), tau_m);
        const double d = discontinuity(tau_m, branch);
        // C e^{A tau_m} J s(d) = 0: the direction where I(s) stops being tau_m.
        const RowVec row = pm.system().c() * numerics::expm(pm.system().a(), tau_m) * pm.system().j();
        CHECK(std::abs(row.dot(unit(d))) < 1e-12);
        const auto circle = Parameterization::circle();
        const double left = angle_map_1d(pm, circle, d - 1e-6);
        const double right = angle_map_1d(pm, circle, d + 1e-6);
        CHECK(circle.distance(left, right) > 0.1);
    }
}

TEST_CASE("the chaos loop keeps the invariant segment") {
    const PoincareMap pm(testsupport::chaos(), 0.1);
    const auto seg = Parameterization::segment(-3.0, 4.0, 3);
    double largest_jump = 0.0;
    double prev = angle_map_1d(pm, seg, -3.0);
    for (int i = 1; i <= 700; ++i) {
        const double u = -3.0 + 7.0 * i / 700;
        const Vec s = angle_map(pm, SpherePoint(seg.point(u))).vec();
        CHECK(std::abs(s(2)) < 1e-8);
        const double img = seg.parameter(s);
        CHECK(img >= -3.0);
        CHECK(img <= 4.0);
        largest_jump = std::max(largest_jump, std::abs(img - prev));
        prev = img;
    }
    CHECK(largest_jump < 0.5);  // continuous on [-3, 4]
}

TEST_CASE("parameterizations") {
    const auto circle = Parameterization::circle();
    CHECK(circle.parameter(circle.point(3.0)) == doctest::Approx(3.0));
    CHECK(circle.distance(-3.1, 3.1) == doctest::Approx(2 * kPi - 6.2));
    const auto seg = Parameterization::segment(-3.0, 4.0, 3);
    CHECK(seg.parameter(seg.point(2.5)) == doctest::Approx(2.5));
    CHECK(seg.point(0.0).norm() == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)seg.parameter((Vec(3) << 0.0, 1.0, 0.1).finished()), DegenerateError);
    CHECK_THROWS_AS((void)seg.parameter(seg.point(5.0)), DegenerateError);
    CHECK_THROWS_AS((void)Parameterization::segment(1.0, 0.0, 3), ArgumentError);
    CHECK_THROWS_AS(SpherePoint(Vec::Zero(2)), DegenerateError);
}

TEST_CASE("simulator and Poincare map agree on the first reset") {
    std::mt19937_64 rng(21);
    for (const auto& sys : {testsupport::horowitz(), testsupport::classical_fore()}) {
        const double tau_m = 0.3;
        const PoincareMap pm(sys, tau_m);
        for (int trial = 0; trial < 20; ++trial) {
            const Vec z = testsupport::random_vector(rng, 2).normalized();
            const double tau = interval_map(pm, z);
            sim::SimOptions so;
            so.sample_step = pm.scan_step();
            const auto sol = sim::simulate(sys, {sys.j() * z, 1, 0.0}, sim::TimerPolicy(tau_m), tau + 0.5, so);
            REQUIRE_FALSE(sol.jumps.empty());
            CHECK(sol.jumps.front().tau_before == doctest::Approx(tau).epsilon(1e-6));
            const Vec after = -(sys.j().transpose() * sol.jumps.front().x_after);
            CHECK((after - g_map(pm, z)).norm() <= 1e-6);
        }
    }
}

TEST_CASE("map graph CSV") {
    const PoincareMap pm(testsupport::horowitz(), 0.25);
    const auto rows = map_graph(pm, Parameterization::circle(), 101);
    REQUIRE(rows.size() == 101);
    CHECK(rows.front().u == doctest::Approx(-kPi));
    CHECK(rows.back().u == doctest::Approx(kPi));
    std::ostringstream os;
    write_map_graph_csv(os, rows);
    CHECK(os.str().rfind("u,image,interval,status\n", 0) == 0);
    const PoincareMap tight(testsupport::classical_fore(), 0.1, 0.2);
    const auto missing = map_graph(tight, Parameterization::circle(), 50);
    CHECK(std::any_of(missing.begin(), missing.end(), [](const auto& r) { return r.status == "not_found"; }));
}
