#include "doctest.h"

#include <cmath>
#include <random>

#include "tubegeo/circle.hpp"

using namespace tubegeo;

TEST_CASE("mobius basics") {
    CHECK((mobius(0.0, cplx(0.3, 0.4)) == cplx(0.3, 0.4)));
    CHECK(std::abs(mobius(0.5, cplx(0.5, 0.0))) == 0.0);
    CHECK(mobius(0.5, cplx(-0.5, 0.0)).real() == doctest::Approx(-0.8).epsilon(1e-15));
    CHECK_THROWS_AS(mobius(cplx(1.0, 0.0), cplx(0.0, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(mobius(cplx(0.8, 0.8), cplx(0.0, 0.0)), std::invalid_argument);
}

TEST_CASE("mobius inverse on a disc grid") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    cplx c(0.31, -0.12);
    for (int i = 0; i < 100; ++i) {
        cplx lam(u(rng), u(rng));
        if (std::abs(lam) >= 1.0) continue;
        cplx back = mobius(-c, mobius(c, lam));
        CHECK(std::abs(back - lam) < 1e-14);
    }
}

TEST_CASE("poincare distance") {
    CHECK(poincare_distance(0.0, 0.0) == 0.0);
    CHECK(poincare_distance(0.0, 0.5) == doctest::Approx(0.5493061443340549).epsilon(1e-14));
    CHECK_THROWS_AS(poincare_distance(cplx(1.0, 0.0), 0.0), std::invalid_argument);

    // Mobius maps are isometries
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    for (int i = 0; i < 50; ++i) {
        cplx c(u(rng), u(rng)), s(u(rng), u(rng)), t(u(rng), u(rng));
        double before = poincare_distance(s, t);
        double after = poincare_distance(mobius(c, s), mobius(c, t));
        CHECK(before == doctest::Approx(after).epsilon(1e-12));
    }
}

TEST_CASE("strip map tau: forced values and branch") {
    CHECK((strip_map_tau(0.0) == cplx(0.5, 0.0)));
    CHECK(std::abs(strip_map_tau(cplx(0.0, 1.0)) - 1.0) < 1e-14);
    CHECK(std::abs(strip_map_tau(cplx(0.0, -1.0))) < 1e-14);
    CHECK_THROWS_AS(strip_map_tau(cplx(1.0, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(strip_map_tau(cplx(-1.0, 0.0)), std::invalid_argument);
}

TEST_CASE("strip map tau: interior points stay strictly inside the strip") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        double r = 0.98 * std::sqrt(u(rng));
        double t = two_pi * u(rng);
        cplx w = strip_map_tau(std::polar(r, t));
        CHECK(w.real() > 0.0);
        CHECK(w.real() < 1.0);
    }
    // circle points (minus +-1) land on the boundary lines
    CHECK(strip_map_tau(std::polar(1.0, 0.7)).real() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(strip_map_tau(std::polar(1.0, -0.7)).real() == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("tau derivative matches finite differences") {
    cplx h(1e-6, 0.0);
    for (cplx lam : {cplx(0.3, 0.2), cplx(-0.5, 0.1), cplx(0.0, -0.6)}) {
        cplx fd = (strip_map_tau(lam + h) - strip_map_tau(lam - h)) / (2.0 * h);
        CHECK(std::abs(fd - strip_map_tau_deriv(lam)) < 1e-8);
    }
}

TEST_CASE("arc membership is periodic") {
    Arc a(5.8, 1.2);  // wraps through 0
    CHECK(a.contains(0.1));
    CHECK(a.contains(6.0));
    CHECK(a.contains(0.1 + two_pi));
    CHECK(a.contains(0.1 - two_pi));
    CHECK(!a.contains(3.0));
    CHECK(Arc::full().contains(2.0));
    CHECK(!Arc::empty().contains(2.0));
}

TEST_CASE("arcset algebra") {
    ArcSet a(Arc(0.0, 1.0));
    ArcSet b(Arc(0.5, 1.0));
    CHECK(a.set_union(b).measure() == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(a.set_intersection(b).measure() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(a.complement().measure() == doctest::Approx(two_pi - 1.0).epsilon(1e-12));
    CHECK(a.set_difference(b).measure() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ArcSet::full().complement().is_empty());
    CHECK(ArcSet::empty().complement().is_full());

    // adjacent arcs merge
    ArcSet c = ArcSet(Arc(0.0, 1.0)).set_union(ArcSet(Arc(1.0, 1.0)));
    CHECK(c.arcs().size() == 1);
    CHECK(c.measure() == doctest::Approx(2.0).epsilon(1e-12));

    // tiling the circle collapses to the full set
    ArcSet d = ArcSet(Arc(0.0, 4.0)).set_union(ArcSet(Arc(4.0, two_pi - 4.0)));
    CHECK(d.is_full());
}

TEST_CASE("arcset inclusion-exclusion property") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int iter = 0; iter < 200; ++iter) {
        auto random_set = [&]() {
            std::vector<Arc> arcs;
            int k = 1 + static_cast<int>(u(rng) * 3);
            for (int i = 0; i < k; ++i)
                arcs.emplace_back(u(rng) * two_pi, u(rng) * 2.0);
            return ArcSet(arcs);
        };
        ArcSet a = random_set(), b = random_set();
        double lhs = a.set_union(b).measure() + a.set_intersection(b).measure();
        double rhs = a.measure() + b.measure();
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}
