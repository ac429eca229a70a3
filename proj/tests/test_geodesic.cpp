#include "doctest.h"

#include <cmath>
#include <random>

#include "support.hpp"
#include "tubegeo/geodesic.hpp"

using namespace tubegeo;
using tubegeo::testing::canonical_domain;
using tubegeo::testing::canonical_spec;
using tubegeo::testing::random_staircase_spec;

TEST_CASE("half-plane geodesic closed form") {
    CHECK((eval_halfplane_geodesic(-two_pi, 1.0, 0.0, 0.0) == cplx(-1.0, 0.0)));
    cplx v = eval_halfplane_geodesic(-two_pi, 1.0, 0.0, cplx(1.0 / 3.0, 0.0));
    CHECK(v.real() == doctest::Approx(-2.0).epsilon(1e-14));
    cplx w = eval_halfplane_geodesic(-two_pi, 1.0, 5.0, 0.0);
    CHECK((w == cplx(-1.0, 5.0)));
    CHECK_THROWS_AS(eval_halfplane_geodesic(1.0, 1.0, 0.0, 0.0), std::invalid_argument);

    // image stays in the open left half-plane
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        double alpha = -(0.1 + 5.0 * u(rng));
        cplx lam = std::polar(0.98 * std::sqrt(u(rng)), two_pi * u(rng));
        cplx z = eval_halfplane_geodesic(alpha, std::polar(1.0, two_pi * u(rng)), u(rng), lam);
        CHECK(z.real() < 0.0);
    }
}

TEST_CASE("phi_h: strip geodesic closed form") {
    CHECK(eval_phi_h(0.5, 0.0, 0.0).real() == doctest::Approx(0.5));
    CHECK(std::abs(eval_phi_h(0.5, 0.0, 0.0).imag()) < 1e-15);
    CHECK_THROWS_AS(eval_phi_h(0.5, 1.0, 0.0), std::invalid_argument);  // |b| = 2|a|
    CHECK(phi_h_offset(0.5, 0.0) == 0.0);

    // radial boundary dichotomy: Re -> 1 inside the positivity arc,
    // Re -> 0 outside (sampled away from the endpoints)
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        cplx a = std::polar(0.4 + u(rng), two_pi * u(rng));
        double b = (2.0 * u(rng) - 1.0) * 1.8 * std::abs(a);
        ArcSet arc = positivity_arc(a, b);
        REQUIRE(arc.arcs().size() == 1);
        const Arc& c = arc.arcs()[0];
        double r = 1.0 - 1e-6;
        for (double f : {0.1, 0.5, 0.9}) {
            double t_in = c.start + std::max(0.05, 0.05 * c.length) +
                          f * (c.length - 2.0 * std::max(0.05, 0.05 * c.length));
            if (c.length < 0.2) break;
            double re_in = eval_phi_h(a, b, std::polar(r, t_in)).real();
            CHECK(re_in > 0.99);
            CHECK(re_in <= 1.0 + 1e-12);
        }
        double gap = two_pi - c.length;
        if (gap > 0.2) {
            double t_out = c.end() + 0.5 * gap;
            double re_out = eval_phi_h(a, b, std::polar(r, t_out)).real();
            CHECK(re_out < 0.01);
            CHECK(re_out >= -1e-12);
        }
    }
}

TEST_CASE("phi_h equals the Herglotz transform of its indicator measure") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        cplx a = std::polar(0.3 + u(rng), two_pi * u(rng));
        double b = (2.0 * u(rng) - 1.0) * 1.9 * std::abs(a);
        CircleMeasure mu(1);
        for (const Arc& arc : positivity_arc(a, b).arcs()) mu.add_piece(arc, {1.0});
        for (int k = 0; k < 20; ++k) {
            cplx lam = std::polar(0.93 * std::sqrt(u(rng)), two_pi * u(rng));
            cplx lhs = eval_phi_h(a, b, lam);
            cplx rhs = herglotz_transform(mu, lam, {0.0})[0];
            CHECK(std::abs(lhs - rhs) < 1e-9);
        }
    }
}

TEST_CASE("phi_h derivative matches finite differences") {
    cplx a(0.4, -0.6);
    double b = 0.3;
    cplx h(1e-6, 0.0);
    for (cplx lam : {cplx(0.2, 0.1), cplx(-0.5, -0.3)}) {
        cplx fd = (eval_phi_h(a, b, lam + h) - eval_phi_h(a, b, lam - h)) / (2.0 * h);
        CHECK(std::abs(fd - eval_phi_h_deriv(a, b, lam)) < 1e-8);
    }
}

TEST_CASE("klis arcs on the canonical instance") {
    KlisArcs arcs = klis_arcs(canonical_domain(), canonical_spec().h);
    REQUIRE(!arcs.degenerate_facet);
    REQUIRE(arcs.C.size() == 3);
    CHECK(arcs.C[0].is_full());
    CHECK(arcs.C[1].measure() == doctest::Approx(M_PI).epsilon(1e-12));
    CHECK(arcs.C[1].contains(M_PI));
    CHECK(!arcs.C[1].contains(0.0));
    CHECK(arcs.C[2].is_empty());

    CHECK(arcs.A[1].set_difference(arcs.C[1]).measure() < 1e-12);
    CHECK(arcs.C[1].set_difference(arcs.A[1]).measure() < 1e-12);
    CHECK(arcs.A[0].set_difference(arcs.C[1].complement()).measure() < 1e-12);

    // B holds the zeros of the three combined symbols
    REQUIRE(arcs.B.size() == 4);
    CHECK(arcs.B[0] == doctest::Approx(0.0));
    CHECK(arcs.B[1] == doctest::Approx(M_PI / 2.0));
    CHECK(arcs.B[2] == doctest::Approx(M_PI));
    CHECK(arcs.B[3] == doctest::Approx(3.0 * M_PI / 2.0));
}

TEST_CASE("klis arcs: identically-zero combination flags case (i)") {
    QuadCertificate h({{cplx(0.5, 0.0), 1.0}, {cplx(0.5, 0.0), 1.0}});
    KlisArcs arcs = klis_arcs(canonical_domain(), h);
    REQUIRE(arcs.degenerate_facet.has_value());
    CHECK(*arcs.degenerate_facet == 2);
}

TEST_CASE("klis k1 k2") {
    auto [k1, k2] = klis_k1k2({two_pi, M_PI, 0.0});
    CHECK(k1 == 1);
    CHECK(k2 == 3);

    auto [k1b, k2b] = klis_k1k2({two_pi, 0.0});
    CHECK(k1b == 1);
    CHECK(k2b == 2);

    auto [k1c, k2c] = klis_k1k2({two_pi, two_pi, 1.0, 0.5, 0.0});
    CHECK(k1c == 2);
    CHECK(k2c == 5);

    CHECK_THROWS_AS(klis_k1k2({two_pi, 1.0, 2.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(klis_k1k2({M_PI, 0.0}), std::invalid_argument);
}

TEST_CASE("canonical staircase geodesic values") {
    StaircaseDomain d = canonical_domain();
    StaircaseIISpec s = canonical_spec();

    auto z0 = eval_staircase_geodesic(s, d, 0.0);
    CHECK(std::abs(z0[0] - cplx(-1.5, 0.0)) < 1e-15);
    CHECK(std::abs(z0[1] - cplx(-1.5, 0.0)) < 1e-15);

    auto z = eval_staircase_geodesic(s, d, 0.5);
    CHECK(domain_contains(TubeDomain(d), {z[0], z[1]}));

    // the atom-free variant degenerates onto the slanted face and must be
    // rejected by the admissibility check
    StaircaseIISpec flat = s;
    flat.alpha = {0.0, 0.0};
    CHECK_THROWS_AS(prepare_staircase(flat, d), std::invalid_argument);
}

TEST_CASE("staircase spec validation") {
    StaircaseDomain d = canonical_domain();
    StaircaseIISpec s = canonical_spec();

    StaircaseIISpec bad_sign = s;
    bad_sign.h = QuadCertificate({{cplx(1.0, 0.0), 0.0}, {cplx(-0.5, 0.0), 1.0}});
    CHECK_THROWS_AS(prepare_staircase(bad_sign, d), std::invalid_argument);

    StaircaseIISpec misplaced = s;
    misplaced.lambda_angle[0] = M_PI + 0.1;
    CHECK_THROWS_AS(prepare_staircase(misplaced, d), std::invalid_argument);

    StaircaseIISpec no_root = s;
    no_root.h = QuadCertificate({{cplx(0.5, 0.0), 1.5}, {cplx(-0.5, 0.0), 1.0}});
    // alpha_1 < 0 needs a symbol zero, but b > 2|a| makes it strictly positive
    CHECK_THROWS_AS(prepare_staircase(no_root, d), std::invalid_argument);
}

TEST_CASE("staircase geodesic derivative matches finite differences") {
    PreparedStaircase prep = prepare_staircase(canonical_spec(), canonical_domain());
    cplx h(1e-6, 0.0);
    for (cplx lam : {cplx(0.2, 0.3), cplx(-0.4, -0.1)}) {
        auto d = prep.deriv(lam);
        auto plus = prep.value(lam + h);
        auto minus = prep.value(lam - h);
        for (int l = 0; l < 2; ++l)
            CHECK(std::abs((plus[l] - minus[l]) / (2.0 * h) - d[l]) < 1e-7);
    }
}

TEST_CASE("canonical boundary measure") {
    StaircaseDomain d = canonical_domain();
    TubeDomain dom = d;
    CircleMeasure mu = boundary_measure_of(canonical_spec(), dom);

    CircleMeasure expected(2);
    expected.add_piece(Arc::full(), {0.0, -1.0});
    expected.add_piece(Arc(M_PI / 2.0, M_PI), {-1.0, 1.0});
    expected.add_atom(M_PI, {-two_pi, 0.0});
    expected.add_atom(0.0, {0.0, -two_pi});
    CHECK(measures_equal(mu, expected, 1e-12));
}

TEST_CASE("Poisson identity: the measure reproduces the map (all families)") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    StaircaseDomain sd = canonical_domain();
    TubeDomain staircase = sd;

    auto check_consistency = [&](const GeodesicSpec& spec, const TubeDomain& dom) {
        GeodesicMap map = make_map(spec, dom);
        CircleMeasure mu = boundary_measure_of(spec, dom);
        std::vector<double> offset = im_offset_of(spec, dom);
        for (int i = 0; i < 200; ++i) {
            cplx lam = std::polar(0.95 * std::sqrt(u(rng)), two_pi * u(rng));
            auto direct = map.value(lam);
            auto recon = herglotz_transform(mu, lam, offset);
            for (int l = 0; l < map.n; ++l) CHECK(std::abs(direct[l] - recon[l]) < 1e-9);
        }
    };

    check_consistency(canonical_spec(), staircase);

    for (int i = 0; i < 5; ++i)
        check_consistency(random_staircase_spec(rng), staircase);

    HalfPlaneAtomSpec hp;
    hp.n = 2;
    hp.coordinate = 0;
    hp.atom = {-3.0, 1.2, 0.7};
    hp.free = {FreeComponent{FreeComponent::Kind::atom, cplx(0, 0), {-1.5, 4.0, -0.2}}};
    check_consistency(hp, TubeDomain(HalfPlaneProduct{2}));

    StripSpec strip{cplx(0.4, 0.3), 0.2, 1.5};
    check_consistency(strip, TubeDomain(StripDomain{}));

    StaircaseISpec case_i;
    case_i.facet = 2;
    case_i.g = {-two_pi, 0.0, 0.0};
    case_i.transverse = {cplx(0.1, -0.3), cplx(0.0, 0.0)};
    check_consistency(case_i, staircase);
}

TEST_CASE("staircase atom placement is forced") {
    std::mt19937_64 rng(10);
    for (int i = 0; i < 25; ++i) {
        StaircaseIISpec s = random_staircase_spec(rng);
        for (int l = 0; l < 2; ++l) {
            if (!(s.alpha[l] < 0.0)) continue;
            auto root = circle_root(s.h.coord(l).a, s.h.coord(l).b);
            REQUIRE(root.has_value());
            CHECK(std::abs(normalize_angle(s.lambda_angle[l] - *root + M_PI) - M_PI) < 1e-10);
        }
    }
}

TEST_CASE("C-measures are nonincreasing for random admissible certificates") {
    std::mt19937_64 rng(12);
    StaircaseDomain d = canonical_domain();
    StaircaseDomain d4 = from_reinhardt({{1.0, 2.0, std::exp(-2.0)}, {2.0, 1.0, std::exp(-2.0)}});
    for (int i = 0; i < 1000; ++i) {
        StaircaseIISpec s = random_staircase_spec(rng);
        for (const StaircaseDomain* dom : {&d, &d4}) {
            KlisArcs arcs = klis_arcs(*dom, s.h);
            if (arcs.degenerate_facet) continue;
            double prev = two_pi + 1.0;
            for (const ArcSet& c : arcs.C) {
                CHECK(c.measure() <= prev + 1e-9);
                prev = c.measure();
            }
        }
    }
}

TEST_CASE("disc-base boundary direction") {
    Vec2 d1 = disc_base_boundary_direction({cplx(0, 0), cplx(0, 0)}, {1.0, 0.0}, 2.0);
    CHECK(d1[0] == doctest::Approx(1.0));
    CHECK(d1[1] == doctest::Approx(0.0));

    Vec2 d2 = disc_base_boundary_direction({cplx(1, 0), cplx(0, 0)}, {0.0, 0.0}, 0.0);
    CHECK(d2[0] == doctest::Approx(1.0));

    // a = (1, i) traces the unit direction field (cos t, sin t)
    Vec2 d3 = disc_base_boundary_direction({cplx(1, 0), cplx(0, 1)}, {0.0, 0.0}, M_PI / 2.0);
    CHECK(d3[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(d3[1] == doctest::Approx(1.0));

    CHECK_THROWS_AS(disc_base_boundary_direction({cplx(0, 0), cplx(0, 0)}, {0.0, 0.0}, 1.0),
                    std::invalid_argument);
}

TEST_CASE("disc-base geodesic evaluation") {
    DiscBaseSpec s;
    s.a = {cplx(1.0, 0.0), cplx(0.0, 1.0)};
    s.b = {0.0, 0.0};
    s.im_offset = {0.25, -0.5};

    auto z0 = eval_disc_base_geodesic(s, 0.0);
    CHECK(std::abs(z0[0] - cplx(0.0, 0.25)) < 1e-10);
    CHECK(std::abs(z0[1] - cplx(0.0, -0.5)) < 1e-10);

    // membership on a disc grid
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    TubeDomain dom = DiscBaseDomain{};
    for (int i = 0; i < 20; ++i) {
        cplx lam = std::polar(0.9 * std::sqrt(u(rng)), two_pi * u(rng));
        auto z = eval_disc_base_geodesic(s, lam);
        CHECK(domain_contains(dom, {z[0], z[1]}));
    }

    // radial limit at angle 0 approaches the boundary direction (1, 0)
    auto zr = eval_disc_base_geodesic(s, cplx(1.0 - 1e-5, 0.0));
    CHECK(zr[0].real() == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::abs(zr[1].real()) < 1e-3);

    TubeDomain dd = DiscBaseDomain{};
    CHECK_THROWS_AS(boundary_measure_of(GeodesicSpec(s), dd), std::invalid_argument);
}

TEST_CASE("projection") {
    StaircaseDomain d = canonical_domain();
    GeodesicMap phi = make_map(canonical_spec(), TubeDomain(d));

    GeodesicMap same = project({{1.0, 0.0}, {0.0, 1.0}}, phi);
    auto a = phi.value(cplx(0.3, 0.1));
    auto b = same.value(cplx(0.3, 0.1));
    CHECK(std::abs(a[0] - b[0]) < 1e-15);
    CHECK(std::abs(a[1] - b[1]) < 1e-15);

    GeodesicMap sum = project({{1.0, 1.0}}, phi);
    CHECK(std::abs(sum.value(cplx(0.2, 0.4))[0] - (a[0] + a[1])) > 0.0);  // different point
    auto s = sum.value(cplx(0.3, 0.1));
    CHECK(std::abs(s[0] - (a[0] + a[1])) < 1e-15);
    CHECK(sum.value(cplx(0.2, 0.0))[0].real() < -1.0);  // lands in Re < -1

    CHECK_THROWS_AS(project({{1.0, 1.0}, {2.0, 2.0}}, phi), std::invalid_argument);

    // pushforward measure matches the projected map through the Poisson
    // formula
    TubeDomain dom = d;
    CircleMeasure mu = boundary_measure_of(canonical_spec(), dom);
    CircleMeasure pushed = measure_linear_map({{1.0, 1.0}}, mu);
    CircleMeasure expected(1);
    expected.add_piece(Arc::full(), {-1.0});
    expected.add_atom(0.0, {-two_pi});
    expected.add_atom(M_PI, {-two_pi});
    CHECK(measures_equal(pushed, expected, 1e-12));
    for (cplx lam : {cplx(0.1, 0.2), cplx(-0.6, 0.3)}) {
        cplx direct = sum.value(lam)[0];
        cplx recon = herglotz_transform(pushed, lam, {0.0})[0];
        CHECK(std::abs(direct - recon) < 1e-9);
    }
}
