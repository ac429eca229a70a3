#include "doctest.h"

#include <cmath>
#include <random>

#include "support.hpp"
#include "tubegeo/verify.hpp"

using namespace tubegeo;
using tubegeo::testing::canonical_domain;
using tubegeo::testing::canonical_spec;
using tubegeo::testing::random_staircase_spec;

namespace {

GeodesicMap halfplane_map(double alpha = -two_pi, double angle0 = 0.0, double beta = 0.0) {
    HalfPlaneAtomSpec s;
    s.n = 1;
    s.coordinate = 0;
    s.atom = {alpha, angle0, beta};
    return make_map(s, TubeDomain(HalfPlaneProduct{1}));
}

QuadCertificate halfplane_h(double angle0 = 0.0) {
    return QuadCertificate({{-std::polar(1.0, angle0), 2.0}});
}

// the section-3 counterexample: maps the disc into the left half-plane,
// satisfies the boundary inequality with h = lambda, but is no geodesic
GeodesicMap counterexample_map() {
    GeodesicMap m;
    m.n = 1;
    m.value = [](cplx l) { return std::vector<cplx>{(l * l + 1.0) / (l * l - 1.0)}; };
    m.deriv = [](cplx l) {
        cplx d = l * l - 1.0;
        return std::vector<cplx>{-4.0 * l / (d * d)};
    };
    return m;
}

}  // namespace

TEST_CASE("measure condition: half-plane atom instance") {
    CircleMeasure mu(1);
    mu.add_atom(0.0, {-two_pi});
    TubeDomain dom = HalfPlaneProduct{1};
    std::vector<std::vector<cplx>> zs{{cplx(-0.5, 0.0)}};

    auto good = check_measure_condition(mu, halfplane_h(), dom, zs);
    CHECK(good.overall() == CheckStatus::pass);

    // h = (0, 1) has symbol 1, so the atom coefficient flips positive
    auto bad = check_measure_condition(mu, QuadCertificate({{cplx(0, 0), 1.0}}), dom, zs);
    REQUIRE(bad.overall() == CheckStatus::fail);
    REQUIRE(bad.conditions[0].witness.has_value());
    CHECK(bad.conditions[0].witness->detail == "atom coefficient positive");
    CHECK(*bad.conditions[0].witness->angle == doctest::Approx(0.0));
    CHECK(bad.conditions[0].witness->value == doctest::Approx(two_pi).epsilon(1e-12));
}

TEST_CASE("measure condition: canonical staircase over the structured sample") {
    StaircaseDomain d = canonical_domain();
    TubeDomain dom = d;
    CircleMeasure mu = boundary_measure_of(canonical_spec(), dom);
    auto zs = domain_z_samples(dom, 10);
    CHECK(zs.size() >= 15);
    auto report = check_measure_condition(mu, canonical_spec().h, dom, zs);
    CHECK(report.overall() == CheckStatus::pass);
    CHECK(report.sampled_universal);
}

TEST_CASE("measure condition: scaling invariance of the verdict") {
    StaircaseDomain d = canonical_domain();
    TubeDomain dom = d;
    CircleMeasure mu = boundary_measure_of(canonical_spec(), dom);
    auto zs = domain_z_samples(dom, 6);
    for (double s : {1e-3, 1.0, 1e3}) {
        std::vector<QuadCoef> coef;
        for (const QuadCoef& c : canonical_spec().h.coords()) coef.push_back({s * c.a, s * c.b});
        auto report = check_measure_condition(mu, QuadCertificate(coef), dom, zs);
        CHECK(report.overall() == CheckStatus::pass);
    }
}

TEST_CASE("radial conditions: half-plane geodesic passes") {
    TubeDomain dom = HalfPlaneProduct{1};
    auto zs = domain_z_samples(dom, 5);
    RadialCheckOptions opt;
    opt.excluded_angles = {0.0};
    auto report = check_radial_conditions(halfplane_map(), halfplane_h(), dom, zs, opt);
    CHECK(report.overall() == CheckStatus::pass);
}

TEST_CASE("radial conditions: the counterexample passes (i) and fails (ii)") {
    TubeDomain dom = HalfPlaneProduct{1};
    auto zs = domain_z_samples(dom, 5);
    QuadCertificate h({{cplx(0.0, 0.0), 1.0}});
    auto report = check_radial_conditions(counterexample_map(), h, dom, zs);

    const ConditionResult* ci = report.find("radial-condition-i");
    REQUIRE(ci);
    CHECK(ci->status == CheckStatus::pass);

    const ConditionResult* cii = report.find("radial-condition-ii");
    REQUIRE(cii);
    REQUIRE(cii->status == CheckStatus::fail);
    REQUIRE(cii->witness.has_value());
    CHECK(std::abs(*cii->witness->lambda - cplx(0.5, 0.0)) < 1e-15);
    CHECK(cii->witness->value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    // the quantity itself at lambda = 1/2
    CHECK(radial_condition_ii_value(counterexample_map(), h, cplx(0.5, 0.0)) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("radial conditions: strip and canonical staircase pass") {
    StripSpec strip{cplx(0.5, 0.0), 0.0, 0.0};
    TubeDomain sdom = StripDomain{};
    RadialCheckOptions sopt;  // no atoms, endpoints avoided by the golden grid
    auto sreport = check_radial_conditions(make_map(strip, sdom), certificate_of(strip, sdom),
                                           sdom, domain_z_samples(sdom, 5), sopt);
    CHECK(sreport.overall() == CheckStatus::pass);

    StaircaseDomain d = canonical_domain();
    TubeDomain dom = d;
    RadialCheckOptions opt;
    opt.excluded_angles = {0.0, M_PI};
    auto report = check_radial_conditions(make_map(canonical_spec(), dom),
                                          canonical_spec().h, dom,
                                          domain_z_samples(dom, 8), opt);
    CHECK(report.overall() == CheckStatus::pass);
}

TEST_CASE("psi function: value at the origin and the boundary bridge") {
    GeodesicMap phi = halfplane_map();
    QuadCertificate h = halfplane_h();
    std::vector<cplx> z{cplx(-1.0, 0.0)};  // z = phi(0)

    // psi_{phi(0)}(0) = -phi'(0) . h(0) = -2
    CHECK(std::abs(eval_psi(phi, h, z, cplx(0.0, 0.0)) - cplx(-2.0, 0.0)) < 1e-14);
    // approach through the removable singularity
    CHECK(std::abs(eval_psi(phi, h, z, cplx(1e-7, 0.0)) - cplx(-2.0, 0.0)) < 1e-6);

    // bridge: Re of the radial limit of psi_z equals the boundary quantity
    std::vector<cplx> z2{cplx(-0.7, 0.4)};
    GeodesicMap psi_map;
    psi_map.n = 1;
    psi_map.value = [&, z2](cplx lam) { return std::vector<cplx>{eval_psi(phi, h, z2, lam)}; };
    psi_map.deriv = [](cplx) { return std::vector<cplx>{cplx(0.0, 0.0)}; };
    for (double t : {0.9, 2.0, 3.5, 5.1}) {
        auto psi_lim = radial_limit(psi_map, t);
        auto phi_lim = radial_limit(phi, t);
        REQUIRE(!psi_lim.diverged);
        REQUIRE(!phi_lim.diverged);
        double rhs = halfplane_h().symbol(0, t) * (z2[0].real() - phi_lim.value[0].real());
        CHECK(psi_lim.value[0].real() == doctest::Approx(rhs).epsilon(1e-6));
    }
}

TEST_CASE("left inverse: half-plane analytic oracle") {
    GeodesicMap phi = halfplane_map();
    QuadCertificate h = halfplane_h();

    // phi(lambda) = -(1+lambda)/(1-lambda) has inverse (z+1)/(z-1)
    auto r = left_inverse_value(phi, h, {cplx(-2.0, 0.0)});
    REQUIRE(r.status == LeftInverseStatus::ok);
    CHECK(std::abs(r.value - cplx(1.0 / 3.0, 0.0)) < 1e-10);
    CHECK(std::lround(r.root_count) == 1);

    auto r0 = left_inverse_value(phi, h, {cplx(-1.0, 0.0)});
    REQUIRE(r0.status == LeftInverseStatus::ok);
    CHECK(std::abs(r0.value) < 1e-12);

    // random instances against the Mobius inversion
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        double alpha = -(0.2 + 6.0 * u(rng));
        double t0 = two_pi * u(rng);
        double beta = 4.0 * u(rng) - 2.0;
        GeodesicMap f = halfplane_map(alpha, t0, beta);
        QuadCertificate hc = halfplane_h(t0);
        cplx sigma = std::polar(0.85 * std::sqrt(u(rng)), two_pi * u(rng));
        cplx z = f.value(sigma)[0];
        auto res = left_inverse_value(f, hc, {z});
        REQUIRE(res.status == LeftInverseStatus::ok);
        // analytic inverse: lambda0 (w - 1)/(w + 1), w = (z - i beta) 2 pi / alpha
        cplx w = (z - cplx(0.0, beta)) * two_pi / alpha;
        cplx expect = std::polar(1.0, t0) * (w - 1.0) / (w + 1.0);
        CHECK(std::abs(res.value - expect) < 1e-10);
        CHECK(std::abs(res.value - sigma) < 1e-10);
    }
}

TEST_CASE("left inverse: staircase self-consistency") {
    StaircaseDomain d = canonical_domain();
    TubeDomain dom = d;
    GeodesicMap phi = make_map(canonical_spec(), dom);
    QuadCertificate h = canonical_spec().h;

    auto r = left_inverse_value(phi, h, phi.value(cplx(0.4, 0.0)));
    REQUIRE(r.status == LeftInverseStatus::ok);
    CHECK(std::abs(r.value - cplx(0.4, 0.0)) < 1e-8);
}

TEST_CASE("left inverse: contour nodes converge spectrally") {
    LeftInverseSettings tight;
    tight.min_nodes = 256;
    tight.max_nodes = 512;  // must stabilize at the very first doubling
    tight.node_tol = 1e-10;

    GeodesicMap phi = halfplane_map();
    auto r = left_inverse_value(phi, halfplane_h(), {cplx(-2.0, 0.0)}, tight);
    CHECK(r.status == LeftInverseStatus::ok);

    StaircaseDomain d = canonical_domain();
    TubeDomain dom = d;
    GeodesicMap sphi = make_map(canonical_spec(), dom);
    auto rs = left_inverse_value(sphi, canonical_spec().h, sphi.value(cplx(0.3, 0.0)), tight);
    CHECK(rs.status == LeftInverseStatus::ok);
}

TEST_CASE("left inverse residual: verified families") {
    GeodesicMap phi = halfplane_map();
    auto res = left_inverse_residual(phi, halfplane_h(), disc_grid(50, 0.9));
    REQUIRE(res.status == LeftInverseStatus::ok);
    CHECK(res.residual < 1e-9);

    StripSpec strip{cplx(0.5, 0.0), 0.0, 0.0};
    TubeDomain sdom = StripDomain{};
    auto sres = left_inverse_residual(make_map(strip, sdom), certificate_of(strip, sdom),
                                      disc_grid(20, 0.85));
    REQUIRE(sres.status == LeftInverseStatus::ok);
    CHECK(sres.residual < 1e-8);
}

TEST_CASE("left inverse: scaling invariance of the outcome") {
    StaircaseDomain d = canonical_domain();
    TubeDomain dom = d;
    GeodesicMap phi = make_map(canonical_spec(), dom);
    for (double s : {1e-3, 1.0, 1e3}) {
        std::vector<QuadCoef> coef;
        for (const QuadCoef& c : canonical_spec().h.coords()) coef.push_back({s * c.a, s * c.b});
        auto r = left_inverse_value(phi, QuadCertificate(coef), phi.value(cplx(0.35, 0.1)));
        REQUIRE(r.status == LeftInverseStatus::ok);
        CHECK(std::abs(r.value - cplx(0.35, 0.1)) < 1e-8);
    }
}

TEST_CASE("left inverse: inconsistent measure/evaluation pair is caught") {
    StaircaseDomain d = canonical_domain();
    TubeDomain dom = d;
    StaircaseIISpec spec = canonical_spec();

    // the authoritative map reconstructed from the boundary measure
    CircleMeasure mu = boundary_measure_of(spec, dom);
    std::vector<double> offset = im_offset_of(spec, dom);
    GeodesicMap measure_path;
    measure_path.n = 2;
    measure_path.value = [mu, offset](cplx lam) { return herglotz_transform(mu, lam, offset); };
    measure_path.deriv = [mu](cplx lam) { return herglotz_transform_deriv(mu, lam); };

    // a jittered evaluator: beta_1 shifted only in the map, not the measure
    StaircaseIISpec jittered = spec;
    jittered.beta[0] += 0.1;
    GeodesicMap direct = make_map(jittered, dom);

    double residual = 0.0;
    for (cplx sigma : disc_grid(8, 0.7)) {
        auto r = left_inverse_value(measure_path, spec.h, direct.value(sigma));
        if (r.status != LeftInverseStatus::ok) {
            residual = std::numeric_limits<double>::infinity();
            break;
        }
        residual = std::max(residual, std::abs(r.value - sigma));
    }
    CHECK(residual > 1e-3);
}

TEST_CASE("left inverse: the counterexample reports structural failure") {
    QuadCertificate h({{cplx(0.0, 0.0), 1.0}});
    GeodesicMap phi = counterexample_map();
    for (cplx sigma : {cplx(0.3, 0.0), cplx(0.55, 0.2), cplx(0.0, 0.7)}) {
        auto r = left_inverse_value(phi, h, phi.value(sigma));
        CHECK(r.status == LeftInverseStatus::structural_failure);
    }
}

TEST_CASE("distance sandwich") {
    GeodesicMap phi = halfplane_map();
    QuadCertificate h = halfplane_h();

    auto s = distance_sandwich(phi, h, cplx(0.0, 0.0), cplx(0.5, 0.0));
    REQUIRE(s.status == LeftInverseStatus::ok);
    CHECK(s.upper == doctest::Approx(std::atanh(0.5)).epsilon(1e-14));
    CHECK(std::abs(s.lower - s.upper) < 1e-8);

    auto zero = distance_sandwich(phi, h, cplx(0.2, 0.1), cplx(0.2, 0.1));
    CHECK(zero.lower == 0.0);
    CHECK(zero.upper == 0.0);

    auto bad = distance_sandwich(counterexample_map(), QuadCertificate({{cplx(0, 0), 1.0}}),
                                 cplx(0.2, 0.0), cplx(0.5, 0.0));
    CHECK(bad.status == LeftInverseStatus::structural_failure);
}

TEST_CASE("vertex limit check on the canonical spec") {
    StaircaseDomain d = canonical_domain();
    auto report = vertex_limit_check(canonical_spec(), d);
    CHECK(report.overall() == CheckStatus::pass);

    // radial convergence towards both interior vertices was checked
    CHECK(report.find("vertex-radial-1"));
    CHECK(report.find("vertex-radial-2"));
    CHECK(report.find("vertex-measure-1"));
    CHECK(report.find("vertex-measure-2"));

    // direct probe: away from the atom angle pi, Re phi(r e^{it}) reaches
    // p_2 = (-1, 0)
    TubeDomain dom = d;
    GeodesicMap phi = make_map(canonical_spec(), dom);
    for (double t : {3.0 * M_PI / 4.0, 5.0 * M_PI / 4.0}) {
        auto v = phi.value(std::polar(1.0 - 1e-6, t));
        CHECK(std::abs(v[0].real() - (-1.0)) < 1e-3);
        CHECK(std::abs(v[1].real() - 0.0) < 1e-3);
    }
    // the atom angle itself is excluded: coordinate 1 diverges there while
    // coordinate 2 still approaches the vertex ordinate
    auto at_atom = phi.value(std::polar(1.0 - 1e-6, M_PI));
    CHECK(at_atom[0].real() < -1e3);
    CHECK(std::abs(at_atom[1].real() - 0.0) < 1e-3);
}

TEST_CASE("vertex check flags measure mismatches") {
    StaircaseDomain d = canonical_domain();
    std::mt19937_64 rng(99);
    for (int i = 0; i < 5; ++i) {
        StaircaseIISpec s = random_staircase_spec(rng);
        auto report = vertex_limit_check(s, d);
        CHECK(report.overall() == CheckStatus::pass);
    }
}

TEST_CASE("theorem equivalence on a small in-test corpus") {
    StaircaseDomain d = canonical_domain();
    TubeDomain dom = d;
    std::mt19937_64 rng(123);

    for (int i = 0; i < 5; ++i) {
        StaircaseIISpec s = random_staircase_spec(rng);
        GeodesicMap phi = make_map(s, dom);
        CircleMeasure mu = boundary_measure_of(s, dom);
        auto zs = domain_z_samples(dom, 6);

        auto measure_report = check_measure_condition(mu, s.h, dom, zs);
        RadialCheckOptions opt;
        opt.excluded_angles = {s.lambda_angle[0], s.lambda_angle[1]};
        auto radial_report = check_radial_conditions(phi, s.h, dom, zs, opt);
        auto residual = left_inverse_residual(phi, s.h, disc_grid(10, 0.8));

        CHECK(measure_report.overall() == CheckStatus::pass);
        CHECK(radial_report.overall() == CheckStatus::pass);
        REQUIRE(residual.status == LeftInverseStatus::ok);
        CHECK(residual.residual < 1e-7);
    }
}
