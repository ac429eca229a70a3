#pragma once

// Shared fixtures for the test suites: the canonical staircase domain and
// deterministic random-spec generators.

#include <random>

#include "tubegeo/domain.hpp"
#include "tubegeo/geodesic.hpp"

namespace tubegeo::testing {

inline StaircaseDomain canonical_domain() {
    StaircaseDomain d;
    d.v = {{1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
    d.p = {{0.0, -2.0}, {0.0, -1.0}, {-1.0, 0.0}, {-2.0, 0.0}};
    return d;
}

inline StaircaseIISpec canonical_spec() {
    StaircaseIISpec s;
    s.h = QuadCertificate({{cplx(0.5, 0.0), 1.0}, {cplx(-0.5, 0.0), 1.0}});
    s.alpha = {-two_pi, -two_pi};
    s.lambda_angle = {M_PI, 0.0};  // lambda_1 = -1, lambda_2 = +1
    s.beta = {0.0, 0.0};
    return s;
}

/// Admissible random case-(ii) spec over the canonical domain.  Atom flags
/// choose which coordinates carry a Dirac mass; coordinates with the atom
/// off get a strictly positive symbol.
inline StaircaseIISpec random_staircase_spec(std::mt19937_64& rng, bool atom1 = true,
                                             bool atom2 = true) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    StaircaseIISpec s;
    std::vector<QuadCoef> coef(2);
    std::array<bool, 2> atoms{atom1, atom2};
    for (int l = 0; l < 2; ++l) {
        double mag = 0.3 + 1.2 * u(rng);
        double angle = two_pi * u(rng);
        coef[l].a = std::polar(mag, angle);
        coef[l].b = 2.0 * mag + (atoms[l] ? 0.0 : 0.2 + u(rng));
        if (atoms[l]) {
            s.alpha[l] = -(0.5 + 5.0 * u(rng));
            s.lambda_angle[l] = normalize_angle(angle + M_PI);
        } else {
            s.alpha[l] = 0.0;
        }
        s.beta[l] = 2.0 * u(rng) - 1.0;
    }
    s.h = QuadCertificate(std::move(coef));
    return s;
}

}  // namespace tubegeo::testing
