#pragma once

#include <variant>

#include "tubegeo/verify.hpp"

namespace tubegeo {

struct SolveOptions {
    int multistart = 48;
    unsigned seed = 1;
    int max_iterations = 160;
    double endpoint_tolerance = 1e-8;        // max |phi(0)-z|, |phi(sigma)-w|
    double verify_residual_tolerance = 1e-7; // contour left-inverse residual
    bool try_case_i = true;
};

struct SolveProblem {
    TubeDomain domain;
    std::vector<cplx> z;
    std::vector<cplx> w;
    SolveOptions options;
};

struct SolveSolution {
    GeodesicSpec spec;
    double sigma = 0.5;
    double endpoint_residual = 0.0;
    double left_inverse_residual = 0.0;
    std::string case_name;
};

struct SolveFailure {
    std::string message;
    // best endpoint residual reached per attempted case, for diagnostics
    std::vector<std::pair<std::string, double>> best_residuals;
};

using SolveOutcome = std::variant<SolveSolution, SolveFailure>;

/// Two-point interpolation: finds a family spec and sigma in (0, 1) with
/// phi(0) = z and phi(sigma) = w, certified by the contour left inverse.
/// Half-plane products and the strip are solved in closed form; staircase
/// domains enumerate the classification cases (both atoms, single atom,
/// no atom, then case (i) per facet) with damped least squares and
/// deterministic multistart.  Never returns an unverified candidate.
SolveOutcome solve_two_point(const SolveProblem& problem);

/// The spec of lambda -> phi(e^{i gamma} lambda): atoms move to
/// angle - gamma, certificate coefficients pick up e^{-i gamma}.
GeodesicSpec rotate_parametrization(const GeodesicSpec& spec, double gamma);

struct AlignedSpec {
    GeodesicSpec spec;
    double sigma = 0.0;
};

/// Re-parametrizes a spec whose second anchor sits at a complex parameter
/// so the anchor lands on (0, 1): pre-composition with the rotation by
/// arg(sigma).  phi(0) and the verification status are unchanged.
AlignedSpec align_by_automorphism(const GeodesicSpec& spec, cplx sigma);

}  // namespace tubegeo
