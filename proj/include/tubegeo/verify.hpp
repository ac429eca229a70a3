#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tubegeo/geodesic.hpp"

namespace tubegeo {

enum class CheckStatus { pass, fail, inconclusive };

const char* to_string(CheckStatus s);

/// Concrete evidence attached to a non-pass condition.
struct Witness {
    std::vector<cplx> z;          // offending domain sample, when relevant
    std::optional<double> angle;  // offending circle angle
    std::optional<cplx> lambda;   // offending interior point
    double value = 0.0;           // measured quantity
    std::string detail;
};

struct ConditionResult {
    std::string name;
    CheckStatus status = CheckStatus::pass;
    double tolerance = 0.0;
    std::optional<Witness> witness;
};

struct VerificationReport {
    std::vector<ConditionResult> conditions;
    /// Universal quantifiers over the domain and the circle are discharged
    /// by structured sampling; this stays true to mark the semi-decision.
    bool sampled_universal = true;
    std::optional<double> left_inverse_residual;
    std::optional<double> root_count;

    CheckStatus overall() const;
    const ConditionResult* find(const std::string& name) const;
};

/// Structured sample of the universal z-quantifier: one point near each
/// facet, one near each vertex, plus seeded interior points.  The measure
/// condition is affine in Re z, so facet/vertex extremality carries the
/// convex-hull behaviour.
std::vector<std::vector<cplx>> domain_z_samples(const TubeDomain& domain, int interior_count = 10,
                                                unsigned seed = 2026);

/// Theorem-1 check: for each sample z the measure
///   conj(lambda) h(lambda) . (Re z dL - dmu)
/// is evaluated inside the atoms-plus-arc-density class and tested for
/// negativity; the density part is bounded by its exact per-arc extrema
/// (endpoints plus the interior cosine peak), the atom part by closed-form
/// coefficients.
VerificationReport check_measure_condition(const CircleMeasure& mu, const QuadCertificate& h,
                                           const TubeDomain& domain,
                                           const std::vector<std::vector<cplx>>& z_samples);

/// Same condition for an absolutely continuous boundary density sampled on
/// a fine angle grid (the disc-base family lives outside the
/// piecewise-constant class).
VerificationReport check_measure_condition_density(
    const std::function<std::vector<double>(double)>& density, const QuadCertificate& h,
    const TubeDomain& domain, const std::vector<std::vector<cplx>>& z_samples,
    int angle_grid = 4096);

/// Radial-limit estimate along r = 1 - 2^{-k}, k in [k_min, k_max], with
/// Aitken acceleration and a divergence flag.
struct RadialEstimate {
    std::vector<cplx> value;
    double uncertainty = 0.0;
    bool diverged = false;
};
RadialEstimate radial_limit(const GeodesicMap& phi, double angle, int k_min = 4, int k_max = 20);

/// An angle grid avoiding a set of excluded angles by at least `margin`.
std::vector<double> make_radial_angle_grid(int count, const std::vector<double>& excluded,
                                           double margin = 0.05);

/// The condition-(ii) quantity Re[h(lambda) . (phi(0) - phi(lambda)) / lambda].
double radial_condition_ii_value(const GeodesicMap& phi, const QuadCertificate& h, cplx lambda);

struct RadialCheckOptions {
    std::vector<double> angle_grid;      // empty -> 64 angles, no exclusions
    std::vector<double> excluded_angles; // atom angles (finite excluded set)
    int k_min = 4;
    int k_max = 20;
    std::vector<double> interior_radii{0.5, 0.1, 0.2, 0.3, 0.4, 0.6, 0.7, 0.8, 0.9};
    int interior_angles = 16;
};

/// Theorem-3.3 check: (i) Re[conj(lambda) h . (z - phi*)] < 0 at grid
/// angles for every z sample (radial limits estimated, uncertainty-aware);
/// (ii) Re[h . (phi(0) - phi(lambda))/lambda] < 0 on an interior grid
/// (exact evaluation, strict sign test; the scan starts at lambda = 1/2).
VerificationReport check_radial_conditions(const GeodesicMap& phi, const QuadCertificate& h,
                                           const TubeDomain& domain,
                                           const std::vector<std::vector<cplx>>& z_samples,
                                           const RadialCheckOptions& options = {});

/// The bridge function psi_z with the removable singularity at 0:
///   psi_z(lambda) = (phi(0)-phi(lambda))/lambda . h(lambda)
///                 + (h(lambda)-h(0))/lambda . (z - phi(0))
///                 + lambda conj(h(0) . (z - phi(0))).
cplx eval_psi(const GeodesicMap& phi, const QuadCertificate& h, const std::vector<cplx>& z,
              cplx lambda);

enum class LeftInverseStatus { ok, structural_failure, inconclusive };

struct LeftInverseSettings {
    std::vector<double> contour_radii{0.5, 0.7, 0.9, 0.97, 0.995};
    double screen_max_radius = 0.9995;
    int screen_radii = 12;
    int screen_angles = 512;
    int min_nodes = 256;
    int max_nodes = 1 << 16;
    double node_tol = 1e-12;
    double root_count_tol = 1e-6;
};

struct LeftInverseResult {
    LeftInverseStatus status = LeftInverseStatus::inconclusive;
    cplx value{0.0, 0.0};
    double root_count = 0.0;  // raw argument-principle count
    double contour_radius = 0.0;
    std::string detail;
};

/// Argument-principle extraction of the left-inverse value at z: picks the
/// first contour radius whose outer annulus satisfies Re[Phi/lambda] < 0
/// everywhere on a screening grid, requires the root count
/// (1/2 pi i) contour-int Phi'/Phi to round to exactly 1, and returns
/// (1/2 pi i) contour-int lambda Phi'/Phi, where
/// Phi(lambda) = (z - phi(lambda)) . h(lambda).
LeftInverseResult left_inverse_value(const GeodesicMap& phi, const QuadCertificate& h,
                                     const std::vector<cplx>& z,
                                     const LeftInverseSettings& settings = {});

/// Deterministic spiral grid in the disc of radius max_radius.
std::vector<cplx> disc_grid(int count, double max_radius);

struct ResidualResult {
    LeftInverseStatus status = LeftInverseStatus::ok;
    double residual = 0.0;  // max |f(phi(sigma)) - sigma| over the grid
    std::optional<cplx> worst_sigma;
    std::string detail;
};

/// Left-inverse residual over a sigma grid; any structural failure or
/// inconclusive extraction propagates.
ResidualResult left_inverse_residual(const GeodesicMap& phi, const QuadCertificate& h,
                                     const std::vector<cplx>& sigma_grid,
                                     const LeftInverseSettings& settings = {});

struct SandwichResult {
    LeftInverseStatus status = LeftInverseStatus::ok;
    double lower = 0.0;  // Caratheodory bound through the extracted inverse
    double upper = 0.0;  // Poincare distance of the parameters
    std::string detail;
};

/// Geodesy test: lower = dist(f(phi(s1)), f(phi(s2))), upper = dist(s1, s2);
/// equality within tolerance certifies the isometry property.
SandwichResult distance_sandwich(const GeodesicMap& phi, const QuadCertificate& h, cplx sigma1,
                                 cplx sigma2, const LeftInverseSettings& settings = {});

struct VertexCheckOptions {
    std::vector<double> radii{0.9, 0.99, 0.999, 0.9999, 0.99999, 0.999999};
    double final_tolerance = 1e-3;
    double angle_margin = 0.05;
};

/// Vertex-lemma check for a case-(ii) spec: at angles interior to each
/// A_j (away from arc endpoints and atom angles), Re phi(r e^{it})
/// converges to the vertex p_j with monotone error decrease; the measure
/// restricted to A_j equals p_j dL exactly.
VerificationReport vertex_limit_check(const StaircaseIISpec& spec, const StaircaseDomain& domain,
                                      const VertexCheckOptions& options = {});

}  // namespace tubegeo
