#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "tubegeo/domain.hpp"
#include "tubegeo/hfun.hpp"
#include "tubegeo/measure.hpp"

namespace tubegeo {

/// One-coordinate Mobius atom map
///   (alpha / 2pi) (lambda0 + lambda)/(lambda0 - lambda) + i beta,
/// the building block of half-plane geodesics (boundary measure
/// alpha * dirac at lambda0).
struct HalfPlaneAtom1D {
    double alpha = -two_pi;
    double lambda0_angle = 0.0;
    double beta = 0.0;
};

/// Unpinned coordinate of a half-plane product geodesic: any holomorphic
/// map into the half-plane representable in the measure class.
struct FreeComponent {
    enum class Kind { constant, atom };
    Kind kind = Kind::constant;
    cplx constant{-1.0, 0.0};  // requires Re < 0
    HalfPlaneAtom1D atom;
};

/// Geodesic of the half-plane product: coordinate j0 carries the atom map,
/// the remaining coordinates are free.
struct HalfPlaneAtomSpec {
    int n = 1;
    int coordinate = 0;  // j0, 0-based
    HalfPlaneAtom1D atom;
    std::vector<FreeComponent> free;  // n-1 entries for the other coordinates
};

/// Geodesic of the strip 0 < Re < 1 determined by a certificate (a, b)
/// with |b| < 2|a|.
struct StripSpec {
    cplx a{0.5, 0.0};
    double b = 0.0;
    double im_offset = 0.0;
};

/// Two-point staircase family (classification case (ii)): certificate h
/// with nonnegative coordinate symbols, atom masses alpha_l <= 0 placed at
/// the symbol roots, imaginary offsets beta.
struct StaircaseIISpec {
    QuadCertificate h;
    std::array<double, 2> alpha{0.0, 0.0};
    std::array<double, 2> lambda_angle{0.0, 0.0};  // used when alpha_l < 0
    std::array<double, 2> beta{0.0, 0.0};
};

/// Transverse component t(lambda) = c0 + c1 * lambda of a case-(i) spec.
struct TransverseAffine {
    cplx c0{0.0, 0.0};
    cplx c1{0.0, 0.0};
};

/// Classification case (i): <phi - p_j, v_j> is a half-plane geodesic on
/// facet j; the component transverse to v_j is a stored sampler, never
/// synthesized.
struct StaircaseISpec {
    int facet = 1;  // 1-based j
    HalfPlaneAtom1D g;
    TransverseAffine transverse;
};

/// Geodesic candidate of the disc-base tube, determined by the boundary
/// direction field (Re(conj(a) lambda) + b) / |...|.
struct DiscBaseSpec {
    std::array<cplx, 2> a{cplx(1.0, 0.0), cplx(0.0, 1.0)};
    std::array<double, 2> b{0.0, 0.0};
    std::array<double, 2> im_offset{0.0, 0.0};
};

using GeodesicSpec =
    std::variant<HalfPlaneAtomSpec, StripSpec, StaircaseIISpec, StaircaseISpec, DiscBaseSpec>;

/// A disc-to-C^n holomorphic sampler with analytic derivative.
struct GeodesicMap {
    int n = 1;
    std::function<std::vector<cplx>(cplx)> value;
    std::function<std::vector<cplx>(cplx)> deriv;
};

/// -------- closed forms --------

/// Requires alpha < 0, |lambda| < 1; the value lies in the open left
/// half-plane.
cplx eval_halfplane_geodesic(double alpha, cplx lambda0, double beta, cplx lambda);
cplx eval_halfplane_atom(const HalfPlaneAtom1D& g, cplx lambda);
cplx eval_halfplane_atom_deriv(const HalfPlaneAtom1D& g, cplx lambda);

/// Mobius offset c = -b / (2|a| + sqrt(4|a|^2 - b^2)) of the strip
/// geodesic; requires |b| < 2|a|.
double phi_h_offset(cplx a, double b);

/// The strip geodesic phi_h(lambda) = tau(i T_c((conj a/|a|) lambda)):
/// the Herglotz transform of the indicator of positivity_arc(a, b).
/// Requires |b| < 2|a|.
cplx eval_phi_h(cplx a, double b, cplx lambda);
cplx eval_phi_h_deriv(cplx a, double b, cplx lambda);

/// -------- staircase machinery --------

struct KlisArcs {
    std::vector<ArcSet> C;       // C_j, j = 1..m (index j-1)
    std::vector<ArcSet> A;       // A_j = C_j \ C_{j+1}, j = 1..m-1
    std::vector<double> B;       // zero angles of the combined symbols
    std::optional<int> degenerate_facet;  // j with combined symbol == 0
                                          // (case-(i) indicator); when set,
                                          // C/A/B are not populated
};

/// Positivity arcs of the combined symbols det[conj(lambda) h, v_j] < 0,
/// their successive differences, and the finite zero set.  Asserts the
/// nesting C_1 superset C_2 superset ... C_m.
KlisArcs klis_arcs(const StaircaseDomain& domain, const QuadCertificate& h);

/// k1 = max{j : measure(C_j) = 2pi}, k2 = min{j : measure(C_j) = 0}
/// (1-based).  Requires a monotone nonincreasing list starting at 2pi and
/// ending at 0.
std::pair<int, int> klis_k1k2(const std::vector<double>& c_measures);

/// Evaluation-ready form of an admissible StaircaseIISpec.
struct PreparedStaircase {
    StaircaseIISpec spec;
    const StaircaseDomain* domain = nullptr;
    KlisArcs arcs;
    int k1 = 1, k2 = 2;
    struct StripTerm {
        Vec2 coef;  // p_j - p_{j-1}
        cplx u;     // conj(a') / |a'| of the combined certificate
        double c;   // Mobius offset c_j
    };
    std::vector<StripTerm> terms;
    Vec2 base_point{0.0, 0.0};  // p_{k1}

    std::array<cplx, 2> value(cplx lambda) const;
    std::array<cplx, 2> deriv(cplx lambda) const;
};

/// Validates admissibility (summary condition (ii)) and the sampled
/// image-in-domain check; throws std::invalid_argument with the violated
/// condition otherwise.  check_image = false skips the sampled membership
/// semi-decision.
PreparedStaircase prepare_staircase(const StaircaseIISpec& spec, const StaircaseDomain& domain,
                                    bool check_image = true);

/// One-shot evaluation (validates the spec on every call; prefer
/// prepare_staircase or make_map in loops).
std::array<cplx, 2> eval_staircase_geodesic(const StaircaseIISpec& spec,
                                            const StaircaseDomain& domain, cplx lambda);

/// -------- disc base --------

/// (Re(conj a e^{it}) + b) normalized; throws where the field vanishes.
Vec2 disc_base_boundary_direction(const std::array<cplx, 2>& a, const std::array<double, 2>& b,
                                  double t);

/// Poisson integral of the boundary direction field (quadrature path; this
/// measure lies outside the piecewise-constant class).
std::array<cplx, 2> eval_disc_base_geodesic(const DiscBaseSpec& spec, cplx lambda);

/// -------- family-generic operations --------

/// Boundary measure of the spec: atoms for half-plane coordinates, the
/// positivity-arc indicator for the strip, the layered arc densities plus
/// atoms for staircase case (ii).  Unsupported for DiscBase (absolutely
/// continuous non-constant density) and for case (i) with a
/// lambda-dependent transverse term.
CircleMeasure boundary_measure_of(const GeodesicSpec& spec, const TubeDomain& domain);

/// Im phi(0) per coordinate.
std::vector<double> im_offset_of(const GeodesicSpec& spec, const TubeDomain& domain);

/// The certificate the family carries: derived for half-plane / case (i) /
/// disc-base specs, stored for strip and case (ii).
QuadCertificate certificate_of(const GeodesicSpec& spec, const TubeDomain& domain);

/// Sampler with analytic derivative; validates the spec.
GeodesicMap make_map(const GeodesicSpec& spec, const TubeDomain& domain);

/// Pointwise matrix action V . phi; requires full row rank.
GeodesicMap project(const std::vector<std::vector<double>>& V, const GeodesicMap& phi);

}  // namespace tubegeo
