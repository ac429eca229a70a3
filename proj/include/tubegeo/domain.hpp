#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "tubegeo/circle.hpp"

namespace tubegeo {

using Vec2 = std::array<double, 2>;

inline double dot2(const Vec2& x, const Vec2& y) { return x[0] * y[0] + x[1] * y[1]; }
inline double det2(const Vec2& x, const Vec2& y) { return x[0] * y[1] - x[1] * y[0]; }

/// The product of left half-planes {z : Re z_l < 0 for all l}.
struct HalfPlaneProduct {
    int n = 1;
};

/// The fixed strip {z : 0 < Re z < 1} in the plane.
struct StripDomain {};

/// Tube over the plane region bounded by a vertical half-line on the
/// x2-axis, a descending chain of segments, and a horizontal half-line on
/// the x1-axis:
///   D = {z : <Re z - p_j, v_j> < 0, j = 1..m},
/// with outward facet normals v_1..v_m in the closed first quadrant turning
/// counterclockwise and vertices p_0..p_m on the facet lines (p_0 and p_m
/// are supporting points on the axes, not corners of the boundary).
struct StaircaseDomain {
    std::vector<Vec2> v;  // m normals, v[0] = (v_{1,1}, 0), v[m-1] = (0, v_{m,2})
    std::vector<Vec2> p;  // m+1 points p_0..p_m

    int facet_count() const { return static_cast<int>(v.size()); }
    const Vec2& normal(int j) const { return v.at(j - 1); }        // 1-based
    const Vec2& vertex(int j) const { return p.at(j); }            // 0-based p_j
};

/// Tube over the open unit disc of the plane:
/// {z : (Re z_1)^2 + (Re z_2)^2 < 1}.
struct DiscBaseDomain {};

using TubeDomain = std::variant<HalfPlaneProduct, StripDomain, StaircaseDomain, DiscBaseDomain>;

struct StaircaseViolation {
    std::string bullet;  // which invariant group failed
    int index = 0;       // offending j
    std::string message;
};

/// All violated staircase invariants (empty result means valid):
///  - vertex first coordinates 0 = p_{0,1} = p_{1,1} > p_{2,1} > ... > p_{m,1}
///  - vertex second coordinates 0 = p_{m,2} = p_{m-1,2} > ... > p_{0,2}
///  - det[v_j, v_{j+1}] > 0
///  - <p_{j+1} - p_j, v_{j+1}> = 0 (within 1e-10 * scale)
///  - v_{1,1} > 0, v_{1,2} = 0, v_{m,1} = 0, v_{m,2} > 0
std::vector<StaircaseViolation> validate_staircase(const StaircaseDomain& d);

/// Strict membership of a point in the tube.
bool domain_contains(const TubeDomain& domain, const std::vector<cplx>& z);
bool staircase_contains(const StaircaseDomain& d, const Vec2& x);  // base membership

int domain_dimension(const TubeDomain& domain);

/// One factor of a Reinhardt intersection
/// {(z1,z2) in D^2 : 0 < |z1|^p |z2|^q < alpha}.
struct ReinhardtFactor {
    double p = 1.0;
    double q = 1.0;
    double alpha = 0.5;  // in (0, 1)
};

/// The staircase model of the logarithmic image of the intersection of the
/// given factors with the unit bidisc: half-spaces x1 < 0, x2 < 0 and
/// p x1 + q x2 < log(alpha) per factor, with redundant half-spaces removed
/// and vertices in the staircase normalization.  The result always passes
/// validate_staircase.
StaircaseDomain from_reinhardt(const std::vector<ReinhardtFactor>& factors);

struct NormalCone {
    Vec2 lo;             // single direction when !vertex, else cone edge v_j
    Vec2 hi;             // cone edge v_{j+1} when vertex
    bool vertex = false;
    int facet = 0;       // facet index j (1-based); at a vertex, the lower one
};

/// Outward normal directions of the base at a boundary point: the facet
/// normal on an open facet, the closed cone [v_j, v_{j+1}] at vertex p_j.
/// Throws for points not on the boundary (within 1e-9).
NormalCone supporting_normal(const StaircaseDomain& d, const Vec2& x);

/// Polyline sampling of the base boundary: the vertical half-line clipped
/// at depth `extent` below p_1, the segment chain, the horizontal half-line
/// clipped at distance `extent` left of p_{m-1}.
std::vector<Vec2> staircase_boundary_polyline(const StaircaseDomain& d, double extent = 5.0);

}  // namespace tubegeo
