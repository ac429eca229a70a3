#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace tubegeo {

using cplx = std::complex<double>;

inline constexpr double two_pi = 6.283185307179586476925286766559;

/// Canonicalize an angle into [0, 2*pi).
double normalize_angle(double t);

/// Absolute tolerance used when comparing and merging arc endpooints.
inline constexpr double arc_merge_tol = 1e-12;

/// An arc of the unit circle: angles {start + s : 0 <= s <= length} mod 2*pi.
/// length 0 is the empty arc, length 2*pi the full circle.
struct Arc {
    double start = 0.0;   // in [0, 2*pi)
    double length = 0.0;  // in [0, 2*pi]

    Arc() = default;
    Arc(double start_angle, double len);

    static Arc full() { return Arc(0.0, two_pi); }
    static Arc empty() { return Arc(0.0, 0.0); }

    bool is_empty() const { return length <= arc_merge_tol; }
    bool is_full() const { return length >= two_pi - arc_merge_tol; }
    double end() const { return start + length; }  // may exceed 2*pi

    /// Periodic membership test (closed arc).
    bool contains(double t) const;
    double midpoint() const { return normalize_angle(start + 0.5 * length); }
};

/// A finite union of pairwise-disjoint arcs kept in normal form
/// (sorted by start angle, adjacent arcs merged, empty arcs dropped).
class ArcSet {
  public:
    ArcSet() = default;
    explicit ArcSet(const Arc& a) { arcs_.push_back(a); normalize(); }
    explicit ArcSet(std::vector<Arc> arcs) : arcs_(std::move(arcs)) { normalize(); }

    static ArcSet full() { return ArcSet(Arc::full()); }
    static ArcSet empty() { return ArcSet(); }

    const std::vector<Arc>& arcs() const& { return arcs_; }
    // value overload keeps ranged-for over a temporary ArcSet safe
    std::vector<Arc> arcs() && { return std::move(arcs_); }
    bool is_empty() const { return arcs_.empty(); }
    bool is_full() const;
    double measure() const;
    bool contains(double t) const;

    ArcSet complement() const;
    ArcSet set_union(const ArcSet& other) const;
    ArcSet set_intersection(const ArcSet& other) const;
    ArcSet set_difference(const ArcSet& other) const;

    /// True iff every arc of this set lies inside `other` up to tolerance
    /// (measure of the difference below tol).
    bool subset_of(const ArcSet& other, double tol = 1e-9) const;

  private:
    void normalize();
    std::vector<Arc> arcs_;
};

/// The disc automorphism T_c: lambda -> (lambda - c) / (1 - conj(c) lambda).
/// Maps the open disc onto itself and the circle onto the circle.
/// Throws std::invalid_argument for |c| >= 1.
cplx mobius(cplx c, cplx lambda);

/// Hyperbolic distance atanh(|s - t| / |1 - conj(s) t|) between disc points.
/// Throws std::invalid_argument if either point is not strictly inside.
double poincare_distance(cplx sigma, cplx tau);

/// The biholomorphism from the unit disc onto the strip 0 < Re < 1:
///   tau(lambda) = -(i/pi) * log(i (1+lambda) / (1-lambda)),
/// log taken with argument in [0, 2*pi).  Extends continuously to the
/// circle minus {-1, 1}; the upper semicircle goes to Re = 1, the lower
/// to Re = 0.  Throws std::invalid_argument at the branch points +-1.
cplx strip_map_tau(cplx lambda);

/// Derivative of strip_map_tau at an interior point.
cplx strip_map_tau_deriv(cplx lambda);

}  // namespace tubegeo
