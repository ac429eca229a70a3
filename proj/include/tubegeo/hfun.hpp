#pragma once

#include <array>
#include <optional>
#include <vector>

#include "tubegeo/circle.hpp"

namespace tubegeo {

/// Coefficients of one coordinate of a certificate map
///   h(lambda) = conj(a) lambda^2 + b lambda + a,   a complex, b real.
/// On the circle, conj(lambda) h(lambda) = 2 Re(conj(a) e^{it}) + b is real;
/// that restriction is the "circle symbol" of (a, b).
struct QuadCoef {
    cplx a{0.0, 0.0};
    double b = 0.0;
};

/// Tolerance for the b = 2|a| boundary separating symbols with a circle
/// root from strictly positive ones.
inline constexpr double root_boundary_tol = 1e-10;

/// A certificate map with one QuadCoef per coordinate.
class QuadCertificate {
  public:
    QuadCertificate() = default;
    explicit QuadCertificate(std::vector<QuadCoef> coef) : coef_(std::move(coef)) {}

    int dimension() const { return static_cast<int>(coef_.size()); }
    const QuadCoef& coord(int l) const { return coef_.at(l); }
    const std::vector<QuadCoef>& coords() const { return coef_; }

    bool is_zero(double tol = 0.0) const;

    /// Componentwise evaluation of the entire map at any complex point.
    std::vector<cplx> eval(cplx lambda) const;
    cplx eval_coord(int l, cplx lambda) const;
    /// Derivative 2 conj(a) lambda + b per coordinate.
    cplx deriv_coord(int l, cplx lambda) const;

    /// Circle symbol of coordinate l at angle t.
    double symbol(int l, double t) const;
    /// All coordinate symbols at angle t.
    std::vector<double> symbol_vector(double t) const;

    /// Scale-normalized copy: divided by max over coordinates of
    /// max(|a_l|, |b_l|).  Predicates downstream are invariant under
    /// positive scaling; this fixes a representative for comparisons.
    QuadCertificate normalized() const;

  private:
    std::vector<QuadCoef> coef_;
};

/// 2 Re(conj(a) e^{it}) + b.
double circle_symbol(cplx a, double b, double t);

/// The set {t : circle symbol of (a,b) > 0}: empty when b <= -2|a|, a
/// single arc of half-width arccos(-b / 2|a|) centered at arg a otherwise,
/// the full circle when b >= 2|a| (the tangential zero at b = 2|a| has the
/// same ArcSet normal form as the full circle).  Rejects (0, 0).
ArcSet positivity_arc(cplx a, double b);

/// True iff the symbol is nonnegative on the whole circle: b >= 2|a| - tol.
bool is_nonneg_on_circle(cplx a, double b);

/// For a nonnegative symbol, its unique circle zero arg(a) + pi when
/// b = 2|a| within root_boundary_tol (and a != 0); nullopt when strictly
/// positive.  Throws for sign-changing symbols.
std::optional<double> circle_root(cplx a, double b);

/// The coordinate combination v1 h2 - v2 h1 of a 2-dimensional certificate:
/// a' = v1 a2 - v2 a1, b' = v1 b2 - v2 b1.  Its symbol is the membership
/// test det[conj(lambda) h(lambda), v] < 0 of the staircase arcs.
QuadCoef combine(const std::array<double, 2>& v, const QuadCertificate& h);

}  // namespace tubegeo
