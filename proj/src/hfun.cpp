#include "tubegeo/hfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tubegeo {

bool QuadCertificate::is_zero(double tol) const {
    for (const QuadCoef& c : coef_)
        if (std::abs(c.a) > tol || std::abs(c.b) > tol) return false;
    return true;
}

std::vector<cplx> QuadCertificate::eval(cplx lambda) const {
    std::vector<cplx> out(coef_.size());
    for (std::size_t l = 0; l < coef_.size(); ++l)
        out[l] = eval_coord(static_cast<int>(l), lambda);
    return out;
}

cplx QuadCertificate::eval_coord(int l, cplx lambda) const {
    const QuadCoef& c = coef_.at(l);
    return std::conj(c.a) * lambda * lambda + c.b * lambda + c.a;
}

cplx QuadCertificate::deriv_coord(int l, cplx lambda) const {
    const QuadCoef& c = coef_.at(l);
    return 2.0 * std::conj(c.a) * lambda + c.b;
}

double QuadCertificate::symbol(int l, double t) const {
    const QuadCoef& c = coef_.at(l);
    return circle_symbol(c.a, c.b, t);
}

std::vector<double> QuadCertificate::symbol_vector(double t) const {
    std::vector<double> out(coef_.size());
    for (std::size_t l = 0; l < coef_.size(); ++l)
        out[l] = symbol(static_cast<int>(l), t);
    return out;
}

QuadCertificate QuadCertificate::normalized() const {
    double scale = 0.0;
    for (const QuadCoef& c : coef_)
        scale = std::max({scale, std::abs(c.a), std::abs(c.b)});
    if (scale == 0.0) return *this;
    std::vector<QuadCoef> out = coef_;
    for (QuadCoef& c : out) {
        c.a /= scale;
        c.b /= scale;
    }
    return QuadCertificate(std::move(out));
}

double circle_symbol(cplx a, double b, double t) {
    return 2.0 * (a.real() * std::cos(t) + a.imag() * std::sin(t)) + b;
}

ArcSet positivity_arc(cplx a, double b) {
    double m = std::abs(a);
    if (m == 0.0 && b == 0.0)
        throw std::invalid_argument("positivity_arc: (a,b) = (0,0)");
    if (m == 0.0) return b > 0.0 ? ArcSet::full() : ArcSet::empty();
    // the tangential cases b = +-2|a| are a discrete dichotomy; resolve
    // them with the documented boundary tolerance so that downstream arc
    // measures are deterministic under rescaling round-off
    double boundary = root_boundary_tol * std::max({1.0, 2.0 * m, std::abs(b)});
    if (b <= -2.0 * m + boundary) return ArcSet::empty();
    if (b >= 2.0 * m - boundary) return ArcSet::full();
    double theta = std::arg(a);
    double half_width = std::acos(-b / (2.0 * m));
    return ArcSet(Arc(theta - half_width, 2.0 * half_width));
}

bool is_nonneg_on_circle(cplx a, double b) {
    return b >= 2.0 * std::abs(a) - 1e-12;
}

std::optional<double> circle_root(cplx a, double b) {
    double m = std::abs(a);
    if (m == 0.0 && b == 0.0)
        throw std::invalid_argument("circle_root: (a,b) = (0,0)");
    if (!is_nonneg_on_circle(a, b))
        throw std::invalid_argument("circle_root: symbol changes sign on the circle");
    double scale = std::max(m, std::abs(b));
    if (m > 0.0 && std::abs(b - 2.0 * m) < root_boundary_tol * std::max(1.0, scale))
        return normalize_angle(std::arg(a) + M_PI);
    return std::nullopt;
}

QuadCoef combine(const std::array<double, 2>& v, const QuadCertificate& h) {
    if (h.dimension() != 2)
        throw std::invalid_argument("combine: certificate must be 2-dimensional");
    const QuadCoef& h1 = h.coord(0);
    const QuadCoef& h2 = h.coord(1);
    QuadCoef out;
    out.a = v[0] * h2.a - v[1] * h1.a;
    out.b = v[0] * h2.b - v[1] * h1.b;
    return out;
}

}  // namespace tubegeo
