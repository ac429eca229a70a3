#include "tubegeo/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "tubegeo/detail/quadrature.hpp"

namespace tubegeo {

namespace {

cplx atom_kernel(cplx lambda0, cplx lambda) { return (lambda0 + lambda) / (lambda0 - lambda); }

cplx atom_kernel_deriv(cplx lambda0, cplx lambda) {
    cplx d = lambda0 - lambda;
    return 2.0 * lambda0 / (d * d);
}

void require_inside(cplx lambda, const char* who) {
    if (std::abs(lambda) >= 1.0)
        throw std::invalid_argument(std::string(who) + ": |lambda| must be < 1");
}

}  // namespace

cplx eval_halfplane_atom(const HalfPlaneAtom1D& g, cplx lambda) {
    cplx lambda0 = std::polar(1.0, g.lambda0_angle);
    return g.alpha / two_pi * atom_kernel(lambda0, lambda) + cplx(0.0, g.beta);
}

cplx eval_halfplane_atom_deriv(const HalfPlaneAtom1D& g, cplx lambda) {
    cplx lambda0 = std::polar(1.0, g.lambda0_angle);
    return g.alpha / two_pi * atom_kernel_deriv(lambda0, lambda);
}

cplx eval_halfplane_geodesic(double alpha, cplx lambda0, double beta, cplx lambda) {
    if (!(alpha < 0.0))
        throw std::invalid_argument("eval_halfplane_geodesic: alpha must be negative");
    if (std::abs(std::abs(lambda0) - 1.0) > 1e-12)
        throw std::invalid_argument("eval_halfplane_geodesic: lambda0 must lie on the circle");
    require_inside(lambda, "eval_halfplane_geodesic");
    return alpha / two_pi * atom_kernel(lambda0, lambda) + cplx(0.0, beta);
}

double phi_h_offset(cplx a, double b) {
    double m = std::abs(a);
    if (!(std::abs(b) < 2.0 * m))
        throw std::invalid_argument("phi_h_offset: requires |b| < 2|a|");
    return -b / (2.0 * m + std::sqrt(4.0 * m * m - b * b));
}

cplx eval_phi_h(cplx a, double b, cplx lambda) {
    require_inside(lambda, "eval_phi_h");
    double c = phi_h_offset(a, b);
    cplx u = std::conj(a) / std::abs(a);
    return strip_map_tau(cplx(0.0, 1.0) * mobius(c, u * lambda));
}

cplx eval_phi_h_deriv(cplx a, double b, cplx lambda) {
    require_inside(lambda, "eval_phi_h_deriv");
    double c = phi_h_offset(a, b);
    cplx u = std::conj(a) / std::abs(a);
    cplx x = u * lambda;
    cplx tc = mobius(c, x);
    cplx dtc = (1.0 - c * c) / ((1.0 - c * x) * (1.0 - c * x));
    return strip_map_tau_deriv(cplx(0.0, 1.0) * tc) * cplx(0.0, 1.0) * dtc * u;
}

KlisArcs klis_arcs(const StaircaseDomain& domain, const QuadCertificate& h) {
    if (h.dimension() != 2)
        throw std::invalid_argument("klis_arcs: certificate must be 2-dimensional");
    const int m = domain.facet_count();
    QuadCertificate hn = h.normalized();
    KlisArcs out;

    std::vector<QuadCoef> combined(m);
    for (int j = 1; j <= m; ++j) {
        QuadCoef g = combine(domain.normal(j), hn);
        double vscale = std::max(std::abs(domain.normal(j)[0]), std::abs(domain.normal(j)[1]));
        if (std::abs(g.a) < 1e-12 * vscale && std::abs(g.b) < 1e-12 * vscale) {
            out.degenerate_facet = j;
            return out;
        }
        combined[j - 1] = g;
    }

    for (int j = 0; j < m; ++j) out.C.push_back(positivity_arc(combined[j].a, combined[j].b));
    for (int j = 0; j + 1 < m; ++j) {
        if (!out.C[j + 1].subset_of(out.C[j]))
            throw std::invalid_argument("klis_arcs: arcs C_j are not nested");
        out.A.push_back(out.C[j].set_difference(out.C[j + 1]));
    }

    for (const QuadCoef& g : combined) {
        double mag = std::abs(g.a);
        double boundary = std::max(1.0, std::max(mag, std::abs(g.b))) * root_boundary_tol;
        if (mag < 1e-15) continue;  // constant symbol, no zero unless b = 0 (excluded)
        double theta = std::arg(g.a);
        if (g.b >= 2.0 * mag - boundary) {
            if (std::abs(g.b - 2.0 * mag) < boundary) out.B.push_back(normalize_angle(theta + M_PI));
        } else if (g.b <= -2.0 * mag + boundary) {
            if (std::abs(g.b + 2.0 * mag) < boundary) out.B.push_back(normalize_angle(theta));
        } else {
            double w = std::acos(-g.b / (2.0 * mag));
            out.B.push_back(normalize_angle(theta - w));
            out.B.push_back(normalize_angle(theta + w));
        }
    }
    std::sort(out.B.begin(), out.B.end());
    out.B.erase(std::unique(out.B.begin(), out.B.end(),
                            [](double x, double y) { return std::abs(x - y) < 1e-9; }),
                out.B.end());
    return out;
}

std::pair<int, int> klis_k1k2(const std::vector<double>& c) {
    const int m = static_cast<int>(c.size());
    const double tol = 1e-9;
    if (m < 2) throw std::invalid_argument("klis_k1k2: need at least two arc measures");
    for (int j = 0; j + 1 < m; ++j)
        if (c[j + 1] > c[j] + tol)
            throw std::invalid_argument("klis_k1k2: measures must be nonincreasing");
    if (std::abs(c.front() - two_pi) > tol)
        throw std::invalid_argument("klis_k1k2: measure(C_1) must be 2*pi");
    if (std::abs(c.back()) > tol)
        throw std::invalid_argument("klis_k1k2: measure(C_m) must be 0");
    int k1 = 1;
    for (int j = 0; j < m; ++j)
        if (std::abs(c[j] - two_pi) <= tol) k1 = j + 1;
    int k2 = m;
    for (int j = m - 1; j >= 0; --j)
        if (std::abs(c[j]) <= tol) k2 = j + 1;
    return {k1, k2};
}

std::array<cplx, 2> PreparedStaircase::value(cplx lambda) const {
    std::array<cplx, 2> out{cplx(base_point[0], 0.0), cplx(base_point[1], 0.0)};
    for (const StripTerm& t : terms) {
        cplx s = strip_map_tau(cplx(0.0, 1.0) * mobius(t.c, t.u * lambda));
        out[0] += t.coef[0] * s;
        out[1] += t.coef[1] * s;
    }
    for (int l = 0; l < 2; ++l) {
        if (spec.alpha[l] < 0.0)
            out[l] += spec.alpha[l] / two_pi *
                      atom_kernel(std::polar(1.0, spec.lambda_angle[l]), lambda);
        out[l] += cplx(0.0, spec.beta[l]);
    }
    return out;
}

std::array<cplx, 2> PreparedStaircase::deriv(cplx lambda) const {
    std::array<cplx, 2> out{cplx(0.0, 0.0), cplx(0.0, 0.0)};
    for (const StripTerm& t : terms) {
        cplx x = t.u * lambda;
        cplx dtc = (1.0 - t.c * t.c) / ((1.0 - t.c * x) * (1.0 - t.c * x));
        cplx ds = strip_map_tau_deriv(cplx(0.0, 1.0) * mobius(t.c, x)) * cplx(0.0, 1.0) * dtc * t.u;
        out[0] += t.coef[0] * ds;
        out[1] += t.coef[1] * ds;
    }
    for (int l = 0; l < 2; ++l)
        if (spec.alpha[l] < 0.0)
            out[l] += spec.alpha[l] / two_pi *
                      atom_kernel_deriv(std::polar(1.0, spec.lambda_angle[l]), lambda);
    return out;
}

PreparedStaircase prepare_staircase(const StaircaseIISpec& spec, const StaircaseDomain& domain,
                                    bool check_image) {
    if (spec.h.dimension() != 2)
        throw std::invalid_argument("staircase spec: certificate must be 2-dimensional");
    if (spec.h.is_zero(0.0))
        throw std::invalid_argument("staircase spec: certificate must not vanish identically");
    for (int l = 0; l < 2; ++l) {
        const QuadCoef& c = spec.h.coord(l);
        if (!is_nonneg_on_circle(c.a, c.b))
            throw std::invalid_argument("staircase spec: coordinate symbol changes sign");
        if (spec.alpha[l] > 0.0)
            throw std::invalid_argument("staircase spec: atom masses must be <= 0");
        if (spec.alpha[l] < 0.0) {
            auto root = circle_root(c.a, c.b);
            if (!root)
                throw std::invalid_argument(
                    "staircase spec: atom requires a symbol zero (b = 2|a|)");
            double d = std::abs(normalize_angle(spec.lambda_angle[l] - *root + M_PI) - M_PI);
            if (d > 1e-8)
                throw std::invalid_argument(
                    "staircase spec: atom angle must sit at the symbol zero");
        }
    }

    PreparedStaircase prep;
    prep.spec = spec;
    prep.domain = &domain;
    prep.arcs = klis_arcs(domain, spec.h);
    if (prep.arcs.degenerate_facet)
        throw std::invalid_argument(
            "staircase spec: combined symbol vanishes on facet " +
            std::to_string(*prep.arcs.degenerate_facet) + " (case (i), not a case-(ii) spec)");

    std::vector<double> measures;
    for (const ArcSet& c : prep.arcs.C) measures.push_back(c.measure());
    std::tie(prep.k1, prep.k2) = klis_k1k2(measures);
    prep.base_point = domain.vertex(prep.k1);

    for (int j = prep.k1 + 1; j <= prep.k2 - 1; ++j) {
        QuadCoef g = combine(domain.normal(j), spec.h);
        PreparedStaircase::StripTerm term;
        term.coef = {domain.vertex(j)[0] - domain.vertex(j - 1)[0],
                     domain.vertex(j)[1] - domain.vertex(j - 1)[1]};
        term.u = std::conj(g.a) / std::abs(g.a);
        term.c = phi_h_offset(g.a, g.b);
        prep.terms.push_back(term);
    }

    if (check_image) {
        // polar grid plus radial probes near the atom angles; a sampled
        // semi-decision of phi(D) subset D
        for (int ir = 0; ir < 16; ++ir) {
            double r = (ir + 0.5) / 16.0 * 0.995;
            for (int it = 0; it < 64; ++it) {
                double t = two_pi * (it + 0.31830988618) / 64.0;
                auto z = prep.value(std::polar(r, t));
                if (!staircase_contains(domain, {z[0].real(), z[1].real()}))
                    throw std::invalid_argument(
                        "staircase spec: image leaves the domain (sampled check)");
            }
        }
        for (int l = 0; l < 2; ++l) {
            if (!(spec.alpha[l] < 0.0)) continue;
            for (double dt : {-0.3, -0.1, -0.03, 0.03, 0.1, 0.3}) {
                auto z = prep.value(std::polar(1.0 - 1e-4, spec.lambda_angle[l] + dt));
                if (!staircase_contains(domain, {z[0].real(), z[1].real()}))
                    throw std::invalid_argument(
                        "staircase spec: image leaves the domain near an atom angle");
            }
        }
    }
    return prep;
}

std::array<cplx, 2> eval_staircase_geodesic(const StaircaseIISpec& spec,
                                            const StaircaseDomain& domain, cplx lambda) {
    require_inside(lambda, "eval_staircase_geodesic");
    return prepare_staircase(spec, domain).value(lambda);
}

Vec2 disc_base_boundary_direction(const std::array<cplx, 2>& a, const std::array<double, 2>& b,
                                  double t) {
    Vec2 v{circle_symbol(a[0], b[0], t) / 2.0, circle_symbol(a[1], b[1], t) / 2.0};
    double norm = std::hypot(v[0], v[1]);
    if (norm < 1e-14)
        throw std::invalid_argument("disc_base_boundary_direction: direction field vanishes");
    return {v[0] / norm, v[1] / norm};
}

namespace {

/// Trapezoidal Fourier coefficients of the boundary direction field.  The
/// Herglotz kernel expands as 1 + 2 sum_k (lambda e^{-it})^k, so
/// phi_l(lambda) = c_{l,0} + 2 sum_{k>=1} c_{l,k} lambda^k with the series
/// tail bounded by the coefficient tail uniformly in |lambda| < 1.
struct DiscBaseSeries {
    std::array<std::vector<cplx>, 2> coef;
};

DiscBaseSeries disc_base_series(const DiscBaseSpec& spec) {
    for (int nodes = 1024; nodes <= 8192; nodes *= 2) {
        const int terms = nodes / 4;
        std::vector<Vec2> samples(nodes);
        for (int j = 0; j < nodes; ++j)
            samples[j] = disc_base_boundary_direction(spec.a, spec.b, two_pi * j / nodes);
        DiscBaseSeries s;
        for (int l = 0; l < 2; ++l) {
            s.coef[l].resize(terms + 1);
            for (int k = 0; k <= terms; ++k) {
                cplx acc(0.0, 0.0);
                for (int j = 0; j < nodes; ++j)
                    acc += samples[j][l] * std::polar(1.0, -k * two_pi * j / nodes);
                s.coef[l][k] = acc / static_cast<double>(nodes);
            }
        }
        double tail = 0.0;
        for (int l = 0; l < 2; ++l)
            for (int k = terms - 8; k <= terms; ++k) tail += std::abs(s.coef[l][k]);
        if (tail < 1e-13) return s;
    }
    throw std::runtime_error(
        "eval_disc_base_geodesic: quadrature budget exceeded (direction field too rough)");
}

std::array<cplx, 2> disc_base_series_eval(const DiscBaseSeries& s, const DiscBaseSpec& spec,
                                          cplx lambda, bool derivative) {
    require_inside(lambda, "eval_disc_base_geodesic");
    std::array<cplx, 2> out{};
    for (int l = 0; l < 2; ++l) {
        const auto& c = s.coef[l];
        if (derivative) {
            cplx acc(0.0, 0.0);
            cplx pow(1.0, 0.0);  // lambda^{k-1}
            for (std::size_t k = 1; k < c.size(); ++k) {
                acc += 2.0 * static_cast<double>(k) * c[k] * pow;
                pow *= lambda;
            }
            out[l] = acc;
        } else {
            cplx acc = c[0];
            cplx pow = lambda;
            for (std::size_t k = 1; k < c.size(); ++k) {
                acc += 2.0 * c[k] * pow;
                pow *= lambda;
            }
            out[l] = acc + cplx(0.0, spec.im_offset[l]);
        }
    }
    return out;
}

std::array<cplx, 2> disc_base_integral(const DiscBaseSpec& spec, cplx lambda, bool derivative) {
    return disc_base_series_eval(disc_base_series(spec), spec, lambda, derivative);
}

}  // namespace

std::array<cplx, 2> eval_disc_base_geodesic(const DiscBaseSpec& spec, cplx lambda) {
    if (std::abs(spec.a[0]) + std::abs(spec.a[1]) + std::abs(spec.b[0]) + std::abs(spec.b[1]) == 0.0)
        throw std::invalid_argument("disc base spec: (a, b) must not vanish");
    return disc_base_integral(spec, lambda, false);
}

namespace {

void validate_halfplane_spec(const HalfPlaneAtomSpec& spec) {
    if (spec.n < 1 || spec.coordinate < 0 || spec.coordinate >= spec.n)
        throw std::invalid_argument("half-plane spec: bad dimensions");
    if (static_cast<int>(spec.free.size()) != spec.n - 1)
        throw std::invalid_argument("half-plane spec: need n-1 free components");
    if (!(spec.atom.alpha < 0.0))
        throw std::invalid_argument("half-plane spec: alpha must be negative");
    for (const FreeComponent& f : spec.free) {
        if (f.kind == FreeComponent::Kind::constant && !(f.constant.real() < 0.0))
            throw std::invalid_argument("half-plane spec: free constant must have Re < 0");
        if (f.kind == FreeComponent::Kind::atom && !(f.atom.alpha < 0.0))
            throw std::invalid_argument("half-plane spec: free atom mass must be negative");
    }
}

cplx eval_free(const FreeComponent& f, cplx lambda) {
    return f.kind == FreeComponent::Kind::constant ? f.constant : eval_halfplane_atom(f.atom, lambda);
}

cplx eval_free_deriv(const FreeComponent& f, cplx lambda) {
    return f.kind == FreeComponent::Kind::constant ? cplx(0.0, 0.0)
                                                   : eval_halfplane_atom_deriv(f.atom, lambda);
}

void validate_strip_spec(const StripSpec& spec) {
    if (!(std::abs(spec.b) < 2.0 * std::abs(spec.a)))
        throw std::invalid_argument("strip spec: requires |b| < 2|a|");
}

struct StaircaseIFrame {
    Vec2 p;  // facet vertex p_j
    Vec2 u;  // v_j / <v_j, v_j>
    Vec2 w;  // unit vector orthogonal to v_j
};

StaircaseIFrame staircase_i_frame(const StaircaseISpec& spec, const StaircaseDomain& domain) {
    if (spec.facet < 1 || spec.facet > domain.facet_count())
        throw std::invalid_argument("case-(i) spec: facet index out of range");
    if (!(spec.g.alpha < 0.0))
        throw std::invalid_argument("case-(i) spec: alpha must be negative");
    const Vec2& v = domain.normal(spec.facet);
    double n2 = dot2(v, v);
    StaircaseIFrame f;
    f.p = domain.vertex(spec.facet);
    f.u = {v[0] / n2, v[1] / n2};
    double n = std::sqrt(n2);
    f.w = {-v[1] / n, v[0] / n};
    return f;
}

}  // namespace

CircleMeasure boundary_measure_of(const GeodesicSpec& spec, const TubeDomain& domain) {
    return std::visit(
        [&](const auto& s) -> CircleMeasure {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, HalfPlaneAtomSpec>) {
                validate_halfplane_spec(s);
                CircleMeasure mu(s.n);
                std::vector<double> mass(s.n, 0.0);
                mass[s.coordinate] = s.atom.alpha;
                mu.add_atom(s.atom.lambda0_angle, mass);
                int k = 0;
                for (int l = 0; l < s.n; ++l) {
                    if (l == s.coordinate) continue;
                    const FreeComponent& f = s.free[k++];
                    if (f.kind == FreeComponent::Kind::constant) {
                        std::vector<double> w(s.n, 0.0);
                        w[l] = f.constant.real();
                        mu.add_piece(Arc::full(), w);
                    } else {
                        std::vector<double> m(s.n, 0.0);
                        m[l] = f.atom.alpha;
                        mu.add_atom(f.atom.lambda0_angle, m);
                    }
                }
                return mu;
            } else if constexpr (std::is_same_v<T, StripSpec>) {
                validate_strip_spec(s);
                CircleMeasure mu(1);
                for (const Arc& arc : positivity_arc(s.a, s.b).arcs())
                    mu.add_piece(arc, {1.0});
                return mu;
            } else if constexpr (std::is_same_v<T, StaircaseIISpec>) {
                const auto* d = std::get_if<StaircaseDomain>(&domain);
                if (!d)
                    throw std::invalid_argument("boundary_measure_of: staircase domain required");
                PreparedStaircase prep = prepare_staircase(s, *d, false);
                CircleMeasure mu(2);
                mu.add_piece(Arc::full(), {prep.base_point[0], prep.base_point[1]});
                for (int j = prep.k1 + 1; j <= prep.k2 - 1; ++j) {
                    Vec2 coef{d->vertex(j)[0] - d->vertex(j - 1)[0],
                              d->vertex(j)[1] - d->vertex(j - 1)[1]};
                    for (const Arc& arc : prep.arcs.C[j - 1].arcs())
                        mu.add_piece(arc, {coef[0], coef[1]});
                }
                for (int l = 0; l < 2; ++l) {
                    if (!(s.alpha[l] < 0.0)) continue;
                    std::vector<double> mass(2, 0.0);
                    mass[l] = s.alpha[l];
                    mu.add_atom(s.lambda_angle[l], mass);
                }
                return mu;
            } else if constexpr (std::is_same_v<T, StaircaseISpec>) {
                const auto* d = std::get_if<StaircaseDomain>(&domain);
                if (!d)
                    throw std::invalid_argument("boundary_measure_of: staircase domain required");
                if (std::abs(s.transverse.c1) != 0.0)
                    throw std::invalid_argument(
                        "boundary_measure_of: case-(i) transverse term with lambda dependence "
                        "lies outside the measure class");
                StaircaseIFrame f = staircase_i_frame(s, *d);
                CircleMeasure mu(2);
                double t0 = s.transverse.c0.real();
                mu.add_piece(Arc::full(), {f.p[0] + t0 * f.w[0], f.p[1] + t0 * f.w[1]});
                mu.add_atom(s.g.lambda0_angle, {s.g.alpha * f.u[0], s.g.alpha * f.u[1]});
                return mu;
            } else {
                throw std::invalid_argument(
                    "boundary_measure_of: the disc-base density lies outside the "
                    "piecewise-constant measure class (quadrature path only)");
            }
        },
        spec);
}

std::vector<double> im_offset_of(const GeodesicSpec& spec, const TubeDomain& domain) {
    return std::visit(
        [&](const auto& s) -> std::vector<double> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, HalfPlaneAtomSpec>) {
                std::vector<double> out(s.n, 0.0);
                out[s.coordinate] = s.atom.beta;
                int k = 0;
                for (int l = 0; l < s.n; ++l) {
                    if (l == s.coordinate) continue;
                    const FreeComponent& f = s.free[k++];
                    out[l] = f.kind == FreeComponent::Kind::constant ? f.constant.imag()
                                                                     : f.atom.beta;
                }
                return out;
            } else if constexpr (std::is_same_v<T, StripSpec>) {
                return {s.im_offset};
            } else if constexpr (std::is_same_v<T, StaircaseIISpec>) {
                return {s.beta[0], s.beta[1]};
            } else if constexpr (std::is_same_v<T, StaircaseISpec>) {
                const auto* d = std::get_if<StaircaseDomain>(&domain);
                if (!d) throw std::invalid_argument("im_offset_of: staircase domain required");
                StaircaseIFrame f = staircase_i_frame(s, *d);
                return {s.g.beta * f.u[0] + s.transverse.c0.imag() * f.w[0],
                        s.g.beta * f.u[1] + s.transverse.c0.imag() * f.w[1]};
            } else {
                return {s.im_offset[0], s.im_offset[1]};
            }
        },
        spec);
}

QuadCertificate certificate_of(const GeodesicSpec& spec, const TubeDomain& domain) {
    return std::visit(
        [&](const auto& s) -> QuadCertificate {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, HalfPlaneAtomSpec>) {
                // h_{j0}(lambda) = -conj(lambda0)(lambda - lambda0)^2, zero
                // elsewhere: a = -lambda0, b = 2
                std::vector<QuadCoef> coef(s.n);
                coef[s.coordinate] = {-std::polar(1.0, s.atom.lambda0_angle), 2.0};
                return QuadCertificate(std::move(coef));
            } else if constexpr (std::is_same_v<T, StripSpec>) {
                return QuadCertificate({{s.a, s.b}});
            } else if constexpr (std::is_same_v<T, StaircaseIISpec>) {
                return s.h;
            } else if constexpr (std::is_same_v<T, StaircaseISpec>) {
                // h = h_g * v_j with h_g the 1-D half-plane certificate
                const auto* d = std::get_if<StaircaseDomain>(&domain);
                if (!d) throw std::invalid_argument("certificate_of: staircase domain required");
                const Vec2& v = d->normal(s.facet);
                cplx a0 = -std::polar(1.0, s.g.lambda0_angle);
                return QuadCertificate({{v[0] * a0, 2.0 * v[0]}, {v[1] * a0, 2.0 * v[1]}});
            } else {
                return QuadCertificate({{s.a[0], 2.0 * s.b[0]}, {s.a[1], 2.0 * s.b[1]}});
            }
        },
        spec);
}

GeodesicMap make_map(const GeodesicSpec& spec, const TubeDomain& domain) {
    return std::visit(
        [&](const auto& s) -> GeodesicMap {
            using T = std::decay_t<decltype(s)>;
            GeodesicMap map;
            if constexpr (std::is_same_v<T, HalfPlaneAtomSpec>) {
                validate_halfplane_spec(s);
                map.n = s.n;
                map.value = [s](cplx lambda) {
                    std::vector<cplx> out(s.n);
                    out[s.coordinate] = eval_halfplane_atom(s.atom, lambda);
                    int k = 0;
                    for (int l = 0; l < s.n; ++l)
                        if (l != s.coordinate) out[l] = eval_free(s.free[k++], lambda);
                    return out;
                };
                map.deriv = [s](cplx lambda) {
                    std::vector<cplx> out(s.n);
                    out[s.coordinate] = eval_halfplane_atom_deriv(s.atom, lambda);
                    int k = 0;
                    for (int l = 0; l < s.n; ++l)
                        if (l != s.coordinate) out[l] = eval_free_deriv(s.free[k++], lambda);
                    return out;
                };
            } else if constexpr (std::is_same_v<T, StripSpec>) {
                validate_strip_spec(s);
                map.n = 1;
                map.value = [s](cplx lambda) {
                    return std::vector<cplx>{eval_phi_h(s.a, s.b, lambda) +
                                             cplx(0.0, s.im_offset)};
                };
                map.deriv = [s](cplx lambda) {
                    return std::vector<cplx>{eval_phi_h_deriv(s.a, s.b, lambda)};
                };
            } else if constexpr (std::is_same_v<T, StaircaseIISpec>) {
                const auto* d = std::get_if<StaircaseDomain>(&domain);
                if (!d) throw std::invalid_argument("make_map: staircase domain required");
                auto prep = std::make_shared<PreparedStaircase>(prepare_staircase(s, *d));
                map.n = 2;
                map.value = [prep](cplx lambda) {
                    auto v = prep->value(lambda);
                    return std::vector<cplx>{v[0], v[1]};
                };
                map.deriv = [prep](cplx lambda) {
                    auto v = prep->deriv(lambda);
                    return std::vector<cplx>{v[0], v[1]};
                };
            } else if constexpr (std::is_same_v<T, StaircaseISpec>) {
                const auto* d = std::get_if<StaircaseDomain>(&domain);
                if (!d) throw std::invalid_argument("make_map: staircase domain required");
                StaircaseIFrame f = staircase_i_frame(s, *d);
                map.n = 2;
                map.value = [s, f](cplx lambda) {
                    cplx g = eval_halfplane_atom(s.g, lambda);
                    cplx t = s.transverse.c0 + s.transverse.c1 * lambda;
                    return std::vector<cplx>{f.p[0] + g * f.u[0] + t * f.w[0],
                                             f.p[1] + g * f.u[1] + t * f.w[1]};
                };
                map.deriv = [s, f](cplx lambda) {
                    cplx dg = eval_halfplane_atom_deriv(s.g, lambda);
                    cplx dt = s.transverse.c1;
                    return std::vector<cplx>{dg * f.u[0] + dt * f.w[0],
                                             dg * f.u[1] + dt * f.w[1]};
                };
            } else {
                map.n = 2;
                DiscBaseSpec copy = s;
                auto series = std::make_shared<DiscBaseSeries>(disc_base_series(copy));
                map.value = [copy, series](cplx lambda) {
                    auto v = disc_base_series_eval(*series, copy, lambda, false);
                    return std::vector<cplx>{v[0], v[1]};
                };
                map.deriv = [copy, series](cplx lambda) {
                    auto v = disc_base_series_eval(*series, copy, lambda, true);
                    return std::vector<cplx>{v[0], v[1]};
                };
            }
            return map;
        },
        spec);
}

namespace {

int matrix_rank(std::vector<std::vector<double>> a) {
    const int rows = static_cast<int>(a.size());
    const int cols = rows ? static_cast<int>(a[0].size()) : 0;
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int pivot = -1;
        double best = 1e-12;
        for (int r = rank; r < rows; ++r)
            if (std::abs(a[r][c]) > best) {
                best = std::abs(a[r][c]);
                pivot = r;
            }
        if (pivot < 0) continue;
        std::swap(a[rank], a[pivot]);
        for (int r = rank + 1; r < rows; ++r) {
            double factor = a[r][c] / a[rank][c];
            for (int cc = c; cc < cols; ++cc) a[r][cc] -= factor * a[rank][cc];
        }
        ++rank;
    }
    return rank;
}

}  // namespace

GeodesicMap project(const std::vector<std::vector<double>>& V, const GeodesicMap& phi) {
    const int m = static_cast<int>(V.size());
    if (m < 1) throw std::invalid_argument("project: empty matrix");
    for (const auto& row : V)
        if (static_cast<int>(row.size()) != phi.n)
            throw std::invalid_argument("project: column count mismatch");
    if (matrix_rank(V) < m)
        throw std::invalid_argument("project: matrix must have full row rank");

    auto apply = [V, m](const std::vector<cplx>& x) {
        std::vector<cplx> y(m, cplx(0.0, 0.0));
        for (int i = 0; i < m; ++i)
            for (std::size_t j = 0; j < x.size(); ++j) y[i] += V[i][j] * x[j];
        return y;
    };
    GeodesicMap out;
    out.n = m;
    out.value = [apply, inner = phi.value](cplx lambda) { return apply(inner(lambda)); };
    out.deriv = [apply, inner = phi.deriv](cplx lambda) { return apply(inner(lambda)); };
    return out;
}

}  // namespace tubegeo
