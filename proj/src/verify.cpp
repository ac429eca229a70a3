#include "tubegeo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tubegeo/detail/parallel.hpp"

namespace tubegeo {

const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        default: return "inconclusive";
    }
}

CheckStatus VerificationReport::overall() const {
    CheckStatus out = CheckStatus::pass;
    for (const ConditionResult& c : conditions) {
        if (c.status == CheckStatus::fail) return CheckStatus::fail;
        if (c.status == CheckStatus::inconclusive) out = CheckStatus::inconclusive;
    }
    return out;
}

const ConditionResult* VerificationReport::find(const std::string& name) const {
    for (const ConditionResult& c : conditions)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

constexpr double golden = 0.6180339887498949;

std::vector<cplx> to_tube_point(const std::vector<double>& re, double im) {
    std::vector<cplx> z(re.size());
    for (std::size_t l = 0; l < re.size(); ++l) z[l] = cplx(re[l], im * (1.0 + l));
    return z;
}

}  // namespace

std::vector<std::vector<cplx>> domain_z_samples(const TubeDomain& domain, int interior_count,
                                                unsigned seed) {
    const double eps = 1e-3;
    std::vector<std::vector<cplx>> out;
    auto frac = [](double x) { return x - std::floor(x); };
    double state = 0.12345 + 1e-4 * static_cast<double>(seed % 997);

    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, HalfPlaneProduct>) {
                for (int j = 0; j < d.n; ++j) {
                    std::vector<double> re(d.n, -1.0);
                    re[j] = -eps;
                    out.push_back(to_tube_point(re, 0.3));
                }
                out.push_back(to_tube_point(std::vector<double>(d.n, -eps), -0.2));
                for (int i = 0; i < interior_count; ++i) {
                    std::vector<double> re(d.n);
                    for (double& x : re) {
                        state = frac(state + golden);
                        x = -0.05 - 4.0 * state;
                    }
                    out.push_back(to_tube_point(re, 0.1 * i));
                }
            } else if constexpr (std::is_same_v<T, StripDomain>) {
                out.push_back({cplx(eps, 0.7)});
                out.push_back({cplx(1.0 - eps, -1.3)});
                for (int i = 0; i < interior_count; ++i) {
                    state = frac(state + golden);
                    out.push_back({cplx(eps + (1.0 - 2.0 * eps) * state, 0.2 * i)});
                }
            } else if constexpr (std::is_same_v<T, StaircaseDomain>) {
                const int m = d.facet_count();
                auto inward = [&](Vec2 x, const Vec2& v) {
                    double n = std::hypot(v[0], v[1]);
                    return Vec2{x[0] - eps * v[0] / n, x[1] - eps * v[1] / n};
                };
                // one point per facet, pushed inward off a mid-facet spot
                for (int j = 1; j <= m; ++j) {
                    Vec2 a = d.vertex(j - 1), b = d.vertex(j);
                    Vec2 mid{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
                    if (j == 1) mid = {0.0, d.vertex(1)[1] - 1.0};
                    if (j == m) mid = {d.vertex(m - 1)[0] - 1.0, 0.0};
                    Vec2 x = inward(mid, d.normal(j));
                    if (staircase_contains(d, x))
                        out.push_back(to_tube_point({x[0], x[1]}, 0.4));
                }
                // one point per interior vertex, pushed in along the bisector
                for (int j = 1; j <= m - 1; ++j) {
                    Vec2 vj = d.normal(j), vj1 = d.normal(j + 1);
                    double nj = std::hypot(vj[0], vj[1]), nj1 = std::hypot(vj1[0], vj1[1]);
                    Vec2 bis{vj[0] / nj + vj1[0] / nj1, vj[1] / nj + vj1[1] / nj1};
                    double n = std::hypot(bis[0], bis[1]);
                    Vec2 x{d.vertex(j)[0] - eps * bis[0] / n, d.vertex(j)[1] - eps * bis[1] / n};
                    if (staircase_contains(d, x))
                        out.push_back(to_tube_point({x[0], x[1]}, -0.6));
                }
                for (int i = 0; i < interior_count; ++i) {
                    state = frac(state + golden);
                    double u = state;
                    state = frac(state + golden);
                    double v = state;
                    Vec2 x{d.vertex(1)[0] - 0.2 - 3.0 * u, d.vertex(m - 1)[1] - 0.2 - 3.0 * v};
                    if (staircase_contains(d, x))
                        out.push_back(to_tube_point({x[0], x[1]}, 0.15 * i));
                }
            } else {
                for (int k = 0; k < 8; ++k) {
                    double t = two_pi * (k + 0.25) / 8.0;
                    out.push_back(to_tube_point(
                        {(1.0 - eps) * std::cos(t), (1.0 - eps) * std::sin(t)}, 0.3));
                }
                for (int i = 0; i < interior_count; ++i) {
                    state = frac(state + golden);
                    double r = 0.9 * std::sqrt(state);
                    state = frac(state + golden);
                    double t = two_pi * state;
                    out.push_back(to_tube_point({r * std::cos(t), r * std::sin(t)}, -0.1 * i));
                }
            }
        },
        domain);
    return out;
}

namespace {

struct SymbolCombo {
    cplx a{0.0, 0.0};
    double b = 0.0;
    // max of 2 Re(conj(a) e^{it}) + b over the closed arc: endpoints plus
    // the interior cosine peak
    double max_on(const Arc& arc) const {
        double best = std::max(circle_symbol(a, b, arc.start), circle_symbol(a, b, arc.end()));
        if (std::abs(a) > 0.0 && arc.contains(std::arg(a)))
            best = std::max(best, 2.0 * std::abs(a) + b);
        return best;
    }
};

SymbolCombo combo_for(const QuadCertificate& h, const std::vector<double>& coef) {
    SymbolCombo c;
    for (int l = 0; l < h.dimension(); ++l) {
        c.a += coef[l] * h.coord(l).a;
        c.b += coef[l] * h.coord(l).b;
    }
    return c;
}

}  // namespace

VerificationReport check_measure_condition(const CircleMeasure& mu, const QuadCertificate& h,
                                           const TubeDomain& domain,
                                           const std::vector<std::vector<cplx>>& z_samples) {
    if (h.is_zero(0.0))
        throw std::invalid_argument("check_measure_condition: certificate must not vanish");
    if (mu.dimension() != h.dimension())
        throw std::invalid_argument("check_measure_condition: dimension mismatch");
    const int n = mu.dimension();

    VerificationReport report;
    ConditionResult cond;
    cond.name = "measure-negativity";
    cond.tolerance = 1e-12;

    if (z_samples.empty()) {
        cond.status = CheckStatus::inconclusive;
        Witness w;
        w.detail = "no z samples supplied";
        cond.witness = w;
        report.conditions.push_back(cond);
        return report;
    }

    auto flat = mu.flattened();
    for (const auto& z : z_samples) {
        if (static_cast<int>(z.size()) != n)
            throw std::invalid_argument("check_measure_condition: z dimension mismatch");
        if (!domain_contains(domain, z))
            throw std::invalid_argument("check_measure_condition: z sample outside the domain");

        // density part of nu_z, arc by arc of the flattened partition
        for (const DensityPiece& p : flat) {
            std::vector<double> coef(n);
            for (int l = 0; l < n; ++l) coef[l] = z[l].real() - p.weight[l];
            SymbolCombo c = combo_for(h, coef);
            double scale = 1.0 + 2.0 * std::abs(c.a) + std::abs(c.b);
            double extremum = c.max_on(p.arc);
            if (extremum > cond.tolerance * scale) {
                cond.status = CheckStatus::fail;
                Witness w;
                w.z = z;
                w.angle = p.arc.midpoint();
                w.value = extremum;
                w.detail = "density part positive on an arc";
                cond.witness = w;
                report.conditions.push_back(cond);
                return report;
            }
        }
        // atom part: the coefficient of the Dirac term at each atom angle
        // is -sum_l s_l(angle) mass_l
        for (const MeasureAtom& a : mu.atoms()) {
            double coeff = 0.0, scale = 1.0;
            for (int l = 0; l < n; ++l) {
                coeff -= h.symbol(l, a.angle) * a.mass[l];
                scale += std::abs(h.symbol(l, a.angle) * a.mass[l]);
            }
            if (coeff > cond.tolerance * scale) {
                cond.status = CheckStatus::fail;
                Witness w;
                w.z = z;
                w.angle = a.angle;
                w.value = coeff;
                w.detail = "atom coefficient positive";
                cond.witness = w;
                report.conditions.push_back(cond);
                return report;
            }
        }
    }
    report.conditions.push_back(cond);
    return report;
}

VerificationReport check_measure_condition_density(
    const std::function<std::vector<double>(double)>& density, const QuadCertificate& h,
    const TubeDomain& domain, const std::vector<std::vector<cplx>>& z_samples, int angle_grid) {
    if (h.is_zero(0.0))
        throw std::invalid_argument("check_measure_condition_density: certificate must not vanish");
    const int n = h.dimension();

    VerificationReport report;
    ConditionResult cond;
    cond.name = "measure-negativity";
    cond.tolerance = 1e-10;

    for (const auto& z : z_samples) {
        if (!domain_contains(domain, z))
            throw std::invalid_argument("check_measure_condition_density: z outside the domain");
        for (int k = 0; k < angle_grid; ++k) {
            double t = two_pi * (k + 0.5) / angle_grid;
            std::vector<double> w = density(t);
            double value = 0.0, scale = 1.0;
            for (int l = 0; l < n; ++l) {
                value += h.symbol(l, t) * (z[l].real() - w[l]);
                scale += std::abs(h.symbol(l, t));
            }
            if (value > cond.tolerance * scale) {
                cond.status = CheckStatus::fail;
                Witness ww;
                ww.z = z;
                ww.angle = t;
                ww.value = value;
                ww.detail = "sampled density part positive";
                cond.witness = ww;
                report.conditions.push_back(cond);
                return report;
            }
        }
    }
    report.conditions.push_back(cond);
    return report;
}

RadialEstimate radial_limit(const GeodesicMap& phi, double angle, int k_min, int k_max) {
    RadialEstimate est;
    std::vector<std::vector<cplx>> xs;
    for (int k = k_min; k <= k_max; ++k) {
        double r = 1.0 - std::pow(2.0, -k);
        xs.push_back(phi.value(std::polar(r, angle)));
    }
    const int n = phi.n;
    const std::size_t count = xs.size();

    std::vector<double> dnorm(count - 1, 0.0);
    double scale = 1e-12;
    for (std::size_t i = 0; i + 1 < count; ++i) {
        for (int l = 0; l < n; ++l) {
            dnorm[i] = std::max(dnorm[i], std::abs(xs[i + 1][l] - xs[i][l]));
            scale = std::max(scale, std::abs(xs[i][l]));
        }
    }
    int growing = 0;
    for (std::size_t i = dnorm.size() >= 4 ? dnorm.size() - 4 : 0; i + 1 < dnorm.size(); ++i)
        if (dnorm[i + 1] > dnorm[i]) ++growing;
    if (growing >= 3 && dnorm.back() > 1e-6 * scale) {
        est.diverged = true;
        est.uncertainty = dnorm.back();
        est.value = xs.back();
        return est;
    }

    // componentwise Aitken extrapolation on the last two triples; the
    // disagreement of the two estimates is the uncertainty
    auto aitken = [&](std::size_t last, int l) -> cplx {
        cplx x0 = xs[last - 2][l], x1 = xs[last - 1][l], x2 = xs[last][l];
        cplx d1 = x1 - x0, d2 = x2 - x1;
        cplx denom = d2 - d1;
        if (std::abs(denom) < 1e-15 * (std::abs(d1) + std::abs(d2)) || denom == cplx(0.0, 0.0))
            return x2;
        return x2 - d2 * d2 / denom;
    };
    est.value.resize(n);
    double uncert = 0.0;
    for (int l = 0; l < n; ++l) {
        cplx cur = aitken(count - 1, l);
        cplx prev = aitken(count - 2, l);
        est.value[l] = cur;
        uncert = std::max(uncert, std::abs(cur - prev));
    }
    est.uncertainty = uncert + 1e-14 * scale;
    return est;
}

std::vector<double> make_radial_angle_grid(int count, const std::vector<double>& excluded,
                                           double margin) {
    std::vector<double> grid;
    for (int i = 0; i < count; ++i) {
        double t = normalize_angle(two_pi * (i + golden) / count);
        bool ok = true;
        for (double e : excluded) {
            double d = std::abs(normalize_angle(t - e + M_PI) - M_PI);
            if (d < margin) {
                ok = false;
                break;
            }
        }
        if (ok) grid.push_back(t);
    }
    return grid;
}

double radial_condition_ii_value(const GeodesicMap& phi, const QuadCertificate& h, cplx lambda) {
    if (std::abs(lambda) >= 1.0 || lambda == cplx(0.0, 0.0))
        throw std::invalid_argument("radial_condition_ii_value: need lambda in the punctured disc");
    auto at0 = phi.value(cplx(0.0, 0.0));
    auto at = phi.value(lambda);
    cplx acc(0.0, 0.0);
    for (int l = 0; l < phi.n; ++l)
        acc += (at0[l] - at[l]) / lambda * h.eval_coord(l, lambda);
    return acc.real();
}

VerificationReport check_radial_conditions(const GeodesicMap& phi, const QuadCertificate& h,
                                           const TubeDomain& domain,
                                           const std::vector<std::vector<cplx>>& z_samples,
                                           const RadialCheckOptions& options) {
    if (h.is_zero(0.0))
        throw std::invalid_argument("check_radial_conditions: certificate must not vanish");
    for (const auto& z : z_samples)
        if (!domain_contains(domain, z))
            throw std::invalid_argument("check_radial_conditions: z sample outside the domain");

    VerificationReport report;
    std::vector<double> grid = options.angle_grid;
    if (grid.empty()) grid = make_radial_angle_grid(64, options.excluded_angles);

    // ---- condition (i): boundary normal inequality via radial limits ----
    ConditionResult ci;
    ci.name = "radial-condition-i";
    ci.tolerance = 0.0;

    std::vector<RadialEstimate> estimates(grid.size());
    detail::parallel_for(grid.size(), [&](std::size_t i) {
        estimates[i] = radial_limit(phi, grid[i], options.k_min, options.k_max);
    });

    for (std::size_t i = 0; i < grid.size() && ci.status != CheckStatus::fail; ++i) {
        const RadialEstimate& est = estimates[i];
        if (est.diverged) {
            ci.status = CheckStatus::inconclusive;
            Witness w;
            w.angle = grid[i];
            w.detail = "divergent radial estimate at a non-excluded angle";
            ci.witness = w;
            continue;
        }
        for (const auto& z : z_samples) {
            double value = 0.0, spread = 0.0;
            for (int l = 0; l < phi.n; ++l) {
                double s = h.symbol(l, grid[i]);
                value += s * (z[l].real() - est.value[l].real());
                spread += std::abs(s);
            }
            double noise = 10.0 * spread * est.uncertainty + 1e-13;
            if (value > noise) {
                ci.status = CheckStatus::fail;
                Witness w;
                w.z = z;
                w.angle = grid[i];
                w.value = value;
                w.detail = "boundary inequality violated";
                ci.witness = w;
                break;
            }
            if (value > -noise && ci.status == CheckStatus::pass) {
                ci.status = CheckStatus::inconclusive;
                Witness w;
                w.z = z;
                w.angle = grid[i];
                w.value = value;
                w.detail = "boundary inequality within estimator noise";
                ci.witness = w;
            }
        }
    }
    report.conditions.push_back(ci);

    // ---- condition (ii): interior inequality, exact evaluation; the scan
    // starts at lambda = 1/2 ----
    ConditionResult cii;
    cii.name = "radial-condition-ii";
    cii.tolerance = 0.0;
    bool done = false;
    for (double r : options.interior_radii) {
        for (int k = 0; k < options.interior_angles && !done; ++k) {
            cplx lam = std::polar(r, two_pi * k / options.interior_angles);
            double value = radial_condition_ii_value(phi, h, lam);
            if (!(value < 0.0)) {
                cii.status = CheckStatus::fail;
                Witness w;
                w.lambda = lam;
                w.value = value;
                w.detail = "interior inequality violated";
                cii.witness = w;
                done = true;
            }
        }
        if (done) break;
    }
    report.conditions.push_back(cii);
    return report;
}

cplx eval_psi(const GeodesicMap& phi, const QuadCertificate& h, const std::vector<cplx>& z,
              cplx lambda) {
    if (std::abs(lambda) >= 1.0)
        throw std::invalid_argument("eval_psi: |lambda| must be < 1");
    auto phi0 = phi.value(cplx(0.0, 0.0));
    cplx q(0.0, 0.0);  // h(0) . (z - phi(0)), and h(0) = a
    for (int l = 0; l < phi.n; ++l) q += h.coord(l).a * (z[l] - phi0[l]);

    if (std::abs(lambda) < 1e-9) {
        // removable singularity: -phi'(0) . h(0) + b . (z - phi(0))
        auto d0 = phi.deriv(cplx(0.0, 0.0));
        cplx acc(0.0, 0.0);
        for (int l = 0; l < phi.n; ++l) {
            acc += -d0[l] * h.coord(l).a;
            acc += h.coord(l).b * (z[l] - phi0[l]);
        }
        return acc;
    }

    auto at = phi.value(lambda);
    cplx acc(0.0, 0.0);
    for (int l = 0; l < phi.n; ++l) {
        acc += (phi0[l] - at[l]) / lambda * h.eval_coord(l, lambda);
        // (h(lambda) - h(0)) / lambda = conj(a) lambda + b, exactly
        acc += (std::conj(h.coord(l).a) * lambda + h.coord(l).b) * (z[l] - phi0[l]);
    }
    acc += lambda * std::conj(q);
    return acc;
}

namespace {

struct PhiPack {
    cplx value;
    cplx deriv;
};

PhiPack eval_big_phi(const GeodesicMap& phi, const QuadCertificate& h, const std::vector<cplx>& z,
                     cplx lambda) {
    auto v = phi.value(lambda);
    auto dv = phi.deriv(lambda);
    PhiPack p{cplx(0.0, 0.0), cplx(0.0, 0.0)};
    for (int l = 0; l < phi.n; ++l) {
        p.value += (z[l] - v[l]) * h.eval_coord(l, lambda);
        p.deriv += -dv[l] * h.eval_coord(l, lambda) + (z[l] - v[l]) * h.deriv_coord(l, lambda);
    }
    return p;
}

}  // namespace

LeftInverseResult left_inverse_value(const GeodesicMap& phi, const QuadCertificate& h,
                                     const std::vector<cplx>& z,
                                     const LeftInverseSettings& settings) {
    if (static_cast<int>(z.size()) != phi.n)
        throw std::invalid_argument("left_inverse_value: dimension mismatch");
    LeftInverseResult result;

    auto big_phi_value = [&](cplx lambda) {
        auto v = phi.value(lambda);
        cplx acc(0.0, 0.0);
        for (int l = 0; l < phi.n; ++l) acc += (z[l] - v[l]) * h.eval_coord(l, lambda);
        return acc;
    };

    for (double r : settings.contour_radii) {
        // screen Re[Phi/lambda] < 0 on the whole outer annulus, not only
        // on the contour: roots hiding between the contour and the circle
        // would otherwise corrupt the count
        bool screened = true;
        for (int i = 0; i < settings.screen_radii && screened; ++i) {
            double rho =
                r + (settings.screen_max_radius - r) * i / (settings.screen_radii - 1.0);
            for (int j = 0; j < settings.screen_angles; ++j) {
                double s = two_pi * (j + 0.382) / settings.screen_angles;
                cplx lam = std::polar(rho, s);
                if (!((big_phi_value(lam) / lam).real() < 0.0)) {
                    screened = false;
                    break;
                }
            }
        }
        if (!screened) continue;

        // argument-principle integrals on |lambda| = r with node doubling
        cplx prev_f(1e9, 0.0);
        double prev_count = 1e9;
        bool converged = false;
        cplx f_val(0.0, 0.0);
        double count = 0.0;
        for (int nodes = settings.min_nodes; nodes <= settings.max_nodes; nodes *= 2) {
            cplx acc_count(0.0, 0.0), acc_f(0.0, 0.0);
            for (int j = 0; j < nodes; ++j) {
                cplx lam = std::polar(r, two_pi * j / nodes);
                PhiPack p = eval_big_phi(phi, h, z, lam);
                cplx ratio = lam * p.deriv / p.value;
                acc_count += ratio;
                acc_f += ratio * lam;
            }
            count = (acc_count / static_cast<double>(nodes)).real();
            f_val = acc_f / static_cast<double>(nodes);
            if (std::abs(f_val - prev_f) < settings.node_tol &&
                std::abs(count - prev_count) < 1e-9) {
                converged = true;
                break;
            }
            prev_f = f_val;
            prev_count = count;
        }
        result.root_count = count;
        result.contour_radius = r;
        if (!converged) {
            result.status = LeftInverseStatus::inconclusive;
            result.detail = "contour quadrature did not stabilize";
            return result;
        }
        if (std::abs(count - std::round(count)) > settings.root_count_tol) {
            result.status = LeftInverseStatus::inconclusive;
            result.detail = "root count does not round cleanly";
            return result;
        }
        if (std::lround(count) != 1) {
            result.status = LeftInverseStatus::structural_failure;
            result.detail = "root count " + std::to_string(std::lround(count)) +
                            ", no single root to extract";
            return result;
        }
        if (!(std::abs(f_val) < r)) {
            result.status = LeftInverseStatus::inconclusive;
            result.detail = "extracted root escapes the contour";
            return result;
        }
        result.status = LeftInverseStatus::ok;
        result.value = f_val;
        return result;
    }

    result.status = LeftInverseStatus::structural_failure;
    result.detail = "no contour radius with Re[Phi/lambda] < 0 on the outer annulus";
    return result;
}

std::vector<cplx> disc_grid(int count, double max_radius) {
    std::vector<cplx> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        double r = max_radius * std::sqrt((i + 0.5) / count);
        double t = two_pi * golden * (i + 1);
        out.push_back(std::polar(r, normalize_angle(t)));
    }
    return out;
}

ResidualResult left_inverse_residual(const GeodesicMap& phi, const QuadCertificate& h,
                                     const std::vector<cplx>& sigma_grid,
                                     const LeftInverseSettings& settings) {
    ResidualResult out;
    std::vector<LeftInverseResult> results(sigma_grid.size());
    detail::parallel_for(sigma_grid.size(), [&](std::size_t i) {
        results[i] = left_inverse_value(phi, h, phi.value(sigma_grid[i]), settings);
    });
    for (std::size_t i = 0; i < sigma_grid.size(); ++i) {
        const LeftInverseResult& r = results[i];
        if (r.status != LeftInverseStatus::ok) {
            out.status = r.status;
            out.residual = std::numeric_limits<double>::infinity();
            out.worst_sigma = sigma_grid[i];
            out.detail = r.detail;
            return out;
        }
        double err = std::abs(r.value - sigma_grid[i]);
        if (err >= out.residual) {
            out.residual = err;
            out.worst_sigma = sigma_grid[i];
        }
    }
    return out;
}

SandwichResult distance_sandwich(const GeodesicMap& phi, const QuadCertificate& h, cplx sigma1,
                                 cplx sigma2, const LeftInverseSettings& settings) {
    SandwichResult out;
    if (sigma1 == sigma2) return out;
    out.upper = poincare_distance(sigma1, sigma2);
    LeftInverseResult f1 = left_inverse_value(phi, h, phi.value(sigma1), settings);
    LeftInverseResult f2 = left_inverse_value(phi, h, phi.value(sigma2), settings);
    if (f1.status != LeftInverseStatus::ok || f2.status != LeftInverseStatus::ok) {
        out.status = f1.status != LeftInverseStatus::ok ? f1.status : f2.status;
        out.detail = f1.status != LeftInverseStatus::ok ? f1.detail : f2.detail;
        return out;
    }
    out.lower = poincare_distance(f1.value, f2.value);
    return out;
}

VerificationReport vertex_limit_check(const StaircaseIISpec& spec, const StaircaseDomain& domain,
                                      const VertexCheckOptions& options) {
    PreparedStaircase prep = prepare_staircase(spec, domain);
    CircleMeasure mu = boundary_measure_of(GeodesicSpec(spec), TubeDomain(domain));
    VerificationReport report;

    std::vector<double> atom_angles;
    for (int l = 0; l < 2; ++l)
        if (spec.alpha[l] < 0.0) atom_angles.push_back(normalize_angle(spec.lambda_angle[l]));

    const int m = domain.facet_count();
    for (int j = 1; j <= m - 1; ++j) {
        const ArcSet& A = prep.arcs.A[j - 1];
        if (A.is_empty()) continue;
        const Vec2& p = domain.vertex(j);

        // interior sample angles of A_j: split each arc at interior atom
        // angles, keep midpoints of pieces clearing the margin
        std::vector<double> samples;
        for (const Arc& arc : A.arcs()) {
            std::vector<double> cuts{arc.start, arc.end()};
            for (double t : atom_angles)
                if (arc.contains(t)) cuts.push_back(arc.start + normalize_angle(t - arc.start));
            std::sort(cuts.begin(), cuts.end());
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
                if (cuts[i + 1] - cuts[i] > 2.0 * options.angle_margin)
                    samples.push_back(normalize_angle(0.5 * (cuts[i] + cuts[i + 1])));
        }

        ConditionResult radial;
        radial.name = "vertex-radial-" + std::to_string(j);
        radial.tolerance = options.final_tolerance;
        if (samples.empty()) {
            radial.status = CheckStatus::inconclusive;
            Witness w;
            w.detail = "no sample angle clears the margin";
            radial.witness = w;
            report.conditions.push_back(radial);
            continue;
        }
        for (double t : samples) {
            std::vector<double> errs;
            for (double r : options.radii) {
                auto v = prep.value(std::polar(r, t));
                errs.push_back(
                    std::max(std::abs(v[0].real() - p[0]), std::abs(v[1].real() - p[1])));
            }
            bool monotone = true;
            for (std::size_t i = 0; i + 1 < errs.size(); ++i)
                if (errs[i + 1] > errs[i] * 1.0000001 + 1e-15) monotone = false;
            double final_err = errs.back();
            if (final_err < options.final_tolerance && monotone) continue;
            Witness w;
            w.angle = t;
            w.value = final_err;
            if (final_err >= 10.0 * options.final_tolerance) {
                radial.status = CheckStatus::fail;
                w.detail = "radial limit does not approach the vertex";
                radial.witness = w;
                break;
            }
            if (radial.status == CheckStatus::pass) {
                radial.status = CheckStatus::inconclusive;
                w.detail = monotone ? "slow convergence" : "non-monotone error decay";
                radial.witness = w;
            }
        }
        report.conditions.push_back(radial);

        // exact measure identity chi_{A_j} dmu = p_j chi_{A_j} dL
        ConditionResult measure_cond;
        measure_cond.name = "vertex-measure-" + std::to_string(j);
        measure_cond.tolerance = 1e-12;
        for (double t : samples) {
            auto w = mu.density_at(t);
            if (std::abs(w[0] - p[0]) > 1e-12 || std::abs(w[1] - p[1]) > 1e-12) {
                measure_cond.status = CheckStatus::fail;
                Witness ww;
                ww.angle = t;
                ww.value = std::max(std::abs(w[0] - p[0]), std::abs(w[1] - p[1]));
                ww.detail = "restricted density differs from the vertex";
                measure_cond.witness = ww;
                break;
            }
        }
        if (measure_cond.status == CheckStatus::pass) {
            for (const MeasureAtom& a : mu.atoms()) {
                bool excluded = false;
                for (double t : atom_angles)
                    if (std::abs(normalize_angle(a.angle - t + M_PI) - M_PI) < 1e-12)
                        excluded = true;
                if (!excluded && A.contains(a.angle)) {
                    measure_cond.status = CheckStatus::fail;
                    Witness ww;
                    ww.angle = a.angle;
                    ww.detail = "unexpected atom inside A_j";
                    measure_cond.witness = ww;
                    break;
                }
            }
        }
        report.conditions.push_back(measure_cond);
    }
    return report;
}

}  // namespace tubegeo
