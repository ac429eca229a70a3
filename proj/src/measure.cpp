#include "tubegeo/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tubegeo/detail/quadrature.hpp"

namespace tubegeo {

namespace {

void check_dim(int n, const std::vector<double>& v, const char* what) {
    if (static_cast<int>(v.size()) != n)
        throw std::invalid_argument(std::string(what) + ": wrong vector dimension");
}

cplx herglotz_kernel(double t, cplx lambda) {
    cplx zeta = std::polar(1.0, t);
    return (zeta + lambda) / (zeta - lambda);
}

}  // namespace

CircleMeasure::CircleMeasure(int dimension) : n_(dimension) {
    if (dimension < 1) throw std::invalid_argument("CircleMeasure: dimension must be >= 1");
}

void CircleMeasure::add_piece(const Arc& arc, std::vector<double> weight) {
    check_dim(n_, weight, "add_piece");
    if (arc.is_empty()) return;
    pieces_.push_back({arc, std::move(weight)});
}

void CircleMeasure::add_atom(double angle, std::vector<double> mass) {
    check_dim(n_, mass, "add_atom");
    double a = normalize_angle(angle);
    for (MeasureAtom& existing : atoms_) {
        double d = std::abs(normalize_angle(existing.angle - a + M_PI) - M_PI);
        if (d < arc_merge_tol) {
            for (int l = 0; l < n_; ++l) existing.mass[l] += mass[l];
            return;
        }
    }
    atoms_.push_back({a, std::move(mass)});
    std::sort(atoms_.begin(), atoms_.end(),
              [](const MeasureAtom& x, const MeasureAtom& y) { return x.angle < y.angle; });
}

std::vector<double> CircleMeasure::density_at(double t) const {
    std::vector<double> out(n_, 0.0);
    for (const DensityPiece& p : pieces_)
        if (p.arc.contains(t))
            for (int l = 0; l < n_; ++l) out[l] += p.weight[l];
    return out;
}

std::vector<double> CircleMeasure::total() const {
    std::vector<double> out(n_, 0.0);
    for (const DensityPiece& p : pieces_)
        for (int l = 0; l < n_; ++l) out[l] += p.weight[l] * p.arc.length;
    for (const MeasureAtom& a : atoms_)
        for (int l = 0; l < n_; ++l) out[l] += a.mass[l];
    return out;
}

std::vector<DensityPiece> CircleMeasure::flattened() const {
    std::vector<double> cuts;
    for (const DensityPiece& p : pieces_) {
        if (p.arc.is_full()) continue;
        cuts.push_back(normalize_angle(p.arc.start));
        cuts.push_back(normalize_angle(p.arc.end()));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double x, double y) { return std::abs(x - y) < arc_merge_tol; }),
               cuts.end());
    if (cuts.size() >= 2 &&
        (cuts.back() - cuts.front()) > two_pi - arc_merge_tol)
        cuts.pop_back();

    std::vector<DensityPiece> out;
    if (cuts.empty()) {
        out.push_back({Arc::full(), density_at(0.0)});
        return out;
    }
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        double lo = cuts[i];
        double hi = (i + 1 < cuts.size()) ? cuts[i + 1] : cuts[0] + two_pi;
        double len = hi - lo;
        if (len <= arc_merge_tol) continue;
        Arc arc(lo, std::min(len, two_pi));
        out.push_back({arc, density_at(arc.midpoint())});
    }
    return out;
}

std::vector<double> CircleMeasure::total_variation() const {
    std::vector<double> out(n_, 0.0);
    for (const DensityPiece& p : flattened())
        for (int l = 0; l < n_; ++l) out[l] += std::abs(p.weight[l]) * p.arc.length;
    for (const MeasureAtom& a : atoms_)
        for (int l = 0; l < n_; ++l) out[l] += std::abs(a.mass[l]);
    return out;
}

std::vector<cplx> herglotz_transform(const CircleMeasure& mu, cplx lambda,
                                     const std::vector<double>& im_offset) {
    if (std::abs(lambda) >= 1.0)
        throw std::invalid_argument("herglotz_transform: |lambda| must be < 1");
    const int n = mu.dimension();
    if (static_cast<int>(im_offset.size()) != n)
        throw std::invalid_argument("herglotz_transform: offset dimension mismatch");

    std::vector<cplx> out(n, cplx(0.0, 0.0));
    const double inv_two_pi = 1.0 / two_pi;
    for (const DensityPiece& p : mu.pieces()) {
        double t0 = p.arc.start, t1 = p.arc.end();
        // log(e^{it} - lambda) = i t + Log(1 - lambda e^{-it}); the second
        // factor stays in the right half-plane, so the principal branch is
        // the continuous one along the whole arc.
        cplx dlog = std::log(1.0 - lambda * std::polar(1.0, -t1)) -
                    std::log(1.0 - lambda * std::polar(1.0, -t0));
        cplx integral = p.arc.length - 2.0 * cplx(0.0, 1.0) * dlog;
        for (int l = 0; l < n; ++l) out[l] += p.weight[l] * inv_two_pi * integral;
    }
    for (const MeasureAtom& a : mu.atoms()) {
        cplx k = herglotz_kernel(a.angle, lambda);
        for (int l = 0; l < n; ++l) out[l] += a.mass[l] * inv_two_pi * k;
    }
    for (int l = 0; l < n; ++l) out[l] += cplx(0.0, im_offset[l]);
    return out;
}

std::vector<cplx> herglotz_transform_deriv(const CircleMeasure& mu, cplx lambda) {
    if (std::abs(lambda) >= 1.0)
        throw std::invalid_argument("herglotz_transform_deriv: |lambda| must be < 1");
    const int n = mu.dimension();
    std::vector<cplx> out(n, cplx(0.0, 0.0));
    const double inv_pi = 1.0 / M_PI;
    for (const DensityPiece& p : mu.pieces()) {
        cplx z1 = std::polar(1.0, p.arc.end()), z0 = std::polar(1.0, p.arc.start);
        cplx d = cplx(0.0, 1.0) * (1.0 / (z1 - lambda) - 1.0 / (z0 - lambda));
        for (int l = 0; l < n; ++l) out[l] += p.weight[l] * inv_pi * d;
    }
    for (const MeasureAtom& a : mu.atoms()) {
        cplx zeta = std::polar(1.0, a.angle);
        cplx d = 2.0 * zeta / ((zeta - lambda) * (zeta - lambda));
        for (int l = 0; l < n; ++l) out[l] += a.mass[l] / two_pi * d;
    }
    return out;
}

HerglotzQuadrature herglotz_quadrature_oracle(const CircleMeasure& mu, cplx lambda,
                                              double tol, std::int64_t max_evals) {
    if (std::abs(lambda) >= 1.0)
        throw std::invalid_argument("herglotz_quadrature_oracle: |lambda| must be < 1");
    const int n = mu.dimension();
    HerglotzQuadrature result;
    result.value.assign(n, cplx(0.0, 0.0));
    result.converged = true;

    for (const DensityPiece& p : mu.pieces()) {
        auto f = [&](double t) { return herglotz_kernel(t, lambda); };
        auto q = detail::adaptive_trapezoid(f, p.arc.start, p.arc.end(), tol,
                                            max_evals - result.evals);
        result.evals += q.evals;
        if (!q.converged) result.converged = false;
        for (int l = 0; l < n; ++l)
            result.value[l] += p.weight[l] / two_pi * q.value;
    }
    for (const MeasureAtom& a : mu.atoms()) {
        cplx k = herglotz_kernel(a.angle, lambda);
        for (int l = 0; l < n; ++l) result.value[l] += a.mass[l] / two_pi * k;
    }
    return result;
}

std::vector<double> pair_with_test_function(const CircleMeasure& mu,
                                            const std::function<double(double)>& u,
                                            int grid_resolution) {
    if (grid_resolution < 1)
        throw std::invalid_argument("pair_with_test_function: resolution must be positive");
    const int n = mu.dimension();
    std::vector<double> out(n, 0.0);
    for (const DensityPiece& p : mu.pieces()) {
        int panels = std::max(8, static_cast<int>(std::ceil(p.arc.length * grid_resolution)));
        double h = p.arc.length / (2 * panels);
        // composite Simpson on [start, end]
        double sum = u(p.arc.start) + u(p.arc.end());
        for (int k = 1; k < 2 * panels; ++k)
            sum += (k % 2 == 1 ? 4.0 : 2.0) * u(p.arc.start + k * h);
        double integral = sum * h / 3.0;
        for (int l = 0; l < n; ++l) out[l] += p.weight[l] * integral;
    }
    for (const MeasureAtom& a : mu.atoms()) {
        double ua = u(a.angle);
        for (int l = 0; l < n; ++l) out[l] += a.mass[l] * ua;
    }
    return out;
}

NegativityWitness is_negative(const CircleMeasure& mu, int coordinate) {
    if (coordinate < 0 || coordinate >= mu.dimension())
        throw std::invalid_argument("is_negative: coordinate out of range");
    NegativityWitness w;
    for (const DensityPiece& p : mu.flattened()) {
        if (p.weight[coordinate] > 1e-12) {
            w.negative = false;
            w.atom = false;
            w.arc = p.arc;
            w.value = p.weight[coordinate];
            return w;
        }
    }
    for (const MeasureAtom& a : mu.atoms()) {
        if (a.mass[coordinate] > 1e-12) {
            w.negative = false;
            w.atom = true;
            w.angle = a.angle;
            w.value = a.mass[coordinate];
            return w;
        }
    }
    return w;
}

CircleMeasure measure_linear_map(const std::vector<std::vector<double>>& V,
                                 const CircleMeasure& mu) {
    const int n = mu.dimension();
    const int m = static_cast<int>(V.size());
    if (m < 1) throw std::invalid_argument("measure_linear_map: empty matrix");
    for (const auto& row : V)
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("measure_linear_map: column count mismatch");

    auto apply = [&](const std::vector<double>& x) {
        std::vector<double> y(m, 0.0);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) y[i] += V[i][j] * x[j];
        return y;
    };

    CircleMeasure out(m);
    for (const DensityPiece& p : mu.pieces()) out.add_piece(p.arc, apply(p.weight));
    for (const MeasureAtom& a : mu.atoms()) out.add_atom(a.angle, apply(a.mass));
    return out;
}

bool measures_equal(const CircleMeasure& lhs, const CircleMeasure& rhs, double tol) {
    if (lhs.dimension() != rhs.dimension()) return false;
    const int n = lhs.dimension();

    // cut angles of both measures form the common refinement; densities are
    // compared on its interval midpoints (never at the cuts themselves,
    // where closed-arc membership double-counts)
    std::vector<double> cuts;
    auto collect = [&](const CircleMeasure& mu) {
        for (const DensityPiece& p : mu.pieces()) {
            if (p.arc.is_full()) continue;
            cuts.push_back(normalize_angle(p.arc.start));
            cuts.push_back(normalize_angle(p.arc.end()));
        }
    };
    collect(lhs);
    collect(rhs);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double x, double y) { return std::abs(x - y) < arc_merge_tol; }),
               cuts.end());
    if (cuts.empty()) cuts.push_back(0.0);
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        double hi = (i + 1 < cuts.size()) ? cuts[i + 1] : cuts[0] + two_pi;
        double mid = normalize_angle(0.5 * (cuts[i] + hi));
        auto dl = lhs.density_at(mid), dr = rhs.density_at(mid);
        for (int l = 0; l < n; ++l)
            if (std::abs(dl[l] - dr[l]) > tol) return false;
    }

    if (lhs.atoms().size() != rhs.atoms().size()) return false;
    for (std::size_t i = 0; i < lhs.atoms().size(); ++i) {
        const MeasureAtom& a = lhs.atoms()[i];
        const MeasureAtom& b = rhs.atoms()[i];
        double d = std::abs(normalize_angle(a.angle - b.angle + M_PI) - M_PI);
        if (d > tol) return false;
        for (int l = 0; l < n; ++l)
            if (std::abs(a.mass[l] - b.mass[l]) > tol) return false;
    }
    return true;
}

}  // namespace tubegeo
