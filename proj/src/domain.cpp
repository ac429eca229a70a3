#include "tubegeo/domain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tubegeo {

namespace {

double staircase_scale(const StaircaseDomain& d) {
    double s = 1.0;
    for (const Vec2& x : d.p) s = std::max({s, std::abs(x[0]), std::abs(x[1])});
    for (const Vec2& x : d.v) s = std::max({s, std::abs(x[0]), std::abs(x[1])});
    return s;
}

}  // namespace

std::vector<StaircaseViolation> validate_staircase(const StaircaseDomain& d) {
    std::vector<StaircaseViolation> out;
    const int m = d.facet_count();
    if (m < 2) {
        out.push_back({"size", 0, "m must be >= 2"});
        return out;
    }
    if (static_cast<int>(d.p.size()) != m + 1) {
        out.push_back({"size", 0, "need m + 1 vertices p_0..p_m"});
        return out;
    }
    const double tol = 1e-10 * staircase_scale(d);

    // first coordinates: 0 = p_{0,1} = p_{1,1} > p_{2,1} > ... > p_{m,1}
    if (std::abs(d.p[0][0]) > tol || std::abs(d.p[1][0]) > tol)
        out.push_back({"first-coordinates", 0, "p_{0,1} and p_{1,1} must be 0"});
    for (int j = 1; j < m; ++j)
        if (!(d.p[j + 1][0] < d.p[j][0] - tol))
            out.push_back({"first-coordinates", j + 1,
                           "p_{j,1} must strictly decrease from j = 1"});

    // second coordinates: 0 = p_{m,2} = p_{m-1,2} > ... > p_{0,2}
    if (std::abs(d.p[m][1]) > tol || std::abs(d.p[m - 1][1]) > tol)
        out.push_back({"second-coordinates", m, "p_{m,2} and p_{m-1,2} must be 0"});
    for (int j = m - 1; j >= 1; --j)
        if (!(d.p[j - 1][1] < d.p[j][1] - tol))
            out.push_back({"second-coordinates", j - 1,
                           "p_{j,2} must strictly decrease towards j = 0"});

    // normals turn counterclockwise; a failure is reported on the later
    // vector of the offending pair
    for (int j = 1; j <= m - 1; ++j)
        if (!(det2(d.normal(j), d.normal(j + 1)) > tol))
            out.push_back({"determinant", j + 1, "det[v_j, v_{j+1}] must be > 0"});

    // consecutive vertices lie on the shared facet line
    for (int j = 0; j <= m - 1; ++j) {
        Vec2 diff{d.p[j + 1][0] - d.p[j][0], d.p[j + 1][1] - d.p[j][1]};
        if (std::abs(dot2(diff, d.normal(j + 1))) > tol)
            out.push_back({"orthogonality", j, "<p_{j+1} - p_j, v_{j+1}> must vanish"});
    }

    // axis-aligned first and last normals
    if (!(d.v.front()[0] > tol) || std::abs(d.v.front()[1]) > tol)
        out.push_back({"axis-normals", 1, "v_1 must point along +x1"});
    if (std::abs(d.v.back()[0]) > tol || !(d.v.back()[1] > tol))
        out.push_back({"axis-normals", m, "v_m must point along +x2"});

    for (int j = 1; j <= m; ++j)
        if (d.v[j - 1][0] < -tol || d.v[j - 1][1] < -tol)
            out.push_back({"axis-normals", j, "normals must lie in the closed first quadrant"});

    return out;
}

bool staircase_contains(const StaircaseDomain& d, const Vec2& x) {
    for (int j = 1; j <= d.facet_count(); ++j) {
        Vec2 diff{x[0] - d.vertex(j)[0], x[1] - d.vertex(j)[1]};
        if (!(dot2(diff, d.normal(j)) < 0.0)) return false;
    }
    return true;
}

bool domain_contains(const TubeDomain& domain, const std::vector<cplx>& z) {
    return std::visit(
        [&](const auto& d) -> bool {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, HalfPlaneProduct>) {
                if (static_cast<int>(z.size()) != d.n) return false;
                for (const cplx& zl : z)
                    if (!(zl.real() < 0.0)) return false;
                return true;
            } else if constexpr (std::is_same_v<T, StripDomain>) {
                if (z.size() != 1) return false;
                return z[0].real() > 0.0 && z[0].real() < 1.0;
            } else if constexpr (std::is_same_v<T, StaircaseDomain>) {
                if (z.size() != 2) return false;
                return staircase_contains(d, {z[0].real(), z[1].real()});
            } else {
                if (z.size() != 2) return false;
                double x = z[0].real(), y = z[1].real();
                return x * x + y * y < 1.0;
            }
        },
        domain);
}

int domain_dimension(const TubeDomain& domain) {
    return std::visit(
        [](const auto& d) -> int {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, HalfPlaneProduct>)
                return d.n;
            else if constexpr (std::is_same_v<T, StripDomain>)
                return 1;
            else
                return 2;
        },
        domain);
}

StaircaseDomain from_reinhardt(const std::vector<ReinhardtFactor>& factors) {
    if (factors.empty())
        throw std::invalid_argument("from_reinhardt: factor list must be nonempty");
    for (const ReinhardtFactor& f : factors) {
        if (!(f.p > 0.0) || !(f.q > 0.0))
            throw std::invalid_argument("from_reinhardt: exponents must be positive");
        if (!(f.alpha > 0.0) || !(f.alpha < 1.0))
            throw std::invalid_argument("from_reinhardt: alpha must lie in (0, 1)");
    }

    // Slant constraints <x, (p,q)> < log(alpha), written as lines
    // x2 = (c - p x1)/q.  Same-direction constraints keep the tighter level.
    struct Line {
        double slope;      // -p/q, strictly negative
        double intercept;  // c/q
        Vec2 normal;
        double level;      // c
    };
    std::vector<Line> lines;
    for (const ReinhardtFactor& f : factors) {
        double c = std::log(f.alpha);
        lines.push_back({-f.p / f.q, c / f.q, {f.p, f.q}, c});
    }
    std::sort(lines.begin(), lines.end(),
              [](const Line& a, const Line& b) { return a.slope < b.slope; });
    // drop same-slope duplicates, keeping the lower intercept (tighter)
    std::vector<Line> dedup;
    for (const Line& l : lines) {
        if (!dedup.empty() && std::abs(dedup.back().slope - l.slope) < 1e-12) {
            if (l.intercept < dedup.back().intercept) dedup.back() = l;
        } else {
            dedup.push_back(l);
        }
    }
    // lower-envelope scan: a line is active iff the crossing of its
    // neighbours lies strictly above it
    std::vector<Line> chain;
    for (const Line& l : dedup) {
        while (chain.size() >= 2) {
            const Line& a = chain[chain.size() - 2];
            const Line& b = chain[chain.size() - 1];
            double x_cross = (l.intercept - a.intercept) / (a.slope - l.slope);
            double y_cross = a.slope * x_cross + a.intercept;
            if (b.slope * x_cross + b.intercept >= y_cross - 1e-14)
                chain.pop_back();
            else
                break;
        }
        chain.push_back(l);
    }

    // In slope-ascending order the chain runs from the facet adjacent to
    // the x2-axis (steepest) to the one adjacent to the x1-axis, and the
    // normal angles ascend with the slopes.  Envelope segments falling
    // outside the third quadrant are cut off by the axis constraints, so
    // drop front lines binding only at x1 >= 0 and back lines binding only
    // at x2 >= 0.
    auto crossing = [](const Line& a, const Line& b) {
        double x = (b.intercept - a.intercept) / (a.slope - b.slope);
        return Vec2{x, a.slope * x + a.intercept};
    };
    while (chain.size() >= 2 && crossing(chain[0], chain[1])[0] >= -1e-14)
        chain.erase(chain.begin());
    while (chain.size() >= 2 &&
           crossing(chain[chain.size() - 2], chain[chain.size() - 1])[1] >= -1e-14)
        chain.pop_back();

    StaircaseDomain d;
    d.v.push_back({1.0, 0.0});
    for (const Line& l : chain) d.v.push_back(l.normal);
    d.v.push_back({0.0, 1.0});
    const int m = d.facet_count();

    // vertices: p_1 on the x2-axis, interior crossings, p_{m-1} on the x1-axis
    d.p.assign(m + 1, Vec2{0.0, 0.0});
    d.p[1] = {0.0, chain.front().intercept};
    for (int k = 0; k + 1 < static_cast<int>(chain.size()); ++k)
        d.p[k + 2] = crossing(chain[k], chain[k + 1]);
    double x_axis_cut = -chain.back().intercept / chain.back().slope;
    d.p[m - 1] = {x_axis_cut, 0.0};
    d.p[0] = {d.p[1][0], d.p[1][1] - 1.0};
    d.p[m] = {d.p[m - 1][0] - 1.0, d.p[m - 1][1]};

    auto violations = validate_staircase(d);
    if (!violations.empty())
        throw std::runtime_error("from_reinhardt: construction failed validation: " +
                                 violations.front().message);
    return d;
}

NormalCone supporting_normal(const StaircaseDomain& d, const Vec2& x) {
    const int m = d.facet_count();
    const double tol = 1e-9 * staircase_scale(d);

    // must satisfy every half-space weakly and at least one with equality
    std::vector<int> active;
    for (int j = 1; j <= m; ++j) {
        Vec2 diff{x[0] - d.vertex(j)[0], x[1] - d.vertex(j)[1]};
        double s = dot2(diff, d.normal(j));
        if (s > tol) throw std::invalid_argument("supporting_normal: point outside the base");
        if (std::abs(s) <= tol) active.push_back(j);
    }
    if (active.empty())
        throw std::invalid_argument("supporting_normal: point interior to the base");

    if (active.size() == 1) {
        int j = active.front();
        // facet j extends only between its vertices p_{j-1} and p_j
        // (half-lines for j = 1 and j = m); outside that range the point
        // is on the facet line but not the boundary
        const Vec2& a = d.vertex(j - 1);
        const Vec2& b = d.vertex(j);
        Vec2 edge{b[0] - a[0], b[1] - a[1]};
        double t = dot2({x[0] - a[0], x[1] - a[1]}, edge) / dot2(edge, edge);
        bool on_facet = (j == 1)   ? t <= 1.0 + tol
                        : (j == m) ? t >= -tol
                                   : (t >= -tol && t <= 1.0 + tol);
        if (!on_facet)
            throw std::invalid_argument("supporting_normal: point outside the boundary");
        NormalCone cone;
        cone.lo = d.normal(j);
        cone.facet = j;
        return cone;
    }
    // vertex p_j shared by facets j and j+1
    int j = active.front();
    NormalCone cone;
    cone.vertex = true;
    cone.lo = d.normal(j);
    cone.hi = d.normal(std::min(j + 1, m));
    cone.facet = j;
    return cone;
}

std::vector<Vec2> staircase_boundary_polyline(const StaircaseDomain& d, double extent) {
    const int m = d.facet_count();
    std::vector<Vec2> out;
    out.push_back({0.0, d.vertex(1)[1] - extent});
    for (int j = 1; j <= m - 1; ++j) out.push_back(d.vertex(j));
    out.push_back({d.vertex(m - 1)[0] - extent, 0.0});
    return out;
}

}  // namespace tubegeo
