#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace tubegeo::detail {

struct QuadratureOutcome {
    std::complex<double> value{0.0, 0.0};
    bool converged = true;
    std::int64_t evals = 0;
};

/// Adaptive trapezoidal quadrature with Richardson extrapolation: each
/// interval carries its extrapolated (Simpson) value, halving is accepted
/// once the two half-interval values agree with it within the interval's
/// tolerance share, and one further extrapolation of the accepted pair is
/// kept.  Runs out of budget -> converged = false, coarse values fill the
/// gaps.
inline QuadratureOutcome adaptive_trapezoid(const std::function<std::complex<double>(double)>& f,
                                            double a, double b, double tol,
                                            std::int64_t max_evals) {
    using cd = std::complex<double>;
    QuadratureOutcome out;
    if (!(b > a)) return out;

    struct Seg {
        double a, b, tol;
        cd fa, fm, fb;
        cd simpson;
        int depth;
    };
    auto simpson = [](const Seg& s) {
        return (s.b - s.a) / 6.0 * (s.fa + 4.0 * s.fm + s.fb);
    };

    std::vector<Seg> stack;
    const int base = 8;  // base panels guard against symmetric false accepts
    for (int k = 0; k < base; ++k) {
        Seg s;
        s.a = a + (b - a) * k / base;
        s.b = a + (b - a) * (k + 1) / base;
        s.tol = tol / base;
        s.fa = f(s.a);
        s.fm = f(0.5 * (s.a + s.b));
        s.fb = f(s.b);
        s.depth = 0;
        s.simpson = simpson(s);
        stack.push_back(s);
        out.evals += 3;
    }

    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        if (out.evals >= max_evals) {
            out.converged = false;
            out.value += s.simpson;
            continue;
        }
        double m = 0.5 * (s.a + s.b);
        Seg left{s.a, m, 0.5 * s.tol, s.fa, f(0.5 * (s.a + m)), s.fm, cd{}, s.depth + 1};
        Seg right{m, s.b, 0.5 * s.tol, s.fm, f(0.5 * (m + s.b)), s.fb, cd{}, s.depth + 1};
        out.evals += 2;
        left.simpson = simpson(left);
        right.simpson = simpson(right);
        cd pair = left.simpson + right.simpson;
        cd diff = pair - s.simpson;
        if ((std::abs(diff) <= 15.0 * s.tol && s.depth >= 1) || (s.b - s.a) < 1e-13) {
            out.value += pair + diff / 15.0;
        } else {
            stack.push_back(left);
            stack.push_back(right);
        }
    }
    return out;
}

/// Trapezoidal rule over one full period [0, 2*pi) with node doubling until
/// the value stabilizes below tol (spectrally accurate for analytic
/// periodic integrands).
inline QuadratureOutcome periodic_trapezoid(const std::function<std::complex<double>(double)>& f,
                                            double tol, int min_nodes = 64,
                                            int max_nodes = 1 << 20) {
    const double period = 2.0 * M_PI;
    QuadratureOutcome out;
    int n = min_nodes;
    std::complex<double> sum = 0.0;
    for (int k = 0; k < n; ++k) sum += f(period * k / n);
    out.evals = n;
    std::complex<double> prev = sum * (period / n);
    while (n < max_nodes) {
        // add the midpoints of the current grid
        for (int k = 0; k < n; ++k) sum += f(period * (k + 0.5) / n);
        out.evals += n;
        n *= 2;
        std::complex<double> cur = sum * (period / n);
        if (std::abs(cur - prev) <= tol) {
            out.value = cur;
            return out;
        }
        prev = cur;
    }
    out.value = prev;
    out.converged = false;
    return out;
}

}  // namespace tubegeo::detail
