#include "tubegeo/circle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tubegeo {

double normalize_angle(double t) {
    double r = std::fmod(t, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;  // guards fmod landing exactly on 2*pi
    return r;
}

Arc::Arc(double start_angle, double len) {
    if (!(len >= 0.0) || len > two_pi + arc_merge_tol)
        throw std::invalid_argument("Arc: length must lie in [0, 2*pi]");
    start = normalize_angle(start_angle);
    length = std::min(len, two_pi);
    if (length >= two_pi - arc_merge_tol) {
        start = 0.0;
        length = two_pi;
    }
}

bool Arc::contains(double t) const {
    if (is_empty()) return false;
    if (is_full()) return true;
    double d = normalize_angle(t - start);
    return d <= length + arc_merge_tol;
}

bool ArcSet::is_full() const {
    return arcs_.size() == 1 && arcs_[0].is_full();
}

double ArcSet::measure() const {
    double m = 0.0;
    for (const Arc& a : arcs_) m += a.length;
    return std::min(m, two_pi);
}

bool ArcSet::contains(double t) const {
    for (const Arc& a : arcs_)
        if (a.contains(t)) return true;
    return false;
}

void ArcSet::normalize() {
    // Split wrap-around arcs at 0, sort, merge overlaps/adjacencies,
    // rejoin across 0 when both ends touch it.
    std::vector<std::pair<double, double>> segs;  // [lo, hi] in [0, 2*pi]
    for (const Arc& a : arcs_) {
        if (a.is_empty()) continue;
        if (a.is_full()) {
            arcs_ = {Arc::full()};
            return;
        }
        double lo = a.start, hi = a.start + a.length;
        if (hi <= two_pi + arc_merge_tol) {
            segs.emplace_back(lo, std::min(hi, two_pi));
        } else {
            segs.emplace_back(lo, two_pi);
            segs.emplace_back(0.0, hi - two_pi);
        }
    }
    std::sort(segs.begin(), segs.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& s : segs) {
        if (!merged.empty() && s.first <= merged.back().second + arc_merge_tol)
            merged.back().second = std::max(merged.back().second, s.second);
        else
            merged.push_back(s);
    }
    // Merge the last segment into the first across angle 0.
    if (merged.size() >= 2 && merged.front().first <= arc_merge_tol &&
        merged.back().second >= two_pi - arc_merge_tol) {
        merged.front().first = merged.back().first - two_pi;
        merged.pop_back();
    }
    arcs_.clear();
    for (const auto& s : merged) {
        double len = s.second - s.first;
        if (len <= arc_merge_tol) continue;
        arcs_.emplace_back(s.first, std::min(len, two_pi));
    }
    if (arcs_.size() == 1 && arcs_[0].is_full()) arcs_ = {Arc::full()};
    std::sort(arcs_.begin(), arcs_.end(),
              [](const Arc& a, const Arc& b) { return a.start < b.start; });
}

ArcSet ArcSet::complement() const {
    if (is_empty()) return full();
    if (is_full()) return empty();
    // arcs_ are sorted and disjoint; gaps between consecutive ends form
    // the complement.
    std::vector<Arc> gaps;
    const std::size_t n = arcs_.size();
    for (std::size_t i = 0; i < n; ++i) {
        double gap_start = arcs_[i].end();
        double next_start = arcs_[(i + 1) % n].start + (i + 1 == n ? two_pi : 0.0);
        double len = next_start - gap_start;
        if (len > arc_merge_tol) gaps.emplace_back(gap_start, len);
    }
    return ArcSet(std::move(gaps));
}

ArcSet ArcSet::set_union(const ArcSet& other) const {
    std::vector<Arc> all = arcs_;
    all.insert(all.end(), other.arcs_.begin(), other.arcs_.end());
    return ArcSet(std::move(all));
}

ArcSet ArcSet::set_intersection(const ArcSet& other) const {
    return complement().set_union(other.complement()).complement();
}

ArcSet ArcSet::set_difference(const ArcSet& other) const {
    return set_intersection(other.complement());
}

bool ArcSet::subset_of(const ArcSet& other, double tol) const {
    return set_difference(other).measure() < tol;
}

cplx mobius(cplx c, cplx lambda) {
    if (std::abs(c) >= 1.0)
        throw std::invalid_argument("mobius: |c| must be < 1");
    return (lambda - c) / (1.0 - std::conj(c) * lambda);
}

double poincare_distance(cplx sigma, cplx tau) {
    if (std::abs(sigma) >= 1.0 || std::abs(tau) >= 1.0)
        throw std::invalid_argument("poincare_distance: points must be inside the disc");
    double q = std::abs(sigma - tau) / std::abs(1.0 - std::conj(sigma) * tau);
    return std::atanh(q);
}

cplx strip_map_tau(cplx lambda) {
    if (std::abs(lambda - 1.0) < 1e-15 || std::abs(lambda + 1.0) < 1e-15)
        throw std::invalid_argument("strip_map_tau: branch points +-1 excluded");
    cplx w = cplx(0.0, 1.0) * (1.0 + lambda) / (1.0 - lambda);
    // For |lambda| < 1, Im w > 0 so the principal argument already lies in
    // (0, pi); on the circle w is real and the [0, 2*pi) branch assigns
    // arg 0 to w > 0 and pi to w < 0.
    double a = std::arg(w);
    if (a < 0.0) a += two_pi;
    cplx logw(std::log(std::abs(w)), a);
    return cplx(0.0, -1.0 / M_PI) * logw;
}

cplx strip_map_tau_deriv(cplx lambda) {
    return cplx(0.0, -2.0 / M_PI) / (1.0 - lambda * lambda);
}

}  // namespace tubegeo
