#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "disklab/disk.hpp"

namespace disklab {

/// An ordered list of pairwise-distinct interior points.
class PointSequence {
public:
    PointSequence() = default;

    explicit PointSequence(std::vector<DiskPoint> points) : points_(std::move(points)) {
        for (std::size_t i = 0; i < points_.size(); ++i)
            for (std::size_t j = i + 1; j < points_.size(); ++j)
                if (points_[i] == points_[j])
                    throw std::invalid_argument("PointSequence: duplicate points");
    }

    const std::vector<DiskPoint>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const DiskPoint& operator[](std::size_t i) const { return points_[i]; }

    PointSequence prefix(std::size_t n) const {
        if (n > points_.size()) throw std::invalid_argument("PointSequence::prefix: n too large");
        return PointSequence(std::vector<DiskPoint>(points_.begin(), points_.begin() + n));
    }

private:
    std::vector<DiskPoint> points_;
};

inline PointSequence rotate(const PointSequence& seq, double theta) {
    std::vector<DiskPoint> pts;
    pts.reserve(seq.size());
    for (const DiskPoint& z : seq.points()) pts.push_back(rotate(z, theta));
    return PointSequence(std::move(pts));
}

/// z_n = 1 - ratio^n on the positive axis, n = 1..count.  Geometric approach
/// to the boundary; ratio 1/2 is the standard exponential test sequence.
inline PointSequence gen_radial(double ratio, int count) {
    if (!(ratio > 0.0) || !(ratio < 1.0))
        throw std::invalid_argument("gen_radial: ratio must lie in (0, 1)");
    if (count < 1 || count > 2000)
        throw std::invalid_argument("gen_radial: count out of range");
    std::vector<DiskPoint> pts;
    pts.reserve(count);
    double q = 1.0;
    for (int n = 1; n <= count; ++n) {
        q *= ratio;
        if (q < kBoundaryGuard)
            throw std::invalid_argument("gen_radial: points fall inside the boundary guard band");
        pts.emplace_back(1.0 - q, 0.0);
    }
    return PointSequence(std::move(pts));
}

// Zero set of the lacunary product prod_k (1 - b z^(2^k)): level k carries
// the 2^k solutions of z^(2^k) = 1/b, i.e. radius 2^(-1/(p0 2^k)) and angles
// 2 pi j / 2^k.  Levels 1..K in order, angles by increasing j inside a level;
// 2^(K+1) - 2 points in total.
inline PointSequence horowitz_zeros(const HorowitzSpec& spec) {
    std::vector<DiskPoint> pts;
    pts.reserve((std::size_t{2} << spec.levels) - 2);
    for (int k = 1; k <= spec.levels; ++k) {
        const double count = std::exp2(static_cast<double>(k));
        const double radius = std::exp2(-1.0 / (spec.p0 * count));
        const std::int64_t n = std::int64_t{1} << k;
        for (std::int64_t j = 0; j < n; ++j) {
            const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
            pts.emplace_back(radius * std::cos(theta), radius * std::sin(theta));
        }
    }
    return PointSequence(std::move(pts));
}

struct InterpolationConstant {
    double delta = 1.0;
    std::size_t argmin_index = 0;  // smallest index attaining the minimum
};

// delta = min_k prod_{j != k} rho(z_j, z_k).  Products are accumulated as
// sums of log rho so that sequences of a few hundred points do not underflow;
// the winner is decided on the log scale (exp is monotone) with ties going to
// the smallest index.  Singleton sequences have the empty product, delta = 1.
inline InterpolationConstant interpolation_constant(const PointSequence& seq) {
    if (seq.empty()) throw std::invalid_argument("interpolation_constant: empty sequence");
    InterpolationConstant out;
    if (seq.size() == 1) return out;
    double best_log = std::numeric_limits<double>::infinity();
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < seq.size(); ++k) {
        double log_prod = 0.0;
        for (std::size_t j = 0; j < seq.size(); ++j) {
            if (j == k) continue;
            log_prod += std::log(pseudo_dist(seq[j], seq[k]));
        }
        if (log_prod < best_log) {
            best_log = log_prod;
            best_k = k;
        }
    }
    out.delta = std::exp(best_log);
    out.argmin_index = best_k;
    return out;
}

/// min over pairs of rho(z_j, z_k).  Needs at least two points.
inline double separation_constant(const PointSequence& seq) {
    if (seq.size() < 2)
        throw std::invalid_argument("separation_constant: need at least two points");
    double best = 1.0;
    for (std::size_t j = 0; j < seq.size(); ++j)
        for (std::size_t k = j + 1; k < seq.size(); ++k)
            best = std::min(best, pseudo_dist(seq[j], seq[k]));
    return best;
}

// Each z gets a twin at z + (1 - |z|)^(1 + eps_power), a real additive
// offset.  With d = 1 - |z| the twin modulus is at most (1 - d) + d^(1+e) < 1,
// so the pair stays inside the disk while its pseudohyperbolic separation
// collapses at rate d^eps_power.  Output keeps the base points first and
// appends the twin block after them, so length-N prefixes of the doubled
// sequence recover the original sequence.  Should rounding land the literal
// twin inside the boundary guard band, it is placed radially inward instead.
inline PointSequence double_sequence(const PointSequence& seq, double eps_power) {
    if (!(eps_power > 0.0) || !std::isfinite(eps_power))
        throw std::invalid_argument("double_sequence: eps_power must be positive and finite");
    std::vector<DiskPoint> pts(seq.points());
    pts.reserve(2 * seq.size());
    for (const DiskPoint& z : seq.points()) {
        const double d = 1.0 - z.abs();
        const double bump = std::pow(d, 1.0 + eps_power);
        if (z.abs() == 0.0) {
            // Degenerate case: d = 1 puts the literal twin on the circle.
            pts.emplace_back(0.5, 0.0);
            continue;
        }
        const Complex zc = z.value();
        Complex twin = zc + bump;
        if (1.0 - std::abs(twin) < kBoundaryGuard) twin = zc - bump * (zc / std::abs(zc));
        if (twin == zc)
            throw std::invalid_argument(
                "double_sequence: twin offset is below floating-point resolution at this point");
        pts.emplace_back(twin.real(), twin.imag());
    }
    return PointSequence(std::move(pts));  // rejects twin collisions
}

}  // namespace disklab
