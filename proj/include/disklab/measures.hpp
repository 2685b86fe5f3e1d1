#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "disklab/disk.hpp"

namespace disklab {

struct Atom {
    DiskPoint point;
    double weight;
};

/// Finite positive measure supported on finitely many interior points.
/// Construction merges atoms at coinciding points (weights add) and keeps
/// first-occurrence order, so the atom list is duplicate-free afterwards.
class DiscreteMeasure {
public:
    DiscreteMeasure() = default;

    explicit DiscreteMeasure(const std::vector<Atom>& atoms) {
        atoms_.reserve(atoms.size());
        for (const Atom& a : atoms) {
            if (!std::isfinite(a.weight) || !(a.weight > 0.0))
                throw std::invalid_argument("DiscreteMeasure: weights must be positive and finite");
            bool merged = false;
            for (Atom& existing : atoms_) {
                if (existing.point == a.point) {
                    existing.weight += a.weight;
                    merged = true;
                    break;
                }
            }
            if (!merged) atoms_.push_back(a);
        }
        for (const Atom& a : atoms_) total_ += a.weight;
        if (!std::isfinite(total_))
            throw std::invalid_argument("DiscreteMeasure: total mass must be finite");
    }

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }
    double total_mass() const { return total_; }

    /// Measure restricted to the first n atoms (construction order).
    DiscreteMeasure prefix(std::size_t n) const {
        if (n > atoms_.size()) throw std::invalid_argument("DiscreteMeasure::prefix: n too large");
        return DiscreteMeasure(std::vector<Atom>(atoms_.begin(), atoms_.begin() + n));
    }

private:
    std::vector<Atom> atoms_;
    double total_ = 0.0;
};

// Uniform polar grid measure: piecewise-uniform density in (u, theta) with
// u = r^2, over nr x ntheta congruent cells tiling the disk, all carrying the
// same weight total / (nr * ntheta).  The weight is spread over the polar box,
// not parked at the cell center; Carleson-square masses and monomial moments
// are therefore available per cell in closed form.  This class tags measures
// that approximate a continuous distribution, as opposed to genuinely
// discrete point masses.
class GridMeasure {
public:
    static constexpr const char* kind = "continuous-approximation";

    GridMeasure(int nr, int ntheta, double total, double theta_offset = 0.0)
        : nr_(nr), ntheta_(ntheta), total_(total), theta_offset_(theta_offset) {
        if (nr < 8 || ntheta < 8)
            throw std::invalid_argument("GridMeasure: resolution must be >= 8 in both directions");
        if (!std::isfinite(total) || !(total > 0.0))
            throw std::invalid_argument("GridMeasure: total mass must be positive and finite");
        if (!std::isfinite(theta_offset))
            throw std::invalid_argument("GridMeasure: non-finite angular offset");
        // Cell weights are equal by construction; check they add back up to
        // the requested mass instead of trusting the arithmetic blindly.
        const double w = cell_weight();
        const double recovered = w * nr_ * ntheta_;
        if (std::abs(recovered - total_) > 1e-9 * std::max(1.0, std::abs(total_)))
            throw std::logic_error("GridMeasure: cell weights do not recover the total mass");
    }

    int nr() const { return nr_; }
    int ntheta() const { return ntheta_; }
    double total_mass() const { return total_; }
    double theta_offset() const { return theta_offset_; }
    double cell_weight() const { return total_ / (static_cast<double>(nr_) * ntheta_); }

    double u_edge(int i) const { return static_cast<double>(i) / nr_; }
    double theta_edge(int j) const { return theta_offset_ + kTwoPi * j / ntheta_; }

    DiskPoint cell_center(int i, int j) const {
        const double u = (i + 0.5) / nr_;
        const double theta = theta_offset_ + kTwoPi * (j + 0.5) / ntheta_;
        const double r = std::sqrt(u);
        return DiskPoint(r * std::cos(theta), r * std::sin(theta));
    }

private:
    int nr_;
    int ntheta_;
    double total_;
    double theta_offset_;
};

using Measure = std::variant<DiscreteMeasure, GridMeasure>;

inline bool is_discrete(const Measure& mu) {
    return std::holds_alternative<DiscreteMeasure>(mu);
}

inline double total_mass(const Measure& mu) {
    return std::visit([](const auto& m) { return m.total_mass(); }, mu);
}

/// Dyadic boundary arc: level l splits the circle into 2^l arcs of normalized
/// length 2^-l; arc (l, k) covers angles [2 pi k 2^-l, 2 pi (k+1) 2^-l).
struct DyadicArc {
    int level;
    std::int64_t index;

    DyadicArc(int level_, std::int64_t index_) : level(level_), index(index_) {
        if (level_ < 0 || level_ > 40)
            throw std::invalid_argument("DyadicArc: level out of range");
        if (index_ < 0 || index_ >= (std::int64_t{1} << level_))
            throw std::invalid_argument("DyadicArc: index out of range for level");
    }

    /// Normalized arc length m(I) = 2^-level.
    double length() const { return std::ldexp(1.0, -level); }
    double theta_lo() const { return kTwoPi * static_cast<double>(index) * length(); }
    double theta_hi() const { return kTwoPi * static_cast<double>(index + 1) * length(); }

    // Carleson square membership: the angular projection falls in the arc and
    // |z| >= 1 - m(I).  Ties on the radial cut count as inside; the origin
    // projects to angle 0.
    bool square_contains(const DiskPoint& z) const {
        if (z.abs() < 1.0 - length()) return false;
        const double t = z.angle();
        return t >= theta_lo() && t < theta_hi();
    }
};

struct CarlesonReport {
    double value = 0.0;               // max over all levels swept
    std::vector<double> per_level;    // per_level[l] = max ratio at level l
};

namespace detail {

inline void check_carleson_args(int alpha, int max_level) {
    if (alpha != 1 && alpha != 2)
        throw std::invalid_argument("carleson_constant: alpha must be 1 or 2");
    if (max_level < 0 || max_level > 40)
        throw std::invalid_argument("carleson_constant: max_level out of range");
}

}  // namespace detail

// sup over dyadic arcs I of mu(Q_I) / m(I)^alpha, swept over levels
// 0..max_level.  Arc masses at a level are accumulated in atom order, so the
// result is bitwise reproducible.
inline CarlesonReport carleson_constant(const DiscreteMeasure& mu, int alpha, int max_level) {
    detail::check_carleson_args(alpha, max_level);
    CarlesonReport out;
    out.per_level.reserve(max_level + 1);
    for (int level = 0; level <= max_level; ++level) {
        const double m = std::ldexp(1.0, -level);
        const double r_cut = 1.0 - m;
        const double denom = alpha == 1 ? m : m * m;
        std::unordered_map<std::int64_t, double> arc_mass;
        for (const Atom& a : mu.atoms()) {
            if (a.point.abs() < r_cut) continue;
            // Angular bucket; angle() < 2 pi keeps the index below 2^level.
            auto k = static_cast<std::int64_t>(std::floor(a.point.angle() / kTwoPi * std::ldexp(1.0, level)));
            const std::int64_t arcs = std::int64_t{1} << level;
            if (k >= arcs) k = arcs - 1;
            arc_mass[k] += a.weight;
        }
        double best = 0.0;
        for (const auto& [k, mass] : arc_mass) best = std::max(best, mass / denom);
        out.per_level.push_back(best);
        out.value = std::max(out.value, best);
    }
    return out;
}

// Grid version.  The cells tile the circle with equal angular width, so every
// dyadic arc at every level receives exactly the same mass: the angular
// fraction of the grid inside the arc's sector is m(I) regardless of where
// the arc sits (cell boundaries only redistribute which cell contributes
// which sliver).  The radial fraction telescopes across cell edges to the
// exact overlap of [0,1] with [u_cut, 1] in u = r^2.  The level-l mass is
// therefore total * (1 - (1-m)^2) * m with m = 2^-l, with no per-arc sweep.
inline CarlesonReport carleson_constant(const GridMeasure& mu, int alpha, int max_level) {
    detail::check_carleson_args(alpha, max_level);
    CarlesonReport out;
    out.per_level.reserve(max_level + 1);
    for (int level = 0; level <= max_level; ++level) {
        const double m = std::ldexp(1.0, -level);
        const double r_cut = 1.0 - m;
        const double u_cut = r_cut * r_cut;
        const double denom = alpha == 1 ? m : m * m;
        const double mass = mu.total_mass() * (1.0 - u_cut) * m;
        const double ratio = mass / denom;
        out.per_level.push_back(ratio);
        out.value = std::max(out.value, ratio);
    }
    return out;
}

inline CarlesonReport carleson_constant(const Measure& mu, int alpha, int max_level) {
    return std::visit([&](const auto& m) { return carleson_constant(m, alpha, max_level); }, mu);
}

/// sum_n (1 - |z_n|) over the support points, weights ignored.  Finiteness of
/// this sum is the usual zero-set admission ticket; desk-scale inputs are
/// finite so the sum always exists here.
inline double blaschke_sum(const DiscreteMeasure& mu) {
    double s = 0.0;
    for (const Atom& a : mu.atoms()) s += 1.0 - a.point.abs();
    return s;
}

struct WeightEquivalence {
    double lo = 0.0;  // min of weight / (1-|z|)^alpha
    double hi = 0.0;  // max of the same ratio
    double ratio() const { return hi / lo; }
};

/// Extremes of w_n / (1 - |z_n|)^alpha over the atoms.  A measure is
/// comparable to the canonical weights exactly when hi/lo is moderate.
inline WeightEquivalence weight_equivalence_ratio(const DiscreteMeasure& mu, int alpha) {
    if (alpha != 1 && alpha != 2)
        throw std::invalid_argument("weight_equivalence_ratio: alpha must be 1 or 2");
    if (mu.empty())
        throw std::invalid_argument("weight_equivalence_ratio: empty measure");
    WeightEquivalence out;
    bool first = true;
    for (const Atom& a : mu.atoms()) {
        const double d = 1.0 - a.point.abs();
        const double ratio = a.weight / (alpha == 1 ? d : d * d);
        if (first) {
            out.lo = out.hi = ratio;
            first = false;
        } else {
            out.lo = std::min(out.lo, ratio);
            out.hi = std::max(out.hi, ratio);
        }
    }
    return out;
}

namespace detail {

inline void require_distinct(const std::vector<DiskPoint>& points, const char* who) {
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j])
                throw std::invalid_argument(std::string(who) + ": duplicate points");
}

}  // namespace detail

/// Measure sum_n (1 - |z_n|) delta_{z_n}.
inline DiscreteMeasure build_mu_Z(const std::vector<DiskPoint>& points) {
    detail::require_distinct(points, "build_mu_Z");
    std::vector<Atom> atoms;
    atoms.reserve(points.size());
    for (const DiskPoint& z : points) atoms.push_back({z, 1.0 - z.abs()});
    return DiscreteMeasure(atoms);
}

/// Measure sum_n (1 - |z_n|)^2 delta_{z_n}.
inline DiscreteMeasure build_nu_Z(const std::vector<DiskPoint>& points) {
    detail::require_distinct(points, "build_nu_Z");
    std::vector<Atom> atoms;
    atoms.reserve(points.size());
    for (const DiskPoint& z : points) {
        const double d = 1.0 - z.abs();
        atoms.push_back({z, d * d});
    }
    return DiscreteMeasure(atoms);
}

/// Normalized area measure, discretized on an nr x ntheta polar grid with
/// unit total mass.
inline GridMeasure build_sigma_grid(int nr, int ntheta) {
    return GridMeasure(nr, ntheta, 1.0);
}

inline DiscreteMeasure rotate(const DiscreteMeasure& mu, double theta) {
    std::vector<Atom> atoms;
    atoms.reserve(mu.size());
    for (const Atom& a : mu.atoms()) atoms.push_back({rotate(a.point, theta), a.weight});
    return DiscreteMeasure(atoms);
}

inline GridMeasure rotate(const GridMeasure& mu, double theta) {
    return GridMeasure(mu.nr(), mu.ntheta(), mu.total_mass(), mu.theta_offset() + theta);
}

inline Measure rotate(const Measure& mu, double theta) {
    return std::visit([&](const auto& m) { return Measure(rotate(m, theta)); }, mu);
}

inline DiscreteMeasure scale_weights(const DiscreteMeasure& mu, double c) {
    if (!std::isfinite(c) || !(c > 0.0))
        throw std::invalid_argument("scale_weights: factor must be positive and finite");
    std::vector<Atom> atoms;
    atoms.reserve(mu.size());
    for (const Atom& a : mu.atoms()) atoms.push_back({a.point, c * a.weight});
    return DiscreteMeasure(atoms);
}

inline Measure scale_weights(const Measure& mu, double c) {
    if (const auto* d = std::get_if<DiscreteMeasure>(&mu)) return Measure(scale_weights(*d, c));
    const auto& g = std::get<GridMeasure>(mu);
    if (!std::isfinite(c) || !(c > 0.0))
        throw std::invalid_argument("scale_weights: factor must be positive and finite");
    return Measure(GridMeasure(g.nr(), g.ntheta(), c * g.total_mass(), g.theta_offset()));
}

}  // namespace disklab
