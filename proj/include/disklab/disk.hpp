#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace disklab {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Distance from the unit circle below which points are rejected at
// construction.  Every formula in this library divides by quantities that
// vanish as |z| -> 1, so conditioning is kept explicit by refusing inputs
// inside the guard band instead of failing deep inside a product or a solve.
inline constexpr double kBoundaryGuard = 1e-14;

enum class Space { hardy, bergman };

inline const char* to_string(Space s) { return s == Space::hardy ? "hardy" : "bergman"; }

/// A point strictly inside the unit disk.
class DiskPoint {
public:
    DiskPoint(double re, double im) : re_(re), im_(im) {
        if (!std::isfinite(re) || !std::isfinite(im))
            throw std::invalid_argument("DiskPoint: non-finite coordinate");
        if (1.0 - std::hypot(re, im) < kBoundaryGuard)
            throw std::invalid_argument("DiskPoint: point on or too close to the unit circle");
    }
    explicit DiskPoint(Complex z) : DiskPoint(z.real(), z.imag()) {}

    double re() const { return re_; }
    double im() const { return im_; }
    Complex value() const { return Complex(re_, im_); }
    double abs() const { return std::hypot(re_, im_); }

    // Angle in [0, 2*pi).  The origin has no direction of its own; it is
    // assigned angle 0 (direction +1).
    double angle() const {
        if (re_ == 0.0 && im_ == 0.0) return 0.0;
        double t = std::atan2(im_, re_);
        if (t < 0.0) t += kTwoPi;
        if (t >= kTwoPi) t = 0.0;
        return t;
    }

    friend bool operator==(const DiskPoint& a, const DiskPoint& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const DiskPoint& a, const DiskPoint& b) { return !(a == b); }

private:
    double re_;
    double im_;
};

inline DiskPoint rotate(const DiskPoint& z, double theta) {
    const Complex w = z.value() * std::polar(1.0, theta);
    return DiskPoint(w.real(), w.imag());
}

/// |z - w| / |1 - conj(z) w|, the Moebius-invariant metric on the disk.
/// Symmetric, and strictly below 1 for interior points.
inline double pseudo_dist(const DiskPoint& z, const DiskPoint& w) {
    const Complex a = z.value();
    const Complex b = w.value();
    return std::abs(a - b) / std::abs(1.0 - std::conj(a) * b);
}

// Finite Blaschke product with the given zeros.  A zero a != 0 contributes
// (|a|/a) * (a - z) / (1 - conj(a) z), which is positive at z = 0; a zero at
// the origin contributes the bare factor z.  Factors are multiplied in index
// order so the result is reproducible.
inline Complex blaschke_eval(const std::vector<DiskPoint>& zeros, const DiskPoint& z) {
    const Complex w = z.value();
    Complex prod(1.0, 0.0);
    for (const DiskPoint& zero : zeros) {
        const Complex a = zero.value();
        if (a == Complex(0.0, 0.0)) {
            prod *= w;
        } else {
            prod *= (std::abs(a) / a) * (a - w) / (1.0 - std::conj(a) * w);
        }
    }
    return prod;
}

/// Value of a truncated infinite product together with a certificate for the
/// omitted factors.
struct TruncatedProductValue {
    Complex value;
    // Bound on sum_{k > terms_used} |b z^(2^k)|.  The full product differs
    // from the truncation by a factor T with |1 - T| <= exp(tail_bound) - 1.
    double tail_bound = 0.0;
    int terms_used = 0;
};

/// Parameters of the lacunary product prod_k (1 - b z^(2^k)) with b = 2^(1/p0).
struct HorowitzSpec {
    double p0;
    double b;
    int levels;

    HorowitzSpec(double p0_, int levels_)
        : p0(p0_), b(std::exp2(1.0 / p0_)), levels(levels_) {
        if (!std::isfinite(p0_) || !(p0_ > 0.0))
            throw std::invalid_argument("HorowitzSpec: p0 must be positive and finite");
        if (levels_ < 1)
            throw std::invalid_argument("HorowitzSpec: levels must be >= 1");
        if (levels_ > 20)
            throw std::invalid_argument("HorowitzSpec: levels > 20 is past desk scale");
    }
};

// prod_{k=1}^{K} (1 - b z^(2^k)), K = spec.levels.  The omitted factors are
// controlled through S = sum_{k>K} b |z|^(2^k) <= b |z|^(2^(K+1)) / (1 - |z|),
// a crude geometric domination of the lacunary exponents: the full product is
// value * T with |1 - T| <= prod_{k>K}(1 + b|z|^(2^k)) - 1 <= exp(S) - 1.
// That S is what tail_bound stores.  It shrinks doubly exponentially in K.
inline TruncatedProductValue horowitz_eval(const HorowitzSpec& spec, const DiskPoint& z) {
    TruncatedProductValue out;
    out.terms_used = spec.levels;
    Complex value(1.0, 0.0);
    Complex zpow = z.value();
    for (int k = 1; k <= spec.levels; ++k) {
        zpow *= zpow;  // z^(2^k)
        value *= 1.0 - spec.b * zpow;
    }
    const double r = z.abs();
    const double tail_head = std::pow(r, std::exp2(static_cast<double>(spec.levels + 1)));
    out.value = value;
    out.tail_bound = spec.b * tail_head / (1.0 - r);
    return out;
}

/// Circle radius used by Hardy-mode quadrature at a given angular resolution:
/// the distance to the boundary is tied to the node spacing.
inline double default_hardy_radius(int resolution) {
    return 1.0 - 1.0 / static_cast<double>(resolution);
}

// p-th power mean of |f| against either boundary arc measure (on a circle of
// radius hardy_radius) or normalized area, returned as a (quasi)norm.
//
// Hardy mode is the trapezoid rule on the circle |z| = r, which for periodic
// integrands is just the node mean; the sup over r in the norm definition is
// replaced by a single near-boundary circle, adequate for functions with no
// interior poles whose integral means grow in r.  Bergman mode is the tensor
// midpoint rule in (u, theta) with u = r^2, under which normalized area is
// the uniform unit measure.
template <class F>
double norm_quadrature(F&& f, Space space, double p, int resolution,
                       std::optional<double> hardy_radius = std::nullopt) {
    if (!(p > 0.0)) throw std::invalid_argument("norm_quadrature: p must be positive");
    if (resolution < 16) throw std::invalid_argument("norm_quadrature: resolution must be >= 16");

    const auto sample = [&](Complex zz) {
        const Complex fz = f(zz);
        if (!std::isfinite(fz.real()) || !std::isfinite(fz.imag()))
            throw std::domain_error("norm_quadrature: non-finite sample value");
        return std::pow(std::abs(fz), p);
    };

    double mean = 0.0;
    if (space == Space::hardy) {
        const double r = hardy_radius.value_or(default_hardy_radius(resolution));
        if (!(r > 0.0) || r >= 1.0)
            throw std::invalid_argument("norm_quadrature: radius must lie in (0, 1)");
        double acc = 0.0;
        for (int j = 0; j < resolution; ++j) {
            const double theta = kTwoPi * j / resolution;
            acc += sample(std::polar(r, theta));
        }
        mean = acc / resolution;
    } else {
        double acc = 0.0;
        for (int i = 0; i < resolution; ++i) {
            const double u = (i + 0.5) / resolution;
            const double r = std::sqrt(u);
            double row = 0.0;
            for (int j = 0; j < resolution; ++j) {
                const double theta = kTwoPi * (j + 0.5) / resolution;
                row += sample(std::polar(r, theta));
            }
            acc += row;
        }
        mean = acc / (static_cast<double>(resolution) * resolution);
    }
    return std::pow(mean, 1.0 / p);
}

}  // namespace disklab
