#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "disklab/measures.hpp"
#include "disklab/sequences.hpp"

namespace disklab {

/// Thrown when a construction is requested at an input where it is not
/// numerically meaningful (for example dividing by a Blaschke value that has
/// effectively vanished).
struct IllConditionedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Condition number beyond which a Gram-type matrix is treated as singular.
/// Crossing it is a reported outcome, not an exception.
inline constexpr double kSingularConditionCap = 1e14;

/// Squared norm of the reproducing kernel at w.
inline double kernel_norm_sq(const DiskPoint& w, Space space) {
    const double d = 1.0 - w.abs() * w.abs();
    return space == Space::hardy ? 1.0 / d : 1.0 / (d * d);
}

/// Kernel value k_w(z): (1 - conj(w) z)^-1 for the boundary-integral space,
/// its square for the area-integral space.
inline Complex kernel_value(const DiskPoint& w, const DiskPoint& z, Space space) {
    const Complex den = 1.0 - std::conj(w.value()) * z.value();
    const Complex h = 1.0 / den;
    return space == Space::hardy ? h : h * h;
}

/// |normalized kernel at w evaluated at z|^2; integrating this against a
/// measure gives the squared embedding norm of the unit-norm kernel.
inline double normalized_kernel_sq(const DiskPoint& w, const DiskPoint& z, Space space) {
    const double dw = 1.0 - w.abs() * w.abs();
    const double den = std::norm(1.0 - std::conj(w.value()) * z.value());
    const double hardy = dw / den;
    return space == Space::hardy ? hardy : hardy * hardy;
}

struct GramMatrix {
    Eigen::MatrixXcd entries;
    Space space = Space::hardy;
};

// Gram matrix of normalized reproducing kernels at the given points: unit
// diagonal, and |G_jk|^2 = 1 - rho(z_j, z_k)^2 in the boundary space.  The
// points are pairwise distinct by the sequence invariant, which is what keeps
// the matrix nonsingular in exact arithmetic.  Only the upper triangle is
// computed; the lower is its conjugate mirror.
inline GramMatrix kernel_gram(const PointSequence& points, Space space) {
    const auto n = static_cast<Eigen::Index>(points.size());
    GramMatrix g;
    g.space = space;
    g.entries.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        g.entries(j, j) = 1.0;
        for (Eigen::Index k = j + 1; k < n; ++k) {
            const DiskPoint& zj = points[static_cast<std::size_t>(j)];
            const DiskPoint& zk = points[static_cast<std::size_t>(k)];
            const double nj = std::sqrt(1.0 - zj.abs() * zj.abs());
            const double nk = std::sqrt(1.0 - zk.abs() * zk.abs());
            Complex v = nj * nk / (1.0 - std::conj(zj.value()) * zk.value());
            if (space == Space::bergman) v *= v;
            g.entries(j, k) = v;
            g.entries(k, j) = std::conj(v);
        }
    }
    return g;
}

enum class SpectralStatus { ok, singular };

inline const char* to_string(SpectralStatus s) {
    return s == SpectralStatus::ok ? "ok" : "singular";
}

struct SpectralSample {
    int n = 0;
    double margin = 0.0;
};

/// Common result shape for the margin computations.  What `margin` measures
/// is documented at each producing function; `series` tracks it along the
/// requested ladder of section sizes.
struct SpectralReport {
    int n = 0;
    double eig_min = 0.0;
    double eig_max = 0.0;
    double margin = 0.0;
    double condition = 0.0;
    SpectralStatus status = SpectralStatus::ok;
    std::vector<SpectralSample> series;
};

namespace detail {

struct EigenExtremes {
    double min = 0.0;
    double max = 0.0;
};

inline EigenExtremes hermitian_extremes(const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hermitian_extremes: eigensolver failed to converge");
    const auto& ev = solver.eigenvalues();
    return {ev(0), ev(ev.size() - 1)};
}

inline void check_ladder(const std::vector<int>& ladder, std::size_t cap, const char* who) {
    if (ladder.empty()) throw std::invalid_argument(std::string(who) + ": empty ladder");
    int prev = 0;
    for (int n : ladder) {
        if (n <= prev) throw std::invalid_argument(std::string(who) + ": ladder must be strictly increasing and positive");
        prev = n;
    }
    if (cap != 0 && static_cast<std::size_t>(ladder.back()) > cap)
        throw std::invalid_argument(std::string(who) + ": ladder exceeds the available size");
}

// condition = eig_max / eig_min for a positive matrix; a non-positive minimum
// means the matrix is numerically indefinite, which counts as singular.
inline double positive_condition(const EigenExtremes& e) {
    if (!(e.min > 0.0)) return kSingularConditionCap * 10.0;
    const double c = e.max / e.min;
    return std::min(c, 1e300);
}

// Smallest eigenvalue a double-precision eigensolve of a matrix with this
// eig_max can resolve; minima at or below it are roundoff, not data.
inline double eigen_resolution_floor(double eig_max) { return eig_max * 1e-16; }

}  // namespace detail

/// Default section ladders.  Margins are tracked along a short geometric-ish
/// ladder: stability across it is the evidence of a limit, decay across it is
/// the evidence of degeneration.
inline const std::vector<int>& discrete_ladder() {
    static const std::vector<int> l{8, 15, 30};
    return l;
}
inline const std::vector<int>& section_ladder() {
    static const std::vector<int> l{8, 16, 32};
    return l;
}

/// Ladder clipped to a maximum size; always ends at max_n itself.
inline std::vector<int> clip_ladder(const std::vector<int>& ladder, std::size_t max_n) {
    std::vector<int> out;
    for (int n : ladder)
        if (static_cast<std::size_t>(n) < max_n) out.push_back(n);
    if (max_n > 0) out.push_back(static_cast<int>(max_n));
    return out;
}

// Worst-case least-norm blowup of interpolation against the measure's atoms:
// C_n = 1 / sqrt(eig_min(B_n)) with B_n = A^(1/2) K A^(1/2) over the first n
// atoms, K the unnormalized kernel Gram and A the diagonal of weights.  The
// reported margin is C at the largest section; C_n never decreases in n, so
// growth along the series is the quantity of interest.  A section whose
// condition number passes the singularity cap flags the report singular but
// the ladder keeps going: the section's eig_min is clamped at the eigensolver
// resolution floor, making the recorded C_n a certified lower bound on the
// true blowup.  Scalar fields describe the last section; `condition` is the
// worst one seen.
inline SpectralReport least_norm_margin(const DiscreteMeasure& mu, Space space,
                                        const std::vector<int>& n_list) {
    detail::check_ladder(n_list, mu.size(), "least_norm_margin");
    const auto& atoms = mu.atoms();
    const auto full = static_cast<Eigen::Index>(n_list.back());
    Eigen::MatrixXcd b(full, full);
    for (Eigen::Index j = 0; j < full; ++j) {
        for (Eigen::Index k = j; k < full; ++k) {
            const Atom& aj = atoms[static_cast<std::size_t>(j)];
            const Atom& ak = atoms[static_cast<std::size_t>(k)];
            const Complex kv = kernel_value(aj.point, ak.point, space);
            const Complex v = std::sqrt(aj.weight) * std::sqrt(ak.weight) * kv;
            b(j, k) = v;
            if (k != j) b(k, j) = std::conj(v);
        }
    }
    SpectralReport out;
    for (int n : n_list) {
        const auto ext = detail::hermitian_extremes(b.topLeftCorner(n, n));
        const double cond = detail::positive_condition(ext);
        const double floor = detail::eigen_resolution_floor(ext.max);
        double eig_used = ext.min;
        if (cond > kSingularConditionCap || !(eig_used > floor)) {
            out.status = SpectralStatus::singular;
            eig_used = std::max(eig_used, floor);
        }
        out.n = n;
        out.eig_min = ext.min;
        out.eig_max = ext.max;
        out.condition = std::max(out.condition, cond);
        out.margin = 1.0 / std::sqrt(eig_used);
        out.series.push_back({n, out.margin});
    }
    return out;
}

// Frame bounds of the normalized kernels at the sequence points: margin is
// eig_min of the normalized Gram at the largest section, the lower frame
// bound governing stability of the kernel system.  Sections follow the
// ladder; a section past the singularity cap flags the report but the ladder
// keeps going, with the margin clamped at zero (no lower frame bound left).
inline SpectralReport riesz_bounds(const PointSequence& points, Space space,
                                   const std::vector<int>& ladder) {
    detail::check_ladder(ladder, points.size(), "riesz_bounds");
    const GramMatrix g = kernel_gram(points, space);
    SpectralReport out;
    for (int n : ladder) {
        const auto ext = detail::hermitian_extremes(g.entries.topLeftCorner(n, n));
        const double cond = detail::positive_condition(ext);
        if (cond > kSingularConditionCap) out.status = SpectralStatus::singular;
        out.n = n;
        out.eig_min = ext.min;
        out.eig_max = ext.max;
        out.condition = std::max(out.condition, cond);
        out.margin = std::max(ext.min, 0.0);
        out.series.push_back({n, out.margin});
    }
    return out;
}

inline SpectralReport riesz_bounds(const PointSequence& points, Space space) {
    return riesz_bounds(points, space, clip_ladder(section_ladder(), points.size()));
}

namespace detail {

// Section matrix of the embedding against the normalized monomial basis of
// the area space, e_j(z) = sqrt(j+1) z^j: entries are integrals
// (M_n)_jk = integral of e_j conj(e_k) d mu, accumulated atom by atom.
inline Eigen::MatrixXcd section_matrix(const DiscreteMeasure& mu, int n) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    std::vector<Complex> powers(static_cast<std::size_t>(n));
    for (const Atom& a : mu.atoms()) {
        powers[0] = 1.0;
        for (int j = 1; j < n; ++j) powers[j] = powers[j - 1] * a.point.value();
        for (int j = 0; j < n; ++j) {
            for (int k = j; k < n; ++k) {
                const double scale = std::sqrt((j + 1.0) * (k + 1.0)) * a.weight;
                const Complex v = scale * powers[j] * std::conj(powers[k]);
                m(j, k) += v;
                if (k != j) m(k, j) += std::conj(v);
            }
        }
    }
    return m;
}

// Grid version.  The density is uniform in (u, theta) over the full disk, so
// the entry integral factorizes: the angular integral of e^(i(j-k)theta) over
// a full period vanishes unless j = k, and the radial integral of u^j against
// du is 1/(j+1), cancelling the normalization.  Sections of a uniform grid of
// mass T are exactly T times the identity, independent of resolution.
inline Eigen::MatrixXcd section_matrix(const GridMeasure& mu, int n) {
    return mu.total_mass() * Eigen::MatrixXcd::Identity(n, n);
}

inline Eigen::MatrixXcd section_matrix(const Measure& mu, int n) {
    return std::visit([&](const auto& m) { return section_matrix(m, n); }, mu);
}

}  // namespace detail

// Spectrum of embedding sections: margin is eig_min of M_n at the largest
// requested section, the finite-dimensional lower sampling bound
// min ||f||^2_mu / ||f||^2 over polynomials of degree below n.
inline SpectralReport section_matrix_spectrum(const Measure& mu, const std::vector<int>& ladder) {
    detail::check_ladder(ladder, 0, "section_matrix_spectrum");
    if (ladder.back() > 256)
        throw std::invalid_argument("section_matrix_spectrum: sections beyond 256 are past desk scale");
    SpectralReport out;
    const Eigen::MatrixXcd full = detail::section_matrix(mu, ladder.back());
    for (int n : ladder) {
        const auto ext = detail::hermitian_extremes(full.topLeftCorner(n, n));
        out.n = n;
        out.eig_min = ext.min;
        out.eig_max = ext.max;
        out.condition = detail::positive_condition(ext);
        out.margin = std::max(ext.min, 0.0);
        out.series.push_back({n, out.margin});
    }
    // Sections of a positive measure are positive semidefinite; a negative
    // eigenvalue can only be roundoff, but flag outright indefiniteness.
    out.status = out.eig_min > -1e-10 ? SpectralStatus::ok : SpectralStatus::singular;
    return out;
}

inline SpectralReport section_matrix_spectrum(const Measure& mu) {
    return section_matrix_spectrum(mu, section_ladder());
}

struct WitnessSample {
    DiskPoint at;
    double value = 0.0;
};

// Embedding norm of the normalized kernel along a path toward the boundary:
// value(w) = sqrt(integral of |khat_w|^2 d mu).  Decay along the path
// witnesses failure of the reverse embedding bound near that boundary point.
// Grid measures are integrated by cell-midpoint quadrature.
inline std::vector<WitnessSample> reverse_witness(const Measure& mu,
                                                  const std::vector<DiskPoint>& path,
                                                  Space space) {
    if (path.empty()) throw std::invalid_argument("reverse_witness: empty path");
    for (std::size_t i = 1; i < path.size(); ++i)
        if (path[i].abs() < path[i - 1].abs())
            throw std::invalid_argument("reverse_witness: path must approach the boundary");
    std::vector<WitnessSample> out;
    out.reserve(path.size());
    for (const DiskPoint& w : path) {
        double acc = 0.0;
        if (const auto* d = std::get_if<DiscreteMeasure>(&mu)) {
            for (const Atom& a : d->atoms()) acc += a.weight * normalized_kernel_sq(w, a.point, space);
        } else {
            const auto& g = std::get<GridMeasure>(mu);
            const double cw = g.cell_weight();
            for (int i = 0; i < g.nr(); ++i)
                for (int j = 0; j < g.ntheta(); ++j)
                    acc += cw * normalized_kernel_sq(w, g.cell_center(i, j), space);
        }
        out.push_back({w, std::sqrt(acc)});
    }
    return out;
}

// Dyadic ray toward the boundary, w_m = d * (1 - 2^-m) for m = 1..depth.
// The direction d points away from the measure's angular center of mass,
// the region where a finite measure has the least kernel mass to offer; a
// centered measure (grids, or a balanced atom cloud) gets the positive axis.
inline std::vector<DiskPoint> default_witness_path(const Measure& mu, int depth) {
    if (depth < 1 || depth > 40)
        throw std::invalid_argument("default_witness_path: depth out of range");
    Complex dir(1.0, 0.0);
    if (const auto* d = std::get_if<DiscreteMeasure>(&mu)) {
        Complex centroid(0.0, 0.0);
        for (const Atom& a : d->atoms()) centroid += a.weight * a.point.value();
        if (std::abs(centroid) > 1e-12 * std::max(1.0, d->total_mass()))
            dir = -centroid / std::abs(centroid);
    }
    std::vector<DiskPoint> path;
    path.reserve(depth);
    for (int m = 1; m <= depth; ++m) {
        const Complex w = dir * (1.0 - std::ldexp(1.0, -m));
        path.emplace_back(w.real(), w.imag());
    }
    return path;
}

/// Solution of the finite boundary-space interpolation problem, kept as an
/// evaluator plus a crude size sample.
struct FiniteInterpolant {
    std::function<Complex(Complex)> eval;
    double sup_norm_sample = 0.0;  // max |h| over a dense near-boundary circle
    std::size_t interpolated = 0;  // leading points carrying data
    std::size_t annihilated = 0;   // trailing points where h vanishes
};

// h = B * Q: B is the Blaschke product over the trailing points (so h
// vanishes there exactly), Q the polynomial interpolating data_n / B(z_n) at
// the leading points, evaluated in barycentric form.  The construction fails
// loudly when B has effectively vanished at a leading point, since dividing
// by it would manufacture garbage data.
inline FiniteInterpolant finite_interpolant_hardy(const PointSequence& points,
                                                  const std::vector<Complex>& data) {
    const std::size_t n = data.size();
    if (n == 0 || n > points.size())
        throw std::invalid_argument("finite_interpolant_hardy: need 1 <= #data <= #points");
    for (const Complex& v : data)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("finite_interpolant_hardy: non-finite data");

    std::vector<DiskPoint> tail(points.points().begin() + n, points.points().end());
    std::vector<Complex> nodes;
    nodes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) nodes.push_back(points[i].value());

    // Divided data d_k = data_k / B(z_k).
    std::vector<Complex> divided(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Complex bk = blaschke_eval(tail, points[k]);
        if (std::abs(bk) < 1e-12)
            throw IllConditionedError(
                "finite_interpolant_hardy: Blaschke factor vanishes at an interpolation point");
        divided[k] = data[k] / bk;
    }

    // Barycentric weights lambda_k = 1 / prod_{j != k} (z_k - z_j).
    std::vector<Complex> lambda(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex prod(1.0, 0.0);
        for (std::size_t j = 0; j < n; ++j)
            if (j != k) prod *= nodes[k] - nodes[j];
        lambda[k] = 1.0 / prod;
    }

    auto eval = [tail = std::move(tail), nodes, lambda, divided, n](Complex z) -> Complex {
        Complex b(1.0, 0.0);
        for (const DiskPoint& a : tail) {
            const Complex av = a.value();
            if (av == Complex(0.0, 0.0))
                b *= z;
            else
                b *= (std::abs(av) / av) * (av - z) / (1.0 - std::conj(av) * z);
        }
        // Barycentric second form; exact passage through a node.
        Complex num(0.0, 0.0), den(0.0, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            const Complex diff = z - nodes[k];
            if (diff == Complex(0.0, 0.0)) return b * divided[k];
            const Complex t = lambda[k] / diff;
            num += t * divided[k];
            den += t;
        }
        return b * (num / den);
    };

    FiniteInterpolant out;
    out.interpolated = n;
    out.annihilated = points.size() - n;
    double sup = 0.0;
    for (int j = 0; j < 1024; ++j) {
        const Complex z = std::polar(0.999, kTwoPi * j / 1024.0);
        sup = std::max(sup, std::abs(eval(z)));
    }
    out.sup_norm_sample = sup;
    out.eval = std::move(eval);
    return out;
}

/// Squared norm of the minimal-norm interpolant of `data` at the sequence
/// points: data^* K^{-1} data with the unnormalized kernel Gram K.
inline double least_norm_interpolant_normsq(const PointSequence& points, Space space,
                                            const std::vector<Complex>& data) {
    if (data.size() != points.size())
        throw std::invalid_argument("least_norm_interpolant_normsq: data size mismatch");
    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXcd k(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            k(i, j) = kernel_value(points[static_cast<std::size_t>(j)],
                                   points[static_cast<std::size_t>(i)], space);
    Eigen::VectorXcd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) rhs(i) = data[static_cast<std::size_t>(i)];
    const Eigen::VectorXcd c = k.ldlt().solve(rhs);
    return std::max(0.0, (rhs.adjoint() * c)(0, 0).real());
}

}  // namespace disklab
