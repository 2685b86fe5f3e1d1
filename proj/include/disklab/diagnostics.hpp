#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "disklab/measures.hpp"
#include "disklab/sequences.hpp"
#include "disklab/spectral.hpp"

namespace disklab {

// Decision thresholds for the closed-range verdicts.  The defaults are the
// library's calibrated operating point; every one can be overridden by name.
struct DiagnosticThresholds {
    double delta_min = 1e-3;       // interpolation constant below this is uncertifiable
    double equiv_cap = 1e3;        // max tolerated spread of w_n / (1-|z_n|)^alpha
    double growth_cap = 2.0;       // margin growth across the ladder still accepted
    double diverge_cap = 10.0;     // margin growth certifying divergence
    double sampling_floor = 1e-3;  // minimum healthy section eig_min
    double riesz_min = 1e-3;       // minimum healthy lower frame bound
    double decay_cap = 0.2;        // trend ratio below this certifies decay
    double blaschke_cap = 50.0;    // sum (1-|z_n|) beyond this is not desk-scale atomic
};

inline void apply_threshold_override(DiagnosticThresholds& t, const std::string& name,
                                     double value) {
    if (!std::isfinite(value) || !(value > 0.0))
        throw std::invalid_argument("threshold override: value must be positive and finite");
    if (name == "delta_min") t.delta_min = value;
    else if (name == "equiv_cap") t.equiv_cap = value;
    else if (name == "growth_cap") t.growth_cap = value;
    else if (name == "diverge_cap") t.diverge_cap = value;
    else if (name == "sampling_floor") t.sampling_floor = value;
    else if (name == "riesz_min") t.riesz_min = value;
    else if (name == "decay_cap") t.decay_cap = value;
    else if (name == "blaschke_cap") t.blaschke_cap = value;
    else throw std::invalid_argument("threshold override: unknown name '" + name + "'");
}

enum class ClosedRangeStatus { closed, not_closed, inconclusive };

inline const char* to_string(ClosedRangeStatus s) {
    switch (s) {
        case ClosedRangeStatus::closed: return "Closed";
        case ClosedRangeStatus::not_closed: return "NotClosed";
        default: return "Inconclusive";
    }
}

struct EvidenceItem {
    std::string criterion;
    double value = 0.0;
    double threshold = 0.0;  // 0 marks purely informational entries
    bool pass = true;
};

/// Outcome of a closed-range diagnosis: a three-way status, the route that
/// decided it, and the full evidence trail in a fixed order.
struct ClosedRangeVerdict {
    ClosedRangeStatus status = ClosedRangeStatus::inconclusive;
    std::string route = "insufficient-certainty";
    double p = 2.0;
    double q = 2.0;
    Space space = Space::hardy;
    std::vector<EvidenceItem> evidence;
};

namespace detail {

inline void check_exponents(double p, double q) {
    if (!std::isfinite(p) || !(p > 0.0) || !std::isfinite(q) || !(q > 0.0))
        throw std::invalid_argument("diagnose: exponents must be positive and finite");
}

inline double series_min(const SpectralReport& r) {
    double m = r.series.empty() ? 0.0 : r.series.front().margin;
    for (const auto& s : r.series) m = std::min(m, s.margin);
    return m;
}

inline double series_trend(const SpectralReport& r) {
    if (r.series.size() < 2) return 1.0;
    const double first = r.series.front().margin;
    if (!(first > 0.0)) return 0.0;
    return r.series.back().margin / first;
}

// Margin growth across the ladder: last value against the largest section not
// past the halfway mark.  A singleton ladder has nothing to compare, growth 1.
inline double ladder_growth(const SpectralReport& r) {
    if (r.series.size() < 2) return 1.0;
    const int last_n = r.series.back().n;
    double ref = r.series.front().margin;
    for (const auto& s : r.series)
        if (s.n <= (last_n + 1) / 2) ref = s.margin;
    if (!(ref > 0.0)) return 1.0;
    return r.series.back().margin / ref;
}

}  // namespace detail

// Boundary-space closed-range diagnosis at p = q = 2 (unequal exponents and
// non-atomic measures are certified failures on general grounds).  The
// positive route requires three things to hold at once: a healthy
// interpolation constant, atom weights comparable to 1 - |z_n|, and
// least-norm margins that have stopped growing along the section ladder.
// Certified negatives need a decaying trend, not just a failed floor; when
// neither side is certified the verdict stays inconclusive.
inline ClosedRangeVerdict diagnose_hardy(const Measure& mu, double p, double q,
                                         const DiagnosticThresholds& thr = {}) {
    detail::check_exponents(p, q);
    ClosedRangeVerdict v;
    v.space = Space::hardy;
    v.p = p;
    v.q = q;
    v.evidence.push_back(
        {"carleson-alpha1", carleson_constant(mu, 1, 8).value, 0.0, true});

    if (p != q) {
        v.evidence.push_back({"p-equals-q", std::abs(p - q), 0.0, false});
        v.status = ClosedRangeStatus::not_closed;
        v.route = "p-neq-q";
        return v;
    }

    if (!is_discrete(mu)) {
        v.evidence.push_back({"support-atomic", 0.0, 1.0, false});
        v.status = ClosedRangeStatus::not_closed;
        v.route = "non-discrete";
        return v;
    }

    const auto& d = std::get<DiscreteMeasure>(mu);
    const double bs = blaschke_sum(d);
    const bool bs_ok = bs <= thr.blaschke_cap;
    v.evidence.push_back({"blaschke-sum", bs, thr.blaschke_cap, bs_ok});
    if (!bs_ok) {
        v.status = ClosedRangeStatus::not_closed;
        v.route = "non-discrete";
        return v;
    }

    std::vector<DiskPoint> pts;
    pts.reserve(d.size());
    for (const Atom& a : d.atoms()) pts.push_back(a.point);
    const PointSequence seq(std::move(pts));
    const std::size_t half = (seq.size() + 1) / 2;

    const double delta_full = interpolation_constant(seq).delta;
    const double delta_half = interpolation_constant(seq.prefix(half)).delta;
    const double delta_trend = delta_half > 0.0 ? delta_full / delta_half : 1.0;

    const double equiv_full = weight_equivalence_ratio(d, 1).ratio();
    const double equiv_half = weight_equivalence_ratio(d.prefix(half), 1).ratio();
    const double equiv_trend = equiv_half > 0.0 ? equiv_full / equiv_half : 1.0;

    const SpectralReport margins =
        least_norm_margin(d, Space::hardy, clip_ladder(discrete_ladder(), d.size()));

    const bool delta_ok = delta_full >= thr.delta_min;
    const bool equiv_ok = equiv_full <= thr.equiv_cap;
    v.evidence.push_back({"delta", delta_full, thr.delta_min, delta_ok});
    v.evidence.push_back({"delta-trend", delta_trend, 0.5, delta_trend > 0.5});
    v.evidence.push_back({"weight-equivalence", equiv_full, thr.equiv_cap, equiv_ok});
    v.evidence.push_back({"equivalence-trend", equiv_trend, 2.0, equiv_trend < 2.0});

    const bool gram_ok = margins.status == SpectralStatus::ok;
    v.evidence.push_back(
        {"gram-condition", margins.condition, kSingularConditionCap, gram_ok});

    const double growth = detail::ladder_growth(margins);
    const bool growth_ok = growth <= thr.growth_cap;
    v.evidence.push_back({"margin-growth", growth, thr.growth_cap, growth_ok});
    v.evidence.push_back({"margin", margins.margin, 0.0, true});

    // The positive route needs every piece healthy, the singularity cap
    // included: a section past it cannot certify a bounded constant.  The
    // negative routes need a certified divergence or decay, which singular
    // sections only reinforce (their margins are lower bounds).
    if (delta_ok && equiv_ok && growth_ok && gram_ok) {
        v.status = ClosedRangeStatus::closed;
        v.route = "interpolating-form";
    } else if (growth >= thr.diverge_cap) {
        v.status = ClosedRangeStatus::not_closed;
        v.route = "margin-divergence";
    } else if (!delta_ok && delta_trend <= 0.5) {
        v.status = ClosedRangeStatus::not_closed;
        v.route = "margin-divergence";
    } else if (!equiv_ok && equiv_trend >= 2.0) {
        v.status = ClosedRangeStatus::not_closed;
        v.route = "weight-mismatch";
    } else {
        v.status = ClosedRangeStatus::inconclusive;
        v.route = "insufficient-certainty";
    }
    return v;
}

// Area-space closed-range diagnosis.  Two independent positive routes at
// p = q = 2: stable section spectra certify a sampling-type embedding (works
// for any measure), and a stable lower frame bound together with canonical
// weights certifies the interpolating form (atomic measures only).  A route
// counts as passed only when its margins clear the floor without a certified
// decay trend; both routes certifiably decaying is a certified negative.
// Equal exponents other than 2 carry trend evidence only.
inline ClosedRangeVerdict diagnose_bergman(const Measure& mu, double p, double q,
                                           const DiagnosticThresholds& thr = {}) {
    detail::check_exponents(p, q);
    ClosedRangeVerdict v;
    v.space = Space::bergman;
    v.p = p;
    v.q = q;
    v.evidence.push_back(
        {"carleson-alpha2", carleson_constant(mu, 2, 8).value, 0.0, true});

    if (p != q) {
        v.evidence.push_back({"p-equals-q", std::abs(p - q), 0.0, false});
        v.status = ClosedRangeStatus::not_closed;
        v.route = "p-neq-q";
        return v;
    }

    const SpectralReport sections = section_matrix_spectrum(mu, section_ladder());
    const double samp_min = detail::series_min(sections);
    const double samp_trend = detail::series_trend(sections);
    const bool samp_floor_ok = samp_min >= thr.sampling_floor;
    const bool samp_decay = samp_trend < thr.decay_cap;
    const bool samp_pass = samp_floor_ok && !samp_decay;
    v.evidence.push_back({"sampling-floor", samp_min, thr.sampling_floor, samp_floor_ok});
    v.evidence.push_back({"sampling-trend", samp_trend, thr.decay_cap, !samp_decay});

    bool interp_pass = false;
    bool interp_decay = false;
    if (!is_discrete(mu)) {
        v.evidence.push_back({"support-atomic", 0.0, 1.0, false});
        interp_decay = true;  // the interpolating form needs atoms
    } else {
        const auto& d = std::get<DiscreteMeasure>(mu);
        std::vector<DiskPoint> pts;
        pts.reserve(d.size());
        for (const Atom& a : d.atoms()) pts.push_back(a.point);
        const PointSequence seq(std::move(pts));
        const SpectralReport frame =
            riesz_bounds(seq, Space::bergman, clip_ladder(section_ladder(), seq.size()));
        const bool frame_ok = frame.status == SpectralStatus::ok;
        const double r_min = detail::series_min(frame);
        const double r_trend = detail::series_trend(frame);
        const double equiv = weight_equivalence_ratio(d, 2).ratio();
        const bool r_floor_ok = r_min >= thr.riesz_min;
        const bool r_decay = r_trend < thr.decay_cap;
        const bool equiv_ok = equiv <= thr.equiv_cap;
        v.evidence.push_back({"riesz-floor", r_min, thr.riesz_min, r_floor_ok});
        v.evidence.push_back({"riesz-trend", r_trend, thr.decay_cap, !r_decay});
        v.evidence.push_back({"weight-equivalence", equiv, thr.equiv_cap, equiv_ok});
        v.evidence.push_back(
            {"gram-condition", frame.condition, kSingularConditionCap, frame_ok});
        interp_pass = frame_ok && r_floor_ok && !r_decay && equiv_ok;
        interp_decay = r_decay || !frame_ok;  // a singular frame has no lower bound at all
    }

    if (p != 2.0) {
        v.status = ClosedRangeStatus::inconclusive;
        v.route = "insufficient-certainty";
        return v;
    }

    if (samp_pass) {
        v.status = ClosedRangeStatus::closed;
        v.route = "sampling";
    } else if (interp_pass) {
        v.status = ClosedRangeStatus::closed;
        v.route = "interpolating-form";
    } else if (samp_decay && interp_decay) {
        v.status = ClosedRangeStatus::not_closed;
        v.route = "margin-divergence";
    } else {
        v.status = ClosedRangeStatus::inconclusive;
        v.route = "insufficient-certainty";
    }
    return v;
}

inline ClosedRangeVerdict diagnose(const Measure& mu, Space space, double p, double q,
                                   const DiagnosticThresholds& thr = {}) {
    return space == Space::hardy ? diagnose_hardy(mu, p, q, thr)
                                 : diagnose_bergman(mu, p, q, thr);
}

/// Bundled evidence for the lacunary zero-set threshold study: its canonical
/// weighted measure, the Carleson sweep, both margin ladders, and the verdict
/// the margins support.
struct HorowitzThresholdReport {
    double p0 = 0.0;
    int levels = 0;
    CarlesonReport carleson2;
    SpectralReport sampling;        // sections of the (1-|z|)^2-weighted zero measure
    SpectralReport interpolation;   // lower frame bound of the zero set, area space
    ClosedRangeVerdict verdict;
};

// The zero set of the lacunary product with base 2^(1/p0) switches character
// at p0: sampling-type margins stay healthy when the exponent sits above p0,
// frame-type margins when it sits below.  This report computes both ladders
// at the critical exponent 2 so the switch is visible as one margin family
// holding steady while the other collapses.
inline HorowitzThresholdReport horowitz_threshold_report(
    double p0, int levels, const std::vector<int>& ladder = section_ladder(),
    const DiagnosticThresholds& thr = {}) {
    if (levels > 8)
        throw std::invalid_argument(
            "horowitz_threshold_report: levels > 8 (point count 2^(levels+1) - 2 caps dense solves)");
    const HorowitzSpec spec(p0, levels);
    const PointSequence zeros = horowitz_zeros(spec);
    const DiscreteMeasure nu = build_nu_Z(zeros.points());

    HorowitzThresholdReport out;
    out.p0 = p0;
    out.levels = levels;
    out.carleson2 = carleson_constant(nu, 2, 8);
    out.sampling = section_matrix_spectrum(Measure(nu), ladder);
    out.interpolation = riesz_bounds(zeros, Space::bergman, clip_ladder(ladder, zeros.size()));
    out.verdict = diagnose_bergman(Measure(nu), 2.0, 2.0, thr);
    return out;
}

}  // namespace disklab
