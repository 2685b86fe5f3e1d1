#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "disklab/diagnostics.hpp"
#include "disklab/measures.hpp"
#include "disklab/sequences.hpp"
#include "disklab/spectral.hpp"

namespace disklab {

/// Input that does not match the documented file formats.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string line_col_of(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace detail

inline nlohmann::json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        throw SchemaError(origin + ":" + detail::line_col_of(text, byte) +
                          ": malformed JSON (" + e.what() + ")");
    }
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace detail {

// Strict object shape: exactly the listed keys, nothing missing, nothing
// extra.  All formats in this library have no optional fields.
inline void require_keys(const nlohmann::json& obj, std::initializer_list<const char*> keys,
                         const std::string& where) {
    if (!obj.is_object()) throw SchemaError(where + ": expected a JSON object");
    for (const char* k : keys)
        if (!obj.contains(k)) throw SchemaError(where + ": missing field '" + k + "'");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : keys)
            if (it.key() == k) known = true;
        if (!known) throw SchemaError(where + ": unknown field '" + it.key() + "'");
    }
}

inline double get_number(const nlohmann::json& obj, const char* key, const std::string& where) {
    const auto& v = obj.at(key);
    if (!v.is_number()) throw SchemaError(where + ": field '" + key + "' must be a number");
    return v.get<double>();
}

inline int get_int(const nlohmann::json& obj, const char* key, const std::string& where) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer())
        throw SchemaError(where + ": field '" + key + "' must be an integer");
    const auto n = v.get<std::int64_t>();
    if (n < -(1 << 30) || n > (1 << 30))
        throw SchemaError(where + ": field '" + key + "' out of range");
    return static_cast<int>(n);
}

}  // namespace detail

inline PointSequence sequence_from_json(const nlohmann::json& j, const std::string& origin) {
    detail::require_keys(j, {"points"}, origin);
    const auto& arr = j.at("points");
    if (!arr.is_array()) throw SchemaError(origin + ": 'points' must be an array");
    std::vector<DiskPoint> pts;
    pts.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string where = origin + ": points[" + std::to_string(i) + "]";
        detail::require_keys(arr[i], {"re", "im"}, where);
        try {
            pts.emplace_back(detail::get_number(arr[i], "re", where),
                             detail::get_number(arr[i], "im", where));
        } catch (const std::invalid_argument& e) {
            throw SchemaError(where + ": " + e.what());
        }
    }
    try {
        return PointSequence(std::move(pts));
    } catch (const std::invalid_argument& e) {
        throw SchemaError(origin + ": " + e.what());
    }
}

inline Measure measure_from_json(const nlohmann::json& j, const std::string& origin) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
        throw SchemaError(origin + ": expected an object with a string 'type' field");
    const std::string type = j.at("type").get<std::string>();
    if (type == "discrete") {
        detail::require_keys(j, {"type", "atoms"}, origin);
        const auto& arr = j.at("atoms");
        if (!arr.is_array()) throw SchemaError(origin + ": 'atoms' must be an array");
        std::vector<Atom> atoms;
        atoms.reserve(arr.size());
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string where = origin + ": atoms[" + std::to_string(i) + "]";
            detail::require_keys(arr[i], {"re", "im", "weight"}, where);
            try {
                atoms.push_back({DiskPoint(detail::get_number(arr[i], "re", where),
                                           detail::get_number(arr[i], "im", where)),
                                 detail::get_number(arr[i], "weight", where)});
            } catch (const std::invalid_argument& e) {
                throw SchemaError(where + ": " + e.what());
            }
        }
        try {
            return Measure(DiscreteMeasure(atoms));
        } catch (const std::invalid_argument& e) {
            throw SchemaError(origin + ": " + e.what());
        }
    }
    if (type == "grid") {
        detail::require_keys(j, {"type", "nr", "ntheta", "total"}, origin);
        try {
            return Measure(GridMeasure(detail::get_int(j, "nr", origin),
                                       detail::get_int(j, "ntheta", origin),
                                       detail::get_number(j, "total", origin)));
        } catch (const std::invalid_argument& e) {
            throw SchemaError(origin + ": " + e.what());
        }
    }
    throw SchemaError(origin + ": unknown measure type '" + type + "'");
}

inline PointSequence load_sequence_file(const std::string& path) {
    return sequence_from_json(parse_json_text(read_text_file(path), path), path);
}

inline Measure load_measure_file(const std::string& path) {
    return measure_from_json(parse_json_text(read_text_file(path), path), path);
}

// ---------------------------------------------------------------------------
// Deterministic emission.  Reports are rendered by hand so the byte stream is
// a pure function of the values: fixed key order, fixed float formats, no
// locale or pointer-order dependence anywhere.  Report quantities print at 12
// significant digits; coordinate data (points, atoms, masses) that may be fed
// back in prints with enough digits to reparse to the identical double.

inline std::string fmt_double(double v) {
    if (!std::isfinite(v)) throw std::logic_error("fmt_double: non-finite value in a report");
    if (v == 0.0) return "0";  // merges the signed zeros
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Round-trip-exact form: 12 digits when they already reparse to v (keeps the
// common dyadic values short), 17 otherwise.  Twin points produced by the
// sequence doubler differ far below 12 digits, so coordinate emission must
// not quantize.
inline std::string fmt_double_exact(double v) {
    std::string s = fmt_double(v);
    if (std::strtod(s.c_str(), nullptr) == v) return s;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Compact JSON builder with automatic commas.  Keys are emitted in call
/// order, which is what pins the byte-level layout of every report.
class JsonBuilder {
public:
    JsonBuilder& begin_object() { return open('{'); }
    JsonBuilder& end_object() { return close('}'); }
    JsonBuilder& begin_array() { return open('['); }
    JsonBuilder& end_array() { return close(']'); }

    JsonBuilder& key(const char* name) {
        comma();
        quote(name);
        out_ += ':';
        pending_value_ = true;
        return *this;
    }

    JsonBuilder& value(double v) { return raw(fmt_double(v)); }
    JsonBuilder& value_exact(double v) { return raw(fmt_double_exact(v)); }
    JsonBuilder& value(int v) { return raw(std::to_string(v)); }
    JsonBuilder& value(std::size_t v) { return raw(std::to_string(v)); }
    JsonBuilder& value(bool v) { return raw(v ? "true" : "false"); }
    JsonBuilder& value(const char* s) {
        comma();
        quote(s);
        return *this;
    }
    JsonBuilder& value(const std::string& s) { return value(s.c_str()); }

    std::string str() const { return out_ + "\n"; }

private:
    JsonBuilder& raw(const std::string& s) {
        comma();
        out_ += s;
        return *this;
    }
    JsonBuilder& open(char c) {
        comma();
        out_ += c;
        first_.push_back(true);
        return *this;
    }
    JsonBuilder& close(char c) {
        out_ += c;
        first_.pop_back();
        return *this;
    }
    void comma() {
        if (pending_value_) {
            pending_value_ = false;
            return;  // value follows its key directly
        }
        if (!first_.empty()) {
            if (!first_.back()) out_ += ',';
            first_.back() = false;
        }
    }
    void quote(const char* s) {
        out_ += '"';
        for (const char* p = s; *p; ++p) {
            if (*p == '"' || *p == '\\') out_ += '\\';
            out_ += *p;
        }
        out_ += '"';
    }

    std::string out_;
    std::vector<bool> first_;
    bool pending_value_ = false;
};

inline std::string to_json(const PointSequence& seq) {
    JsonBuilder b;
    b.begin_object().key("points").begin_array();
    for (const DiskPoint& z : seq.points())
        b.begin_object().key("re").value_exact(z.re()).key("im").value_exact(z.im()).end_object();
    b.end_array().end_object();
    return b.str();
}

inline std::string to_json(const DiscreteMeasure& mu) {
    JsonBuilder b;
    b.begin_object().key("type").value("discrete").key("atoms").begin_array();
    for (const Atom& a : mu.atoms())
        b.begin_object()
            .key("re").value_exact(a.point.re())
            .key("im").value_exact(a.point.im())
            .key("weight").value_exact(a.weight)
            .end_object();
    b.end_array().end_object();
    return b.str();
}

inline std::string to_json(const GridMeasure& mu) {
    JsonBuilder b;
    b.begin_object()
        .key("type").value("grid")
        .key("nr").value(mu.nr())
        .key("ntheta").value(mu.ntheta())
        .key("total").value_exact(mu.total_mass())
        .end_object();
    return b.str();
}

inline std::string to_json(const Measure& mu) {
    if (const auto* d = std::get_if<DiscreteMeasure>(&mu)) return to_json(*d);
    return to_json(std::get<GridMeasure>(mu));
}

namespace detail {

inline void spectral_report_body(JsonBuilder& b, const SpectralReport& r) {
    b.begin_object()
        .key("n").value(r.n)
        .key("eig_min").value(r.eig_min)
        .key("eig_max").value(r.eig_max)
        .key("margin").value(r.margin)
        .key("condition").value(r.condition)
        .key("status").value(to_string(r.status))
        .key("series").begin_array();
    for (const SpectralSample& s : r.series)
        b.begin_object().key("n").value(s.n).key("margin").value(s.margin).end_object();
    b.end_array().end_object();
}

inline void verdict_body(JsonBuilder& b, const ClosedRangeVerdict& v) {
    b.begin_object()
        .key("status").value(to_string(v.status))
        .key("route").value(v.route)
        .key("p").value(v.p)
        .key("q").value(v.q)
        .key("evidence").begin_array();
    for (const EvidenceItem& e : v.evidence)
        b.begin_object()
            .key("criterion").value(e.criterion)
            .key("value").value(e.value)
            .key("threshold").value(e.threshold)
            .key("pass").value(e.pass)
            .end_object();
    b.end_array().end_object();
}

inline void carleson_body(JsonBuilder& b, const CarlesonReport& r, int alpha) {
    b.begin_object()
        .key("alpha").value(alpha)
        .key("levels").value(static_cast<int>(r.per_level.size()) - 1)
        .key("value").value(r.value)
        .key("per_level").begin_array();
    for (double x : r.per_level) b.value(x);
    b.end_array().end_object();
}

}  // namespace detail

inline std::string to_json(const SpectralReport& r) {
    JsonBuilder b;
    detail::spectral_report_body(b, r);
    return b.str();
}

inline std::string to_json(const ClosedRangeVerdict& v) {
    JsonBuilder b;
    detail::verdict_body(b, v);
    return b.str();
}

inline std::string to_json(const CarlesonReport& r, int alpha) {
    JsonBuilder b;
    detail::carleson_body(b, r, alpha);
    return b.str();
}

inline std::string to_json(const std::vector<WitnessSample>& path, Space space) {
    JsonBuilder b;
    b.begin_object().key("space").value(to_string(space)).key("path").begin_array();
    for (const WitnessSample& s : path)
        b.begin_object()
            .key("re").value(s.at.re())
            .key("im").value(s.at.im())
            .key("value").value(s.value)
            .end_object();
    b.end_array().end_object();
    return b.str();
}

inline std::string to_json(const HorowitzThresholdReport& r) {
    JsonBuilder b;
    b.begin_object().key("p0").value(r.p0).key("levels").value(r.levels);
    b.key("carleson_alpha2");
    detail::carleson_body(b, r.carleson2, 2);
    b.key("sampling");
    detail::spectral_report_body(b, r.sampling);
    b.key("interpolation");
    detail::spectral_report_body(b, r.interpolation);
    b.key("verdict");
    detail::verdict_body(b, r.verdict);
    b.end_object();
    return b.str();
}

/// Full `analyze` report: the Carleson sweep, plus the atomic-side summaries
/// that only make sense for discrete measures.
inline std::string analysis_to_json(const Measure& mu, const CarlesonReport& r, int alpha) {
    JsonBuilder b;
    b.begin_object()
        .key("alpha").value(alpha)
        .key("levels").value(static_cast<int>(r.per_level.size()) - 1)
        .key("value").value(r.value)
        .key("per_level").begin_array();
    for (double x : r.per_level) b.value(x);
    b.end_array();
    if (const auto* d = std::get_if<DiscreteMeasure>(&mu); d && !d->empty()) {
        const WeightEquivalence we = weight_equivalence_ratio(*d, alpha);
        b.key("blaschke_sum").value(blaschke_sum(*d));
        b.key("weight_equivalence")
            .begin_object().key("lo").value(we.lo).key("hi").value(we.hi).end_object();
    }
    b.end_object();
    return b.str();
}

inline std::string to_csv(const SpectralReport& r) {
    std::string out = "n,margin\n";
    for (const SpectralSample& s : r.series)
        out += std::to_string(s.n) + "," + fmt_double(s.margin) + "\n";
    return out;
}

inline std::string to_csv(const std::vector<WitnessSample>& path) {
    std::string out = "re,im,value\n";
    for (const WitnessSample& s : path)
        out += fmt_double(s.at.re()) + "," + fmt_double(s.at.im()) + "," + fmt_double(s.value) + "\n";
    return out;
}

}  // namespace disklab
