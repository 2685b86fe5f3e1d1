// Command-line front end: generate canonical point families, sweep Carleson
// ratios, run the closed-range diagnostics, and dump spectral margins and
// reverse-embedding witnesses.  Every report is emitted through the
// deterministic writers, so identical invocations produce identical bytes.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "disklab/disklab.hpp"

namespace {

using namespace disklab;

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(what + ": not a number: '" + s + "'");
    }
}

int parse_int(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(what + ": not an integer: '" + s + "'");
    }
}

std::vector<int> parse_ladder(const std::string& csv) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t next = csv.find(',', pos);
        const std::string tok = csv.substr(pos, next == std::string::npos ? next : next - pos);
        out.push_back(parse_int(tok, "--ladder"));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

Space parse_space(const std::string& s) {
    if (s == "hardy") return Space::hardy;
    if (s == "bergman") return Space::bergman;
    throw std::invalid_argument("--space must be 'hardy' or 'bergman'");
}

// Measure argument: either a path to a measure file or one of the built-in
// aliases sigma | muZ:<seqfile> | nuZ:<seqfile> | horowitz:<p0>:<K>.
Measure resolve_measure(const std::string& spec) {
    if (spec == "sigma") return Measure(build_sigma_grid(256, 256));
    if (spec.rfind("muZ:", 0) == 0)
        return Measure(build_mu_Z(load_sequence_file(spec.substr(4)).points()));
    if (spec.rfind("nuZ:", 0) == 0)
        return Measure(build_nu_Z(load_sequence_file(spec.substr(4)).points()));
    if (spec.rfind("horowitz:", 0) == 0) {
        const std::string rest = spec.substr(9);
        const std::size_t colon = rest.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("--measure horowitz:<p0>:<K>: missing level count");
        const double p0 = parse_double(rest.substr(0, colon), "--measure horowitz p0");
        const int k = parse_int(rest.substr(colon + 1), "--measure horowitz K");
        return Measure(build_nu_Z(horowitz_zeros(HorowitzSpec(p0, k)).points()));
    }
    return load_measure_file(spec);
}

DiagnosticThresholds resolve_thresholds(const std::vector<std::string>& overrides) {
    DiagnosticThresholds t;
    for (const std::string& item : overrides) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--threshold expects name=value, got '" + item + "'");
        apply_threshold_override(t, item.substr(0, eq),
                                 parse_double(item.substr(eq + 1), "--threshold " + item.substr(0, eq)));
    }
    return t;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::invalid_argument(out_path + ": cannot open for writing");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Carleson embedding diagnostics on the unit disk"};
    app.require_subcommand(1);

    std::string out_path;
    app.add_option("--out", out_path, "write the report here instead of stdout")->capture_default_str();

    // gen ---------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a point sequence file");
    gen->require_subcommand(1);
    double gen_ratio = 0.5;
    int gen_count = 30;
    auto* gen_radial_cmd = gen->add_subcommand("radial", "z_n = 1 - ratio^n on the positive axis");
    gen_radial_cmd->add_option("--ratio", gen_ratio, "geometric ratio in (0,1)")->capture_default_str();
    gen_radial_cmd->add_option("--count", gen_count, "number of points")->capture_default_str();

    double gen_p0 = 2.0;
    int gen_levels = 4;
    auto* gen_horowitz_cmd = gen->add_subcommand("horowitz", "zeros of the lacunary product with base 2^(1/p0)");
    gen_horowitz_cmd->add_option("--p0", gen_p0, "threshold exponent")->capture_default_str();
    gen_horowitz_cmd->add_option("--levels", gen_levels, "lacunary levels K")->capture_default_str();

    std::string gen_seq_path;
    double gen_eps = 1.0;
    auto* gen_doubled_cmd = gen->add_subcommand("doubled", "add a collapsing twin to every point");
    gen_doubled_cmd->add_option("--sequence", gen_seq_path, "input sequence file")->required();
    gen_doubled_cmd->add_option("--eps-power", gen_eps, "twin distance exponent")->capture_default_str();

    // analyze -------------------------------------------------------------
    auto* analyze = app.add_subcommand("analyze", "dyadic Carleson sweep of a measure");
    std::string an_measure;
    int an_alpha = 1;
    int an_levels = 10;
    analyze->add_option("--measure", an_measure, "measure file or alias")->required();
    analyze->add_option("--alpha", an_alpha, "box exponent: 1 or 2")->capture_default_str();
    analyze->add_option("--levels", an_levels, "deepest dyadic level")->capture_default_str();

    // diagnose ------------------------------------------------------------
    auto* diagnose_cmd = app.add_subcommand("diagnose", "closed-range verdict for the embedding");
    std::string dg_measure, dg_space = "hardy";
    double dg_p = 2.0, dg_q = 2.0;
    std::vector<std::string> dg_thresholds;
    diagnose_cmd->add_option("--measure", dg_measure, "measure file or alias")->required();
    diagnose_cmd->add_option("--space", dg_space, "hardy or bergman")->capture_default_str();
    diagnose_cmd->add_option("--p", dg_p, "domain exponent")->capture_default_str();
    diagnose_cmd->add_option("--q", dg_q, "target exponent")->capture_default_str();
    diagnose_cmd->add_option("--threshold", dg_thresholds, "override name=value (repeatable)");

    // spectra -------------------------------------------------------------
    auto* spectra = app.add_subcommand("spectra", "margin ladders: least-norm, riesz, or section");
    std::string sp_kind, sp_measure, sp_sequence, sp_space, sp_ladder, sp_format = "json";
    spectra->add_option("--kind", sp_kind, "least-norm | riesz | section")->required();
    spectra->add_option("--measure", sp_measure, "measure file or alias (least-norm, section)");
    spectra->add_option("--sequence", sp_sequence, "sequence file (riesz)");
    spectra->add_option("--space", sp_space, "hardy or bergman");
    spectra->add_option("--ladder", sp_ladder, "comma-separated section sizes");
    spectra->add_option("--format", sp_format, "json or csv")->capture_default_str();

    // witness -------------------------------------------------------------
    auto* witness = app.add_subcommand("witness", "kernel embedding norms along a boundary path");
    std::string wt_measure, wt_space = "hardy", wt_format = "json";
    int wt_depth = 12;
    witness->add_option("--measure", wt_measure, "measure file or alias")->required();
    witness->add_option("--space", wt_space, "hardy or bergman")->capture_default_str();
    witness->add_option("--depth", wt_depth, "dyadic path depth")->capture_default_str();
    witness->add_option("--format", wt_format, "json or csv")->capture_default_str();

    // horowitz-report -------------------------------------------------------
    auto* hreport = app.add_subcommand("horowitz-report", "threshold study of the lacunary zero set");
    double hr_p0 = 2.0;
    int hr_levels = 6;
    std::string hr_ladder;
    hreport->add_option("--p0", hr_p0, "threshold exponent")->capture_default_str();
    hreport->add_option("--levels", hr_levels, "lacunary levels K")->capture_default_str();
    hreport->add_option("--ladder", hr_ladder, "comma-separated section sizes");

    // Let --out (held by the root) match wherever it appears on the line.
    for (CLI::App* sub :
         {gen, gen_radial_cmd, gen_horowitz_cmd, gen_doubled_cmd, analyze, diagnose_cmd,
          spectra, witness, hreport})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (gen->parsed()) {
            PointSequence seq;
            if (gen_radial_cmd->parsed()) {
                seq = gen_radial(gen_ratio, gen_count);
            } else if (gen_horowitz_cmd->parsed()) {
                seq = horowitz_zeros(HorowitzSpec(gen_p0, gen_levels));
            } else {
                seq = double_sequence(load_sequence_file(gen_seq_path), gen_eps);
            }
            emit(to_json(seq), out_path);
        } else if (analyze->parsed()) {
            const Measure mu = resolve_measure(an_measure);
            emit(analysis_to_json(mu, carleson_constant(mu, an_alpha, an_levels), an_alpha), out_path);
        } else if (diagnose_cmd->parsed()) {
            const Measure mu = resolve_measure(dg_measure);
            const ClosedRangeVerdict v =
                diagnose(mu, parse_space(dg_space), dg_p, dg_q, resolve_thresholds(dg_thresholds));
            emit(to_json(v), out_path);
        } else if (spectra->parsed()) {
            if (sp_format != "json" && sp_format != "csv")
                throw std::invalid_argument("--format must be 'json' or 'csv'");
            SpectralReport report;
            if (sp_kind == "least-norm") {
                if (sp_measure.empty()) throw std::invalid_argument("--kind least-norm needs --measure");
                const Measure mu = resolve_measure(sp_measure);
                const auto* d = std::get_if<DiscreteMeasure>(&mu);
                if (!d) throw std::invalid_argument("least-norm margins need a discrete measure");
                const Space space = sp_space.empty() ? Space::hardy : parse_space(sp_space);
                const auto ladder = sp_ladder.empty() ? clip_ladder(discrete_ladder(), d->size())
                                                      : parse_ladder(sp_ladder);
                report = least_norm_margin(*d, space, ladder);
            } else if (sp_kind == "riesz") {
                if (sp_sequence.empty()) throw std::invalid_argument("--kind riesz needs --sequence");
                const PointSequence seq = load_sequence_file(sp_sequence);
                const Space space = sp_space.empty() ? Space::hardy : parse_space(sp_space);
                const auto ladder = sp_ladder.empty() ? clip_ladder(section_ladder(), seq.size())
                                                      : parse_ladder(sp_ladder);
                report = riesz_bounds(seq, space, ladder);
            } else if (sp_kind == "section") {
                if (sp_measure.empty()) throw std::invalid_argument("--kind section needs --measure");
                if (!sp_space.empty() && parse_space(sp_space) != Space::bergman)
                    throw std::invalid_argument("sections are built on the area-space basis; --space must be bergman");
                const Measure mu = resolve_measure(sp_measure);
                const auto ladder = sp_ladder.empty() ? section_ladder() : parse_ladder(sp_ladder);
                report = section_matrix_spectrum(mu, ladder);
            } else {
                throw std::invalid_argument("--kind must be least-norm, riesz, or section");
            }
            emit(sp_format == "json" ? to_json(report) : to_csv(report), out_path);
        } else if (witness->parsed()) {
            if (wt_format != "json" && wt_format != "csv")
                throw std::invalid_argument("--format must be 'json' or 'csv'");
            const Measure mu = resolve_measure(wt_measure);
            const Space space = parse_space(wt_space);
            const auto path = default_witness_path(mu, wt_depth);
            const auto samples = reverse_witness(mu, path, space);
            emit(wt_format == "json" ? to_json(samples, space) : to_csv(samples), out_path);
        } else if (hreport->parsed()) {
            const auto ladder = hr_ladder.empty() ? section_ladder() : parse_ladder(hr_ladder);
            emit(to_json(horowitz_threshold_report(hr_p0, hr_levels, ladder)), out_path);
        }
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IllConditionedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
