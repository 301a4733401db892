#include "nlab/cli_commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "nlab/blaschke_carleson.hpp"
#include "nlab/dyadic_model.hpp"
#include "nlab/nevanlinna_gauges.hpp"
#include "nlab/peak_builder.hpp"
#include "nlab/report_utils.hpp"
#include "nlab/witness_optimizer.hpp"

namespace nlab::cli {

namespace {

using nlohmann::json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Outputs {
    std::vector<std::pair<std::string, std::string>> files; // name -> content
    void add(std::string name, std::string content) {
        files.emplace_back(std::move(name), std::move(content));
    }
};

void emit_run(const std::string& out_dir, const std::string& command, const json& config,
              const Outputs& out) {
    std::filesystem::create_directories(out_dir);
    json manifest;
    manifest["command"] = command;
    manifest["version"] = NLAB_VERSION;
    manifest["config"] = config;
    manifest["outputs"] = json::object();
    for (const auto& [name, content] : out.files) {
        write_text_file((std::filesystem::path(out_dir) / name).string(), content);
        manifest["outputs"][name] = sha256_hex(content);
    }
    write_text_file((std::filesystem::path(out_dir) / "run_manifest.json").string(),
                    manifest.dump(2) + "\n");
}

SequenceFamily family_from_config(const json& cfg) {
    if (cfg.contains("input_csv")) {
        std::ifstream is(cfg["input_csv"].get<std::string>());
        if (!is) throw ConfigError("cannot open input_csv " + cfg["input_csv"].get<std::string>());
        return SequenceFamily::import_csv(is);
    }
    std::string fam = cfg.value("family", "");
    int n_gen = cfg.value("n_gen", 0);
    if (n_gen < 1) throw ConfigError("n_gen must be >= 1");
    if (fam == "nevanlinna") {
        int m_extra = cfg.value("m_extra", 0);
        if (m_extra < 0) throw ConfigError("m_extra must be >= 0");
        return SequenceFamily::build_nevanlinna(n_gen, m_extra);
    }
    if (fam == "smirnov") return SequenceFamily::build_smirnov(n_gen);
    throw ConfigError("family must be \"nevanlinna\" or \"smirnov\"");
}

double log2_inv_gap(const LogMagnitude& gap) {
    return -gap.log().to_double() / std::numbers::ln2;
}

std::string point_label(const PointIndex& idx) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%c(%d,%lld,%d)", idx.kind == PointKind::A ? 'A' : 'B',
                  idx.n, static_cast<long long>(idx.k), idx.m);
    return buf;
}

// Figure-1 layout: angle in turns against log2(1/(1-|z|)), restricted to the
// points above a chosen base interval I_{n,k}
std::string sequence_svg(const SequenceFamily& fam, int box_n, std::int64_t box_k) {
    CarlesonBox box(box_n, box_k);
    SvgSeries a, b;
    a.color = "#1f5fb4"; a.radius = 2.2;
    b.color = "#c83232"; b.radius = 1.6;
    for (const FamilyPoint& fp : fam.points()) {
        if (box_n > 0 && !box_contains(box, fp.point)) continue;
        double x = fp.point.angle.radians() / TWO_PI;
        double y = log2_inv_gap(fp.point.gap);
        (fp.idx.kind == PointKind::A ? a : b).points.emplace_back(x, y);
    }
    char title[96];
    std::snprintf(title, sizeof title, "points above I_{%d,%lld} (A solid, twin B hollow-red)",
                  box_n, static_cast<long long>(box_k));
    return svg_chart({a, b}, "angle (turns)", "log2(1/(1-|z|))", title);
}

int config_fail(const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return EXIT_CONFIG;
}

} // namespace

int run_construct(const std::string& config_json, const std::string& out_dir) {
    json cfg;
    try {
        cfg = json::parse(config_json);
        SequenceFamily fam = family_from_config(cfg);
        int box_n = 0;
        std::int64_t box_k = 0;
        if (cfg.contains("box")) {
            box_n = cfg["box"].value("n", 0);
            box_k = cfg["box"].value("k", 0);
            if (box_n < 0 || box_n > 62 || box_k < 0 || box_k >= (std::int64_t(1) << box_n))
                throw ConfigError("box: need 0 <= n <= 62 and 0 <= k < 2^n");
        }
        std::ostringstream csv;
        fam.export_csv(csv);
        Outputs out;
        out.add("sequence.csv", csv.str());
        out.add("sequence.svg", sequence_svg(fam, box_n, box_k));
        emit_run(out_dir, "construct", cfg, out);
        std::printf("construct: %zu points written\n", fam.size());
        return EXIT_OK;
    } catch (const ConfigError& e) {
        return config_fail(e);
    } catch (const json::exception& e) {
        return config_fail(e);
    }
}

int run_check(const std::string& config_json, const std::string& out_dir) {
    json cfg;
    try {
        cfg = json::parse(config_json);
        SequenceFamily fam = family_from_config(cfg);
        int depth = cfg.value("max_depth", 12);
        if (depth < 1 || depth > 62) throw ConfigError("max_depth must be in [1, 62]");

        json rep;
        rep["points"] = fam.size();
        rep["depth_scanned"] = depth;
        bool threshold_ok = true;
        if (fam.size() == 0) {
            rep["norm"] = 0.0;
            rep["norm_rel_change"] = 0.0;
            rep["blaschke_sum"] = 0.0;
            rep["min_sep"] = 0.0;
            rep["argmax"] = nullptr;
        } else {
            CarlesonReport full = carleson_norm(fam, depth);
            int prev_depth = std::max(1, depth - 4);
            CarlesonReport prev = carleson_norm(fam, prev_depth);
            rep["norm"] = full.norm;
            rep["norm_at_prev_depth"] = prev.norm;
            rep["norm_rel_change"] =
                full.norm > 0 ? (full.norm - prev.norm) / full.norm : 0.0;
            rep["blaschke_sum"] = full.blaschke_sum;
            LogMagnitude sep = full.min_sep;
            rep["min_sep"] = sep.is_zero() ? 0.0 : sep.to_double();
            rep["min_sep_log2"] = sep.is_zero() ? 0.0 : -log2_inv_gap(sep);
            if (full.argmax)
                rep["argmax"] = {{"n", full.argmax->n}, {"k", full.argmax->k}};
            else
                rep["argmax"] = nullptr;

            if (cfg.contains("thresholds")) {
                const json& th = cfg["thresholds"];
                json checks = json::object();
                if (th.contains("max_norm")) {
                    bool ok = full.norm <= th["max_norm"].get<double>();
                    checks["max_norm_ok"] = ok;
                    threshold_ok = threshold_ok && ok;
                }
                if (th.contains("min_sep")) {
                    bool ok = !sep.is_zero() && sep.to_double() >= th["min_sep"].get<double>();
                    checks["min_sep_ok"] = ok;
                    threshold_ok = threshold_ok && ok;
                }
                rep["threshold_checks"] = checks;
            }
        }
        rep["thresholds_met"] = threshold_ok;

        Outputs out;
        out.add("carleson.json", rep.dump(2) + "\n");
        emit_run(out_dir, "check", cfg, out);
        std::printf("check: norm=%s thresholds_met=%d\n",
                    format_double(rep["norm"].get<double>()).c_str(), (int)threshold_ok);
        return threshold_ok ? EXIT_OK : EXIT_THRESHOLD;
    } catch (const ConfigError& e) {
        return config_fail(e);
    } catch (const json::exception& e) {
        return config_fail(e);
    } catch (const std::runtime_error& e) {
        // import_csv reports the malformed row number in its message
        std::fprintf(stderr, "check: %s\n", e.what());
        return EXIT_CONFIG;
    }
}

int run_peaks(const std::string& config_json, const std::string& out_dir) {
    json cfg;
    try {
        cfg = json::parse(config_json);
        SequenceFamily fam = family_from_config(cfg);
        if (fam.size() == 0) throw ConfigError("peaks: empty family");
        std::string mode = cfg.value(
            "mode", fam.family == FamilyKind::Smirnov ? std::string("smirnov")
                                                      : std::string("nevanlinna"));
        int j_max = cfg.value("j_max", 10);
        if (j_max < 2 || j_max > 30) throw ConfigError("j_max must be in [2, 30]");
        double rel_tol = cfg.value("rel_tol", 1e-10);
        double delta_tol = cfg.value("delta_tol", 1e-9);
        std::string gauge_name =
            cfg.value("gauge", mode == "smirnov" ? std::string("psi") : std::string("log1p"));
        GaugeFunction gauge =
            gauge_name == "psi" ? GaugeFunction::psi_llog() : GaugeFunction::identity();
        if (gauge_name != "psi" && gauge_name != "log1p")
            throw ConfigError("gauge must be \"psi\" or \"log1p\"");

        BoundaryMeasure mu;
        SmirnovWeightParams params{};
        if (mode == "necessity") {
            if (!cfg.contains("mu")) throw ConfigError("necessity mode needs a \"mu\" measure");
            mu = BoundaryMeasure::from_json(cfg["mu"].dump());
            TheoremACheck cert = theorem_A_check(fam, mu);
            if (!cert.accepted) {
                const TheoremACheck::Row* worst = nullptr;
                for (const auto& row : cert.rows)
                    if (row.margin < 0 && (!worst || row.margin < worst->margin)) worst = &row;
                json refusal;
                refusal["accepted"] = false;
                refusal["first_failing"] = {{"point", point_label(worst->idx)},
                                            {"p_mu", worst->p_mu},
                                            {"log_inv_b", worst->log_inv_b},
                                            {"margin", worst->margin}};
                Outputs out;
                out.add("peaks.json", refusal.dump(2) + "\n");
                emit_run(out_dir, "peaks", cfg, out);
                std::fprintf(stderr, "peaks: certificate rejected at %s, margin %.6g\n",
                             point_label(worst->idx).c_str(), worst->margin);
                return EXIT_THRESHOLD;
            }
        } else if (mode == "smirnov") {
            params = default_smirnov_params(fam);
        } else if (mode != "nevanlinna") {
            throw ConfigError("mode must be nevanlinna, smirnov, or necessity");
        }

        const std::size_t n = fam.size();
        struct PerLambda {
            PeakFunction f;
            GaugeReport gauges;
            double delta_err = 0.0;    // |log f(lambda)|
            bool zeros_exact = true;
            double log_c = 0.0;        // log modulus of the normalizing constant
        };
        std::vector<PerLambda> rows(n);
        parallel_for_index(n, [&](std::size_t i) {
            PerLambda& r = rows[i];
            if (mode == "nevanlinna") r.f = build_peak_nevanlinna(fam, i);
            else if (mode == "smirnov") r.f = build_peak_smirnov(fam, i, params);
            else r.f = build_necessity_peak(fam, i, mu);
            LogMagnitude at_l = r.f.eval_mod_member(fam, i);
            r.delta_err = at_l.is_zero() ? 1.0 : std::abs(at_l.log().to_double());
            for (std::size_t j = 0; j < n; ++j)
                if (j != i && !r.f.eval_mod_member(fam, j).is_zero()) r.zeros_exact = false;
            for (const PeakFunction::Factor& fac : r.f.factors)
                if (fac.kind == PeakFunction::FactorKind::Constant)
                    r.log_c = fac.const_mod.log().to_double();
            r.gauges = gauge_ladder(r.f, gauge, j_max, rel_tol);
        });

        CsvWriter csv;
        csv.row({"pos", "point", "j", "gauge_mean", "quad_self_conv"});
        bool converged = true, cauchy = true, audit_ok = true;
        double max_gauge = 0.0, max_delta = 0.0, max_log_c = -1e300;
        for (std::size_t i = 0; i < n; ++i) {
            const PerLambda& r = rows[i];
            std::string label = point_label(fam.at(i).idx);
            for (std::size_t t = 0; t < r.gauges.values.size(); ++t)
                csv.row({std::to_string(i), label, std::to_string(r.gauges.ladder_j[t]),
                         format_double(r.gauges.values[t]), format_double(r.gauges.self_conv[t])});
            converged = converged && r.gauges.converged;
            cauchy = cauchy && r.gauges.estimate.cauchy;
            audit_ok = audit_ok && r.zeros_exact && r.delta_err <= delta_tol;
            max_gauge = std::max(max_gauge, r.gauges.estimate.limit);
            max_delta = std::max(max_delta, r.delta_err);
            max_log_c = std::max(max_log_c, r.log_c);
        }
        if (mode == "smirnov") audit_ok = audit_ok && max_log_c <= 0.0;

        json rep;
        rep["mode"] = mode;
        rep["gauge"] = gauge_name;
        rep["points"] = n;
        rep["per_lambda"] = json::array();
        for (std::size_t i = 0; i < n; ++i) {
            const PerLambda& r = rows[i];
            rep["per_lambda"].push_back({{"point", point_label(fam.at(i).idx)},
                                         {"delta_err", r.delta_err},
                                         {"zeros_exact", r.zeros_exact},
                                         {"log_c", r.log_c},
                                         {"gauge_limit", r.gauges.estimate.limit},
                                         {"gauge_error_bar", r.gauges.estimate.error_bar},
                                         {"cauchy", r.gauges.estimate.cauchy}});
        }
        rep["summary"] = {{"max_gauge", max_gauge},
                          {"max_delta_err", max_delta},
                          {"max_log_c", max_log_c},
                          {"all_zeros_exact",
                           std::all_of(rows.begin(), rows.end(),
                                       [](const PerLambda& r) { return r.zeros_exact; })},
                          {"quadrature_converged", converged},
                          {"ladder_cauchy", cauchy},
                          {"audit_ok", audit_ok}};
        if (mode == "smirnov") {
            rep["summary"]["c0"] = params.c0;
            rep["summary"]["c1"] = params.c1;
        }

        Outputs out;
        out.add("gauges.csv", csv.text());
        out.add("peaks.json", rep.dump(2) + "\n");
        emit_run(out_dir, "peaks", cfg, out);
        std::printf("peaks: %zu built, max_gauge=%s max_delta=%s audit_ok=%d converged=%d\n", n,
                    format_double(max_gauge).c_str(), format_double(max_delta).c_str(),
                    (int)audit_ok, (int)converged);
        if (!converged) return EXIT_NONCONVERGED;
        return audit_ok ? EXIT_OK : EXIT_THRESHOLD;
    } catch (const ConfigError& e) {
        return config_fail(e);
    } catch (const json::exception& e) {
        return config_fail(e);
    }
}

int run_witness(const std::string& config_json, const std::string& out_dir) {
    json cfg;
    try {
        cfg = json::parse(config_json);
        std::string fam_name = cfg.value("family", "nevanlinna");
        if (fam_name != "nevanlinna" && fam_name != "smirnov")
            throw ConfigError("family must be \"nevanlinna\" or \"smirnov\"");
        int depth_lo = 0, depth_hi = 0;
        if (cfg.contains("depths")) {
            const json& d = cfg["depths"];
            if (d.is_array() && d.size() == 2) {
                depth_lo = d[0].get<int>();
                depth_hi = d[1].get<int>();
            } else if (d.is_number_integer()) {
                depth_lo = depth_hi = d.get<int>();
            } else {
                throw ConfigError("depths must be an integer or [lo, hi]");
            }
            if (depth_lo < 1 || depth_hi < depth_lo || depth_hi > 12)
                throw ConfigError("depths must satisfy 1 <= lo <= hi <= 12");
        }
        int m_extra = cfg.value("m_extra", 6);
        bool density = cfg.value("density", false);
        RhsMode mode =
            cfg.value("rhs", "twin_only") == std::string("full") ? RhsMode::Full : RhsMode::TwinOnly;
        double ratio_threshold = cfg.value("ratio_threshold", 1.5);

        Outputs out;
        json rep;
        bool any_lp = depth_hi >= depth_lo && depth_lo >= 1;
        bool all_optimal = true, growth_ok = true, growth_skipped = false;

        if (any_lp) {
            CsvWriter csv;
            csv.row({"depth", "value", "ratio_to_prev", "duality_gap", "max_dual_violation",
                     "comp_slack_residual", "constraints", "columns", "grid_warning"});
            rep["trace"] = json::array();
            double prev = 0.0;
            for (int N = depth_lo; N <= depth_hi; ++N) {
                SequenceFamily fam = fam_name == "nevanlinna"
                                         ? SequenceFamily::build_nevanlinna(N, m_extra)
                                         : SequenceFamily::build_smirnov(N);
                WitnessResult w = min_mass_lp(fam, mode, {}, density);
                double ratio = prev > 0 ? w.value / prev : 0.0;
                csv.row({std::to_string(N), format_double(w.value), format_double(ratio),
                         format_double(w.duality_gap), format_double(w.max_dual_violation),
                         format_double(w.comp_slack_residual), std::to_string(w.constraints),
                         std::to_string(w.columns), w.grid_warning ? "1" : "0"});
                rep["trace"].push_back({{"depth", N},
                                        {"value", w.value},
                                        {"ratio_to_prev", ratio},
                                        {"duality_gap", w.duality_gap},
                                        {"max_dual_violation", w.max_dual_violation},
                                        {"optimal", w.optimal},
                                        {"grid_warning", w.grid_warning}});
                all_optimal = all_optimal && w.optimal;
                if (N > depth_lo && ratio < ratio_threshold) growth_ok = false;
                prev = w.value;
            }
            out.add("witness_trace.csv", csv.text());
            growth_skipped = depth_hi == depth_lo;
            rep["growth"] = {{"threshold", ratio_threshold},
                             {"detected", growth_ok && !growth_skipped},
                             {"skipped_single_depth", growth_skipped}};
            if (growth_skipped)
                std::fprintf(stderr, "witness: single depth, growth check skipped\n");
        }

        bool crossing_ok = true;
        if (cfg.contains("smirnov_contradiction")) {
            const json& sc = cfg["smirnov_contradiction"];
            int n_max = sc.value("n_max", 8);
            int base_depth = sc.value("base_depth", 2);
            if (n_max < 1 || n_max > 14 || base_depth < 1 || base_depth > 6)
                throw ConfigError("smirnov_contradiction: need 1 <= n_max <= 14, 1 <= base_depth <= 6");
            ContradictionReport c = smirnov_contradiction(n_max, base_depth);
            rep["contradiction"] = {{"n_max", c.n_max},
                                    {"base_depth", c.base_depth},
                                    {"base_mass", c.base_mass},
                                    {"lhs", c.lhs},
                                    {"sup", c.sup},
                                    {"rhs", c.rhs},
                                    {"crossing_depth", c.crossing_depth}};
            crossing_ok = c.crossing_depth > 0;
        }

        out.add("witness.json", rep.dump(2) + "\n");
        emit_run(out_dir, "witness", cfg, out);
        std::printf("witness: optimal=%d growth_ok=%d crossing_ok=%d\n", (int)all_optimal,
                    (int)growth_ok, (int)crossing_ok);
        if (!all_optimal) return EXIT_NONCONVERGED;
        if ((!growth_ok && !growth_skipped) || !crossing_ok) return EXIT_THRESHOLD;
        return EXIT_OK;
    } catch (const ConfigError& e) {
        return config_fail(e);
    } catch (const json::exception& e) {
        return config_fail(e);
    }
}

int run_figure(const std::string& config_json, const std::string& out_dir) {
    json cfg;
    try {
        cfg = json::parse(config_json);
        if (!cfg.contains("charts") || !cfg["charts"].is_array() || cfg["charts"].empty())
            throw ConfigError("figure: need a nonempty \"charts\" array");
        Outputs out;
        int idx = 0;
        for (const json& chart : cfg["charts"]) {
            std::string type = chart.value("type", "");
            char name[64];
            if (type == "sequence") {
                SequenceFamily fam = family_from_config(chart);
                int box_n = 0;
                std::int64_t box_k = 0;
                if (chart.contains("box")) {
                    box_n = chart["box"].value("n", 0);
                    box_k = chart["box"].value("k", 0);
                }
                std::snprintf(name, sizeof name, "figure_%02d_sequence.svg", idx);
                out.add(name, sequence_svg(fam, box_n, box_k));
            } else if (type == "depth_trace") {
                std::string fam_name = chart.value("family", "nevanlinna");
                int lo = chart.value("depth_lo", 2), hi = chart.value("depth_hi", 5);
                int m_extra = chart.value("m_extra", 6);
                if (lo < 1 || hi < lo || hi > 12)
                    throw ConfigError("depth_trace: need 1 <= depth_lo <= depth_hi <= 12");
                SvgSeries s;
                s.color = "#1f5fb4";
                s.radius = 3.0;
                s.line = true;
                for (int N = lo; N <= hi; ++N) {
                    SequenceFamily fam = fam_name == "nevanlinna"
                                             ? SequenceFamily::build_nevanlinna(N, m_extra)
                                             : SequenceFamily::build_smirnov(N);
                    WitnessResult w = min_mass_lp(fam, RhsMode::TwinOnly);
                    s.points.emplace_back(N, w.value);
                }
                std::snprintf(name, sizeof name, "figure_%02d_depth_trace.svg", idx);
                out.add(name, svg_chart({s}, "truncation depth N", "minimal witness mass",
                                        "minimal dominating mass by depth"));
            } else {
                throw ConfigError("chart type must be \"sequence\" or \"depth_trace\"");
            }
            ++idx;
        }
        emit_run(out_dir, "figure", cfg, out);
        std::printf("figure: %d chart(s) written\n", idx);
        return EXIT_OK;
    } catch (const ConfigError& e) {
        return config_fail(e);
    } catch (const json::exception& e) {
        return config_fail(e);
    }
}

int run_command(const std::string& name, const std::string& config_path,
                const std::string& out_dir) {
    std::string config_json;
    try {
        config_json = read_text_file(config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return EXIT_CONFIG;
    }
    try {
        if (name == "construct") return run_construct(config_json, out_dir);
        if (name == "check") return run_check(config_json, out_dir);
        if (name == "peaks") return run_peaks(config_json, out_dir);
        if (name == "witness") return run_witness(config_json, out_dir);
        if (name == "figure") return run_figure(config_json, out_dir);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s: %s\n", name.c_str(), e.what());
        return EXIT_NONCONVERGED;
    }
    std::fprintf(stderr, "unknown command %s\n", name.c_str());
    return EXIT_CONFIG;
}

} // namespace nlab::cli
