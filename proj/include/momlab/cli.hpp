#pragma once

// Batch front end: one record per computation, JSON lines or CSV.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "asymptotics.hpp"
#include "errors.hpp"
#include "mom.hpp"
#include "th_determinant.hpp"

namespace momlab::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kUsage = 2, kNumerical = 3 };

struct Record {
    std::string command;
    std::string group;
    int n = 0;
    double m = 0;
    double alpha = 0;
    std::string method;
    std::optional<double> value;
    std::optional<double> log_value;
    std::optional<double> std_error;
    std::optional<std::string> phase;
    std::optional<double> exponent;
    std::optional<double> constant;
    std::optional<double> z;
    std::optional<std::uint64_t> seed;
    long long runtime_ms = 0;
};

inline const std::vector<std::string>& csv_columns()
{
    static const std::vector<std::string> cols{"command", "group",  "n",        "m",     "alpha",
                                               "method",  "value",  "log_value", "stderr", "phase",
                                               "exponent", "constant", "z",      "seed",  "runtime_ms",
                                               "version"};
    return cols;
}

inline nlohmann::ordered_json to_json(const Record& r)
{
    nlohmann::ordered_json j;
    auto num = [](const std::optional<double>& v) -> nlohmann::ordered_json {
        if (!v || !std::isfinite(*v)) return nullptr;
        return *v;
    };
    j["command"] = r.command;
    j["group"] = r.group;
    j["n"] = r.n;
    j["m"] = r.m;
    j["alpha"] = r.alpha;
    j["method"] = r.method;
    j["value"] = num(r.value);
    j["log_value"] = num(r.log_value);
    if (r.std_error) j["stderr"] = num(r.std_error);
    if (r.phase) j["phase"] = *r.phase;
    if (r.exponent) j["exponent"] = num(r.exponent);
    if (r.constant) j["constant"] = num(r.constant);
    if (r.z) j["z"] = num(r.z);
    if (r.seed) j["seed"] = *r.seed;
    j["runtime_ms"] = r.runtime_ms;
    j["version"] = kVersion;
    return j;
}

inline std::string format_number(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string to_csv_row(const Record& r)
{
    auto num = [](const std::optional<double>& v) { return v && std::isfinite(*v) ? format_number(*v) : ""; };
    std::ostringstream s;
    s << r.command << ',' << r.group << ',' << r.n << ',' << format_number(r.m) << ',' << format_number(r.alpha)
      << ',' << r.method << ',' << num(r.value) << ',' << num(r.log_value) << ',' << num(r.std_error) << ','
      << r.phase.value_or("") << ',' << num(r.exponent) << ',' << num(r.constant) << ',' << num(r.z) << ','
      << (r.seed ? std::to_string(*r.seed) : "") << ',' << r.runtime_ms << ',' << kVersion;
    return s.str();
}

inline std::string render(const std::vector<Record>& records, const std::string& format)
{
    std::ostringstream s;
    if (format == "csv") {
        const auto& cols = csv_columns();
        for (std::size_t i = 0; i < cols.size(); ++i) s << (i ? "," : "") << cols[i];
        s << '\n';
        for (const auto& r : records) s << to_csv_row(r) << '\n';
    } else {
        for (const auto& r : records) s << to_json(r).dump() << '\n';
    }
    return s.str();
}

struct Options {
    std::string group = "sp";
    int n = 0;
    std::vector<int> n_list;
    double m = 1;
    double alpha = 0;
    std::vector<double> thetas;
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    int quad_nodes = 0;
    std::string format = "json";
    std::string out;
};

namespace detail {

inline std::vector<int> sizes(const Options& o)
{
    if (!o.n_list.empty()) return o.n_list;
    if (o.n < 1) throw PreconditionError("give --n or --n-list with positive sizes");
    return {o.n};
}

inline int integer_m(const Options& o)
{
    const int m = static_cast<int>(o.m);
    if (static_cast<double>(m) != o.m || m < 1) throw PreconditionError("--m must be a positive integer here");
    return m;
}

inline Record base_record(const std::string& command, const std::string& method, const Options& o, int n)
{
    Record r;
    r.command = command;
    r.group = o.group;
    r.n = n;
    r.m = o.m;
    r.alpha = o.alpha;
    r.method = method;
    return r;
}

inline void set_value(Record& r, double v)
{
    r.value = v;
    r.log_value = v > 0.0 ? std::log(v) : std::numeric_limits<double>::quiet_NaN();
}

class Stopwatch {
public:
    long long ms() const
    {
        return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline Record exact_record(const Options& o, int n)
{
    Stopwatch clock;
    ExactQuad q;
    if (o.quad_nodes > 0) q.nodes_per_panel = o.quad_nodes;
    const MoMParams p{{parse_group(o.group), n}, o.m, o.alpha};
    const double v = mom_exact(p, q);
    Record r = base_record("mom", "exact", o, n);
    set_value(r, v);
    r.runtime_ms = clock.ms();
    return r;
}

inline Record mc_record(const Options& o, int n)
{
    Stopwatch clock;
    const MoMParams p{{parse_group(o.group), n}, o.m, o.alpha};
    const auto est = mom_mc(p, o.samples, Seed{o.seed, 0}, o.quad_nodes > 0 ? o.quad_nodes : 16);
    Record r = base_record("mom", "mc", o, n);
    set_value(r, est.mean);
    r.std_error = est.std_error;
    r.seed = o.seed;
    r.runtime_ms = clock.ms();
    return r;
}

inline Record predict_record(const std::string& command, const Options& o, int n)
{
    Stopwatch clock;
    const GroupLabel g{parse_group(o.group), n};
    const auto rep = classify_phase(g, integer_m(o), o.alpha);
    Record r = base_record(command, "predict", o, n);
    r.phase = std::string(phase_name(rep.phase));
    r.exponent = rep.exponent;
    if (rep.constant) {
        r.constant = *rep.constant;
        if (command == "mom") set_value(r, *rep.constant * std::pow(static_cast<double>(n), rep.exponent));
    }
    r.runtime_ms = clock.ms();
    return r;
}

inline std::vector<double> angles(const Options& o)
{
    if (o.thetas.empty()) throw PreconditionError("joint: give the angles with --theta");
    return o.thetas;
}

} // namespace detail

/// Runs one command line. Records are written only if every computation
/// succeeds. Returns 0, 2 (usage, precondition or domain errors) or 3
/// (accuracy, consistency and sampling failures, or a failed crosscheck).
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Moments of moments of characteristic polynomials of orthogonal and symplectic matrices", "momlab"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Options o;

    auto add_common = [&o](CLI::App* sub) {
        sub->add_option("--group", o.group, "Ensemble")
            ->check(CLI::IsMember({"sp", "so-even", "so-odd", "sominus-even", "sominus-odd", "o-even", "o-odd"}));
        sub->add_option("--n", o.n, "Size parameter n");
        sub->add_option("--n-list", o.n_list, "Several sizes, comma separated")->delimiter(',');
        sub->add_option("--m", o.m, "Moment order m");
        sub->add_option("--alpha", o.alpha, "Exponent alpha");
        sub->add_option("--samples", o.samples, "Monte Carlo samples");
        sub->add_option("--seed", o.seed, "Master seed");
        sub->add_option("--quad-nodes", o.quad_nodes, "Gauss-Legendre nodes per panel");
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", o.out, "Write records to this file");
    };

    auto* mom = app.add_subcommand("mom", "Moments of moments");
    mom->require_subcommand(1);
    auto* mom_exact_cmd = mom->add_subcommand("exact", "Exact route (determinants and quadrature)");
    auto* mom_mc_cmd = mom->add_subcommand("mc", "Monte Carlo over Haar samples");
    auto* mom_predict_cmd = mom->add_subcommand("predict", "Leading-order growth law");
    auto* joint = app.add_subcommand("joint", "Joint moment at fixed angles");
    joint->require_subcommand(1);
    auto* joint_exact_cmd = joint->add_subcommand("exact", "Toeplitz+Hankel determinant route");
    auto* joint_predict_cmd = joint->add_subcommand("predict", "Separated-singularity asymptotics");
    auto* phase_cmd = app.add_subcommand("phase", "Phase and growth exponent");
    auto* integral_cmd = app.add_subcommand("integral", "Numeric I_H(n)(alpha, (0,pi)^m)");
    auto* fit_cmd = app.add_subcommand("fit", "Fitted exponent of mom exact over --n-list");
    auto* cross_cmd = app.add_subcommand("crosscheck", "mom exact against mom mc");
    for (auto* sub : {mom_exact_cmd, mom_mc_cmd, mom_predict_cmd, joint_exact_cmd, joint_predict_cmd, phase_cmd,
                      integral_cmd, fit_cmd, cross_cmd})
        add_common(sub);
    for (auto* sub : {joint_exact_cmd, joint_predict_cmd})
        sub->add_option("--theta", o.thetas, "Angles in (0, pi), comma separated")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion& e) {
        out << kVersion << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }

    std::vector<Record> records;
    int status = kOk;
    try {
        parse_group(o.group);
        if (*mom_exact_cmd) {
            for (int n : detail::sizes(o)) records.push_back(detail::exact_record(o, n));
        } else if (*mom_mc_cmd) {
            for (int n : detail::sizes(o)) records.push_back(detail::mc_record(o, n));
        } else if (*mom_predict_cmd) {
            for (int n : detail::sizes(o)) records.push_back(detail::predict_record("mom", o, n));
        } else if (*phase_cmd) {
            auto r = detail::predict_record("phase", o, o.n > 0 ? o.n : 1);
            records.push_back(r);
        } else if (*joint_exact_cmd || *joint_predict_cmd) {
            const auto th = detail::angles(o);
            o.m = static_cast<double>(th.size());
            for (int n : detail::sizes(o)) {
                detail::Stopwatch clock;
                const GroupLabel g{parse_group(o.group), n};
                Record r = detail::base_record("joint", *joint_exact_cmd ? "exact" : "predict", o, n);
                if (*joint_exact_cmd) {
                    const auto lv = joint_moment_exact(g, o.alpha, th);
                    r.value = lv.value();
                    r.log_value = lv.log_abs;
                } else {
                    detail::set_value(r, predict_joint_moment_separated(g, o.alpha, th));
                }
                r.runtime_ms = clock.ms();
                records.push_back(r);
            }
        } else if (*integral_cmd) {
            for (int n : detail::sizes(o)) {
                detail::Stopwatch clock;
                IntegralQuad q;
                if (o.quad_nodes > 0) q.nodes_per_panel = o.quad_nodes;
                q.seed = Seed{o.seed, 0};
                const auto res = i_hn_numeric({parse_group(o.group), n}, detail::integer_m(o), o.alpha, n, q);
                Record r = detail::base_record("integral", "integral", o, n);
                detail::set_value(r, res.value);
                r.runtime_ms = clock.ms();
                records.push_back(r);
            }
        } else if (*fit_cmd) {
            if (o.n_list.size() < 3) throw PreconditionError("fit: give at least three sizes with --n-list");
            detail::Stopwatch clock;
            std::vector<std::pair<double, double>> pts;
            for (int n : o.n_list) {
                auto r = detail::exact_record(o, n);
                records.push_back(r);
                pts.emplace_back(n, *r.value);
            }
            const auto fit = fit_scaling_exponent(pts);
            Record r = detail::base_record("fit", "fit", o, o.n_list.back());
            r.value = fit.slope;
            r.log_value = std::numeric_limits<double>::quiet_NaN();
            if (o.alpha > 0.0) {
                const auto rep = classify_phase({parse_group(o.group), o.n_list.back()}, detail::integer_m(o), o.alpha);
                r.phase = std::string(phase_name(rep.phase));
                r.exponent = rep.exponent;
            }
            r.runtime_ms = clock.ms();
            records.push_back(r);
        } else if (*cross_cmd) {
            for (int n : detail::sizes(o)) {
                auto ex = detail::exact_record(o, n);
                auto mc = detail::mc_record(o, n);
                ex.command = mc.command = "crosscheck";
                const double z = *mc.std_error > 0.0 ? (*mc.value - *ex.value) / *mc.std_error
                                                     : (*mc.value == *ex.value ? 0.0 : HUGE_VAL);
                mc.z = z;
                if (!(std::fabs(z) <= 4.0)) status = kNumerical;
                records.push_back(ex);
                records.push_back(mc);
            }
        }
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const PoleError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DivergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "numerical error: " << e.what() << '\n';
        return kNumerical;
    }

    const std::string text = render(records, o.format);
    if (o.out.empty()) {
        out << text;
    } else {
        std::ofstream f(o.out, std::ios::binary);
        if (!f) {
            err << "error: cannot open " << o.out << '\n';
            return kUsage;
        }
        f << text;
    }
    return status;
}

} // namespace momlab::cli
