// ccrit — compactified-criticality calculator: geometric constants C_1..C_3,
// size-dependent critical temperatures, gap solutions, Epstein values,
// parameter sweeps and the built-in verification suite.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccrit/criticality.hpp"
#include "ccrit/gap.hpp"
#include "ccrit/lattice_sums.hpp"
#include "ccrit/series.hpp"
#include "ccrit/verify.hpp"

namespace {

using ccrit::SeriesValue;
using ccrit::TruncationPolicy;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitUsage = 2;
constexpr int kExitComputation = 3;
constexpr int kExitVerifyFailure = 1;

struct OutputOpts {
    std::string format = "text";
    int precision = 12;
};

std::string fmt_num(double v, int precision)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

ordered_json series_json(const SeriesValue& s)
{
    return ordered_json{{"value", s.value},
                        {"error_bound", s.error_bound},
                        {"terms_used", s.terms_used}};
}

// Flat key=value config support: entries are spliced in right after the
// subcommand token so that explicitly passed flags override them.
std::vector<std::string> splice_config(const std::vector<std::string>& args)
{
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size())
                throw CLI::ValidationError("--config", "missing file argument");
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    if (!path || args.empty())
        return args;

    std::ifstream in(*path);
    if (!in)
        throw CLI::ValidationError("--config", "cannot open '" + *path + "'");
    std::vector<std::string> extra;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--config", "malformed line '" + line + "'");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw CLI::ValidationError("--config", "empty key in '" + line + "'");
        extra.push_back("--" + key + "=" + value);
    }

    std::vector<std::string> out;
    out.push_back(args.front()); // subcommand name comes first in CLI11 order
    for (const auto& e : extra)
        out.push_back(e);
    for (std::size_t i = 1; i < args.size(); ++i)
        out.push_back(args[i]);
    return out;
}

TruncationPolicy policy_from_env()
{
    TruncationPolicy t;
    if (const char* env = std::getenv("CCRIT_MAX_INDEX")) {
        char* end = nullptr;
        const long long v = std::strtoll(env, &end, 10);
        if (end == env || *end != '\0' || v < 2)
            throw CLI::ValidationError("CCRIT_MAX_INDEX",
                                       "must be an integer >= 2, got '" + std::string(env) + "'");
        t.max_index = v;
    }
    return t;
}

void take_last_everywhere(CLI::App* app)
{
    for (CLI::Option* opt : app->get_options())
        opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    for (CLI::App* sub : app->get_subcommands({}))
        take_last_everywhere(sub);
}

// ---------------------------------------------------------------- constants

int cmd_constants(const OutputOpts& out, const TruncationPolicy& t, bool check_paper)
{
    const double c1 = ccrit::crit::c1_constant();
    const SeriesValue c2 = ccrit::crit::c2_constant(t);
    const SeriesValue c3 = ccrit::crit::c3_constant(t);

    if (out.format == "json") {
        ordered_json j;
        j["C1"] = ordered_json{{"value", c1},
                               {"error_bound", 2.3e-16},
                               {"terms_used", 1},
                               {"paper", 1.1024}};
        j["C2"] = series_json(c2);
        j["C2"]["paper"] = 1.6571;
        j["C3"] = series_json(c3);
        j["C3"]["paper_defining_equation"] = 2.7657;
        j["C3"]["paper_conclusions"] = 2.6757;
        std::cout << j.dump(2) << "\n";
    } else {
        const int p = out.precision;
        std::cout << "C1 = " << fmt_num(c1, p) << "  (closed form 6*gamma/pi)"
                  << "   paper: 1.1024\n";
        std::cout << "C2 = " << fmt_num(c2.value, p) << "  +- " << fmt_num(c2.error_bound, 3)
                  << "  [terms " << c2.terms_used << "]   paper: 1.6571\n";
        std::cout << "C3 = " << fmt_num(c3.value, p) << "  +- " << fmt_num(c3.error_bound, 3)
                  << "  [terms " << c3.terms_used
                  << "]   paper: 2.7657 (defining equation) / 2.6757 (conclusions)\n";
        std::cout << "note: the computed C3 matches the conclusions figure; the defining"
                     " equation's printed value is a misprint.\n";
    }

    if (check_paper) {
        bool ok = std::fabs(c1 - 1.1024) <= 5e-5;
        ok = ok && std::fabs(c2.value - 1.6571) <= 5e-4;
        ok = ok && std::fabs(c3.value - 2.6757) <= 1e-3;
        if (!ok) {
            std::cerr << "constants deviate from the published values beyond tolerance\n";
            return kExitVerifyFailure;
        }
    }
    return 0;
}

// ----------------------------------------------------------------------- tc

void print_critical_result(const OutputOpts& out, const char* geometry, double size,
                           const ccrit::crit::CriticalResult& r)
{
    if (out.format == "json") {
        ordered_json j{{"geometry", geometry},
                       {"size", size},
                       {"tc", r.tc},
                       {"c_constant", r.c_constant},
                       {"min_size", r.min_size},
                       {"transition_exists", r.transition_exists}};
        std::cout << j.dump(2) << "\n";
    } else {
        const int p = out.precision;
        std::cout << "geometry          = " << geometry << "\n"
                  << "size              = " << fmt_num(size, p) << "\n"
                  << "tc                = " << fmt_num(r.tc, p) << "\n"
                  << "c_constant        = " << fmt_num(r.c_constant, p) << "\n"
                  << "min_size          = " << fmt_num(r.min_size, p) << "\n"
                  << "transition_exists = " << (r.transition_exists ? "true" : "false") << "\n";
    }
}

// -------------------------------------------------------------------- sweep

int cmd_sweep(const OutputOpts& out, const ccrit::crit::GLParams& g, const std::string& geometry,
              double from, double to, long long steps)
{
    const int p = out.precision;
    std::cout << "size,inv_linear_size,tc,transition_exists\n";
    for (long long i = 0; i < steps; ++i) {
        const double size =
            (i == steps - 1) ? to : from + (to - from) * static_cast<double>(i) / (steps - 1);
        ccrit::crit::CriticalResult r;
        double inv_linear = 0.0;
        if (geometry == "film") {
            r = ccrit::crit::tc_film(g, size);
            inv_linear = 1.0 / size;
        } else if (geometry == "wire") {
            r = ccrit::crit::tc_wire_square(g, size);
            inv_linear = 1.0 / std::sqrt(size);
        } else {
            r = ccrit::crit::tc_grain_cubic(g, size);
            inv_linear = 1.0 / std::cbrt(size);
        }
        std::cout << fmt_num(size, p) << ',' << fmt_num(inv_linear, p) << ','
                  << fmt_num(r.tc, p) << ',' << (r.transition_exists ? "true" : "false")
                  << "\n";
    }
    return 0;
}

// ------------------------------------------------------------------- verify

int cmd_verify(const TruncationPolicy& t)
{
    const auto results = ccrit::verify::run_all(t);
    int failed = 0;
    double total_ms = 0.0;
    for (const auto& r : results) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << "\n"
                  << "       " << r.detail << "\n";
        if (!r.passed)
            ++failed;
        total_ms += r.milliseconds;
    }
    std::cout << results.size() << " checks, " << (results.size() - failed) << " passed, "
              << failed << " failed\n";
    std::cerr << "verification wall time: " << fmt_num(total_ms, 4) << " ms\n";
    return failed == 0 ? 0 : kExitVerifyFailure;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"ccrit: size-dependent criticality of the compactified Ginzburg-Landau "
                 "model (films, wires, grains)"};
    app.require_subcommand(1);

    OutputOpts out;
    std::string config_path; // consumed by splice_config; registered so CLI11 accepts it

    TruncationPolicy policy;
    try {
        policy = policy_from_env();
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", out.format, "output format")
            ->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--precision", out.precision, "significant digits (4..15)")
            ->check(CLI::Range(4, 15));
        sub->add_option("--config", config_path, "flat key=value config file");
    };

    // constants
    auto* constants = app.add_subcommand("constants", "compute C1, C2, C3");
    bool check_paper = false;
    constants->add_flag("--check-paper", check_paper,
                        "exit nonzero if the constants drift from the published figures");
    add_common(constants);

    // tc
    auto* tc = app.add_subcommand("tc", "size-dependent critical temperature");
    double film_L = 0.0, wire_A = 0.0, grain_V = 0.0;
    auto* opt_film = tc->add_option("--film", film_L, "film thickness L");
    auto* opt_wire = tc->add_option("--wire-area", wire_A, "square wire cross-section area A");
    auto* opt_grain = tc->add_option("--grain-volume", grain_V, "cubic grain volume V");
    ccrit::crit::GLParams gl;
    tc->add_option("--alpha", gl.alpha, "GL mass-slope alpha")->required();
    tc->add_option("--lambda", gl.coupling, "GL quartic coupling lambda")->required();
    tc->add_option("--t0", gl.t0, "bulk transition temperature T0")->required();
    add_common(tc);

    // gap
    auto* gapc = app.add_subcommand("gap", "solve the boundary-dependent gap equation");
    ccrit::gap::GapProblem gp;
    double solver_tol = 1e-10;
    gapc->add_option("--D", gp.dimension, "euclidean dimension D (default 3)");
    gapc->add_option("--d", gp.compactified, "number of compactified directions");
    gapc->add_option("--lengths", gp.lengths, "comma-separated lengths L1[,L2[,L3]]")
        ->required()
        ->delimiter(',');
    gapc->add_option("--m0sq", gp.m0_sq, "bare mass squared")->required();
    gapc->add_option("--lambda", gp.coupling, "renormalized coupling")->required();
    gapc->add_option("--smax", gp.s_max, "effective-potential series cap");
    gapc->add_option("--solver-tol", solver_tol, "absolute defect tolerance");
    add_common(gapc);

    // epstein
    auto* ep = app.add_subcommand("epstein", "evaluate Epstein zeta values");
    double ep_nu = 0.0;
    std::vector<double> ep_lengths;
    std::string ep_method = "recurrence";
    ep->add_option("--nu", ep_nu, "exponent nu")->required();
    ep->add_option("--lengths", ep_lengths, "comma-separated lengths (2 or 3)")
        ->required()
        ->delimiter(',');
    ep->add_option("--method", ep_method, "direct | recurrence | continued | both")
        ->check(CLI::IsMember({"direct", "recurrence", "continued", "both"}));
    add_common(ep);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "CSV sweep of tc against size");
    std::string sweep_geometry;
    double sweep_from = 0.0, sweep_to = 0.0;
    long long sweep_steps = 0;
    sweep->add_option("--geometry", sweep_geometry, "film | wire | grain")
        ->required()
        ->check(CLI::IsMember({"film", "wire", "grain"}));
    sweep->add_option("--from", sweep_from, "first size (L, A or V)")->required();
    sweep->add_option("--to", sweep_to, "last size")->required();
    sweep->add_option("--steps", sweep_steps, "number of rows (>= 2)")->required();
    ccrit::crit::GLParams sweep_gl;
    sweep->add_option("--alpha", sweep_gl.alpha, "GL mass-slope alpha")->required();
    sweep->add_option("--lambda", sweep_gl.coupling, "GL quartic coupling lambda")->required();
    sweep->add_option("--t0", sweep_gl.t0, "bulk transition temperature T0")->required();
    add_common(sweep);

    // verify
    auto* verify = app.add_subcommand("verify", "run the built-in verification suite");
    add_common(verify);

    take_last_everywhere(&app);

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = splice_config(args);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(constants))
            return cmd_constants(out, policy, check_paper);

        if (app.got_subcommand(tc)) {
            const int given = (opt_film->count() ? 1 : 0) + (opt_wire->count() ? 1 : 0) +
                              (opt_grain->count() ? 1 : 0);
            if (given != 1) {
                std::cerr << "usage error: pass exactly one of --film, --wire-area, "
                             "--grain-volume\n";
                return kExitUsage;
            }
            if (opt_film->count())
                print_critical_result(out, "film", film_L, ccrit::crit::tc_film(gl, film_L));
            else if (opt_wire->count())
                print_critical_result(out, "wire", wire_A,
                                      ccrit::crit::tc_wire_square(gl, wire_A));
            else
                print_critical_result(out, "grain", grain_V,
                                      ccrit::crit::tc_grain_cubic(gl, grain_V));
            return 0;
        }

        if (app.got_subcommand(gapc)) {
            const auto sol = ccrit::gap::solve_gap(gp, policy, solver_tol);
            if (out.format == "json") {
                ordered_json j{{"m_sq", sol.m_sq},
                               {"residual", sol.residual},
                               {"iterations", sol.iterations}};
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "m_sq       = " << fmt_num(sol.m_sq, out.precision) << "\n"
                          << "residual   = " << fmt_num(sol.residual, out.precision) << "\n"
                          << "iterations = " << sol.iterations << "\n";
            }
            return 0;
        }

        if (app.got_subcommand(ep)) {
            const auto eval = [&](const std::string& method) -> SeriesValue {
                if (method == "direct")
                    return ccrit::lattice::epstein_d_direct(ep_nu, ep_lengths, policy);
                if (method == "recurrence")
                    return ccrit::lattice::epstein_d_recurrence(ep_nu, ep_lengths, policy);
                // continued form, parameterized by D = 2 nu + 2
                const double D = 2.0 * ep_nu + 2.0;
                if (ep_lengths.size() == 2)
                    return ccrit::lattice::e2_continued(D, ep_lengths[0], ep_lengths[1], policy);
                return ccrit::lattice::e3_continued(D, ep_lengths, policy);
            };
            const auto print_one = [&](const std::string& method, const SeriesValue& s) {
                if (out.format == "json") {
                    ordered_json j = series_json(s);
                    j["method"] = method;
                    std::cout << j.dump(2) << "\n";
                } else {
                    std::cout << method << ": value = " << fmt_num(s.value, out.precision)
                              << ", error_bound = " << fmt_num(s.error_bound, 3)
                              << ", terms_used = " << s.terms_used << "\n";
                }
            };
            if (ep_method == "both") {
                const SeriesValue a = eval("direct");
                const SeriesValue b = eval("recurrence");
                print_one("direct", a);
                print_one("recurrence", b);
                std::cout << "difference = " << fmt_num(a.value - b.value, 3) << "\n";
            } else {
                print_one(ep_method, eval(ep_method));
            }
            return 0;
        }

        if (app.got_subcommand(sweep)) {
            if (!(sweep_from > 0.0) || !(sweep_from < sweep_to) || sweep_steps < 2) {
                std::cerr << "usage error: need 0 < from < to and steps >= 2\n";
                return kExitUsage;
            }
            return cmd_sweep(out, sweep_gl, sweep_geometry, sweep_from, sweep_to, sweep_steps);
        }

        if (app.got_subcommand(verify))
            return cmd_verify(policy);
    } catch (const ccrit::error& e) {
        std::cerr << "computation error: " << e.what() << "\n";
        return kExitComputation;
    }
    return kExitUsage;
}
