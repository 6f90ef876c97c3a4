// Command line front end: sigma point generation, propagation, Monte Carlo
// truths and benchmark reproduction runs.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "genut/genut.hpp"

namespace {

using genut::json;

// Inline JSON, or @path / existing path to a JSON file.
json load_json_arg(const std::string& arg) {
    std::string text = arg;
    if (!arg.empty() && arg[0] == '@') {
        std::ifstream in(arg.substr(1));
        if (!in) throw genut::Error("cannot read file: " + arg.substr(1));
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    } else if (std::filesystem::exists(arg)) {
        std::ifstream in(arg);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    return json::parse(text);
}

genut::Vector parse_bound(const std::string& csv, Eigen::Index n, double fallback) {
    if (csv.empty()) return genut::Vector::Constant(n, fallback);
    std::vector<double> vals;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "inf" || tok == "+inf") {
            vals.push_back(std::numeric_limits<double>::infinity());
        } else if (tok == "-inf") {
            vals.push_back(-std::numeric_limits<double>::infinity());
        } else {
            vals.push_back(std::stod(tok));
        }
    }
    if (Eigen::Index(vals.size()) != n) {
        throw genut::Error("bound vector length " + std::to_string(vals.size()) +
                           " does not match dimension " + std::to_string(n));
    }
    return Eigen::Map<genut::Vector>(vals.data(), Eigen::Index(vals.size()));
}

std::map<std::string, double> parse_fn_params(const std::vector<std::string>& kvs) {
    std::map<std::string, double> out;
    for (const auto& kv : kvs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw genut::Error("--fn-params expects key=value, got '" + kv + "'");
        }
        out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    return out;
}

struct SchemeArgs {
    std::string scheme = "genut";
    std::string mode = "match-kurtosis";
    double kappa = std::numeric_limits<double>::quiet_NaN();
    std::string lower, upper;
    double theta = 0.9;
    std::string sqrt_method = "cholesky";
};

genut::SqrtMethod sqrt_method_of(const SchemeArgs& a) {
    if (a.sqrt_method == "cholesky") return genut::SqrtMethod::Cholesky;
    if (a.sqrt_method == "symmetric") return genut::SqrtMethod::Symmetric;
    throw genut::Error("unknown --sqrt method '" + a.sqrt_method + "'");
}

genut::SigmaPointSet build_points(const genut::MomentSpec& spec, const SchemeArgs& a) {
    const genut::SqrtMethod m = sqrt_method_of(a);
    if (a.scheme == "ut") {
        const double kappa =
            std::isnan(a.kappa) ? genut::default_kappa(spec.dim()) : a.kappa;
        return genut::ut_sigma_points(spec.mean, spec.covariance, kappa, m);
    }
    const genut::UMode mode = a.mode == "default" ? genut::UMode::Default
                                                  : genut::UMode::MatchKurtosis;
    genut::SigmaPointSet set = genut::generate(spec, mode, m);
    if (a.scheme == "genut-constrained") {
        genut::BoxConstraint c;
        c.lower = parse_bound(a.lower, spec.dim(), -std::numeric_limits<double>::infinity());
        c.upper = parse_bound(a.upper, spec.dim(), std::numeric_limits<double>::infinity());
        c.theta = a.theta;
        set = genut::constrain(spec, set, c, m);
    } else if (a.scheme != "genut") {
        throw genut::Error("unknown --scheme '" + a.scheme + "'");
    }
    return set;
}

void add_scheme_flags(CLI::App* cmd, SchemeArgs& a) {
    cmd->add_option("--scheme", a.scheme, "genut | genut-constrained | ut")
        ->default_val("genut");
    cmd->add_option("--mode", a.mode, "spread selection: match-kurtosis | default")
        ->default_val("match-kurtosis");
    cmd->add_option("--kappa", a.kappa, "spread parameter for --scheme ut (default 3-n)");
    cmd->add_option("--lower", a.lower, "comma separated lower bounds (-inf allowed)");
    cmd->add_option("--upper", a.upper, "comma separated upper bounds (inf allowed)");
    cmd->add_option("--theta", a.theta, "slack parameter in (0,1)")->default_val(0.9);
    cmd->add_option("--sqrt", a.sqrt_method, "covariance factor: cholesky | symmetric")
        ->default_val("cholesky");
}

genut::MomentSpec spec_from_args(const std::string& spec_arg, const std::string& dist_arg) {
    if (!spec_arg.empty()) return genut::moment_spec_from_json(load_json_arg(spec_arg));
    if (!dist_arg.empty()) {
        return genut::independent_joint(genut::distributions_from_json(load_json_arg(dist_arg)));
    }
    throw genut::Error("either --spec or --dist is required");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized unscented transform toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = 42;
    std::string out_dir = ".";
    std::string format = "both";
    app.add_option("--seed", seed, "run seed")->default_val(42);
    app.add_option("--out", out_dir, "output directory for report files")->default_val(".");
    app.add_option("--format", format, "report files: csv | json | both")->default_val("both");

    // sigma-points ----------------------------------------------------------
    auto* sp = app.add_subcommand("sigma-points", "generate a weighted sigma point set");
    std::string sp_spec, sp_dist, sp_u;
    SchemeArgs sp_args;
    sp->add_option("--spec", sp_spec, "moment spec JSON (inline or @file)");
    sp->add_option("--dist", sp_dist, "distribution JSON or array (inline or @file)");
    sp->add_option("--u", sp_u, "explicit comma separated spread vector u");
    add_scheme_flags(sp, sp_args);

    // propagate --------------------------------------------------------------
    auto* pr = app.add_subcommand("propagate",
                                  "push sigma points through a named transformation");
    std::string pr_spec, pr_dist, pr_fn;
    std::vector<std::string> pr_fn_params;
    SchemeArgs pr_args;
    pr->add_option("--spec", pr_spec, "moment spec JSON (inline or @file)");
    pr->add_option("--dist", pr_dist, "distribution JSON or array (inline or @file)");
    pr->add_option("--fn", pr_fn, "identity | quadratic | sin | cos | sincos | sir")
        ->required();
    pr->add_option("--fn-params", pr_fn_params, "transform parameters as key=value");
    add_scheme_flags(pr, pr_args);

    // mc-truth ----------------------------------------------------------------
    auto* mc = app.add_subcommand("mc-truth",
                                  "empirical truth of a transformation by Monte Carlo");
    std::string mc_dist, mc_fn;
    std::vector<std::string> mc_fn_params;
    long long mc_n = 10000000;
    mc->add_option("--dist", mc_dist, "distribution JSON or array (inline or @file)")
        ->required();
    mc->add_option("--fn", mc_fn, "transform name")->required();
    mc->add_option("--fn-params", mc_fn_params, "transform parameters as key=value");
    mc->add_option("--n", mc_n, "number of draws")->default_val(10000000);

    // reproduce -----------------------------------------------------------------
    auto* rp = app.add_subcommand("reproduce", "run a benchmark reproduction selector");
    std::string rp_table;
    rp->add_option("--table", rp_table,
                   "example1 | example2 | scalar-example | table2 | table3 | table4 | "
                   "table5 | case2 | case3 | all")
        ->required();

    CLI11_PARSE(app, argc, argv);

    if (const char* env_out = std::getenv("GENUT_OUT")) {
        out_dir = env_out;
    }

    try {
        if (*sp) {
            const genut::MomentSpec spec = spec_from_args(sp_spec, sp_dist);
            genut::SigmaPointSet set;
            if (!sp_u.empty()) {
                const genut::Vector u = parse_bound(sp_u, spec.dim(), 1.0);
                set = genut::generate(spec, u, sqrt_method_of(sp_args));
            } else {
                set = build_points(spec, sp_args);
            }
            json out = genut::to_json(set);
            out["moment_spec"] = genut::to_json(spec);
            std::cout << out.dump(2) << '\n';
            return 0;
        }

        if (*pr) {
            const genut::MomentSpec spec = spec_from_args(pr_spec, pr_dist);
            const genut::Transform f =
                genut::make_transform(pr_fn, parse_fn_params(pr_fn_params), spec.dim());
            const genut::SigmaPointSet set = build_points(spec, pr_args);
            const genut::TransformResult r = genut::propagate(set, f);
            std::cout << genut::to_json(r).dump(2) << '\n';
            return 0;
        }

        if (*mc) {
            const auto ds = genut::distributions_from_json(load_json_arg(mc_dist));
            const genut::Transform f = genut::make_transform(
                mc_fn, parse_fn_params(mc_fn_params), Eigen::Index(ds.size()));
            const genut::McTruthResult r =
                genut::mc_truth(ds, f, Eigen::Index(mc_n), seed);
            std::cout << genut::to_json(r).dump(2) << '\n';
            return 0;
        }

        if (*rp) {
            std::vector<genut::ReproTarget> targets;
            if (rp_table == "all") {
                targets = {genut::ReproTarget::Example1, genut::ReproTarget::Example2,
                           genut::ReproTarget::ScalarExample, genut::ReproTarget::Table2,
                           genut::ReproTarget::Table3, genut::ReproTarget::Table4,
                           genut::ReproTarget::Table5, genut::ReproTarget::Case2,
                           genut::ReproTarget::Case3};
            } else {
                targets = {genut::repro_target_from_string(rp_table)};
            }
            bool all_pass = true;
            for (const auto t : targets) {
                const genut::ReproReport rep = genut::reproduce(t, seed);
                if (format == "csv" || format == "both") genut::write_csv(rep, out_dir);
                if (format == "json" || format == "both") genut::write_json(rep, out_dir);
                size_t gated = 0, passed = 0;
                for (const auto& row : rep.rows) {
                    if (!row.gated) continue;
                    ++gated;
                    if (row.pass) ++passed;
                    else {
                        std::cout << "  FAIL " << row.distribution << ' ' << row.scheme << ' '
                                  << row.quantity << " value=" << (row.value ? *row.value : 0.0)
                                  << " expected=" << (row.published ? *row.published : 0.0)
                                  << " tol=" << row.tolerance << '\n';
                    }
                }
                std::cout << rep.selector << ": " << (rep.all_pass() ? "PASS" : "FAIL") << " ("
                          << passed << '/' << gated << " gated checks)\n";
                all_pass = all_pass && rep.all_pass();
            }
            return all_pass ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
