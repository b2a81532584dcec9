// Command-line front end: kernel evaluation on grids, convergence studies,
// verification suites and MCMC sampling, all emitting plot-ready CSV/JSON.
#include <CLI11.hpp>

#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bioen/bioen.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct GridSpec {
    double lo = 0.0, hi = 0.0;
    int count = 0;
};

GridSpec parse_grid(const std::string& s) {
    GridSpec g;
    const auto p1 = s.find(':');
    const auto p2 = s.find(':', p1 == std::string::npos ? p1 : p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos)
        throw CLI::ValidationError("--grid", "expected lo:hi:count");
    try {
        g.lo = std::stod(s.substr(0, p1));
        g.hi = std::stod(s.substr(p1 + 1, p2 - p1 - 1));
        g.count = std::stoi(s.substr(p2 + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--grid", "expected lo:hi:count with numeric fields");
    }
    if (g.count < 1 || !(g.hi >= g.lo))
        throw CLI::ValidationError("--grid", "need count >= 1 and hi >= lo");
    return g;
}

std::vector<double> linspace(const GridSpec& g) {
    std::vector<double> v(static_cast<std::size_t>(g.count));
    if (g.count == 1) {
        v[0] = g.lo;
        return v;
    }
    for (int i = 0; i < g.count; ++i)
        v[static_cast<std::size_t>(i)] = g.lo + (g.hi - g.lo) * i / (g.count - 1.0);
    return v;
}

json parameters_json(const CLI::App& cmd) {
    json p = json::object();
    for (const auto* opt : cmd.get_options()) {
        if (opt->get_name() == "--help") continue;
        if (opt->count() > 0 || !opt->get_default_str().empty()) {
            const auto results = opt->results();
            if (results.size() == 1)
                p[opt->get_name()] = results[0];
            else if (!results.empty())
                p[opt->get_name()] = results;
            else
                p[opt->get_name()] = opt->get_default_str();
        }
    }
    return p;
}

void write_manifest(const std::string& path, const std::string& subcommand, const json& params,
                    std::optional<std::uint64_t> seed, double seconds,
                    const std::vector<std::string>& outputs) {
    json m;
    m["subcommand"] = subcommand;
    m["parameters"] = params;
    m["library_version"] = bioen::kVersion;
    if (seed) {
        m["seed"] = *seed;
        m["rng_stream"] = bioen::kRngStreamVersion;
    }
    m["wall_clock_seconds"] = seconds;
    m["outputs"] = outputs;
    std::ofstream out(path);
    out << m.dump(2) << '\n';
}

bioen::SeriesConfig cli_series_config(const std::optional<double>& rel_tol) {
    bioen::SeriesConfig cfg = bioen::series_config_from_env();
    if (rel_tol) cfg.rel_tol = *rel_tol; // flags take precedence over env
    cfg.validate();
    return cfg;
}

int run(int argc, char** argv) {
    CLI::App app{"biorthogonal ensemble kernels, scaling limits and samplers"};
    app.require_subcommand(1);

    // ---- kernel ----
    auto* kernel = app.add_subcommand("kernel", "evaluate a finite-N or limit kernel over a grid");
    std::string k_family = "jacobi";
    double k_alpha = 0.0, k_theta = 1.0;
    int k_n = 0;
    bool k_limit = false;
    std::string k_grid, k_method = "auto", k_out;
    std::optional<double> k_x, k_y, k_rel_tol;
    kernel->add_option("--family", k_family, "jacobi | laguerre | hermite")->required();
    kernel->add_option("--alpha", k_alpha, "weight exponent, > -1")->required();
    kernel->add_option("--theta", k_theta, "deformation parameter, > 0")->required();
    kernel->add_option("--n", k_n, "point count for the finite-N kernel");
    kernel->add_flag("--limit", k_limit, "evaluate the scaling-limit kernel instead of finite N");
    kernel->add_option("--grid", k_grid, "lo:hi:count, used for both axes");
    kernel->add_option("--x", [&k_x](const CLI::results_t& r) { k_x = std::stod(r[0]); return true; },
                       "single x (with --y)");
    kernel->add_option("--y", [&k_y](const CLI::results_t& r) { k_y = std::stod(r[0]); return true; },
                       "single y (with --x)");
    kernel->add_option("--method", k_method, "series | quadrature | auto (limit kernel only)");
    kernel->add_option("--rel-tol", [&k_rel_tol](const CLI::results_t& r) { k_rel_tol = std::stod(r[0]); return true; },
                       "series/quadrature relative tolerance (overrides BIOEN_REL_TOL)");
    kernel->add_option("--out", k_out, "output CSV path (default stdout)");

    // ---- converge ----
    auto* converge = app.add_subcommand("converge", "scaled finite-N kernels against the limit kernel");
    std::string c_family = "laguerre", c_grid, c_out = "converge";
    double c_alpha = 0.0, c_theta = 1.0;
    std::vector<int> c_nlist{50, 100, 200, 400};
    converge->add_option("--family", c_family, "jacobi | laguerre | hermite")->required();
    converge->add_option("--alpha", c_alpha, "weight exponent, > -1")->required();
    converge->add_option("--theta", c_theta, "deformation parameter, > 0")->required();
    converge->add_option("--n-list", c_nlist, "ascending N values")->delimiter(',');
    converge->add_option("--grid", c_grid, "lo:hi:count for both axes (default per family)");
    converge->add_option("--out", c_out, "output prefix (.csv/.json/.manifest.json)");

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "run a named verification suite");
    std::string v_suite, v_out;
    bool v_list = false;
    verify->add_option("--suite", v_suite, "suite name (see --list)");
    verify->add_flag("--list", v_list, "list available suites");
    verify->add_option("--out", v_out, "write the JSON verdict here as well");

    // ---- sample ----
    auto* sampcmd = app.add_subcommand("sample", "MCMC sampling with determinantal overlays");
    std::string s_family = "jacobi", s_out = "sample", s_format = "csv", s_range;
    double s_alpha = 1.0, s_theta = 2.0, s_scale = 0.25;
    int s_n = 3, s_chains = 4, s_kept = 200000, s_thin = 5, s_burn = 50000, s_bins = 20;
    std::optional<std::uint64_t> s_seed;
    sampcmd->add_option("--family", s_family, "jacobi | laguerre | hermite")->required();
    sampcmd->add_option("--alpha", s_alpha, "weight exponent, > -1")->required();
    sampcmd->add_option("--theta", s_theta, "deformation parameter, > 0")->required();
    sampcmd->add_option("--n", s_n, "points per configuration")->required();
    sampcmd->add_option("--seed", [&s_seed](const CLI::results_t& r) { s_seed = std::stoull(r[0]); return true; },
                        "RNG seed (generated and recorded if omitted)");
    sampcmd->add_option("--chains", s_chains, "independent chains");
    sampcmd->add_option("--kept", s_kept, "kept samples per chain");
    sampcmd->add_option("--thin", s_thin, "sweeps between kept samples");
    sampcmd->add_option("--burn-in", s_burn, "burn-in sweeps (with adaptive proposal tuning)");
    sampcmd->add_option("--scale", s_scale, "initial proposal scale");
    sampcmd->add_option("--bins", s_bins, "histogram bins for the rho1 overlay");
    sampcmd->add_option("--range", s_range, "histogram range lo:hi:1 (default per family)");
    sampcmd->add_option("--format", s_format, "csv | binary sample container");
    sampcmd->add_option("--out", s_out, "output prefix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&t0] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    try {
        if (kernel->parsed()) {
            const bioen::Family fam = bioen::family_from_string(k_family);
            const bioen::SeriesConfig cfg = cli_series_config(k_rel_tol);
            bioen::KernelMethod method = bioen::KernelMethod::Auto;
            if (k_method == "series") method = bioen::KernelMethod::Series;
            else if (k_method == "quadrature") method = bioen::KernelMethod::Quadrature;
            else if (k_method != "auto")
                throw CLI::ValidationError("--method", "expected series, quadrature or auto");
            if (!k_limit && k_n < 1)
                throw CLI::ValidationError("--n", "finite-N evaluation needs --n >= 1 (or pass --limit)");

            auto eval = [&](double x, double y) {
                if (!k_limit) return bioen::kernel_value({fam, k_alpha, k_theta, k_n}, x, y);
                const bioen::LimitKernelParams p{k_alpha, k_theta};
                return fam == bioen::Family::Hermite ? bioen::limit_kernel_hermite(p, x, y, method, cfg)
                                                     : bioen::limit_kernel(p, x, y, method, cfg);
            };

            std::vector<double> xs, ys;
            if (!k_grid.empty()) {
                const auto g = parse_grid(k_grid);
                xs = ys = linspace(g);
            } else if (k_x && k_y) {
                xs = {*k_x};
                ys = {*k_y};
            } else {
                throw CLI::ValidationError("kernel", "need --grid or both --x and --y");
            }

            std::ostringstream csv;
            csv << "x,y,value\n";
            for (double x : xs)
                for (double y : ys)
                    csv << bioen::format_double(x) << ',' << bioen::format_double(y) << ','
                        << bioen::format_double(eval(x, y)) << '\n';
            if (k_out.empty()) {
                std::cout << csv.str();
            } else {
                std::ofstream f(k_out);
                f << csv.str();
                write_manifest(k_out + ".manifest.json", "kernel", parameters_json(*kernel), std::nullopt,
                               elapsed(), {k_out});
            }
            return kExitOk;
        }

        if (converge->parsed()) {
            const bioen::Family fam = bioen::family_from_string(c_family);
            std::vector<std::pair<double, double>> grid;
            if (c_grid.empty()) {
                grid = bioen::default_convergence_grid(fam, c_theta);
            } else {
                const auto g = parse_grid(c_grid);
                if (g.count < 1) throw CLI::ValidationError("--grid", "empty grid");
                for (double x : linspace(g))
                    for (double y : linspace(g)) grid.emplace_back(x, y);
            }
            if (grid.empty()) throw CLI::ValidationError("--grid", "empty grid");
            const auto rep = bioen::convergence_study(fam, c_alpha, c_theta, grid, c_nlist);
            {
                std::ofstream f(c_out + ".csv");
                bioen::write_csv(rep, f);
            }
            {
                std::ofstream f(c_out + ".json");
                f << bioen::to_json(rep).dump(2) << '\n';
            }
            write_manifest(c_out + ".manifest.json", "converge", parameters_json(*converge), std::nullopt,
                           elapsed(), {c_out + ".csv", c_out + ".json"});
            std::cout << "monotone_flag=" << (rep.monotone_flag ? "true" : "false")
                      << " final_sup_error=" << bioen::format_double(rep.sup_errors.back()) << '\n';
            return kExitOk;
        }

        if (verify->parsed()) {
            if (v_list) {
                for (const auto& s : bioen::verify_suites()) std::cout << s << '\n';
                return kExitOk;
            }
            if (v_suite.empty()) throw CLI::ValidationError("verify", "need --suite or --list");
            const bioen::SuiteResult res = bioen::run_verify_suite(v_suite);
            json j;
            j["suite"] = res.suite;
            j["pass"] = res.pass();
            j["checks"] = json::array();
            for (const auto& c : res.checks)
                j["checks"].push_back({{"name", c.name},
                                       {"residual", c.residual},
                                       {"threshold", c.threshold},
                                       {"pass", c.pass()}});
            std::cout << j.dump(2) << '\n';
            if (!v_out.empty()) {
                std::ofstream f(v_out);
                f << j.dump(2) << '\n';
            }
            return res.pass() ? kExitOk : kExitVerifyFailed;
        }

        if (sampcmd->parsed()) {
            const bioen::Family fam = bioen::family_from_string(s_family);
            const bioen::EnsembleSpec spec{fam, s_alpha, s_theta, s_n};
            if (!s_seed) {
                std::random_device rd;
                s_seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
            }
            bioen::ChainConfig cc;
            cc.thin = s_thin;
            cc.burn_in = s_burn;
            cc.steps = s_burn + s_kept * s_thin;
            cc.seed = *s_seed;
            cc.chains = s_chains;
            cc.proposal_scale = s_scale;
            const auto batch = bioen::sample(spec, cc);

            std::vector<std::string> outputs;
            if (s_format == "binary") {
                const std::string path = s_out + ".samples.bioe";
                std::ofstream f(path, std::ios::binary);
                bioen::write_binary(batch, f);
                outputs.push_back(path);
            } else if (s_format == "csv") {
                const std::string path = s_out + ".samples.csv";
                std::ofstream f(path);
                bioen::write_csv(batch, f);
                outputs.push_back(path);
            } else {
                throw CLI::ValidationError("--format", "expected csv or binary");
            }

            double lo = 0.0, hi = 1.0;
            switch (fam) {
                case bioen::Family::Jacobi: lo = 0.0; hi = 1.0; break;
                case bioen::Family::Laguerre: lo = 0.0; hi = 4.0 * (s_alpha + s_n + 1.0); break;
                case bioen::Family::Hermite: hi = 2.0 + std::sqrt(s_alpha + s_n + 1.0); lo = -hi; break;
            }
            if (!s_range.empty()) {
                const auto g = parse_grid(s_range + (std::count(s_range.begin(), s_range.end(), ':') == 1 ? ":1" : ""));
                lo = g.lo;
                hi = g.hi;
            }
            const auto h = bioen::empirical_rho1(batch, s_bins, lo, hi);
            const std::string hpath = s_out + ".rho1.csv";
            {
                std::ofstream f(hpath);
                f << "bin_center,empirical,predicted,sigma,sigma_poisson\n";
                for (std::size_t b = 0; b < h.centers.size(); ++b) {
                    const double x = h.centers[b];
                    double predicted = std::numeric_limits<double>::quiet_NaN();
                    try {
                        predicted = bioen::weight(spec, x) * bioen::kernel_value(spec, x, x);
                    } catch (const std::domain_error&) {
                        // bin center outside the weight's interval; leave NaN
                    }
                    f << bioen::format_double(x) << ',' << bioen::format_double(h.densities[b]) << ','
                      << bioen::format_double(predicted) << ',' << bioen::format_double(h.sigma_batch[b])
                      << ',' << bioen::format_double(h.sigma_poisson[b]) << '\n';
                }
            }
            outputs.push_back(hpath);
            write_manifest(s_out + ".manifest.json", "sample", parameters_json(*sampcmd), s_seed,
                           elapsed(), outputs);
            std::cout << "acceptance_rate=" << bioen::format_double(batch.acceptance_rate)
                      << " kept=" << batch.configurations.size() << " seed=" << *s_seed << '\n';
            return kExitOk;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitVerifyFailed;
    }
    return kExitUsage;
}

} // namespace

int main(int argc, char** argv) { return run(argc, argv); }
