// Batch front door: parse a problem config, dispatch to the fixed-point
// solver or one of the oracles, and emit CSV reports.
//
// Exit codes: 0 success, 1 config/usage error, 2 numerical failure,
// 3 method disagreement in `compare`.

#include "fkswitch/comparison.hpp"
#include "fkswitch/config.hpp"
#include "fkswitch/csv.hpp"
#include "fkswitch/errors.hpp"
#include "fkswitch/grid.hpp"
#include "fkswitch/model.hpp"
#include "fkswitch/monte_carlo.hpp"
#include "fkswitch/ou_analytics.hpp"
#include "fkswitch/pde.hpp"
#include "fkswitch/picard.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace fkswitch;

struct CliOptions {
    std::string config_path;
    std::optional<double> t;
    std::optional<double> x;
    std::optional<int> regime;  // 1-based on the command line
    std::optional<double> tol;
    std::optional<long> max_iter;
    std::optional<long long> paths;
    std::optional<std::uint64_t> seed;
    std::optional<long> nt;
    std::optional<long> nx;
    std::optional<double> x_min;
    std::optional<double> x_max;
    std::string out_path;
};

/// Effective settings: command line beats [run] section beats defaults.
struct Resolved {
    double t = 0.0;
    double x = 0.0;
    int regime = 1;
    double tol = 1e-6;
    long max_iter = 200;
    long long paths = 1'000'000;
    std::uint64_t seed = 20240229;
    long nt = 33;
    long nx = 401;
    std::optional<double> x_min;
    std::optional<double> x_max;
};

template <typename T, typename U>
void overlay(T& slot, const std::optional<U>& file_value, const std::optional<U>& cli_value) {
    if (file_value) slot = static_cast<T>(*file_value);
    if (cli_value) slot = static_cast<T>(*cli_value);
}

Resolved resolve(const CliOptions& cli, const RunOverrides& run) {
    Resolved r;
    overlay(r.t, run.t, cli.t);
    overlay(r.x, run.x, cli.x);
    overlay(r.regime, run.regime, cli.regime);
    overlay(r.tol, run.tol, cli.tol);
    overlay(r.max_iter, run.max_iter, cli.max_iter);
    overlay(r.paths, run.paths, cli.paths);
    overlay(r.seed, run.seed, cli.seed);
    overlay(r.nt, run.nt, cli.nt);
    overlay(r.nx, run.nx, cli.nx);
    if (run.x_min) r.x_min = *run.x_min;
    if (cli.x_min) r.x_min = *cli.x_min;
    if (run.x_max) r.x_max = *run.x_max;
    if (cli.x_max) r.x_max = *cli.x_max;
    return r;
}

PricingQuery make_query(const Resolved& r, const RegimeOUModel& model) {
    if (r.regime < 1) {
        throw_config("RegimeOutOfRange", "regime indices are 1-based");
    }
    return PricingQuery::checked(r.t, r.x, static_cast<std::size_t>(r.regime - 1), model);
}

GridSpec make_grid(const Resolved& r, const RegimeOUModel& model) {
    if (r.nt < 2 || r.nx < 3) {
        throw_config("GridSpecInvalid", "need --nt >= 2 and --nx >= 3");
    }
    return GridSpec::automatic(model, r.x, static_cast<std::size_t>(r.nt),
                               static_cast<std::size_t>(r.nx), r.x_min, r.x_max);
}

void emit(const std::string& out_path, const std::string& content, bool echo_to_stdout) {
    if (!out_path.empty()) {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) {
            throw_config("ConfigParse", "cannot open output file '" + out_path + "'");
        }
        file << content;
    }
    if (echo_to_stdout || out_path.empty()) {
        std::cout << content;
    }
}

void print_warnings(const ProblemConfig& config) {
    for (const std::string& note : config.warnings) {
        std::cerr << "warning: " << note << "\n";
    }
}

int run_validate(const CliOptions& cli) {
    const ProblemConfig config = load_problem_config(cli.config_path);
    print_warnings(config);
    const Resolved r = resolve(cli, config.run);
    const RegimeOUModel& model = config.model;
    if (r.regime < 1 || static_cast<std::size_t>(r.regime) > model.regimes()) {
        throw_config("RegimeOutOfRange", "regime index " + std::to_string(r.regime));
    }

    std::cout << "regimes: " << model.regimes() << "\n";
    std::cout << "beta: " << format_double(model.beta()) << "  horizon: "
              << format_double(model.horizon()) << "\n";
    for (std::size_t i = 0; i < model.regimes(); ++i) {
        std::cout << "regime " << (i + 1) << ": theta = " << format_double(model.theta(i))
                  << ", sigma = " << format_double(model.sigma(i))
                  << ", r = " << format_double(model.rate(i))
                  << ", holding rate = " << format_double(model.holding_rate(i)) << "\n";
    }
    std::cout << "theta relation: ok (within " << format_double(config.tolerances.theta_relation)
              << ")\n";

    const double span = 8.0 * model.max_stationary_std();
    const auto points = default_certificate_points(model, r.x - span, r.x + span);
    bool all_pass = true;
    CertificateReport requested_report;
    for (std::size_t i = 0; i < model.regimes(); ++i) {
        const CertificateReport report = supermartingale_certificate(
            model, config.dampening, points, i, config.tolerances.certificate);
        std::cout << "supermartingale certificate regime " << (i + 1) << ": "
                  << (report.pass ? "pass" : "FAIL")
                  << " (max relative violation = "
                  << format_double(report.max_relative_violation) << ")\n";
        if (static_cast<int>(i) + 1 == r.regime) {
            requested_report = report;
        }
        all_pass = all_pass && report.pass;
    }
    if (!cli.out_path.empty()) {
        std::ostringstream csv;
        write_certificate_csv(csv, requested_report);
        std::ofstream file(cli.out_path, std::ios::binary);
        if (!file) {
            throw_config("ConfigParse", "cannot open output file '" + cli.out_path + "'");
        }
        file << csv.str();
    }
    if (!all_pass) {
        std::cerr << "CertificateFailed: supermartingale inequality violated\n";
        return 2;
    }
    return 0;
}

int run_price(const CliOptions& cli) {
    const ProblemConfig config = load_problem_config(cli.config_path);
    print_warnings(config);
    const Resolved r = resolve(cli, config.run);
    const PricingQuery query = make_query(r, config.model);
    const GridSpec spec = make_grid(r, config.model);

    PicardOptions options;
    options.tol = r.tol;
    options.max_iter = static_cast<std::size_t>(r.max_iter);
    const auto [solution, report] =
        picard_solve(config.model, config.payoff, config.dampening, spec, options);

    const PriceResult result = price(solution, config.model, config.dampening, query);
    if (result.x_clamped) {
        std::cerr << "warning: query x outside the grid span, clamped to the edge\n";
    }

    std::ostringstream line;
    line << "v,a_posteriori_bound\n"
         << format_double(result.value) << ',' << format_double(report.a_posteriori) << '\n';
    std::cout << line.str();

    if (!cli.out_path.empty()) {
        std::ostringstream csv;
        write_surface_csv(csv, solution, config.model, config.dampening);
        std::ofstream file(cli.out_path, std::ios::binary);
        if (!file) {
            throw_config("ConfigParse", "cannot open output file '" + cli.out_path + "'");
        }
        file << csv.str();
    }

    if (!report.converged) {
        std::cerr << "MaxIterExceeded: a-posteriori bound "
                  << format_double(report.a_posteriori) << " above tol "
                  << format_double(r.tol) << " after " << report.iterations << " iterations\n";
        return 2;
    }
    return 0;
}

int run_trace(const CliOptions& cli) {
    const ProblemConfig config = load_problem_config(cli.config_path);
    print_warnings(config);
    const Resolved r = resolve(cli, config.run);
    const GridSpec spec = make_grid(r, config.model);

    PicardOptions options;
    options.tol = r.tol;
    options.max_iter = static_cast<std::size_t>(r.max_iter);
    const auto [solution, report] =
        picard_solve(config.model, config.payoff, config.dampening, spec, options);
    (void)solution;

    std::ostringstream csv;
    write_trace_csv(csv, report);
    emit(cli.out_path, csv.str(), false);

    if (!report.converged) {
        std::cerr << "MaxIterExceeded: not converged after " << report.iterations
                  << " iterations\n";
        return 2;
    }
    return 0;
}

int run_mc(const CliOptions& cli) {
    const ProblemConfig config = load_problem_config(cli.config_path);
    print_warnings(config);
    const Resolved r = resolve(cli, config.run);
    const PricingQuery query = make_query(r, config.model);

    McOptions options;
    options.paths = r.paths;
    options.seed = r.seed;
    const auto start = std::chrono::steady_clock::now();
    const McEstimate estimate = mc_price(config.model, config.payoff, query, options);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    std::ostringstream csv;
    write_mc_csv(csv, estimate, elapsed.count());
    emit(cli.out_path, csv.str(), false);
    return 0;
}

int run_pde(const CliOptions& cli) {
    const ProblemConfig config = load_problem_config(cli.config_path);
    print_warnings(config);
    const Resolved r = resolve(cli, config.run);
    make_query(r, config.model);  // validates the centering point
    const GridSpec sampling = make_grid(r, config.model);

    const PdeParams params = PdeParams::automatic(config.model, r.x, 1e-3, 0.005,
                                                  r.x_min, r.x_max);
    const PdeGrid grid = pde_solve(config.model, config.payoff, params);

    std::ostringstream csv;
    write_pde_surface_csv(csv, grid, sampling.times(), sampling.xs());
    emit(cli.out_path, csv.str(), false);
    return 0;
}

int run_compare(const CliOptions& cli) {
    const ProblemConfig config = load_problem_config(cli.config_path);
    print_warnings(config);
    const Resolved r = resolve(cli, config.run);
    const PricingQuery query = make_query(r, config.model);
    const GridSpec spec = make_grid(r, config.model);

    PicardOptions picard_options;
    picard_options.tol = r.tol;
    picard_options.max_iter = static_cast<std::size_t>(r.max_iter);
    const auto [solution, report] =
        picard_solve(config.model, config.payoff, config.dampening, spec, picard_options);
    if (!report.converged) {
        std::cerr << "MaxIterExceeded: not converged after " << report.iterations
                  << " iterations\n";
        return 2;
    }
    const double picard_value =
        price(solution, config.model, config.dampening, query).value;

    McOptions mc_options;
    mc_options.paths = r.paths;
    mc_options.seed = r.seed;
    const McEstimate estimate = mc_price(config.model, config.payoff, query, mc_options);

    const PdeParams params = PdeParams::automatic(config.model, r.x, 1e-3, 0.005,
                                                  r.x_min, r.x_max);
    const PdeGrid grid = pde_solve(config.model, config.payoff, params);
    const double pde_value = pde_price(grid, query);

    MethodValues values;
    values.picard = picard_value;
    values.picard_bound = report.a_posteriori;
    values.mc_mean = estimate.mean;
    values.mc_std_error = estimate.std_error;
    values.pde = pde_value;
    const ComparisonResult outcome = compare_methods(values);

    std::ostringstream csv;
    csv << "method,value,stat_error,tolerance,agrees_with_picard\n";
    csv << "picard," << format_double(picard_value) << ",0,"
        << format_double(report.a_posteriori) << ",1\n";
    csv << "mc," << format_double(estimate.mean) << ',' << format_double(estimate.std_error)
        << ',' << format_double(outcome.mc_tolerance) << ','
        << (outcome.picard_mc_agree ? '1' : '0') << '\n';
    csv << "pde," << format_double(pde_value) << ",0," << format_double(outcome.pde_tolerance)
        << ',' << (outcome.picard_pde_agree ? '1' : '0') << '\n';
    emit(cli.out_path, csv.str(), true);

    if (!outcome.all_agree) {
        std::cerr << "ComparisonDisagreement: methods differ beyond the combined budget\n";
        return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regime-switching expectation solver: fixed-point iteration with "
                 "Monte Carlo and finite-difference cross-checks"};
    app.require_subcommand(1);

    CliOptions cli;
    auto add_common = [&cli](CLI::App* cmd, bool with_query) {
        cmd->add_option("--config", cli.config_path, "problem config file (INI-style)")
            ->required();
        if (with_query) {
            cmd->add_option("--t", cli.t, "query time in [0, horizon]");
            cmd->add_option("--x", cli.x, "query log-price (also centers the grid)");
            cmd->add_option("--regime", cli.regime, "query regime, 1-based");
        }
        cmd->add_option("--tol", cli.tol, "a-posteriori stopping tolerance");
        cmd->add_option("--max-iter", cli.max_iter, "iteration cap");
        cmd->add_option("--paths", cli.paths, "simulation path count");
        cmd->add_option("--seed", cli.seed, "simulation seed");
        cmd->add_option("--out", cli.out_path, "output file");
        cmd->add_option("--nt", cli.nt, "time nodes of the solver grid");
        cmd->add_option("--nx", cli.nx, "space nodes of the solver grid");
        cmd->add_option("--xmin", cli.x_min, "lower edge of the space span");
        cmd->add_option("--xmax", cli.x_max, "upper edge of the space span");
    };

    CLI::App* validate = app.add_subcommand("validate", "check the config and certificates");
    add_common(validate, true);
    CLI::App* price_cmd = app.add_subcommand("price", "fixed-point value at the query");
    add_common(price_cmd, true);
    CLI::App* trace = app.add_subcommand("picard-trace", "iteration convergence CSV");
    add_common(trace, true);
    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo estimate CSV");
    add_common(mc, true);
    CLI::App* pde = app.add_subcommand("pde", "finite-difference surface CSV");
    add_common(pde, true);
    CLI::App* compare = app.add_subcommand("compare", "three-method agreement table");
    add_common(compare, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (validate->parsed()) return run_validate(cli);
        if (price_cmd->parsed()) return run_price(cli);
        if (trace->parsed()) return run_trace(cli);
        if (mc->parsed()) return run_mc(cli);
        if (pde->parsed()) return run_pde(cli);
        if (compare->parsed()) return run_compare(cli);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return e.kind() == ErrorKind::Config ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "InternalError: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
