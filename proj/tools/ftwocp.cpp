#include "ftw/bench.hpp"
#include "ftw/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Wavelet solver for linear-quadratic fractional optimal control problems"};

    int example = 0;
    std::string problem;
    std::string basis;
    int k = 0;
    int M = 0;
    std::string mu;
    std::string out = ".";
    std::string emit = "tables,plotdata";

    auto* ex_opt = app.add_option("--example", example, "Reference problem 1, 2 or 3");
    auto* pr_opt = app.add_option("--problem", problem, "Problem file (key = value lines)");
    ex_opt->excludes(pr_opt);
    auto* basis_opt = app.add_option("--basis", basis, "tw or ftw");
    auto* k_opt = app.add_option("--k", k, "Dilation level, 2^(k-1) blocks");
    auto* M_opt = app.add_option("--M", M, "Wavelets per block");
    app.add_option("--mu", mu, "Comma-separated fractional orders");
    app.add_option("--out", out, "Output directory");
    app.add_option("--emit", emit, "Subset of tables,plotdata,matrices");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }
    if (!*ex_opt && !*pr_opt) {
        std::cerr << "error: one of --example or --problem is required\n";
        return 1;
    }

    try {
        ftw::RunConfig config;
        if (*basis_opt) {
            config.basis = ftw::parse_basis_kind(basis);
        }
        if (*k_opt) {
            config.k = k;
        }
        if (*M_opt) {
            config.M = M;
        }
        if (!mu.empty()) {
            config.mu = ftw::parse_mu_list(mu);
        }
        config.out_dir = out;
        config.emit = ftw::parse_emit_flags(emit);

        const auto report = *ex_opt ? ftw::run_example(example, config) : ftw::run_problem_file(problem, config);
        for (const auto& c : report.cases) {
            std::cout << "mu=" << c.mu << " J=" << c.solution.J_value << '\n';
        }
        for (const auto& f : report.files) {
            std::cout << "wrote " << f.string() << '\n';
        }
    } catch (const ftw::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 1;
    } catch (const ftw::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 1;
    } catch (const ftw::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 1;
    } catch (const ftw::EvaluationError& e) {
        std::cerr << "evaluation error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
