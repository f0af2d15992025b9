#pragma once

#include "ftw/error_analysis.hpp"
#include "ftw/expression.hpp"
#include "ftw/focp_solver.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ftw {

/// Contents of a problem file. Lines are `key = value`; `#` starts a comment.
///
/// Keys: p, q, a, b, track_x, track_u, exact_x, exact_u (expressions in t and
/// mu), x0 (number), mu (comma-separated list), basis (tw|ftw), k, M.
struct ProblemSpec {
    std::optional<Expr> p;
    std::optional<Expr> q;
    std::optional<Expr> a;
    std::optional<Expr> b;
    std::optional<Expr> track_x;
    std::optional<Expr> track_u;
    std::optional<Expr> exact_x;
    std::optional<Expr> exact_u;
    double x0 = 0.0;
    std::vector<double> mu;
    std::optional<BasisKind> basis;
    std::optional<int> k;
    std::optional<int> M;
};

/// Throws ParseError with the 1-based line number.
ProblemSpec parse_problem(std::string_view text);
ProblemSpec parse_problem_file(const std::filesystem::path& path);

/// Comma-separated list of numbers.
std::vector<double> parse_mu_list(std::string_view text);

struct EmitFlags {
    bool tables = true;
    bool plotdata = true;
    bool matrices = false;
};

/// Parses "tables,plotdata,matrices" (any subset).
EmitFlags parse_emit_flags(std::string_view text);

/// Unset fields fall back to the problem file, then to k = 2, M = 4, FTW and
/// the mu list 0.5, 0.75, 0.85, 0.95, 0.99, 1.
struct RunConfig {
    std::optional<BasisKind> basis;
    std::optional<int> k;
    std::optional<int> M;
    std::vector<double> mu;
    std::filesystem::path out_dir = ".";
    EmitFlags emit;
};

/// One reference or user problem, parametrized by the fractional order.
struct CaseDefinition {
    std::string name;
    std::function<FocpProblem(double mu)> make;
    /// Empty result when no closed form is known for this mu.
    std::function<std::optional<ExactSolution>(double mu)> exact;
};

/// Reference problems 1, 2 and 3. Throws ConfigError for other ids.
CaseDefinition example_case(int id);

struct CaseResult {
    double mu = 0.0;
    FocpSolution solution;
    double cond_D = 0.0;
    std::optional<double> err_x_sup;
    std::optional<double> err_u_sup;
};

struct RunReport {
    std::vector<CaseResult> cases;
    std::vector<std::filesystem::path> files;
};

/// Solves the case for every mu of the resolved configuration and writes
/// costs.csv, diagnostics.csv, trajectory_mu<mu>.csv, plot_mu<mu>.dat and
/// (when requested) D/P1/Pmu matrix dumps to out_dir.
RunReport run_case(const CaseDefinition& def, const RunConfig& config, const ProblemSpec* file = nullptr);
RunReport run_example(int id, const RunConfig& config);
RunReport run_problem_file(const std::filesystem::path& path, const RunConfig& config);

/// Case built from a parsed problem file.
CaseDefinition problem_case(const ProblemSpec& spec, std::string name);

}  // namespace ftw
