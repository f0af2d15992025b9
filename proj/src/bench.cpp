#include "ftw/bench.hpp"

#include "ftw/csv_format.hpp"
#include "ftw/errors.hpp"
#include "ftw/operational_matrices.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace ftw {

namespace {

constexpr int kPlotPoints = 200;
constexpr int kTablePoints = 9;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <class T>
bool parse_number(std::string_view text, T& out) {
    text = trim(text);
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return !text.empty() && ec == std::errc() && end == text.data() + text.size();
}

std::optional<double> sup_error(const RealFunction& approx, const RealFunction& exact) {
    double worst = 0.0;
    for (int i = 0; i < kPlotPoints; ++i) {
        const double z = static_cast<double>(i) / (kPlotPoints - 1);
        worst = std::max(worst, std::abs(approx(z) - exact(z)));
    }
    return worst;
}

std::ofstream open_output(const std::filesystem::path& path, std::vector<std::filesystem::path>& files) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    files.push_back(path);
    return out;
}

void write_matrix(const std::filesystem::path& path, const DenseMatrix& m, std::vector<std::filesystem::path>& files) {
    auto out = open_output(path, files);
    write_matrix_csv(out, m);
}

const std::vector<double>& default_mu_list() {
    static const std::vector<double> mus{0.5, 0.75, 0.85, 0.95, 0.99, 1.0};
    return mus;
}

FocpProblem unit_weight_problem(double mu, RealFunction a, double x0) {
    FocpProblem pr;
    pr.p = [](double) { return 1.0; };
    pr.q = [](double) { return 1.0; };
    pr.a = std::move(a);
    pr.b = [](double) { return 1.0; };
    pr.x0 = x0;
    pr.mu = mu;
    return pr;
}

}  // namespace

std::vector<double> parse_mu_list(std::string_view text) {
    std::vector<double> mus;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        double v = 0.0;
        if (!parse_number(item, v)) {
            throw ParseError("malformed mu value '" + std::string(trim(item)) + "'", 0, static_cast<int>(start) + 1);
        }
        mus.push_back(v);
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return mus;
}

EmitFlags parse_emit_flags(std::string_view text) {
    EmitFlags flags{false, false, false};
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto item =
            trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (item == "tables") {
            flags.tables = true;
        } else if (item == "plotdata") {
            flags.plotdata = true;
        } else if (item == "matrices") {
            flags.matrices = true;
        } else {
            throw ParseError("unknown emit flag '" + std::string(item) + "'", 0, static_cast<int>(start) + 1);
        }
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return flags;
}

ProblemSpec parse_problem(std::string_view text) {
    ProblemSpec spec;
    std::map<std::string, int> seen;
    int line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        ++line_no;
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        if (trim(line).empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("line " + std::to_string(line_no) + ": expected 'key = value'", line_no, 1);
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view raw_value = line.substr(eq + 1);
        const std::string_view value = trim(raw_value);
        const int value_column = static_cast<int>(eq + 2 + raw_value.find_first_not_of(" \t"));
        auto fail = [&](const std::string& what, int column = 0) -> ParseError {
            return ParseError("line " + std::to_string(line_no) + ": " + key + ": " + what, line_no, column);
        };
        if (!seen.emplace(key, line_no).second) {
            throw fail("duplicate key (first given on line " + std::to_string(seen[key]) + ")");
        }
        if (value.empty()) {
            throw fail("missing value", value_column);
        }

        auto expression = [&]() {
            try {
                return parse_expression(value);
            } catch (const ParseError& e) {
                throw fail(e.what(), value_column + e.column() - 1);
            }
        };
        if (key == "p") {
            spec.p = expression();
        } else if (key == "q") {
            spec.q = expression();
        } else if (key == "a") {
            spec.a = expression();
        } else if (key == "b") {
            spec.b = expression();
        } else if (key == "track_x") {
            spec.track_x = expression();
        } else if (key == "track_u") {
            spec.track_u = expression();
        } else if (key == "exact_x") {
            spec.exact_x = expression();
        } else if (key == "exact_u") {
            spec.exact_u = expression();
        } else if (key == "x0") {
            if (!parse_number(value, spec.x0)) {
                throw fail("expected a number", value_column);
            }
        } else if (key == "mu") {
            try {
                spec.mu = parse_mu_list(value);
            } catch (const ParseError& e) {
                throw fail(e.what(), value_column + e.column() - 1);
            }
        } else if (key == "basis") {
            try {
                spec.basis = parse_basis_kind(value);
            } catch (const ConfigError& e) {
                throw fail(e.what(), value_column);
            }
        } else if (key == "k" || key == "M") {
            int v = 0;
            if (!parse_number(value, v)) {
                throw fail("expected an integer", value_column);
            }
            (key == "k" ? spec.k : spec.M) = v;
        } else {
            throw fail("unknown key", 1);
        }
    }
    for (const char* key : {"p", "q", "a", "b", "x0"}) {
        if (!seen.contains(key)) {
            throw ParseError(std::string("missing required key '") + key + "'", 0, 0);
        }
    }
    if (spec.exact_x.has_value() != spec.exact_u.has_value()) {
        throw ParseError("exact_x and exact_u must be given together", 0, 0);
    }
    return spec;
}

ProblemSpec parse_problem_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read problem file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem(buf.str());
}

CaseDefinition example_case(int id) {
    switch (id) {
        case 1:
            return {"example1",
                    [](double mu) { return unit_weight_problem(mu, [](double) { return -1.0; }, 1.0); },
                    [](double mu) -> std::optional<ExactSolution> {
                        if (mu != 1.0) {
                            return std::nullopt;
                        }
                        const auto& state = analytic_family()[3];
                        const double r2 = std::numbers::sqrt2;
                        const double varpi = -0.98;
                        RealFunction u = [=](double t) {
                            return (1.0 + r2 * varpi) * std::cosh(r2 * t) + (r2 + varpi) * std::sinh(r2 * t);
                        };
                        return ExactSolution{state.value, u, state.derivative};
                    }};
        case 2:
            return {"example2", [](double mu) { return unit_weight_problem(mu, [](double t) { return t; }, 1.0); },
                    [](double) -> std::optional<ExactSolution> { return std::nullopt; }};
        case 3:
            return {"example3",
                    [](double mu) {
                        auto pr = unit_weight_problem(mu, [](double) { return -1.0; }, 0.0);
                        pr.track_x = [mu](double t) { return std::pow(t, mu); };
                        pr.track_u = [mu](double t) { return std::pow(t, mu) + std::tgamma(mu + 1.0); };
                        return pr;
                    },
                    [](double mu) -> std::optional<ExactSolution> {
                        RealFunction x = [mu](double t) { return std::pow(t, mu); };
                        RealFunction u = [mu](double t) { return std::pow(t, mu) + std::tgamma(mu + 1.0); };
                        return ExactSolution{x, u, {}};
                    }};
        default:
            throw ConfigError("unknown example id " + std::to_string(id) + " (expected 1, 2 or 3)");
    }
}

CaseDefinition problem_case(const ProblemSpec& spec, std::string name) {
    CaseDefinition def;
    def.name = std::move(name);
    def.make = [spec](double mu) {
        FocpProblem pr;
        pr.p = to_function(*spec.p, mu);
        pr.q = to_function(*spec.q, mu);
        pr.a = to_function(*spec.a, mu);
        pr.b = to_function(*spec.b, mu);
        if (spec.track_x) {
            pr.track_x = to_function(*spec.track_x, mu);
        }
        if (spec.track_u) {
            pr.track_u = to_function(*spec.track_u, mu);
        }
        pr.x0 = spec.x0;
        pr.mu = mu;
        return pr;
    };
    def.exact = [spec](double mu) -> std::optional<ExactSolution> {
        if (!spec.exact_x) {
            return std::nullopt;
        }
        return ExactSolution{to_function(*spec.exact_x, mu), to_function(*spec.exact_u, mu), {}};
    };
    return def;
}

RunReport run_case(const CaseDefinition& def, const RunConfig& config, const ProblemSpec* file) {
    const BasisKind basis = config.basis.value_or(file && file->basis ? *file->basis : BasisKind::FractionalTaylor);
    const int k = config.k.value_or(file && file->k ? *file->k : 2);
    const int M = config.M.value_or(file && file->M ? *file->M : 4);
    const std::vector<double>& mus =
        !config.mu.empty() ? config.mu : (file && !file->mu.empty() ? file->mu : default_mu_list());
    if (k < 1 || M < 1) {
        throw ConfigError("k and M must be at least 1");
    }
    for (double mu : mus) {
        if (!(mu > 0.0 && mu <= 1.0)) {
            throw ConfigError("mu values must lie in (0, 1], got " + format_number(mu));
        }
    }

    RunReport report;
    std::vector<std::optional<ExactSolution>> exacts;
    std::vector<std::shared_ptr<const OperationalMatrices>> all_mats;
    for (double mu : mus) {
        const auto params = WaveletParams::make(k, M, mu, basis);
        auto mats = std::make_shared<const OperationalMatrices>(params);
        const FocpProblem problem = def.make(mu);
        CaseResult r;
        r.mu = mu;
        try {
            r.solution = solve(discretize(problem, mats), problem);
        } catch (const SingularMatrixError& e) {
            throw SingularMatrixError(def.name + " at mu=" + format_number(mu) + ": " + e.what(), e.pivot());
        }
        r.cond_D = mats->cond_D();
        auto exact = def.exact(mu);
        if (exact) {
            const auto& sol = r.solution;
            r.err_x_sup = sup_error([&](double t) { return reconstruct(sol, *mats, t).first; }, exact->x);
            r.err_u_sup = sup_error([&](double t) { return reconstruct(sol, *mats, t).second; }, exact->u);
        }
        report.cases.push_back(std::move(r));
        exacts.push_back(std::move(exact));
        all_mats.push_back(std::move(mats));
    }

    std::filesystem::create_directories(config.out_dir);
    const std::string tag = std::string(to_string(basis));
    const bool every_exact = std::all_of(exacts.begin(), exacts.end(), [](const auto& e) { return e.has_value(); });

    if (config.emit.tables) {
        auto costs = open_output(config.out_dir / "costs.csv", report.files);
        costs << "mu,basis,k,M,m_hat,J\n";
        for (const auto& r : report.cases) {
            costs << format_number(r.mu) << ',' << tag << ',' << k << ',' << M << ',' << r.solution.params.m_hat()
                  << ',' << format_number(r.solution.J_value) << '\n';
        }

        auto diag = open_output(config.out_dir / "diagnostics.csv", report.files);
        diag << "mu,basis,J,J_requadrature,cost_discrepancy,constraint_residual,stationarity_residual,"
                "dynamics_defect,kkt_condition,cond_D";
        diag << (every_exact ? ",err_x_sup,err_u_sup\n" : "\n");
        for (const auto& r : report.cases) {
            const auto& s = r.solution;
            diag << format_number(r.mu) << ',' << tag << ',' << format_number(s.J_value) << ','
                 << format_number(s.J_requadrature) << ',' << format_number(s.residuals.cost_discrepancy) << ','
                 << format_number(s.residuals.constraint) << ',' << format_number(s.residuals.stationarity) << ','
                 << format_number(s.residuals.dynamics_defect) << ',' << format_number(s.kkt_condition) << ','
                 << format_number(r.cond_D);
            if (every_exact) {
                diag << ',' << format_number(*r.err_x_sup) << ',' << format_number(*r.err_u_sup);
            }
            diag << '\n';
        }
    }

    for (std::size_t i = 0; i < report.cases.size(); ++i) {
        const auto& r = report.cases[i];
        const auto& mats = *all_mats[i];
        const auto& exact = exacts[i];
        const std::string mu_tag = "mu" + format_number(r.mu);

        if (config.emit.tables) {
            auto traj = open_output(config.out_dir / ("trajectory_" + mu_tag + ".csv"), report.files);
            traj << (exact ? "zeta,x,u,exact_x,exact_u,err_x,err_u\n" : "zeta,x,u\n");
            for (int j = 1; j <= kTablePoints; ++j) {
                const double z = j / 10.0;
                const auto [x, u] = reconstruct(r.solution, mats, z);
                traj << format_number(z) << ',' << format_number(x) << ',' << format_number(u);
                if (exact) {
                    const double ex = exact->x(z);
                    const double eu = exact->u(z);
                    traj << ',' << format_number(ex) << ',' << format_number(eu) << ','
                         << format_number(std::abs(x - ex)) << ',' << format_number(std::abs(u - eu));
                }
                traj << '\n';
            }
        }
        if (config.emit.plotdata) {
            auto plot = open_output(config.out_dir / ("plot_" + mu_tag + ".dat"), report.files);
            plot << (exact ? "# zeta x u exact_x exact_u\n" : "# zeta x u\n");
            for (int j = 0; j < kPlotPoints; ++j) {
                const double z = static_cast<double>(j) / (kPlotPoints - 1);
                const auto [x, u] = reconstruct(r.solution, mats, z);
                plot << format_number(z) << ' ' << format_number(x) << ' ' << format_number(u);
                if (exact) {
                    plot << ' ' << format_number(exact->x(z)) << ' ' << format_number(exact->u(z));
                }
                plot << '\n';
            }
        }
        if (config.emit.matrices) {
            write_matrix(config.out_dir / ("D_" + mu_tag + ".csv"), mats.D(), report.files);
            write_matrix(config.out_dir / ("P1_" + mu_tag + ".csv"), mats.P1(), report.files);
            write_matrix(config.out_dir / ("Pmu_" + mu_tag + ".csv"), mats.Pmu(), report.files);
        }
    }
    return report;
}

RunReport run_example(int id, const RunConfig& config) {
    return run_case(example_case(id), config);
}

RunReport run_problem_file(const std::filesystem::path& path, const RunConfig& config) {
    const ProblemSpec spec = parse_problem_file(path);
    return run_case(problem_case(spec, path.stem().string()), config, &spec);
}

}  // namespace ftw
