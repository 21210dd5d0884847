#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "plot.hpp"
#include "rtquad/brownian.hpp"
#include "rtquad/csv.hpp"
#include "rtquad/integrands.hpp"
#include "rtquad/quadrature.hpp"

namespace rtquad::cli {

namespace {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Accepts "2^-k", "2^{-k}" or a decimal power of two below 1; returns k.
int parse_dyadic_exponent(const std::string& text) {
    std::string s;
    for (char c : text) {
        if (c != '{' && c != '}' && c != ' ') {
            s.push_back(c);
        }
    }
    if (s.rfind("2^", 0) == 0) {
        const std::string rest = s.substr(2);
        std::size_t used = 0;
        int e = 0;
        try {
            e = std::stoi(rest, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("--h-ref: cannot parse '" + text + "'");
        }
        if (used != rest.size() || e >= 0) {
            throw std::invalid_argument("--h-ref must be a negative power of two, got '" + text +
                                        "'");
        }
        return -e;
    }
    double value = 0.0;
    try {
        std::size_t used = 0;
        value = std::stod(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument(text);
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("--h-ref: cannot parse '" + text + "'");
    }
    int e = 0;
    const double mantissa = std::frexp(value, &e);
    if (!(value > 0.0 && value < 1.0) || mantissa != 0.5) {
        throw std::invalid_argument("--h-ref must be a negative power of two, got '" + text + "'");
    }
    return 1 - e;
}

std::string join(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += (i ? "," : "") + format_double(values[i]);
    }
    return out;
}

std::string join(const std::vector<int>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += (i ? "," : "") + std::to_string(values[i]);
    }
    return out;
}

const std::map<std::string, std::string> integrand_names{
    {"power", "power"}, {"constant", "constant"}, {"affine", "affine"}, {"zero", "zero"}};

void add_common(CLI::App& sub, RunConfig& c) {
    sub.add_option("--seed", c.seed, "Master seed (all randomness derives from it)");
    sub.add_option("--out", c.output_dir, "Output directory");
}

void add_integrand(CLI::App& sub, RunConfig& c) {
    sub.add_option("--integrand", c.integrand, "power | constant | affine | zero")
        ->transform(CLI::IsMember(integrand_names));
    sub.add_option("--gamma", c.gamma, "Exponent of t^gamma");
    sub.add_option("--c", c.constant, "Constant value / affine intercept");
    sub.add_option("--slope", c.slope, "Affine slope");
    sub.add_option("--T", c.total_time, "Horizon T")->check(CLI::PositiveNumber);
}

Integrand build_integrand(const RunConfig& c) {
    if (c.integrand == "power") {
        return power_integrand(c.gamma, c.total_time);
    }
    if (c.integrand == "constant") {
        return constant_integrand(c.constant, c.total_time);
    }
    if (c.integrand == "affine") {
        return affine_integrand(c.constant, c.slope, c.total_time);
    }
    if (c.integrand == "zero") {
        return zero_integrand(c.total_time);
    }
    throw std::invalid_argument("unknown integrand '" + c.integrand + "'");
}

std::filesystem::path prepare_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory '" + dir + "'");
    }
    return dir;
}

// Writes through `body` into dir/name; any stream failure is an IoError.
template <class Body>
void write_file(const std::filesystem::path& dir, const std::string& name, Body&& body) {
    const auto path = dir / name;
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    body(file);
    file.flush();
    if (!file) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

std::vector<std::string_view> error_header() {
    return {"gamma", "rule", "metric", "h", "N", "M", "error", "std_error", "wall_time_s"};
}

std::vector<std::string_view> order_header() {
    return {"gamma", "rule", "metric", "fitted_order", "intercept", "residual"};
}

void write_ladder(CsvWriter& csv, const std::string& gamma, const ConvergenceReport& report) {
    const auto& ladder = report.ladder;
    for (const auto& row : ladder.rows()) {
        csv.field(gamma)
            .field(to_string(ladder.rule()))
            .field(ladder.metric().name())
            .field(row.step)
            .field(row.intervals)
            .field(row.replications)
            .field(row.error)
            .field(row.std_error)
            .field(row.wall_time);
        csv.end_row();
    }
}

void write_order(CsvWriter& csv, const std::string& gamma, const ConvergenceReport& report) {
    csv.field(gamma)
        .field(to_string(report.ladder.rule()))
        .field(report.ladder.metric().name())
        .field(report.fitted_order)
        .field(report.intercept)
        .field(report.residual);
    csv.end_row();
}

std::vector<double> log2_steps(const ConvergenceReport& r) {
    std::vector<double> out;
    for (const auto& row : r.ladder.rows()) {
        out.push_back(std::log2(row.step));
    }
    return out;
}

std::vector<double> log2_errors(const ConvergenceReport& r) {
    std::vector<double> out;
    for (const auto& row : r.ladder.rows()) {
        out.push_back(row.error > 0.0 ? std::log2(row.error)
                                      : -std::numeric_limits<double>::infinity());
    }
    return out;
}

std::vector<double> guide(const std::vector<double>& x, double x0, double y0, double slope) {
    std::vector<double> out;
    for (double v : x) {
        out.push_back(y0 + slope * (v - x0));
    }
    return out;
}

std::vector<double> log2_times(const std::vector<TimingRow>& rows, Rule rule,
                               std::optional<double> gamma) {
    std::vector<double> out;
    for (const auto& r : rows) {
        if (r.rule == rule && r.gamma == gamma) {
            out.push_back(r.wall_time > 0.0 ? std::log2(r.wall_time)
                                            : -std::numeric_limits<double>::infinity());
        }
    }
    return out;
}

void print_report(std::ostream& out, const std::string& tag, const ConvergenceReport& r) {
    out << "  " << tag << " " << to_string(r.ladder.rule()) << " " << r.ladder.metric().name()
        << ": order " << format_double(r.fitted_order) << " (residual "
        << format_double(r.residual) << ")\n";
    for (const auto& w : r.warnings) {
        out << "    warning: " << w << "\n";
    }
}

} // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
    RunConfig c;
    if (const char* env = std::getenv(output_dir_env); env != nullptr && *env != '\0') {
        c.output_dir = env;
    }
    std::string h_ref;
    bool no_timing = false;

    CLI::App app{"Classical and randomised trapezoidal quadrature toolkit", "rtquad"};
    app.require_subcommand(1);

    auto* eval = app.add_subcommand("eval", "Evaluate one quadrature rule on a built-in integrand");
    add_common(*eval, c);
    add_integrand(*eval, c);
    eval->add_option("--rule", c.rule, "ctq | rtq")->check(CLI::IsMember({"ctq", "rtq"}));
    eval->add_option("--N", c.intervals, "Number of intervals")->check(CLI::PositiveNumber);
    eval->add_flag("--shared-nodes", c.shared_nodes, "CTQ with N+1 evaluations");

    auto* ex1 = app.add_subcommand("example1", "Convergence study for g(t) = t^gamma");
    add_common(*ex1, c);
    ex1->add_option("--gammas", c.gammas, "Comma-separated exponents")->delimiter(',');
    ex1->add_option("--exponents", c.exponents, "Step exponents i (h = 2^-i)")->delimiter(',');
    ex1->add_option("--M", c.replications, "Monte Carlo replications");
    ex1->add_option("--p", c.p, "L^p exponent");
    ex1->add_option("--T", c.total_time, "Horizon T")->check(CLI::PositiveNumber);
    ex1->add_flag("--svg", c.svg, "Also render SVG plots");
    ex1->add_flag("--no-timing", no_timing, "Skip timing (wall_time columns become 0)");

    auto* ex2 = app.add_subcommand("example2", "Pathwise study for the integrated Brownian path");
    add_common(*ex2, c);
    ex2->add_option("--h-ref", h_ref, "Fine step, e.g. 2^-14");
    ex2->add_option("--exponents", c.exponents, "Coarse step exponents")->delimiter(',');
    ex2->add_flag("--dump-path", c.dump_path, "Write path.csv");
    ex2->add_flag("--svg", c.svg, "Also render SVG plots");
    ex2->add_flag("--no-timing", no_timing, "Skip timing (wall_time columns become 0)");

    auto* sob = app.add_subcommand("sobolev", "Sobolev-Slobodeckij norm diagnostic");
    add_common(*sob, c);
    add_integrand(*sob, c);
    sob->add_option("--sigma", c.sigma, "Smoothness sigma in [1, 2)");
    sob->add_option("--p", c.p, "Integrability p >= 2");
    sob->add_option("--cells", c.cells, "Midpoint cells per axis");
    sob->add_option("--delta", c.cutoff, "Diagonal cutoff (0 = 2T/cells)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        throw HelpRequested(sub->help());
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError& e) {
        throw std::invalid_argument(e.what());
    }

    c.subcommand = app.get_subcommands().front()->get_name();
    c.timing = !no_timing;
    if (c.subcommand == "example2" && !h_ref.empty()) {
        c.fine_exponent = parse_dyadic_exponent(h_ref);
    }
    if (c.subcommand == "example1" || c.subcommand == "example2") {
        // Keep the canonical textual form: sorted, distinct exponents.
        std::sort(c.exponents.begin(), c.exponents.end());
        c.exponents.erase(std::unique(c.exponents.begin(), c.exponents.end()), c.exponents.end());
    }
    return c;
}

std::vector<std::string> to_args(const RunConfig& c) {
    std::vector<std::string> a{c.subcommand, "--seed", std::to_string(c.seed), "--out",
                               c.output_dir};
    auto integrand_args = [&] {
        a.insert(a.end(), {"--integrand", c.integrand, "--gamma", format_double(c.gamma), "--c",
                           format_double(c.constant), "--slope", format_double(c.slope), "--T",
                           format_double(c.total_time)});
    };
    if (c.subcommand == "eval") {
        integrand_args();
        a.insert(a.end(), {"--rule", c.rule, "--N", std::to_string(c.intervals)});
        if (c.shared_nodes) {
            a.emplace_back("--shared-nodes");
        }
    } else if (c.subcommand == "example1") {
        a.insert(a.end(), {"--gammas", join(c.gammas), "--exponents", join(c.exponents), "--M",
                           std::to_string(c.replications), "--p", format_double(c.p), "--T",
                           format_double(c.total_time)});
    } else if (c.subcommand == "example2") {
        a.insert(a.end(), {"--h-ref", "2^-" + std::to_string(c.fine_exponent), "--exponents",
                           join(c.exponents)});
        if (c.dump_path) {
            a.emplace_back("--dump-path");
        }
    } else if (c.subcommand == "sobolev") {
        integrand_args();
        a.insert(a.end(), {"--sigma", format_double(c.sigma), "--p", format_double(c.p),
                           "--cells", std::to_string(c.cells), "--delta", format_double(c.cutoff)});
    }
    if (c.subcommand == "example1" || c.subcommand == "example2") {
        if (c.svg) {
            a.emplace_back("--svg");
        }
        if (!c.timing) {
            a.emplace_back("--no-timing");
        }
    }
    return a;
}

int cmd_eval(const RunConfig& c, std::ostream& out) {
    const auto g = build_integrand(c);
    const auto part = make_partition(c.total_time, c.intervals);
    QuadratureValue q;
    if (c.rule == "ctq") {
        q = ctq(g, part, c.shared_nodes ? CtqForm::shared_nodes : CtqForm::literal);
    } else {
        RngStream stream(c.seed, 0);
        q = rtq(g, part, sample_tau_sequence(stream, part.intervals()));
    }
    for (const auto& w : g.warnings) {
        out << "warning: " << w << "\n";
    }
    out << "integrand: " << g.label << "\n";
    out << "rule: " << to_string(q.rule) << "\n";
    if (q.rule == Rule::rtq) {
        out << "seed: " << c.seed << "\n";
    }
    out << "N: " << part.intervals() << "\n";
    out << "h: " << format_double(part.step()) << "\n";
    out << "evaluations: " << q.evaluations << "\n";
    out << "value: " << format_double(q.scalar()) << "\n";
    if (g.exact_integral) {
        out << "exact: " << format_double(g.exact_integral->at(0)) << "\n";
        out << "abs_error: " << format_double(std::abs(q.scalar() - g.exact_integral->at(0)))
            << "\n";
    }
    return exit_ok;
}

int cmd_example1(const RunConfig& c, std::ostream& out) {
    const auto dir = prepare_dir(c.output_dir);
    Example1Config config;
    config.gammas = c.gammas;
    config.exponents = c.exponents;
    config.replications = c.replications;
    config.p = c.p;
    config.total_time = c.total_time;
    config.seed = c.seed;
    config.measure_time = c.timing;
    const auto result = run_example1(config);

    write_file(dir, "errors.csv", [&](std::ostream& f) {
        CsvWriter csv(f, error_header());
        for (const auto& pg : result.per_gamma) {
            const auto gamma = format_double(pg.gamma);
            write_ladder(csv, gamma, pg.ctq_absolute);
            write_ladder(csv, gamma, pg.rtq_lp);
            write_ladder(csv, gamma, pg.rtq_pathwise);
        }
    });
    write_file(dir, "orders.csv", [&](std::ostream& f) {
        CsvWriter csv(f, order_header());
        for (const auto& pg : result.per_gamma) {
            const auto gamma = format_double(pg.gamma);
            write_order(csv, gamma, pg.ctq_absolute);
            write_order(csv, gamma, pg.rtq_lp);
            write_order(csv, gamma, pg.rtq_pathwise);
        }
    });
    write_file(dir, "timing.csv", [&](std::ostream& f) {
        CsvWriter csv(f, {"gamma", "rule", "h_exponent", "h", "N", "wall_time_s"});
        for (const auto& t : result.timing) {
            csv.field(format_double(*t.gamma))
                .field(to_string(t.rule))
                .field(t.exponent)
                .field(t.step)
                .field(t.intervals)
                .field(t.wall_time);
            csv.end_row();
        }
    });

    // One error panel per gamma plus a timing panel (gamma = 3/2 when present).
    std::string script = "set terminal pngcairo size 1200,900\nset output 'example1.png'\n"
                         "set multiplot layout 2,2\nset key left top\n"
                         "set xlabel 'log2 h'\n";
    for (const auto& pg : result.per_gamma) {
        const auto gamma = format_double(pg.gamma);
        const auto x = log2_steps(pg.ctq_absolute);
        const auto ctq_y = log2_errors(pg.ctq_absolute);
        const std::vector<std::vector<double>> columns{
            x,
            ctq_y,
            log2_errors(pg.rtq_lp),
            log2_errors(pg.rtq_pathwise),
            guide(x, x.front(), ctq_y.front() - 1.0, 2.0),
            guide(x, x.front(), ctq_y.front() - 1.0, 2.5)};
        const std::string name = "fig_errors_gamma_" + gamma;
        write_file(dir, name + ".dat", [&](std::ostream& f) {
            plot::write_columns(f,
                                {"log2_h", "ctq_absolute", "rtq_L2", "rtq_pathwise",
                                 "guide_slope_2", "guide_slope_2.5"},
                                columns);
        });
        script += "set title 'gamma = " + gamma + "'\nset ylabel 'log2 error'\nplot '" + name +
                  ".dat' u 1:2 w lp t 'CTQ', '' u 1:3 w lp t 'RTQ (L2)', '' u 1:4 w lp t 'RTQ "
                  "(pathwise)', '' u 1:5 w l dt 2 t 'slope 2', '' u 1:6 w l dt 3 t 'slope 2.5'\n";
        if (c.svg) {
            write_file(dir, name + ".svg", [&](std::ostream& f) {
                plot::write_svg(f, "gamma = " + gamma, "log2 h", "log2 error",
                                {{"CTQ", x, columns[1]},
                                 {"RTQ (L2)", x, columns[2]},
                                 {"RTQ (pathwise)", x, columns[3]},
                                 {"slope 2", x, columns[4], true},
                                 {"slope 2.5", x, columns[5], true}});
            });
        }
    }
    if (!result.per_gamma.empty()) {
        auto it = std::find_if(result.per_gamma.begin(), result.per_gamma.end(),
                               [](const auto& pg) { return pg.gamma == 1.5; });
        const auto& pg = it != result.per_gamma.end() ? *it : result.per_gamma.front();
        const auto gamma = format_double(pg.gamma);
        const auto x = log2_steps(pg.ctq_absolute);
        const auto ctq_t = log2_times(result.timing, Rule::ctq, pg.gamma);
        const auto rtq_t = log2_times(result.timing, Rule::rtq, pg.gamma);
        const std::string name = "fig_timing_gamma_" + gamma;
        write_file(dir, name + ".dat", [&](std::ostream& f) {
            plot::write_columns(f, {"log2_h", "log2_ctq_seconds", "log2_rtq_seconds"},
                                {x, ctq_t, rtq_t});
        });
        script += "set title 'time cost, gamma = " + gamma + "'\nset ylabel 'log2 seconds'\nplot '" +
                  name + ".dat' u 1:2 w lp t 'CTQ', '' u 1:3 w lp t 'RTQ'\n";
        if (c.svg) {
            write_file(dir, name + ".svg", [&](std::ostream& f) {
                plot::write_svg(f, "time cost, gamma = " + gamma, "log2 h", "log2 seconds",
                                {{"CTQ", x, ctq_t}, {"RTQ", x, rtq_t}});
            });
        }
    }
    script += "unset multiplot\n";
    write_file(dir, "plot_example1.gp", [&](std::ostream& f) { f << script; });

    out << "example1: seed " << c.seed << ", M = " << c.replications << ", p = "
        << format_double(c.p) << "\n";
    for (const auto& pg : result.per_gamma) {
        const auto gamma = "gamma=" + format_double(pg.gamma);
        print_report(out, gamma, pg.ctq_absolute);
        print_report(out, gamma, pg.rtq_lp);
        print_report(out, gamma, pg.rtq_pathwise);
    }
    out << "wrote " << dir.string() << "/{errors,orders,timing}.csv\n";
    return exit_ok;
}

int cmd_example2(const RunConfig& c, std::ostream& out) {
    const auto dir = prepare_dir(c.output_dir);
    Example2Config config;
    config.fine_exponent = c.fine_exponent;
    config.exponents = c.exponents;
    config.seed = c.seed;
    config.measure_time = c.timing;
    const auto result = run_example2(config);

    if (c.dump_path) {
        write_file(dir, "path.csv", [&](std::ostream& f) { write_path_csv(f, result.path); });
    }
    write_file(dir, "errors.csv", [&](std::ostream& f) {
        CsvWriter csv(f, error_header());
        write_ladder(csv, "", result.ctq_pathwise);
        write_ladder(csv, "", result.rtq_pathwise);
    });
    write_file(dir, "orders.csv", [&](std::ostream& f) {
        CsvWriter csv(f, order_header());
        write_order(csv, "", result.ctq_pathwise);
        write_order(csv, "", result.rtq_pathwise);
    });
    write_file(dir, "timing.csv", [&](std::ostream& f) {
        CsvWriter csv(f, {"rule", "h_exponent", "h", "N", "wall_time_s"});
        for (const auto& t : result.timing) {
            csv.field(to_string(t.rule)).field(t.exponent).field(t.step).field(t.intervals).field(
                t.wall_time);
            csv.end_row();
        }
    });
    write_file(dir, "mirror.csv", [&](std::ostream& f) {
        CsvWriter csv(f, {"h_exponent", "N", "mirror_exact", "mirror_bridge"});
        for (const auto& m : result.mirror) {
            csv.field(m.exponent).field(m.intervals).field(m.exact).field(m.bridged);
            csv.end_row();
        }
    });

    const auto x = log2_steps(result.ctq_pathwise);
    const auto ctq_y = log2_errors(result.ctq_pathwise);
    const auto rtq_y = log2_errors(result.rtq_pathwise);
    const auto ctq_t = log2_times(result.timing, Rule::ctq, std::nullopt);
    const auto rtq_t = log2_times(result.timing, Rule::rtq, std::nullopt);
    write_file(dir, "fig_errors_gB.dat", [&](std::ostream& f) {
        plot::write_columns(f, {"log2_h", "ctq_pathwise", "rtq_pathwise"}, {x, ctq_y, rtq_y});
    });
    write_file(dir, "fig_timing_gB.dat", [&](std::ostream& f) {
        plot::write_columns(f, {"log2_h", "log2_ctq_seconds", "log2_rtq_seconds"},
                            {x, ctq_t, rtq_t});
    });
    write_file(dir, "plot_example2.gp", [&](std::ostream& f) {
        f << "set terminal pngcairo size 1200,450\nset output 'example2.png'\n"
             "set multiplot layout 1,2\nset key left top\nset xlabel 'log2 h'\n"
             "set title 'error vs reference'\nset ylabel 'log2 error'\n"
             "plot 'fig_errors_gB.dat' u 1:2 w lp t 'CTQ', '' u 1:3 w lp t 'RTQ'\n"
             "set title 'time cost'\nset ylabel 'log2 seconds'\n"
             "plot 'fig_timing_gB.dat' u 1:2 w lp t 'CTQ', '' u 1:3 w lp t 'RTQ'\n"
             "unset multiplot\n";
    });
    if (c.svg) {
        write_file(dir, "fig_errors_gB.svg", [&](std::ostream& f) {
            plot::write_svg(f, "g_B: error vs reference", "log2 h", "log2 error",
                            {{"CTQ", x, ctq_y}, {"RTQ", x, rtq_y}});
        });
        write_file(dir, "fig_timing_gB.svg", [&](std::ostream& f) {
            plot::write_svg(f, "g_B: time cost", "log2 h", "log2 seconds",
                            {{"CTQ", x, ctq_t}, {"RTQ", x, rtq_t}});
        });
    }

    out << "example2: seed " << c.seed << ", h_ref = 2^-" << c.fine_exponent
        << ", reference = " << format_double(result.reference) << "\n";
    print_report(out, "g_B", result.ctq_pathwise);
    print_report(out, "g_B", result.rtq_pathwise);
    out << "wrote " << dir.string() << "/{errors,orders,timing,mirror}.csv\n";
    return exit_ok;
}

int cmd_sobolev(const RunConfig& c, std::ostream& out) {
    const auto g = build_integrand(c);
    for (const auto& w : g.warnings) {
        out << "warning: " << w << "\n";
    }
    const auto est = sobolev_seminorm(g, c.total_time, c.sigma, c.p, c.cells, c.cutoff);
    out << "integrand: " << g.label << "\n";
    out << "sigma: " << format_double(est.sigma) << "\np: " << format_double(est.p)
        << "\ncells: " << est.cells << "\ndelta: " << format_double(est.cutoff) << "\n";
    out << "term_value: " << format_double(est.value_term) << "\n";
    out << "term_derivative: " << format_double(est.derivative_term) << "\n";
    out << "term_seminorm: " << format_double(est.seminorm_term) << "\n";
    out << "norm_estimate: " << format_double(est.value) << "\n";

    // Refinement study: double the cells twice, shrinking delta with them.
    std::vector<SobolevEstimate> steps{est};
    out << "refinement (cells, delta, estimate, relative change):\n";
    out << "  " << est.cells << " " << format_double(est.cutoff) << " " << format_double(est.value)
        << " -\n";
    for (int r = 1; r <= 2; ++r) {
        const std::size_t cells = c.cells << r;
        const double cutoff = est.cutoff / static_cast<double>(1 << r);
        steps.push_back(sobolev_seminorm(g, c.total_time, c.sigma, c.p, cells, cutoff));
        const double previous = steps[steps.size() - 2].value;
        const double change = previous > 0.0 ? (steps.back().value - previous) / previous : 0.0;
        out << "  " << cells << " " << format_double(cutoff) << " "
            << format_double(steps.back().value) << " " << format_double(change) << "\n";
    }
    // Halving delta scales the near-diagonal contribution by a constant ratio:
    // below 1 the increments sum to a finite limit, at or above 1 they do not.
    const double first = steps[1].seminorm_term - steps[0].seminorm_term;
    const double second = steps[2].seminorm_term - steps[1].seminorm_term;
    const bool growing = steps[2].value > steps[1].value * 1.01;
    out << "divergence indicator: " << (growing ? "growing under delta refinement" : "stable")
        << "\n";
    if (first > 0.0 && second > 0.0) {
        const double ratio = second / first;
        out << "increment ratio: " << format_double(ratio) << " ("
            << (ratio >= 1.0 ? "consistent with divergence" : "consistent with a finite limit")
            << ")\n";
    }
    return exit_ok;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig config;
    try {
        config = parse_args(args);
    } catch (const HelpRequested& e) {
        out << e.what();
        return exit_ok;
    } catch (const std::invalid_argument& e) {
        err << e.what() << "\n";
        return exit_usage;
    }
    try {
        if (config.subcommand == "eval") {
            return cmd_eval(config, out);
        }
        if (config.subcommand == "example1") {
            return cmd_example1(config, out);
        }
        if (config.subcommand == "example2") {
            return cmd_example2(config, out);
        }
        return cmd_sobolev(config, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const UnsupportedOperation& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
}

} // namespace rtquad::cli
