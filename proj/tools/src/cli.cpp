#include "cli.hpp"

#include "config.hpp"
#include "report.hpp"

#include "mzlaw/brackets.hpp"
#include "mzlaw/chaining.hpp"
#include "mzlaw/rng.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace mzlaw::cli {

namespace fs = std::filesystem;

namespace {

struct Verdict {
    std::string name;
    bool pass;
    std::string detail;
};

struct Outcome {
    std::vector<Verdict> verdicts;
    json report = json::object();
    std::string csv;
    std::string svg;

    void add(std::string name, bool pass, std::string detail) {
        verdicts.push_back({std::move(name), pass, std::move(detail)});
    }
    [[nodiscard]] bool all_pass() const {
        for (const auto& v : verdicts) {
            if (!v.pass) {
                return false;
            }
        }
        return true;
    }
};

std::string fmt(double v, int digits = 6) {
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

std::string interval(const std::optional<OpenInterval>& w) {
    return w ? "(" + fmt(w->lo) + ", " + fmt(w->hi) + ")" : "empty";
}

json interval_json(const std::optional<OpenInterval>& w) {
    return w ? json::array({number(w->lo), number(w->hi)}) : json(nullptr);
}

// The distribution under study: `model` if given, else the generator marginal.
DistributionModel study_model(const json& cfg) {
    if (cfg.contains("model")) {
        return parse_model(cfg.at("model"), "model");
    }
    return parse_generator(require(cfg, "generator", ""), "generator").marginal();
}

void add_expected_slope(Outcome& o, const json& cfg, double slope) {
    if (!cfg.contains("expected_slope")) {
        return;
    }
    const auto range = get_numbers(cfg, "expected_slope", "", {});
    if (range.size() != 2 || !(range[0] <= range[1])) {
        throw ConfigError("expected_slope: expected [lo, hi] with lo <= hi");
    }
    o.add("slope_in_range", slope >= range[0] && slope <= range[1],
          fmt(slope) + " in [" + fmt(range[0]) + ", " + fmt(range[1]) + "]");
}

void add_rate_verdicts(Outcome& o, const RateReport& rep) {
    for (const auto& [name, ok] : rep.verdicts) {
        o.add(name, ok, name == "slope_exceeds_r" ? "slope " + fmt(rep.fitted_slope) + " vs r = " + fmt(rep.r_exponent)
                                                  : "median n^r D_n along the grid");
    }
}

void print_rate_table(std::ostream& out, const RateReport& rep) {
    out << std::setw(10) << "n" << std::setw(16) << "median D_n" << std::setw(16) << "median n^r D_n"
        << std::setw(14) << "q10" << std::setw(14) << "q90" << "\n";
    for (const auto& p : rep.per_n) {
        out << std::setw(10) << p.n << std::setw(16) << fmt(p.raw.median) << std::setw(16)
            << fmt(p.scaled.median) << std::setw(14) << fmt(p.raw.q10) << std::setw(14) << fmt(p.raw.q90)
            << "\n";
    }
    out << "fitted slope " << fmt(rep.fitted_slope) << " (stderr " << fmt(rep.slope_stderr) << ")\n";
    for (const auto& w : rep.warnings) {
        out << "warning: " << w << "\n";
    }
}

Outcome run_conditions(const json& cfg, std::ostream& out) {
    Outcome o;
    const DistributionModel model = study_model(cfg);
    const WeightFunction weight =
        cfg.contains("weight") ? parse_weight(cfg.at("weight"), model, "weight") : WeightFunction::uniform();
    const double r = get_number(cfg, "r", "", 0.0);
    const json section = cfg.value("conditions", json::object());

    const auto integ = theorem1_integrability(model, weight, r);
    o.add("integrability", integ.holds, "int phi^(1/(1-r)) dF = " + fmt(integ.integral) + "; " + integ.certificate);
    o.report["integrability"] = {{"holds", integ.holds}, {"integral", number(integ.integral)},
                                 {"certificate", integ.certificate}};

    if (section.contains("mixing")) {
        const auto rate = parse_mixing(section.at("mixing"), "conditions.mixing");
        const auto t3 = condition_T3_check(rate, phi_tail_inverse(model, weight));
        o.add("condition_T3", t3.holds, "integral " + fmt(t3.integral) + "; " + t3.certificate);
        o.report["condition_T3"] = {{"holds", t3.holds}, {"integral", number(t3.integral)},
                                    {"certificate", t3.certificate}};
    }

    const double default_alpha =
        model.kind == DistributionKind::ParetoTwoSided ? model.tail_alpha : std::numeric_limits<double>::infinity();
    const double alpha = get_number(section, "alpha", "conditions", default_alpha);
    const double beta_prime = get_number(section, "beta_prime", "conditions", 0.0);
    const auto fw = feasibility_window(alpha, beta_prime, r);
    out << "feasible gamma window " << interval(fw.rate_window) << ", without rate " << interval(fw.slln_window)
        << "\n";
    o.add("feasibility_window", fw.rate_window.has_value(),
          "gamma in " + interval(fw.rate_window) + " for alpha=" + fmt(alpha) + ", beta'=" + fmt(beta_prime) +
              ", r=" + fmt(r));
    o.report["feasibility"] = {{"alpha", number(alpha)},
                               {"beta_prime", beta_prime},
                               {"r", r},
                               {"rate_window", interval_json(fw.rate_window)},
                               {"slln_window", interval_json(fw.slln_window)}};
    return o;
}

Outcome run_rate(const json& cfg, std::ostream& out) {
    Outcome o;
    const ExperimentConfig ec = parse_experiment(cfg);
    const RateReport rep = run_experiment(ec);
    print_rate_table(out, rep);
    add_rate_verdicts(o, rep);
    add_expected_slope(o, cfg, rep.fitted_slope);
    o.report = rate_json(rep);
    o.csv = csv_header();
    append_rate_csv(o.csv, rep);
    o.svg = rate_svg({{"D_n", &rep}});
    return o;
}

Outcome run_holder(const json& cfg, std::ostream& out) {
    Outcome o;
    const ExperimentConfig ec = parse_experiment(cfg);
    const double gamma = get_number(require(cfg, "holder", ""), "gamma", "holder");
    HolderReport rep;
    try {
        rep = holder_bound_experiment(ec, gamma);
    } catch (const ConditionViolation& e) {
        out << "conditions not met: " << e.what() << "\n";
        o.add("conditions_hold", false, e.what());
        o.report["error"] = e.what();
        return o;
    }
    o.add("conditions_hold", true, "C = " + fmt(rep.constant, 12));
    o.add("bound_holds", rep.fraction == 1.0,
          "fraction " + fmt(rep.fraction) + " over " + std::to_string(rep.checks) + " checks");
    o.csv = csv_header();
    json per_n = json::array();
    for (std::size_t i = 0; i < rep.n_grid.size(); ++i) {
        o.csv += std::to_string(rep.n_grid[i]) + ",fraction," + fmt(rep.fraction_per_n[i], 17) + ",all\n";
        per_n.push_back({{"n", rep.n_grid[i]}, {"fraction", number(rep.fraction_per_n[i])}});
        out << "n = " << rep.n_grid[i] << ": fraction " << fmt(rep.fraction_per_n[i]) << "\n";
    }
    out << "C = " << fmt(rep.constant, 12) << ", min slack " << fmt(rep.min_slack) << "\n";
    o.report["constant"] = number(rep.constant);
    o.report["fraction"] = number(rep.fraction);
    o.report["checks"] = rep.checks;
    o.report["per_n"] = per_n;
    o.report["slack"] = summary_json(rep.slack);
    o.report["min_slack"] = number(rep.min_slack);
    return o;
}

Outcome run_brackets(const json& cfg, std::ostream& out) {
    Outcome o;
    const DistributionModel model = study_model(cfg);
    const WeightFunction phi =
        cfg.contains("weight") ? parse_weight(cfg.at("weight"), model, "weight") : WeightFunction::uniform();
    const json section = cfg.value("brackets", json::object());
    const double epsilon = get_number(section, "epsilon", "brackets", 0.05);
    const std::size_t n = get_count(section, "n", "brackets", 1000);
    const std::size_t reps = get_count(section, "replications", "brackets", 100);
    const std::size_t grid_size = get_count(section, "s_grid", "brackets", 2000);
    const std::size_t arg_points = get_count(section, "argument_points", "brackets", 1000);
    const std::uint64_t seed = get_count(cfg, "seed", "", 0);
    if (!(epsilon > 0.0) || n == 0 || reps == 0 || grid_size == 0) {
        throw ConfigError("brackets: epsilon, n, replications and s_grid must be positive");
    }

    std::optional<BracketWeight> w;
    try {
        w.emplace(bracket_weight(model, phi));
    } catch (const ConditionViolation& e) {
        o.add("weight_integrable", false, e.what());
        return o;
    }
    const auto partition = build_partition(*w, epsilon);
    std::vector<double> s_grid;
    for (std::size_t i = 1; i <= grid_size; ++i) {
        s_grid.push_back(static_cast<double>(i) / static_cast<double>(grid_size));
    }
    for (std::size_t i = 1; i < partition.t_points.size(); ++i) {
        s_grid.push_back(partition.t_points[i]);
    }
    const auto v = verify_brackets(partition, *w, s_grid, arg_points);
    o.add("partition_verified", v.holds,
          std::to_string(partition.m) + " brackets, max size " + fmt(v.max_bracket_integral) +
              (v.holds ? "" : "; " + v.reason));
    out << partition.m << " brackets for epsilon = " << fmt(epsilon) << "\n";

    std::optional<DistributionModel> model_r;
    std::optional<WeightFunction> phi_r;
    std::optional<BracketPartition> partition_r;
    try {
        model_r = reflect_model(model);
        phi_r = reflect_weight(phi);
        partition_r = build_partition(bracket_weight(*model_r, *phi_r), epsilon);
    } catch (const std::invalid_argument& e) {
        out << "warning: positive side skipped: " << e.what() << "\n";
        o.report["warnings"] = json::array({std::string("positive side skipped: ") + e.what()});
    }
    std::size_t held = 0;
    double worst_gap = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < reps; ++k) {
        UniformStream stream(derive_seed(seed, k));
        std::vector<double> u(n);
        for (auto& x : u) {
            x = stream.next();
        }
        auto r = bracket_inequality_check(u, model, phi, partition);
        bool ok = r.holds;
        worst_gap = std::max(worst_gap, r.lhs - r.rhs);
        if (partition_r) {
            const auto ur = reflect_uniforms(u);
            const auto rr = bracket_inequality_check(ur, *model_r, *phi_r, *partition_r);
            ok = ok && rr.holds;
            worst_gap = std::max(worst_gap, rr.lhs - rr.rhs);
        }
        held += ok ? 1 : 0;
    }
    o.add("inequality_holds", held == reps,
          std::to_string(held) + "/" + std::to_string(reps) + " replications, max lhs - rhs " + fmt(worst_gap));
    json t_points = json::array();
    for (double t : partition.t_points) {
        t_points.push_back(number(t));
    }
    o.report["partition"] = {{"epsilon", epsilon},
                             {"m", partition.m},
                             {"t_points", t_points},
                             {"max_bracket_integral", number(v.max_bracket_integral)}};
    o.report["inequality"] = {{"replications", reps}, {"held", held}, {"n", n}, {"max_gap", number(worst_gap)}};
    return o;
}

Outcome run_chaining(const json& cfg, std::ostream& out) {
    Outcome o;
    const json section = cfg.value("chaining", json::object());
    const std::size_t length = get_count(section, "sequence_length", "chaining", 1024);
    const std::size_t sequences = get_count(section, "sequences", "chaining", 50);
    const std::size_t grid_m = get_count(section, "grid", "chaining", 100);
    const auto qs = get_numbers(section, "q", "chaining", {64, 256});
    const auto xs = get_numbers(section, "x", "chaining", {1, 2, 4});
    const std::size_t reps = get_count(section, "replications", "chaining", 2000);
    const std::uint64_t seed = get_count(cfg, "seed", "", 0);
    if (length == 0 || grid_m == 0 || reps == 0) {
        throw ConfigError("chaining: sequence_length, grid and replications must be positive");
    }

    const auto grid = uniform_threshold_grid(static_cast<std::int64_t>(grid_m));
    std::size_t violations = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < sequences; ++s) {
        UniformStream stream(derive_seed(seed, s));
        std::vector<double> u(length);
        for (auto& x : u) {
            x = stream.next();
        }
        for (std::size_t n = 1; n <= length; ++n) {
            const auto c = chaining_bound_check(u, n, grid);
            min_slack = std::min(min_slack, c.min_slack);
            violations += c.holds ? 0 : 1;
        }
    }
    o.add("chaining_bound", violations == 0,
          std::to_string(violations) + " violations over " + std::to_string(sequences) + " x " +
              std::to_string(length) + " prefixes, min slack " + fmt(min_slack));

    const auto iid = MixingRateModel::zero();
    bool rio_ok = true;
    json rows = json::array();
    o.csv = csv_header();
    for (double qd : qs) {
        if (!(qd >= 1.0) || qd != std::floor(qd)) {
            throw ConfigError("chaining.q: expected positive integers");
        }
        const auto q = static_cast<std::size_t>(qd);
        const auto freq = empirical_exceedance(q, xs, reps, seed);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double bound = rio_tail_bound(q, xs[i], iid);
            rio_ok = rio_ok && freq[i] <= bound;
            out << "q = " << q << ", x = " << fmt(xs[i]) << ": exceedance " << fmt(freq[i]) << " <= bound "
                << fmt(bound) << "\n";
            rows.push_back({{"q", q}, {"x", xs[i]}, {"frequency", number(freq[i])}, {"bound", number(bound)}});
            o.csv += std::to_string(q) + ",exceedance_x=" + fmt(xs[i]) + "," + fmt(freq[i], 17) + ",frequency\n";
            o.csv += std::to_string(q) + ",rio_bound_x=" + fmt(xs[i]) + "," + fmt(bound, 17) + ",bound\n";
        }
    }
    o.add("rio_bound", rio_ok, "empirical exceedance below the bound for every (q, x)");
    o.report["chaining"] = {{"violations", violations}, {"min_slack", number(min_slack)}};
    o.report["rio"] = rows;
    return o;
}

Outcome run_riskcheck(const json& cfg, std::ostream& out) {
    Outcome o;
    const json section = cfg.value("riskcheck", json::object());
    const auto steps = get_count(section, "x_steps", "riskcheck", 10);
    const auto ps = get_numbers(section, "p", "riskcheck", {1, 2, 4});
    const auto as = get_numbers(section, "a", "riskcheck", {0, 0.5, 1});
    if (steps == 0) {
        throw ConfigError("riskcheck.x_steps: must be positive");
    }
    std::size_t total = 0;
    std::size_t held = 0;
    json failures = json::array();
    for (std::size_t i = 0; i <= steps; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(steps);
        for (double p : ps) {
            for (double a : as) {
                RiskParams rp{p, a};
                try {
                    rp.validate();
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(std::string("riskcheck: ") + e.what());
                }
                const auto c = bernoulli_chain_check(x, rp);
                ++total;
                if (c.holds) {
                    ++held;
                } else {
                    failures.push_back({{"x", x}, {"p", p}, {"a", a}, {"lhs", c.lhs}, {"rhs", c.rhs}});
                }
            }
        }
    }
    o.add("chain_inequality", held == total, std::to_string(held) + "/" + std::to_string(total) + " grid points");
    out << "chain inequality: " << held << "/" << total << " grid points\n";

    json exp = cfg;
    if (!exp.contains("functional")) {
        const json risk = cfg.value("risk", json{{"p", 2.0}, {"a", 1.0}});
        exp["functional"] = {{"kind", "risk"}, {"p", risk.value("p", 2.0)}, {"a", risk.value("a", 1.0)}};
    }
    const ExperimentConfig ec = parse_experiment(exp);
    if (!ec.functional || ec.functional->kind != FunctionalKind::Risk) {
        throw ConfigError("functional: riskcheck needs a risk functional");
    }
    const RateReport rep = run_experiment(ec);
    print_rate_table(out, rep);
    add_rate_verdicts(o, rep);
    add_expected_slope(o, cfg, rep.fitted_slope);
    o.report = rate_json(rep);
    o.report["chain_check"] = {{"grid_points", total}, {"held", held}, {"failures", failures}};
    o.csv = csv_header();
    append_rate_csv(o.csv, rep);
    o.svg = rate_svg({{"risk", &rep}});
    return o;
}

using Handler = std::function<Outcome(const json&, std::ostream&)>;

int execute(const std::string& name, const Handler& handler, const std::string& config_path,
            const std::string& output_dir, const std::vector<std::string>& overrides, std::ostream& out,
            std::ostream& err) {
    Outcome o;
    try {
        const json cfg = load_config(config_path, overrides);
        o = handler(cfg, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConditionViolation& e) {
        err << "condition violated: " << e.what() << "\n";
        return kExitVerdictFailed;
    }

    json verdicts = json::object();
    for (const auto& v : o.verdicts) {
        verdicts[v.name] = v.pass;
    }
    o.report["subcommand"] = name;
    o.report["verdicts"] = verdicts;
    try {
        fs::create_directories(output_dir);
        const fs::path dir(output_dir);
        write_json(dir / "report.json", o.report);
        write_json(dir / "metadata.json", metadata_json(name, config_path, overrides));
        if (!o.csv.empty()) {
            write_text(dir / "results.csv", o.csv);
        }
        if (!o.svg.empty()) {
            write_text(dir / "plot.svg", o.svg);
        }
    } catch (const std::exception& e) {
        err << "output error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::size_t width = 8;
    for (const auto& v : o.verdicts) {
        width = std::max(width, v.name.size());
    }
    out << "\n" << std::left << std::setw(static_cast<int>(width) + 2) << "verdict" << "result  detail\n";
    for (const auto& v : o.verdicts) {
        out << std::setw(static_cast<int>(width) + 2) << v.name << (v.pass ? "PASS    " : "FAIL    ") << v.detail
            << "\n";
    }
    out << std::right;
    return o.all_pass() ? kExitPass : kExitVerdictFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Monte Carlo checks of weighted empirical-process limit laws"};
    app.require_subcommand(1);

    const std::map<std::string, std::pair<std::string, Handler>> commands{
        {"conditions", {"Integrability, mixing and feasibility checks", run_conditions}},
        {"rate", {"Convergence-rate experiment", run_rate}},
        {"holder", {"Hoelder bound for an L-functional", run_holder}},
        {"brackets", {"Bracket partition, verification and inequality", run_brackets}},
        {"chaining", {"Dyadic chaining bound and Rio tail bound", run_chaining}},
        {"riskcheck", {"Risk-functional chain inequality and rate", run_riskcheck}},
    };

    std::string config_path;
    std::string output_dir = ".";
    std::vector<std::string> overrides;
    std::string chosen;
    for (const auto& [name, entry] : commands) {
        auto* sub = app.add_subcommand(name, entry.first);
        sub->add_option("-c,--config", config_path, "JSON config file")->required();
        sub->add_option("-o,--output-dir", output_dir, "Directory for report files");
        sub->add_option("overrides", overrides, "key=value overrides, dotted keys");
        sub->callback([&chosen, name = name] { chosen = name; });
    }

    std::vector<std::string> argv_store{"mzlaw"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) {
        argv.push_back(a.data());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitUsage;
    }
    const auto& entry = commands.at(chosen);
    return execute(chosen, entry.second, config_path, output_dir, overrides, out, err);
}

}  // namespace mzlaw::cli
