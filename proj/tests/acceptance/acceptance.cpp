// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "mzlaw/brackets.hpp"
#include "mzlaw/chaining.hpp"
#include "mzlaw/distributions.hpp"
#include "mzlaw/edf.hpp"
#include "mzlaw/functionals.hpp"
#include "mzlaw/harness.hpp"
#include "mzlaw/mixing.hpp"
#include "mzlaw/rng.hpp"
#include "mzlaw/weights.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace mzlaw;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        notes.push_back(ok ? what : "NOT MET: " + what);
    }

    [[nodiscard]] std::string detail() const {
        std::string s;
        for (const auto& n : notes) {
            s += (s.empty() ? "" : "; ") + n;
        }
        return s;
    }
};

struct Criterion {
    int id;
    std::string title;
    double budget_seconds;
    std::function<void(Outcome&)> run;
};

std::string num(double v, int digits = 6) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

std::vector<std::size_t> pow2_grid(int lo, int hi) {
    std::vector<std::size_t> g;
    for (int e = lo; e <= hi; ++e) {
        g.push_back(std::size_t{1} << e);
    }
    return g;
}

ExperimentConfig base_config(GeneratorSpec gen, std::size_t reps, double r) {
    ExperimentConfig cfg;
    cfg.generator = std::move(gen);
    cfg.n_grid = pow2_grid(8, 14);
    cfg.replications = reps;
    cfg.master_seed = kSeed;
    cfg.r_exponent = r;
    return cfg;
}

double scaled_median(const RateReport& rep, std::size_t idx) {
    return rep.per_n[idx].scaled.median;
}

void exact_identities(Outcome& out) {
    UniformStream stream(kSeed);
    const auto normal = DistributionModel::std_normal();
    double worst_var = 0.0;
    double worst_mean = 0.0;
    std::size_t step_mismatch = 0;
    for (int s = 0; s < 1000; ++s) {
        const auto n = 1 + static_cast<std::size_t>(stream.next() * 200.0);
        const auto xs = sample_iid(normal, n, derive_seed(kSeed, static_cast<std::uint64_t>(s)));
        const auto e = build_edf(xs);
        // Reference moments in long double, two-pass.
        long double m = 0.0L;
        for (double x : xs) m += x;
        m /= static_cast<long double>(n);
        long double v = 0.0L;
        for (double x : xs) v += (x - m) * (x - m);
        v /= static_cast<long double>(n);

        const double vs = v_statistic(e, VKernel::half_squared_diff());
        const double rel_v = v == 0.0L ? std::fabs(vs) : std::fabs(vs - static_cast<double>(v)) / static_cast<double>(v);
        worst_var = std::max(worst_var, rel_v);

        const double ls = l_statistic(e, LKernel::identity());
        const double scale = std::max(std::fabs(static_cast<double>(m)), 1.0);
        worst_mean = std::max(worst_mean, std::fabs(ls - static_cast<double>(m)) / scale);

        const double y = 1.0 - stream.next();
        if (l_statistic(e, LKernel::step(y)) != edf_quantile(e, y)) {
            ++step_mismatch;
        }
    }
    out.require(worst_var <= 1e-12, "V(HalfSquaredDiff) vs biased variance max rel err " + num(worst_var));
    out.require(worst_mean <= 1e-12, "L(Identity) vs mean max rel err " + num(worst_mean));
    out.require(step_mismatch == 0, "L(Step y) != edf_quantile(y) in " + std::to_string(step_mismatch) + "/1000");
}

void iid_uniform_rate(Outcome& out) {
    auto cfg = base_config(GeneratorSpec::iid(DistributionModel::uniform01()), 200, 0.45);
    const auto rep = run_experiment(cfg);
    out.require(rep.fitted_slope >= -0.56 && rep.fitted_slope <= -0.44,
                "slope " + num(rep.fitted_slope) + " in [-0.56, -0.44]");
    const double first = scaled_median(rep, 0);
    const double last = scaled_median(rep, rep.per_n.size() - 1);
    out.require(last < first, "median n^0.45 D_n " + num(first) + " -> " + num(last));
}

void pareto_boundary(Outcome& out) {
    const auto pareto = DistributionModel::pareto_two_sided(2.0, 1.0, 0.25, 0.25);
    for (double r : {0.1, 0.4}) {
        auto cfg = base_config(GeneratorSpec::iid(pareto), 100, r);
        cfg.weight = WeightFunction::poly(1.5);
        const auto rep = run_experiment(cfg);
        const double first = scaled_median(rep, 0);
        const double last = scaled_median(rep, rep.per_n.size() - 1);
        const bool holds = theorem1_integrability(pareto, cfg.weight, r).holds;
        if (r < 0.25) {
            out.require(holds && last < first, "r=" + num(r) + " integrable=" + (holds ? "yes" : "no") +
                                                   " median " + num(first) + " -> " + num(last));
        } else {
            out.require(!holds && last > first, "r=" + num(r) + " integrable=" + (holds ? "yes" : "no") +
                                                    " median " + num(first) + " -> " + num(last));
        }
    }
}

void ar1_rate(Outcome& out) {
    auto cfg = base_config(GeneratorSpec::ar1(0.5), 200, 0.0);
    const auto rep = run_experiment(cfg);
    out.require(rep.fitted_slope >= -0.56 && rep.fitted_slope <= -0.40,
                "slope " + num(rep.fitted_slope) + " in [-0.56, -0.40]");
}

void holder_lemma(Outcome& out) {
    {
        auto cfg = base_config(GeneratorSpec::iid(DistributionModel::pareto_two_sided(4.0, 1.0, 0.25, 0.25)),
                               500, 0.0);
        cfg.n_grid = {100, 1000, 10000};
        FunctionalSpec f;
        f.kind = FunctionalKind::LFunctional;
        f.l_kernel = LKernel::power(0.5);
        cfg.functional = f;
        const auto rep = holder_bound_experiment(cfg, 0.9);
        out.require(rep.fraction == 1.0, "Pareto(4)/Power(0.5)/gamma=0.9 fraction " + num(rep.fraction) +
                                             " over " + std::to_string(rep.checks) + " checks, C=" +
                                             num(rep.constant, 10));
    }
    {
        auto cfg = base_config(GeneratorSpec::iid(DistributionModel::uniform01()), 500, 0.0);
        cfg.n_grid = {100, 1000, 10000};
        FunctionalSpec f;
        f.kind = FunctionalKind::LFunctional;
        f.l_kernel = LKernel::identity();
        cfg.functional = f;
        const auto rep = holder_bound_experiment(cfg, 1.0);
        out.require(std::fabs(rep.constant - 0.5) <= 1e-12, "Uniform01/Identity C=" + num(rep.constant, 15));
        out.require(rep.fraction == 1.0, "Uniform01/Identity/gamma=1 fraction " + num(rep.fraction));
    }
}

void quantile_rate(Outcome& out) {
    auto cfg = base_config(GeneratorSpec::ar1(0.5), 200, 0.4);
    FunctionalSpec f;
    f.kind = FunctionalKind::LFunctional;
    f.l_kernel = LKernel::step(0.5);
    cfg.functional = f;
    const auto rep = run_experiment(cfg);
    std::string series;
    bool decreasing = true;
    for (std::size_t i = 0; i < rep.per_n.size(); ++i) {
        series += (i ? " " : "") + num(scaled_median(rep, i), 4);
        if (i > 0 && !(scaled_median(rep, i) < scaled_median(rep, i - 1))) {
            decreasing = false;
        }
    }
    out.require(decreasing, "median n^0.4 |Q_n(0.5)|: " + series);
}

void v_rate_doubling(Outcome& out) {
    auto run = [](VKernel k) {
        auto cfg = base_config(GeneratorSpec::iid(DistributionModel::std_normal()), 200, 0.0);
        FunctionalSpec f;
        f.kind = FunctionalKind::VFunctional;
        f.v_kernel = k;
        cfg.functional = f;
        return run_experiment(cfg).fitted_slope;
    };
    const double degenerate = run(VKernel::product_centered(0.0));
    const double regular = run(VKernel::half_squared_diff());
    const double ratio = degenerate / regular;
    out.require(ratio >= 1.7 && ratio <= 2.3, "slopes " + num(degenerate) + " / " + num(regular) +
                                                  " = " + num(ratio) + " in [1.7, 2.3]");
}

void risk_checks(Outcome& out) {
    std::size_t failures = 0;
    std::size_t total = 0;
    for (int i = 0; i <= 10; ++i) {
        for (double p : {1.0, 2.0, 4.0}) {
            for (double a : {0.0, 0.5, 1.0}) {
                ++total;
                if (!bernoulli_chain_check(i / 10.0, RiskParams{p, a}).holds) {
                    ++failures;
                }
            }
        }
    }
    out.require(failures == 0, "chain inequality holds on " + std::to_string(total - failures) + "/" +
                                   std::to_string(total));
    auto cfg = base_config(GeneratorSpec::iid(DistributionModel::std_normal()), 200, 0.0);
    FunctionalSpec f;
    f.kind = FunctionalKind::Risk;
    f.risk = RiskParams{2.0, 1.0};
    cfg.functional = f;
    const auto rep = run_experiment(cfg);
    out.require(rep.fitted_slope >= -0.6 && rep.fitted_slope <= -0.4,
                "risk slope " + num(rep.fitted_slope) + " in [-0.6, -0.4]");
}

void chaining_machinery(Outcome& out) {
    const auto grid = uniform_threshold_grid(100);
    std::size_t violations = 0;
    double min_slack = INFINITY;
    for (std::uint64_t s = 0; s < 50; ++s) {
        UniformStream stream(derive_seed(kSeed, s));
        std::vector<double> u(1024);
        for (auto& x : u) x = stream.next();
        for (std::size_t n = 1; n <= u.size(); ++n) {
            const auto c = chaining_bound_check(u, n, grid);
            min_slack = std::min(min_slack, c.min_slack);
            if (!c.holds) {
                ++violations;
            }
        }
    }
    out.require(violations == 0, "chaining bound: " + std::to_string(violations) +
                                     " violations over 50 x 1024 prefixes, min slack " + num(min_slack));
    const std::vector<double> xs{1.0, 2.0, 4.0};
    const auto iid = MixingRateModel::zero();
    for (std::size_t q : {64, 256}) {
        const auto freq = empirical_exceedance(q, xs, 2000, kSeed);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double bound = rio_tail_bound(q, xs[i], iid);
            out.require(freq[i] <= bound, "q=" + std::to_string(q) + " x=" + num(xs[i]) + " freq " +
                                              num(freq[i]) + " <= " + num(bound));
        }
    }
}

void bracket_machinery(Outcome& out) {
    const auto normal = DistributionModel::std_normal();
    const auto phi = WeightFunction::poly(1.0);
    const auto w = bracket_weight(normal, phi);
    const auto partition = build_partition(w, 0.05);
    std::vector<double> s_grid(2000);
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
        s_grid[i] = static_cast<double>(i + 1) / static_cast<double>(s_grid.size());
    }
    for (std::size_t i = 1; i < partition.t_points.size(); ++i) {
        s_grid.push_back(partition.t_points[i]);
    }
    const auto v = verify_brackets(partition, w, s_grid);
    out.require(v.holds, std::to_string(partition.m) + " brackets, max size " +
                             num(v.max_bracket_integral) + (v.holds ? "" : ": " + v.reason));

    const auto normal_r = reflect_model(normal);
    const auto phi_r = reflect_weight(phi);
    const auto partition_r = build_partition(bracket_weight(normal_r, phi_r), 0.05);
    std::size_t held = 0;
    for (std::uint64_t k = 0; k < 100; ++k) {
        UniformStream stream(derive_seed(kSeed, k));
        std::vector<double> u(1000);
        for (auto& x : u) x = stream.next();
        const auto neg = bracket_inequality_check(u, normal, phi, partition);
        const auto ur = reflect_uniforms(u);
        const auto pos = bracket_inequality_check(ur, normal_r, phi_r, partition_r);
        if (neg.holds && pos.holds) {
            ++held;
        }
    }
    out.require(held == 100, "inequality holds on " + std::to_string(held) + "/100 replications (both sides)");
}

void condition_checkers(Outcome& out) {
    out.require(theta_bound(2.0, 3.5) == 1.0, "theta_bound(2, 3.5) = " + num(theta_bound(2.0, 3.5), 17));
    out.require(gamma_for_theta_one(2.0) == 3.5, "gamma_for_theta_one(2) = " + num(gamma_for_theta_one(2.0), 17));
    const auto a = feasibility_window(4.0, 0.25, 0.25);
    out.require(a.rate_window && a.rate_window->lo == 0.5 && a.rate_window->hi == 0.75,
                "window(4, 0.25, 0.25) = (0.5, 0.75)");
    const auto b = feasibility_window(2.0, 0.0, 0.0);
    out.require(b.rate_window && b.rate_window->lo == 0.5 && b.rate_window->hi == 1.0,
                "window(2, 0, 0) = (0.5, 1)");
    const auto c = feasibility_window(1.0, 0.5, 0.4);
    out.require(!c.rate_window, "window(1, 0.5, 0.4) empty");
    const auto t3 = condition_T3_check(MixingRateModel::zero(), [](double s) { return 1.0 / s; });
    out.require(t3.holds && t3.integral == 0.0, "T3(Zero) integral " + num(t3.integral));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mzlaw acceptance suite"};
    std::vector<int> only;
    app.add_option("--only", only, "Run only these criteria (1-11)");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria{
        {1, "exact identities of L- and V-statistics", 10, exact_identities},
        {2, "i.i.d. uniform sup-norm rate", 120, iid_uniform_rate},
        {3, "integrability boundary, Pareto(2) with (1+|x|)^1.5", 180, pareto_boundary},
        {4, "AR(1) sup-norm rate", 120, ar1_rate},
        {5, "Hoelder bound for L-functionals", 180, holder_lemma},
        {6, "AR(1) sample median rate", 60, quantile_rate},
        {7, "degenerate V-statistic rate doubling", 120, v_rate_doubling},
        {8, "risk functional chain inequality and rate", 60, risk_checks},
        {9, "chaining bound and Rio tail bound", 120, chaining_machinery},
        {10, "bracketing partition and bracket inequality", 120, bracket_machinery},
        {11, "condition checkers", 1, condition_checkers},
    };
    const std::set<int> selected(only.begin(), only.end());
    int failed = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) {
            continue;
        }
        Outcome out;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(out);
        } catch (const std::exception& e) {
            out.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.require(secs < c.budget_seconds, "runtime " + num(secs, 3) + " s < " + num(c.budget_seconds) + " s");
        failed += out.pass ? 0 : 1;
        std::printf("[%s] AC%02d %s: %s\n", out.pass ? "PASS" : "FAIL", c.id, c.title.c_str(),
                    out.detail().c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
