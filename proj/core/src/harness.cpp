#include "mzlaw/harness.hpp"

#include "detail/summation.hpp"
#include "mzlaw/edf.hpp"
#include "mzlaw/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mzlaw {

namespace {

// Runs body(k) for k in [0, count) on the resolved number of workers.
// Results must be written to per-k slots; the first exception is rethrown.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
    const std::size_t workers = std::min<std::size_t>(resolve_thread_count(), count);
    if (workers <= 1) {
        for (std::size_t k = 0; k < count; ++k) {
            body(k);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (std::size_t k = next++; k < count; k = next++) {
            try {
                body(k);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) {
        pool.emplace_back(run);
    }
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

double quantile7(const std::vector<double>& sorted, double p) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double linear_process_scale(const LinearProcessSpec& spec) {
    detail::CompensatedSum s;
    for (double a : spec.coefficients()) {
        s.add(a * a);
    }
    return 1.0 / std::sqrt(s.value());
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

GeneratorSpec GeneratorSpec::iid(DistributionModel model) {
    GeneratorSpec g;
    g.kind = GeneratorKind::Iid;
    g.model = std::move(model);
    return g;
}

GeneratorSpec GeneratorSpec::linear_process(LinearProcessSpec spec) {
    GeneratorSpec g;
    g.kind = GeneratorKind::LinearProcess;
    g.linear = std::move(spec);
    return g;
}

GeneratorSpec GeneratorSpec::ar1(double rho) {
    GeneratorSpec g;
    g.kind = GeneratorKind::AR1;
    g.rho = rho;
    return g;
}

void GeneratorSpec::validate() const {
    switch (kind) {
        case GeneratorKind::Iid:
            model.validate();
            break;
        case GeneratorKind::LinearProcess:
            linear.validate();
            if (linear.innovation.kind != DistributionKind::StdNormal) {
                throw std::invalid_argument(
                    "experiments with a linear process need std_normal innovations");
            }
            break;
        case GeneratorKind::AR1:
            if (!(std::fabs(rho) < 1.0)) {
                throw std::invalid_argument("AR(1) needs |rho| < 1, got " + fmt(rho));
            }
            break;
    }
}

DistributionModel GeneratorSpec::marginal() const {
    return kind == GeneratorKind::Iid ? model : DistributionModel::std_normal();
}

std::vector<double> GeneratorSpec::simulate(std::size_t n, std::uint64_t seed) const {
    switch (kind) {
        case GeneratorKind::Iid:
            return sample_iid(model, n, seed);
        case GeneratorKind::AR1:
            return simulate_ar1(rho, n, seed);
        case GeneratorKind::LinearProcess: {
            std::vector<double> x = simulate_linear_process(linear, n, seed);
            const double scale = linear_process_scale(linear);
            for (double& v : x) {
                v *= scale;
            }
            return x;
        }
    }
    throw std::logic_error("unknown generator kind");
}

double FunctionalSpec::exact(const DistributionModel& model) const {
    switch (kind) {
        case FunctionalKind::LFunctional:
            return l_functional_exact(model, l_kernel);
        case FunctionalKind::VFunctional: {
            const double v = v_functional_exact(model, v_kernel);
            if (!std::isfinite(v)) {
                throw ConditionViolation("V-functional is infinite for " + model.name);
            }
            return v;
        }
        case FunctionalKind::Risk:
            return risk_one_sided_exact(model, risk);
    }
    throw std::logic_error("unknown functional kind");
}

double FunctionalSpec::plug_in(std::span<const double> sample) const {
    switch (kind) {
        case FunctionalKind::LFunctional:
            return l_statistic(EmpiricalDistribution(sample), l_kernel);
        case FunctionalKind::VFunctional:
            return v_statistic_moments(sample, v_kernel);
        case FunctionalKind::Risk:
            return risk_one_sided(sample, risk);
    }
    throw std::logic_error("unknown functional kind");
}

void ExperimentConfig::validate() const {
    generator.validate();
    weight.validate();
    if (!(r_exponent >= 0.0 && r_exponent < 0.5)) {
        throw std::invalid_argument("r must lie in [0, 1/2), got " + fmt(r_exponent));
    }
    if (n_grid.empty()) {
        throw std::invalid_argument("n_grid must not be empty");
    }
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] == 0 || (i > 0 && n_grid[i] <= n_grid[i - 1])) {
            throw std::invalid_argument("n_grid must be positive and strictly increasing");
        }
    }
    if (replications < 1) {
        throw std::invalid_argument("replications must be at least 1");
    }
    if (sup_resolution < 1) {
        throw std::invalid_argument("sup_resolution must be at least 1");
    }
    if (functional) {
        if (functional->kind == FunctionalKind::LFunctional) {
            functional->l_kernel.validate();
        } else if (functional->kind == FunctionalKind::Risk) {
            functional->risk.validate();
        }
    }
}

SummaryStats summarize(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("summarize: no values");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    SummaryStats s;
    s.median = quantile7(sorted, 0.5);
    s.q10 = quantile7(sorted, 0.1);
    s.q90 = quantile7(sorted, 0.9);
    s.mean = detail::compensated_mean(values);
    return s;
}

RateFit estimate_rate(std::span<const double> n_values, std::span<const double> medians) {
    if (n_values.size() != medians.size()) {
        throw std::invalid_argument("estimate_rate: size mismatch");
    }
    const std::size_t k = n_values.size();
    if (k < 3) {
        throw std::invalid_argument("estimate_rate: need at least three grid points");
    }
    std::vector<double> x(k);
    std::vector<double> y(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (!(n_values[i] > 0.0) || !(medians[i] > 0.0) || !std::isfinite(medians[i])) {
            throw std::domain_error("estimate_rate: n and medians must be positive and finite");
        }
        x[i] = std::log(n_values[i]);
        y[i] = std::log(medians[i]);
    }
    const double mx = detail::compensated_mean(x);
    const double my = detail::compensated_mean(y);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double e = y[i] - fit.intercept - fit.slope * x[i];
        ssr += e * e;
    }
    fit.slope_stderr = std::sqrt(ssr / static_cast<double>(k - 2) / sxx);
    return fit;
}

bool RateReport::all_pass() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.second; });
}

RateReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const DistributionModel F = cfg.generator.marginal();
    RateReport report;
    report.r_exponent = cfg.r_exponent;

    if (!cfg.functional && cfg.weight.kind != WeightKind::Uniform) {
        const IntegrabilityVerdict v = theorem1_integrability(F, cfg.weight, cfg.r_exponent);
        if (!v.holds) {
            report.warnings.push_back("integrability: " + v.certificate);
        }
    }
    if (cfg.generator.kind == GeneratorKind::LinearProcess) {
        const LinearProcessSpec& lp = cfg.generator.linear;
        if (lp.truncation_warning()) {
            report.warnings.push_back("truncation: discarded coefficient mass up to " +
                                      fmt(lp.truncation_tail_bound()));
        }
        const double p = lp.p_moment;
        if (!(lp.gamma > (2.0 + p) / p)) {
            report.warnings.push_back("mixing: gamma too small for a polynomial mixing rate");
        } else if (!(theta_bound(p, lp.gamma) > 2.0 * cfg.r_exponent)) {
            report.warnings.push_back("mixing: theta = " + fmt(theta_bound(p, lp.gamma)) +
                                      " does not exceed 2r");
        }
    }

    const double target = cfg.functional ? cfg.functional->exact(F) : 0.0;
    const std::size_t n_max = cfg.n_grid.back();
    const std::size_t grid = cfg.n_grid.size();
    std::vector<std::vector<double>> values(grid, std::vector<double>(cfg.replications));

    parallel_for(cfg.replications, [&](std::size_t k) {
        const std::vector<double> path = cfg.generator.simulate(n_max, derive_seed(cfg.master_seed, k));
        for (std::size_t g = 0; g < grid; ++g) {
            const std::span<const double> prefix(path.data(), cfg.n_grid[g]);
            double d;
            if (cfg.functional) {
                d = std::fabs(cfg.functional->plug_in(prefix) - target);
            } else {
                d = weighted_sup_norm(EmpiricalDistribution(prefix), F, cfg.weight,
                                      cfg.sup_resolution);
            }
            values[g][k] = d;
        }
    });

    std::vector<double> ns;
    std::vector<double> medians;
    for (std::size_t g = 0; g < grid; ++g) {
        PerNStats s;
        s.n = cfg.n_grid[g];
        s.raw = summarize(values[g]);
        const double scale = std::pow(static_cast<double>(s.n), cfg.r_exponent);
        std::vector<double> scaled(values[g]);
        for (double& v : scaled) {
            v *= scale;
        }
        s.scaled = summarize(scaled);
        s.values = std::move(values[g]);
        ns.push_back(static_cast<double>(s.n));
        medians.push_back(s.raw.median);
        report.per_n.push_back(std::move(s));
    }

    bool decreasing = true;
    for (std::size_t g = 1; g < grid; ++g) {
        if (!(report.per_n[g].scaled.median < report.per_n[g - 1].scaled.median)) {
            decreasing = false;
        }
    }
    report.verdicts.emplace_back("median_scaled_decreasing", decreasing);

    report.fitted_slope = std::nan("");
    report.slope_stderr = std::nan("");
    if (grid >= 3) {
        try {
            const RateFit fit = estimate_rate(ns, medians);
            report.fitted_slope = fit.slope;
            report.slope_stderr = fit.slope_stderr;
            report.verdicts.emplace_back("slope_exceeds_r", fit.slope < -cfg.r_exponent);
        } catch (const std::domain_error& e) {
            report.warnings.push_back(std::string("slope: ") + e.what());
            report.verdicts.emplace_back("slope_exceeds_r", false);
        }
    } else {
        report.warnings.push_back("slope: fewer than three grid points");
    }
    return report;
}

HolderReport holder_bound_experiment(const ExperimentConfig& cfg, double gamma) {
    cfg.validate();
    if (!cfg.functional || cfg.functional->kind != FunctionalKind::LFunctional) {
        throw std::invalid_argument("holder experiment needs an L-functional");
    }
    const LKernel& K = cfg.functional->l_kernel;
    const DistributionModel F = cfg.generator.marginal();
    HolderReport out;
    out.constant = holder_constant(F, K, gamma);
    const WeightFunction phi = make_adaptive_weight(F, gamma);
    const double target = l_functional_exact(F, K);

    const std::size_t n_max = cfg.n_grid.back();
    const std::size_t grid = cfg.n_grid.size();
    std::vector<std::vector<double>> slack(grid, std::vector<double>(cfg.replications));
    std::vector<std::vector<char>> ok(grid, std::vector<char>(cfg.replications));

    parallel_for(cfg.replications, [&](std::size_t k) {
        const std::vector<double> path = cfg.generator.simulate(n_max, derive_seed(cfg.master_seed, k));
        for (std::size_t g = 0; g < grid; ++g) {
            const EmpiricalDistribution edf(std::span<const double>(path.data(), cfg.n_grid[g]));
            const double lhs = std::fabs(l_statistic(edf, K) - target);
            const double rhs = out.constant * weighted_sup_norm(edf, F, phi, cfg.sup_resolution);
            slack[g][k] = rhs - lhs;
            ok[g][k] = lhs <= rhs * (1.0 + 1e-9) + 1e-12 ? 1 : 0;
        }
    });

    std::size_t good = 0;
    std::vector<double> all_slack;
    for (std::size_t g = 0; g < grid; ++g) {
        const auto cnt = static_cast<std::size_t>(std::count(ok[g].begin(), ok[g].end(), 1));
        good += cnt;
        out.n_grid.push_back(cfg.n_grid[g]);
        out.fraction_per_n.push_back(static_cast<double>(cnt) /
                                     static_cast<double>(cfg.replications));
        all_slack.insert(all_slack.end(), slack[g].begin(), slack[g].end());
    }
    out.checks = grid * cfg.replications;
    out.fraction = static_cast<double>(good) / static_cast<double>(out.checks);
    out.slack = summarize(all_slack);
    out.min_slack = *std::min_element(all_slack.begin(), all_slack.end());
    return out;
}

unsigned resolve_thread_count() {
    if (const char* env = std::getenv("MZLAW_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<unsigned>(std::min<long>(v, 256));
        }
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

}  // namespace mzlaw
