#include "mzlaw/weights.hpp"

#include "mzlaw/quadrature.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mzlaw {

namespace {

// Adaptive weight from the branch value t = F(x) or 1 - F(x).
double adaptive_branch(double t, double gamma) {
    return t > 0.0 ? std::pow(t, -gamma) : kInf;
}

double adaptive_eval(const DistributionModel& model, double gamma, double x) {
    const double t = x < 0.0 ? cdf_eval(model, x) : survival_eval(model, x);
    if (t > 0.0) {
        return std::pow(t, -gamma);
    }
    const auto [a, b] = model.support();
    if (x < a) {
        return adaptive_branch(a < 0.0 ? cdf_eval(model, a) : survival_eval(model, a), gamma);
    }
    if (x > b) {
        return adaptive_branch(b < 0.0 ? cdf_eval(model, b) : survival_eval(model, b), gamma);
    }
    return kInf;
}

std::string fmt(double v) { return format_extended(v); }

}  // namespace

WeightFunction WeightFunction::uniform() { return WeightFunction{}; }

WeightFunction WeightFunction::poly(double lambda) {
    WeightFunction w;
    w.kind = WeightKind::Poly;
    w.lambda = lambda;
    w.validate();
    return w;
}

void WeightFunction::validate() const {
    switch (kind) {
        case WeightKind::Uniform:
            break;
        case WeightKind::Poly:
            if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
                throw std::invalid_argument("poly weight: lambda must be finite and >= 0");
            }
            break;
        case WeightKind::AdaptiveGammaF:
            if (!(gamma > 0.0 && gamma <= 1.0)) {
                throw std::invalid_argument("adaptive weight: gamma must lie in (0, 1]");
            }
            if (!base_model) {
                throw std::invalid_argument("adaptive weight: base model missing");
            }
            base_model->validate();
            break;
    }
}

double weight_eval(const WeightFunction& w, double x) {
    switch (w.kind) {
        case WeightKind::Uniform:
            return 1.0;
        case WeightKind::Poly:
            return std::pow(1.0 + std::fabs(x), w.lambda);
        case WeightKind::AdaptiveGammaF:
            return adaptive_eval(*w.base_model, w.gamma, x);
    }
    return 1.0;
}

double weight_left_limit(const WeightFunction& w, double x) {
    if (w.kind == WeightKind::AdaptiveGammaF && x == 0.0) {
        return adaptive_eval(*w.base_model, w.gamma, std::nextafter(0.0, -1.0));
    }
    return weight_eval(w, x);
}

WeightFunction make_adaptive_weight(const DistributionModel& model, double gamma) {
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument("make_adaptive_weight: gamma must lie in (0, 1]");
    }
    model.validate();
    WeightFunction w;
    w.kind = WeightKind::AdaptiveGammaF;
    w.gamma = gamma;
    w.base_model = model;
    // Both branches are >= 1 and the split sits at 0.
    w.x_phi = 0.0;
    w.eps_lower = 1.0;
    return w;
}

IntegrabilityVerdict theorem1_integrability(const DistributionModel& model, const WeightFunction& w,
                                            double r) {
    if (!(r >= 0.0 && r < 0.5)) {
        throw std::invalid_argument("theorem1_integrability: r must lie in [0, 1/2)");
    }
    w.validate();
    const double q = 1.0 / (1.0 - r);
    IntegrabilityVerdict verdict;

    if (w.kind == WeightKind::Uniform) {
        verdict.holds = true;
        verdict.integral = 1.0;
        verdict.certificate = "constant weight";
        return verdict;
    }

    std::ostringstream cert;
    bool analytic = false;
    if (w.kind == WeightKind::Poly && model.kind == DistributionKind::ParetoTwoSided) {
        analytic = true;
        const double exponent = w.lambda * q;
        verdict.holds = exponent < model.tail_alpha;
        cert << "tail exponent lambda/(1-r) = " << fmt(exponent)
             << (verdict.holds ? " < " : " >= ") << "alpha = " << fmt(model.tail_alpha);
    } else if (w.kind == WeightKind::Poly) {
        analytic = true;
        verdict.holds = true;
        cert << "polynomial weight against a law with all moments";
    } else if (w.kind == WeightKind::AdaptiveGammaF && *w.base_model == model) {
        analytic = true;
        // w(s) = s^-gamma below F(0) and (1-s)^-gamma above it.
        const double exponent = w.gamma * q;
        verdict.holds = exponent < 1.0;
        cert << "endpoint exponent gamma/(1-r) = " << fmt(exponent)
             << (verdict.holds ? " < 1" : " >= 1");
    }

    if (analytic && !verdict.holds) {
        verdict.integral = kInf;
        verdict.certificate = cert.str();
        return verdict;
    }

    const auto res = quad::integrate_unit(
        [&](double s, double sc) {
            const double x = quantile_left(model, s, sc);
            return std::pow(weight_eval(w, x), q);
        },
        1e-9);
    if (!res.finite) {
        verdict.holds = false;
        verdict.integral = kInf;
        if (!analytic) {
            cert << "quadrature exceeded cap " << fmt(quad::kDivergenceCap);
        }
        verdict.certificate = cert.str();
        return verdict;
    }
    verdict.holds = true;
    verdict.integral = res.value;
    if (!analytic) {
        cert << "quadrature below cap";
    }
    verdict.certificate = cert.str();
    return verdict;
}

}  // namespace mzlaw
