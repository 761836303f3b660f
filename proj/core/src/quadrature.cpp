#include "mzlaw/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mzlaw::quad {

namespace {

boost::math::quadrature::tanh_sinh<double>& tanh_sinh_rule() {
    thread_local boost::math::quadrature::tanh_sinh<double> rule;
    return rule;
}

// A double-exponential rule that stalls far above its tolerance on a
// positive integrand is taken as a sign of a non-integrable endpoint.
constexpr double kStallRatio = 1e-4;

Result finish(double value, double error, double l1, bool check_stall = false) {
    Result r{value, error, l1, true};
    if (!std::isfinite(value) || std::fabs(value) > kDivergenceCap || l1 > kDivergenceCap) {
        r.finite = false;
    }
    if (check_stall && !(error <= kStallRatio * l1)) {
        r.finite = false;
    }
    return r;
}

// One 15-point Gauss-Kronrod panel on [a, b], with error and L1 in the
// units of the integral.
Result gk_piece(const std::function<double(double)>& f, double a, double b) {
    const double mid = a + (b - a) / 2;
    const double half = (b - a) / 2;
    auto g = [&f, mid, half](double t) { return f(mid + half * t) * half; };
    double error = 0.0;
    double l1 = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        g, -1.0, 1.0, 0, 0.0, &error, &l1);
    return Result{v, error, l1, true};
}

// Bisects until each panel's error is within its share of the goal.
Result gk_refine(const std::function<double(double)>& f, double a, double b, const Result& here,
                 double goal, int depth) {
    const double mid = a + (b - a) / 2;
    if (here.error <= goal || depth == 0 || !(mid > a && mid < b)) {
        return here;
    }
    const Result left = gk_piece(f, a, mid);
    const Result right = gk_piece(f, mid, b);
    if (std::fabs(left.value + right.value - here.value) <= goal * 1e-3 &&
        left.error + right.error <= goal) {
        return Result{left.value + right.value, left.error + right.error, left.l1 + right.l1, true};
    }
    const Result l = gk_refine(f, a, mid, left, goal / 2, depth - 1);
    const Result r = gk_refine(f, mid, b, right, goal / 2, depth - 1);
    return Result{l.value + r.value, l.error + r.error, l.l1 + r.l1, true};
}

Result divergent() {
    return Result{INFINITY, INFINITY, INFINITY, false};
}

}  // namespace

Result integrate_unit(const UnitIntegrand& f, double tol) {
    // Boost's two-argument form integrates over (-1, 1) and passes the signed
    // distance to the nearer endpoint: xc = -1 - x for x < 0, xc = 1 - x for
    // x > 0. Map x -> u = (1 + x) / 2.
    auto g = [&f](double x, double xc) {
        double u;
        double uc;
        if (x < 0) {
            u = -xc / 2;
            uc = 1.0 - u;
        } else {
            uc = xc / 2;
            u = 1.0 - uc;
        }
        if (!(u > 0.0) || !(uc > 0.0)) {
            return 0.0;
        }
        return f(u, uc) / 2;
    };
    double error = 0.0;
    double l1 = 0.0;
    try {
        double v = tanh_sinh_rule().integrate(g, tol, &error, &l1);
        return finish(v, error, l1, true);
    } catch (const std::exception&) {
        return divergent();
    }
}

Result integrate_unit(const UnitIntegrand& f, std::vector<double> breaks, double tol) {
    std::erase_if(breaks, [](double b) { return !(b > 0.0 && b < 1.0); });
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    if (breaks.empty()) {
        return integrate_unit(f, tol);
    }
    breaks.insert(breaks.begin(), 0.0);
    breaks.push_back(1.0);
    Result total{0.0, 0.0, 0.0, true};
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i];
        const double b = breaks[i + 1];
        // Boost passes xc = a - x near a and xc = b - x near b.
        auto g = [&f, a, b](double x, double xc) {
            double u;
            double uc;
            if (xc < 0) {
                u = a == 0.0 ? -xc : x;
                uc = 1.0 - u;
            } else if (b == 1.0) {
                uc = xc;
                u = 1.0 - uc;
            } else {
                u = x;
                uc = 1.0 - x;
            }
            if (!(u > 0.0) || !(uc > 0.0)) {
                return 0.0;
            }
            return f(u, uc);
        };
        double error = 0.0;
        double l1 = 0.0;
        Result r;
        try {
            const double v = tanh_sinh_rule().integrate(g, a, b, tol, &error, &l1);
            r = finish(v, error, l1, true);
        } catch (const std::exception&) {
            r = divergent();
        }
        if (!r.finite) {
            return divergent();
        }
        total.value += r.value;
        total.error += r.error;
        total.l1 += r.l1;
    }
    return finish(total.value, total.error, total.l1);
}

Result integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) {
        return Result{};
    }
    if (a > b) {
        Result r = integrate(f, b, a, tol);
        r.value = -r.value;
        return r;
    }
    double error = 0.0;
    double l1 = 0.0;
    try {
        double v = tanh_sinh_rule().integrate(f, a, b, tol, &error, &l1);
        return finish(v, error, l1, true);
    } catch (const std::exception&) {
        return divergent();
    }
}

Result integrate_gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                               double tol) {
    if (a == b) {
        return Result{};
    }
    double error = 0.0;
    double l1 = 0.0;
    using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
    try {
        if (!std::isfinite(a) || !std::isfinite(b)) {
            const double v = Rule::integrate(f, a, b, 20, tol, &error, &l1);
            return finish(v, error, l1);
        }
        const Result top = gk_piece(f, a, b);
        const double goal = tol * std::max(std::fabs(top.value), top.l1 * 1e-3);
        const Result r = gk_refine(f, a, b, top, goal, 20);
        return finish(r.value, r.error, r.l1);
    } catch (const std::exception&) {
        return divergent();
    }
}

}  // namespace mzlaw::quad
