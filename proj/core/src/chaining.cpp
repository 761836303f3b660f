#include "mzlaw/chaining.hpp"

#include "mzlaw/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mzlaw {

namespace {

void check_window(std::span<const double> uniforms, std::size_t p, std::size_t q) {
    if (p > uniforms.size() || q > uniforms.size() - p) {
        throw std::out_of_range("window [" + std::to_string(p) + ", " + std::to_string(p + q) +
                                ") exceeds sample length " + std::to_string(uniforms.size()));
    }
}

void check_threshold(const RationalThreshold& t) {
    if (t.den <= 0 || t.num < 0 || t.num > t.den) {
        throw std::invalid_argument("threshold must satisfy 0 <= num <= den, den > 0");
    }
}

// Sum over blocks of |den * count_k - len * num_k| for every grid index k,
// using one histogram of grid buckets per block.
class BucketedWindowCounter {
public:
    BucketedWindowCounter(std::span<const double> uniforms, std::size_t n,
                          std::span<const RationalThreshold> grid)
        : grid_(grid), bucket_(n) {
        // bucket_[i] = smallest k with U_i <= t_k, or grid.size() if none.
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t lo = 0;
            std::size_t hi = grid.size();
            while (lo < hi) {
                const std::size_t mid = lo + (hi - lo) / 2;
                if (le_rational(uniforms[i], grid[mid])) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            bucket_[i] = lo;
        }
    }

    // Adds den * Z_{start,len}(t_k) to acc[k] for all k.
    void accumulate(std::size_t start, std::size_t len, std::vector<std::int64_t>& acc) const {
        std::vector<std::int64_t> hist(grid_.size() + 1, 0);
        for (std::size_t i = start; i < start + len; ++i) {
            ++hist[bucket_[i]];
        }
        std::int64_t count = 0;
        const auto L = static_cast<std::int64_t>(len);
        for (std::size_t k = 0; k < grid_.size(); ++k) {
            count += hist[k];
            const std::int64_t d = grid_[k].den * count - L * grid_[k].num;
            acc[k] += d < 0 ? -d : d;
        }
    }

private:
    std::span<const RationalThreshold> grid_;
    std::vector<std::size_t> bucket_;
};

}  // namespace

bool le_rational(double u, const RationalThreshold& t) {
    check_threshold(t);
    // u * den is rounded; the fma residual recovers the sign of the exact error.
    const auto den = static_cast<double>(t.den);
    const double prod = u * den;
    const double err = std::fma(u, den, -prod);
    const auto num = static_cast<double>(t.num);
    if (prod != num) {
        return prod < num;
    }
    return err <= 0.0;
}

double z_statistic(std::span<const double> uniforms, std::size_t p, std::size_t q, double t) {
    check_window(uniforms, p, q);
    std::size_t count = 0;
    for (std::size_t i = p; i < p + q; ++i) {
        count += uniforms[i] <= t ? 1 : 0;
    }
    return std::fabs(static_cast<double>(count) - static_cast<double>(q) * t);
}

std::int64_t z_statistic_scaled(std::span<const double> uniforms, std::size_t p, std::size_t q,
                                const RationalThreshold& t) {
    check_window(uniforms, p, q);
    check_threshold(t);
    std::int64_t count = 0;
    for (std::size_t i = p; i < p + q; ++i) {
        count += le_rational(uniforms[i], t) ? 1 : 0;
    }
    const std::int64_t d = t.den * count - static_cast<std::int64_t>(q) * t.num;
    return d < 0 ? -d : d;
}

double z_sup(std::span<const double> uniforms, std::size_t p, std::size_t q) {
    check_window(uniforms, p, q);
    std::vector<double> w(uniforms.begin() + static_cast<std::ptrdiff_t>(p),
                          uniforms.begin() + static_cast<std::ptrdiff_t>(p + q));
    std::sort(w.begin(), w.end());
    const auto qd = static_cast<double>(q);
    double best = 0.0;
    std::size_t i = 0;
    while (i < w.size()) {
        std::size_t j = i;
        while (j < w.size() && w[j] == w[i]) {
            ++j;
        }
        const double t = w[i];
        best = std::max(best, std::fabs(static_cast<double>(i) - qd * t));
        best = std::max(best, std::fabs(static_cast<double>(j) - qd * t));
        i = j;
    }
    return best;
}

void DyadicDecomposition::validate() const {
    auto fail = [](const std::string& what) { throw std::logic_error("dyadic decomposition: " + what); };
    if (n == 0) {
        fail("n must be positive");
    }
    const std::size_t base = std::size_t{1} << N;
    if (base > n || (N + 1 < 64 && (std::size_t{1} << (N + 1)) <= n)) {
        fail("N is not the largest exponent with 2^N <= n");
    }
    if (h.size() != N) {
        fail("h must have N entries");
    }
    std::size_t reconstructed = base;
    for (unsigned j = 1; j <= N; ++j) {
        reconstructed += static_cast<std::size_t>(h[j - 1]) << (j - 1);
    }
    if (reconstructed != n) {
        fail("2^N + sum h_j 2^(j-1) != n");
    }
    std::size_t pos = 0;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        const DyadicBlock& blk = blocks[k];
        if (blk.start != pos) {
            fail("blocks are not consecutive");
        }
        if (k == 0) {
            if (blk.j != 0 || blk.length != base) {
                fail("first block must be [0, 2^N)");
            }
        } else {
            if (blk.j < 1 || blk.j > N || h[blk.j - 1] != 1 ||
                blk.length != (std::size_t{1} << (blk.j - 1))) {
                fail("extra block length must be 2^(j-1) with h_j = 1");
            }
            if (blk.b) {
                if (base + (*blk.b << blk.j) != blk.start ||
                    *blk.b >= (std::size_t{1} << (N - blk.j))) {
                    fail("alignment b_j inconsistent with block start");
                }
            }
        }
        pos += blk.length;
    }
    if (pos != n) {
        fail("blocks do not cover [0, n)");
    }
}

DyadicDecomposition dyadic_blocks(std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("dyadic_blocks: n must be at least 1");
    }
    DyadicDecomposition d;
    d.n = n;
    d.N = static_cast<unsigned>(std::bit_width(n) - 1);
    const std::size_t base = std::size_t{1} << d.N;
    d.h.assign(d.N, 0);
    d.blocks.push_back(DyadicBlock{0, base, 0, std::nullopt});
    const std::size_t rest = n - base;
    std::size_t start = base;
    for (unsigned j = d.N; j >= 1; --j) {
        if ((rest >> (j - 1)) & 1U) {
            d.h[j - 1] = 1;
            DyadicBlock blk{start, std::size_t{1} << (j - 1), j, std::nullopt};
            const std::size_t offset = start - base;
            if (offset % (std::size_t{1} << j) == 0) {
                blk.b = offset >> j;
            }
            d.blocks.push_back(blk);
            start += blk.length;
        }
    }
    return d;
}

ChainingCheck chaining_bound_check(std::span<const double> uniforms, std::size_t n,
                                   std::span<const RationalThreshold> t_grid) {
    if (n == 0 || n > uniforms.size()) {
        throw std::out_of_range("chaining_bound_check: n must lie in [1, sample length]");
    }
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        check_threshold(t_grid[k]);
        if (k > 0 && !(t_grid[k - 1].num * t_grid[k].den < t_grid[k].num * t_grid[k - 1].den)) {
            throw std::invalid_argument("chaining_bound_check: t grid must be increasing");
        }
    }
    const BucketedWindowCounter counter(uniforms, n, t_grid);
    std::vector<std::int64_t> lhs(t_grid.size(), 0);
    std::vector<std::int64_t> rhs(t_grid.size(), 0);
    counter.accumulate(0, n, lhs);
    for (const DyadicBlock& blk : dyadic_blocks(n).blocks) {
        counter.accumulate(blk.start, blk.length, rhs);
    }
    ChainingCheck out;
    out.slack.resize(t_grid.size());
    out.min_slack = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        const std::int64_t s = rhs[k] - lhs[k];
        if (s < 0) {
            out.holds = false;
        }
        out.slack[k] = static_cast<double>(s) / static_cast<double>(t_grid[k].den);
        out.min_slack = std::min(out.min_slack, out.slack[k]);
    }
    if (t_grid.empty()) {
        out.min_slack = 0.0;
    }
    return out;
}

std::vector<RationalThreshold> uniform_threshold_grid(std::int64_t m) {
    if (m < 1) {
        throw std::invalid_argument("uniform_threshold_grid: m must be positive");
    }
    std::vector<RationalThreshold> g;
    g.reserve(static_cast<std::size_t>(m) + 1);
    for (std::int64_t k = 0; k <= m; ++k) {
        g.push_back({k, m});
    }
    return g;
}

double rio_tail_bound(std::size_t q, double x, const MixingRateModel& rate) {
    if (q < 1) {
        throw std::invalid_argument("rio_tail_bound: q must be at least 1");
    }
    if (!(x > 0.0)) {
        throw std::invalid_argument("rio_tail_bound: x must be positive");
    }
    rate.validate();
    double sum = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
        sum += rate.alpha(i);
    }
    const double l = 2.0 + std::log(static_cast<double>(q));
    return (1.0 + 4.0 * sum) * l * l / (x * x);
}

std::vector<double> empirical_exceedance(std::size_t q, std::span<const double> xs,
                                         std::size_t replications, std::uint64_t master_seed) {
    if (q < 1 || replications < 1) {
        throw std::invalid_argument("empirical_exceedance: q and replications must be positive");
    }
    std::vector<std::size_t> hits(xs.size(), 0);
    std::vector<double> u(q);
    const double scale = 1.0 / std::sqrt(static_cast<double>(q));
    for (std::size_t k = 0; k < replications; ++k) {
        UniformStream stream(derive_seed(master_seed, k));
        for (double& v : u) {
            v = stream.next();
        }
        const double stat = scale * z_sup(u, 0, q);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            hits[i] += stat >= xs[i] ? 1 : 0;
        }
    }
    std::vector<double> freq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        freq[i] = static_cast<double>(hits[i]) / static_cast<double>(replications);
    }
    return freq;
}

}  // namespace mzlaw
