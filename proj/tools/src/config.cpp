#include "config.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace mzlaw::cli {

namespace {

std::string join(const std::string& where, const std::string& key) {
    return where.empty() ? key : where + "." + key;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

// Pointer for a dotted key; numeric segments index arrays.
json::json_pointer dotted_pointer(const std::string& key) {
    std::string ptr;
    std::size_t start = 0;
    while (start <= key.size()) {
        const std::size_t dot = key.find('.', start);
        const std::string seg = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (seg.empty()) {
            throw ConfigError("override key '" + key + "' has an empty segment");
        }
        ptr += "/" + seg;
        if (dot == std::string::npos) {
            break;
        }
        start = dot + 1;
    }
    return json::json_pointer(ptr);
}

std::string kind_of(const json& j, const std::string& where) {
    if (j.is_string()) {
        return j.get<std::string>();
    }
    return get_string(j, "kind", where);
}

}  // namespace

json parse_config_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        std::string what = e.what();
        const auto pos = what.find("syntax error");
        throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                          (pos == std::string::npos ? what : what.substr(pos)));
    }
}

json load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path + ": cannot open config file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    json cfg = parse_config_text(buf.str(), path);
    if (!cfg.is_object()) {
        throw ConfigError(path + ":1:1: top level must be a JSON object");
    }
    for (const auto& o : overrides) {
        apply_override(cfg, o);
    }
    return cfg;
}

void apply_override(json& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("override '" + assignment + "' is not of the form key=value");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) {
        value = raw;
    }
    try {
        cfg[dotted_pointer(key)] = value;
    } catch (const json::exception& e) {
        throw ConfigError("override '" + key + "': " + e.what());
    }
}

const json& require(const json& j, const std::string& key, const std::string& where) {
    if (!j.is_object()) {
        throw ConfigError(where.empty() ? "config must be an object" : where + ": expected an object");
    }
    const auto it = j.find(key);
    if (it == j.end()) {
        throw ConfigError(join(where, key) + ": missing required field");
    }
    return *it;
}

double get_number(const json& j, const std::string& key, const std::string& where) {
    const json& v = require(j, key, where);
    if (!v.is_number()) {
        throw ConfigError(join(where, key) + ": expected a number, got " + std::string(v.type_name()));
    }
    return v.get<double>();
}

double get_number(const json& j, const std::string& key, const std::string& where, double fallback) {
    if (!j.is_object() || !j.contains(key)) {
        return fallback;
    }
    return get_number(j, key, where);
}

std::size_t get_count(const json& j, const std::string& key, const std::string& where,
                      std::size_t fallback) {
    if (!j.is_object() || !j.contains(key)) {
        return fallback;
    }
    const json& v = j.at(key);
    if (!v.is_number_unsigned()) {
        throw ConfigError(join(where, key) + ": expected a nonnegative integer");
    }
    return v.get<std::size_t>();
}

std::string get_string(const json& j, const std::string& key, const std::string& where) {
    const json& v = require(j, key, where);
    if (!v.is_string()) {
        throw ConfigError(join(where, key) + ": expected a string, got " + std::string(v.type_name()));
    }
    return v.get<std::string>();
}

std::vector<double> get_numbers(const json& j, const std::string& key, const std::string& where,
                                std::vector<double> fallback) {
    if (!j.is_object() || !j.contains(key)) {
        return fallback;
    }
    const json& v = j.at(key);
    if (!v.is_array()) {
        throw ConfigError(join(where, key) + ": expected an array of numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) {
            throw ConfigError(join(where, key) + "[" + std::to_string(i) + "]: expected a number");
        }
        out.push_back(v[i].get<double>());
    }
    return out;
}

DistributionModel parse_model(const json& j, const std::string& where) {
    const std::string kind = kind_of(j, where);
    if (kind == "uniform01") {
        return DistributionModel::uniform01();
    }
    if (kind == "std_normal") {
        return DistributionModel::std_normal();
    }
    if (kind == "pareto_two_sided") {
        const double alpha = get_number(j, "alpha", where);
        const double x0 = get_number(j, "x0", where, 1.0);
        const double c1 = get_number(j, "c1", where, 0.25);
        const double c2 = get_number(j, "c2", where, 0.25);
        try {
            return DistributionModel::pareto_two_sided(alpha, x0, c1, c2);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(where + ": " + e.what());
        }
    }
    throw ConfigError(join(where, "kind") + ": unknown model '" + kind +
                      "' (expected uniform01, std_normal or pareto_two_sided)");
}

WeightFunction parse_weight(const json& j, const DistributionModel& marginal, const std::string& where) {
    const std::string kind = kind_of(j, where);
    try {
        if (kind == "uniform") {
            return WeightFunction::uniform();
        }
        if (kind == "poly") {
            return WeightFunction::poly(get_number(j, "lambda", where));
        }
        if (kind == "adaptive") {
            return make_adaptive_weight(marginal, get_number(j, "gamma", where));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where + ": " + e.what());
    }
    throw ConfigError(join(where, "kind") + ": unknown weight '" + kind +
                      "' (expected uniform, poly or adaptive)");
}

FunctionalSpec parse_functional(const json& j, const std::string& where) {
    const std::string kind = kind_of(j, where);
    FunctionalSpec f;
    try {
        if (kind == "l") {
            f.kind = FunctionalKind::LFunctional;
            const json& k = require(j, "kernel", where);
            const std::string kk = kind_of(k, join(where, "kernel"));
            if (kk == "identity") {
                f.l_kernel = LKernel::identity();
            } else if (kk == "power") {
                f.l_kernel = LKernel::power(get_number(k, "beta", join(where, "kernel")));
            } else if (kk == "step") {
                f.l_kernel = LKernel::step(get_number(k, "y", join(where, "kernel")));
            } else {
                throw ConfigError(join(where, "kernel.kind") + ": unknown L-kernel '" + kk +
                                  "' (expected identity, power or step)");
            }
            return f;
        }
        if (kind == "v") {
            f.kind = FunctionalKind::VFunctional;
            const json& k = require(j, "kernel", where);
            const std::string kk = kind_of(k, join(where, "kernel"));
            if (kk == "half_squared_diff") {
                f.v_kernel = VKernel::half_squared_diff();
            } else if (kk == "product_centered") {
                f.v_kernel = VKernel::product_centered(get_number(k, "mu", join(where, "kernel"), 0.0));
            } else if (kk == "product") {
                f.v_kernel = VKernel::product();
            } else {
                throw ConfigError(join(where, "kernel.kind") + ": unknown V-kernel '" + kk +
                                  "' (expected half_squared_diff, product_centered or product)");
            }
            return f;
        }
        if (kind == "risk") {
            f.kind = FunctionalKind::Risk;
            f.risk = RiskParams{get_number(j, "p", where), get_number(j, "a", where)};
            f.risk.validate();
            return f;
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where + ": " + e.what());
    }
    throw ConfigError(join(where, "kind") + ": unknown functional '" + kind + "' (expected l, v or risk)");
}

MixingRateModel parse_mixing(const json& j, const std::string& where) {
    const std::string kind = kind_of(j, where);
    try {
        if (kind == "zero") {
            return MixingRateModel::zero();
        }
        if (kind == "power_law") {
            auto m = MixingRateModel::power_law(get_number(j, "K", where), get_number(j, "theta", where));
            m.validate();
            return m;
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where + ": " + e.what());
    }
    throw ConfigError(join(where, "kind") + ": unknown mixing rate '" + kind + "' (expected zero or power_law)");
}

GeneratorSpec parse_generator(const json& j, const std::string& where) {
    const std::string kind = kind_of(j, where);
    try {
        if (kind == "iid") {
            return GeneratorSpec::iid(parse_model(require(j, "model", where), join(where, "model")));
        }
        if (kind == "ar1") {
            auto g = GeneratorSpec::ar1(get_number(j, "rho", where));
            g.validate();
            return g;
        }
        if (kind == "linear_process") {
            LinearProcessSpec lp;
            lp.gamma = get_number(j, "gamma", where);
            lp.truncation = get_count(j, "truncation", where, lp.truncation);
            lp.p_moment = get_number(j, "p", where, lp.p_moment);
            if (j.contains("innovation")) {
                lp.innovation = parse_model(j.at("innovation"), join(where, "innovation"));
            }
            auto g = GeneratorSpec::linear_process(lp);
            g.validate();
            return g;
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where + ": " + e.what());
    }
    throw ConfigError(join(where, "kind") + ": unknown generator '" + kind +
                      "' (expected iid, ar1 or linear_process)");
}

ExperimentConfig parse_experiment(const json& cfg) {
    ExperimentConfig e;
    e.generator = parse_generator(require(cfg, "generator", ""), "generator");
    const DistributionModel marginal = e.generator.marginal();
    if (cfg.contains("weight")) {
        e.weight = parse_weight(cfg.at("weight"), marginal, "weight");
    }
    if (cfg.contains("functional") && !cfg.at("functional").is_null()) {
        e.functional = parse_functional(cfg.at("functional"), "functional");
    }
    e.r_exponent = get_number(cfg, "r", "", 0.0);
    const json& grid = require(cfg, "n_grid", "");
    if (grid.is_object()) {
        const auto range = get_numbers(grid, "pow2", "n_grid", {});
        if (range.size() != 2 || range[0] < 0 || range[1] > 40 || range[0] > range[1]) {
            throw ConfigError("n_grid.pow2: expected [lo, hi] with 0 <= lo <= hi <= 40");
        }
        for (int p = static_cast<int>(range[0]); p <= static_cast<int>(range[1]); ++p) {
            e.n_grid.push_back(std::size_t{1} << p);
        }
    } else if (grid.is_array()) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (!grid[i].is_number_unsigned() || grid[i].get<std::size_t>() == 0) {
                throw ConfigError("n_grid[" + std::to_string(i) + "]: expected a positive integer");
            }
            e.n_grid.push_back(grid[i].get<std::size_t>());
        }
    } else {
        throw ConfigError("n_grid: expected an array of counts or {\"pow2\": [lo, hi]}");
    }
    e.replications = get_count(cfg, "replications", "", 1);
    e.master_seed = get_count(cfg, "seed", "", 0);
    e.sup_resolution = get_count(cfg, "sup_resolution", "", e.sup_resolution);
    try {
        e.validate();
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(ex.what());
    }
    return e;
}

}  // namespace mzlaw::cli
