#include "sieverank/config.hpp"

#include <fstream>
#include <set>
#include <string>

#include "sieverank/errors.hpp"

namespace sieverank {
namespace {

void allow_keys(const Json& j, const char* what, std::initializer_list<const char*> keys) {
    if (!j.is_object()) throw ConfigError(std::string(what) + ": expected a JSON object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) throw ConfigError(std::string(what) + ": unknown key '" + key + "'");
    }
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("key '") + key + "': " + e.what());
    }
}

template <class T>
T require(const Json& j, const char* key, const char* what) {
    if (!j.contains(key)) throw ConfigError(std::string(what) + ": missing key '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw ConfigError(std::string(what) + ", key '" + key + "': " + e.what());
    }
}

template <class T>
std::vector<T> scalar_or_list(const Json& j, const char* key, std::vector<T> fallback) {
    if (!j.contains(key)) return fallback;
    const Json& v = j.at(key);
    try {
        if (v.is_array()) return v.get<std::vector<T>>();
        return {v.get<T>()};
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("key '") + key + "': " + e.what());
    }
}

RegressorSelector selector_from_json(const Json& j) {
    allow_keys(j, "input selector", {"coord", "product"});
    if (j.contains("coord") == j.contains("product")) {
        throw ConfigError("input selector needs exactly one of 'coord' or 'product'");
    }
    if (j.contains("coord")) return RegressorSelector::coordinate(require<std::size_t>(j, "coord", "input"));
    const auto pair = require<std::vector<std::size_t>>(j, "product", "input");
    if (pair.size() != 2) throw ConfigError("product selector needs two indices");
    return RegressorSelector::product(pair[0], pair[1]);
}

Json selector_to_json(const RegressorSelector& s) {
    if (s.kind == RegressorSelector::Kind::Coordinate) return {{"coord", s.first}};
    return {{"product", {s.first, s.second}}};
}

Normalization normalization_from_json(const Json& j) {
    const auto type = require<std::string>(j, "type", "normalization");
    if (type == "none") {
        allow_keys(j, "normalization", {"type"});
        return std::monostate{};
    }
    if (type == "anchor") {
        allow_keys(j, "normalization", {"type", "point", "value"});
        return AnchorNormalization{require<std::vector<double>>(j, "point", "anchor"),
                                   get_or<double>(j, "value", 0.0)};
    }
    if (type == "two_point") {
        allow_keys(j, "normalization", {"type", "points"});
        const Json& pts = j.at("points");
        if (!pts.is_array() || pts.size() != 2) throw ConfigError("two_point normalization needs two points");
        TwoPointNormalization t;
        t.first_point = require<std::vector<double>>(pts[0], "point", "two_point");
        t.first_value = require<double>(pts[0], "value", "two_point");
        t.second_point = require<std::vector<double>>(pts[1], "point", "two_point");
        t.second_value = require<double>(pts[1], "value", "two_point");
        return t;
    }
    throw ConfigError("unknown normalization type '" + type + "'");
}

Json normalization_to_json(const Normalization& n) {
    if (const auto* a = std::get_if<AnchorNormalization>(&n)) {
        return {{"type", "anchor"}, {"point", a->point}, {"value", a->value}};
    }
    if (const auto* t = std::get_if<TwoPointNormalization>(&n)) {
        return {{"type", "two_point"},
                {"points",
                 {{{"point", t->first_point}, {"value", t->first_value}},
                  {{"point", t->second_point}, {"value", t->second_value}}}}};
    }
    return {{"type", "none"}};
}

std::vector<double> axis_from_json(const Json& a) {
    if (a.is_array()) return a.get<std::vector<double>>();
    allow_keys(a, "grid axis", {"from", "to", "num"});
    const double from = require<double>(a, "from", "grid axis");
    const double to = require<double>(a, "to", "grid axis");
    const auto num = require<std::size_t>(a, "num", "grid axis");
    if (num == 0) throw ConfigError("grid axis needs at least one point");
    std::vector<double> out(num);
    for (std::size_t i = 0; i < num; ++i) {
        out[i] = num == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(num - 1);
    }
    return out;
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open JSON file " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
    }
}

SieveTemplate sieve_template_from_json(const Json& j) {
    allow_keys(j, "sieve", {"components", "normalization"});
    SieveTemplate t;
    if (!j.contains("components") || !j.at("components").is_array()) {
        throw ConfigError("sieve: 'components' array is required");
    }
    for (const auto& c : j.at("components")) {
        const auto type = require<std::string>(c, "type", "component");
        if (!c.contains("input")) throw ConfigError("component: missing key 'input'");
        const RegressorSelector input = selector_from_json(c.at("input"));
        if (type == "identity") {
            allow_keys(c, "identity component", {"type", "input", "coefficient", "pinned"});
            t.components.emplace_back(IdentityComponent{input, get_or<double>(c, "coefficient", 1.0),
                                                        get_or<bool>(c, "pinned", true)});
        } else if (type == "spline") {
            allow_keys(c, "spline component", {"type", "input", "degree", "n_interior", "intercept", "knots"});
            SplineTemplate s{input, get_or<int>(c, "degree", 3), get_or<int>(c, "n_interior", 0),
                             get_or<bool>(c, "intercept", true), std::nullopt};
            if (c.contains("knots") && !c.at("knots").is_null()) {
                s.knots = require<std::vector<double>>(c, "knots", "spline component");
            }
            t.components.emplace_back(std::move(s));
        } else {
            throw ConfigError("unknown component type '" + type + "'");
        }
    }
    if (j.contains("normalization")) t.normalization = normalization_from_json(j.at("normalization"));
    return t;
}

Json sieve_template_to_json(const SieveTemplate& t) {
    Json comps = Json::array();
    for (const auto& c : t.components) {
        if (const auto* id = std::get_if<IdentityComponent>(&c)) {
            comps.push_back({{"type", "identity"},
                             {"input", selector_to_json(id->input)},
                             {"coefficient", id->coefficient},
                             {"pinned", id->pinned}});
            continue;
        }
        const auto& s = std::get<SplineTemplate>(c);
        Json js = {{"type", "spline"},
                   {"input", selector_to_json(s.input)},
                   {"degree", s.degree},
                   {"n_interior", s.n_interior},
                   {"intercept", s.intercept}};
        if (s.knots) js["knots"] = *s.knots;
        comps.push_back(std::move(js));
    }
    return {{"components", comps}, {"normalization", normalization_to_json(t.normalization)}};
}

Json sieve_spec_to_json(const SieveSpec& spec) {
    SieveTemplate t = to_template(spec);
    std::size_t k = 0;
    for (const auto& c : spec.components()) {
        if (const auto* sp = std::get_if<SplineComponent>(&c)) {
            const auto knots = sp->basis.knots();
            std::get<SplineTemplate>(t.components[k]).knots = std::vector<double>(knots.begin(), knots.end());
        }
        ++k;
    }
    return sieve_template_to_json(t);
}

DatasetSchema schema_from_json(const Json& j) {
    allow_keys(j, "schema", {"y", "z", "w", "missing"});
    DatasetSchema s;
    s.y_column = require<std::string>(j, "y", "schema");
    s.z_columns = get_or<std::vector<std::string>>(j, "z", {});
    s.w_columns = get_or<std::vector<std::string>>(j, "w", {});
    if (j.contains("missing")) {
        const auto tokens = require<std::vector<std::string>>(j, "missing", "schema");
        s.missing_tokens = std::set<std::string>(tokens.begin(), tokens.end());
    }
    s.validate();
    return s;
}

OptimizerConfig optimizer_from_json(const Json& j, OptimizerConfig base) {
    allow_keys(j, "optimizer", {"n_starts", "max_iters", "init_scale", "ftol", "xtol", "seed"});
    base.n_starts = get_or<int>(j, "n_starts", base.n_starts);
    base.max_iters = get_or<int>(j, "max_iters", base.max_iters);
    base.init_scale = get_or<double>(j, "init_scale", base.init_scale);
    base.ftol = get_or<double>(j, "ftol", base.ftol);
    base.xtol = get_or<double>(j, "xtol", base.xtol);
    base.seed = get_or<std::uint64_t>(j, "seed", base.seed);
    base.validate();
    return base;
}

MCConfig mc_config_from_json(const Json& j) {
    allow_keys(j, "simulation config",
               {"variant", "n", "sigma", "c", "K", "a", "b", "replications", "quantile_draws", "spline",
                "optimizer", "grid", "weighted", "ks_level", "master_seed", "threads"});
    MCConfig cfg;
    cfg.variant = parse_dgp_variant(get_or<std::string>(j, "variant", "baseline"));
    if (cfg.variant == DgpVariant::Weighted) cfg.a = cfg.b = 0.0;
    cfg.n = get_or<std::size_t>(j, "n", cfg.n);
    cfg.sigmas = scalar_or_list<double>(j, "sigma", cfg.sigmas);
    cfg.cs = scalar_or_list<double>(j, "c", cfg.cs);
    cfg.Ks = scalar_or_list<int>(j, "K", cfg.Ks);
    cfg.a = get_or<double>(j, "a", cfg.a);
    cfg.b = get_or<double>(j, "b", cfg.b);
    cfg.replications = get_or<std::size_t>(j, "replications", cfg.replications);
    cfg.quantile_draws = get_or<std::size_t>(j, "quantile_draws", cfg.quantile_draws);
    if (j.contains("spline")) {
        const Json& s = j.at("spline");
        allow_keys(s, "spline settings", {"degree", "intercept"});
        cfg.spline.degree = get_or<int>(s, "degree", cfg.spline.degree);
        cfg.spline.intercept = get_or<bool>(s, "intercept", cfg.spline.intercept);
    }
    if (j.contains("optimizer")) cfg.optimizer = optimizer_from_json(j.at("optimizer"), cfg.optimizer);
    if (j.contains("grid")) {
        const Json& g = j.at("grid");
        allow_keys(g, "grid settings", {"points", "margin"});
        cfg.grid.points = get_or<std::size_t>(g, "points", cfg.grid.points);
        cfg.grid.margin = get_or<double>(g, "margin", cfg.grid.margin);
    }
    if (j.contains("weighted")) {
        const Json& w = j.at("weighted");
        allow_keys(w, "weighted settings", {"w_draws", "kernel", "bandwidth_scale", "bandwidth"});
        cfg.weighted.w_draws = get_or<std::size_t>(w, "w_draws", cfg.weighted.w_draws);
        cfg.weighted.kernel = parse_kernel_family(get_or<std::string>(w, "kernel", "uniform"));
        cfg.weighted.bandwidth_scale = get_or<double>(w, "bandwidth_scale", cfg.weighted.bandwidth_scale);
        if (w.contains("bandwidth") && !w.at("bandwidth").is_null()) {
            cfg.weighted.bandwidth = require<double>(w, "bandwidth", "weighted settings");
        }
    }
    cfg.ks_level = get_or<double>(j, "ks_level", cfg.ks_level);
    cfg.master_seed = get_or<std::uint64_t>(j, "master_seed", cfg.master_seed);
    cfg.threads = get_or<std::size_t>(j, "threads", cfg.threads);
    cfg.validate();
    return cfg;
}

Matrix grid_from_json(const Json& j) {
    allow_keys(j, "grid", {"points", "axes"});
    if (j.contains("points") == j.contains("axes")) {
        throw ConfigError("grid needs exactly one of 'points' or 'axes'");
    }
    if (j.contains("points")) {
        const auto rows = require<std::vector<std::vector<double>>>(j, "points", "grid");
        if (rows.empty()) throw ConfigError("grid has no points");
        for (const auto& r : rows) {
            if (r.size() != rows.front().size()) throw ConfigError("grid points have different dimensions");
        }
        return Matrix::from_rows(rows);
    }
    const Json& axes_json = j.at("axes");
    if (!axes_json.is_array() || axes_json.empty()) throw ConfigError("grid 'axes' must be a non-empty array");
    std::vector<std::vector<double>> axes;
    for (const auto& a : axes_json) {
        try {
            axes.push_back(axis_from_json(a));
        } catch (const Json::exception& e) {
            throw ConfigError(std::string("grid axis: ") + e.what());
        }
        if (axes.back().empty()) throw ConfigError("grid axis has no values");
    }
    std::size_t total = 1;
    for (const auto& a : axes) total *= a.size();
    Matrix g(total, axes.size());
    for (std::size_t r = 0; r < total; ++r) {
        std::size_t rem = r;
        for (std::size_t d = axes.size(); d-- > 0;) {
            g(r, d) = axes[d][rem % axes[d].size()];
            rem /= axes[d].size();
        }
    }
    return g;
}

}  // namespace sieverank
