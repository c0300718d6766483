#include "spillover/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spillover/errors.hpp"
#include "spillover/textio.hpp"

namespace spillover {

namespace {

struct TomlValue {
    enum class Kind { string, number, boolean, string_array } kind;
    std::string str;
    double num = 0.0;
    bool boolean = false;
    std::vector<std::string> array;
    int line = 0;
};

std::string strip(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string parse_quoted(const std::string& raw, int line) {
    if (raw.size() < 2 || raw.front() != '"' || raw.back() != '"')
        throw config_error("line " + std::to_string(line) + ": expected quoted string, got " + raw);
    return raw.substr(1, raw.size() - 2);
}

TomlValue parse_value(const std::string& raw, int line) {
    TomlValue v;
    v.line = line;
    if (raw.empty()) throw config_error("line " + std::to_string(line) + ": missing value");
    if (raw.front() == '"') {
        v.kind = TomlValue::Kind::string;
        v.str = parse_quoted(raw, line);
        return v;
    }
    if (raw.front() == '[') {
        if (raw.back() != ']')
            throw config_error("line " + std::to_string(line) + ": unterminated array");
        v.kind = TomlValue::Kind::string_array;
        std::string inner = raw.substr(1, raw.size() - 2);
        std::stringstream ss(inner);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = strip(item);
            if (item.empty()) continue;
            v.array.push_back(parse_quoted(item, line));
        }
        return v;
    }
    if (raw == "true" || raw == "false") {
        v.kind = TomlValue::Kind::boolean;
        v.boolean = raw == "true";
        return v;
    }
    v.kind = TomlValue::Kind::number;
    const char* begin = raw.data();
    const char* end = begin + raw.size();
    auto [ptr, ec] = std::from_chars(begin, end, v.num);
    if (ec != std::errc() || ptr != end)
        throw config_error("line " + std::to_string(line) + ": cannot parse value '" + raw + "'");
    return v;
}

std::map<std::string, TomlValue> parse_toml(const std::string& text) {
    std::map<std::string, TomlValue> out;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            // keep '#' inside quotes
            const auto quote_open = line.find('"');
            if (quote_open == std::string::npos || hash < quote_open)
                line = line.substr(0, hash);
        }
        line = strip(line);
        if (line.empty()) continue;
        if (line.front() == '[')
            throw config_error("line " + std::to_string(lineno) +
                               ": tables are not supported; use flat keys");
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = strip(line.substr(0, eq));
        if (key.empty())
            throw config_error("line " + std::to_string(lineno) + ": empty key");
        if (out.count(key))
            throw config_error("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        out[key] = parse_value(strip(line.substr(eq + 1)), lineno);
    }
    return out;
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "inputs",       "date_column", "align",       "window",     "step",
        "lag",          "corr_method", "include_own_lag", "network_threshold",
        "estimator",    "ewma_lambda", "ewma_burn_in", "strategies", "alpha",
        "long_only",    "annualize",   "ers_lag",     "mask_level", "output_dir",
        "seed"};
    return keys;
}

std::string suggestion_for(const std::string& key) {
    std::size_t best = std::string::npos;
    std::string candidate;
    for (const auto& k : known_keys()) {
        const auto d = edit_distance(key, k);
        if (d < best) {
            best = d;
            candidate = k;
        }
    }
    if (best <= std::max<std::size_t>(2, key.size() / 3))
        return " (did you mean '" + candidate + "'?)";
    return "";
}

class Collector {
  public:
    explicit Collector(std::map<std::string, TomlValue> doc) : doc_(std::move(doc)) {}

    bool has(const std::string& key) {
        used_.insert(key);
        return doc_.count(key) > 0;
    }
    const TomlValue& get(const std::string& key) { return doc_.at(key); }
    void error(const std::string& msg) { errors_.push_back(msg); }

    double number(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        const auto& v = get(key);
        if (v.kind != TomlValue::Kind::number) {
            error("key '" + key + "' must be a number");
            return fallback;
        }
        return v.num;
    }
    int integer(const std::string& key, int fallback) {
        if (!has(key)) return fallback;
        const auto& v = get(key);
        if (v.kind != TomlValue::Kind::number || v.num != std::floor(v.num)) {
            error("key '" + key + "' must be an integer");
            return fallback;
        }
        return static_cast<int>(v.num);
    }
    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const auto& v = get(key);
        if (v.kind != TomlValue::Kind::boolean) {
            error("key '" + key + "' must be true or false");
            return fallback;
        }
        return v.boolean;
    }
    std::string string(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        const auto& v = get(key);
        if (v.kind != TomlValue::Kind::string) {
            error("key '" + key + "' must be a quoted string");
            return fallback;
        }
        return v.str;
    }
    std::vector<std::string> string_array(const std::string& key,
                                          const std::vector<std::string>& fallback) {
        if (!has(key)) return fallback;
        const auto& v = get(key);
        if (v.kind == TomlValue::Kind::string_array) return v.array;
        if (v.kind == TomlValue::Kind::string) return {v.str};
        error("key '" + key + "' must be a string or array of strings");
        return fallback;
    }

    void finish() {
        for (const auto& [key, value] : doc_)
            if (!used_.count(key))
                errors_.push_back("unknown key '" + key + "'" + suggestion_for(key));
        if (!errors_.empty()) {
            std::string msg = "invalid configuration:";
            for (const auto& e : errors_) msg += "\n  - " + e;
            throw config_error(msg);
        }
    }

  private:
    std::map<std::string, TomlValue> doc_;
    std::set<std::string> used_;
    std::vector<std::string> errors_;
};

}  // namespace

RunConfig validate_config(const std::string& toml_text) {
    Collector c(parse_toml(toml_text));
    RunConfig cfg;

    cfg.inputs = c.string_array("inputs", {});
    cfg.date_column = c.string("date_column", cfg.date_column);

    const std::string align = c.string("align", align_policy_name(cfg.align));
    try {
        cfg.align = align_policy_from_name(align);
    } catch (const config_error& e) {
        c.error(e.what());
    }

    cfg.window = c.integer("window", cfg.window);
    if (cfg.window < 2) c.error("key 'window' must be >= 2");
    cfg.step = c.integer("step", cfg.step);
    if (cfg.step < 1) c.error("key 'step' must be >= 1");
    cfg.lag = c.integer("lag", cfg.lag);
    if (cfg.lag < 1) c.error("key 'lag' must be >= 1");

    const std::string method = c.string("corr_method", corr_method_name(cfg.corr_method));
    try {
        cfg.corr_method = corr_method_from_name(method);
    } catch (const config_error& e) {
        c.error(e.what());
    }
    cfg.include_own_lag = c.boolean("include_own_lag", cfg.include_own_lag);
    cfg.network_threshold = c.number("network_threshold", cfg.network_threshold);
    if (cfg.network_threshold < 0.0) c.error("key 'network_threshold' must be >= 0");

    cfg.estimator = c.string("estimator", cfg.estimator);
    if (cfg.estimator != "ewma" && cfg.estimator != "dcc")
        c.error("key 'estimator' must be \"ewma\" or \"dcc\"");
    cfg.ewma_lambda = c.number("ewma_lambda", cfg.ewma_lambda);
    if (!(cfg.ewma_lambda > 0.0 && cfg.ewma_lambda < 1.0))
        c.error("key 'ewma_lambda' must be in (0,1)");
    cfg.ewma_burn_in = c.integer("ewma_burn_in", cfg.ewma_burn_in);
    if (cfg.ewma_burn_in < 2) c.error("key 'ewma_burn_in' must be >= 2");

    std::vector<std::string> strat_names;
    for (auto s : cfg.strategies) strat_names.push_back(strategy_name(s));
    strat_names = c.string_array("strategies", strat_names);
    std::vector<Strategy> strategies;
    for (const auto& n : strat_names) {
        try {
            strategies.push_back(strategy_from_name(n));
        } catch (const config_error& e) {
            c.error(e.what());
        }
    }
    if (!strategies.empty()) cfg.strategies = strategies;
    if (strat_names.empty()) c.error("key 'strategies' must not be empty");

    cfg.alpha = c.number("alpha", cfg.alpha);
    if (!(cfg.alpha > 0.0 && cfg.alpha < 0.5)) c.error("key 'alpha' must be in (0,0.5)");
    cfg.long_only = c.boolean("long_only", cfg.long_only);
    cfg.annualize = c.boolean("annualize", cfg.annualize);

    cfg.ers_lag = c.integer("ers_lag", cfg.ers_lag);
    if (cfg.ers_lag < -1) c.error("key 'ers_lag' must be -1 (auto) or >= 0");
    cfg.mask_level = c.number("mask_level", cfg.mask_level);
    if (!(cfg.mask_level > 0.0 && cfg.mask_level < 1.0))
        c.error("key 'mask_level' must be in (0,1)");

    cfg.output_dir = c.string("output_dir", cfg.output_dir);
    const int seed = c.integer("seed", static_cast<int>(cfg.seed));
    if (seed < 0)
        c.error("key 'seed' must be >= 0");
    else
        cfg.seed = static_cast<std::uint64_t>(seed);

    c.finish();
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    return validate_config(read_file(path));
}

namespace {

std::string toml_string_array(const std::vector<std::string>& items) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += '"' + items[i] + '"';
    }
    out += ']';
    return out;
}

}  // namespace

std::string RunConfig::to_toml() const {
    std::ostringstream out;
    std::vector<std::string> strat_names;
    for (auto s : strategies) strat_names.push_back(strategy_name(s));
    out << "inputs = " << toml_string_array(inputs) << "\n"
        << "date_column = \"" << date_column << "\"\n"
        << "align = \"" << align_policy_name(align) << "\"\n"
        << "window = " << window << "\n"
        << "step = " << step << "\n"
        << "lag = " << lag << "\n"
        << "corr_method = \"" << corr_method_name(corr_method) << "\"\n"
        << "include_own_lag = " << (include_own_lag ? "true" : "false") << "\n"
        << "network_threshold = " << fmt6(network_threshold) << "\n"
        << "estimator = \"" << estimator << "\"\n"
        << "ewma_lambda = " << fmt6(ewma_lambda) << "\n"
        << "ewma_burn_in = " << ewma_burn_in << "\n"
        << "strategies = " << toml_string_array(strat_names) << "\n"
        << "alpha = " << fmt6(alpha) << "\n"
        << "long_only = " << (long_only ? "true" : "false") << "\n"
        << "annualize = " << (annualize ? "true" : "false") << "\n"
        << "ers_lag = " << ers_lag << "\n"
        << "mask_level = " << fmt6(mask_level) << "\n"
        << "output_dir = \"" << output_dir << "\"\n"
        << "seed = " << seed << "\n";
    return out.str();
}

std::string RunConfig::to_json() const {
    nlohmann::json j;
    j["inputs"] = inputs;
    j["date_column"] = date_column;
    j["align"] = align_policy_name(align);
    j["window"] = window;
    j["step"] = step;
    j["lag"] = lag;
    j["corr_method"] = corr_method_name(corr_method);
    j["include_own_lag"] = include_own_lag;
    j["network_threshold"] = network_threshold;
    j["estimator"] = estimator;
    j["ewma_lambda"] = ewma_lambda;
    j["ewma_burn_in"] = ewma_burn_in;
    std::vector<std::string> strat_names;
    for (auto s : strategies) strat_names.push_back(strategy_name(s));
    j["strategies"] = strat_names;
    j["alpha"] = alpha;
    j["long_only"] = long_only;
    j["annualize"] = annualize;
    j["ers_lag"] = ers_lag;
    j["mask_level"] = mask_level;
    j["output_dir"] = output_dir;
    j["seed"] = seed;
    return j.dump(2);
}

}  // namespace spillover
