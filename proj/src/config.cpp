#include "seqlep/config.hpp"

#include "seqlep/lepski_adaptive.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>

namespace seqlep {

namespace {

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r");
    return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        items.push_back(trim(std::string_view(text).substr(start, comma - start)));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return items;
}

// Every parser throws std::invalid_argument with a short reason; the caller adds location.
double parse_real(const std::string& text) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("expected a real number, got '" + text + "'");
    }
    return value;
}

std::uint64_t parse_unsigned(const std::string& text) {
    std::uint64_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("expected a non-negative integer, got '" + text + "'");
    }
    return value;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) {
        out.push_back(parse_real(item));
    }
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
    std::vector<std::size_t> out;
    for (const auto& item : split_list(text)) {
        out.push_back(static_cast<std::size_t>(parse_unsigned(item)));
    }
    return out;
}

using Setter = std::function<void(ScenarioConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"signal.kind",
         [](ScenarioConfig& s, const std::string& v) {
             if (v == "benchmark") {
                 s.signal.kind = SignalSpec::Kind::benchmark;
             } else if (v == "constant") {
                 s.signal.kind = SignalSpec::Kind::constant;
             } else {
                 throw std::invalid_argument("signal.kind must be 'benchmark' or 'constant', got '" + v + "'");
             }
         }},
        {"signal.beta", [](ScenarioConfig& s, const std::string& v) { s.signal.beta = parse_real(v); }},
        {"signal.z0", [](ScenarioConfig& s, const std::string& v) { s.signal.z0 = parse_real(v); }},
        {"signal.c", [](ScenarioConfig& s, const std::string& v) { s.signal.c = parse_real(v); }},
        {"n_list", [](ScenarioConfig& s, const std::string& v) { s.n_list = parse_size_list(v); }},
        {"replications",
         [](ScenarioConfig& s, const std::string& v) { s.replications = static_cast<std::size_t>(parse_unsigned(v)); }},
        {"grid.beta_lo", [](ScenarioConfig& s, const std::string& v) { s.grid.beta_lo = parse_real(v); }},
        {"grid.beta_hi", [](ScenarioConfig& s, const std::string& v) { s.grid.beta_hi = parse_real(v); }},
        {"grid.K", [](ScenarioConfig& s, const std::string& v) { s.grid.K = parse_real(v); }},
        {"grid.lambda",
         [](ScenarioConfig& s, const std::string& v) {
             if (v == "default") {
                 s.grid.lambda.reset();
             } else {
                 s.grid.lambda = parse_real(v);
             }
         }},
        {"seed", [](ScenarioConfig& s, const std::string& v) { s.seed = parse_unsigned(v); }},
        {"out_dir", [](ScenarioConfig& s, const std::string& v) { s.out_dir = v; }},
        {"tail.n", [](ScenarioConfig& s, const std::string& v) { s.tail_n = parse_unsigned(v); }},
        {"tail.h", [](ScenarioConfig& s, const std::string& v) { s.tail_h = parse_real(v); }},
        {"tail.h_beta", [](ScenarioConfig& s, const std::string& v) { s.tail_h_beta = parse_real(v); }},
        {"tail.z_list", [](ScenarioConfig& s, const std::string& v) { s.tail_z_list = parse_real_list(v); }},
        {"moments.n", [](ScenarioConfig& s, const std::string& v) { s.moments_n = parse_unsigned(v); }},
        {"stopping.n_list", [](ScenarioConfig& s, const std::string& v) { s.stopping_n_list = parse_size_list(v); }},
        {"stopping.h_list", [](ScenarioConfig& s, const std::string& v) { s.stopping_h_list = parse_real_list(v); }},
        {"stopping.h_beta_list",
         [](ScenarioConfig& s, const std::string& v) { s.stopping_h_beta_list = parse_real_list(v); }},
        {"lowerbound.n", [](ScenarioConfig& s, const std::string& v) { s.lowerbound_n = parse_unsigned(v); }},
        {"trace.n", [](ScenarioConfig& s, const std::string& v) { s.trace_n = parse_unsigned(v); }},
        {"trace.replication", [](ScenarioConfig& s, const std::string& v) { s.trace_replication = parse_unsigned(v); }},
    };
    return table;
}

bool valid_identifier(const std::string& id) {
    if (id.empty()) {
        return false;
    }
    for (const char c : id) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
            return false;
        }
    }
    return true;
}

void require(bool condition, const std::string& field, const std::string& reason) {
    if (!condition) {
        throw ValidationError(field, reason);
    }
}

}  // namespace

SignalFunction SignalSpec::make() const {
    return kind == Kind::benchmark ? make_benchmark_signal(beta, z0) : make_constant_signal(c, z0, beta);
}

double ScenarioConfig::tail_bandwidth() const {
    return tail_h ? *tail_h : rate_bandwidth(tail_n, tail_h_beta.value_or(signal.beta));
}

std::vector<BandwidthRule> ScenarioConfig::stopping_rules() const {
    std::vector<BandwidthRule> rules;
    for (const double h : stopping_h_list) {
        rules.push_back(BandwidthRule::fixed(h));
    }
    for (const double beta : stopping_h_beta_list.value_or(std::vector<double>{signal.beta})) {
        rules.push_back(BandwidthRule::rate(beta));
    }
    return rules;
}

std::vector<std::size_t> ScenarioConfig::stopping_sizes() const { return stopping_n_list.value_or(n_list); }

ExperimentConfig parse_config(std::istream& in, const std::string& source_name) {
    ExperimentConfig config;
    config.source = source_name;
    ScenarioConfig* current = &config.defaults;
    std::string line;
    std::size_t line_number = 0;
    auto fail = [&](const std::string& reason) {
        throw ConfigError(fmt::format("{}:{}: {}", source_name, line_number, reason));
    };

    while (std::getline(in, line)) {
        ++line_number;
        const auto hash = line.find('#');
        const std::string text = trim(std::string_view(line).substr(0, hash));
        if (text.empty()) {
            continue;
        }
        if (text.front() == '[') {
            if (text.back() != ']') {
                fail("unterminated section header");
            }
            const std::string inner = trim(std::string_view(text).substr(1, text.size() - 2));
            const std::string keyword = "scenario";
            if (inner.rfind(keyword, 0) != 0) {
                fail("unknown section '" + inner + "', expected [scenario NAME]");
            }
            const std::string id = trim(std::string_view(inner).substr(keyword.size()));
            if (!valid_identifier(id)) {
                fail("scenario name must be non-empty and use [A-Za-z0-9_.-]");
            }
            for (const auto& existing : config.scenarios) {
                if (existing.id == id) {
                    fail("duplicate scenario '" + id + "'");
                }
            }
            config.scenarios.push_back(config.defaults);
            config.scenarios.back().id = id;
            current = &config.scenarios.back();
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            fail("expected 'key = value'");
        }
        const std::string key = trim(std::string_view(text).substr(0, eq));
        const std::string value = trim(std::string_view(text).substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            fail("unknown key '" + key + "'");
        }
        try {
            it->second(*current, value);
        } catch (const std::invalid_argument& e) {
            fail(key + ": " + e.what());
        }
    }
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path.string() + ":0: cannot open configuration file");
    }
    return parse_config(in, path.string());
}

void validate(const ScenarioConfig& s) {
    const std::string prefix = s.id + ".";
    if (s.signal.kind == SignalSpec::Kind::benchmark) {
        require(s.signal.beta > 0.0 && s.signal.beta <= 1.0, prefix + "signal.beta", "must lie in (0, 1]");
    } else {
        require(std::fabs(s.signal.c) < 1.0, prefix + "signal.c", "constant signal needs |c| < 1");
        require(s.signal.beta > 0.0 && s.signal.beta <= 1.0, prefix + "signal.beta", "must lie in (0, 1]");
    }
    require(s.signal.z0 > 0.0 && s.signal.z0 < 1.0, prefix + "signal.z0", "must lie in (0, 1)");
    for (const std::size_t n : s.n_list) {
        require(n >= 3, prefix + "n_list", "every sample size must be at least 3");
    }
    require(s.replications >= 1, prefix + "replications", "must be at least 1");
    require(s.grid.beta_lo > 0.0 && s.grid.beta_lo < s.grid.beta_hi, prefix + "grid.beta_lo",
            "need 0 < grid.beta_lo < grid.beta_hi");
    require(s.grid.beta_hi <= 1.0, prefix + "grid.beta_hi", "must be at most 1");
    require(s.grid.K > 0.0, prefix + "grid.K", "must be positive");
    require(!s.grid.lambda || *s.grid.lambda > 0.0, prefix + "grid.lambda", "must be positive");
    require(s.tail_n >= 3, prefix + "tail.n", "must be at least 3");
    require(!s.tail_h || *s.tail_h > 0.0, prefix + "tail.h", "must be positive");
    require(!s.tail_h_beta || (*s.tail_h_beta > 0.0 && *s.tail_h_beta <= 1.0), prefix + "tail.h_beta",
            "must lie in (0, 1]");
    for (const double z : s.tail_z_list) {
        require(z >= 2.0, prefix + "tail.z_list", "every z must be >= 2");
    }
    require(s.moments_n >= 2, prefix + "moments.n", "must be at least 2");
    for (const std::size_t n : s.stopping_sizes()) {
        require(n >= 3, prefix + "stopping.n_list", "every sample size must be at least 3");
    }
    for (const double h : s.stopping_h_list) {
        require(h > 0.0, prefix + "stopping.h_list", "every bandwidth must be positive");
    }
    if (s.stopping_h_beta_list) {
        for (const double beta : *s.stopping_h_beta_list) {
            require(beta > 0.0 && beta <= 1.0, prefix + "stopping.h_beta_list", "every beta must lie in (0, 1]");
        }
    }
    require(s.lowerbound_n >= 3, prefix + "lowerbound.n", "must be at least 3");
    require(s.trace_n >= 3, prefix + "trace.n", "must be at least 3");
}

void validate(const ExperimentConfig& config) {
    for (const auto& scenario : config.scenarios) {
        validate(scenario);
    }
}

}  // namespace seqlep
