#include "adrcwave/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "adrcwave/error.hpp"

namespace adrcwave {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
    throw Error(ErrorKind::Config, "invalid value '" + value + "' for " + key + " (expected " + expected + ")");
}

double parse_double(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad_value(key, value, "a real number");
    return out;
}

long long parse_int(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    long long out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad_value(key, value, "an integer");
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    bad_value(key, value, "true or false");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    for (const std::string& item : split_list(value)) out.push_back(parse_double(key, item));
    return out;
}

std::string format_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_double(v[i]);
    }
    return out;
}

InitPreset parse_preset(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (v == "zero") return InitPreset::Zero;
    if (v == "random-smooth" || v == "random") return InitPreset::RandomSmooth;
    if (v == "zero-output-witness" || v == "witness") return InitPreset::ZeroOutputWitness;
    if (v == "truth") return InitPreset::Truth;
    bad_value(key, value, "zero, random-smooth, zero-output-witness or truth");
}

const char* disturbance_name(DisturbanceSpec::Kind k) {
    switch (k) {
        case DisturbanceSpec::Kind::Zero:
            return "zero";
        case DisturbanceSpec::Kind::Constant:
            return "constant";
        case DisturbanceSpec::Kind::SinusoidSum:
            return "sinusoid_sum";
        case DisturbanceSpec::Kind::Decaying:
            return "decaying";
        case DisturbanceSpec::Kind::BoundedNoise:
            return "bounded_noise";
    }
    return "zero";
}

const char* uncertainty_name(UncertaintySpec::Kind k) {
    switch (k) {
        case UncertaintySpec::Kind::Zero:
            return "zero";
        case UncertaintySpec::Kind::TraceSine:
            return "trace_sine";
        case UncertaintySpec::Kind::LinearFunctional:
            return "linear_functional";
    }
    return "zero";
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

const std::vector<std::string>& option_keys() {
    static const std::vector<std::string> keys = {
        "plant.variant",        "plant.q",
        "estimator.c0",         "estimator.c1",
        "controller.c2",        "controller.c3",
        "disturbance.kind",     "disturbance.amplitude",
        "disturbance.rate",     "disturbance.theta",
        "disturbance.vartheta", "disturbance.alpha",
        "disturbance.bound",    "disturbance.seed",
        "uncertainty.kind",     "uncertainty.k",
        "uncertainty.x0",       "uncertainty.a",
        "uncertainty.b",        "init.plant",
        "init.estimator",       "init.observer",
        "init.seed",            "init.amplitude",
        "run.n",                "run.T",
        "run.cadence",          "run.open_loop",
        "run.open_loop_u",      "run.filter_fhat",
        "run.exact_fhat",       "run.strict_compat",
        "run.compat_tol",       "run.max_amplitude",
        "run.fit_start",        "run.fit_end",
    };
    return keys;
}

void set_option(ScenarioConfig& c, const std::string& key, const std::string& raw) {
    const std::string value = trim(raw);
    if (key == "plant.variant") {
        if (value == "spring") c.plant.variant = Variant::Spring;
        else if (value == "damper") c.plant.variant = Variant::Damper;
        else bad_value(key, value, "spring or damper");
    } else if (key == "plant.q") c.plant.q = parse_double(key, value);
    else if (key == "estimator.c0") c.estimator.c0 = parse_double(key, value);
    else if (key == "estimator.c1") c.estimator.c1 = parse_double(key, value);
    else if (key == "controller.c2") c.controller.c2 = parse_double(key, value);
    else if (key == "controller.c3") c.controller.c3 = parse_double(key, value);
    else if (key == "disturbance.kind") {
        using K = DisturbanceSpec::Kind;
        if (value == "zero") c.disturbance.kind = K::Zero;
        else if (value == "constant") c.disturbance.kind = K::Constant;
        else if (value == "sinusoid_sum") c.disturbance.kind = K::SinusoidSum;
        else if (value == "decaying") c.disturbance.kind = K::Decaying;
        else if (value == "bounded_noise") c.disturbance.kind = K::BoundedNoise;
        else bad_value(key, value, "zero, constant, sinusoid_sum, decaying or bounded_noise");
    } else if (key == "disturbance.amplitude") c.disturbance.amplitude = parse_double(key, value);
    else if (key == "disturbance.rate") c.disturbance.rate = parse_double(key, value);
    else if (key == "disturbance.theta") c.disturbance.theta = parse_list(key, value);
    else if (key == "disturbance.vartheta") c.disturbance.vartheta = parse_list(key, value);
    else if (key == "disturbance.alpha") c.disturbance.alpha = parse_list(key, value);
    else if (key == "disturbance.bound") c.disturbance.bound = parse_double(key, value);
    else if (key == "disturbance.seed") c.disturbance.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "uncertainty.kind") {
        using K = UncertaintySpec::Kind;
        if (value == "zero") c.uncertainty.kind = K::Zero;
        else if (value == "trace_sine") c.uncertainty.kind = K::TraceSine;
        else if (value == "linear_functional") c.uncertainty.kind = K::LinearFunctional;
        else bad_value(key, value, "zero, trace_sine or linear_functional");
    } else if (key == "uncertainty.k") c.uncertainty.k = parse_double(key, value);
    else if (key == "uncertainty.x0") c.uncertainty.x0 = parse_double(key, value);
    else if (key == "uncertainty.a") c.uncertainty.a = parse_double(key, value);
    else if (key == "uncertainty.b") c.uncertainty.b = parse_double(key, value);
    else if (key == "init.plant") c.plant_init = parse_preset(key, value);
    else if (key == "init.estimator") c.estimator_init = parse_preset(key, value);
    else if (key == "init.observer") c.observer_init = parse_preset(key, value);
    else if (key == "init.seed") c.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "init.amplitude") c.init_amplitude = parse_double(key, value);
    else if (key == "run.n") c.n = static_cast<int>(parse_int(key, value));
    else if (key == "run.T") c.T = parse_double(key, value);
    else if (key == "run.cadence") c.cadence = static_cast<int>(parse_int(key, value));
    else if (key == "run.open_loop") c.open_loop = parse_bool(key, value);
    else if (key == "run.open_loop_u") c.open_loop_u = parse_double(key, value);
    else if (key == "run.filter_fhat") c.filter_fhat = parse_bool(key, value);
    else if (key == "run.exact_fhat") c.exact_fhat = parse_bool(key, value);
    else if (key == "run.strict_compat") c.strict_compat = parse_bool(key, value);
    else if (key == "run.compat_tol") c.compat_tol = parse_double(key, value);
    else if (key == "run.max_amplitude") c.max_amplitude = parse_double(key, value);
    else if (key == "run.fit_start") c.fit_start = parse_double(key, value);
    else if (key == "run.fit_end") c.fit_end = parse_double(key, value);
    else throw Error(ErrorKind::Config, "unknown config key '" + key + "'");
}

std::string get_option(const ScenarioConfig& c, const std::string& key) {
    auto b = [](bool v) { return std::string(v ? "true" : "false"); };
    if (key == "plant.variant") return to_string(c.plant.variant);
    if (key == "plant.q") return format_double(c.plant.q);
    if (key == "estimator.c0") return format_double(c.estimator.c0);
    if (key == "estimator.c1") return format_double(c.estimator.c1);
    if (key == "controller.c2") return format_double(c.controller.c2);
    if (key == "controller.c3") return format_double(c.controller.c3);
    if (key == "disturbance.kind") return disturbance_name(c.disturbance.kind);
    if (key == "disturbance.amplitude") return format_double(c.disturbance.amplitude);
    if (key == "disturbance.rate") return format_double(c.disturbance.rate);
    if (key == "disturbance.theta") return format_list(c.disturbance.theta);
    if (key == "disturbance.vartheta") return format_list(c.disturbance.vartheta);
    if (key == "disturbance.alpha") return format_list(c.disturbance.alpha);
    if (key == "disturbance.bound") return format_double(c.disturbance.bound);
    if (key == "disturbance.seed") return std::to_string(c.disturbance.seed);
    if (key == "uncertainty.kind") return uncertainty_name(c.uncertainty.kind);
    if (key == "uncertainty.k") return format_double(c.uncertainty.k);
    if (key == "uncertainty.x0") return format_double(c.uncertainty.x0);
    if (key == "uncertainty.a") return format_double(c.uncertainty.a);
    if (key == "uncertainty.b") return format_double(c.uncertainty.b);
    if (key == "init.plant") return to_string(c.plant_init);
    if (key == "init.estimator") return to_string(c.estimator_init);
    if (key == "init.observer") return to_string(c.observer_init);
    if (key == "init.seed") return std::to_string(c.seed);
    if (key == "init.amplitude") return format_double(c.init_amplitude);
    if (key == "run.n") return std::to_string(c.n);
    if (key == "run.T") return format_double(c.T);
    if (key == "run.cadence") return std::to_string(c.cadence);
    if (key == "run.open_loop") return b(c.open_loop);
    if (key == "run.open_loop_u") return format_double(c.open_loop_u);
    if (key == "run.filter_fhat") return b(c.filter_fhat);
    if (key == "run.exact_fhat") return b(c.exact_fhat);
    if (key == "run.strict_compat") return b(c.strict_compat);
    if (key == "run.compat_tol") return format_double(c.compat_tol);
    if (key == "run.max_amplitude") return format_double(c.max_amplitude);
    if (key == "run.fit_start") return format_double(c.fit_start);
    if (key == "run.fit_end") return format_double(c.fit_end);
    throw Error(ErrorKind::Config, "unknown config key '" + key + "'");
}

ConfigDocument parse_config(const std::string& text) {
    ConfigDocument doc;
    std::stringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw Error(ErrorKind::Config, "line " + std::to_string(lineno) + ": malformed section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::Config, "line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            throw Error(ErrorKind::Config, "line " + std::to_string(lineno) + ": key '" + key +
                                               "' appears before any [section]");
        }
        if (section == "sweep") {
            const auto values = split_list(value);
            ScenarioConfig probe = doc.scenario;
            for (const std::string& v : values) set_option(probe, key, v);
            doc.sweep.emplace_back(key, values);
            continue;
        }
        set_option(doc.scenario, section + "." + key, value);
    }
    return doc;
}

ConfigDocument load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot read config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string echo_config(const ScenarioConfig& cfg) {
    std::string out;
    std::string section;
    for (const std::string& key : option_keys()) {
        const auto dot = key.find('.');
        const std::string sec = key.substr(0, dot);
        if (sec != section) {
            if (!section.empty()) out += "\n";
            out += "[" + sec + "]\n";
            section = sec;
        }
        out += key.substr(dot + 1) + " = " + get_option(cfg, key) + "\n";
    }
    return out;
}

ScenarioConfig resolve(const ScenarioConfig& cfg) {
    ScenarioConfig out = cfg;
    if (out.n > 0) out.disturbance.hold = out.dt();
    return out;
}

}  // namespace adrcwave
