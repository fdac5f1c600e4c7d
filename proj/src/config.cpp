#include "sburg/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sburg/errors.hpp"

namespace sburg {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (...) {
        throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
    }
}

long long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (...) {
        throw ConfigError("config: key '" + key + "' expects an integer, got '" + v + "'");
    }
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::istringstream is(v);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

SimConfig parse_config(const std::string& text, bool require_ergodic_regime) {
    SimConfig cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (key == "alpha") cfg.alpha = parse_double(key, val);
        else if (key == "theta") cfg.theta = parse_double(key, val);
        else if (key == "theta_prime") cfg.theta_prime = parse_double(key, val);
        else if (key == "delta") cfg.delta = parse_double(key, val);
        else if (key == "n_modes") cfg.n_modes = static_cast<int>(parse_int(key, val));
        else if (key == "dt") cfg.dt = parse_double(key, val);
        else if (key == "t_end") cfg.t_end = parse_double(key, val);
        else if (key == "r_truncation") cfg.r_truncation = val == "none" ? 0.0 : parse_double(key, val);
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, val));
        else if (key == "ensemble_size") cfg.ensemble_size = static_cast<std::size_t>(parse_int(key, val));
        else if (key == "observables") cfg.observables = split_list(val);
        else if (key == "output_path") cfg.output_path = val;
        else if (key == "initial_field") cfg.initial_field = val;
        else if (key == "record_stride") cfg.record_stride = static_cast<std::size_t>(parse_int(key, val));
        else if (key == "censor_budget") cfg.censor_budget = parse_double(key, val);
        else throw ConfigError("config: unknown key '" + key + "'");
    }

    if (!(cfg.alpha > 1.0 && cfg.alpha < 2.0))
        throw ConfigError("config: alpha must lie in the open interval (1,2); got " + fmt(cfg.alpha));
    if (!(cfg.delta > 0.0)) throw ConfigError("config: delta must be > 0");
    if (!(cfg.theta >= cfg.theta_prime))
        throw ConfigError("config: requires theta >= theta_prime");
    if (!(cfg.theta_prime >= 0.0)) throw ConfigError("config: theta_prime must be >= 0");
    if (require_ergodic_regime) {
        if (!(cfg.theta_prime > 1.5))
            throw ConfigError("config: theta_prime must exceed 3/2 for the ergodicity regime; got " +
                              fmt(cfg.theta_prime));
        if (!(cfg.theta < 2.0))
            throw ConfigError("config: theta must be below 2 for the ergodicity regime; got " +
                              fmt(cfg.theta));
    }
    if (cfg.n_modes < 1) throw ConfigError("config: n_modes must be >= 1");
    if (!(cfg.dt > 0.0)) throw ConfigError("config: dt must be > 0");
    if (!(cfg.t_end > 0.0)) throw ConfigError("config: t_end must be > 0");
    if (cfg.r_truncation < 0.0) throw ConfigError("config: r_truncation must be positive or 'none'");
    if (cfg.ensemble_size < 1) throw ConfigError("config: ensemble_size must be >= 1");
    if (cfg.record_stride < 1) throw ConfigError("config: record_stride must be >= 1");
    if (!(cfg.censor_budget >= 0.0 && cfg.censor_budget <= 1.0))
        throw ConfigError("config: censor_budget must lie in [0,1]");
    for (const auto& name : cfg.observables)
        if (name != "norm0" && name != "norm1" && name.rfind("cos_", 0) != 0 &&
            name.rfind("sin_", 0) != 0)
            throw ConfigError("config: unknown observable '" + name + "'");
    return cfg;
}

SimConfig load_config_file(const std::string& path, bool require_ergodic_regime) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), require_ergodic_regime);
}

std::string config_to_text(const SimConfig& cfg) {
    std::ostringstream os;
    os << "alpha = " << fmt(cfg.alpha) << '\n'
       << "theta = " << fmt(cfg.theta) << '\n'
       << "theta_prime = " << fmt(cfg.theta_prime) << '\n'
       << "delta = " << fmt(cfg.delta) << '\n'
       << "n_modes = " << cfg.n_modes << '\n'
       << "dt = " << fmt(cfg.dt) << '\n'
       << "t_end = " << fmt(cfg.t_end) << '\n';
    if (cfg.truncation_enabled())
        os << "r_truncation = " << fmt(cfg.r_truncation) << '\n';
    else
        os << "r_truncation = none\n";
    os << "seed = " << cfg.seed << '\n'
       << "ensemble_size = " << cfg.ensemble_size << '\n';
    os << "observables = ";
    for (std::size_t i = 0; i < cfg.observables.size(); ++i)
        os << (i ? "," : "") << cfg.observables[i];
    os << '\n';
    os << "output_path = " << cfg.output_path << '\n';
    if (!cfg.initial_field.empty()) os << "initial_field = " << cfg.initial_field << '\n';
    os << "record_stride = " << cfg.record_stride << '\n'
       << "censor_budget = " << fmt(cfg.censor_budget) << '\n';
    return os.str();
}

SpectralField parse_initial_field(const std::string& desc, int n_modes) {
    SpectralField u(n_modes);
    if (trim(desc).empty()) return u;
    std::istringstream is(desc);
    std::string term;
    while (std::getline(is, term, ',')) {
        std::istringstream ts(term);
        double amp = 0.0;
        std::string kind;
        int k = 0;
        if (!(ts >> amp >> kind >> k) || (kind != "sin" && kind != "cos"))
            throw ConfigError("initial_field: expected terms like '0.1 sin 1', got '" + term + "'");
        if (k < 1 || k > n_modes)
            throw ConfigError("initial_field: wavenumber " + std::to_string(k) +
                              " outside 1..n_modes");
        std::string rest;
        if (ts >> rest) throw ConfigError("initial_field: trailing text in '" + term + "'");
        if (kind == "sin")
            u = u + SpectralField::from_trig_sin(n_modes, k, amp);
        else
            u = u + SpectralField::from_trig_cos(n_modes, k, amp);
    }
    return u;
}

} // namespace sburg
