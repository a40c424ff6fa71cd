#include "qprobe/scenario.hpp"

#include "qprobe/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace qprobe {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& value) {
    double x = 0.0;
    const auto* first = value.data();
    const auto* last = value.data() + value.size();
    if (!value.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc() || ptr != last || value.empty()) throw ConfigError(key + ": expected a real number, got '" + value + "'");
    if (!std::isfinite(x)) throw ConfigError(key + ": value must be finite");
    return x;
}

std::size_t parse_count(const std::string& key, const std::string& value) {
    std::size_t x = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
    }
    return x;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

// Key/value table that remembers which keys were consumed.
class Table {
public:
    void set(const std::string& key, const std::string& value, std::size_t line) {
        if (!values_.emplace(key, value).second) {
            throw ConfigError(key + ": duplicate key (line " + std::to_string(line) + ")");
        }
    }
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::optional<std::string> take(const std::string& key) {
        auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        used_.insert(key);
        return it->second;
    }
    std::string require(const std::string& key) {
        auto v = take(key);
        if (!v) throw ConfigError(key + ": required key is missing");
        return *v;
    }
    void reject_unused() const {
        for (const auto& [k, v] : values_) {
            if (!used_.count(k)) throw ConfigError(k + ": unknown or inapplicable key");
        }
    }
    const std::map<std::string, std::string>& all() const { return values_; }

private:
    std::map<std::string, std::string> values_;
    std::set<std::string> used_;
};

BosonMode read_mode(Table& t, const std::string& prefix, std::size_t default_trunc) {
    BosonMode m;
    m.omega = parse_real(prefix + ".omega", t.require(prefix + ".omega"));
    double gr = 0.0, gi = 0.0;
    if (auto v = t.take(prefix + ".g")) gr = parse_real(prefix + ".g", *v);
    if (auto v = t.take(prefix + ".g_imag")) gi = parse_real(prefix + ".g_imag", *v);
    m.g = cplx(gr, gi);
    m.n_trunc = default_trunc;
    if (auto v = t.take(prefix + ".n_trunc")) m.n_trunc = parse_count(prefix + ".n_trunc", *v);
    return m;
}

std::string format_list(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += format_real(xs[i]);
    }
    return out;
}

} // namespace

std::string format_real(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    if (ec != std::errc()) throw std::runtime_error("format_real: conversion failed");
    return std::string(buf, ptr);
}

std::vector<double> parse_grid(const std::string& key, const std::string& value) {
    if (value.empty()) throw ConfigError(key + ": empty grid");
    std::vector<double> out;
    if (value.find(':') != std::string::npos) {
        const auto parts = split(value, ':');
        if (parts.size() != 3) throw ConfigError(key + ": grid must be start:stop:count");
        const double a = parse_real(key, parts[0]);
        const double b = parse_real(key, parts[1]);
        const std::size_t n = parse_count(key, parts[2]);
        if (n < 2) throw ConfigError(key + ": grid needs at least two points");
        for (std::size_t i = 0; i < n; ++i) {
            out.push_back(i + 1 == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
        }
    } else {
        for (const auto& p : split(value, ',')) out.push_back(parse_real(key, p));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.size() < 2) throw ConfigError(key + ": grid needs min < max");
    return out;
}

Scenario parse_scenario(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        t.set(key, trim(line.substr(eq + 1)), lineno);
    }

    Scenario s;
    s.beta = parse_real("beta", t.require("beta"));
    if (!(s.beta > 0.0)) throw ConfigError("beta: inverse temperature must be > 0");

    const std::string sys_kind = t.require("system.kind");
    if (sys_kind == "two_level") {
        s.system.kind = SystemKind::two_level;
        s.system.delta = parse_real("system.delta", t.require("system.delta"));
        s.system.levels = 2;
    } else if (sys_kind == "truncated_oscillator") {
        s.system.kind = SystemKind::truncated_oscillator;
        s.system.omega = parse_real("system.omega", t.require("system.omega"));
        s.system.levels = parse_count("system.levels", t.require("system.levels"));
    } else {
        throw ConfigError("system.kind: expected two_level or truncated_oscillator, got '" + sys_kind + "'");
    }

    std::size_t default_trunc = kDefaultTruncation;
    if (auto v = t.take("apparatus.n_trunc")) default_trunc = parse_count("apparatus.n_trunc", *v);
    const std::string app_kind = t.take("apparatus.kind").value_or("boson_bath");
    if (app_kind == "boson_bath") {
        s.apparatus.kind = ApparatusKind::boson_bath;
        for (std::size_t i = 1;; ++i) {
            const std::string prefix = "apparatus.mode." + std::to_string(i);
            if (!t.has(prefix + ".omega")) break;
            s.apparatus.modes.push_back(read_mode(t, prefix, default_trunc));
        }
    } else if (app_kind == "single_cavity") {
        s.apparatus.kind = ApparatusKind::single_cavity;
        s.apparatus.modes.push_back(read_mode(t, "apparatus.cavity", default_trunc));
    } else {
        throw ConfigError("apparatus.kind: expected boson_bath or single_cavity, got '" + app_kind + "'");
    }

    const std::string cpl_kind = t.take("coupling.kind").value_or("dephasing");
    if (cpl_kind == "dephasing") {
        s.coupling.kind = CouplingKind::dephasing;
        const std::string rule = t.take("coupling.lambda").value_or("sqrt_n");
        if (rule == "sqrt_n") {
            s.coupling.lambda_rule = LambdaRule::sqrt_n;
        } else if (rule == "list") {
            s.coupling.lambda_rule = LambdaRule::explicit_list;
            for (const auto& p : split(t.require("coupling.lambda.values"), ',')) {
                s.coupling.lambda_values.push_back(parse_real("coupling.lambda.values", p));
            }
        } else {
            throw ConfigError("coupling.lambda: expected sqrt_n or list, got '" + rule + "'");
        }
    } else if (cpl_kind == "dipole") {
        s.coupling.kind = CouplingKind::dipole;
        if (auto v = t.take("coupling.rotating_wave")) s.coupling.rotating_wave = parse_bool("coupling.rotating_wave", *v);
    } else {
        throw ConfigError("coupling.kind: expected dephasing or dipole, got '" + cpl_kind + "'");
    }

    auto& a = s.analysis;
    if (auto v = t.take("analysis.beta_eff_tol")) a.beta_eff_tol = parse_real("analysis.beta_eff_tol", *v);
    if (auto v = t.take("analysis.max_dim")) a.max_dim = parse_count("analysis.max_dim", *v);
    if (auto v = t.take("analysis.degeneracy_tol")) a.degeneracy_tol = parse_real("analysis.degeneracy_tol", *v);
    if (auto v = t.take("analysis.fock_padding")) a.fock_padding = parse_count("analysis.fock_padding", *v);
    if (auto v = t.take("analysis.tls_max_terms")) a.tls_max_terms = parse_count("analysis.tls_max_terms", *v);
    if (auto v = t.take("analysis.delta_u_unnormalized")) a.delta_u_unnormalized = parse_bool("analysis.delta_u_unnormalized", *v);
    if (auto v = t.take("analysis.density_band")) a.density_band = parse_count("analysis.density_band", *v);
    if (auto v = t.take("analysis.density_ratio")) a.density_ratio = parse_real("analysis.density_ratio", *v);
    if (a.density_band.has_value() != a.density_ratio.has_value()) {
        throw ConfigError(std::string(a.density_band ? "analysis.density_ratio" : "analysis.density_band") +
                          ": density_band and density_ratio must be given together");
    }
    if (!(a.beta_eff_tol >= 0.0)) throw ConfigError("analysis.beta_eff_tol: must be >= 0");

    if (auto v = t.take("sweep.lambda")) s.sweep.lambda = parse_grid("sweep.lambda", *v);
    if (auto v = t.take("sweep.g")) s.sweep.g = parse_grid("sweep.g", *v);
    if (auto v = t.take("sweep.beta")) s.sweep.beta = parse_grid("sweep.beta", *v);

    t.reject_unused();
    validate(s.system, s.apparatus, s.coupling);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open scenario file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string serialize_scenario(const Scenario& s) {
    std::ostringstream out;
    out << "beta = " << format_real(s.beta) << '\n';
    if (s.system.kind == SystemKind::two_level) {
        out << "system.kind = two_level\n";
        out << "system.delta = " << format_real(s.system.delta) << '\n';
    } else {
        out << "system.kind = truncated_oscillator\n";
        out << "system.omega = " << format_real(s.system.omega) << '\n';
        out << "system.levels = " << s.system.levels << '\n';
    }
    auto write_mode = [&out](const std::string& prefix, const BosonMode& m) {
        out << prefix << ".omega = " << format_real(m.omega) << '\n';
        out << prefix << ".g = " << format_real(m.g.real()) << '\n';
        if (m.g.imag() != 0.0) out << prefix << ".g_imag = " << format_real(m.g.imag()) << '\n';
        out << prefix << ".n_trunc = " << m.n_trunc << '\n';
    };
    if (s.apparatus.kind == ApparatusKind::boson_bath) {
        out << "apparatus.kind = boson_bath\n";
        for (std::size_t k = 0; k < s.apparatus.modes.size(); ++k) write_mode("apparatus.mode." + std::to_string(k + 1), s.apparatus.modes[k]);
    } else {
        out << "apparatus.kind = single_cavity\n";
        write_mode("apparatus.cavity", s.apparatus.modes.at(0));
    }
    if (s.coupling.kind == CouplingKind::dephasing) {
        out << "coupling.kind = dephasing\n";
        if (s.coupling.lambda_rule == LambdaRule::sqrt_n) {
            out << "coupling.lambda = sqrt_n\n";
        } else {
            out << "coupling.lambda = list\n";
            out << "coupling.lambda.values = " << format_list(s.coupling.lambda_values) << '\n';
        }
    } else {
        out << "coupling.kind = dipole\n";
        out << "coupling.rotating_wave = " << (s.coupling.rotating_wave ? "true" : "false") << '\n';
    }
    const auto& a = s.analysis;
    out << "analysis.beta_eff_tol = " << format_real(a.beta_eff_tol) << '\n';
    out << "analysis.max_dim = " << a.max_dim << '\n';
    if (a.degeneracy_tol) out << "analysis.degeneracy_tol = " << format_real(*a.degeneracy_tol) << '\n';
    out << "analysis.fock_padding = " << a.fock_padding << '\n';
    out << "analysis.tls_max_terms = " << a.tls_max_terms << '\n';
    out << "analysis.delta_u_unnormalized = " << (a.delta_u_unnormalized ? "true" : "false") << '\n';
    if (a.density_band) {
        out << "analysis.density_band = " << *a.density_band << '\n';
        out << "analysis.density_ratio = " << format_real(*a.density_ratio) << '\n';
    }
    if (s.sweep.lambda) out << "sweep.lambda = " << format_list(*s.sweep.lambda) << '\n';
    if (s.sweep.g) out << "sweep.g = " << format_list(*s.sweep.g) << '\n';
    if (s.sweep.beta) out << "sweep.beta = " << format_list(*s.sweep.beta) << '\n';
    return out.str();
}

} // namespace qprobe
