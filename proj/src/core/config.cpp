#include "core/config.hpp"

#include <cmath>
#include <sstream>

#include "core/io.hpp"
#include "core/profile.hpp"

namespace ck {

namespace {

std::string trim(const std::string& s)
{
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v)
{
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (...) {
        throw ConfigError("config: " + key + " expects a number, got '" + v + "'");
    }
}

int parse_int(const std::string& key, const std::string& v)
{
    try {
        std::size_t pos = 0;
        int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (...) {
        throw ConfigError("config: " + key + " expects an integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "on" || v == "1") return true;
    if (v == "false" || v == "off" || v == "0") return false;
    throw ConfigError("config: " + key + " expects true/false, got '" + v + "'");
}

} // namespace

RunConfig parse_config(const std::string& text)
{
    RunConfig cfg;
    cfg.sectors.clear();
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const std::string fq = section.empty() ? key : section + "." + key;

        if (fq == "grid.k_max") cfg.k_max = parse_double(fq, val);
        else if (fq == "grid.N") cfg.N = parse_int(fq, val);
        else if (fq == "model.c0") cfg.c0 = parse_double(fq, val);
        else if (fq == "sectors.sector") {
            RunConfig::SectorSpec sp;
            std::size_t colon = val.find(':');
            if (colon == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": sector expects 'L M : expression'");
            std::istringstream lm(val.substr(0, colon));
            if (!(lm >> sp.l >> sp.m))
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": sector expects integer L M before ':'");
            sp.profile = trim(val.substr(colon + 1));
            if (sp.profile.empty())
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": sector profile expression is empty");
            cfg.sectors.push_back(std::move(sp));
        } else if (fq == "condensate.m_c0") cfg.m_c0 = parse_double(fq, val);
        else if (fq == "time.tau_min") cfg.tau_min = parse_double(fq, val);
        else if (fq == "time.tau_max") cfg.tau_max = parse_double(fq, val);
        else if (fq == "time.samples_per_decade") cfg.samples_per_decade = parse_int(fq, val);
        else if (fq == "time.t_max") cfg.t_max = parse_double(fq, val);
        else if (fq == "time.decay_samples") cfg.decay_samples = parse_int(fq, val);
        else if (fq == "residuals.dt") cfg.residual_dt = parse_double(fq, val);
        else if (fq == "residuals.samples") cfg.residual_samples = parse_int(fq, val);
        else if (fq == "tolerances.quad_tol") cfg.quad_tol = parse_double(fq, val);
        else if (fq == "tolerances.eig_tol") cfg.eig_tol = parse_double(fq, val);
        else if (fq == "output.dir") cfg.out_dir = val;
        else if (fq == "output.plots") cfg.plots = parse_bool(fq, val);
        else if (fq == "output.profiles") cfg.profiles = parse_bool(fq, val);
        else if (fq == "output.t_list") {
            std::istringstream ts(val);
            double t;
            cfg.t_list.clear();
            while (ts >> t) cfg.t_list.push_back(t);
        } else {
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" +
                              fq + "'");
        }
    }
    return cfg;
}

void RunConfig::validate() const
{
    if (!(k_max > 0.0)) throw ConfigError("config: k_max must be positive");
    if (N < 8) throw ConfigError("config: N >= 8 required");
    if (!(c0 > 0.0)) throw ConfigError("config: c0 must be positive");
    if (!(m_c0 > 0.0)) throw ConfigError("config: m_c0 must be positive");
    if (!(tau_min > 0.0) || !(tau_max > tau_min))
        throw ConfigError("config: need 0 < tau_min < tau_max");
    if (samples_per_decade < 2) throw ConfigError("config: samples_per_decade >= 2");
    if (decay_samples < 16) throw ConfigError("config: decay_samples >= 16");
    if (!(residual_dt > 0.0)) throw ConfigError("config: residuals.dt must be positive");
    if (residual_samples < 3) throw ConfigError("config: residuals.samples >= 3");
    if (!(quad_tol > 0.0) || !(eig_tol > 0.0))
        throw ConfigError("config: tolerances must be positive");
    if (t_max < 0.0) throw ConfigError("config: t_max must be nonnegative");
    for (const auto& s : sectors) {
        if (s.l < 0 || s.l > 8)
            throw ConfigError("config: sector L must satisfy 0 <= L <= 8");
        if (std::abs(s.m) > s.l) throw ConfigError("config: sector needs |m| <= L");
        parse_profile(s.profile); // throws with position on bad expressions
    }
    for (std::size_t i = 0; i < sectors.size(); ++i)
        for (std::size_t j = i + 1; j < sectors.size(); ++j)
            if (sectors[i].l == sectors[j].l && sectors[i].m == sectors[j].m)
                throw ConfigError("config: duplicate sector");
    for (double t : t_list)
        if (t < 0.0) throw ConfigError("config: t_list entries must be nonnegative");
}

std::string RunConfig::echo() const
{
    std::ostringstream os;
    os << "[grid]\n";
    os << "k_max = " << io::fmt17(k_max) << "\n";
    os << "N = " << N << "\n\n";
    os << "[model]\n";
    os << "c0 = " << io::fmt17(c0) << "\n\n";
    os << "[sectors]\n";
    for (const auto& s : sectors)
        os << "sector = " << s.l << " " << s.m << " : " << s.profile << "\n";
    os << "\n[condensate]\n";
    os << "m_c0 = " << io::fmt17(m_c0) << "\n\n";
    os << "[time]\n";
    os << "tau_min = " << io::fmt17(tau_min) << "\n";
    os << "tau_max = " << io::fmt17(tau_max) << "\n";
    os << "samples_per_decade = " << samples_per_decade << "\n";
    os << "t_max = " << io::fmt17(t_max) << "\n";
    os << "decay_samples = " << decay_samples << "\n\n";
    os << "[residuals]\n";
    os << "dt = " << io::fmt17(residual_dt) << "\n";
    os << "samples = " << residual_samples << "\n\n";
    os << "[tolerances]\n";
    os << "quad_tol = " << io::fmt17(quad_tol) << "\n";
    os << "eig_tol = " << io::fmt17(eig_tol) << "\n\n";
    os << "[output]\n";
    os << "dir = " << out_dir << "\n";
    os << "plots = " << (plots ? "true" : "false") << "\n";
    os << "profiles = " << (profiles ? "true" : "false") << "\n";
    if (!t_list.empty()) {
        os << "t_list =";
        for (double t : t_list) os << " " << io::fmt17(t);
        os << "\n";
    }
    return os.str();
}

RunConfig load_config(const std::string& path)
{
    return parse_config(io::read_text(path));
}

} // namespace ck
