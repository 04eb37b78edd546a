#include "mmgeo/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "mmgeo/errors.hpp"

namespace mmgeo {

namespace {

std::string trim(const std::string& str) {
    std::size_t b = 0, e = str.size();
    while (b < e && std::isspace(static_cast<unsigned char>(str[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(str[e - 1]))) --e;
    return str.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value,
                    int line) {
    const std::string v = trim(value);
    if (v.empty())
        throw config_error("config: empty value for '" + key + "'", key, line);
    char* end = nullptr;
    const double out = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || !std::isfinite(out))
        throw config_error(
            "config: '" + key + "' expects a finite number, got '" + v + "'",
            key, line);
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value,
                        int line) {
    const std::string v = trim(value);
    char* end = nullptr;
    if (v.empty() || v[0] == '-')
        throw config_error("config: '" + key + "' expects a non-negative "
                           "integer",
                           key, line);
    const unsigned long long out = std::strtoull(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size())
        throw config_error("config: '" + key + "' expects an integer, got '" +
                               v + "'",
                           key, line);
    return out;
}

bool parse_bool(const std::string& key, const std::string& value, int line) {
    const std::string v = trim(value);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw config_error("config: '" + key + "' expects true/false", key, line);
}

void require(bool ok, const std::string& key, int line, const char* what) {
    if (!ok)
        throw config_error("config: '" + key + "' " + what, key, line);
}

// Degrees <-> radians and dB <-> linear used consistently by the parser,
// the serializer and the sweep engine.
double from_deg(double deg) { return deg2rad(deg); }
double from_db(double db) { return std::pow(10.0, db / 10.0); }

// Print-side inverse that reproduces `stored` exactly when re-parsed: probe
// a few ulps around the analytic inverse.
double exact_inverse(double stored, double guess, double (*fwd)(double)) {
    if (fwd(guess) == stored) return guess;
    double lo = guess, hi = guess;
    for (int i = 0; i < 4; ++i) {
        lo = std::nextafter(lo, -HUGE_VAL);
        if (fwd(lo) == stored) return lo;
        hi = std::nextafter(hi, HUGE_VAL);
        if (fwd(hi) == stored) return hi;
    }
    return guess;
}

double to_deg(double rad) {
    return exact_inverse(rad, rad2deg(rad), &from_deg);
}

double to_db(double linear) {
    return exact_inverse(linear, 10.0 * std::log10(linear), &from_db);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

using Setter = std::function<void(RunConfig&, const std::string&, int)>;

// One handler per key; value-level range checks live here so errors carry
// the key and line.
const std::map<std::string, Setter>& key_table() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        const auto num = [](double Scenario::* field, double lo, double hi,
                            double (*conv)(double) = nullptr) {
            return [field, lo, hi, conv](RunConfig& c, const std::string& kv,
                                         int line) {
                const auto eq = kv.find('\n');
                const std::string key = kv.substr(0, eq);
                const std::string val = kv.substr(eq + 1);
                double v = parse_double(key, val, line);
                require(v >= lo && v <= hi, key, line, "is out of range");
                c.scenario.*field = conv ? conv(v) : v;
            };
        };
        const double inf = HUGE_VAL;
        t["d"] = num(&Scenario::d, 1e-9, inf);
        t["f_c"] = num(&Scenario::f_c, 1.0, inf);
        t["p_t_dbw"] = num(&Scenario::p_t, -300.0, 300.0, &from_db);
        t["phi_t_deg"] = num(&Scenario::phi_t, -360.0, 360.0, &from_deg);
        t["phi_r_deg"] = num(&Scenario::phi_r, -360.0, 360.0, &from_deg);
        t["theta_bt_deg"] =
            num(&Scenario::theta_bt, 1e-6, 180.0, &from_deg);
        t["theta_br_deg"] =
            num(&Scenario::theta_br, 1e-6, 180.0, &from_deg);
        t["theta_b_deg"] = [](RunConfig& c, const std::string& kv, int line) {
            const auto eq = kv.find('\n');
            const double v =
                parse_double(kv.substr(0, eq), kv.substr(eq + 1), line);
            require(v > 0.0 && v <= 180.0, kv.substr(0, eq), line,
                    "is out of range");
            c.scenario.theta_bt = from_deg(v);
            c.scenario.theta_br = from_deg(v);
        };
        t["lambda_b"] = num(&Scenario::lambda_b, 0.0, 1.0);
        const auto moment = [](double BlockageMoments::* field) {
            return [field](RunConfig& c, const std::string& kv, int line) {
                const auto eq = kv.find('\n');
                const std::string key = kv.substr(0, eq);
                const double v = parse_double(key, kv.substr(eq + 1), line);
                require(v > 0.0, key, line, "must be positive");
                c.scenario.moments.*field = v;
            };
        };
        t["e_l"] = moment(&BlockageMoments::e_l);
        t["e_w"] = moment(&BlockageMoments::e_w);
        t["e_l2"] = moment(&BlockageMoments::e_l2);
        t["e_w2"] = moment(&BlockageMoments::e_w2);
        t["orientation"] = [](RunConfig& c, const std::string& kv, int line) {
            const auto eq = kv.find('\n');
            const std::string key = kv.substr(0, eq);
            const std::string v = trim(kv.substr(eq + 1));
            if (v == "fixed")
                c.scenario.orientation = OrientationModel::Fixed;
            else if (v == "uniform")
                c.scenario.orientation = OrientationModel::UniformOverPi;
            else
                throw config_error("config: '" + key +
                                       "' expects fixed|uniform",
                                   key, line);
        };
        t["phi_b_deg"] = num(&Scenario::phi_b, -360.0, 360.0, &from_deg);
        t["lambda_h_raw"] = num(&Scenario::lambda_h_raw, 0.0, 1.0);
        t["w_h"] = num(&Scenario::w_h, 0.0, 100.0);
        t["p_self"] = num(&Scenario::p_self, 0.0, 1.0);
        t["carried"] = [](RunConfig& c, const std::string& kv, int line) {
            const auto eq = kv.find('\n');
            const std::string key = kv.substr(0, eq);
            const std::uint64_t v = parse_u64(key, kv.substr(eq + 1), line);
            require(v <= 1000, key, line, "is out of range");
            c.scenario.carried = static_cast<int>(v);
        };
        t["gamma_rm_db"] =
            num(&Scenario::gamma_rm, -300.0, 0.0, &from_db);
        t["second_order"] = [](RunConfig& c, const std::string& kv, int line) {
            const auto eq = kv.find('\n');
            c.scenario.second_order =
                parse_bool(kv.substr(0, eq), kv.substr(eq + 1), line);
        };
        t["upper_edge"] = [](RunConfig& c, const std::string& kv, int line) {
            const auto eq = kv.find('\n');
            const std::string key = kv.substr(0, eq);
            const std::string v = trim(kv.substr(eq + 1));
            if (v == "literal")
                c.scenario.upper_edge = UpperEdgeVariant::Literal;
            else if (v == "tan_corrected")
                c.scenario.upper_edge = UpperEdgeVariant::TanCorrected;
            else
                throw config_error("config: '" + key +
                                       "' expects literal|tan_corrected",
                                   key, line);
        };
        t["blockage"] = [](RunConfig& c, const std::string& kv, int line) {
            const auto eq = kv.find('\n');
            const std::string key = kv.substr(0, eq);
            const std::string v = trim(kv.substr(eq + 1));
            if (v == "auto")
                c.scenario.blockage_override.reset();
            else if (v == "general")
                c.scenario.blockage_override = BlockageVariant::General;
            else if (v == "fixed_approx")
                c.scenario.blockage_override =
                    BlockageVariant::FixedOrientationApprox;
            else
                throw config_error(
                    "config: '" + key + "' expects auto|general|fixed_approx",
                    key, line);
        };
        t["half_extent"] = [](RunConfig& c, const std::string& kv, int line) {
            const auto eq = kv.find('\n');
            const std::string key = kv.substr(0, eq);
            const double v = parse_double(key, kv.substr(eq + 1), line);
            require(v > 0.0, key, line, "must be positive");
            c.scene.half_extent = v;
        };
        const auto dim = [](DimDist SceneConfig::* field) {
            return [field](RunConfig& c, const std::string& kv, int line) {
                const auto eq = kv.find('\n');
                const std::string key = kv.substr(0, eq);
                const std::string v = trim(kv.substr(eq + 1));
                if (v == "constant")
                    c.scene.*field = DimDist::Constant;
                else if (v == "uniform")
                    c.scene.*field = DimDist::Uniform;
                else if (v == "exponential")
                    c.scene.*field = DimDist::Exponential;
                else
                    throw config_error(
                        "config: '" + key +
                            "' expects constant|uniform|exponential",
                        key, line);
            };
        };
        t["length_dist"] = dim(&SceneConfig::length_dist);
        t["width_dist"] = dim(&SceneConfig::width_dist);
        t["seed"] = [](RunConfig& c, const std::string& kv, int line) {
            const auto eq = kv.find('\n');
            c.scene.master_seed =
                parse_u64(kv.substr(0, eq), kv.substr(eq + 1), line);
        };
        t["realizations"] = [](RunConfig& c, const std::string& kv, int line) {
            const auto eq = kv.find('\n');
            const std::string key = kv.substr(0, eq);
            const std::uint64_t v = parse_u64(key, kv.substr(eq + 1), line);
            require(v >= 1, key, line, "must be at least 1");
            c.scene.realizations = v;
        };
        t["pdp_bin"] = [](RunConfig& c, const std::string& kv, int line) {
            const auto eq = kv.find('\n');
            const std::string key = kv.substr(0, eq);
            const double v = parse_double(key, kv.substr(eq + 1), line);
            require(v > 0.0, key, line, "must be positive");
            c.scene.pdp_bin = v;
        };
        return t;
    }();
    return table;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(
                "config: expected 'key = value' on line " +
                    std::to_string(line_no),
                "", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto& table = key_table();
        const auto it = table.find(key);
        if (it == table.end())
            throw config_error("config: unknown key '" + key + "'", key,
                               line_no);
        it->second(cfg, key + "\n" + value, line_no);
    }
    try {
        validate(cfg.scenario);
    } catch (const scenario_error& e) {
        throw config_error(std::string("config: ") + e.what(), "", 0);
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw io_error("cannot read config file: " + path);
    return parse_config_text(buf.str());
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    const Scenario& s = c.scenario;
    out << "# mmgeo configuration\n";
    out << "d = " << fmt(s.d) << "\n";
    out << "f_c = " << fmt(s.f_c) << "\n";
    out << "p_t_dbw = " << fmt(to_db(s.p_t)) << "\n";
    out << "phi_t_deg = " << fmt(to_deg(s.phi_t)) << "\n";
    out << "phi_r_deg = " << fmt(to_deg(s.phi_r)) << "\n";
    out << "theta_bt_deg = " << fmt(to_deg(s.theta_bt)) << "\n";
    out << "theta_br_deg = " << fmt(to_deg(s.theta_br)) << "\n";
    out << "lambda_b = " << fmt(s.lambda_b) << "\n";
    out << "e_l = " << fmt(s.moments.e_l) << "\n";
    out << "e_w = " << fmt(s.moments.e_w) << "\n";
    out << "e_l2 = " << fmt(s.moments.e_l2) << "\n";
    out << "e_w2 = " << fmt(s.moments.e_w2) << "\n";
    out << "orientation = "
        << (s.orientation == OrientationModel::Fixed ? "fixed" : "uniform")
        << "\n";
    out << "phi_b_deg = " << fmt(to_deg(s.phi_b)) << "\n";
    out << "lambda_h_raw = " << fmt(s.lambda_h_raw) << "\n";
    out << "w_h = " << fmt(s.w_h) << "\n";
    out << "p_self = " << fmt(s.p_self) << "\n";
    out << "carried = " << s.carried << "\n";
    out << "gamma_rm_db = " << fmt(to_db(s.gamma_rm)) << "\n";
    out << "second_order = " << (s.second_order ? "true" : "false") << "\n";
    out << "upper_edge = "
        << (s.upper_edge == UpperEdgeVariant::Literal ? "literal"
                                                      : "tan_corrected")
        << "\n";
    if (s.blockage_override)
        out << "blockage = "
            << (*s.blockage_override == BlockageVariant::General
                    ? "general"
                    : "fixed_approx")
            << "\n";
    else
        out << "blockage = auto\n";
    out << "half_extent = " << fmt(c.scene.half_extent) << "\n";
    const auto dim_name = [](DimDist d) {
        switch (d) {
            case DimDist::Constant:
                return "constant";
            case DimDist::Uniform:
                return "uniform";
            case DimDist::Exponential:
            default:
                return "exponential";
        }
    };
    out << "length_dist = " << dim_name(c.scene.length_dist) << "\n";
    out << "width_dist = " << dim_name(c.scene.width_dist) << "\n";
    out << "seed = " << c.scene.master_seed << "\n";
    out << "realizations = " << c.scene.realizations << "\n";
    out << "pdp_bin = " << fmt(c.scene.pdp_bin) << "\n";
    return out.str();
}

bool apply_sweep_value(RunConfig& cfg, const std::string& key, double value) {
    static const std::map<std::string, void (*)(Scenario&, double)> setters = {
        {"d", [](Scenario& s, double v) { s.d = v; }},
        {"f_c", [](Scenario& s, double v) { s.f_c = v; }},
        {"p_t_dbw", [](Scenario& s, double v) { s.p_t = from_db(v); }},
        {"phi_t_deg", [](Scenario& s, double v) { s.phi_t = from_deg(v); }},
        {"phi_r_deg", [](Scenario& s, double v) { s.phi_r = from_deg(v); }},
        {"theta_bt_deg",
         [](Scenario& s, double v) { s.theta_bt = from_deg(v); }},
        {"theta_br_deg",
         [](Scenario& s, double v) { s.theta_br = from_deg(v); }},
        {"theta_b_deg",
         [](Scenario& s, double v) {
             s.theta_bt = from_deg(v);
             s.theta_br = from_deg(v);
         }},
        {"lambda_b", [](Scenario& s, double v) { s.lambda_b = v; }},
        {"e_l", [](Scenario& s, double v) { s.moments.e_l = v; }},
        {"e_w", [](Scenario& s, double v) { s.moments.e_w = v; }},
        {"e_l2", [](Scenario& s, double v) { s.moments.e_l2 = v; }},
        {"e_w2", [](Scenario& s, double v) { s.moments.e_w2 = v; }},
        {"phi_b_deg", [](Scenario& s, double v) { s.phi_b = from_deg(v); }},
        {"lambda_h_raw", [](Scenario& s, double v) { s.lambda_h_raw = v; }},
        {"w_h", [](Scenario& s, double v) { s.w_h = v; }},
        {"p_self", [](Scenario& s, double v) { s.p_self = v; }},
        {"gamma_rm_db",
         [](Scenario& s, double v) { s.gamma_rm = from_db(v); }},
    };
    const auto it = setters.find(key);
    if (it == setters.end()) return false;
    it->second(cfg.scenario, value);
    return true;
}

}  // namespace mmgeo
