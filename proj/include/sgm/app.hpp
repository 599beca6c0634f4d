#pragma once

// Command layer behind the `sgm` executable. A job is described by one JSON
// object whose keys match the long flags; the executable builds that object
// from an optional config file overlaid with the flags given.
//
// Output is deterministic: keys in fixed insertion order, every float written
// with %.17g.

#include "sgm/distributions.hpp"
#include "sgm/energy.hpp"
#include "sgm/identification.hpp"
#include "sgm/verification.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace sgm::app {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kSuccess = 0, kVerificationFailed = 1, kUsageError = 2 };

struct UsageError : Error {
    using Error::Error;
};

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"identify", "verify", "convert", "table", "diff-legacy"};
    return names;
}

struct JobConfig {
    std::string command;
    std::size_t dim = 3;
    double L = 1.0;
    std::optional<double> keta, ktau;
    std::optional<double> young, nu;
    std::optional<std::string> dist;
    DistParams dist_params;
    std::string out;  // empty: standard output
    std::string format = "json";
    std::optional<double> tol;
    DisplacementMode mode = DisplacementMode::corrected;
};

// ---------------------------------------------------------------------------
// Config parsing

/// "k=v" -> (k, v)
inline std::pair<std::string, double> parse_dist_param(const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--dist-param expects key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const std::string val = kv.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(val, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != val.size()) throw UsageError("--dist-param value for '" + key + "' is not a number");
    return {key, v};
}

namespace detail {

inline double get_number(const Json& j, const char* key) {
    if (!j.is_number()) throw UsageError(std::string("'") + key + "' must be a number");
    return j.get<double>();
}

inline std::string get_string(const Json& j, const char* key) {
    if (!j.is_string()) throw UsageError(std::string("'") + key + "' must be a string");
    return j.get<std::string>();
}

} // namespace detail

/// Builds and validates a JobConfig. Throws UsageError on unknown keys, bad
/// types or inconsistent material specifications.
inline JobConfig config_from_json(const Json& j) {
    if (!j.is_object()) throw UsageError("configuration must be a JSON object");
    JobConfig c;
    for (const auto& [key, v] : j.items()) {
        if (key == "command") {
            c.command = detail::get_string(v, "command");
        } else if (key == "dim") {
            const double d = detail::get_number(v, "dim");
            if (d != 2.0 && d != 3.0) throw UsageError("--dim must be 2 or 3");
            c.dim = static_cast<std::size_t>(d);
        } else if (key == "L") {
            c.L = detail::get_number(v, "L");
        } else if (key == "keta") {
            c.keta = detail::get_number(v, "keta");
        } else if (key == "ktau") {
            c.ktau = detail::get_number(v, "ktau");
        } else if (key == "young") {
            c.young = detail::get_number(v, "young");
        } else if (key == "nu") {
            c.nu = detail::get_number(v, "nu");
        } else if (key == "dist") {
            c.dist = detail::get_string(v, "dist");
        } else if (key == "dist-param") {
            if (v.is_object()) {
                for (const auto& [k, x] : v.items()) c.dist_params[k] = detail::get_number(x, "dist-param");
            } else if (v.is_array()) {
                for (const auto& s : v) c.dist_params.insert(parse_dist_param(detail::get_string(s, "dist-param")));
            } else {
                throw UsageError("'dist-param' must be an object or a list of key=value strings");
            }
        } else if (key == "out") {
            c.out = detail::get_string(v, "out");
        } else if (key == "format") {
            c.format = detail::get_string(v, "format");
        } else if (key == "tol") {
            c.tol = detail::get_number(v, "tol");
        } else if (key == "mode") {
            const auto m = detail::get_string(v, "mode");
            if (m == "corrected")
                c.mode = DisplacementMode::corrected;
            else if (m == "legacy")
                c.mode = DisplacementMode::legacy;
            else
                throw UsageError("--mode must be corrected or legacy");
        } else {
            throw UsageError("unknown configuration key '" + key + "'");
        }
    }

    if (c.command.empty()) throw UsageError("no command given (identify|verify|convert|table|diff-legacy)");
    if (std::find(command_names().begin(), command_names().end(), c.command) == command_names().end())
        throw UsageError("unknown command '" + c.command + "'");
    if (!(c.L > 0.0) || !std::isfinite(c.L)) throw UsageError("--L must be positive");
    if (c.format != "json" && c.format != "csv") throw UsageError("--format must be json or csv");
    if (c.tol && !(*c.tol > 0.0)) throw UsageError("--tol must be positive");
    if (c.keta.has_value() != c.ktau.has_value()) throw UsageError("--keta and --ktau go together");
    if (c.young.has_value() != c.nu.has_value()) throw UsageError("--young and --nu go together");
    if (!c.dist && !c.dist_params.empty()) throw UsageError("--dist-param needs --dist");
    const int specs = int(c.keta.has_value()) + int(c.young.has_value()) + int(c.dist.has_value());
    if (specs > 1) throw UsageError("give exactly one material: --keta/--ktau, --young/--nu or --dist");
    if (specs == 0 && c.command != "verify")
        throw UsageError("'" + c.command + "' needs a material: --keta/--ktau, --young/--nu or --dist");
    return c;
}

// ---------------------------------------------------------------------------
// Serialization

inline std::string format_number(double v) {
    if (!std::isfinite(v)) return "null";
    if (v == 0.0) v = 0.0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline void write_json(std::ostream& os, const Json& j, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (const auto& [k, v] : j.items()) {
            if (!first) os << ",\n";
            first = false;
            os << pad << Json(k).dump() << ": ";
            write_json(os, v, depth + 1);
        }
        os << "\n" << close << "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        os << "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
            if (k) os << ",\n";
            os << pad;
            write_json(os, j[k], depth + 1);
        }
        os << "\n" << close << "]";
        return;
    }
    case Json::value_t::number_float:
        os << format_number(j.get<double>());
        return;
    default:
        os << j.dump();
    }
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

inline void flatten(const Json& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& rows) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, rows);
    } else if (j.is_array()) {
        for (std::size_t k = 0; k < j.size(); ++k) flatten(j[k], path + "." + std::to_string(k), rows);
    } else if (j.is_number_float()) {
        rows.emplace_back(path, format_number(j.get<double>()));
    } else if (j.is_string()) {
        rows.emplace_back(path, j.get<std::string>());
    } else if (j.is_null()) {
        rows.emplace_back(path, "");
    } else {
        rows.emplace_back(path, j.dump());
    }
}

} // namespace detail

inline std::string to_json_text(const Json& j) {
    std::ostringstream os;
    detail::write_json(os, j, 0);
    os << "\n";
    return os.str();
}

/// Flat (name, value) projection; nested keys joined with '.'.
inline std::string to_csv_text(const Json& j) {
    std::vector<std::pair<std::string, std::string>> rows;
    detail::flatten(j, "", rows);
    std::string s = "name,value\n";
    for (const auto& [k, v] : rows) s += detail::csv_field(k) + "," + detail::csv_field(v) + "\n";
    return s;
}

// ---------------------------------------------------------------------------
// Material resolution

struct Material {
    StiffnessDistribution dist;
    std::optional<IsotropicStiffness> iso;
    Json inputs;
    std::vector<std::string> warnings;
};

inline std::optional<Material> resolve_material(const JobConfig& c) {
    if (c.keta) {
        Json in;
        in["keta"] = *c.keta;
        in["ktau"] = *c.ktau;
        return Material{StiffnessDistribution::make_isotropic(c.dim, *c.keta, *c.ktau), IsotropicStiffness{*c.keta, *c.ktau},
                        in, {}};
    }
    if (c.young) {
        const auto k = k_from_engineering(c.dim, c.L, *c.young, *c.nu);
        Json in;
        in["young"] = *c.young;
        in["nu"] = *c.nu;
        return Material{StiffnessDistribution::make_isotropic(c.dim, k.kbar_eta, k.kbar_tau),
                        IsotropicStiffness{k.kbar_eta, k.kbar_tau}, in, k.warnings};
    }
    if (c.dist) {
        Json in;
        in["dist"] = *c.dist;
        Json params = Json::object();
        for (const auto& [k, v] : c.dist_params) params[k] = v;
        in["dist-param"] = params;
        auto dist = make_distribution(c.dim, *c.dist, c.dist_params);
        auto iso = dist.isotropic;
        return Material{std::move(dist), iso, in, {}};
    }
    return std::nullopt;
}

inline std::optional<IsotropicStiffness> require_isotropic(const std::optional<Material>& m, const std::string& cmd) {
    if (!m || !m->iso) throw UsageError("'" + cmd + "' needs an isotropic material (--keta/--ktau or --young/--nu)");
    return m->iso;
}

// ---------------------------------------------------------------------------
// Commands

namespace detail {

inline Json meta(const JobConfig& c, const std::optional<Material>& m, const std::string& mode) {
    Json j;
    j["command"] = c.command;
    j["dim"] = c.dim;
    j["L"] = c.L;
    j["inputs"] = m ? m->inputs : Json(nullptr);
    j["mode"] = mode;
    return j;
}

inline double zero_threshold(double max_abs) { return 1e-12 * std::max(1.0, max_abs); }

// index string -> value, zeros omitted, canonical order
template <std::size_t Rank>
Json tensor_map(const Tensor<Rank>& T, std::string_view symbol) {
    Json j = Json::object();
    const double thr = zero_threshold(T.max_abs());
    T.for_each_index([&](const auto& x) {
        if (std::abs(T[x]) > thr) j[index_name(symbol, x)] = T[x];
    });
    return j;
}

inline std::string dim_suffix(std::size_t dim) { return dim == 2 ? "_2d" : "_3d"; }

inline std::string coefficient_text(double v, const char* sym, bool first) {
    std::string s;
    if (!first) s += v < 0 ? " - " : " + ";
    else if (v < 0) s += "-";
    const double a = std::abs(v);
    if (a != 1.0) s += format_number(a) + " ";
    return s + sym;
}

// "L^4/1680 (3 kbar_eta - 40 kbar_tau)"
template <class Form>
std::string formula_text(const Form& f) {
    std::string s = "L^" + std::to_string(f.length_power) + "/" + format_number(f.denominator) + " (";
    s += coefficient_text(f.eta, "kbar_eta", true);
    if (f.tau != 0.0) s += coefficient_text(f.tau, "kbar_tau", false);
    return s + ")";
}

// Relative error against the table; entries below a thousandth of the
// largest one are measured against that floor instead.
template <std::size_t Rank>
double table_mismatch(const Tensor<Rank>& quad, const Tensor<Rank>& table) {
    const double floor = std::max(1e-300, 1e-3 * table.max_abs());
    double worst = 0.0;
    quad.for_each_index([&](const auto& x) {
        worst = std::max(worst, std::abs(quad[x] - table[x]) / std::max(std::abs(table[x]), floor));
    });
    return worst;
}

inline Json derived_nulls() {
    Json d;
    for (const char* k : {"lambda", "mu", "Y", "nu", "c3", "c4", "c5", "c6", "c7", "a1", "a2", "a3", "a4", "a5"})
        d[k] = nullptr;
    d["d_groups"] = nullptr;
    return d;
}

inline void set_iso(Json& d, const std::optional<IsoCoefficients>& c) {
    if (!c) return;
    d["c3"] = c->c3;
    d["c4"] = c->c4;
    d["c5"] = c->c5;
    d["c6"] = c->c6;
    d["c7"] = c->c7;
    const auto a = mindlin_from_c(*c);
    d["a1"] = a.a1;
    d["a2"] = a.a2;
    d["a3"] = a.a3;
    d["a4"] = a.a4;
    d["a5"] = a.a5;
}

// Everything derivable from an isotropic material; `D` supplies the gradient
// constants when the closed forms do not apply (legacy kinematics).
inline Json derived_isotropic(const JobConfig& c, const IsotropicStiffness& k, const Tensor<6>* D,
                              std::vector<std::string>& warnings) {
    const auto mat = isotropic_material(c.dim, c.L, k.kbar_eta, k.kbar_tau);
    for (const auto& w : mat.warnings) warnings.push_back(w);
    Json d = derived_nulls();
    d["lambda"] = mat.lambda;
    d["mu"] = mat.mu;
    if (mat.engineering) {
        d["Y"] = mat.engineering->young;
        d["nu"] = mat.engineering->nu;
    }
    Json groups = Json::object();
    if (!D) {
        set_iso(d, mat.c);
        for (const auto& g : mat.d_groups) groups[g.name + dim_suffix(c.dim)] = g.value;
    } else {
        if (c.dim == 3) {
            try {
                set_iso(d, iso_params_from_d(*D, c.tol.value_or(kDefaultTolerance)));
            } catch (const NotIsotropicError& e) {
                warnings.push_back(e.what());
            }
        }
        for (const auto& g : d_groups(c.dim)) {
            const auto& first = g.rows.front();
            groups[std::string(g.name) + dim_suffix(c.dim)] =
                (*D)[parse_index<6>(first.components.front().index, c.dim)] / first.multiplier;
        }
    }
    d["d_groups"] = groups;
    return d;
}

inline Json run_identify(const JobConfig& c, Material& m) {
    const auto t = identify(m.dist, c.L, c.mode);
    std::vector<std::string> warnings = m.warnings;
    for (const auto& w : t.warnings) warnings.push_back(w);
    const double tol = c.tol.value_or(kDefaultTolerance);

    Json derived;
    if (m.iso) {
        const auto moments = isotropic_tensors_by_moments(c.dim, c.L, *m.iso, c.mode);
        const double mq = std::max({max_abs_diff(moments.C, t.C) / std::max(1.0, t.C.max_abs()),
                                    max_abs_diff(moments.D, t.D) / std::max(1.0, t.D.max_abs())});
        if (mq > tol) warnings.push_back("quadrature and exact moments disagree by " + format_number(mq));
        if (t.M.max_abs() > zero_threshold(t.C.max_abs()))
            warnings.push_back("M does not vanish for an isotropic distribution: max |M| = " +
                               format_number(t.M.max_abs()));
        if (c.mode == DisplacementMode::corrected) {
            const auto cf = isotropic_closed_forms(c.dim, c.L, m.iso->kbar_eta, m.iso->kbar_tau);
            const double e = std::max(table_mismatch(t.C, cf.tensors.C), table_mismatch(t.D, cf.tensors.D));
            if (e > tol) warnings.push_back("quadrature and closed-form tables disagree by " + format_number(e));
            derived = derived_isotropic(c, *m.iso, nullptr, warnings);
        } else {
            warnings.push_back("legacy kinematics: gradient constants come from the legacy D, not the closed forms");
            derived = derived_isotropic(c, *m.iso, &t.D, warnings);
        }
    } else {
        derived = derived_nulls();
        warnings.push_back("anisotropic distribution: isotropic parameters are not defined");
    }

    Json j;
    j["meta"] = meta(c, m, to_string(c.mode));
    j["C"] = tensor_map(t.C, "C");
    j["M"] = tensor_map(t.M, "M");
    j["D"] = tensor_map(t.D, "D");
    j["derived"] = derived;
    j["warnings"] = warnings;
    return j;
}

inline Json run_convert(const JobConfig& c, Material& m) {
    const auto k = *require_isotropic(m, c.command);
    std::vector<std::string> warnings = m.warnings;
    Json derived;
    derived["kbar_eta"] = k.kbar_eta;
    derived["kbar_tau"] = k.kbar_tau;
    const Json iso = derived_isotropic(c, k, nullptr, warnings);
    for (const auto& [key, v] : iso.items()) derived[key] = v;

    Json j;
    j["meta"] = meta(c, m, to_string(c.mode));
    j["derived"] = derived;
    j["warnings"] = warnings;
    return j;
}

inline Json component_list(const TableRow& row, const std::string& prefix) {
    Json names = Json::array();
    for (const auto& e : row.components) names.push_back(prefix + std::string(e.index));
    return names;
}

inline Json run_table(const JobConfig& c, Material& m) {
    const auto k = *require_isotropic(m, c.command);
    std::vector<std::string> warnings = m.warnings;
    std::vector<std::string> notes;
    const auto cf = isotropic_closed_forms(c.dim, c.L, k.kbar_eta, k.kbar_tau);
    const auto rule = default_rule(c.dim);
    const auto Cq = c_tensor(m.dist, c.L, rule);
    const auto Dq = d_tensor(m.dist, c.L, rule);

    Json cg = Json::array();
    for (const auto& g : c_groups(c.dim)) {
        Json e;
        e["name"] = g.name;
        e["formula"] = formula_text(g);
        e["value"] = g.value(c.L, k.kbar_eta, k.kbar_tau);
        Json comps = Json::array();
        for (const auto& row : g.rows)
            for (const auto& x : component_list(row, "C_")) comps.push_back(x);
        e["components"] = comps;
        cg.push_back(e);
    }

    Json dg = Json::array();
    for (const auto& g : d_groups(c.dim)) {
        Json e;
        e["name"] = std::string(g.name) + dim_suffix(c.dim);
        e["formula"] = formula_text(g);
        e["value"] = g.value(c.L, k.kbar_eta, k.kbar_tau);
        Json rows = Json::array();
        for (const auto& row : g.rows) {
            Json r;
            r["label"] = row.label;
            r["multiplier"] = row.multiplier;
            r["components"] = component_list(row, "D_");
            Json printed = Json::object();
            for (const auto& x : row.components)
                if (!x.printed_as.empty())
                    printed["D_" + std::string(x.index)] = "D_" + std::string(x.printed_as);
            if (!printed.empty()) r["printed_as"] = printed;
            rows.push_back(r);
        }
        e["rows"] = rows;
        dg.push_back(e);
    }

    Json j;
    j["meta"] = meta(c, m, "corrected");
    j["C_groups"] = cg;
    j["D_groups"] = dg;
    if (c.dim == 3) {
        Json probes = Json::array();
        for (const auto& p : d_probes_3d()) {
            Json e;
            e["name"] = "D_" + std::string(p.name);
            e["formula"] = formula_text(p);
            e["value"] = p.value(c.L, k.kbar_eta, k.kbar_tau);
            probes.push_back(e);
        }
        j["D_probes"] = probes;
        Json coeffs = Json::array();
        for (const auto& p : iso_coefficients_3d()) {
            Json e;
            e["name"] = p.name;
            e["formula"] = formula_text(p);
            e["value"] = p.value(c.L, k.kbar_eta, k.kbar_tau);
            coeffs.push_back(e);
        }
        j["coefficients"] = coeffs;

        warnings.push_back(
            "mu = C_1212 = L^2/15 (kbar_eta + 6 kbar_tau) by quadrature; the printed prefactor L^2/8 is a "
            "suspected typo");
        notes.push_back("rows labelled 3d5 list components equal to d5/3, resolved by quadrature");
        notes.push_back("rows labelled 3d6 list components equal to 3 d6, resolved by quadrature");
        notes.push_back("D_212222 is printed in the d2 list; it vanishes identically and the member is D_212111");
        notes.push_back("Young's modulus is mu (3 lambda + 2 mu) / (lambda + mu); the printed "
                        "mu (3 lambda + mu) / (lambda + 2 mu) disagrees with the kbar expression beside it");
    }
    notes.push_back("group names carry the dimension (d5_2d, d5_3d) because the numbering restarts per dimension");

    const double e = std::max(table_mismatch(Cq, cf.tensors.C), table_mismatch(Dq, cf.tensors.D));
    if (e > c.tol.value_or(kDefaultTolerance))
        warnings.push_back("quadrature and closed-form tables disagree by " + format_number(e));
    j["quadrature_max_relative_error"] = e;
    j["notes"] = notes;
    j["warnings"] = warnings;
    return j;
}

inline Json run_diff_legacy(const JobConfig& c, Material& m) {
    std::vector<std::string> warnings = m.warnings;
    const auto rule = default_rule(c.dim);
    const auto Cc = c_tensor(m.dist, c.L, rule);
    const auto Cl = c_tensor_from_energy(m.dist, c.L, rule, DisplacementMode::legacy);
    const auto Dc = d_tensor(m.dist, c.L, rule, DisplacementMode::corrected);
    const auto Dl = d_tensor(m.dist, c.L, rule, DisplacementMode::legacy);
    const double tol = c.tol.value_or(kDefaultTolerance);

    Json jc;
    const double cdiff = max_abs_diff(Cc, Cl);
    jc["max_abs_difference"] = cdiff;
    jc["identical"] = cdiff <= tol * std::max(1.0, Cc.max_abs());

    Json jd = Json::object();
    const double thr = zero_threshold(std::max(Dc.max_abs(), Dl.max_abs()));
    double worst = 0.0;
    Dc.for_each_index([&](const auto& x) {
        if (std::abs(Dc[x]) <= thr && std::abs(Dl[x]) <= thr) return;
        const double rel = std::abs(Dl[x] - Dc[x]) / std::max(std::abs(Dc[x]), thr);
        worst = std::max(worst, rel);
        Json e;
        e["corrected"] = Dc[x];
        e["legacy"] = Dl[x];
        e["relative_difference"] = rel;
        jd[index_name("D", x)] = e;
    });

    Json summary;
    summary["max_relative_difference"] = worst;
    Json j;
    j["meta"] = meta(c, m, "corrected-vs-legacy");
    j["C"] = jc;
    j["D"] = jd;
    if (m.iso) {
        Json groups = Json::array();
        std::size_t over = 0;
        for (const auto& g : legacy_group_diffs(c.dim, c.L, m.iso->kbar_eta, m.iso->kbar_tau)) {
            Json e;
            e["group"] = g.group + dim_suffix(c.dim);
            e["component"] = g.component;
            e["corrected"] = g.corrected;
            e["legacy"] = g.legacy;
            e["relative_difference"] = g.relative;
            if (g.relative > 0.01) ++over;
            groups.push_back(e);
        }
        j["groups"] = groups;
        summary["groups_differing_over_1pct"] = over;
    }
    j["summary"] = summary;
    if (!jc["identical"].get<bool>()) warnings.push_back("C differs between corrected and legacy kinematics");
    j["warnings"] = warnings;
    return j;
}

inline Json check_json(const CheckResult& r) {
    Json e;
    e["name"] = r.name;
    e["passed"] = r.passed;
    e["max_violation"] = r.max_violation;
    e["tolerance"] = r.tolerance;
    e["detail"] = r.detail;
    return e;
}

inline Json run_verify(const JobConfig& c, std::optional<Material>& m, bool& passed) {
    VerifyOptions opt;
    if (c.tol) opt.rel_tol = *c.tol;
    auto checks = run_all_checks(opt);
    std::vector<std::string> warnings = m ? m->warnings : std::vector<std::string>{};

    if (m) {
        // Symmetries and energy equivalence for the material given.
        const auto t = identify(m->dist, c.L, c.mode);
        for (const auto& w : t.warnings) warnings.push_back(w);
        const auto cs = check_symmetry(t.C, c_symmetry(), 0.0);
        const auto ds = check_symmetry(t.D, d_symmetry(), 0.0);
        checks.push_back({"material_c_symmetry", cs.max_violation <= opt.rel_tol * std::max(1.0, t.C.max_abs()),
                          cs.max_violation, opt.rel_tol, ""});
        checks.push_back({"material_d_symmetry", ds.max_violation <= opt.rel_tol * std::max(1.0, t.D.max_abs()),
                          ds.max_violation, opt.rel_tol, ""});
        verify_detail::Rng rng(opt.seed + 99);
        const auto rule = default_rule(c.dim);
        double worst = 0.0;
        for (std::size_t n = 0; n < opt.samples; ++n) {
            const auto G = verify_detail::random_strain(c.dim, rng);
            const auto gG = verify_detail::random_strain_gradient(c.dim, rng);
            const double um = energy_micro(G, gG, c.L, m->dist, rule, c.mode);
            worst = std::max(worst, std::abs(um - energy_continuum(t, G, gG)) / std::max(1.0, std::abs(um)));
        }
        checks.push_back({"material_energy_equivalence", worst <= opt.rel_tol, worst, opt.rel_tol, ""});
    }

    passed = std::all_of(checks.begin(), checks.end(), [](const CheckResult& r) { return r.passed; });
    Json arr = Json::array();
    for (const auto& r : checks) arr.push_back(check_json(r));
    Json j;
    j["meta"] = meta(c, m, to_string(c.mode));
    j["checks"] = arr;
    j["passed"] = passed;
    j["warnings"] = warnings;
    return j;
}

} // namespace detail

/// Runs one job and returns the exit code. The document goes to `out` unless
/// the config names a file; errors go to `err`.
inline int run(const JobConfig& c, std::ostream& out, std::ostream& err) {
    Json doc;
    int code = kSuccess;
    try {
        auto m = resolve_material(c);
        if (c.command == "identify") {
            doc = detail::run_identify(c, *m);
        } else if (c.command == "convert") {
            doc = detail::run_convert(c, *m);
        } else if (c.command == "table") {
            doc = detail::run_table(c, *m);
        } else if (c.command == "diff-legacy") {
            doc = detail::run_diff_legacy(c, *m);
        } else if (c.command == "verify") {
            bool passed = true;
            doc = detail::run_verify(c, m, passed);
            if (!passed) code = kVerificationFailed;
        } else {
            throw UsageError("unknown command '" + c.command + "'");
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }

    const std::string text = c.format == "csv" ? to_csv_text(doc) : to_json_text(doc);
    if (c.out.empty()) {
        out << text;
    } else {
        std::ofstream f(c.out, std::ios::binary);
        if (!f || !(f << text)) {
            err << "error: cannot write " << c.out << "\n";
            return kUsageError;
        }
    }
    if (code == kVerificationFailed) {
        for (const auto& r : doc["checks"])
            if (!r["passed"].get<bool>())
                err << "FAILED " << r["name"].get<std::string>() << ": max violation "
                    << format_number(r["max_violation"].get<double>()) << " > "
                    << format_number(r["tolerance"].get<double>()) << "\n";
    }
    return code;
}

/// Parses the JSON config and runs it; configuration problems exit with 2.
inline int run_json(const Json& j, std::ostream& out, std::ostream& err) {
    JobConfig c;
    try {
        c = config_from_json(j);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }
    return run(c, out, err);
}

} // namespace sgm::app
