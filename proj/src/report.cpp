#include "totcurv/report.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace totcurv {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' is not a number: " + text);
    }
}

int parse_int(const std::string& key, const std::string& text) {
    const double v = parse_double(key, text);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("'" + key + "' is not an integer: " + text);
    return static_cast<int>(v);
}

// Doubles go through JSON as numbers; NaN and infinities become null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
json opt(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }
double get_num(const json& j, const char* key) {
    const auto& v = j.at(key);
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}
std::optional<double> get_opt(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
}

json config_json(const RunConfig& c) {
    json scenarios = json::array();
    for (const auto& s : c.scenarios) {
        json params = json::object();
        for (const auto& [k, v] : s.params) params[k] = v;
        scenarios.push_back({{"name", s.name}, {"params", params}});
    }
    return {{"command", to_string(c.command)},
            {"scenarios", scenarios},
            {"r", c.rs},
            {"grid", c.grid},
            {"t_nodes", c.t_nodes},
            {"tol", opt(c.tol)},
            {"abs_tol", c.abs_tol},
            {"seed", c.seed},
            {"points", c.points},
            {"h", c.h},
            {"format", to_string(c.format)},
            {"out", c.out}};
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    c.command = parse_command(j.at("command").get<std::string>());
    for (const auto& s : j.at("scenarios")) {
        ScenarioSpec spec{s.at("name").get<std::string>(), {}};
        for (const auto& [k, v] : s.at("params").items()) spec.params[k] = v.get<double>();
        c.scenarios.push_back(std::move(spec));
    }
    c.rs = j.at("r").get<std::vector<int>>();
    c.grid = j.at("grid").get<int>();
    c.t_nodes = j.at("t_nodes").get<int>();
    c.tol = get_opt(j, "tol");
    c.abs_tol = j.at("abs_tol").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.points = j.at("points").get<int>();
    c.h = j.at("h").get<double>();
    c.format = parse_format(j.at("format").get<std::string>());
    c.out = j.at("out").get<std::string>();
    return c;
}

json row_json(const VerificationRow& r) {
    return {{"scenario", r.scenario},
            {"n", r.dim},
            {"r", r.r},
            {"lhs", num(r.lhs)},
            {"rhs", num(r.rhs)},
            {"abs_error", num(r.abs_error)},
            {"rel_error", num(r.rel_error)},
            {"closed_form_lhs", opt(r.closed_form_lhs)},
            {"lhs_quadrature_error", num(r.lhs_quadrature_error)},
            {"rhs_quadrature_error", num(r.rhs_quadrature_error)},
            {"surface_m", r.surface_m},
            {"t_nodes", r.t_nodes},
            {"nodes", r.nodes},
            {"convergence_order", opt(r.convergence_order)},
            {"tolerance", num(r.tolerance)},
            {"absolute_test", r.absolute_test},
            {"pass", r.pass},
            {"wall_time", num(r.wall_time)},
            {"note", r.note}};
}

VerificationRow row_from_json(const json& j) {
    VerificationRow r;
    r.scenario = j.at("scenario").get<std::string>();
    r.dim = j.at("n").get<int>();
    r.r = j.at("r").get<int>();
    r.lhs = get_num(j, "lhs");
    r.rhs = get_num(j, "rhs");
    r.abs_error = get_num(j, "abs_error");
    r.rel_error = get_num(j, "rel_error");
    r.closed_form_lhs = get_opt(j, "closed_form_lhs");
    r.lhs_quadrature_error = get_num(j, "lhs_quadrature_error");
    r.rhs_quadrature_error = get_num(j, "rhs_quadrature_error");
    r.surface_m = j.at("surface_m").get<int>();
    r.t_nodes = j.at("t_nodes").get<int>();
    r.nodes = j.at("nodes").get<std::size_t>();
    r.convergence_order = get_opt(j, "convergence_order");
    r.tolerance = get_num(j, "tolerance");
    r.absolute_test = j.at("absolute_test").get<bool>();
    r.pass = j.at("pass").get<bool>();
    r.wall_time = get_num(j, "wall_time");
    r.note = j.at("note").get<std::string>();
    return r;
}

json pointwise_json(const PointwiseRow& r) {
    return {{"scenario", r.scenario},
            {"n", r.dim},
            {"r", r.r},
            {"points", r.points},
            {"h", num(r.h)},
            {"max_residual", num(r.max_residual)},
            {"max_residual_half", num(r.max_residual_half)},
            {"slope", opt(r.slope)},
            {"constant", num(r.constant)},
            {"max_abs_dphi", num(r.max_abs_dphi)},
            {"max_abs_correction_B", num(r.max_abs_correction_B)},
            {"pass", r.pass},
            {"wall_time", num(r.wall_time)},
            {"note", r.note}};
}

PointwiseRow pointwise_from_json(const json& j) {
    PointwiseRow r;
    r.scenario = j.at("scenario").get<std::string>();
    r.dim = j.at("n").get<int>();
    r.r = j.at("r").get<int>();
    r.points = j.at("points").get<int>();
    r.h = get_num(j, "h");
    r.max_residual = get_num(j, "max_residual");
    r.max_residual_half = get_num(j, "max_residual_half");
    r.slope = get_opt(j, "slope");
    r.constant = get_num(j, "constant");
    r.max_abs_dphi = get_num(j, "max_abs_dphi");
    r.max_abs_correction_B = get_num(j, "max_abs_correction_B");
    r.pass = j.at("pass").get<bool>();
    r.wall_time = get_num(j, "wall_time");
    r.note = j.at("note").get<std::string>();
    return r;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fixed(double v, int digits) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string{}; }

std::string csv_text(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + '"';
}

// Configured r values that exist for this scenario (r ≤ n−1), or all of them.
std::vector<int> rs_for(const RunConfig& c, const Scenario& s) {
    std::vector<int> out;
    for (int r = 0; r < s.dim; ++r) {
        if (c.rs.empty() || std::find(c.rs.begin(), c.rs.end(), r) != c.rs.end()) out.push_back(r);
    }
    return out;
}

template <class Row>
void sort_rows(std::vector<Row>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return a.scenario != b.scenario ? a.scenario < b.scenario : a.r < b.r;
    });
}

} // namespace

std::string to_string(Command c) { return c == Command::verify ? "verify" : "pointwise"; }
std::string to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

Command parse_command(const std::string& s) {
    if (s == "verify") return Command::verify;
    if (s == "pointwise") return Command::pointwise;
    throw ConfigError("unknown command '" + s + "'");
}

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw ConfigError("unknown format '" + s + "'");
}

std::vector<int> parse_r_list(const std::string& text) {
    std::vector<int> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto dash = item.find('-', 1);
        if (dash == std::string::npos) {
            out.push_back(parse_int("r", item));
        } else {
            const int lo = parse_int("r", trim(item.substr(0, dash)));
            const int hi = parse_int("r", trim(item.substr(dash + 1)));
            if (hi < lo) throw ConfigError("empty r range '" + item + "'");
            for (int r = lo; r <= hi; ++r) out.push_back(r);
        }
    }
    for (int r : out) {
        if (r < 0) throw ConfigError("r must be non-negative");
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

void validate(const RunConfig& c) {
    if (c.grid < 0) throw ConfigError("grid must be non-negative");
    if (c.t_nodes < 1) throw ConfigError("t-nodes must be positive");
    if (c.tol && !(*c.tol > 0.0)) throw ConfigError("tol must be positive");
    if (!(c.abs_tol > 0.0)) throw ConfigError("abs_tol must be positive");
    if (c.points < 0) throw ConfigError("points must be non-negative");
    if (c.h < 0.0) throw ConfigError("h must be non-negative");
}

} // namespace

void apply_config_file(RunConfig& c, const std::string& path) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(path, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("cannot read config '" + path + "': " + e.message());
    }
    for (const auto& [section, body] : tree) {
        if (section == "run") {
            for (const auto& [key, node] : body) {
                const std::string v = trim(node.data());
                if (key == "command") c.command = parse_command(v);
                else if (key == "r") c.rs = parse_r_list(v);
                else if (key == "grid") c.grid = parse_int(key, v);
                else if (key == "t_nodes") c.t_nodes = parse_int(key, v);
                else if (key == "tol") c.tol = v.empty() ? std::nullopt : std::optional(parse_double(key, v));
                else if (key == "abs_tol") c.abs_tol = parse_double(key, v);
                else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_int(key, v));
                else if (key == "points") c.points = parse_int(key, v);
                else if (key == "h") c.h = parse_double(key, v);
                else if (key == "format") c.format = parse_format(v);
                else if (key == "out") c.out = v;
                else throw ConfigError("unknown key '" + key + "' in [run]");
            }
        } else if (section.rfind("scenario.", 0) == 0) {
            ScenarioSpec spec;
            for (const auto& [key, node] : body) {
                const std::string v = trim(node.data());
                if (key == "type") spec.name = v;
                else spec.params[key] = parse_double(section + "." + key, v);
            }
            if (spec.name.empty()) throw ConfigError("section [" + section + "] lacks 'type'");
            c.scenarios.push_back(std::move(spec));
        } else {
            throw ConfigError("unknown section [" + section + "]");
        }
    }
    validate(c);
}

RunConfig load_config(const std::string& path) {
    RunConfig c;
    apply_config_file(c, path);
    return c;
}

bool VerificationReport::all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass; }) &&
           std::all_of(pointwise.begin(), pointwise.end(), [](const auto& r) { return r.pass; });
}

VerificationReport run_verify(const RunConfig& config, Execution exec) {
    validate(config);
    VerificationReport report{config, {}, {}};
    for (const auto& spec : config.scenarios) {
        const Scenario s = builtin(spec);
        const auto rs = rs_for(config, s);
        VerifyOptions opts;
        opts.surface_m = config.grid;
        opts.t_nodes = config.t_nodes;
        opts.rel_tol = config.tol;
        opts.abs_tol = config.abs_tol;
        opts.exec = exec;
        for (auto& row : verify_main_identity(s, rs, opts)) report.rows.push_back(std::move(row));
    }
    sort_rows(report.rows);
    return report;
}

VerificationReport run_pointwise(const RunConfig& config, Execution exec) {
    validate(config);
    VerificationReport report{config, {}, {}};
    for (const auto& spec : config.scenarios) {
        const Scenario s = builtin(spec);
        PointwiseOptions opts;
        opts.points = config.points;
        opts.seed = config.seed;
        opts.h = config.h;
        opts.exec = exec;
        for (auto& row : run_pointwise(s, rs_for(config, s), opts)) {
            report.pointwise.push_back(std::move(row));
        }
    }
    sort_rows(report.pointwise);
    return report;
}

VerificationReport run(const RunConfig& config, Execution exec) {
    return config.command == Command::verify ? run_verify(config, exec) : run_pointwise(config, exec);
}

std::string to_json(const VerificationReport& report) {
    json rows = json::array(), pointwise = json::array();
    for (const auto& r : report.rows) rows.push_back(row_json(r));
    for (const auto& r : report.pointwise) pointwise.push_back(pointwise_json(r));
    const json j = {{"config", config_json(report.config)},
                    {"rows", rows},
                    {"pointwise", pointwise},
                    {"pass", report.all_pass()}};
    return j.dump(2) + "\n";
}

VerificationReport report_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed report: ") + e.what());
    }
    VerificationReport report;
    try {
        report.config = config_from_json(j.at("config"));
        for (const auto& r : j.at("rows")) report.rows.push_back(row_from_json(r));
        for (const auto& r : j.at("pointwise")) report.pointwise.push_back(pointwise_from_json(r));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed report: ") + e.what());
    }
    return report;
}

std::string to_csv(const VerificationReport& report) {
    std::ostringstream os;
    if (report.config.command == Command::verify) {
        os << "scenario,n,r,lhs,rhs,abs_error,rel_error,closed_form_lhs,lhs_quadrature_error,"
              "rhs_quadrature_error,surface_m,t_nodes,nodes,convergence_order,tolerance,"
              "absolute_test,pass,wall_time,note\n";
        for (const auto& r : report.rows) {
            os << csv_text(r.scenario) << ',' << r.dim << ',' << r.r << ',' << fmt(r.lhs) << ','
               << fmt(r.rhs) << ',' << fmt(r.abs_error) << ',' << fmt(r.rel_error) << ','
               << fmt(r.closed_form_lhs) << ',' << fmt(r.lhs_quadrature_error) << ','
               << fmt(r.rhs_quadrature_error) << ',' << r.surface_m << ',' << r.t_nodes << ','
               << r.nodes << ',' << fmt(r.convergence_order) << ',' << fmt(r.tolerance) << ','
               << (r.absolute_test ? 1 : 0) << ',' << (r.pass ? 1 : 0) << ',' << fmt(r.wall_time)
               << ',' << csv_text(r.note) << '\n';
        }
    } else {
        os << "scenario,n,r,points,h,max_residual,max_residual_half,slope,constant,max_abs_dphi,"
              "max_abs_correction_B,pass,wall_time,note\n";
        for (const auto& r : report.pointwise) {
            os << csv_text(r.scenario) << ',' << r.dim << ',' << r.r << ',' << r.points << ','
               << fmt(r.h) << ',' << fmt(r.max_residual) << ',' << fmt(r.max_residual_half) << ','
               << fmt(r.slope) << ',' << fmt(r.constant) << ',' << fmt(r.max_abs_dphi) << ','
               << fmt(r.max_abs_correction_B) << ',' << (r.pass ? 1 : 0) << ','
               << fmt(r.wall_time) << ',' << csv_text(r.note) << '\n';
        }
    }
    return os.str();
}

std::string to_table(const VerificationReport& report) {
    std::ostringstream os;
    char line[256];
    if (report.config.command == Command::verify) {
        std::snprintf(line, sizeof line, "%-34s %2s %18s %18s %10s %7s %6s %s\n", "scenario", "r", "lhs",
                      "rhs", "error", "order", "time", "result");
        os << line;
        for (const auto& r : report.rows) {
            const std::string order = r.convergence_order ? fixed(*r.convergence_order, 1) : "-";
            std::snprintf(line, sizeof line, "%-34s %2d %18.12g %18.12g %10.3g %7s %6.2f %s%s%s\n",
                          r.scenario.c_str(), r.r, r.lhs, r.rhs,
                          r.absolute_test ? r.abs_error : r.rel_error, order.c_str(), r.wall_time,
                          r.pass ? "PASS" : "FAIL", r.note.empty() ? "" : "  ", r.note.c_str());
            os << line;
        }
    } else {
        std::snprintf(line, sizeof line, "%-34s %2s %10s %11s %11s %6s %10s %10s %s\n", "scenario", "r",
                      "h", "residual", "res(h/2)", "slope", "C", "max|B|", "result");
        os << line;
        for (const auto& r : report.pointwise) {
            const std::string slope = r.slope ? fixed(*r.slope, 2) : "-";
            std::snprintf(line, sizeof line, "%-34s %2d %10.3g %11.3e %11.3e %6s %10.3g %10.3g %s%s%s\n",
                          r.scenario.c_str(), r.r, r.h, r.max_residual, r.max_residual_half,
                          slope.c_str(), r.constant, r.max_abs_correction_B, r.pass ? "PASS" : "FAIL",
                          r.note.empty() ? "" : "  ", r.note.c_str());
            os << line;
        }
    }
    return os.str();
}

} // namespace totcurv
