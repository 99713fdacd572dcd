#include "vpbgk/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace vpbgk {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys{
        "n_x",        "n_v",         "v_max",           "eps",        "t_final",    "sigma",
        "initial_condition", "ic_rho", "ic_u",          "ic_temp",    "ic_file",    "diagnostics_every",
        "q_list",     "dt_policy",   "fixed_dt",   "field_method",    "compensated_sum", "zero_field", "collisions",
        "keep_f_snapshots", "levels"};
    return keys;
}

struct Entry {
    std::string value;
    int line = 0;
};

class Reader {
public:
    Reader(std::map<std::string, Entry> entries, std::string source)
        : entries_(std::move(entries)), source_(std::move(source)) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
        const auto it = entries_.find(key);
        const std::string where = it == entries_.end() ? source_ : source_ + ":" + std::to_string(it->second.line);
        throw ConfigError(where + ": " + key + ": " + msg);
    }

    double real(const std::string& key) const {
        const std::string& s = entries_.at(key).value;
        double out = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(out))
            fail(key, "expected a finite real number, got '" + s + "'");
        return out;
    }

    long integer(const std::string& key) const {
        const std::string& s = entries_.at(key).value;
        long out = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec != std::errc{} || ptr != s.data() + s.size()) fail(key, "expected an integer, got '" + s + "'");
        return out;
    }

    bool boolean(const std::string& key) const {
        const std::string& s = entries_.at(key).value;
        if (s == "true") return true;
        if (s == "false") return false;
        fail(key, "expected true or false, got '" + s + "'");
    }

    const std::string& text(const std::string& key) const { return entries_.at(key).value; }

    std::vector<double> reals(const std::string& key) const {
        std::vector<double> out;
        std::stringstream ss(text(key));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const std::string t = trim(item);
            double v = 0;
            const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v))
                fail(key, "expected a comma-separated list of reals, got '" + text(key) + "'");
            out.push_back(v);
        }
        if (out.empty()) fail(key, "list must not be empty");
        return out;
    }

private:
    std::map<std::string, Entry> entries_;
    std::string source_;
};

// Shortest representation that round-trips.
std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void put_u64(std::string& buf, std::uint64_t v) {
    for (int b = 0; b < 8; ++b) buf.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}

std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int b = 7; b >= 0; --b) v = (v << 8) | p[b];
    return v;
}

}  // namespace

const std::vector<std::string>& required_config_keys() {
    static const std::vector<std::string> keys{"n_x", "n_v", "v_max", "eps", "t_final", "sigma", "initial_condition"};
    return keys;
}

ParsedConfig parse_config_text(const std::string& text, const std::string& source_name,
                               const std::filesystem::path& base_dir) {
    std::map<std::string, Entry> entries;
    const auto& known = known_keys();
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = source_name + ":" + std::to_string(line_no) + ": ";
        if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value', got '" + line + "'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) throw ConfigError(where + "missing key before '='");
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError(where + "unknown key '" + key + "'");
        if (value.empty()) throw ConfigError(where + key + ": missing value");
        if (entries.count(key))
            throw ConfigError(where + "duplicate key '" + key + "' (first set on line " +
                              std::to_string(entries[key].line) + ")");
        entries[key] = {value, line_no};
    }

    std::vector<std::string> missing;
    for (const auto& k : required_config_keys())
        if (!entries.count(k)) missing.push_back(k);
    if (!missing.empty()) {
        std::string msg = source_name + ": missing required keys:";
        for (const auto& k : missing) msg += " " + k;
        throw ConfigError(msg);
    }

    const Reader r(std::move(entries), source_name);
    SolverConfig c;

    c.n_x = r.integer("n_x");
    if (c.n_x < 2) r.fail("n_x", "must be >= 2");
    c.n_v = r.integer("n_v");
    if (c.n_v < 1) r.fail("n_v", "must be >= 1");
    c.v_max = r.real("v_max");
    if (!(c.v_max > 0)) r.fail("v_max", "must be > 0");
    c.eps = r.real("eps");
    if (!(c.eps > 0)) r.fail("eps", "must be > 0");
    c.t_final = r.real("t_final");
    if (!(c.t_final >= 0)) r.fail("t_final", "must be >= 0");
    c.sigma = r.real("sigma");
    if (!(c.sigma > 0 && c.sigma < 1)) r.fail("sigma", "must lie strictly between 0 and 1 (CFL condition)");

    const std::string& ic = r.text("initial_condition");
    const bool uniform = ic == "uniform_maxwellian";
    const bool custom = ic == "custom";
    if (ic == "paper_test") {
        c.initial_condition = PaperTest{};
    } else if (uniform) {
        UniformMaxwellian u;
        if (r.has("ic_rho")) u.rho = r.real("ic_rho");
        if (r.has("ic_u")) u.u = r.real("ic_u");
        if (r.has("ic_temp")) u.temp = r.real("ic_temp");
        if (!(u.rho > 0)) r.fail("ic_rho", "must be > 0");
        if (!(u.temp > 0)) r.fail("ic_temp", "must be > 0");
        c.initial_condition = u;
    } else if (custom) {
        if (!r.has("ic_file")) r.fail("initial_condition", "'custom' requires ic_file");
        std::filesystem::path p = r.text("ic_file");
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        Tabulated t;
        try {
            t.f = read_distribution(p);
        } catch (const std::exception& ex) {
            r.fail("ic_file", ex.what());
        }
        if (t.f.n_x() != c.n_x || t.f.n_v() != c.n_v)
            r.fail("ic_file", "tabulated data has shape (" + std::to_string(t.f.n_x()) + ", " +
                                  std::to_string(t.f.n_v()) + "), config asks for (" + std::to_string(c.n_x) + ", " +
                                  std::to_string(c.n_v) + ")");
        t.source = p.string();
        c.initial_condition = std::move(t);
    } else {
        r.fail("initial_condition", "expected paper_test, uniform_maxwellian or custom, got '" + ic + "'");
    }
    for (const char* k : {"ic_rho", "ic_u", "ic_temp"})
        if (r.has(k) && !uniform) r.fail(k, "only valid with initial_condition = uniform_maxwellian");
    if (r.has("ic_file") && !custom) r.fail("ic_file", "only valid with initial_condition = custom");

    if (r.has("diagnostics_every")) {
        c.diagnostics_every = r.integer("diagnostics_every");
        if (c.diagnostics_every < 0) r.fail("diagnostics_every", "must be >= 0");
    }
    if (r.has("q_list")) {
        c.q_list = r.reals("q_list");
        for (double q : c.q_list)
            if (!(q > 3)) r.fail("q_list", "every weighted-norm exponent must satisfy q > 3, got " + format_real(q));
    }
    if (r.has("dt_policy")) {
        const std::string& s = r.text("dt_policy");
        if (s == "adaptive")
            c.dt_policy = DtPolicy::Adaptive;
        else if (s == "fixed")
            c.dt_policy = DtPolicy::Fixed;
        else
            r.fail("dt_policy", "expected adaptive or fixed, got '" + s + "'");
    }
    if (r.has("fixed_dt")) {
        if (r.has("dt_policy")) r.fail("fixed_dt", "set either fixed_dt or dt_policy, not both");
        c.dt_policy = r.boolean("fixed_dt") ? DtPolicy::Fixed : DtPolicy::Adaptive;
    }
    if (r.has("field_method")) {
        const std::string& s = r.text("field_method");
        if (s == "direct")
            c.field_method = FieldMethod::Direct;
        else if (s == "prefix")
            c.field_method = FieldMethod::Prefix;
        else
            r.fail("field_method", "expected direct or prefix, got '" + s + "'");
    }
    if (r.has("compensated_sum")) c.compensated_sum = r.boolean("compensated_sum");
    if (r.has("zero_field")) c.zero_field = r.boolean("zero_field");
    if (r.has("collisions")) c.collisions = r.boolean("collisions");
    if (r.has("keep_f_snapshots")) c.keep_f_snapshots = r.boolean("keep_f_snapshots");

    try {
        c.validate();
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(source_name + ": " + ex.what());
    }

    if (r.has("levels")) {
        StudyConfig s{std::move(c), 0};
        const long levels = r.integer("levels");
        if (levels < 2 || levels > 12) r.fail("levels", "must lie in [2, 12]");
        s.levels = static_cast<int>(levels);
        return s;
    }
    return c;
}

ParsedConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path.string(), path.parent_path());
}

std::map<std::string, std::string> config_echo(const SolverConfig& c) {
    std::map<std::string, std::string> m;
    m["n_x"] = std::to_string(c.n_x);
    m["n_v"] = std::to_string(c.n_v);
    m["v_max"] = format_real(c.v_max);
    m["eps"] = format_real(c.eps);
    m["t_final"] = format_real(c.t_final);
    m["sigma"] = format_real(c.sigma);
    std::visit(
        [&](const auto& ic) {
            using T = std::decay_t<decltype(ic)>;
            if constexpr (std::is_same_v<T, PaperTest>) {
                m["initial_condition"] = "paper_test";
            } else if constexpr (std::is_same_v<T, UniformMaxwellian>) {
                m["initial_condition"] = "uniform_maxwellian";
                m["ic_rho"] = format_real(ic.rho);
                m["ic_u"] = format_real(ic.u);
                m["ic_temp"] = format_real(ic.temp);
            } else {
                m["initial_condition"] = "custom";
                m["ic_file"] = ic.source;
            }
        },
        c.initial_condition);
    m["diagnostics_every"] = std::to_string(c.diagnostics_every);
    std::string qs;
    for (double q : c.q_list) qs += (qs.empty() ? "" : ",") + format_real(q);
    m["q_list"] = qs;
    m["dt_policy"] = to_string(c.dt_policy);
    m["field_method"] = to_string(c.field_method);
    m["compensated_sum"] = c.compensated_sum ? "true" : "false";
    m["zero_field"] = c.zero_field ? "true" : "false";
    m["collisions"] = c.collisions ? "true" : "false";
    m["keep_f_snapshots"] = c.keep_f_snapshots ? "true" : "false";
    return m;
}

std::string format_report(const ConvergenceReport& report) {
    std::string out = "n_x,n_v,metric,error,order\n";
    char buf[256];
    for (const auto& row : report.rows) {
        for (const auto& metric : report.metrics) {
            std::snprintf(buf, sizeof buf, "%ld,%ld,%s,%.4e,", static_cast<long>(row.n_x), static_cast<long>(row.n_v),
                          metric.c_str(), row.errors.at(metric));
            out += buf;
            if (const auto it = row.orders.find(metric); it != row.orders.end()) {
                std::snprintf(buf, sizeof buf, "%.4e", it->second);
                out += buf;
            }
            out += '\n';
        }
    }
    return out;
}

void emit_report(const ConvergenceReport& report, const std::filesystem::path& path) {
    write_text(path, format_report(report));
}

std::string format_snapshot(const Snapshot& s, const Grid& grid) {
    std::string out = "x,rho,u,temp,e\n";
    char buf[160];
    for (Index i = 0; i < grid.n_x; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", grid.x(i), s.macro.rho(i), s.macro.u(i),
                      s.macro.temp(i), s.e(i));
        out += buf;
    }
    return out;
}

void emit_snapshot(const Snapshot& snapshot, const Grid& grid, const std::filesystem::path& path) {
    write_text(path, format_snapshot(snapshot, grid));
}

void emit_snapshot(const SimulationState& state, const Grid& grid, const std::filesystem::path& path) {
    emit_snapshot(Snapshot{state.t, state.step, state.macro, state.e, std::nullopt}, grid, path);
}

void emit_diagnostics(const DiagnosticsLog& log, const std::vector<double>& q_list, const std::filesystem::path& path) {
    std::string out = "t,step,mass,momentum,kinetic_energy,field_energy,total_energy,entropy,min_f,e_inf";
    for (double q : q_list) out += "," + weighted_metric_name(q);
    out += '\n';
    char buf[64];
    for (const auto& r : log.records) {
        out += format_real(r.t);
        std::snprintf(buf, sizeof buf, ",%ld", r.step);
        out += buf;
        for (double v : {r.mass, r.momentum, r.kinetic_energy, r.field_energy, r.total_energy(), r.entropy, r.min_f,
                         r.e_inf})
            out += "," + format_real(v);
        for (double q : q_list) out += "," + format_real(r.weighted_norms.at(q));
        out += '\n';
    }
    write_text(path, out);
}

void write_distribution(const Distribution& f, const std::filesystem::path& path) {
    std::string buf(kDumpMagic, sizeof kDumpMagic);
    put_u64(buf, static_cast<std::uint64_t>(f.n_x()));
    put_u64(buf, static_cast<std::uint64_t>(f.n_v()));
    buf.reserve(buf.size() + 8 * static_cast<std::size_t>(f.n_x() * f.velocity_count()));
    for (Index i = 0; i < f.n_x(); ++i)
        for (Index j = -f.n_v(); j <= f.n_v(); ++j) put_u64(buf, std::bit_cast<std::uint64_t>(f(i, j)));
    write_text(path, buf);
}

Distribution read_distribution(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read distribution dump '" + path.string() + "'");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < 24 || !std::equal(kDumpMagic, kDumpMagic + 8, bytes.begin()))
        throw std::runtime_error("'" + path.string() + "' is not a distribution dump");
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::uint64_t n_x = get_u64(p + 8);
    const std::uint64_t n_v = get_u64(p + 16);
    if (n_x < 1 || n_v < 1 || n_x > (1u << 24) || n_v > (1u << 24))
        throw std::runtime_error("'" + path.string() + "' has an implausible header");
    const std::uint64_t count = n_x * (2 * n_v + 1);
    if (bytes.size() != 24 + 8 * count)
        throw std::runtime_error("'" + path.string() + "' has " + std::to_string(bytes.size()) + " bytes, expected " +
                                 std::to_string(24 + 8 * count));
    Distribution f(static_cast<Index>(n_x), static_cast<Index>(n_v));
    const unsigned char* q = p + 24;
    for (Index i = 0; i < f.n_x(); ++i)
        for (Index j = -f.n_v(); j <= f.n_v(); ++j, q += 8) f(i, j) = std::bit_cast<double>(get_u64(q));
    f.refresh_ghosts();
    return f;
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["version"] = m.version;
    j["dt_policy"] = m.dt_policy;
    j["wall_time_seconds"] = m.wall_time_seconds;
    j["config"] = m.config;
    j["notes"] = m.notes;
    j["outputs"] = m.outputs;
    write_text(path, j.dump(2) + "\n");
}

}  // namespace vpbgk
