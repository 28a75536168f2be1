#include "fibrenet/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace fibrenet {

ConfigError::ConfigError(const std::string& message, int line_, std::string key_)
    : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + key_ + ": " + message
                                   : key_ + ": " + message),
      line(line_),
      key(std::move(key_)) {}

std::string to_string(Protocol p) {
    switch (p) {
        case Protocol::transfer: return "transfer";
        case Protocol::sweep_length: return "sweep-length";
        case Protocol::scan_T: return "scan-T";
        case Protocol::compare_models: return "compare-models";
        case Protocol::dark_check: return "dark-check";
    }
    return "?";
}

Protocol protocol_from_string(const std::string& name) {
    for (Protocol p : {Protocol::transfer, Protocol::sweep_length, Protocol::scan_T, Protocol::compare_models,
                       Protocol::dark_check})
        if (to_string(p) == name) return p;
    throw std::invalid_argument("unknown protocol '" + name + "'");
}

std::string format_double(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) return "nan";
    return std::string(buf, end);
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& v) {
    double x = 0.0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    if (!v.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc() || ptr != last) throw std::invalid_argument("not a number: '" + v + "'");
    return x;
}

long parse_long(const std::string& v) {
    long x = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size()) throw std::invalid_argument("not an integer: '" + v + "'");
    return x;
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw std::invalid_argument("not a boolean: '" + v + "'");
}

std::vector<double> parse_list(const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw std::invalid_argument("empty list element");
        out.push_back(parse_double(item));
    }
    return out;
}

std::string render_list(const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ", ";
        s += format_double(xs[i]);
    }
    return s;
}

struct Field {
    std::string section;
    std::string key;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

#define FN_DOUBLE(sec, name, member)                                                        \
    Field {                                                                                 \
        sec, name, [](RunConfig& c, const std::string& v) { c.member = parse_double(v); },  \
            [](const RunConfig& c) { return format_double(c.member); }                      \
    }
#define FN_LONG(sec, name, member, type)                                                                   \
    Field {                                                                                                \
        sec, name, [](RunConfig& c, const std::string& v) { c.member = static_cast<type>(parse_long(v)); }, \
            [](const RunConfig& c) { return std::to_string(c.member); }                                    \
    }
#define FN_BOOL(sec, name, member)                                                      \
    Field {                                                                             \
        sec, name, [](RunConfig& c, const std::string& v) { c.member = parse_bool(v); }, \
            [](const RunConfig& c) { return std::string(c.member ? "true" : "false"); }  \
    }

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        Field{"protocol", "name", [](RunConfig& c, const std::string& v) { c.protocol = protocol_from_string(v); },
              [](const RunConfig& c) { return to_string(c.protocol); }},

        Field{"model", "model_kind",
              [](RunConfig& c, const std::string& v) { c.model_kind = model_kind_from_string(v); },
              [](const RunConfig& c) { return to_string(c.model_kind); }},
        FN_DOUBLE("model", "L", L),
        FN_DOUBLE("model", "kappa", kappa),
        FN_DOUBLE("model", "gamma", gamma),
        FN_DOUBLE("model", "Delta_g", Delta_g),
        FN_DOUBLE("model", "Delta_r", Delta_r),
        FN_DOUBLE("model", "g_a", g_a),
        FN_DOUBLE("model", "g_b", g_b),
        FN_DOUBLE("model", "delta0", delta0),
        Field{"model", "K",
              [](RunConfig& c, const std::string& v) {
                  if (v == "auto")
                      c.K.reset();
                  else
                      c.K = static_cast<int>(parse_long(v));
              },
              [](const RunConfig& c) { return c.K ? std::to_string(*c.K) : std::string("auto"); }},
        FN_BOOL("model", "compensate_light_shift", compensate_light_shift),
        FN_BOOL("model", "include_s11_shift", include_s11_shift),

        FN_DOUBLE("pulses", "peak_a", schedule.peak_a),
        FN_DOUBLE("pulses", "peak_b", schedule.peak_b),
        FN_DOUBLE("pulses", "width_fraction", schedule.width_fraction),
        FN_DOUBLE("pulses", "offset_fraction", schedule.offset_fraction),
        FN_DOUBLE("pulses", "center_fraction", schedule.center_fraction),

        FN_DOUBLE("transfer", "T", T),
        FN_DOUBLE("transfer", "alpha_re", alpha_re),
        FN_DOUBLE("transfer", "alpha_im", alpha_im),
        FN_DOUBLE("transfer", "beta_re", beta_re),
        FN_DOUBLE("transfer", "beta_im", beta_im),
        FN_BOOL("transfer", "allow_intuitive_order", allow_intuitive_order),

        FN_LONG("integrator", "steps", steps, long),
        FN_LONG("integrator", "samples", samples, long),
        FN_LONG("integrator", "halvings_max", halvings_max, int),
        FN_DOUBLE("integrator", "fidelity_tol", fidelity_tol),
        FN_BOOL("integrator", "refine_dt", refine_dt),
        FN_LONG("integrator", "K_doublings_max", K_doublings_max, int),
        FN_DOUBLE("integrator", "K_tol", K_tol),

        Field{"sweep", "L_values", [](RunConfig& c, const std::string& v) { c.L_values = parse_list(v); },
              [](const RunConfig& c) { return render_list(c.L_values); }},
        Field{"sweep", "T_values", [](RunConfig& c, const std::string& v) { c.T_values = parse_list(v); },
              [](const RunConfig& c) { return render_list(c.T_values); }},

        FN_DOUBLE("compare", "omega_peak", compare_omega),
        FN_DOUBLE("compare", "g", compare_g),
        FN_DOUBLE("compare", "Delta_g", compare_Delta_g),

        FN_LONG("dark-check", "draws", dark_draws, long),
        Field{"dark-check", "seed",
              [](RunConfig& c, const std::string& v) {
                  std::uint64_t x = 0;
                  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
                  if (ec != std::errc() || ptr != v.data() + v.size())
                      throw std::invalid_argument("not an unsigned integer: '" + v + "'");
                  c.seed = x;
              },
              [](const RunConfig& c) { return std::to_string(c.seed); }},
    };
    return table;
}

#undef FN_DOUBLE
#undef FN_LONG
#undef FN_BOOL

const Field* find_field(const std::string& section, const std::string& key) {
    for (const Field& f : fields())
        if (f.section == section && f.key == key) return &f;
    return nullptr;
}

bool known_section(const std::string& section) {
    return std::any_of(fields().begin(), fields().end(), [&](const Field& f) { return f.section == section; });
}

void check(bool ok, const char* key, const std::string& message) {
    if (!ok) throw ConfigError(message, 0, key);
}

}  // namespace

void RunConfig::validate() const {
    check(L > 0.0, "L", "must be > 0");
    check(kappa >= 0.0, "kappa", "must be >= 0");
    check(gamma >= 0.0, "gamma", "must be >= 0");
    check(delta0 > 0.0, "delta0", "must be > 0");
    check(!K || *K >= 0, "K", "must be >= 0 or auto");
    check(schedule.peak_a >= 0.0, "peak_a", "must be >= 0");
    check(schedule.peak_b >= 0.0, "peak_b", "must be >= 0");
    check(schedule.width_fraction > 0.0, "width_fraction", "must be > 0");
    check(T > 0.0, "T", "must be > 0");
    check(std::abs(alpha_re * alpha_re + alpha_im * alpha_im + beta_re * beta_re + beta_im * beta_im - 1.0) <= 1e-12,
          "alpha_re", "|alpha|^2 + |beta|^2 must equal 1");
    check(allow_intuitive_order || schedule.offset_fraction > 0.0, "offset_fraction",
          "must be > 0 (node-B pulse first) unless allow_intuitive_order is set");
    check(steps >= 1, "steps", "must be >= 1");
    check(samples >= 1 && samples <= steps, "samples", "must be in [1, steps]");
    check(halvings_max >= 0, "halvings_max", "must be >= 0");
    check(fidelity_tol > 0.0, "fidelity_tol", "must be > 0");
    check(K_doublings_max >= 0, "K_doublings_max", "must be >= 0");
    check(K_tol > 0.0, "K_tol", "must be > 0");
    check(!L_values.empty(), "L_values", "must not be empty");
    for (std::size_t i = 0; i < L_values.size(); ++i) {
        check(L_values[i] > 0.0, "L_values", "must be positive");
        check(i == 0 || L_values[i] > L_values[i - 1], "L_values", "must be ascending");
    }
    check(!T_values.empty(), "T_values", "must not be empty");
    for (double t : T_values) check(t > 0.0, "T_values", "must be positive");
    check(compare_omega >= 0.0, "omega_peak", "must be >= 0");
    check(compare_g > 0.0, "g", "must be > 0");
    check(compare_Delta_g != 0.0, "Delta_g", "must be nonzero");
    check(dark_draws >= 1, "draws", "must be >= 1");
    try {
        model_params().validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what(), 0, "model");
    }
}

ModelParams RunConfig::model_params() const {
    ModelParams p;
    p.model_kind = model_kind;
    p.kappa = kappa;
    p.gamma = gamma;
    p.Delta_g = Delta_g;
    p.Delta_r = Delta_r;
    p.g_a = g_a;
    p.g_b = g_b;
    p.delta0 = delta0;
    p.compensate_light_shift = compensate_light_shift;
    p.include_s11_shift = include_s11_shift;
    p.pulses = schedule.at(T);
    p = at_length(p, L, true);
    if (K) p.K = *K;
    return p;
}

TransferOptions RunConfig::transfer_options() const {
    TransferOptions o;
    o.integrator.dt = T / static_cast<double>(steps);
    o.integrator.record_every = static_cast<int>(std::max(1L, steps / samples));
    o.integrator.halvings_max = halvings_max;
    o.integrator.fidelity_tol = fidelity_tol;
    o.convergence.refine_dt = refine_dt;
    o.convergence.K_doublings_max = K_doublings_max;
    o.convergence.K_tol = K_tol;
    o.allow_intuitive_order = allow_intuitive_order;
    return o;
}

ModelParams RunConfig::compare_params() const {
    ModelParams p = model_params();
    p.model_kind = ModelKind::full;
    p.Delta_g = compare_Delta_g;
    p.g_a = p.g_b = compare_g;
    p.pulses.a.peak = p.pulses.b.peak = compare_omega;
    return p;
}

RunConfig parse_config(const std::string& text, const ParseOptions& options) {
    RunConfig c;
    std::set<std::pair<std::string, std::string>> seen;
    std::map<std::string, int> last_line;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("malformed section header", line_no, line);
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (!known_section(section)) throw ConfigError("unknown section", line_no, section);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no, line);
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (section.empty()) throw ConfigError("key outside of any section", line_no, key);
        const Field* f = find_field(section, key);
        if (!f) throw ConfigError("unknown key in [" + section + "]", line_no, key);
        if (!seen.insert({section, key}).second && options.diagnostics)
            *options.diagnostics << "warning: line " << line_no << ": duplicate key '" << key
                                 << "', last value wins\n";
        try {
            f->set(c, value);
        } catch (const std::exception& e) {
            throw ConfigError(e.what(), line_no, key);
        }
        last_line[key] = line_no;
    }
    if (options.strict) {
        for (const Field& f : fields())
            if (!seen.count({f.section, f.key})) throw ConfigError("missing required key in [" + f.section + "]", 0, f.key);
    }
    try {
        c.validate();
    } catch (const ConfigError& e) {
        const auto it = last_line.find(e.key);
        if (it == last_line.end()) throw;
        std::string msg = e.what();
        msg.erase(0, e.key.size() + 2);
        throw ConfigError(msg, it->second, e.key);
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path, const ParseOptions& options) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string(), 0, "--config");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), options);
}

std::string render_config(const RunConfig& config) {
    std::string out;
    std::string section;
    for (const Field& f : fields()) {
        if (f.section != section) {
            if (!section.empty()) out += '\n';
            section = f.section;
            out += "[" + section + "]\n";
        }
        out += f.key + " = " + f.get(config) + "\n";
    }
    return out;
}

}  // namespace fibrenet
