#include "giant_lattice/config.hpp"

#include "giant_lattice/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace giant_lattice {

std::string_view to_string(RunMode mode) {
    switch (mode) {
        case RunMode::Evolve: return "evolve";
        case RunMode::Transport: return "transport";
        case RunMode::Memory: return "memory";
        case RunMode::SweepN: return "sweep-n";
        case RunMode::Spectrum: return "spectrum";
    }
    return "?";
}

std::optional<RunMode> parse_run_mode(std::string_view s) {
    if (s == "evolve") return RunMode::Evolve;
    if (s == "transport") return RunMode::Transport;
    if (s == "memory") return RunMode::Memory;
    if (s == "sweep-n") return RunMode::SweepN;
    if (s == "spectrum") return RunMode::Spectrum;
    return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            parts.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return parts;
}

struct Entry {
    std::string value;
    int line;
};

class Reader {
public:
    Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::optional<double> real(const std::string& key) {
        auto e = take(key);
        if (!e) return std::nullopt;
        return parse_real(key, e->value, e->line);
    }

    std::optional<std::uint64_t> integer(const std::string& key) {
        auto e = take(key);
        if (!e) return std::nullopt;
        return parse_uint(key, e->value, e->line);
    }

    std::optional<bool> boolean(const std::string& key) {
        auto e = take(key);
        if (!e) return std::nullopt;
        std::string v = e->value;
        std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
        if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
        if (v == "false" || v == "no" || v == "0" || v == "off") return false;
        throw ConfigError(key, "expected a boolean, got '" + e->value + "'", e->line);
    }

    std::optional<std::string> text(const std::string& key) {
        auto e = take(key);
        if (!e) return std::nullopt;
        if (e->value.empty()) throw ConfigError(key, "empty value", e->line);
        return e->value;
    }

    // "a, b, c" or "start:stop:count"
    std::optional<std::vector<double>> real_list(const std::string& key) {
        auto e = take(key);
        if (!e) return std::nullopt;
        std::vector<double> out;
        const std::string_view v = e->value;
        if (v.find(':') != std::string_view::npos) {
            auto parts = split(v, ':');
            if (parts.size() != 3) throw ConfigError(key, "grid must be start:stop:count", e->line);
            const double a = parse_real(key, parts[0], e->line);
            const double b = parse_real(key, parts[1], e->line);
            const auto count = parse_uint(key, parts[2], e->line);
            if (count == 0) throw ConfigError(key, "grid count must be positive", e->line);
            if (count == 1) {
                if (a != b) throw ConfigError(key, "a one-point grid needs start == stop", e->line);
                out.push_back(a);
            } else {
                const double step = (b - a) / static_cast<double>(count - 1);
                for (std::uint64_t i = 0; i < count; ++i) {
                    out.push_back(i + 1 == count ? b : a + step * static_cast<double>(i));
                }
            }
            return out;
        }
        for (auto part : split(v, ',')) {
            if (part.empty()) throw ConfigError(key, "empty list element", e->line);
            out.push_back(parse_real(key, part, e->line));
        }
        return out;
    }

    // "1, 2, 5" or "1..20", or a mix such as "1..5, 9"
    std::optional<std::vector<std::uint64_t>> uint_list(const std::string& key) {
        auto e = take(key);
        if (!e) return std::nullopt;
        std::vector<std::uint64_t> out;
        for (auto part : split(e->value, ',')) {
            if (part.empty()) throw ConfigError(key, "empty list element", e->line);
            if (auto dots = part.find(".."); dots != std::string_view::npos) {
                const auto a = parse_uint(key, trim(part.substr(0, dots)), e->line);
                const auto b = parse_uint(key, trim(part.substr(dots + 2)), e->line);
                if (b < a) throw ConfigError(key, "range end precedes start", e->line);
                if (b - a > 1'000'000) throw ConfigError(key, "range too long", e->line);
                for (auto s = a; s <= b; ++s) out.push_back(s);
            } else {
                out.push_back(parse_uint(key, part, e->line));
            }
        }
        return out;
    }

    int line_of(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    void reject_leftovers() const {
        for (const auto& [key, e] : entries_) {
            if (!consumed_.count(key)) throw ConfigError(key, "unknown key", e.line);
        }
    }

private:
    std::optional<Entry> take(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        consumed_.insert(key);
        return it->second;
    }

    static double parse_real(const std::string& key, std::string_view s, int line) {
        s = trim(s);
        double v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) {
            throw ConfigError(key, "expected a real number, got '" + std::string(s) + "'", line);
        }
        return v;
    }

    static std::uint64_t parse_uint(const std::string& key, std::string_view s, int line) {
        s = trim(s);
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
            throw ConfigError(key, "expected a non-negative integer, got '" + std::string(s) + "'", line);
        }
        return v;
    }

    std::map<std::string, Entry> entries_;
    std::set<std::string> consumed_;
};

const std::set<std::string> kSections = {"model", "disorder", "run"};

}  // namespace

void RunConfig::validate() const {
    try {
        model.validate();
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        const auto colon = msg.find(':');
        throw ConfigError("model." + msg.substr(0, colon), msg.substr(colon + 2));
    }
    if (!(disorder.W >= 0)) throw ConfigError("disorder.W", "must be >= 0");

    const bool timed = run.mode != RunMode::Spectrum;
    if (timed) {
        if (!(run.dt > 0)) throw ConfigError("run.dt", "must be positive");
        if (!(run.t_end > 0)) throw ConfigError("run.t_end", "must be positive");
        if (run.t_end / run.dt > 1e7) throw ConfigError("run.dt", "time grid exceeds 1e7 samples");
    }
    if (run.mode == RunMode::SweepN) {
        if (run.W_values.empty()) throw ConfigError("run.W_values", "required (nonempty) for mode sweep-n");
        for (double w : run.W_values) {
            if (!(w >= 0)) throw ConfigError("run.W_values", "disorder strengths must be >= 0");
        }
    }
    if (run.mode == RunMode::Spectrum) {
        if (!run.parameter) throw ConfigError("run.parameter", "required for mode spectrum");
        if (run.values.empty()) throw ConfigError("run.values", "required (nonempty) for mode spectrum");
        if (*run.parameter == SweepParameter::Coupling) {
            for (double g : run.values) {
                if (!(g >= 0)) throw ConfigError("run.values", "coupling values must be >= 0");
            }
        }
    }
    if (run.band_tol && !(*run.band_tol >= 0)) throw ConfigError("run.band_tol", "must be >= 0");
    if (!(run.memory.threshold >= 0)) throw ConfigError("run.threshold", "must be >= 0");
    if (run.output.empty()) throw ConfigError("run.output", "must name a directory");
}

RunConfig parse_config(std::string_view text) {
    std::map<std::string, Entry> entries;
    std::string section;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        std::string_view line = raw;
        if (auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("", "unterminated section header", line_no);
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!kSections.count(section)) throw ConfigError(section, "unknown section", line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("", "expected 'key = value'", line_no);
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) throw ConfigError("", "missing key before '='", line_no);
        if (section.empty()) throw ConfigError(key, "key outside of a [section]", line_no);
        const std::string full = section + "." + key;
        if (entries.count(full)) throw ConfigError(full, "duplicate key", line_no);
        entries.emplace(full, Entry{std::string(trim(line.substr(eq + 1))), line_no});
    }

    Reader r(std::move(entries));
    RunConfig cfg;
    auto& md = cfg.model;

    if (auto v = r.integer("model.L")) md.L = static_cast<std::size_t>(*v);
    if (auto v = r.real("model.omega0")) md.omega0 = *v;
    if (auto v = r.real("model.omegaE")) md.omegaE = *v;
    if (auto v = r.real("model.J")) md.J = *v;
    if (r.has("model.g") && (r.has("model.gm") || r.has("model.gn"))) {
        throw ConfigError("model.g", "give either g or gm/gn, not both", r.line_of("model.g"));
    }
    if (auto v = r.real("model.g")) md.gm = md.gn = *v;
    if (auto v = r.real("model.gm")) md.gm = *v;
    if (auto v = r.real("model.gn")) md.gn = *v;
    const int m_line = r.line_of("model.m");
    if (auto v = r.integer("model.m")) md.m = static_cast<std::size_t>(*v);
    if (auto v = r.integer("model.n")) md.n = static_cast<std::size_t>(*v);
    if (md.m >= md.n && md.m >= 1 && md.n >= 1) {
        throw ConfigError("model.m", "coupling sites must satisfy m < n (got m = " + std::to_string(md.m) +
                                         ", n = " + std::to_string(md.n) + ")",
                          m_line);
    }

    if (auto v = r.real("disorder.W")) cfg.disorder.W = *v;
    if (auto v = r.integer("disorder.seed")) cfg.disorder.seed = *v;
    if (auto v = r.uint_list("disorder.seeds")) cfg.disorder.seeds = *v;

    auto& run = cfg.run;
    if (auto v = r.text("run.mode")) {
        auto mode = parse_run_mode(*v);
        if (!mode) {
            throw ConfigError("run.mode", "unknown mode '" + *v + "' (evolve, transport, memory, sweep-n, spectrum)",
                              r.line_of("run.mode"));
        }
        run.mode = *mode;
    }
    if (auto v = r.real("run.dt")) run.dt = *v;
    if (auto v = r.real("run.t_end")) run.t_end = *v;
    if (auto v = r.boolean("run.want_sites")) run.want_sites = *v;
    if (auto v = r.text("run.parameter")) {
        run.parameter = parse_sweep_parameter(*v);
        if (!run.parameter) {
            throw ConfigError("run.parameter", "unknown sweep parameter '" + *v + "' (detuning, hopping, coupling)",
                              r.line_of("run.parameter"));
        }
    }
    if (auto v = r.real_list("run.values")) run.values = *v;
    if (auto v = r.real_list("run.W_values")) run.W_values = *v;
    if (auto v = r.boolean("run.ipr")) run.ipr = *v;
    if (auto v = r.real("run.band_tol")) run.band_tol = *v;
    if (auto v = r.real("run.threshold")) run.memory.threshold = *v;
    if (auto v = r.text("run.measure")) {
        if (*v == "amplitude4") {
            run.memory.power = MeasurePower::Fourth;
        } else if (*v == "population") {
            run.memory.power = MeasurePower::Second;
        } else {
            throw ConfigError("run.measure", "expected amplitude4 or population", r.line_of("run.measure"));
        }
    }
    if (auto v = r.integer("run.threads")) run.threads = static_cast<unsigned>(*v);
    if (auto v = r.text("run.output")) run.output = *v;

    r.reject_leftovers();
    if (run.mode == RunMode::Transport) run.want_sites = true;
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read configuration file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace giant_lattice
