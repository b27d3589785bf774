#include "splitspec/scenario.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <map>
#include <set>

#include "splitspec/errors.hpp"
#include "splitspec/expr.hpp"

namespace splitspec {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Entry {
    std::string section, key, value;
    int line = 0;
};

const std::set<std::string> kSections = {"", "grid", "init", "evolve", "eigen", "region",
                                         "output"};

std::vector<Entry> tokenize(const std::string& text) {
    std::vector<Entry> entries;
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        std::string t = trim(line.substr(0, line.find('#')));
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError("unterminated section header", line_no);
            section = trim(t.substr(1, t.size() - 2));
            if (!kSections.count(section) || section.empty())
                throw ConfigError("unknown section [" + section + "]", line_no);
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected `key = value` or a [section] header", line_no);
        Entry e;
        e.key = trim(t.substr(0, eq));
        e.value = trim(t.substr(eq + 1));
        e.line = line_no;
        e.section = section;
        if (e.key.empty()) throw ConfigError("empty key", line_no);
        std::size_t dot = e.key.find('.');
        if (dot != std::string::npos) {
            e.section = e.key.substr(0, dot);
            e.key = e.key.substr(dot + 1);
            if (!kSections.count(e.section) || e.section.empty() || e.key.empty())
                throw ConfigError("unknown section prefix `" + e.section + "`", line_no);
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

bool has_symbol(const ExprPtr& e) {
    if (!e) return false;
    if (e->op == PotentialExpr::Op::symbol) return true;
    return has_symbol(e->a) || has_symbol(e->b);
}

bool has_symbol_outside(const ExprPtr& e, const std::set<std::string>& allowed,
                        std::string* offender) {
    if (!e) return false;
    if (e->op == PotentialExpr::Op::symbol && !allowed.count(e->name)) {
        *offender = e->name;
        return true;
    }
    return has_symbol_outside(e->a, allowed, offender) ||
           has_symbol_outside(e->b, allowed, offender);
}

double const_number(const std::string& text, const Entry& e) {
    ExprPtr ex;
    try {
        ex = parse_potential(text);
    } catch (const ExprParseError& err) {
        throw ConfigError(e.key + ": " + err.what(), e.line);
    }
    if (has_symbol(ex)) throw ConfigError(e.key + ": value must be a constant", e.line);
    return evaluate_scalar(ex, 0.0);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t c = v.find(',', start);
        parts.push_back(trim(v.substr(start, c == std::string::npos ? c : c - start)));
        if (c == std::string::npos) break;
        start = c + 1;
    }
    return parts;
}

std::vector<double> number_list(const Entry& e) {
    std::vector<double> out;
    for (const std::string& p : split_list(e.value)) {
        if (p.empty()) throw ConfigError(e.key + ": empty list element", e.line);
        out.push_back(const_number(p, e));
    }
    return out;
}

long strict_long(const std::string& text, const Entry& e) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError(e.key + ": expected an integer, got `" + text + "`", e.line);
    return v;
}

int strict_int(const std::string& text, const Entry& e) {
    return static_cast<int>(strict_long(text, e));
}

std::vector<int> int_list(const Entry& e) {
    std::vector<int> out;
    for (const std::string& p : split_list(e.value)) {
        if (p.empty()) throw ConfigError(e.key + ": empty list element", e.line);
        out.push_back(strict_int(p, e));
    }
    return out;
}

bool strict_bool(const Entry& e) {
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    throw ConfigError(e.key + ": expected true or false", e.line);
}

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

// key -> Entry for one section, rejecting duplicates.
std::map<std::string, Entry> keyed(const std::vector<Entry>& entries, const std::string& section) {
    std::map<std::string, Entry> m;
    for (const Entry& e : entries) {
        if (e.section != section) continue;
        if (m.count(e.key)) throw ConfigError("duplicate key `" + e.key + "`", e.line);
        m[e.key] = e;
    }
    return m;
}

// Fetches and erases; leftovers at the end are unknown-key errors.
const Entry* take(std::map<std::string, Entry>& m, const std::string& key,
                  std::map<std::string, Entry>& taken) {
    auto it = m.find(key);
    if (it == m.end()) return nullptr;
    taken[key] = it->second;
    m.erase(it);
    return &taken[key];
}

void reject_leftovers(const std::map<std::string, Entry>& m, const std::string& section) {
    if (m.empty()) return;
    const Entry& e = m.begin()->second;
    std::string where = section.empty() ? "top level" : "[" + section + "]";
    throw ConfigError("unknown key `" + e.key + "` in " + where, e.line);
}

// Broadcast a 1-element list across dims, or require an exact-length list.
template <typename T>
void fill_dims(std::array<T, 3>& dst, const std::vector<T>& src, int dims, const Entry& e) {
    if (src.size() == 1) {
        for (int d = 0; d < dims; ++d) dst[static_cast<std::size_t>(d)] = src[0];
        return;
    }
    if (static_cast<int>(src.size()) != dims)
        throw ConfigError(e.key + ": expected 1 or " + std::to_string(dims) + " values",
                          e.line);
    for (int d = 0; d < dims; ++d) dst[static_cast<std::size_t>(d)] = src[static_cast<std::size_t>(d)];
}

}  // namespace

Scenario load_config(const std::string& text) {
    std::vector<Entry> entries = tokenize(text);
    Scenario s;
    std::map<std::string, Entry> taken;

    auto top = keyed(entries, "");
    if (const Entry* e = take(top, "name", taken)) {
        if (!valid_name(e->value)) throw ConfigError("name: expected letters, digits or _", e->line);
        s.name = e->value;
    }
    const Entry* pot = take(top, "potential", taken);
    if (!pot) throw ConfigError("missing required key `potential`");
    s.potential_text = pot->value;
    if (const Entry* e = take(top, "alpha", taken)) s.alpha_text = e->value;
    reject_leftovers(top, "");

    auto grid = keyed(entries, "grid");
    if (const Entry* e = take(grid, "kind", taken)) {
        if (e->value != "alpha_scaled" && e->value != "box" && e->value != "periodic")
            throw ConfigError("kind: expected alpha_scaled, box or periodic", e->line);
        s.grid_kind = e->value;
    }
    const Entry* n_entry = take(grid, "n", taken);
    const Entry* dims_entry = take(grid, "dims", taken);
    std::vector<int> n_list = n_entry ? int_list(*n_entry) : std::vector<int>{256};
    if (dims_entry) {
        s.dims = strict_int(dims_entry->value, *dims_entry);
        if (s.dims < 1 || s.dims > 3)
            throw ConfigError("dims: expected 1, 2 or 3", dims_entry->line);
    } else {
        s.dims = static_cast<int>(n_list.size());
        if (s.dims < 1 || s.dims > 3)
            throw ConfigError("n: expected 1 to 3 values",
                              n_entry ? n_entry->line : 0);
    }
    {
        Entry fallback;
        fallback.key = "n";
        fill_dims(s.n, n_list, s.dims, n_entry ? *n_entry : fallback);
    }
    for (int d = 0; d < s.dims; ++d) {
        int nd = s.n[static_cast<std::size_t>(d)];
        if (nd < 8 || (nd & (nd - 1)) != 0)
            throw ConfigError("n: each value must be a power of two, at least 8",
                              n_entry ? n_entry->line : 0);
    }
    if (const Entry* e = take(grid, "origin", taken)) fill_dims(s.origin, number_list(*e), s.dims, *e);
    const Entry* lo_e = take(grid, "lo", taken);
    const Entry* hi_e = take(grid, "hi", taken);
    const Entry* period_e = take(grid, "period", taken);
    if (s.grid_kind == "box") {
        if (!lo_e || !hi_e) throw ConfigError("box grids need both `lo` and `hi`");
        fill_dims(s.lo, number_list(*lo_e), s.dims, *lo_e);
        fill_dims(s.hi, number_list(*hi_e), s.dims, *hi_e);
        for (int d = 0; d < s.dims; ++d)
            if (!(s.lo[static_cast<std::size_t>(d)] < s.hi[static_cast<std::size_t>(d)]))
                throw ConfigError("lo must be below hi in every dimension", lo_e->line);
    } else if (lo_e || hi_e) {
        throw ConfigError("lo/hi are only valid for kind = box", (lo_e ? lo_e : hi_e)->line);
    }
    if (s.grid_kind == "periodic") {
        if (!period_e) throw ConfigError("periodic grids need `period`");
        fill_dims(s.period, number_list(*period_e), s.dims, *period_e);
        for (int d = 0; d < s.dims; ++d)
            if (!(s.period[static_cast<std::size_t>(d)] > 0.0))
                throw ConfigError("period: values must be positive", period_e->line);
    } else if (period_e) {
        throw ConfigError("period is only valid for kind = periodic", period_e->line);
    }
    reject_leftovers(grid, "grid");

    // Expression validation now that dims is known.
    {
        ExprPtr u;
        try {
            u = parse_potential(s.potential_text);
        } catch (const ExprParseError& err) {
            throw ConfigError(std::string("potential: ") + err.what(), pot->line);
        }
        std::set<std::string> allowed = {"t"};
        if (s.dims >= 1) allowed.insert("x");
        if (s.dims >= 2) allowed.insert("y");
        if (s.dims >= 3) allowed.insert("z");
        std::string off;
        if (has_symbol_outside(u, allowed, &off))
            throw ConfigError("potential: symbol `" + off + "` not valid on a " +
                                  std::to_string(s.dims) + "-d grid",
                              pot->line);
        try {
            ExprPtr a = parse_potential(s.alpha_text);
            if (has_symbol_outside(a, {"t"}, &off))
                throw ConfigError("alpha: symbol `" + off + "` not allowed (schedules depend on t only)");
        } catch (const ExprParseError& err) {
            throw ConfigError(std::string("alpha: ") + err.what());
        }
    }

    auto init = keyed(entries, "init");
    if (!init.empty()) {
        const Entry* type = take(init, "type", taken);
        if (!type) throw ConfigError("[init] needs a `type` key", init.begin()->second.line);
        if (type->value == "eigenstate") {
            s.init.kind = InitSpec::Kind::eigenstate;
            if (const Entry* e = take(init, "index", taken)) {
                s.init.index = strict_int(e->value, *e);
                if (s.init.index < 0) throw ConfigError("index: must be nonnegative", e->line);
            }
        } else if (type->value == "gaussian") {
            s.init.kind = InitSpec::Kind::gaussian;
            if (const Entry* e = take(init, "beta0", taken)) fill_dims(s.init.beta0, number_list(*e), s.dims, *e);
            if (const Entry* e = take(init, "sigma0", taken)) {
                s.init.sigma0 = const_number(e->value, *e);
                if (!(s.init.sigma0 > 0.0)) throw ConfigError("sigma0: must be positive", e->line);
            }
            if (const Entry* e = take(init, "k0", taken)) fill_dims(s.init.k0, number_list(*e), s.dims, *e);
        } else if (type->value == "superposition") {
            s.init.kind = InitSpec::Kind::superposition;
            const Entry* idx = take(init, "indices", taken);
            if (!idx) throw ConfigError("superposition needs `indices`", type->line);
            s.init.indices = int_list(*idx);
            if (s.init.indices.empty()) throw ConfigError("indices: empty list", idx->line);
            for (int i : s.init.indices)
                if (i < 0) throw ConfigError("indices: must be nonnegative", idx->line);
            if (const Entry* e = take(init, "weights", taken)) {
                s.init.weights = number_list(*e);
                if (s.init.weights.size() != s.init.indices.size())
                    throw ConfigError("weights: need one weight per index", e->line);
            }
            if (const Entry* e = take(init, "localize", taken)) {
                if (!valid_name(e->value)) throw ConfigError("localize: expected a region name", e->line);
                s.init.localize = e->value;
            }
        } else {
            throw ConfigError("type: expected eigenstate, gaussian or superposition", type->line);
        }
        reject_leftovers(init, "init");
    }

    auto evolve = keyed(entries, "evolve");
    if (!evolve.empty()) {
        s.evolve.enabled = true;
        const Entry* t_end = take(evolve, "t_end", taken);
        if (!t_end) throw ConfigError("[evolve] needs `t_end`", evolve.begin()->second.line);
        s.evolve.t_end = const_number(t_end->value, *t_end);
        if (const Entry* e = take(evolve, "t_start", taken)) s.evolve.t_start = const_number(e->value, *e);
        if (s.evolve.t_end < s.evolve.t_start)
            throw ConfigError("t_end: must not precede t_start", t_end->line);
        if (const Entry* e = take(evolve, "order", taken)) {
            s.evolve.order = strict_int(e->value, *e);
            if (s.evolve.order < 1 || s.evolve.order > 3)
                throw ConfigError("order: expected 1, 2 or 3", e->line);
        }
        if (const Entry* e = take(evolve, "dtau_base", taken)) {
            s.evolve.dtau_base = const_number(e->value, *e);
            if (!(s.evolve.dtau_base > 0.0)) throw ConfigError("dtau_base: must be positive", e->line);
        }
        if (const Entry* e = take(evolve, "dynamic", taken)) s.evolve.dynamic = strict_bool(*e);
        reject_leftovers(evolve, "evolve");
    }

    auto eigen = keyed(entries, "eigen");
    if (!eigen.empty()) {
        const Entry* count = take(eigen, "count", taken);
        if (!count) throw ConfigError("[eigen] needs `count`", eigen.begin()->second.line);
        s.eigen.count = strict_int(count->value, *count);
        if (s.eigen.count < 1) throw ConfigError("count: must be at least 1", count->line);
        if (const Entry* e = take(eigen, "tolerance", taken)) {
            s.eigen.tolerance = const_number(e->value, *e);
            if (!(s.eigen.tolerance > 0.0)) throw ConfigError("tolerance: must be positive", e->line);
        }
        if (const Entry* e = take(eigen, "max_steps", taken)) {
            s.eigen.max_steps = strict_long(e->value, *e);
            if (s.eigen.max_steps < 1) throw ConfigError("max_steps: must be positive", e->line);
        }
        if (const Entry* e = take(eigen, "reorth_every", taken)) {
            s.eigen.reorth_every = strict_int(e->value, *e);
            if (s.eigen.reorth_every < 1) throw ConfigError("reorth_every: must be positive", e->line);
        }
        if (const Entry* e = take(eigen, "order", taken)) {
            s.eigen.order = strict_int(e->value, *e);
            if (s.eigen.order < 1 || s.eigen.order > 3)
                throw ConfigError("order: expected 1, 2 or 3", e->line);
        }
        if (const Entry* e = take(eigen, "dtau_base", taken)) {
            s.eigen.dtau_base = const_number(e->value, *e);
            if (!(s.eigen.dtau_base > 0.0)) throw ConfigError("dtau_base: must be positive", e->line);
        }
        reject_leftovers(eigen, "eigen");
    }

    for (const Entry& e : entries) {
        if (e.section != "region") continue;
        if (!valid_name(e.key))
            throw ConfigError("region name: expected letters, digits or _", e.line);
        for (const RegionSpec& r : s.regions)
            if (r.name == e.key) throw ConfigError("duplicate region `" + e.key + "`", e.line);
        std::vector<double> vals = number_list(e);
        if (static_cast<int>(vals.size()) != 2 * s.dims)
            throw ConfigError(e.key + ": expected " + std::to_string(2 * s.dims) +
                                  " values (lo, hi per dimension)",
                              e.line);
        RegionSpec r;
        r.name = e.key;
        for (int d = 0; d < s.dims; ++d) {
            double lo = vals[static_cast<std::size_t>(2 * d)];
            double hi = vals[static_cast<std::size_t>(2 * d + 1)];
            if (!(lo <= hi)) throw ConfigError(e.key + ": lo must not exceed hi", e.line);
            r.bounds.push_back({lo, hi});
        }
        s.regions.push_back(std::move(r));
    }

    auto output = keyed(entries, "output");
    if (const Entry* e = take(output, "series_stride", taken)) {
        s.output.series_stride = strict_int(e->value, *e);
        if (s.output.series_stride < 1) throw ConfigError("series_stride: must be positive", e->line);
    }
    if (const Entry* e = take(output, "snapshot_count", taken)) {
        s.output.snapshot_count = strict_int(e->value, *e);
        if (s.output.snapshot_count < 0) throw ConfigError("snapshot_count: must be nonnegative", e->line);
    }
    if (const Entry* e = take(output, "snapshot_amplitudes", taken))
        s.output.snapshot_amplitudes = strict_bool(*e);
    reject_leftovers(output, "output");

    // Cross-field checks.
    if (s.eigen.count == 0 && !s.evolve.enabled)
        throw ConfigError("scenario requests neither an eigensolve ([eigen]) nor an evolution ([evolve])");
    if (s.evolve.enabled && s.init.kind == InitSpec::Kind::none)
        throw ConfigError("evolution needs an [init] section");
    if (s.init.kind == InitSpec::Kind::eigenstate && s.init.index >= s.eigen.count)
        throw ConfigError("init.index " + std::to_string(s.init.index) +
                          " needs eigen.count > " + std::to_string(s.init.index));
    if (s.init.kind == InitSpec::Kind::superposition) {
        for (int i : s.init.indices)
            if (i >= s.eigen.count)
                throw ConfigError("init.indices references state " + std::to_string(i) +
                                  " but eigen.count is " + std::to_string(s.eigen.count));
        if (!s.init.localize.empty()) {
            bool found = false;
            for (const RegionSpec& r : s.regions) found = found || r.name == s.init.localize;
            if (!found)
                throw ConfigError("init.localize names unknown region `" + s.init.localize + "`");
        }
    }
    if (s.output.snapshot_count > 0 && !s.evolve.enabled)
        throw ConfigError("snapshot_count needs an [evolve] section");
    return s;
}

std::string serialize(const Scenario& s) {
    std::string out;
    auto line = [&out](const std::string& k, const std::string& v) {
        out += k + " = " + v + "\n";
    };
    auto dims_list = [&s](const std::array<double, 3>& a) {
        std::string v;
        for (int d = 0; d < s.dims; ++d) {
            if (d) v += ", ";
            v += fmt(a[static_cast<std::size_t>(d)]);
        }
        return v;
    };

    if (!s.name.empty()) line("name", s.name);
    line("potential", s.potential_text);
    line("alpha", s.alpha_text);

    out += "\n[grid]\n";
    line("kind", s.grid_kind);
    line("dims", std::to_string(s.dims));
    {
        std::string v;
        for (int d = 0; d < s.dims; ++d) {
            if (d) v += ", ";
            v += std::to_string(s.n[static_cast<std::size_t>(d)]);
        }
        line("n", v);
    }
    line("origin", dims_list(s.origin));
    if (s.grid_kind == "box") {
        line("lo", dims_list(s.lo));
        line("hi", dims_list(s.hi));
    }
    if (s.grid_kind == "periodic") line("period", dims_list(s.period));

    if (s.init.kind != InitSpec::Kind::none) {
        out += "\n[init]\n";
        switch (s.init.kind) {
            case InitSpec::Kind::eigenstate:
                line("type", "eigenstate");
                line("index", std::to_string(s.init.index));
                break;
            case InitSpec::Kind::gaussian:
                line("type", "gaussian");
                line("beta0", dims_list(s.init.beta0));
                line("sigma0", fmt(s.init.sigma0));
                line("k0", dims_list(s.init.k0));
                break;
            case InitSpec::Kind::superposition: {
                line("type", "superposition");
                std::string v;
                for (std::size_t i = 0; i < s.init.indices.size(); ++i) {
                    if (i) v += ", ";
                    v += std::to_string(s.init.indices[i]);
                }
                line("indices", v);
                if (!s.init.weights.empty()) {
                    v.clear();
                    for (std::size_t i = 0; i < s.init.weights.size(); ++i) {
                        if (i) v += ", ";
                        v += fmt(s.init.weights[i]);
                    }
                    line("weights", v);
                }
                if (!s.init.localize.empty()) line("localize", s.init.localize);
                break;
            }
            case InitSpec::Kind::none: break;
        }
    }

    if (s.evolve.enabled) {
        out += "\n[evolve]\n";
        line("t_start", fmt(s.evolve.t_start));
        line("t_end", fmt(s.evolve.t_end));
        line("order", std::to_string(s.evolve.order));
        line("dtau_base", fmt(s.evolve.dtau_base));
        line("dynamic", s.evolve.dynamic ? "true" : "false");
    }

    if (s.eigen.count > 0) {
        out += "\n[eigen]\n";
        line("count", std::to_string(s.eigen.count));
        line("tolerance", fmt(s.eigen.tolerance));
        line("max_steps", std::to_string(s.eigen.max_steps));
        line("reorth_every", std::to_string(s.eigen.reorth_every));
        line("order", std::to_string(s.eigen.order));
        line("dtau_base", fmt(s.eigen.dtau_base));
    }

    if (!s.regions.empty()) {
        out += "\n[region]\n";
        for (const RegionSpec& r : s.regions) {
            std::string v;
            for (std::size_t d = 0; d < r.bounds.size(); ++d) {
                if (d) v += ", ";
                v += fmt(r.bounds[d][0]) + ", " + fmt(r.bounds[d][1]);
            }
            line(r.name, v);
        }
    }

    out += "\n[output]\n";
    line("series_stride", std::to_string(s.output.series_stride));
    line("snapshot_count", std::to_string(s.output.snapshot_count));
    line("snapshot_amplitudes", s.output.snapshot_amplitudes ? "true" : "false");
    return out;
}

Grid scenario_grid(const Scenario& s, double alpha) {
    std::vector<AxisSpec> axes;
    for (int d = 0; d < s.dims; ++d) {
        auto du = static_cast<std::size_t>(d);
        if (s.grid_kind == "alpha_scaled")
            axes.push_back(AxisSpec::alpha_scaled(s.n[du], s.origin[du]));
        else if (s.grid_kind == "box")
            axes.push_back(AxisSpec::box(s.n[du], s.lo[du], s.hi[du]));
        else
            axes.push_back(AxisSpec::periodic(s.n[du], s.period[du], s.origin[du]));
    }
    return make_grid(axes, alpha);
}

std::string squid_potential_text(const SquidParams& p) {
    auto num = [](double v) { return v == kPi ? std::string("pi") : fmt(v); };
    return "(x - " + num(p.phi_0) + ")^2 / (2*" + num(p.beta_l) + ") + 1 - cos(x)";
}

std::string not_gate_schedule_text() {
    return "10 - 4.8*(erf((t - 5)/(0.8*sqrt(2))) - erf((t - 18.5)/(1.6*sqrt(2))))";
}

double alpha_schedule_not_gate(double tau) {
    static const ExprPtr expr = parse_potential(not_gate_schedule_text());
    return evaluate_scalar(expr, tau);
}

}  // namespace splitspec
