#include "mehpp/config.hpp"

#include "mehpp/error.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace mehpp {

Waveform WaveformSpec::build() const
{
    if (kind == "square") return make_square(period, p_high, p_low, ramp_fraction);
    if (kind == "knots") return Waveform(knots, period, "explicit knots");
    return make_waveform_preset(kind, p_high, p_low);
}

std::string_view to_string(SweepMetric m)
{
    switch (m) {
    case SweepMetric::NetVolumePerCycle: return "net_volume_per_cycle";
    case SweepMetric::LoopArea: return "loop_area";
    case SweepMetric::CriticalMargin: return "a_crit_margin";
    }
    return "?";
}

const std::vector<std::string>& sweep_axis_names()
{
    static const std::vector<std::string> names{"a",          "a_mo",        "a_mi",     "z1_star",
                                                "z_in_star",  "z_out_star",  "p_high",   "p_low",
                                                "conductance", "leak_height", "mobility"};
    return names;
}

void SweepSpec::validate() const
{
    if (axes.empty()) throw ConfigError("sweep.axes", "at least one axis is required");
    const auto& known = sweep_axis_names();
    for (std::size_t i = 0; i < axes.size(); ++i) {
        const std::string field = "sweep.axes[" + std::to_string(i) + "]";
        if (std::find(known.begin(), known.end(), axes[i].name) == known.end()) {
            throw ConfigError(field + ".name", "unknown axis '" + axes[i].name + "'");
        }
        if (axes[i].values.size() < 2) throw ConfigError(field + ".values", "each axis needs at least 2 values");
        for (std::size_t j = 0; j < i; ++j) {
            if (axes[j].name == axes[i].name) throw ConfigError(field + ".name", "duplicate axis");
        }
    }
    if (max_points < 1) throw ConfigError("sweep.max_points", "must be >= 1");
    if (threads < 0) throw ConfigError("sweep.threads", "must be >= 0");
}

long SweepSpec::grid_size() const
{
    long n = 1;
    for (const auto& ax : axes) {
        n *= static_cast<long>(ax.values.size());
        if (n > (1L << 40)) break;
    }
    return n;
}

MagnetoElasticParams RunConfig::resolved_model() const
{
    return dimensional ? nondimensionalize(*dimensional) : model;
}

ChainConfig RunConfig::resolved_chain() const
{
    const MagnetoElasticParams base = resolved_model();
    ChainConfig chain;
    if (!cells.empty()) {
        for (const auto& c : cells) {
            CellSpec spec;
            spec.params = base;
            spec.params.a_mo = c.a_mo;
            spec.params.a_mi = c.a_mi;
            spec.length = c.length;
            chain.cells.push_back(spec);
        }
    } else {
        chain = make_chain_preset(chain_preset, base);
    }
    chain.conductance = conductance;
    chain.leak_height = leak_height;
    chain.mobility = mobility;
    chain.reservoir_in = reservoir_in;
    chain.reservoir_out = reservoir_out;
    chain.max_iterations = max_iterations;
    return chain;
}

double RunConfig::resolved_duration() const
{
    return duration ? *duration : 3.0 * resolved_waveform().period();
}

void RunConfig::validate() const
{
    if (dimensional) dimensional->validate();
    resolved_model().validate();
    for (double a : analyze_a_values) {
        if (!(std::isfinite(a) && a >= 0.0)) throw ConfigError("analyze.a_values", "values must be >= 0");
    }
    if (profile_samples < 2) throw ConfigError("analyze.samples", "must be >= 2");
    if (cycles < 1) throw ConfigError("cycle.cycles", "must be >= 1");
    if (samples_per_cycle < 8) throw ConfigError("cycle.samples_per_cycle", "must be >= 8");
    if (cells.empty() == chain_preset.empty()) {
        throw ConfigError("chain", "give exactly one of a chain preset or an explicit cell list");
    }
    resolved_chain().validate();
    const Waveform w = resolved_waveform();
    if (!(dt > 0.0)) throw ConfigError("numerics.dt", "must be > 0");
    if (dt > w.period() / 1000.0 * (1.0 + 1e-12)) throw ConfigError("numerics.dt", "must be <= period/1000");
    if (duration && !(*duration >= w.period())) {
        throw ConfigError("numerics.duration", "must cover at least one waveform period");
    }
    if (scan_intervals < 16) throw ConfigError("numerics.scan_intervals", "must be >= 16");
    if (sweep) sweep->validate();
    if (out_dir.empty()) throw ConfigError("output.dir", "must not be empty");
    if (csv_stride < 1) throw ConfigError("output.csv_stride", "must be >= 1");
}

RunConfig RunConfig::with_axis(const std::string& name, double value) const
{
    RunConfig c = *this;
    if (c.dimensional) {
        c.model = nondimensionalize(*c.dimensional);
        c.dimensional.reset();
    }
    if (name == "a") c.model.a_mo = c.model.a_mi = value;
    else if (name == "a_mo") c.model.a_mo = value;
    else if (name == "a_mi") c.model.a_mi = value;
    else if (name == "z1_star") c.model.z1_star = value;
    else if (name == "z_in_star") c.model.z_in_star = value;
    else if (name == "z_out_star") c.model.z_out_star = value;
    else if (name == "p_high") c.waveform.p_high = value;
    else if (name == "p_low") c.waveform.p_low = value;
    else if (name == "conductance") c.conductance = value;
    else if (name == "leak_height") c.leak_height = value;
    else if (name == "mobility") c.mobility = value;
    else throw ConfigError("sweep.axes", "unknown axis '" + name + "'");
    return c;
}

namespace {

std::string locus(const YAML::Node& node, const std::string& field)
{
    return "line " + std::to_string(node.Mark().line + 1) + ": " + field;
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& what)
{
    throw ConfigError(locus(node, field), what);
}

double as_double(const YAML::Node& node, const std::string& field)
{
    if (!node.IsScalar()) fail(node, field, "expected a number");
    try {
        return node.as<double>();
    } catch (const YAML::Exception&) {
        fail(node, field, "expected a number, got '" + node.Scalar() + "'");
    }
}

int as_int(const YAML::Node& node, const std::string& field)
{
    if (!node.IsScalar()) fail(node, field, "expected an integer");
    try {
        return node.as<int>();
    } catch (const YAML::Exception&) {
        fail(node, field, "expected an integer, got '" + node.Scalar() + "'");
    }
}

bool as_bool(const YAML::Node& node, const std::string& field)
{
    if (!node.IsScalar()) fail(node, field, "expected true or false");
    try {
        return node.as<bool>();
    } catch (const YAML::Exception&) {
        fail(node, field, "expected true or false, got '" + node.Scalar() + "'");
    }
}

std::string as_string(const YAML::Node& node, const std::string& field)
{
    if (!node.IsScalar()) fail(node, field, "expected a string");
    return node.Scalar();
}

std::vector<double> as_doubles(const YAML::Node& node, const std::string& field)
{
    if (!node.IsSequence()) fail(node, field, "expected a list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
        out.push_back(as_double(node[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
}

using Handler = std::function<void(const YAML::Node&, const std::string&)>;

// Dispatch every key of a mapping to its handler; unknown keys are errors.
void for_each_key(const YAML::Node& map, const std::string& block, const std::map<std::string, Handler>& handlers)
{
    if (!map.IsMap()) fail(map, block, "expected a block of key: value pairs");
    for (const auto& kv : map) {
        const std::string key = kv.first.Scalar();
        const std::string field = block.empty() ? key : block + "." + key;
        const auto it = handlers.find(key);
        if (it == handlers.end()) fail(kv.first, field, "unknown key");
        it->second(kv.second, field);
    }
}

void parse_model(const YAML::Node& node, RunConfig& c)
{
    bool has_a = false;
    bool has_split = false;
    for_each_key(node, "model",
                 {{"a",
                   [&](auto& n, auto& f) {
                       c.model.a_mo = c.model.a_mi = as_double(n, f);
                       has_a = true;
                   }},
                  {"a_mo",
                   [&](auto& n, auto& f) {
                       c.model.a_mo = as_double(n, f);
                       has_split = true;
                   }},
                  {"a_mi",
                   [&](auto& n, auto& f) {
                       c.model.a_mi = as_double(n, f);
                       has_split = true;
                   }},
                  {"z1_star", [&](auto& n, auto& f) { c.model.z1_star = as_double(n, f); }},
                  {"z_in_star", [&](auto& n, auto& f) { c.model.z_in_star = as_double(n, f); }},
                  {"z_out_star", [&](auto& n, auto& f) { c.model.z_out_star = as_double(n, f); }}});
    if (has_a && has_split) fail(node, "model.a", "give either a or a_mo/a_mi, not both");
}

void parse_dimensional(const YAML::Node& node, RunConfig& c)
{
    DimensionalParams d;
    for_each_key(node, "dimensional",
                 {{"k_e", [&](auto& n, auto& f) { d.k_e = as_double(n, f); }},
                  {"k_mi", [&](auto& n, auto& f) { d.k_mi = as_double(n, f); }},
                  {"k_mo", [&](auto& n, auto& f) { d.k_mo = as_double(n, f); }},
                  {"z0", [&](auto& n, auto& f) { d.z0 = as_double(n, f); }},
                  {"z1", [&](auto& n, auto& f) { d.z1 = as_double(n, f); }},
                  {"z_in", [&](auto& n, auto& f) { d.z_in = as_double(n, f); }},
                  {"z_out", [&](auto& n, auto& f) { d.z_out = as_double(n, f); }}});
    c.dimensional = d;
}

void parse_cells(const YAML::Node& node, const std::string& field, RunConfig& c)
{
    if (!node.IsSequence()) fail(node, field, "expected a list of cells");
    c.cells.clear();
    for (std::size_t i = 0; i < node.size(); ++i) {
        CellCoefficients cell;
        bool has_a = false;
        bool has_split = false;
        const std::string cf = field + "[" + std::to_string(i) + "]";
        std::map<std::string, Handler> h{
            {"a",
             [&](auto& n, auto& f) {
                 cell.a_mo = cell.a_mi = as_double(n, f);
                 has_a = true;
             }},
            {"a_mo",
             [&](auto& n, auto& f) {
                 cell.a_mo = as_double(n, f);
                 has_split = true;
             }},
            {"a_mi",
             [&](auto& n, auto& f) {
                 cell.a_mi = as_double(n, f);
                 has_split = true;
             }},
            {"length", [&](auto& n, auto& f) { cell.length = as_double(n, f); }}};
        // for_each_key builds "block.key"; use the indexed name as the block
        for_each_key(node[i], cf, h);
        if (has_a && has_split) fail(node[i], cf + ".a", "give either a or a_mo/a_mi, not both");
        c.cells.push_back(cell);
    }
}

void parse_chain(const YAML::Node& node, RunConfig& c, bool& preset_seen)
{
    bool cells_seen = false;
    for_each_key(node, "chain",
                 {{"preset",
                   [&](auto& n, auto& f) {
                       c.chain_preset = as_string(n, f);
                       preset_seen = true;
                   }},
                  {"cells",
                   [&](auto& n, auto& f) {
                       parse_cells(n, f, c);
                       cells_seen = true;
                   }},
                  {"conductance", [&](auto& n, auto& f) { c.conductance = as_double(n, f); }},
                  {"leak_height", [&](auto& n, auto& f) { c.leak_height = as_double(n, f); }},
                  {"mobility", [&](auto& n, auto& f) { c.mobility = as_double(n, f); }},
                  {"reservoir_in", [&](auto& n, auto& f) { c.reservoir_in = as_double(n, f); }},
                  {"reservoir_out", [&](auto& n, auto& f) { c.reservoir_out = as_double(n, f); }},
                  {"max_iterations", [&](auto& n, auto& f) { c.max_iterations = as_int(n, f); }}});
    if (cells_seen && preset_seen) fail(node, "chain", "give either preset or cells, not both");
    if (cells_seen) c.chain_preset.clear();
}

void parse_waveform(const YAML::Node& node, RunConfig& c)
{
    if (node.IsScalar()) {
        c.waveform.kind = node.Scalar();
        return;
    }
    for_each_key(node, "waveform",
                 {{"preset", [&](auto& n, auto& f) { c.waveform.kind = as_string(n, f); }},
                  {"p_high", [&](auto& n, auto& f) { c.waveform.p_high = as_double(n, f); }},
                  {"p_low", [&](auto& n, auto& f) { c.waveform.p_low = as_double(n, f); }},
                  {"period", [&](auto& n, auto& f) { c.waveform.period = as_double(n, f); }},
                  {"ramp_fraction", [&](auto& n, auto& f) { c.waveform.ramp_fraction = as_double(n, f); }},
                  {"knots", [&](auto& n, auto& f) {
                       if (!n.IsSequence()) fail(n, f, "expected a list of [t, p] pairs");
                       c.waveform.knots.clear();
                       for (std::size_t i = 0; i < n.size(); ++i) {
                           const auto pair = as_doubles(n[i], f + "[" + std::to_string(i) + "]");
                           if (pair.size() != 2) fail(n[i], f, "each knot is [t, p]");
                           c.waveform.knots.push_back({pair[0], pair[1]});
                       }
                   }}});
    const auto& k = c.waveform.kind;
    if (k != "square" && k != "knots" && k != kPresetPaperFsi && k != kPresetSquare500ms) {
        fail(node, "waveform.preset", "unknown preset '" + k + "'");
    }
}

void parse_sweep(const YAML::Node& node, RunConfig& c)
{
    SweepSpec s;
    for_each_key(node, "sweep",
                 {{"metric",
                   [&](auto& n, auto& f) {
                       const std::string m = as_string(n, f);
                       if (m == "net_volume_per_cycle") s.metric = SweepMetric::NetVolumePerCycle;
                       else if (m == "loop_area") s.metric = SweepMetric::LoopArea;
                       else if (m == "a_crit_margin") s.metric = SweepMetric::CriticalMargin;
                       else fail(n, f, "unknown metric '" + m + "'");
                   }},
                  {"max_points", [&](auto& n, auto& f) { s.max_points = as_int(n, f); }},
                  {"threads", [&](auto& n, auto& f) { s.threads = as_int(n, f); }},
                  {"axes", [&](auto& n, auto& f) {
                       if (!n.IsSequence()) fail(n, f, "expected a list of {name, values}");
                       for (std::size_t i = 0; i < n.size(); ++i) {
                           SweepAxis ax;
                           const std::string af = f + "[" + std::to_string(i) + "]";
                           for_each_key(n[i], af,
                                        {{"name", [&](auto& m, auto& g) { ax.name = as_string(m, g); }},
                                         {"values", [&](auto& m, auto& g) { ax.values = as_doubles(m, g); }}});
                           s.axes.push_back(ax);
                       }
                   }}});
    c.sweep = s;
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

RunConfig parse_config(std::string_view text)
{
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        throw ConfigError("line " + std::to_string(e.mark.line + 1), "malformed config: " + e.msg);
    }

    RunConfig c;
    if (root.IsNull()) {
        c.validate();
        return c;
    }
    bool model_seen = false;
    bool dimensional_seen = false;
    bool preset_seen = false;
    for_each_key(root, "",
                 {{"model",
                   [&](auto& n, auto&) {
                       parse_model(n, c);
                       model_seen = true;
                   }},
                  {"dimensional",
                   [&](auto& n, auto&) {
                       parse_dimensional(n, c);
                       dimensional_seen = true;
                   }},
                  {"preset",
                   [&](auto& n, auto& f) {
                       c.chain_preset = as_string(n, f);
                       preset_seen = true;
                   }},
                  {"analyze",
                   [&](auto& n, auto&) {
                       for_each_key(n, "analyze",
                                    {{"a_values", [&](auto& m, auto& g) { c.analyze_a_values = as_doubles(m, g); }},
                                     {"samples", [&](auto& m, auto& g) { c.profile_samples = as_int(m, g); }}});
                   }},
                  {"cycle",
                   [&](auto& n, auto&) {
                       for_each_key(n, "cycle",
                                    {{"cycles", [&](auto& m, auto& g) { c.cycles = as_int(m, g); }},
                                     {"samples_per_cycle",
                                      [&](auto& m, auto& g) { c.samples_per_cycle = as_int(m, g); }}});
                   }},
                  {"chain", [&](auto& n, auto&) { parse_chain(n, c, preset_seen); }},
                  {"waveform", [&](auto& n, auto&) { parse_waveform(n, c); }},
                  {"numerics",
                   [&](auto& n, auto&) {
                       for_each_key(n, "numerics",
                                    {{"dt", [&](auto& m, auto& g) { c.dt = as_double(m, g); }},
                                     {"duration", [&](auto& m, auto& g) { c.duration = as_double(m, g); }},
                                     {"scan_intervals", [&](auto& m, auto& g) { c.scan_intervals = as_int(m, g); }}});
                   }},
                  {"sweep", [&](auto& n, auto&) { parse_sweep(n, c); }},
                  {"output", [&](auto& n, auto&) {
                       for_each_key(n, "output",
                                    {{"dir", [&](auto& m, auto& g) { c.out_dir = as_string(m, g); }},
                                     {"svg", [&](auto& m, auto& g) { c.svg = as_bool(m, g); }},
                                     {"csv_stride", [&](auto& m, auto& g) { c.csv_stride = as_int(m, g); }}});
                   }}});

    if (model_seen && dimensional_seen) {
        throw ConfigError("dimensional", "give either a dimensional or a dimensionless (model) block, not both");
    }
    if (preset_seen && !c.cells.empty()) throw ConfigError("chain", "give either preset or cells, not both");
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c)
{
    YAML::Emitter out;
    auto num = [&](const char* key, double v) { out << YAML::Key << key << YAML::Value << fmt(v); };
    auto integer = [&](const char* key, long v) { out << YAML::Key << key << YAML::Value << v; };
    auto list = [&](const char* key, const std::vector<double>& vs) {
        out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (double v : vs) out << fmt(v);
        out << YAML::EndSeq;
    };

    out << YAML::BeginMap;
    if (c.dimensional) {
        const auto& d = *c.dimensional;
        out << YAML::Key << "dimensional" << YAML::Value << YAML::BeginMap;
        num("k_e", d.k_e);
        num("k_mi", d.k_mi);
        num("k_mo", d.k_mo);
        num("z0", d.z0);
        num("z1", d.z1);
        num("z_in", d.z_in);
        num("z_out", d.z_out);
        out << YAML::EndMap;
    } else {
        out << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
        num("a_mo", c.model.a_mo);
        num("a_mi", c.model.a_mi);
        num("z1_star", c.model.z1_star);
        num("z_in_star", c.model.z_in_star);
        num("z_out_star", c.model.z_out_star);
        out << YAML::EndMap;
    }

    out << YAML::Key << "analyze" << YAML::Value << YAML::BeginMap;
    if (!c.analyze_a_values.empty()) list("a_values", c.analyze_a_values);
    integer("samples", c.profile_samples);
    out << YAML::EndMap;

    out << YAML::Key << "cycle" << YAML::Value << YAML::BeginMap;
    integer("cycles", c.cycles);
    integer("samples_per_cycle", c.samples_per_cycle);
    out << YAML::EndMap;

    out << YAML::Key << "chain" << YAML::Value << YAML::BeginMap;
    if (c.cells.empty()) {
        out << YAML::Key << "preset" << YAML::Value << c.chain_preset;
    } else {
        out << YAML::Key << "cells" << YAML::Value << YAML::BeginSeq;
        for (const auto& cell : c.cells) {
            out << YAML::Flow << YAML::BeginMap;
            num("a_mo", cell.a_mo);
            num("a_mi", cell.a_mi);
            num("length", cell.length);
            out << YAML::EndMap;
        }
        out << YAML::EndSeq;
    }
    num("conductance", c.conductance);
    num("leak_height", c.leak_height);
    num("mobility", c.mobility);
    num("reservoir_in", c.reservoir_in);
    num("reservoir_out", c.reservoir_out);
    integer("max_iterations", c.max_iterations);
    out << YAML::EndMap;

    out << YAML::Key << "waveform" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "preset" << YAML::Value << c.waveform.kind;
    num("p_high", c.waveform.p_high);
    num("p_low", c.waveform.p_low);
    num("period", c.waveform.period);
    num("ramp_fraction", c.waveform.ramp_fraction);
    if (!c.waveform.knots.empty()) {
        out << YAML::Key << "knots" << YAML::Value << YAML::BeginSeq;
        for (const auto& k : c.waveform.knots) {
            out << YAML::Flow << YAML::BeginSeq << fmt(k.t) << fmt(k.p) << YAML::EndSeq;
        }
        out << YAML::EndSeq;
    }
    out << YAML::EndMap;

    out << YAML::Key << "numerics" << YAML::Value << YAML::BeginMap;
    num("dt", c.dt);
    if (c.duration) num("duration", *c.duration);
    integer("scan_intervals", c.scan_intervals);
    out << YAML::EndMap;

    if (c.sweep) {
        const auto& s = *c.sweep;
        out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "metric" << YAML::Value << std::string(to_string(s.metric));
        integer("max_points", s.max_points);
        integer("threads", s.threads);
        out << YAML::Key << "axes" << YAML::Value << YAML::BeginSeq;
        for (const auto& ax : s.axes) {
            out << YAML::BeginMap;
            out << YAML::Key << "name" << YAML::Value << ax.name;
            list("values", ax.values);
            out << YAML::EndMap;
        }
        out << YAML::EndSeq << YAML::EndMap;
    }

    out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "dir" << YAML::Value << c.out_dir;
    out << YAML::Key << "svg" << YAML::Value << c.svg;
    integer("csv_stride", c.csv_stride);
    out << YAML::EndMap;

    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

} // namespace mehpp
