#include "lrising/run_config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "lrising/csv_io.hpp"
#include "lrising/errors.hpp"

namespace lrising {

namespace {

int parse_int(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size()) {
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  }
  return v;
}

double parse_real(const std::string& key, const std::string& text) {
  try {
    return parse_double(text);
  } catch (const ConfigError&) {
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<int> parse_int_list(const std::string& key, const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_int(key, item));
  }
  return out;
}

std::string format_int_list(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Field {
  const char* key;
  Setter set;
  Getter get;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"lattice.L", [](RunConfig& c, auto& k, auto& v) { c.L = parse_int(k, v); },
       [](const RunConfig& c) { return std::to_string(c.L); }},
      {"lattice.alpha", [](RunConfig& c, auto& k, auto& v) { c.alpha = parse_real(k, v); },
       [](const RunConfig& c) { return format_double(c.alpha); }},
      {"model.J", [](RunConfig& c, auto& k, auto& v) { c.J = parse_real(k, v); },
       [](const RunConfig& c) { return format_double(c.J); }},
      {"model.g", [](RunConfig& c, auto& k, auto& v) { c.g = parse_real(k, v); },
       [](const RunConfig& c) { return format_double(c.g); }},
      {"effective.mode", [](RunConfig& c, auto&, auto& v) { c.mode = parse_sw_mode(v); },
       [](const RunConfig& c) { return to_string(c.mode); }},
      {"effective.identify_inversion",
       [](RunConfig& c, auto& k, auto& v) { c.identify_inversion = parse_bool(k, v); },
       [](const RunConfig& c) { return std::string(c.identify_inversion ? "true" : "false"); }},
      {"effective.sectors", [](RunConfig& c, auto&, auto& v) { c.sectors = parse_sectors(v); },
       [](const RunConfig& c) { return format_sectors(c.sectors); }},
      {"effective.max_levels", [](RunConfig& c, auto& k, auto& v) { c.max_levels = parse_int(k, v); },
       [](const RunConfig& c) { return std::to_string(c.max_levels); }},
      {"effective.eps_sw", [](RunConfig& c, auto& k, auto& v) { c.eps_sw = parse_real(k, v); },
       [](const RunConfig& c) { return format_double(c.eps_sw); }},
      {"quench.t_max", [](RunConfig& c, auto& k, auto& v) { c.t_max = parse_real(k, v); },
       [](const RunConfig& c) { return format_double(c.t_max); }},
      {"quench.dt", [](RunConfig& c, auto& k, auto& v) { c.dt = parse_real(k, v); },
       [](const RunConfig& c) { return format_double(c.dt); }},
      {"quench.krylov_dim", [](RunConfig& c, auto& k, auto& v) { c.krylov_dim = parse_int(k, v); },
       [](const RunConfig& c) { return std::to_string(c.krylov_dim); }},
      {"quench.tol", [](RunConfig& c, auto& k, auto& v) { c.krylov_tol = parse_real(k, v); },
       [](const RunConfig& c) { return format_double(c.krylov_tol); }},
      {"quench.max_sites", [](RunConfig& c, auto& k, auto& v) { c.max_sites = parse_int(k, v); },
       [](const RunConfig& c) { return std::to_string(c.max_sites); }},
      {"quench.memory_budget_gb",
       [](RunConfig& c, auto& k, auto& v) { c.memory_budget_gb = parse_real(k, v); },
       [](const RunConfig& c) { return format_double(c.memory_budget_gb); }},
      {"quench.checkpoint_every",
       [](RunConfig& c, auto& k, auto& v) { c.checkpoint_every = parse_real(k, v); },
       [](const RunConfig& c) { return format_double(c.checkpoint_every); }},
      {"spectrum.channel", [](RunConfig& c, auto&, auto& v) { c.channel = v; },
       [](const RunConfig& c) { return c.channel; }},
      {"spectrum.t_min", [](RunConfig& c, auto& k, auto& v) { c.window_t_min = parse_real(k, v); },
       [](const RunConfig& c) { return format_double(c.window_t_min); }},
      {"spectrum.t_max", [](RunConfig& c, auto& k, auto& v) { c.window_t_max = parse_real(k, v); },
       [](const RunConfig& c) { return format_double(c.window_t_max); }},
      {"spectrum.rel_threshold",
       [](RunConfig& c, auto& k, auto& v) { c.rel_threshold = parse_real(k, v); },
       [](const RunConfig& c) { return format_double(c.rel_threshold); }},
      {"spectrum.match_tol", [](RunConfig& c, auto& k, auto& v) { c.match_tol = parse_real(k, v); },
       [](const RunConfig& c) { return format_double(c.match_tol); }},
      {"boundstates.bound_ipr", [](RunConfig& c, auto& k, auto& v) { c.bound_ipr = parse_real(k, v); },
       [](const RunConfig& c) { return format_double(c.bound_ipr); }},
      {"boundstates.scattering_factor",
       [](RunConfig& c, auto& k, auto& v) { c.scattering_factor = parse_real(k, v); },
       [](const RunConfig& c) { return format_double(c.scattering_factor); }},
      {"boundstates.density_maps",
       [](RunConfig& c, auto& k, auto& v) { c.density_maps = parse_int_list(k, v); },
       [](const RunConfig& c) { return format_int_list(c.density_maps); }},
      {"run.seed",
       [](RunConfig& c, auto& k, auto& v) {
         std::size_t pos = 0;
         try {
           c.seed = std::stoull(v, &pos);
         } catch (const std::exception&) {
           pos = 0;
         }
         if (pos == 0 || pos != v.size()) {
           throw ConfigError(k + ": expected an unsigned integer, got '" + v + "'");
         }
       },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      {"run.output_dir", [](RunConfig& c, auto&, auto& v) { c.output_dir = v; },
       [](const RunConfig& c) { return c.output_dir; }},
  };
  return table;
}

}  // namespace

std::string format_sectors(const std::vector<SectorRequest>& sectors) {
  std::string out;
  for (std::size_t i = 0; i < sectors.size(); ++i) {
    out += (i ? "," : "") + std::to_string(sectors[i].nu);
    if (sectors[i].filter == SectorFilter::nearest_neighbour_pair) out += ":nn";
  }
  return out;
}

std::vector<SectorRequest> parse_sectors(const std::string& text) {
  std::vector<SectorRequest> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    SectorRequest r;
    const auto colon = item.find(':');
    r.nu = parse_int("effective.sectors", item.substr(0, colon));
    if (colon != std::string::npos) {
      const std::string f = item.substr(colon + 1);
      if (f != "nn") {
        throw ConfigError("effective.sectors: unknown filter '" + f + "'");
      }
      r.filter = SectorFilter::nearest_neighbour_pair;
    }
    out.push_back(r);
  }
  return out;
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& key, const std::string& why) {
    throw ConfigError(key + ": " + why);
  };
  if (c.L < 2) fail("lattice.L", "must be >= 2");
  if (!(c.alpha > 0.0)) fail("lattice.alpha", "must be positive or inf");
  if (!(c.J > 0.0) || !std::isfinite(c.J)) fail("model.J", "must be positive and finite");
  if (!std::isfinite(c.g)) fail("model.g", "must be finite");
  if (c.sectors.empty()) fail("effective.sectors", "must list at least one sector");
  for (const auto& s : c.sectors) {
    if (s.nu < 0) fail("effective.sectors", "magnon numbers must be >= 0");
  }
  if (c.max_levels < 1) fail("effective.max_levels", "must be >= 1");
  if (!(c.eps_sw > 0.0)) fail("effective.eps_sw", "must be positive");
  if (!(c.t_max >= 0.0)) fail("quench.t_max", "must be >= 0");
  if (!(c.dt > 0.0)) fail("quench.dt", "must be positive");
  if (c.krylov_dim < 2) fail("quench.krylov_dim", "must be >= 2");
  if (!(c.krylov_tol > 0.0)) fail("quench.tol", "must be positive");
  if (c.max_sites < 1 || c.max_sites > 30) fail("quench.max_sites", "must lie in [1, 30]");
  if (!(c.memory_budget_gb > 0.0)) fail("quench.memory_budget_gb", "must be positive");
  if (!(c.checkpoint_every >= 0.0)) fail("quench.checkpoint_every", "must be >= 0");
  if (c.channel.empty()) fail("spectrum.channel", "must not be empty");
  if (!(c.window_t_min >= 0.0)) fail("spectrum.t_min", "must be >= 0");
  if (!(c.window_t_max >= 0.0)) fail("spectrum.t_max", "must be >= 0");
  if (!(c.rel_threshold > 0.0 && c.rel_threshold < 1.0)) {
    fail("spectrum.rel_threshold", "must lie in (0, 1)");
  }
  if (!(c.match_tol >= 0.0)) fail("spectrum.match_tol", "must be >= 0");
  if (!(c.bound_ipr > 0.0 && c.bound_ipr <= 1.0)) fail("boundstates.bound_ipr", "must lie in (0, 1]");
  if (!(c.scattering_factor > 0.0)) fail("boundstates.scattering_factor", "must be positive");
  if (c.output_dir.empty()) fail("run.output_dir", "must not be empty");
}

void apply_override(RunConfig& config, const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (key == f.key) {
      f.set(config, key, trim(value));
      return;
    }
  }
  throw ConfigError("unknown configuration key '" + key + "'");
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ParseError(source, e.line(), e.message());
  }
  RunConfig config;
  for (const auto& [section, entries] : tree) {
    if (entries.empty() && !entries.data().empty()) {
      throw ConfigError(source + ": key '" + section + "' outside a section");
    }
    for (const auto& [key, node] : entries) {
      apply_override(config, section + "." + key, node.data());
    }
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open configuration file '" + path + "'");
  }
  return parse_config(in, path);
}

std::map<std::string, std::string> to_key_values(const RunConfig& config) {
  std::map<std::string, std::string> out;
  for (const auto& f : fields()) out[f.key] = f.get(config);
  return out;
}

std::string to_ini(const RunConfig& config) {
  std::string out;
  std::string current;
  for (const auto& f : fields()) {
    const std::string key = f.key;
    const auto dot = key.find('.');
    const std::string section = key.substr(0, dot);
    if (section != current) {
      out += (current.empty() ? "" : "\n") + ("[" + section + "]\n");
      current = section;
    }
    out += key.substr(dot + 1) + " = " + f.get(config) + "\n";
  }
  return out;
}

}  // namespace lrising
