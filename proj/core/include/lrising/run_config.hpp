#pragma once

// Run configuration: an INI file with flat sections plus "section.key=value"
// overrides. Keys (defaults in brackets):
//
//   [lattice]     L [3], alpha [3] ("inf" for the nearest-neighbour limit)
//   [model]       J [1], g [0.2]
//   [effective]   mode [full], identify_inversion [true], sectors [0,1,2],
//                 max_levels [4], eps_sw [1e-8]
//   [quench]      t_max [200], dt [0.05], krylov_dim [30], tol [1e-12],
//                 max_sites [25], memory_budget_gb [4], checkpoint_every [0]
//   [spectrum]    channel [sz_avg], t_min [5], t_max [0 = end of series],
//                 rel_threshold [0.05], match_tol [0 = one frequency bin]
//   [boundstates] bound_ipr [0.1], scattering_factor [5], density_maps []
//   [run]         seed [20240917], output_dir [out]
//
// Sectors are a comma list of magnon numbers; a ":nn" suffix keeps only
// configurations with at least one nearest-neighbour pair (e.g. "0,1,2,3:nn").

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "lrising/sector_basis.hpp"
#include "lrising/sw_effective.hpp"

namespace lrising {

struct SectorRequest {
  int nu = 0;
  SectorFilter filter = SectorFilter::none;

  friend bool operator==(const SectorRequest&, const SectorRequest&) = default;
};

struct RunConfig {
  int L = 3;
  double alpha = 3.0;
  double J = 1.0;
  double g = 0.2;

  SwMode mode = SwMode::full;
  bool identify_inversion = true;
  std::vector<SectorRequest> sectors{{0, SectorFilter::none}, {1, SectorFilter::none},
                                     {2, SectorFilter::none}};
  int max_levels = 4;
  double eps_sw = 1e-8;

  double t_max = 200.0;
  double dt = 0.05;
  int krylov_dim = 30;
  double krylov_tol = 1e-12;
  int max_sites = 25;
  double memory_budget_gb = 4.0;
  double checkpoint_every = 0.0;

  std::string channel = "sz_avg";
  double window_t_min = 5.0;
  double window_t_max = 0.0;
  double rel_threshold = 0.05;
  double match_tol = 0.0;

  double bound_ipr = 0.1;
  double scattering_factor = 5.0;
  std::vector<int> density_maps;

  std::uint64_t seed = 20240917;
  std::string output_dir = "out";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws ConfigError naming the first invalid field.
void validate(const RunConfig& config);

/// `source` names the stream in error messages.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Sets one "section.key" entry. Throws ConfigError for unknown keys or
/// malformed values.
void apply_override(RunConfig& config, const std::string& key, const std::string& value);

/// Flat "section.key" -> text map with every double in 17 significant digits;
/// parsing it back reproduces `config` exactly.
std::map<std::string, std::string> to_key_values(const RunConfig& config);
std::string to_ini(const RunConfig& config);

std::string format_sectors(const std::vector<SectorRequest>& sectors);
std::vector<SectorRequest> parse_sectors(const std::string& text);

}  // namespace lrising
