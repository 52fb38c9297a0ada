#pragma once

// End-to-end commands. Every command validates its configuration, writes
// into config.output_dir, and finishes with manifest_<command>.json holding
// the flattened configuration, the code version and the list of outputs.
// The only non-deterministic manifest field is run_info.timestamp.

#include <string>
#include <vector>

#include "lrising/boundstates.hpp"
#include "lrising/gap_table.hpp"
#include "lrising/run_config.hpp"
#include "lrising/spectral.hpp"
#include "lrising/sw_effective.hpp"

namespace lrising {

struct CommandResult {
  std::vector<std::string> files;  // paths written, manifest last
};

struct SectorResult {
  SectorRequest request;
  EffectiveHamiltonian hamiltonian;
  EigenSolution solution;
  SectorLevels levels;
};

/// Builds and diagonalises one sector. nu = 0 and nu = 1 use the closed forms
/// restricted to zero momentum, nu = 2 the relative-coordinate Hamiltonian;
/// any other sector, any filtered sector and mode generic_sw go through the
/// generic builder on the zero-momentum configuration basis.
SectorResult solve_sector(const Lattice& lattice, const RunConfig& config, SectorRequest request);

/// Gap table over the requested sectors.
GapTable sector_gaps(const std::vector<SectorResult>& sectors, int max_levels);

struct DispersionPoint {
  std::string label;  // high-symmetry label or empty
  Momentum k;
  double path_length = 0.0;  // cumulative |dk|
  double energy = 0.0;       // E_1(k) - E_0
};

/// Grid points along X -> M -> Gamma -> X -> S with h = floor(L/2):
/// X = (h, 0), M = (h, h), Gamma = (0, 0), S = (floor(h/2), floor(h/2)).
std::vector<DispersionPoint> dispersion_path(const Lattice& lattice, double J, double g,
                                             SwMode mode);

CommandResult cmd_effective(const RunConfig& config);
CommandResult cmd_boundstates(const RunConfig& config);
/// With `resume`, continues from output_dir/checkpoint.bin if present.
CommandResult cmd_quench(const RunConfig& config, bool resume = false);
/// `gaps_file` may be empty; assignments are written only when it is given.
CommandResult cmd_spectrum(const RunConfig& config, const std::string& series_file,
                           const std::string& gaps_file = "");
CommandResult cmd_dispersion(const RunConfig& config);

}  // namespace lrising
