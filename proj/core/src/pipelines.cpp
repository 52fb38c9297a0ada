#include "lrising/pipelines.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "lrising/csv_io.hpp"
#include "lrising/errors.hpp"
#include "lrising/exact_engine.hpp"
#include "lrising/version.hpp"

namespace lrising {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kCheckpointMagic[4] = {'L', 'R', 'C', 'K'};
constexpr std::uint32_t kCheckpointVersion = 1;

std::string prepare_output_dir(const RunConfig& config) {
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec || !fs::is_directory(config.output_dir)) {
    throw ConfigError("run.output_dir: cannot create '" + config.output_dir + "'");
  }
  return config.output_dir;
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string manifest_name(const std::string& command) { return "manifest_" + command + ".json"; }

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

std::string write_manifest(const std::string& dir, const std::string& command,
                           const RunConfig& config, const std::vector<std::string>& files,
                           json results) {
  json m;
  m["command"] = command;
  m["version"] = kVersion;
  json cfg = json::object();
  for (const auto& [key, value] : to_key_values(config)) cfg[key] = value;
  m["config"] = cfg;
  json outputs = json::array();
  for (const auto& f : files) outputs.push_back(fs::path(f).filename().string());
  m["outputs"] = outputs;
  m["results"] = std::move(results);
  m["run_info"] = {{"timestamp", utc_timestamp()}};
  const std::string path = join(dir, manifest_name(command));
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot write '" + path + "'");
  }
  out << m.dump(2) << '\n';
  return path;
}

std::string run_comment(const RunConfig& config, const std::string& command) {
  return "L=" + std::to_string(config.L) + " J=" + format_double(config.J) +
         " g=" + format_double(config.g) + " alpha=" + format_double(config.alpha) +
         " mode=" + to_string(config.mode) + " manifest=" + manifest_name(command);
}

std::string sector_tag(const SectorRequest& r) {
  std::string tag = "nu" + std::to_string(r.nu);
  if (r.filter != SectorFilter::none) tag += "_" + to_string(r.filter);
  return tag;
}

SwOptions sw_options(const RunConfig& config) { return {config.eps_sw, kDefaultBasisCap}; }

EffectiveHamiltonian vacuum_sector(const Lattice& lattice, const RunConfig& config) {
  EffectiveHamiltonian H;
  H.basis.L = lattice.size();
  H.basis.nu = 0;
  H.basis.kind = BasisKind::zero_momentum;
  H.basis.configs = {0};
  H.basis.orbit_sizes = {1};
  H.basis.index = {{0, 0}};
  H.mode = config.mode;
  const double N = lattice.sites();
  if (config.mode == SwMode::asymptotic) {
    H.constant = polarized_energy(lattice, config.J) - config.g * config.g * N / (8.0 * config.J);
  } else {
    H.constant = e0_effective(lattice, config.J, config.g);
  }
  H.matrix = Eigen::MatrixXd::Constant(1, 1, H.constant);
  return H;
}

Lattice make_lattice(const RunConfig& config) { return Lattice(config.L, config.alpha); }

void write_checkpoint(const std::string& path, const RunConfig& config, const StateVector& s) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) {
      throw ConfigError("cannot write '" + tmp + "'");
    }
    const std::int32_t L = config.L;
    const std::uint64_t dim = static_cast<std::uint64_t>(s.amplitudes.size());
    out.write(kCheckpointMagic, 4);
    out.write(reinterpret_cast<const char*>(&kCheckpointVersion), sizeof kCheckpointVersion);
    out.write(reinterpret_cast<const char*>(&L), sizeof L);
    for (double v : {config.J, config.g, config.alpha, s.time}) {
      out.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
    out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
    out.write(reinterpret_cast<const char*>(s.amplitudes.data()),
              static_cast<std::streamsize>(dim * sizeof(Complex)));
    if (!out) {
      throw ConfigError("write failed for '" + tmp + "'");
    }
  }
  fs::rename(tmp, path);
}

StateVector read_checkpoint(const std::string& path, const RunConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open checkpoint '" + path + "'");
  }
  char magic[4];
  std::uint32_t version = 0;
  std::int32_t L = 0;
  double J = 0, g = 0, alpha = 0, time = 0;
  std::uint64_t dim = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&L), sizeof L);
  for (double* v : {&J, &g, &alpha, &time}) in.read(reinterpret_cast<char*>(v), sizeof *v);
  in.read(reinterpret_cast<char*>(&dim), sizeof dim);
  if (!in || std::string(magic, 4) != std::string(kCheckpointMagic, 4) ||
      version != kCheckpointVersion) {
    throw ConfigError("'" + path + "' is not a checkpoint file");
  }
  const bool same_alpha = (std::isinf(alpha) && std::isinf(config.alpha)) || alpha == config.alpha;
  if (L != config.L || J != config.J || g != config.g || !same_alpha) {
    throw ConfigError("checkpoint '" + path + "' was written for different parameters");
  }
  if (dim != (std::uint64_t{1} << (L * L))) {
    throw ConfigError("checkpoint '" + path + "' has the wrong dimension");
  }
  StateVector s;
  s.time = time;
  s.amplitudes.resize(static_cast<Eigen::Index>(dim));
  in.read(reinterpret_cast<char*>(s.amplitudes.data()),
          static_cast<std::streamsize>(dim * sizeof(Complex)));
  if (!in) {
    throw ConfigError("checkpoint '" + path + "' is truncated");
  }
  return s;
}

// Rows of `head` strictly before t_cut followed by all rows of `tail`.
TimeSeries splice(const TimeSeries& head, const TimeSeries& tail, double t_cut) {
  TimeSeries out = tail;
  std::size_t keep = 0;
  while (keep < head.size() && head.times[keep] < t_cut - 0.5 * tail.dt) ++keep;
  const auto half = tail.max_separation();
  if (keep > 0 && head.max_separation() != half) {
    throw ConfigError("existing series has a different number of correlator columns");
  }
  out.times.assign(head.times.begin(), head.times.begin() + static_cast<std::ptrdiff_t>(keep));
  out.sz_site_avg.assign(head.sz_site_avg.begin(),
                         head.sz_site_avg.begin() + static_cast<std::ptrdiff_t>(keep));
  out.energy.assign(head.energy.begin(), head.energy.begin() + static_cast<std::ptrdiff_t>(keep));
  out.norm.assign(head.norm.begin(), head.norm.begin() + static_cast<std::ptrdiff_t>(keep));
  out.times.insert(out.times.end(), tail.times.begin(), tail.times.end());
  out.sz_site_avg.insert(out.sz_site_avg.end(), tail.sz_site_avg.begin(), tail.sz_site_avg.end());
  out.energy.insert(out.energy.end(), tail.energy.begin(), tail.energy.end());
  out.norm.insert(out.norm.end(), tail.norm.begin(), tail.norm.end());
  const auto k = static_cast<Eigen::Index>(keep);
  out.corr.resize(k + tail.corr.rows(), half);
  out.corr_normalized.resize(k + tail.corr.rows(), half);
  out.corr << head.corr.topRows(k), tail.corr;
  out.corr_normalized << head.corr_normalized.topRows(k), tail.corr_normalized;
  return out;
}

}  // namespace

SectorResult solve_sector(const Lattice& lattice, const RunConfig& config, SectorRequest request) {
  const SwOptions opts = sw_options(config);
  SectorResult r;
  r.request = request;
  const bool generic =
      config.mode == SwMode::generic_sw || request.filter != SectorFilter::none || request.nu > 2;
  std::string provenance;
  if (generic) {
    if (lattice.sites() > 64) {
      throw ConfigError("effective.sectors: sector " + sector_tag(request) +
                        " needs the generic builder, which is limited to L <= 8");
    }
    r.hamiltonian = build_sector_generic(zero_momentum_basis(lattice, request.nu, request.filter),
                                         lattice, config.J, config.g, opts);
    provenance = "generic_sw";
  } else if (request.nu == 0) {
    r.hamiltonian = vacuum_sector(lattice, config);
    provenance = to_string(config.mode);
  } else if (request.nu == 1) {
    r.hamiltonian = build_h1_zero_momentum(lattice, config.J, config.g, config.mode, opts);
    provenance = to_string(config.mode);
  } else {
    r.hamiltonian =
        build_h2(lattice, config.J, config.g, config.mode, config.identify_inversion, opts);
    provenance = to_string(config.mode) + (config.identify_inversion ? " identified" : "");
  }
  r.solution = diagonalize(r.hamiltonian);
  r.levels.nu = request.nu;
  r.levels.energies = r.solution.values;
  r.levels.provenance = sector_tag(request) + " " + provenance;
  return r;
}

GapTable sector_gaps(const std::vector<SectorResult>& sectors, int max_levels) {
  std::vector<SectorLevels> levels;
  levels.reserve(sectors.size());
  for (const auto& s : sectors) levels.push_back(s.levels);
  return gap_table(levels, max_levels);
}

std::vector<DispersionPoint> dispersion_path(const Lattice& lattice, double J, double g,
                                             SwMode mode) {
  const int h = lattice.size() / 2;
  const int q = h / 2;
  struct Leg {
    Momentum from, to;
    std::string end_label;
  };
  const std::vector<Leg> legs{{{h, 0}, {h, h}, "M"},
                              {{h, h}, {0, 0}, "Gamma"},
                              {{0, 0}, {h, 0}, "X"},
                              {{h, 0}, {q, q}, "S"}};
  const double unit = 2.0 * M_PI / lattice.size();
  std::vector<DispersionPoint> path;
  auto push = [&](Momentum k, const std::string& label) {
    DispersionPoint p;
    p.label = label;
    p.k = k;
    if (!path.empty()) {
      const double dx = (k.nx - path.back().k.nx) * unit;
      const double dy = (k.ny - path.back().k.ny) * unit;
      p.path_length = path.back().path_length + std::hypot(dx, dy);
    }
    p.energy = dispersion(lattice, J, g, k, mode);
    path.push_back(p);
  };
  push(legs.front().from, "X");
  for (const auto& leg : legs) {
    const int sx = (leg.to.nx > leg.from.nx) - (leg.to.nx < leg.from.nx);
    const int sy = (leg.to.ny > leg.from.ny) - (leg.to.ny < leg.from.ny);
    const int steps = std::max(std::abs(leg.to.nx - leg.from.nx), std::abs(leg.to.ny - leg.from.ny));
    for (int i = 1; i <= steps; ++i) {
      push({leg.from.nx + i * sx, leg.from.ny + i * sy}, i == steps ? leg.end_label : "");
    }
  }
  return path;
}

CommandResult cmd_effective(const RunConfig& config) {
  validate(config);
  const std::string dir = prepare_output_dir(config);
  const Lattice lattice = make_lattice(config);
  const std::string comment = run_comment(config, "effective");

  std::vector<SectorResult> sectors;
  for (const auto& request : config.sectors) sectors.push_back(solve_sector(lattice, config, request));

  CommandResult result;
  json summary = json::object();
  for (const auto& s : sectors) {
    const std::string name = "eigenvalues_" + sector_tag(s.request) + ".csv";
    const std::string path = join(dir, name);
    CsvWriter w(path, comment + " sector=" + s.levels.provenance, {"index", "energy"});
    for (Eigen::Index i = 0; i < s.levels.energies.size(); ++i) {
      w.row({std::to_string(i + 1), format_double(s.levels.energies[i])});
    }
    result.files.push_back(path);
    summary[sector_tag(s.request)] = {{"dimension", s.levels.energies.size()},
                                      {"provenance", s.levels.provenance},
                                      {"lowest", s.levels.energies.size() > 0
                                                     ? format_double(s.levels.energies[0])
                                                     : std::string()}};
  }
  if (sectors.size() >= 2) {
    const GapTable table = sector_gaps(sectors, config.max_levels);
    const std::string path = join(dir, "gaps.csv");
    write_gap_table(path, table, comment);
    result.files.push_back(path);
    summary["gap_count"] = table.entries.size();
  }
  result.files.push_back(write_manifest(dir, "effective", config, result.files, summary));
  return result;
}

CommandResult cmd_boundstates(const RunConfig& config) {
  validate(config);
  if (config.mode == SwMode::generic_sw) {
    throw ConfigError("effective.mode: boundstates needs the relative-coordinate Hamiltonian "
                      "(full or asymptotic)");
  }
  const std::string dir = prepare_output_dir(config);
  const Lattice lattice = make_lattice(config);
  const std::string comment = run_comment(config, "boundstates");

  const EffectiveHamiltonian H = build_h2(lattice, config.J, config.g, config.mode,
                                          config.identify_inversion, sw_options(config));
  const EigenSolution solution = diagonalize(H);
  const auto records =
      classify(solution, H.basis, {config.bound_ipr, config.scattering_factor});

  CommandResult result;
  const std::string path = join(dir, "boundstates.csv");
  {
    CsvWriter w(path, comment, {"eigen_index", "energy", "ipr", "dbar", "label"});
    for (const auto& r : records) {
      w.row({std::to_string(r.eigen_index), format_double(r.energy), format_double(r.ipr),
             format_double(r.dbar), to_string(r.label)});
    }
  }
  result.files.push_back(path);

  json summary = json::object();
  std::size_t counts[3] = {0, 0, 0};
  for (const auto& r : records) ++counts[static_cast<int>(r.label)];
  summary["dimension"] = records.size();
  summary["bound"] = counts[static_cast<int>(StateLabel::bound)];
  summary["quasilocalized"] = counts[static_cast<int>(StateLabel::quasilocalized)];
  summary["scattering"] = counts[static_cast<int>(StateLabel::scattering)];

  for (int index : config.density_maps) {
    if (index >= solution.size()) {
      throw ConfigError("boundstates.density_maps: eigen index " + std::to_string(index) +
                        " exceeds the sector dimension " + std::to_string(solution.size()));
    }
    const DensityMap map = density_map(solution.vectors.col(index), H.basis, config.L);
    const std::string mpath = join(dir, "density_" + std::to_string(index) + ".txt");
    std::ofstream out(mpath);
    if (!out) {
      throw ConfigError("cannot write '" + mpath + "'");
    }
    out << "# L=" << config.L << " alpha=" << format_double(config.alpha)
        << " g=" << format_double(config.g) << " eigen_index=" << index
        << " offset=" << map.offset << " manifest=" << manifest_name("boundstates") << '\n';
    for (Eigen::Index row = 0; row < map.grid.rows(); ++row) {
      for (Eigen::Index col = 0; col < map.grid.cols(); ++col) {
        out << (col ? " " : "") << format_double(map.grid(row, col));
      }
      out << '\n';
    }
    if (!out) {
      throw ConfigError("write failed for '" + mpath + "'");
    }
    result.files.push_back(mpath);
  }
  result.files.push_back(write_manifest(dir, "boundstates", config, result.files, summary));
  return result;
}

CommandResult cmd_quench(const RunConfig& config, bool resume) {
  validate(config);
  const Lattice lattice = make_lattice(config);
  EngineLimits limits;
  limits.max_sites = config.max_sites;
  limits.memory_budget_bytes = config.memory_budget_gb * 1e9;
  const double required = estimate_memory_bytes(lattice.sites(), config.krylov_dim);
  if (lattice.sites() > limits.max_sites) {
    throw BudgetError("quench.max_sites: L^2 = " + std::to_string(lattice.sites()) +
                          " exceeds the limit " + std::to_string(limits.max_sites),
                      required);
  }
  if (required > limits.memory_budget_bytes) {
    throw BudgetError("quench.memory_budget_gb: estimated " + format_double(required / 1e9) +
                          " GB exceeds the budget " + format_double(config.memory_budget_gb) +
                          " GB",
                      required);
  }
  const std::string dir = prepare_output_dir(config);
  const std::string series_path = join(dir, "timeseries.csv");
  const std::string ckpt_path = join(dir, "checkpoint.bin");

  QuenchOptions opts;
  opts.t_max = config.t_max;
  opts.dt_record = config.dt;
  opts.krylov_dim = config.krylov_dim;
  opts.tol = config.krylov_tol;

  TimeSeries head;
  double t_resume = 0.0;
  if (resume && fs::exists(ckpt_path)) {
    opts.initial = read_checkpoint(ckpt_path, config);
    t_resume = opts.initial->time;
    head = read_time_series(series_path);
  }

  // The quench is run in segments between checkpoints so the series written
  // next to each checkpoint is complete up to the checkpoint time.
  TimeSeries series;
  if (config.checkpoint_every > 0.0) {
    StateVector start;
    bool have_start = opts.initial.has_value();
    if (have_start) start = *opts.initial;
    TimeSeries accumulated = head;
    double t_from = t_resume;
    while (true) {
      QuenchOptions seg = opts;
      seg.on_record = nullptr;
      if (have_start) seg.initial = start;
      seg.t_max = std::min(config.t_max, t_from + config.checkpoint_every);
      std::optional<StateVector> last;
      seg.on_record = [&](const StateVector& s, std::size_t) { last = s; };
      TimeSeries part = run_quench(lattice, config.J, config.g, seg, limits);
      accumulated = accumulated.size() == 0 ? part : splice(accumulated, part, t_from);
      if (!last) break;
      start = *last;
      have_start = true;
      t_from = start.time;
      write_time_series(series_path, accumulated, manifest_name("quench"));
      write_checkpoint(ckpt_path, config, start);
      if (seg.t_max >= config.t_max || part.size() <= 1) break;
    }
    series = accumulated;
  } else {
    TimeSeries part = run_quench(lattice, config.J, config.g, opts, limits);
    series = head.size() == 0 ? part : splice(head, part, t_resume);
  }
  write_time_series(series_path, series, manifest_name("quench"));

  CommandResult result;
  result.files.push_back(series_path);
  if (config.checkpoint_every > 0.0) result.files.push_back(ckpt_path);

  double drift_norm = 0.0, drift_energy = 0.0;
  for (std::size_t n = 0; n < series.size(); ++n) {
    drift_norm = std::max(drift_norm, std::abs(series.norm[n] - 1.0));
    const double scale = std::max(std::abs(series.energy[0]), 1e-300);
    drift_energy = std::max(drift_energy, std::abs(series.energy[n] - series.energy[0]) / scale);
  }
  json summary = {{"records", series.size()},
                  {"norm_drift", format_double(drift_norm)},
                  {"energy_drift_relative", format_double(drift_energy)},
                  {"kac", format_double(lattice.kac())}};
  result.files.push_back(write_manifest(dir, "quench", config, result.files, summary));
  return result;
}

CommandResult cmd_spectrum(const RunConfig& config, const std::string& series_file,
                           const std::string& gaps_file) {
  validate(config);
  const CsvTable table = read_csv(series_file);
  const auto times = table.numeric_column("t");
  const auto values = table.numeric_column(config.channel);
  if (times.size() < 2) {
    throw ParseError(series_file, table.line_numbers.empty() ? 1 : table.line_numbers.back(),
                     "need at least two samples");
  }
  const double t_max = config.window_t_max > 0.0 ? config.window_t_max : times.back();
  const Spectrum spectrum = fft_spectrum(times, values, config.window_t_min, t_max);
  const auto peaks = detect_peaks(spectrum, config.rel_threshold);

  const std::string dir = prepare_output_dir(config);
  const std::string comment = "source=" + fs::path(series_file).filename().string() +
                              " channel=" + config.channel + " window=" + spectrum.window +
                              " t_min=" + format_double(spectrum.t_min) +
                              " t_max=" + format_double(spectrum.t_max) +
                              " manifest=" + manifest_name("spectrum");
  CommandResult result;
  {
    const std::string path = join(dir, "spectrum.csv");
    CsvWriter w(path, comment, {"omega", "magnitude"});
    for (std::size_t k = 0; k <= spectrum.nyquist_index(); ++k) {
      w.row(std::vector<double>{spectrum.omegas[k], spectrum.magnitudes[k]});
    }
    result.files.push_back(path);
  }
  {
    const std::string path = join(dir, "peaks.csv");
    CsvWriter w(path, comment, {"omega", "magnitude", "bin"});
    for (const auto& p : peaks) {
      w.row({format_double(p.omega), format_double(p.magnitude), std::to_string(p.bin)});
    }
    result.files.push_back(path);
  }
  json summary = {{"samples", spectrum.size()},
                  {"bin_width", format_double(spectrum.bin_width())},
                  {"peaks", peaks.size()}};
  if (!gaps_file.empty()) {
    const GapTable gaps = read_gap_table(gaps_file);
    const double tol = config.match_tol > 0.0 ? config.match_tol : spectrum.bin_width();
    const auto assignments = match_gaps(peaks, gaps, tol);
    const std::string path = join(dir, "assignments.csv");
    CsvWriter w(path, comment + " gaps=" + fs::path(gaps_file).filename().string() +
                          " tol=" + format_double(tol),
                {"peak_omega", "magnitude", "nu", "nu_prime", "i", "j", "delta", "residual"});
    std::size_t assigned = 0;
    for (const auto& a : assignments) {
      if (a.gap) {
        ++assigned;
        w.row({format_double(a.peak_omega), format_double(a.peak_magnitude),
               std::to_string(a.gap->nu), std::to_string(a.gap->nu_prime),
               std::to_string(a.gap->i), std::to_string(a.gap->j), format_double(a.gap->delta),
               format_double(a.residual)});
      } else {
        w.row({format_double(a.peak_omega), format_double(a.peak_magnitude), "", "", "", "", "",
               format_double(a.residual)});
      }
    }
    result.files.push_back(path);
    summary["assigned"] = assigned;
    summary["match_tol"] = format_double(tol);
  }
  result.files.push_back(write_manifest(dir, "spectrum", config, result.files, summary));
  return result;
}

CommandResult cmd_dispersion(const RunConfig& config) {
  validate(config);
  if (config.mode == SwMode::generic_sw) {
    throw ConfigError("effective.mode: the dispersion needs the full or asymptotic form");
  }
  const std::string dir = prepare_output_dir(config);
  const Lattice lattice = make_lattice(config);
  const auto path = dispersion_path(lattice, config.J, config.g, config.mode);
  const std::string csv = join(dir, "dispersion.csv");
  {
    CsvWriter w(csv, run_comment(config, "dispersion"),
                {"label", "nx", "ny", "kx", "ky", "path_length", "energy", "excitation"});
    const double unit = 2.0 * M_PI / lattice.size();
    // energy is relative to the classical polarised energy; excitation to the
    // dressed nu = 0 level of the same mode.
    const double shift = vacuum_sector(lattice, config).constant - polarized_energy(lattice, config.J);
    for (const auto& p : path) {
      w.row({p.label, std::to_string(p.k.nx), std::to_string(p.k.ny),
             format_double(p.k.nx * unit), format_double(p.k.ny * unit),
             format_double(p.path_length), format_double(p.energy),
             format_double(p.energy - shift)});
    }
  }
  CommandResult result;
  result.files.push_back(csv);
  json summary = {{"points", path.size()}};
  result.files.push_back(write_manifest(dir, "dispersion", config, result.files, summary));
  return result;
}

}  // namespace lrising
