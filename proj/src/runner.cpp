// SPDX-License-Identifier: Apache-2.0
#include <gensense/runner.hpp>

#include <gensense/arch_metrics.hpp>
#include <gensense/control_space.hpp>
#include <gensense/io.hpp>
#include <gensense/polarimetry.hpp>
#include <gensense/scheduler.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace gensense {

namespace fs = std::filesystem;

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

/// Output directory that only becomes visible under its final name once
/// every file is written.
class StagedRun {
 public:
  StagedRun(const fs::path& out_dir, std::string hash) : out_dir_(out_dir), hash_(std::move(hash)) {
    fs::create_directories(out_dir_);
    staging_ = out_dir_ / (".staging-" + hash_ + "-" + std::to_string(::getpid()));
    fs::remove_all(staging_);
    fs::create_directories(staging_);
  }

  ~StagedRun() {
    if (!committed_) {
      std::error_code ec;
      fs::remove_all(staging_, ec);
    }
  }

  StagedRun(const StagedRun&) = delete;
  StagedRun& operator=(const StagedRun&) = delete;

  void write(const std::string& rel, const std::string& text) {
    const fs::path p = staging_ / rel;
    fs::create_directories(p.parent_path());
    io::write_text(p, text);
    files_.push_back(rel);
  }

  void write_json(const std::string& rel, const nlohmann::json& j) { write(rel, j.dump(2) + "\n"); }

  std::vector<std::string> manifest() const {
    auto sorted = files_;
    sorted.emplace_back("manifest.json");
    std::sort(sorted.begin(), sorted.end());
    return sorted;
  }

  RunResult commit(nlohmann::json summary) {
    const auto files = manifest();
    write_json("manifest.json", {{"config_hash", hash_}, {"files", files}});
    const std::string stem = hash_ + "-" + utc_timestamp();
    fs::path target = out_dir_ / stem;
    for (int i = 1; fs::exists(target); ++i) target = out_dir_ / (stem + "-" + std::to_string(i));
    fs::rename(staging_, target);
    committed_ = true;
    for (const auto& f : files) {
      if (!fs::exists(target / f)) throw std::runtime_error("missing output " + f);
    }
    return {target, files, std::move(summary)};
  }

 private:
  fs::path out_dir_;
  std::string hash_;
  fs::path staging_;
  std::vector<std::string> files_;
  bool committed_ = false;
};

arch::ArchSpec fabric_spec(const FabricConfig& f, int pols) {
  return {arch::MrcFaaCaf{f.k_chains, f.m_modules, f.p_steps}, pols};
}

std::vector<arch::ArchSpec> specs_for(const ScenarioConfig& cfg) {
  const int n = cfg.fabric().n_vir();
  const int pols = static_cast<int>(cfg.pol_states.size());
  int n_tx = 1;
  for (int d = 1; d * d <= n; ++d) {
    if (n % d == 0) n_tx = d;
  }
  return {{arch::PhasedArray{n}, pols}, {arch::TdmMimo{n_tx, n / n_tx}, pols},
          fabric_spec(cfg.fabric(), pols)};
}

std::string state_tag(const StateId& id, Pol rx) {
  std::ostringstream os;
  os << "slot" << id.slot << "_chain" << id.chain << "_v" << id.index << "_tx"
     << to_string(id.pol_tx) << "_rx" << to_string(rx);
  return os.str();
}

nlohmann::json vec_json(const Vec3d& v) { return {v.x(), v.y(), v.z()}; }

/// Maximizes combined four-channel power on a fine lattice spanning one
/// coarse grid step around a detected peak.
Vec3d refine_peak(const PolFrame<double>& frame, const ImageGridSpec& spec, const Vec3d& coarse) {
  constexpr int kSub = 10;
  Vec3d best = coarse;
  double best_power = -1.0;
  for (int i = -kSub; i <= kSub; ++i) {
    for (int j = -kSub; j <= kSub; ++j) {
      const Vec3d p = coarse + Vec3d(i * spec.x_step / kSub, 0.0, j * spec.z_step / kSub);
      double power = 0.0;
      for (const auto& ch : frame.channels) power += std::norm(backproject_point(ch, p, frame.setup.c_mps));
      if (power > best_power) {
        best_power = power;
        best = p;
      }
    }
  }
  return best;
}

}  // namespace

ScenarioConfig resolve_config(const RunOptions& opts) {
  ScenarioConfig cfg;
  if (opts.config_path) {
    cfg = load_config(*opts.config_path);
  } else if (opts.preset) {
    if (*opts.preset != "case-study") throw ConfigError({"--preset: unknown preset '" + *opts.preset + "'"});
    cfg = case_study_config();
  } else {
    throw ConfigError({"either --config or --preset is required"});
  }
  if (opts.seed) cfg = with_seed(cfg, *opts.seed);
  return cfg;
}

RunResult run_compare(const RunOptions& opts) {
  std::vector<arch::ArchSpec> specs;
  std::string hash;
  if (opts.config_path) {
    const auto cfg = resolve_config(opts);
    specs = specs_for(cfg);
    hash = cfg.hash();
  } else {
    if (opts.preset && *opts.preset != "case-study")
      throw ConfigError({"--preset: unknown preset '" + *opts.preset + "'"});
    specs = arch::case_study_specs();
    hash = fnv1a_hex("preset:case-study");
  }
  const auto table = arch::compare(specs);
  StagedRun run(opts.out_dir, hash);
  const std::string text = arch::render_text(table);
  run.write("table.txt", text);
  run.write("table.csv", arch::render_csv(table));
  return run.commit({{"table", text}});
}

RunResult run_schedule(const RunOptions& opts) {
  const auto cfg = resolve_config(opts);
  const auto plan = partition_band(cfg.fabric());
  const auto sched = build_schedule(cfg.fabric(), cfg.pol_states);
  const auto verdict = validate_schedule(sched, plan, cfg.fabric());
  if (!verdict) throw std::runtime_error("schedule failed validation: " + verdict.describe());

  StagedRun run(opts.out_dir, cfg.hash());
  run.write("schedule.csv", io::schedule_csv(sched, plan));
  auto j = io::schedule_json(sched, plan, cfg.fabric(), verdict);
  j["config_hash"] = cfg.hash();
  run.write_json("schedule.json", j);
  return run.commit({{"n_slots", sched.n_slots},
                     {"n_entries", sched.entries.size()},
                     {"verdict", verdict.describe()},
                     {"frame_duration_s", frame_duration(sched, cfg.fabric())}});
}

RunResult run_simulate(const RunOptions& opts) {
  const auto cfg = resolve_config(opts);
  const auto setup = cfg.acquisition_setup();
  const auto sched = build_schedule(cfg.fabric(), cfg.pol_states);
  const auto verdict = validate_schedule(sched, setup.plan, cfg.fabric());
  if (!verdict) throw std::runtime_error("schedule failed validation: " + verdict.describe());
  const auto traj = trajectory_from_schedule(sched, cfg.geometry, setup.plan);
  const auto bounds = ControlSpaceBounds::from(cfg.fabric());
  for (const auto& u : traj.points) {
    if (auto problem = validate_point(u, bounds)) throw std::runtime_error("invalid control point: " + *problem);
  }
  const auto signals = simulate_trajectory(traj, cfg.scene, setup);

  StagedRun run(opts.out_dir, cfg.hash());
  std::ostringstream profiles;
  profiles << "slot,chain,module,v,pol_tx,pol_rx,bin,range_m,re,im\n";
  for (const auto& sig : signals) {
    const auto prof = range_profile(sig, setup.pad_factor, setup.c_mps);
    const auto& id = sig.state;
    for (Eigen::Index k = 0; k < prof.values.size(); ++k) {
      profiles << id.slot << ',' << id.chain << ',' << id.module << ',' << id.index << ','
               << to_string(id.pol_tx) << ',' << to_string(sig.pol_rx) << ',' << k << ','
               << io::fmt(prof.range_of(k)) << ',' << io::fmt(prof.values[k].real()) << ','
               << io::fmt(prof.values[k].imag()) << '\n';
    }
    if (opts.debug_signals)
      run.write("signals/beat_" + state_tag(id, sig.pol_rx) + ".csv", io::beat_signal_csv(sig));
  }
  run.write("range_profiles.csv", profiles.str());
  const nlohmann::json summary = {{"config_hash", cfg.hash()},
                                  {"n_states", traj.points.size()},
                                  {"n_signals", signals.size()},
                                  {"n_samples", signals.empty() ? 0 : signals.front().chirp.n_samples},
                                  {"pad_factor", setup.pad_factor},
                                  {"range_support_m", cfg.range_support_m()}};
  run.write_json("simulate.json", summary);
  return run.commit(summary);
}

RunResult run_reconstruct(const RunOptions& opts) {
  const auto cfg = resolve_config(opts);
  const bool has_h = std::count(cfg.pol_states.begin(), cfg.pol_states.end(), Pol::H) > 0;
  const bool has_v = std::count(cfg.pol_states.begin(), cfg.pol_states.end(), Pol::V) > 0;
  if (!has_h || !has_v) throw ConfigError({"fabric.pol_states: reconstruct needs both H and V"});

  const auto setup = cfg.acquisition_setup();
  const auto& fab = cfg.fabric();
  const auto sched = build_schedule(fab, cfg.pol_states);
  const auto verdict = validate_schedule(sched, setup.plan, fab);
  if (!verdict) throw std::runtime_error("schedule failed validation: " + verdict.describe());

  const auto frame = acquire(sched, cfg.scene, setup);
  auto image = image_pol_frame(frame, cfg.grid);
  const auto power = combined_power(image);
  const int max_peaks = std::max<int>(1, static_cast<int>(cfg.scene.scatterers.size()) * 2);
  const auto peaks = detect_peaks(power, 0.25, max_peaks);

  const double range_cell = range_resolution(fab.bandwidth_hz(), cfg.c_mps);
  const double lambda_c = wavelength(fab.center_hz(), cfg.c_mps);
  const Vec3d center = cfg.geometry.aperture_center();
  const double aperture = cfg.geometry.aperture_length();

  // Peaks come strongest first; a weaker one inside an accepted peak's
  // resolution cell is a ripple of the same response.
  std::vector<Vec3d> detected;
  for (const auto& p : peaks) {
    const Vec3d refined = refine_peak(frame, cfg.grid, cfg.grid.point(p.row, p.col));
    const double cross_cell = lambda_c * (refined - center).norm() / (2.0 * aperture);
    const bool duplicate = std::any_of(detected.begin(), detected.end(), [&](const Vec3d& d) {
      return std::abs(d.z() - refined.z()) <= range_cell && std::abs(d.x() - refined.x()) <= cross_cell;
    });
    if (!duplicate) detected.push_back(refined);
  }

  nlohmann::json scatterers = nlohmann::json::array();
  nlohmann::json localization = nlohmann::json::array();
  const auto wm = build_world_model(frame, std::move(image), detected);

  for (std::size_t i = 0; i < cfg.scene.scatterers.size(); ++i) {
    const auto& sc = cfg.scene.scatterers[i];
    const auto s_truth_est = estimate_scattering(frame, sc.position);
    const auto gain = coherent_gain(frame, sc.position);
    const double range = (sc.position - center).norm();
    const double cross_cell = lambda_c * range / (2.0 * aperture);
    nlohmann::json row = {{"index", i},
                          {"truth_position", vec_json(sc.position)},
                          {"s_truth", io::matrix_json(sc.scattering)},
                          {"s_estimate_at_truth", io::matrix_json(s_truth_est)},
                          {"s_relative_error", relative_error(s_truth_est, sc.scattering)},
                          {"coherent_gain_ratio", gain.ratio()}};
    nlohmann::json loc = {{"index", i}, {"range_cell_m", range_cell}, {"cross_range_cell_m", cross_cell}};
    if (!detected.empty()) {
      std::size_t best = 0;
      for (std::size_t d = 1; d < detected.size(); ++d) {
        if ((detected[d] - sc.position).norm() < (detected[best] - sc.position).norm()) best = d;
      }
      const double dx = detected[best].x() - sc.position.x();
      const double dz = detected[best].z() - sc.position.z();
      loc["detected_position"] = vec_json(detected[best]);
      loc["dx_m"] = dx;
      loc["dz_m"] = dz;
      loc["within_cell"] = std::abs(dz) <= range_cell && std::abs(dx) <= cross_cell;
      row["s_estimate_at_detection"] = io::matrix_json(wm.estimates[best].s);
      row["s_relative_error_at_detection"] = relative_error(wm.estimates[best].s, sc.scattering);
    }
    scatterers.push_back(row);
    localization.push_back(loc);
  }

  nlohmann::json detections = nlohmann::json::array();
  for (const auto& e : wm.estimates) detections.push_back({{"position", vec_json(e.location)}, {"s", io::matrix_json(e.s)}});

  const std::string hash = cfg.hash();
  StagedRun run(opts.out_dir, hash);
  run.write("image.csv", io::image_csv(wm.image));
  run.write_json("image.json", {{"config_hash", hash}, {"grid", io::grid_json(cfg.grid)},
                                {"channels", {"hh", "hv", "vh", "vv"}}});
  run.write_json("world_model.json", {{"config_hash", hash},
                                      {"elements", fab.n_vir()},
                                      {"dof", wm.dof_count},
                                      {"timestamp_slots", wm.timestamp_slots},
                                      {"detections", detections},
                                      {"scatterers", scatterers}});
  const nlohmann::json report = {
      {"config_hash", hash},
      {"config_name", cfg.name},
      {"seed", cfg.seed},
      {"schedule",
       {{"n_slots", sched.n_slots},
        {"n_entries", sched.entries.size()},
        {"verdict", verdict.describe()},
        {"frame_duration_s", frame_duration(sched, fab)}}},
      {"localization", localization},
      {"scattering_estimates", scatterers},
      {"counters",
       {{"states_simulated", sched.entries.size()},
        {"range_profiles", 2 * sched.entries.size()},
        {"pixels", static_cast<long long>(cfg.grid.nx()) * cfg.grid.nz()},
        {"detections", detected.size()}}},
      {"outputs", {"image.csv", "image.json", "world_model.json", "run_report.json", "manifest.json"}}};
  run.write_json("run_report.json", report);
  return run.commit(report);
}

}  // namespace gensense
