// SPDX-License-Identifier: Apache-2.0
#include <gensense/io.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gensense::io {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string schedule_csv(const Schedule& sched, const SubbandPlan& plan) {
  std::ostringstream os;
  os << "slot,chain,module,step,center_hz,chirp_bw_hz,pol_tx\n";
  for (const auto& e : sched.entries) {
    os << e.slot << ',' << e.chain << ',' << e.module << ',' << e.step << ','
       << fmt(plan.center_hz(e.chain, e.module, e.step)) << ',' << fmt(plan.chirp_bandwidth_hz())
       << ',' << to_string(e.pol_tx) << '\n';
  }
  return os.str();
}

nlohmann::json schedule_json(const Schedule& sched, const SubbandPlan& plan,
                             const FabricConfig& cfg, const ScheduleVerdict& verdict) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : sched.entries) {
    entries.push_back({{"slot", e.slot},
                       {"chain", e.chain},
                       {"module", e.module},
                       {"step", e.step},
                       {"center_hz", plan.center_hz(e.chain, e.module, e.step)},
                       {"chirp_bw_hz", plan.chirp_bandwidth_hz()},
                       {"pol_tx", std::string(to_string(e.pol_tx))}});
  }
  nlohmann::json subbands = nlohmann::json::array();
  for (const auto& b : plan.subbands()) subbands.push_back({b.lo_hz, b.hi_hz});
  return {{"k_chains", cfg.k_chains},
          {"m_modules", cfg.m_modules},
          {"p_steps", cfg.p_steps},
          {"n_slots", sched.n_slots},
          {"frame_duration_s", frame_duration(sched, cfg)},
          {"verdict", verdict.describe()},
          {"subbands_hz", subbands},
          {"entries", entries}};
}

std::string beat_signal_csv(const BeatSignal<double>& sig) {
  std::ostringstream os;
  os << "sample_index,re,im\n";
  for (Eigen::Index n = 0; n < sig.samples.size(); ++n)
    os << n << ',' << fmt(sig.samples[n].real()) << ',' << fmt(sig.samples[n].imag()) << '\n';
  return os.str();
}

std::string image_csv(const ImageGrid<double>& image) {
  std::ostringstream os;
  os << "x,z,abs_hh,abs_hv,abs_vh,abs_vv\n";
  const auto& s = image.spec;
  // {tx, rx} per column, matching S_(rx)(tx) naming: hv is rx H, tx V.
  const Pol columns[4][2] = {{Pol::H, Pol::H}, {Pol::V, Pol::H}, {Pol::H, Pol::V}, {Pol::V, Pol::V}};
  for (int row = 0; row < s.nz(); ++row) {
    for (int col = 0; col < s.nx(); ++col) {
      os << fmt(s.x_at(col)) << ',' << fmt(s.z_at(row));
      for (const auto& c : columns) {
        const auto& ch = image.channel(c[0], c[1]);
        os << ',' << fmt(ch.size() > 0 ? std::abs(ch(row, col)) : 0.0);
      }
      os << '\n';
    }
  }
  return os.str();
}

nlohmann::json grid_json(const ImageGridSpec& spec) {
  return {{"x_min", spec.x_min}, {"x_max", spec.x_max}, {"x_step", spec.x_step}, {"nx", spec.nx()},
          {"z_min", spec.z_min}, {"z_max", spec.z_max}, {"z_step", spec.z_step}, {"nz", spec.nz()},
          {"y", spec.y}};
}

nlohmann::json complex_json(std::complex<double> z) { return {z.real(), z.imag()}; }

nlohmann::json matrix_json(const Eigen::Matrix<std::complex<double>, 2, 2>& s) {
  return {{"hh", complex_json(s(0, 0))},
          {"hv", complex_json(s(0, 1))},
          {"vh", complex_json(s(1, 0))},
          {"vv", complex_json(s(1, 1))}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace gensense::io
