// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gensense/fmcw.hpp>
#include <gensense/imaging.hpp>
#include <gensense/scheduler.hpp>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

namespace gensense::io {

/// Shortest round-trip decimal form ("%.17g"), locale independent.
std::string fmt(double x);

std::string schedule_csv(const Schedule& sched, const SubbandPlan& plan);
nlohmann::json schedule_json(const Schedule& sched, const SubbandPlan& plan,
                             const FabricConfig& cfg, const ScheduleVerdict& verdict);

/// Columns: sample_index, re, im.
std::string beat_signal_csv(const BeatSignal<double>& sig);

/// Columns: x, z, then |I| for HH, HV, VH, VV (empty channels written as 0).
std::string image_csv(const ImageGrid<double>& image);
nlohmann::json grid_json(const ImageGridSpec& spec);

nlohmann::json complex_json(std::complex<double> z);
nlohmann::json matrix_json(const Eigen::Matrix<std::complex<double>, 2, 2>& s);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace gensense::io
