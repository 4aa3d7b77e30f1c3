// SPDX-License-Identifier: Apache-2.0
#include <gensense/arch_metrics.hpp>

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace gensense::arch {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check(const ArchSpec& a) {
  if (a.pol_tx_states < 1) throw std::invalid_argument("pol_tx_states must be >= 1");
  std::visit(overloaded{
                 [](const PhasedArray& p) {
                   if (p.n_elements < 1) throw std::invalid_argument("n_elements must be >= 1");
                 },
                 [](const TdmMimo& t) {
                   if (t.n_tx < 1 || t.n_rx < 1) throw std::invalid_argument("n_tx, n_rx must be >= 1");
                 },
                 [](const MrcFaaCaf& f) {
                   if (f.k < 1 || f.m < 1 || f.p < 1) throw std::invalid_argument("k, m, p must be >= 1");
                 },
             },
             a.variant);
}

}  // namespace

std::string_view to_string(Ordinal o) {
  switch (o) {
    case Ordinal::Low: return "Low";
    case Ordinal::LowModerate: return "Low-Moderate";
    case Ordinal::Moderate: return "Moderate";
    case Ordinal::ModerateHigh: return "Moderate-High";
    case Ordinal::High: return "High";
  }
  return "?";
}

std::string name_of(const ArchSpec& a) {
  return std::visit(overloaded{
                        [](const PhasedArray&) { return std::string("Phased Array"); },
                        [](const TdmMimo&) { return std::string("TDM-MIMO"); },
                        [](const MrcFaaCaf&) { return std::string("MRC-FaA-CAF"); },
                    },
                    a.variant);
}

int virtual_elements(const ArchSpec& a) {
  check(a);
  return std::visit(overloaded{
                        [](const PhasedArray& p) { return p.n_elements; },
                        [](const TdmMimo& t) { return t.n_tx * t.n_rx; },
                        [](const MrcFaaCaf& f) { return f.k * f.m * f.p; },
                    },
                    a.variant);
}

int frame_multiplier(const ArchSpec& a) {
  check(a);
  const int pol = a.pol_tx_states;
  return std::visit(overloaded{
                        [pol](const PhasedArray&) { return pol; },
                        [pol](const TdmMimo& t) { return t.n_tx * pol; },
                        [pol](const MrcFaaCaf&) { return pol; },
                    },
                    a.variant);
}

UpdateRate update_rate(const ArchSpec& a) { return {frame_multiplier(a)}; }

int absolute_chirps_per_frame(const ArchSpec& a) {
  check(a);
  const int pol = a.pol_tx_states;
  return std::visit(overloaded{
                        [pol](const PhasedArray&) { return pol; },
                        [pol](const TdmMimo& t) { return t.n_tx * pol; },
                        [pol](const MrcFaaCaf& f) { return f.m * f.p * pol; },
                    },
                    a.variant);
}

OrdinalRatings ordinal_ratings(const ArchSpec& a) {
  return std::visit(
      overloaded{
          [](const PhasedArray&) {
            return OrdinalRatings{Ordinal::High, "many RF chains, phase shifters", Ordinal::High,
                                  "dense array, global calibration", Ordinal::Low,
                                  "rigid array geometry", Ordinal::Moderate};
          },
          [](const TdmMimo&) {
            return OrdinalRatings{Ordinal::ModerateHigh, "sequential Tx activations",
                                  Ordinal::Moderate, "fewer RF chains, heavy calibration",
                                  Ordinal::Moderate, "fixed Tx-Rx", Ordinal::Low};
          },
          [](const MrcFaaCaf&) {
            return OrdinalRatings{Ordinal::LowModerate, "few RF chains, passive CMs", Ordinal::Low,
                                  "modular CMs, localized calibration", Ordinal::High,
                                  "embodied, reconfigurable fabric", Ordinal::High};
          },
      },
      a.variant);
}

ArchMetrics metrics(const ArchSpec& a) {
  ArchMetrics m;
  m.name = name_of(a);
  m.virtual_elements = virtual_elements(a);
  m.virtual_elements_label = std::visit(
      overloaded{
          [&](const PhasedArray&) { return std::to_string(m.virtual_elements) + " (instantaneous)"; },
          [&](const TdmMimo& t) {
            return std::to_string(t.n_tx) + " x " + std::to_string(t.n_rx) + " = " +
                   std::to_string(m.virtual_elements) + " (TDM)";
          },
          [&](const MrcFaaCaf&) {
            return "KMP = " + std::to_string(m.virtual_elements) + " (waveform-orchestrated)";
          },
      },
      a.variant);
  m.pol_channels_per_element = 4;
  m.frame_multiplier = frame_multiplier(a);
  m.update_rate = update_rate(a);
  m.absolute_chirps_per_frame = absolute_chirps_per_frame(a);
  m.ratings = ordinal_ratings(a);
  return m;
}

std::vector<ArchMetrics> compare(const std::vector<ArchSpec>& specs) {
  if (specs.empty()) throw std::invalid_argument("compare needs at least one architecture");
  std::vector<ArchMetrics> rows;
  rows.reserve(specs.size());
  for (const auto& s : specs) rows.push_back(metrics(s));
  return rows;
}

std::vector<ArchSpec> case_study_specs() {
  return {{PhasedArray{64}, 2}, {TdmMimo{8, 8}, 2}, {MrcFaaCaf{2, 4, 8}, 2}};
}

namespace {

struct Row {
  std::string label;
  std::vector<std::string> cells;
};

std::vector<Row> table_rows(const std::vector<ArchMetrics>& table) {
  std::vector<Row> rows{{"Effective spatial virtual elements", {}},
                        {"Polarimetric channels per element", {}},
                        {"Frame-based acquisition overhead", {}},
                        {"World-model update rate", {}},
                        {"Absolute chirps per frame*", {}},
                        {"Energy consumption scaling", {}},
                        {"Hardware and calibration cost", {}},
                        {"Deployment flexibility", {}},
                        {"Suitability for persistent EM world modeling", {}}};
  for (const auto& m : table) {
    const auto& r = m.ratings;
    rows[0].cells.push_back(m.virtual_elements_label);
    rows[1].cells.push_back(std::to_string(m.pol_channels_per_element) + " (HH, HV, VH, VV)");
    rows[2].cells.push_back("x" + std::to_string(m.frame_multiplier));
    rows[3].cells.push_back(m.update_rate.str());
    rows[4].cells.push_back(std::to_string(m.absolute_chirps_per_frame));
    rows[5].cells.push_back(std::string(to_string(r.energy)) + " (" + r.energy_note + ")");
    rows[6].cells.push_back(std::string(to_string(r.hardware_calibration)) + " (" +
                            r.hardware_calibration_note + ")");
    rows[7].cells.push_back(std::string(to_string(r.deployment_flexibility)) + " (" +
                            r.deployment_flexibility_note + ")");
    rows[8].cells.push_back(std::string(to_string(r.persistence_suitability)));
  }
  return rows;
}

constexpr std::string_view kFootnotes =
    "T0: time to acquire a single-polarization reference frame of the given architecture.\n"
    "Update rates are normalized per architecture; equal absolute T0 across architectures is "
    "not implied.\n"
    "* One chirp per sensing state; every receiver captures each chirp; fabric chains run "
    "concurrently.\n";

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string render_text(const std::vector<ArchMetrics>& table) {
  const auto rows = table_rows(table);
  std::size_t label_w = std::string_view("Dimension").size();
  std::vector<std::size_t> col_w;
  for (const auto& m : table) col_w.push_back(m.name.size());
  for (const auto& r : rows) {
    label_w = std::max(label_w, r.label.size());
    for (std::size_t i = 0; i < r.cells.size(); ++i) col_w[i] = std::max(col_w[i], r.cells[i].size());
  }
  std::ostringstream os;
  auto line = [&](const std::string& label, const std::vector<std::string>& cells) {
    std::string text = label + std::string(label_w - label.size(), ' ');
    for (std::size_t i = 0; i < cells.size(); ++i)
      text += " | " + cells[i] + std::string(col_w[i] - cells[i].size(), ' ');
    while (!text.empty() && text.back() == ' ') text.pop_back();
    os << text << '\n';
  };
  std::vector<std::string> names;
  for (const auto& m : table) names.push_back(m.name);
  line("Dimension", names);
  std::string rule(label_w, '-');
  for (auto w : col_w) rule += "-+-" + std::string(w, '-');
  os << rule << '\n';
  for (const auto& r : rows) line(r.label, r.cells);
  os << '\n' << kFootnotes;
  return os.str();
}

std::string render_csv(const std::vector<ArchMetrics>& table) {
  std::ostringstream os;
  os << "architecture,virtual_elements,pol_channels_per_element,frame_multiplier,update_rate,"
        "absolute_chirps_per_frame,energy,hardware_calibration,deployment_flexibility,"
        "persistence_suitability\n";
  for (const auto& m : table) {
    os << csv_field(m.name) << ',' << m.virtual_elements << ',' << m.pol_channels_per_element << ','
       << m.frame_multiplier << ',' << m.update_rate.str() << ',' << m.absolute_chirps_per_frame
       << ',' << to_string(m.ratings.energy) << ',' << to_string(m.ratings.hardware_calibration)
       << ',' << to_string(m.ratings.deployment_flexibility) << ','
       << to_string(m.ratings.persistence_suitability) << '\n';
  }
  return os.str();
}

}  // namespace gensense::arch
