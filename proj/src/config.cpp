// SPDX-License-Identifier: Apache-2.0
#include <gensense/config.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace gensense {

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
  std::string msg = "invalid configuration";
  for (const auto& e : errors) msg += "\n  " + e;
  return msg;
}

/// Field reader that accumulates errors and rejects unknown keys.
class Reader {
 public:
  Reader(const nlohmann::json& obj, std::string path, std::vector<std::string>& errors)
      : obj_(obj), path_(std::move(path)), errors_(errors) {
    if (!obj_.is_object()) error("", "must be an object");
  }

  ~Reader() {
    if (!obj_.is_object()) return;
    for (const auto& [key, _] : obj_.items()) {
      if (!seen_.count(key)) error(key, "unknown field");
    }
  }

  Reader(const Reader&) = delete;
  Reader& operator=(const Reader&) = delete;

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void error(const std::string& key, const std::string& what) const {
    const std::string where = key.empty() ? path_ : field(key);
    errors_.push_back((where.empty() ? std::string("<root>") : where) + ": " + what);
  }

  const nlohmann::json* get(const std::string& key, bool required) {
    seen_.insert(key);
    if (!obj_.is_object()) return nullptr;
    const auto it = obj_.find(key);
    if (it == obj_.end()) {
      if (required) error(key, "missing required field");
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> number(const std::string& key, bool required = true) {
    const auto* v = get(key, required);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      error(key, "must be a number");
      return std::nullopt;
    }
    const double x = v->get<double>();
    if (!std::isfinite(x)) {
      error(key, "must be finite");
      return std::nullopt;
    }
    return x;
  }

  std::optional<double> positive(const std::string& key, bool required = true) {
    auto x = number(key, required);
    if (x && !(*x > 0.0)) {
      error(key, "must be > 0");
      return std::nullopt;
    }
    return x;
  }

  std::optional<long long> integer(const std::string& key, bool required = true) {
    const auto* v = get(key, required);
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) {
      error(key, "must be an integer");
      return std::nullopt;
    }
    return v->get<long long>();
  }

  std::optional<std::string> string(const std::string& key, bool required = true) {
    const auto* v = get(key, required);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      error(key, "must be a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<bool> boolean(const std::string& key, bool required = true) {
    const auto* v = get(key, required);
    if (!v) return std::nullopt;
    if (!v->is_boolean()) {
      error(key, "must be a boolean");
      return std::nullopt;
    }
    return v->get<bool>();
  }

  std::optional<Vec3d> vec3(const std::string& key, bool required = true) {
    const auto* v = get(key, required);
    if (!v) return std::nullopt;
    if (!v->is_array() || v->size() != 3 ||
        !std::all_of(v->begin(), v->end(), [](const auto& x) { return x.is_number(); })) {
      error(key, "must be an array of three numbers");
      return std::nullopt;
    }
    Vec3d out((*v)[0].get<double>(), (*v)[1].get<double>(), (*v)[2].get<double>());
    if (!out.allFinite()) {
      error(key, "must be finite");
      return std::nullopt;
    }
    return out;
  }

  std::optional<std::complex<double>> complex(const std::string& key) {
    const auto* v = get(key, true);
    if (!v) return std::nullopt;
    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
      error(key, "must be [re, im]");
      return std::nullopt;
    }
    return std::complex<double>((*v)[0].get<double>(), (*v)[1].get<double>());
  }

 private:
  const nlohmann::json& obj_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

nlohmann::json empty_object() { return nlohmann::json::object(); }

const nlohmann::json& section(const nlohmann::json& doc, const char* key) {
  static const nlohmann::json empty = empty_object();
  const auto it = doc.find(key);
  return it == doc.end() ? empty : *it;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

AcquisitionSetup<double> ScenarioConfig::acquisition_setup() const {
  AcquisitionSetup<double> setup;
  setup.geometry = geometry;
  setup.plan = partition_band(geometry.config);
  setup.sample_rate_hz = sample_rate_hz;
  setup.pad_factor = pad_factor;
  setup.c_mps = c_mps;
  setup.noise = noise;
  return setup;
}

double ScenarioConfig::range_support_m() const {
  const auto& f = fabric();
  const long long n = std::llround(f.chirp_duration_s * sample_rate_hz);
  const double nfft = double(n) * pad_factor;
  const double slope = f.chirp_bandwidth_hz / f.chirp_duration_s;
  const double bin = c_mps * sample_rate_hz / (2.0 * slope * nfft);
  return (nfft - 1.0) * bin;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string ScenarioConfig::hash() const { return fnv1a_hex(canonical.dump()); }

ScenarioConfig parse_config(const nlohmann::json& doc) {
  std::vector<std::string> errors;
  ScenarioConfig cfg;
  if (!doc.is_object()) throw ConfigError({"<root>: must be an object"});

  {
    Reader root(doc, "", errors);
    cfg.name = root.string("name", false).value_or("unnamed");
    if (auto s = root.integer("seed", false)) {
      if (*s < 0) root.error("seed", "must be >= 0");
      else cfg.seed = static_cast<std::uint64_t>(*s);
    }
    root.get("constants", false);
    root.get("fabric", true);
    root.get("chirp", true);
    root.get("noise", false);
    root.get("grid", true);
    root.get("scene", true);
  }

  {
    Reader r(section(doc, "constants"), "constants", errors);
    cfg.c_mps = r.positive("c_mps", false).value_or(kSpeedOfLight);
  }

  bool fabric_ok = false;
  {
    const auto& fj = section(doc, "fabric");
    Reader r(fj, "fabric", errors);
    FabricConfig& f = cfg.geometry.config;
    const auto before = errors.size();
    auto count = [&](const char* key) {
      auto v = r.integer(key);
      if (v && *v < 1) r.error(key, "must be >= 1");
      return v ? static_cast<int>(*v) : 1;
    };
    f.k_chains = count("k_chains");
    f.m_modules = count("m_modules");
    f.p_steps = count("p_steps");
    if (auto n = r.integer("n_vir", false)) f.declared_n_vir = static_cast<int>(*n);
    f.band_lo_hz = r.positive("band_lo_hz").value_or(0.0);
    f.band_hi_hz = r.positive("band_hi_hz").value_or(0.0);
    f.chirp_bandwidth_hz = r.positive("chirp_bandwidth_hz").value_or(0.0);
    f.chirp_duration_s = r.positive("chirp_duration_s").value_or(0.0);
    if (errors.size() == before) {
      for (const auto& e : f.check()) errors.push_back("fabric." + e);
    }
    fabric_ok = errors.size() == before;

    if (const auto* pols = r.get("pol_states", false)) {
      cfg.pol_states.clear();
      if (!pols->is_array() || pols->empty()) {
        r.error("pol_states", "must be a non-empty array of \"H\"/\"V\"");
      } else {
        for (const auto& p : *pols) {
          try {
            cfg.pol_states.push_back(pol_from_string(p.is_string() ? p.get<std::string>() : ""));
          } catch (const std::invalid_argument&) {
            r.error("pol_states", "entries must be \"H\" or \"V\"");
            break;
          }
        }
      }
    }

    Reader g(section(fj, "geometry"), "fabric.geometry", errors);
    r.get("geometry", true);
    const auto origin = g.vec3("origin", false);
    const auto center = g.vec3("center", false);
    const Vec3d direction = g.vec3("direction", false).value_or(Vec3d::UnitX());
    if (!(direction.norm() > 0.0)) g.error("direction", "must be non-zero");
    double spacing = 0.0;
    if (const auto* sp = g.get("spacing", true)) {
      if (sp->is_string() && sp->get<std::string>() == "half-wavelength") {
        if (fabric_ok) spacing = 0.5 * wavelength(f.center_hz(), cfg.c_mps);
      } else if (sp->is_number() && sp->get<double>() > 0.0) {
        spacing = sp->get<double>();
      } else {
        g.error("spacing", "must be a positive number or \"half-wavelength\"");
      }
    }
    if (origin && center) g.error("center", "give either origin or center, not both");
    if (direction.norm() > 0.0) {
      if (center && fabric_ok)
        cfg.geometry.aperture = centered_aperture(*center, direction, spacing, f.n_vir());
      else
        cfg.geometry.aperture = {origin.value_or(Vec3d::Zero()), direction.normalized(), spacing};
    }
  }

  {
    Reader r(section(doc, "chirp"), "chirp", errors);
    cfg.sample_rate_hz = r.positive("sample_rate_hz").value_or(0.0);
    if (auto pad = r.integer("pad_factor", false)) {
      if (*pad < 1) r.error("pad_factor", "must be >= 1");
      else cfg.pad_factor = static_cast<int>(*pad);
    }
  }

  {
    Reader r(section(doc, "noise"), "noise", errors);
    const auto kind = r.string("kind", false).value_or("none");
    if (kind == "none") cfg.noise.kind = NoiseKind::None;
    else if (kind == "complex_gaussian") cfg.noise.kind = NoiseKind::ComplexGaussian;
    else r.error("kind", "must be \"none\" or \"complex_gaussian\"");
    cfg.noise.snr_db = r.number("snr_db", cfg.noise.kind != NoiseKind::None).value_or(0.0);
    cfg.noise.seed = cfg.seed;
  }

  {
    Reader r(section(doc, "grid"), "grid", errors);
    auto& g = cfg.grid;
    g.x_min = r.number("x_min").value_or(0.0);
    g.x_max = r.number("x_max").value_or(0.0);
    g.x_step = r.positive("x_step").value_or(1.0);
    g.z_min = r.number("z_min").value_or(0.0);
    g.z_max = r.number("z_max").value_or(0.0);
    g.z_step = r.positive("z_step").value_or(1.0);
    g.y = r.number("y", false).value_or(0.0);
    for (const auto& e : g.check()) errors.push_back("grid." + e);
  }

  {
    const auto& sj = section(doc, "scene");
    Reader r(sj, "scene", errors);
    cfg.scene.name = r.string("name", false).value_or(cfg.name);
    cfg.scene.reciprocal = r.boolean("reciprocal", false).value_or(false);
    cfg.scene.spreading_loss = r.boolean("spreading_loss", false).value_or(false);
    if (const auto* list = r.get("scatterers", true)) {
      if (!list->is_array()) {
        r.error("scatterers", "must be an array");
      } else {
        for (std::size_t i = 0; i < list->size(); ++i) {
          const std::string path = "scene.scatterers[" + std::to_string(i) + "]";
          Reader sr((*list)[i], path, errors);
          PointScattererd sc;
          sc.position = sr.vec3("position").value_or(Vec3d::Zero());
          if (const auto* sm = sr.get("scattering", true)) {
            Reader mr(*sm, path + ".scattering", errors);
            sc.scattering(0, 0) = mr.complex("hh").value_or(0.0);
            sc.scattering(0, 1) = mr.complex("hv").value_or(0.0);
            sc.scattering(1, 0) = mr.complex("vh").value_or(0.0);
            sc.scattering(1, 1) = mr.complex("vv").value_or(0.0);
          }
          cfg.scene.scatterers.push_back(sc);
        }
      }
    }
    if (auto problem = check_scene(cfg.scene)) errors.push_back("scene." + *problem);
  }

  // Cross-field consistency needs a structurally valid config.
  if (errors.empty()) {
    const auto& f = cfg.fabric();
    if (std::llround(f.chirp_duration_s * cfg.sample_rate_hz) < 2)
      errors.emplace_back("chirp.sample_rate_hz: chirp must span at least two samples");
    const double support = cfg.range_support_m();
    std::vector<Vec3d> elements;
    for (int v = 0; v < f.n_vir(); ++v) elements.push_back(cfg.geometry.element_position(v));
    if (max_grid_range(elements, cfg.grid) > support)
      errors.push_back("grid: grid exceeds range support (" + std::to_string(support) + " m)");
    for (std::size_t i = 0; i < cfg.scene.scatterers.size(); ++i) {
      for (const auto& e : elements) {
        const double r = (cfg.scene.scatterers[i].position - e).norm();
        if (r > support || r == 0.0) {
          errors.push_back("scene.scatterers[" + std::to_string(i) +
                           "].position: outside range support or coincident with an element");
          break;
        }
      }
    }
  }

  if (!errors.empty()) throw ConfigError(std::move(errors));
  cfg.canonical = doc;
  cfg.canonical["seed"] = cfg.seed;
  return cfg;
}

ScenarioConfig parse_config_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({std::string("parse error: ") + e.what()});
  }
  return parse_config(doc);
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file " + path.string()});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

ScenarioConfig with_seed(const ScenarioConfig& cfg, std::uint64_t seed) {
  ScenarioConfig out = cfg;
  out.seed = seed;
  out.noise.seed = seed;
  out.canonical["seed"] = seed;
  return out;
}

const std::string& case_study_json() {
  static const std::string text = R"({
  "name": "case_study_v",
  "seed": 1,
  "constants": { "c_mps": 3.0e8 },
  "fabric": {
    "k_chains": 2,
    "m_modules": 4,
    "p_steps": 8,
    "n_vir": 64,
    "band_lo_hz": 60.0e9,
    "band_hi_hz": 81.0e9,
    "chirp_bandwidth_hz": 300.0e6,
    "chirp_duration_s": 100.0e-6,
    "pol_states": ["H", "V"],
    "geometry": { "center": [0.0, 0.0, 0.0], "direction": [1.0, 0.0, 0.0], "spacing": "half-wavelength" }
  },
  "chirp": { "sample_rate_hz": 2.0e6, "pad_factor": 4 },
  "noise": { "kind": "none", "snr_db": 20.0 },
  "grid": { "x_min": -0.05, "x_max": 0.15, "x_step": 0.002, "z_min": 1.95, "z_max": 2.05, "z_step": 0.001 },
  "scene": {
    "name": "single unit scatterer",
    "reciprocal": true,
    "spreading_loss": false,
    "scatterers": [
      { "position": [0.05, 0.0, 2.0],
        "scattering": { "hh": [1.0, 0.0], "hv": [0.0, 0.0], "vh": [0.0, 0.0], "vv": [1.0, 0.0] } }
    ]
  }
}
)";
  return text;
}

ScenarioConfig case_study_config() { return parse_config_text(case_study_json()); }

}  // namespace gensense
