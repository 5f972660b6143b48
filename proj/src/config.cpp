#include "pcfqfc/config.hpp"

#include "pcfqfc/error.hpp"
#include "pcfqfc/io.hpp"

#include <json.hpp>

#include <filesystem>
#include <set>

namespace pcfqfc {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Read-once view of a JSON object that remembers which keys were used.
class Section {
public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) throw ConfigError(where(key) + ": expected a number");
    return v.get<double>();
  }

  std::optional<double> maybe_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  double number_or(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  std::uint64_t unsigned_int(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number_unsigned()) throw ConfigError(where(key) + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  int integer_or(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_number_integer()) throw ConfigError(where(key) + ": expected an integer");
    return v.get<int>();
  }

  std::string string(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::array<double, 2> pair(const std::string& key) {
    const json& v = at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw ConfigError(where(key) + ": expected [low, high]");
    std::array<double, 2> out{v[0].get<double>(), v[1].get<double>()};
    if (!(out[0] < out[1])) throw ConfigError(where(key) + ": low must be below high");
    return out;
  }

  Section child(const std::string& key) { return Section(at(key), where(key)); }

  void finish() const {
    for (const auto& [k, _] : j_.items())
      if (!used_.count(k)) throw ConfigError(where(k) + ": unknown key");
  }

  std::string where(const std::string& key) const { return path_ + "." + key; }

private:
  const json& at(const std::string& key) {
    if (!has(key)) throw ConfigError(where(key) + ": required key missing");
    used_.insert(key);
    return j_.at(key);
  }

  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

FiberGeometry read_geometry(Section s) {
  FiberGeometry g;
  g.pitch_um = s.number("pitch_um");
  g.hole_ratio = s.number("hole_ratio");
  g.length_m = s.number("length_m");
  g.gamma_per_W_km = s.number("gamma_per_W_km");
  s.finish();
  require(g.pitch_um > 0.0, s.where("pitch_um") + ": must be positive");
  require(g.hole_ratio > 0.0 && g.hole_ratio < 1.0, s.where("hole_ratio") + ": must lie in (0, 1)");
  require(g.length_m > 0.0, s.where("length_m") + ": must be positive");
  require(g.gamma_per_W_km >= 0.0, s.where("gamma_per_W_km") + ": must be >= 0");
  return g;
}

ScanSettings read_scan(Section s) {
  ScanSettings c;
  c.lambda_s_nm = s.number_or("lambda_s_nm", c.lambda_s_nm);
  c.lambda_p_nm = s.number_or("lambda_p_nm", c.lambda_p_nm);
  c.lambda_q_min_nm = s.number_or("lambda_q_min_nm", c.lambda_q_min_nm);
  c.lambda_q_max_nm = s.number_or("lambda_q_max_nm", c.lambda_q_max_nm);
  c.lambda_q_step_nm = s.number_or("lambda_q_step_nm", c.lambda_q_step_nm);
  c.bin_width_GHz = s.number_or("bin_width_GHz", c.bin_width_GHz);
  if (s.has("exclusion_q_nm")) c.exclusion_q_nm = s.pair("exclusion_q_nm");
  s.finish();
  require(c.lambda_s_nm > 0 && c.lambda_p_nm > 0 && c.lambda_q_min_nm > 0,
          s.where("*") + ": wavelengths must be positive");
  require(c.lambda_q_min_nm <= c.lambda_q_max_nm, s.where("lambda_q_max_nm") + ": below minimum");
  require(c.lambda_q_step_nm > 0, s.where("lambda_q_step_nm") + ": must be positive");
  require(c.bin_width_GHz > 0, s.where("bin_width_GHz") + ": must be positive");
  return c;
}

PumpConfig read_pump(Section s) {
  PumpConfig p{};
  p.pulse_energy_J = s.number("energy_nJ") * 1e-9;
  p.duration_fwhm_s = s.number("duration_ps") * 1e-12;
  p.rep_rate_Hz = s.number("rep_rate_MHz") * 1e6;
  p.bandwidth_nm = s.number("bandwidth_nm");
  s.finish();
  require(p.pulse_energy_J > 0 && p.duration_fwhm_s > 0 && p.rep_rate_Hz > 0 && p.bandwidth_nm > 0,
          s.where("*") + ": pump fields must be positive");
  return p;
}

FitSettings read_fit(Section s) {
  FitSettings f;
  if (s.has("initial")) {
    Section i = s.child("initial");
    f.initial = {i.number("pitch_um"), i.number("hole_ratio"), i.number("scale")};
    i.finish();
  }
  if (s.has("bounds")) {
    Section b = s.child("bounds");
    if (b.has("pitch_um")) f.bounds.pitch_um = b.pair("pitch_um");
    if (b.has("hole_ratio")) f.bounds.hole_ratio = b.pair("hole_ratio");
    if (b.has("scale")) f.bounds.scale = b.pair("scale");
    b.finish();
  }
  if (s.has("lambda_s_nm") || s.has("lambda_p_nm"))
    throw ConfigError(s.where("*") + ": scan wavelengths belong in the scan section");
  f.options.restarts = s.integer_or("restarts", f.options.restarts);
  if (s.has("seed")) f.options.seed = s.unsigned_int("seed");
  s.finish();
  require(f.options.restarts >= 1, s.where("restarts") + ": must be at least 1");
  require(f.bounds.contains(f.initial), s.where("initial") + ": outside the bounds");
  return f;
}

ExperimentSettings read_experiment(Section s) {
  ExperimentSettings e;
  ExperimentModel& m = e.model;
  {
    Section src = s.child("source");
    const bool pinned = src.has("mu"), solved = src.has("mu_from_heralded_g2");
    require(pinned != solved, src.where("mu") + ": give exactly one of mu, mu_from_heralded_g2");
    if (pinned) m.source.mean_pairs_mu = src.number("mu");
    else e.mu_from_heralded_g2 = src.number("mu_from_heralded_g2");
    m.source.eta_herald = src.number("eta_herald");
    if (src.has("statistics")) {
      const auto st = src.string("statistics");
      require(st == "thermal" || st == "poisson",
              src.where("statistics") + ": expected 'thermal' or 'poisson'");
      m.source.statistics = st == "thermal" ? PairStatistics::Thermal : PairStatistics::Poisson;
    }
    m.source.herald_dark_prob = src.number_or("herald_dark_prob", 0.0);
    src.finish();
  }
  {
    Section ch = s.child("channel");
    const auto mode = ch.string("mode");
    require(mode == "pass-through" || mode == "converted",
            ch.where("mode") + ": expected 'pass-through' or 'converted'");
    m.channel.mode = mode == "converted" ? ChannelMode::Converted : ChannelMode::PassThrough;
    m.channel.eta_in = ch.number("eta_in");
    m.channel.eta_conv = m.channel.mode == ChannelMode::Converted ? ch.number("eta_conv")
                                                                  : ch.number_or("eta_conv", 1.0);
    m.channel.eta_out = ch.number("eta_out");
    m.channel.eta_det = ch.number("eta_det");
    ch.finish();
  }
  {
    Section n = s.child("noise");
    const bool pinned = n.has("nu"), solved = n.has("nu_from_rca");
    require(pinned != solved, n.where("nu") + ": give exactly one of nu, nu_from_rca");
    if (pinned) m.noise.mean_per_pulse_ref = n.number("nu");
    else e.nu_from_rca = n.number("nu_from_rca");
    m.noise.reference_energy_J = n.number_or("reference_energy_nJ", 6.0) * 1e-9;
    m.noise.pump_energy_J = n.number_or("pump_energy_nJ", 6.0) * 1e-9;
    if (n.has("slope_per_nJ")) m.noise.slope_per_J = n.number("slope_per_nJ") * 1e9;
    m.noise.lifetime_s = n.number_or("lifetime_ns", 10.0) * 1e-9;
    n.finish();
  }
  if (s.has("timing")) {
    Section t = s.child("timing");
    m.timing.pulse_period_s = 1.0 / (t.number_or("rep_rate_MHz", 4.71) * 1e6);
    m.timing.window_s = t.number_or("window_ns", 1.0) * 1e-9;
    m.timing.window_open_s = t.number_or("window_open_ns", -0.3) * 1e-9;
    m.timing.jitter_s = t.number_or("jitter_ps", 100.0) * 1e-12;
    t.finish();
  }
  if (s.has("detector")) {
    Section d = s.child("detector");
    m.detector.split_ratio = d.number_or("split_ratio", 0.5);
    m.detector.dark_rate_Hz = d.number_or("dark_rate_Hz", 0.0);
    d.finish();
  }
  s.finish();
  try {
    m.validate();
  } catch (const DomainError& err) {
    throw ConfigError(s.where("*") + ": " + err.what());
  }
  if (e.mu_from_heralded_g2)
    require(*e.mu_from_heralded_g2 > 0.0, s.where("source.mu_from_heralded_g2") + ": must be positive");
  if (e.nu_from_rca) require(*e.nu_from_rca > 1.0, s.where("noise.nu_from_rca") + ": must exceed 1");
  return e;
}

std::string resolve_path(const std::string& p, const std::string& base_dir,
                         const std::string& where) {
  fs::path path(p);
  if (path.is_relative()) path = fs::path(base_dir) / path;
  if (!fs::exists(path)) throw ConfigError(where + ": file not found: " + path.string());
  return path.lexically_normal().string();
}

} // namespace

const FiberGeometry& RunConfig::require_geometry() const {
  if (!geometry) throw ConfigError("config has no geometry section");
  return *geometry;
}

const ExperimentSettings& RunConfig::require_experiment() const {
  if (!experiment) throw ConfigError("config has no experiment section");
  return *experiment;
}

RunConfig parse_config(const std::string& text, const std::string& origin,
                       const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": malformed JSON: " + e.what());
  }
  RunConfig cfg;
  Section root(doc, origin);
  const json& version = doc.contains("schema_version") ? doc["schema_version"] : json();
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion)
    throw ConfigError(origin + ".schema_version: expected " + std::to_string(kSchemaVersion));
  (void)root.integer_or("schema_version", 0);

  if (root.has("data")) {
    Section d = root.child("data");
    if (d.has("sellmeier"))
      cfg.sellmeier_path = resolve_path(d.string("sellmeier"), base_dir, d.where("sellmeier"));
    if (d.has("coefficients"))
      cfg.coefficients_path =
          resolve_path(d.string("coefficients"), base_dir, d.where("coefficients"));
    d.finish();
  }
  if (root.has("geometry")) cfg.geometry = read_geometry(root.child("geometry"));
  if (root.has("scan")) cfg.scan = read_scan(root.child("scan"));
  if (root.has("pumps")) {
    Section p = root.child("pumps");
    cfg.pumps = PumpSettings{read_pump(p.child("p")), read_pump(p.child("q"))};
    p.finish();
  }
  if (root.has("fit")) cfg.fit = read_fit(root.child("fit"));
  if (root.has("experiment")) cfg.experiment = read_experiment(root.child("experiment"));
  if (root.has("output_dir")) cfg.output_dir = root.string("output_dir");
  if (root.has("seed")) cfg.seed = root.unsigned_int("seed");
  root.finish();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  const std::string text = io::read_text_file(path);
  const auto base = fs::path(path).parent_path();
  RunConfig cfg = parse_config(text, path, base.empty() ? "." : base.string());
  cfg.source_path = path;
  return cfg;
}

ResolvedExperiment resolve_experiment(const ExperimentSettings& settings) {
  ResolvedExperiment out{settings.model};
  if (settings.mu_from_heralded_g2) {
    ExperimentModel probe = settings.model;
    if (settings.nu_from_rca) probe.noise.mean_per_pulse_ref = 0.0;
    out.model.source.mean_pairs_mu = solve_mu_for_heralded_g2(probe, *settings.mu_from_heralded_g2);
    out.mu_solved = true;
  }
  if (settings.nu_from_rca) {
    out.model.noise.mean_per_pulse_ref = solve_noise_for_rca(out.model, *settings.nu_from_rca);
    out.nu_solved = true;
  }
  return out;
}

} // namespace pcfqfc
