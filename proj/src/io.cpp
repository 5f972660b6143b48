#include "pcfqfc/io.hpp"

#include "pcfqfc/error.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace pcfqfc::io {

using nlohmann::ordered_json;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

double round9(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(format_number(x).c_str(), nullptr);
}

double parse_number(std::string_view text, const std::string& what) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size())
    throw ConfigError(what + ": not a number: '" + std::string(text) + "'");
  return v;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

// JSON numbers are rounded so the file shows at most nine digits.
ordered_json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round9(x);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto ws = " \t\r";
  s.erase(0, s.find_first_not_of(ws));
  s.erase(s.find_last_not_of(ws) + 1);
  return s;
}

} // namespace

void write_tuning_csv(std::ostream& out, const TuningCurve& curve) {
  out << "lambda_q_nm,lambda_t_nm,delta_beta_per_m,eta\n";
  for (const auto& r : curve.rows)
    out << format_number(r.lambda_q_nm) << ',' << format_number(r.lambda_t_nm) << ','
        << opt(r.delta_beta_per_m) << ',' << opt(r.eta) << '\n';
}

void write_power_scan_csv(std::ostream& out, const std::vector<PowerScanPoint>& scan) {
  out << "P_p_W,eta\n";
  for (const auto& p : scan)
    out << format_number(p.power_p_W) << ',' << format_number(p.eta) << '\n';
}

void write_observations_csv(std::ostream& out, const ObservationSet& obs) {
  out << (obs.weighted() ? "lambda_q_nm,depletion,sigma\n" : "lambda_q_nm,depletion\n");
  for (const auto& r : obs.rows()) {
    out << format_number(r.lambda_q_nm) << ',' << format_number(r.depletion);
    if (obs.weighted()) out << ',' << format_number(r.sigma);
    out << '\n';
  }
}

void write_tallies_csv(std::ostream& out, const TallySet& t) {
  out << "N_pulses,N_h,N_t,N_th,N_1,N_2,N_12,N_1h,N_2h,N_12h\n"
      << t.n_pulses << ',' << t.n_h << ',' << t.n_t << ',' << t.n_th << ',' << t.n_1 << ','
      << t.n_2 << ',' << t.n_12 << ',' << t.n_1h << ',' << t.n_2h << ',' << t.n_12h << '\n';
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
  out << "t_ns,counts\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i)
    out << format_number(h.bin_center(i) * 1e9) << ',' << h.counts[i] << '\n';
}

ObservationSet read_observations_csv(std::istream& in, const std::string& origin,
                                     const ScanContext& context) {
  std::string line;
  std::size_t row = 0;
  auto where = [&](std::size_t r, std::size_t c) {
    return origin + ":" + std::to_string(r) + ": column " + std::to_string(c);
  };
  // Header: first non-empty line.
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++row;
    if (!trim(line).empty()) {
      header = split_csv(line);
      break;
    }
  }
  for (auto& h : header) h = trim(h);
  const bool has_sigma = header.size() == 3;
  if (!(header.size() == 2 || has_sigma) || header[0] != "lambda_q_nm" ||
      header[1] != "depletion" || (has_sigma && header[2] != "sigma"))
    throw ConfigError(origin + ":" + std::to_string(row) +
                      ": expected header 'lambda_q_nm,depletion[,sigma]'");
  std::vector<Observation> rows;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size())
      throw ConfigError(origin + ":" + std::to_string(row) + ": expected " +
                        std::to_string(header.size()) + " columns, found " +
                        std::to_string(cells.size()));
    Observation o{};
    o.lambda_q_nm = parse_number(cells[0], where(row, 1));
    o.depletion = parse_number(cells[1], where(row, 2));
    o.sigma = has_sigma ? parse_number(cells[2], where(row, 3)) : 1.0;
    if (!std::isfinite(o.lambda_q_nm) || !std::isfinite(o.depletion) || !std::isfinite(o.sigma))
      throw ConfigError(origin + ":" + std::to_string(row) + ": non-finite value");
    rows.push_back(o);
  }
  try {
    return ObservationSet(std::move(rows), context, has_sigma);
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

ordered_json to_json(const FitResult& r) {
  ordered_json j;
  j["pitch_um"] = num(r.params.pitch_um);
  j["hole_ratio"] = num(r.params.hole_ratio);
  j["scale"] = num(r.params.scale);
  j["uncertainty"] = {{"pitch_um", num(r.uncertainty[0])},
                      {"hole_ratio", num(r.uncertainty[1])},
                      {"scale", num(r.uncertainty[2])}};
  j["residual_sum"] = num(r.residual_sum);
  j["iterations"] = r.iterations;
  j["total_iterations"] = r.total_iterations;
  j["winning_restart"] = r.winning_restart;
  j["converged"] = r.converged;
  return j;
}

ordered_json to_json(const EfficiencyChain& c) {
  return {{"eta_in", num(c.eta_in)},
          {"eta_internal", num(c.eta_internal)},
          {"eta_out", num(c.eta_out)},
          {"total", num(c.total())}};
}

ordered_json to_json(const TallySet& t) {
  return {{"N_pulses", t.n_pulses}, {"N_h", t.n_h},   {"N_t", t.n_t},   {"N_th", t.n_th},
          {"N_1", t.n_1},           {"N_2", t.n_2},   {"N_12", t.n_12}, {"N_1h", t.n_1h},
          {"N_2h", t.n_2h},         {"N_12h", t.n_12h}};
}

ordered_json to_json(const ProbabilityTable& p) {
  return {{"P_h", num(p.p_h)},   {"P_t", num(p.p_t)},   {"P_th", num(p.p_th)},
          {"P_1", num(p.p_1)},   {"P_2", num(p.p_2)},   {"P_12", num(p.p_12)},
          {"P_1h", num(p.p_1h)}, {"P_2h", num(p.p_2h)}, {"P_12h", num(p.p_12h)}};
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  if (f.bad()) throw IoError("read failed on '" + path + "'");
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) fs::create_directories(target.parent_path(), ec);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write '" + tmp.string() + "'");
    f << content;
    if (!f.flush()) throw IoError("write failed on '" + tmp.string() + "'");
  }
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot move output into '" + path + "': " + ec.message());
}

} // namespace pcfqfc::io
