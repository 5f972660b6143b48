#include "pcfqfc/counting.hpp"

#include "pcfqfc/error.hpp"
#include "pcfqfc/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <random>
#include <sstream>

namespace pcfqfc {

namespace {

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

// Standard normal CDF.
double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// CDF of exponential(tau) delay plus Gaussian(sigma) jitter.
double exgauss_cdf(double t, double tau, double sigma) {
  if (sigma <= 0.0) return t <= 0.0 ? 0.0 : -std::expm1(-t / tau);
  const double z = t / sigma;
  const double r = sigma / tau;
  // exp(-t/tau + r^2/2) * Phi(z - r), folded into one erfc to avoid overflow.
  const double log_tail = -t / tau + 0.5 * r * r;
  const double e = std::erfc(-(z - r) / std::sqrt(2.0));
  const double tail = e > 0.0 ? std::exp(log_tail + std::log(0.5 * e)) : 0.0;
  return phi(z) - tail;
}

double dark_mean(const ExperimentModel& m) {
  return m.detector.dark_rate_Hz * m.timing.window_s;
}

double pair_zero_prob(const SourceModel& s) {
  return s.statistics == PairStatistics::Thermal ? 1.0 / (1.0 + s.mean_pairs_mu)
                                                 : std::exp(-s.mean_pairs_mu);
}

} // namespace

double ChannelModel::detection_probability() const {
  const double conv = mode == ChannelMode::Converted ? eta_conv : 1.0;
  return eta_in * conv * eta_out * eta_det;
}

double NoiseModel::mean_per_pulse() const {
  const double slope = slope_per_J ? *slope_per_J
                                   : mean_per_pulse_ref / reference_energy_J;
  const double nu = mean_per_pulse_ref + slope * (pump_energy_J - reference_energy_J);
  if (!(nu >= 0.0))
    throw DomainError("noise mean is negative at the configured pump energy");
  return nu;
}

void ExperimentModel::validate() const {
  std::vector<std::string> bad;
  if (!(source.mean_pairs_mu >= 0.0 && std::isfinite(source.mean_pairs_mu)))
    bad.push_back("source.mu must be finite and >= 0");
  if (!in_unit(source.eta_herald)) bad.push_back("source.eta_herald not in [0,1]");
  if (!(source.herald_dark_prob >= 0.0 && source.herald_dark_prob < 1.0))
    bad.push_back("source.herald_dark_prob not in [0,1)");
  if (!in_unit(channel.eta_in)) bad.push_back("channel.eta_in not in [0,1]");
  if (!in_unit(channel.eta_conv)) bad.push_back("channel.eta_conv not in [0,1]");
  if (!in_unit(channel.eta_out)) bad.push_back("channel.eta_out not in [0,1]");
  if (!in_unit(channel.eta_det)) bad.push_back("channel.eta_det not in [0,1]");
  if (!(noise.mean_per_pulse_ref >= 0.0)) bad.push_back("noise.nu must be >= 0");
  if (!(noise.lifetime_s > 0.0)) bad.push_back("noise.lifetime must be > 0");
  if (!(noise.reference_energy_J > 0.0 && noise.pump_energy_J >= 0.0))
    bad.push_back("noise pump energies must be positive");
  if (!(timing.window_s > 0.0)) bad.push_back("timing.window must be > 0");
  if (!(timing.pulse_period_s > timing.window_s))
    bad.push_back("timing.window must be shorter than the pulse period");
  if (!(timing.jitter_s >= 0.0)) bad.push_back("timing.jitter must be >= 0");
  if (!std::isfinite(timing.window_open_s)) bad.push_back("timing.window_open not finite");
  if (!in_unit(detector.split_ratio)) bad.push_back("detector.split not in [0,1]");
  if (!(detector.dark_rate_Hz >= 0.0)) bad.push_back("detector.dark_rate must be >= 0");
  if (bad.empty()) {
    try {
      (void)noise.mean_per_pulse();
    } catch (const DomainError& e) {
      bad.emplace_back(e.what());
    }
  }
  if (!bad.empty()) {
    std::string msg = "invalid experiment model:";
    for (const auto& b : bad) msg += "\n  " + b;
    throw DomainError(msg);
  }
}

TallySet& TallySet::operator+=(const TallySet& o) {
  n_pulses += o.n_pulses;
  n_h += o.n_h;
  n_t += o.n_t;
  n_th += o.n_th;
  n_1 += o.n_1;
  n_2 += o.n_2;
  n_12 += o.n_12;
  n_1h += o.n_1h;
  n_2h += o.n_2h;
  n_12h += o.n_12h;
  return *this;
}

std::string TallySet::check() const {
  std::ostringstream err;
  auto need = [&](bool ok, const char* what) {
    if (!ok) err << what << "; ";
  };
  need(n_h <= n_pulses && n_t <= n_pulses, "singles exceed pulses");
  need(n_th <= std::min(n_h, n_t), "N_th exceeds N_h or N_t");
  need(n_1 <= n_t && n_2 <= n_t, "element singles exceed N_t");
  need(n_t <= n_1 + n_2, "N_t exceeds N_1 + N_2");
  need(n_12 <= std::min(n_1, n_2), "N_12 exceeds element singles");
  need(n_1h <= std::min(n_1, n_th) && n_2h <= std::min(n_2, n_th),
       "heralded element counts inconsistent");
  need(n_12h <= std::min(n_1h, n_2h) && n_12h <= n_12, "N_12h exceeds N_1h or N_2h");
  return err.str();
}

double window_acceptance(double lifetime_s, double window_s) {
  if (!(lifetime_s > 0.0) || !(window_s > 0.0))
    throw DomainError("lifetime and window must be positive");
  return -std::expm1(-window_s / lifetime_s);
}

double prompt_in_window(const TimingModel& t) {
  const double a = t.window_open_s, b = t.window_open_s + t.window_s;
  if (t.jitter_s <= 0.0) return (a <= 0.0 && 0.0 < b) ? 1.0 : 0.0;
  return phi(b / t.jitter_s) - phi(a / t.jitter_s);
}

double noise_in_window(double lifetime_s, const TimingModel& t) {
  if (!(lifetime_s > 0.0)) throw DomainError("lifetime must be positive");
  const double a = t.window_open_s, b = t.window_open_s + t.window_s;
  return exgauss_cdf(b, lifetime_s, t.jitter_s) - exgauss_cdf(a, lifetime_s, t.jitter_s);
}

ProbabilityTable exact_probabilities(const ExperimentModel& model, int cutoff) {
  model.validate();
  const SourceModel& s = model.source;
  const double mu = s.mean_pairs_mu;

  // Pair-number weights and the mass they leave out.
  std::vector<double> w(static_cast<std::size_t>(cutoff) + 1);
  double tail;
  if (s.statistics == PairStatistics::Thermal) {
    const double x = mu / (1.0 + mu);
    for (int n = 0; n <= cutoff; ++n) w[n] = std::pow(x, n) / (1.0 + mu);
    tail = std::pow(x, cutoff + 1);
  } else {
    double p = std::exp(-mu);
    for (int n = 0; n <= cutoff; ++n) {
      w[n] = p;
      p *= mu / (n + 1);
    }
    tail = 0.0;
    for (int n = cutoff + 1; p > 0.0 && n < cutoff + 1000; ++n) {
      tail += p;
      p *= mu / (n + 1);
    }
  }
  if (!(tail < 1e-12)) {
    std::ostringstream msg;
    msg << "pair-number cutoff " << cutoff << " leaves tail " << tail
        << " >= 1e-12 at mu = " << mu << "; use a larger cutoff";
    throw ConvergenceError(msg.str());
  }

  const double r = model.detector.split_ratio;
  const double es = model.channel.detection_probability() * prompt_in_window(model.timing);
  const double nu_w = model.noise.mean_per_pulse() *
                      noise_in_window(model.noise.lifetime_s, model.timing);
  const double d = dark_mean(model);
  const double lam1 = r * nu_w + d;
  const double lam2 = (1.0 - r) * nu_w + d;
  const double eh = s.eta_herald;
  const double dh = s.herald_dark_prob;

  // Expectations over n of no-click products.
  double no1 = 0, no2 = 0, none = 0, noh = 0, noh1 = 0, noh2 = 0, nohnone = 0;
  for (int n = 0; n <= cutoff; ++n) {
    const double q1 = std::pow(1.0 - r * es, n) * std::exp(-lam1);
    const double q2 = std::pow(1.0 - (1.0 - r) * es, n) * std::exp(-lam2);
    const double q0 = std::pow(1.0 - es, n) * std::exp(-lam1 - lam2);
    const double qh = std::pow(1.0 - eh, n) * (1.0 - dh);
    no1 += w[n] * q1;
    no2 += w[n] * q2;
    none += w[n] * q0;
    noh += w[n] * qh;
    noh1 += w[n] * qh * q1;
    noh2 += w[n] * qh * q2;
    nohnone += w[n] * qh * q0;
  }
  const double total = 1.0 - tail;
  ProbabilityTable p;
  p.p_h = total - noh;
  p.p_1 = total - no1;
  p.p_2 = total - no2;
  p.p_t = total - none;
  p.p_12 = total - no1 - no2 + none;
  p.p_th = p.p_t - (noh - nohnone);
  p.p_1h = p.p_1 - (noh - noh1);
  p.p_2h = p.p_2 - (noh - noh2);
  p.p_12h = p.p_12 - (noh - noh1 - noh2 + nohnone);
  return p;
}

namespace {

using Rng = std::mt19937_64;

// Poisson(lambda) conditioned on being at least 1.
std::uint64_t truncated_poisson(Rng& rng, double lambda) {
  if (lambda > 1.0) {
    std::poisson_distribution<std::uint64_t> d(lambda);
    for (;;)
      if (auto k = d(rng); k > 0) return k;
  }
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double p = lambda / std::expm1(lambda);
  double cum = p;
  std::uint64_t k = 1;
  while (u > cum && k < 1000) {
    p *= lambda / static_cast<double>(k + 1);
    cum += p;
    ++k;
  }
  return k;
}

std::uint64_t sample_pairs(Rng& rng, const SourceModel& s, bool at_least_one) {
  const double mu = s.mean_pairs_mu;
  if (s.statistics == PairStatistics::Thermal) {
    std::geometric_distribution<std::uint64_t> g(1.0 / (1.0 + mu));
    return g(rng) + (at_least_one ? 1 : 0);
  }
  if (at_least_one) return truncated_poisson(rng, mu);
  return mu > 0.0 ? std::poisson_distribution<std::uint64_t>(mu)(rng) : 0;
}

std::uint64_t sample_poisson(Rng& rng, double lambda, bool at_least_one) {
  if (at_least_one) return truncated_poisson(rng, lambda);
  return lambda > 0.0 ? std::poisson_distribution<std::uint64_t>(lambda)(rng) : 0;
}

// Pulses where no pair, noise photon or dark event occurs leave no trace, so
// they are skipped in geometric runs and only eventful pulses are sampled,
// conditioned on at least one of the independent sources firing.
class PulseSampler {
public:
  explicit PulseSampler(const ExperimentModel& m)
      : m_(m), nu_(m.noise.mean_per_pulse()), dark_(dark_mean(m)),
        es_(m.channel.detection_probability()),
        delay_(1.0 / m.noise.lifetime_s) {
    quiet_ = {pair_zero_prob(m.source), std::exp(-nu_),
              1.0 - m.source.herald_dark_prob, std::exp(-dark_), std::exp(-dark_)};
    double log_q = 0.0;
    for (double t : quiet_) log_q += std::log(t);
    eventful_ = -std::expm1(log_q);
  }

  void run(Rng& rng, std::uint64_t n_pulses, TallySet& out) {
    out.n_pulses += n_pulses;
    if (!(eventful_ > 0.0)) return;
    std::geometric_distribution<std::uint64_t> skip(std::min(eventful_, 1.0));
    std::uint64_t left = n_pulses;
    for (;;) {
      const std::uint64_t gap = skip(rng);
      if (gap >= left) return;
      left -= gap + 1;
      pulse(rng, out);
    }
  }

private:
  void pulse(Rng& rng, TallySet& out) {
    // Pick the first source that fires; earlier ones are quiet, later ones free.
    auto unit = [&] { return unit_(rng); };
    double u = unit() * eventful_;
    std::size_t first = 0;
    double before = 1.0;
    for (; first + 1 < quiet_.size(); ++first) {
      const double p = before * (1.0 - quiet_[first]);
      if (u < p) break;
      u -= p;
      before *= quiet_[first];
    }
    auto state = [&](std::size_t k) { return k < first ? 0 : k == first ? 1 : 2; };

    const auto& src = m_.source;
    const int s_pairs = state(0);
    const std::uint64_t n = s_pairs == 0 ? 0 : sample_pairs(rng, src, s_pairs == 1);
    const int s_noise = state(1);
    const std::uint64_t noise = s_noise == 0 ? 0 : sample_poisson(rng, nu_, s_noise == 1);
    const int s_hd = state(2);
    const bool herald_dark =
        s_hd == 1 || (s_hd == 2 && unit() < src.herald_dark_prob);
    const int s_d1 = state(3), s_d2 = state(4);
    const bool dark1 = s_d1 == 1 || (s_d1 == 2 && unit() < 1.0 - quiet_[3]);
    const bool dark2 = s_d2 == 1 || (s_d2 == 2 && unit() < 1.0 - quiet_[4]);

    // Loss thinning photon by photon: n is almost always tiny.
    bool herald = herald_dark;
    for (std::uint64_t i = 0; i < n; ++i)
      if (unit() < src.eta_herald) herald = true;

    bool c1 = dark1, c2 = dark2;
    const auto& tm = m_.timing;
    const double open = tm.window_open_s, close = tm.window_open_s + tm.window_s;
    auto place = [&](double t) {
      if (tm.jitter_s > 0.0) t += tm.jitter_s * jitter_(rng);
      if (t < open || t >= close) return;
      if (unit() < m_.detector.split_ratio) c1 = true;
      else c2 = true;
    };
    for (std::uint64_t i = 0; i < n; ++i)
      if (unit() < es_) place(0.0);
    for (std::uint64_t i = 0; i < noise; ++i) place(delay_(rng));

    const bool t = c1 || c2;
    out.n_h += herald;
    out.n_t += t;
    out.n_th += t && herald;
    out.n_1 += c1;
    out.n_2 += c2;
    out.n_12 += c1 && c2;
    out.n_1h += c1 && herald;
    out.n_2h += c2 && herald;
    out.n_12h += c1 && c2 && herald;
  }

  const ExperimentModel& m_;
  double nu_;
  double dark_;
  double es_;
  std::array<double, 5> quiet_{};
  double eventful_ = 0.0;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::normal_distribution<double> jitter_{0.0, 1.0};
  std::exponential_distribution<double> delay_;
};

Rng worker_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

} // namespace

TallySet simulate_pulses(const ExperimentModel& model, std::uint64_t n_pulses,
                         std::uint64_t seed, int workers) {
  model.validate();
  if (n_pulses < 1) throw DomainError("n_pulses must be at least 1");
  if (workers < 1) throw DomainError("worker count must be at least 1");
  const auto nw = static_cast<std::uint64_t>(workers);
  auto block = [&](std::uint64_t i) {
    const std::uint64_t share = n_pulses / nw + (i < n_pulses % nw ? 1 : 0);
    TallySet t;
    Rng rng = worker_rng(seed, i);
    PulseSampler(model).run(rng, share, t);
    return t;
  };
  TallySet total;
  if (nw == 1) return block(0);
  std::vector<std::future<TallySet>> jobs;
  for (std::uint64_t i = 0; i < nw; ++i) jobs.push_back(std::async(std::launch::async, block, i));
  for (auto& j : jobs) total += j.get();
  return total;
}

namespace {

double u64(std::uint64_t x) { return static_cast<double>(x); }

double rel_sum(std::initializer_list<std::uint64_t> counts) {
  double s = 0.0;
  for (auto c : counts) s += c > 0 ? 1.0 / u64(c) : 0.0;
  return std::sqrt(s);
}

} // namespace

Estimate r_ca(const TallySet& t) {
  if (t.n_t == 0 || t.n_h == 0)
    throw UndefinedResult("R_CA undefined: no signal or no herald detections");
  const double v = u64(t.n_th) * u64(t.n_pulses) / (u64(t.n_t) * u64(t.n_h));
  return {v, v * rel_sum({t.n_th, t.n_t, t.n_h})};
}

Estimate heralded_g2(const TallySet& t) {
  if (t.n_1h == 0 || t.n_2h == 0)
    throw UndefinedResult("heralded g2 undefined: an element has no heralded counts");
  const double v = u64(t.n_12h) * u64(t.n_h) / (u64(t.n_1h) * u64(t.n_2h));
  // With no triple coincidences, quote the one-count level as the error.
  const double err = t.n_12h > 0 ? v * rel_sum({t.n_12h, t.n_1h, t.n_2h, t.n_h})
                                 : u64(t.n_h) / (u64(t.n_1h) * u64(t.n_2h));
  return {v, err};
}

Estimate unheralded_g2(const TallySet& t) {
  if (t.n_1 == 0 || t.n_2 == 0)
    throw UndefinedResult("g2 undefined: an element has no counts");
  const double v = u64(t.n_12) * u64(t.n_pulses) / (u64(t.n_1) * u64(t.n_2));
  const double err = t.n_12 > 0 ? v * rel_sum({t.n_12, t.n_1, t.n_2})
                                : u64(t.n_pulses) / (u64(t.n_1) * u64(t.n_2));
  return {v, err};
}

double photon_number_g2(const SourceModel& source, int cutoff) {
  const double mu = source.mean_pairs_mu;
  if (!(mu > 0.0)) throw UndefinedResult("g2 undefined for an empty source");
  double m1 = 0.0, m2 = 0.0, w = 0.0;
  for (int n = 0; n <= cutoff; ++n) {
    w = source.statistics == PairStatistics::Thermal
            ? std::exp(n * std::log(mu / (1.0 + mu)) - std::log1p(mu))
            : std::exp(n * std::log(mu) - mu - std::lgamma(n + 1.0));
    m1 += n * w;
    m2 += n * (n - 1.0) * w;
  }
  if (!(w * cutoff * cutoff < 1e-12))
    throw ConvergenceError("pair-number cutoff too small for the moment sum");
  return m2 / (m1 * m1);
}

double r_ca(const ProbabilityTable& p) {
  if (!(p.p_t > 0.0 && p.p_h > 0.0)) throw UndefinedResult("R_CA undefined: zero singles");
  return p.p_th / (p.p_t * p.p_h);
}

double heralded_g2(const ProbabilityTable& p) {
  if (!(p.p_1h > 0.0 && p.p_2h > 0.0))
    throw UndefinedResult("heralded g2 undefined: zero heralded singles");
  return p.p_12h * p.p_h / (p.p_1h * p.p_2h);
}

double unheralded_g2(const ProbabilityTable& p) {
  if (!(p.p_1 > 0.0 && p.p_2 > 0.0)) throw UndefinedResult("g2 undefined: zero singles");
  return p.p_12 / (p.p_1 * p.p_2);
}

namespace {

// Root of g(log x) - target over a log bracket.
double solve_log(const std::function<double(double)>& g, double target, double lo,
                 double hi, const char* what) {
  auto f = [&](double lx) { return g(std::exp(lx)) - target; };
  const double a = std::log(lo), b = std::log(hi);
  const double fa = f(a), fb = f(b);
  if (!(fa * fb <= 0.0)) {
    std::ostringstream msg;
    msg << what << ": target " << target << " not reachable on [" << lo << ", " << hi
        << "] (ends give " << fa + target << ", " << fb + target << ")";
    throw ConvergenceError(msg.str());
  }
  return std::exp(numeric::find_root(f, a, b, 1e-12).x);
}

} // namespace

double solve_mu_for_heralded_g2(ExperimentModel model, double target_g2) {
  auto g = [&](double mu) {
    model.source.mean_pairs_mu = mu;
    return heralded_g2(exact_probabilities(model, 400));
  };
  return solve_log(g, target_g2, 1e-7, 2.0, "mu solve");
}

double solve_noise_for_rca(ExperimentModel model, double target_rca) {
  auto g = [&](double nu) {
    model.noise.mean_per_pulse_ref = nu;
    return r_ca(exact_probabilities(model, 400));
  };
  return solve_log(g, target_rca, 1e-10, 10.0, "noise solve");
}

Histogram noise_histogram(const NoiseModel& noise, const TimingModel& timing,
                          std::uint64_t n_pulses, double bin_width_s,
                          std::uint64_t seed, double t_min_s) {
  if (!(bin_width_s > 0.0)) throw DomainError("bin width must be positive");
  if (!(noise.lifetime_s > 0.0)) throw DomainError("lifetime must be positive");
  if (!(timing.pulse_period_s > t_min_s)) throw DomainError("histogram range is empty");
  const auto nbins =
      static_cast<std::size_t>(std::floor((timing.pulse_period_s - t_min_s) / bin_width_s));
  Histogram h{t_min_s, bin_width_s, std::vector<std::uint64_t>(std::max<std::size_t>(nbins, 1)), 0, 0};
  const double mean = noise.mean_per_pulse() * static_cast<double>(n_pulses);
  if (mean <= 0.0) return h;
  Rng rng = worker_rng(seed, 0);
  // Per-pulse Poisson counts add up to one Poisson draw for the whole run.
  h.total = std::poisson_distribution<std::uint64_t>(mean)(rng);
  std::exponential_distribution<double> delay(1.0 / noise.lifetime_s);
  std::normal_distribution<double> jitter(0.0, timing.jitter_s > 0.0 ? timing.jitter_s : 1.0);
  for (std::uint64_t i = 0; i < h.total; ++i) {
    double t = delay(rng);
    if (timing.jitter_s > 0.0) t += jitter(rng);
    const double pos = (t - t_min_s) / bin_width_s;
    if (pos < 0.0 || pos >= static_cast<double>(h.counts.size())) {
      ++h.overflow;
      continue;
    }
    ++h.counts[static_cast<std::size_t>(pos)];
  }
  return h;
}

LifetimeFit fit_tail_lifetime(const Histogram& h, double fit_start_s,
                              std::uint64_t min_counts) {
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double x = h.bin_center(i);
    if (x < fit_start_s || h.counts[i] < std::max<std::uint64_t>(min_counts, 1)) continue;
    const double w = u64(h.counts[i]); // var(ln N) ~ 1/N
    const double y = std::log(w);
    sw += w;
    sx += w * x;
    sy += w * y;
    sxx += w * x * x;
    sxy += w * x * y;
    ++used;
  }
  if (used < 3) throw ConvergenceError("too few populated tail bins for a lifetime fit");
  const double det = sw * sxx - sx * sx;
  const double slope = (sw * sxy - sx * sy) / det;
  if (!(slope < 0.0)) throw ConvergenceError("histogram tail is not decaying");
  const double slope_sigma = std::sqrt(sw / det);
  return {-1.0 / slope, slope_sigma / (slope * slope), used};
}

} // namespace pcfqfc
