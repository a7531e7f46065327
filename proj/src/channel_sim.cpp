#include "alc/channel_sim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <memory>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "alc/construction_a.hpp"
#include "alc/division_algebra.hpp"
#include "alc/mimo_codec.hpp"
#include "alc/unit_equalizer.hpp"

namespace alc {

using nlohmann::json;

namespace {

constexpr double kPiE = std::numbers::pi * std::numbers::e;

cdouble cgauss(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0, std::sqrt(0.5));
  return {g(rng), g(rng)};
}

cdouble fading_draw(const ChannelModel& model, std::mt19937_64& rng) {
  if (model.fading == FadingLaw::Rayleigh) return cgauss(rng);
  const double K = model.rician_k;
  return std::sqrt(K / (K + 1)) + std::sqrt(1 / (K + 1)) * cgauss(rng);
}

}  // namespace

CMat gen_channel(const ChannelModel& model, std::mt19937_64& rng) {
  const int m = model.m;
  switch (model.kind) {
    case ChannelKind::CompoundBF: {
      CMat H = CMat::Zero(m, m);
      if (model.adversarial) {
        if (m < 2) throw std::invalid_argument("adversarial channel needs m >= 2");
        const double p = model.adversarial_p;
        if (m == 2) {
          const double s = std::pow(model.det, 0.25);
          H(0, 0) = s / (p * p);
          H(1, 1) = s * p * p;
        } else {
          H(0, 0) = 1 / (p * p);
          H(1, 1) = p * p;
          // |h_i|^2 = D^{1/(m-2)} keeps det H^H H = D.
          for (int i = 2; i < m; ++i) H(i, i) = std::pow(model.det, 1.0 / (2.0 * (m - 2)));
        }
        return H;
      }
      std::normal_distribution<double> g(0, model.log_spread);
      std::uniform_real_distribution<double> ph(0, 2 * std::numbers::pi);
      RVec l(m);
      for (int i = 0; i < m; ++i) l(i) = g(rng);
      l.array() += std::log(model.det) / m - l.mean();
      for (int i = 0; i < m; ++i) H(i, i) = std::polar(std::exp(l(i) / 2), ph(rng));
      return H;
    }
    case ChannelKind::CompoundMimo: {
      CMat H(model.n, m);
      for (int i = 0; i < model.n; ++i)
        for (int j = 0; j < m; ++j) H(i, j) = cgauss(rng);
      const double d = std::abs((H.adjoint() * H).determinant());
      return H * std::pow(model.det / d, 1.0 / (2.0 * m));
    }
    case ChannelKind::Ergodic: {
      CMat H = CMat::Zero(m, m);
      for (int i = 0; i < m; ++i) H(i, i) = fading_draw(model, rng);
      return H;
    }
  }
  throw std::logic_error("unknown channel kind");
}

bool in_compound_set(const CMat& H, double D, double tol) {
  return std::abs(std::abs((H.adjoint() * H).determinant()) - D) <= tol * D;
}

double capacity(const CMat& H, double snr) {
  const auto m = H.cols();
  const CMat A = CMat::Identity(m, m) + snr * H.adjoint() * H;
  Eigen::LLT<CMat> llt(A);
  double s = 0;
  for (Eigen::Index i = 0; i < m; ++i) s += 2 * std::log(std::real(llt.matrixL()(i, i)));
  return s;
}

Quadrature gauss_laguerre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_laguerre: need at least one node");
  RMat J = RMat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    J(i, i) = 2 * i + 1;
    if (i + 1 < n) J(i, i + 1) = J(i + 1, i) = i + 1;
  }
  Eigen::SelfAdjointEigenSolver<RMat> es(J);
  Quadrature q;
  for (int i = 0; i < n; ++i) {
    q.x.push_back(es.eigenvalues()(i));
    q.w.push_back(es.eigenvectors()(0, i) * es.eigenvectors()(0, i));
  }
  return q;
}

double ergodic_capacity_mc(const ChannelModel& model, double snr, long samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double s = 0;
  for (long i = 0; i < samples; ++i) s += std::log1p(std::norm(fading_draw(model, rng)) * snr);
  return s / samples;
}

double ergodic_capacity(const ChannelModel& model, double snr, int nodes, long mc_samples, std::uint64_t seed) {
  if (model.fading != FadingLaw::Rayleigh) return ergodic_capacity_mc(model, snr, mc_samples, seed);
  // |h|^2 ~ Exp(1)
  const auto q = gauss_laguerre(nodes);
  double s = 0;
  for (int i = 0; i < nodes; ++i) s += q.w[i] * std::log1p(snr * q.x[i]);
  return s;
}

double mean_log_gain(const ChannelModel& model, long mc_samples, std::uint64_t seed) {
  if (model.fading == FadingLaw::Rayleigh) return -std::numbers::egamma / 2;
  std::mt19937_64 rng(seed);
  double s = 0;
  for (long i = 0; i < mc_samples; ++i) s += std::log(std::abs(fading_draw(model, rng)));
  return s / mc_samples;
}

Interval wilson_interval(long errors, long trials, double z) {
  if (trials <= 0) return {0, 1};
  const double n = static_cast<double>(trials), p = errors / n, z2 = z * z;
  const double c = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double h = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  return {std::max(0.0, c - h), std::min(1.0, c + h)};
}

// ---------------------------------------------------------------- config

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

template <class T>
T get_or(const json& j, const char* key, T def) {
  if (!j.contains(key)) return def;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <class E>
E enum_of(const std::string& s, const std::vector<std::pair<const char*, E>>& names, const char* what) {
  for (const auto& [n, e] : names)
    if (s == n) return e;
  throw ConfigError(std::string("unknown ") + what + ": " + s);
}

template <class E>
std::string name_of(E e, const std::vector<std::pair<const char*, E>>& names) {
  for (const auto& [n, v] : names)
    if (v == e) return n;
  return "?";
}

const std::vector<std::pair<const char*, ChannelKind>> kKinds = {
    {"compound-bf", ChannelKind::CompoundBF}, {"compound-mimo", ChannelKind::CompoundMimo}, {"ergodic", ChannelKind::Ergodic}};
const std::vector<std::pair<const char*, FadingLaw>> kLaws = {{"rayleigh", FadingLaw::Rayleigh}, {"rician", FadingLaw::Rician}};
const std::vector<std::pair<const char*, Mode>> kModes = {{"infinite", Mode::Infinite}, {"power", Mode::Power}};
const std::vector<std::pair<const char*, DecoderKind>> kDecoders = {{"map", DecoderKind::Map},
                                                                    {"decoupled", DecoderKind::Decoupled},
                                                                    {"zero-forcing", DecoderKind::ZeroForcing},
                                                                    {"mod-p", DecoderKind::ModP}};
const std::vector<std::pair<const char*, InnerDecoder>> kInner = {{"cvp", InnerDecoder::Cvp},
                                                                  {"multistage", InnerDecoder::Multistage}};

}  // namespace

SimConfig parse_config(const json& j) {
  check_keys(j, {"channel", "code", "mode", "sigma_s", "sigma_w", "vnr_margin_db", "trials", "seed", "decoder",
                 "lattice_decoder", "window", "threads", "node_cap"},
             "config");
  SimConfig c;
  if (j.contains("channel")) {
    const json& ch = j["channel"];
    check_keys(ch, {"kind", "m", "n", "det", "log_spread", "adversarial", "adversarial_p", "fading", "rician_k"},
               "channel");
    c.channel.kind = enum_of(get_or<std::string>(ch, "kind", "compound-bf"), kKinds, "channel kind");
    c.channel.m = get_or(ch, "m", 0);
    c.channel.n = get_or(ch, "n", 0);
    c.channel.det = get_or(ch, "det", 1.0);
    c.channel.log_spread = get_or(ch, "log_spread", 1.0);
    c.channel.adversarial = get_or(ch, "adversarial", false);
    c.channel.adversarial_p = get_or(ch, "adversarial_p", 10.0);
    c.channel.fading = enum_of(get_or<std::string>(ch, "fading", "rayleigh"), kLaws, "fading law");
    c.channel.rician_k = get_or(ch, "rician_k", 0.0);
  } else {
    c.channel.m = c.channel.n = 0;
  }
  if (j.contains("code")) {
    const json& co = j["code"];
    check_keys(co, {"field", "kind", "p", "T", "k", "k_ratio", "alpha", "baseline_p"}, "code");
    c.code.field = get_or<std::string>(co, "field", c.code.field);
    c.code.kind = get_or<std::string>(co, "kind", c.code.kind);
    c.code.p = get_or<std::uint32_t>(co, "p", c.code.p);
    c.code.T = get_or(co, "T", c.code.T);
    c.code.k = get_or(co, "k", c.code.k);
    if (co.contains("k_ratio")) {
      if (co.contains("k")) throw ConfigError("give either code.k or code.k_ratio");
      c.code.k = static_cast<int>(std::lround(get_or(co, "k_ratio", 0.0) * c.code.T));
    }
    c.code.alpha = get_or(co, "alpha", 1.0);
    if (co.contains("baseline_p")) c.code.baseline_p = get_or<std::uint32_t>(co, "baseline_p", 0);
  }
  c.mode = enum_of(get_or<std::string>(j, "mode", "infinite"), kModes, "mode");
  c.sigma_s = get_or(j, "sigma_s", 1.0);
  if (j.contains("sigma_w")) c.sigma_w = get_or(j, "sigma_w", 0.0);
  if (j.contains("vnr_margin_db")) c.vnr_margin_db = get_or(j, "vnr_margin_db", 0.0);
  c.trials = get_or(j, "trials", 1000L);
  if (j.contains("seed")) c.seed = get_or<std::uint64_t>(j, "seed", 0);
  c.decoder = enum_of(get_or<std::string>(j, "decoder", "decoupled"), kDecoders, "decoder");
  c.inner = enum_of(get_or<std::string>(j, "lattice_decoder", "multistage"), kInner, "lattice decoder");
  c.window = get_or(j, "window", 8);
  c.threads = get_or(j, "threads", 0);
  c.node_cap = get_or(j, "node_cap", 50'000'000L);

  // validation
  if (c.trials <= 0) throw ConfigError("trials must be positive");
  if (!c.seed) throw ConfigError("seed is mandatory");
  if (c.sigma_w && c.vnr_margin_db) throw ConfigError("give either sigma_w or vnr_margin_db");
  if (!c.sigma_w && !c.vnr_margin_db) throw ConfigError("one of sigma_w or vnr_margin_db is required");
  if (c.sigma_w && !(*c.sigma_w > 0)) throw ConfigError("sigma_w must be positive");
  if (!(c.sigma_s > 0)) throw ConfigError("sigma_s must be positive");
  if (c.vnr_margin_db && c.mode == Mode::Power) throw ConfigError("vnr_margin_db needs infinite mode; give sigma_w");
  if (c.vnr_margin_db && c.channel.kind == ChannelKind::Ergodic)
    throw ConfigError("vnr_margin_db is defined for the compound kinds; give sigma_w");
  if (c.window < 0 || c.threads < 0 || c.node_cap <= 0) throw ConfigError("window, threads and node_cap must be >= 0");
  if (!(c.channel.det > 0)) throw ConfigError("channel.det must be positive");
  if (c.channel.adversarial && !(c.channel.adversarial_p > 1)) throw ConfigError("adversarial_p must exceed 1");
  if (c.channel.adversarial && c.channel.kind != ChannelKind::CompoundBF)
    throw ConfigError("the adversarial channel is diagonal (compound-bf)");
  if (c.channel.rician_k < 0) throw ConfigError("rician_k must be non-negative");
  if (c.code.T <= 0 || c.code.k < 0 || !(c.code.alpha > 0)) throw ConfigError("bad code dimensions");
  if (c.code.kind != "reed-solomon" && c.code.kind != "random" && c.code.kind != "golden")
    throw ConfigError("unknown code kind: " + c.code.kind);
  const bool golden = c.code.kind == "golden";
  if (golden != (c.channel.kind == ChannelKind::CompoundMimo))
    throw ConfigError("the golden code goes with the compound-mimo channel, and only with it");
  if (golden) {
    if (c.channel.m == 0) c.channel.m = 2;
    if (c.channel.n == 0) c.channel.n = 2;
    if (c.channel.m != 2 || c.channel.n < 2) throw ConfigError("the golden code needs m = 2 and n >= 2");
    if (c.decoder != DecoderKind::Map && c.decoder != DecoderKind::ZeroForcing)
      throw ConfigError("compound-mimo supports the map and zero-forcing decoders");
    if (c.decoder == DecoderKind::ZeroForcing && c.channel.n != 2) throw ConfigError("zero forcing needs n = m");
    if (c.inner == InnerDecoder::Multistage) c.inner = InnerDecoder::Cvp;
  } else {
    NumberField K = NumberField::quadratic(-1);
    try {
      K = NumberField::by_name(c.code.field);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    if (K.totally_real()) throw ConfigError("simulation needs a totally complex field");
    const int m = K.num_embeddings();
    if (c.channel.m == 0) c.channel.m = m;
    if (c.channel.n == 0) c.channel.n = m;
    if (c.channel.m != m || c.channel.n != m) throw ConfigError("channel.m and channel.n must equal the field's embedding count");
    if (!is_prime(c.code.p)) throw ConfigError("code.p must be prime");
    const int len = c.channel.kind == ChannelKind::Ergodic ? m : c.code.T;
    if (c.channel.kind == ChannelKind::Ergodic) c.code.T = m;
    if (c.code.k > len) throw ConfigError("code.k exceeds the code length");
    if (c.code.kind == "reed-solomon" && static_cast<std::uint32_t>(len) > c.code.p)
      throw ConfigError("Reed-Solomon length exceeds p");
    if (c.channel.kind == ChannelKind::Ergodic &&
        (c.decoder == DecoderKind::Decoupled || c.decoder == DecoderKind::ModP))
      throw ConfigError("the ergodic channel supports the map and zero-forcing decoders");
    if (c.inner == InnerDecoder::Multistage &&
        (c.code.kind != "reed-solomon" || c.channel.kind == ChannelKind::Ergodic))
      throw ConfigError("the multistage decoder needs a compound Reed-Solomon lattice");
    if (c.decoder == DecoderKind::ModP && c.channel.kind != ChannelKind::CompoundBF)
      throw ConfigError("the mod-p baseline is defined for compound-bf");
    if (c.code.baseline_p && !is_prime(*c.code.baseline_p)) throw ConfigError("code.baseline_p must be prime");
  }
  return c;
}

json to_json(const SimConfig& c) {
  json ch = {{"kind", name_of(c.channel.kind, kKinds)},
             {"m", c.channel.m},
             {"n", c.channel.n},
             {"det", c.channel.det},
             {"log_spread", c.channel.log_spread},
             {"adversarial", c.channel.adversarial},
             {"adversarial_p", c.channel.adversarial_p},
             {"fading", name_of(c.channel.fading, kLaws)},
             {"rician_k", c.channel.rician_k}};
  json co = {{"field", c.code.field}, {"kind", c.code.kind}, {"p", c.code.p},
             {"T", c.code.T},         {"k", c.code.k},       {"alpha", c.code.alpha}};
  if (c.code.baseline_p) co["baseline_p"] = *c.code.baseline_p;
  json j = {{"channel", ch},
            {"code", co},
            {"mode", name_of(c.mode, kModes)},
            {"sigma_s", c.sigma_s},
            {"trials", c.trials},
            {"decoder", name_of(c.decoder, kDecoders)},
            {"lattice_decoder", name_of(c.inner, kInner)},
            {"window", c.window},
            {"threads", c.threads},
            {"node_cap", c.node_cap}};
  if (c.seed) j["seed"] = *c.seed;
  if (c.sigma_w) j["sigma_w"] = *c.sigma_w;
  if (c.vnr_margin_db) j["vnr_margin_db"] = *c.vnr_margin_db;
  return j;
}

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const SimResult& r) {
  return {{"trials", r.trials},
          {"errors", r.errors},
          {"wer", r.wer},
          {"wer_ci", {r.ci.lo, r.ci.hi}},
          {"ci_method", "wilson-95"},
          {"rate_nats", num(r.rate_nats)},
          {"capacity_nats", num(r.capacity_nats)},
          {"gap_nats", num(r.capacity_nats - r.rate_nats)},
          {"sigma_w", r.sigma_w},
          {"snr_db", r.snr_db},
          {"vnr", num(r.vnr)},
          {"vnr_convention", "complex: V^(1/(m T)) / sigma_w^2, threshold pi e"},
          {"vnr_margin_db", num(r.vnr_margin_db)},
          {"log_density", num(r.log_density)},
          {"log_density_threshold", num(r.log_density_threshold)},
          {"max_alpha", num(r.max_alpha)},
          {"extra", r.extra},
          {"wall_seconds", r.wall_seconds},
          {"config", to_json(r.config)}};
}

// ---------------------------------------------------------------- runner

namespace {

struct Setup {
  SimConfig c;
  int m = 0;
  int uses = 0;  // channel uses per codeword
  double volume = 0;
  double sigma_w = 0;
  double rho = 0;
  // number-field kinds
  std::optional<NumberField> K;
  std::optional<ConstructionALattice> L;
  std::optional<ReedSolomon> rs;
  std::unique_ptr<MultistageDecoder> ms;
  std::optional<LogLattice> log;
  // golden code
  std::optional<ComplexLattice> G;
  // mod-p baseline
  std::optional<ConstructionALattice> base;
  std::optional<ReedSolomon> base_rs;
  cdouble base_gen;
  std::unique_ptr<GaussianSampler> sampler, base_sampler;

  const ComplexLattice& lattice() const { return G ? *G : L->lattice; }
};

std::uint32_t baseline_prime(std::uint32_t from, int len) {
  std::uint32_t q = std::max<std::uint32_t>(from, static_cast<std::uint32_t>(len));
  while (!(is_prime(q) && q % 4 == 1)) ++q;
  return q;
}

std::unique_ptr<Setup> build(const SimConfig& c) {
  auto S = std::make_unique<Setup>();
  S->c = c;
  S->m = c.channel.m;
  std::mt19937_64 code_rng(*c.seed ^ 0x9e3779b97f4a7c15ULL);
  if (c.code.kind == "golden") {
    S->G = natural_order_lattice(CyclicAlgebra::golden(), c.code.T).scaled(c.code.alpha);
    S->uses = 2 * c.code.T;
  } else {
    S->K = NumberField::by_name(c.code.field);
    const auto split = split_prime(*S->K, c.code.p);
    if (split.l != 1) throw ConfigError("code.p must have a degree-one prime in " + c.code.field);
    const GaloisField F = split.residue_field;
    const int len = c.code.T;
    LinearCode code;
    if (c.code.kind == "reed-solomon") {
      S->rs.emplace(c.code.p, len, c.code.k);
      code = S->rs->code();
    } else {
      code = c.code.k == 0 ? zero_code(F, len) : random_code(c.code.p, 1, len, c.code.k, code_rng);
    }
    if (c.channel.kind == ChannelKind::Ergodic) {
      S->L = lift_ergodic(*S->K, split, code, c.code.alpha);
      S->uses = 1;
    } else {
      S->L = lift_compound(*S->K, split, code, c.code.alpha);
      S->uses = c.code.T;
    }
    if (c.inner == InnerDecoder::Multistage) S->ms = std::make_unique<MultistageDecoder>(*S->L, *S->rs);
    if (c.decoder == DecoderKind::Decoupled) S->log = build_log_lattice(*S->K);
  }
  S->volume = S->lattice().volume();
  const double D = c.channel.kind == ChannelKind::Ergodic ? 1.0 : c.channel.det;
  if (c.sigma_w) {
    S->sigma_w = *c.sigma_w;
  } else {
    const double v = std::pow(S->volume, 1.0 / (S->m * S->uses)) * std::pow(D, 1.0 / S->m);
    S->sigma_w = std::sqrt(v / (kPiE * std::pow(10.0, *c.vnr_margin_db / 10)));
  }
  S->rho = c.sigma_s * c.sigma_s / (S->sigma_w * S->sigma_w);
  if (c.decoder == DecoderKind::ModP) {
    const NumberField Q = NumberField::quadratic(-1);
    const int len = S->m * c.code.T;
    const std::uint32_t q = c.code.baseline_p ? *c.code.baseline_p : baseline_prime(c.code.p, len);
    if (q % 4 != 1) throw ConfigError("code.baseline_p must be 1 mod 4 (split in Z[i])");
    if (static_cast<std::uint32_t>(len) > q) throw ConfigError("baseline Reed-Solomon length exceeds baseline_p");
    const auto split = split_prime(Q, q);
    S->base_rs.emplace(q, len, S->m * c.code.k);
    const auto unscaled = lift_compound(Q, split, S->base_rs->code(), 1.0);
    const double beta = std::pow(S->volume / unscaled.lattice.volume(), 1.0 / unscaled.lattice.dim());
    S->base = lift_compound(Q, split, S->base_rs->code(), beta);
    S->base_gen = beta * Q.embed(split.generator)[0];
  }
  if (c.mode == Mode::Power) {
    if (c.decoder == DecoderKind::ModP) S->base_sampler = std::make_unique<GaussianSampler>(S->base->lattice, c.sigma_s);
    else S->sampler = std::make_unique<GaussianSampler>(S->lattice(), c.sigma_s);
  }
  return S;
}

struct TrialOut {
  bool error = false;
  double capacity = 0;
  double alpha = 0;
  double log_vnr = 0;
};

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t i) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
  return std::mt19937_64(seq);
}

CVec noise(Eigen::Index n, double sigma, std::mt19937_64& rng) {
  CVec w(n);
  for (Eigen::Index i = 0; i < n; ++i) w(i) = sigma * cgauss(rng);
  return w;
}

IVec window_coeffs(int N, int W, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> u(-W, W);
  IVec c(N);
  for (int i = 0; i < N; ++i) c(i) = u(rng);
  return c;
}

// Genie-aided lower bound on the ML error of the mod-p baseline: an error is
// declared when one of the short ideal vectors q e_j (q a generator of the
// prime and its multiple by i) beats the transmitted point.
bool modp_genie_error(const Setup& S, const CMat& H, std::mt19937_64& rng) {
  const int N = S.base->lattice.dim();
  const int len = N / 2;
  RVec x = RVec::Zero(N);
  if (S.base_sampler) x = S.base_sampler->sample(rng);
  const CVec xc = complexify(x);
  const CVec w = noise(len, S.sigma_w, rng);
  const double sw2 = S.sigma_w * S.sigma_w, ss2 = S.c.sigma_s * S.c.sigma_s;
  bool err = false;
  for (int j = 0; j < len; ++j) {
    for (const cdouble u : {cdouble(1, 0), cdouble(0, 1)}) {
      const cdouble b = S.base_gen * u;
      const cdouble a = H(j % S.m, j % S.m) * b;
      for (const double sg : {1.0, -1.0}) {
        double delta = (std::norm(w(j) - sg * a) - std::norm(w(j))) / sw2;
        if (S.base_sampler) delta += (std::norm(xc(j) + sg * b) - std::norm(xc(j))) / ss2;
        if (delta < 0) err = true;
      }
    }
  }
  return err;
}

TrialOut run_one(const Setup& S, std::uint64_t index) {
  const SimConfig& c = S.c;
  auto rng = trial_rng(*c.seed, index);
  TrialOut out;
  const CMat H = gen_channel(c.channel, rng);
  if (c.channel.kind != ChannelKind::Ergodic && !in_compound_set(H, c.channel.det))
    throw std::logic_error("generated channel is outside the compound set");
  out.capacity = capacity(H, S.rho);
  const double inf = std::numeric_limits<double>::infinity();
  const double filter_rho = c.mode == Mode::Power ? S.rho : inf;
  {
    const int m = S.m;
    double lv;
    if (c.mode == Mode::Power) {
      const CMat A = H.adjoint() * H + CMat::Identity(m, m) / S.rho;
      lv = std::log(std::abs(A.determinant())) / m;
    } else {
      lv = std::log(std::abs((H.adjoint() * H).determinant())) / m;
    }
    out.log_vnr = lv + std::log(S.volume) / (m * S.uses) - 2 * std::log(S.sigma_w);
  }
  if (c.decoder == DecoderKind::ModP) {
    out.error = modp_genie_error(S, H, rng);
    return out;
  }
  const ComplexLattice& Lat = S.lattice();
  const int N = Lat.dim();
  const IVec coeffs = S.sampler ? S.sampler->sample_coeffs(RVec::Zero(N), rng) : window_coeffs(N, c.window, rng);
  const RVec X = Lat.point(coeffs);
  const CVec y = block_diag(H, Lat.complex_dim() / S.m) * complexify(X) + noise(Lat.complex_dim(), S.sigma_w, rng);

  // Integral coordinates for the Construction A kinds, lattice coefficients otherwise.
  const auto to_int = [&](const IVec& cf) -> IVec { return S.L ? IVec(S.L->int_basis * cf) : cf; };
  const IVec x_int = to_int(coeffs);
  const auto inner = [&](const RVec& target) -> std::optional<IVec> {
    if (S.ms) return S.ms->decode(target);
    return to_int(cvp(Lat, target, c.node_cap).coeffs);
  };

  std::optional<IVec> xh;
  switch (c.decoder) {
    case DecoderKind::Map: {
      const auto f = mmse_matrices(H, filter_rho);
      xh = to_int(map_decode(y, Lat, f, c.node_cap).coeffs);
      break;
    }
    case DecoderKind::ZeroForcing: {
      const int T = Lat.complex_dim() / S.m;
      xh = inner(realify(block_diag(H.inverse(), T) * y));
      break;
    }
    case DecoderKind::Decoupled: {
      const auto f = mmse_matrices(H, filter_rho);
      const auto p = decoupled_params(f, *S.log);
      out.alpha = p.alpha;
      const auto xt = inner(realify(decoupled_target(y, f, p)));
      if (xt) xh = multiply_blocks(*xt, p.q.u.inverse());
      break;
    }
    case DecoderKind::ModP:
      break;
  }
  out.error = !xh || *xh != x_int;
  return out;
}

}  // namespace

SimResult run_trials(const SimConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!config.seed) throw ConfigError("seed is mandatory");
  const auto S = build(config);
  const long n = config.trials;
  std::vector<TrialOut> outs(n);
  int threads = config.threads > 0 ? config.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto work = [&] {
    try {
      for (long i; (i = next++) < n;) outs[i] = run_one(*S, static_cast<std::uint64_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!failure) failure = std::current_exception();
      next = n;
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  SimResult r;
  r.config = config;
  r.trials = n;
  double cap = 0, lv = 0;
  for (const auto& o : outs) {
    r.errors += o.error;
    cap += o.capacity;
    lv += o.log_vnr;
    r.max_alpha = std::max(r.max_alpha, o.alpha);
  }
  r.wer = static_cast<double>(r.errors) / n;
  r.ci = wilson_interval(r.errors, n);
  r.sigma_w = S->sigma_w;
  r.snr_db = 10 * std::log10(S->rho);
  const int m = S->m;
  r.rate_nats = lattice_rate(m, S->uses, config.sigma_s, S->volume);
  lv /= n;
  r.vnr = std::exp(lv);
  r.vnr_margin_db = 10 * std::log10(r.vnr / kPiE);
  r.log_density = std::log(S->volume) / (m * S->uses) - 2 * std::log(S->sigma_w);
  const double D = config.channel.kind == ChannelKind::Ergodic ? 1.0 : config.channel.det;
  r.log_density_threshold = std::log(kPiE / std::pow(D, 1.0 / m));
  if (config.decoder != DecoderKind::Decoupled) r.max_alpha = std::numeric_limits<double>::quiet_NaN();

  if (config.channel.kind == ChannelKind::Ergodic) {
    // Rates and capacity per complex channel use.
    r.capacity_nats = ergodic_capacity(config.channel, S->rho);
    r.rate_nats /= m;
    const double mu = mean_log_gain(config.channel);
    const double vnr_c = std::pow(S->volume, 1.0 / m) / (S->sigma_w * S->sigma_w);
    r.vnr = vnr_c;
    r.vnr_margin_db = 10 * std::log10(vnr_c / kPiE);
    r.extra["mean_log_gain"] = mu;
    r.extra["vnr_complex"] = vnr_c;
    r.extra["vnr_real"] = 2 * vnr_c;
    r.extra["threshold_definition_complex"] = std::exp(-2 * mu) * kPiE;
    r.extra["threshold_optimal_real"] = std::exp(-2 * mu) * 2 * kPiE;
    r.extra["margin_definition_db"] = 10 * std::log10(vnr_c / (std::exp(-2 * mu) * kPiE));
    r.extra["margin_optimal_real_db"] = 10 * std::log10(2 * vnr_c / (std::exp(-2 * mu) * 2 * kPiE));
  } else {
    r.capacity_nats = cap / n;
  }
  if (S->log) {
    const auto g = gap_bound(*S->log);
    r.extra["gap_bound"] = {{"field", g.source}, {"rho", g.rho}, {"general", g.general}, {"tight", num(g.tight)},
                            {"gap", g.gap}};
  }
  if (S->base) {
    r.extra["baseline"] = {{"lattice", "Z[i] Construction A"},
                           {"q", S->base->split.p},
                           {"length", S->base->code.T},
                           {"k", S->base->code.k},
                           {"scale", S->base->alpha},
                           {"decoder", "genie-aided ML lower bound"}};
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<SimConfig> expand_grid(const json& base, const json& grid) {
  if (!grid.is_object()) throw ConfigError("grid must be an object of JSON pointers to value arrays");
  std::vector<std::pair<json::json_pointer, json>> axes;
  for (const auto& [k, v] : grid.items()) {
    if (!v.is_array()) throw ConfigError("grid axis '" + k + "' must be an array");
    try {
      axes.emplace_back(json::json_pointer(k), v);
    } catch (const json::exception& e) {
      throw ConfigError("bad grid pointer '" + k + "': " + e.what());
    }
  }
  std::vector<SimConfig> out;
  for (const auto& [p, v] : axes)
    if (v.empty()) return out;
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    json j = base;
    for (std::size_t a = 0; a < axes.size(); ++a) j[axes[a].first] = axes[a].second[idx[a]];
    out.push_back(parse_config(j));
    std::size_t a = 0;
    while (a < axes.size() && ++idx[a] == axes[a].second.size()) idx[a++] = 0;
    if (a == axes.size()) break;
  }
  return out;
}

std::vector<SimResult> sweep(const std::vector<SimConfig>& configs) {
  std::vector<SimResult> out;
  for (const auto& c : configs) out.push_back(run_trials(c));
  return out;
}

std::string csv_row(const SimResult& r) {
  std::ostringstream s;
  s << std::setprecision(10) << *r.config.seed << ',' << r.config.code.T << ',' << r.config.code.p << ','
    << r.config.code.k << ',' << r.snr_db << ',' << r.rate_nats << ',' << r.capacity_nats << ',' << r.vnr << ','
    << r.wer << ',' << r.ci.lo << ',' << r.ci.hi;
  return s.str();
}

}  // namespace alc
