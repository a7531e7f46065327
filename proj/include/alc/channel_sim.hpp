#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "alc/linalg.hpp"
#include "json.hpp"

namespace alc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ChannelKind { CompoundBF, CompoundMimo, Ergodic };
enum class FadingLaw { Rayleigh, Rician };

struct ChannelModel {
  ChannelKind kind = ChannelKind::CompoundBF;
  int m = 2;  // transmit dimension (complex)
  int n = 2;  // receive dimension (complex)
  double det = 1;             // D = |det H^H H| for the compound kinds
  double log_spread = 1;      // std of the iid normal log |h_i|^2 before renormalization
  bool adversarial = false;   // h1 = 1/p^2, h2 = p^2, remaining entries equal
  double adversarial_p = 10;
  FadingLaw fading = FadingLaw::Rayleigh;
  double rician_k = 0;        // K-factor, unit total power
};

// Compound kinds: an n x m matrix in the compound set. Ergodic: diag of m
// independent fading coefficients.
CMat gen_channel(const ChannelModel& model, std::mt19937_64& rng);

// |det H^H H| = D within rel. tol.
bool in_compound_set(const CMat& H, double D, double tol = 1e-9);

// log det(I + snr H^H H)
double capacity(const CMat& H, double snr);

struct Quadrature {
  std::vector<double> x, w;
};
// n-point Gauss-Laguerre rule for weight e^{-x} (Golub-Welsch).
Quadrature gauss_laguerre(int n);

// E[log(1 + |h|^2 snr)]: Gauss-Laguerre for Rayleigh, Monte-Carlo otherwise.
double ergodic_capacity(const ChannelModel& model, double snr, int nodes = 200, long mc_samples = 1'000'000,
                        std::uint64_t seed = 1);
double ergodic_capacity_mc(const ChannelModel& model, double snr, long samples, std::uint64_t seed);
// mu = E[log |h|].
double mean_log_gain(const ChannelModel& model, long mc_samples = 1'000'000, std::uint64_t seed = 1);

struct Interval {
  double lo = 0, hi = 1;
};
// 95% Wilson score interval.
Interval wilson_interval(long errors, long trials, double z = 1.959963984540054);

enum class Mode { Infinite, Power };
enum class DecoderKind { Map, Decoupled, ZeroForcing, ModP };
enum class InnerDecoder { Cvp, Multistage };

struct CodeSpec {
  std::string field = "Q(i,sqrt5)";
  std::string kind = "reed-solomon";  // reed-solomon | random | golden
  std::uint32_t p = 89;
  int T = 16;
  int k = 12;
  double alpha = 1;
  std::optional<std::uint32_t> baseline_p;  // prime for the mod-p baseline
};

struct SimConfig {
  ChannelModel channel;
  CodeSpec code;
  Mode mode = Mode::Infinite;
  double sigma_s = 1;
  std::optional<double> sigma_w;
  std::optional<double> vnr_margin_db;  // alternative to sigma_w (infinite mode)
  long trials = 1000;
  std::optional<std::uint64_t> seed;
  DecoderKind decoder = DecoderKind::Decoupled;
  InnerDecoder inner = InnerDecoder::Multistage;
  int window = 8;
  int threads = 0;
  long node_cap = 50'000'000;
};

SimConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const SimConfig& c);

struct SimResult {
  long trials = 0;
  long errors = 0;
  double wer = 0;
  Interval ci;
  double rate_nats = 0;
  double capacity_nats = 0;   // mean over the drawn channels
  double sigma_w = 0;
  double snr_db = 0;
  double vnr = 0;             // complex convention, V^{1/(mT)} / sigma_w^2 of the received lattice
  double vnr_margin_db = 0;   // over pi e
  double log_density = 0;     // (1/mT) log V(L / sigma_w)
  double log_density_threshold = 0;  // log(pi e / D^{1/m})
  double max_alpha = 0;       // largest |E^{-1}| seen by the decoupled decoder
  nlohmann::json extra;       // kind-specific reports
  double wall_seconds = 0;
  SimConfig config;
};

nlohmann::json to_json(const SimResult& r);

// Deterministic in the config (seed included); trials run in parallel with
// per-trial generators seeded from (seed, trial index).
SimResult run_trials(const SimConfig& config);

// Cartesian product of JSON-pointer-addressed values over a base config.
std::vector<SimConfig> expand_grid(const nlohmann::json& base, const nlohmann::json& grid);
std::vector<SimResult> sweep(const std::vector<SimConfig>& configs);

inline constexpr const char* kCsvHeader = "seed,T,p,k,snr_db,rate_nats,capacity_nats,vnr,wer,wer_ci_lo,wer_ci_hi";
inline constexpr int kCsvVersion = 1;
std::string csv_row(const SimResult& r);

}  // namespace alc
