#include <cmath>
#include <numbers>
#include <random>

#include "alc/channel_sim.hpp"
#include "doctest.h"

using namespace alc;
using nlohmann::json;

namespace {

// e^{1/s} E1(1/s): closed form of E[log(1 + s |h|^2)] for Rayleigh fading.
double rayleigh_capacity(double s) { return std::exp(1 / s) * -std::expint(-1 / s); }

json small_config() {
  return {{"channel", {{"kind", "compound-bf"}, {"det", 1}, {"log_spread", 1}}},
          {"code", {{"field", "Q(i,sqrt5)"}, {"p", 29}, {"T", 8}, {"k", 6}}},
          {"vnr_margin_db", 4},
          {"trials", 200},
          {"seed", 5},
          {"threads", 2}};
}

}  // namespace

TEST_CASE("compound channel draws") {
  std::mt19937_64 rng(1);
  for (double D : {1.0, 0.3, 7.0}) {
    ChannelModel m;
    m.det = D;
    for (int i = 0; i < 200; ++i) {
      const CMat H = gen_channel(m, rng);
      CHECK(in_compound_set(H, D));
      CHECK(H.isDiagonal());
    }
    m.kind = ChannelKind::CompoundMimo;
    for (int i = 0; i < 200; ++i) CHECK(in_compound_set(gen_channel(m, rng), D));
  }
  ChannelModel a;
  a.adversarial = true;
  const CMat H = gen_channel(a, rng);
  CHECK(std::abs(H(0, 0) - 0.01) < 1e-15);
  CHECK(std::abs(H(1, 1) - 100.0) < 1e-12);
  a.m = a.n = 4;
  a.det = 16;
  CHECK(in_compound_set(gen_channel(a, rng), 16));
}

TEST_CASE("ergodic fading is unit power") {
  std::mt19937_64 rng(2);
  for (auto law : {FadingLaw::Rayleigh, FadingLaw::Rician}) {
    ChannelModel m;
    m.kind = ChannelKind::Ergodic;
    m.m = m.n = 1;
    m.fading = law;
    m.rician_k = 3;
    double s = 0;
    for (int i = 0; i < 100000; ++i) s += std::norm(gen_channel(m, rng)(0, 0));
    CHECK(std::abs(s / 100000 - 1) < 0.02);
  }
}

TEST_CASE("capacity") {
  std::mt19937_64 rng(3);
  ChannelModel m;
  m.kind = ChannelKind::CompoundMimo;
  const CMat H = gen_channel(m, rng);
  CHECK(capacity(H, 0) == doctest::Approx(0).epsilon(1e-15));
  for (double s : {0.5, 10.0, 1000.0}) CHECK(capacity(CMat::Identity(1, 1), s) == doctest::Approx(std::log1p(s)));
  const CMat A = CMat::Identity(2, 2) + 3.0 * H.adjoint() * H;
  CHECK(capacity(H, 3) == doctest::Approx(std::log(std::abs(A.determinant()))));
}

TEST_CASE("Gauss-Laguerre quadrature") {
  const auto q = gauss_laguerre(20);
  double m0 = 0, m3 = 0;
  for (int i = 0; i < 20; ++i) {
    m0 += q.w[i];
    m3 += q.w[i] * std::pow(q.x[i], 3);
  }
  CHECK(m0 == doctest::Approx(1).epsilon(1e-12));
  CHECK(m3 == doctest::Approx(6).epsilon(1e-10));

  ChannelModel m;
  m.kind = ChannelKind::Ergodic;
  // closed-form values 0.596347, 2.014643, 4.078511
  for (double s : {1.0, 10.0, 100.0}) {
    CHECK(ergodic_capacity(m, s) == doctest::Approx(rayleigh_capacity(s)).epsilon(1e-4));
    CHECK(ergodic_capacity_mc(m, s, 200000, 9) == doctest::Approx(rayleigh_capacity(s)).epsilon(0.01));
  }
  CHECK(rayleigh_capacity(10) == doctest::Approx(2.014643).epsilon(1e-6));
  CHECK(mean_log_gain(m) == doctest::Approx(-std::numbers::egamma / 2));
  CHECK(mean_log_gain(m, 200000, 4) == doctest::Approx(-std::numbers::egamma / 2).epsilon(0.02));
}

TEST_CASE("Wilson interval") {
  const auto a = wilson_interval(0, 100);
  CHECK(a.lo == doctest::Approx(0).epsilon(1e-15));
  CHECK(a.hi == doctest::Approx(0.036995).epsilon(1e-4));
  const auto b = wilson_interval(50, 100);
  CHECK((b.lo + b.hi) / 2 == doctest::Approx(0.5));
  CHECK(b.hi - b.lo == doctest::Approx(2 * 0.09617).epsilon(1e-3));
  for (long e = 0; e <= 40; ++e) {
    const auto c = wilson_interval(e, 40);
    CHECK(c.lo <= e / 40.0);
    CHECK(c.hi >= e / 40.0);
  }
}

TEST_CASE("strict configuration") {
  CHECK_NOTHROW(parse_config(small_config()));
  auto j = small_config();
  j.erase("seed");
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = small_config();
  j["sigma_w"] = 0.5;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = small_config();
  j["channel"]["snr"] = 3;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = small_config();
  j["code"]["p"] = 27;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = small_config();
  j["trials"] = 0;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = small_config();
  j["decoder"] = "sphere";
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = small_config();
  j["code"]["kind"] = "golden";
  CHECK_THROWS_AS(parse_config(j), ConfigError);

  const auto c = parse_config(small_config());
  const auto round = parse_config(to_json(c));
  CHECK(to_json(round) == to_json(c));
}

TEST_CASE("runs are reproducible and thread-count independent") {
  auto j = small_config();
  const auto a = run_trials(parse_config(j));
  const auto b = run_trials(parse_config(j));
  j["threads"] = 1;
  const auto c = run_trials(parse_config(j));
  auto strip = [](SimResult r) {
    r.wall_seconds = 0;
    r.config.threads = 0;
    return to_json(r).dump();
  };
  CHECK(strip(a) == strip(b));
  CHECK(strip(a) == strip(c));
  CHECK(a.errors >= 0);
  CHECK(a.wer <= 1);
  j["seed"] = 6;
  CHECK(strip(run_trials(parse_config(j))) != strip(a));
}

TEST_CASE("grid expansion") {
  CHECK(expand_grid(small_config(), json::object()).size() == 1);
  CHECK(expand_grid(small_config(), {{"/code/T", json::array()}}).empty());
  CHECK(sweep({}).empty());
  const auto cs = expand_grid(small_config(), {{"/code/T", {8, 16}}, {"/vnr_margin_db", {1, 2, 3}}});
  REQUIRE(cs.size() == 6);
  CHECK(cs[0].code.T == 8);
  CHECK(cs[1].code.T == 16);
  CHECK(*cs[5].vnr_margin_db == 3);
  CHECK_THROWS_AS(expand_grid(small_config(), {{"/code/bogus", {1}}}), ConfigError);
}

TEST_CASE("word error rate grows with the noise level") {
  auto j = small_config();
  j.erase("vnr_margin_db");
  j["trials"] = 300;
  double prev = -1;
  for (double sw : {0.5, 0.8, 1.1, 1.4, 1.8}) {
    j["sigma_w"] = sw;
    const auto r = run_trials(parse_config(j));
    CHECK(r.wer >= prev);
    prev = r.wer;
  }
  CHECK(prev > 0.5);
}

TEST_CASE("every decoder runs on every channel kind it supports") {
  auto j = small_config();
  j["trials"] = 30;
  for (const char* d : {"map", "zero-forcing", "mod-p"}) {
    j["decoder"] = d;
    j["lattice_decoder"] = "cvp";
    CHECK(run_trials(parse_config(j)).trials == 30);
  }
  j["lattice_decoder"] = "multistage";
  j["decoder"] = "zero-forcing";
  CHECK(run_trials(parse_config(j)).wer <= 1);

  json g = {{"channel", {{"kind", "compound-mimo"}, {"det", 1}}},
            {"code", {{"kind", "golden"}, {"T", 1}}},
            {"decoder", "map"},
            {"lattice_decoder", "cvp"},
            {"vnr_margin_db", 6},
            {"trials", 30},
            {"seed", 1}};
  const auto rg = run_trials(parse_config(g));
  CHECK(rg.trials == 30);
  CHECK(rg.wer < 0.5);

  json e = {{"channel", {{"kind", "ergodic"}}},
            {"code", {{"p", 29}, {"k", 1}}},
            {"mode", "power"},
            {"sigma_w", 1.5},
            {"sigma_s", 40},
            {"decoder", "map"},
            {"lattice_decoder", "cvp"},
            {"trials", 30},
            {"seed", 1}};
  const auto re = run_trials(parse_config(e));
  CHECK(re.extra.contains("threshold_optimal_real"));
  CHECK(re.extra["threshold_optimal_real"].get<double>() ==
        doctest::Approx(2 * re.extra["threshold_definition_complex"].get<double>()));
  CHECK(re.capacity_nats == doctest::Approx(rayleigh_capacity(1600 / 2.25)).epsilon(1e-3));
}
