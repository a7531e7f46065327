#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "alc/channel_sim.hpp"
#include "alc/construction_a.hpp"
#include "alc/lattice.hpp"
#include "alc/mimo_codec.hpp"
#include "alc/numberfield.hpp"
#include "alc/unit_equalizer.hpp"
#include "json.hpp"

using namespace alc;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

struct LatticeArgs {
  std::string field = "Q(i,sqrt5)";
  std::uint32_t p = 29;
  int T = 2;
  int k = 1;
  std::string code = "reed-solomon";
  std::uint64_t seed = 1;
  int zn = 0;
  double alpha = 1;

  void add(CLI::App* app) {
    app->add_option("--field", field, "number field")->capture_default_str();
    app->add_option("--p", p, "prime")->capture_default_str();
    app->add_option("--T", T, "code length (blocks)")->capture_default_str();
    app->add_option("--k", k, "code dimension")->capture_default_str();
    app->add_option("--code", code, "reed-solomon | random")->capture_default_str();
    app->add_option("--seed", seed, "seed for random codes")->capture_default_str();
    app->add_option("--alpha", alpha, "scaling")->capture_default_str();
    app->add_option("--zn", zn, "use Z^n instead of a Construction A lattice");
  }

  ConstructionALattice construction() const {
    const NumberField K = NumberField::by_name(field);
    const PrimeSplit split = split_prime(K, p);
    LinearCode C = zero_code(split.residue_field, T);
    if (code == "reed-solomon") {
      if (split.l != 1) throw ConfigError("Reed-Solomon codes need a degree-one prime");
      C = ReedSolomon(p, T, k).code();
    } else if (code == "random") {
      std::mt19937_64 rng(seed);
      C = random_code(p, split.l, T, k, rng);
    } else {
      throw ConfigError("unknown code: " + code);
    }
    return lift_compound(K, split, C, alpha);
  }

  ComplexLattice lattice() const {
    if (zn > 0) return ComplexLattice::from_real(RMat::Identity(zn, zn), "Z^" + std::to_string(zn)).scaled(alpha);
    const auto L = construction();
    return ComplexLattice::from_real(L.lattice.basis(), field + " p=" + std::to_string(p) + " T=" + std::to_string(T) +
                                                            " k=" + std::to_string(k) + " " + code);
  }
};

int cmd_field_info(const std::string& name) {
  const NumberField K = NumberField::by_name(name);
  json j = {{"name", K.name()},
            {"degree", K.degree()},
            {"discriminant", K.discriminant()},
            {"totally_real", K.totally_real()},
            {"embeddings", K.num_embeddings()}};
  json basis = json::array();
  for (const auto& b : K.integral_basis()) basis.push_back(b.str());
  j["integral_basis"] = basis;
  const LogLattice L = build_log_lattice(K);
  json units = json::array();
  for (const auto& u : L.units) units.push_back(u.str());
  j["fundamental_units"] = units;
  j["unit_rank"] = L.rank();
  j["regulator"] = L.regulator;
  j["quantization_radius"] = L.rho;
  j["covering_radius"] = L.covering_radius;
  json split = json::array();
  for (std::uint32_t p = 3, found = 0; found < 5 && p < 2000; p += 2) {
    bool prime = true;
    for (std::uint32_t d = 3; d * d <= p; d += 2)
      if (p % d == 0) prime = false;
    if (!prime) continue;
    try {
      const auto s = split_prime(K, p);
      if (s.l == 1) {
        split.push_back({{"p", p}, {"generator", s.generator.str()}});
        ++found;
      }
    } catch (const NotSplit&) {
    }
  }
  j["first_split_primes"] = split;
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_lattice_build(const LatticeArgs& a, const std::string& out) {
  const auto L = a.construction();
  json h = {{"field", a.field},
            {"p", a.p},
            {"l", L.split.l},
            {"T", a.T},
            {"k", a.k},
            {"alpha", a.alpha},
            {"volume", L.lattice.volume()},
            {"formula_volume", L.formula_volume() * std::pow(a.alpha, L.lattice.dim())}};
  std::ostringstream s;
  s << "# " << h.dump() << '\n' << std::setprecision(17);
  const RMat& B = L.lattice.basis();
  for (Eigen::Index i = 0; i < B.rows(); ++i) {
    for (Eigen::Index j = 0; j < B.cols(); ++j) s << (j ? "," : "") << B(i, j);
    s << '\n';
  }
  if (out.empty()) {
    std::cout << s.str();
  } else {
    std::ofstream(out) << s.str();
    std::cout << h.dump(2) << '\n';
  }
  return 0;
}

void write_csv(const std::string& path, const std::vector<SimResult>& rs) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << "# alc sweep csv v" << kCsvVersion << '\n' << kCsvHeader << '\n';
  for (const auto& r : rs) f << csv_row(r) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Algebraic lattice codes for compound and fading channels"};
  app.require_subcommand(1);

  auto* field = app.add_subcommand("field", "number field utilities");
  field->require_subcommand(1);
  auto* field_info = field->add_subcommand("info", "integral basis, units, regulator, split primes");
  std::string field_name = "Q(i,sqrt5)";
  field_info->add_option("name", field_name, "field name")->required();

  auto* lattice = app.add_subcommand("lattice", "lattice utilities");
  lattice->require_subcommand(1);
  auto* build = lattice->add_subcommand("build", "Construction A generator matrix as CSV");
  LatticeArgs build_args;
  std::string build_out;
  build_args.add(build);
  build->add_option("--out", build_out, "CSV path (stdout when omitted)");

  auto* flat = app.add_subcommand("flatness", "flatness factor, primal and dual expressions");
  LatticeArgs flat_args;
  double sigma = 1;
  flat_args.add(flat);
  flat->add_option("--sigma", sigma, "Gaussian parameter")->capture_default_str();

  auto* th = app.add_subcommand("theta", "theta series sum exp(-pi tau |v|^2)");
  LatticeArgs th_args;
  double tau = 1;
  th_args.add(th);
  th->add_option("--tau", tau)->capture_default_str();

  auto* gap = app.add_subcommand("gap", "gap-to-capacity bound of the decoupled decoder");
  std::string gap_field, gap_catalog_name;
  gap->add_option("--field", gap_field, "number field");
  gap->add_option("--catalog", gap_catalog_name, "catalog entry: quartic-min | mimo-2x2");

  std::uint64_t seed = 0;
  std::string config_path, out_path, grid_path;
  int trials = 0, threads = -1;
  auto* sim = app.add_subcommand("simulate", "Monte-Carlo word error rate");
  sim->add_option("config", config_path, "JSON config")->required();
  sim->add_option("--seed", seed)->required();
  sim->add_option("--out", out_path, "CSV output");
  sim->add_option("--trials", trials, "override the trial count");
  sim->add_option("--threads", threads, "worker threads (0 = all cores)");

  auto* sw = app.add_subcommand("sweep", "grid of simulations");
  sw->add_option("config", config_path, "JSON config, optionally with a \"grid\" member")->required();
  sw->add_option("--grid", grid_path, "JSON grid file");
  sw->add_option("--seed", seed)->required();
  sw->add_option("--out", out_path, "CSV output");
  sw->add_option("--trials", trials, "override the trial count");
  sw->add_option("--threads", threads, "worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (field_info->parsed()) return cmd_field_info(field_name);
    if (build->parsed()) return cmd_lattice_build(build_args, build_out);
    if (flat->parsed()) {
      const auto L = flat_args.lattice();
      const auto f = flatness_both(L, sigma);
      std::cout << json{{"lattice", L.label()}, {"sigma", sigma}, {"primal", f.primal}, {"dual", f.dual}}.dump(2)
                << '\n';
      return 0;
    }
    if (th->parsed()) {
      const auto L = th_args.lattice();
      std::cout << json{{"lattice", L.label()}, {"tau", tau}, {"theta", theta(L, tau)}}.dump(2) << '\n';
      return 0;
    }
    if (gap->parsed()) {
      if (gap_field.empty() == gap_catalog_name.empty()) throw ConfigError("give exactly one of --field, --catalog");
      const GapBound g =
          gap_field.empty() ? gap_bound(gap_catalog_name) : gap_bound(build_log_lattice(NumberField::by_name(gap_field)));
      json j = {{"source", g.source}, {"m", g.m}, {"gap_nats", g.gap}, {"note", g.note}};
      for (const auto& [k, v] : {std::pair{"rho", g.rho}, {"alpha", g.alpha}, {"general", g.general}, {"tight", g.tight}})
        j[k] = std::isfinite(v) ? json(v) : json(nullptr);
      std::cout << j.dump(2) << '\n';
      return 0;
    }
    if (sim->parsed() || sw->parsed()) {
      json base = read_json(config_path);
      json grid = json::object();
      if (base.contains("grid")) {
        grid = base["grid"];
        base.erase("grid");
      }
      if (!grid_path.empty()) grid = read_json(grid_path);
      base["seed"] = seed;
      if (trials > 0) base["trials"] = trials;
      if (threads >= 0) base["threads"] = threads;
      std::vector<SimConfig> configs;
      if (sim->parsed()) {
        if (!grid.empty()) throw ConfigError("simulate takes a single config; use sweep for grids");
        configs.push_back(parse_config(base));
      } else {
        configs = expand_grid(base, grid);
      }
      const auto results = sweep(configs);
      json out = json::array();
      for (const auto& r : results) out.push_back(to_json(r));
      std::cout << (sim->parsed() ? out[0] : out).dump(2) << '\n';
      if (!out_path.empty()) write_csv(out_path, results);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const NotSplit& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
