#pragma once

// Command-line front end. run() parses argv, dispatches to one subcommand and
// writes JSON (default) or CSV to `out`; diagnostics go to `err`.
// Exit codes: 0 success, 2 invalid input, 1 internal error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "orbitdh/dh_core.hpp"
#include "orbitdh/errors.hpp"
#include "orbitdh/kostant_partition.hpp"
#include "orbitdh/orbit_montecarlo.hpp"
#include "orbitdh/polytope_volume.hpp"
#include "orbitdh/rational.hpp"
#include "orbitdh/rootsys.hpp"
#include "orbitdh/weyl.hpp"

namespace orbitdh::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "orbitdh/1";

struct CliConfig {
  std::string type;
  std::string lambda, mu, x;
  std::int64_t k_max = 32;
  std::string k_list;
  std::uint64_t samples = 100000;
  std::size_t bins = 20;
  std::uint64_t seed = 1;
  std::string out = "json";
  std::size_t grid_resolution = 50;
  unsigned threads = 0;
};

inline std::vector<Rational> parse_list(const std::string& text, const std::string& flag) {
  require(!text.empty(), flag + " is required");
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  require(!out.empty() && text.back() != ',', flag + ": malformed list '" + text + "'");
  return out;
}

inline Json to_json(const Rational& q) { return Json{{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}}; }

inline Json to_json(const RationalVector& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(to_json(q));
  return a;
}

inline Json to_json(const std::vector<std::int64_t>& v) { return Json(v); }

inline std::string decimal(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

inline std::string decimal(const Rational& q) { return decimal(q.get_d()); }

inline std::string csv_vector(const RationalVector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + to_string(v[i]);
  return s;
}

inline std::string csv_vector(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

class Runner {
 public:
  Runner(const CliConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {
    require(cfg.out == "json" || cfg.out == "csv", "--out must be json or csv, got '" + cfg.out + "'");
  }

  void dispatch(const std::string& command) {
    command_ = command;
    if (command == "roots") return roots();
    if (command == "weyl") return weyl();
    if (command == "partition") return partition();
    if (command == "volume") return volume();
    if (command == "density") return density();
    if (command == "multiplicity") return multiplicity();
    if (command == "support") return support();
    if (command == "converge") return converge();
    if (command == "grid") return grid();
    if (command == "sample-orbit") return sample_orbit();
    if (command == "pfaffian-check") return pfaffian_check();
    throw ValidationError("unknown subcommand " + command);
  }

 private:
  bool csv() const { return cfg_.out == "csv"; }

  RootSystem root_system() const {
    require(!cfg_.type.empty(), "--type is required");
    return build_root_system(cfg_.type);
  }

  Weight weight(const RootSystem& rs, const std::string& text, const std::string& flag) const {
    Weight w(parse_list(text, flag));
    require(w.size() == rs.rank(), flag + " needs " + std::to_string(rs.rank()) + " coordinates for " +
                                       rs.type().label() + ", got " + std::to_string(w.size()));
    return w;
  }

  RootVector root_vector(const RootSystem& rs) const {
    RootVector v(parse_list(cfg_.x, "--x"));
    require(v.size() == rs.rank(), "--x needs " + std::to_string(rs.rank()) + " coordinates for " +
                                       rs.type().label() + ", got " + std::to_string(v.size()));
    return v;
  }

  Json header(const RootSystem& rs) const {
    return Json{{"schema", kSchema}, {"command", command_}, {"type", rs.type().label()}};
  }

  void emit(const Json& j) { out_ << j.dump(2) << "\n"; }

  void emit_scalar_csv(const std::string& value) { out_ << "result\n" << value << "\n"; }

  void roots() {
    const auto rs = root_system();
    if (csv()) {
      out_ << "index,root,coroot,height\n";
      for (std::size_t a = 0; a < rs.num_positive_roots(); ++a) {
        std::int64_t height = 0;
        for (auto c : rs.positive_roots()[a]) height += c;
        out_ << a << "," << csv_vector(rs.positive_roots()[a]) << "," << csv_vector(rs.positive_coroots()[a]) << ","
             << height << "\n";
      }
      return;
    }
    Json j = header(rs);
    j["rank"] = rs.rank();
    j["num_positive_roots"] = rs.num_positive_roots();
    j["s"] = rs.s();
    j["cartan_matrix"] = rs.cartan_matrix();
    j["positive_roots"] = rs.positive_roots();
    j["positive_coroots"] = rs.positive_coroots();
    j["delta"] = to_json(rs.delta().coords);
    emit(j);
  }

  void weyl() {
    const auto rs = root_system();
    const WeylGroup wg(rs);
    if (csv()) {
      out_ << "index,length,sign,inverse\n";
      for (const auto& w : wg.elements()) out_ << w.index << "," << w.length << "," << w.sign << "," << w.inverse_index << "\n";
      return;
    }
    Json j = header(rs);
    j["order"] = wg.order();
    j["longest_length"] = wg.longest_element().length;
    Json elems = Json::array();
    for (const auto& w : wg.elements())
      elems.push_back(Json{{"index", w.index}, {"length", w.length}, {"sign", w.sign}, {"inverse", w.inverse_index},
                           {"matrix", w.action}});
    j["elements"] = std::move(elems);
    emit(j);
  }

  void partition() {
    const auto rs = root_system();
    const auto x = root_vector(rs);
    const BigInt p = partition_count(rs, x);
    if (csv()) return emit_scalar_csv(p.get_str());
    Json j = header(rs);
    j["x"] = to_json(x.coords);
    j["result"] = p.get_str();
    emit(j);
  }

  void volume() {
    const auto rs = root_system();
    const auto b = root_vector(rs);
    const FiberGeometry fg(rs);
    const Rational v = fg.volume(b);
    if (csv()) return emit_scalar_csv(to_string(v));
    Json j = header(rs);
    j["x"] = to_json(b.coords);
    j["dimension"] = fg.dimension();
    j["result"] = to_json(v);
    j["decimal"] = decimal(v);
    Json verts = Json::array();
    for (const auto& vert : fg.vertices(b)) verts.push_back(to_json(vert));
    j["vertices"] = std::move(verts);
    emit(j);
  }

  void density() {
    const auto rs = root_system();
    const auto lambda = weight(rs, cfg_.lambda, "--lambda");
    const auto mu = weight(rs, cfg_.mu, "--mu");
    const DHContext ctx(rs);
    const Rational f = ctx.density(lambda, mu);
    if (csv()) return emit_scalar_csv(to_string(f));
    Json j = header(rs);
    j["lambda"] = to_json(lambda.coords);
    j["mu"] = to_json(mu.coords);
    j["result"] = to_json(f);
    j["decimal"] = decimal(f);
    j["hull_position"] = to_string(ctx.hull_position(lambda, mu));
    j["on_wall"] = ctx.on_wall(lambda, mu);
    emit(j);
  }

  void multiplicity() {
    const auto rs = root_system();
    const auto lambda = weight(rs, cfg_.lambda, "--lambda");
    const auto mu = weight(rs, cfg_.mu, "--mu");
    const DHContext ctx(rs);
    const BigInt m = ctx.multiplicity(lambda, mu);
    if (csv()) return emit_scalar_csv(m.get_str());
    Json j = header(rs);
    j["lambda"] = to_json(lambda.coords);
    j["mu"] = to_json(mu.coords);
    j["result"] = m.get_str();
    j["freudenthal"] = ctx.freudenthal_multiplicity(lambda, mu).get_str();
    emit(j);
  }

  void support() {
    const auto rs = root_system();
    const auto lambda = weight(rs, cfg_.lambda, "--lambda");
    const DHContext ctx(rs);
    const auto table = ctx.freudenthal_table(lambda);
    if (csv()) {
      for (std::size_t i = 0; i < rs.rank(); ++i) out_ << "mu" << (i + 1) << ",";
      out_ << "multiplicity\n";
      for (const auto& [mu, m] : table) {
        for (const auto& c : mu.coords) out_ << to_string(c) << ",";
        out_ << m.get_str() << "\n";
      }
      return;
    }
    Json j = header(rs);
    j["lambda"] = to_json(lambda.coords);
    j["dimension"] = ctx.weyl_dimension(lambda).get_str();
    Json weights = Json::array();
    for (const auto& [mu, m] : table) weights.push_back(Json{{"mu", to_json(mu.coords)}, {"multiplicity", m.get_str()}});
    j["weights"] = std::move(weights);
    emit(j);
  }

  std::vector<std::int64_t> k_values() const {
    std::vector<std::int64_t> ks;
    if (!cfg_.k_list.empty()) {
      for (const auto& q : parse_list(cfg_.k_list, "--k-list")) {
        require(is_integer(q) && q.get_num().fits_slong_p(), "--k-list entries must be integers");
        ks.push_back(q.get_num().get_si());
      }
      return ks;
    }
    require(cfg_.k_max >= 1, "--k-max must be positive");
    for (std::int64_t k = 1; k <= cfg_.k_max; ++k) ks.push_back(k);
    return ks;
  }

  void converge() {
    const auto rs = root_system();
    const auto lambda = weight(rs, cfg_.lambda, "--lambda");
    const auto mu = weight(rs, cfg_.mu, "--mu");
    const auto table = DHContext(rs).convergence_series(lambda, mu, k_values());
    if (csv()) {
      out_ << "k,multiplicity,scaled,density,abs_error\n";
      for (const auto& r : table.rows)
        out_ << r.k << "," << r.multiplicity.get_str() << "," << decimal(r.scaled) << "," << decimal(r.density) << ","
             << decimal(r.abs_error) << "\n";
      return;
    }
    Json j = header(rs);
    j["lambda"] = to_json(lambda.coords);
    j["mu"] = to_json(mu.coords);
    j["s"] = table.s;
    j["density"] = to_json(table.rows.front().density);
    j["mu_on_wall"] = table.mu_on_wall;
    if (std::isnan(table.fitted_slope))
      j["fitted_slope"] = nullptr;
    else
      j["fitted_slope"] = table.fitted_slope;
    Json rows = Json::array();
    for (const auto& r : table.rows)
      rows.push_back(Json{{"k", r.k},
                          {"multiplicity", r.multiplicity.get_str()},
                          {"scaled", to_json(r.scaled)},
                          {"abs_error", to_json(r.abs_error)},
                          {"abs_error_decimal", decimal(r.abs_error)}});
    j["rows"] = std::move(rows);
    emit(j);
  }

  unsigned workers(std::size_t jobs) const {
    unsigned t = cfg_.threads ? cfg_.threads : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::clamp<std::size_t>(jobs, 1, t));
  }

  // Density at the centers of a resolution^rank grid of cells covering the
  // bounding box of the Weyl-orbit hull.
  void grid() {
    const auto rs = root_system();
    require(rs.rank() == 1 || rs.rank() == 2, "grid supports rank 1 and rank 2 types, got rank " +
                                                  std::to_string(rs.rank()));
    require(cfg_.grid_resolution >= 1, "--grid-resolution must be positive");
    const auto lambda = weight(rs, cfg_.lambda, "--lambda");
    const DHContext ctx(rs);
    require(is_strongly_dominant(lambda), "lambda' = " + lambda.str() + " is not strongly dominant");
    const BinGrid box = hull_bounding_grid(rs, lambda, cfg_.grid_resolution);

    std::vector<Weight> points;
    for (std::size_t flat = 0; flat < box.size(); ++flat) {
      const auto idx = box.unflatten(flat);
      Weight mu = Weight::zero(rs.rank());
      for (std::size_t a = 0; a < rs.rank(); ++a) mu[a] = box.edge(a, idx[a]) + box.width(a) / 2;
      points.push_back(std::move(mu));
    }
    std::vector<Rational> values(points.size());
    const unsigned t = workers(points.size());
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < t; ++w)
        pool.emplace_back([&, w] {
          for (std::size_t i = w; i < points.size(); i += t) values[i] = ctx.density(lambda, points[i]);
        });
    }

    if (csv()) {
      for (std::size_t a = 0; a < rs.rank(); ++a) out_ << "mu" << (a + 1) << ",";
      out_ << "density\n";
      for (std::size_t i = 0; i < points.size(); ++i) {
        for (const auto& c : points[i].coords) out_ << decimal(c) << ",";
        out_ << decimal(values[i]) << "\n";
      }
      return;
    }
    Json j = header(rs);
    j["lambda"] = to_json(lambda.coords);
    j["resolution"] = cfg_.grid_resolution;
    j["lo"] = to_json(box.lo);
    j["hi"] = to_json(box.hi);
    Json pts = Json::array();
    for (std::size_t i = 0; i < points.size(); ++i)
      pts.push_back(Json{{"mu", to_json(points[i].coords)}, {"density", to_json(values[i])}, {"decimal", decimal(values[i])}});
    j["points"] = std::move(pts);
    emit(j);
  }

  void sample_orbit() {
    const auto rs = root_system();
    require(rs.type().factors().size() == 1 && rs.type().factors()[0].family == 'A' && rs.rank() <= 2,
            "sample-orbit supports SU(2) and SU(3), i.e. --type A1 or A2");
    const auto lambda = weight(rs, cfg_.lambda, "--lambda");
    OrbitSampleConfig sc;
    sc.n = rs.rank() + 1;
    sc.lambda = lambda;
    sc.sample_count = cfg_.samples;
    sc.seed = cfg_.seed;
    sc.threads = cfg_.threads;
    require(is_strongly_dominant(lambda), "lambda' = " + lambda.str() + " is not strongly dominant");
    sc.grid = hull_bounding_grid(rs, lambda, cfg_.bins);
    const auto e = sample_pushforward(sc);
    if (csv()) return write_histogram_csv(out_, e);

    const auto report = compare_to_exact(e, rs, lambda);
    Json j = header(rs);
    j["lambda"] = to_json(lambda.coords);
    j["samples"] = cfg_.samples;
    j["seed"] = cfg_.seed;
    j["bins"] = cfg_.bins;
    j["outside"] = e.outside;
    j["tv_distance"] = report.tv_distance;
    j["noise_floor"] = report.noise_floor;
    j["max_abs_z"] = report.max_abs_z;
    Json hist = Json::array();
    const auto freq = e.frequencies();
    for (std::size_t b = 0; b < e.counts.size(); ++b)
      hist.push_back(Json{{"center", e.grid.center(b)},
                          {"count", e.counts[b]},
                          {"frequency", freq[b]},
                          {"expected", report.expected[b]},
                          {"z", report.z_scores[b]},
                          {"near_wall", static_cast<bool>(report.near_wall[b])}});
    j["histogram"] = std::move(hist);
    emit(j);
  }

  void pfaffian_check() {
    const auto rs = root_system();
    const auto lambda = weight(rs, cfg_.lambda, "--lambda");
    const DHContext ctx(rs);
    const auto& wg = ctx.weyl_group();
    bool all = true;
    Json elems = Json::array();
    if (csv()) out_ << "index,length,weyl_sign,pfaffian_sign,pfaffian\n";
    for (const auto& w : wg.elements()) {
      const int ps = pfaffian_sign(rs, wg, w, lambda);
      const Rational pf = ctx.pfaffian(w, lambda);
      all = all && ps == w.sign && sgn(pf) == w.sign;
      if (csv())
        out_ << w.index << "," << w.length << "," << w.sign << "," << ps << "," << to_string(pf) << "\n";
      else
        elems.push_back(Json{{"index", w.index}, {"length", w.length}, {"weyl_sign", w.sign}, {"pfaffian_sign", ps},
                             {"pfaffian", to_json(pf)}});
    }
    if (csv()) return;
    Json j = header(rs);
    j["lambda"] = to_json(lambda.coords);
    j["all_match"] = all;
    j["elements"] = std::move(elems);
    emit(j);
  }

  const CliConfig& cfg_;
  std::ostream& out_;
  std::string command_;
};

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"Duistermaat-Heckman densities, Kostant multiplicities and their asymptotics"};
  app.name("orbitdh");
  app.require_subcommand(1, 1);

  auto with_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "output format: json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
    return sub;
  };
  auto with_type = [&](CLI::App* sub) {
    sub->add_option("--type", cfg.type, "root system, e.g. A2, B2, G2, A1xA2")->required();
    return with_common(sub);
  };

  with_type(app.add_subcommand("roots", "positive roots, coroots and Cartan matrix"));
  with_type(app.add_subcommand("weyl", "Weyl group elements with lengths and signs"));
  auto* partition = with_type(app.add_subcommand("partition", "Kostant partition function p(x)"));
  partition->add_option("--x", cfg.x, "simple-root coordinates, comma separated")->required();
  auto* volume = with_type(app.add_subcommand("volume", "asymptotic partition function (fiber polytope volume)"));
  volume->add_option("--x", cfg.x, "simple-root coordinates, comma separated rationals")->required();
  for (const char* name : {"density", "multiplicity", "converge"}) {
    auto* sub = with_type(app.add_subcommand(name, name == std::string("density")        ? "Duistermaat-Heckman density"
                                                   : name == std::string("multiplicity") ? "weight multiplicity"
                                                                                         : "scaled multiplicity series"));
    sub->add_option("--lambda", cfg.lambda, "highest weight, fundamental coordinates")->required();
    sub->add_option("--mu", cfg.mu, "weight, fundamental coordinates")->required();
    if (name == std::string("converge")) {
      sub->add_option("--k-max", cfg.k_max, "use k = 1..k-max");
      sub->add_option("--k-list", cfg.k_list, "explicit increasing k values, comma separated");
    }
  }
  auto* support = with_type(app.add_subcommand("support", "weights and multiplicities of an irreducible representation"));
  support->add_option("--lambda", cfg.lambda, "highest weight")->required();
  auto* grid = with_type(app.add_subcommand("grid", "density on a regular grid over the orbit hull"));
  grid->add_option("--lambda", cfg.lambda, "strongly dominant weight")->required();
  grid->add_option("--grid-resolution", cfg.grid_resolution, "cells per axis");
  auto* sample = with_type(app.add_subcommand("sample-orbit", "Monte Carlo moment-map pushforward for SU(2)/SU(3)"));
  sample->add_option("--lambda", cfg.lambda, "strongly dominant integral weight")->required();
  sample->add_option("--samples", cfg.samples, "number of Haar samples");
  sample->add_option("--bins", cfg.bins, "bins per axis");
  sample->add_option("--seed", cfg.seed, "64-bit seed");
  auto* pf = with_type(app.add_subcommand("pfaffian-check", "Pfaffian signs at the torus-fixed points"));
  pf->add_option("--lambda", cfg.lambda, "strongly dominant weight")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  const auto subs = app.get_subcommands();

  try {
    std::ostringstream buffer;
    Runner runner(cfg, buffer);
    runner.dispatch(subs.front()->get_name());
    out << buffer.str();
    return 0;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace orbitdh::cli
