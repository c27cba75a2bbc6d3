#include "polyvol/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "polyvol/estimate.hpp"
#include "polyvol/gen.hpp"
#include "polyvol/io.hpp"
#include "polyvol/oracle.hpp"
#include "polyvol/report.hpp"
#include "polyvol/zonored.hpp"

namespace polyvol {

int worker_count(int jobs) {
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("POLYVOL_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) workers = std::min(workers, cap);
  }
  return std::max(1, std::min(workers, jobs));
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int workers = worker_count(n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) fn(i);
    });
  for (auto& t : pool) t.join();
}

namespace {

struct Outcome {
  int code = kExitOk;
  std::string message;
};

// Runs fn and maps its exception to an exit code.
template <class Fn>
Outcome guarded(Fn&& fn) {
  try {
    fn();
    return {};
  } catch (const ParseError& e) {
    return {kExitParse, e.what()};
  } catch (const ScheduleError& e) {
    return {kExitSchedule, e.what()};
  } catch (const std::exception& e) {
    return {kExitFailure, e.what()};
  }
}

int first_failure(const std::vector<Outcome>& outcomes, std::ostream& err) {
  int code = kExitOk;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].code == kExitOk) continue;
    err << "run " << i << ": " << outcomes[i].message << '\n';
    if (code == kExitOk) code = outcomes[i].code;
  }
  return code;
}

std::optional<WalkMode> parse_walk(const std::string& s) {
  if (s == "cdhr") return WalkMode::cdhr;
  if (s == "rdhr") return WalkMode::rdhr;
  return std::nullopt;
}

BodyChoice parse_body(const std::string& s) {
  if (s == "ball") return BodyChoice::ball;
  if (s == "hpoly") return BodyChoice::hbody;
  return BodyChoice::automatic;
}

struct CommonOptions {
  double error = 0.1;
  std::uint64_t seed = 0;
  std::string walk = "auto";
  std::string body = "auto";
  int walk_steps = 1;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--error", o.error, "Requested relative error")->check(CLI::Range(1e-6, 1.0));
  cmd->add_option("--seed", o.seed, "Base RNG seed");
  cmd->add_option("--walk", o.walk, "Hit-and-Run variant")->check(CLI::IsMember({"cdhr", "rdhr", "auto"}));
  cmd->add_option("--body", o.body, "MMC body template")->check(CLI::IsMember({"ball", "hpoly", "auto"}));
  cmd->add_option("--walk-steps", o.walk_steps, "Hit-and-Run steps per point")->check(CLI::PositiveNumber);
}

VolumeConfig config_from(const CommonOptions& o, std::uint64_t seed) {
  VolumeConfig cfg;
  cfg.epsilon = o.error;
  cfg.seed = seed;
  cfg.walk = parse_walk(o.walk);
  cfg.body = parse_body(o.body);
  cfg.walk_steps = o.walk_steps;
  return cfg;
}

std::string text_line(const VolumeReport& r) {
  std::ostringstream s;
  s << std::setprecision(10) << "seed=" << r.seed << " volume=" << r.volume << " log_volume=" << r.log_volume
    << " m=" << r.m << " body=" << r.body << " walk=" << r.walk << " steps=" << r.steps_total
    << " time=" << std::setprecision(4) << r.time_seconds << "s";
  return s.str();
}

struct VolumeCommand {
  CommonOptions common;
  std::string rep;
  std::string file;
  bool round = false;
  int reps = 1;
  bool json = false;
  bool diagnostics = false;

  int run(std::ostream& out, std::ostream& err) const {
    ConvexBody body;
    const Outcome parsed = guarded([&] { body = read_body_file(file, rep); });
    if (parsed.code != kExitOk) {
      err << parsed.message << '\n';
      return parsed.code;
    }
    std::vector<VolumeReport> reports(static_cast<std::size_t>(reps));
    std::vector<Outcome> outcomes(static_cast<std::size_t>(reps));
    parallel_for(reps, [&](int i) {
      outcomes[i] = guarded([&] {
        VolumeConfig cfg = config_from(common, common.seed + static_cast<std::uint64_t>(i));
        cfg.round = round;
        reports[i] = volume(body, cfg);
      });
    });
    for (int i = 0; i < reps; ++i) {
      if (outcomes[i].code != kExitOk) continue;
      out << (json ? report_to_string(reports[i], diagnostics) : text_line(reports[i])) << '\n';
    }
    return first_failure(outcomes, err);
  }
};

struct GenerateCommand {
  std::string kind;
  int d = 0;
  int count = 0;
  std::uint64_t seed = 0;
  std::string out_path;

  int run(std::ostream& out, std::ostream& err) const {
    ConvexBody body;
    std::string name;
    const Outcome made = guarded([&] {
      RngStream rng(seed);
      auto need_count = [&] {
        if (count <= 0) throw std::invalid_argument("generate " + kind + ": a positive count is required");
        return count;
      };
      name = kind + "-" + std::to_string(d);
      if (kind == "cube") body = cube(d);
      else if (kind == "cube-v") body = cube_v(d);
      else if (kind == "cross") body = cross(d);
      else if (kind == "simplex") body = simplex(d);
      else if (kind == "simplex-h") body = simplex_h(d);
      else if (kind == "rh") body = rh(d, need_count(), rng);
      else if (kind == "rv") body = rv(d, need_count(), rng);
      else body = zono(d, need_count(), rng);
      if (count > 0) name += "-" + std::to_string(count);
    });
    if (made.code != kExitOk) {
      err << made.message << '\n';
      return made.code;
    }
    const Outcome written = guarded([&] {
      if (!out_path.empty()) {
        write_body_file(out_path, body, name);
        return;
      }
      if (const auto* h = std::get_if<HPolytope>(&body)) write_ine(out, *h, name);
      else if (const auto* v = std::get_if<VPolytope>(&body)) write_ext(out, *v, name);
      else write_zonotope(out, std::get<Zonotope>(body));
    });
    if (written.code != kExitOk) err << written.message << '\n';
    return written.code;
  }
};

struct ReduceCommand {
  CommonOptions common;
  std::string file;
  std::string instance;
  int reps = 1;

  int run(std::ostream& out, std::ostream& err) const {
    Zonotope z;
    const Outcome parsed = guarded([&] { z = std::get<Zonotope>(read_body_file(file, "z")); });
    if (parsed.code != kExitOk) {
      err << parsed.message << '\n';
      return parsed.code;
    }
    const std::string name = instance.empty() ? std::filesystem::path(file).stem().string() : instance;
    std::vector<Fitness> results(static_cast<std::size_t>(reps));
    std::vector<Outcome> outcomes(static_cast<std::size_t>(reps));
    parallel_for(reps, [&](int i) {
      outcomes[i] = guarded([&] {
        results[i] = fitness(z, config_from(common, common.seed + static_cast<std::uint64_t>(i)));
      });
    });
    for (int i = 0; i < reps; ++i) {
      if (outcomes[i].code != kExitOk) continue;
      const Fitness& f = results[i];
      Json row;
      row["instance"] = name;
      row["d"] = z.dim();
      row["k"] = z.num_generators();
      row["order"] = z.order();
      row["seed"] = f.report.seed;
      row["vol_p_log"] = finite_or_null(f.vol_p_log);
      row["vol_red_log"] = finite_or_null(f.vol_red_log);
      row["R"] = finite_or_null(f.r);
      row["time_seconds"] = finite_or_null(f.report.time_seconds);
      out << row.dump() << '\n';
    }
    return first_failure(outcomes, err);
  }
};

struct BenchCommand {
  CommonOptions common;
  std::string suite;
  std::vector<int> dims{5, 10};
  int seeds = 5;
  double order = 2.0;
  int count = 0;

  struct Row {
    std::string instance;
    int d;
    std::uint64_t seed;
    std::optional<double> exact;
    VolumeReport report;
  };

  Row make_row(int d, std::uint64_t seed) const {
    Row row{suite + "-" + std::to_string(d), d, seed, std::nullopt, {}};
    ConvexBody body;
    RngStream gen_rng(seed);
    if (suite == "cubes") {
      body = cube(d);
      row.instance = "cube-" + std::to_string(d);
      row.exact = exact_cube(d);
    } else if (suite == "crosses") {
      body = cross(d);
      row.instance = "cross-" + std::to_string(d);
      row.exact = exact_cross(d);
    } else if (suite == "simplices") {
      body = simplex(d);
      row.instance = "simplex-" + std::to_string(d);
      row.exact = exact_simplex(d);
    } else if (suite == "rv") {
      const int n = count > 0 ? count : 4 * d;
      body = rv(d, n, gen_rng);
      row.instance = "rv-" + std::to_string(d) + "-" + std::to_string(n);
    } else {
      const int k = count > 0 ? count : static_cast<int>(std::lround(order * d));
      const Zonotope z = zono(d, k, gen_rng);
      row.instance = "z-" + std::to_string(d) + "-" + std::to_string(k);
      try {
        row.exact = exact_zonotope(z);
      } catch (const std::invalid_argument&) {
      }
      body = z;
    }
    VolumeConfig cfg = config_from(common, seed);
    cfg.round = suite == "rv";
    row.report = volume(body, cfg);
    return row;
  }

  int run(std::ostream& out, std::ostream& err) const {
    const int n = static_cast<int>(dims.size()) * seeds;
    std::vector<Row> rows(static_cast<std::size_t>(n));
    std::vector<Outcome> outcomes(static_cast<std::size_t>(n));
    parallel_for(n, [&](int i) {
      const int d = dims[static_cast<std::size_t>(i / seeds)];
      const std::uint64_t seed = common.seed + static_cast<std::uint64_t>(i % seeds);
      outcomes[i] = guarded([&] { rows[i] = make_row(d, seed); });
    });
    out << "suite,instance,d,seed,m,steps,log_volume,volume,exact_log_volume,error,time_seconds\n";
    out << std::setprecision(10);
    for (int i = 0; i < n; ++i) {
      if (outcomes[i].code != kExitOk) continue;
      const Row& r = rows[i];
      out << suite << ',' << r.instance << ',' << r.d << ',' << r.seed << ',' << r.report.m << ','
          << r.report.steps_total << ',' << r.report.log_volume << ',' << r.report.volume << ',';
      if (r.exact) out << *r.exact << ',' << std::abs(std::exp(r.report.log_volume - *r.exact) - 1.0);
      else out << ',';
      out << ',' << r.report.time_seconds << '\n';
    }
    return first_failure(outcomes, err);
  }
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomized volume approximation of convex polytopes"};
  app.require_subcommand(1);

  VolumeCommand vol;
  auto* vol_cmd = app.add_subcommand("volume", "Estimate the volume of a polytope file");
  vol_cmd->add_option("--rep", vol.rep, "Representation")->required()->check(CLI::IsMember({"h", "v", "z"}));
  vol_cmd->add_option("--file", vol.file, "Input file")->required();
  add_common(vol_cmd, vol.common);
  vol_cmd->add_flag("--round", vol.round, "Round a V-polytope by its enclosing ellipsoid first");
  vol_cmd->add_option("--reps", vol.reps, "Repetitions with seeds seed, seed+1, ...")->check(CLI::PositiveNumber);
  vol_cmd->add_flag("--json", vol.json, "Print JSON reports");
  vol_cmd->add_flag("--diagnostics", vol.diagnostics, "Include per-phase data in JSON reports");

  GenerateCommand gen;
  auto* gen_cmd = app.add_subcommand("generate", "Write a polytope from the test database");
  gen_cmd->add_option("kind", gen.kind, "Family")
      ->required()
      ->check(CLI::IsMember({"cube", "cube-v", "cross", "simplex", "simplex-h", "rh", "rv", "z"}));
  gen_cmd->add_option("d", gen.d, "Dimension")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("count", gen.count, "Facets (rh), vertices (rv) or generators (z)");
  gen_cmd->add_option("--seed", gen.seed, "RNG seed");
  gen_cmd->add_option("--out", gen.out_path, "Output file (default: stdout)");

  ReduceCommand red;
  auto* red_cmd = app.add_subcommand("reduce", "PCA order reduction fitness of a zonotope");
  red_cmd->add_option("--file", red.file, "Zonotope file")->required();
  red_cmd->add_option("--instance", red.instance, "Instance name for the output rows");
  red_cmd->add_option("--reps", red.reps, "Repetitions")->check(CLI::PositiveNumber);
  add_common(red_cmd, red.common);

  BenchCommand bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark suite and print CSV");
  bench_cmd->add_option("suite", bench.suite, "Suite")
      ->required()
      ->check(CLI::IsMember({"cubes", "crosses", "simplices", "rv", "zonotopes"}));
  bench_cmd->add_option("--dims", bench.dims, "Dimensions")->delimiter(',');
  bench_cmd->add_option("--seeds", bench.seeds, "Seeds per dimension")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--order", bench.order, "Zonotope order k/d")->check(CLI::Range(1.0, 1000.0));
  bench_cmd->add_option("--count", bench.count, "Vertices (rv) or generators (zonotopes)");
  add_common(bench_cmd, bench.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  if (vol_cmd->parsed()) return vol.run(out, err);
  if (gen_cmd->parsed()) return gen.run(out, err);
  if (red_cmd->parsed()) return red.run(out, err);
  return bench.run(out, err);
}

}  // namespace polyvol
