// rarp: batch front end for generating, solving, checking and rendering
// anchored packing instances.
//
//   rarp gen --batch 10 --seed 1 --out data/
//   rarp solve data/instance_*.json --out data/
//   rarp verify data/instance_*.json --out data/
//   rarp render data/instance_*.json --out data/
//
// Every subcommand accepts --config PATH (a JSON object whose keys mirror the
// long flags, e.g. {"sep_abs": 4, "batch": 20}); flags given on the command
// line win over the file.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "rarp/json_read.hpp"
#include "rarp/json_text.hpp"
#include "rarp/pipeline.hpp"
#include "rarp/shapes.hpp"
#include "rarp/solver.hpp"
#include "rarp/verifier.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kBadInput = 2 };

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  std::string out = ".";
  int jobs = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON file with default values for the flags below");
  cmd->add_option("--seed", c.seed, "Base seed");
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

// One line of output and an exit status per batch element.
struct Outcome {
  int code = kOk;
  std::string message;
};

// Runs task(i) for i in [0, count) on `jobs` threads and prints the messages
// in index order, so logs do not depend on scheduling.
template <typename Task>
int run_batch(std::size_t count, int jobs, Task task) {
  std::vector<Outcome> outcomes(count);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        outcomes[i] = task(i);
      } catch (const rarp::InvalidInstance& e) {
        outcomes[i] = {kBadInput, std::string("invalid instance: ") + e.what()};
      } catch (const rarp::Error& e) {
        outcomes[i] = {kBadInput, e.what()};
      } catch (const std::exception& e) {
        outcomes[i] = {kBadInput, e.what()};
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::max(1, jobs));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::min(threads, count); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = kOk;
  for (const Outcome& o : outcomes) {
    if (!o.message.empty()) (o.code == kOk ? std::cout : std::cerr) << o.message << '\n';
    code = std::max(code, o.code);
  }
  return code;
}

std::string stem_of(const std::string& path) {
  std::string s = fs::path(path).filename().string();
  for (const char* suffix : {".solution.json", ".report.json", ".json"}) {
    const std::string suf = suffix;
    if (s.size() > suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0) {
      return s.substr(0, s.size() - suf.size());
    }
  }
  return s;
}

std::uint64_t stem_seed(std::uint64_t seed, const std::string& stem) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : stem) h = (h ^ c) * 1099511628211ull;
  return rarp::mix_seed(seed, h);
}

std::string out_path(const Common& c, const std::string& name) { return (fs::path(c.out) / name).string(); }

// Solutions live next to the instance unless a directory is given.
std::string solution_path(const std::string& instance_path, const std::string& dir) {
  const fs::path base = dir.empty() ? fs::path(instance_path).parent_path() : fs::path(dir);
  return (base / (stem_of(instance_path) + ".solution.json")).string();
}

std::string config_flag(const std::string& key) {
  std::string flag = "--" + key;
  std::replace(flag.begin(), flag.end(), '_', '-');
  return flag;
}

std::string config_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return rarp::format_number(v.get<double>());
  return v.dump();
}

// Expands --config into flag tokens placed ahead of the command-line ones.
// Keys may sit at the top level or under the subcommand's name; a key whose
// flag also appears on the command line is dropped. "inputs" supplies
// positional arguments when none are given.
std::vector<std::string> expand_config(const std::vector<std::string>& args, const std::string& subcommand) {
  std::string path;
  std::set<std::string> explicit_flags;
  bool has_positional = false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) == 0) {
      const std::string name = a.substr(0, a.find('='));
      explicit_flags.insert(name);
      if (name == "--config") path = a.find('=') != std::string::npos ? a.substr(a.find('=') + 1) : (i + 1 < args.size() ? args[i + 1] : "");
    } else if (i > 0 && args[i - 1].rfind("--", 0) != 0) {
      has_positional = true;
    } else if (i == 0) {
      has_positional = true;
    }
  }
  if (path.empty()) return args;

  const nlohmann::json doc = rarp::json_read::parse(rarp::read_file(path), path);
  if (!doc.is_object()) throw rarp::ParseError(path + ": config must be a JSON object");
  std::vector<std::pair<std::string, nlohmann::json>> entries;
  for (const auto& [k, v] : doc.items()) {
    if (v.is_object()) continue;
    entries.emplace_back(k, v);
  }
  if (doc.contains(subcommand) && doc[subcommand].is_object()) {
    for (const auto& [k, v] : doc[subcommand].items()) entries.emplace_back(k, v);
  }

  std::vector<std::string> tokens;
  std::vector<std::string> positionals;
  for (const auto& [key, value] : entries) {
    if (key == "inputs") {
      if (has_positional) continue;
      for (const auto& v : value.is_array() ? value : nlohmann::json::array({value})) positionals.push_back(config_scalar(v));
      continue;
    }
    const std::string flag = config_flag(key);
    if (explicit_flags.count(flag) != 0) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) tokens.push_back(flag);
    } else if (value.is_array()) {
      tokens.push_back(flag);
      for (const auto& v : value) tokens.push_back(config_scalar(v));
    } else {
      tokens.push_back(flag);
      tokens.push_back(config_scalar(value));
    }
  }
  // Positionals must come first so a trailing multi-value flag cannot swallow them.
  std::vector<std::string> out = positionals;
  out.insert(out.end(), tokens.begin(), tokens.end());
  out.insert(out.end(), args.begin(), args.end());
  return out;
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  Common common;
  rarp::GenConfig cfg;
  int batch = 1;
  std::string mask;
};

int cmd_gen(GenArgs& a) {
  if (!a.mask.empty()) {
    const rarp::SnugCanvas snug = rarp::snug_canvas_from_mask(rarp::foreground_of(rarp::decode_pnm(rarp::read_file(a.mask), a.mask)));
    a.cfg.canvas = snug.canvas;
    std::cout << "snug canvas " << rarp::format_number(snug.canvas.width) << "x" << rarp::format_number(snug.canvas.height)
              << " at offset (" << rarp::format_number(snug.offset.x) << ", " << rarp::format_number(snug.offset.y) << ")\n";
  }
  const rarp::Instance probe{a.cfg.canvas, {}, a.cfg.separation};
  if (const auto v = rarp::validate_instance(probe); !v.empty()) {
    std::cerr << "config error: " << rarp::describe(v) << '\n';
    return kBadInput;
  }
  fs::create_directories(a.common.out);
  return run_batch(static_cast<std::size_t>(a.batch), a.common.jobs, [&](std::size_t i) {
    char name[32];
    std::snprintf(name, sizeof name, "instance_%04zu.json", i);
    const rarp::Instance inst = rarp::generate_instance(a.cfg, a.common.seed, i);
    rarp::write_instance(inst, out_path(a.common, name));
    return Outcome{kOk, std::string(name) + ": n=" + std::to_string(inst.size())};
  });
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  Common common;
  std::vector<std::string> inputs;
  rarp::SolveOptions options;
  int pass_cap = 0;
  bool no_boundary_cap = false;
};

int cmd_solve(SolveArgs& a) {
  fs::create_directories(a.common.out);
  if (a.pass_cap > 0) a.options.post_process_pass_cap = a.pass_cap;
  a.options.boundary_cap_singletons = !a.no_boundary_cap;
  return run_batch(a.inputs.size(), a.common.jobs, [&](std::size_t i) {
    const std::string& path = a.inputs[i];
    const std::string stem = stem_of(path);
    const rarp::Instance inst = rarp::read_instance(path);
    rarp::SolveOptions opt = a.options;
    opt.seed = stem_seed(a.common.seed, stem);
    const rarp::SolveResult r = rarp::greedy_solve(inst, opt);
    const rarp::SolutionFile file = rarp::make_solution_file(inst, r.solution);
    rarp::write_solution(file, out_path(a.common, stem + ".solution.json"));
    return Outcome{kOk, stem + ": n=" + std::to_string(inst.size()) + " passes=" +
                            std::to_string(r.trace.post_process_passes) +
                            " linear=" + std::to_string(file.objective.linear)};
  });
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  Common common;
  std::vector<std::string> inputs;
  std::string solutions;
  bool strict = false;
};

int cmd_verify(VerifyArgs& a) {
  fs::create_directories(a.common.out);
  return run_batch(a.inputs.size(), a.common.jobs, [&](std::size_t i) {
    const std::string& path = a.inputs[i];
    const std::string stem = stem_of(path);
    // Input violations are reported, not rejected.
    const rarp::Instance inst = rarp::read_instance(path, /*validate=*/false);
    const rarp::SolutionFile sol = rarp::read_solution(solution_path(path, a.solutions));
    if (sol.solution.size() != inst.size() || sol.packed.size() != inst.size()) {
      return Outcome{kBadInput, stem + ": solution does not match the instance's item count"};
    }
    const rarp::VerificationReport report = rarp::verify(inst, sol.solution, sol.packed, !a.strict);
    rarp::write_file_atomic(out_path(a.common, stem + ".report.json"), rarp::serialize_report(report));
    if (report.pass) return Outcome{kOk, stem + ": pass"};
    return Outcome{kVerifyFailed, stem + ": FAIL with " + std::to_string(report.violation_count()) + " violation(s)"};
  });
}

// ---------------------------------------------------------------- render

struct RenderArgs {
  Common common;
  std::vector<std::string> inputs;
  std::string solutions;
  std::string palette;
  std::string format = "p3";
  int controls = rarp::GenConfig{}.shape_controls;
  double irregularity = rarp::GenConfig{}.irregularity;
};

int cmd_render(RenderArgs& a) {
  fs::create_directories(a.common.out);
  std::optional<std::map<std::string, rarp::Rgb>> custom;
  if (!a.palette.empty()) custom = rarp::parse_palette_config(rarp::read_file(a.palette), a.palette);
  const rarp::PpmFormat format = a.format == "p6" ? rarp::PpmFormat::P6 : rarp::PpmFormat::P3;

  return run_batch(a.inputs.size(), a.common.jobs, [&](std::size_t i) {
    const std::string& path = a.inputs[i];
    const std::string stem = stem_of(path);
    const rarp::Instance inst = rarp::read_instance(path);
    const rarp::SolutionFile sol = rarp::read_solution(solution_path(path, a.solutions));
    if (sol.packed.size() != inst.size()) return Outcome{kBadInput, stem + ": solution does not match the instance"};

    std::vector<int> ids;
    rarp::Palette palette;
    if (custom) {
      // Labels are indexed in order of first appearance.
      std::vector<std::string> labels;
      for (const auto& it : inst.items) {
        auto pos = std::find(labels.begin(), labels.end(), it.class_label);
        if (pos == labels.end()) pos = labels.insert(labels.end(), it.class_label);
        ids.push_back(static_cast<int>(pos - labels.begin()) + 1);
      }
      palette = rarp::palette_for_labels(*custom, labels);
    } else {
      palette = rarp::Palette::standard();
      const auto standard = rarp::standard_class_ids(inst);
      for (std::size_t k = 0; k < standard.size(); ++k) {
        if (!standard[k]) throw rarp::PaletteError("no default color for class '" + inst.items[k].class_label + "'; pass --palette");
        ids.push_back(*standard[k]);
      }
    }
    const rarp::MaskImage mask =
        rarp::rasterize(inst.canvas, sol.packed, rarp::item_shapes(inst, a.controls, a.irregularity), ids);
    rarp::write_mask(mask, palette, out_path(a.common, stem + ".ppm"), format);
    return Outcome{kOk, stem + ": " + std::to_string(mask.width) + "x" + std::to_string(mask.height)};
  });
}

// ---------------------------------------------------------------- oracle

struct OracleArgs {
  Common common;
  std::vector<std::string> inputs;
  double resolution = 1e-3;
  double upper = 0.0;
  std::string objective = "linear";
};

double containment_upper(const rarp::Instance& inst) {
  double upper = 0.0;
  for (const auto& it : inst.items) upper = std::max(upper, rarp::boundary_fit_scale(inst.canvas, it));
  return upper;
}

int cmd_oracle(OracleArgs& a) {
  fs::create_directories(a.common.out);
  const rarp::OracleObjective mode =
      a.objective == "covered_area" ? rarp::OracleObjective::CoveredArea : rarp::OracleObjective::Linear;
  std::vector<std::string> rows(a.inputs.size());
  const int code = run_batch(a.inputs.size(), 1, [&](std::size_t i) {
    const std::string stem = stem_of(a.inputs[i]);
    const rarp::Instance inst = rarp::read_instance(a.inputs[i]);
    const double upper = a.upper > 0.0 ? a.upper : containment_upper(inst);
    const double step = a.resolution * upper;
    const rarp::OracleResult best = rarp::oracle_max(inst, step, upper, mode, a.common.jobs);
    const rarp::Objective h = rarp::objective(inst, rarp::greedy_solve(inst).solution);
    const double heuristic = mode == rarp::OracleObjective::Linear ? h.linear : h.covered_area;
    std::ostringstream row;
    row << stem << ',' << inst.size() << ',' << rarp::format_number(heuristic) << ','
        << (best.found() ? rarp::format_number(best.best_objective) : "") << ','
        << (best.found() ? rarp::format_number(best.best_objective - heuristic) : "") << ','
        << rarp::format_number(step) << ',' << best.evaluations << ',' << best.feasible_points;
    rows[i] = row.str();
    return Outcome{kOk, rows[i]};
  });
  std::string csv = "instance,n,heuristic,oracle,gap,grid_step,evaluations,feasible_points\n";
  for (const auto& r : rows)
    if (!r.empty()) csv += r + '\n';
  rarp::write_file_atomic(out_path(a.common, "oracle.csv"), csv);
  return code;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  Common common;
  std::vector<int> sizes{100, 200, 400, 800, 1600, 3200};
  int repeats = 3;
  double width = 64000;
  double height = 48000;
  double sep_abs = 4.0;
  double size_min = 20.0;
  double size_max = 200.0;
  double max_slope = 2.5;
};

int cmd_bench(BenchArgs& a) {
  fs::create_directories(a.common.out);
  if (a.sizes.size() < 2) {
    std::cerr << "bench needs at least two sizes\n";
    return kBadInput;
  }
  rarp::GenConfig cfg;
  cfg.canvas = {a.width, a.height};
  cfg.separation = {a.sep_abs, 0.0};
  cfg.size_min = a.size_min;
  cfg.size_max = a.size_max;
  cfg.shape_controls = 8;
  std::vector<rarp::Instance> instances(a.sizes.size());
  const int gen_code = run_batch(a.sizes.size(), a.common.jobs, [&](std::size_t i) {
    rarp::GenConfig c = cfg;
    c.n_min = c.n_max = a.sizes[i];
    instances[i] = rarp::generate_instance(c, a.common.seed, i);
    return Outcome{};
  });
  if (gen_code != kOk) return gen_code;

  std::vector<double> xs, times;
  rarp::JsonWriter w;
  w.begin_object();
  w.key("records").begin_array();
  int code = kOk;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const rarp::Instance& inst = instances[i];
    rarp::SolveOptions opt;
    opt.post_process_pass_cap = static_cast<int>(inst.size()) + 2;
    double best = std::numeric_limits<double>::infinity();
    int passes = 0;
    bool cap_hit = false;
    for (int r = 0; r < std::max(1, a.repeats); ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      try {
        passes = rarp::greedy_solve(inst, opt).trace.post_process_passes;
      } catch (const rarp::PassCapExceeded&) {
        cap_hit = true;
      }
      best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    if (cap_hit) code = kVerifyFailed;
    xs.push_back(static_cast<double>(inst.size()));
    times.push_back(best);
    w.begin_object();
    w.key("n").value(inst.size());
    w.key("wall_time").value(best);
    w.key("passes").value(passes);
    w.key("pass_cap_exceeded").value(cap_hit);
    w.end_object();
    char shown[32];
    std::snprintf(shown, sizeof shown, "%.3e", best);
    std::cout << "n=" << inst.size() << " time=" << shown << "s passes=" << passes
              << (cap_hit ? " PASS CAP EXCEEDED" : "") << '\n';
  }
  w.end_array();
  const double slope = rarp::loglog_slope(xs, times);
  w.key("slope").value(slope);
  w.end_object();
  rarp::write_file_atomic(out_path(a.common, "bench.json"), w.str());
  std::printf("log-log slope %.3f\n", slope);
  if (slope > a.max_slope) code = kVerifyFailed;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anchored region packing: generate, solve, verify, render, oracle, bench", "rarp"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate random instances");
  add_common(g, gen.common);
  g->add_option("--batch", gen.batch, "Number of instances")->check(CLI::PositiveNumber);
  g->add_option("--width", gen.cfg.canvas.width, "Canvas width (px)");
  g->add_option("--height", gen.cfg.canvas.height, "Canvas height (px)");
  g->add_option("--mask", gen.mask, "PNM image; the canvas becomes the bounding box of its foreground");
  g->add_option("--sep-abs", gen.cfg.separation.sep_abs, "Minimum anchor gap per axis (px)");
  g->add_option("--sep-pct", gen.cfg.separation.sep_pct, "Minimum anchor gap as a fraction of the canvas side");
  g->add_option("--margin", gen.cfg.margin_frac, "Border strip kept free of anchors, per side")->check(CLI::Range(0.0, 0.4));
  g->add_option("--n-min", gen.cfg.n_min, "Fewest items per instance");
  g->add_option("--n-max", gen.cfg.n_max, "Most items per instance");
  g->add_option("--size-min", gen.cfg.size_min, "Smallest item (longer side, px)");
  g->add_option("--size-max", gen.cfg.size_max, "Largest item (longer side, px)");
  g->add_option("--controls", gen.cfg.shape_controls, "Control points per blob")->check(CLI::Range(4, 100000));
  g->add_option("--irregularity", gen.cfg.irregularity, "Blob irregularity")->check(CLI::Range(0.0, 1.0));

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve instance files");
  add_common(s, solve.common);
  s->add_option("inputs", solve.inputs, "Instance files")->required();
  s->add_flag("--downscale", solve.options.enable_random_downscale, "Randomly shrink each box after solving");
  s->add_option("--downscale-lo", solve.options.downscale_lo, "Smallest downscale factor");
  s->add_option("--downscale-hi", solve.options.downscale_hi, "Largest downscale factor");
  s->add_option("--pass-cap", solve.pass_cap, "Post-processing pass limit (default n + 2)");
  s->add_flag("--no-boundary-cap", solve.no_boundary_cap, "Give a lone item scale 1 instead of fitting it to the canvas");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Check solutions against their instances");
  add_common(v, verify.common);
  v->add_option("inputs", verify.inputs, "Instance files")->required();
  v->add_option("--solutions", verify.solutions, "Directory of <stem>.solution.json files (default: next to each instance)");
  v->add_flag("--strict", verify.strict, "Treat trimmed boxes as protruding");

  RenderArgs render;
  auto* r = app.add_subcommand("render", "Rasterize solutions into class masks");
  add_common(r, render.common);
  r->add_option("inputs", render.inputs, "Instance files")->required();
  r->add_option("--solutions", render.solutions, "Directory of <stem>.solution.json files");
  r->add_option("--palette", render.palette, "JSON palette {label: [r, g, b]}");
  r->add_option("--format", render.format, "p3 or p6")->check(CLI::IsMember({"p3", "p6"}));
  r->add_option("--controls", render.controls, "Control points per blob")->check(CLI::Range(4, 100000));
  r->add_option("--irregularity", render.irregularity, "Blob irregularity")->check(CLI::Range(0.0, 1.0));

  OracleArgs oracle;
  auto* o = app.add_subcommand("oracle", "Compare the heuristic with exhaustive search (up to 4 items)");
  add_common(o, oracle.common);
  o->add_option("inputs", oracle.inputs, "Instance files")->required();
  o->add_option("--resolution", oracle.resolution, "Grid step as a fraction of the scale range")->check(CLI::PositiveNumber);
  o->add_option("--upper", oracle.upper, "Largest scale searched (default: largest canvas fit)");
  o->add_option("--objective", oracle.objective, "linear or covered_area")->check(CLI::IsMember({"linear", "covered_area"}));

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Time the solver over growing instance sizes");
  add_common(b, bench.common);
  b->add_option("--sizes", bench.sizes, "Item counts");
  b->add_option("--repeats", bench.repeats, "Timed runs per size (minimum is kept)");
  b->add_option("--width", bench.width, "Canvas width (px)");
  b->add_option("--height", bench.height, "Canvas height (px)");
  b->add_option("--sep-abs", bench.sep_abs, "Minimum anchor gap per axis (px)");
  b->add_option("--size-min", bench.size_min, "Smallest item (px)");
  b->add_option("--size-max", bench.size_max, "Largest item (px)");
  b->add_option("--max-slope", bench.max_slope, "Exit 1 when the fitted slope exceeds this");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    if (!args.empty() && args[0].rfind("-", 0) != 0) {
      std::vector<std::string> rest(args.begin() + 1, args.end());
      rest = expand_config(rest, args[0]);
      rest.insert(rest.begin(), args[0]);
      args = std::move(rest);
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  } catch (const rarp::Error& e) {
    std::cerr << e.what() << '\n';
    return kBadInput;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*s) return cmd_solve(solve);
    if (*v) return cmd_verify(verify);
    if (*r) return cmd_render(render);
    if (*o) return cmd_oracle(oracle);
    if (*b) return cmd_bench(bench);
  } catch (const rarp::Error& e) {
    std::cerr << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kBadInput;
  }
  return kOk;
}
