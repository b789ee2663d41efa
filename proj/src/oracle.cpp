#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "rarp/verifier.hpp"

namespace rarp {

namespace {

// Feasibility is written out from the constraint system directly rather than
// through the geometry module, so the oracle stays independent of the solver.
struct GridSearch {
  const Instance& inst;
  double resolution;
  std::uint64_t steps;
  OracleObjective mode;
  std::vector<double> cap;  // containment cap, already limited by scale_upper

  std::vector<double> current;
  OracleResult best;

  double term(std::size_t i, double a) const {
    const double area = inst.items[i].base_width * inst.items[i].base_height;
    return mode == OracleObjective::Linear ? a * area : a * a * area;
  }

  bool pair_ok(std::size_t i, double ai, std::size_t j, double aj) const {
    const ItemSpec& p = inst.items[i];
    const ItemSpec& q = inst.items[j];
    const double dx = std::abs(p.anchor.x - q.anchor.x);
    const double dy = std::abs(p.anchor.y - q.anchor.y);
    return ai * p.base_width + aj * q.base_width <= 2.0 * dx ||
           ai * p.base_height + aj * q.base_height <= 2.0 * dy;
  }

  // Largest feasible scale for the last item given all others.
  double last_upper(std::size_t last) const {
    const ItemSpec& l = inst.items[last];
    double ub = cap[last];
    for (std::size_t e = 0; e < last; ++e) {
      const ItemSpec& o = inst.items[e];
      const double dx = std::abs(l.anchor.x - o.anchor.x);
      const double dy = std::abs(l.anchor.y - o.anchor.y);
      const double bx = (2.0 * dx - current[e] * o.base_width) / l.base_width;
      const double by = (2.0 * dy - current[e] * o.base_height) / l.base_height;
      ub = std::min(ub, std::max(bx, by));
    }
    return ub;
  }

  void evaluate() {
    const std::size_t last = current.size() - 1;
    ++best.evaluations;
    const double ub = last_upper(last);
    if (!(ub > 0.0)) return;
    current[last] = ub;
    ++best.feasible_points;
    double obj = 0.0;
    for (std::size_t i = 0; i < current.size(); ++i) obj += term(i, current[i]);
    if (best.best_scales.empty() || obj > best.best_objective) {
      best.best_objective = obj;
      best.best_scales = current;
    }
  }

  void descend(std::size_t d, std::uint64_t k_begin, std::uint64_t k_end) {
    if (d + 1 == current.size()) {
      evaluate();
      return;
    }
    for (std::uint64_t k = k_begin; k <= k_end; ++k) {
      const double a = static_cast<double>(k) * resolution;
      if (a > cap[d]) break;
      bool ok = true;
      for (std::size_t e = 0; e < d && ok; ++e) ok = pair_ok(d, a, e, current[e]);
      // Pair feasibility is monotone in a: once lost it stays lost.
      if (!ok) break;
      current[d] = a;
      descend(d + 1, 1, steps);
    }
  }
};

double containment_cap(const CanvasSpec& canvas, const ItemSpec& it) {
  const double x = it.anchor.x, y = it.anchor.y;
  return std::min({2.0 * x / it.base_width, 2.0 * (canvas.width - x) / it.base_width, 2.0 * y / it.base_height,
                   2.0 * (canvas.height - y) / it.base_height});
}

}  // namespace

OracleResult oracle_max(const Instance& instance, double resolution, double scale_upper, OracleObjective mode,
                        int jobs) {
  const std::size_t n = instance.items.size();
  if (n > kOracleMaxItems) {
    throw InstanceTooLarge("oracle supports at most " + std::to_string(kOracleMaxItems) + " items, got " +
                           std::to_string(n));
  }
  if (!(resolution > 0.0) || !(scale_upper > 0.0)) {
    throw std::invalid_argument("oracle resolution and scale_upper must be positive");
  }
  OracleResult empty;
  empty.grid_resolution = resolution;
  if (n == 0) {
    empty.feasible_points = 1;
    return empty;
  }

  const auto steps = static_cast<std::uint64_t>(std::floor(scale_upper / resolution * (1.0 + 1e-12)));
  std::vector<double> cap(n);
  for (std::size_t i = 0; i < n; ++i) cap[i] = std::min(scale_upper, containment_cap(instance.canvas, instance.items[i]));

  const auto make = [&] {
    GridSearch s{instance, resolution, steps, mode, cap, std::vector<double>(n, 0.0), {}};
    s.best.grid_resolution = resolution;
    return s;
  };

  if (n == 1 || jobs <= 1) {
    GridSearch s = make();
    s.descend(0, 1, steps);
    return s.best;
  }

  // Chunk the first coordinate; chunks are reduced in order so the result
  // does not depend on the worker count.
  const auto workers = static_cast<std::uint64_t>(std::max(1, jobs));
  std::vector<GridSearch> parts;
  parts.reserve(workers);
  for (std::uint64_t w = 0; w < workers; ++w) parts.push_back(make());
  std::vector<std::thread> threads;
  const std::uint64_t chunk = (steps + workers - 1) / workers;
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t lo = 1 + w * chunk;
    const std::uint64_t hi = std::min(steps, (w + 1) * chunk);
    if (lo > hi) continue;
    threads.emplace_back([&parts, w, lo, hi] { parts[w].descend(0, lo, hi); });
  }
  for (auto& t : threads) t.join();

  OracleResult out = make().best;
  for (const GridSearch& p : parts) {
    out.evaluations += p.best.evaluations;
    out.feasible_points += p.best.feasible_points;
    if (!p.best.best_scales.empty() && (out.best_scales.empty() || p.best.best_objective > out.best_objective)) {
      out.best_objective = p.best.best_objective;
      out.best_scales = p.best.best_scales;
    }
  }
  return out;
}

}  // namespace rarp
