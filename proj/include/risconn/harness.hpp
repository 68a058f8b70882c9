#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "risconn/candidates.hpp"
#include "risconn/config.hpp"
#include "risconn/graph.hpp"
#include "risconn/optimize.hpp"
#include "risconn/scenario.hpp"

namespace risconn {

/// A Monte Carlo sweep: one variable (or none), its values, iterations per
/// point, and the methods to run at each point.
struct ExperimentPlan {
  Config base;
  std::string sweep_key;  // "" = single point
  std::vector<double> sweep_values;
  int iterations = 1;
  std::vector<std::string> methods;
};

inline ExperimentPlan make_plan(const Config& c) {
  ExperimentPlan p;
  p.base = c;
  p.sweep_key = c.sweep;
  p.sweep_values = c.sweep_values;
  p.iterations = c.iterations;
  p.methods = c.methods;
  return p;
}

struct ResultRow {
  double sweep = 0.0;
  std::string method;
  double mean_l2 = 0.0;
  double std_l2 = 0.0;
  double mean_links = 0.0;
  double mean_ms = 0.0;
  int iters = 0;
};

namespace detail {

// Order-independent pairwise summation so aggregation does not depend on
// the thread schedule that produced the values.
inline double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

inline double pairwise_mean(const std::vector<double>& x) {
  return x.empty() ? 0.0 : pairwise_sum(x.data(), x.size()) / static_cast<double>(x.size());
}

inline double pairwise_std(const std::vector<double>& x, double mean) {
  if (x.size() < 2) return 0.0;
  std::vector<double> sq(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) sq[i] = (x[i] - mean) * (x[i] - mean);
  return std::sqrt(pairwise_sum(sq.data(), sq.size()) / static_cast<double>(sq.size()));
}

struct MethodOutcome {
  double lambda2 = 0.0;
  double links = 0.0;
  double ms = 0.0;
  bool skipped = false;
};

// "bounds" expands into a lower and an upper row; everything else is 1:1.
inline std::vector<std::string> expand_methods(const std::vector<std::string>& methods) {
  std::vector<std::string> out;
  for (const auto& m : methods) {
    if (m == "bounds") {
      out.push_back("lower_bound");
      out.push_back("upper_bound");
    } else {
      out.push_back(m);
    }
  }
  return out;
}

inline Config apply_sweep(Config c, const std::string& key, double value) {
  if (key.empty()) return c;
  if (key == "ue_count") {
    c.ue_count = static_cast<int>(std::lround(value));
  } else if (key == "uav_count") {
    c.uav_count = static_cast<int>(std::lround(value));
  } else if (key == "ris_count") {
    c.ris_count = static_cast<int>(std::lround(value));
  } else if (key == "thr_ris_db") {
    c.params.thr_ris_db = value;
  } else {
    throw std::invalid_argument("run_sweep: unknown sweep key " + key);
  }
  return c;
}

// Bounds along the greedy trajectory: the reported pair brackets the final
// lambda_2 using the exact pre-add spectrum of the last step. Steps where the
// closed forms are undefined fall back to quantities that still bracket
// (lambda_2 before the add below, the first-order bound above, or the exact
// value when nothing applies).
inline std::pair<double, double> greedy_trajectory_bounds(const Graph& g,
                                                          const std::vector<CandidateLink>& cands,
                                                          const Selection& greedy) {
  Laplacian L = laplacian(g);
  double lower = greedy.lambda2_before;
  double upper = greedy.lambda2_before;
  for (std::size_t k = 0; k < greedy.chosen.size(); ++k) {
    const CandidateLink& c = by_id(cands, greedy.chosen[k]);
    const SpectralResult pre = spectrum(L);
    const double realized = greedy.per_step[k].realized_lambda2;
    if (pre.fiedler_value > 1e-9 && pre.eigenvalues.size() >= 3) {
      const BoundsReport rep = edge_add_bounds(L, pre, c.ep_u, c.ep_a, c.weight);
      lower = rep.lower_defined ? rep.lower : pre.fiedler_value;
      upper = rep.upper_defined ? rep.upper_secular : rep.upper_first_order;
    } else {
      lower = realized;
      upper = realized;
    }
    L = rank_one_add(L, c.ep_u, c.ep_a, c.weight);
  }
  return {lower, upper};
}

}  // namespace detail

/// Worker count for iteration-level parallelism: RIS_THREADS caps it,
/// 0/unset means auto.
inline unsigned worker_count(std::size_t jobs) {
  long requested = 0;
  if (const char* env = std::getenv("RIS_THREADS")) requested = std::strtol(env, nullptr, 10);
  unsigned n = requested > 0 ? static_cast<unsigned>(requested)
                             : std::max(1u, std::thread::hardware_concurrency());
  if (jobs < n) n = static_cast<unsigned>(jobs);
  return std::max(1u, n);
}

namespace detail {

template <typename Fn>
inline void parallel_for(std::size_t jobs, Fn&& fn) {
  const unsigned workers = worker_count(jobs);
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= jobs) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

// One scenario evaluated under every requested method. Outcomes align with
// expand_methods(methods).
inline std::vector<MethodOutcome> evaluate_iteration(const Config& c, std::uint64_t seed,
                                                     const std::vector<std::string>& methods) {
  const Scenario s = make_scenario(c, seed);
  Graph g = build_graph(s);
  const CriticalityReport crits = criticality_report(g, c.params.epsilon);
  if (c.weighted_base) apply_criticality_weights(g, crits);
  const auto cands = enumerate_candidates(s, g, crits, {c.allow_redundant});
  const SelectionConstraints cons = make_constraints(s, s.ris_count(), c.strict_coverage);
  const double base_l2 = s.node_count() >= 2 ? lambda2_of(laplacian(g)) : 0.0;

  std::vector<MethodOutcome> out;
  auto timed = [&](auto&& run) {
    MethodOutcome o;
    const auto t0 = std::chrono::steady_clock::now();
    run(o);
    if (c.timing) {
      o.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                 .count();
    }
    return o;
  };

  for (const auto& m : methods) {
    if (m == "original") {
      out.push_back(timed([&](MethodOutcome& o) {
        o.lambda2 = base_l2;
        o.links = 0.0;
      }));
    } else if (m == "random") {
      out.push_back(timed([&](MethodOutcome& o) {
        const Selection sel = random_baseline(g, cands, cons, seed);
        o.lambda2 = sel.lambda2_after;
        o.links = static_cast<double>(sel.chosen.size());
      }));
    } else if (m == "greedy") {
      out.push_back(timed([&](MethodOutcome& o) {
        const Selection sel = greedy_perturbation(g, cands, cons);
        o.lambda2 = sel.lambda2_after;
        o.links = static_cast<double>(sel.chosen.size());
      }));
    } else if (m == "relax_round") {
      out.push_back(timed([&](MethodOutcome& o) {
        const auto [relaxed, sel] =
            relax_and_round(g, cands, cons, c.relax_iters, c.relax_tol, c.plain_rounding);
        o.lambda2 = sel.lambda2_after;
        o.links = static_cast<double>(sel.chosen.size());
      }));
    } else if (m == "exhaustive") {
      out.push_back(timed([&](MethodOutcome& o) {
        try {
          const Selection sel = exhaustive(g, cands, cons, 2.0e5);
          o.lambda2 = sel.lambda2_after;
          o.links = static_cast<double>(sel.chosen.size());
        } catch (const ExplosionGuardError&) {
          o.skipped = true;
        }
      }));
    } else if (m == "bounds") {
      const Selection sel = greedy_perturbation(g, cands, cons);
      const auto [lo, hi] = greedy_trajectory_bounds(g, cands, sel);
      MethodOutcome lower;
      lower.lambda2 = lo;
      lower.links = static_cast<double>(sel.chosen.size());
      MethodOutcome upper;
      upper.lambda2 = hi;
      upper.links = lower.links;
      out.push_back(lower);
      out.push_back(upper);
    } else {
      throw std::invalid_argument("run_sweep: unknown method " + m);
    }
  }
  return out;
}

}  // namespace detail

/// Runs the full sweep. Iterations are independent (scenario seed =
/// base seed + iteration index) and may execute on several workers; the
/// aggregation order is fixed, so output is deterministic for a given plan.
/// A point at which exhaustive search trips its guard reports that method as
/// skipped (iters = 0, NaN statistics); other methods are unaffected.
inline std::vector<ResultRow> run_sweep(const ExperimentPlan& plan) {
  if (plan.iterations < 1) throw std::invalid_argument("run_sweep: iterations must be >= 1");
  if (plan.methods.empty()) throw std::invalid_argument("run_sweep: no methods requested");
  for (std::size_t i = 1; i < plan.sweep_values.size(); ++i) {
    if (!(plan.sweep_values[i] > plan.sweep_values[i - 1])) {
      throw std::invalid_argument("run_sweep: sweep values must be strictly increasing");
    }
  }

  std::vector<double> values = plan.sweep_values;
  if (plan.sweep_key.empty()) values = {0.0};
  const auto expanded = detail::expand_methods(plan.methods);
  const std::size_t points = values.size();
  const std::size_t iters = static_cast<std::size_t>(plan.iterations);

  std::vector<std::vector<detail::MethodOutcome>> results(points * iters);
  std::vector<Config> point_config(points);
  for (std::size_t p = 0; p < points; ++p) {
    point_config[p] = detail::apply_sweep(plan.base, plan.sweep_key, values[p]);
  }

  detail::parallel_for(points * iters, [&](std::size_t job) {
    const std::size_t p = job / iters;
    const std::size_t it = job % iters;
    const std::uint64_t seed = plan.base.seed + static_cast<std::uint64_t>(it);
    results[job] = detail::evaluate_iteration(point_config[p], seed, plan.methods);
  });

  std::vector<ResultRow> rows;
  rows.reserve(points * expanded.size());
  for (std::size_t p = 0; p < points; ++p) {
    for (std::size_t m = 0; m < expanded.size(); ++m) {
      ResultRow row;
      row.sweep = values[p];
      row.method = expanded[m];
      std::vector<double> l2s, links, ms;
      bool any_skipped = false;
      for (std::size_t it = 0; it < iters; ++it) {
        const auto& o = results[p * iters + it][m];
        if (o.skipped) {
          any_skipped = true;
          break;
        }
        l2s.push_back(o.lambda2);
        links.push_back(o.links);
        ms.push_back(o.ms);
      }
      if (any_skipped) {
        row.iters = 0;
        row.mean_l2 = std::numeric_limits<double>::quiet_NaN();
        row.std_l2 = std::numeric_limits<double>::quiet_NaN();
        row.mean_links = std::numeric_limits<double>::quiet_NaN();
        row.mean_ms = std::numeric_limits<double>::quiet_NaN();
      } else {
        row.iters = static_cast<int>(iters);
        row.mean_l2 = detail::pairwise_mean(l2s);
        row.std_l2 = detail::pairwise_std(l2s, row.mean_l2);
        row.mean_links = detail::pairwise_mean(links);
        row.mean_ms = detail::pairwise_mean(ms);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline void emit_csv(const std::vector<ResultRow>& rows, std::ostream& os) {
  os << "sweep,method,mean_l2,std_l2,mean_links,mean_ms,iters\n";
  for (const auto& r : rows) {
    os << detail::format_double(r.sweep) << ',' << r.method << ','
       << detail::format_double(r.mean_l2) << ',' << detail::format_double(r.std_l2) << ','
       << detail::format_double(r.mean_links) << ',' << detail::format_double(r.mean_ms) << ','
       << r.iters << '\n';
  }
}

inline void emit_json(const std::vector<ResultRow>& rows, std::ostream& os) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"sweep", r.sweep},
                   {"method", r.method},
                   {"mean_l2", r.mean_l2},
                   {"std_l2", r.std_l2},
                   {"mean_links", r.mean_links},
                   {"mean_ms", r.mean_ms},
                   {"iters", r.iters}});
  }
  os << arr.dump(2) << '\n';
}

/// JSON counterpart of emit_json; NaN statistics serialize as null and read
/// back as NaN.
inline std::vector<ResultRow> rows_from_json(std::istream& is) {
  nlohmann::json arr = nlohmann::json::parse(is);
  std::vector<ResultRow> rows;
  auto as_double = [](const nlohmann::json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
  };
  for (const auto& item : arr) {
    ResultRow r;
    r.sweep = as_double(item.at("sweep"));
    r.method = item.at("method").get<std::string>();
    r.mean_l2 = as_double(item.at("mean_l2"));
    r.std_l2 = as_double(item.at("std_l2"));
    r.mean_links = as_double(item.at("mean_links"));
    r.mean_ms = as_double(item.at("mean_ms"));
    r.iters = item.at("iters").get<int>();
    rows.push_back(std::move(r));
  }
  return rows;
}

enum class EmitFormat { Csv, Json };

inline void emit(const std::vector<ResultRow>& rows, EmitFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file for writing: " + path);
  if (format == EmitFormat::Csv) {
    emit_csv(rows, out);
  } else {
    emit_json(rows, out);
  }
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace risconn
