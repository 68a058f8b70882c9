#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "risconn/candidates.hpp"
#include "risconn/geometry.hpp"
#include "risconn/graph.hpp"

namespace risconn {

/// Raised when exhaustive search would enumerate more subsets than the guard
/// allows.
struct ExplosionGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StepRecord {
  int id = -1;
  // First-order gain w_l * (v_u - v_a)^2 predicted from the pre-add Fiedler
  // vector. NaN when no prediction applies (relaxation rounding).
  double predicted_gain = 0.0;
  double realized_lambda2 = 0.0;
  // True when the pre-add graph was disconnected and the step was scored by
  // exact re-evaluation instead of the Fiedler first-order score.
  bool exact_fallback = false;
};

struct Selection {
  std::vector<int> chosen;  // candidate ids in pick order
  double lambda2_before = 0.0;
  double lambda2_after = 0.0;
  std::vector<StepRecord> per_step;
  std::string method;
};

struct RelaxedSolution {
  Eigen::VectorXd z;        // best iterate found, in [0,1]^|z| with sum = min(R, |z|)
  double objective = 0.0;   // lambda_2(L'(z)) at that iterate
  int iterations = 0;
  std::vector<double> step_history;  // objective at each visited iterate
};

struct BoundsReport {
  double lower = 0.0;        // closed-form lower bound (see below)
  double upper_secular = 0.0;  // secular-equation upper bound
  double upper_first_order = 0.0;  // first-order bound lambda_2 + w * V_ua
  double actual = 0.0;       // lambda_2 after the rank-one add
  double delta = 0.0;        // lambda_3 - lambda_2 of the pre-add spectrum
  bool upper_defined = true;   // false when lambda_n == lambda_2
  bool lower_defined = true;   // false when the radicand is negative
};

/// First-order upper bound on lambda_2 after adding edge l with weight w:
/// lambda_2 + w * (v_u - v_a)^2, v the unit Fiedler vector of the pre-add
/// Laplacian.
inline double first_order_upper(double lambda2, double w, double v_u, double v_a) {
  const double diff = v_u - v_a;
  return lambda2 + w * diff * diff;
}

/// Closed-form bracket for lambda_2 after one rank-one edge add, evaluated
/// from the pre-add spectrum:
///   lower = lambda_2 + (wV + delta + 2w - sqrt(5wV - w delta^2 + 4w^2 + 4w delta)) / 2
///   upper = lambda_2 + wV / (1 + w (2 - V) / (lambda_n - lambda_2))
/// with V = (v_u - v_a)^2 and delta = lambda_3 - lambda_2. The upper bound is
/// always valid; the lower bound is reported as-is and is checked
/// empirically, not asserted (its radicand can even go negative, flagged via
/// lower_defined). The report also carries the exact post-add lambda_2.
inline BoundsReport edge_add_bounds(const Laplacian& L, const SpectralResult& pre, int i, int j,
                                 double w) {
  const auto v_count = pre.eigenvalues.size();
  if (v_count < 3) throw std::invalid_argument("edge_add_bounds: need at least 3 nodes");
  if (!(pre.fiedler_value > 0.0)) {
    throw std::invalid_argument("edge_add_bounds: pre-add graph must be connected");
  }
  if (!(w >= 0.0)) throw std::invalid_argument("edge_add_bounds: weight must be >= 0");

  BoundsReport rep;
  const double l2 = pre.eigenvalues[1];
  const double l3 = pre.eigenvalues[2];
  const double ln = pre.eigenvalues[v_count - 1];
  const double vua = std::pow(pre.fiedler_vector[i] - pre.fiedler_vector[j], 2);
  rep.delta = l3 - l2;
  rep.upper_first_order = first_order_upper(l2, w, pre.fiedler_vector[i], pre.fiedler_vector[j]);

  if (w == 0.0) {
    rep.lower = l2;
    rep.upper_secular = l2;
  } else {
    const double radicand = 5.0 * w * vua - w * rep.delta * rep.delta + 4.0 * w * w +
                            4.0 * w * rep.delta;
    if (radicand >= 0.0) {
      rep.lower = l2 + (w * vua + rep.delta + 2.0 * w - std::sqrt(radicand)) / 2.0;
    } else {
      rep.lower = std::numeric_limits<double>::quiet_NaN();
      rep.lower_defined = false;
    }
    if (ln - l2 > 1e-12) {
      rep.upper_secular = l2 + w * vua / (1.0 + w * (2.0 - vua) / (ln - l2));
    } else {
      // Regular corner (complete graph): lambda_n == lambda_2.
      rep.upper_secular = std::numeric_limits<double>::quiet_NaN();
      rep.upper_defined = false;
    }
  }
  rep.actual = spectrum(rank_one_add(L, i, j, w)).fiedler_value;
  return rep;
}

/// lambda_2 of L + w a a^T via the secular equation
///   f(x) = 1 + w * sum_{k>=2} u_k^2 / (lambda_k - x),  u = Q^T a,
/// whose root in (lambda_2, lambda_3) is the updated Fiedler value. Bisection
/// on the bracket, endpoints nudged off the poles. If f has no sign change
/// the root degenerated onto an endpoint: u_2 ~ 0 keeps lambda_2, a large w
/// pushes the root past lambda_3, which then survives as the new lambda_2.
/// Requires a connected pre-add graph with simple lambda_2.
inline double secular_lambda2(const SpectralResult& pre, double w, int i, int j) {
  const auto v_count = pre.eigenvalues.size();
  if (v_count < 3) throw std::invalid_argument("secular_lambda2: need at least 3 nodes");
  if (i == j || i < 0 || j < 0 || i >= v_count || j >= v_count) {
    throw std::invalid_argument("secular_lambda2: bad edge endpoints");
  }
  const double l2 = pre.eigenvalues[1];
  const double l3 = pre.eigenvalues[2];
  if (!(l2 > 1e-10) || !(l3 - l2 > 1e-10)) {
    throw std::invalid_argument("secular_lambda2: needs a connected graph with simple lambda_2");
  }

  // u_k = Q_k^T (e_i - e_j); u_1 = 0 because the null eigenvector is constant.
  Eigen::VectorXd u(v_count);
  for (Eigen::Index k = 0; k < v_count; ++k) {
    u[k] = pre.eigenvectors(i, k) - pre.eigenvectors(j, k);
  }
  auto f = [&](double x) {
    double acc = 1.0;
    for (Eigen::Index k = 1; k < v_count; ++k) {
      acc += w * u[k] * u[k] / (pre.eigenvalues[k] - x);
    }
    return acc;
  };

  const double nudge = 1e-12 * std::max(1.0, std::abs(l3));
  double lo = l2 + nudge;
  double hi = l3 - nudge;
  if (hi <= lo) return l2;
  if (f(lo) >= 0.0) return l2;  // u_2 ~ 0: lambda_2 survives unchanged
  if (f(hi) <= 0.0) return l3;  // root at/past lambda_3, which interlacing caps
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Solver trace: one JSON object per step on its own line, carrying
/// {method, step, chosen_id, predicted, realized}. predicted is null for
/// steps without a first-order prediction (relaxation rounding).
inline void write_solver_trace(const Selection& sel, std::ostream& os) {
  char num[64];
  auto json_double = [&num](double v) -> std::string {
    if (std::isnan(v)) return "null";
    std::snprintf(num, sizeof(num), "%.17g", v);
    return num;
  };
  for (std::size_t k = 0; k < sel.per_step.size(); ++k) {
    const StepRecord& step = sel.per_step[k];
    os << "{\"method\":\"" << sel.method << "\",\"step\":" << (k + 1)
       << ",\"chosen_id\":" << step.id << ",\"predicted\":" << json_double(step.predicted_gain)
       << ",\"realized\":" << json_double(step.realized_lambda2) << "}\n";
  }
}

namespace detail {

inline const CandidateLink& by_id(const std::vector<CandidateLink>& cands, int id) {
  for (const auto& c : cands) {
    if (c.id == id) return c;
  }
  throw std::out_of_range("unknown candidate id");
}

inline double lambda2_of(const Laplacian& L) { return spectrum(L).fiedler_value; }

}  // namespace detail

struct GreedyOptions {
  // Study mode: refresh node criticalities (and so the remaining candidate
  // weights) on the updated graph after every accepted edge. Off by default;
  // the standard pipeline weighs candidates once per scenario.
  bool recompute_weights = false;
  double criticality_eps = 1e-5;
};

/// Greedy perturbation: repeatedly add the feasible candidate with the
/// largest first-order score w_l * (v_u - v_a)^2 under the current Fiedler
/// vector, then drop every candidate sharing the chosen UE, RIS, or UAV.
/// Ties go to the lowest id. While the graph is still disconnected the
/// first-order score is blind (v is a null vector), so steps fall back to
/// exact per-candidate re-evaluation and are flagged.
inline Selection greedy_perturbation(const Graph& g, const std::vector<CandidateLink>& cands,
                                     const SelectionConstraints& cons,
                                     GreedyOptions opt = {}) {
  Selection sel;
  sel.method = "greedy";
  Graph current = g;  // tracked only for weight recomputation
  Laplacian L = laplacian(g);
  sel.lambda2_before = detail::lambda2_of(L);

  std::vector<CandidateLink> pool(cands.begin(), cands.end());
  std::sort(pool.begin(), pool.end(),
            [](const CandidateLink& a, const CandidateLink& b) { return a.id < b.id; });
  std::vector<CandidateLink*> remaining;
  remaining.reserve(pool.size());
  for (auto& c : pool) remaining.push_back(&c);

  detail::FeasibilityTracker tracker(cons);
  double current_l2 = sel.lambda2_before;
  while (static_cast<int>(sel.chosen.size()) < cons.max_links && !remaining.empty()) {
    const SpectralResult spec = spectrum(L);
    const bool disconnected = spec.fiedler_value < 1e-9;

    // In the disconnected fallback a single add often cannot reconnect the
    // graph, leaving every realized lambda_2 at zero; the first-order score
    // (component-indicator differences of the null-space vector) then breaks
    // the tie before the id does.
    const CandidateLink* best = nullptr;
    double best_score = -1.0;
    double best_tiebreak = -1.0;
    for (const CandidateLink* c : remaining) {
      if (!tracker.can_add(*c)) continue;
      const double first_order =
          c->weight * std::pow(spec.fiedler_vector[c->ep_u] - spec.fiedler_vector[c->ep_a], 2);
      double score = first_order;
      double tiebreak = 0.0;
      if (disconnected) {
        score = detail::lambda2_of(rank_one_add(L, c->ep_u, c->ep_a, c->weight));
        tiebreak = first_order;
      }
      if (score > best_score || (score == best_score && tiebreak > best_tiebreak)) {
        best_score = score;
        best_tiebreak = tiebreak;
        best = c;
      }
    }
    if (best == nullptr) break;

    L = rank_one_add(L, best->ep_u, best->ep_a, best->weight);
    const double realized = detail::lambda2_of(L);
    StepRecord step;
    step.id = best->id;
    step.exact_fallback = disconnected;
    step.predicted_gain = disconnected ? realized - current_l2
                                       : best->weight *
                                             std::pow(spec.fiedler_vector[best->ep_u] -
                                                          spec.fiedler_vector[best->ep_a],
                                                      2);
    step.realized_lambda2 = realized;
    sel.per_step.push_back(step);
    sel.chosen.push_back(best->id);
    tracker.add(*best);
    current_l2 = realized;
    const CandidateLink chosen = *best;
    std::erase_if(remaining, [&](const CandidateLink* c) {
      return c->ue == chosen.ue || c->ris == chosen.ris || c->uav == chosen.uav;
    });
    if (opt.recompute_weights) {
      const int lo = std::min(chosen.ep_u, chosen.ep_a);
      const int hi = std::max(chosen.ep_u, chosen.ep_a);
      current.edges.push_back({lo, hi, chosen.weight});
      const CriticalityReport crits = criticality_report(current, opt.criticality_eps);
      for (CandidateLink* c : remaining) {
        c->weight = edge_weight(crits.value[static_cast<std::size_t>(c->ep_u)],
                                crits.value[static_cast<std::size_t>(c->ep_a)]);
      }
    }
  }
  sel.lambda2_after = current_l2;
  return sel;
}

/// Random baseline: same admission and removal rules as the greedy solver,
/// but each step picks uniformly among the feasible candidates.
inline Selection random_baseline(const Graph& g, const std::vector<CandidateLink>& cands,
                                 const SelectionConstraints& cons, std::uint64_t seed) {
  Selection sel;
  sel.method = "random";
  Laplacian L = laplacian(g);
  sel.lambda2_before = detail::lambda2_of(L);

  std::vector<const CandidateLink*> remaining;
  for (const auto& c : cands) remaining.push_back(&c);
  std::sort(remaining.begin(), remaining.end(),
            [](const CandidateLink* a, const CandidateLink* b) { return a->id < b->id; });

  Rng rng(seed);
  detail::FeasibilityTracker tracker(cons);
  double current_l2 = sel.lambda2_before;
  while (static_cast<int>(sel.chosen.size()) < cons.max_links && !remaining.empty()) {
    const SpectralResult spec = spectrum(L);
    const bool disconnected = spec.fiedler_value < 1e-9;
    std::vector<const CandidateLink*> feasible;
    for (const CandidateLink* c : remaining) {
      if (tracker.can_add(*c)) feasible.push_back(c);
    }
    if (feasible.empty()) break;
    const CandidateLink* pick = feasible[rng.index(feasible.size())];

    L = rank_one_add(L, pick->ep_u, pick->ep_a, pick->weight);
    const double realized = detail::lambda2_of(L);
    StepRecord step;
    step.id = pick->id;
    step.exact_fallback = disconnected;
    step.predicted_gain = disconnected ? realized - current_l2
                                       : pick->weight *
                                             std::pow(spec.fiedler_vector[pick->ep_u] -
                                                          spec.fiedler_vector[pick->ep_a],
                                                      2);
    step.realized_lambda2 = realized;
    sel.per_step.push_back(step);
    sel.chosen.push_back(pick->id);
    tracker.add(*pick);
    current_l2 = realized;
    std::erase_if(remaining, [&](const CandidateLink* c) {
      return c->ue == pick->ue || c->ris == pick->ris || c->uav == pick->uav;
    });
  }
  sel.lambda2_after = current_l2;
  return sel;
}

namespace detail {

inline double binomial_approx(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double acc = 1.0;
  for (std::size_t t = 0; t < k; ++t) {
    acc *= static_cast<double>(n - t) / static_cast<double>(t + 1);
    if (acc > 1e18) return 1e18;
  }
  return acc;
}

}  // namespace detail

/// Exact solver: enumerates feasible subsets of at most max_links candidates
/// in lexicographic id order (depth-first) and keeps the best lambda_2.
/// Strictly-greater replacement means the first — lexicographically smallest
/// — subset wins ties; whenever any candidate exists the result is nonempty,
/// since adding an edge never lowers lambda_2. Refuses instances whose
/// C(|cands|, R) exceeds subset_guard.
inline Selection exhaustive(const Graph& g, const std::vector<CandidateLink>& cands,
                            const SelectionConstraints& cons,
                            double subset_guard = 2.0e6) {
  const std::size_t r = std::min<std::size_t>(static_cast<std::size_t>(std::max(cons.max_links, 0)),
                                              cands.size());
  const double subsets = detail::binomial_approx(cands.size(), r);
  if (subsets > subset_guard) {
    throw ExplosionGuardError("exhaustive: C(" + std::to_string(cands.size()) + ", " +
                              std::to_string(r) + ") = " + std::to_string(subsets) +
                              " subsets exceeds the guard of " + std::to_string(subset_guard));
  }

  std::vector<const CandidateLink*> ordered;
  for (const auto& c : cands) ordered.push_back(&c);
  std::sort(ordered.begin(), ordered.end(),
            [](const CandidateLink* a, const CandidateLink* b) { return a->id < b->id; });

  Selection sel;
  sel.method = "exhaustive";
  const Laplacian L0 = laplacian(g);
  sel.lambda2_before = detail::lambda2_of(L0);
  sel.lambda2_after = sel.lambda2_before;

  std::vector<int> current;
  std::vector<int> best;
  double best_l2 = 0.0;
  bool found = false;

  auto dfs = [&](auto&& self, std::size_t start, const Laplacian& L,
                 detail::FeasibilityTracker tracker) -> void {
    for (std::size_t k = start; k < ordered.size(); ++k) {
      const CandidateLink* c = ordered[k];
      if (!tracker.can_add(*c)) continue;
      const Laplacian L2 = rank_one_add(L, c->ep_u, c->ep_a, c->weight);
      current.push_back(c->id);
      const double l2 = detail::lambda2_of(L2);
      if (!found || l2 > best_l2) {
        found = true;
        best_l2 = l2;
        best = current;
      }
      if (current.size() < r) {
        detail::FeasibilityTracker next = tracker;
        next.add(*c);
        self(self, k + 1, L2, std::move(next));
      }
      current.pop_back();
    }
  };
  if (r > 0) dfs(dfs, 0, L0, detail::FeasibilityTracker(cons));

  if (found) {
    sel.chosen = best;
    sel.lambda2_after = best_l2;
    Laplacian L = L0;
    double prev = sel.lambda2_before;
    for (int id : best) {
      const CandidateLink& c = detail::by_id(cands, id);
      L = rank_one_add(L, c.ep_u, c.ep_a, c.weight);
      StepRecord step;
      step.id = id;
      step.realized_lambda2 = detail::lambda2_of(L);
      step.predicted_gain = step.realized_lambda2 - prev;
      step.exact_fallback = true;
      prev = step.realized_lambda2;
      sel.per_step.push_back(step);
    }
  }
  return sel;
}

/// Euclidean projection onto the capped simplex {0 <= z <= 1, sum z = total}
/// by exact threshold search: sort the 2n breakpoints where coordinates enter
/// or leave the active interval, then solve the linear segment that crosses
/// the target sum. O(n log n).
inline Eigen::VectorXd project_capped_simplex(const Eigen::VectorXd& y, double total) {
  const auto n = y.size();
  if (n == 0) return y;
  if (total < -1e-9 || total > static_cast<double>(n) + 1e-9) {
    throw std::invalid_argument("project_capped_simplex: target sum outside [0, n]");
  }
  if (total <= 0.0) return Eigen::VectorXd::Zero(n);
  if (total >= static_cast<double>(n)) return Eigen::VectorXd::Ones(n);

  // Breakpoints: tau = y_i - 1 (saturated -> active), tau = y_i (active -> 0).
  std::vector<std::pair<double, int>> events;  // (tau, +1 enter active / -1 leave)
  events.reserve(static_cast<std::size_t>(2 * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    events.push_back({y[i] - 1.0, +1});
    events.push_back({y[i], -1});
  }
  std::sort(events.begin(), events.end());

  // Below the first breakpoint everything is saturated: g(tau) = n.
  double n_sat = static_cast<double>(n);
  double active_sum = 0.0;
  double m_active = 0.0;
  double prev_tau = events.front().first;
  double tau = prev_tau;  // fallback; overwritten when the crossing is found
  bool solved = false;
  for (std::size_t e = 0; e < events.size() && !solved; ++e) {
    const double b = events[e].first;
    if (b > prev_tau) {
      // g on [prev_tau, b] is n_sat + active_sum - m_active * tau.
      if (m_active > 0.0) {
        const double cand = (n_sat + active_sum - total) / m_active;
        if (cand >= prev_tau - 1e-12 && cand <= b + 1e-12) {
          tau = cand;
          solved = true;
          break;
        }
      } else if (std::abs(n_sat - total) <= 1e-12) {
        tau = prev_tau;
        solved = true;
        break;
      }
      prev_tau = b;
    }
    if (events[e].second > 0) {
      n_sat -= 1.0;
      active_sum += events[e].first + 1.0;  // y_i
      m_active += 1.0;
    } else {
      active_sum -= events[e].first;  // y_i
      m_active -= 1.0;
    }
  }
  if (!solved) {
    // Past the last breakpoint nothing remains; the crossing must be in the
    // final active segment.
    tau = m_active > 0.0 ? (n_sat + active_sum - total) / m_active : prev_tau;
  }
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = std::clamp(y[i] - tau, 0.0, 1.0);
  return z;
}

namespace detail {

inline Laplacian relaxed_laplacian(const Laplacian& L0,
                                   const std::vector<const CandidateLink*>& ordered,
                                   const Eigen::VectorXd& z) {
  Laplacian L = L0;
  for (Eigen::Index l = 0; l < z.size(); ++l) {
    const CandidateLink* c = ordered[static_cast<std::size_t>(l)];
    const double w = z[l] * c->weight;
    L(c->ep_u, c->ep_u) += w;
    L(c->ep_a, c->ep_a) += w;
    L(c->ep_u, c->ep_a) -= w;
    L(c->ep_a, c->ep_u) -= w;
  }
  return L;
}

// Rounds a relaxed z to a selection. Candidates are visited in descending
// z (ties to the lower id). The repaired variant keeps admitting further down
// the list until max_links are placed; the plain variant examines only the
// max_links largest entries, so colliding picks waste budget.
inline Selection round_by_mass(const Graph& g, const std::vector<const CandidateLink*>& ordered,
                               const Eigen::VectorXd& z, const SelectionConstraints& cons,
                               bool plain_rounding) {
  Selection sel;
  sel.method = "relax_round";
  Laplacian L = laplacian(g);
  sel.lambda2_before = lambda2_of(L);
  sel.lambda2_after = sel.lambda2_before;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(z.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (z[a] != z[b]) return z[a] > z[b];
    return ordered[static_cast<std::size_t>(a)]->id < ordered[static_cast<std::size_t>(b)]->id;
  });

  FeasibilityTracker tracker(cons);
  int examined = 0;
  for (Eigen::Index idx : order) {
    if (static_cast<int>(sel.chosen.size()) >= cons.max_links) break;
    if (plain_rounding && examined >= cons.max_links) break;
    ++examined;
    const CandidateLink* c = ordered[static_cast<std::size_t>(idx)];
    if (!tracker.can_add(*c)) continue;
    tracker.add(*c);
    L = rank_one_add(L, c->ep_u, c->ep_a, c->weight);
    StepRecord step;
    step.id = c->id;
    step.predicted_gain = std::numeric_limits<double>::quiet_NaN();
    step.realized_lambda2 = lambda2_of(L);
    step.exact_fallback = false;
    sel.per_step.push_back(step);
    sel.chosen.push_back(c->id);
    sel.lambda2_after = step.realized_lambda2;
  }
  return sel;
}

}  // namespace detail

/// Continuous relaxation of the selection problem solved by projected
/// supergradient ascent: maximize lambda_2(L'(z)) over the capped simplex
/// {0 <= z <= 1, sum z = min(R, |z|)}. The supergradient component for
/// candidate l is w_l * (v_u - v_a)^2 with v the current Fiedler vector;
/// steps are eta_0 / sqrt(k) with eta_0 = 1 / max_l w_l, z starts uniform,
/// and the best iterate seen is returned (standard for subgradient schemes).
/// Stops after iters steps or when the projected-gradient norm drops below
/// tol. Rounding walks z in descending order and admits candidates only while
/// feasibility is preserved; plain_rounding instead examines only the R
/// largest entries (plain top-R rounding) and realizes the feasible subset of
/// them, so picks that collide on a UE/RIS/UAV waste budget rather than being
/// replaced.
inline std::pair<RelaxedSolution, Selection> relax_and_round(
    const Graph& g, const std::vector<CandidateLink>& cands, const SelectionConstraints& cons,
    int iters, double tol, bool plain_rounding = false) {
  std::vector<const CandidateLink*> ordered;
  for (const auto& c : cands) ordered.push_back(&c);
  std::sort(ordered.begin(), ordered.end(),
            [](const CandidateLink* a, const CandidateLink* b) { return a->id < b->id; });

  const Laplacian L0 = laplacian(g);
  const double base_l2 = detail::lambda2_of(L0);

  RelaxedSolution relaxed;
  Selection sel;
  sel.method = "relax_round";
  sel.lambda2_before = base_l2;
  sel.lambda2_after = base_l2;
  const auto n = static_cast<Eigen::Index>(ordered.size());
  if (n == 0) {
    relaxed.z.resize(0);
    relaxed.objective = base_l2;
    return {relaxed, sel};
  }

  const double total = std::min<double>(static_cast<double>(cons.max_links), static_cast<double>(n));
  double w_max = 0.0;
  for (const auto* c : ordered) w_max = std::max(w_max, c->weight);
  const double eta0 = w_max > 0.0 ? 1.0 / w_max : 1.0;

  Eigen::VectorXd z = Eigen::VectorXd::Constant(n, total / static_cast<double>(n));
  Eigen::VectorXd best_z = z;
  double best_obj = detail::lambda2_of(detail::relaxed_laplacian(L0, ordered, z));
  relaxed.step_history.push_back(best_obj);

  int k = 0;
  for (k = 1; k <= iters; ++k) {
    const SpectralResult spec = spectrum(detail::relaxed_laplacian(L0, ordered, z));
    Eigen::VectorXd grad(n);
    for (Eigen::Index l = 0; l < n; ++l) {
      const CandidateLink* c = ordered[static_cast<std::size_t>(l)];
      grad[l] = c->weight *
                std::pow(spec.fiedler_vector[c->ep_u] - spec.fiedler_vector[c->ep_a], 2);
    }
    const double eta = eta0 / std::sqrt(static_cast<double>(k));
    Eigen::VectorXd z_next = project_capped_simplex(z + eta * grad, total);
    const double pg_norm = (z_next - z).norm() / eta;
    z = std::move(z_next);

    const double obj = detail::lambda2_of(detail::relaxed_laplacian(L0, ordered, z));
    relaxed.step_history.push_back(obj);
    if (obj > best_obj) {
      best_obj = obj;
      best_z = z;
    }
    if (pg_norm < tol) break;
  }
  relaxed.iterations = std::min(k, iters);
  relaxed.z = best_z;
  relaxed.objective = best_obj;

  sel = detail::round_by_mass(g, ordered, best_z, cons, plain_rounding);
  return {relaxed, sel};
}

}  // namespace risconn
