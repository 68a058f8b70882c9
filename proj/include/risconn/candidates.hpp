#pragma once

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <vector>

#include "risconn/channel.hpp"
#include "risconn/graph.hpp"
#include "risconn/scenario.hpp"

namespace risconn {

/// One feasible UE-RIS-UAV association: the reflected edge it would add to
/// the graph, its criticality weight, and the coherent phase configuration.
struct CandidateLink {
  int id = -1;  // stable ordinal, lexicographic in (ue, ris, uav)
  int ue = -1;
  int ris = -1;
  int uav = -1;
  int ep_u = -1;  // graph index of the UE endpoint
  int ep_a = -1;  // graph index of the UAV endpoint
  double reflected_snr_db = 0.0;
  double weight = 0.0;
  PhaseConfig phases;
};

/// Matching constraints of the selection problem. At most max_links picks,
/// each UE / RIS / UAV used at most once. strict_coverage additionally
/// requires the selected UEs to have pairwise-disjoint reachable-RIS sets
/// (the single-time-slot reading); ue_ris_reach holds those sets and is only
/// consulted in strict mode.
struct SelectionConstraints {
  int max_links = 0;
  bool strict_coverage = false;
  std::vector<std::vector<int>> ue_ris_reach;
};

inline SelectionConstraints make_constraints(const Scenario& s, int max_links,
                                             bool strict_coverage) {
  SelectionConstraints c;
  c.max_links = max_links;
  c.strict_coverage = strict_coverage;
  if (strict_coverage) {
    c.ue_ris_reach.resize(static_cast<std::size_t>(s.ue_count()));
    for (int u = 0; u < s.ue_count(); ++u) {
      for (int r = 0; r < s.ris_count(); ++r) {
        if (distance(s.ues[u], s.riss[r]) <= s.params.ris_reach_m) {
          c.ue_ris_reach[static_cast<std::size_t>(u)].push_back(r);
        }
      }
    }
  }
  return c;
}

struct EnumerateOptions {
  // Also admit candidates whose UAV already has a direct link from the UE
  // (redundant-path study mode).
  bool allow_redundant = false;
};

/// Enumerates all (ue, ris, uav) triples with the UE in RIS range, the UAV
/// not directly reachable from that UE, and a coherent reflected SNR clearing
/// thr_ris_db. Weights come from the endpoint criticalities. Output is sorted
/// by (ue, ris, uav) and ids are assigned in that order, so the list is
/// stable for a fixed scenario.
inline std::vector<CandidateLink> enumerate_candidates(const Scenario& s, const Graph& g,
                                                       const CriticalityReport& crits,
                                                       EnumerateOptions opt = {}) {
  std::vector<CandidateLink> out;
  // Direct-reach lookup per (ue, uav).
  std::vector<char> direct(static_cast<std::size_t>(s.ue_count()) * s.uav_count(), 0);
  for (const auto& e : g.edges) {
    if (e.i < s.ue_count() && e.j >= s.ue_count()) {
      direct[static_cast<std::size_t>(e.i) * s.uav_count() + (e.j - s.ue_count())] = 1;
    }
  }
  for (int u = 0; u < s.ue_count(); ++u) {
    for (int r = 0; r < s.ris_count(); ++r) {
      if (distance(s.ues[u], s.riss[r]) > s.params.ris_reach_m) continue;
      for (int a = 0; a < s.uav_count(); ++a) {
        if (!opt.allow_redundant &&
            direct[static_cast<std::size_t>(u) * s.uav_count() + a]) {
          continue;
        }
        PhaseConfig theta;
        double snr_db = 0.0;
        try {
          theta = optimal_phases(s.ues[u], s.riss[r], s.uavs[a], s.params);
          snr_db = reflected_snr_db(s.ues[u], s.riss[r], s.uavs[a], s.params, theta);
        } catch (const DegenerateGeometryError&) {
          continue;  // no well-defined beam for this triple
        }
        if (snr_db < s.params.thr_ris_db) continue;
        CandidateLink c;
        c.id = static_cast<int>(out.size());
        c.ue = u;
        c.ris = r;
        c.uav = a;
        c.ep_u = s.ue_node(u);
        c.ep_a = s.uav_node(a);
        c.reflected_snr_db = snr_db;
        c.weight = edge_weight(crits.value[static_cast<std::size_t>(c.ep_u)],
                               crits.value[static_cast<std::size_t>(c.ep_a)]);
        theta.ris_index = r;
        theta.ue_index = u;
        theta.uav_index = a;
        c.phases = std::move(theta);
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

namespace detail {

// Incremental feasibility bookkeeping shared by the solvers.
class FeasibilityTracker {
 public:
  explicit FeasibilityTracker(const SelectionConstraints& cons) : cons_(&cons) {}

  bool can_add(const CandidateLink& c) const {
    if (static_cast<int>(count_) >= cons_->max_links) return false;
    if (used(ues_, c.ue) || used(riss_, c.ris) || used(uavs_, c.uav)) return false;
    if (cons_->strict_coverage) {
      for (int r : reach(c.ue)) {
        if (used(reach_union_, r)) return false;
      }
    }
    return true;
  }

  void add(const CandidateLink& c) {
    mark(ues_, c.ue);
    mark(riss_, c.ris);
    mark(uavs_, c.uav);
    if (cons_->strict_coverage) {
      for (int r : reach(c.ue)) mark(reach_union_, r);
    }
    ++count_;
  }

  std::size_t size() const { return count_; }

 private:
  static bool used(const std::vector<int>& v, int x) {
    return std::find(v.begin(), v.end(), x) != v.end();
  }
  static void mark(std::vector<int>& v, int x) { v.push_back(x); }
  const std::vector<int>& reach(int ue) const {
    static const std::vector<int> empty;
    const auto u = static_cast<std::size_t>(ue);
    return u < cons_->ue_ris_reach.size() ? cons_->ue_ris_reach[u] : empty;
  }

  const SelectionConstraints* cons_;
  std::vector<int> ues_, riss_, uavs_, reach_union_;
  std::size_t count_ = 0;
};

}  // namespace detail

/// True iff the set respects all matching constraints (and, in strict mode,
/// pairwise-disjoint RIS coverage of the selected UEs).
inline bool is_feasible(const std::vector<CandidateLink>& selected,
                        const SelectionConstraints& cons) {
  detail::FeasibilityTracker t(cons);
  for (const auto& c : selected) {
    if (!t.can_add(c)) return false;
    t.add(c);
  }
  return true;
}

/// Debug/golden-test dump: header plus one "id,u,r,a,snr_db,w_l" row each.
inline void write_candidates_csv(const std::vector<CandidateLink>& cands, std::ostream& os) {
  os << "id,u,r,a,snr_db,w_l\n";
  char buf[128];
  for (const auto& c : cands) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%.17g,%.17g", c.id, c.ue, c.ris, c.uav,
                  c.reflected_snr_db, c.weight);
    os << buf << '\n';
  }
}

}  // namespace risconn
