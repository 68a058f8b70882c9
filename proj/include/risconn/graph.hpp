#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "risconn/channel.hpp"
#include "risconn/scenario.hpp"

namespace risconn {

enum class NodeKind { Ue, Uav };

struct GraphEdge {
  int i;  // i < j
  int j;
  double w;
};

/// Undirected weighted connectivity graph over the UE and UAV nodes.
/// No self-loops, no duplicate edges, no UE-UE edges.
struct Graph {
  int n_nodes = 0;
  std::vector<GraphEdge> edges;
  std::vector<NodeKind> kinds;

  bool has_edge(int a, int b) const {
    if (a > b) std::swap(a, b);
    for (const auto& e : edges) {
      if (e.i == a && e.j == b) return true;
    }
    return false;
  }
};

using Laplacian = Eigen::MatrixXd;

/// Builds the direct-link graph: a UE-UAV edge exists iff the direct SNR
/// clears thr_ue_uav_db, a UAV-UAV edge iff it clears thr_uav_uav_db. Base
/// edge weights are 1; criticality weights apply to candidate links only
/// (apply_criticality_weights switches the base graph over for studies).
inline Graph build_graph(const Scenario& s) {
  Graph g;
  g.n_nodes = s.node_count();
  g.kinds.assign(static_cast<std::size_t>(g.n_nodes), NodeKind::Ue);
  for (int a = 0; a < s.uav_count(); ++a) g.kinds[static_cast<std::size_t>(s.uav_node(a))] = NodeKind::Uav;

  for (int u = 0; u < s.ue_count(); ++u) {
    for (int a = 0; a < s.uav_count(); ++a) {
      const double d = distance(s.ues[u], s.uavs[a]);
      // d == 0 means unbounded SNR; treat as in range.
      const bool linked =
          d == 0.0 || db_from_linear(snr_ue_uav(d, s.params)) >= s.params.thr_ue_uav_db;
      if (linked) g.edges.push_back({s.ue_node(u), s.uav_node(a), 1.0});
    }
  }
  for (int a = 0; a < s.uav_count(); ++a) {
    for (int b = a + 1; b < s.uav_count(); ++b) {
      const double d = distance(s.uavs[a], s.uavs[b]);
      const bool linked = d == 0.0 || snr_uav_uav_db(d, s.params) >= s.params.thr_uav_uav_db;
      if (linked) g.edges.push_back({s.uav_node(a), s.uav_node(b), 1.0});
    }
  }
  return g;
}

/// L = A diag(w) A^T: degree-weighted diagonal, -w on edge off-diagonals.
inline Laplacian laplacian(const Graph& g) {
  Laplacian L = Laplacian::Zero(g.n_nodes, g.n_nodes);
  for (const auto& e : g.edges) {
    L(e.i, e.i) += e.w;
    L(e.j, e.j) += e.w;
    L(e.i, e.j) -= e.w;
    L(e.j, e.i) -= e.w;
  }
  return L;
}

/// Rank-one edge update L' = L + w * a a^T for the incidence vector of edge
/// (i, j). Returns a copy; the input stays valid.
inline Laplacian rank_one_add(const Laplacian& L, int i, int j, double w) {
  if (i == j) throw std::invalid_argument("rank_one_add: self-loop");
  if (i < 0 || j < 0 || i >= L.rows() || j >= L.rows()) {
    throw std::out_of_range("rank_one_add: node index out of range");
  }
  Laplacian out = L;
  out(i, i) += w;
  out(j, j) += w;
  out(i, j) -= w;
  out(j, i) -= w;
  return out;
}

/// Full ascending spectrum of a Laplacian with a deterministic sign
/// convention: in every eigenvector the first component larger than 1e-12 in
/// magnitude is positive. fiedler_vector is the lambda_2 eigenvector; when
/// the graph is disconnected (lambda_2 ~ 0) it is re-orthogonalized against
/// the all-ones vector inside the null space, so <v, 1> = 0 still holds.
/// degenerate_gap flags lambda_3 - lambda_2 < 1e-8 (Fiedler vector is then
/// whichever the solver returned).
struct SpectralResult {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // columns, aligned with eigenvalues
  double fiedler_value = 0.0;
  Eigen::VectorXd fiedler_vector;
  bool degenerate_gap = false;
};

namespace detail {

inline void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v[k]) > 1e-12) {
      if (v[k] < 0.0) v = -v;
      return;
    }
  }
}

}  // namespace detail

inline SpectralResult spectrum(const Laplacian& L) {
  const auto v_count = L.rows();
  if (v_count < 2 || L.cols() != v_count) {
    throw std::invalid_argument("spectrum: need a square Laplacian of at least 2 nodes");
  }
  const double asym = (L - L.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9) throw std::invalid_argument("spectrum: input is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
  if (es.info() != Eigen::Success) throw std::runtime_error("spectrum: eigensolver failed");

  SpectralResult out;
  out.eigenvalues = es.eigenvalues();
  out.eigenvectors = es.eigenvectors();
  for (Eigen::Index k = 0; k < v_count; ++k) detail::fix_sign(out.eigenvectors.col(k));

  out.fiedler_value = out.eigenvalues[1];
  // Laplacians are PSD; a barely negative lambda_2 is pure roundoff.
  if (out.fiedler_value < 0.0 && out.fiedler_value > -1e-8) out.fiedler_value = 0.0;
  out.fiedler_vector = out.eigenvectors.col(1);
  if (out.fiedler_value < 1e-12) {
    // Disconnected: the zero eigenspace contains 1, so project it out to keep
    // the <v, 1> = 0 contract. The result is still a zero eigenvector.
    Eigen::VectorXd v = out.fiedler_vector;
    v.array() -= v.mean();
    const double n = v.norm();
    if (n > 1e-9) {
      out.fiedler_vector = v / n;
      detail::fix_sign(out.fiedler_vector);
    }
  }
  out.degenerate_gap = v_count >= 3 && (out.eigenvalues[2] - out.eigenvalues[1]) < 1e-8;
  return out;
}

namespace detail {

// lambda_2 of the graph with one node (and its edges) removed. Graphs that
// end up with fewer than two nodes report 0 (maximally disconnected).
inline double lambda2_without_node(const Graph& g, int removed) {
  const int v_count = g.n_nodes - 1;
  if (v_count < 2) return 0.0;
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(v_count, v_count);
  auto idx = [removed](int n) { return n < removed ? n : n - 1; };
  for (const auto& e : g.edges) {
    if (e.i == removed || e.j == removed) continue;
    const int a = idx(e.i);
    const int b = idx(e.j);
    L(a, a) += e.w;
    L(b, b) += e.w;
    L(a, b) -= e.w;
    L(b, a) -= e.w;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[1];
}

}  // namespace detail

/// Criticality of one node: 1 / lambda_2 of the graph with the node removed,
/// clamped to 1/eps when the remainder is (near-)disconnected.
inline double criticality(const Graph& g, int node, double eps) {
  if (node < 0 || node >= g.n_nodes) throw std::out_of_range("criticality: node out of range");
  if (!(eps > 0.0)) throw std::invalid_argument("criticality: eps must be > 0");
  const double l2 = detail::lambda2_without_node(g, node);
  return l2 > eps ? 1.0 / l2 : 1.0 / eps;
}

struct CriticalityReport {
  std::vector<double> value;    // per node, graph index order
  std::vector<char> clamped;    // 1 where lambda_2(G_-n) <= eps
};

inline CriticalityReport criticality_report(const Graph& g, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("criticality_report: eps must be > 0");
  CriticalityReport rep;
  rep.value.resize(static_cast<std::size_t>(g.n_nodes));
  rep.clamped.resize(static_cast<std::size_t>(g.n_nodes));
  for (int n = 0; n < g.n_nodes; ++n) {
    const double l2 = detail::lambda2_without_node(g, n);
    const bool clamp = !(l2 > eps);
    rep.value[static_cast<std::size_t>(n)] = clamp ? 1.0 / eps : 1.0 / l2;
    rep.clamped[static_cast<std::size_t>(n)] = clamp ? 1 : 0;
  }
  return rep;
}

/// Tight upper bound 1/(lambda_2 - 1) on any node criticality; +inf when
/// lambda_2 <= 1 and the bound carries no information.
inline double criticality_bound(double lambda2_g) {
  if (!(lambda2_g > 1.0)) return std::numeric_limits<double>::infinity();
  return 1.0 / (lambda2_g - 1.0);
}

/// Weight of a link between nodes with criticalities C_u and C_a:
/// 1/(C_u + C_a). Critical endpoints push the weight toward zero.
inline double edge_weight(double crit_u, double crit_a) {
  if (!(crit_u > 0.0) || !(crit_a > 0.0)) {
    throw std::invalid_argument("edge_weight: criticalities must be > 0");
  }
  return 1.0 / (crit_u + crit_a);
}

/// Replaces every base edge weight with 1/(C_i + C_j). Opt-in study mode;
/// the default pipeline weights candidate links only.
inline void apply_criticality_weights(Graph& g, const CriticalityReport& crits) {
  for (auto& e : g.edges) {
    e.w = edge_weight(crits.value[static_cast<std::size_t>(e.i)],
                      crits.value[static_cast<std::size_t>(e.j)]);
  }
}

/// Edge-list export: header "V E", then one "i j w" line per edge.
inline void write_edge_list(const Graph& g, std::ostream& os) {
  os << g.n_nodes << ' ' << g.edges.size() << '\n';
  char buf[64];
  for (const auto& e : g.edges) {
    std::snprintf(buf, sizeof(buf), "%.17g", e.w);
    os << e.i << ' ' << e.j << ' ' << buf << '\n';
  }
}

}  // namespace risconn
