#pragma once

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "risconn/channel.hpp"
#include "risconn/geometry.hpp"
#include "risconn/graph.hpp"
#include "risconn/optimize.hpp"

namespace risconn {

namespace detail {

// Small random weighted graph: a random spanning tree plus extra edges, so it
// is always connected.
inline Graph random_connected_graph(Rng& rng, int v_count) {
  Graph g;
  g.n_nodes = v_count;
  g.kinds.assign(static_cast<std::size_t>(v_count), NodeKind::Uav);
  for (int n = 1; n < v_count; ++n) {
    const int parent = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
    g.edges.push_back({parent, n, rng.uniform(0.2, 2.0)});
  }
  const int extra = static_cast<int>(rng.index(static_cast<std::size_t>(v_count)));
  for (int e = 0; e < extra; ++e) {
    const int i = static_cast<int>(rng.index(static_cast<std::size_t>(v_count)));
    const int j = static_cast<int>(rng.index(static_cast<std::size_t>(v_count)));
    if (i == j || g.has_edge(i, j)) continue;
    g.edges.push_back({std::min(i, j), std::max(i, j), rng.uniform(0.2, 2.0)});
  }
  return g;
}

}  // namespace detail

/// Fast self-check of the spectral machinery on hand-sized instances. Prints
/// one line per suite; returns false when anything fails.
inline bool run_quick_verify(std::ostream& os) {
  bool all_ok = true;
  auto report = [&](const std::string& name, bool ok) {
    os << (ok ? "[pass] " : "[FAIL] ") << name << '\n';
    all_ok = all_ok && ok;
  };

  {
    Graph p3;
    p3.n_nodes = 3;
    p3.kinds = {NodeKind::Ue, NodeKind::Uav, NodeKind::Ue};
    p3.edges = {{0, 1, 1.0}, {1, 2, 1.0}};
    const SpectralResult s = spectrum(laplacian(p3));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const bool ok = std::abs(s.eigenvalues[0]) < 1e-9 && std::abs(s.eigenvalues[1] - 1.0) < 1e-9 &&
                    std::abs(s.eigenvalues[2] - 3.0) < 1e-9 &&
                    std::abs(s.fiedler_vector[0] - inv_sqrt2) < 1e-9 &&
                    std::abs(s.fiedler_vector[1]) < 1e-9 &&
                    std::abs(s.fiedler_vector[2] + inv_sqrt2) < 1e-9;
    report("path-3 spectrum {0,1,3} with sign-fixed Fiedler vector", ok);

    const double after = spectrum(rank_one_add(laplacian(p3), 0, 2, 1.0)).fiedler_value;
    const double bound = first_order_upper(s.fiedler_value, 1.0, s.fiedler_vector[0], s.fiedler_vector[2]);
    report("triangle closure lifts lambda_2 from 1 to 3 and meets the first-order bound",
           std::abs(after - 3.0) < 1e-9 && std::abs(bound - 3.0) < 1e-12);
  }

  {
    Graph k4;
    k4.n_nodes = 4;
    k4.kinds.assign(4, NodeKind::Uav);
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) k4.edges.push_back({i, j, 1.0});
    }
    const double l2 = spectrum(laplacian(k4)).fiedler_value;
    const double crit = criticality(k4, 0, 1e-5);
    report("K4: lambda_2 = 4, node criticality 1/3 matches its tight bound",
           std::abs(l2 - 4.0) < 1e-9 && std::abs(crit - 1.0 / 3.0) < 1e-9 &&
               std::abs(criticality_bound(l2) - 1.0 / 3.0) < 1e-12);
  }

  {
    Rng rng(12345);
    bool secular_ok = true;
    bool interlace_ok = true;
    for (int trial = 0; trial < 200; ++trial) {
      const int v_count = 4 + static_cast<int>(rng.index(8));
      const Graph g = detail::random_connected_graph(rng, v_count);
      const Laplacian L = laplacian(g);
      const SpectralResult pre = spectrum(L);
      if (!(pre.fiedler_value > 1e-10) ||
          !(pre.eigenvalues[2] - pre.eigenvalues[1] > 1e-10)) {
        continue;
      }
      int i = static_cast<int>(rng.index(static_cast<std::size_t>(v_count)));
      int j = static_cast<int>(rng.index(static_cast<std::size_t>(v_count)));
      if (i == j) continue;
      const double w = rng.uniform(0.1, 2.0);
      const SpectralResult post = spectrum(rank_one_add(L, i, j, w));
      secular_ok = secular_ok &&
                   std::abs(secular_lambda2(pre, w, i, j) - post.fiedler_value) < 1e-8;
      for (Eigen::Index k = 1; k + 1 < pre.eigenvalues.size(); ++k) {
        interlace_ok = interlace_ok && post.eigenvalues[k] >= pre.eigenvalues[k] - 1e-8 &&
                       post.eigenvalues[k] <= pre.eigenvalues[k + 1] + 1e-8;
      }
    }
    report("secular-equation root matches the eigensolver on random rank-one updates",
           secular_ok);
    report("eigenvalue interlacing holds on random rank-one updates", interlace_ok);
  }

  {
    RadioParams p;
    const Point3 ue{10.0, 25.0, 0.0};
    const Point3 ris{40.0, 60.0, 20.0};
    const Point3 uav{90.0, 30.0, 50.0};
    const auto theta = optimal_phases(ue, ris, uav, p);
    const auto h = cascaded_channel(channel_ris_uav(ris, uav, p), theta,
                                    channel_ue_ris(ue, ris, p));
    const double expect =
        p.elements() * p.ref_pathloss / (distance(ue, ris) * distance(ris, uav));
    report("coherent combining reaches M*beta0/(d_UR*d_RA)",
           std::abs(std::abs(h) - expect) < 1e-9 * expect);
  }

  return all_ok;
}

}  // namespace risconn
