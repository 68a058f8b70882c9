#include <catch2/catch.hpp>

#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "risconn/optimize.hpp"

using namespace risconn;

namespace {

Graph path3() {
  Graph g;
  g.n_nodes = 3;
  g.kinds = {NodeKind::Ue, NodeKind::Uav, NodeKind::Ue};
  g.edges = {{0, 1, 1.0}, {1, 2, 1.0}};
  return g;
}

CandidateLink synth(int id, int ep_u, int ep_a, double w, int ue, int ris, int uav) {
  CandidateLink c;
  c.id = id;
  c.ue = ue;
  c.ris = ris;
  c.uav = uav;
  c.ep_u = ep_u;
  c.ep_a = ep_a;
  c.weight = w;
  return c;
}

SelectionConstraints budget(int r) {
  SelectionConstraints cons;
  cons.max_links = r;
  return cons;
}

// Random instance for solver cross-checks: connected base graph plus
// synthetic candidates with small label spaces so the matching constraints
// bite.
struct Instance {
  Graph g;
  std::vector<CandidateLink> cands;
  SelectionConstraints cons;
};

Instance random_instance(Rng& rng, int max_cands, int max_r, bool force_connected = true) {
  Instance inst;
  const int v = 5 + static_cast<int>(rng.index(6));
  inst.g = force_connected ? oracles::random_connected_graph(rng, v)
                           : oracles::random_graph(rng, v, 0.25);
  const int n = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(max_cands)));
  std::set<std::tuple<int, int, int>> seen;
  for (int k = 0; k < n; ++k) {
    const int i = static_cast<int>(rng.index(static_cast<std::size_t>(v)));
    int j = static_cast<int>(rng.index(static_cast<std::size_t>(v)));
    if (i == j) j = (j + 1) % v;
    const int ris = static_cast<int>(rng.index(4));
    if (!seen.insert({i, j, ris}).second) continue;
    inst.cands.push_back(synth(static_cast<int>(inst.cands.size()), i, j,
                               rng.uniform(0.2, 2.0), i, ris, j));
  }
  inst.cons = budget(1 + static_cast<int>(rng.index(static_cast<std::size_t>(max_r))));
  return inst;
}

}  // namespace

TEST_CASE("greedy closes the path into a cycle with the predicted gain") {
  const auto cands = std::vector<CandidateLink>{synth(0, 0, 2, 1.0, 0, 0, 0)};
  const Selection sel = greedy_perturbation(path3(), cands, budget(1));
  REQUIRE(sel.chosen == std::vector<int>{0});
  CHECK(sel.lambda2_before == Approx(1.0).epsilon(1e-9));
  CHECK(sel.lambda2_after == Approx(3.0).epsilon(1e-9));
  REQUIRE(sel.per_step.size() == 1);
  CHECK(sel.per_step[0].predicted_gain == Approx(2.0).epsilon(1e-9));
  CHECK(sel.per_step[0].realized_lambda2 == Approx(3.0).epsilon(1e-9));
  CHECK_FALSE(sel.per_step[0].exact_fallback);
  CHECK(sel.method == "greedy");
}

TEST_CASE("solver trace emits one parseable JSON line per step") {
  const auto cands = std::vector<CandidateLink>{synth(0, 0, 2, 1.0, 0, 0, 0)};
  const Selection sel = greedy_perturbation(path3(), cands, budget(1));
  std::ostringstream os;
  write_solver_trace(sel, os);
  std::istringstream is(os.str());
  std::string line;
  int lines = 0;
  while (std::getline(is, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.at("method") == "greedy");
    CHECK(j.at("step") == 1);
    CHECK(j.at("chosen_id") == 0);
    CHECK(j.at("predicted").get<double>() == Approx(2.0));
    CHECK(j.at("realized").get<double>() == Approx(3.0));
    ++lines;
  }
  CHECK(lines == 1);

  // NaN predictions (relaxation rounding) serialize as null
  const auto [rel, rounded] = relax_and_round(path3(), cands, budget(1), 10, 1e-10);
  std::ostringstream os2;
  write_solver_trace(rounded, os2);
  const auto j2 = nlohmann::json::parse(os2.str());
  CHECK(j2.at("method") == "relax_round");
  CHECK(j2.at("predicted").is_null());
}

TEST_CASE("weight recomputation study mode refreshes remaining candidates") {
  // path 0-1-2-3-4; first pick connects a leaf pair, changing the
  // criticalities that weigh the remaining candidate
  Graph g;
  g.n_nodes = 5;
  g.kinds.assign(5, NodeKind::Uav);
  g.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}};
  std::vector<CandidateLink> cands = {synth(0, 0, 4, 1.0, 0, 0, 0), synth(1, 1, 3, 1.0, 1, 1, 1)};
  // static weights from the base graph's criticalities
  const CriticalityReport base_crits = criticality_report(g, 1e-5);
  for (auto& c : cands) {
    c.weight = edge_weight(base_crits.value[static_cast<std::size_t>(c.ep_u)],
                           base_crits.value[static_cast<std::size_t>(c.ep_a)]);
  }

  const Selection plain = greedy_perturbation(g, cands, budget(2));
  const Selection refreshed = greedy_perturbation(g, cands, budget(2), {.recompute_weights = true});
  REQUIRE(plain.chosen.size() == 2);
  REQUIRE(refreshed.chosen.size() == 2);
  CHECK(plain.chosen[0] == refreshed.chosen[0]);  // first step sees identical weights

  // the second step's weight must match a hand recomputation on g + first edge
  Graph g_after = g;
  const CandidateLink& first = detail::by_id(cands, refreshed.chosen[0]);
  g_after.edges.push_back({std::min(first.ep_u, first.ep_a), std::max(first.ep_u, first.ep_a),
                           first.weight});
  const CriticalityReport crits_after = criticality_report(g_after, 1e-5);
  const CandidateLink& second = detail::by_id(cands, refreshed.chosen[1]);
  const double expect_w = edge_weight(crits_after.value[static_cast<std::size_t>(second.ep_u)],
                                      crits_after.value[static_cast<std::size_t>(second.ep_a)]);
  const double refreshed_gain = refreshed.per_step[1].predicted_gain;
  const double plain_gain = plain.per_step[1].predicted_gain;
  // predicted gain is weight * V_ua: back out the weight ratio
  CHECK(refreshed_gain / plain_gain == Approx(expect_w / second.weight).epsilon(1e-9));
}

TEST_CASE("greedy with no candidates leaves lambda_2 unchanged") {
  const Selection sel = greedy_perturbation(path3(), {}, budget(2));
  CHECK(sel.chosen.empty());
  CHECK(sel.lambda2_after == sel.lambda2_before);
}

TEST_CASE("greedy breaks score ties toward the lowest id") {
  // two interchangeable candidates for the same edge
  std::vector<CandidateLink> cands = {synth(0, 0, 2, 1.0, 0, 0, 0), synth(1, 0, 2, 1.0, 1, 1, 1)};
  const Selection sel = greedy_perturbation(path3(), cands, budget(1));
  REQUIRE(sel.chosen.size() == 1);
  CHECK(sel.chosen[0] == 0);
  const Selection again = greedy_perturbation(path3(), cands, budget(1));
  CHECK(again.chosen == sel.chosen);
}

TEST_CASE("greedy removes candidates sharing the selected UE, RIS, or UAV") {
  Graph g;
  g.n_nodes = 5;
  g.kinds.assign(5, NodeKind::Uav);
  g.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}};
  // both candidates belong to UE label 0; only one may be taken even with R=2
  std::vector<CandidateLink> cands = {synth(0, 0, 4, 1.0, 0, 0, 0), synth(1, 0, 3, 1.0, 0, 1, 1)};
  const Selection sel = greedy_perturbation(g, cands, budget(2));
  CHECK(sel.chosen.size() == 1);
}

TEST_CASE("greedy falls back to exact scoring while disconnected") {
  Graph g;
  g.n_nodes = 4;
  g.kinds.assign(4, NodeKind::Uav);
  g.edges = {{0, 1, 1.0}, {2, 3, 1.0}};  // two components
  // candidate 1 is a heavy parallel edge (useless), candidate 0 bridges
  std::vector<CandidateLink> cands = {synth(0, 1, 2, 0.5, 0, 0, 0), synth(1, 0, 1, 5.0, 1, 1, 1)};
  const Selection sel = greedy_perturbation(g, cands, budget(1));
  REQUIRE(sel.chosen == std::vector<int>{0});
  REQUIRE(sel.per_step.size() == 1);
  CHECK(sel.per_step[0].exact_fallback);
  CHECK(sel.lambda2_before == Approx(0.0).margin(1e-9));
  CHECK(sel.lambda2_after > 0.1);
}

TEST_CASE("exhaustive picks the single candidate even at zero gain") {
  Graph g;
  g.n_nodes = 5;
  g.kinds.assign(5, NodeKind::Uav);
  g.edges = {{0, 1, 1.0}, {2, 3, 1.0}};  // three components, stays disconnected
  std::vector<CandidateLink> cands = {synth(0, 0, 2, 1.0, 0, 0, 0)};
  const Selection sel = exhaustive(g, cands, budget(1));
  CHECK(sel.chosen == std::vector<int>{0});
  CHECK(sel.lambda2_after == Approx(0.0).margin(1e-9));
}

TEST_CASE("exhaustive prefers closing the triangle over reinforcing an edge") {
  // candidate 1 reinforces the existing (0,1) edge: lambda_2 = 3 - sqrt(3)
  std::vector<CandidateLink> cands = {synth(0, 0, 1, 1.0, 1, 1, 1), synth(1, 0, 2, 1.0, 0, 0, 0)};
  const Selection sel = exhaustive(path3(), cands, budget(1));
  REQUIRE(sel.chosen == std::vector<int>{1});
  CHECK(sel.lambda2_after == Approx(3.0).epsilon(1e-9));
  const double reinforced = spectrum(rank_one_add(laplacian(path3()), 0, 1, 1.0)).fiedler_value;
  CHECK(reinforced == Approx(3.0 - std::sqrt(3.0)).epsilon(1e-9));
}

TEST_CASE("exhaustive ties break to the lexicographically smallest nonempty subset") {
  // two mirror candidates over the path give identical spectra
  std::vector<CandidateLink> cands = {synth(0, 0, 2, 1.0, 0, 0, 0), synth(1, 2, 0, 1.0, 1, 1, 1)};
  const Selection sel = exhaustive(path3(), cands, budget(1));
  CHECK(sel.chosen == std::vector<int>{0});
}

TEST_CASE("exhaustive refuses to explode") {
  Graph g;
  g.n_nodes = 10;
  g.kinds.assign(10, NodeKind::Uav);
  for (int i = 1; i < 10; ++i) g.edges.push_back({i - 1, i, 1.0});
  std::vector<CandidateLink> cands;
  for (int k = 0; k < 20; ++k) cands.push_back(synth(k, 0, 9, 1.0, k, k, k));
  CHECK_THROWS_AS(exhaustive(g, cands, budget(5), /*subset_guard=*/100.0), ExplosionGuardError);
}

TEST_CASE("greedy never beats exhaustive, and matches it often (random instances)") {
  Rng rng(424242);
  int ok_ratio = 0;
  int total = 0;
  for (int t = 0; t < 120; ++t) {
    const Instance inst = random_instance(rng, 10, 3);
    const Selection ex = exhaustive(inst.g, inst.cands, inst.cons);
    const Selection gr = greedy_perturbation(inst.g, inst.cands, inst.cons);
    CHECK(gr.lambda2_after <= ex.lambda2_after + 1e-9);
    CHECK(is_feasible([&] {
            std::vector<CandidateLink> sel;
            for (int id : gr.chosen) sel.push_back(detail::by_id(inst.cands, id));
            return sel;
          }(),
          inst.cons));
    ++total;
    const double ratio = ex.lambda2_after > 1e-12 ? gr.lambda2_after / ex.lambda2_after : 1.0;
    if (ratio >= 0.95) ++ok_ratio;
  }
  // Synthetic candidates on arbitrary node pairs are deliberately more
  // adversarial than pipeline instances (those sit near 98%, see the
  // acceptance suite), so the gate here is looser.
  CHECK(ok_ratio >= static_cast<int>(0.8 * total));
}

TEST_CASE("random baseline is reproducible and feasible") {
  Rng rng(11);
  const Instance inst = random_instance(rng, 10, 3);
  const Selection a = random_baseline(inst.g, inst.cands, inst.cons, 555);
  const Selection b = random_baseline(inst.g, inst.cands, inst.cons, 555);
  CHECK(a.chosen == b.chosen);
  CHECK(a.lambda2_after == b.lambda2_after);
  const Selection c = random_baseline(inst.g, inst.cands, inst.cons, 556);
  CHECK(a.lambda2_after >= a.lambda2_before - 1e-12);
  CHECK(c.lambda2_after >= c.lambda2_before - 1e-12);
  CHECK(random_baseline(inst.g, {}, inst.cons, 1).chosen.empty());
}

TEST_CASE("random baseline averages below greedy on a fixed instance") {
  Rng rng(99);
  Instance inst = random_instance(rng, 12, 3);
  while (inst.cands.size() < 4) inst = random_instance(rng, 12, 3);
  const Selection gr = greedy_perturbation(inst.g, inst.cands, inst.cons);
  double mean = 0.0;
  const int runs = 500;
  for (int s = 0; s < runs; ++s) {
    mean += random_baseline(inst.g, inst.cands, inst.cons, static_cast<std::uint64_t>(s)).lambda2_after;
  }
  mean /= runs;
  CHECK(mean <= gr.lambda2_after + 1e-9);
}

TEST_CASE("per-step realized gains respect the first-order bound") {
  Rng rng(8080);
  for (int t = 0; t < 40; ++t) {
    const Instance inst = random_instance(rng, 10, 3);
    for (const Selection& sel :
         {greedy_perturbation(inst.g, inst.cands, inst.cons),
          random_baseline(inst.g, inst.cands, inst.cons, 17)}) {
      double prev = sel.lambda2_before;
      for (const StepRecord& step : sel.per_step) {
        if (!step.exact_fallback) {
          CHECK(step.realized_lambda2 - prev <= step.predicted_gain + 1e-9);
        }
        CHECK(step.realized_lambda2 >= prev - 1e-9);
        prev = step.realized_lambda2;
      }
    }
  }
}

TEST_CASE("first_order_upper values") {
  CHECK(first_order_upper(1.7, 0.0, 0.3, -0.4) == Approx(1.7));
  SECTION("path-to-cycle is attained exactly") {
    const SpectralResult pre = spectrum(laplacian(path3()));
    const double bound = first_order_upper(pre.fiedler_value, 1.0, pre.fiedler_vector[0],
                                     pre.fiedler_vector[2]);
    CHECK(bound == Approx(3.0).epsilon(1e-12));
    CHECK(spectrum(rank_one_add(laplacian(path3()), 0, 2, 1.0)).fiedler_value ==
          Approx(bound).epsilon(1e-9));
  }
  SECTION("star plus leaf-leaf edge stays below the bound") {
    Graph star;
    star.n_nodes = 4;
    star.kinds.assign(4, NodeKind::Uav);
    star.edges = {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}};
    const Laplacian L = laplacian(star);
    const SpectralResult pre = spectrum(L);
    CHECK(pre.fiedler_value == Approx(1.0).epsilon(1e-9));
    const double bound = first_order_upper(pre.fiedler_value, 1.0, pre.fiedler_vector[1],
                                     pre.fiedler_vector[2]);
    const double realized = spectrum(rank_one_add(L, 1, 2, 1.0)).fiedler_value;
    CHECK(realized <= bound + 1e-9);
  }
}

TEST_CASE("edge-add bounds on the path-to-cycle case") {
  const Laplacian L = laplacian(path3());
  const SpectralResult pre = spectrum(L);
  const BoundsReport rep = edge_add_bounds(L, pre, 0, 2, 1.0);
  CHECK(rep.delta == Approx(2.0).epsilon(1e-9));
  CHECK(rep.lower == Approx(1.0 + (6.0 - std::sqrt(18.0)) / 2.0).epsilon(1e-9));
  CHECK(rep.lower == Approx(1.8786796564403576).epsilon(1e-9));
  CHECK(rep.upper_secular == Approx(3.0).epsilon(1e-9));
  CHECK(rep.upper_first_order == Approx(3.0).epsilon(1e-9));
  CHECK(rep.actual == Approx(3.0).epsilon(1e-9));
  CHECK(rep.upper_defined);
  CHECK(rep.lower_defined);
}

TEST_CASE("edge-add bounds degenerate cases") {
  const Laplacian L = laplacian(path3());
  const SpectralResult pre = spectrum(L);
  SECTION("zero weight collapses both bounds to lambda_2") {
    const BoundsReport rep = edge_add_bounds(L, pre, 0, 2, 0.0);
    CHECK(rep.lower == Approx(1.0).epsilon(1e-12));
    CHECK(rep.upper_secular == Approx(1.0).epsilon(1e-12));
    CHECK(rep.actual == Approx(1.0).epsilon(1e-9));
  }
  SECTION("complete graph has lambda_n = lambda_2: upper flagged undefined") {
    Graph k4;
    k4.n_nodes = 4;
    k4.kinds.assign(4, NodeKind::Uav);
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) k4.edges.push_back({i, j, 1.0});
    }
    const Laplacian LK = laplacian(k4);
    const BoundsReport rep = edge_add_bounds(LK, spectrum(LK), 0, 1, 0.5);
    CHECK_FALSE(rep.upper_defined);
    CHECK(rep.upper_first_order >= rep.actual - 1e-9);
  }
  SECTION("preconditions") {
    Graph disc;
    disc.n_nodes = 4;
    disc.kinds.assign(4, NodeKind::Uav);
    disc.edges = {{0, 1, 1.0}};
    const Laplacian LD = laplacian(disc);
    CHECK_THROWS_AS(edge_add_bounds(LD, spectrum(LD), 0, 2, 1.0), std::invalid_argument);
    Graph two;
    two.n_nodes = 2;
    two.kinds.assign(2, NodeKind::Uav);
    two.edges = {{0, 1, 1.0}};
    const Laplacian L2 = laplacian(two);
    CHECK_THROWS_AS(edge_add_bounds(L2, spectrum(L2), 0, 1, 1.0), std::invalid_argument);
  }
}

TEST_CASE("secular upper bound holds on random adds; closed-form lower is only reported") {
  Rng rng(31337);
  int lower_checked = 0;
  int lower_violations = 0;
  int lower_undefined = 0;
  for (int t = 0; t < 300; ++t) {
    const int v = 4 + static_cast<int>(rng.index(10));
    const Graph g = oracles::random_connected_graph(rng, v);
    const Laplacian L = laplacian(g);
    const SpectralResult pre = spectrum(L);
    const int i = static_cast<int>(rng.index(static_cast<std::size_t>(v)));
    int j = static_cast<int>(rng.index(static_cast<std::size_t>(v)));
    if (i == j) j = (j + 1) % v;
    const double w = rng.uniform(0.05, 2.0);
    const BoundsReport rep = edge_add_bounds(L, pre, i, j, w);
    if (rep.upper_defined) {
      CHECK(rep.actual <= rep.upper_secular + 1e-8);
      CHECK(rep.upper_secular <= rep.upper_first_order + 1e-9);
    }
    CHECK(rep.actual <= rep.upper_first_order + 1e-9);
    if (rep.lower_defined) {
      ++lower_checked;
      if (rep.actual < rep.lower - 1e-8) ++lower_violations;
    } else {
      ++lower_undefined;
    }
  }
  REQUIRE(lower_checked > 0);
  WARN("closed-form lower bound: " << lower_violations << "/" << lower_checked
                               << " violations, " << lower_undefined
                               << " undefined radicands (reported, not asserted)");
}

TEST_CASE("secular equation on a synthetic three-pole spectrum") {
  // synthetic spectrum lambda = {0, 2, 3, 4} with u_k^2 = 0.5 on k = 2..4
  SpectralResult pre;
  pre.eigenvalues.resize(4);
  pre.eigenvalues << 0.0, 2.0, 3.0, 4.0;
  pre.eigenvectors = Eigen::MatrixXd::Zero(4, 4);
  const double r = std::sqrt(0.5);
  // rows 0 and 1 of Q differ by sqrt(0.5) in columns 1..3, match in column 0
  pre.eigenvectors(0, 0) = pre.eigenvectors(1, 0) = 0.5;
  for (int k = 1; k < 4; ++k) {
    pre.eigenvectors(0, k) = r;
    pre.eigenvectors(1, k) = 0.0;
  }
  pre.fiedler_value = 2.0;

  auto f = [&](double x) {
    return 1.0 + 0.5 / (2.0 - x) + 0.5 / (3.0 - x) + 0.5 / (4.0 - x);
  };
  CHECK(f(2.5) == Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(f(2.0 + 1e-6) < 0.0);

  const double root = secular_lambda2(pre, 1.0, 0, 1);
  CHECK(root > 2.0);
  CHECK(root < 2.5);
  CHECK(f(root) == Approx(0.0).margin(1e-8));
}

TEST_CASE("secular equation degenerate routes") {
  SECTION("edge orthogonal to the Fiedler vector keeps lambda_2") {
    // path-4: the Fiedler vector is antisymmetric, middle pair has v_1 != v_2;
    // build a synthetic case with u_2 = 0 instead
    SpectralResult pre;
    pre.eigenvalues.resize(3);
    pre.eigenvalues << 0.0, 1.0, 3.0;
    pre.eigenvectors = Eigen::MatrixXd::Zero(3, 3);
    pre.eigenvectors.col(1) << 0.5, 0.5, -1.0;  // u_2 = Q(0,1) - Q(1,1) = 0
    pre.eigenvectors.col(2) << 1.0, -1.0, 0.0;
    pre.fiedler_value = 1.0;
    CHECK(secular_lambda2(pre, 1.0, 0, 1) == 1.0);
  }
  SECTION("large weight pushes the root onto lambda_3") {
    const Laplacian L = laplacian(path3());
    const SpectralResult pre = spectrum(L);
    const double got = secular_lambda2(pre, 5.0, 0, 2);
    const double truth = spectrum(rank_one_add(L, 0, 2, 5.0)).fiedler_value;
    CHECK(got == Approx(3.0).margin(1e-8));
    CHECK(got == Approx(truth).margin(1e-8));
  }
  SECTION("preconditions") {
    const Laplacian L = laplacian(path3());
    const SpectralResult pre = spectrum(L);
    CHECK_THROWS_AS(secular_lambda2(pre, 1.0, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(secular_lambda2(pre, 1.0, 0, 5), std::invalid_argument);
    Graph k3;
    k3.n_nodes = 3;
    k3.kinds.assign(3, NodeKind::Uav);
    k3.edges = {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}};
    const Laplacian LK = laplacian(k3);
    CHECK_THROWS_AS(secular_lambda2(spectrum(LK), 1.0, 0, 1), std::invalid_argument);
  }
}

TEST_CASE("secular root equals the eigensolver on random rank-one adds") {
  Rng rng(60601);
  int checked = 0;
  while (checked < 250) {
    const int v = 4 + static_cast<int>(rng.index(12));
    const Graph g = oracles::random_connected_graph(rng, v);
    const Laplacian L = laplacian(g);
    const SpectralResult pre = spectrum(L);
    if (!(pre.fiedler_value > 1e-10) || !(pre.eigenvalues[2] - pre.eigenvalues[1] > 1e-10)) {
      continue;
    }
    const int i = static_cast<int>(rng.index(static_cast<std::size_t>(v)));
    int j = static_cast<int>(rng.index(static_cast<std::size_t>(v)));
    if (i == j) j = (j + 1) % v;
    const double w = rng.uniform(0.05, 3.0);
    const double got = secular_lambda2(pre, w, i, j);
    const double truth = spectrum(rank_one_add(L, i, j, w)).fiedler_value;
    CHECK(got == Approx(truth).margin(1e-8));
    ++checked;
  }
}

TEST_CASE("capped-simplex projection matches the bisection oracle") {
  Rng rng(505);
  for (int t = 0; t < 300; ++t) {
    const int n = 1 + static_cast<int>(rng.index(12));
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = rng.uniform(-2.0, 3.0);
    const double total = rng.uniform(0.0, static_cast<double>(n));
    const Eigen::VectorXd z = project_capped_simplex(y, total);
    const Eigen::VectorXd z_oracle = oracles::project_capped_simplex_bisect(y, total);
    CHECK((z - z_oracle).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(z.sum() == Approx(total).margin(1e-8));
    CHECK(z.minCoeff() >= -1e-12);
    CHECK(z.maxCoeff() <= 1.0 + 1e-12);
  }
  SECTION("boundary totals and idempotence") {
    Eigen::VectorXd y(3);
    y << 0.2, -1.0, 4.0;
    CHECK(project_capped_simplex(y, 0.0).isZero());
    CHECK(project_capped_simplex(y, 3.0).isOnes());
    Eigen::VectorXd feasible(3);
    feasible << 0.25, 0.5, 0.25;
    const Eigen::VectorXd z = project_capped_simplex(feasible, 1.0);
    CHECK((z - feasible).cwiseAbs().maxCoeff() < 1e-10);
    CHECK_THROWS_AS(project_capped_simplex(y, 5.0), std::invalid_argument);
  }
}

TEST_CASE("relaxation with |z| = R snaps to all-ones") {
  std::vector<CandidateLink> cands = {synth(0, 0, 2, 1.0, 0, 0, 0),
                                      synth(1, 1, 2, 0.5, 1, 1, 1)};
  const auto [relaxed, sel] = relax_and_round(path3(), cands, budget(2), 50, 1e-9);
  REQUIRE(relaxed.z.size() == 2);
  CHECK(relaxed.z[0] == Approx(1.0).margin(1e-9));
  CHECK(relaxed.z[1] == Approx(1.0).margin(1e-9));
  CHECK(sel.chosen.size() == 2);
  CHECK(relaxed.objective == Approx(sel.lambda2_after).epsilon(1e-9));
}

TEST_CASE("single candidate relaxation equals greedy") {
  std::vector<CandidateLink> cands = {synth(0, 0, 2, 1.0, 0, 0, 0)};
  const auto [relaxed, sel] = relax_and_round(path3(), cands, budget(1), 50, 1e-9);
  const Selection gr = greedy_perturbation(path3(), cands, budget(1));
  CHECK(relaxed.z[0] == Approx(1.0).margin(1e-12));
  CHECK(sel.chosen == gr.chosen);
  CHECK(sel.lambda2_after == Approx(gr.lambda2_after).epsilon(1e-12));
}

TEST_CASE("relaxation sandwich against the exhaustive oracle") {
  Rng rng(971);
  for (int t = 0; t < 25; ++t) {
    const Instance inst = random_instance(rng, 10, 3);
    const Selection ex = exhaustive(inst.g, inst.cands, inst.cons);
    const auto [relaxed, rounded] =
        relax_and_round(inst.g, inst.cands, inst.cons, 4000, 1e-12);
    // rounded selection is feasible, so it cannot beat the oracle
    CHECK(rounded.lambda2_after <= ex.lambda2_after + 1e-9);
    // the continuous optimum dominates the best integer point
    CHECK(relaxed.objective >= ex.lambda2_after - 1e-6);
    // dominance chain
    CHECK(relaxed.objective >= rounded.lambda2_after - 1e-9);
    CHECK(rounded.lambda2_after >= rounded.lambda2_before - 1e-9);
    const double sum = relaxed.z.sum();
    const double want = std::min<double>(inst.cons.max_links, static_cast<double>(inst.cands.size()));
    CHECK(sum == Approx(want).margin(1e-6));
    CHECK(relaxed.z.minCoeff() >= -1e-9);
    CHECK(relaxed.z.maxCoeff() <= 1.0 + 1e-9);
  }
}

TEST_CASE("rounding repairs feasibility; plain_rounding wastes colliding picks") {
  // the two strongest candidates share a UAV: repaired rounding replaces the
  // loser with the weak third candidate, plain top-R rounding just drops it
  Graph g;
  g.n_nodes = 4;
  g.kinds.assign(4, NodeKind::Uav);
  g.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}};
  std::vector<CandidateLink> cands = {synth(0, 0, 3, 1.0, 0, 0, 0), synth(1, 1, 3, 1.0, 1, 1, 0),
                                      synth(2, 0, 2, 0.05, 2, 2, 1)};
  // hand-picked mass ranks the two colliding candidates first
  std::vector<const CandidateLink*> ordered = {&cands[0], &cands[1], &cands[2]};
  Eigen::VectorXd z(3);
  z << 0.9, 0.8, 0.3;

  const Selection repaired = detail::round_by_mass(g, ordered, z, budget(2), false);
  std::vector<CandidateLink> picked;
  for (int id : repaired.chosen) picked.push_back(detail::by_id(cands, id));
  REQUIRE(repaired.chosen == std::vector<int>{0, 2});  // 1 collides, 2 substitutes
  CHECK(is_feasible(picked, budget(2)));

  const Selection plain = detail::round_by_mass(g, ordered, z, budget(2), true);
  REQUIRE(plain.chosen == std::vector<int>{0});  // the colliding pick is dropped
  std::vector<CandidateLink> plain_picked;
  for (int id : plain.chosen) plain_picked.push_back(detail::by_id(cands, id));
  CHECK(is_feasible(plain_picked, budget(2)));
  CHECK(plain.lambda2_after <= repaired.lambda2_after + 1e-9);

  // ties in z fall back to the lower id
  Eigen::VectorXd tied = Eigen::VectorXd::Constant(3, 0.5);
  const Selection tie_sel = detail::round_by_mass(g, ordered, tied, budget(1), true);
  REQUIRE(tie_sel.chosen == std::vector<int>{0});

  // the full pipeline still produces feasible selections under both modes
  for (bool mode : {false, true}) {
    const auto [rel, sel] = relax_and_round(g, cands, budget(2), 300, 1e-10, mode);
    std::vector<CandidateLink> chosen;
    for (int id : sel.chosen) chosen.push_back(detail::by_id(cands, id));
    CHECK(is_feasible(chosen, budget(2)));
    CHECK(sel.lambda2_after >= sel.lambda2_before - 1e-9);
  }
}
