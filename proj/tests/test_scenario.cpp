#include <catch2/catch.hpp>

#include "risconn/scenario.hpp"

using namespace risconn;

TEST_CASE("distance is the Euclidean metric") {
  CHECK(distance({0, 0, 0}, {0, 0, 0}) == 0.0);
  CHECK(distance({0, 0, 0}, {3, 4, 0}) == Approx(5.0));
  CHECK(distance({0, 0, 0}, {1, 1, 1}) == Approx(1.7320508075688772));
  CHECK(distance({1, 2, 3}, {4, 0, -1}) == distance({4, 0, -1}, {1, 2, 3}));
}

TEST_CASE("dB helpers round-trip to 1e-12 relative") {
  Rng rng(99);
  for (int k = 0; k < 200; ++k) {
    const double db = rng.uniform(-200.0, 200.0);
    CHECK(db_from_linear(linear_from_db(db)) == Approx(db).margin(1e-12 * std::max(1.0, std::abs(db))));
  }
  CHECK(watts_from_dbm(-130.0) == Approx(1e-16).epsilon(1e-12));
  CHECK(watts_from_dbm(30.0) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("wrap_two_pi lands in [0, 2pi)") {
  Rng rng(5);
  for (int k = 0; k < 500; ++k) {
    const double w = wrap_two_pi(rng.uniform(-100.0, 100.0));
    CHECK(w >= 0.0);
    CHECK(w < kTwoPi);
  }
  CHECK(wrap_two_pi(0.0) == 0.0);
  CHECK(wrap_two_pi(kTwoPi) == 0.0);
  CHECK(wrap_two_pi(-1e-9) < kTwoPi);
}

TEST_CASE("generate_random places nodes as configured") {
  RadioParams p;
  const Scenario s = generate_random(7, 15, 10, 3, 150.0, 150.0, 50.0, 20.0, p);
  CHECK(s.ue_count() == 15);
  CHECK(s.uav_count() == 10);
  CHECK(s.ris_count() == 3);
  CHECK(s.ue_count() + s.uav_count() + s.ris_count() == 28);
  CHECK(s.node_count() == 25);
  for (const auto& ue : s.ues) {
    CHECK(ue.z == 0.0);
    CHECK(ue.x >= 0.0);
    CHECK(ue.x <= 150.0);
    CHECK(ue.y >= 0.0);
    CHECK(ue.y <= 150.0);
  }
  for (const auto& uav : s.uavs) CHECK(uav.z == 50.0);
  for (const auto& ris : s.riss) CHECK(ris.z == 20.0);
}

TEST_CASE("generate_random is deterministic per seed") {
  RadioParams p;
  const Scenario a = generate_random(42, 8, 5, 2, 100.0, 80.0, 40.0, 15.0, p);
  const Scenario b = generate_random(42, 8, 5, 2, 100.0, 80.0, 40.0, 15.0, p);
  REQUIRE(a.ues.size() == b.ues.size());
  for (std::size_t i = 0; i < a.ues.size(); ++i) {
    CHECK(a.ues[i].x == b.ues[i].x);
    CHECK(a.ues[i].y == b.ues[i].y);
  }
  for (std::size_t i = 0; i < a.uavs.size(); ++i) {
    CHECK(a.uavs[i].x == b.uavs[i].x);
    CHECK(a.uavs[i].y == b.uavs[i].y);
  }
  const Scenario c = generate_random(43, 8, 5, 2, 100.0, 80.0, 40.0, 15.0, p);
  CHECK(a.ues[0].x != c.ues[0].x);
}

TEST_CASE("RIS placements are prefix-stable as the count grows") {
  RadioParams p;
  const Scenario small = generate_random(1, 2, 2, 3, 150.0, 150.0, 50.0, 20.0, p);
  const Scenario large = generate_random(1, 2, 2, 6, 150.0, 150.0, 50.0, 20.0, p);
  for (int r = 0; r < 3; ++r) {
    CHECK(small.riss[r].x == large.riss[r].x);
    CHECK(small.riss[r].y == large.riss[r].y);
  }
  // RIS placement draws nothing from the RNG stream, so UE/UAV layouts match.
  for (int u = 0; u < 2; ++u) {
    CHECK(small.ues[u].x == large.ues[u].x);
    CHECK(small.uavs[u].y == large.uavs[u].y);
  }
}

TEST_CASE("node indices are stable in UE-then-UAV order") {
  RadioParams p;
  const Scenario s = generate_random(1, 4, 3, 0, 50.0, 50.0, 30.0, 10.0, p);
  for (int u = 0; u < 4; ++u) CHECK(s.ue_node(u) == u);
  for (int a = 0; a < 3; ++a) CHECK(s.uav_node(a) == 4 + a);
}

TEST_CASE("generate_random rejects bad arguments") {
  RadioParams p;
  CHECK_THROWS_AS(generate_random(1, 0, 1, 0, 10, 10, 5, 5, p), std::invalid_argument);
  CHECK_THROWS_AS(generate_random(1, 1, 0, 0, 10, 10, 5, 5, p), std::invalid_argument);
  CHECK_THROWS_AS(generate_random(1, 1, 1, -1, 10, 10, 5, 5, p), std::invalid_argument);
  CHECK_THROWS_AS(generate_random(1, 1, 1, 0, 0.0, 10, 5, 5, p), std::invalid_argument);
  CHECK_THROWS_AS(generate_random(1, 1, 1, 0, 10, -3.0, 5, 5, p), std::invalid_argument);
  RadioParams bad = p;
  bad.noise_w = 0.0;
  CHECK_THROWS_AS(generate_random(1, 1, 1, 0, 10, 10, 5, 5, bad), std::invalid_argument);
}

TEST_CASE("degenerate one-UE one-UAV scenario is representable") {
  RadioParams p;
  const Scenario s = generate_random(1, 1, 1, 0, 150.0, 150.0, 50.0, 20.0, p);
  CHECK(s.node_count() == 2);
  CHECK(s.ris_count() == 0);
}
