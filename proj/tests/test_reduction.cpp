#include <algorithm>
#include <random>
#include <vector>

#include "doctest.h"
#include "rlnc/errors.hpp"
#include "rlnc/occupancy.hpp"
#include "rlnc/reduction.hpp"
#include "test_util.hpp"

using rlnc::ErasureNetwork;
using rlnc::ErrorKind;

namespace {

// s -> 1 -> 2 -> d with an extra skip edge 1 -> d; relay 1 then sits at
// distance 1 and the edge 1 -> 2 no longer descends a layer.
ErasureNetwork make_skip_line() {
  rlnc::NetworkDescription d;
  d.node_ids = {"s", "1", "2", "d"};
  d.buffers = {1, 1, 1, 1};
  d.edges = {{"s", "1", 0.5, ""},
             {"1", "2", 0.5, ""},
             {"2", "d", 0.5, ""},
             {"1", "d", 0.5, ""}};
  d.source = "s";
  d.dest = "d";
  return ErasureNetwork::validate(d);
}

std::vector<std::uint32_t> prefix_masks(int n) {
  std::vector<std::uint32_t> out;
  for (int i = 0; i <= n; ++i) out.push_back((1u << i) - 1);
  return out;
}

}  // namespace

TEST_CASE("layer partition by distance to the destination") {
  const ErasureNetwork line = testutil::make_line(2, {0.5, 0.5, 0.5});
  const rlnc::LayerPartition lp = rlnc::layered_partition(line);
  CHECK(lp.layer_of[line.source()] == -1);
  CHECK(lp.layer_of[line.dest()] == 0);
  REQUIRE(lp.layers.size() == 3);
  CHECK(lp.layers[1] == std::vector<int>{2});
  CHECK(lp.layers[2] == std::vector<int>{1});

  const rlnc::LayerPartition single = rlnc::layered_partition(testutil::make_twohop(0.5, 0.5));
  REQUIRE(single.layers.size() == 2);
  CHECK(single.layers[1] == std::vector<int>{1});

  const rlnc::LayerPartition net1 = rlnc::layered_partition(testutil::make_network1());
  REQUIRE(net1.layers.size() == 4);
  CHECK(net1.layers[1] == std::vector<int>{4});
  CHECK(net1.layers[2] == std::vector<int>{2, 3});
  CHECK(net1.layers[3] == std::vector<int>{1});
}

TEST_CASE("layer check") {
  CHECK(rlnc::is_layered(testutil::make_line(1, {0.5, 0.5})));
  CHECK(rlnc::is_layered(testutil::make_line(4, {0.1, 0.2, 0.3, 0.4, 0.5})));
  CHECK(rlnc::is_layered(testutil::make_network1()));
  CHECK_FALSE(rlnc::is_layered(make_skip_line()));

  std::mt19937_64 rng(51);
  for (int t = 0; t < 30; ++t)
    CHECK(rlnc::is_layered(testutil::make_parallel_lines(rng, 6, 2, {0.2, 0.5, 0.8})));
}

TEST_CASE("tracked family") {
  CHECK(rlnc::tracked_family(testutil::make_twohop(0.5, 0.5)) ==
        std::vector<std::uint32_t>{0, 1});
  for (int n = 1; n <= 6; ++n) {
    std::vector<double> eps(n + 1, 0.5);
    CHECK(rlnc::tracked_family(testutil::make_line(n, eps)) == prefix_masks(n));
  }

  // The benchmark network tracks exactly the sets whose complements drain:
  // every subset of {1,2,3} plus the full set, except {2,3} (whose complement
  // strands relay 1).
  CHECK(rlnc::tracked_family(testutil::make_network1()) ==
        std::vector<std::uint32_t>{0, 1, 2, 3, 4, 5, 7, 15});
}

TEST_CASE("static closure probe") {
  CHECK(rlnc::static_closure_check(testutil::make_line(3, {0.5, 0.5, 0.5, 0.5})).closed);

  std::mt19937_64 rng(52);
  for (int t = 0; t < 30; ++t)
    CHECK(rlnc::static_closure_check(testutil::make_parallel_lines(rng, 6, 2, {0.2, 0.5, 0.8}))
              .closed);

  const ErasureNetwork net1 = testutil::make_network1();
  const rlnc::ClosureCheck probe = rlnc::static_closure_check(net1);
  CHECK_FALSE(probe.closed);
  const auto family = rlnc::tracked_family(net1);
  CHECK(std::binary_search(family.begin(), family.end(), probe.target));
  CHECK_FALSE(std::binary_search(family.begin(), family.end(), probe.demanded));
  CHECK(probe.edge >= 0);
  CHECK(probe.edge < static_cast<int>(net1.edges().size()));
}

TEST_CASE("reduced engine refuses non-layered networks") {
  try {
    rlnc::ReducedEngine engine(make_skip_line());
    FAIL("expected NotLayered");
  } catch (const rlnc::Error& e) {
    CHECK(e.kind() == ErrorKind::NotLayered);
  }
}

TEST_CASE("reduced engine matches the full engine on lines") {
  std::mt19937_64 rng(53);
  for (int n : {1, 2, 3}) {
    std::vector<double> eps(n + 1, 0.4);
    const ErasureNetwork line = testutil::make_line(n, eps, 2);
    rlnc::OccupancyEngine full(line);
    rlnc::ReducedEngine reduced(line);
    CHECK(reduced.family() == prefix_masks(n));
    for (int epoch = 0; epoch < 5000; ++epoch) {
      const rlnc::ChannelRealization r = rlnc::sample_realization(line, rng);
      const int df = full.step(r);
      const int dr = reduced.step_epoch(r);
      CHECK(df == dr);
      for (std::uint32_t mask : reduced.family())
        CHECK(reduced.entry(mask) == full.state().at(mask));
    }
  }
}

TEST_CASE("reduced engine matches the full engine on parallel lines") {
  std::mt19937_64 rng(54);
  for (int t = 0; t < 10; ++t) {
    const ErasureNetwork net = testutil::make_parallel_lines(rng, 6, 2, {0.2, 0.5, 0.8});
    rlnc::OccupancyEngine full(net);
    rlnc::ReducedEngine reduced(net);
    for (int epoch = 0; epoch < 3000; ++epoch) {
      const rlnc::ChannelRealization r = rlnc::sample_realization(net, rng);
      CHECK(full.step(r) == reduced.step_epoch(r));
      for (std::uint32_t mask : reduced.family())
        CHECK(reduced.entry(mask) == full.state().at(mask));
    }
  }
}

TEST_CASE("projection hook seeds the reduced engine mid-run") {
  std::mt19937_64 rng(55);
  const ErasureNetwork line = testutil::make_line(3, {0.3, 0.3, 0.3, 0.3}, 2);
  rlnc::OccupancyEngine full(line);
  for (int epoch = 0; epoch < 50; ++epoch) full.step(rlnc::sample_realization(line, rng));

  rlnc::ReducedEngine reduced(line);
  reduced.set_from_full(full.state());
  for (int epoch = 0; epoch < 2000; ++epoch) {
    const rlnc::ChannelRealization r = rlnc::sample_realization(line, rng);
    CHECK(full.step(r) == reduced.step_epoch(r));
    for (std::uint32_t mask : reduced.family())
      CHECK(reduced.entry(mask) == full.state().at(mask));
  }
}

TEST_CASE("untracked entries are refused") {
  const ErasureNetwork line = testutil::make_line(2, {0.5, 0.5, 0.5});
  rlnc::ReducedEngine reduced(line);
  CHECK(reduced.tracks(1));
  CHECK_FALSE(reduced.tracks(2));  // {2} alone strands relay 1
  CHECK(reduced.entry(1) == 0);
  CHECK_THROWS_AS(reduced.entry(2), rlnc::Error);
}

TEST_CASE("closure violation carries the missing entry") {
  // The benchmark network is layered but not closed.  Script: a packet enters
  // relay 1, hops to relay 3, and the moment 3 -> 4 fires the engine needs
  // the untracked entry {1,3,4} to decide saturation.
  const ErasureNetwork net1 = testutil::make_network1();
  rlnc::ReducedEngine reduced(net1);

  CHECK(reduced.step_epoch(testutil::edges_up(net1, {{"s", "1"}})) == 0);
  CHECK(reduced.step_epoch(testutil::edges_up(net1, {{"1", "3"}})) == 0);
  try {
    reduced.step_epoch(testutil::edges_up(net1, {{"3", "4"}}));
    FAIL("expected ClosureViolation");
  } catch (const rlnc::ClosureViolation& v) {
    CHECK(v.kind() == ErrorKind::ClosureViolation);
    CHECK(v.target_set() == 5);    // {1,3}
    CHECK(v.demanded_set() == 13); // {1,3,4}
    CHECK(v.edge_index() == 1);    // (3,4) in canonical order
  }
}
