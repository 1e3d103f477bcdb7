#include <doctest.h>

#include <map>

#include "reprofile/oracle.hpp"
#include "reprofile/provision.hpp"
#include "support.hpp"

using namespace reprofile;
using reprofile::testing::make_flow;
using reprofile::testing::make_scenario;

TEST_CASE("reshaped arrival") {
  CHECK(oracle::reshaped_arrival(1, 2, 0, 0.0) == 2.0);
  CHECK(oracle::reshaped_arrival(1, 2, 0, 1.0) == 3.0);
  CHECK(oracle::reshaped_arrival(1, 2, 2, 1.0) == doctest::Approx(1.0));
  CHECK(oracle::reshaped_arrival(1, 4, 2, 1.0) == doctest::Approx(2.0));
  CHECK(oracle::reshaped_arrival(1, 4, 2, 3.0) == doctest::Approx(5.0));
  CHECK(oracle::reshaped_arrival(1, 4, 2, 0.0) == 0.0);
}

TEST_CASE("dense class rate") {
  const std::vector<oracle::OracleFlow> f{{1, 1, 0, 1}, {1, 2, 0, 2}};
  CHECK(oracle::dense_class_rate(f, 1, 1.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(oracle::dense_class_rate(f, 2, 2.0) == doctest::Approx(2.5).epsilon(1e-6));
  CHECK(oracle::dense_class_rate(f, 3, 2.0) == 0.0);
  CHECK(oracle::dense_class_rate(f, 1, 0.0) == kInfinity);
  const std::vector<double> T{1.0, 2.0};
  CHECK(oracle::dense_link_rate(f, T) == doctest::Approx(2.5).epsilon(1e-6));
}

TEST_CASE("grid minimum for FIFO") {
  const Scenario a = make_scenario(1, {make_flow(0, 1, 2, 2, {0})});
  CHECK(oracle::grid_min_bandwidth_fifo(a).total == doctest::Approx(1.0).epsilon(0.01));
  const Scenario b = make_scenario(1, {make_flow(0, 1, 2, 1, {0})});
  const oracle::GridResult rb = oracle::grid_min_bandwidth_fifo(b);
  CHECK(rb.feasible);
  CHECK(rb.total == doctest::Approx(2.0).epsilon(0.01));

  const Scenario empty = make_scenario(1, {});
  CHECK(oracle::grid_min_bandwidth_fifo(empty).total == 0.0);

  const Scenario big = make_scenario(4, {make_flow(0, 1, 1, 1, {0})});
  CHECK_THROWS_AS(oracle::grid_min_bandwidth_fifo(big), oracle::OracleRefused);
  Scenario many = make_scenario(1, {});
  for (int i = 0; i < 4; ++i) many.flows.push_back(make_flow(i, 1, 1, 1, {0}));
  CHECK_THROWS_AS(oracle::grid_min_bandwidth_fifo(many), oracle::OracleRefused);
}

TEST_CASE("grid points are feasible") {
  Rng rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<FlowSpec> flows;
    const int links = 1 + static_cast<int>(rng.index(2));
    for (int i = 0; i < 1 + static_cast<int>(rng.index(3)); ++i) {
      std::vector<int> path{static_cast<int>(rng.index(static_cast<std::uint64_t>(links)))};
      if (links == 2 && rng.unit() < 0.5) path = {0, 1};
      flows.push_back(make_flow(i, rng.uniform(1, 10), rng.uniform(1, 10), rng.uniform(0.2, 3), path));
    }
    const Scenario s = make_scenario(links, flows);
    const oracle::GridResult r = oracle::grid_min_bandwidth_fifo(s);
    REQUIRE(r.feasible);
    for (std::size_t i = 0; i < s.flows.size(); ++i) {
      double used = r.D[static_cast<Eigen::Index>(i)];
      for (int j : s.flows[i].path) used += r.T[j];
      CHECK(used <= s.flows[i].deadline + 1e-9);
      CHECK(r.D[static_cast<Eigen::Index>(i)] <= s.flows[i].max_shaping_delay() + 1e-12);
    }
  }
}

TEST_CASE("assignment enumeration") {
  const std::vector<oracle::OracleFlow> f{{1, 1, 0, 1}, {1, 2, 0, 1}};
  const std::vector<double> local{1.0, 2.0};
  const oracle::AssignmentResult r = oracle::enumerate_assignments_min(f, local, 2);
  CHECK(r.all.size() == 4);
  CHECK(r.best == doctest::Approx(2.5).epsilon(1e-6));
  CHECK(r.best_ordered == doctest::Approx(2.5).epsilon(1e-6));
  CHECK(oracle::deadline_ordered(r.best_assignment, local));
  // Little-endian index: 2 is {f1: 1, f2: 2}, 1 is the reversed {2, 1}.
  CHECK(r.all[2] == doctest::Approx(2.5).epsilon(1e-6));
  CHECK(r.all[1] >= 2.5 - 1e-6);

  const oracle::AssignmentResult single = oracle::enumerate_assignments_min(f, local, 1);
  CHECK(single.all.size() == 1);
  const std::vector<double> fifo_T{1.0};
  CHECK(single.best == doctest::Approx(oracle::dense_link_rate(f, fifo_T)).epsilon(1e-12));

  const std::vector<oracle::OracleFlow> same(3, oracle::OracleFlow{2, 3, 0.5, 1});
  const std::vector<double> d3{1.5, 1.5, 1.5};
  const oracle::AssignmentResult sym = oracle::enumerate_assignments_min(same, d3, 2);
  // Identical flows: assignments with the same class sizes cost the same.
  // (Different splits do not: a higher class is served ahead of its deadline.)
  std::map<std::vector<int>, double> by_sizes;
  for (std::size_t a = 0; a < sym.all.size(); ++a) {
    std::vector<int> sizes(2, 0);
    for (std::size_t i = 0, code = a; i < 3; ++i, code /= 2) ++sizes[code % 2];
    if (!by_sizes.count(sizes)) by_sizes[sizes] = sym.all[a];
    CHECK(sym.all[a] == doctest::Approx(by_sizes[sizes]).epsilon(1e-9));
  }
  CHECK(by_sizes.at({3, 0}) == doctest::Approx(by_sizes.at({0, 3})).epsilon(1e-9));

  const std::vector<oracle::OracleFlow> seven(7, oracle::OracleFlow{1, 1, 0, 1});
  const std::vector<double> d7(7, 1.0);
  CHECK_THROWS_AS(oracle::enumerate_assignments_min(seven, d7, 2), oracle::OracleRefused);
  CHECK_THROWS_AS(oracle::enumerate_assignments_min(f, local, 4), oracle::OracleRefused);

  CHECK(oracle::deadline_ordered(std::vector<int>{1, 2}, local));
  CHECK(!oracle::deadline_ordered(std::vector<int>{2, 1}, local));
  CHECK(!oracle::deadline_ordered(std::vector<int>{1, 2}, std::vector<double>{1.0, 1.0}));
}

TEST_CASE("property: oracle agrees with provisioning") {
  Rng rng(52);
  for (int trial = 0; trial < 300; ++trial) {
    const LinkClassState st = testing::random_lattice_state(rng, 5, 3);
    std::vector<oracle::OracleFlow> f;
    for (const LinkFlow& lf : st.flows) f.push_back({lf.profile.rate, lf.profile.burst, lf.shaping_delay, lf.priority});
    const double exact = link_bandwidth(st).rate;
    const double dense = oracle::dense_link_rate(f, st.class_deadlines);
    if (std::isinf(exact)) {
      CHECK(std::isinf(dense));
    } else {
      CHECK(dense == doctest::Approx(exact).epsilon(1e-6));
    }
  }
}
