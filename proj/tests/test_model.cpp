#include <cmath>

#include "doctest.h"

#include "bscoop/model.hpp"
#include "bscoop/rng.hpp"
#include "helpers.hpp"

using namespace bscoop;
using doctest::Approx;

TEST_CASE("noise and path loss constants") {
  CHECK(dbm_to_watt(-104.0) == Approx(3.98107170553497e-14).epsilon(1e-12));
  const PathLossParams p;
  CHECK(path_loss({0.0, 0.0}, p) == Approx(4.4774e-9).epsilon(1e-4));
  CHECK(path_loss({25.0, 0.0}, p) == Approx(0.5 * path_loss({0.0, 0.0}, p)));
  CHECK(path_loss({0.0, 100.0}, p) < path_loss({0.0, 50.0}, p));
}

TEST_CASE("rates map to SINR targets") {
  const VectorXd g = rates_to_sinr_targets({2.0, 0.0, 1.0});
  CHECK(g(0) == 3.0);
  CHECK(g(1) == 0.0);
  CHECK(g(2) == 1.0);
  CHECK_THROWS_AS(rates_to_sinr_targets({-1.0}), ConfigError);
}

TEST_CASE("grid layout puts base stations at cell centers") {
  NetworkConfig c;
  c.L = 4;
  c.K = 1;
  c.set_uniform_rate(1.0);
  c.set_uniform_tau2(0.0);
  const Geometry g = base_geometry(c);
  REQUIRE(g.bs.size() == 4);
  CHECK(g.cell_side == 250.0);
  CHECK(g.bs[0].x == 125.0);
  CHECK(g.bs[0].y == 125.0);
  CHECK(g.bs[1].x == 375.0);
  CHECK(g.bs[1].y == 125.0);
  CHECK(g.bs[2].x == 125.0);
  CHECK(g.bs[2].y == 375.0);
  CHECK(g.bs[3].x == 375.0);
  CHECK(g.bs[3].y == 375.0);

  c.L = 3;
  c.set_uniform_rate(1.0);
  c.set_uniform_tau2(0.0);
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_THROWS_AS(base_geometry(c), ConfigError);
}

TEST_CASE("config validation") {
  NetworkConfig c = test::two_cell_network(2, 8, 1.0, 0.1);
  CHECK_NOTHROW(c.validate());
  NetworkConfig bad = c;
  bad.rates.pop_back();
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.tau[0] = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.kappa = 2.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_THROWS_AS(c.set_uniform_tau2(-0.1), ConfigError);
  c.set_uniform_tau2(0.25);
  CHECK(c.tau[3] == 0.5);
}

TEST_CASE("UE drops stay in their cell and are reproducible") {
  NetworkConfig c = test::two_cell_network(4, 8, 1.0, 0.0);
  c.min_ue_distance_m = 30.0;
  const Geometry a = build_geometry(c, 3);
  const Geometry b = build_geometry(c, 3);
  const Geometry other = build_geometry(c, 4);
  for (int u = 0; u < c.users(); ++u) {
    const int j = u / c.K;
    CHECK(a.ue[u].x >= a.cell_lo[j].x);
    CHECK(a.ue[u].x <= a.cell_lo[j].x + a.cell_side);
    CHECK(a.ue[u].y >= a.cell_lo[j].y);
    CHECK(a.ue[u].y <= a.cell_lo[j].y + a.cell_side);
    CHECK(std::hypot(a.ue[u].x - a.bs[j].x, a.ue[u].y - a.bs[j].y) >= 30.0);
    CHECK(a.ue[u].x == b.ue[u].x);
    CHECK(a.ue[u].y == b.ue[u].y);
  }
  CHECK(a.ue[0].x != other.ue[0].x);
}

TEST_CASE("large-scale gains accessors") {
  MatrixXd d(2, 4);
  d << 1, 2, 3, 4,
       5, 6, 7, 8;
  const LargeScaleGains g(d, 2);
  CHECK(g.L() == 2);
  CHECK(g.users() == 4);
  CHECK(g.cell_of(3) == 1);
  CHECK(g.own(0) == 1);
  CHECK(g.own(3) == 8);
  CHECK(g.cobf(0, 1, 0) == 3);
  CHECK(g.comp(1, 2) == 7);
  d(0, 0) = -1;
  CHECK_THROWS_AS(LargeScaleGains(d, 2), ConfigError);
  CHECK_THROWS_AS(LargeScaleGains(MatrixXd::Ones(2, 3), 2), ConfigError);
}

TEST_CASE("substreams") {
  Substream a(1, 2, StreamTag::kFading, 3), b(1, 2, StreamTag::kFading, 3);
  Substream c(1, 2, StreamTag::kError, 3);
  const double x = a.uniform();
  CHECK(x == b.uniform());
  CHECK(x != c.uniform());

  Substream s(9, 0, StreamTag::kFading, 0);
  double power = 0.0, lo = 1.0, hi = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    power += std::norm(s.complex_normal());
    const double u = s.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(power / n == Approx(1.0).epsilon(0.02));
  CHECK(lo > 0.0);
  CHECK(hi <= 1.0);
}

TEST_CASE("channel draws follow the estimation error model") {
  const NetworkConfig c = test::two_cell_network(2, 4, 1.0, 0.3);
  const LargeScaleGains g = test::drop_gains(c);
  const ChannelSet ch = draw_channels(g, tau_vector(c), c.N, c.seed, 0);
  REQUIRE(ch.L() == 2);
  CHECK(ch.true_cobf[0].rows() == 4);
  CHECK(ch.true_cobf[0].cols() == 4);
  CHECK(ch.true_comp.rows() == 8);
  const double t = std::sqrt(0.3);
  for (int l = 0; l < 2; ++l)
    for (int u = 0; u < 4; ++u) {
      const double sd = std::sqrt(g.comp(l, u));
      const VectorXcd h = sd * ch.w[l].col(u);
      const VectorXcd hh = sd * (std::sqrt(1 - t * t) * ch.w[l].col(u) + t * ch.q[l].col(u));
      CHECK((ch.true_cobf[l].col(u) - h).norm() <= 1e-20);
      CHECK((ch.est_cobf[l].col(u) - hh).norm() <= 1e-20);
      CHECK((ch.true_comp.block(l * 4, u, 4, 1) - h).norm() <= 1e-20);
    }
  const ChannelSet again = draw_channels(g, tau_vector(c), c.N, c.seed, 0);
  CHECK(again.est_comp == ch.est_comp);
  CHECK(stack_blocks(ch.est_cobf) == ch.est_comp);
}
