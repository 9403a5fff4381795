#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "common.hpp"
#include "cuspweyl/fd_oracle.hpp"
#include "cuspweyl/fiber_schrodinger.hpp"

using namespace cuspweyl;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

FiberPotential fiber(int n, double delta, double mu, double a = 1.0) {
  CuspEnd c;
  c.a = a;
  c.delta = delta;
  c.cross_section.lengths.assign(static_cast<std::size_t>(n - 1), 1.0);
  c.cross_section.magnetic.assign(static_cast<std::size_t>(n - 1), 0.0);
  return FiberPotential::for_cusp(c, n, mu);
}

long fd_count(const FiberPotential& f, double lambda, const BoundaryCondition& bc, int grid = 1 << 14) {
  return static_cast<long>(fd_oracle(f, lambda, bc, grid).size());
}

}  // namespace

TEST_CASE("potential values") {
  CHECK_THAT(potential_eval(fiber(2, 1.0, 1.0), 0.0), WithinAbs(1.25, 1e-15));
  CHECK(potential_eval(fiber(2, 1.0, 0.0), 0.0) == 0.25);
  CHECK(potential_eval(fiber(2, 1.0, 0.0), 7.3) == 0.25);
  CHECK_THAT(fiber(2, 0.5, 4.0).value(1.0), WithinAbs(1.75, 1e-15));
  // a = 1/2 puts alpha at 1.
  CHECK_THAT(potential_eval(fiber(2, 0.5, 4.0, 0.5), 1.0), WithinAbs(1.75, 1e-15));
}

TEST_CASE("potential domain") {
  CHECK(fiber(2, 1.0, 1.0, 2.0).alpha == 2.0 * std::log(2.0));
  CHECK_THAT(fiber(2, 0.75, 1.0, 2.0).alpha, WithinRel(std::pow(2.0, 0.5) / 0.25, 1e-15));
  CHECK_THROWS_AS(potential_eval(fiber(2, 1.0, 1.0), -0.1), domain_error);
  CHECK_THROWS_AS(potential_eval(fiber(2, 0.75, 1.0), 1.0), domain_error);
}

TEST_CASE("potential minimiser of the power branch") {
  const auto f = fiber(3, 0.75, 0.25, 0.01);
  const double t = f.minimizer();
  REQUIRE(t > f.alpha);
  CHECK_THAT(f.slope(t), WithinAbs(0.0, 1e-10));
  CHECK(f.value(t) < f.value(t * 0.9));
  CHECK(f.value(t) < f.value(t * 1.1));
}

TEST_CASE("turning points") {
  const auto f = fiber(2, 1.0, 1.0);
  REQUIRE(turning_point(f, 100.25).has_value());
  CHECK_THAT(*turning_point(f, 100.25), WithinAbs(std::log(10.0), 1e-14));
  CHECK_FALSE(turning_point(f, 1.0).has_value());

  // mu chosen so that V(alpha) = lambda at a = 2.
  const double a = 2.0;
  const auto g = fiber(2, 1.0, 4.0 * std::exp(-2.0 * 2.0 * std::log(a)), a);
  REQUIRE(turning_point(g, 4.25).has_value());
  CHECK_THAT(*turning_point(g, 4.25), WithinAbs(g.alpha, 1e-14));

  const auto h = fiber(2, 0.75, 1.0);
  const double T = *turning_point(h, 40.0);
  CHECK_THAT(h.value(T), WithinRel(40.0, 1e-12));

  CHECK_THROWS_AS(turning_point(fiber(2, 1.0, 0.0), 0.3), continuous_spectrum_error);
  CHECK_FALSE(turning_point(fiber(2, 1.0, 0.0), 0.2).has_value());
}

TEST_CASE("counts below the potential and on the floor") {
  CHECK(fiber_count(fiber(2, 1.0, 1.0), 1.0, BoundaryCondition::dirichlet()) == 0);
  CHECK(fiber_count(fiber(2, 1.0, 0.0), 0.2, BoundaryCondition::dirichlet()) == 0);
  CHECK_THROWS_AS(fiber_count(fiber(2, 1.0, 0.0), 0.3, BoundaryCondition::dirichlet()), continuous_spectrum_error);
  CHECK_THROWS_AS(fiber_count(fiber(2, 0.75, 0.0), 0.1, BoundaryCondition::dirichlet()), continuous_spectrum_error);
}

TEST_CASE("count at lambda 50 matches the finite-difference oracle") {
  const auto f = fiber(2, 1.0, 1.0);
  const auto bc = BoundaryCondition::dirichlet();
  CHECK(fiber_count(f, 50.0, bc) == fd_count(f, 50.0, bc, 1 << 15));
}

TEST_CASE("eigenvalues agree with the oracle") {
  struct Case {
    int n;
    double delta, mu;
  };
  for (const Case& c : {Case{2, 1.0, 1.0}, Case{3, 1.0, 0.25}, Case{2, 0.75, 4.0}, Case{3, 0.75, 1.0}}) {
    const auto f = fiber(c.n, c.delta, c.mu);
    for (const auto bc : {BoundaryCondition::dirichlet(), BoundaryCondition::robin(0.5)}) {
      const auto ours = fiber_eigenvalues(f, 80.0, bc);
      const auto ref = fd_oracle(f, 80.0, bc, 1 << 14);
      REQUIRE(ours.size() == ref.size());
      CHECK(static_cast<long>(ours.size()) == fiber_count(f, 80.0, bc));
      for (std::size_t k = 0; k < std::min<std::size_t>(ours.size(), 10); ++k)
        CHECK_THAT(ours[k], WithinRel(ref[k], 1e-4));
    }
  }
}

TEST_CASE("first Dirichlet eigenvalue lies above the potential minimum") {
  const auto ev = fiber_eigenvalues(fiber(2, 1.0, 1.0), 20.0, BoundaryCondition::dirichlet());
  REQUIRE_FALSE(ev.empty());
  CHECK(ev.front() > 1.25);
}

TEST_CASE("eigenvalues increase with mu") {
  const auto bc = BoundaryCondition::dirichlet();
  const auto a = fiber_eigenvalues(fiber(2, 1.0, 1.0), 60.0, bc);
  const auto b = fiber_eigenvalues(fiber(2, 1.0, 4.0), 60.0, bc);
  REQUIRE(b.size() <= a.size());
  for (std::size_t k = 0; k < b.size(); ++k) CHECK(b[k] > a[k]);
}

TEST_CASE("counts are nondecreasing in lambda") {
  const auto f = fiber(2, 0.75, 1.0);
  long prev = 0;
  for (double lambda = 1.0; lambda < 200.0; lambda *= 1.15) {
    const long c = fiber_count(f, lambda, BoundaryCondition::dirichlet());
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("Dirichlet and Robin counts interlace") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lmu(std::log(0.05), std::log(20.0)), llam(std::log(1.0), std::log(400.0));
  std::uniform_int_distribution<int> pick(0, 3);
  for (int i = 0; i < 60; ++i) {
    const int n = 2 + pick(rng) % 2;
    const double delta = pick(rng) < 2 ? 1.0 : 0.75;
    CuspEnd c;
    c.delta = delta;
    const auto f = fiber(n, delta, std::exp(lmu(rng)));
    const double beta = default_robin_beta(c, n);
    const double lambda = std::exp(llam(rng));
    const long d = fiber_count(f, lambda, BoundaryCondition::dirichlet());
    const long r = fiber_count(f, lambda, BoundaryCondition::robin(beta));
    CHECK(d <= r);
    CHECK(r <= d + 1);
  }
}

TEST_CASE("Robin counts approach Dirichlet in the stiff limit") {
  // u'(alpha) + beta u(alpha) = 0: large negative beta pins u(alpha) to zero.
  const auto f = fiber(2, 1.0, 1.0);
  const long d = fiber_count(f, 150.0, BoundaryCondition::dirichlet());
  CHECK(fiber_count(f, 150.0, BoundaryCondition::robin(-1e6)) == d);
  CHECK(fd_count(f, 150.0, BoundaryCondition::robin(-1e6)) == d);
}

TEST_CASE("oracle returns nothing below the potential") {
  CHECK(fd_oracle(fiber(2, 1.0, 1.0), 1.2, BoundaryCondition::dirichlet(), 2000).empty());
  CHECK_THROWS_AS(fd_oracle(fiber(2, 1.0, 1.0), 10.0, BoundaryCondition::dirichlet(), 100), precondition_error);
}

TEST_CASE("default Robin coefficient") {
  CuspEnd c;
  c.delta = 1.0;
  CHECK(default_robin_beta(c, 2) == 0.5);
  CHECK(default_robin_beta(c, 3) == 1.0);
  c.delta = 0.75;
  c.a = 1.0;
  CHECK_THAT(default_robin_beta(c, 2), WithinRel(0.375, 1e-15));
}
