#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "wdvv/errors.hpp"
#include "wdvv/frobenius.hpp"
#include "wdvv/models.hpp"

using wdvv::Complex;
using wdvv::ComplexJet;

namespace {

wdvv::PrepotentialField half_square_times() {
  return wdvv::PrepotentialField(2, [](std::span<const ComplexJet> t) { return 0.5 * t[0] * t[0] * t[1]; });
}

Eigen::MatrixXd antidiagonal() {
  Eigen::MatrixXd eta(2, 2);
  eta << 0, 1, 1, 0;
  return eta;
}

}  // namespace

TEST_CASE("third derivatives of a cubic prepotential") {
  const auto c = wdvv::third_derivative_tensor(half_square_times(), Eigen::Vector2d(0.3, -0.7));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int g = 0; g < 2; ++g) {
        const int ones = (a == 1) + (b == 1) + (g == 1);
        CHECK(c(a, b, g) == Complex(ones == 1 ? 1.0 : 0.0));
      }
}

TEST_CASE("third derivatives of the pencil member q = 0") {
  const wdvv::Example2Model m(0.0);
  const auto c = wdvv::third_derivative_tensor(m.prepotential(), Eigen::Vector2d(1.0, 1.0));
  CHECK(std::abs(c(0, 0, 0) - (-0.5)) <= 1e-14);
  CHECK(std::abs(c(0, 0, 1)) <= 1e-14);
  CHECK_THROWS_AS(wdvv::third_derivative_tensor(m.prepotential(), Eigen::Vector2d(0.0, 0.0)), wdvv::DomainError);
}

TEST_CASE("structure constants of a nilpotent algebra") {
  const wdvv::ConstantMetric g(antidiagonal());
  const auto c = wdvv::third_derivative_tensor(half_square_times(), Eigen::Vector2d(1.0, 2.0));
  const auto s = wdvv::structure_constants(c, g);
  const Eigen::VectorXcd e1 = Eigen::Vector2cd(1.0, 0.0), e2 = Eigen::Vector2cd(0.0, 1.0);
  CHECK((s.product(e1, e1) - e1).norm() <= 1e-15);
  CHECK((s.product(e1, e2) - e2).norm() <= 1e-15);
  CHECK(s.product(e2, e2).norm() <= 1e-15);
  CHECK(s(1, 0, 1) == Complex(1.0));
}

TEST_CASE("zero correlators give zero structure constants") {
  const wdvv::CorrelatorTensor c(Eigen::Vector3d::Zero(), std::vector<Complex>(27, 0.0));
  const auto s = wdvv::structure_constants(c, wdvv::ConstantMetric::identity(3));
  for (int a = 0; a < 3; ++a) CHECK(s.multiplication(a).norm() == 0.0);
}

TEST_CASE("dimension mismatches are rejected") {
  const wdvv::CorrelatorTensor c(Eigen::Vector2d::Zero(), std::vector<Complex>(8, 0.0));
  CHECK_THROWS_AS(wdvv::structure_constants(c, wdvv::ConstantMetric::identity(3)), wdvv::DimensionError);
  CHECK_THROWS_AS(wdvv::associativity_residual(c, wdvv::ConstantMetric::identity(3)), wdvv::DimensionError);
  CHECK_THROWS_AS(wdvv::third_derivative_tensor(half_square_times(), Eigen::Vector3d::Ones()),
                  wdvv::DimensionError);
}

TEST_CASE("associativity of the closed forms") {
  const auto g = wdvv::ConstantMetric::identity(2);
  std::mt19937_64 rng(11);
  for (double q : {0.0, 1.0, -1.0, 2.0}) {
    const auto F = wdvv::Example2Model(q).prepotential();
    double worst = 0.0;
    for (int k = 0; k < 25; ++k) {
      const Eigen::VectorXd x = oracle::random_point(rng, 2, 0.5, 2.0);
      worst = std::max(worst, wdvv::associativity_residual(wdvv::third_derivative_tensor(F, x), g));
    }
    CHECK(worst <= 1e-12);
  }
  const auto m1 = wdvv::Example1Model::make(1.0, 2.0 / std::sqrt(7.0));
  for (auto sign : {wdvv::RootSign::positive, wdvv::RootSign::negative}) {
    const auto F = m1.prepotential(sign);
    double worst = 0.0;
    for (int k = 0; k < 25; ++k) {
      const Eigen::VectorXd x = oracle::random_point(rng, 2, 0.5, 2.0);
      worst = std::max(worst, wdvv::associativity_residual(wdvv::third_derivative_tensor(F, x), g));
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("a perturbed prepotential fails associativity") {
  const wdvv::PrepotentialField F(2, [](std::span<const ComplexJet> x) {
    return wdvv::example2_prepotential(x, 0.0) + x[0] * x[0] * x[1] * x[1];
  });
  const double res =
      wdvv::associativity_residual(wdvv::third_derivative_tensor(F, Eigen::Vector2d(1.0, 1.0)),
                                   wdvv::ConstantMetric::identity(2));
  CHECK(res > 1e-3);
}

TEST_CASE("correlator tensors are fully symmetric") {
  const auto F = wdvv::Example2Model(1.0).prepotential();
  const auto c = wdvv::third_derivative_tensor(F, Eigen::Vector2d(1.3, 0.4));
  std::array<int, 3> idx{0, 0, 1};
  do {
    CHECK(c(idx[0], idx[1], idx[2]) == c(0, 0, 1));
  } while (std::next_permutation(idx.begin(), idx.end()));
}

TEST_CASE("lowering the index inverts structure_constants") {
  Eigen::MatrixXd eta(3, 3);
  eta << 2, 0.5, 0, 0.5, 1, 0.3, 0, 0.3, -1;
  const wdvv::ConstantMetric g(eta);
  const wdvv::PrepotentialField F(3, [](std::span<const ComplexJet> t) {
    return wdvv::exp(t[0]) * t[1] * t[1] + t[2] * t[2] * t[2] * t[0] + wdvv::sin(t[1] * t[2]);
  });
  const Eigen::Vector3d x(0.2, -0.4, 0.9);
  const auto c = wdvv::third_derivative_tensor(F, x);
  const auto back = wdvv::lower_index(wdvv::structure_constants(c, g), g, x);
  CHECK(c.max_abs_difference(back) <= 1e-14);
}

TEST_CASE("correlator scaling law") {
  const auto F = wdvv::Example2Model(0.0).prepotential();
  const wdvv::CorrelatorSource src = [&](const Eigen::VectorXd& x) { return wdvv::third_derivative_tensor(F, x); };
  CHECK(wdvv::correlator_scaling_check(src, Eigen::Vector2d(1.0, 1.0), 2.0) <= 1e-12);
  CHECK(wdvv::correlator_scaling_check(src, Eigen::Vector2d(1.0, 1.0), 1.0) == 0.0);
  CHECK(std::abs(src(Eigen::Vector2d(2.0, 2.0))(0, 0, 0) - (-0.25)) <= 1e-14);

  const wdvv::CorrelatorSource printed = [](const Eigen::VectorXd& x) {
    return wdvv::example1_printed_correlators(x);
  };
  CHECK(wdvv::correlator_scaling_check(printed, Eigen::Vector2d(1.0, 0.5), 3.0) <= 1e-10);
}

TEST_CASE("Euler homogeneity") {
  wdvv::QuasihomogeneityData cubic{Eigen::Vector2d(1.0, 1.0), 3.0, false};
  CHECK(wdvv::euler_check(half_square_times(), cubic, Eigen::Vector2d(0.4, 1.7)) <= 1e-14);

  const auto F = wdvv::Example2Model(0.0).prepotential();
  auto q = wdvv::Example2Model::quasihomogeneity();
  const Eigen::Vector2d x(1.2, 0.7);
  CHECK(wdvv::euler_check(F, q, x) <= 1e-10);

  // Without the quadratic allowance the mismatch is -R/4.
  q.allows_quadratic_remainder = false;
  const auto rep = wdvv::euler_report(F, q, x);
  CHECK(rep.third_order <= 1e-10);
  CHECK(std::abs(rep.value + 0.25 * x.squaredNorm()) <= 1e-12);
  CHECK(wdvv::euler_check(F, q, x) > 0.1);
}

TEST_CASE("printed correlators against independent formulas") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd x = oracle::random_point(rng, 2, 0.5, 2.0);
    const auto c2 = wdvv::example2_printed_correlators(x);
    CHECK(std::abs(c2(0, 0, 0) - oracle::ex2_c111(x[0], x[1])) <= 1e-13);
    CHECK(std::abs(c2(0, 0, 1) - oracle::ex2_c112(x[0], x[1])) <= 1e-13);
    const auto c1 = wdvv::example1_printed_correlators(x);
    CHECK(std::abs(c1(0, 0, 0) - oracle::ex1_c111(x[0], x[1])) <= 1e-12 * std::max(1.0, std::abs(c1(0, 0, 0))));
  }
}
