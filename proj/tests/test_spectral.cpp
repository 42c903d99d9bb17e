#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "oracles.hpp"
#include "wdvv/errors.hpp"
#include "wdvv/models.hpp"
#include "wdvv/spectral.hpp"

using wdvv::Complex;

namespace {

const double kC = 2.0 / std::sqrt(7.0);

wdvv::SpectralData example1() { return wdvv::Example1Model::make(1.0, kC).spectral_data(); }

bool mentions(const wdvv::ValidationReport& r, const std::string& what) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [&](const std::string& v) { return v.find(what) != std::string::npos; });
}

// Example 1 layout with a free normalization point; solvable but not Euclidean.
wdvv::SpectralData example1_with(double c, double r) {
  auto data = example1();
  data.components[1].pole_divisor = {c};
  data.components[1].normalization = {r};
  return data;
}

}  // namespace

TEST_CASE("validation of the example curves") {
  const auto r1 = wdvv::validate(example1());
  CHECK(r1.passed);
  CHECK(r1.arithmetic_genus == 1);
  CHECK(r1.pole_divisor_degree == 1);
  CHECK(r1.expected_degree == 1);
  CHECK(wdvv::validate(wdvv::Example2Model::spectral_data()).passed);
}

TEST_CASE("validation failures are named") {
  SUBCASE("pole divisor of the wrong degree") {
    auto data = example1();
    data.components[1].pole_divisor.push_back(0.3);
    const auto r = wdvv::validate(data);
    CHECK_FALSE(r.passed);
    CHECK(mentions(r, "degree mismatch"));
  }
  SUBCASE("Q set not invariant under the involution") {
    auto data = example1();
    data.components[1].marked_q.front().point = wdvv::ProjectivePoint::at(0.5);
    const auto r = wdvv::validate(data);
    CHECK_FALSE(r.passed);
    CHECK(mentions(r, "condition 2"));
  }
  SUBCASE("coinciding marked points") {
    auto data = example1();
    data.components[1].normalization = {kC};
    CHECK_FALSE(wdvv::validate(data).passed);
  }
  SUBCASE("disconnected curve") {
    auto data = example1();
    data.intersections.clear();
    CHECK(mentions(wdvv::validate(data), "not connected"));
  }
  SUBCASE("non-real data with the reality flag") {
    auto data = example1();
    data.components[1].normalization = {Complex(1.0, 1.0)};
    CHECK(mentions(wdvv::validate(data), "reality"));
  }
}

TEST_CASE("assembled systems are square") {
  const auto s1 = wdvv::assemble_system(example1(), Eigen::Vector2d(0.1, 0.2), 1);
  CHECK(s1.matrix.rows() == 3);
  CHECK(s1.matrix.cols() == 3);
  const auto s2 = wdvv::assemble_system(wdvv::Example2Model::spectral_data(), Eigen::Vector2d(0.1, 0.2), 1);
  CHECK(s2.matrix.rows() == 3);
  CHECK(s2.matrix.cols() == 3);

  auto bad = example1();
  bad.components[1].pole_divisor = {1.0};  // sits on a node
  CHECK_THROWS_AS(wdvv::assemble_system(bad, Eigen::Vector2d::Zero(), 1), wdvv::DomainError);
  CHECK_THROWS_AS(wdvv::assemble_system(example1(), Eigen::Vector3d::Zero(), 1), wdvv::DimensionError);
}

TEST_CASE("Baker-Akhiezer solve at the origin") {
  const auto data = example1();
  const auto ba = wdvv::solve_ba(data, Eigen::Vector2d::Zero());
  CHECK(std::abs(ba.x[0].value() - 1.0) <= 1e-14);
  CHECK(std::abs(ba.x[1].value() - 1.0) <= 1e-14);
  CHECK(std::abs(ba.h[0].value() - 1.0) <= 1e-14);
  const auto at_r = wdvv::evaluate_psi(data, ba, 1, wdvv::ProjectivePoint::at(2.0));
  CHECK(std::abs(at_r.value() - 1.0) <= 1e-14);
  CHECK_THROWS_AS(wdvv::evaluate_psi(data, ba, 0, wdvv::ProjectivePoint::infinity()), wdvv::DomainError);

  const auto ba2 = wdvv::solve_ba(wdvv::Example2Model::spectral_data(), Eigen::Vector2d::Zero());
  CHECK(std::abs(ba2.x[0].value() - 1.0) <= 1e-14);
  CHECK(std::abs(ba2.x[1].value() - 1.0) <= 1e-14);
}

TEST_CASE("psi glues across nodes and is normalized") {
  const auto data = example1();
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd u = oracle::random_point(rng, 2, -1.0, 1.0);
    const auto ba = wdvv::solve_ba(data, u);
    for (const auto& node : data.intersections) {
      const Complex pa = wdvv::evaluate_psi(data, ba, node.component_a, wdvv::ProjectivePoint::at(node.coord_a)).value();
      const Complex pb = wdvv::evaluate_psi(data, ba, node.component_b, wdvv::ProjectivePoint::at(node.coord_b)).value();
      CHECK(std::abs(pa - pb) <= 1e-12 * std::max(1.0, std::abs(pa)));
    }
    CHECK(std::abs(wdvv::evaluate_psi(data, ba, 1, wdvv::ProjectivePoint::at(2.0)).value() - 1.0) <= 1e-12);
  }
}

TEST_CASE("pipeline coordinates equal the printed ones") {
  const auto data = example1();
  const auto m = wdvv::Example1Model::make(1.0, kC);
  std::mt19937_64 rng(17);
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd u = oracle::random_point(rng, 2, -1.0, 1.0);
    const auto ba = wdvv::solve_ba(data, u);
    const Eigen::Vector2d printed = oracle::ex1_x(u[0], u[1]);
    for (int j = 0; j < 2; ++j) {
      CHECK(std::abs(ba.x[j].value() - printed[j]) <= 1e-10 * std::abs(printed[j]));
      CHECK(std::abs(ba.x[j].value().imag()) <= 1e-12);
    }
    const auto coeffs = m.printed_ba_coefficients(u);
    CHECK(std::abs(ba.coefficients[0][0].value() - coeffs.f0) <= 1e-10 * std::abs(coeffs.f0));
    CHECK(std::abs(ba.coefficients[1][0].value() - coeffs.g0) <= 1e-10 * std::abs(coeffs.g0));
    CHECK(std::abs(ba.coefficients[1][1].value() - coeffs.g1) <= 1e-10 * std::abs(coeffs.g1));
  }
}

TEST_CASE("translation covariance") {
  const auto data = example1();
  CHECK(wdvv::translation_covariance_check(data, Eigen::Vector2d(0.1, -0.2), 0.0) == 0.0);
  CHECK(wdvv::translation_covariance_check(data, Eigen::Vector2d(0.1, -0.2), std::log(2.0) / 2) <= 1e-11);
  CHECK_THROWS_AS(wdvv::translation_covariance_check(wdvv::Example2Model::spectral_data(), Eigen::Vector2d::Zero(), 0.1),
                  wdvv::PreconditionError);
  std::string why;
  CHECK_FALSE(wdvv::is_translation_covariant_mode(wdvv::Example2Model::spectral_data(), &why));
  CHECK_FALSE(why.empty());
}

TEST_CASE("the Jacobian scales under translation") {
  const auto data = example1();
  std::mt19937_64 rng(23);
  for (int k = 0; k < 10; ++k) {
    const Eigen::VectorXd u = oracle::random_point(rng, 2, -0.8, 0.8);
    const double mu = 0.3;
    const auto a = wdvv::solve_ba(data, u);
    const auto b = wdvv::solve_ba(data, (u.array() + mu).matrix());
    const double lambda = std::exp(-2.0 * mu);
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i) {
        const std::vector<int> m = i == 0 ? std::vector<int>{1, 0} : std::vector<int>{0, 1};
        CHECK(std::abs(b.x[j].partial(m) - lambda * a.x[j].partial(m)) <= 1e-12);
      }
  }
}

TEST_CASE("a degenerate u makes the system singular") {
  // D(u) = (a + c)(a - r) e^{2u2} - (a + r)(a - c) e^{2u1} vanishes at
  // u1 - u2 = log(1/3) / 2 for a = 1, c = 0.5, r = 0.8.
  const auto data = example1_with(0.5, 0.8);
  const double d = std::log(1.0 / 3.0) / 2.0;
  CHECK_THROWS_AS(wdvv::solve_ba(data, Eigen::Vector2d(d, 0.0)), wdvv::SingularSystemError);
  CHECK_NOTHROW(wdvv::solve_ba(data, Eigen::Vector2d(d + 0.5, 0.0)));
}

TEST_CASE("real data gives real coordinates") {
  std::mt19937_64 rng(31);
  const auto data2 = wdvv::Example2Model::spectral_data();
  for (int k = 0; k < 10; ++k) {
    const Eigen::VectorXd u = oracle::random_point(rng, 2, -1.0, 1.0);
    const auto ba = wdvv::solve_ba(data2, u);
    const Eigen::Vector2d printed = oracle::ex2_x(u[0], u[1]);
    for (int j = 0; j < 2; ++j) {
      CHECK(std::abs(ba.x[j].value().imag()) <= 1e-12);
      CHECK(std::abs(ba.x[j].value() - printed[j]) <= 1e-12 * std::max(1.0, std::abs(printed[j])));
    }
  }
}
