#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cstdio>
#include <fstream>
#include <random>

#include "sdhdg/krylov.hpp"

using namespace sdhdg;

namespace {

LinOp matrix_op(const Eigen::MatrixXd& M) {
  return [M](const Eigen::VectorXd& v) { return Eigen::VectorXd(M * v); };
}

LinOp identity_op() {
  return [](const Eigen::VectorXd& v) { return v; };
}

Eigen::MatrixXd random_spd(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::MatrixXd B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = unif(gen);
  return B * B.transpose() + n * Eigen::MatrixXd::Identity(n, n);
}

}  // namespace

TEST_CASE("an exact preconditioner converges in one step") {
  const Eigen::MatrixXd A = random_spd(12, 1);
  const Eigen::MatrixXd Ainv = A.inverse();
  Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(12, 1.0, 2.0);

  Eigen::VectorXd x;
  const SolverReport rm = minres(matrix_op(A), matrix_op(Ainv), b, x, 1e-10, 50);
  CHECK(rm.converged);
  CHECK(rm.iterations <= 1);
  CHECK((A * x - b).norm() <= 1e-9 * b.norm());

  Eigen::VectorXd y;
  const SolverReport rg = gmres(matrix_op(A), matrix_op(Ainv), b, y, 1e-10, 50);
  CHECK(rg.converged);
  CHECK(rg.iterations <= 1);
  CHECK((A * y - b).norm() <= 1e-9 * b.norm());
}

TEST_CASE("minimum residual solves a definite diagonal system") {
  Eigen::VectorXd d(10);
  for (int i = 0; i < 10; ++i) d[i] = 1.0 + i;
  const Eigen::MatrixXd A = d.asDiagonal();
  Eigen::VectorXd b = Eigen::VectorXd::Ones(10);

  Eigen::VectorXd x;
  const SolverReport r = minres(matrix_op(A), identity_op(), b, x, 1e-12, 100);
  CHECK(r.converged);
  CHECK(r.iterations <= 10);  // finite termination at the matrix dimension
  CHECK((x - A.ldlt().solve(b)).norm() <= 1e-10);

  // the residual history is monotonically nonincreasing
  for (size_t i = 1; i < r.history.size(); ++i)
    CHECK(r.history[i] <= r.history[i - 1] + 1e-14);
}

TEST_CASE("minimum residual handles symmetric indefinite systems") {
  Eigen::VectorXd d(8);
  for (int i = 0; i < 8; ++i) d[i] = (i % 2 ? 1.0 : -1.0) * (1.0 + i);
  const Eigen::MatrixXd A = d.asDiagonal();
  Eigen::VectorXd b = Eigen::VectorXd::Ones(8);
  Eigen::VectorXd x;
  const SolverReport r = minres(matrix_op(A), identity_op(), b, x, 1e-12, 100);
  CHECK(r.converged);
  CHECK((A * x - b).norm() <= 1e-10);
}

TEST_CASE("gmres matches a dense solve on a nonsymmetric system") {
  Eigen::MatrixXd A(5, 5);
  A << 4, 1, 0, 0, 2,
       0, 3, 1, 0, 0,
       1, 0, 5, 1, 0,
       0, 1, 0, 4, 1,
       0, 0, 2, 0, 6;
  Eigen::VectorXd b(5);
  b << 1, -2, 0.5, 3, -1;

  Eigen::VectorXd x;
  const SolverReport r = gmres(matrix_op(A), identity_op(), b, x, 1e-13, 50);
  CHECK(r.converged);
  CHECK((x - A.partialPivLu().solve(b)).norm() <= 1e-12);

  // restarted variant still converges
  Eigen::VectorXd y;
  const SolverReport rr = gmres(matrix_op(A), identity_op(), b, y, 1e-12, 200, 2);
  CHECK(rr.converged);
  CHECK((A * y - b).norm() <= 1e-10 * b.norm());
}

TEST_CASE("an eigenvector right-hand side terminates immediately") {
  Eigen::VectorXd d(6);
  for (int i = 0; i < 6; ++i) d[i] = 2.0 + i;
  const Eigen::MatrixXd A = d.asDiagonal();
  Eigen::VectorXd b = Eigen::VectorXd::Unit(6, 3);
  Eigen::VectorXd x;
  const SolverReport r = minres(matrix_op(A), identity_op(), b, x, 1e-12, 50);
  CHECK(r.converged);
  CHECK(r.iterations <= 1);
  CHECK((x - b / d[3]).norm() <= 1e-12);
}

TEST_CASE("iteration caps are reported as failures") {
  const Eigen::MatrixXd A = random_spd(30, 2);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(30);
  Eigen::VectorXd x;
  const SolverReport r = minres(matrix_op(A), identity_op(), b, x, 1e-14, 2);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 2);

  Eigen::VectorXd y;
  const SolverReport rg = gmres(matrix_op(A), identity_op(), b, y, 1e-14, 2);
  CHECK_FALSE(rg.converged);
}

TEST_CASE("history export writes one line per iteration") {
  const Eigen::MatrixXd A = random_spd(10, 3);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(10);
  Eigen::VectorXd x;
  const SolverReport r = minres(matrix_op(A), identity_op(), b, x, 1e-10, 100);
  const std::string path = "history_test.csv";
  r.write_history_csv(path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  int lines = 0;
  bool header = false;
  while (std::getline(in, line)) {
    if (lines == 0 && line.find("iter") != std::string::npos) header = true;
    ++lines;
  }
  std::remove(path.c_str());
  CHECK(header);
  CHECK_EQ(lines, static_cast<int>(r.history.size()) + 1);
}
