#include "doctest.h"
#include "oracles.hpp"

#include "chansim/channel.hpp"

using namespace chansim;

namespace {

const Complex I(0.0, 1.0);

ComplexMatrix random_matrix(int r, int c, RandomStream& rng) {
  ComplexMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) m(i, j) = rng.complex_normal();
  }
  return m;
}

}  // namespace

TEST_SUITE("channel-core") {
  TEST_CASE("weyl operators") {
    CHECK(oracle::max_abs(weyl_x(3, 0) - ComplexMatrix::Identity(3, 3)) == 0.0);
    ComplexMatrix px(2, 2);
    px << 0, 1, 1, 0;
    CHECK(oracle::max_abs(weyl_x(2, 1) - px) == 0.0);
    ComplexMatrix x31 = ComplexMatrix::Zero(3, 3);
    x31(0, 1) = x31(1, 2) = x31(2, 0) = 1.0;
    CHECK(oracle::max_abs(weyl_x(3, 1) - x31) == 0.0);

    CHECK(oracle::max_abs(weyl_z(3, 0) - ComplexMatrix::Identity(3, 3)) == 0.0);
    ComplexMatrix pz = ComplexMatrix::Zero(2, 2);
    pz(0, 0) = 1.0;
    pz(1, 1) = -1.0;
    CHECK(oracle::max_abs(weyl_z(2, 1) - pz) < 1e-15);
    const Complex w = std::exp(2.0 * kPi * I / 3.0);
    ComplexMatrix z31 = ComplexMatrix::Zero(3, 3);
    z31(0, 0) = 1.0;
    z31(1, 1) = w;
    z31(2, 2) = w * w;
    CHECK(oracle::max_abs(weyl_z(3, 1) - z31) < 1e-15);

    CHECK_THROWS_AS(weyl_x(3, 3), std::invalid_argument);
    CHECK_THROWS_AS(weyl_z(3, -1), std::invalid_argument);
  }

  TEST_CASE("haar unitary") {
    RandomStream rng(11);
    for (int n : {1, 2, 5, 9}) {
      const ComplexMatrix u = haar_unitary(n, rng);
      CHECK(oracle::max_abs(u.adjoint() * u - ComplexMatrix::Identity(n, n)) <= 1e-12);
    }
    const ComplexMatrix s = haar_unitary(1, rng);
    CHECK(std::abs(std::abs(s(0, 0)) - 1.0) < 1e-14);

    // E|U_00|^2 = 1/n for Haar measure.
    const int n = 4;
    double mean = 0.0;
    const int draws = 10000;
    for (int t = 0; t < draws; ++t) mean += std::norm(haar_unitary(n, rng)(0, 0));
    mean /= draws;
    CHECK(mean == doctest::Approx(1.0 / n).epsilon(0.05));
  }

  TEST_CASE("random channel") {
    RandomStream rng(5);
    for (int t = 0; t < 10; ++t) {
      const KrausChannel ch = random_channel(2 + t % 3, 0, rng);
      CHECK(ch.normalization_error() <= 1e-10);
    }
    const KrausChannel q = random_channel(2, 4, rng);
    CHECK(q.size() <= 4);
    CHECK(std::abs(kraus_to_choi(q).matrix().trace() - Complex(2.0)) <= 1e-10);
    CHECK(random_channel(3, 0, rng).size() == 9);  // env_dim defaults to d^2
    CHECK(random_channel(3, 3, rng).size() == 3);
    CHECK_THROWS_AS(random_channel(3, 4, rng), std::invalid_argument);

    RandomStream a(99), b(99);
    CHECK(oracle::max_abs(random_channel(3, 0, a).kraus_ops()[0] - random_channel(3, 0, b).kraus_ops()[0]) == 0.0);
  }

  TEST_CASE("kraus_to_choi") {
    const KrausChannel id(2, {ComplexMatrix::Identity(2, 2)});
    ComplexVector eta = ComplexVector::Zero(4);
    eta(0) = eta(3) = 1.0;
    const ComplexMatrix c = kraus_to_choi(id).matrix();
    CHECK(oracle::max_abs(c - eta * eta.adjoint()) == 0.0);
    CHECK(numerical_rank(c, 1e-10) == 1);

    ComplexMatrix p0 = ComplexMatrix::Zero(2, 2), p1 = ComplexMatrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    const ComplexMatrix deph = kraus_to_choi(KrausChannel(2, {p0, p1})).matrix();
    ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
    expect(0, 0) = expect(3, 3) = 1.0;
    CHECK(oracle::max_abs(deph - expect) == 0.0);

    RandomStream rng(21);
    for (int t = 0; t < 5; ++t) {
      const KrausChannel ch = random_channel(3, 0, rng);
      const ComplexMatrix lib = kraus_to_choi(ch).matrix();
      const ComplexMatrix ref = oracle::choi_elementwise(ch.kraus_ops());
      CHECK(oracle::max_abs(lib - ref) <= 1e-12);
      const auto ev_lib = hermitian_eigenvalues(lib);
      const auto ev_ref = oracle::sorted_eigenvalues(ref);
      for (int i = 0; i < 9; ++i) CHECK(std::abs(ev_lib(i) - ev_ref[static_cast<std::size_t>(i)]) <= 1e-10);
    }
  }

  TEST_CASE("choi_to_kraus round trips") {
    const ChoiState id = kraus_to_choi(KrausChannel(2, {ComplexMatrix::Identity(2, 2)}));
    const KrausChannel back = choi_to_kraus(id);
    REQUIRE(back.size() == 1);
    const ComplexMatrix k = back.kraus_ops()[0];
    CHECK(oracle::max_abs(k - k(0, 0) * ComplexMatrix::Identity(2, 2)) <= 1e-12);
    CHECK(std::abs(std::abs(k(0, 0)) - 1.0) <= 1e-12);

    RandomStream rng(3);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const ChoiState c = kraus_to_choi(random_channel(3, 0, rng));
      worst = std::max(worst, oracle::max_abs(kraus_to_choi(choi_to_kraus(c)).matrix() - c.matrix()));
    }
    CHECK(worst <= 1e-10);

    // A rank-2 qutrit channel: two Kraus operators from a 6x3 isometry.
    const ComplexMatrix v = haar_unitary(6, rng).leftCols(3);
    const KrausChannel two(3, {v.topRows(3), v.bottomRows(3)});
    CHECK(choi_to_kraus(kraus_to_choi(two), 1e-9).size() == 2);
  }

  TEST_CASE("apply_channel") {
    RandomStream rng(8);
    const DensityMatrix rho = DensityMatrix::random_pure(3, rng);
    const KrausChannel id(3, {ComplexMatrix::Identity(3, 3)});
    CHECK(oracle::max_abs(apply_channel(id, rho).matrix() - rho.matrix()) <= 1e-15);

    ComplexMatrix p0 = ComplexMatrix::Zero(2, 2), p1 = ComplexMatrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    ComplexMatrix plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    const ComplexMatrix out = apply_channel(KrausChannel(2, {p0, p1}), DensityMatrix(plus)).matrix();
    CHECK(oracle::max_abs(out - ComplexMatrix::Identity(2, 2) * 0.5) <= 1e-15);

    for (int t = 0; t < 10; ++t) {
      const KrausChannel ch = random_channel(3, 0, rng);
      CHECK(std::abs(apply_channel(ch, rho).matrix().trace() - Complex(1.0)) <= 1e-12);
    }
    CHECK_THROWS_AS(apply_channel(random_channel(2, 0, rng), rho), std::invalid_argument);
  }

  TEST_CASE("trace distance") {
    RandomStream rng(4);
    const ComplexMatrix c = kraus_to_choi(random_channel(2, 0, rng)).matrix();
    CHECK(trace_distance(c, c) == doctest::Approx(0.0).epsilon(1e-14));
    ComplexMatrix a = ComplexMatrix::Zero(4, 4), b = ComplexMatrix::Zero(4, 4);
    a(0, 0) = a(3, 3) = 1.0;
    b(1, 1) = b(2, 2) = 1.0;
    CHECK(trace_distance(a, b) == doctest::Approx(2.0).epsilon(1e-14));

    for (int t = 0; t < 10; ++t) {
      const ComplexMatrix x = kraus_to_choi(random_channel(3, 0, rng)).matrix();
      const ComplexMatrix y = kraus_to_choi(random_channel(3, 0, rng)).matrix();
      CHECK(std::abs(trace_distance(x, y) - oracle::trace_distance(x, y)) <= 1e-10);
    }
    ComplexMatrix nh = ComplexMatrix::Zero(2, 2);
    nh(0, 1) = 1.0;
    CHECK_THROWS_AS(trace_distance(nh, ComplexMatrix::Zero(2, 2)), std::invalid_argument);
  }

  TEST_CASE("partial trace") {
    ComplexVector eta = ComplexVector::Zero(4);
    eta(0) = eta(3) = 1.0;
    CHECK(oracle::max_abs(partial_trace(eta * eta.adjoint(), 2, Subsystem::second) - ComplexMatrix::Identity(2, 2)) ==
          0.0);

    RandomStream rng(6);
    const ComplexMatrix a = random_matrix(3, 3, rng), b = random_matrix(3, 3, rng);
    const ComplexMatrix ab = kron(a, b);
    CHECK(oracle::max_abs(partial_trace(ab, 3, Subsystem::second) - a * b.trace()) <= 1e-12);
    CHECK(oracle::max_abs(partial_trace(ab, 3, Subsystem::first) - b * a.trace()) <= 1e-12);
    CHECK(oracle::max_abs(partial_trace(ab, 3, Subsystem::second) - oracle::partial_trace(ab, 3, false)) <= 1e-12);

    const ComplexMatrix c = kraus_to_choi(random_channel(3, 0, rng)).matrix();
    CHECK(std::abs(partial_trace(c, 3, Subsystem::first).trace() - Complex(3.0)) <= 1e-10);
    CHECK(std::abs(partial_trace(c, 3, Subsystem::second).trace() - Complex(3.0)) <= 1e-10);
    // Trace preservation: tracing the output leaves the identity on the input.
    CHECK(oracle::max_abs(oracle::partial_trace(c, 3, true) - ComplexMatrix::Identity(3, 3)) <= 1e-10);
  }

  TEST_CASE("validated value types") {
    CHECK_THROWS_AS(KrausChannel(2, {ComplexMatrix::Identity(2, 2) * 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(KrausChannel(2, {ComplexMatrix::Identity(3, 3)}), std::invalid_argument);
    CHECK_THROWS_AS(ChoiState(2, ComplexMatrix::Identity(4, 4)), std::invalid_argument);  // trace 4
    CHECK_NOTHROW(ChoiState(2, ComplexMatrix::Identity(4, 4) * 0.5));
    CHECK_THROWS_AS(DensityMatrix(ComplexMatrix::Identity(2, 2)), std::invalid_argument);
    ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix{neg}, std::invalid_argument);
  }
}
