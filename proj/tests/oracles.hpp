#pragma once

// Independent reference computations for the tests. Everything here is
// written with explicit loops or a different Eigen solver from the library
// so that agreement means something.

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "chansim/linalg.hpp"

namespace oracle {

using chansim::Complex;
using chansim::ComplexMatrix;

// C[(r,c),(r',c')] = E(|c><c'|)(r, r'), built entry by entry.
inline ComplexMatrix choi_elementwise(const std::vector<ComplexMatrix>& kraus) {
  const int d = static_cast<int>(kraus.front().rows());
  ComplexMatrix c = ComplexMatrix::Zero(d * d, d * d);
  for (int col = 0; col < d; ++col) {
    for (int colp = 0; colp < d; ++colp) {
      ComplexMatrix e = ComplexMatrix::Zero(d, d);
      e(col, colp) = 1.0;
      ComplexMatrix out = ComplexMatrix::Zero(d, d);
      for (const auto& k : kraus) out += k * e * k.adjoint();
      for (int r = 0; r < d; ++r) {
        for (int rp = 0; rp < d; ++rp) c(r * d + col, rp * d + colp) = out(r, rp);
      }
    }
  }
  return c;
}

inline ComplexMatrix partial_trace(const ComplexMatrix& m, int d, bool trace_first) {
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      for (int s = 0; s < d; ++s) out(a, b) += trace_first ? m(s * d + a, s * d + b) : m(a * d + s, b * d + s);
    }
  }
  return out;
}

// General (non-Hermitian) eigen solver; real parts of the spectrum.
inline double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  Eigen::ComplexEigenSolver<ComplexMatrix> es(a - b);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) s += std::abs(es.eigenvalues()(i).real());
  return 0.5 * s;
}

inline std::vector<double> sorted_eigenvalues(const ComplexMatrix& m) {
  Eigen::ComplexEigenSolver<ComplexMatrix> es(m);
  std::vector<double> v;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) v.push_back(es.eigenvalues()(i).real());
  std::sort(v.begin(), v.end());
  return v;
}

// Rotation by theta in the (j, k) plane: |j> -> cos|j> + sin|k>.
inline ComplexMatrix rotation(int d, int j, int k, double theta) {
  ComplexMatrix g = ComplexMatrix::Identity(d, d);
  g(j, j) = g(k, k) = std::cos(theta);
  g(k, j) = std::sin(theta);
  g(j, k) = -std::sin(theta);
  return g;
}

// Two-qudit operator (system index first): apply `g` to the ancilla iff the system is at `level`.
inline ComplexMatrix controlled_on_system(int d, int level, const ComplexMatrix& g) {
  ComplexMatrix u = ComplexMatrix::Zero(d * d, d * d);
  for (int s = 0; s < d; ++s) {
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) u(s * d + a, s * d + b) = s == level ? g(a, b) : (a == b ? 1.0 : 0.0);
    }
  }
  return u;
}

// Shift |s> -> |s - i mod d> on the system iff the ancilla is at `i`.
inline ComplexMatrix controlled_shift(int d, int i) {
  ComplexMatrix u = ComplexMatrix::Zero(d * d, d * d);
  for (int s = 0; s < d; ++s) {
    for (int a = 0; a < d; ++a) {
      const int t = a == i ? (s - i + d) % d : s;
      u(t * d + a, s * d + a) = 1.0;
    }
  }
  return u;
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
