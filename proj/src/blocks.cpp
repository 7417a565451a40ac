#include "chansim/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chansim {

namespace {

struct Support {
  ComplexMatrix basis;     // d x r orthonormal columns
  ComplexMatrix inv_sqrt;  // pseudo-inverse square root
  ComplexMatrix projector;
};

Support support_of(const ComplexMatrix& c, double cutoff) {
  const HermitianEigen eig = hermitian_eigen(c);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) > cutoff) keep.push_back(i);
  }
  Support s;
  const Eigen::Index n = c.rows();
  s.basis.resize(n, static_cast<Eigen::Index>(keep.size()));
  RealVector inv = RealVector::Zero(eig.values.size());
  for (std::size_t j = 0; j < keep.size(); ++j) {
    s.basis.col(static_cast<Eigen::Index>(j)) = eig.vectors.col(keep[j]);
    inv(keep[j]) = 1.0 / std::sqrt(eig.values(keep[j]));
  }
  s.inv_sqrt = eig.vectors * inv.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  s.projector = s.basis * s.basis.adjoint();
  return s;
}

}  // namespace

ComplexMatrix ChoiBlocks::block(int k, int l) const {
  if (k < 0 || l < 0 || k >= dim || l >= dim) throw std::invalid_argument("ChoiBlocks: block index out of range");
  if (k == l) return diag[static_cast<std::size_t>(k)];
  if (k < l) return offdiag.at({k, l});
  return offdiag.at({l, k}).adjoint();
}

ComplexMatrix ChoiBlocks::assemble() const {
  ComplexMatrix m(dim * dim, dim * dim);
  for (int k = 0; k < dim; ++k) {
    for (int l = 0; l < dim; ++l) m.block(k * dim, l * dim, dim, dim) = block(k, l);
  }
  return m;
}

double ChoiBlocks::scale() const {
  double top = 0.0;
  for (const auto& c : diag) top = std::max(top, hermitian_eigenvalues(c).maxCoeff());
  return top;
}

ChoiBlocks choi_blocks(int d, const ComplexMatrix& m) {
  if (d < 1 || m.rows() != d * d || m.cols() != d * d) {
    throw std::invalid_argument("choi_blocks: matrix is not d^2 x d^2");
  }
  ChoiBlocks b;
  b.dim = d;
  for (int k = 0; k < d; ++k) {
    b.diag.push_back(m.block(k * d, k * d, d, d));
    for (int l = k + 1; l < d; ++l) b.offdiag.emplace(std::make_pair(k, l), m.block(k * d, l * d, d, d));
  }
  return b;
}

ChoiBlocks choi_blocks(const ChoiState& choi) { return choi_blocks(choi.dim(), choi.matrix()); }

Contraction extract_contraction(const ChoiBlocks& blocks, int k, int l, double rank_tol) {
  if (k < 0 || l >= blocks.dim || k >= l) throw std::invalid_argument("extract_contraction: need 0 <= k < l < d");
  const double scale = blocks.scale();
  const double cutoff = rank_tol * scale;
  const Support sk = support_of(blocks.diag[static_cast<std::size_t>(k)], cutoff);
  const Support sl = support_of(blocks.diag[static_cast<std::size_t>(l)], cutoff);
  const ComplexMatrix& ckl = blocks.offdiag.at({k, l});

  Contraction out;
  out.factor = sk.inv_sqrt * ckl * sl.inv_sqrt;
  out.restricted = sk.basis.adjoint() * out.factor * sl.basis;
  out.singular_values = out.restricted.size() ? singular_values(out.restricted) : RealVector();
  out.max_singular = out.singular_values.size() ? out.singular_values.maxCoeff() : 0.0;
  out.off_support = spectral_norm(ckl - sk.projector * ckl * sl.projector);
  // A PSD matrix can carry at most sqrt(cutoff * scale) outside the kept supports.
  out.support_consistent = out.off_support <= 10.0 * std::sqrt(rank_tol) * scale + 1e-12;
  return out;
}

GenExtCertificate certify_generalized_extreme(const ChoiState& choi, double tol) {
  const int d = choi.dim();
  const ChoiBlocks blocks = choi_blocks(choi);
  GenExtCertificate cert;
  cert.rank = static_cast<int>(numerical_rank(choi.matrix(), kBlockRankTolerance));
  cert.rank_ok = cert.rank <= d;
  const double cutoff = kBlockRankTolerance * blocks.scale();
  for (const auto& c : blocks.diag) {
    const RealVector ev = hermitian_eigenvalues(c);
    cert.block_ranks.push_back(static_cast<int>((ev.array() > cutoff).count()));
  }

  std::map<std::pair<int, int>, ComplexMatrix> factor;
  for (int k = 0; k < d; ++k) {
    for (int l = k + 1; l < d; ++l) {
      const Contraction c = extract_contraction(blocks, k, l);
      PairDiagnostics p;
      p.k = k;
      p.l = l;
      p.singular_values = c.singular_values;
      // Missing singular values (unequal support ranks) count as zero.
      const Eigen::Index full = std::max(c.restricted.rows(), c.restricted.cols());
      for (Eigen::Index i = 0; i < full; ++i) {
        const double s = i < c.singular_values.size() ? c.singular_values(i) : 0.0;
        p.unitarity_defect = std::max(p.unitarity_defect, std::abs(s - 1.0));
      }
      factor.emplace(std::make_pair(k, l), c.factor);
      cert.pairs.push_back(std::move(p));
    }
  }
  for (auto& p : cert.pairs) {
    if (p.l > p.k + 1) {
      ComplexMatrix chain = factor.at({p.k, p.k + 1});
      for (int s = p.k + 1; s < p.l; ++s) chain = chain * factor.at({s, s + 1});
      p.chain_residual = spectral_norm(factor.at({p.k, p.l}) - chain);
    }
    cert.max_unitarity_defect = std::max(cert.max_unitarity_defect, p.unitarity_defect);
    cert.chain_residual = std::max(cert.chain_residual, p.chain_residual);
  }
  cert.unitary_ok = cert.max_unitarity_defect <= tol;
  cert.chain_ok = cert.chain_residual <= tol;
  cert.is_genext = cert.rank_ok && cert.unitary_ok && cert.chain_ok;
  return cert;
}

double blockwise_mixture_residual(const ChoiState& target,
                                  const std::vector<std::pair<double, ChoiState>>& decomposition) {
  if (decomposition.empty()) throw std::invalid_argument("blockwise_mixture_residual: empty decomposition");
  const int d = target.dim();
  double total = 0.0;
  ComplexMatrix mix = ComplexMatrix::Zero(d * d, d * d);
  for (const auto& [p, c] : decomposition) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("blockwise_mixture_residual: weight outside [0, 1]");
    if (c.dim() != d) throw std::invalid_argument("blockwise_mixture_residual: dimension mismatch");
    total += p;
    mix += p * c.matrix();
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("blockwise_mixture_residual: weights do not sum to 1");
  const ChoiBlocks a = choi_blocks(target);
  const ChoiBlocks b = choi_blocks(d, mix);
  double worst = 0.0;
  for (int k = 0; k < d; ++k) {
    for (int l = k; l < d; ++l) worst = std::max(worst, max_abs(a.block(k, l) - b.block(k, l)));
  }
  return worst;
}

}  // namespace chansim
