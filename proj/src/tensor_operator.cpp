#include "wavhelm/tensor_operator.hpp"

#include <stdexcept>

namespace wavhelm {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Dims = std::array<Eigen::Index, 3>;

Eigen::Index product(const Dims& dims, int dim) {
  Eigen::Index p = 1;
  for (int l = 0; l < dim; ++l) p *= dims[l];
  return p;
}

/// Applies m along one axis of the row-major dim-dimensional array x,
/// replacing dims[axis] by m.rows(). Works for sparse and dense m.
template <class MatT>
Eigen::VectorXd applyAlongAxis(const MatT& m, const Eigen::VectorXd& x, Dims& dims,
                               int dim, int axis) {
  const Eigen::Index n = dims[axis], nOut = m.rows();
  Eigen::Index pre = 1, post = 1;
  for (int l = 0; l < axis; ++l) pre *= dims[l];
  for (int l = axis + 1; l < dim; ++l) post *= dims[l];
  Eigen::VectorXd y(pre * nOut * post);
  for (Eigen::Index p = 0; p < pre; ++p) {
    Eigen::Map<const RowMat> xin(x.data() + p * n * post, n, post);
    Eigen::Map<RowMat> yout(y.data() + p * nOut * post, nOut, post);
    yout = m * xin;
  }
  dims[axis] = nOut;
  return y;
}

Eigen::VectorXd applyBandAlongAxis(const BandMatrix& m, const Eigen::VectorXd& x,
                                   const Dims& dims, int dim, int axis) {
  const Eigen::Index n = dims[axis];
  Eigen::Index pre = 1, post = 1;
  for (int l = 0; l < axis; ++l) pre *= dims[l];
  for (int l = axis + 1; l < dim; ++l) post *= dims[l];
  Eigen::VectorXd y(x.size());
  for (Eigen::Index p = 0; p < pre; ++p) {
    Eigen::Map<const RowMat> xin(x.data() + p * n * post, n, post);
    Eigen::Map<RowMat> yout(y.data() + p * n * post, n, post);
    m.applyToRows(xin, yout);
  }
  return y;
}

}  // namespace

std::vector<TensorIndex> enumerateTensor(int dim, const BasisSpec1D& spec) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("enumerateTensor: dim must be 1..3");
  std::vector<TensorIndex> out;
  auto pushBlock = [&](int level, unsigned type) {
    const int n = 1 << level;
    std::array<int, 3> k{1, 1, 1};
    for (;;) {
      out.push_back({level, type, k, dim});
      int l = dim - 1;
      while (l >= 0 && k[l] == n) k[l--] = 1;
      if (l < 0) break;
      ++k[l];
    }
  };
  pushBlock(spec.j0, 0u);
  for (int j = spec.j0; j < spec.finestLevel(); ++j)
    for (unsigned e = 1; e < (1u << dim); ++e) pushBlock(j, e);
  return out;
}

HelmholtzOperator::HelmholtzOperator(int dim, double eps, double a,
                                     const BasisSpec1D& spec)
    : dim_(dim), eps_(eps), a_(a), transform_(spec) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("HelmholtzOperator: dim must be 1..3");
  const Eigen::Index n = spec.dimension();
  size_ = 1;
  for (int l = 0; l < dim; ++l) size_ *= n;
  mass_ = massMatrix(spec.finestLevel());
  stiffness_ = stiffnessMatrix(spec.finestLevel());

  // Diagonal from 1D factor norms (exact: the transform reproduces the
  // actual tensor-product functions).
  Eigen::VectorXd orthoS;
  if (spec.ortho) {
    const Eigen::MatrixXd& t = transform_.coarsestTransform();
    orthoS = (t.transpose() * stiffnessMatrix(spec.j0).dense() * t).diagonal();
  }
  std::vector<TensorIndex> idx = enumerateTensor(dim, spec);
  diag_.resize(size_);
  for (Eigen::Index r = 0; r < size_; ++r) {
    const TensorIndex& ti = idx[static_cast<std::size_t>(r)];
    double m[3], s[3];
    for (int l = 0; l < dim; ++l) {
      bool wav = (ti.type >> l) & 1u;
      if (!wav && spec.ortho && ti.level == spec.j0) {
        m[l] = 1.0;
        s[l] = orthoS(ti.k[l] - 1);
      } else {
        auto [l2, h1] = norms({ti.level, wav ? FunctionKind::Wavelet : FunctionKind::Scaling,
                               ti.k[l]});
        m[l] = l2;
        s[l] = h1;
      }
    }
    double massProd = 1.0;
    for (int l = 0; l < dim; ++l) massProd *= m[l];
    double val = a_ * massProd;
    for (int i = 0; i < dim; ++i) {
      double term = s[i];
      for (int l = 0; l < dim; ++l)
        if (l != i) term *= m[l];
      val += eps_ * term;
    }
    diag_(r) = val;
  }
  invSqrtDiag_ = diag_.cwiseSqrt().cwiseInverse();
}

Eigen::VectorXd HelmholtzOperator::synthesize(const Eigen::VectorXd& v) const {
  const BasisSpec1D& sp = transform_.spec();
  if (v.size() != size_) throw std::invalid_argument("synthesize: length mismatch");
  const Eigen::Index n0 = Eigen::Index(1) << sp.j0;
  Dims dims{1, 1, 1};
  for (int l = 0; l < dim_; ++l) dims[l] = n0;
  Eigen::VectorXd c = v.head(product(dims, dim_));
  if (sp.ortho)
    for (int l = 0; l < dim_; ++l)
      c = applyAlongAxis(transform_.coarsestTransform(), c, dims, dim_, l);
  Eigen::Index off = product(dims, dim_);
  for (int j = sp.j0; j < sp.finestLevel(); ++j) {
    const RefinementPair& pr = transform_.levelPair(j);
    const Eigen::Index nj = Eigen::Index(1) << j;
    Eigen::Index blockSize = 1;
    for (int l = 0; l < dim_; ++l) blockSize *= nj;
    Dims base{1, 1, 1};
    for (int l = 0; l < dim_; ++l) base[l] = nj;
    Dims d = base;
    for (int l = 0; l < dim_; ++l) c = applyAlongAxis(pr.m0, c, d, dim_, l);
    for (unsigned e = 1; e < (1u << dim_); ++e) {
      Eigen::VectorXd blk = v.segment(off, blockSize);
      off += blockSize;
      Dims db = base;
      // Coarsest-level blocks carry orthogonalized scaling factors along
      // their scaling axes.
      if (sp.ortho && j == sp.j0)
        for (int l = 0; l < dim_; ++l)
          if (!((e >> l) & 1u))
            blk = applyAlongAxis(transform_.coarsestTransform(), blk, db, dim_, l);
      for (int l = 0; l < dim_; ++l)
        blk = applyAlongAxis(((e >> l) & 1u) ? pr.m1 : pr.m0, blk, db, dim_, l);
      c += blk;
    }
  }
  return c;
}

Eigen::VectorXd HelmholtzOperator::synthesizeTranspose(const Eigen::VectorXd& g) const {
  const BasisSpec1D& sp = transform_.spec();
  if (g.size() != size_) throw std::invalid_argument("synthesizeTranspose: length mismatch");
  Eigen::VectorXd out(size_);
  Eigen::VectorXd c = g;
  Eigen::Index off = size_;
  for (int j = sp.finestLevel() - 1; j >= sp.j0; --j) {
    const RefinementPair& pr = transform_.levelPair(j);
    const SpMat m0t = pr.m0.transpose();
    const SpMat m1t = pr.m1.transpose();
    const Eigen::Index nj = Eigen::Index(1) << j;
    Eigen::Index blockSize = 1;
    for (int l = 0; l < dim_; ++l) blockSize *= nj;
    Dims fine{1, 1, 1};
    for (int l = 0; l < dim_; ++l) fine[l] = 2 * nj;
    off -= blockSize * ((Eigen::Index(1) << dim_) - 1);
    for (unsigned e = 1; e < (1u << dim_); ++e) {
      Eigen::VectorXd blk = c;
      Dims d = fine;
      for (int l = 0; l < dim_; ++l)
        blk = applyAlongAxis(((e >> l) & 1u) ? m1t : m0t, blk, d, dim_, l);
      if (sp.ortho && j == sp.j0) {
        const Eigen::MatrixXd tT = transform_.coarsestTransform().transpose();
        for (int l = 0; l < dim_; ++l)
          if (!((e >> l) & 1u)) blk = applyAlongAxis(tT, blk, d, dim_, l);
      }
      out.segment(off + Eigen::Index(e - 1) * blockSize, blockSize) = blk;
    }
    Dims d = fine;
    for (int l = 0; l < dim_; ++l) c = applyAlongAxis(m0t, c, d, dim_, l);
  }
  if (sp.ortho) {
    const Eigen::MatrixXd tT = transform_.coarsestTransform().transpose();
    Dims d{1, 1, 1};
    for (int l = 0; l < dim_; ++l) d[l] = Eigen::Index(1) << sp.j0;
    for (int l = 0; l < dim_; ++l) c = applyAlongAxis(tT, c, d, dim_, l);
  }
  out.head(c.size()) = c;
  return out;
}

Eigen::VectorXd HelmholtzOperator::applySingleScale(const Eigen::VectorXd& c) const {
  Dims dims{1, 1, 1};
  const Eigen::Index n = transform_.spec().dimension();
  for (int l = 0; l < dim_; ++l) dims[l] = n;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(c.size());
  if (a_ != 0.0) {
    Eigen::VectorXd tmp = c;
    for (int l = 0; l < dim_; ++l) tmp = applyBandAlongAxis(mass_, tmp, dims, dim_, l);
    y = a_ * tmp;
  }
  if (eps_ != 0.0) {
    for (int i = 0; i < dim_; ++i) {
      Eigen::VectorXd tmp = c;
      for (int l = 0; l < dim_; ++l)
        tmp = applyBandAlongAxis(l == i ? stiffness_ : mass_, tmp, dims, dim_, l);
      y += eps_ * tmp;
    }
  }
  return y;
}

Eigen::VectorXd HelmholtzOperator::apply(const Eigen::VectorXd& x) const {
  return synthesizeTranspose(applySingleScale(synthesize(x)));
}

Eigen::VectorXd HelmholtzOperator::applyPreconditioned(const Eigen::VectorXd& x) const {
  Eigen::VectorXd w = invSqrtDiag_.cwiseProduct(x);
  return invSqrtDiag_.cwiseProduct(apply(w));
}

}  // namespace wavhelm
