#include "rotfit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "rotfit/error.hpp"

namespace rotfit::linalg {

namespace {

constexpr int kMaxJacobiSweeps = 50;
constexpr double kJacobiThreshold = 1e-14;

void check_finite(const MatX& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + ": non-finite entry");
  }
}

// Flip the sign of a vector so that its largest-magnitude entry is positive.
template <typename Derived>
void canonicalize_sign(Eigen::MatrixBase<Derived>&& v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  if (v(k) < 0.0) v = -v;
}

// Sort eigenpairs (values, column vectors) in descending order of value.
// Insertion sort keeps equal values in their original order.
template <typename Values, typename Vectors>
void sort_descending(Values& values, Vectors& vectors) {
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    for (Eigen::Index j = i; j > 0 && values(j - 1) < values(j); --j) {
      std::swap(values(j - 1), values(j));
      vectors.col(j - 1).swap(vectors.col(j));
    }
  }
}

// Extend the first `filled` orthonormal columns of `u` to a full orthonormal
// basis, drawing candidates from the standard basis.
template <typename Square>
void complete_basis(Square& u, Eigen::Index filled) {
  using Column = Eigen::Matrix<double, Square::RowsAtCompileTime, 1>;
  const auto p = u.rows();
  Eigen::Index next = filled;
  for (Eigen::Index e = 0; e < p && next < p; ++e) {
    Column candidate = Column::Unit(p, e);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < next; ++j) {
        candidate -= u.col(j).dot(candidate) * u.col(j);
      }
    }
    const double norm = candidate.norm();
    if (norm > 1e-6) {
      u.col(next++) = candidate / norm;
    }
  }
}

template <typename Tall>
struct TallSvd {
  Eigen::Matrix<double, Tall::RowsAtCompileTime, Tall::RowsAtCompileTime> u;
  Eigen::Matrix<double, Tall::ColsAtCompileTime, 1> s;
  Eigen::Matrix<double, Tall::ColsAtCompileTime, Tall::ColsAtCompileTime> v;
};

// Hestenes one-sided Jacobi on a tall matrix (rows >= cols).
template <typename Tall>
TallSvd<Tall> svd_tall(const Tall& a) {
  using Result = TallSvd<Tall>;
  const auto p = a.rows();
  const auto q = a.cols();
  Tall w = a;
  decltype(Result::v) v = decltype(Result::v)::Identity(q, q);
  const double eps = std::numeric_limits<double>::epsilon();

  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (Eigen::Index i = 0; i < q - 1; ++i) {
      for (Eigen::Index j = i + 1; j < q; ++j) {
        const double alpha = w.col(i).squaredNorm();
        const double beta = w.col(j).squaredNorm();
        const double gamma = w.col(i).dot(w.col(j));
        if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Eigen::Index r = 0; r < p; ++r) {
          const double wi = w(r, i);
          const double wj = w(r, j);
          w(r, i) = c * wi - s * wj;
          w(r, j) = s * wi + c * wj;
        }
        for (Eigen::Index r = 0; r < q; ++r) {
          const double vi = v(r, i);
          const double vj = v(r, j);
          v(r, i) = c * vi - s * vj;
          v(r, j) = s * vi + c * vj;
        }
      }
    }
    if (!rotated) break;
  }

  Result out;
  out.s.resize(q);
  for (Eigen::Index i = 0; i < q; ++i) out.s(i) = w.col(i).norm();
  // Sort the columns of W and V together by singular value.
  for (Eigen::Index i = 1; i < q; ++i) {
    for (Eigen::Index j = i; j > 0 && out.s(j - 1) < out.s(j); --j) {
      std::swap(out.s(j - 1), out.s(j));
      w.col(j - 1).swap(w.col(j));
      v.col(j - 1).swap(v.col(j));
    }
  }
  out.v = v;
  out.u = decltype(Result::u)::Zero(p, p);
  const double sigma_max = out.s(0);
  Eigen::Index filled = 0;
  for (Eigen::Index k = 0; k < q; ++k) {
    if (out.s(k) > 1e-14 * sigma_max && out.s(k) > 0.0) {
      out.u.col(k) = w.col(k) / out.s(k);
      filled = k + 1;
    }
  }
  // Re-orthogonalize the left vectors; they inherit rounding from W.
  for (Eigen::Index k = 0; k < filled; ++k) {
    for (Eigen::Index j = 0; j < k; ++j) out.u.col(k) -= out.u.col(j).dot(out.u.col(k)) * out.u.col(j);
    out.u.col(k).normalize();
  }
  complete_basis(out.u, filled);

  for (Eigen::Index k = 0; k < q; ++k) {
    Eigen::Index idx = 0;
    out.v.col(k).cwiseAbs().maxCoeff(&idx);
    if (out.v(idx, k) < 0.0) {
      out.v.col(k) = -out.v.col(k);
      if (k < p) out.u.col(k) = -out.u.col(k);
    }
  }
  return out;
}

template <typename Values>
double ratio_min_max(const Values& s) {
  if (s.size() == 0 || s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

double inverse_condition_any(const MatX& m) {
  if (m.rows() == 3 && m.cols() == 3) return ratio_min_max(svd3(m).s);
  return inverse_condition(m);
}

template <typename Square>
struct EigenPairs {
  Eigen::Matrix<double, Square::RowsAtCompileTime, 1> values;
  Square vectors;
};

// Cyclic Jacobi on a symmetric matrix; eigenvalues in descending order.
template <typename Square>
EigenPairs<Square> jacobi_eigen(const Square& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::kSizeMismatch, "sym_eigen: matrix is not square");
  if (!m.allFinite()) throw Error(ErrorCode::kInvalidArgument, "sym_eigen: non-finite entry");
  const double norm = m.norm();
  const auto n = m.rows();
  if ((m - m.transpose()).norm() > kSymmetryTolerance * std::max(norm, 1e-300)) {
    throw Error(ErrorCode::kNotSymmetric, "sym_eigen: asymmetry exceeds tolerance");
  }

  Square a = 0.5 * (m + m.transpose());
  Square v = Square::Identity(n, n);
  const double threshold = kJacobiThreshold * norm;

  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (std::sqrt(2.0 * off) <= threshold) break;

    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // Symmetric update: only rows/columns p and q change.
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = a(p, k) = c * akp - s * akq;
          a(k, q) = a(q, k) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  EigenPairs<Square> out{a.diagonal(), v};
  sort_descending(out.values, out.vectors);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.vectors.col(i).normalize();
    canonicalize_sign(out.vectors.col(i));
  }
  return out;
}

}  // namespace

MatX SvdResult::reconstruct() const {
  MatX sigma = MatX::Zero(u.cols(), v.cols());
  for (Eigen::Index i = 0; i < s.size(); ++i) sigma(i, i) = s(i);
  return u * sigma * v.transpose();
}

double det3(const Mat3& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

double det(const MatX& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::kSizeMismatch, "det: matrix is not square");
  if (m.rows() == 3) return det3(m);
  MatX lu = m;
  const auto n = lu.rows();
  double result = 1.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot = k;
    lu.col(k).tail(n - k).cwiseAbs().maxCoeff(&pivot);
    pivot += k;
    if (lu(pivot, k) == 0.0) return 0.0;
    if (pivot != k) {
      lu.row(k).swap(lu.row(pivot));
      result = -result;
    }
    result *= lu(k, k);
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double factor = lu(i, k) / lu(k, k);
      lu.row(i).tail(n - k - 1) -= factor * lu.row(k).tail(n - k - 1);
    }
  }
  return result;
}

SymEigen sym_eigen(const MatX& m) {
  auto e = jacobi_eigen(m);
  return {std::move(e.values), std::move(e.vectors)};
}

SymEigen4 sym_eigen4(const Mat4& m) {
  const auto e = jacobi_eigen(m);
  return {e.values, e.vectors};
}

Mat4 adjugate4(const Mat4& m) {
  // 2x2 minors of the top two rows (s) and bottom two rows (c).
  const double s0 = m(0, 0) * m(1, 1) - m(1, 0) * m(0, 1);
  const double s1 = m(0, 0) * m(1, 2) - m(1, 0) * m(0, 2);
  const double s2 = m(0, 0) * m(1, 3) - m(1, 0) * m(0, 3);
  const double s3 = m(0, 1) * m(1, 2) - m(1, 1) * m(0, 2);
  const double s4 = m(0, 1) * m(1, 3) - m(1, 1) * m(0, 3);
  const double s5 = m(0, 2) * m(1, 3) - m(1, 2) * m(0, 3);

  const double c5 = m(2, 2) * m(3, 3) - m(3, 2) * m(2, 3);
  const double c4 = m(2, 1) * m(3, 3) - m(3, 1) * m(2, 3);
  const double c3 = m(2, 1) * m(3, 2) - m(3, 1) * m(2, 2);
  const double c2 = m(2, 0) * m(3, 3) - m(3, 0) * m(2, 3);
  const double c1 = m(2, 0) * m(3, 2) - m(3, 0) * m(2, 2);
  const double c0 = m(2, 0) * m(3, 1) - m(3, 0) * m(2, 1);

  Mat4 adj;
  adj(0, 0) = m(1, 1) * c5 - m(1, 2) * c4 + m(1, 3) * c3;
  adj(0, 1) = -m(0, 1) * c5 + m(0, 2) * c4 - m(0, 3) * c3;
  adj(0, 2) = m(3, 1) * s5 - m(3, 2) * s4 + m(3, 3) * s3;
  adj(0, 3) = -m(2, 1) * s5 + m(2, 2) * s4 - m(2, 3) * s3;

  adj(1, 0) = -m(1, 0) * c5 + m(1, 2) * c2 - m(1, 3) * c1;
  adj(1, 1) = m(0, 0) * c5 - m(0, 2) * c2 + m(0, 3) * c1;
  adj(1, 2) = -m(3, 0) * s5 + m(3, 2) * s2 - m(3, 3) * s1;
  adj(1, 3) = m(2, 0) * s5 - m(2, 2) * s2 + m(2, 3) * s1;

  adj(2, 0) = m(1, 0) * c4 - m(1, 1) * c2 + m(1, 3) * c0;
  adj(2, 1) = -m(0, 0) * c4 + m(0, 1) * c2 - m(0, 3) * c0;
  adj(2, 2) = m(3, 0) * s4 - m(3, 1) * s2 + m(3, 3) * s0;
  adj(2, 3) = -m(2, 0) * s4 + m(2, 1) * s2 - m(2, 3) * s0;

  adj(3, 0) = -m(1, 0) * c3 + m(1, 1) * c1 - m(1, 2) * c0;
  adj(3, 1) = m(0, 0) * c3 - m(0, 1) * c1 + m(0, 2) * c0;
  adj(3, 2) = -m(3, 0) * s3 + m(3, 1) * s1 - m(3, 2) * s0;
  adj(3, 3) = m(2, 0) * s3 - m(2, 1) * s1 + m(2, 2) * s0;
  return adj;
}

SvdResult svd(const MatX& m) {
  check_finite(m, "svd");
  if (m.rows() >= m.cols()) {
    auto t = svd_tall(m);
    return {std::move(t.u), std::move(t.s), std::move(t.v)};
  }
  // A^T = U' S V'^T  =>  A = V' S U'^T.
  const MatX mt = m.transpose();
  auto t = svd_tall(mt);
  SvdResult out{std::move(t.v), std::move(t.s), std::move(t.u)};
  for (Eigen::Index k = 0; k < out.s.size(); ++k) {
    Eigen::Index idx = 0;
    out.v.col(k).cwiseAbs().maxCoeff(&idx);
    if (out.v(idx, k) < 0.0) {
      out.v.col(k) = -out.v.col(k);
      out.u.col(k) = -out.u.col(k);
    }
  }
  return out;
}

Svd3 svd3(const Mat3& m) {
  if (!m.allFinite()) throw Error(ErrorCode::kInvalidArgument, "svd: non-finite entry");
  const auto t = svd_tall(m);
  return {t.u, t.s, t.v};
}

Svd23 svd23(const Mat23& m) {
  if (!m.allFinite()) throw Error(ErrorCode::kInvalidArgument, "svd: non-finite entry");
  const Eigen::Matrix<double, 3, 2> mt = m.transpose();
  const auto t = svd_tall(mt);
  Svd23 out{t.v, t.s, t.u};
  for (Eigen::Index k = 0; k < 2; ++k) {
    Eigen::Index idx = 0;
    out.v.col(k).cwiseAbs().maxCoeff(&idx);
    if (out.v(idx, k) < 0.0) {
      out.v.col(k) = -out.v.col(k);
      out.u.col(k) = -out.u.col(k);
    }
  }
  return out;
}

double inverse_condition(const MatX& m) { return ratio_min_max(svd(m).s); }

QrResult qr_decompose(const MatX& x) {
  check_finite(x, "qr_decompose");
  const auto k = x.rows();
  const auto n = x.cols();
  if (k < n) throw Error(ErrorCode::kRankDeficient, "qr_decompose: fewer rows than columns");

  // Reflector j lives in rows j.. of column j of `h`.
  MatX r = x;
  MatX h = MatX::Zero(k, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    auto hj = h.col(j).tail(k - j);
    hj = r.col(j).tail(k - j);
    const double alpha = -std::copysign(hj.norm(), hj(0));
    hj(0) -= alpha;
    const double hn = hj.norm();
    if (hn > 0.0) {
      hj /= hn;
      for (Eigen::Index c = j; c < n; ++c) {
        auto col = r.col(c).tail(k - j);
        col -= (2.0 * hj.dot(col)) * hj;
      }
    }
  }
  // Q = H_0 H_1 ... H_{n-1} applied to the first n columns of I.
  MatX q = MatX::Identity(k, n);
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    const auto hj = h.col(j).tail(k - j);
    if (hj.squaredNorm() == 0.0) continue;
    for (Eigen::Index c = 0; c < n; ++c) {
      auto col = q.col(c).tail(k - j);
      col -= (2.0 * hj.dot(col)) * hj;
    }
  }

  QrResult out{q.transpose(), r.topRows(n).triangularView<Eigen::Upper>()};
  for (Eigen::Index i = 0; i < n; ++i) {
    if (out.t(i, i) < 0.0) {
      out.t.row(i) = -out.t.row(i);
      out.s.row(i) = -out.s.row(i);
    }
  }
  if (inverse_condition_any(out.t) < kRankTolerance) {
    throw Error(ErrorCode::kRankDeficient, "qr_decompose: column rank below full");
  }
  return out;
}

namespace {

// The Cholesky factor of X^T X shares X's singular values. The Gram route
// cannot resolve singular-value ratios much below sqrt(eps).
template <typename Gram>
MatX gram_pseudoinverse(const MatX& x) {
  Gram gram(x.cols(), x.cols());
  gram.noalias() = x.transpose() * x;
  const Eigen::LLT<Gram> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kRankDeficient, "pseudoinverse: X^T X is not positive definite");
  }
  const MatX factor = llt.matrixU();
  if (inverse_condition_any(factor) < kRankTolerance) {
    throw Error(ErrorCode::kRankDeficient, "pseudoinverse: column rank below full");
  }
  return llt.solve(x.transpose());
}

}  // namespace

MatX pseudoinverse(const MatX& x) {
  check_finite(x, "pseudoinverse");
  if (x.rows() < x.cols()) throw Error(ErrorCode::kRankDeficient, "pseudoinverse: fewer rows than columns");
  if (x.cols() == 3) return gram_pseudoinverse<Mat3>(x);
  return gram_pseudoinverse<MatX>(x);
}

Mat3 sym_matrix_power(const Mat3& m, PowerKind kind) {
  const auto e = jacobi_eigen(m);
  const double lmax = std::max(e.values(0), 0.0);
  Vec3 powered;
  for (int i = 0; i < 3; ++i) {
    const double lambda = std::max(e.values(i), 0.0);
    switch (kind) {
      case PowerKind::kSqrt:
        powered(i) = std::sqrt(lambda);
        break;
      case PowerKind::kInverseSqrt:
        if (!(lambda > 1e-12 * lmax)) {
          throw Error(ErrorCode::kSingularMatrix, "sym_matrix_power: inverse root of singular matrix");
        }
        powered(i) = 1.0 / std::sqrt(lambda);
        break;
      case PowerKind::kPseudoInverseSqrt:
        powered(i) = lambda > 1e-12 * lmax ? 1.0 / std::sqrt(lambda) : 0.0;
        break;
    }
  }
  return e.vectors * powered.asDiagonal() * e.vectors.transpose();
}

double orthonormality_defect(const MatX& m) {
  if (m.rows() <= m.cols()) {
    return (m * m.transpose() - MatX::Identity(m.rows(), m.rows())).norm();
  }
  return (m.transpose() * m - MatX::Identity(m.cols(), m.cols())).norm();
}

}  // namespace rotfit::linalg
