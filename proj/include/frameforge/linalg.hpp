#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "frameforge/types.hpp"

namespace frameforge {

template <typename Scalar>
using Vector4 = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;
template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

/// Gram-Schmidt orthonormalization of 1..4 vectors in R^4. Keeps the input
/// order: the first output is parallel to the first input and the span of
/// every prefix is preserved.
///
/// Throws DegenerateInput when a vector is (numerically) dependent on its
/// predecessors, i.e. the orthogonal remainder has norm <= tol_rank.
template <typename Scalar>
std::vector<Vector4<Scalar>> gram_schmidt4(const std::vector<Vector4<Scalar>>& vs,
                                           Scalar tol_rank = Scalar(tol::rank)) {
  if (vs.empty() || vs.size() > 4) {
    throw BadParameter("gram_schmidt4: expected 1..4 vectors");
  }
  std::vector<Vector4<Scalar>> out;
  out.reserve(vs.size());
  for (const auto& v : vs) {
    Vector4<Scalar> w = v;
    for (const auto& e : out) w -= e.dot(v) * e;
    const Scalar n = w.norm();
    if (!(n > tol_rank)) {
      throw DegenerateInput("gram_schmidt4: nearly dependent input vector");
    }
    out.push_back(w / n);
  }
  return out;
}

/// Generalized cross product in R^4: the unique vector orthogonal to a, b, c
/// whose norm is the parallelepiped area spanned by them. Zero iff the inputs
/// are dependent.
template <typename Scalar>
Vector4<Scalar> cross4(const Vector4<Scalar>& a, const Vector4<Scalar>& b,
                       const Vector4<Scalar>& c) {
  Eigen::Matrix<Scalar, 3, 3> m;
  Vector4<Scalar> out;
  Scalar sign(1);
  for (int i = 0; i < 4; ++i) {
    int col = 0;
    for (int j = 0; j < 4; ++j) {
      if (j == i) continue;
      m(0, col) = a[j];
      m(1, col) = b[j];
      m(2, col) = c[j];
      ++col;
    }
    out[i] = sign * m.determinant();
    sign = -sign;
  }
  return out;
}

template <typename Scalar>
struct SymMat2T {
  Scalar h11{}, h12{}, h22{};

  Eigen::Matrix<Scalar, 2, 2> mat() const {
    Eigen::Matrix<Scalar, 2, 2> m;
    m << h11, h12, h12, h22;
    return m;
  }
};

template <typename Scalar>
struct EigSym2T {
  Scalar lambda1{}, lambda2{};  // lambda1 >= lambda2
  Vector2<Scalar> dir1, dir2;   // orthonormal eigendirections
  bool umbilic = false;
};

/// Closed-form eigendecomposition of a symmetric 2x2 matrix. Eigenvalues are
/// sorted lambda1 >= lambda2; within tol_umb of a double eigenvalue the
/// directions default to the chart axes.
template <typename Scalar>
EigSym2T<Scalar> eig_sym2(const SymMat2T<Scalar>& h, Scalar tol_umb = Scalar(tol::umb)) {
  EigSym2T<Scalar> r;
  const Scalar mean = (h.h11 + h.h22) / Scalar(2);
  const Scalar half_diff = (h.h11 - h.h22) / Scalar(2);
  const Scalar rad = std::sqrt(half_diff * half_diff + h.h12 * h.h12);
  r.lambda1 = mean + rad;
  r.lambda2 = mean - rad;
  r.umbilic = (r.lambda1 - r.lambda2) < tol_umb;
  if (r.umbilic || std::abs(h.h12) == Scalar(0)) {
    // Diagonal (or numerically umbilic): chart axes, larger eigenvalue first.
    if (!r.umbilic && h.h11 < h.h22) {
      r.dir1 = Vector2<Scalar>(0, 1);
      r.dir2 = Vector2<Scalar>(-1, 0);
    } else {
      r.dir1 = Vector2<Scalar>(1, 0);
      r.dir2 = Vector2<Scalar>(0, 1);
    }
    return r;
  }
  r.dir1 = Vector2<Scalar>(h.h12, r.lambda1 - h.h11).normalized();
  r.dir2 = Vector2<Scalar>(-r.dir1[1], r.dir1[0]);
  return r;
}

using SymMat2 = SymMat2T<Real>;
using EigSym2 = EigSym2T<Real>;

inline Real orthogonality_defect(const Mat4& m) {
  return (m.transpose() * m - Mat4::Identity()).cwiseAbs().maxCoeff();
}

/// Orientation-preserving isometry of S^3: g in SO(4) acting by left
/// multiplication on R^4.
struct IsometryG {
  Mat4 m = Mat4::Identity();

  Vec4 operator()(const Vec4& v) const { return m * v; }
  IsometryG inverse() const { return IsometryG{m.transpose()}; }

  /// Validates m^T m = I and det m = +1 within tol_ortho.
  static IsometryG from_matrix(const Mat4& m, Real tol_ortho = tol::ortho) {
    if (!m.allFinite() || orthogonality_defect(m) > tol_ortho) {
      throw BadParameter("IsometryG: matrix is not orthogonal");
    }
    if (std::abs(m.determinant() - 1.0) > tol_ortho) {
      throw BadParameter("IsometryG: determinant must be +1");
    }
    return IsometryG{m};
  }
};

/// Block-diagonal rotation R(alpha) (+) R(beta) acting on the (x1,x2) and
/// (x3,x4) coordinate planes. These are exactly the isometries preserving
/// the product-torus quadrics.
inline IsometryG so4_block_rotation(Real alpha, Real beta) {
  Mat4 m = Mat4::Zero();
  m(0, 0) = std::cos(alpha);
  m(0, 1) = -std::sin(alpha);
  m(1, 0) = std::sin(alpha);
  m(1, 1) = std::cos(alpha);
  m(2, 2) = std::cos(beta);
  m(2, 3) = -std::sin(beta);
  m(3, 2) = std::sin(beta);
  m(3, 3) = std::cos(beta);
  return IsometryG{m};
}

/// Deterministic pseudo-random element of SO(4): QR orthonormalization of a
/// seeded Gaussian matrix, with the R-diagonal sign fixed and the last column
/// flipped if needed to reach det = +1. Identical output for identical seeds
/// on every platform (the generator and the Gaussian transform are pinned).
IsometryG random_so4(std::uint64_t seed);

}  // namespace frameforge
