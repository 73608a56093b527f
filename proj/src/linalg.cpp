#include "frameforge/linalg.hpp"

#include <random>

namespace frameforge {

namespace {

// Uniform double in (0, 1] from the top 53 bits; together with the explicit
// Box-Muller transform below this keeps random_so4 bit-identical across
// standard libraries.
double uniform53(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

double gaussian(std::mt19937_64& rng) {
  const double u1 = uniform53(rng);
  const double u2 = uniform53(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace

IsometryG random_so4(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Mat4 a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = gaussian(rng);

  Eigen::HouseholderQR<Mat4> qr(a);
  Mat4 q = qr.householderQ();
  const Mat4 r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < 4; ++i) {
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  }
  if (q.determinant() < 0) q.col(3) = -q.col(3);
  return IsometryG{q};
}

}  // namespace frameforge
