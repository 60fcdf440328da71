#include "mhilb/expm.hpp"

#include <cmath>

#include "mhilb/errors.hpp"

namespace mhilb {

// scaling and squaring with the degree 13 diagonal Pade approximant,
// one fixed order for reproducibility across inputs
cxmat expm(const cxmat& a) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw dimension_mismatch("matrix exponential needs a square matrix");
  if (!a.allFinite()) throw value_error("matrix has non-finite entries");

  static const double b[14] = {64764752532480000.0,
                               32382376266240000.0,
                               7771770303897600.0,
                               1187353796428800.0,
                               129060195264000.0,
                               10559470521600.0,
                               670442572800.0,
                               33522128640.0,
                               1323241920.0,
                               40840800.0,
                               960960.0,
                               16380.0,
                               182.0,
                               1.0};
  constexpr double theta13 = 5.371920351148152;

  const Eigen::Index n = a.rows();
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));

  const cxmat as = a / std::pow(2.0, squarings);
  const cxmat id = cxmat::Identity(n, n);
  const cxmat a2 = as * as;
  const cxmat a4 = a2 * a2;
  const cxmat a6 = a2 * a4;

  const cxmat u = as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                        b[3] * a2 + b[1] * id);
  const cxmat v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

  cxmat r = (v - u).partialPivLu().solve(v + u);
  for (int s = 0; s < squarings; ++s) r = r * r;
  return r;
}

}  // namespace mhilb
