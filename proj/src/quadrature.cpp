#include "cskde/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <vector>

namespace cskde {

double integrate(const RealFn& f, double a, double b, double rel_tol, unsigned max_depth)
{
  if (!(b > a))
    return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(f, a, b, max_depth, rel_tol);
}

double integrate(const RealFn& f,
                 double a,
                 double b,
                 std::initializer_list<double> breaks,
                 double rel_tol,
                 unsigned max_depth)
{
  std::vector<double> pts{ a };
  for (const double c : breaks)
    if (c > a && c < b)
      pts.push_back(c);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    total += integrate(f, pts[i], pts[i + 1], rel_tol, max_depth);
  return total;
}

} // namespace cskde
