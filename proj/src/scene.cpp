#include "lidopt/scene.hpp"

#include <cmath>
#include <numbers>

namespace lidopt {

double normalize_heading(double radians) {
  const double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(radians + std::numbers::pi, two_pi);
  if (wrapped < 0.0) wrapped += two_pi;
  return wrapped - std::numbers::pi;
}

}  // namespace lidopt
