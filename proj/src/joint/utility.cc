#include <cmath>

#include <fmt/format.h>

#include "mpath/error.h"
#include "mpath/joint.h"

namespace mpath {
namespace {

void check_rate(double rate, double alpha) {
  if (rate > 0 || (alpha == 0 && rate == 0)) return;
  throw Error(ErrorCode::kNonPositiveRate, fmt::format("utility needs a positive rate, got {}", rate));
}

}  // namespace

double alpha_utility(double rate, double alpha, double weight) {
  check_rate(rate, alpha);
  if (alpha == 1.0) return weight * std::log(rate);
  return weight * std::pow(rate, 1.0 - alpha) / (1.0 - alpha);
}

double alpha_utility_gradient(double rate, double alpha, double weight) {
  check_rate(rate, alpha);
  if (alpha == 0.0) return weight;
  return weight * std::pow(rate, -alpha);
}

double alpha_utility_curvature(double rate, double alpha, double weight) {
  check_rate(rate, alpha);
  if (alpha == 0.0) return 0.0;
  return -alpha * weight * std::pow(rate, -alpha - 1.0);
}

}  // namespace mpath
