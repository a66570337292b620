#include "porolb/profile.hpp"

#include <algorithm>
#include <cmath>

#include "porolb/errors.hpp"

namespace porolb {

void ProfileData::normalize() {
  u_max = 0.0;
  for (double v : u_superficial) {
    if (std::abs(v) > std::abs(u_max)) u_max = v;
  }
  u_normalized.resize(u_superficial.size());
  for (std::size_t i = 0; i < u_superficial.size(); ++i) {
    u_normalized[i] = (u_max != 0.0) ? u_superficial[i] / u_max : 0.0;
  }
}

double interp_linear(const std::vector<double>& zs, const std::vector<double>& vs, double x) {
  if (zs.empty()) throw ConfigError("interpolation over an empty profile");
  if (x <= zs.front()) return vs.front();
  if (x >= zs.back()) return vs.back();
  const auto it = std::upper_bound(zs.begin(), zs.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - zs.begin());
  const double t = (x - zs[i - 1]) / (zs[i] - zs[i - 1]);
  return vs[i - 1] + t * (vs[i] - vs[i - 1]);
}

namespace {

double normalized_sample(const ProfileData& p, double zeta, const std::vector<double>& un) {
  const double z_lo = p.z.front();
  const double span = p.z.back() - p.z.front();
  return interp_linear(p.z, un, z_lo + zeta * span);
}

}  // namespace

double l2_distance_normalized(const ProfileData& a, const ProfileData& b, int samples) {
  ProfileData an = a, bn = b;
  an.normalize();
  bn.normalize();
  double acc = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double zeta = (i + 0.5) / samples;
    const double d = normalized_sample(an, zeta, an.u_normalized) -
                     normalized_sample(bn, zeta, bn.u_normalized);
    acc += d * d;
  }
  return std::sqrt(acc / samples);
}

double rms_difference(const ProfileData& a, const ProfileData& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < b.z.size(); ++i) {
    const double d = interp_linear(a.z, a.u_superficial, b.z[i]) - b.u_superficial[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(b.z.size()));
}

}  // namespace porolb
