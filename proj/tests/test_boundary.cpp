#include <doctest.h>

#include <random>

#include "porolb/boundary.hpp"
#include "porolb/errors.hpp"
#include "porolb/field.hpp"
#include "porolb/lattice.hpp"

using namespace porolb;

namespace {

LatticeField tiny_field() {
  const Dims dims{3, 3, 3};
  std::vector<std::uint8_t> flags(dims.cells(), 0);
  return LatticeField(dims, flags);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

TEST_CASE("resolve_drive") {
  DriveSpec spec;
  SUBCASE("body force passes through") {
    spec.mode = DriveMode::BodyForce;
    spec.magnitude = {1e-6, 0, 0};
    const Vec3 g = resolve_drive(spec);
    CHECK(g[0] == 1e-6);
    CHECK(g[1] == 0.0);
  }
  SUBCASE("pressure drop over length") {
    spec.mode = DriveMode::PressureGradientAsForce;
    spec.magnitude = {1e-6, 0, 0};
    spec.channel_length = 200.0;
    const Vec3 g = resolve_drive(spec);
    CHECK(g[0] == doctest::Approx(5e-9).epsilon(1e-15));
  }
  SUBCASE("zero-length axis rejected") {
    spec.mode = DriveMode::PressureGradientAsForce;
    spec.channel_length = 0.0;
    CHECK_THROWS_AS(resolve_drive(spec), ConfigError);
  }
}

TEST_CASE("apply_sbb copies the post-collision value into the opposite slot") {
  const LatticeModel& m = LatticeModel::d3q19();
  LatticeField field = tiny_field();
  const std::int64_t cell = field.dims().index(1, 1, 1);
  const int k = 5;  // +z
  field.cur(k)[cell] = 0.3;
  BoundaryLink link;
  link.fluid_cell = cell;
  link.direction = k;
  apply_sbb(link, field, m);
  CHECK(field.next(m.opposite[k])[cell] == 0.3);
}

TEST_CASE("apply_cli formula value at q=0.25") {
  const LatticeModel& m = LatticeModel::d3q19();
  LatticeField field = tiny_field();
  const std::int64_t f1 = field.dims().index(1, 1, 1);
  const std::int64_t f2 = field.dims().index(1, 1, 0);
  const int k = 5;  // +z into solid above
  field.cur(k)[f2] = 0.1;
  field.cur(m.opposite[k])[f1] = 0.2;
  field.cur(k)[f1] = 0.3;
  BoundaryLink link;
  link.fluid_cell = f1;
  link.second_fluid = f2;
  link.direction = k;
  link.q = 0.25f;
  apply_cli(link, field, m);
  // (1/3)(0.1) - (1/3)(0.2) + 0.3
  CHECK(field.next(m.opposite[k])[f1] == doctest::Approx(0.26666666666666666).epsilon(1e-12));
}

TEST_CASE("CLI at q=1/2 reduces to SBB on random states") {
  const LatticeModel& m = LatticeModel::d3q19();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    LatticeField a = tiny_field();
    LatticeField b = tiny_field();
    const std::int64_t f1 = a.dims().index(1, 1, 1);
    const std::int64_t f2 = a.dims().index(1, 1, 0);
    const int k = 5;
    const double v1 = uniform01(rng), v2 = uniform01(rng), v3 = uniform01(rng);
    for (LatticeField* f : {&a, &b}) {
      f->cur(k)[f2] = v1;
      f->cur(m.opposite[k])[f1] = v2;
      f->cur(k)[f1] = v3;
    }
    BoundaryLink link;
    link.fluid_cell = f1;
    link.second_fluid = f2;
    link.direction = k;
    link.q = 0.5f;
    apply_cli(link, a, m);
    apply_sbb(link, b, m);
    CHECK(a.next(m.opposite[k])[f1] == b.next(m.opposite[k])[f1]);
  }
}

TEST_CASE("moving wall bounce-back matches the closed form") {
  const LatticeModel& m = LatticeModel::d3q19();
  LatticeField field = tiny_field();
  const std::int64_t cell = field.dims().index(1, 1, 2);
  const int k = 11;  // (+1, 0, +1), into a lid moving in +x
  field.cur(k)[cell] = 0.05;
  BoundaryLink link;
  link.fluid_cell = cell;
  link.direction = k;
  const Vec3 u_wall{0.01, 0.0, 0.0};
  apply_moving_wall(link, field, m, u_wall);
  const double expected = 0.05 - 2.0 * m.w[k] * 3.0 * (1.0 * 0.01);
  CHECK(field.next(m.opposite[k])[cell] == doctest::Approx(expected).epsilon(1e-15));
}
