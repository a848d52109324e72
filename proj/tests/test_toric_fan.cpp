#include <gtest/gtest.h>

#include <random>

#include "campana/io.hpp"
#include "campana/toric_fan.hpp"

using namespace campana;

namespace {

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

std::vector<Fan> bundled() {
  return {fans::projective_line(), fans::projective_plane(), fans::p1xp1(), fans::bl1p2(), fans::dp7(), fans::dp6()};
}

}  // namespace

TEST(ValidateFan, ProjectivePlane) {
  const auto rep = validate_fan(fans::projective_plane());
  EXPECT_TRUE(rep.smooth && rep.complete && rep.primitive);
  EXPECT_EQ(rep.n, 2u);
  EXPECT_EQ(rep.s, 3u);
  EXPECT_EQ(rep.r, 1u);
}

TEST(ValidateFan, ProjectiveLine) {
  const auto rep = validate_fan(fans::projective_line());
  EXPECT_EQ(rep.n, 1u);
  EXPECT_EQ(rep.r, 1u);
}

TEST(ValidateFan, HigherProjectiveSpaces) {
  for (std::size_t n = 1; n <= 4; ++n) EXPECT_EQ(validate_fan(fans::projective_space(n)).r, 1u);
}

TEST(ValidateFan, Rejections) {
  EXPECT_EQ(kind_of([] { validate_fan(make_fan(2, {{1, 0}, {1, 2}, {-1, -1}}, {{0, 1}, {1, 2}, {0, 2}})); }),
            ErrorKind::NonSmoothCone);
  EXPECT_EQ(kind_of([] { validate_fan(make_fan(2, {{1, 0}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}})); }),
            ErrorKind::IncompleteFan);
  EXPECT_EQ(kind_of([] { validate_fan(make_fan(1, {{2}, {-1}}, {{0}, {1}})); }), ErrorKind::NonPrimitiveRay);
  // every facet is shared twice but the cones overlap
  EXPECT_EQ(kind_of([] { validate_fan(make_fan(2, {{1, 0}, {0, 1}, {1, 1}}, {{0, 1}, {0, 2}, {1, 2}})); }),
            ErrorKind::IncompleteFan);
  EXPECT_EQ(kind_of([] { validate_fan(make_fan(1, {{1}, {2}}, {{0}, {1}})); }), ErrorKind::NonPrimitiveRay);
  EXPECT_EQ(kind_of([] { validate_fan(make_fan(1, {{1}, {1}}, {{0}, {1}})); }), ErrorKind::IncompleteFan);
}

TEST(ConeData, ProjectivePlaneFirstCone) {
  const auto inst = make_instance(fans::projective_plane(), {1, 1, 1});
  const auto cd = cone_data(inst, 0);
  EXPECT_EQ(cd.alpha, (Vec{0, 0, 3}));
  EXPECT_EQ(cd.beta[2][0], 1);
  EXPECT_EQ(cd.complement, (IndexSet{2}));
}

TEST(ConeData, ProjectiveLineHalfMultiplicities) {
  const auto inst = make_instance(fans::projective_line(), {2, 2});
  EXPECT_EQ(cone_data(inst, 0).alpha, (Vec{0, 1}));
  EXPECT_EQ(cone_data(inst, 1).alpha, (Vec{1, 0}));
}

TEST(ConeData, BetaRelationOnBundledFans) {
  for (const auto& f : bundled()) EXPECT_TRUE(check_beta_relation(make_instance(f, {})));
}

TEST(ConeData, DualBasisAndBetaShape) {
  std::mt19937 rng(7);
  for (const auto& f : bundled()) {
    std::vector<unsigned> m(f.s());
    for (auto& x : m) x = 1 + rng() % 3;
    const auto inst = make_instance(f, m);
    for (const auto& cd : all_cone_data(inst)) {
      for (std::size_t k = 0; k < cd.sigma.size(); ++k)
        for (std::size_t l = 0; l < cd.sigma.size(); ++l)
          EXPECT_EQ(dot(cd.dual_basis[k], detail::ray_vec(f, cd.sigma[l])), k == l ? 1 : 0);
      for (Index i = 0; i < f.s(); ++i)
        for (Index j = 0; j < f.s(); ++j) {
          const bool j_in = std::binary_search(cd.sigma.begin(), cd.sigma.end(), j);
          const bool i_in = std::binary_search(cd.sigma.begin(), cd.sigma.end(), i);
          if (!j_in) {
            EXPECT_EQ(cd.beta[i][j], 0);
          } else if (i_in) {
            EXPECT_EQ(cd.beta[i][j], i == j ? -1 : 0);
          }
        }
      // alpha_i = varpi_i + sum_{j in sigma} varpi_j beta_{i,j} off sigma
      for (auto i : cd.complement) {
        Rational v = inst.varpi(i);
        for (auto j : cd.sigma) v += inst.varpi(j) * cd.beta[i][j];
        EXPECT_EQ(cd.alpha[i], v);
      }
      for (auto j : cd.sigma) EXPECT_EQ(cd.alpha[j], 0);
    }
  }
}

TEST(Ampleness, LogAnticanonicalBundledFans) {
  for (const auto& f : bundled()) {
    const auto inst = make_instance(f, {});
    EXPECT_TRUE(assumption_L(inst));
    EXPECT_TRUE(is_ample(inst));
  }
}

TEST(Ampleness, DegreeOneOnLineIsAmple) {
  const auto inst = make_instance(fans::projective_line(), {1, 1}, Vec{1, 0});
  EXPECT_TRUE(assumption_L(inst));
  EXPECT_TRUE(is_ample(inst));
}

TEST(Ampleness, PulledBackLineOnBlowup) {
  const auto inst = make_instance(fans::bl1p2(), {1, 1, 1, 1}, Vec{0, 0, 1, 0});
  EXPECT_TRUE(assumption_L(inst));
  EXPECT_FALSE(is_ample(inst));
}

TEST(Ampleness, DegreeZeroFails) {
  const auto inst = make_instance(fans::projective_line(), {1, 1}, Vec{1, -1});
  EXPECT_FALSE(assumption_L(inst));
  EXPECT_FALSE(is_ample(inst));
}

TEST(Nonfaces, Minimal) {
  EXPECT_EQ(minimal_nonfaces(fans::projective_plane()), (std::vector<IndexSet>{{0, 1, 2}}));
  EXPECT_EQ(minimal_nonfaces(fans::p1xp1()), (std::vector<IndexSet>{{0, 1}, {2, 3}}));
  EXPECT_EQ(minimal_nonfaces(fans::projective_line()), (std::vector<IndexSet>{{0, 1}}));
  EXPECT_EQ(minimal_nonfaces(fans::bl1p2()), (std::vector<IndexSet>{{0, 1}, {2, 3}}));
}

TEST(FanIO, BundledFilesMatch) {
  const std::string dir = std::string(CAMPANA_DATA_DIR) + "/fans/";
  const std::vector<std::pair<std::string, Fan>> cases = {
      {"p1.json", fans::projective_line()}, {"p2.json", fans::projective_plane()}, {"p1xp1.json", fans::p1xp1()},
      {"bl1p2.json", fans::bl1p2()},        {"dp7.json", fans::dp7()},             {"dp6.json", fans::dp6()}};
  for (const auto& [file, f] : cases) {
    const auto inst = load_instance(dir + file);
    EXPECT_EQ(inst.fan.rays, f.rays) << file;
    auto a = inst.fan.max_cones, b = f.max_cones;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b) << file;
  }
  const auto half = load_instance(dir + "p1_m22.json");
  EXPECT_EQ(half.L, (Vec{Rational(1, 2), Rational(1, 2)}));
}

TEST(FanIO, Malformed) {
  EXPECT_EQ(kind_of([] { instance_from_json(json::parse(R"({"dim":1,"rays":[[1],[-1]]})")); }),
            ErrorKind::MalformedFan);
  EXPECT_EQ(kind_of([] { instance_from_json(json::parse(R"({"dim":1,"rays":[[1],[-1]],"max_cones":[[0],[1]]})")); }),
            ErrorKind::MalformedFan);
  const auto inst = instance_from_json(
      json::parse(R"({"dim":1,"rays":[[1],[-1]],"max_cones":[[1],[2]],"m":[3,3],"L":["1/2", 1]})"));
  EXPECT_EQ(inst.L, (Vec{Rational(1, 2), Rational(1)}));
}
