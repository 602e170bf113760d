#include "test_support.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

namespace greenroute {
namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Generated instance with every power divided by 3, so some coefficients
// have no terminating decimal form.
LinearModel thirds_model(std::uint64_t seed, Variant variant) {
  auto spec = generate_instance(seed);
  for (auto& w : spec.card_power) w /= 3;
  for (auto& link : spec.links)
    for (auto& st : link.states) {
      st.power /= 3;
      st.capacity /= 7;
    }
  return build_model(build_instance(spec), variant);
}

TEST(ExportLp, T1Layout) {
  const auto text = export_lp(build_corrected(build_instance(testing::t1_spec())));
  EXPECT_NE(text.find("\nMinimize\n obj:"), std::string::npos);
  EXPECT_NE(text.find("Subject To\n"), std::string::npos);
  EXPECT_NE(text.find(" flow[d=0,r=0]:"), std::string::npos);
  EXPECT_NE(text.find("Binary\n"), std::string::npos);
  EXPECT_TRUE(text.ends_with("End\n"));
  const auto binary = text.substr(text.find("Binary\n"));
  std::size_t names = 0;
  std::istringstream words(binary);
  for (std::string w; words >> w;) names += parse_variable_name(w).has_value();
  EXPECT_EQ(names, 10u);
}

TEST(ExportLp, T1MatchesGoldenFile) {
  const auto text = export_lp(build_corrected(testing::load("t1.json")));
  EXPECT_EQ(text, read_text(testing::data_path("t1.lp")));
  EXPECT_EQ(text, export_lp(build_corrected(testing::load("t1.json"))));
}

TEST(ExportLp, EmptyModelRoundTrips) {
  const LinearModel empty;
  EXPECT_EQ(parse_lp(export_lp(empty)), empty);
}

TEST(ExportLp, RejectsOverlongNames) {
  LinearModel m = build_corrected(build_instance(testing::t1_spec()));
  m.constraints[0].name = std::string(300, 'a');
  EXPECT_THROW(export_lp(m), NonRepresentable);
}

TEST(LpRoundTrip, RandomModelsWithFractions) {
  for (std::uint64_t seed = 0; seed < 60; ++seed)
    for (Variant v : {Variant::Corrected, Variant::Relaxed}) {
      const auto m = thirds_model(seed, v);
      const auto text = export_lp(m);
      const auto back = parse_lp(text);
      ASSERT_EQ(back, m) << "seed " << seed;
      EXPECT_EQ(export_lp(back), text);
    }
}

TEST(LpRoundTrip, NonTerminatingCoefficientsAreAnnotated) {
  const auto text = export_lp(thirds_model(3, Variant::Corrected));
  EXPECT_NE(text.find("\\ exact"), std::string::npos);
}

TEST(ParseLp, Errors) {
  const auto good = export_lp(build_corrected(build_instance(testing::t1_spec())));
  EXPECT_THROW(parse_lp(good.substr(0, good.rfind("End"))), LpParseError);

  auto undeclared = good;
  const auto pos = undeclared.find("x_c0", undeclared.find("Subject To"));
  undeclared.replace(pos, 4, "x_c9");
  EXPECT_THROW(parse_lp(undeclared), LpParseError);

  try {
    parse_lp("Minimize\n obj: 2 x_c0 +\nSubject To\n bad: x_c0 <=\nEnd\n");
    FAIL();
  } catch (const LpParseError& e) {
    EXPECT_GT(e.line(), 0u);
  }
  EXPECT_THROW(parse_lp("Maximize\n obj: x_c0\nEnd\n"), LpParseError);
}

}  // namespace
}  // namespace greenroute
