#include <gtest/gtest.h>

#include <hypreg/io.hpp>

using namespace hypreg;

TEST(CurveSpec, Coefficients) {
  auto s = parse_curve_spec(R"({"coefficients": ["0", "24", "-50", "35", "-10", "1"], "Q": "0", "R": 1,
                                "P": {"re": "1/2", "im": "0.5", "sheet": -1}})");
  EXPECT_EQ(s.h, RatPoly::from_roots({0, 1, 2, 3, 4}));
  EXPECT_EQ(*s.Q, 0);
  EXPECT_EQ(*s.R, 1);
  EXPECT_EQ(*s.P_re, Rat(1, 2));
  EXPECT_EQ(*s.P_im, Rat(1, 2));
  EXPECT_EQ(s.P_sheet, -1);
}

TEST(CurveSpec, RootsWithLeadingCoefficient) {
  auto s = parse_curve_spec(R"({"roots": ["-1", "0", "1"], "leading": "4"})");
  EXPECT_EQ(s.h.degree(), 3);
  EXPECT_EQ(s.h.leading(), 4);
  EXPECT_FALSE(s.Q.has_value());
}

TEST(CurveSpec, RejectsMalformedInput) {
  const char *bad[] = {
      "not json",
      "[1, 2, 3]",
      R"({"coefficients": ["1", "0", "0", "1"], "unknown": 1})",
      R"({"coefficients": ["1", "0", "0", "1"], "roots": ["0", "1", "2"]})",
      R"({})",
      R"({"coefficients": ["1", "0", "1"]})",
      R"({"coefficients": ["1", "x", "0", "1"]})",
      R"({"coefficients": [1.5, 0, 0, 1]})",
      R"({"coefficients": ["1", "0", "0", "1"], "leading": "2"})",
      R"({"roots": ["0", "1", "2"], "leading": "0"})",
      R"({"roots": ["0", "1", "2"], "P": {"im": "1"}})",
      R"({"roots": ["0", "1", "2"], "P": {"re": "1", "sheet": 2}})",
      R"({"roots": ["0", "1", "2"], "P": {"re": "1", "extra": 0}})",
      R"({"roots": ["0", "1", "2"], "Q": "1/0"})",
  };
  for (const char *t : bad) EXPECT_THROW(parse_curve_spec(t), ConfigError) << t;
}

TEST(CurveSpec, MissingFile) { EXPECT_THROW(read_curve_spec("/nonexistent/curve.json"), ConfigError); }

TEST(Report, FormatsKeepFieldOrder) {
  Report r;
  r.command = "demo";
  r.set("zeta", 1);
  r.set("alpha", "two, three");
  r.set("zeta", 4);
  Table t{"values", {"b", "a"}, {}};
  t.add({1.5, "x"});
  r.tables.push_back(t);
  EXPECT_THROW(t.add({1}), StructuralError);

  std::string json = render(r, Format::JSON);
  EXPECT_LT(json.find("\"zeta\": 4"), json.find("\"alpha\""));
  EXPECT_LT(json.find("\"b\": 1.5"), json.find("\"a\": \"x\""));

  std::string csv = render(r, Format::CSV);
  EXPECT_EQ(csv, "key,value\nzeta,4\nalpha,\"two, three\"\n\n# values\nb,a\n1.5,x\n");

  std::string human = render(r, Format::Human);
  EXPECT_NE(human.find("zeta   4"), std::string::npos);
}

TEST(Report, ParseFormat) {
  EXPECT_EQ(parse_format("json"), Format::JSON);
  EXPECT_EQ(parse_format("CSV"), Format::CSV);
  EXPECT_EQ(parse_format("human"), Format::Human);
  EXPECT_THROW(parse_format("yaml"), ConfigError);
}

TEST(Report, NumberFormatting) {
  EXPECT_EQ(fmt_double(-0.0), "0");
  EXPECT_EQ(fmt_double(0.1 + 0.2, 3), "0.3");
  EXPECT_EQ(fmt_complex({1, -2}, 3), "1-2i");
}
