#include <cmath>

#include "test_helpers.hpp"
#include "upq/serialize.hpp"
#include "upq/svg_plot.hpp"

using namespace upq;
using upq::test::max_abs_diff;

TEST(Json, MatrixRoundTripIsExact) {
  Rng rng(71);
  const CMatrix m = complex_gaussian_matrix(rng, 3, 2);
  const auto back = matrix_from_json(Json::parse(to_json(m).dump()));
  EXPECT_EQ(max_abs_diff(back, m), 0.0);
  Json bad = to_json(m);
  bad["rows"] = 4;
  EXPECT_THROW(matrix_from_json(bad), InvalidInput);
}

TEST(Json, GroupObjectsRoundTrip) {
  Rng rng(72);
  const Signature sig(2, 3);
  const auto p = random_iwasawa(sig, rng);
  EXPECT_EQ(coordinate_distance(iwasawa_from_json(Json::parse(to_json(p).dump())), p), 0.0);
  const auto g = embed(p) * random_compact(sig, rng);
  EXPECT_EQ(max_abs_diff(group_from_json(to_json(g)).matrix(), g.matrix()), 0.0);

  const PCurrent c(CurrentVariant::iwasawa, {0.0, 0.25, 1.0}, {p, random_iwasawa(sig, rng)});
  const auto c2 = pcurrent_from_json(Json::parse(to_json(c).dump()));
  EXPECT_EQ(c2.breaks(), c.breaks());
  EXPECT_EQ(coordinate_distance(c2.values()[1], c.values()[1]), 0.0);

  const GCurrent gc = GCurrent::constant(CurrentVariant::compact, random_compact(sig, rng));
  const auto gc2 = gcurrent_from_json(to_json(gc));
  EXPECT_EQ(gc2.variant(), CurrentVariant::compact);
  Json broken = to_json(gc);
  broken["variant"] = "loop";
  EXPECT_THROW(gcurrent_from_json(broken), InvalidInput);
}

TEST(Json, ReportRowsAndNulls) {
  Report r;
  ReportRow a{"group", "dim[1,2]", "dim U(p,q) = (p+q)^2", 9.0, 9.0, NAN, 0.0, true, 42};
  ReportRow b{"qp", "cf, \"quoted\"", "E exp(-N) = ...", 0.5, NAN, 0.01, 0.03, false, 7};
  r.rows = {a, b};
  const Json j = to_json(r);
  EXPECT_EQ(j["schema"], kReportSchema);
  EXPECT_EQ(j["summary"]["failures"], 1);
  EXPECT_EQ(j["summary"]["verdict"], "fail");
  EXPECT_TRUE(j["rows"][0]["std_error"].is_null());
  EXPECT_EQ(j["rows"][1]["verdict"], "fail");

  const Report back = report_from_json(Json::parse(j.dump()));
  ASSERT_EQ(back.rows.size(), 2u);
  EXPECT_EQ(back.rows[1].check, b.check);
  EXPECT_TRUE(std::isnan(back.rows[0].std_error));
  EXPECT_TRUE(std::isnan(back.rows[1].reference));
  EXPECT_EQ(back.rows[1].tolerance, 0.03);
  EXPECT_FALSE(back.rows[1].pass);
  EXPECT_EQ(to_json(back).dump(), j.dump());

  Json other = j;
  other["schema"] = "upq-report/0";
  EXPECT_THROW(report_from_json(other), InvalidInput);
}

TEST(Csv, FixedColumnsAndQuoting) {
  Report r;
  r.rows.push_back({"qp", "a,b", "x \"y\"", 1.5, NAN, 0.25, 0.75, true, 3});
  const std::string csv = to_csv(r);
  EXPECT_EQ(csv, "suite,check,estimate,reference,std_error,tolerance,verdict,seed,anchor\n"
                 "qp,\"a,b\",1.5,,0.25,0.75,pass,3,\"x \"\"y\"\"\"\n");
}

TEST(Svg, RendersSeriesAndSkipsNonPositiveOnLogAxes) {
  Plot p{"t.svg", "title <a&b>", "x", "y", true, true, {{"s", {1.0, 10.0, 100.0}, {1e-3, 0.0, 1e-5}, {}, true}}};
  const std::string svg = render_svg(p);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("title &lt;a&amp;b&gt;"), std::string::npos);
  std::size_t circles = 0;
  for (std::size_t pos = svg.find("<circle"); pos != std::string::npos; pos = svg.find("<circle", pos + 1)) ++circles;
  EXPECT_EQ(circles, 2u);
  EXPECT_EQ(render_svg(p), svg);
}
