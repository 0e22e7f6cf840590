#include <filesystem>
#include <fstream>

#include "test_helpers.hpp"
#include "upq/serialize.hpp"
#include "upq/suites.hpp"

using namespace upq;
namespace fs = std::filesystem;

TEST(Config, Validation) {
  EXPECT_NO_THROW(validate(RunConfig{}));
  auto bad = [](auto mutate) {
    RunConfig c;
    mutate(c);
    EXPECT_THROW(validate(c), ConfigInvalid);
  };
  bad([](RunConfig& c) { c.p = 3, c.q = 2; });
  bad([](RunConfig& c) { c.q = 4; });
  bad([](RunConfig& c) { c.degree = 3; });
  bad([](RunConfig& c) { c.eps = "+,-"; });
  bad([](RunConfig& c) { c.window_min = 0.0; });
  bad([](RunConfig& c) { c.window_min = 20.0; });
  bad([](RunConfig& c) { c.samples = 0; });
}

TEST(Config, KeyValueParsing) {
  const auto kv = parse_key_values("# comment\nseed = 7\n\n window-min=0.01 # trailing\nout_dir = x y\n");
  EXPECT_EQ(kv.at("seed"), "7");
  EXPECT_EQ(kv.at("window-min"), "0.01");
  EXPECT_EQ(kv.at("out_dir"), "x y");
  EXPECT_THROW(parse_key_values("seed 7\n"), ConfigInvalid);

  RunConfig c;
  apply_setting(c, "window_max", "20");
  apply_setting(c, "window-min", "0.5");
  apply_setting(c, "eps", "-");
  EXPECT_EQ(c.window_max, 20.0);
  EXPECT_EQ(c.window_min, 0.5);
  EXPECT_EQ(c.eps, "-");
  EXPECT_THROW(apply_setting(c, "colour", "red"), ConfigInvalid);
  EXPECT_THROW(apply_setting(c, "seed", "12abc"), ConfigInvalid);
}

TEST(Config, LoadFile) {
  const fs::path path = fs::temp_directory_path() / "upq_test_config.txt";
  std::ofstream(path) << "suite = group\np = 2\nq = 3\nsamples = 100\n";
  const auto c = load_config(path.string());
  EXPECT_EQ(c.suite, "group");
  EXPECT_EQ(c.p, 2);
  EXPECT_EQ(c.samples, 100);
  EXPECT_EQ(c.seed, 42u);
  fs::remove(path);
  EXPECT_THROW(load_config("/nonexistent/upq.cfg"), ConfigInvalid);
}

TEST(Suites, NamesAndUnknown) {
  EXPECT_EQ(suite_names(), (std::vector<std::string>{"group", "iwasawa", "bargmann", "special", "extension", "qp", "currents"}));
  EXPECT_THROW(run_suite("nope", RunConfig{}), ConfigInvalid);
}

TEST(Suites, GroupSuitePassesAndIsDeterministic) {
  RunConfig c;
  const auto a = run_suite("group", c), b = run_suite("group", c);
  ASSERT_FALSE(a.rows.empty());
  EXPECT_TRUE(a.all_pass());
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
  for (const auto& r : a.rows) {
    EXPECT_EQ(r.suite, "group");
    EXPECT_FALSE(r.anchor.empty());
  }
}

TEST(Suites, WriteReportProducesFiles) {
  RunConfig c;
  c.out_dir = (fs::temp_directory_path() / "upq_test_report").string();
  fs::remove_all(c.out_dir);
  const auto rep = run_suite("iwasawa", c);
  write_report(rep, c.out_dir);
  EXPECT_TRUE(fs::exists(fs::path(c.out_dir) / "report.json"));
  EXPECT_TRUE(fs::exists(fs::path(c.out_dir) / "report.csv"));
  std::ifstream in(fs::path(c.out_dir) / "report.json");
  const auto back = report_from_json(Json::parse(in));
  EXPECT_EQ(back.rows.size(), rep.rows.size());
  fs::remove_all(c.out_dir);
}
