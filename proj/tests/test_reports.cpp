#include <gtest/gtest.h>

#include "sl2pc/reports.hpp"

using namespace sl2pc;

TEST(Config, DefaultsFileMatchesBuiltIn) {
  Config c = load_config(std::string(SL2PC_SOURCE_DIR) + "/config/default.json");
  EXPECT_EQ(c.to_json(), Config{}.to_json());
  EXPECT_EQ(c.hash(), Config{}.hash());
}

TEST(Config, OverridesAndValidation) {
  auto c = config_from_json(nlohmann::json::parse(R"({"seed": 7, "tolerances": {"flow_rk4": 1e-6}})"));
  EXPECT_EQ(c.seed, 7u);
  EXPECT_DOUBLE_EQ(c.tolerance("flow_rk4"), 1e-6);
  EXPECT_DOUBLE_EQ(c.tolerance("su2"), 1e-4);
  EXPECT_NE(c.hash(), Config{}.hash());
  Config t;
  t.threads = 8;
  EXPECT_EQ(t.hash(), Config{}.hash());

  for (const char* bad : {R"({"sedd": 1})", R"({"tolerances": {"nope": 1}})", R"({"samples": {"flow_points": 0}})",
                          R"({"threads": "two"})", R"({"degrees": {"max_degree": 12}})", R"([1, 2])"}) {
    try {
      config_from_json(nlohmann::json::parse(bad));
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::config_invalid) << bad;
    }
  }
  std::string path = ::testing::TempDir() + "/corrupt.json";
  std::ofstream(path) << "{\"seed\": 1,";
  try {
    load_config(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::config_invalid);
  }
}

TEST(Reports, CoreSuiteCensusAndDeterminism) {
  Config c;
  auto a = verify_suite("core", c);
  EXPECT_GE(a.records.size(), 12u);
  EXPECT_TRUE(a.ok());
  c.threads = 4;
  auto b = verify_suite("core", c);
  EXPECT_EQ(report_json_lines(a, false), report_json_lines(b, false));
  EXPECT_TRUE(std::is_sorted(a.records.begin(), a.records.end(), [](auto& x, auto& y) { return x.id < y.id; }));
  // every line parses, the last one is the summary
  std::istringstream in(report_json_lines(a, false));
  std::string line, last;
  int n = 0;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    EXPECT_FALSE(j.contains("runtime_ms"));
    last = line;
    ++n;
  }
  EXPECT_EQ(n, static_cast<int>(a.records.size()) + 1);
  EXPECT_TRUE(nlohmann::json::parse(last).at("summary").get<bool>());
}

TEST(Reports, SeedChangesSamples) {
  Config c;
  auto a = verify_suite("skeleton", c);
  c.seed = 99;
  auto b = verify_suite("skeleton", c);
  EXPECT_NE(a.config_hash, b.config_hash);
  EXPECT_NE(report_json_lines(a, false), report_json_lines(b, false));
}

TEST(Reports, TolScalePropagates) {
  Config c;
  c.tol_scale = 1e-3;
  auto defs = flow_checks();
  for (auto& id : {"flow.r2_closed_form", "flow.retract_radius", "flow.nilpotent_limit"}) {
    auto r = run_check(find_check(defs, id), c);
    auto base = run_check(find_check(defs, id), Config{});
    EXPECT_DOUBLE_EQ(r.tolerance, 1e-3 * base.tolerance) << id;
  }
}

TEST(Reports, FailuresAndExceptionsBecomeRecords) {
  Config c;
  std::vector<CheckDef> defs = {
      {"b.throws", "t", [](const Config&, Rng&) -> Outcome { throw Error(Errc::on_cone, "boom"); }},
      {"a.fails", "t", [](const Config&, Rng&) { return Outcome{2, 1}; }},
      {"c.nan", "t", [](const Config&, Rng&) { return Outcome{NAN, 1}; }},
      {"d.deviation", "t", [](const Config&, Rng&) { return Outcome{1, 0}; }, "documented"},
  };
  auto rep = run_checks("x", defs, c);
  ASSERT_EQ(rep.records.size(), 4u);
  EXPECT_EQ(rep.records[0].id, "a.fails");
  EXPECT_EQ(rep.records[0].status, Status::fail);
  EXPECT_EQ(rep.records[1].status, Status::fail);
  EXPECT_NE(rep.records[1].note.find("ON_CONE"), std::string::npos);
  EXPECT_EQ(rep.records[2].status, Status::fail);
  EXPECT_EQ(rep.records[3].status, Status::skip);
  EXPECT_EQ(run_check(defs[3], c, false).status, Status::fail);
  EXPECT_FALSE(rep.ok());
  EXPECT_NE(report_json_lines(rep, false).find("\"measured\":null"), std::string::npos);
}

TEST(Reports, KnownDeviationIsOnlyTheStatedBracket) {
  Config c;
  for (auto& s : suite_names())
    for (auto& d : suite_checks(s))
      if (!d.known_deviation.empty()) EXPECT_EQ(d.id, "norm_ring.y_bracket_as_stated");
  auto r = run_check(find_check(homotopy_checks(), "norm_ring.y_bracket_as_stated"), c, false);
  EXPECT_EQ(r.status, Status::fail);
  EXPECT_THROW(suite_checks("nope"), Error);
}

TEST(Cohomology, FilteredTable) {
  auto s = derive_structure_constants();
  auto odd = compare_betti(s, 3, {0, 1, 2, 3, 4, 5, 6}, 8, 1);
  EXPECT_TRUE(odd.equal);
  for (int k = 0; k <= 6; ++k) EXPECT_EQ(odd.slices[3].betti[k], 0);
  auto h2 = compare_betti(s, 4, {2}, 8, 1);
  EXPECT_TRUE(h2.equal);
  for (auto& sl : h2.slices) EXPECT_EQ(sl.betti[2], 0);
  auto h3 = compare_betti(s, 4, {3}, 8, 1);
  EXPECT_EQ(h3.slices[4].betti[3], 6);
  EXPECT_NE(betti_comparison_text(h3).find("H3"), std::string::npos);
  EXPECT_THROW(compare_betti(s, 9, {2}, 8, 1), Error);
}

TEST(FlowDemo, PresetsAndParsing) {
  auto nil = flow_table(parse_point("nilpotent"), {1});
  EXPECT_NEAR(nil[0].R2_t, 0.5, 1e-15);
  auto diag = flow_table(parse_point("diag"), {0, 1, 5});
  for (auto& r : diag) {
    EXPECT_EQ(r.R2_t, 2);
    EXPECT_LE(checks::dist(r.A_t, diag[0].A_t), 1e-15);
  }
  auto a = flow_table(parse_point("random:42"), {0.5}), b = flow_table(parse_point("random:42"), {0.5});
  EXPECT_EQ(a[0].A_t.coords(), b[0].A_t.coords());
  EXPECT_EQ(parse_point("1,0,0,0,0,0").coords()[0], 1);
  for (const char* bad : {"1,2,3", "1,2,3,4,5,6,7", "1,2,x,4,5,6", "random:", "random:4z", "circle"})
    EXPECT_THROW(parse_point(bad), Error) << bad;
  EXPECT_THROW(flow_table(parse_point("diag"), {-1}), Error);
}
