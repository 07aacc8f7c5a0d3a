#include <gtest/gtest.h>

#include "ifbl/error.hpp"
#include "service_harness.hpp"
#include "test_support.hpp"

using namespace ifbl;

namespace {

const char* kMarket = R"({"assets": ["eq", "bond"], "sigma": [[0.04, 0.01], [0.01, 0.09]],
                          "weights": [0.6, 0.4], "risk_aversion": 2.5, "tau": 0.05})";
const char* kViews = R"({"P": [[1, 0], [0, 1]], "views": [
    {"mu_knots": [0.0, 0.02, 0.03, 0.06], "co_knots": [-0.01, 0.01, 0.04, 0.08]},
    {"mu_knots": [-0.02, 0.0, 0.0, 0.01], "co_knots": [-0.03, -0.01, 0.01, 0.02]}]})";
const char* kConfig = R"({"box": {"lower": [-0.5, -0.5], "upper": [0.5, 0.5]},
                          "levels": 101, "grid_resolution": 401})";

Json body(const httplib::Result& res) { return Json::parse(res->body); }

class ServiceTest : public ::testing::Test {
 protected:
  testkit::RunningService server;
  httplib::Client client = server.client();

  httplib::Result put(const std::string& path, const std::string& text) {
    return client.Put(path, text, "application/json");
  }
  httplib::Result post(const std::string& path) { return client.Post(path, "", "application/json"); }
};

}  // namespace

TEST_F(ServiceTest, Health) {
  auto res = client.Get("/api/health");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(body(res)["status"], "ok");
  EXPECT_EQ(body(res)["version"], kVersion);
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
}

TEST_F(ServiceTest, NonSpdMarketIs422) {
  auto doc = Json::parse(kMarket);
  doc["sigma"] = Json::parse("[[1, 2], [2, 1]]");
  auto res = put("/api/market", doc.dump());
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 422);
  EXPECT_EQ(body(res)["code"], "validation.sigma.not_spd");
  EXPECT_EQ(body(res)["field_path"], "sigma");
}

TEST_F(ServiceTest, MalformedBodyIs422) {
  auto res = put("/api/market", "{not json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 422);
  EXPECT_EQ(body(res)["code"], codes::kParse);
}

TEST_F(ServiceTest, MissingInputsAre409) {
  auto res = post("/api/posterior/ifs");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 409);
  EXPECT_EQ(body(res)["code"], "workspace.incomplete");
  res = client.Get("/api/posterior/ifs/asset/0");
  EXPECT_EQ(res->status, 409);
  res = client.Get("/api/prior");
  EXPECT_EQ(res->status, 409);
}

TEST_F(ServiceTest, HappyPathReproducesIdentityViews) {
  ASSERT_EQ(put("/api/market", kMarket)->status, 200);
  ASSERT_EQ(put("/api/views/ifs", kViews)->status, 200);
  ASSERT_EQ(put("/api/config", kConfig)->status, 200);

  auto prior = client.Get("/api/prior");
  ASSERT_EQ(prior->status, 200);
  EXPECT_NEAR(body(prior)["implied_returns"][0].get<double>(), 0.07, 1e-12);

  auto res = post("/api/posterior/ifs");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200) << res->body;
  const auto summary = body(res);
  EXPECT_EQ(summary["family"]["rank"], 2);
  EXPECT_EQ(summary["family"]["null_dimension"], 0);
  EXPECT_EQ(summary["measures"].size(), 2u);

  const auto views = ifs_views_from_json(Json::parse(kViews));
  for (int i = 0; i < 2; ++i) {
    auto a = client.Get("/api/posterior/ifs/asset/" + std::to_string(i));
    ASSERT_EQ(a->status, 200);
    const auto doc = body(a);
    const auto grid = doc["grid"].get<std::vector<double>>();
    const auto mu = doc["mu"].get<std::vector<double>>();
    const auto nu = doc["nu"].get<std::vector<double>>();
    const auto hes = doc["hesitation"].get<std::vector<double>>();
    ASSERT_EQ(grid.size(), mu.size());
    const auto& v = views.views[static_cast<std::size_t>(i)];
    for (std::size_t g = 0; g < grid.size(); ++g) {
      // Payload numbers carry 12 significant digits.
      EXPECT_NEAR(mu[g], v.membership(grid[g]), 1e-9);
      EXPECT_NEAR(nu[g], v.nonmembership(grid[g]), 1e-9);
      EXPECT_NEAR(hes[g], 1.0 - mu[g] - nu[g], 1e-11);
    }
    EXPECT_TRUE(doc["measures"].contains("d"));
  }

  auto missing = client.Get("/api/posterior/ifs/asset/2");
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(body(missing)["code"], "not_found");

  auto classic = client.Get("/api/posterior/classic");
  ASSERT_EQ(classic->status, 200);
  const auto direct = classic_comparison(market_from_json(Json::parse(kMarket)), views);
  EXPECT_EQ(body(classic)["mean"][0].get<double>(), round12(direct.mean[0]));
}

TEST_F(ServiceTest, RepeatedRequestsAreIdempotent) {
  ASSERT_EQ(put("/api/market", kMarket)->status, 200);
  ASSERT_EQ(put("/api/config", kConfig)->status, 200);
  const auto v1 = put("/api/views/ifs", kViews)->body;
  const auto p1 = post("/api/posterior/ifs")->body;
  const auto a1 = client.Get("/api/posterior/ifs/asset/1")->body;
  const auto v2 = put("/api/views/ifs", kViews)->body;
  const auto p2 = post("/api/posterior/ifs")->body;
  const auto a2 = client.Get("/api/posterior/ifs/asset/1")->body;
  EXPECT_EQ(v1, v2);
  EXPECT_EQ(p1, p2);
  EXPECT_EQ(a1, a2);
}

TEST_F(ServiceTest, ContradictoryPointViewsAre409) {
  ASSERT_EQ(put("/api/market", kMarket)->status, 200);
  const char* contradictory = R"({"P": [[1, 0], [1, 0]], "views": [
      {"mu_knots": [0, 0, 0, 0], "co_knots": [0, 0, 0, 0]},
      {"mu_knots": [0.1, 0.1, 0.1, 0.1], "co_knots": [0.1, 0.1, 0.1, 0.1]}]})";
  ASSERT_EQ(put("/api/views/ifs", contradictory)->status, 200);
  auto res = post("/api/posterior/ifs");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 409);
  EXPECT_EQ(body(res)["code"], "views.infeasible");
  EXPECT_TRUE(body(res).contains("level"));
}

TEST_F(ServiceTest, ViewsForWrongAssetCountAre422) {
  ASSERT_EQ(put("/api/market", kMarket)->status, 200);
  auto res = put("/api/views/ifs", R"({"P": [[1, 0, 0]], "views": [
      {"mu_knots": [0, 1, 1, 2], "co_knots": [0, 1, 1, 2]}]})");
  EXPECT_EQ(res->status, 422);
  EXPECT_EQ(body(res)["code"], "validation.shape");
}

TEST_F(ServiceTest, PreflightAllowed) {
  auto res = client.Options("/api/market");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 204);
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
}

TEST(ServiceHelpers, StatusMapping) {
  EXPECT_EQ(http_status(ErrorKind::Validation), 422);
  EXPECT_EQ(http_status(ErrorKind::Infeasible), 409);
  EXPECT_EQ(http_status(ErrorKind::Incomplete), 409);
  EXPECT_EQ(http_status(ErrorKind::NotFound), 404);
  EXPECT_EQ(http_status(ErrorKind::SolverFailure), 500);
  Json doc{{"a", 1.0 / 3.0}, {"b", {2.0 / 3.0, 7}}};
  round_numbers(doc);
  EXPECT_EQ(doc["a"].get<double>(), 0.333333333333);
  EXPECT_EQ(doc["b"][0].get<double>(), 0.666666666667);
  EXPECT_EQ(doc["b"][1].get<int>(), 7);
}
