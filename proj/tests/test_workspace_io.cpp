#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "ifbl/error.hpp"
#include "ifbl/workspace_io.hpp"
#include "test_support.hpp"

using namespace ifbl;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("ifbl_test_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

const char* kMarket = R"({
  "assets": ["eq", "bond"],
  "sigma": [[0.04, 0.01], [0.01, 0.09]],
  "weights": [0.6, 0.399999999],
  "risk_aversion": 2.5,
  "tau": 0.05
})";

template <typename F>
Error capture(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "expected ifbl::Error";
  return Error(ErrorKind::Validation, "none", "none");
}

}  // namespace

TEST(LoadMarket, AcceptsWeightsWithinTolerance) {
  TempDir dir;
  write_file(dir.path() / "m.json", kMarket);
  const auto m = load_market(dir.path() / "m.json");
  EXPECT_EQ(m.asset_names, (std::vector<std::string>{"eq", "bond"}));
  EXPECT_EQ(m.sigma(1, 1), 0.09);
  EXPECT_EQ(m.tau, 0.05);
}

TEST(LoadMarket, RejectsAsymmetricSigmaWithFieldPath) {
  TempDir dir;
  auto doc = Json::parse(kMarket);
  doc["sigma"][0][1] = 0.0100001;
  save_json(dir.path() / "m.json", doc);
  const auto e = capture([&] { load_market(dir.path() / "m.json"); });
  EXPECT_EQ(e.code(), codes::kSigmaNotSymmetric);
  EXPECT_NE(std::string(e.what()).find("not symmetric"), std::string::npos);
  EXPECT_NE(std::string(e.what()).find("sigma[0][1]"), std::string::npos);
}

TEST(LoadMarket, RequiresScientificInputs) {
  for (const char* field : {"tau", "risk_aversion", "weights", "assets", "sigma"}) {
    auto doc = Json::parse(kMarket);
    doc.erase(field);
    const auto e = capture([&] { market_from_json(doc); });
    EXPECT_EQ(e.field_path(), field);
  }
}

TEST(LoadMarket, SigmaFromCsvRelativeToFile) {
  TempDir dir;
  write_file(dir.path() / "sigma.csv", "0.04,0.01\n0.01,0.09\n");
  auto doc = Json::parse(kMarket);
  doc["sigma"] = {{"csv", "sigma.csv"}};
  save_json(dir.path() / "m.json", doc);
  const auto m = load_market(dir.path() / "m.json");
  EXPECT_EQ(m.sigma(0, 1), 0.01);
  EXPECT_EQ(m.sigma.rows(), 2);

  doc["sigma"] = {{"csv", "missing.csv"}};
  save_json(dir.path() / "m.json", doc);
  EXPECT_EQ(capture([&] { load_market(dir.path() / "m.json"); }).kind(), ErrorKind::Io);
}

TEST(LoadMarket, ParseErrorReportsLine) {
  TempDir dir;
  write_file(dir.path() / "m.json", "{\n  \"assets\": [\"a\"],\n  \"tau\": ,\n}\n");
  const auto e = capture([&] { load_market(dir.path() / "m.json"); });
  EXPECT_EQ(e.kind(), ErrorKind::Parse);
  EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
}

TEST(LoadMarket, MissingFileIsIoError) {
  EXPECT_EQ(capture([&] { load_market("/nonexistent/ifbl/market.json"); }).kind(), ErrorKind::Io);
}

TEST(LoadViews, DominanceViolationNamed) {
  TempDir dir;
  write_file(dir.path() / "v.json", R"({"P": [[1, 0]], "views": [
      {"mu_knots": [0, 1, 1, 2], "co_knots": [-1, 1.5, 2, 3]}]})");
  const auto e = capture([&] { load_views(dir.path() / "v.json"); });
  EXPECT_NE(std::string(e.what()).find("nonmembership dominance violated"), std::string::npos);
  EXPECT_EQ(e.field_path(), "views[0].co_knots");
}

TEST(LoadViews, DispatchesOnSchema) {
  TempDir dir;
  write_file(dir.path() / "c.json", R"({"P": [[1, -1]], "omega": [0.02], "zeta2": [0.001]})");
  write_file(dir.path() / "i.json", R"({"P": [[1, -1]], "views": [
      {"mu_knots": [0, 0.01, 0.02, 0.03], "co_knots": [-0.01, 0.01, 0.02, 0.04]}]})");
  EXPECT_TRUE(std::holds_alternative<CrispViewSet>(load_views(dir.path() / "c.json")));
  EXPECT_TRUE(std::holds_alternative<IfsViewSet>(load_views(dir.path() / "i.json")));
  write_file(dir.path() / "x.json", R"({"P": [[1, -1]]})");
  EXPECT_THROW(load_views(dir.path() / "x.json"), Error);
}

TEST(Config, DefaultsAndValidation) {
  const auto c = config_from_json(Json::object());
  EXPECT_EQ(c.levels, 101);
  EXPECT_EQ(c.grid_resolution, 1001u);
  const auto box = c.box_for(3);
  EXPECT_EQ(box.lower, Eigen::VectorXd::Constant(3, -1.0));
  EXPECT_EQ(box.upper, Eigen::VectorXd::Constant(3, 1.0));
  EXPECT_EQ(capture([&] { config_from_json(Json{{"levels", 1}}); }).field_path(), "levels");
  EXPECT_THROW(config_from_json(Json{{"grid_resolution", 1}}), Error);
  EXPECT_THROW(config_from_json(Json::parse(R"({"box": {"lower": [1], "upper": [0]}})")), Error);
}

TEST(RoundTrip, EveryDomainObject) {
  TempDir dir;
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const auto n = 1 + trial % 4;
    const auto m = testkit::random_market(rng, n);
    save_json(dir.path() / "m.json", to_json(m));
    const auto m2 = load_market(dir.path() / "m.json");
    EXPECT_EQ(m2.asset_names, m.asset_names);
    EXPECT_EQ(m2.sigma, m.sigma);
    EXPECT_EQ(m2.weights, m.weights);
    EXPECT_EQ(m2.risk_aversion, m.risk_aversion);
    EXPECT_EQ(m2.tau, m.tau);

    CrispViewSet cv{Eigen::MatrixXd::Random(2, n), Eigen::VectorXd::Random(2),
                    Eigen::VectorXd::Constant(2, 0.003)};
    save_json(dir.path() / "c.json", to_json(cv));
    const auto cv2 = std::get<CrispViewSet>(load_views(dir.path() / "c.json"));
    EXPECT_EQ(cv2.pick_matrix, cv.pick_matrix);
    EXPECT_EQ(cv2.means, cv.means);
    EXPECT_EQ(cv2.variances, cv.variances);

    IfsViewSet iv{Eigen::MatrixXd::Random(2, n),
                  {testkit::random_ifn(rng, -1, 1, 0, 1, 1, 1),
                   testkit::random_ifn(rng, -1, 1, 0, 1, 1, 1)}};
    save_json(dir.path() / "i.json", to_json(iv));
    const auto iv2 = std::get<IfsViewSet>(load_views(dir.path() / "i.json"));
    EXPECT_EQ(iv2.pick_matrix, iv.pick_matrix);
    EXPECT_EQ(iv2.views, iv.views);

    SolverConfig sc{SolutionBox::uniform(n, -0.5 - trial, 0.25 + trial), 17 + trial, 33};
    save_json(dir.path() / "s.json", to_json(sc));
    const auto sc2 = load_config(dir.path() / "s.json");
    EXPECT_EQ(sc2.levels, sc.levels);
    EXPECT_EQ(sc2.grid_resolution, sc.grid_resolution);
    EXPECT_EQ(sc2.box->lower, sc.box->lower);
    EXPECT_EQ(sc2.box->upper, sc.box->upper);
  }
}

TEST(ExportSurfaces, FilesMatchResult) {
  TempDir dir;
  Eigen::Matrix3d s = Eigen::Matrix3d::Identity() * 0.04;
  MarketModel m{{"a", "b/c", "d e"}, s, Eigen::Vector3d(0.2, 0.3, 0.5), 3.0, 0.1};
  IfsViewSet vs{Eigen::MatrixXd(2, 3), {}};
  vs.pick_matrix << 1, 0, -1, 0, 1, 0;
  vs.views = {make_trapezoidal({0.0, 0.01, 0.02, 0.05}, {-0.02, 0.0, 0.03, 0.08}),
              make_trapezoidal({0.02, 0.03, 0.03, 0.04}, {0.01, 0.03, 0.03, 0.06})};
  const auto r = build_posterior(m, vs, SolutionBox::uniform(3, -0.3, 0.3), 41, 301);
  const auto files = export_surfaces(r, dir.path() / "out");
  ASSERT_EQ(files.surfaces.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    ASSERT_TRUE(fs::exists(files.surfaces[i]));
    const auto t = read_surface_csv(files.surfaces[i]);
    ASSERT_EQ(t.x.size(), r.surfaces[i].size());
    for (std::size_t g = 0; g < t.x.size(); ++g) {
      EXPECT_NEAR(t.mu[g], r.surfaces[i].mu()[g], 1e-12);
      EXPECT_NEAR(t.nu[g], r.surfaces[i].nu()[g], 1e-12);
      EXPECT_NEAR(t.hesitation[g], 1.0 - t.mu[g] - t.nu[g], 1e-12);
      if (g > 0) EXPECT_LT(t.x[g - 1], t.x[g]);
    }
  }
  std::ifstream summary(files.summary);
  std::string line;
  std::getline(summary, line);
  EXPECT_EQ(line, "asset,d,e,k");
  int rows = 0;
  while (std::getline(summary, line)) {
    if (!line.empty()) ++rows;
  }
  EXPECT_EQ(rows, 3);
}

TEST(ExportSurfaces, UnwritableDirectoryIsIoError) {
  TempDir dir;
  write_file(dir.path() / "blocker", "x");
  MarketModel m{{"a"}, Eigen::MatrixXd::Constant(1, 1, 0.04), Eigen::VectorXd::Ones(1), 2.0, 0.1};
  IfsViewSet vs{Eigen::MatrixXd::Ones(1, 1), {make_trapezoidal({0, 0.1, 0.1, 0.2}, {0, 0.1, 0.1, 0.2})}};
  const auto r = build_posterior(m, vs, SolutionBox::uniform(1, -1, 1), 11, 51);
  EXPECT_EQ(capture([&] { export_surfaces(r, dir.path() / "blocker" / "sub"); }).kind(),
            ErrorKind::Io);
}

TEST(Format, TwelveSignificantDigits) {
  EXPECT_EQ(format12(0.1 + 0.2), "0.3");
  EXPECT_EQ(format12(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(round12(1.0 / 3.0), 0.333333333333);
}

TEST(WorkspaceState, RejectsAssetCountMismatch) {
  Workspace ws;
  ws.set_market(market_from_json(Json::parse(kMarket)));
  CrispViewSet three{Eigen::MatrixXd::Ones(1, 3), Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)};
  EXPECT_EQ(capture([&] { ws.set_crisp_views(three); }).kind(), ErrorKind::InputShape);
  IfsViewSet ok{Eigen::RowVector2d(1, 0), {make_trapezoidal({0, 1, 1, 2}, {0, 1, 1, 2})}};
  ws.set_ifs_views(ok);
  ASSERT_TRUE(ws.ifs_views());
  SolverConfig bad;
  bad.box = SolutionBox::uniform(3, -1, 1);
  EXPECT_THROW(ws.set_config(bad), Error);
  MarketModel single{{"a"}, Eigen::MatrixXd::Constant(1, 1, 0.04), Eigen::VectorXd::Ones(1), 2.0, 0.1};
  EXPECT_THROW(ws.set_market(single), Error);
  EXPECT_EQ(ws.market()->size(), 2);
}
