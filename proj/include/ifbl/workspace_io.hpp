#pragma once

// File formats and the in-memory workspace.
//
// Market and view files are JSON documents with the field names below.
//   market:        { assets, sigma: [[..]] | {csv: path}, weights, risk_aversion, tau }
//   crisp views:   { P, omega, zeta2 }
//   ifs views:     { P, views: [ { mu_knots: [a,b,c,d], co_knots: [e,f,g,h] } ] }
//   solver config: { box: { lower, upper }, levels, grid_resolution }
// Posterior surfaces are exported as CSV with 12 significant digits.

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ifbl/blm.hpp"
#include "ifbl/fuzzy_system.hpp"
#include "ifbl/posterior.hpp"
#include "json.hpp"

namespace ifbl {

using Json = nlohmann::json;

struct SolverConfig {
  std::optional<SolutionBox> box;  // default [-1, 1]^n
  int levels = kDefaultLevels;
  std::size_t grid_resolution = kDefaultGridResolution;

  SolutionBox box_for(Eigen::Index n) const;
};

using ViewSet = std::variant<CrispViewSet, IfsViewSet>;

/// Parses JSON text; syntax errors carry "<source>:<line>:<column>".
Json parse_json(const std::string& text, const std::string& source);

MarketModel market_from_json(const Json& doc, const std::filesystem::path& base_dir = {});
ViewSet views_from_json(const Json& doc);
IfsViewSet ifs_views_from_json(const Json& doc);
CrispViewSet crisp_views_from_json(const Json& doc);
SolverConfig config_from_json(const Json& doc);

Json to_json(const MarketModel& market);
Json to_json(const CrispViewSet& views);
Json to_json(const IfsViewSet& views);
Json to_json(const SolverConfig& config);

MarketModel load_market(const std::filesystem::path& path);
ViewSet load_views(const std::filesystem::path& path);
SolverConfig load_config(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const Json& doc);

/// Covariance CSV: one row per line, comma separated.
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

/// "%.12g" and the double it denotes.
std::string format12(double value);
double round12(double value);

struct SurfaceTable {
  std::vector<double> x, mu, nu, hesitation;
};

struct ExportedFiles {
  std::vector<std::filesystem::path> surfaces;
  std::filesystem::path summary;
};

/// One CSV per asset (x, mu, nu, hesitation) plus summary.csv with
/// (asset, d, e, k). Rows ascend in x. The hesitation column is computed
/// from the printed mu and nu so the file is self-consistent.
ExportedFiles export_surfaces(const PosteriorResult& result, const std::filesystem::path& dir);
SurfaceTable read_surface_csv(const std::filesystem::path& path);

/// One market, one view set of each kind, a solver config and the latest
/// posterior. Every setter rejects inputs whose asset count disagrees with
/// what is already loaded.
class Workspace {
 public:
  void set_market(MarketModel market);
  void set_crisp_views(CrispViewSet views);
  void set_ifs_views(IfsViewSet views);
  void set_config(SolverConfig config);
  void set_last_result(std::shared_ptr<const PosteriorResult> result) { last_result_ = std::move(result); }

  const std::optional<MarketModel>& market() const { return market_; }
  const std::optional<CrispViewSet>& crisp_views() const { return crisp_views_; }
  const std::optional<IfsViewSet>& ifs_views() const { return ifs_views_; }
  const SolverConfig& config() const { return config_; }
  const std::shared_ptr<const PosteriorResult>& last_result() const { return last_result_; }

 private:
  std::optional<MarketModel> market_;
  std::optional<CrispViewSet> crisp_views_;
  std::optional<IfsViewSet> ifs_views_;
  SolverConfig config_;
  std::shared_ptr<const PosteriorResult> last_result_;
};

}  // namespace ifbl
