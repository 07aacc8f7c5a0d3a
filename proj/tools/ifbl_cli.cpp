// ifbl: command-line front end.
//
//   ifbl prior --market m.json
//   ifbl posterior classic --market m.json --views v.json
//   ifbl posterior ifs --market m.json --views v.json [--config c.json] [--out dir]
//   ifbl measures --views v.json --index i
//   ifbl serve --port p [--host h] [--static dir]
//
// Exit codes: 0 success, 2 validation error, 3 infeasible views, 4 I/O error.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ifbl/error.hpp"
#include "ifbl/posterior.hpp"
#include "ifbl/service.hpp"
#include "ifbl/simd/kernels.hpp"
#include "ifbl/workspace_io.hpp"

namespace {

enum ExitCode { kOk = 0, kValidation = 2, kInfeasible = 3, kIo = 4 };

int exit_code_for(ifbl::ErrorKind kind) {
  switch (kind) {
    case ifbl::ErrorKind::Infeasible:
      return kInfeasible;
    case ifbl::ErrorKind::Io:
      return kIo;
    default:
      return kValidation;
  }
}

const std::string& name_of(const ifbl::MarketModel& m, Eigen::Index i) {
  return m.asset_names[static_cast<std::size_t>(i)];
}

int run_prior(const std::string& market_path) {
  const auto market = ifbl::load_market(market_path);
  const auto prior = ifbl::reverse_optimize(market);
  std::cout << "asset,implied_excess_return\n";
  for (Eigen::Index i = 0; i < prior.mean.size(); ++i) {
    std::cout << name_of(market, i) << ',' << ifbl::format12(prior.mean[i]) << '\n';
  }
  return kOk;
}

int run_classic(const std::string& market_path, const std::string& views_path) {
  const auto market = ifbl::load_market(market_path);
  const auto views = ifbl::load_views(views_path);
  ifbl::PosteriorDistribution posterior;
  if (const auto* crisp = std::get_if<ifbl::CrispViewSet>(&views)) {
    posterior = ifbl::posterior_classic(ifbl::reverse_optimize(market), *crisp, market.tau);
  } else {
    std::cout << "# ifs views crispened: centroid mean, variance W^2/24\n";
    posterior = ifbl::classic_comparison(market, std::get<ifbl::IfsViewSet>(views));
  }
  const auto weights = ifbl::optimal_weights(posterior, market.risk_aversion);
  std::cout << "asset,posterior_mean,optimal_weight\n";
  for (Eigen::Index i = 0; i < posterior.mean.size(); ++i) {
    std::cout << name_of(market, i) << ',' << ifbl::format12(posterior.mean[i]) << ','
              << ifbl::format12(weights[i]) << '\n';
  }
  std::cout << "\nposterior covariance\n";
  for (Eigen::Index r = 0; r < posterior.covariance.rows(); ++r) {
    for (Eigen::Index c = 0; c < posterior.covariance.cols(); ++c) {
      std::cout << (c ? "," : "") << ifbl::format12(posterior.covariance(r, c));
    }
    std::cout << '\n';
  }
  return kOk;
}

int run_ifs(const std::string& market_path, const std::string& views_path,
            const std::string& config_path, const std::string& out_dir) {
  const auto market = ifbl::load_market(market_path);
  const auto loaded = ifbl::load_views(views_path);
  const auto* views = std::get_if<ifbl::IfsViewSet>(&loaded);
  if (!views) {
    throw ifbl::Error(ifbl::ErrorKind::Validation, ifbl::codes::kViews,
                      "posterior ifs needs an ifs view file (with \"views\")", views_path);
  }
  ifbl::SolverConfig config;
  if (!config_path.empty()) config = ifbl::load_config(config_path);
  const auto result = ifbl::build_posterior(market, *views, config.box_for(market.size()),
                                            config.levels, config.grid_resolution);

  std::cout << "rank " << result.family.rank << ", null dimension "
            << result.family.null_dimension << ", levels " << config.levels << ", grid "
            << config.grid_resolution << '\n';
  if (result.level_report.box_warning) {
    std::cout << "warning: some membership cuts are limited by the solution box\n";
  }
  std::cout << "asset,d,e,k\n";
  for (std::size_t i = 0; i < result.measures.size(); ++i) {
    const auto& m = result.measures[i];
    std::cout << result.assets[i] << ',' << ifbl::format12(m.energy) << ','
              << ifbl::format12(m.entropy) << ',' << ifbl::format12(m.ignorance) << '\n';
  }
  if (!out_dir.empty()) {
    const auto files = ifbl::export_surfaces(result, out_dir);
    std::cout << "wrote " << files.surfaces.size() << " surface files and "
              << files.summary.string() << '\n';
  }
  return kOk;
}

int run_measures(const std::string& views_path, std::size_t index) {
  const auto loaded = ifbl::load_views(views_path);
  const auto* views = std::get_if<ifbl::IfsViewSet>(&loaded);
  if (!views) {
    throw ifbl::Error(ifbl::ErrorKind::Validation, ifbl::codes::kViews,
                      "measures needs an ifs view file", views_path);
  }
  if (index >= views->views.size()) {
    throw ifbl::Error(ifbl::ErrorKind::Validation, ifbl::codes::kViews,
                      "view index " + std::to_string(index) + " out of range", "--index");
  }
  const auto m = ifbl::measures(ifbl::to_grid(views->views[index]));
  std::cout << "d,e,k\n"
            << ifbl::format12(m.energy) << ',' << ifbl::format12(m.entropy) << ','
            << ifbl::format12(m.ignorance) << '\n';
  return kOk;
}

int run_serve(const std::string& host, int port, const std::string& static_dir) {
  ifbl::ViewService service;
  if (!static_dir.empty()) service.mount_static(static_dir);
  if (!service.bind(host, port)) {
    throw ifbl::Error(ifbl::ErrorKind::Io, ifbl::codes::kIo,
                      "cannot bind " + host + ":" + std::to_string(port), "--port");
  }
  std::cerr << "ifbl " << ifbl::kVersion << " listening on http://" << host << ':' << port
            << " (kernels: " << ifbl::simd::backend_name(ifbl::simd::active_backend()) << ")\n";
  service.listen_after_bind();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Black-Litterman with intuitionistic fuzzy views"};
  app.require_subcommand(1);

  std::string market_path, views_path, config_path, out_dir, host = "127.0.0.1", static_dir;
  std::size_t index = 0;
  int port = 8080;

  auto* prior = app.add_subcommand("prior", "implied equilibrium excess returns");
  prior->add_option("--market", market_path, "market file")->required();

  auto* posterior = app.add_subcommand("posterior", "posterior returns");
  posterior->require_subcommand(1);
  auto* classic = posterior->add_subcommand("classic", "classical Black-Litterman posterior");
  classic->add_option("--market", market_path, "market file")->required();
  classic->add_option("--views", views_path, "crisp or ifs view file")->required();
  auto* ifs = posterior->add_subcommand("ifs", "intuitionistic fuzzy posterior");
  ifs->add_option("--market", market_path, "market file")->required();
  ifs->add_option("--views", views_path, "ifs view file")->required();
  ifs->add_option("--config", config_path, "solver config file");
  ifs->add_option("--out", out_dir, "directory for surface CSVs");

  auto* meas = app.add_subcommand("measures", "energy, entropy and ignorance of one view");
  meas->add_option("--views", views_path, "ifs view file")->required();
  meas->add_option("--index", index, "view index")->required();

  auto* serve = app.add_subcommand("serve", "start the HTTP service");
  serve->add_option("--port", port, "TCP port")->required();
  serve->add_option("--host", host, "bind address");
  serve->add_option("--static", static_dir, "directory served at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    if (*prior) return run_prior(market_path);
    if (*classic) return run_classic(market_path, views_path);
    if (*ifs) return run_ifs(market_path, views_path, config_path, out_dir);
    if (*meas) return run_measures(views_path, index);
    if (*serve) return run_serve(host, port, static_dir);
  } catch (const ifbl::Error& e) {
    std::cerr << "error [" << e.code() << "] " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}
