#include "ifbl/service.hpp"

#include <atomic>
#include <mutex>
#include <shared_mutex>

#include "httplib.h"
#include "ifbl/error.hpp"

namespace ifbl {

int http_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InputShape:
    case ErrorKind::Validation:
    case ErrorKind::Parse:
    case ErrorKind::Conditioning:
      return 422;
    case ErrorKind::Infeasible:
    case ErrorKind::Incomplete:
      return 409;
    case ErrorKind::NotFound:
      return 404;
    case ErrorKind::SolverFailure:
    case ErrorKind::Io:
      return 500;
  }
  return 500;
}

Json api_error_json(const Error& error) {
  Json body{{"code", error.code()}, {"message", error.message()}};
  body["field_path"] = error.field_path().empty() ? Json(nullptr) : Json(error.field_path());
  if (const auto* infeasible = dynamic_cast<const InfeasibleViewsError*>(&error)) {
    body["level"] = infeasible->level();
  }
  return body;
}

void round_numbers(Json& doc) {
  if (doc.is_number_float()) {
    doc = round12(doc.get<double>());
  } else if (doc.is_structured()) {
    for (auto& child : doc) round_numbers(child);
  }
}

namespace {

Json vector_payload(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json matrix_payload(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

Json measures_payload(const MeasureTriple& m) {
  return Json{{"d", m.energy}, {"e", m.entropy}, {"k", m.ignorance}};
}

[[noreturn]] void incomplete(const std::string& what) {
  throw Error(ErrorKind::Incomplete, codes::kIncomplete, what + " is not loaded", what);
}

}  // namespace

struct ViewService::Impl {
  httplib::Server server;
  mutable std::shared_mutex mutex;
  Workspace workspace;
  std::uint64_t revision = 0;  // bumped by every mutation

  Impl() { install_routes(); }

  static void reply(httplib::Response& res, int status, Json body) {
    round_numbers(body);
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  template <typename Handler>
  static auto guarded(Handler handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
      try {
        reply(res, 200, handler(req));
      } catch (const Error& e) {
        reply(res, http_status(e.kind()), api_error_json(e));
      } catch (const std::exception& e) {
        reply(res, 500, Json{{"code", codes::kSolverFailure}, {"message", e.what()},
                             {"field_path", nullptr}});
      }
    };
  }

  static Json body_json(const httplib::Request& req) { return parse_json(req.body, "request body"); }

  void install_routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, PUT, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
    });

    server.Get("/api/health", guarded([](const httplib::Request&) {
                 return Json{{"status", "ok"}, {"version", kVersion}};
               }));

    server.Put("/api/market", guarded([this](const httplib::Request& req) {
                 auto market = market_from_json(body_json(req));
                 std::unique_lock lock(mutex);
                 workspace.set_market(market);
                 ++revision;
                 return to_json(market);
               }));

    server.Put("/api/views/ifs", guarded([this](const httplib::Request& req) {
                 auto views = ifs_views_from_json(body_json(req));
                 std::unique_lock lock(mutex);
                 workspace.set_ifs_views(views);
                 ++revision;
                 return to_json(views);
               }));

    server.Put("/api/config", guarded([this](const httplib::Request& req) {
                 auto config = config_from_json(body_json(req));
                 std::unique_lock lock(mutex);
                 workspace.set_config(config);
                 ++revision;
                 return to_json(config);
               }));

    server.Get("/api/prior", guarded([this](const httplib::Request&) {
                 MarketModel market;
                 {
                   std::shared_lock lock(mutex);
                   if (!workspace.market()) incomplete("market");
                   market = *workspace.market();
                 }
                 const auto prior = reverse_optimize(market);
                 return Json{{"assets", market.asset_names},
                             {"implied_returns", vector_payload(prior.mean)}};
               }));

    server.Post("/api/posterior/ifs", guarded([this](const httplib::Request&) {
                  MarketModel market;
                  IfsViewSet views;
                  SolverConfig config;
                  std::uint64_t seen = 0;
                  {
                    std::shared_lock lock(mutex);
                    if (!workspace.market()) incomplete("market");
                    if (!workspace.ifs_views()) incomplete("views");
                    market = *workspace.market();
                    views = *workspace.ifs_views();
                    config = workspace.config();
                    seen = revision;
                  }
                  auto result = std::make_shared<const PosteriorResult>(
                      build_posterior(market, views, config.box_for(market.size()),
                                      config.levels, config.grid_resolution));
                  {
                    std::unique_lock lock(mutex);
                    if (revision == seen) workspace.set_last_result(result);
                  }
                  Json measures = Json::array();
                  for (std::size_t i = 0; i < result->measures.size(); ++i) {
                    auto m = measures_payload(result->measures[i]);
                    m["asset"] = result->assets[i];
                    measures.push_back(std::move(m));
                  }
                  return Json{{"assets", result->assets},
                              {"family",
                               {{"rank", result->family.rank},
                                {"null_dimension", result->family.null_dimension}}},
                              {"measures", std::move(measures)},
                              {"box_warning", result->level_report.box_warning}};
                }));

    server.Get(R"(/api/posterior/ifs/asset/(\d+))", guarded([this](const httplib::Request& req) {
                 std::shared_ptr<const PosteriorResult> result;
                 {
                   std::shared_lock lock(mutex);
                   result = workspace.last_result();
                 }
                 if (!result) incomplete("posterior");
                 const auto index = std::stoull(req.matches[1].str());
                 if (index >= result->surfaces.size()) {
                   throw Error(ErrorKind::NotFound, codes::kNotFound,
                               "no asset with index " + req.matches[1].str(), "asset");
                 }
                 const auto& s = result->surfaces[index];
                 std::vector<double> hes(s.size());
                 for (std::size_t g = 0; g < s.size(); ++g) hes[g] = 1.0 - s.mu()[g] - s.nu()[g];
                 return Json{{"asset", result->assets[index]},
                             {"grid", s.grid()},
                             {"mu", s.mu()},
                             {"nu", s.nu()},
                             {"hesitation", hes},
                             {"measures", measures_payload(result->measures[index])}};
               }));

    server.Get("/api/posterior/classic", guarded([this](const httplib::Request&) {
                 MarketModel market;
                 IfsViewSet views;
                 {
                   std::shared_lock lock(mutex);
                   if (!workspace.market()) incomplete("market");
                   if (!workspace.ifs_views()) incomplete("views");
                   market = *workspace.market();
                   views = *workspace.ifs_views();
                 }
                 const auto posterior = classic_comparison(market, views);
                 const auto weights = optimal_weights(posterior, market.risk_aversion);
                 return Json{{"assets", market.asset_names},
                             {"mean", vector_payload(posterior.mean)},
                             {"covariance", matrix_payload(posterior.covariance)},
                             {"weights", vector_payload(weights)}};
               }));
  }
};

ViewService::ViewService() : impl_(std::make_unique<Impl>()) {}
ViewService::~ViewService() { stop(); }

void ViewService::mount_static(const std::filesystem::path& dir) {
  impl_->server.set_mount_point("/", dir.string());
}

int ViewService::bind_any_port(const std::string& host) {
  return impl_->server.bind_to_any_port(host);
}

bool ViewService::bind(const std::string& host, int port) {
  return impl_->server.bind_to_port(host, port);
}

bool ViewService::listen_after_bind() { return impl_->server.listen_after_bind(); }

bool ViewService::listen(const std::string& host, int port) {
  return impl_->server.listen(host, port);
}

void ViewService::stop() {
  if (impl_) impl_->server.stop();
}

bool ViewService::is_running() const { return impl_->server.is_running(); }

}  // namespace ifbl
