#include "ifbl/workspace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ifbl/error.hpp"

namespace ifbl {
namespace fs = std::filesystem;

namespace {

std::string idx(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

[[noreturn]] void type_error(const std::string& path, const std::string& expected) {
  throw Error(ErrorKind::Parse, codes::kParse, "expected " + expected, path);
}

const Json& require_field(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) type_error(path.empty() ? "<root>" : path, "an object");
  auto it = obj.find(key);
  const std::string child = path.empty() ? key : path + "." + key;
  if (it == obj.end()) {
    throw Error(ErrorKind::Validation, codes::kParameter, "required field is missing", child);
  }
  return *it;
}

std::string child_path(const std::string& path, const char* key) {
  return path.empty() ? key : path + "." + key;
}

double as_number(const Json& v, const std::string& path) {
  if (!v.is_number()) type_error(path, "a number");
  return v.get<double>();
}

std::vector<double> as_vector(const Json& v, const std::string& path) {
  if (!v.is_array()) type_error(path, "an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], idx(path, i)));
  return out;
}

Eigen::VectorXd as_eigen_vector(const Json& v, const std::string& path) {
  auto values = as_vector(v, path);
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Eigen::MatrixXd as_matrix(const Json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) type_error(path, "a non-empty array of rows");
  const std::size_t rows = v.size();
  std::size_t cols = 0;
  Eigen::MatrixXd m;
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = as_vector(v[r], idx(path, r));
    if (r == 0) {
      cols = row.size();
      if (cols == 0) type_error(idx(path, 0), "a non-empty row");
      m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    } else if (row.size() != cols) {
      throw Error(ErrorKind::InputShape, codes::kShape,
                  "row has " + std::to_string(row.size()) + " entries, expected " +
                      std::to_string(cols),
                  idx(path, r));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
    }
  }
  return m;
}

int as_int(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) type_error(path, "an integer");
  return v.get<int>();
}

Json vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::Io, codes::kIo, "cannot open file for reading", path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Re-raises with the file name attached so CLI users know where to look.
template <typename F>
auto with_source(const fs::path& path, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    throw Error(e.kind(), e.code(), e.message() + " (in " + path.string() + ")", e.field_path());
  }
}

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_';
    out.push_back(ok ? c : '_');
  }
  return out;
}

double parse_double(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    while (used < text.size() && (text[used] == ' ' || text[used] == '\r')) ++used;
    if (used != text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, codes::kParse, "not a number: '" + text + "'", where);
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
  }
  return cells;
}

}  // namespace

SolutionBox SolverConfig::box_for(Eigen::Index n) const {
  if (box) return *box;
  return SolutionBox::uniform(n, -1.0, 1.0);
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorKind::Parse, codes::kParse,
                "syntax error at line " + std::to_string(line) + ", column " +
                    std::to_string(column),
                source + ":" + std::to_string(line) + ":" + std::to_string(column));
  }
}

MarketModel market_from_json(const Json& doc, const fs::path& base_dir) {
  MarketModel market;
  const auto& assets = require_field(doc, "assets", "");
  if (!assets.is_array()) type_error("assets", "an array of strings");
  for (std::size_t i = 0; i < assets.size(); ++i) {
    if (!assets[i].is_string()) type_error(idx("assets", i), "a string");
    market.asset_names.push_back(assets[i].get<std::string>());
  }
  const auto& sigma = require_field(doc, "sigma", "");
  if (sigma.is_object()) {
    const auto& csv = require_field(sigma, "csv", "sigma");
    if (!csv.is_string()) type_error("sigma.csv", "a path string");
    fs::path p = csv.get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    market.sigma = read_matrix_csv(p);
  } else {
    market.sigma = as_matrix(sigma, "sigma");
  }
  market.weights = as_eigen_vector(require_field(doc, "weights", ""), "weights");
  market.risk_aversion = as_number(require_field(doc, "risk_aversion", ""), "risk_aversion");
  market.tau = as_number(require_field(doc, "tau", ""), "tau");
  validate(market);
  return market;
}

CrispViewSet crisp_views_from_json(const Json& doc) {
  CrispViewSet views;
  views.pick_matrix = as_matrix(require_field(doc, "P", ""), "P");
  views.means = as_eigen_vector(require_field(doc, "omega", ""), "omega");
  views.variances = as_eigen_vector(require_field(doc, "zeta2", ""), "zeta2");
  validate(views, views.pick_matrix.cols());
  return views;
}

IfsViewSet ifs_views_from_json(const Json& doc) {
  IfsViewSet views;
  views.pick_matrix = as_matrix(require_field(doc, "P", ""), "P");
  const auto& list = require_field(doc, "views", "");
  if (!list.is_array()) type_error("views", "an array of view objects");
  for (std::size_t j = 0; j < list.size(); ++j) {
    const std::string base = idx("views", j);
    auto mu = as_vector(require_field(list[j], "mu_knots", base), child_path(base, "mu_knots"));
    auto co = as_vector(require_field(list[j], "co_knots", base), child_path(base, "co_knots"));
    if (mu.size() != 4) {
      throw Error(ErrorKind::InputShape, codes::kShape, "exactly four knots are required",
                  child_path(base, "mu_knots"));
    }
    if (co.size() != 4) {
      throw Error(ErrorKind::InputShape, codes::kShape, "exactly four knots are required",
                  child_path(base, "co_knots"));
    }
    try {
      views.views.push_back(make_trapezoidal({mu[0], mu[1], mu[2], mu[3]}, {co[0], co[1], co[2], co[3]}));
    } catch (const Error& e) {
      throw Error(e.kind(), e.code(), e.message(), base + "." + e.field_path());
    }
  }
  validate(views, views.pick_matrix.cols());
  return views;
}

ViewSet views_from_json(const Json& doc) {
  if (doc.is_object() && doc.contains("views")) return ifs_views_from_json(doc);
  if (doc.is_object() && doc.contains("omega")) return crisp_views_from_json(doc);
  throw Error(ErrorKind::Validation, codes::kViews,
              "neither an ifs view set (\"views\") nor a crisp view set (\"omega\")", "<root>");
}

SolverConfig config_from_json(const Json& doc) {
  if (!doc.is_object()) type_error("<root>", "an object");
  SolverConfig config;
  if (auto it = doc.find("box"); it != doc.end()) {
    SolutionBox box{as_eigen_vector(require_field(*it, "lower", "box"), "box.lower"),
                    as_eigen_vector(require_field(*it, "upper", "box"), "box.upper")};
    validate(box, box.lower.size());
    config.box = std::move(box);
  }
  if (auto it = doc.find("levels"); it != doc.end()) {
    config.levels = as_int(*it, "levels");
    if (config.levels < 2) {
      throw Error(ErrorKind::Validation, codes::kConfig, "levels must be >= 2", "levels");
    }
  }
  if (auto it = doc.find("grid_resolution"); it != doc.end()) {
    const int res = as_int(*it, "grid_resolution");
    if (res < 2) {
      throw Error(ErrorKind::Validation, codes::kConfig, "grid_resolution must be >= 2",
                  "grid_resolution");
    }
    config.grid_resolution = static_cast<std::size_t>(res);
  }
  return config;
}

Json to_json(const MarketModel& market) {
  return Json{{"assets", market.asset_names},
              {"sigma", matrix_json(market.sigma)},
              {"weights", vector_json(market.weights)},
              {"risk_aversion", market.risk_aversion},
              {"tau", market.tau}};
}

Json to_json(const CrispViewSet& views) {
  return Json{{"P", matrix_json(views.pick_matrix)},
              {"omega", vector_json(views.means)},
              {"zeta2", vector_json(views.variances)}};
}

Json to_json(const IfsViewSet& views) {
  Json list = Json::array();
  for (const auto& v : views.views) {
    list.push_back(Json{{"mu_knots", v.mu_knots()}, {"co_knots", v.co_knots()}});
  }
  return Json{{"P", matrix_json(views.pick_matrix)}, {"views", std::move(list)}};
}

Json to_json(const SolverConfig& config) {
  Json doc{{"levels", config.levels}, {"grid_resolution", config.grid_resolution}};
  if (config.box) {
    doc["box"] = Json{{"lower", vector_json(config.box->lower)},
                      {"upper", vector_json(config.box->upper)}};
  }
  return doc;
}

MarketModel load_market(const fs::path& path) {
  const auto text = read_file(path);
  return with_source(path, [&] {
    return market_from_json(parse_json(text, path.string()), path.parent_path());
  });
}

ViewSet load_views(const fs::path& path) {
  const auto text = read_file(path);
  return with_source(path, [&] { return views_from_json(parse_json(text, path.string())); });
}

SolverConfig load_config(const fs::path& path) {
  const auto text = read_file(path);
  return with_source(path, [&] { return config_from_json(parse_json(text, path.string())); });
}

void save_json(const fs::path& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, codes::kIo, "cannot open file for writing", path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::Io, codes::kIo, "write failed", path.string());
}

Eigen::MatrixXd read_matrix_csv(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    const auto cells = split_csv(line);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      row.push_back(parse_double(cells[c], path.string() + ":" + std::to_string(line_no) +
                                               " column " + std::to_string(c + 1)));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::InputShape, codes::kShape, "ragged row",
                  path.string() + ":" + std::to_string(line_no));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::Parse, codes::kParse, "empty matrix", path.string());
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

std::string format12(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

double round12(double value) { return std::strtod(format12(value).c_str(), nullptr); }

ExportedFiles export_surfaces(const PosteriorResult& result, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, codes::kIo, "cannot create directory: " + ec.message(), dir.string());

  auto open = [](const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw Error(ErrorKind::Io, codes::kIo, "cannot open file for writing", p.string());
    return out;
  };

  ExportedFiles files;
  for (std::size_t i = 0; i < result.surfaces.size(); ++i) {
    const auto& s = result.surfaces[i];
    const auto p = dir / ("surface_" + std::to_string(i) + "_" + sanitize(result.assets[i]) + ".csv");
    auto out = open(p);
    out << "x,mu,nu,hesitation\n";
    for (std::size_t g = 0; g < s.size(); ++g) {
      const auto mu = format12(s.mu()[g]);
      const auto nu = format12(s.nu()[g]);
      const double h = std::max(0.0, 1.0 - std::strtod(mu.c_str(), nullptr) -
                                         std::strtod(nu.c_str(), nullptr));
      out << format12(s.grid()[g]) << ',' << mu << ',' << nu << ',' << format12(h) << '\n';
    }
    if (!out) throw Error(ErrorKind::Io, codes::kIo, "write failed", p.string());
    files.surfaces.push_back(p);
  }
  files.summary = dir / "summary.csv";
  auto out = open(files.summary);
  out << "asset,d,e,k\n";
  for (std::size_t i = 0; i < result.measures.size(); ++i) {
    const auto& m = result.measures[i];
    out << result.assets[i] << ',' << format12(m.energy) << ',' << format12(m.entropy) << ','
        << format12(m.ignorance) << '\n';
  }
  if (!out) throw Error(ErrorKind::Io, codes::kIo, "write failed", files.summary.string());
  return files;
}

SurfaceTable read_surface_csv(const fs::path& path) {
  std::istringstream in(read_file(path));
  SurfaceTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv(line);
    const auto where = path.string() + ":" + std::to_string(line_no);
    if (cells.size() != 4) throw Error(ErrorKind::Parse, codes::kParse, "expected 4 columns", where);
    table.x.push_back(parse_double(cells[0], where));
    table.mu.push_back(parse_double(cells[1], where));
    table.nu.push_back(parse_double(cells[2], where));
    table.hesitation.push_back(parse_double(cells[3], where));
  }
  return table;
}

namespace {
void require_count(std::optional<Eigen::Index> expected, Eigen::Index got, const char* what) {
  if (expected && *expected != got) {
    throw Error(ErrorKind::InputShape, codes::kShape,
                std::string(what) + " describes " + std::to_string(got) +
                    " assets but the workspace has " + std::to_string(*expected),
                what);
  }
}
}  // namespace

void Workspace::set_market(MarketModel market) {
  validate(market);
  // The market may be replaced by one of a different size only when nothing
  // else is loaded yet.
  std::optional<Eigen::Index> others;
  if (ifs_views_) others = ifs_views_->pick_matrix.cols();
  else if (crisp_views_) others = crisp_views_->pick_matrix.cols();
  else if (config_.box) others = config_.box->size();
  require_count(others, market.size(), "market");
  market_ = std::move(market);
  last_result_.reset();
}

void Workspace::set_crisp_views(CrispViewSet views) {
  validate(views, views.pick_matrix.cols());
  std::optional<Eigen::Index> expected = market_ ? std::optional(market_->size()) : std::nullopt;
  if (!expected && ifs_views_) expected = ifs_views_->pick_matrix.cols();
  require_count(expected, views.pick_matrix.cols(), "P");
  crisp_views_ = std::move(views);
  last_result_.reset();
}

void Workspace::set_ifs_views(IfsViewSet views) {
  validate(views, views.pick_matrix.cols());
  std::optional<Eigen::Index> expected = market_ ? std::optional(market_->size()) : std::nullopt;
  if (!expected && crisp_views_) expected = crisp_views_->pick_matrix.cols();
  require_count(expected, views.pick_matrix.cols(), "P");
  ifs_views_ = std::move(views);
  last_result_.reset();
}

void Workspace::set_config(SolverConfig config) {
  if (config.levels < 2) {
    throw Error(ErrorKind::Validation, codes::kConfig, "levels must be >= 2", "levels");
  }
  if (config.grid_resolution < 2) {
    throw Error(ErrorKind::Validation, codes::kConfig, "grid_resolution must be >= 2",
                "grid_resolution");
  }
  if (config.box) {
    validate(*config.box, config.box->size());
    std::optional<Eigen::Index> expected;
    if (market_) expected = market_->size();
    else if (ifs_views_) expected = ifs_views_->pick_matrix.cols();
    require_count(expected, config.box->size(), "box");
  }
  config_ = std::move(config);
  last_result_.reset();
}

}  // namespace ifbl
