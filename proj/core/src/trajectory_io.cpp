#include "scalred/trajectory_io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace scalred {

namespace {

void check_grid(const std::vector<double>& t, std::size_t expected) {
  if (t.size() < 2) throw DimensionError("trajectory needs at least two samples");
  if (t.size() != expected) throw DimensionError("trajectory sample arrays differ in length");
  const double h = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  if (!(h > 0.0)) throw DimensionError("trajectory grid must be strictly increasing");
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double d = t[i] - t[i - 1];
    if (!(d > 0.0) || std::abs(d - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw DimensionError("trajectory grid is not uniform");
    }
  }
}

void check_dims(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != a.front().size() || b[i].size() != a.front().size()) {
      throw DimensionError("trajectory samples differ in dimension");
    }
  }
}

double grid_step(const std::vector<double>& t) {
  if (t.size() < 2) throw DimensionError("trajectory needs at least two samples");
  return (t.back() - t.front()) / static_cast<double>(t.size() - 1);
}

void write_prologue(std::ostream& os, const Metadata& meta) {
  for (const auto& [k, v] : meta) os << "# " << k << '=' << v << '\n';
}

std::vector<std::vector<double>> read_rows(std::istream& is, Metadata* meta, std::size_t& columns) {
  std::string line;
  bool header_seen = false;
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (meta) {
        auto body = line.substr(1);
        while (!body.empty() && body.front() == ' ') body.erase(body.begin());
        const auto eq = body.find('=');
        if (eq != std::string::npos) meta->emplace_back(body.substr(0, eq), body.substr(eq + 1));
      }
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!header_seen) {
      header_seen = true;
      columns = cells.size();
      continue;
    }
    if (cells.size() != columns) throw SchemaError("CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                                                   std::to_string(columns));
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      try {
        row.push_back(std::stod(c));
      } catch (const std::exception&) {
        throw SchemaError("CSV cell is not a number: " + c);
      }
    }
    rows.push_back(std::move(row));
  }
  if (!header_seen) throw SchemaError("CSV has no header row");
  return rows;
}

std::string find_meta(const Metadata& meta, const std::string& key) {
  for (const auto& [k, v] : meta)
    if (k == key) return v;
  return {};
}

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

Vec from_std(const std::vector<double>& v) {
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

double Trajectory::step() const { return grid_step(times); }

void Trajectory::validate() const {
  check_grid(times, q.size());
  check_grid(times, qdot.size());
  check_dims(q, qdot);
}

double ReducedTrajectory::step() const { return grid_step(times); }

void ReducedTrajectory::validate() const {
  check_grid(times, x.size());
  check_grid(times, xdot.size());
  check_grid(times, y.size());
  check_dims(x, xdot);
}

std::vector<std::string> default_names(const std::string& prefix, std::size_t dim) {
  if (dim == 1) return {prefix};
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= dim; ++i) names.push_back(prefix + std::to_string(i));
  return names;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const Trajectory& g, const std::vector<std::string>& names, const Metadata& meta) {
  g.validate();
  const auto n = static_cast<std::size_t>(g.q.front().size());
  if (names.size() != n) throw DimensionError("column names do not match the configuration dimension");
  write_prologue(os, meta);
  os << 't';
  for (const auto& s : names) os << ',' << s;
  for (const auto& s : names) os << ',' << s << "dot";
  os << '\n';
  for (std::size_t i = 0; i < g.samples(); ++i) {
    os << format_number(g.times[i]);
    for (Eigen::Index j = 0; j < g.q[i].size(); ++j) os << ',' << format_number(g.q[i][j]);
    for (Eigen::Index j = 0; j < g.qdot[i].size(); ++j) os << ',' << format_number(g.qdot[i][j]);
    os << '\n';
  }
}

void write_csv(std::ostream& os, const ReducedTrajectory& r, const std::vector<std::string>& names,
               const Metadata& meta) {
  r.validate();
  const auto k = static_cast<std::size_t>(r.x.front().size());
  if (names.size() != k) throw DimensionError("column names do not match the base dimension");
  Metadata all = meta;
  if (find_meta(all, "sigma").empty()) all.emplace_back("sigma", format_number(r.sigma));
  write_prologue(os, all);
  os << 't';
  for (const auto& s : names) os << ',' << s;
  for (const auto& s : names) os << ',' << s << "dot";
  os << ",y\n";
  for (std::size_t i = 0; i < r.samples(); ++i) {
    os << format_number(r.times[i]);
    for (Eigen::Index j = 0; j < r.x[i].size(); ++j) os << ',' << format_number(r.x[i][j]);
    for (Eigen::Index j = 0; j < r.xdot[i].size(); ++j) os << ',' << format_number(r.xdot[i][j]);
    os << ',' << format_number(r.y[i]) << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& is, Metadata* meta) {
  std::size_t cols = 0;
  const auto rows = read_rows(is, meta, cols);
  if (cols < 3 || (cols - 1) % 2 != 0) throw SchemaError("trajectory CSV needs columns t, q..., qdot...");
  const auto n = static_cast<Eigen::Index>((cols - 1) / 2);
  Trajectory g;
  for (const auto& row : rows) {
    g.times.push_back(row[0]);
    g.q.push_back(Eigen::Map<const Vec>(row.data() + 1, n));
    g.qdot.push_back(Eigen::Map<const Vec>(row.data() + 1 + n, n));
  }
  g.validate();
  return g;
}

ReducedTrajectory read_reduced_csv(std::istream& is, Metadata* meta) {
  Metadata local;
  Metadata& m = meta ? *meta : local;
  std::size_t cols = 0;
  const auto rows = read_rows(is, &m, cols);
  if (cols < 4 || (cols - 2) % 2 != 0) throw SchemaError("reduced CSV needs columns t, x..., xdot..., y");
  const auto k = static_cast<Eigen::Index>((cols - 2) / 2);
  ReducedTrajectory r;
  for (const auto& row : rows) {
    r.times.push_back(row[0]);
    r.x.push_back(Eigen::Map<const Vec>(row.data() + 1, k));
    r.xdot.push_back(Eigen::Map<const Vec>(row.data() + 1 + k, k));
    r.y.push_back(row[static_cast<std::size_t>(1 + 2 * k)]);
  }
  const std::string sigma = find_meta(m, "sigma");
  if (sigma.empty()) throw SchemaError("reduced CSV prologue lacks sigma");
  r.sigma = std::stod(sigma);
  r.validate();
  return r;
}

nlohmann::json to_json(const Trajectory& g) {
  nlohmann::json j;
  j["times"] = g.times;
  j["q"] = nlohmann::json::array();
  j["qdot"] = nlohmann::json::array();
  for (const auto& v : g.q) j["q"].push_back(to_std(v));
  for (const auto& v : g.qdot) j["qdot"].push_back(to_std(v));
  return j;
}

nlohmann::json to_json(const ReducedTrajectory& r) {
  nlohmann::json j;
  j["times"] = r.times;
  j["x"] = nlohmann::json::array();
  j["xdot"] = nlohmann::json::array();
  for (const auto& v : r.x) j["x"].push_back(to_std(v));
  for (const auto& v : r.xdot) j["xdot"].push_back(to_std(v));
  j["y"] = r.y;
  j["sigma"] = r.sigma;
  return j;
}

Trajectory trajectory_from_json(const nlohmann::json& j) {
  Trajectory g;
  try {
    g.times = j.at("times").get<std::vector<double>>();
    for (const auto& v : j.at("q")) g.q.push_back(from_std(v.get<std::vector<double>>()));
    for (const auto& v : j.at("qdot")) g.qdot.push_back(from_std(v.get<std::vector<double>>()));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("trajectory JSON: ") + e.what());
  }
  g.validate();
  return g;
}

ReducedTrajectory reduced_trajectory_from_json(const nlohmann::json& j) {
  ReducedTrajectory r;
  try {
    r.times = j.at("times").get<std::vector<double>>();
    for (const auto& v : j.at("x")) r.x.push_back(from_std(v.get<std::vector<double>>()));
    for (const auto& v : j.at("xdot")) r.xdot.push_back(from_std(v.get<std::vector<double>>()));
    r.y = j.at("y").get<std::vector<double>>();
    r.sigma = j.at("sigma").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("reduced trajectory JSON: ") + e.what());
  }
  r.validate();
  return r;
}

}  // namespace scalred
