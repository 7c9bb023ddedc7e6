// Copyright 2026 The stochprobe Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stochprobe/instance_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "stochprobe/errors.hpp"

namespace stochprobe {

namespace {

using json = nlohmann::json;

// Input iterator that counts lines. The count moves forward when the first
// character of a new line is read, so a token ending a line (and the
// lookahead past it) still reports its own line.
struct LineCounter {
  std::size_t line = 1;
  bool pending = false;
};

class CountingIter {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  CountingIter(const char* p, LineCounter* c) : p_(p), c_(c) {}
  reference operator*() const {
    if (c_->pending) {
      ++c_->line;
      c_->pending = false;
    }
    return *p_;
  }
  CountingIter& operator++() {
    if (*p_ == '\n') c_->pending = true;
    ++p_;
    return *this;
  }
  CountingIter operator++(int) {
    auto old = *this;
    ++*this;
    return old;
  }
  bool operator==(const CountingIter& o) const { return p_ == o.p_; }

 private:
  const char* p_;
  LineCounter* c_;
};

// SAX consumer that builds the document and remembers the line of every value.
class LineSax {
 public:
  explicit LineSax(const LineCounter& c) : counter_(c) {}

  json root;
  std::map<std::string, std::size_t> lines;

  bool null() { return put(nullptr) != nullptr; }
  bool boolean(bool v) { return put(v) != nullptr; }
  bool number_integer(json::number_integer_t v) { return put(v) != nullptr; }
  bool number_unsigned(json::number_unsigned_t v) { return put(v) != nullptr; }
  bool number_float(json::number_float_t v, const std::string&) { return put(v) != nullptr; }
  bool string(std::string& v) { return put(v) != nullptr; }
  bool binary(json::binary_t&) { return false; }
  bool start_object(std::size_t) { return open(json::object()); }
  bool end_object() { return close(); }
  bool start_array(std::size_t) { return open(json::array()); }
  bool end_array() { return close(); }
  bool key(std::string& k) {
    key_ = k;
    return true;
  }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& e) {
    // nlohmann prefixes "[json.exception.parse_error.101] parse error at line L, column C: ..."
    std::string msg = e.what();
    if (const auto p = msg.find("] "); p != std::string::npos) msg = msg.substr(p + 2);
    throw ValidationError("json", msg);
  }

 private:
  json* put(json v) {
    std::string path;
    json* slot = nullptr;
    if (stack_.empty()) {
      root = std::move(v);
      slot = &root;
    } else if (stack_.back()->is_array()) {
      auto* parent = stack_.back();
      path = paths_.back() + "[" + std::to_string(parent->size()) + "]";
      parent->push_back(std::move(v));
      slot = &parent->back();
    } else {
      path = paths_.back().empty() ? key_ : paths_.back() + "." + key_;
      slot = &((*stack_.back())[key_] = std::move(v));
    }
    lines[path] = counter_.line;
    last_path_ = path;
    return slot;
  }
  bool open(json v) {
    json* slot = put(std::move(v));
    stack_.push_back(slot);
    paths_.push_back(last_path_);
    return true;
  }
  bool close() {
    stack_.pop_back();
    paths_.pop_back();
    return true;
  }

  const LineCounter& counter_;
  std::vector<json*> stack_;
  std::vector<std::string> paths_;
  std::string key_, last_path_;
};

class Reader {
 public:
  Reader(const json& root, const std::map<std::string, std::size_t>& lines)
      : root_(root), lines_(lines) {}

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    throw ValidationError(path, where(path) + msg);
  }

  // "line N: " for the path or its nearest recorded ancestor.
  std::string where(std::string path) const {
    for (;;) {
      if (auto it = lines_.find(path); it != lines_.end())
        return "line " + std::to_string(it->second) + ": ";
      const auto cut = path.find_last_of(".[");
      if (cut == std::string::npos) return "";
      path.resize(cut);
    }
  }

  const json* find(const json& obj, const std::string& key) const {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }
  const json& need(const json& obj, const std::string& path, const std::string& key) const {
    const json* v = find(obj, key);
    if (!v) fail(path, "required field '" + key + "' is missing");
    return *v;
  }
  double number(const json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path, "must be finite");
    return x;
  }
  double nonneg(const json& v, const std::string& path) const {
    const double x = number(v, path);
    if (x < 0.0) fail(path, "must be >= 0");
    return x;
  }
  std::size_t index(const json& v, const std::string& path) const {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
      fail(path, "expected a nonnegative integer");
    return v.get<std::size_t>();
  }
  const json& array(const json& v, const std::string& path) const {
    if (!v.is_array()) fail(path, "expected an array");
    return v;
  }

  DiscreteDist dist(const json& v, const std::string& path) const {
    array(v, path);
    if (v.empty()) fail(path, "empty support");
    std::vector<DiscreteDist::Atom> atoms;
    for (std::size_t k = 0; k < v.size(); ++k) {
      const std::string p = path + "[" + std::to_string(k) + "]";
      if (!v[k].is_array() || v[k].size() != 2) fail(p, "expected [value, prob]");
      atoms.push_back({nonneg(v[k][0], p + "[0]"), nonneg(v[k][1], p + "[1]")});
    }
    double sum = 0.0;
    for (const auto& a : atoms) sum += a.prob;
    try {
      // Sums already within the storage tolerance are kept verbatim so that
      // emit and parse are exact inverses.
      if (std::abs(sum - 1.0) <= kProbTolerance) return DiscreteDist(std::move(atoms));
      return DiscreteDist::normalized(std::move(atoms), kParseProbTolerance);
    } catch (const ValidationError& e) {
      std::string msg = e.what();
      if (msg.rfind("dist: ", 0) == 0) msg = msg.substr(6);
      fail(path, msg);
    }
  }

  void check_keys(const json& obj, const std::string& path, const std::set<std::string>& ok) const {
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (!ok.count(it.key())) {
        const std::string p = path.empty() ? it.key() : path + "." + it.key();
        fail(p, "unknown field");
      }
  }

  const json& root() const { return root_; }

 private:
  const json& root_;
  const std::map<std::string, std::size_t>& lines_;
};

std::string item_path(std::size_t i) { return "items[" + std::to_string(i) + "]"; }

PointSet read_metric(const Reader& r) {
  const json& m = r.need(r.root(), "metric", "metric");
  if (!m.is_object()) r.fail("metric", "expected an object");
  r.check_keys(m, "metric", {"points", "norm", "matrix"});
  const json* pts = r.find(m, "points");
  const json* mat = r.find(m, "matrix");
  if ((pts != nullptr) == (mat != nullptr))
    r.fail("metric", "give exactly one of 'points' or 'matrix'");
  if (pts) {
    r.array(*pts, "metric.points");
    Eigen::MatrixX2d xy(static_cast<Eigen::Index>(pts->size()), 2);
    for (std::size_t i = 0; i < pts->size(); ++i) {
      const std::string p = "metric.points[" + std::to_string(i) + "]";
      const json& row = (*pts)[i];
      if (!row.is_array() || row.size() != 2) r.fail(p, "expected [x, y]");
      xy(static_cast<Eigen::Index>(i), 0) = r.number(row[0], p + "[0]");
      xy(static_cast<Eigen::Index>(i), 1) = r.number(row[1], p + "[1]");
    }
    Norm norm = Norm::kL2;
    if (const json* n = r.find(m, "norm")) {
      if (*n == "L1") norm = Norm::kL1;
      else if (*n == "L2") norm = Norm::kL2;
      else r.fail("metric.norm", "expected \"L1\" or \"L2\"");
    }
    return PointSet::from_coordinates(std::move(xy), norm);
  }
  if (r.find(m, "norm")) r.fail("metric.norm", "only valid with 'points'");
  r.array(*mat, "metric.matrix");
  const auto n = static_cast<Eigen::Index>(mat->size());
  Eigen::MatrixXd l(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::string p = "metric.matrix[" + std::to_string(i) + "]";
    const json& row = (*mat)[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      r.fail(p, "expected a row of length " + std::to_string(n));
    for (Eigen::Index j = 0; j < n; ++j)
      l(i, j) = r.number(row[static_cast<std::size_t>(j)], p + "[" + std::to_string(j) + "]");
  }
  return PointSet::from_matrix(std::move(l));
}

struct Item {
  DiscreteDist dist = DiscreteDist::point(0.0);
  double cost = 0.0;
  double weight = 1.0;
};

std::vector<Item> read_items(const Reader& r, bool weights) {
  const json& items = r.array(r.need(r.root(), "items", "items"), "items");
  std::vector<Item> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string p = item_path(i);
    const json& it = items[i];
    if (!it.is_object()) r.fail(p, "expected an object");
    if (weights) r.check_keys(it, p, {"dist", "cost", "weight"});
    else r.check_keys(it, p, {"dist", "cost"});
    Item x;
    x.dist = r.dist(r.need(it, p, "dist"), p + ".dist");
    x.cost = r.nonneg(r.need(it, p, "cost"), p + ".cost");
    if (weights)
      if (const json* w = r.find(it, "weight")) x.weight = r.nonneg(*w, p + ".weight");
    out.push_back(std::move(x));
  }
  return out;
}

Instance read_instance(const Reader& r) {
  const json& root = r.root();
  if (!root.is_object()) r.fail("", "expected a JSON object");
  const json& obj = r.need(root, "objective", "objective");
  if (!obj.is_string()) r.fail("objective", "expected a string");
  const std::string kind = obj.get<std::string>();
  const double budget = r.nonneg(r.need(root, "budget", "budget"), "budget");

  if (kind == "wct") {
    r.check_keys(root, "", {"objective", "budget", "items", "comment"});
    WctInstance inst;
    for (auto& x : read_items(r, true)) inst.jobs.push_back({x.dist, x.weight, x.cost});
    inst.budget = budget;
    inst.validate();
    return inst;
  }
  if (kind == "makespan") {
    r.check_keys(root, "", {"objective", "budget", "machines", "items", "comment"});
    MakespanInstance inst;
    const json& m = r.need(root, "machines", "machines");
    if (!m.is_number_integer()) r.fail("machines", "expected an integer");
    inst.machines = m.get<int>();
    for (auto& x : read_items(r, false)) inst.jobs.push_back({x.dist, x.cost});
    inst.budget = budget;
    inst.validate();
    return inst;
  }
  if (kind == "kmedian") {
    r.check_keys(root, "",
                 {"objective", "budget", "K", "centers", "arbitrary_centers", "items", "metric",
                  "comment"});
    KMedianInstance inst;
    inst.points = read_metric(r);
    for (auto& x : read_items(r, false)) inst.nodes.push_back({x.dist, x.cost});
    inst.k = r.index(r.need(root, "K", "K"), "K");
    if (const json* c = r.find(root, "centers")) {
      r.array(*c, "centers");
      for (std::size_t i = 0; i < c->size(); ++i)
        inst.centers.push_back(r.index((*c)[i], "centers[" + std::to_string(i) + "]"));
    } else {
      inst.centers = full_set(inst.points.size());
    }
    if (const json* a = r.find(root, "arbitrary_centers")) {
      if (!a->is_boolean()) r.fail("arbitrary_centers", "expected true or false");
      inst.arbitrary_centers = a->get<bool>();
    }
    inst.budget = budget;
    inst.validate();
    return inst;
  }
  if (kind == "steiner") {
    r.check_keys(root, "", {"objective", "budget", "items", "metric", "comment"});
    SteinerInstance inst;
    inst.points = read_metric(r);
    for (auto& x : read_items(r, false)) inst.nodes.push_back({x.dist, x.cost});
    inst.budget = budget;
    inst.validate();
    return inst;
  }
  r.fail("objective", "expected one of wct, makespan, kmedian, steiner");
}

using ojson = nlohmann::ordered_json;

ojson dist_json(const DiscreteDist& d) {
  ojson a = ojson::array();
  for (const auto& x : d.atoms()) a.push_back({x.value, x.prob});
  return a;
}

ojson metric_json(const PointSet& ps) {
  ojson m;
  if (ps.has_coordinates()) {
    ojson pts = ojson::array();
    const auto& xy = ps.coordinates();
    for (Eigen::Index i = 0; i < xy.rows(); ++i) pts.push_back({xy(i, 0), xy(i, 1)});
    m["points"] = std::move(pts);
    m["norm"] = ps.norm() == Norm::kL1 ? "L1" : "L2";
  } else {
    ojson rows = ojson::array();
    const auto& l = ps.matrix();
    for (Eigen::Index i = 0; i < l.rows(); ++i) {
      ojson row = ojson::array();
      for (Eigen::Index j = 0; j < l.cols(); ++j) row.push_back(l(i, j));
      rows.push_back(std::move(row));
    }
    m["matrix"] = std::move(rows);
  }
  return m;
}

ojson nodes_json(const NodeSet& ns) {
  ojson items = ojson::array();
  for (const auto& v : ns) items.push_back({{"dist", dist_json(v.location)}, {"cost", v.cost}});
  return items;
}

// Objects one key per line; arrays holding no objects on a single line.
void pretty(const ojson& j, int indent, std::string& out) {
  const bool nested_objects =
      j.is_array() && std::any_of(j.begin(), j.end(), [](const ojson& e) { return e.is_object(); });
  if (!j.is_object() && !nested_objects) {
    out += j.dump();
    return;
  }
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  out += j.is_object() ? "{\n" : "[\n";
  bool first = true;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!first) out += ",\n";
    first = false;
    out += pad;
    if (j.is_object()) out += ojson(it.key()).dump() + ": ";
    pretty(*it, indent + 2, out);
  }
  out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + (j.is_object() ? "}" : "]");
}

}  // namespace

std::string objective_name(const Instance& inst) {
  static const char* const kNames[] = {"wct", "makespan", "kmedian", "steiner"};
  return kNames[inst.index()];
}

double instance_budget(const Instance& inst) {
  return std::visit([](const auto& x) { return x.budget; }, inst);
}

Instance parse_instance_text(std::string_view text) {
  LineCounter counter;
  LineSax sax(counter);
  CountingIter first(text.data(), &counter), last(text.data() + text.size(), &counter);
  json::sax_parse(first, last, &sax);
  Reader r(sax.root, sax.lines);
  try {
    return read_instance(r);
  } catch (const ValidationError& e) {
    // Errors raised by the instance types carry a path but no line yet.
    const std::string msg = e.what();
    if (msg.find("line ") != std::string::npos || e.field().empty()) throw;
    const std::string body = msg.substr(e.field().size() + 2);
    throw ValidationError(e.field(), r.where(e.field()) + body);
  }
}

Instance parse_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("file", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance_text(ss.str());
}

std::string emit_instance(const Instance& inst) {
  ojson j;
  j["objective"] = objective_name(inst);
  j["budget"] = instance_budget(inst);
  std::visit(
      [&j](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, WctInstance>) {
          ojson items = ojson::array();
          for (const auto& job : x.jobs)
            items.push_back(
                {{"dist", dist_json(job.size)}, {"cost", job.cost}, {"weight", job.weight}});
          j["items"] = std::move(items);
        } else if constexpr (std::is_same_v<T, MakespanInstance>) {
          j["machines"] = x.machines;
          ojson items = ojson::array();
          for (const auto& job : x.jobs)
            items.push_back({{"dist", dist_json(job.size)}, {"cost", job.cost}});
          j["items"] = std::move(items);
        } else if constexpr (std::is_same_v<T, KMedianInstance>) {
          j["K"] = x.k;
          j["centers"] = x.centers;
          j["arbitrary_centers"] = x.arbitrary_centers;
          j["items"] = nodes_json(x.nodes);
          j["metric"] = metric_json(x.points);
        } else {
          j["items"] = nodes_json(x.nodes);
          j["metric"] = metric_json(x.points);
        }
      },
      inst);
  std::string out;
  pretty(j, 0, out);
  return out + "\n";
}

}  // namespace stochprobe
