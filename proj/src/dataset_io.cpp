#include "pregp/dataset_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pregp/error.hpp"
#include "pregp/warping.hpp"

namespace pregp {

namespace {

using nlohmann::ordered_json;

ObservationSet warp_task(const SearchSpace& space, OutputWarping warping, const std::string& name,
                         const std::vector<RawTrial>& trials) {
  for (const auto& t : trials)
    if (t.feasible && (!t.y || !std::isfinite(*t.y)))
      throw ValidationError("task '" + name + "': feasible trial without a finite y");

  std::vector<double> ys;
  std::vector<const RawTrial*> kept;
  if (warping == OutputWarping::online_softplus) {
    std::vector<double> values;
    std::vector<bool> flags;
    for (const auto& t : trials) {
      values.push_back(t.feasible ? *t.y : 0.0);
      flags.push_back(t.feasible);
    }
    ys = online_map(values, flags);
    for (const auto& t : trials) kept.push_back(&t);
  } else {
    for (const auto& t : trials) {
      if (!t.feasible) continue;
      ys.push_back(warping == OutputWarping::neg_log_error ? warp_output(*t.y) : *t.y);
      kept.push_back(&t);
    }
  }
  Points xs(static_cast<Eigen::Index>(kept.size()), static_cast<Eigen::Index>(space.dim()));
  for (std::size_t i = 0; i < kept.size(); ++i) {
    try {
      xs.row(static_cast<Eigen::Index>(i)) = warp_input(kept[i]->x, space).transpose();
    } catch (const ValidationError& e) {
      throw ValidationError("task '" + name + "': " + e.what());
    }
  }
  return ObservationSet(std::move(xs), Eigen::Map<const Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size())));
}

// Walks the JSON document keeping a field path for error messages.
class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  const nlohmann::json& at(const nlohmann::json& obj, const std::string& key, const std::string& path) const {
    if (!obj.is_object()) fail(path, "expected an object");
    if (!obj.contains(key)) fail(path + "." + key, "missing field");
    return obj.at(key);
  }
  double number(const nlohmann::json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  }
  std::string string(const nlohmann::json& v, const std::string& path) const {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }
  const nlohmann::json& array(const nlohmann::json& v, const std::string& path) const {
    if (!v.is_array()) fail(path, "expected an array");
    return v;
  }
  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw ParseError(origin_ + ": " + path + ": " + what);
  }

 private:
  std::string origin_;
};

}  // namespace

MultiTaskDataset build_dataset(SearchSpace space, OutputWarping warping,
                               std::vector<std::pair<std::string, std::vector<RawTrial>>> tasks) {
  MultiTaskDataset ds{std::move(space), warping, {}};
  for (auto& [name, trials] : tasks) {
    ObservationSet obs = warp_task(ds.search_space, warping, name, trials);
    ds.tasks.push_back({std::move(name), std::move(trials), std::move(obs)});
  }
  ds.validate();
  return ds;
}

MultiTaskDataset parse_dataset(std::string_view text, const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
  const Reader rd(origin);
  std::vector<DimSpec> dims;
  const auto& ss = rd.at(doc, "search_space", "$");
  const auto& jd = rd.array(rd.at(ss, "dims", "$.search_space"), "$.search_space.dims");
  for (std::size_t i = 0; i < jd.size(); ++i) {
    const std::string p = "$.search_space.dims[" + std::to_string(i) + "]";
    DimSpec d;
    d.name = rd.string(rd.at(jd[i], "name", p), p + ".name");
    d.low = rd.number(rd.at(jd[i], "low", p), p + ".low");
    d.high = rd.number(rd.at(jd[i], "high", p), p + ".high");
    try {
      d.scaling = parse_scaling(rd.string(rd.at(jd[i], "scaling", p), p + ".scaling"));
    } catch (const ParseError& e) {
      rd.fail(p + ".scaling", e.what());
    }
    dims.push_back(std::move(d));
  }
  OutputWarping warping = OutputWarping::none;
  if (doc.contains("output_warping")) {
    try {
      warping = parse_output_warping(rd.string(doc.at("output_warping"), "$.output_warping"));
    } catch (const ParseError& e) {
      rd.fail("$.output_warping", e.what());
    }
  }
  SearchSpace space(std::move(dims));

  std::vector<std::pair<std::string, std::vector<RawTrial>>> tasks;
  const auto& jt = rd.array(rd.at(doc, "tasks", "$"), "$.tasks");
  for (std::size_t i = 0; i < jt.size(); ++i) {
    const std::string p = "$.tasks[" + std::to_string(i) + "]";
    std::string name = rd.string(rd.at(jt[i], "name", p), p + ".name");
    const auto& pts = rd.array(rd.at(jt[i], "points", p), p + ".points");
    std::vector<RawTrial> trials;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const std::string q = p + ".points[" + std::to_string(j) + "]";
      RawTrial t;
      const auto& jx = rd.array(rd.at(pts[j], "x", q), q + ".x");
      if (jx.size() != space.dim()) rd.fail(q + ".x", "expected " + std::to_string(space.dim()) + " values");
      for (std::size_t k = 0; k < jx.size(); ++k) t.x.push_back(rd.number(jx[k], q + ".x[" + std::to_string(k) + "]"));
      if (pts[j].contains("feasible")) {
        if (!pts[j].at("feasible").is_boolean()) rd.fail(q + ".feasible", "expected a boolean");
        t.feasible = pts[j].at("feasible").get<bool>();
      }
      if (pts[j].contains("y") && !pts[j].at("y").is_null()) t.y = rd.number(pts[j].at("y"), q + ".y");
      if (t.feasible && !t.y) rd.fail(q + ".y", "feasible trial needs a value");
      trials.push_back(std::move(t));
    }
    tasks.emplace_back(std::move(name), std::move(trials));
  }
  return build_dataset(std::move(space), warping, std::move(tasks));
}

std::string serialize_dataset(const MultiTaskDataset& dataset) {
  ordered_json doc;
  ordered_json dims = ordered_json::array();
  for (const auto& d : dataset.search_space.dims())
    dims.push_back({{"name", d.name}, {"low", d.low}, {"high", d.high}, {"scaling", to_string(d.scaling)}});
  doc["search_space"] = {{"dims", dims}};
  if (dataset.output_warping != OutputWarping::none) doc["output_warping"] = to_string(dataset.output_warping);
  ordered_json tasks = ordered_json::array();
  for (const auto& t : dataset.tasks) {
    ordered_json pts = ordered_json::array();
    for (const auto& r : t.raw) {
      ordered_json p;
      p["x"] = r.x;
      if (r.y) p["y"] = *r.y;
      p["feasible"] = r.feasible;
      pts.push_back(std::move(p));
    }
    tasks.push_back({{"name", t.name}, {"points", std::move(pts)}});
  }
  doc["tasks"] = std::move(tasks);
  return doc.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << content;
}

MultiTaskDataset load_dataset(const std::string& path) { return parse_dataset(read_file(path), path); }

void save_dataset(const MultiTaskDataset& dataset, const std::string& path) {
  write_file(path, serialize_dataset(dataset));
}

}  // namespace pregp
