#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "stylo/app.hpp"
#include "stylo/distance.hpp"
#include "stylo/error.hpp"
#include "stylo/features.hpp"
#include "stylo/io.hpp"
#include "stylo/learn.hpp"

namespace stylo::app {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  require(obj.is_object(), ErrorCode::config, where + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    require(allowed.count(it.key()) > 0, ErrorCode::config,
            "unknown config key \"" + (where == "config" ? "" : where + ".") + it.key() + "\"");
}

template <typename T>
T get(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::config, "config key \"" + where + "." + key + "\" has the wrong type");
  }
}

std::size_t get_count(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  require(v.is_number_integer() && v.get<long long>() >= 0, ErrorCode::config,
          "config key \"" + where + "." + key + "\" must be a non-negative integer");
  return v.get<std::size_t>();
}

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

}  // namespace

RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::config, std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root, "config",
             {"manifest", "output", "seed", "jobs", "compressor", "external_compressors", "analyses", "delta",
              "ncd", "projection", "classify", "unmask", "plots"});
  RunConfig c;
  const std::string w = "config";
  if (root.contains("manifest")) c.manifest = resolve(get<std::string>(root, "manifest", w), base_dir);
  if (root.contains("output")) c.output = resolve(get<std::string>(root, "output", w), base_dir);
  if (root.contains("seed") && !root["seed"].is_null()) {
    require(root["seed"].is_number_unsigned(), ErrorCode::config, "config key \"seed\" must be a non-negative integer");
    c.seed = root["seed"].get<std::uint64_t>();
  }
  if (root.contains("jobs")) c.jobs = get_count(root, "jobs", w);
  if (root.contains("compressor")) c.compressor = get<std::string>(root, "compressor", w);
  if (root.contains("plots")) c.plots = get<bool>(root, "plots", w);
  if (root.contains("analyses")) {
    const json& a = root["analyses"];
    if (a.is_string()) {
      c.analyses = parse_analyses(a.get<std::string>());
    } else {
      std::string joined;
      for (const auto& s : get<std::vector<std::string>>(root, "analyses", w)) joined += (joined.empty() ? "" : ",") + s;
      c.analyses = parse_analyses(joined);
    }
  }
  if (root.contains("external_compressors")) {
    require(root["external_compressors"].is_array(), ErrorCode::config, "external_compressors must be an array");
    for (const auto& e : root["external_compressors"]) {
      const std::string ew = "external_compressors[]";
      check_keys(e, ew, {"id", "command", "args", "timeout_s"});
      compression::ExternalConfig x;
      require(e.contains("id") && e.contains("command"), ErrorCode::config,
              "external compressor entries need \"id\" and \"command\"");
      x.id = get<std::string>(e, "id", ew);
      x.command = get<std::string>(e, "command", ew);
      if (e.contains("args")) x.args = get<std::vector<std::string>>(e, "args", ew);
      if (e.contains("timeout_s")) x.timeout_s = get<double>(e, "timeout_s", ew);
      c.external_compressors.push_back(std::move(x));
    }
  }
  if (root.contains("delta")) {
    const json& d = root["delta"];
    check_keys(d, "delta", {"mfw", "culling", "kinds", "linkage"});
    if (d.contains("mfw")) c.delta.mfw = get<std::vector<int>>(d, "mfw", "delta");
    if (d.contains("culling")) c.delta.culling = get<std::vector<double>>(d, "culling", "delta");
    if (d.contains("kinds")) c.delta.kinds = get<std::vector<std::string>>(d, "kinds", "delta");
    if (d.contains("linkage")) c.delta.linkage = get<std::string>(d, "linkage", "delta");
  }
  if (root.contains("ncd")) {
    const json& n = root["ncd"];
    check_keys(n, "ncd", {"mode", "compressor"});
    if (n.contains("mode")) c.ncd.mode = get<std::string>(n, "mode", "ncd");
    if (n.contains("compressor")) c.ncd.compressor = get<std::string>(n, "compressor", "ncd");
  }
  if (root.contains("projection")) {
    const json& p = root["projection"];
    check_keys(p, "projection", {"features", "components", "lda", "plot_sample"});
    if (p.contains("features")) c.projection.features = get<std::string>(p, "features", "projection");
    if (p.contains("components")) c.projection.components = get_count(p, "components", "projection");
    if (p.contains("lda")) c.projection.lda = get<bool>(p, "lda", "projection");
    if (p.contains("plot_sample")) c.projection.plot_sample = get_count(p, "plot_sample", "projection");
  }
  if (root.contains("classify")) {
    const json& k = root["classify"];
    const std::string cw = "classify";
    check_keys(k, cw, {"kinds", "features", "folds", "balance", "balance_fraction", "pca_components"});
    if (k.contains("kinds")) c.classify.kinds = get<std::vector<std::string>>(k, "kinds", cw);
    if (k.contains("features")) c.classify.features = get<std::vector<std::string>>(k, "features", cw);
    if (k.contains("folds")) c.classify.folds = get_count(k, "folds", cw);
    if (k.contains("balance")) c.classify.balance = get<bool>(k, "balance", cw);
    if (k.contains("balance_fraction")) c.classify.balance_fraction = get<double>(k, "balance_fraction", cw);
    if (k.contains("pca_components")) c.classify.pca_components = get_count(k, "pca_components", cw);
  }
  if (root.contains("unmask")) {
    const json& u = root["unmask"];
    check_keys(u, "unmask", {"n", "k", "m", "cv_folds", "remove_least"});
    if (u.contains("n")) c.unmask.n = get_count(u, "n", "unmask");
    if (u.contains("k")) c.unmask.k = get_count(u, "k", "unmask");
    if (u.contains("m")) c.unmask.m = get_count(u, "m", "unmask");
    if (u.contains("cv_folds")) c.unmask.cv_folds = get_count(u, "cv_folds", "unmask");
    if (u.contains("remove_least")) c.unmask.remove_least = get<bool>(u, "remove_least", "unmask");
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  return parse_config(io::read_file(path), path.parent_path());
}

std::vector<std::string> parse_analyses(const std::string& list) {
  std::set<std::string> picked;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == "all") {
      picked.insert(kAnalysisOrder.begin(), kAnalysisOrder.end());
      continue;
    }
    require(std::find(kAnalysisOrder.begin(), kAnalysisOrder.end(), item) != kAnalysisOrder.end(),
            ErrorCode::config, "unknown analysis \"" + item + "\" (expected delta, ncd, projection, classify, unmask or all)");
    picked.insert(item);
  }
  require(!picked.empty(), ErrorCode::config, "no analysis selected");
  std::vector<std::string> out;
  for (const auto& a : kAnalysisOrder)
    if (picked.count(a)) out.push_back(a);
  return out;
}

compression::Registry make_registry(const RunConfig& cfg) {
  auto r = compression::Registry::with_builtins();
  for (const auto& e : cfg.external_compressors) {
    require(!r.contains(e.id), ErrorCode::config, "external compressor id \"" + e.id + "\" is already taken");
    r.add(compression::make_external(e));
  }
  return r;
}

void validate(const RunConfig& c) {
  auto config_error = [](const std::string& msg) { fail(ErrorCode::config, msg); };
  auto wrap = [&](const std::string& what, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      config_error(what + ": " + e.what());
    }
  };
  if (c.analyses.empty()) config_error("no analysis selected");
  for (const auto& a : c.analyses)
    if (std::find(kAnalysisOrder.begin(), kAnalysisOrder.end(), a) == kAnalysisOrder.end())
      config_error("unknown analysis \"" + a + "\"");
  const auto registry = make_registry(c);
  if (!registry.contains(c.compressor)) config_error("unknown compressor \"" + c.compressor + "\"");
  if (!c.ncd.compressor.empty() && !registry.contains(c.ncd.compressor))
    config_error("unknown compressor \"" + c.ncd.compressor + "\"");

  if (c.delta.mfw.empty() || c.delta.culling.empty() || c.delta.kinds.empty())
    config_error("delta grids must be non-empty");
  for (int m : c.delta.mfw)
    if (m < 1) config_error("delta.mfw values must be positive");
  for (double x : c.delta.culling)
    if (!(x >= 0.0 && x <= 100.0)) config_error("delta.culling values must lie in [0, 100]");
  for (const auto& k : c.delta.kinds) wrap("delta.kinds", [&] { distance::parse_delta_kind(k); });
  wrap("delta.linkage", [&] { distance::parse_linkage(c.delta.linkage); });

  if (c.ncd.mode != "instance" && c.ncd.mode != "profile") config_error("ncd.mode must be \"instance\" or \"profile\"");

  wrap("projection.features", [&] { features::parse_feature_kind(c.projection.features); });
  if (c.projection.components < 1) config_error("projection.components must be at least 1");

  if (c.classify.kinds.empty() || c.classify.features.empty()) config_error("classify grids must be non-empty");
  for (const auto& k : c.classify.kinds) wrap("classify.kinds", [&] { learn::parse_classifier_kind(k); });
  for (const auto& f : c.classify.features) wrap("classify.features", [&] { features::parse_feature_kind(f); });
  if (c.classify.folds < 2) config_error("classify.folds must be at least 2");
  if (!(c.classify.balance_fraction > 0.0 && c.classify.balance_fraction < 1.0))
    config_error("classify.balance_fraction must lie in (0, 1)");

  if (c.unmask.n < 1 || c.unmask.m < 1 || c.unmask.k < 1) config_error("unmask n, k and m must be positive");
  if (c.unmask.n < 2 * c.unmask.k * c.unmask.m + 1)
    config_error("unmask.n must exceed 2 * k * m so features remain at the last step");
  if (c.unmask.cv_folds < 2) config_error("unmask.cv_folds must be at least 2");
}

std::string config_json(const RunConfig& c) {
  ojson j;
  j["manifest"] = c.manifest.generic_string();
  j["output"] = c.output.generic_string();
  j["seed"] = c.effective_seed();
  j["compressor"] = c.compressor;
  j["external_compressors"] = ojson::array();
  for (const auto& e : c.external_compressors)
    j["external_compressors"].push_back({{"id", e.id}, {"command", e.command}, {"args", e.args}, {"timeout_s", e.timeout_s}});
  j["analyses"] = c.analyses;
  j["delta"] = {{"mfw", c.delta.mfw}, {"culling", c.delta.culling}, {"kinds", c.delta.kinds}, {"linkage", c.delta.linkage}};
  j["ncd"] = {{"mode", c.ncd.mode}, {"compressor", c.ncd.compressor.empty() ? c.compressor : c.ncd.compressor}};
  j["projection"] = {{"features", c.projection.features},
                     {"components", c.projection.components},
                     {"lda", c.projection.lda},
                     {"plot_sample", c.projection.plot_sample}};
  j["classify"] = {{"kinds", c.classify.kinds},
                   {"features", c.classify.features},
                   {"folds", c.classify.folds},
                   {"balance", c.classify.balance},
                   {"balance_fraction", c.classify.balance_fraction},
                   {"pca_components", c.classify.pca_components}};
  j["unmask"] = {{"n", c.unmask.n},
                 {"k", c.unmask.k},
                 {"m", c.unmask.m},
                 {"cv_folds", c.unmask.cv_folds},
                 {"remove_least", c.unmask.remove_least}};
  j["plots"] = c.plots;
  return j.dump(2);
}

}  // namespace stylo::app
