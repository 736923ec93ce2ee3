#include <algorithm>
#include <cstdio>
#include <map>

#include <json.hpp>

#include "stylo/app.hpp"
#include "stylo/error.hpp"
#include "stylo/io.hpp"

namespace stylo::app {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

bool has(const std::filesystem::path& p) { return std::filesystem::is_regular_file(p); }

std::vector<std::map<std::string, std::string>> read_table(const std::filesystem::path& p) {
  const auto rows = io::parse_csv(io::read_file(p));
  std::vector<std::map<std::string, std::string>> out;
  if (rows.empty()) return out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::map<std::string, std::string> r;
    for (std::size_t c = 0; c < rows[0].size() && c < rows[i].size(); ++c) r[rows[0][c]] = rows[i][c];
    out.push_back(std::move(r));
  }
  return out;
}

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

Summary summarize(const std::filesystem::path& dir) {
  require(std::filesystem::is_directory(dir), ErrorCode::missing_file, "run directory " + dir.string() + " not found");
  Summary s;
  ojson j;
  std::string t = "stylo run summary\n";

  if (has(dir / "delta/top.json")) {
    const json top = json::parse(io::read_file(dir / "delta/top.json"));
    ojson d;
    d["delta"] = top.at("delta");
    d["mfw"] = top.at("mfw");
    d["culling"] = top.at("culling");
    d["features"] = top.at("features");
    d["standardized_difference"] = top.at("standardized_difference");
    j["delta"] = d;
    t += "\n[delta] best grid cell\n  " + top.at("delta").get<std::string>() + ", mfw " +
         std::to_string(top.at("mfw").get<int>()) + ", culling " + fixed(top.at("culling").get<double>(), 0) +
         "%: standardized separation " + fixed(top.at("standardized_difference").get<double>()) + "\n";
    s.sections.push_back("delta");
  }

  if (has(dir / "ncd/nearest.csv")) {
    ojson n = ojson::object();
    t += "\n[ncd] nearest neighbours\n";
    std::string current;
    for (const auto& r : read_table(dir / "ncd/nearest.csv")) {
      const std::string& sample = r.at("sample");
      if (!n.contains(sample)) n[sample] = ojson::array();
      n[sample].push_back({{"neighbor", r.at("neighbor")}, {"label", r.at("label")}, {"ncd", std::stod(r.at("ncd"))}});
      if (sample != current) {
        t += "  " + sample + ":";
        current = sample;
      }
      if (r.at("rank") == "1" || r.at("rank") == "2" || r.at("rank") == "3")
        t += " " + r.at("neighbor") + " (" + fixed(std::stod(r.at("ncd"))) + ")";
      if (r.at("rank") == "3") t += "\n";
    }
    if (!t.empty() && t.back() != '\n') t += "\n";
    j["ncd"] = n;
    s.sections.push_back("ncd");
  }

  if (has(dir / "classify/ranking.csv")) {
    ojson rk = ojson::array();
    t += "\n[classify] ranking (macro precision, recall, F-score)\n";
    for (const auto& r : read_table(dir / "classify/ranking.csv")) {
      rk.push_back({{"algorithm", r.at("algorithm")},
                    {"features", r.at("features")},
                    {"precision", std::stod(r.at("precision"))},
                    {"recall", std::stod(r.at("recall"))},
                    {"f_score", std::stod(r.at("f_score"))}});
      t += "  " + r.at("algorithm") + " + " + r.at("features") + ": " + fixed(std::stod(r.at("precision"))) + " " +
           fixed(std::stod(r.at("recall"))) + " " + fixed(std::stod(r.at("f_score"))) + "\n";
    }
    j["ranking"] = rk;
    s.sections.push_back("ranking");
  }

  std::vector<std::filesystem::path> tables;
  if (std::filesystem::is_directory(dir / "classify/attribution"))
    for (const auto& e : std::filesystem::directory_iterator(dir / "classify/attribution"))
      if (e.path().extension() == ".json") tables.push_back(e.path());
  std::sort(tables.begin(), tables.end());
  if (!tables.empty()) {
    ojson all = ojson::array();
    for (const auto& p : tables) {
      const json a = json::parse(io::read_file(p));
      ojson tab = ojson::array();
      t += "\n[attribution] " + a.at("query").get<std::string>() + ": " +
           std::to_string(a.at("query_chunks").get<std::size_t>()) + " chunks, " + std::to_string(a.at("runs").size()) +
           " runs (candidate, wins, average chunks)\n";
      // Stored sorted by wins, then average.
      for (const auto& r : a.at("table")) {
        tab.push_back({{"candidate", r.at("candidate")}, {"wins", r.at("wins")}, {"average", r.at("average")}});
        t += "  " + r.at("candidate").get<std::string>() + ": " + std::to_string(r.at("wins").get<std::size_t>()) +
             " " + fixed(r.at("average").get<double>(), 2) + "\n";
      }
      all.push_back({{"query", a.at("query")}, {"query_chunks", a.at("query_chunks")}, {"table", tab}});
    }
    j["attribution"] = all;
    s.sections.push_back("attribution");
  }

  if (has(dir / "unmask/verdicts.json")) {
    const json v = json::parse(io::read_file(dir / "unmask/verdicts.json"));
    ojson out = ojson::array();
    t += "\n[unmask] verdicts\n";
    for (const auto& w : v) {
      ojson scores = ojson::object();
      for (const auto& c : w.at("candidates")) scores[c.at("candidate").get<std::string>()] = c.at("score");
      out.push_back({{"work", w.at("work")}, {"outcome", w.at("outcome")}, {"scores", scores}});
      const auto& o = w.at("outcome");
      std::string verdict;
      if (o.is_string()) {
        verdict = o.get<std::string>();
      } else {
        for (const auto& m : o) verdict += (verdict.empty() ? "" : ", ") + m.get<std::string>();
      }
      t += "  " + w.at("work").get<std::string>() + ": " + verdict + "\n";
    }
    if (has(dir / "unmask/meta_evaluation.json")) {
      const json ev = json::parse(io::read_file(dir / "unmask/meta_evaluation.json"));
      t += "  meta-classifier leave-one-out MCC " + fixed(ev.at("mcc").get<double>()) + "\n";
      j["unmask_meta_mcc"] = ev.at("mcc");
    }
    j["unmask"] = out;
    s.sections.push_back("unmask");
  }

  require(!s.sections.empty(), ErrorCode::precondition, "no analysis artifacts in " + dir.string());
  j["sections"] = s.sections;
  s.json = j.dump(2) + "\n";
  s.text = t;
  return s;
}

Summary report(const std::filesystem::path& run_dir, bool force) {
  Summary s = summarize(run_dir);
  io::write_artifact(run_dir / "summary.json", s.json, force);
  io::write_artifact(run_dir / "summary.txt", s.text, force);
  return s;
}

}  // namespace stylo::app
