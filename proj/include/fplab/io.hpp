#pragma once

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>

#include "fplab/assumptions.hpp"
#include "fplab/fp.hpp"
#include "fplab/library.hpp"
#include "fplab/version.hpp"

namespace fplab {

using Json = nlohmann::json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Matrix file format: {"rows": [["1/8","1","0","0"], ...]} with every entry a
// "p/q" or integer string. Anything else is rejected.
inline PayoffMatrix matrix_from_json(const Json& root) {
  if (!root.is_object() || !root.contains("rows"))
    throw ParseError("matrix JSON must be an object with a 'rows' key");
  const Json& rows = root["rows"];
  if (!rows.is_array() || rows.empty())
    throw ParseError("'rows' must be a nonempty array");
  std::vector<std::vector<Rational>> parsed;
  for (const auto& row : rows) {
    if (!row.is_array() || row.empty())
      throw ParseError("each row must be a nonempty array");
    std::vector<Rational> r;
    for (const auto& cell : row) {
      if (!cell.is_string())
        throw ParseError("matrix entries must be rational strings");
      auto v = try_parse_rational(cell.get<std::string>());
      if (!v)
        throw ParseError("not a rational token: '" + cell.get<std::string>() +
                         "'");
      r.push_back(*v);
    }
    if (!parsed.empty() && r.size() != parsed[0].size())
      throw ParseError("ragged matrix rows");
    parsed.push_back(std::move(r));
  }
  return PayoffMatrix::from_rows(parsed);
}

inline Json matrix_to_json(const PayoffMatrix& a) {
  Json rows = Json::array();
  for (int i = 1; i <= a.rows(); ++i) {
    Json row = Json::array();
    for (int j = 1; j <= a.cols(); ++j) row.push_back(to_string(a.entry(i, j)));
    rows.push_back(std::move(row));
  }
  return Json{{"rows", std::move(rows)}};
}

inline PayoffMatrix load_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open game file: " + path.string());
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError("bad JSON in " + path.string() + ": " + e.what());
  }
  return matrix_from_json(j);
}

struct LoadedGame {
  std::string name;
  PayoffMatrix matrix;
};

// Resolves a --game argument: built-in library name first, then file path.
inline LoadedGame load_game(const std::string& name_or_path) {
  if (const auto* entry = find_game(name_or_path))
    return {entry->name, entry->matrix};
  return {std::filesystem::path(name_or_path).stem().string(),
          load_matrix_file(name_or_path)};
}

inline Json vec_to_json(const VecR& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(to_string(v[i]));
  return arr;
}

inline Json action_set_to_json(const ActionSet& s) {
  Json arr = Json::array();
  for (int a : s) arr.push_back(a);
  return arr;
}

inline Json structure_to_json(const StructureReport& rep) {
  Json out = Json::object();
  for (const auto& c : rep.checks)
    out[c.name] = Json{{"applicable", c.applicable},
                       {"pass", c.pass},
                       {"detail", c.detail}};
  return out;
}

inline Json analysis_to_json(const GameAnalysis& ga,
                             const StructureReport* structure = nullptr) {
  Json out;
  out["schema"] = kSchemaVersion;
  out["value"] = to_string(ga.value);
  Json nx = Json::array(), ny = Json::array();
  for (const auto& v : ga.ne_x.vertices()) nx.push_back(vec_to_json(v));
  for (const auto& v : ga.ne_y.vertices()) ny.push_back(vec_to_json(v));
  out["ne_x_vertices"] = std::move(nx);
  out["ne_y_vertices"] = std::move(ny);
  out["a1"] = ga.a1;
  out["a2"] = ga.a2;
  if (ga.a3) {
    Json faces = Json::array();
    for (const auto& f : ga.a3->faces) {
      Json jf{{"I", action_set_to_json(f.columns)}};
      if (f.witness_l)
        jf["witness_l"] = *f.witness_l;
      else if (!f.violating_w.empty())
        jf["violating_w"] = vec_to_json(f.violating_w.front().second);
      faces.push_back(std::move(jf));
    }
    out["a3"] = Json{{"holds", ga.a3->holds}, {"faces", std::move(faces)}};
  } else {
    out["a3"] = nullptr;
  }
  if (ga.normalization) {
    const auto& ng = *ga.normalization;
    Json dom = Json::array();
    for (const auto& d : ng.dominated)
      dom.push_back(Json{{"player", d.player},
                         {"action", d.action},
                         {"pure", d.pure},
                         {"dominator", d.dominator}});
    out["normalization"] = Json{
        {"permutation", ng.permutation},
        {"removed_duplicate_columns", ng.removed_duplicate_columns},
        {"span_violations", ng.span_violations},
        {"dominated", std::move(dom)}};
  } else {
    out["normalization"] = nullptr;
  }
  if (ga.reduced_value) out["reduced_value"] = to_string(*ga.reduced_value);
  if (!ga.faces.empty()) {
    Json faces = Json::array();
    for (const auto& f : ga.faces) {
      Json jf{{"I", action_set_to_json(f.columns)}};
      Json verts = Json::array();
      for (const auto& v : f.region.vertices()) verts.push_back(vec_to_json(v));
      jf["region_vertices"] = std::move(verts);
      faces.push_back(std::move(jf));
    }
    out["faces"] = std::move(faces);
  }
  if (structure) out["structure"] = structure_to_json(*structure);
  return out;
}

namespace detail {

inline std::string join_label(const ActionSet& s) {
  std::string out;
  for (int a : s) {
    if (!out.empty()) out += ';';
    out += std::to_string(a);
  }
  return out;
}

}  // namespace detail

// CSV export. First line is a schema comment; zero-state strategies render as
// empty cells. Exact "p/q" columns first, float mirrors after the labels.
inline std::string trajectory_to_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << "# schema=" << kSchemaVersion << "-trajectory tool=" << kToolVersion
     << "\n";
  os << "k,p1_action,p2_action";
  for (int i = 1; i <= traj.n; ++i) os << ",x_" << i;
  for (int j = 1; j <= traj.m; ++j) os << ",y_" << j;
  os << ",in_X1,in_intr_X1,br_label_I";
  for (int i = 1; i <= traj.n; ++i) os << ",xf_" << i;
  for (int j = 1; j <= traj.m; ++j) os << ",yf_" << j;
  os << "\n";
  for (const auto& r : traj.records) {
    os << r.k << "," << r.p_action << "," << r.q_action;
    for (int i = 0; i < traj.n; ++i)
      os << "," << (r.x_hat ? to_string((*r.x_hat)[i]) : "");
    for (int j = 0; j < traj.m; ++j)
      os << "," << (r.y_hat ? to_string((*r.y_hat)[j]) : "");
    os << "," << (r.in_x1() ? 1 : 0) << "," << (r.in_intr_x1() ? 1 : 0) << ","
       << detail::join_label(ActionSet::from_mask(r.br2_mask));
    os.precision(17);
    for (int i = 0; i < traj.n; ++i) {
      os << ",";
      if (r.x_hat) os << to_double((*r.x_hat)[i]);
    }
    for (int j = 0; j < traj.m; ++j) {
      os << ",";
      if (r.y_hat) os << to_double((*r.y_hat)[j]);
    }
    os << "\n";
  }
  return os.str();
}

inline Json step_record_to_json(const StepRecord& r) {
  Json out{{"k", r.k},
           {"p1_action", r.p_action},
           {"p2_action", r.q_action},
           {"in_X1", r.in_x1()},
           {"in_intr_X1", r.in_intr_x1()},
           {"br_label_I", action_set_to_json(ActionSet::from_mask(r.br2_mask))}};
  out["x"] = r.x_hat ? vec_to_json(*r.x_hat) : Json(nullptr);
  out["y"] = r.y_hat ? vec_to_json(*r.y_hat) : Json(nullptr);
  return out;
}

inline Json trajectory_to_json(const Trajectory& traj) {
  Json out{{"schema", std::string(kSchemaVersion) + "-trajectory"},
           {"tool", kToolVersion},
           {"steps", traj.steps},
           {"n", traj.n},
           {"m", traj.m},
           {"play_counts_p1", traj.play_counts1},
           {"play_counts_p2", traj.play_counts2},
           {"visit_x1_yi", traj.visit_x1_yi}};
  Json recs = Json::array();
  for (const auto& r : traj.records) recs.push_back(step_record_to_json(r));
  out["records"] = std::move(recs);
  return out;
}

inline void write_text_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

// The manifest records the fully resolved configuration next to each output;
// re-running the same manifest reproduces the output byte-exactly. The
// timestamp lives only here, never in the data files.
inline Json make_manifest(const std::string& subcommand, Json config) {
  auto now = std::chrono::system_clock::now();
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(
                  now.time_since_epoch())
                  .count();
  return Json{{"schema", std::string(kSchemaVersion) + "-manifest"},
              {"tool_version", kToolVersion},
              {"subcommand", subcommand},
              {"config", std::move(config)},
              {"timestamp_unix", secs}};
}

inline void write_output_with_manifest(const std::filesystem::path& path,
                                       const std::string& content,
                                       const Json& manifest) {
  write_text_atomic(path, content);
  auto mpath = path;
  mpath += ".manifest.json";
  write_text_atomic(mpath, manifest.dump(2) + "\n");
}

inline Json fp_config_to_json(const FPConfig& cfg,
                              const std::string& game_name) {
  Json out{{"game", game_name},
           {"matrix", matrix_to_json(cfg.matrix)},
           {"steps", cfg.steps},
           {"k1", to_string(cfg.k1)},
           {"k2", to_string(cfg.k2)},
           {"tiebreak_p1", cfg.tiebreak_p1.to_string()},
           {"tiebreak_p2", cfg.tiebreak_p2.to_string()},
           {"seed", cfg.seed},
           {"decimate", cfg.record.decimate}};
  out["x0"] = cfg.x0 ? vec_to_json(cfg.x0->weights()) : Json(nullptr);
  out["y0"] = cfg.y0 ? vec_to_json(cfg.y0->weights()) : Json(nullptr);
  return out;
}

}  // namespace fplab
