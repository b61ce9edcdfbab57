#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pixelgraph/construction.hpp"
#include "pixelgraph/estimator.hpp"
#include "pixelgraph/models.hpp"

namespace pxg {

using Json = nlohmann::ordered_json;

// Floats in artifacts carry 12 significant digits; re-rounding is idempotent,
// so artifacts are parse -> serialize fixpoints.
inline double round12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

inline std::string rat_string(const BigRat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Errc::io_error, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), Errc::io_error, "cannot write " + path);
  out << text;
}

inline Json parse_json(const std::string& text, const std::string& what) {
  Json j = Json::parse(text, nullptr, false);
  require(!j.is_discarded(), Errc::parse_error, "malformed JSON in " + what);
  return j;
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

// --- pixel graphs -----------------------------------------------------------

inline Json json_of(const PixelGraph& g) {
  Json j;
  j["m"] = g.m;
  j["n"] = g.n;
  j["levels"] = g.levels;
  return j;
}

inline PixelGraph graph_from_json(const Json& j) {
  require(j.is_object() && j.contains("m") && j.contains("n") && j.contains("levels"), Errc::parse_error,
          "graph JSON needs m, n, levels");
  return new_graph(j["m"].get<int>(), j["n"].get<int>(), j["levels"].get<std::vector<std::uint32_t>>());
}

inline Json json_of(const Schedule& s) { return Json(s.ms); }

inline Schedule schedule_from_json(const Json& j) {
  require(j.is_array(), Errc::parse_error, "schedule JSON must be an array");
  return make_schedule(j.get<std::vector<int>>());
}

inline Json json_of(const NestedSequence& seq) {
  Json j;
  j["seed"] = seq.seed;
  j["schedule"] = seq.schedule.ms;
  Json graphs = Json::array();
  for (const PixelGraph& g : seq.graphs) graphs.push_back(json_of(g));
  j["graphs"] = graphs;
  return j;
}

inline NestedSequence nested_from_json(const Json& j) {
  require(j.is_object() && j.contains("seed") && j.contains("schedule") && j.contains("graphs"), Errc::parse_error,
          "nested sequence JSON needs seed, schedule, graphs");
  NestedSequence seq;
  seq.seed = j["seed"].get<std::uint64_t>();
  seq.schedule = schedule_from_json(j["schedule"]);
  for (const Json& gj : j["graphs"]) seq.graphs.push_back(graph_from_json(gj));
  require(seq.graphs.size() == seq.schedule.stages(), Errc::parse_error, "graph count differs from schedule length");
  for (std::size_t i = 0; i < seq.graphs.size(); ++i) {
    require(seq.graphs[i].m == seq.schedule.ms[i] && seq.graphs[i].n == static_cast<int>(i) + 1, Errc::parse_error,
            "graph resolutions do not match the schedule");
    if (i > 0)
      require(is_refinement(seq.graphs[i - 1], seq.graphs[i]), Errc::parse_error,
              "graphs are not a refinement chain");
  }
  return seq;
}

// --- cell sets ---------------------------------------------------------------

inline Json json_of(const CellSet& c) {
  Json j;
  j["depth"] = c.depth;
  Json cells = Json::array();
  for (const Cell& cell : c.cells) cells.push_back(Json::array({cell.col, cell.row}));
  j["cells"] = cells;
  return j;
}

inline CellSet cellset_from_json(const Json& j) {
  require(j.is_object() && j.contains("depth") && j.contains("cells"), Errc::parse_error,
          "cell set JSON needs depth, cells");
  std::vector<Cell> cells;
  for (const Json& cj : j["cells"]) {
    require(cj.is_array() && cj.size() == 2, Errc::parse_error, "cell must be [col,row]");
    cells.push_back(Cell{cj[0].get<std::int64_t>(), cj[1].get<std::int64_t>()});
  }
  return make_cellset(j["depth"].get<int>(), std::move(cells));
}

// --- estimator artifacts ------------------------------------------------------

inline Json json_of(const EstimateResult& r) {
  Json j;
  j["trials"] = r.trials;
  j["epsilon"] = round12(r.epsilon);
  j["depth"] = r.depth_used;
  Json stages = Json::array();
  for (std::size_t i = 0; i < r.hits_per_stage.size(); ++i) {
    Json s;
    s["n"] = i + 1;
    s["m"] = r.stage_ms[i];
    s["hits"] = r.hits_per_stage[i];
    s["p_hat"] = round12(static_cast<double>(r.p_hat_per_stage[i]));
    s["ci"] = Json::array({round12(r.ci_per_stage[i].first), round12(r.ci_per_stage[i].second)});
    stages.push_back(s);
  }
  j["stages"] = stages;
  return j;
}

inline EstimateResult estimate_from_json(const Json& j) {
  require(j.is_object() && j.contains("trials") && j.contains("stages"), Errc::parse_error,
          "estimate JSON needs trials and stages");
  EstimateResult r;
  r.trials = j["trials"].get<std::uint64_t>();
  r.epsilon = j.value("epsilon", 0.0);
  r.depth_used = j.value("depth", 0);
  for (const Json& sj : j["stages"]) {
    r.stage_ms.push_back(sj["m"].get<int>());
    r.hits_per_stage.push_back(sj["hits"].get<std::uint64_t>());
    r.p_hat_per_stage.push_back(BigRat(BigInt(r.hits_per_stage.back()), BigInt(r.trials)));
    r.ci_per_stage.push_back({sj["ci"][0].get<double>(), sj["ci"][1].get<double>()});
  }
  return r;
}

inline Json json_of(const Lemma23Report& rep) {
  Json j;
  j["m1"] = rep.m1;
  j["i_m1"] = rep.i_m1;
  j["ends_fixed"] = rep.ends_fixed;
  j["bound"] = rat_string(rep.bound);
  j["exact_p"] = rat_string(rep.exact_p);
  j["satisfied"] = rep.satisfied;
  return j;
}

inline Lemma23Report lemma23_from_json(const Json& j) {
  Lemma23Report rep;
  rep.m1 = j["m1"].get<int>();
  rep.i_m1 = j["i_m1"].get<std::int64_t>();
  rep.ends_fixed = j["ends_fixed"].get<bool>();
  rep.bound = BigRat(j["bound"].get<std::string>());
  rep.exact_p = BigRat(j["exact_p"].get<std::string>());
  rep.satisfied = j["satisfied"].get<bool>();
  return rep;
}

// --- model specs and profiles --------------------------------------------------

inline std::vector<BigRat> heights_from_json(const Json& j) {
  const Json& arr = j.is_object() && j.contains("heights") ? j["heights"] : j;
  require(arr.is_array(), Errc::parse_error, "heights file must hold a JSON array");
  std::vector<BigRat> hs;
  for (const Json& v : arr) {
    require(v.is_number(), Errc::parse_error, "heights must be numbers");
    hs.push_back(BigRat(v.get<double>()));  // double -> rational is exact
  }
  return hs;
}

// Grammar: horizontal:<h> | cantor-shift | percolation:<p>:<dmax> |
// function-graph:<path-to-JSON-heights>.
inline ModelSpec parse_model_spec(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  ModelSpec spec;
  if (head == "horizontal") {
    require(colon != std::string::npos, Errc::invalid_param, "horizontal needs a height, e.g. horizontal:1/3");
    spec = make_horizontal(detail::parse_unit_rational(text.substr(colon + 1)));
  } else if (head == "cantor-shift") {
    require(colon == std::string::npos, Errc::invalid_param, "cantor-shift takes no parameters");
    spec = make_cantor_shift();
  } else if (head == "percolation") {
    require(colon != std::string::npos, Errc::invalid_param, "percolation needs p and dmax");
    const std::string rest = text.substr(colon + 1);
    const auto colon2 = rest.find(':');
    require(colon2 != std::string::npos, Errc::invalid_param, "percolation needs p and dmax, e.g. percolation:0.8:6");
    try {
      spec = make_percolation(std::stod(rest.substr(0, colon2)), std::stoi(rest.substr(colon2 + 1)));
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail(Errc::invalid_param, "cannot parse percolation parameters in '" + text + "'");
    }
  } else if (head == "function-graph") {
    require(colon != std::string::npos, Errc::invalid_param, "function-graph needs a heights file path");
    const std::string path = text.substr(colon + 1);
    spec = make_function_graph(heights_from_json(parse_json(read_text_file(path), path)));
  } else {
    fail(Errc::invalid_param, "unknown model '" + head + "'");
  }
  spec.text = text;
  return spec;
}

inline ThickProfile profile_from_json(const Json& j) {
  const Json& arr = j.is_object() && j.contains("counts") ? j["counts"] : j;
  require(arr.is_array(), Errc::parse_error, "profile file must hold a JSON array of counts for m = 1, 2, ...");
  ThickProfile p;
  int m = 1;
  for (const Json& v : arr) p.counts[m++] = v.get<std::int64_t>();
  return p;
}

}  // namespace pxg
