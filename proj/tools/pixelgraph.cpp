// Command-line front end: counting, enumeration, simulation, schedule
// planning, lemma checks and SVG rendering with JSON artifacts.
//
// Exit codes: 0 success, 1 failed acceptance predicate, 2 flag or input
// errors. Errors are reported as machine-readable JSON on stderr.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pixelgraph/construction.hpp"
#include "pixelgraph/counting.hpp"
#include "pixelgraph/estimator.hpp"
#include "pixelgraph/models.hpp"
#include "pixelgraph/serialize.hpp"
#include "pixelgraph/svg.hpp"

namespace {

pxg::Caps caps_from_env() {
  pxg::Caps caps;
  if (const char* text = std::getenv("PIXELGRAPH_CAP")) {
    try {
      caps.max_items = std::stoull(text);
    } catch (const std::exception&) {
      pxg::fail(pxg::Errc::invalid_param, "PIXELGRAPH_CAP must be an unsigned integer");
    }
    pxg::require(caps.max_items >= 2, pxg::Errc::invalid_param, "PIXELGRAPH_CAP must be at least 2");
  }
  return caps;
}

std::vector<int> parse_schedule_list(const std::string& text) {
  std::vector<int> ms;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      ms.push_back(std::stoi(item));
    } catch (const std::exception&) {
      pxg::fail(pxg::Errc::invalid_param, "bad schedule entry '" + item + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return ms;
}

pxg::ThickProfileFn profile_by_name(const std::string& name, const pxg::Caps& caps) {
  if (name == "horizontal") return pxg::horizontal_profile();
  if (name == "cantor") return pxg::cantor_profile(caps);
  if (name.rfind("file:", 0) == 0) {
    const std::string path = name.substr(5);
    const pxg::ThickProfile table = pxg::profile_from_json(pxg::parse_json(pxg::read_text_file(path), path));
    return table.fn();
  }
  pxg::fail(pxg::Errc::invalid_param, "profile must be horizontal, cantor, or file:PATH");
}

int run(int argc, char** argv) {
  CLI::App app{"pixelated-graph construction, counting and hitting-probability tool"};
  app.require_subcommand(1);

  const pxg::Caps caps = caps_from_env();

  // count
  auto* count_cmd = app.add_subcommand("count", "print the exact number of connected (m,n) graphs");
  int c_m = 0, c_n = 1;
  count_cmd->add_option("--m", c_m, "x-resolution exponent")->required();
  count_cmd->add_option("--n", c_n, "y-resolution exponent")->required();

  // enumerate
  auto* enum_cmd = app.add_subcommand("enumerate", "write all connected (m,n) graphs as a JSON array");
  int e_m = 0, e_n = 1;
  std::string e_out;
  enum_cmd->add_option("--m", e_m, "x-resolution exponent")->required();
  enum_cmd->add_option("--n", e_n, "y-resolution exponent")->required();
  enum_cmd->add_option("--out", e_out, "output path")->required();

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo hitting estimate over the nested stages");
  std::string s_model, s_schedule, s_out;
  std::uint64_t s_trials = 10000, s_seed = 0;
  int s_depth = 8;
  double s_epsilon = 0.1, s_z = 2.576;
  unsigned s_workers = 1;
  sim_cmd->add_option("--model", s_model, "model spec, e.g. horizontal:1/3")->required();
  sim_cmd->add_option("--schedule", s_schedule, "comma-separated exponents, e.g. 2,4,6")->required();
  sim_cmd->add_option("--trials", s_trials, "number of Monte Carlo trials");
  sim_cmd->add_option("--depth", s_depth, "cover depth");
  sim_cmd->add_option("--seed", s_seed, "master seed (default 0, never wall-clock)");
  sim_cmd->add_option("--epsilon", s_epsilon, "target failure probability")->required();
  sim_cmd->add_option("--z", s_z, "Wilson z quantile");
  sim_cmd->add_option("--workers", s_workers, "worker threads (result is worker-count independent)");
  sim_cmd->add_option("--out", s_out, "output path for the estimate JSON");

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "plan a refinement schedule from a thick-column profile");
  std::string p_profile;
  double p_epsilon = 0.1;
  std::size_t p_stages = 3;
  plan_cmd->add_option("--profile", p_profile, "horizontal | cantor | file:PATH")->required();
  plan_cmd->add_option("--epsilon", p_epsilon, "target failure probability")->required();
  plan_cmd->add_option("--stages", p_stages, "number of stages")->required();

  // check-lemma23
  auto* lem_cmd = app.add_subcommand("check-lemma23", "exact thick-column bound check for one realization");
  std::string l_model;
  int l_m1 = 2, l_depth = 3;
  std::uint64_t l_seed = 0;
  bool l_ends = false;
  lem_cmd->add_option("--model", l_model, "model spec")->required();
  lem_cmd->add_option("--m1", l_m1, "initial x-resolution exponent")->required();
  lem_cmd->add_option("--depth", l_depth, "cover depth")->required();
  lem_cmd->add_option("--seed", l_seed, "realization seed");
  lem_cmd->add_flag("--ends-fixed", l_ends, "pin the end columns and use the relaxed bound");

  // render
  auto* render_cmd = app.add_subcommand("render", "render graphs (and an optional cell cover) to SVG");
  std::string r_in, r_out, r_overlay;
  render_cmd->add_option("--in", r_in, "graph, sequence, or array-of-graphs JSON")->required();
  render_cmd->add_option("--out", r_out, "output SVG path")->required();
  render_cmd->add_option("--overlay", r_overlay, "cell set JSON to draw on top");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    pxg::Json err;
    err["error"] = "FlagError";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 2;
  }

  if (count_cmd->parsed()) {
    std::cout << pxg::count_connected(c_m, c_n, caps).str() << "\n";
    return 0;
  }

  if (enum_cmd->parsed()) {
    pxg::Json arr = pxg::Json::array();
    pxg::for_each_connected(e_m, e_n, [&](const pxg::PixelGraph& g) { arr.push_back(pxg::json_of(g)); }, caps);
    pxg::write_text_file(e_out, pxg::dump_json(arr));
    std::cout << "wrote " << arr.size() << " graphs to " << e_out << "\n";
    return 0;
  }

  if (sim_cmd->parsed()) {
    const pxg::ModelSpec model = pxg::parse_model_spec(s_model);
    const pxg::Schedule schedule = pxg::make_schedule(parse_schedule_list(s_schedule));
    const pxg::EstimateResult res = pxg::estimate_hits(model, schedule, schedule.stages(), s_trials, s_depth,
                                                       s_seed, s_epsilon, s_z, s_workers, caps);
    const std::string text = pxg::dump_json(pxg::json_of(res));
    if (!s_out.empty()) pxg::write_text_file(s_out, text);
    std::cout << text;
    return res.ci_per_stage.back().first >= 1.0 - s_epsilon ? 0 : 1;
  }

  if (plan_cmd->parsed()) {
    const pxg::Schedule s = pxg::plan_schedule(profile_by_name(p_profile, caps), p_epsilon, p_stages, caps);
    std::cout << pxg::dump_json(pxg::json_of(s));
    return 0;
  }

  if (lem_cmd->parsed()) {
    const pxg::ModelSpec model = pxg::parse_model_spec(l_model);
    const pxg::SetSample s = pxg::sample(model, pxg::RngStream(l_seed), pxg::kDefaultRejectionBudget, caps);
    const pxg::Lemma23Report rep = pxg::check_lemma23(s, l_m1, l_depth, l_ends, caps);
    std::cout << pxg::dump_json(pxg::json_of(rep));
    return rep.satisfied ? 0 : 1;
  }

  if (render_cmd->parsed()) {
    const pxg::Json j = pxg::parse_json(pxg::read_text_file(r_in), r_in);
    std::vector<pxg::PixelGraph> graphs;
    if (j.is_array()) {
      for (const pxg::Json& gj : j) graphs.push_back(pxg::graph_from_json(gj));
    } else if (j.is_object() && j.contains("graphs")) {
      for (const pxg::PixelGraph& g : pxg::nested_from_json(j).graphs) graphs.push_back(g);
    } else {
      graphs.push_back(pxg::graph_from_json(j));
    }
    std::optional<pxg::CellSet> overlay;
    if (!r_overlay.empty())
      overlay = pxg::cellset_from_json(pxg::parse_json(pxg::read_text_file(r_overlay), r_overlay));
    pxg::write_text_file(r_out, pxg::render_svg(graphs, overlay ? &*overlay : nullptr));
    std::cout << "wrote " << r_out << "\n";
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const pxg::Error& e) {
    pxg::Json err;
    err["error"] = e.name();
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    pxg::Json err;
    err["error"] = "Internal";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 2;
  }
}
