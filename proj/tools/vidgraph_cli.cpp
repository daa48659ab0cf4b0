// Command-line front end for the shot-graph pipeline and the explorer service.
//
//   vidgraph ingest --lexicon F --rankings DIR --manifest F --top-k N
//   vidgraph correlate [--xml F --xml-threshold T]
//   vidgraph similarity
//   vidgraph classify --theta T
//   vidgraph graph --theta-edge T --theta-axon T [--theta-act --decay --lambda --budget]
//   vidgraph serve --addr HOST:PORT --keyframes DIR
//
// All commands work inside --workdir (default "."). Any option can also come
// from a TOML/INI file given with --config.

#include <csignal>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vidgraph/http.hpp"
#include "vidgraph/vidgraph.hpp"

namespace {

httplib::Server* g_server = nullptr;

void stop_server(int) {
  if (g_server) g_server->stop();
}

std::pair<std::string, int> split_addr(const std::string& addr) {
  auto colon = addr.rfind(':');
  if (colon == std::string::npos) return {addr, 8080};
  auto port = vidgraph::detail::parse_int<int>(addr.substr(colon + 1));
  if (!port) throw vidgraph::DomainError("invalid port in --addr '" + addr + "'");
  return {addr.substr(0, colon), *port};
}

}  // namespace

int main(int argc, char** argv) {
  using namespace vidgraph;

  CLI::App app{"Concept-based video shot graph: pipeline and explorer service"};
  app.set_config("--config", "", "TOML/INI file with option overrides");
  app.require_subcommand(1);

  std::string workdir = ".";
  app.add_option("-w,--workdir", workdir, "Directory holding the pipeline artifacts")->capture_default_str();

  ServerConfig cfg;
  auto unit = CLI::Range(0.0, 1.0);

  IngestOptions ingest;
  std::string lexicon, manifest, rankings, detections;
  auto* c_ingest = app.add_subcommand("ingest", "Build corpus.json from a lexicon, rankings and a keyframe manifest");
  c_ingest->add_option("--lexicon", lexicon, "Concept table (id, name)")->required()->check(CLI::ExistingFile);
  c_ingest->add_option("--manifest", manifest, "shot_id [video_id] keyframe_path rows")
      ->required()
      ->check(CLI::ExistingFile);
  auto* o_rank = c_ingest->add_option("--rankings", rankings, "Directory of ranked-shot XML files")
                     ->check(CLI::ExistingDirectory);
  auto* o_det = c_ingest->add_option("--detections", detections, "Score file (shot_id concept score)")
                    ->check(CLI::ExistingFile);
  o_rank->excludes(o_det);
  c_ingest->add_option("--top-k", cfg.top_k, "Rank depth at which a shot carries a concept")->capture_default_str();
  c_ingest->add_option("--tau", cfg.tau, "Score threshold for --detections")->check(unit)->capture_default_str();

  CorrelateOptions correlate;
  std::string xml_out;
  auto* c_corr = app.add_subcommand("correlate", "Compute the concept correlation matrix");
  c_corr->add_option("--xml", xml_out, "Also export the Indexing correlation XML here");
  c_corr->add_option("--xml-threshold", correlate.xml_threshold, "Minimum weight listed in the XML")
      ->check(unit)
      ->capture_default_str();

  auto* c_sim = app.add_subcommand("similarity", "Compute the shot similarity matrix");

  auto* c_cls = app.add_subcommand("classify", "Partition shots into semantic classes");
  c_cls->add_option("--theta", cfg.theta, "Similarity threshold joining two shots")->check(unit)->capture_default_str();

  GraphParams gp;
  auto* c_graph = app.add_subcommand("graph", "Build the exploration graph");
  c_graph->add_option("--theta-edge", cfg.theta_edge, "Minimum similarity of a dendrite edge")
      ->check(unit)
      ->capture_default_str();
  c_graph->add_option("--theta-axon", cfg.theta_axon, "Minimum class similarity of an axon edge")
      ->check(unit)
      ->capture_default_str();
  c_graph->add_option("--theta-act", gp.explore.theta_act, "Activation threshold")->check(unit)->capture_default_str();
  c_graph->add_option("--decay", gp.explore.decay, "Per-hop activation decay")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  c_graph->add_option("--lambda", gp.explore.lambda, "Weight of the user profile")->check(unit)->capture_default_str();
  c_graph->add_option("--budget", gp.explore.budget, "Maximum visible nodes")->check(CLI::PositiveNumber)->capture_default_str();

  std::string addr = "127.0.0.1:8080", keyframes = ".", profiles;
  double s_theta_act = -1, s_decay = -1, s_lambda = -1;
  std::size_t s_budget = 0;
  auto* c_serve = app.add_subcommand("serve", "Serve the explorer HTTP API");
  c_serve->add_option("--addr", addr, "Listen address HOST:PORT")->capture_default_str();
  c_serve->add_option("--keyframes", keyframes, "Keyframe directory root")->capture_default_str();
  c_serve->add_option("--profiles", profiles, "Profile directory (default <workdir>/profiles)");
  auto* o_act = c_serve->add_option("--theta-act", s_theta_act, "Override the graph's activation threshold")->check(unit);
  auto* o_decay = c_serve->add_option("--decay", s_decay, "Override the graph's decay")->check(unit);
  auto* o_lambda = c_serve->add_option("--lambda", s_lambda, "Override the graph's profile weight")->check(unit);
  auto* o_budget = c_serve->add_option("--budget", s_budget, "Override the graph's view budget")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    const fs::path dir = workdir;
    StepResult result;
    if (*c_ingest) {
      ingest.lexicon = lexicon;
      ingest.manifest = manifest;
      if (*o_rank) ingest.rankings_dir = rankings;
      if (*o_det) ingest.detections = detections;
      if (!*o_rank && !*o_det) throw DomainError("ingest needs --rankings or --detections");
      ingest.top_k = cfg.top_k;
      ingest.tau = cfg.tau;
      result = run_ingest(dir, ingest);
    } else if (*c_corr) {
      if (!xml_out.empty()) correlate.xml_out = xml_out;
      result = run_correlate(dir, correlate);
    } else if (*c_sim) {
      result = run_similarity(dir);
    } else if (*c_cls) {
      result = run_classify(dir, cfg.theta);
    } else if (*c_graph) {
      gp.theta_edge = cfg.theta_edge;
      gp.theta_axon = cfg.theta_axon;
      result = run_graph(dir, gp);
    } else if (*c_serve) {
      cfg.workdir = dir;
      cfg.keyframe_root = keyframes;
      cfg.profiles_dir = profiles.empty() ? dir / "profiles" : fs::path(profiles);
      std::tie(cfg.host, cfg.port) = split_addr(addr);
      if (*o_act) cfg.theta_act = s_theta_act;
      if (*o_decay) cfg.decay = s_decay;
      if (*o_lambda) cfg.lambda = s_lambda;
      if (*o_budget) cfg.budget = s_budget;

      ExplorerService service(cfg);
      service.load_from_workdir();
      httplib::Server server;
      mount(server, service);
      g_server = &server;
      std::signal(SIGINT, stop_server);
      std::signal(SIGTERM, stop_server);
      std::cout << "serve: listening on http://" << cfg.host << ":" << cfg.port << std::endl;
      if (!server.listen(cfg.host, cfg.port)) throw Error("cannot listen on " + addr);
      return 0;
    }
    std::cout << result.summary << std::endl;
    return 0;
  } catch (const StaleInputError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
}
