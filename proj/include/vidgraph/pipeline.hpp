#pragma once

/// \file pipeline.hpp
/// The batch pipeline over a work directory:
///
///   ingest     -> corpus.json
///   correlate  -> correlation.json   (+ optional Indexing XML)
///   similarity -> similarity.json
///   classify   -> partition.json
///   graph      -> graph.json
///
/// Every step re-hashes its inputs and refuses to run when an upstream
/// artifact is missing or was derived from different content.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vidgraph/classification.hpp"
#include "vidgraph/correlation_xml.hpp"
#include "vidgraph/error.hpp"
#include "vidgraph/graph.hpp"
#include "vidgraph/ingest.hpp"
#include "vidgraph/semantics.hpp"
#include "vidgraph/store.hpp"

namespace vidgraph {

namespace fs = std::filesystem;

inline constexpr const char* kCorpusFile = "corpus.json";
inline constexpr const char* kCorrelationFile = "correlation.json";
inline constexpr const char* kSimilarityFile = "similarity.json";
inline constexpr const char* kPartitionFile = "partition.json";
inline constexpr const char* kGraphFile = "graph.json";

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Writes through a sibling temp file so readers never see a partial document.
inline void write_file(const fs::path& path, std::string_view bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

struct StepResult {
  std::string summary;
  fs::path output;
};

namespace detail {

inline std::string read_upstream(const fs::path& dir, const char* name, const char* producer) {
  const auto path = dir / name;
  if (!fs::exists(path)) throw StaleInputError(path.string() + " is missing; run '" + producer + "' first");
  return read_file(path);
}

inline void expect_hash(const std::string& recorded, const std::string& actual, const std::string& what) {
  if (recorded != actual) throw StaleInputError(what + " was built from different inputs; re-run the earlier steps");
}

}  // namespace detail

struct IngestOptions {
  fs::path lexicon;
  fs::path manifest;
  std::optional<fs::path> rankings_dir;  // TRECVID ranked lists, one per *.xml
  std::optional<fs::path> detections;    // or raw detector scores
  std::size_t top_k = 2000;
  double tau = 0.5;
};

inline std::vector<RankingDocument> read_rankings(const fs::path& dir, const ConceptLexicon& lexicon) {
  if (!fs::is_directory(dir)) throw NotFoundError("rankings directory " + dir.string() + " not found");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".xml") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<RankingDocument> docs;
  for (const auto& f : files) {
    try {
      docs.push_back(parse_ranking_xml(read_file(f), lexicon));
    } catch (const ParseError& e) {
      throw ParseError(f.filename().string() + ": " + e.what());
    }
  }
  return docs;
}

inline StepResult run_ingest(const fs::path& workdir, const IngestOptions& opt) {
  if (opt.rankings_dir.has_value() == opt.detections.has_value())
    throw DomainError("ingest needs exactly one of rankings or detections");
  if (!(opt.tau >= 0.0 && opt.tau <= 1.0)) throw DomainError("tau must lie in [0,1]");
  const auto lexicon = parse_lexicon(read_file(opt.lexicon));
  const auto manifest = parse_manifest(read_file(opt.manifest));
  Corpus corpus = opt.rankings_dir
                      ? assemble_corpus(read_rankings(*opt.rankings_dir, lexicon), manifest, lexicon, opt.top_k)
                      : assemble_corpus_from_detections(parse_detections(read_file(*opt.detections), lexicon),
                                                        manifest, lexicon, opt.tau);
  if (auto diags = validate_corpus(corpus); !diags.empty())
    throw DomainError("invalid corpus: " + diags.front().subject + ": " + diags.front().rule);
  const auto out = workdir / kCorpusFile;
  write_file(out, save_corpus(corpus));
  return {"ingest: " + std::to_string(corpus.shots.size()) + " shots (" + std::to_string(corpus.unindexed().size()) +
              " unindexed), " + std::to_string(corpus.lexicon.size()) + " concepts -> " + out.string(),
          out};
}

struct CorrelateOptions {
  std::optional<fs::path> xml_out;
  double xml_threshold = 0.0;
};

inline StepResult run_correlate(const fs::path& workdir, const CorrelateOptions& opt = {}) {
  const auto corpus_bytes = detail::read_upstream(workdir, kCorpusFile, "ingest");
  const auto corpus = load_corpus(corpus_bytes);
  const auto matrix = correlation_matrix(corpus);
  const auto out = workdir / kCorrelationFile;
  write_file(out, save_correlation(matrix, content_hash(corpus_bytes)));
  std::string summary = "correlate: " + std::to_string(matrix.size()) + " concepts, " +
                        std::to_string(matrix.size() * matrix.size()) + " entries -> " + out.string();
  if (opt.xml_out) {
    if (!(opt.xml_threshold >= 0.0 && opt.xml_threshold <= 1.0))
      throw DomainError("xml threshold must lie in [0,1]");
    write_file(*opt.xml_out, export_correlation_xml(matrix, corpus.lexicon, opt.xml_threshold));
    summary += ", " + opt.xml_out->string();
  }
  return {summary, out};
}

inline StepResult run_similarity(const fs::path& workdir) {
  const auto corpus_bytes = detail::read_upstream(workdir, kCorpusFile, "ingest");
  const auto corr_bytes = detail::read_upstream(workdir, kCorrelationFile, "correlate");
  const auto corr = load_correlation(corr_bytes);
  detail::expect_hash(corr.corpus_hash, content_hash(corpus_bytes), kCorrelationFile);
  const auto corpus = load_corpus(corpus_bytes);
  const auto sim = similarity_matrix(corpus, corr.matrix);
  const auto out = workdir / kSimilarityFile;
  write_file(out, save_similarity(sim, content_hash(corpus_bytes), content_hash(corr_bytes)));
  return {"similarity: " + std::to_string(sim.size()) + " indexed shots, " + std::to_string(sim.unindexed().size()) +
              " unindexed -> " + out.string(),
          out};
}

namespace detail {

// Loads similarity.json after checking it against corpus.json and correlation.json.
inline std::pair<SimilarityArtifact, std::string> checked_similarity(const fs::path& workdir) {
  const auto sim_bytes = read_upstream(workdir, kSimilarityFile, "similarity");
  const auto corpus_bytes = read_upstream(workdir, kCorpusFile, "ingest");
  const auto corr_bytes = read_upstream(workdir, kCorrelationFile, "correlate");
  auto sim = load_similarity(sim_bytes);
  expect_hash(sim.corpus_hash, content_hash(corpus_bytes), kSimilarityFile);
  expect_hash(sim.correlation_hash, content_hash(corr_bytes), kSimilarityFile);
  return {std::move(sim), content_hash(sim_bytes)};
}

}  // namespace detail

inline StepResult run_classify(const fs::path& workdir, double theta) {
  auto [sim, sim_hash] = detail::checked_similarity(workdir);
  const auto partition = classify(sim.matrix, theta);
  const auto out = workdir / kPartitionFile;
  write_file(out, save_partition(partition, sim_hash));
  return {"classify: " + std::to_string(partition.classes.size()) + " classes over " +
              std::to_string(sim.matrix.size()) + " shots (theta=" + detail::format_decimal(theta, 4) + ") -> " +
              out.string(),
          out};
}

inline StepResult run_graph(const fs::path& workdir, GraphParams params) {
  params.explore.validate();
  auto [sim, sim_hash] = detail::checked_similarity(workdir);
  const auto part_bytes = detail::read_upstream(workdir, kPartitionFile, "classify");
  auto part = load_partition(part_bytes);
  detail::expect_hash(part.similarity_hash, sim_hash, kPartitionFile);
  const auto corpus_bytes = read_file(workdir / kCorpusFile);
  const auto corpus = load_corpus(corpus_bytes);

  params.theta = part.partition.theta;
  GraphArtifact art;
  art.graph = build_graph(corpus, part.partition, sim.matrix, params.theta_edge, params.theta_axon);
  art.partition = std::move(part.partition);
  art.params = params;
  art.corpus_hash = content_hash(corpus_bytes);
  art.similarity_hash = sim_hash;
  art.partition_hash = content_hash(part_bytes);
  const auto out = workdir / kGraphFile;
  write_file(out, save_graph(art));
  std::size_t dendrites = 0, axons = 0;
  for (const auto& e : art.graph.edges()) (e.kind == EdgeKind::dendrite ? dendrites : axons)++;
  return {"graph: " + std::to_string(art.graph.size()) + " nodes, " + std::to_string(art.partition.classes.size()) +
              " classes, " + std::to_string(dendrites) + " dendrites, " + std::to_string(axons) + " axons -> " +
              out.string(),
          out};
}

/// Everything the explorer service needs, checked against the corpus.
struct ServingState {
  Corpus corpus;
  GraphArtifact graph;
  std::string graph_document;
};

inline ServingState load_serving_state(const fs::path& workdir) {
  const auto corpus_bytes = detail::read_upstream(workdir, kCorpusFile, "ingest");
  auto graph_bytes = detail::read_upstream(workdir, kGraphFile, "graph");
  auto graph = load_graph(graph_bytes);
  detail::expect_hash(graph.corpus_hash, content_hash(corpus_bytes), kGraphFile);
  return {load_corpus(corpus_bytes), std::move(graph), std::move(graph_bytes)};
}

}  // namespace vidgraph
