// Command-line front end: corpus preparation, assignment, analysis and the
// annotation service.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "longeval/align.hpp"
#include "longeval/assign.hpp"
#include "longeval/corpus.hpp"
#include "longeval/csv.hpp"
#include "longeval/jsonl.hpp"
#include "longeval/judgments.hpp"
#include "longeval/metrics.hpp"
#include "longeval/segment.hpp"
#include "longeval/service.hpp"
#include "longeval/stats/agreement.hpp"
#include "longeval/stats/bootstrap.hpp"
#include "longeval/stats/descriptive.hpp"
#include "longeval/stats/partial.hpp"
#include "longeval/stats/timing.hpp"

using namespace longeval;
using nlohmann::json;

namespace {

// Output sink: "-" is stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path);
    if (!file_) throw Error("cannot write " + path);
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void emit_summary(const std::string& path, const json& summary) {
  if (path.empty()) {
    std::cerr << summary.dump(2) << '\n';
    return;
  }
  Output out(path);
  out.stream() << summary.dump(2) << '\n';
}

std::vector<Summary> load_summaries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_summaries(in, path);
}

std::map<std::string, std::vector<FineUnit>> load_units(const std::string& path) {
  std::map<std::string, std::vector<FineUnit>> units;
  for_each_jsonl_file(path, [&](const json& j, std::size_t) {
    FineUnit u = j.get<FineUnit>();
    auto& list = units[u.summary_id];
    if (u.unit_index != list.size()) throw ValidationError("units must be listed in index order");
    list.push_back(std::move(u));
  });
  return units;
}

std::map<std::string, std::vector<FineUnit>> segment_all(const std::vector<Summary>& summaries,
                                                          const SegmentConfig& config) {
  std::map<std::string, std::vector<FineUnit>> units;
  for (const auto& s : summaries) units[s.summary_id] = segment_summary(s.summary_id, s.text, config);
  return units;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = csv::parse_number(item);
    if (!v) throw ValidationError("bad list entry \"" + item + "\"");
    out.push_back(*v);
  }
  return out;
}

std::string format_optional(const std::optional<double>& v) { return v ? csv::format_number(*v) : "UNDEFINED"; }

// ---------------------------------------------------------------------------
// Inputs shared by the analyze subcommands.

struct MatrixInput {
  std::string matrix_path;
  std::string judgments_path;
  std::string documents_path;
  std::string summaries_path;
  std::string mode = "fine";
  std::string system;
  std::size_t annotators = 0;

  void add_to(CLI::App* app) {
    app->add_option("--matrix", matrix_path, "Matrix CSV (summary_id,slot_0,...)");
    app->add_option("--judgments", judgments_path, "Judgment log JSONL");
    app->add_option("--documents", documents_path, "Documents JSONL (for --system)");
    app->add_option("--summaries", summaries_path, "Summaries JSONL (for --system)");
    app->add_option("--mode", mode, "fine or coarse")->check(CLI::IsMember({"fine", "coarse"}));
    app->add_option("--system", system, "Restrict to one system_id");
    app->add_option("--annotators", annotators, "Expected slots per summary (default: inferred)");
  }

  std::optional<Corpus> corpus() const {
    if (documents_path.empty() || summaries_path.empty()) return std::nullopt;
    return ingest_corpus(documents_path, summaries_path);
  }

  AnnotationMatrix load() const {
    if (!matrix_path.empty()) return read_matrix_csv_file(matrix_path);
    if (judgments_path.empty()) throw ValidationError("give --matrix or --judgments");
    const auto log = read_judgments_file(judgments_path);
    const auto judgments = effective_judgments(log);
    const auto c = corpus();
    if (!system.empty() && !c) throw ValidationError("--system needs --documents and --summaries");
    MatrixOptions options;
    if (annotators) options.annotators = annotators;
    if (c) {
      options.include = [&](const std::string& id) {
        const Summary* s = c->find_summary(id);
        if (!s) throw ReferenceError("judgment references unknown summary_id", id);
        return system.empty() || s->system_id == system;
      };
    }
    return build_matrix(judgments, parse_mode(mode), options);
  }
};

std::vector<FineJudgment> load_fine(const std::string& path) {
  if (path.empty()) throw ValidationError("--judgments is required");
  const auto log = read_judgments_file(path);
  return fine_only(effective_judgments(log));
}

struct BootstrapFlags {
  std::size_t k = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  unsigned threads = 0;

  void add_to(CLI::App* app) {
    app->add_option("--k", k, "Bootstrap iterations")->capture_default_str();
    app->add_option("--alpha", alpha, "1 - confidence level")->capture_default_str();
    app->add_option("--seed", seed, "Random seed")->capture_default_str();
    app->add_option("--threads", threads, "Worker threads (0 = all cores)");
  }
  stats::BootstrapOptions options() const { return {k, alpha, seed, threads}; }
};

struct OutputFlags {
  std::string csv = "-";
  std::string json_path;

  void add_to(CLI::App* app) {
    app->add_option("--out", csv, "CSV table destination (- for stdout)")->capture_default_str();
    app->add_option("--summary-json", json_path, "JSON summary destination (default stderr)");
  }
};

// ---------------------------------------------------------------------------

void register_ingest(CLI::App& app) {
  auto* cmd = app.add_subcommand("ingest", "Validate a corpus and write it in canonical JSONL");
  static std::string docs, sums, out_docs, out_sums, metric;
  cmd->add_option("--documents", docs, "Documents JSONL")->required();
  cmd->add_option("--summaries", sums, "Summaries JSONL")->required();
  cmd->add_option("--out-documents", out_docs, "Canonical documents output");
  cmd->add_option("--out-summaries", out_sums, "Canonical summaries output");
  cmd->add_option("--metric", metric, "Also validate a metric score CSV against the corpus");
  cmd->callback([] {
    const Corpus corpus = ingest_corpus(docs, sums);
    if (!out_docs.empty()) {
      Output out(out_docs);
      write_documents(out.stream(), corpus);
    }
    if (!out_sums.empty()) {
      Output out(out_sums);
      write_summaries(out.stream(), corpus);
    }
    json summary{{"documents", corpus.documents().size()}, {"summaries", corpus.summaries().size()}};
    for (const auto& [system, ids] : corpus.systems()) summary["systems"][system] = ids.size();
    if (!metric.empty()) {
      const auto table = ingest_metric_scores(metric, corpus);
      summary["metric"] = {{"name", table.metric_name}, {"rows", table.scores.size()}};
    }
    std::cout << summary.dump(2) << '\n';
  });
}

void register_segment(CLI::App& app) {
  auto* cmd = app.add_subcommand("segment", "Split summaries into fine-grained units (JSONL)");
  static std::string sums, config_path, out_path;
  cmd->add_option("--summaries", sums, "Summaries JSONL")->required();
  cmd->add_option("--config", config_path, "Segmentation config JSON (conjunctions, min_unit_words)");
  cmd->add_option("--out", out_path, "Output JSONL (- for stdout)");
  cmd->callback([] {
    const SegmentConfig config = config_path.empty() ? SegmentConfig{} : SegmentConfig::load(config_path);
    Output out(out_path);
    for (const auto& s : load_summaries(sums)) {
      for (const auto& unit : segment_summary(s.summary_id, s.text, config)) out.stream() << json(unit).dump() << '\n';
    }
  });
}

void register_assign(CLI::App& app) {
  auto* cmd = app.add_subcommand("assign", "Build annotation assignments (JSONL)");
  static std::string sums, units_path, config_path, out_path, mode = "fine", hint_mode = "none", scale = "likert";
  static double fraction = 1.0;
  static std::size_t annotators = 3;
  static std::uint64_t seed = 0;
  cmd->add_option("--summaries", sums, "Summaries JSONL")->required();
  cmd->add_option("--units", units_path, "Units JSONL (default: segment the summaries)");
  cmd->add_option("--config", config_path, "Segmentation config when segmenting");
  cmd->add_option("--mode", mode, "fine or coarse")->check(CLI::IsMember({"fine", "coarse"}));
  cmd->add_option("--fraction", fraction, "Fraction of units per annotator, (0, 1]")->capture_default_str();
  cmd->add_option("--annotators", annotators, "Annotator slots per summary")->capture_default_str();
  cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
  cmd->add_option("--hint-mode", hint_mode, "none, algorithmic, gold, or rotate (cycle per slot and summary)")
      ->check(CLI::IsMember({"none", "algorithmic", "gold", "rotate"}));
  cmd->add_option("--scale", scale, "COARSE scale: likert, da, or MIN-MAX")->capture_default_str();
  cmd->add_option("--out", out_path, "Output JSONL (- for stdout)");
  cmd->callback([] {
    const auto summaries = load_summaries(sums);
    Output out(out_path);
    if (parse_mode(mode) == Mode::Coarse) {
      const ScaleSpec spec = parse_scale(scale);
      for (const auto& s : summaries) {
        for (const auto& a : make_coarse_assignments(s.summary_id, annotators, spec, seed)) out.stream() << json(a).dump() << '\n';
      }
      return;
    }
    const auto units = units_path.empty()
                           ? segment_all(summaries, config_path.empty() ? SegmentConfig{} : SegmentConfig::load(config_path))
                           : load_units(units_path);
    static constexpr HintMode rotation[] = {HintMode::None, HintMode::Algorithmic, HintMode::Gold};
    for (std::size_t si = 0; si < summaries.size(); ++si) {
      const auto& s = summaries[si];
      const auto it = units.find(s.summary_id);
      if (it == units.end()) throw MissingDataError("no units for summary", {s.summary_id});
      auto assignments = make_fine_assignments(s.summary_id, it->second, annotators, fraction, seed);
      for (auto& a : assignments) {
        a.hint_mode = hint_mode == "rotate" ? rotation[(a.annotator_slot + si) % 3] : parse_hint_mode(hint_mode);
        out.stream() << json(a).dump() << '\n';
      }
    }
  });
}

void register_matrix(CLI::App& app) {
  auto* cmd = app.add_subcommand("matrix", "Export the summary x annotator score matrix (CSV)");
  static MatrixInput input;
  static std::string out_path;
  input.add_to(cmd);
  cmd->add_option("--out", out_path, "Output CSV (- for stdout)");
  cmd->callback([] {
    const auto matrix = input.load();
    Output out(out_path);
    write_matrix_csv(out.stream(), matrix);
  });
}

// ---------------------------------------------------------------------------
// analyze

void register_analyze(CLI::App& app) {
  auto* analyze = app.add_subcommand("analyze", "Statistical analyses; each writes a CSV table and a JSON summary");
  analyze->require_subcommand(1);

  {
    auto* cmd = analyze->add_subcommand("stddev", "Mean inter-annotator standard deviation");
    static MatrixInput input;
    static OutputFlags out;
    static std::string denominator = "sample";
    input.add_to(cmd);
    out.add_to(cmd);
    cmd->add_option("--stddev-denominator", denominator, "sample (M-1) or population (M)")
        ->check(CLI::IsMember({"sample", "population"}))
        ->capture_default_str();
    cmd->callback([] {
      const auto matrix = input.load();
      const auto denom = stats::parse_denominator(denominator);
      Output table(out.csv);
      csv::write_row(table.stream(), {"summary_id", "stddev"});
      for (std::size_t i = 0; i < matrix.values.rows(); ++i) {
        csv::write_row(table.stream(),
                       {matrix.summary_ids[i], csv::format_number(stats::stddev(matrix.values.row(i), denom))});
      }
      emit_summary(out.json_path, {{"statistic", "interannotator_stddev"},
                                   {"value", stats::interannotator_stddev(matrix.values, denom)},
                                   {"denominator", denominator},
                                   {"rows", matrix.values.rows()},
                                   {"annotators", matrix.values.cols()}});
    });
  }

  {
    auto* cmd = analyze->add_subcommand("kappa", "Fleiss/Randolph kappa and all-agree fraction over FINE units");
    static std::string judgments;
    static OutputFlags out;
    cmd->add_option("--judgments", judgments, "Judgment log JSONL")->required();
    out.add_to(cmd);
    cmd->callback([] {
      const auto fine = load_fine(judgments);
      const auto table = stats::unit_label_table(fine);
      const auto report = stats::agreement_report(table.labels, 2);
      Output csv_out(out.csv);
      csv::write_row(csv_out.stream(), {"statistic", "value"});
      csv::write_row(csv_out.stream(), {"fleiss_kappa", format_optional(report.fleiss_kappa)});
      csv::write_row(csv_out.stream(), {"randolph_kappa", csv::format_number(report.randolph_kappa)});
      csv::write_row(csv_out.stream(), {"all_agree_fraction", csv::format_number(report.all_agree_fraction)});
      csv::write_row(csv_out.stream(), {"n_items", std::to_string(report.n_items)});
      csv::write_row(csv_out.stream(), {"n_raters", std::to_string(report.n_raters)});
      emit_summary(out.json_path, report);
    });
  }

  {
    auto* cmd = analyze->add_subcommand("bootstrap-mean", "Bootstrap CI of the mean faithfulness score");
    static MatrixInput input;
    static BootstrapFlags flags;
    static OutputFlags out;
    static bool by_system = false;
    input.add_to(cmd);
    flags.add_to(cmd);
    out.add_to(cmd);
    cmd->add_flag("--by-system", by_system, "One CI per system (needs --documents/--summaries)");
    cmd->callback([] {
      std::vector<std::pair<std::string, AnnotationMatrix>> groups;
      if (by_system) {
        const auto corpus = input.corpus();
        if (!corpus) throw ValidationError("--by-system needs --documents and --summaries");
        for (const auto& [system, _] : corpus->systems()) {
          MatrixInput per = input;
          per.system = system;
          try {
            groups.emplace_back(system, per.load());
          } catch (const Error& e) {
            if (std::string(e.what()).rfind("empty matrix", 0) != 0) throw;
          }
        }
      } else {
        groups.emplace_back(input.system.empty() ? "all" : input.system, input.load());
      }
      Output table(out.csv);
      csv::write_row(table.stream(), {"system", "mean", "lower", "upper", "alpha", "k", "seed", "rows"});
      json summary = json::array();
      for (const auto& [name, matrix] : groups) {
        const auto ci = stats::mean_system_ci(matrix.values, flags.options());
        const double point = stats::grand_mean(matrix.values);
        csv::write_row(table.stream(), {name, csv::format_number(point), csv::format_number(ci.lower),
                                        csv::format_number(ci.upper), csv::format_number(ci.alpha),
                                        std::to_string(ci.iterations), std::to_string(ci.seed),
                                        std::to_string(matrix.values.rows())});
        json entry = ci;
        entry["system"] = name;
        entry["mean"] = point;
        summary.push_back(entry);
      }
      emit_summary(out.json_path, summary);
    });
  }

  {
    auto* cmd = analyze->add_subcommand("bootstrap-corr", "Bootstrap CI of human-metric correlation");
    static MatrixInput input;
    static BootstrapFlags flags;
    static OutputFlags out;
    static std::vector<std::string> metrics;
    static std::string method = "pearson";
    input.add_to(cmd);
    flags.add_to(cmd);
    out.add_to(cmd);
    cmd->add_option("--metric", metrics, "Metric CSV (summary_id,<name>); repeatable")->required();
    cmd->add_option("--method", method, "pearson or kendall")->check(CLI::IsMember({"pearson", "kendall"}));
    cmd->callback([] {
      const auto matrix = input.load();
      const auto m = stats::parse_correlation(method);
      Output table(out.csv);
      csv::write_row(table.stream(), {"metric", "method", "correlation", "lower", "upper", "alpha", "k", "seed"});
      json summary = json::array();
      for (const auto& path : metrics) {
        const auto scores = ingest_metric_scores(path);
        const auto ci = stats::metric_correlation_ci(matrix, scores, m, flags.options());
        std::vector<double> aligned;
        for (const auto& id : matrix.summary_ids) aligned.push_back(scores.scores.at(id));
        const double point = stats::correlation(m, stats::row_means(matrix.values), aligned);
        csv::write_row(table.stream(), {scores.metric_name, method, csv::format_number(point), csv::format_number(ci.lower),
                                        csv::format_number(ci.upper), csv::format_number(ci.alpha),
                                        std::to_string(ci.iterations), std::to_string(ci.seed)});
        json entry = ci;
        entry["metric"] = scores.metric_name;
        entry["correlation"] = point;
        summary.push_back(entry);
      }
      emit_summary(out.json_path, summary);
    });
  }

  {
    auto* cmd = analyze->add_subcommand("partial-curve", "Kendall tau and variance under partial annotation");
    static std::string judgments, fractions = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0", denominator = "sample";
    static std::size_t subsets = 1000;
    static std::uint64_t seed = 0;
    static OutputFlags out;
    cmd->add_option("--judgments", judgments, "Full (f = 1.0) FINE judgment log")->required();
    cmd->add_option("--fractions", fractions, "Comma-separated fractions")->capture_default_str();
    cmd->add_option("--subsets", subsets, "Random subsets per fraction")->capture_default_str();
    cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
    cmd->add_option("--stddev-denominator", denominator, "sample or population")
        ->check(CLI::IsMember({"sample", "population"}));
    out.add_to(cmd);
    cmd->callback([] {
      const auto full = stats::full_annotations(load_fine(judgments));
      stats::PartialCurveOptions options;
      options.fractions = parse_list(fractions);
      options.n_subsets = subsets;
      options.seed = seed;
      options.denominator = stats::parse_denominator(denominator);
      const auto curve = stats::partial_annotation_curve(full, options);
      Output table(out.csv);
      csv::write_row(table.stream(), {"fraction", "tau_p2_5", "tau_p50", "tau_p97_5", "stddev_p2_5", "stddev_p50",
                                      "stddev_p97_5", "stddev_mean", "n_subsets", "undefined_tau"});
      for (const auto& p : curve) {
        csv::write_row(table.stream(), {csv::format_number(p.fraction), csv::format_number(p.tau_p2_5),
                                        csv::format_number(p.tau_p50), csv::format_number(p.tau_p97_5),
                                        csv::format_number(p.stddev_p2_5), csv::format_number(p.stddev_p50),
                                        csv::format_number(p.stddev_p97_5), csv::format_number(p.stddev_mean),
                                        std::to_string(p.n_subsets), std::to_string(p.undefined_tau)});
      }
      emit_summary(out.json_path, {{"seed", seed}, {"summaries", full.size()}, {"curve", curve}});
    });
  }

  {
    auto* cmd = analyze->add_subcommand("perturbation", "Accuracy, agreement and timing on perturbed units");
    static std::string judgments, gold;
    static std::int64_t cap_ms = 600000;
    static OutputFlags out;
    cmd->add_option("--judgments", judgments, "FINE judgment log")->required();
    cmd->add_option("--gold", gold, "Gold labels JSONL {summary_id, unit_index, perturbed}")->required();
    cmd->add_option("--cap-ms", cap_ms, "Per-unit time cap for medians")->capture_default_str();
    out.add_to(cmd);
    cmd->callback([] {
      const auto fine = load_fine(judgments);
      const auto labels = stats::read_gold_labels_file(gold);
      stats::TimingOptions options;
      options.cap_ms = cap_ms;
      std::map<std::string, std::vector<FineJudgment>> groups{{"all", fine}};
      for (const auto& j : fine) groups[std::string(to_string(j.hint_mode))].push_back(j);
      Output table(out.csv);
      csv::write_row(table.stream(), {"hint_mode", "accuracy_2way", "fleiss_kappa", "median_time_all_s",
                                      "median_time_first5_s", "n_judgments", "timing_excluded"});
      json summary = json::object();
      for (const auto& [name, list] : groups) {
        const auto r = stats::perturbation_report(list, labels, options);
        csv::write_row(table.stream(), {name, csv::format_number(r.accuracy), format_optional(r.fleiss_kappa),
                                        csv::format_number(r.median_time_all_ms / 1000.0),
                                        csv::format_number(r.median_time_first_ms / 1000.0),
                                        std::to_string(r.n_judgments), std::to_string(r.timing_excluded)});
        summary[name] = r;
      }
      summary["timing_note"] = "per-unit times above the cap are treated as breaks and excluded";
      emit_summary(out.json_path, summary);
    });
  }

  {
    auto* cmd = analyze->add_subcommand("learning-curve", "Mean time per unit by progress decile and hint mode");
    static std::string judgments;
    static std::int64_t cap_ms = 600000;
    static OutputFlags out;
    cmd->add_option("--judgments", judgments, "FINE judgment log")->required();
    cmd->add_option("--cap-ms", cap_ms, "Per-unit time cap")->capture_default_str();
    out.add_to(cmd);
    cmd->callback([] {
      stats::TimingOptions options;
      options.cap_ms = cap_ms;
      const auto rows = stats::learning_curve(load_fine(judgments), options);
      Output table(out.csv);
      csv::write_row(table.stream(), {"hint_mode", "bucket", "mean_elapsed_ms", "count"});
      for (const auto& r : rows) {
        csv::write_row(table.stream(), {std::string(to_string(r.hint_mode)), std::to_string(r.bucket),
                                        csv::format_number(r.mean_elapsed_ms), std::to_string(r.count)});
      }
      emit_summary(out.json_path, {{"rows", rows.size()}, {"cap_ms", cap_ms}});
    });
  }
}

// ---------------------------------------------------------------------------
// align

void register_align(CLI::App& app) {
  auto* align = app.add_subcommand("align", "Summary-unit to source-sentence alignment");
  align->require_subcommand(1);

  {
    auto* cmd = align->add_subcommand("rank", "Score every source sentence for every unit (CSV)");
    static std::string docs, sums, units_path, external, scorer = "bm25", out_path;
    static bool stem = false;
    cmd->add_option("--scorer", scorer, "bm25, rouge1, or external")
        ->check(CLI::IsMember({"bm25", "rouge1", "external"}))
        ->capture_default_str();
    cmd->add_option("--documents", docs, "Documents JSONL")->required();
    cmd->add_option("--summaries", sums, "Summaries JSONL")->required();
    cmd->add_option("--units", units_path, "Units JSONL (default: segment the summaries)");
    cmd->add_option("--external", external, "Precomputed scores CSV for --scorer external");
    cmd->add_flag("--stem", stem, "Porter-stem tokens before matching");
    cmd->add_option("--out", out_path, "Output CSV (- for stdout)");
    cmd->callback([] {
      const Corpus corpus = ingest_corpus(docs, sums);
      const auto units = units_path.empty() ? segment_all(corpus.summaries(), {}) : load_units(units_path);
      std::vector<AlignmentCandidate> all;
      if (scorer == "external") {
        if (external.empty()) throw ValidationError("--scorer external needs --external");
        all = read_candidates_file(external);
        validate_candidates(all, corpus, units);
        auto grouped = group_candidates(std::move(all));
        all.clear();
        for (auto& [_, list] : grouped) all.insert(all.end(), list.begin(), list.end());
      } else {
        for (const auto& s : corpus.summaries()) {
          const auto it = units.find(s.summary_id);
          if (it == units.end()) continue;
          const SourceDocument& doc = corpus.document_for(s);
          for (const auto& unit : it->second) {
            auto ranked = scorer == "bm25" ? bm25_rank(unit, doc, {}, alignment_tokenizer(stem))
                                           : rouge1_rank(unit, doc, alignment_tokenizer(stem));
            all.insert(all.end(), ranked.begin(), ranked.end());
          }
        }
      }
      Output out(out_path);
      write_candidates(out.stream(), all);
    });
  }

  {
    auto* cmd = align->add_subcommand("hints", "Select highlight hints from ranked candidates (JSONL)");
    static std::string candidates, scorer_name, out_path;
    static std::optional<double> threshold;
    static std::size_t max_hints = 5;
    cmd->add_option("--candidates", candidates, "Candidates CSV")->required();
    cmd->add_option("--scorer-name", scorer_name, "Name recorded on the hints; \"gold\" marks gold hints")->required();
    cmd->add_option("--threshold", threshold, "Minimum score (default 0.3 for superpal, else 0)");
    cmd->add_option("--max-hints", max_hints, "Highlights per unit")->capture_default_str();
    cmd->add_option("--out", out_path, "Output JSONL (- for stdout)");
    cmd->callback([] {
      const double t = threshold.value_or(default_hint_threshold(scorer_name));
      Output out(out_path);
      for (auto& [_, list] : group_candidates(read_candidates_file(candidates))) {
        out.stream() << json(select_hints(list, t, max_hints, scorer_name)).dump() << '\n';
      }
    });
  }

  {
    auto* cmd = align->add_subcommand("eval", "Recall@k of ranked candidates against gold alignments (CSV)");
    static std::string predictions, gold, ks = "3,5,10", name, out_path;
    cmd->add_option("--predictions", predictions, "Candidates CSV")->required();
    cmd->add_option("--gold", gold, "Gold alignment JSONL {summary_id, unit_index, sentences}")->required();
    cmd->add_option("--k", ks, "Comma-separated cutoffs")->capture_default_str();
    cmd->add_option("--name", name, "Aligner name for the table");
    cmd->add_option("--out", out_path, "Output CSV (- for stdout)");
    cmd->callback([] {
      const auto preds = group_candidates(read_candidates_file(predictions));
      const auto gold_alignment = read_gold_alignment_file(gold);
      Output out(out_path);
      csv::write_row(out.stream(), {"aligner", "k", "recall", "units"});
      for (double k : parse_list(ks)) {
        if (k < 1 || k != static_cast<double>(static_cast<std::size_t>(k))) throw ValidationError("k must be a positive integer");
        const double r = recall_at_k(preds, gold_alignment, static_cast<std::size_t>(k));
        csv::write_row(out.stream(), {name.empty() ? predictions : name, std::to_string(static_cast<std::size_t>(k)),
                                      csv::format_number(r), std::to_string(gold_alignment.size())});
      }
    });
  }
}

// ---------------------------------------------------------------------------
// metrics

void register_metrics(CLI::App& app) {
  auto* metrics = app.add_subcommand("metrics", "Lexical metrics keyed by summary_id (CSV)");
  metrics->require_subcommand(1);

  {
    auto* cmd = metrics->add_subcommand("rouge", "ROUGE-1/2/L against reference summaries");
    static std::string sums, refs, out_path;
    static bool stem = false;
    cmd->add_option("--summaries", sums, "Summaries JSONL")->required();
    cmd->add_option("--references", refs, "References JSONL {doc_id, text}")->required();
    cmd->add_flag("--stem", stem, "Porter-stem tokens");
    cmd->add_option("--out", out_path, "Output CSV (- for stdout)");
    cmd->callback([] {
      std::map<std::string, std::string> reference;
      for_each_jsonl_file(refs, [&](const json& j, std::size_t) {
        reference[j.at("doc_id").get<std::string>()] = normalize_text(j.at("text").get<std::string>());
      });
      Output out(out_path);
      csv::write_row(out.stream(), {"summary_id", "system_id", "rouge1_p", "rouge1_r", "rouge1_f", "rouge2_p", "rouge2_r",
                                    "rouge2_f", "rougeL_p", "rougeL_r", "rougeL_f"});
      const auto tok = metric_tokenizer(stem);
      for (const auto& s : load_summaries(sums)) {
        const auto it = reference.find(s.doc_id);
        if (it == reference.end()) throw ReferenceError("no reference for document", s.doc_id);
        csv::Row row{s.summary_id, s.system_id};
        for (const auto& score : {rouge_n(s.text, it->second, 1, tok), rouge_n(s.text, it->second, 2, tok),
                                  rouge_l(s.text, it->second, tok)}) {
          row.push_back(csv::format_number(score.precision));
          row.push_back(csv::format_number(score.recall));
          row.push_back(csv::format_number(score.f1));
        }
        csv::write_row(out.stream(), row);
      }
    });
  }

  {
    auto* cmd = metrics->add_subcommand("extractiveness", "Fraction of summary n-grams found in the source");
    static std::string docs, sums, out_path;
    static int n = 2;
    cmd->add_option("--documents", docs, "Documents JSONL")->required();
    cmd->add_option("--summaries", sums, "Summaries JSONL")->required();
    cmd->add_option("--n", n, "N-gram order")->capture_default_str();
    cmd->add_option("--out", out_path, "Output CSV (- for stdout)");
    cmd->callback([] {
      const Corpus corpus = ingest_corpus(docs, sums);
      Output out(out_path);
      csv::write_row(out.stream(), {"summary_id", "system_id", "extractiveness"});
      for (const auto& s : corpus.summaries()) {
        const double e = extractiveness(s.text, corpus.document_for(s).text, n);
        csv::write_row(out.stream(), {s.summary_id, s.system_id, csv::format_number(e)});
      }
    });
  }
}

// ---------------------------------------------------------------------------
// serve

HttpFrontend* g_frontend = nullptr;

void handle_signal(int) {
  if (g_frontend) g_frontend->stop();
}

void register_serve(CLI::App& app) {
  auto* cmd = app.add_subcommand("serve", "Run the annotation service");
  static int port = 8080;
  static std::string host = "127.0.0.1", data_dir = "./longeval-data", ui_dir;
  cmd->add_option("--port", port, "Listen port (0 picks one)")->envname("LONGEVAL_PORT")->capture_default_str();
  cmd->add_option("--host", host, "Listen address")->envname("LONGEVAL_HOST")->capture_default_str();
  cmd->add_option("--data-dir", data_dir, "Project and judgment storage")->envname("LONGEVAL_DATA_DIR")->capture_default_str();
  cmd->add_option("--ui-dir", ui_dir, "Static UI bundle to serve at /")->envname("LONGEVAL_UI_DIR");
  cmd->callback([] {
    AnnotationService service(data_dir);
    HttpFrontend frontend(service, ui_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(ui_dir));
    int bound = port;
    if (port == 0) {
      bound = frontend.bind_any_port(host);
      if (bound < 0) throw Error("cannot bind " + host);
    } else if (!frontend.bind(host, port)) {
      throw Error("cannot bind " + host + ":" + std::to_string(port));
    }
    g_frontend = &frontend;
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    std::cout << "listening on http://" << host << ":" << bound << " (data: " << data_dir << ")" << std::endl;
    frontend.listen();
    g_frontend = nullptr;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"longeval: faithfulness annotation and analysis for long-form summaries"};
  app.require_subcommand(1);
  register_ingest(app);
  register_segment(app);
  register_assign(app);
  register_matrix(app);
  register_analyze(app);
  register_align(app);
  register_metrics(app);
  register_serve(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const longeval::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
