#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "longeval/align.hpp"
#include "longeval/assign.hpp"
#include "longeval/corpus.hpp"
#include "longeval/segment.hpp"
#include "longeval/store.hpp"

namespace longeval {

/// Unknown project or annotator slot.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// A FINE judgment for a unit outside the slot's assigned subset, or a
/// judgment for a summary the slot was never assigned.
class UnassignedError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Default annotator instructions shipped with each protocol.
std::string default_instructions(Mode mode, const ScaleSpec& scale = ScaleSpec::likert_0_5());

/// An annotation project: corpus, units, assignments, hints and its
/// judgment log. Everything except the log is immutable after creation.
class Project {
 public:
  /// Validates `spec` (see AnnotationService::create_project for its shape).
  Project(const nlohmann::json& spec, const std::filesystem::path& dir);

  const std::string& id() const { return id_; }
  Mode mode() const { return mode_; }
  const ScaleSpec& scale() const { return scale_; }
  const std::string& instructions() const { return instructions_; }
  const Corpus& corpus() const { return corpus_; }
  const std::vector<Assignment>& assignments() const { return assignments_; }
  const std::vector<FineUnit>& units(const std::string& summary_id) const;
  JudgmentStore& store() const { return *store_; }

  /// Canonical form persisted as project.json.
  const nlohmann::json& spec() const { return spec_; }

  std::vector<std::size_t> slots() const;
  const Assignment* find_assignment(const std::string& summary_id, std::size_t slot) const;
  const HintSet* hints_for(const std::string& summary_id, std::size_t unit, HintMode mode) const;

 private:
  std::string id_;
  Mode mode_ = Mode::Fine;
  ScaleSpec scale_;
  std::string instructions_;
  Corpus corpus_;
  std::map<std::string, std::vector<FineUnit>> units_;
  std::vector<Assignment> assignments_;
  std::map<std::pair<std::string, std::size_t>, std::size_t> assignment_index_;
  std::map<UnitKey, HintSet> algorithmic_hints_;
  std::map<UnitKey, HintSet> gold_hints_;
  nlohmann::json spec_;
  std::unique_ptr<JudgmentStore> store_;
};

/// The annotation loop behind the HTTP API. Thread-safe.
///
/// Layout under `data_dir`: projects/<id>/project.json and
/// projects/<id>/judgments.jsonl. Existing projects are reloaded on start.
class AnnotationService {
 public:
  explicit AnnotationService(std::filesystem::path data_dir);

  /// Body: {project_id, mode, [scale], [instructions], documents: [...],
  /// summaries: [...], [units: [...]], assignments: [...] or
  /// assignments_jsonl: "...", [hints: [...]]}. Units default to
  /// segment_summary. Returns {project_id, slots, assignments}.
  nlohmann::json create_project(const nlohmann::json& body);

  /// Next unjudged task for the slot, or nullopt when the slot is done.
  /// FINE tasks walk each assigned summary's units in ascending order.
  std::optional<nlohmann::json> next_task(const std::string& project_id, std::size_t slot) const;

  /// Appends the judgment after checking it against the slot's assignment.
  /// Returns the ack {seq, submitted_at, key}.
  nlohmann::json submit_judgment(const std::string& project_id, const nlohmann::json& payload);

  nlohmann::json progress(const std::string& project_id) const;
  std::vector<JudgmentRecord> export_judgments(const std::string& project_id) const;
  nlohmann::json project_info(const std::string& project_id) const;
  std::vector<std::string> project_ids() const;

 private:
  std::shared_ptr<const Project> project(const std::string& project_id) const;

  std::filesystem::path data_dir_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const Project>> projects_;
};

/// HTTP+JSON front end:
///   POST /projects
///   GET  /projects/{id}
///   GET  /projects/{id}/tasks/next?slot=N
///   POST /projects/{id}/judgments
///   GET  /projects/{id}/progress
///   GET  /projects/{id}/export
/// plus static files from `ui_dir` when given.
class HttpFrontend {
 public:
  HttpFrontend(AnnotationService& service, std::optional<std::filesystem::path> ui_dir = std::nullopt);
  ~HttpFrontend();

  /// Binds to an ephemeral port and returns it.
  int bind_any_port(const std::string& host = "127.0.0.1");
  bool bind(const std::string& host, int port);
  /// Serves until stop(); call after a bind.
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace longeval
