#include "longeval/service.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>

#include <httplib.h>

#include "longeval/csv.hpp"
#include "longeval/error.hpp"
#include "longeval/jsonl.hpp"
#include "longeval/stats/descriptive.hpp"

namespace longeval {

std::string default_instructions(Mode mode, const ScaleSpec& scale) {
  if (mode == Mode::Fine) {
    return "A span of the summary is highlighted. Decide whether everything it states is supported by the "
           "source document: answer Yes if the source states it or it clearly follows from the source, and No if "
           "the source contradicts it or does not mention it. Judge only the highlighted span; the rest of the "
           "summary is context.\n\n"
           "Some source sentences may be highlighted as hints. Use Next Hint to move between them. Hints are "
           "produced automatically and can be wrong or incomplete, so never decide from the hints alone. Read the "
           "source yourself and use your browser's find (Ctrl+F) to search for names and keywords.";
  }
  return "Read the source document and the whole summary, then rate how faithful the summary is to the source on "
         "a scale from " +
         csv::format_number(scale.min) + " to " + csv::format_number(scale.max) + ". " +
         csv::format_number(scale.min) + " means most or all of the summary is wrong or unsupported by the source; " +
         csv::format_number(scale.max) +
         " means most or all of it is correct. Judge factual support only, not style or coverage. You may add an "
         "optional comment, for example to explain a borderline rating.";
}

// ---------------------------------------------------------------------------
// Project

namespace {

const std::regex& project_id_pattern() {
  static const std::regex pattern("[A-Za-z0-9_.-]{1,64}");
  return pattern;
}

std::vector<Assignment> parse_assignments(const nlohmann::json& spec) {
  std::vector<Assignment> out;
  if (spec.contains("assignments")) {
    for (const auto& a : spec.at("assignments")) out.push_back(a.get<Assignment>());
  }
  if (spec.contains("assignments_jsonl")) {
    std::istringstream in(spec.at("assignments_jsonl").get<std::string>());
    for_each_jsonl(in, "assignments_jsonl", [&](const nlohmann::json& j, std::size_t) { out.push_back(j.get<Assignment>()); });
  }
  return out;
}

}  // namespace

Project::Project(const nlohmann::json& spec, const std::filesystem::path& dir) {
  id_ = spec.at("project_id").get<std::string>();
  if (!std::regex_match(id_, project_id_pattern())) throw ValidationError("project_id must match [A-Za-z0-9_.-]{1,64}");
  mode_ = parse_mode(spec.at("mode").get<std::string>());
  scale_ = spec.contains("scale") ? spec.at("scale").get<ScaleSpec>() : ScaleSpec::likert_0_5();
  instructions_ = spec.value("instructions", default_instructions(mode_, scale_));

  std::vector<SourceDocument> documents;
  for (const auto& d : spec.at("documents")) documents.push_back(parse_document(d));
  std::vector<Summary> summaries;
  for (const auto& s : spec.at("summaries")) summaries.push_back(parse_summary(s));
  corpus_ = Corpus(std::move(documents), std::move(summaries));

  if (spec.contains("units")) {
    for (const auto& u : spec.at("units")) {
      FineUnit unit = u.get<FineUnit>();
      const Summary* s = corpus_.find_summary(unit.summary_id);
      if (!s) throw ReferenceError("unit for unknown summary", unit.summary_id);
      if (unit.span.end > s->text.size()) throw ValidationError("unit span beyond summary text: " + unit.summary_id);
      auto& list = units_[unit.summary_id];
      if (unit.unit_index != list.size()) throw ValidationError("units must be listed in index order: " + unit.summary_id);
      list.push_back(std::move(unit));
    }
  }
  for (const Summary& s : corpus_.summaries()) {
    if (!units_.contains(s.summary_id)) units_[s.summary_id] = segment_summary(s.summary_id, s.text);
  }

  assignments_ = parse_assignments(spec);
  if (assignments_.empty()) throw ValidationError("project has no assignments");
  for (std::size_t i = 0; i < assignments_.size(); ++i) {
    const Assignment& a = assignments_[i];
    if (!corpus_.find_summary(a.summary_id)) throw ReferenceError("assignment for unknown summary", a.summary_id);
    if (a.mode != mode_) throw ValidationError("assignment mode differs from project mode: " + a.summary_id);
    a.validate(units_.at(a.summary_id).size());
    if (!assignment_index_.emplace(std::make_pair(a.summary_id, a.annotator_slot), i).second) {
      throw DuplicateError("two assignments for " + a.summary_id + " slot " + std::to_string(a.annotator_slot));
    }
  }

  if (spec.contains("hints")) {
    for (const auto& h : spec.at("hints")) {
      HintSet hints = h.get<HintSet>();
      const Summary* s = corpus_.find_summary(hints.summary_id);
      if (!s) throw ReferenceError("hints for unknown summary", hints.summary_id);
      const auto n_sentences = corpus_.document_for(*s).sentences.size();
      for (std::size_t idx : hints.highlights) {
        if (idx >= n_sentences) throw ReferenceError("hint sentence out of range", hints.summary_id);
      }
      auto& target = hints.scorer_name == "gold" ? gold_hints_ : algorithmic_hints_;
      UnitKey key{hints.summary_id, hints.unit_index};
      if (!target.emplace(key, std::move(hints)).second) throw DuplicateError("two hint sets for one unit");
    }
  }

  // Canonical spec: everything resolved, so a reload reproduces this project.
  spec_ = {{"project_id", id_}, {"mode", to_string(mode_)}, {"scale", scale_}, {"instructions", instructions_}};
  spec_["documents"] = nlohmann::json::array();
  for (const auto& d : corpus_.documents()) spec_["documents"].push_back(document_to_json(d));
  spec_["summaries"] = nlohmann::json::array();
  for (const auto& s : corpus_.summaries()) spec_["summaries"].push_back(summary_to_json(s));
  spec_["units"] = nlohmann::json::array();
  for (const auto& s : corpus_.summaries()) {
    for (const auto& u : units_.at(s.summary_id)) spec_["units"].push_back(u);
  }
  spec_["assignments"] = assignments_;
  spec_["hints"] = nlohmann::json::array();
  for (const auto* hints : {&algorithmic_hints_, &gold_hints_}) {
    for (const auto& [_, h] : *hints) spec_["hints"].push_back(h);
  }

  store_ = std::make_unique<JudgmentStore>(dir / "judgments.jsonl");
}

const std::vector<FineUnit>& Project::units(const std::string& summary_id) const { return units_.at(summary_id); }

std::vector<std::size_t> Project::slots() const {
  std::set<std::size_t> slots;
  for (const auto& a : assignments_) slots.insert(a.annotator_slot);
  return {slots.begin(), slots.end()};
}

const Assignment* Project::find_assignment(const std::string& summary_id, std::size_t slot) const {
  const auto it = assignment_index_.find({summary_id, slot});
  return it == assignment_index_.end() ? nullptr : &assignments_[it->second];
}

const HintSet* Project::hints_for(const std::string& summary_id, std::size_t unit, HintMode mode) const {
  if (mode == HintMode::None) return nullptr;
  const auto& source = mode == HintMode::Gold ? gold_hints_ : algorithmic_hints_;
  const auto it = source.find({summary_id, unit});
  return it == source.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// AnnotationService

AnnotationService::AnnotationService(std::filesystem::path data_dir) : data_dir_(std::move(data_dir)) {
  const auto root = data_dir_ / "projects";
  std::filesystem::create_directories(root);
  for (const auto& entry : std::filesystem::directory_iterator(root)) {
    const auto spec_path = entry.path() / "project.json";
    if (!entry.is_directory() || !std::filesystem::exists(spec_path)) continue;
    std::ifstream in(spec_path);
    auto project = std::make_shared<const Project>(nlohmann::json::parse(in), entry.path());
    projects_.emplace(project->id(), std::move(project));
  }
}

std::shared_ptr<const Project> AnnotationService::project(const std::string& project_id) const {
  std::shared_lock lock(mutex_);
  const auto it = projects_.find(project_id);
  if (it == projects_.end()) throw NotFoundError("unknown project: " + project_id);
  return it->second;
}

std::vector<std::string> AnnotationService::project_ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, _] : projects_) ids.push_back(id);
  return ids;
}

nlohmann::json AnnotationService::create_project(const nlohmann::json& body) {
  if (!body.is_object() || !body.contains("project_id") || !body.at("project_id").is_string()) {
    throw ValidationError("project body needs a string project_id");
  }
  const std::string id = body.at("project_id").get<std::string>();
  if (!std::regex_match(id, project_id_pattern())) throw ValidationError("project_id must match [A-Za-z0-9_.-]{1,64}");

  std::unique_lock lock(mutex_);
  if (projects_.contains(id)) throw DuplicateError("project already exists: " + id);
  const auto dir = data_dir_ / "projects" / id;
  if (std::filesystem::exists(dir / "project.json")) throw DuplicateError("project directory already exists: " + id);

  std::shared_ptr<const Project> project;
  try {
    std::filesystem::create_directories(dir);
    project = std::make_shared<const Project>(body, dir);
    const auto tmp = dir / "project.json.tmp";
    {
      std::ofstream out(tmp);
      out << project->spec().dump();
      out.flush();
      if (!out) throw Error("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, dir / "project.json");
  } catch (const nlohmann::json::exception& e) {
    std::filesystem::remove_all(dir);
    throw ValidationError(std::string("bad project body: ") + e.what());
  } catch (...) {
    std::filesystem::remove_all(dir);
    throw;
  }
  projects_.emplace(id, project);
  return {{"project_id", id}, {"slots", project->slots()}, {"assignments", project->assignments().size()}};
}

nlohmann::json AnnotationService::project_info(const std::string& project_id) const {
  const auto p = project(project_id);
  return {{"project_id", p->id()},
          {"mode", to_string(p->mode())},
          {"scale", p->scale()},
          {"instructions", p->instructions()},
          {"slots", p->slots()},
          {"summaries", p->corpus().summaries().size()}};
}

namespace {

nlohmann::json source_view(const SourceDocument& doc) {
  nlohmann::json sentences = nlohmann::json::array();
  for (const auto& s : doc.sentences) sentences.push_back({{"start", s.span.start}, {"end", s.span.end}});
  return {{"doc_id", doc.doc_id}, {"text", doc.text}, {"sentences", sentences}};
}

}  // namespace

std::optional<nlohmann::json> AnnotationService::next_task(const std::string& project_id, std::size_t slot) const {
  const auto p = project(project_id);
  const auto slots = p->slots();
  if (!std::binary_search(slots.begin(), slots.end(), slot)) {
    throw NotFoundError("slot " + std::to_string(slot) + " has no assignments in project " + project_id);
  }
  const JudgmentStore& store = p->store();
  for (const Assignment& a : p->assignments()) {
    if (a.annotator_slot != slot) continue;
    const Summary& summary = *p->corpus().find_summary(a.summary_id);
    const SourceDocument& doc = p->corpus().document_for(summary);
    nlohmann::json view{{"status", "task"},
                        {"project_id", p->id()},
                        {"mode", to_string(p->mode())},
                        {"assignment", a},
                        {"summary_id", summary.summary_id},
                        {"summary_text", summary.text},
                        {"source", source_view(doc)},
                        {"instructions", p->instructions()},
                        {"hint_mode", to_string(a.hint_mode)}};
    if (p->mode() == Mode::Coarse) {
      if (store.contains({Mode::Coarse, a.summary_id, 0, slot})) continue;
      view["scale"] = a.scale.value_or(p->scale());
      view["hints"] = nlohmann::json::array();
      return view;
    }
    const auto& units = p->units(a.summary_id);
    for (std::size_t pos = 0; pos < a.unit_indices.size(); ++pos) {
      const std::size_t u = a.unit_indices[pos];
      if (store.contains({Mode::Fine, a.summary_id, u, slot})) continue;
      const FineUnit& unit = units[u];
      view["active_unit"] = {{"unit_index", u}, {"start", unit.span.start}, {"end", unit.span.end}, {"text", unit.text}};
      view["position"] = {{"index", pos + 1}, {"total", a.unit_indices.size()}};
      nlohmann::json hints = nlohmann::json::array();
      if (const HintSet* h = p->hints_for(a.summary_id, u, a.hint_mode)) {
        for (std::size_t k = 0; k < h->highlights.size(); ++k) {
          const auto& sentence = doc.sentences[h->highlights[k]];
          nlohmann::json hint{{"sentence_index", sentence.index}, {"start", sentence.span.start}, {"end", sentence.span.end}};
          if (k < h->scores.size()) hint["score"] = h->scores[k];
          hints.push_back(std::move(hint));
        }
      }
      view["hints"] = std::move(hints);
      return view;
    }
  }
  return std::nullopt;
}

nlohmann::json AnnotationService::submit_judgment(const std::string& project_id, const nlohmann::json& payload) {
  const auto p = project(project_id);
  if (!payload.is_object()) throw ValidationError("judgment payload must be a JSON object");

  nlohmann::json body = payload;
  if (!body.contains("type")) body["type"] = to_string(p->mode());
  if (body.at("type").get<std::string>() != to_string(p->mode())) {
    throw ValidationError("judgment type does not match project mode " + std::string(to_string(p->mode())));
  }
  Judgment judgment;
  try {
    judgment = judgment_from_json(body);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad judgment payload: ") + e.what());
  }

  const JudgmentKey key = key_of(judgment);
  const Assignment* a = p->find_assignment(key.summary_id, key.annotator_slot);
  if (!a) throw UnassignedError("no assignment for " + key.summary_id + " slot " + std::to_string(key.annotator_slot));
  const std::string now = utc_timestamp();
  if (auto* f = std::get_if<FineJudgment>(&judgment)) {
    if (!std::binary_search(a->unit_indices.begin(), a->unit_indices.end(), f->unit_index)) {
      throw UnassignedError("unit " + std::to_string(f->unit_index) + " of " + f->summary_id +
                            " is not assigned to slot " + std::to_string(f->annotator_slot));
    }
    f->hint_mode = a->hint_mode;
    f->submitted_at = now;
  } else {
    auto& c = std::get<CoarseJudgment>(judgment);
    c.scale = a->scale.value_or(p->scale());
    c.submitted_at = now;
  }

  std::optional<std::uint64_t> supersedes;
  if (payload.contains("supersedes") && !payload.at("supersedes").is_null()) {
    supersedes = payload.at("supersedes").get<std::uint64_t>();
  }
  const JudgmentRecord record = p->store().append(std::move(judgment), supersedes);
  return {{"status", "ok"}, {"seq", record.seq}, {"submitted_at", now}, {"key", key.to_string()}};
}

nlohmann::json AnnotationService::progress(const std::string& project_id) const {
  const auto p = project(project_id);
  std::map<std::size_t, std::size_t> totals;
  for (const Assignment& a : p->assignments()) {
    totals[a.annotator_slot] += p->mode() == Mode::Fine ? a.unit_indices.size() : 1;
  }
  std::map<std::size_t, std::vector<double>> elapsed;
  for (const Judgment& j : p->store().effective()) {
    std::visit([&](const auto& v) { elapsed[v.annotator_slot].push_back(static_cast<double>(v.elapsed_ms)); }, j);
  }
  nlohmann::json slots = nlohmann::json::array();
  std::size_t judged_all = 0, total_all = 0;
  for (const auto& [slot, total] : totals) {
    const auto& times = elapsed[slot];
    nlohmann::json row{{"slot", slot}, {"judged", times.size()}, {"total", total}};
    row["median_elapsed_ms"] = times.empty() ? nlohmann::json(nullptr) : nlohmann::json(stats::median(times));
    slots.push_back(std::move(row));
    judged_all += times.size();
    total_all += total;
  }
  return {{"project_id", p->id()}, {"judged", judged_all}, {"total", total_all}, {"slots", slots}};
}

std::vector<JudgmentRecord> AnnotationService::export_judgments(const std::string& project_id) const {
  return project(project_id)->store().records();
}

// ---------------------------------------------------------------------------
// HttpFrontend

struct HttpFrontend::Impl {
  AnnotationService& service;
  httplib::Server server;
  explicit Impl(AnnotationService& s) : service(s) {}
};

namespace {

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& kind, const std::string& message) {
  send_json(res, status, {{"error", kind}, {"message", message}});
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const NotFoundError& e) {
    send_error(res, 404, "not_found", e.what());
  } catch (const UnassignedError& e) {
    send_error(res, 403, "unassigned", e.what());
  } catch (const DuplicateError& e) {
    send_error(res, 409, "duplicate", e.what());
  } catch (const ReferenceError& e) {
    send_error(res, 422, "reference", e.what());
  } catch (const ValidationError& e) {
    send_error(res, 422, "invalid", e.what());
  } catch (const ParseError& e) {
    send_error(res, 400, "parse", e.what());
  } catch (const nlohmann::json::exception& e) {
    send_error(res, 400, "parse", e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, "internal", e.what());
  }
}

nlohmann::json parse_body(const httplib::Request& req) {
  try {
    return nlohmann::json::parse(req.body);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("request body is not JSON: ") + e.what());
  }
}

}  // namespace

HttpFrontend::HttpFrontend(AnnotationService& service, std::optional<std::filesystem::path> ui_dir)
    : impl_(std::make_unique<Impl>(service)) {
  auto& server = impl_->server;
  auto& svc = impl_->service;

  server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) { send_json(res, 200, {{"status", "ok"}}); });

  server.Get("/projects", [&svc](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, {{"projects", svc.project_ids()}}); });
  });

  server.Post("/projects", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 201, svc.create_project(parse_body(req))); });
  });

  server.Get(R"(/projects/([^/]+))", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, svc.project_info(req.matches[1])); });
  });

  server.Get(R"(/projects/([^/]+)/tasks/next)", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      if (!req.has_param("slot")) throw ValidationError("missing slot parameter");
      const auto slot = csv::parse_integer(req.get_param_value("slot"));
      if (!slot || *slot < 0) throw ValidationError("slot must be a nonnegative integer");
      auto task = svc.next_task(req.matches[1], static_cast<std::size_t>(*slot));
      send_json(res, 200, task ? *task : nlohmann::json{{"status", "done"}});
    });
  });

  server.Post(R"(/projects/([^/]+)/judgments)", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 201, svc.submit_judgment(req.matches[1], parse_body(req))); });
  });

  server.Get(R"(/projects/([^/]+)/progress)", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, svc.progress(req.matches[1])); });
  });

  server.Get(R"(/projects/([^/]+)/export)", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      std::string body;
      for (const auto& r : svc.export_judgments(req.matches[1])) body += nlohmann::json(r).dump() + "\n";
      res.status = 200;
      res.set_content(body, "application/x-ndjson");
    });
  });

  if (ui_dir) server.set_mount_point("/", ui_dir->string());
}

HttpFrontend::~HttpFrontend() = default;

int HttpFrontend::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool HttpFrontend::bind(const std::string& host, int port) { return impl_->server.bind_to_port(host, port); }

bool HttpFrontend::listen() { return impl_->server.listen_after_bind(); }

void HttpFrontend::stop() { impl_->server.stop(); }

}  // namespace longeval
