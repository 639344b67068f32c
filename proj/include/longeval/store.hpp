#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <vector>

#include "longeval/judgments.hpp"

namespace longeval {

/// Durable append-only judgment log (one JSON record per line) with an
/// in-memory key index.
///
/// append() returns only after the record is written and fsync'ed, so every
/// acknowledged judgment survives a crash. On open, a torn final line (a write
/// that never completed, hence was never acknowledged) is truncated away; any
/// other malformed line is an error. Appends are serialized by a single
/// writer lock; readers get copies.
class JudgmentStore {
 public:
  explicit JudgmentStore(std::filesystem::path path);
  ~JudgmentStore();

  JudgmentStore(const JudgmentStore&) = delete;
  JudgmentStore& operator=(const JudgmentStore&) = delete;

  /// Validates and appends. A key that already exists is rejected with
  /// DuplicateError unless `supersedes` names the seq of its current record.
  JudgmentRecord append(Judgment judgment, std::optional<std::uint64_t> supersedes = std::nullopt);

  std::vector<JudgmentRecord> records() const;
  std::vector<Judgment> effective() const;
  std::size_t size() const;
  bool contains(const JudgmentKey& key) const;

  const std::filesystem::path& path() const { return path_; }

 private:
  void replay();

  std::filesystem::path path_;
  int fd_ = -1;
  mutable std::shared_mutex mutex_;
  std::vector<JudgmentRecord> records_;
  std::map<JudgmentKey, std::uint64_t> current_;  // key -> seq of its latest record
  std::uint64_t next_seq_ = 1;
};

}  // namespace longeval
