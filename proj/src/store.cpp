#include "longeval/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "longeval/error.hpp"

namespace longeval {
namespace {

void write_all(int fd, const std::string& data) {
  std::size_t done = 0;
  while (done < data.size()) {
    const ssize_t n = ::write(fd, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(std::string("judgment log write failed: ") + std::strerror(errno));
    }
    done += static_cast<std::size_t>(n);
  }
}

}  // namespace

JudgmentStore::JudgmentStore(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  replay();
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) throw Error("cannot open judgment log " + path_.string() + ": " + std::strerror(errno));
}

JudgmentStore::~JudgmentStore() {
  if (fd_ >= 0) ::close(fd_);
}

void JudgmentStore::replay() {
  std::ifstream in(path_, std::ios::binary);
  if (!in) return;
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();

  std::size_t pos = 0;
  std::size_t line_no = 0;
  std::size_t good_end = 0;
  while (pos < content.size()) {
    const std::size_t nl = content.find('\n', pos);
    ++line_no;
    if (nl == std::string::npos) break;  // torn tail: never acknowledged
    const std::string line = content.substr(pos, nl - pos);
    JudgmentRecord record;
    try {
      record = nlohmann::json::parse(line).get<JudgmentRecord>();
    } catch (const std::exception& e) {
      throw ParseError(path_.string(), line_no, e.what());
    }
    records_.push_back(record);
    current_[record.key()] = record.seq;
    next_seq_ = std::max(next_seq_, record.seq + 1);
    pos = nl + 1;
    good_end = pos;
  }
  if (good_end < content.size()) std::filesystem::resize_file(path_, good_end);
}

JudgmentRecord JudgmentStore::append(Judgment judgment, std::optional<std::uint64_t> supersedes) {
  validate(judgment);
  std::unique_lock lock(mutex_);
  const JudgmentKey key = key_of(judgment);
  const auto it = current_.find(key);
  if (it != current_.end()) {
    if (!supersedes || *supersedes != it->second) {
      throw DuplicateError("judgment already recorded for " + key.to_string());
    }
  } else if (supersedes) {
    throw ReferenceError("correction supersedes no existing judgment", key.to_string());
  }

  JudgmentRecord record{next_seq_, supersedes, std::move(judgment)};
  const std::string line = nlohmann::json(record).dump() + "\n";
  const off_t before = ::lseek(fd_, 0, SEEK_END);
  try {
    write_all(fd_, line);
    if (::fsync(fd_) != 0) throw Error(std::string("judgment log fsync failed: ") + std::strerror(errno));
  } catch (...) {
    if (before >= 0) {
      const int rc = ::ftruncate(fd_, before);
      (void)rc;
    }
    throw;
  }
  ++next_seq_;
  current_[key] = record.seq;
  records_.push_back(record);
  return record;
}

std::vector<JudgmentRecord> JudgmentStore::records() const {
  std::shared_lock lock(mutex_);
  return records_;
}

std::vector<Judgment> JudgmentStore::effective() const {
  std::shared_lock lock(mutex_);
  return effective_judgments(records_);
}

std::size_t JudgmentStore::size() const {
  std::shared_lock lock(mutex_);
  return records_.size();
}

bool JudgmentStore::contains(const JudgmentKey& key) const {
  std::shared_lock lock(mutex_);
  return current_.contains(key);
}

}  // namespace longeval
