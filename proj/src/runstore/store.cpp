#include "halprobe/runstore/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include <chrono>

#include "halprobe/errors.hpp"
#include "halprobe/util/fs.hpp"

namespace halprobe::runstore {

FileCache::FileCache(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_);
}

std::filesystem::path FileCache::entry_path(const std::string& key) const {
  return root_ / key.substr(0, 2) / (key + ".json");
}

std::optional<std::string> FileCache::lookup(const std::string& key) {
  const auto path = entry_path(key);
  if (!std::filesystem::exists(path)) return std::nullopt;
  nlohmann::json entry = nlohmann::json::parse(util::read_file(path), nullptr, false);
  if (entry.is_discarded() || entry.value("key", "") != key || !entry.contains("response")) {
    return std::nullopt;
  }
  return entry.at("response").get<std::string>();
}

void FileCache::store(const std::string& key, const std::string& request_payload,
                      const std::string& response) {
  std::lock_guard<std::mutex> lock(write_mutex_);
  const auto path = entry_path(key);
  if (std::filesystem::exists(path)) return;  // entries are immutable
  std::filesystem::create_directories(path.parent_path());
  nlohmann::ordered_json entry;
  entry["key"] = key;
  entry["request"] = request_payload;
  entry["response"] = response;
  entry["created_at"] = std::chrono::duration_cast<std::chrono::seconds>(
                            std::chrono::system_clock::now().time_since_epoch())
                            .count();
  util::atomic_write_file(path, entry.dump(2) + "\n");
}

RunLock::RunLock(const std::filesystem::path& run_dir) {
  std::filesystem::create_directories(run_dir);
  lock_path_ = run_dir / ".lock";
  const int fd = ::open(lock_path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    throw ConfigError("run directory is locked by another writer (remove " + lock_path_.string() +
                      " if the previous run crashed)");
  }
  const std::string pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] auto written = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

RunLock::~RunLock() {
  std::error_code ec;
  std::filesystem::remove(lock_path_, ec);
}

void ensure_run_layout(const std::filesystem::path& run_dir) {
  for (const char* sub : {"manifests", "cache", "candidates", "probes", "pairs", "reports"}) {
    std::filesystem::create_directories(run_dir / sub);
  }
}

std::string sanitize_task_id(const std::string& task_id) {
  std::string safe = task_id;
  for (char& ch : safe) {
    if (ch == '/' || ch == '\\' || ch == ':' || ch == ' ') ch = '_';
  }
  return safe;
}

}  // namespace halprobe::runstore
