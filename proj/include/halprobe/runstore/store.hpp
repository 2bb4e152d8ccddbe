#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>

#include "halprobe/gateway/gateway.hpp"

namespace halprobe::runstore {

// Content-addressed response cache under <run_dir>/cache. One JSON file per
// entry, named by the request hash; entries are immutable once written and a
// hit requires the stored key to match exactly.
class FileCache : public gateway::ResponseCache {
 public:
  explicit FileCache(std::filesystem::path root);

  std::optional<std::string> lookup(const std::string& key) override;
  void store(const std::string& key, const std::string& request_payload,
             const std::string& response) override;

 private:
  std::filesystem::path entry_path(const std::string& key) const;

  std::filesystem::path root_;
  std::mutex write_mutex_;
};

// Exclusive-writer lock on a run directory, held for the object's lifetime.
// A stale lock (left by a crashed run) must be removed manually; the error
// message names the file.
class RunLock {
 public:
  explicit RunLock(const std::filesystem::path& run_dir);
  ~RunLock();

  RunLock(const RunLock&) = delete;
  RunLock& operator=(const RunLock&) = delete;

 private:
  std::filesystem::path lock_path_;
};

// Creates the fixed run-directory layout: manifests/, cache/, candidates/,
// probes/, pairs/, reports/.
void ensure_run_layout(const std::filesystem::path& run_dir);

// task_id as a filesystem-safe name.
std::string sanitize_task_id(const std::string& task_id);

}  // namespace halprobe::runstore
