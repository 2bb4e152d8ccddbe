#pragma once

#include <filesystem>
#include <string>

namespace halprobe::util {

// Writes content to path via a temporary sibling file and an atomic rename,
// so a partially written file never becomes visible under the final name.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

// Reads an entire file; throws halprobe::Error if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace halprobe::util
