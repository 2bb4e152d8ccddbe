#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <functional>
#include <string>

namespace halprobe::util {

// Parses a JSON-lines file, invoking fn(line_number, object) for every
// non-empty line. Line numbers are 1-based. Throws halprobe::Error with the
// offending line number when a line is not a JSON object.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(std::size_t, const nlohmann::json&)>& fn);

}  // namespace halprobe::util
