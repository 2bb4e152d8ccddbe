#include "halprobe/util/jsonl.hpp"

#include <fstream>

#include "halprobe/errors.hpp"

namespace halprobe::util {

void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(std::size_t, const nlohmann::json&)>& fn) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open: " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": not a JSON object");
    }
    fn(line_no, obj);
  }
}

}  // namespace halprobe::util
