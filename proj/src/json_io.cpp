#include "sts/json_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sts {

PartialSts read_system(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw invalid_input("MalformedJson", e.what());
  }
  if (!j.is_object() || !j.contains("points") || !j.contains("blocks"))
    throw invalid_input("MalformedJson",
                        "expected an object with \"points\" and \"blocks\"");
  std::vector<std::string> points;
  std::vector<std::array<std::string, 3>> blocks;
  if (!j["points"].is_array())
    throw invalid_input("MalformedJson", "\"points\" must be an array");
  for (const auto& p : j["points"]) {
    if (!p.is_string())
      throw invalid_input("MalformedJson", "point names must be strings");
    points.push_back(p.get<std::string>());
  }
  if (!j["blocks"].is_array())
    throw invalid_input("MalformedJson", "\"blocks\" must be an array");
  for (const auto& b : j["blocks"]) {
    if (!b.is_array() || b.size() != 3)
      throw invalid_input("MalformedJson", "each block must be a 3-element array");
    std::array<std::string, 3> t;
    for (int i = 0; i < 3; ++i) {
      if (!b[i].is_string())
        throw invalid_input("MalformedJson", "block members must be strings");
      t[i] = b[i].get<std::string>();
    }
    blocks.push_back(std::move(t));
  }
  return PartialSts::validate(std::move(points), std::move(blocks));
}

PartialSts read_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("FileNotReadable", "cannot open " + path);
  return read_system(in);
}

std::string to_canonical_json(const PartialSts& s) {
  std::vector<std::string> points = s.point_names();
  std::sort(points.begin(), points.end());
  std::vector<std::array<std::string, 3>> blocks;
  for (const auto& b : s.blocks()) {
    std::array<std::string, 3> t = {s.name(b[0]), s.name(b[1]), s.name(b[2])};
    std::sort(t.begin(), t.end());
    blocks.push_back(std::move(t));
  }
  std::sort(blocks.begin(), blocks.end());
  nlohmann::json j;
  j["points"] = points;
  j["blocks"] = nlohmann::json::array();
  for (const auto& b : blocks) j["blocks"].push_back({b[0], b[1], b[2]});
  return j.dump(2) + "\n";
}

void write_system_file(const PartialSts& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw invalid_input("FileNotWritable", "cannot open " + path);
  out << to_canonical_json(s);
}

}  // namespace sts
