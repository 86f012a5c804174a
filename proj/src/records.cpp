// Copyright 2026 The sgg-toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sgg/records.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sgg/errors.hpp"

namespace sgg {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct RawRecord {
  std::string sample_id;
  std::optional<std::string> video_id;
  std::optional<long long> frame_index;
  std::string graph_text;  // JSON object text or TOON text
  bool graph_is_json = false;
  std::string where;  // for error messages
};

void parse_envelope(const json& entry, const std::string& where,
                    RawRecord& out) {
  if (!entry.is_object() || !entry.contains("sample_id") ||
      !entry["sample_id"].is_string() || !entry.contains("graph")) {
    throw DataError(where + ": record needs sample_id and graph");
  }
  out.sample_id = entry["sample_id"].get<std::string>();
  if (out.sample_id.empty()) {
    throw DataError(where + ": empty sample_id");
  }
  if (entry.contains("video_id") && !entry["video_id"].is_null()) {
    if (!entry["video_id"].is_string()) {
      throw DataError(where + ": video_id must be a string");
    }
    out.video_id = entry["video_id"].get<std::string>();
  }
  if (entry.contains("frame_index") && !entry["frame_index"].is_null()) {
    if (!entry["frame_index"].is_number_integer()) {
      throw DataError(where + ": frame_index must be an integer");
    }
    out.frame_index = entry["frame_index"].get<long long>();
  }
  out.graph_text = entry["graph"].dump();
  out.graph_is_json = true;
  out.where = where;
}

std::vector<RawRecord> raw_records_json(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<RawRecord> out;

  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return out;

  if (text[first] == '[') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::exception& e) {
      throw DataError(path + ": " + e.what());
    }
    std::size_t index = 0;
    for (const auto& entry : doc) {
      RawRecord record;
      parse_envelope(entry, path + " record " + std::to_string(index), record);
      out.push_back(std::move(record));
      ++index;
    }
    return out;
  }

  std::istringstream lines(text);
  std::string line;
  int number = 0;
  while (std::getline(lines, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json entry;
    try {
      entry = json::parse(line);
    } catch (const json::exception& e) {
      throw DataError(path + ":" + std::to_string(number) + ": " +
                               e.what());
    }
    RawRecord record;
    parse_envelope(entry, path + ":" + std::to_string(number), record);
    out.push_back(std::move(record));
  }
  return out;
}

std::vector<RawRecord> raw_records_toon(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<RawRecord> out;

  std::istringstream lines(text);
  std::string line;
  int number = 0;
  RawRecord current;
  bool open = false;
  auto flush = [&] {
    if (open) out.push_back(std::move(current));
    current = RawRecord{};
    open = false;
  };

  while (std::getline(lines, line)) {
    ++number;
    while (!line.empty() && (line.back() == '\r')) line.pop_back();
    if (line.rfind("# ", 0) == 0) {
      flush();
      std::istringstream header(line.substr(2));
      std::string token;
      if (!(header >> token)) {
        throw DataError(path + ":" + std::to_string(number) +
                                 ": record header has no sample id");
      }
      current.sample_id = token;
      current.where = path + ":" + std::to_string(number);
      while (header >> token) {
        if (token.rfind("video=", 0) == 0) {
          current.video_id = token.substr(6);
        } else if (token.rfind("frame=", 0) == 0) {
          try {
            current.frame_index = std::stoll(token.substr(6));
          } catch (const std::exception&) {
            throw DataError(path + ":" + std::to_string(number) +
                                     ": bad frame index");
          }
        } else {
          throw DataError(path + ":" + std::to_string(number) +
                                   ": unknown header token \"" + token + "\"");
        }
      }
      open = true;
      continue;
    }
    if (!open) {
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      throw DataError(path + ":" + std::to_string(number) +
                               ": content before the first record header");
    }
    if (line.find_first_not_of(" \t") == std::string::npos) {
      flush();
      continue;
    }
    current.graph_text += line;
    current.graph_text += '\n';
  }
  flush();
  return out;
}

std::vector<RawRecord> raw_records_file(const std::string& path) {
  const std::string text = read_file(path);
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos &&
      (text[first] == '{' || text[first] == '[')) {
    return raw_records_json(path);
  }
  return raw_records_toon(path);
}

// A directory is treated as the concatenation of its regular files in name
// order.
std::vector<RawRecord> raw_records(const std::string& path) {
  std::error_code ec;
  if (!std::filesystem::is_directory(path, ec)) {
    return raw_records_file(path);
  }
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(path)) {
    if (entry.is_regular_file()) files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  std::vector<RawRecord> out;
  for (const auto& file : files) {
    auto part = raw_records_file(file);
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return out;
}

ParseOutcome parse_raw(const RawRecord& raw, Schema schema) {
  return raw.graph_is_json ? parse_json(raw.graph_text, schema)
                           : parse_toon(raw.graph_text, schema);
}

DatasetSplit to_split(std::vector<RawRecord> raws, Schema schema,
                      const std::string& name) {
  DatasetSplit split;
  split.name = name;
  for (const auto& raw : raws) {
    ParseOutcome outcome = parse_raw(raw, schema);
    if (!outcome.valid || !outcome.graph) {
      std::string detail = outcome.diagnostics.empty()
                               ? "unknown parse failure"
                               : outcome.diagnostics.front().message;
      throw DataError(raw.where + " (sample \"" + raw.sample_id +
                               "\"): invalid graph: " + detail);
    }
    split.records.push_back({raw.sample_id, std::move(*outcome.graph),
                             raw.video_id, raw.frame_index});
  }
  return split;
}

}  // namespace

DatasetSplit load_records_json(const std::string& path, Schema schema) {
  return to_split(raw_records_json(path), schema, path);
}

DatasetSplit load_records_toon(const std::string& path, Schema schema) {
  return to_split(raw_records_toon(path), schema, path);
}

DatasetSplit load_records(const std::string& path, Schema schema) {
  return to_split(raw_records(path), schema, path);
}

void save_records_json(const DatasetSplit& split, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& record : split.records) {
    ordered_json envelope;
    envelope["sample_id"] = record.sample_id;
    if (record.video_id) envelope["video_id"] = *record.video_id;
    if (record.frame_index) envelope["frame_index"] = *record.frame_index;
    envelope["graph"] = ordered_json::parse(serialize_json(record.graph));
    out << envelope.dump() << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

void save_records_toon(const DatasetSplit& split, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& record : split.records) {
    if (record.sample_id.empty() ||
        record.sample_id.find_first_of(" \t\n\r") != std::string::npos) {
      throw DataError("sample id \"" + record.sample_id +
                               "\" cannot be stored in a TOON records file");
    }
    out << "# " << record.sample_id;
    if (record.video_id) out << " video=" << *record.video_id;
    if (record.frame_index) out << " frame=" << *record.frame_index;
    out << '\n';
    out << serialize_toon(record.graph).raw_text;
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<PredictionRecord> load_predictions(const std::string& path,
                                               Schema schema) {
  std::vector<PredictionRecord> out;
  for (const auto& raw : raw_records(path)) {
    out.push_back({raw.sample_id, parse_raw(raw, schema)});
  }
  return out;
}

std::vector<CompletionRecord> load_completions(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<CompletionRecord> out;
  std::istringstream lines(text);
  std::string line;
  int number = 0;
  while (std::getline(lines, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json entry;
    try {
      entry = json::parse(line);
    } catch (const json::exception& e) {
      throw DataError(path + ":" + std::to_string(number) + ": " +
                               e.what());
    }
    if (!entry.is_object() || !entry.contains("sample_id") ||
        !entry["sample_id"].is_string() || !entry.contains("completion") ||
        !entry["completion"].is_string()) {
      throw DataError(path + ":" + std::to_string(number) +
                               ": completion records need sample_id and "
                               "completion strings");
    }
    out.push_back({entry["sample_id"].get<std::string>(),
                   entry["completion"].get<std::string>()});
  }
  return out;
}

}  // namespace sgg
