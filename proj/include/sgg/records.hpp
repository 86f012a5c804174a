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

#ifndef SGG_RECORDS_HPP
#define SGG_RECORDS_HPP

#include <string>
#include <vector>

#include "sgg/dataset.hpp"
#include "sgg/toon.hpp"

namespace sgg {

/// Record files come in two formats (docs/annotation-format.md):
///  - JSON lines, one record per line:
///      {"sample_id": "...", "video_id": "...", "frame_index": 0,
///       "graph": {canonical graph}}
///    (a top-level JSON array of the same objects is also accepted);
///  - TOON records: `# <sample_id>[ video=<id>] [frame=<n>]` header line,
///    the TOON document, then one blank line.
///
/// Loaders throw std::runtime_error with file/record context on unreadable
/// files or records that fail to parse or validate.

DatasetSplit load_records_json(const std::string& path, Schema schema);
DatasetSplit load_records_toon(const std::string& path, Schema schema);

/// Picks the format from the first non-blank byte ('{' or '[' means JSON).
/// A directory loads every regular file inside, in name order.
DatasetSplit load_records(const std::string& path, Schema schema);

void save_records_json(const DatasetSplit& split, const std::string& path);
void save_records_toon(const DatasetSplit& split, const std::string& path);

/// A predicted record that may be malformed; evaluation turns invalid
/// outcomes into failed samples instead of refusing the file.
struct PredictionRecord {
  std::string sample_id;
  ParseOutcome outcome;
};

std::vector<PredictionRecord> load_predictions(const std::string& path,
                                               Schema schema);

/// Raw model completions for reward scoring: JSON lines of
/// {"sample_id": "...", "completion": "..."}.
struct CompletionRecord {
  std::string sample_id;
  std::string completion;
};

std::vector<CompletionRecord> load_completions(const std::string& path);

}  // namespace sgg

#endif  // SGG_RECORDS_HPP
