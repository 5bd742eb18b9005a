#include "disagree/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "disagree/error.hpp"
#include "json.hpp"

namespace disagree {

using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void schema_fail(std::string_view id, std::string_view field,
                              std::string_view reason) {
  std::ostringstream os;
  os << "item '" << id << "', field '" << field << "': " << reason;
  fail(ErrorCode::schema_violation, os.str());
}

std::string require_string(const ordered_json& obj, const char* field,
                           std::string_view id) {
  auto it = obj.find(field);
  if (it == obj.end()) schema_fail(id, field, "missing");
  if (!it->is_string()) schema_fail(id, field, "expected a string");
  return it->get<std::string>();
}

bool is_none_marker(std::string_view v) { return v == "-" || v == "--"; }

std::string normalize_task2_vote(const std::string& vote, std::string_view id,
                                 std::size_t pos) {
  if (is_none_marker(vote)) return kNoneVote;
  if (vote == kUnknownVote) return vote;
  const Taxonomy& tax = taxonomy_for(TaskId::task2);
  if (vote != "NO" && tax.index_of(vote).has_value()) return vote;
  schema_fail(id, "labels_task2",
              "vote #" + std::to_string(pos) + " '" + vote + "' is not a valid label");
}

std::vector<std::string> normalize_task3_vote(const ordered_json& arr,
                                              std::string_view id, std::size_t pos) {
  const std::string field = "labels_task3";
  if (!arr.is_array())
    schema_fail(id, field, "vote #" + std::to_string(pos) + " must be an array");
  if (arr.empty())
    schema_fail(id, field, "vote #" + std::to_string(pos) + " is empty");
  const Taxonomy& tax = taxonomy_for(TaskId::task3);
  std::vector<std::string> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_string())
      schema_fail(id, field, "vote #" + std::to_string(pos) + " has a non-string entry");
    std::string s = v.get<std::string>();
    if (is_none_marker(s)) {
      s = kNoneVote;
    } else if (s != kUnknownVote) {
      if (s == "NO" || !tax.index_of(s).has_value())
        schema_fail(id, field,
                    "vote #" + std::to_string(pos) + " label '" + s + "' is not valid");
    }
    for (const auto& seen : out)
      if (seen == s)
        schema_fail(id, field, "vote #" + std::to_string(pos) + " repeats '" + s + "'");
    out.push_back(std::move(s));
  }
  if (out.size() > 1) {
    for (const auto& s : out)
      if (s == kNoneVote || s == kUnknownVote)
        schema_fail(id, field,
                    "vote #" + std::to_string(pos) + " mixes '" + s + "' with labels");
  }
  return out;
}

template <typename Fn>
std::vector<std::string> read_annotator_list(const ordered_json& obj, const char* field,
                                             std::string_view id, int n, Fn&& check) {
  auto it = obj.find(field);
  if (it == obj.end()) schema_fail(id, field, "missing");
  if (!it->is_array()) schema_fail(id, field, "expected an array");
  if (static_cast<int>(it->size()) != n)
    schema_fail(id, field,
                "length " + std::to_string(it->size()) + " does not match number_annotators " +
                    std::to_string(n));
  std::vector<std::string> out;
  out.reserve(it->size());
  std::size_t pos = 0;
  for (const auto& v : *it) {
    if (!v.is_string()) schema_fail(id, field, "entry #" + std::to_string(pos) + " is not a string");
    out.push_back(check(v.template get<std::string>(), pos));
    ++pos;
  }
  return out;
}

AnnotatedItem parse_item(const ordered_json& obj, const std::string& fallback_id) {
  if (!obj.is_object())
    fail(ErrorCode::malformed_json, "dataset item is not a JSON object");

  AnnotatedItem item;
  if (obj.contains("id_EXIST")) {
    if (!obj["id_EXIST"].is_string()) schema_fail(fallback_id, "id_EXIST", "expected a string");
    item.id = obj["id_EXIST"].get<std::string>();
  } else if (!fallback_id.empty()) {
    item.id = fallback_id;
  } else {
    schema_fail("?", "id_EXIST", "missing");
  }
  if (item.id.empty()) schema_fail(item.id, "id_EXIST", "empty id");

  item.lang = require_string(obj, "lang", item.id);
  if (item.lang != "en" && item.lang != "es")
    schema_fail(item.id, "lang", "'" + item.lang + "' is not 'en' or 'es'");
  item.tweet = require_string(obj, "tweet", item.id);
  item.split = require_string(obj, "split", item.id);

  const bool has_count = obj.contains("number_annotators");
  int n = 0;
  if (has_count) {
    const auto& nj = obj["number_annotators"];
    if (!nj.is_number_integer() || nj.get<long long>() < 0)
      schema_fail(item.id, "number_annotators", "expected a non-negative integer");
    n = static_cast<int>(nj.get<long long>());
  }
  static const char* kAnnotationFields[] = {"annotators",   "gender_annotators",
                                            "age_annotators", "labels_task1",
                                            "labels_task2",   "labels_task3"};
  if (n == 0) {
    // Test-format item: annotation fields must be absent or empty.
    for (const char* f : kAnnotationFields) {
      if (obj.contains(f) && !(obj[f].is_array() && obj[f].empty()))
        schema_fail(item.id, f, "present but number_annotators is missing or 0");
    }
    return item;
  }

  item.number_annotators = n;
  item.annotators = read_annotator_list(obj, "annotators", item.id, n,
                                        [](std::string s, std::size_t) { return s; });
  item.gender_annotators =
      read_annotator_list(obj, "gender_annotators", item.id, n,
                          [&](std::string s, std::size_t pos) {
                            if (s != "F" && s != "M")
                              schema_fail(item.id, "gender_annotators",
                                          "entry #" + std::to_string(pos) + " '" + s +
                                              "' is not 'F' or 'M'");
                            return s;
                          });
  item.age_annotators =
      read_annotator_list(obj, "age_annotators", item.id, n,
                          [&](std::string s, std::size_t pos) {
                            if (s != "18-22" && s != "23-45" && s != "46+")
                              schema_fail(item.id, "age_annotators",
                                          "entry #" + std::to_string(pos) + " '" + s +
                                              "' is not an age group");
                            return s;
                          });
  item.labels_task1 =
      read_annotator_list(obj, "labels_task1", item.id, n,
                          [&](std::string s, std::size_t pos) {
                            if (s != "YES" && s != "NO")
                              schema_fail(item.id, "labels_task1",
                                          "vote #" + std::to_string(pos) + " '" + s +
                                              "' is not 'YES' or 'NO'");
                            return s;
                          });
  item.labels_task2 =
      read_annotator_list(obj, "labels_task2", item.id, n,
                          [&](std::string s, std::size_t pos) {
                            return normalize_task2_vote(s, item.id, pos);
                          });
  {
    auto it = obj.find("labels_task3");
    if (it == obj.end()) schema_fail(item.id, "labels_task3", "missing");
    if (!it->is_array()) schema_fail(item.id, "labels_task3", "expected an array");
    if (static_cast<int>(it->size()) != n)
      schema_fail(item.id, "labels_task3",
                  "length " + std::to_string(it->size()) +
                      " does not match number_annotators " + std::to_string(n));
    std::size_t pos = 0;
    for (const auto& v : *it) item.labels_task3.push_back(normalize_task3_vote(v, item.id, pos++));
  }
  return item;
}

ordered_json item_to_json(const AnnotatedItem& item) {
  ordered_json j;
  j["id_EXIST"] = item.id;
  j["lang"] = item.lang;
  j["tweet"] = item.tweet;
  if (item.has_annotations()) {
    j["number_annotators"] = item.number_annotators;
    j["annotators"] = item.annotators;
    j["gender_annotators"] = item.gender_annotators;
    j["age_annotators"] = item.age_annotators;
    j["labels_task1"] = item.labels_task1;
    j["labels_task2"] = item.labels_task2;
    j["labels_task3"] = item.labels_task3;
  }
  j["split"] = item.split;
  return j;
}

ordered_json parse_json_or_fail(std::string_view text, const std::string& source_name) {
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    fail(ErrorCode::malformed_json, source_name + ": " + e.what());
  }
}

}  // namespace

const AnnotatedItem* Dataset::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return nullptr;
  return &items[it->second];
}

void Dataset::rebuild_index() {
  index_.clear();
  index_.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto [it, inserted] = index_.emplace(items[i].id, i);
    if (!inserted)
      fail(ErrorCode::duplicate_id, "duplicate item id '" + items[i].id + "'");
  }
}

Dataset parse_dataset(std::string_view text, const std::string& source_name) {
  ordered_json j = parse_json_or_fail(text, source_name);
  Dataset ds;
  ds.source_path = source_name;
  if (j.is_array()) {
    for (const auto& obj : j) ds.items.push_back(parse_item(obj, ""));
  } else if (j.is_object()) {
    for (const auto& [key, obj] : j.items()) {
      AnnotatedItem item = parse_item(obj, key);
      if (obj.contains("id_EXIST") && item.id != key)
        schema_fail(key, "id_EXIST", "does not match its object key '" + item.id + "'");
      ds.items.push_back(std::move(item));
    }
  } else {
    fail(ErrorCode::malformed_json,
         source_name + ": top level must be an array or object of items");
  }
  ds.rebuild_index();
  return ds;
}

Dataset load_dataset(const std::string& path) {
  return parse_dataset(read_text_file(path), path);
}

std::string serialize_dataset(const Dataset& ds) {
  ordered_json j = ordered_json::array();
  for (const auto& item : ds.items) j.push_back(item_to_json(item));
  return j.dump(2) + "\n";
}

void save_dataset(const Dataset& ds, const std::string& path) {
  write_text_file(path, serialize_dataset(ds));
}

const char* run_kind_name(RunKind kind) {
  return kind == RunKind::soft ? "soft" : "hard";
}

const RunEntry* Run::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return nullptr;
  return &entries[it->second];
}

void Run::rebuild_index() {
  index_.clear();
  index_.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto [it, inserted] = index_.emplace(entries[i].id, i);
    if (!inserted)
      fail(ErrorCode::duplicate_id, "duplicate prediction id '" + entries[i].id + "'");
  }
}

Run parse_run(std::string_view text, const std::string& source_name,
              std::optional<TaskId> expect_task) {
  ordered_json j = parse_json_or_fail(text, source_name);
  if (!j.is_object())
    fail(ErrorCode::malformed_json, source_name + ": run file must be a JSON object");

  Run run;
  if (!j.contains("task") || !j["task"].is_string())
    fail(ErrorCode::malformed_json, source_name + ": missing 'task' header field");
  auto task = task_from_name(j["task"].get<std::string>());
  if (!task)
    fail(ErrorCode::task_mismatch,
         source_name + ": unknown task '" + j["task"].get<std::string>() + "'");
  run.task = *task;
  if (expect_task && run.task != *expect_task)
    fail(ErrorCode::task_mismatch, source_name + ": run is for " + task_name(run.task) +
                                       ", expected " + task_name(*expect_task));

  if (!j.contains("kind") || !j["kind"].is_string())
    fail(ErrorCode::malformed_json, source_name + ": missing 'kind' header field");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "soft") {
    run.kind = RunKind::soft;
  } else if (kind == "hard") {
    run.kind = RunKind::hard;
  } else {
    fail(ErrorCode::mixed_kinds, source_name + ": kind must be 'soft' or 'hard'");
  }
  if (j.contains("name") && j["name"].is_string()) run.name = j["name"].get<std::string>();

  if (!j.contains("predictions") || !j["predictions"].is_array())
    fail(ErrorCode::malformed_json, source_name + ": missing 'predictions' array");

  const Taxonomy& tax = taxonomy_for(run.task);
  for (const auto& p : j["predictions"]) {
    if (!p.is_object() || !p.contains("id") || !p["id"].is_string() || !p.contains("value"))
      fail(ErrorCode::malformed_json,
           source_name + ": each prediction needs string 'id' and 'value'");
    RunEntry entry;
    entry.id = p["id"].get<std::string>();
    const auto& value = p["value"];
    if (run.kind == RunKind::soft) {
      if (!value.is_object())
        fail(ErrorCode::mixed_kinds,
             "item '" + entry.id + "': soft run holds a non-object value");
      SoftAssignment soft;
      soft.values.assign(tax.size(), 0.0);
      for (const auto& [cat, prob] : value.items()) {
        auto idx = tax.index_of(cat);
        if (!idx)
          fail(ErrorCode::unknown_category,
               "item '" + entry.id + "': unknown category '" + cat + "'");
        if (!prob.is_number())
          fail(ErrorCode::invalid_probability,
               "item '" + entry.id + "', category '" + cat + "': not a number");
        soft.values[*idx] = prob.get<double>();
      }
      validate_soft(soft, run.task, entry.id);
      entry.value = std::move(soft);
    } else {
      if (!value.is_array())
        fail(ErrorCode::mixed_kinds,
             "item '" + entry.id + "': hard run holds a non-array value");
      HardAssignment hard;
      for (const auto& cat : value) {
        if (!cat.is_string())
          fail(ErrorCode::unknown_category, "item '" + entry.id + "': non-string label");
        auto idx = tax.index_of(cat.get<std::string>());
        if (!idx)
          fail(ErrorCode::unknown_category,
               "item '" + entry.id + "': unknown category '" + cat.get<std::string>() + "'");
        hard.labels.push_back(static_cast<std::uint32_t>(*idx));
      }
      std::sort(hard.labels.begin(), hard.labels.end());
      validate_hard(hard, run.task, entry.id);
      entry.value = std::move(hard);
    }
    run.entries.push_back(std::move(entry));
  }
  run.rebuild_index();
  return run;
}

Run load_run(const std::string& path, std::optional<TaskId> expect_task) {
  return parse_run(read_text_file(path), path, expect_task);
}

std::string serialize_run(const Run& run) {
  const Taxonomy& tax = taxonomy_for(run.task);
  ordered_json j;
  j["name"] = run.name;
  j["task"] = task_name(run.task);
  j["kind"] = run_kind_name(run.kind);
  ordered_json preds = ordered_json::array();
  for (const auto& entry : run.entries) {
    ordered_json p;
    p["id"] = entry.id;
    if (run.kind == RunKind::soft) {
      ordered_json value;
      const auto& soft = entry.soft();
      for (std::size_t i = 0; i < tax.size(); ++i) value[tax.categories[i]] = soft.values[i];
      p["value"] = std::move(value);
    } else {
      ordered_json value = ordered_json::array();
      for (std::uint32_t idx : entry.hard().labels) value.push_back(tax.categories[idx]);
      p["value"] = std::move(value);
    }
    preds.push_back(std::move(p));
  }
  j["predictions"] = std::move(preds);
  return j.dump(2) + "\n";
}

void save_run(const Run& run, const std::string& path) {
  write_text_file(path, serialize_run(run));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_failure, "cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) fail(ErrorCode::io_failure, "read failure on '" + path + "'");
  return os.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io_failure, "cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(ErrorCode::io_failure, "write failure on '" + path + "'");
}

}  // namespace disagree
