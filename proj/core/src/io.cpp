// Copyright 2026 The teamcomp Authors.
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

#include "teamcomp/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <set>
#include <sstream>

#include "teamcomp/errors.hpp"
#include "teamcomp/evaluation.hpp"

namespace teamcomp {
namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

const char* const kProfileColumns[] = {"sn", "tf", "ei", "pj"};

std::string Where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

std::optional<double> ParseNumber(std::string_view text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

bool IsCompetenceId(std::string_view name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

// Checks a "#schema=N" comment line. Other comments are ignored.
void CheckSchemaComment(std::string_view line, std::string_view source,
                        std::size_t line_number) {
  constexpr std::string_view kPrefix = "#schema=";
  if (line.substr(0, kPrefix.size()) != kPrefix) return;
  const std::string_view version = line.substr(kPrefix.size());
  if (version != std::to_string(kSchemaVersion)) {
    throw ValidationError(Where(source, line_number) + "unsupported schema '" +
                          std::string(version) + "'");
  }
}

std::string_view Trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  return text;
}

Json ParseJson(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string(source) + ": malformed JSON: " + e.what());
  }
}

void CheckKeys(const Json& object, std::initializer_list<std::string_view> allowed,
               const std::string& where) {
  if (!object.is_object()) throw ValidationError(where + "expected a JSON object");
  for (const auto& item : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw ValidationError(where + "unknown key \"" + item.key() + "\"");
    }
  }
}

void CheckSchemaField(const Json& object, const std::string& where, bool required) {
  if (!object.contains("schema")) {
    if (required) throw ValidationError(where + "missing \"schema\"");
    return;
  }
  const Json& v = object["schema"];
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion) {
    throw ValidationError(where + "unsupported schema " + v.dump());
  }
}

double NumberField(const Json& object, std::string_view key, const std::string& where) {
  const auto it = object.find(key);
  if (it == object.end()) {
    throw ValidationError(where + "missing \"" + std::string(key) + "\"");
  }
  if (!it->is_number()) {
    throw ValidationError(where + "\"" + std::string(key) + "\" must be a number");
  }
  return it->get<double>();
}

std::string StringField(const Json& object, std::string_view key,
                        const std::string& where) {
  const auto it = object.find(key);
  if (it == object.end()) {
    throw ValidationError(where + "missing \"" + std::string(key) + "\"");
  }
  if (!it->is_string()) {
    throw ValidationError(where + "\"" + std::string(key) + "\" must be a string");
  }
  return it->get<std::string>();
}

// Wraps roster construction so validation issues carry the source name.
Roster MakeRoster(std::vector<Student> students, std::string_view source) {
  try {
    return Roster(std::move(students));
  } catch (const ValidationError& e) {
    std::vector<std::string> issues;
    for (const std::string& issue : e.issues()) {
      issues.push_back(std::string(source) + ": " + issue);
    }
    throw ValidationError(std::move(issues));
  }
}

double LabelOrNumber(const Json& value, bool is_level, const LabelMapping& labels,
                     const std::string& where) {
  const char* what = is_level ? "level" : "importance";
  if (value.is_number()) return value.get<double>();
  if (!value.is_string()) {
    throw ValidationError(where + what + " must be a number or a label");
  }
  const std::string label = value.get<std::string>();
  const std::optional<double> mapped =
      is_level ? labels.Level(label) : labels.Importance(label);
  if (!mapped) {
    throw ValidationError(where + "unknown " + what + " label \"" + label + "\"");
  }
  return *mapped;
}

}  // namespace

std::string FormatDouble(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw Error("number formatting failed");
  return std::string(buffer, ptr);
}

std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    const std::string_view field = line.substr(
        start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    fields.emplace_back(Trim(field));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string NormalizeLabel(std::string_view label) {
  std::string out;
  for (char c : Trim(label)) {
    out.push_back(c == ' ' || c == '_'
                      ? '-'
                      : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

const LabelMapping& LabelMapping::Default() {
  static const LabelMapping* const mapping = [] {
    auto* m = new LabelMapping;
    m->levels = {{"fundamental-awareness", 0.2},
                 {"novice", 0.4},
                 {"intermediate", 0.6},
                 {"advanced", 0.8},
                 {"expert", 1.0}};
    m->importance = {{"unimportant", 0.2},
                     {"slightly-important", 0.4},
                     {"important", 0.6},
                     {"fairly-important", 0.8},
                     {"very-important", 1.0}};
    return m;
  }();
  return *mapping;
}

std::optional<double> LabelMapping::Level(std::string_view label) const {
  const auto it = levels.find(NormalizeLabel(label));
  if (it == levels.end()) return std::nullopt;
  return it->second;
}

std::optional<double> LabelMapping::Importance(std::string_view label) const {
  const auto it = importance.find(NormalizeLabel(label));
  if (it == importance.end()) return std::nullopt;
  return it->second;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream contents;
  contents << in.rdbuf();
  if (in.bad()) throw Error("cannot read " + path.string());
  return contents.str();
}

Roster parse_roster(const std::filesystem::path& path) {
  const std::string source = path.string();
  if (path.extension() == ".json") return parse_roster_json(ReadFile(path), source);
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + source);
  return parse_roster_csv(in, source);
}

Roster parse_roster_csv(std::istream& in, std::string_view source) {
  std::vector<std::string> header;
  std::vector<Student> students;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string_view trimmed = Trim(line);
    if (trimmed.empty()) continue;
    if (trimmed.front() == '#') {
      CheckSchemaComment(trimmed, source, line_number);
      continue;
    }
    const std::string where = Where(source, line_number);
    std::vector<std::string> fields = SplitCsvLine(trimmed);

    if (header.empty()) {
      static const char* const kFixed[] = {"id", "gender", "sn", "tf", "ei", "pj"};
      for (std::size_t i = 0; i < std::size(kFixed); ++i) {
        if (i >= fields.size() || fields[i] != kFixed[i]) {
          throw ValidationError(where + "header column " + std::to_string(i + 1) +
                                " must be \"" + kFixed[i] + "\"");
        }
      }
      std::set<std::string, std::less<>> seen(fields.begin(), fields.begin() + 6);
      for (std::size_t i = 6; i < fields.size(); ++i) {
        if (!IsCompetenceId(fields[i]) || !seen.insert(fields[i]).second) {
          throw ValidationError(where + "unknown column \"" + fields[i] + "\"");
        }
      }
      header = std::move(fields);
      continue;
    }

    if (fields.size() != header.size()) {
      throw ValidationError(where + "expected " + std::to_string(header.size()) +
                            " fields, found " + std::to_string(fields.size()));
    }
    Student student;
    student.id = fields[0];
    const std::optional<Gender> gender = ParseGender(fields[1]);
    if (!gender) {
      throw ValidationError(where + "gender \"" + fields[1] +
                            "\" is not one of man, woman");
    }
    student.gender = *gender;
    double* dims[] = {&student.profile.sn, &student.profile.tf, &student.profile.ei,
                      &student.profile.pj};
    for (std::size_t d = 0; d < 4; ++d) {
      const std::optional<double> v = ParseNumber(fields[2 + d]);
      if (!v) {
        throw ValidationError(where + "field " + kProfileColumns[d] + " = \"" +
                              fields[2 + d] + "\" is not a number");
      }
      *dims[d] = *v;
    }
    for (std::size_t i = 6; i < fields.size(); ++i) {
      if (fields[i].empty()) continue;  // no recorded level
      const std::optional<double> v = ParseNumber(fields[i]);
      if (!v) {
        throw ValidationError(where + "field " + header[i] + " = \"" + fields[i] +
                              "\" is not a number");
      }
      student.levels.emplace(header[i], *v);
    }
    students.push_back(std::move(student));
  }
  if (header.empty()) throw ValidationError(std::string(source) + ": missing header row");
  return MakeRoster(std::move(students), source);
}

Roster parse_roster_json(std::string_view text, std::string_view source) {
  const Json doc = ParseJson(text, source);
  const std::string top = std::string(source) + ": ";
  const Json* list = &doc;
  if (doc.is_object()) {
    CheckKeys(doc, {"schema", "students"}, top);
    CheckSchemaField(doc, top, true);
    if (!doc.contains("students")) throw ValidationError(top + "missing \"students\"");
    list = &doc["students"];
  }
  if (!list->is_array()) throw ValidationError(top + "expected an array of students");

  std::vector<Student> students;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const Json& item = (*list)[i];
    const std::string where = top + "students[" + std::to_string(i) + "]: ";
    CheckKeys(item, {"id", "gender", "profile", "levels"}, where);
    Student student;
    student.id = StringField(item, "id", where);
    const std::string gender_text = StringField(item, "gender", where);
    const std::optional<Gender> gender = ParseGender(gender_text);
    if (!gender) {
      throw ValidationError(where + "gender \"" + gender_text +
                            "\" is not one of man, woman");
    }
    student.gender = *gender;
    if (!item.contains("profile")) throw ValidationError(where + "missing \"profile\"");
    const Json& profile = item["profile"];
    CheckKeys(profile, {"sn", "tf", "ei", "pj"}, where + "profile: ");
    student.profile.sn = NumberField(profile, "sn", where + "profile: ");
    student.profile.tf = NumberField(profile, "tf", where + "profile: ");
    student.profile.ei = NumberField(profile, "ei", where + "profile: ");
    student.profile.pj = NumberField(profile, "pj", where + "profile: ");
    if (item.contains("levels")) {
      const Json& levels = item["levels"];
      if (!levels.is_object())
        throw ValidationError(where + "\"levels\" must be an object");
      for (const auto& entry : levels.items()) {
        if (!entry.value().is_number()) {
          throw ValidationError(where + "level of " + entry.key() + " must be a number");
        }
        student.levels.emplace(entry.key(), entry.value().get<double>());
      }
    }
    students.push_back(std::move(student));
  }
  return MakeRoster(std::move(students), source);
}

void write_roster_csv(std::ostream& out, const Roster& roster) {
  std::set<std::string, std::less<>> competences;
  for (const Student& s : roster.students()) {
    for (const auto& [name, level] : s.levels) competences.insert(name);
  }
  out << "#schema=" << kSchemaVersion << "\n";
  out << "id,gender,sn,tf,ei,pj";
  for (const std::string& c : competences) out << ',' << c;
  out << "\n";
  for (const Student& s : roster.students()) {
    out << s.id << ',' << GenderName(s.gender) << ',' << FormatDouble(s.profile.sn) << ','
        << FormatDouble(s.profile.tf) << ',' << FormatDouble(s.profile.ei) << ','
        << FormatDouble(s.profile.pj);
    for (const std::string& c : competences) {
      out << ',';
      const auto it = s.levels.find(c);
      if (it != s.levels.end()) out << FormatDouble(it->second);
    }
    out << "\n";
  }
}

std::string roster_to_json(const Roster& roster) {
  OrderedJson doc;
  doc["schema"] = kSchemaVersion;
  OrderedJson list = OrderedJson::array();
  for (const Student& s : roster.students()) {
    OrderedJson item;
    item["id"] = s.id;
    item["gender"] = GenderName(s.gender);
    item["profile"] = {{"sn", s.profile.sn},
                       {"tf", s.profile.tf},
                       {"ei", s.profile.ei},
                       {"pj", s.profile.pj}};
    OrderedJson levels = OrderedJson::object();
    for (const auto& [name, level] : s.levels) levels[name] = level;
    item["levels"] = std::move(levels);
    list.push_back(std::move(item));
  }
  doc["students"] = std::move(list);
  return doc.dump(2) + "\n";
}

Task parse_task(const std::filesystem::path& path, const TaskOverrides& overrides,
                const LabelMapping& labels) {
  return parse_task_json(ReadFile(path), path.string(), overrides, labels);
}

Task parse_task_json(std::string_view text, std::string_view source,
                     const TaskOverrides& overrides, const LabelMapping& labels) {
  const Json doc = ParseJson(text, source);
  const std::string top = std::string(source) + ": ";
  CheckKeys(doc, {"schema", "name", "lambda", "m", "requirements"}, top);
  CheckSchemaField(doc, top, false);

  std::string name = doc.contains("name") ? StringField(doc, "name", top) : "task";
  double lambda = overrides.lambda ? *overrides.lambda : NumberField(doc, "lambda", top);
  int m = 0;
  if (overrides.m) {
    m = *overrides.m;
  } else {
    if (!doc.contains("m") || !doc["m"].is_number_integer()) {
      throw ValidationError(top + "\"m\" must be an integer");
    }
    m = doc["m"].get<int>();
  }

  if (!doc.contains("requirements") || !doc["requirements"].is_array()) {
    throw ValidationError(top + "\"requirements\" must be an array");
  }
  std::vector<Requirement> requirements;
  const Json& list = doc["requirements"];
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = top + "requirements[" + std::to_string(i) + "]: ";
    const Json& item = list[i];
    CheckKeys(item, {"competence", "level", "importance"}, where);
    Requirement r;
    r.competence = StringField(item, "competence", where);
    if (!item.contains("level")) throw ValidationError(where + "missing \"level\"");
    if (!item.contains("importance")) {
      throw ValidationError(where + "missing \"importance\"");
    }
    r.level = LabelOrNumber(item["level"], true, labels, where);
    r.weight = LabelOrNumber(item["importance"], false, labels, where);
    requirements.push_back(std::move(r));
  }

  try {
    return Task::Create(TaskType(std::move(name), lambda, std::move(requirements)), m);
  } catch (const ValidationError& e) {
    std::vector<std::string> issues;
    for (const std::string& issue : e.issues()) issues.push_back(top + issue);
    throw ValidationError(std::move(issues));
  }
}

std::string task_to_json(const Task& task) {
  OrderedJson doc;
  doc["schema"] = kSchemaVersion;
  doc["name"] = task.type.name();
  doc["lambda"] = task.type.lambda();
  doc["m"] = task.m;
  OrderedJson list = OrderedJson::array();
  for (const Requirement& r : task.type.requirements()) {
    list.push_back(
        {{"competence", r.competence}, {"level", r.level}, {"importance", r.weight}});
  }
  doc["requirements"] = std::move(list);
  return doc.dump(2) + "\n";
}

std::string partition_to_json(const Roster& roster, const Task& task,
                              const EvalConfig& config, const SolverResult& result,
                              std::string_view algorithm,
                              std::optional<std::uint64_t> seed) {
  const TeamEvaluator evaluator(roster, task, config);
  OrderedJson doc;
  doc["schema"] = kSchemaVersion;
  doc["algorithm"] = algorithm;
  doc["task"] = task.type.name();
  doc["m"] = task.m;
  doc["lambda"] = task.type.lambda();
  doc["config"] = {{"upsilon", config.upsilon},
                   {"alpha", config.alpha},
                   {"beta", config.beta},
                   {"gamma", config.gamma},
                   {"epsilon_floor", config.epsilon_floor}};
  if (seed) doc["seed"] = *seed;
  doc["optimal"] = result.optimal;
  doc["S"] = result.score.value;
  doc["log_S"] = result.score.log_value;

  OrderedJson teams = OrderedJson::array();
  for (const Team& team : result.partition.teams) {
    const SynergyRecord record = evaluator.Record(team);
    OrderedJson item;
    OrderedJson members = OrderedJson::array();
    for (StudentIndex i : team) members.push_back(roster[i].id);
    item["members"] = std::move(members);
    item["s"] = record.s;
    item["u_prof"] = record.u_prof;
    item["u_con"] = record.u_con;
    OrderedJson assignment = OrderedJson::object();
    for (StudentIndex i : team) {
      const auto it = record.assignment.mapping.find(roster[i].id);
      OrderedJson competences = OrderedJson::array();
      if (it != record.assignment.mapping.end()) {
        for (const std::string& c : it->second) competences.push_back(c);
      }
      assignment[roster[i].id] = std::move(competences);
    }
    item["assignment"] = std::move(assignment);
    teams.push_back(std::move(item));
  }
  doc["teams"] = std::move(teams);
  return doc.dump(2) + "\n";
}

PartitionFile parse_partition_json(std::string_view text, std::string_view source) {
  const Json doc = ParseJson(text, source);
  const std::string top = std::string(source) + ": ";
  CheckKeys(doc,
            {"schema", "algorithm", "task", "m", "lambda", "config", "seed", "optimal",
             "S", "log_S", "teams"},
            top);
  CheckSchemaField(doc, top, true);

  PartitionFile file;
  file.algorithm = doc.contains("algorithm") ? StringField(doc, "algorithm", top) : "";
  file.task = doc.contains("task") ? StringField(doc, "task", top) : "";
  if (doc.contains("m")) {
    if (!doc["m"].is_number_integer())
      throw ValidationError(top + "\"m\" must be an integer");
    file.m = doc["m"].get<int>();
  }
  if (doc.contains("lambda")) file.lambda = NumberField(doc, "lambda", top);
  if (doc.contains("config")) {
    const Json& c = doc["config"];
    const std::string where = top + "config: ";
    CheckKeys(c, {"upsilon", "alpha", "beta", "gamma", "epsilon_floor"}, where);
    if (c.contains("upsilon")) file.config.upsilon = NumberField(c, "upsilon", where);
    if (c.contains("alpha")) file.config.alpha = NumberField(c, "alpha", where);
    if (c.contains("beta")) file.config.beta = NumberField(c, "beta", where);
    if (c.contains("gamma")) file.config.gamma = NumberField(c, "gamma", where);
    if (c.contains("epsilon_floor")) {
      file.config.epsilon_floor = NumberField(c, "epsilon_floor", where);
    }
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) {
      throw ValidationError(top + "\"seed\" must be a non-negative integer");
    }
    file.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("optimal")) {
    if (!doc["optimal"].is_boolean())
      throw ValidationError(top + "\"optimal\" must be a boolean");
    file.optimal = doc["optimal"].get<bool>();
  }
  file.S = NumberField(doc, "S", top);
  if (doc.contains("log_S")) file.log_S = NumberField(doc, "log_S", top);

  if (!doc.contains("teams") || !doc["teams"].is_array()) {
    throw ValidationError(top + "\"teams\" must be an array");
  }
  const Json& teams = doc["teams"];
  for (std::size_t t = 0; t < teams.size(); ++t) {
    const std::string where = top + "teams[" + std::to_string(t) + "]: ";
    const Json& item = teams[t];
    CheckKeys(item, {"members", "s", "u_prof", "u_con", "assignment"}, where);
    PartitionFileTeam team;
    if (!item.contains("members") || !item["members"].is_array()) {
      throw ValidationError(where + "\"members\" must be an array");
    }
    for (const Json& id : item["members"]) {
      if (!id.is_string()) throw ValidationError(where + "member ids must be strings");
      team.members.push_back(id.get<std::string>());
    }
    if (item.contains("s")) team.s = NumberField(item, "s", where);
    if (item.contains("u_prof")) team.u_prof = NumberField(item, "u_prof", where);
    if (item.contains("u_con")) team.u_con = NumberField(item, "u_con", where);
    if (item.contains("assignment")) {
      const Json& a = item["assignment"];
      if (!a.is_object())
        throw ValidationError(where + "\"assignment\" must be an object");
      for (const auto& entry : a.items()) {
        std::vector<std::string> competences;
        if (!entry.value().is_array()) {
          throw ValidationError(where + "assignment of " + entry.key() +
                                " must be an array");
        }
        for (const Json& c : entry.value()) {
          if (!c.is_string())
            throw ValidationError(where + "competence ids must be strings");
          competences.push_back(c.get<std::string>());
        }
        team.assignment.mapping.emplace(entry.key(), std::move(competences));
      }
    }
    file.teams.push_back(std::move(team));
  }
  return file;
}

Partition ToPartition(const PartitionFile& file, const Roster& roster) {
  Partition partition;
  std::vector<std::string> issues;
  for (std::size_t t = 0; t < file.teams.size(); ++t) {
    std::vector<StudentIndex> members;
    bool known = true;
    for (const std::string& id : file.teams[t].members) {
      const std::optional<StudentIndex> index = roster.IndexOf(id);
      if (!index) {
        issues.push_back("team " + std::to_string(t) + ": unknown student \"" + id +
                         "\"");
        known = false;
        continue;
      }
      members.push_back(*index);
    }
    if (known) partition.teams.push_back(MakeTeam(std::move(members)));
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return partition;
}

void write_trace_csv(std::ostream& out, const AnytimeTrace& trace, std::string_view label,
                     std::string_view algorithm, std::uint64_t seed, bool header) {
  if (header) {
    out << "#schema=" << kSchemaVersion << "\n";
    out << "label,algorithm,seed,elapsed_s,best_S\n";
  }
  for (const TracePoint& p : trace) {
    out << label << ',' << algorithm << ',' << seed << ',' << FormatDouble(p.elapsed_s)
        << ',' << FormatDouble(p.best_S) << "\n";
  }
}

}  // namespace teamcomp
