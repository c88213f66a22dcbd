// Copyright 2026 The bcc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bcc/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace bcc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// --- config parsing --------------------------------------------------------

std::string Trim(std::string_view s) {
  const char* ws = " \t\r";
  std::size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  for (char ch : s + ",") {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else {
      item += ch;
    }
  }
  return out;
}

struct Setting {
  std::string value;
  int line;
};

[[noreturn]] void Bad(const std::string& key, const Setting& s,
                      const std::string& why) {
  throw ConfigError("line " + std::to_string(s.line) + ": " + key + " = " +
                    s.value + ": " + why);
}

bool ToBool(const std::string& key, const Setting& s) {
  std::string v = s.value;
  std::transform(v.begin(), v.end(), v.begin(), ::tolower);
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  Bad(key, s, "expected a boolean");
}

long long ToInt(const std::string& key, const Setting& s) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s.value, &pos, 0);
    if (pos == s.value.size()) return v;
  } catch (const std::exception&) {
  }
  Bad(key, s, "expected an integer");
}

uint64_t ToU64(const std::string& key, const Setting& s) {
  try {
    std::size_t pos = 0;
    if (!s.value.empty() && s.value[0] != '-') {
      unsigned long long v = std::stoull(s.value, &pos, 0);
      if (pos == s.value.size()) return v;
    }
  } catch (const std::exception&) {
  }
  Bad(key, s, "expected a non-negative integer");
}

double ToDouble(const std::string& key, const Setting& s) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s.value, &pos);
    if (pos == s.value.size()) return v;
  } catch (const std::exception&) {
  }
  Bad(key, s, "expected a number");
}

void ApplyGenSetting(const std::string& name, const std::string& key,
                     const Setting& s, BatchSpec* spec) {
  GenConfig& g = spec->config;
  OpWeights& w = g.op_weights;
  if (name == "kind") {
    std::optional<GenKind> k = ParseGenKind(s.value);
    if (!k) Bad(key, s, "expected FORMED, NAMED or TYPED");
    g.kind = *k;
  } else if (name == "depth") {
    g.max_depth = static_cast<int>(ToInt(key, s));
  } else if (name == "count") {
    spec->count = ToU64(key, s);
  } else if (name == "seed") {
    g.seed = ToU64(key, s);
  } else if (name == "allow_div") {
    g.allow_div = ToBool(key, s);
  } else if (name == "int_min") {
    g.int_min = ToInt(key, s);
  } else if (name == "int_max") {
    g.int_max = ToInt(key, s);
  } else if (name == "large_literal_prob") {
    g.large_literal_prob = ToDouble(key, s);
  } else if (name == "large_literal_max") {
    g.large_literal_max = ToInt(key, s);
  } else if (name == "vars") {
    g.n_candidate_vars = static_cast<int>(ToInt(key, s));
  } else if (name == "reject_factor") {
    spec->reject_factor = ToDouble(key, s);
  } else if (name == "max_consecutive_rejects") {
    spec->max_consecutive_rejects = ToU64(key, s);
  } else if (name == "weight.assign") {
    w.assign = ToDouble(key, s);
  } else if (name == "weight.assert") {
    w.assert_stmt = ToDouble(key, s);
  } else if (name == "weight.if") {
    w.if_stmt = ToDouble(key, s);
  } else if (name == "weight.while") {
    w.while_stmt = ToDouble(key, s);
  } else if (name == "weight.literal") {
    w.literal = ToDouble(key, s);
  } else if (name == "weight.variable") {
    w.variable = ToDouble(key, s);
  } else if (name == "weight.unary") {
    w.unary = ToDouble(key, s);
  } else if (name == "weight.binary") {
    w.binary = ToDouble(key, s);
  } else if (name == "weight.leaf_factor") {
    w.near_bound_leaf_factor = ToDouble(key, s);
  } else if (name == "weight.top_continue") {
    w.top_continue = ToDouble(key, s);
  } else if (name == "weight.nested_continue") {
    w.nested_continue = ToDouble(key, s);
  } else {
    Bad(key, s, "unknown generator setting");
  }
}

bool LegalBatchId(const std::string& id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' ||
           ch == '-' || ch == '.';
  });
}

int DefaultWorkers() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace

CampaignConfig CampaignConfig::Parse(std::string_view text) {
  std::map<std::string, Setting> kv;
  std::vector<std::string> key_order;
  {
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
      ++lineno;
      std::size_t hash = raw.find('#');
      std::string line = Trim(raw.substr(0, hash));
      if (line.empty()) continue;
      std::size_t eq = line.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("line " + std::to_string(lineno) +
                          ": expected key = value");
      }
      std::string key = Trim(line.substr(0, eq));
      std::string value = Trim(line.substr(eq + 1));
      if (key.empty()) {
        throw ConfigError("line " + std::to_string(lineno) + ": empty key");
      }
      if (kv.count(key)) {
        throw ConfigError("line " + std::to_string(lineno) + ": duplicate key " +
                          key);
      }
      kv.emplace(key, Setting{value, lineno});
      key_order.push_back(key);
    }
  }

  CampaignConfig c;
  c.gen_workers = c.exec_workers = c.verify_workers = DefaultWorkers();
  uint64_t global_seed = 0;
  std::vector<std::pair<std::string, std::string>> gen_defaults;
  std::vector<std::string> batch_order;
  std::map<std::string, std::vector<std::pair<std::string, std::string>>>
      batch_settings;
  std::optional<Setting> matrix_kinds, matrix_depths, matrix_count;
  BoogieConfig boogie;
  bool boogie_enabled = false;

  for (const std::string& key : key_order) {
    const Setting& s = kv.at(key);
    const bool volatile_key = key == "resume" || key == "output_dir" ||
                              key == "lease" || key.rfind("workers.", 0) == 0 ||
                              key == "boogie.work_dir";
    if (!volatile_key) c.identity[key] = s.value;

    if (key == "output_dir") {
      c.output_dir = s.value;
    } else if (key == "resume") {
      c.resume = ToBool(key, s);
    } else if (key == "seed") {
      global_seed = ToU64(key, s);
    } else if (key == "write_programs") {
      c.write_programs = ToBool(key, s);
    } else if (key == "lease") {
      c.lease = static_cast<int>(ToInt(key, s));
    } else if (key == "workers.gen") {
      c.gen_workers = static_cast<int>(ToInt(key, s));
    } else if (key == "workers.exec") {
      c.exec_workers = static_cast<int>(ToInt(key, s));
    } else if (key == "workers.verify") {
      c.verify_workers = static_cast<int>(ToInt(key, s));
    } else if (key == "exec.step_budget") {
      c.exec.step_budget = ToU64(key, s);
    } else if (key == "exec.loop_detection") {
      c.exec.loop_detection = ToBool(key, s);
    } else if (key == "exec.memory_cap") {
      c.exec.detection_memory_cap = ToU64(key, s);
    } else if (key == "exec.max_int_bits") {
      c.exec.max_int_bits = ToU64(key, s);
    } else if (key == "boogie.enabled") {
      boogie_enabled = ToBool(key, s);
    } else if (key == "boogie.binary") {
      boogie.binary = s.value;
    } else if (key == "boogie.timeout_s") {
      boogie.timeout_s = ToDouble(key, s);
    } else if (key == "boogie.flags") {
      boogie.flags = SplitList(s.value);
    } else if (key == "boogie.version") {
      boogie.version = s.value;
    } else if (key == "boogie.patterns_file") {
      boogie.patterns_file = s.value;
    } else if (key == "boogie.work_dir") {
      boogie.work_dir = s.value;
    } else if (key == "boogie.style") {
      try {
        c.style = ParseEmitStyle(s.value);
      } catch (const std::exception&) {
        Bad(key, s, "expected decl-with-init or decl-then-assign");
      }
    } else if (key == "boogie.classify_incompleteness") {
      c.classify_incompleteness = ToBool(key, s);
    } else if (key == "matrix.kinds") {
      matrix_kinds = s;
    } else if (key == "matrix.depths") {
      matrix_depths = s;
    } else if (key == "matrix.count") {
      matrix_count = s;
    } else if (key.rfind("gen.", 0) == 0) {
      gen_defaults.emplace_back(key.substr(4), key);
    } else if (key.rfind("batch.", 0) == 0) {
      std::string rest = key.substr(6);
      std::size_t dot = rest.find('.');
      if (dot == std::string::npos) Bad(key, s, "expected batch.<id>.<setting>");
      std::string id = rest.substr(0, dot);
      if (!batch_settings.count(id)) batch_order.push_back(id);
      batch_settings[id].emplace_back(rest.substr(dot + 1), key);
    } else {
      Bad(key, s, "unknown key");
    }
  }

  auto make_batch = [&](const std::string& id, BatchSpec spec) {
    bool has_seed = false;
    for (const auto& [name, key] : gen_defaults) {
      ApplyGenSetting(name, key, kv.at(key), &spec);
    }
    if (batch_settings.count(id)) {
      for (const auto& [name, key] : batch_settings.at(id)) {
        ApplyGenSetting(name, key, kv.at(key), &spec);
        has_seed |= name == "seed";
      }
    }
    if (!has_seed) spec.config.seed = SplitMix64(global_seed ^ HashString(id));
    c.batches.push_back({id, spec});
  };

  std::set<std::string> matrix_ids;
  if (matrix_kinds || matrix_depths || matrix_count) {
    if (!matrix_kinds || !matrix_depths || !matrix_count) {
      throw ConfigError("matrix.kinds, matrix.depths and matrix.count go together");
    }
    const uint64_t count = ToU64("matrix.count", *matrix_count);
    for (const std::string& k : SplitList(matrix_kinds->value)) {
      std::optional<GenKind> kind = ParseGenKind(k);
      if (!kind) Bad("matrix.kinds", *matrix_kinds, "unknown kind " + k);
      for (const std::string& d : SplitList(matrix_depths->value)) {
        BatchSpec spec;
        spec.count = count;
        spec.config.kind = *kind;
        spec.config.max_depth =
            static_cast<int>(ToInt("matrix.depths", Setting{d, matrix_depths->line}));
        std::string id = std::string(GenKindName(*kind)) + "-d" + d;
        std::transform(id.begin(), id.end(), id.begin(), ::tolower);
        matrix_ids.insert(id);
        make_batch(id, spec);
      }
    }
  }
  for (const std::string& id : batch_order) {
    if (matrix_ids.count(id)) {
      // Overrides for a matrix batch.
      auto it = std::find_if(c.batches.begin(), c.batches.end(),
                             [&](const CampaignBatch& b) { return b.id == id; });
      for (const auto& [name, key] : batch_settings.at(id)) {
        ApplyGenSetting(name, key, kv.at(key), &it->spec);
      }
    } else {
      make_batch(id, BatchSpec{});
    }
  }
  if (boogie_enabled) c.boogie = boogie;
  return c;
}

CampaignConfig CampaignConfig::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return Parse(ss.str());
}

void CampaignConfig::Validate() const {
  if (batches.empty()) throw ConfigError("no batches configured");
  std::set<std::string> ids;
  for (const CampaignBatch& b : batches) {
    if (!LegalBatchId(b.id)) throw ConfigError("illegal batch id '" + b.id + "'");
    if (!ids.insert(b.id).second) throw ConfigError("duplicate batch id " + b.id);
    if (b.spec.count == 0) throw ConfigError("batch " + b.id + ": count must be >= 1");
    try {
      b.spec.config.Validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("batch " + b.id + ": " + e.what());
    }
  }
  if (gen_workers < 1 || exec_workers < 1 || verify_workers < 1) {
    throw ConfigError("worker counts must be >= 1");
  }
  if (lease < 1) throw ConfigError("lease must be >= 1");
  if (output_dir.empty()) throw ConfigError("output_dir is empty");
  if (boogie) {
    try {
      boogie->Validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("boogie: ") + e.what());
    }
    if (!ResolveBoogieBinary(boogie->binary)) {
      throw ConfigError("verification requested but no Boogie binary found "
                        "(set boogie.binary or BCC_BOOGIE)");
    }
  }
}

// --- records ---------------------------------------------------------------

std::string RecordId(std::string_view batch, uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06llu", static_cast<unsigned long long>(index));
  return std::string(batch) + "/" + buf;
}

namespace {

json StatsJson(const TermStats& s) {
  return {{"locals", s.n_locals},       {"statements", s.n_statements},
          {"arith", s.n_arith_exprs},   {"bool", s.n_bool_exprs},
          {"comp", s.n_comp_exprs},     {"literals", s.n_literals}};
}

TermStats StatsFromJson(const json& j) {
  TermStats s;
  s.n_locals = j.at("locals").get<uint64_t>();
  s.n_statements = j.at("statements").get<uint64_t>();
  s.n_arith_exprs = j.at("arith").get<uint64_t>();
  s.n_bool_exprs = j.at("bool").get<uint64_t>();
  s.n_comp_exprs = j.at("comp").get<uint64_t>();
  s.n_literals = j.at("literals").get<uint64_t>();
  return s;
}

template <typename E, typename F>
E ParseEnum(const json& j, F parse, const char* what) {
  std::optional<E> v = parse(j.get<std::string>());
  if (!v) throw std::invalid_argument(std::string("bad ") + what);
  return *v;
}

}  // namespace

std::string ResultRecord::ToJsonLine() const {
  json j;
  j["id"] = id;
  j["batch"] = batch;
  j["index"] = index;
  j["seed"] = seed;
  j["kind"] = std::string(GenKindName(kind));
  j["max_depth"] = max_depth;
  j["depth"] = depth;
  j["stats"] = StatsJson(stats);
  if (exec) {
    json e = {{"outcome", std::string(ExecKindName(exec->kind))},
              {"steps", exec->steps_taken},
              {"int_limit", exec->int_size_limit_hit}};
    if (exec->loop) e["loop"] = {exec->loop->first, exec->loop->recurrence};
    if (exec->judgment_error) {
      const JudgmentError& err = *exec->judgment_error;
      e["judgment"] = {{"kind", err.kind == JudgmentError::Kind::kNameError
                                    ? "name-error"
                                    : "type-error"},
                       {"location", err.location},
                       {"detail", err.detail}};
    }
    j["exec"] = e;
  } else {
    j["exec"] = nullptr;
  }
  j["error"] = error ? json(*error) : json(nullptr);
  if (boogie) {
    json diags = json::array();
    for (const Diagnostic& d : boogie->diagnostics) {
      diags.push_back({d.line, d.column, d.message});
    }
    j["boogie"] = {{"outcome", std::string(BoogieKindName(boogie->kind))},
                   {"time", boogie->time},
                   {"exit", boogie->exit_code},
                   {"killed", boogie->killed},
                   {"diagnostics", diags},
                   {"stdout", boogie->stdout_text},
                   {"stderr", boogie->stderr_text}};
  } else {
    j["boogie"] = nullptr;
  }
  j["verdict"] = verdict ? json(verdict->ToString()) : json(nullptr);
  if (incompleteness) {
    json guards = json::array();
    for (const ConstantGuard& g : incompleteness->guards) {
      guards.push_back({{"location", g.location}, {"value", g.value}});
    }
    j["incompleteness"] = {
        {"class", std::string(IncompletenessClassName(incompleteness->final_class))},
        {"proxy", std::string(IncompletenessClassName(incompleteness->proxy))},
        {"rerun", std::string(BoogieKindName(incompleteness->rerun))},
        {"guards", guards}};
  } else {
    j["incompleteness"] = nullptr;
  }
  j["files"] = {{"sexpr", sexpr_file}, {"bpl", bpl_file}};
  return j.dump();
}

ResultRecord ResultRecord::FromJsonLine(std::string_view line) {
  try {
    json j = json::parse(line);
    ResultRecord r;
    r.id = j.at("id").get<std::string>();
    r.batch = j.at("batch").get<std::string>();
    r.index = j.at("index").get<uint64_t>();
    r.seed = j.at("seed").get<uint64_t>();
    r.kind = ParseEnum<GenKind>(j.at("kind"), ParseGenKind, "kind");
    r.max_depth = j.at("max_depth").get<int>();
    r.depth = j.at("depth").get<int>();
    r.stats = StatsFromJson(j.at("stats"));
    if (const json& e = j.at("exec"); !e.is_null()) {
      ExecOutcome o;
      o.kind = ParseEnum<ExecKind>(e.at("outcome"), ParseExecKind, "exec outcome");
      o.steps_taken = e.at("steps").get<uint64_t>();
      o.int_size_limit_hit = e.at("int_limit").get<bool>();
      if (e.contains("loop")) {
        o.loop = LoopWitness{e["loop"][0].get<uint64_t>(), e["loop"][1].get<uint64_t>()};
      }
      if (e.contains("judgment")) {
        const json& g = e["judgment"];
        o.judgment_error = JudgmentError{
            g.at("kind").get<std::string>() == "name-error"
                ? JudgmentError::Kind::kNameError
                : JudgmentError::Kind::kTypeError,
            g.at("location").get<std::string>(), g.at("detail").get<std::string>()};
      }
      r.exec = o;
    }
    if (j.contains("error") && !j["error"].is_null()) {
      r.error = j["error"].get<std::string>();
    }
    if (const json& b = j.at("boogie"); !b.is_null()) {
      BoogieRecord br;
      br.kind = ParseEnum<BoogieKind>(b.at("outcome"), ParseBoogieKind, "boogie outcome");
      br.time = b.at("time").get<double>();
      br.exit_code = b.at("exit").get<int>();
      br.killed = b.at("killed").get<bool>();
      for (const json& d : b.at("diagnostics")) {
        br.diagnostics.push_back(
            {d[0].get<int>(), d[1].get<int>(), d[2].get<std::string>()});
      }
      br.stdout_text = b.at("stdout").get<std::string>();
      br.stderr_text = b.at("stderr").get<std::string>();
      r.boogie = br;
    }
    if (const json& v = j.at("verdict"); !v.is_null()) {
      r.verdict = Verdict::Parse(v.get<std::string>());
      if (!r.verdict) throw std::invalid_argument("bad verdict");
    }
    if (const json& inc = j.at("incompleteness"); !inc.is_null()) {
      IncompletenessRecord ir;
      ir.final_class = ParseEnum<IncompletenessClass>(
          inc.at("class"), ParseIncompletenessClass, "class");
      ir.proxy = ParseEnum<IncompletenessClass>(inc.at("proxy"),
                                                ParseIncompletenessClass, "proxy");
      ir.rerun = ParseEnum<BoogieKind>(inc.at("rerun"), ParseBoogieKind, "rerun");
      for (const json& g : inc.at("guards")) {
        ir.guards.push_back({g.at("location").get<std::string>(), g.at("value").get<bool>()});
      }
      r.incompleteness = ir;
    }
    r.sexpr_file = j.at("files").at("sexpr").get<std::string>();
    r.bpl_file = j.at("files").at("bpl").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed record: ") + e.what());
  }
}

namespace {

// Non-empty lines of `path`.
std::vector<std::string> LogLines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

std::vector<ResultRecord> ReadResultsLog(const std::string& path) {
  std::vector<std::string> lines = LogLines(path);
  std::vector<ResultRecord> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      out.push_back(ResultRecord::FromJsonLine(lines[i]));
    } catch (const std::invalid_argument& e) {
      if (i + 1 == lines.size()) break;
      throw std::runtime_error(path + ": line " + std::to_string(i + 1) + ": " +
                               e.what());
    }
  }
  return out;
}

std::vector<std::string> CanonicalLog(const std::string& path) {
  std::vector<std::pair<std::string, std::string>> keyed;
  for (std::string& line : LogLines(path)) {
    try {
      keyed.emplace_back(ResultRecord::FromJsonLine(line).id, std::move(line));
    } catch (const std::invalid_argument&) {
    }
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::string> out;
  for (auto& [id, line] : keyed) out.push_back(std::move(line));
  return out;
}

// --- aggregation -----------------------------------------------------------

std::string Percent(uint64_t part, uint64_t whole) {
  if (whole == 0) return "0.0";
  // Tenths of a percent, rounded half up.
  const unsigned __int128 tenths =
      (static_cast<unsigned __int128>(part) * 2000 + whole) / (2 * static_cast<unsigned __int128>(whole));
  const auto t = static_cast<unsigned long long>(tenths);
  return std::to_string(t / 10) + "." + std::to_string(t % 10);
}

namespace {

struct BatchAccumulator {
  BatchReport report;
  std::map<std::string, std::vector<uint64_t>> values;

  void Add(const ResultRecord& r) {
    BatchReport& b = report;
    if (b.n == 0) {
      b.kind = r.kind;
      b.max_depth = r.max_depth;
    } else {
      if (b.kind != r.kind) b.kind.reset();
      if (b.max_depth != r.max_depth) b.max_depth.reset();
    }
    ++b.n;
    values["locals"].push_back(r.stats.n_locals);
    values["statements"].push_back(r.stats.n_statements);
    values["arith"].push_back(r.stats.n_arith_exprs);
    values["bool"].push_back(r.stats.n_bool_exprs);
    values["comp"].push_back(r.stats.n_comp_exprs);
    values["literals"].push_back(r.stats.n_literals);
    values["depth"].push_back(static_cast<uint64_t>(r.depth));
    if (r.exec) {
      values["steps"].push_back(r.exec->steps_taken);
      ++b.exec_counts[static_cast<int>(r.exec->kind)];
    } else {
      ++b.exec_errors;
    }
    if (r.boogie) {
      ++b.verified;
      ++b.boogie_counts[static_cast<int>(r.boogie->kind)];
      if (r.exec) {
        ++b.matrix[static_cast<int>(r.exec->kind)][static_cast<int>(r.boogie->kind)];
        if (r.exec->kind == ExecKind::kSuccess || r.exec->kind == ExecKind::kLoop) {
          ++b.correct;
          b.correct_verified += r.boogie->kind == BoogieKind::kSuccess;
        }
      }
    }
    if (r.verdict) ++b.verdicts[r.verdict->ToString()];
    if (r.incompleteness) {
      ++b.incompleteness[std::string(IncompletenessClassName(r.incompleteness->final_class))];
    }
  }

  BatchReport Finish() {
    for (std::string_view field : kStatFields) {
      std::vector<uint64_t>& v = values[std::string(field)];
      Summary3 s;
      if (!v.empty()) {
        std::sort(v.begin(), v.end());
        s = {v.front(), v[(v.size() - 1) / 2], v.back()};
      }
      report.stats[std::string(field)] = s;
    }
    return report;
  }
};

}  // namespace

AggregateReport Aggregate(const std::vector<ResultRecord>& records,
                          const std::vector<std::string>& order) {
  std::map<std::string, BatchAccumulator> by_batch;
  BatchAccumulator total;
  total.report.batch = "TOTAL";
  for (const ResultRecord& r : records) {
    BatchAccumulator& acc = by_batch[r.batch];
    acc.report.batch = r.batch;
    acc.Add(r);
    total.Add(r);
  }
  AggregateReport out;
  for (const std::string& id : order) {
    auto it = by_batch.find(id);
    if (it == by_batch.end()) continue;
    out.batches.push_back(it->second.Finish());
    by_batch.erase(it);
  }
  for (auto& [id, acc] : by_batch) out.batches.push_back(acc.Finish());
  out.total = total.Finish();
  return out;
}

namespace {

json BatchJson(const BatchReport& b) {
  json j;
  j["batch"] = b.batch;
  j["kind"] = b.kind ? json(std::string(GenKindName(*b.kind))) : json(nullptr);
  j["max_depth"] = b.max_depth ? json(*b.max_depth) : json(nullptr);
  j["n"] = b.n;
  for (const auto& [field, s] : b.stats) {
    j["stats"][field] = {{"min", s.min}, {"median", s.median}, {"max", s.max}};
  }
  for (ExecKind k : kAllExecKinds) {
    j["exec"][std::string(ExecKindName(k))] = b.exec_counts[static_cast<int>(k)];
  }
  j["exec_errors"] = b.exec_errors;
  j["verified"] = b.verified;
  if (b.verified > 0) {
    for (BoogieKind k : kAllBoogieKinds) {
      j["boogie"][std::string(BoogieKindName(k))] = b.boogie_counts[static_cast<int>(k)];
    }
    for (ExecKind p : kAllExecKinds) {
      for (BoogieKind q : kAllBoogieKinds) {
        j["matrix"][std::string(ExecKindName(p))][std::string(BoogieKindName(q))] =
            b.matrix[static_cast<int>(p)][static_cast<int>(q)];
      }
    }
    j["verdicts"] = b.verdicts;
    j["incompleteness"] = b.incompleteness;
    j["correct"] = b.correct;
    j["correct_verified"] = b.correct_verified;
  }
  return j;
}

std::string Table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t i = 0; i < row.size(); ++i) {
      width[i] = std::max(width[i], row[i].size());
    }
  }
  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::string line;
    for (std::size_t i = 0; i < rows[r].size(); ++i) {
      const std::string& cell = rows[r][i];
      std::string pad(width[i] - cell.size(), ' ');
      line += i == 0 ? cell + pad : "  " + pad + cell;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t i = 0; i < width.size(); ++i) total += width[i] + (i ? 2 : 0);
      out += std::string(total, '-') + "\n";
    }
  }
  return out;
}

std::string CountPct(uint64_t part, uint64_t whole) {
  return std::to_string(part) + " (" + Percent(part, whole) + "%)";
}

}  // namespace

std::string ReportJson(const AggregateReport& report) {
  json j;
  j["batches"] = json::array();
  for (const BatchReport& b : report.batches) j["batches"].push_back(BatchJson(b));
  j["total"] = BatchJson(report.total);
  return j.dump(2) + "\n";
}

std::string FormatReport(const AggregateReport& report) {
  std::vector<const BatchReport*> rows;
  for (const BatchReport& b : report.batches) rows.push_back(&b);
  rows.push_back(&report.total);

  std::string out = "Program statistics (min / median / max)\n\n";
  {
    std::vector<std::vector<std::string>> t;
    std::vector<std::string> head = {"batch", "n"};
    for (std::string_view f : kStatFields) head.emplace_back(f);
    t.push_back(head);
    for (const BatchReport* b : rows) {
      std::vector<std::string> row = {b->batch, std::to_string(b->n)};
      for (std::string_view f : kStatFields) {
        const Summary3& s = b->stats.at(std::string(f));
        row.push_back(std::to_string(s.min) + "/" + std::to_string(s.median) + "/" +
                      std::to_string(s.max));
      }
      t.push_back(row);
    }
    out += Table(t);
  }

  out += "\nExecution outcomes\n\n";
  {
    std::vector<std::vector<std::string>> t;
    std::vector<std::string> head = {"batch", "n"};
    for (ExecKind k : kAllExecKinds) head.emplace_back(ExecKindName(k));
    const bool any_errors = report.total.exec_errors > 0;
    if (any_errors) head.emplace_back("ERROR");
    t.push_back(head);
    for (const BatchReport* b : rows) {
      std::vector<std::string> row = {b->batch, std::to_string(b->n)};
      for (ExecKind k : kAllExecKinds) {
        row.push_back(CountPct(b->exec_counts[static_cast<int>(k)], b->n));
      }
      if (any_errors) row.push_back(CountPct(b->exec_errors, b->n));
      t.push_back(row);
    }
    out += Table(t);
  }

  if (report.total.verified == 0) return out;

  out += "\nVerifier outcomes\n\n";
  {
    std::vector<std::vector<std::string>> t;
    std::vector<std::string> head = {"batch", "verified"};
    for (BoogieKind k : kAllBoogieKinds) head.emplace_back(BoogieKindName(k));
    t.push_back(head);
    for (const BatchReport* b : rows) {
      std::vector<std::string> row = {b->batch, std::to_string(b->verified)};
      for (BoogieKind k : kAllBoogieKinds) {
        row.push_back(CountPct(b->boogie_counts[static_cast<int>(k)], b->verified));
      }
      t.push_back(row);
    }
    out += Table(t);
  }

  const BatchReport& tot = report.total;
  out += "\nOutcome combinations (all batches; rows: execution, columns: verifier)\n\n";
  {
    std::vector<std::vector<std::string>> t;
    std::vector<std::string> head = {"exec \\ boogie"};
    for (BoogieKind k : kAllBoogieKinds) head.emplace_back(BoogieKindName(k));
    t.push_back(head);
    for (ExecKind p : kAllExecKinds) {
      std::vector<std::string> row = {std::string(ExecKindName(p))};
      for (BoogieKind q : kAllBoogieKinds) {
        row.push_back(CountPct(tot.matrix[static_cast<int>(p)][static_cast<int>(q)],
                               tot.verified));
      }
      t.push_back(row);
    }
    out += Table(t);
  }

  out += "\nVerdicts\n\n";
  {
    std::vector<std::vector<std::string>> t = {{"verdict", "count"}};
    for (std::string_view v : kAllVerdictNames) {
      auto it = tot.verdicts.find(std::string(v));
      t.push_back({std::string(v),
                   CountPct(it == tot.verdicts.end() ? 0 : it->second, tot.verified)});
    }
    for (const auto& [cls, n] : tot.incompleteness) {
      t.push_back({"  " + cls, std::to_string(n)});
    }
    out += Table(t);
  }
  out += "\nCorrect programs (SUCCESS or LOOP) verified: " +
         CountPct(tot.correct_verified, tot.correct) + " of " +
         std::to_string(tot.correct) + "\n";
  return out;
}

// --- running ---------------------------------------------------------------

namespace {

template <typename F>
void ParallelFor(std::size_t n, int workers, int lease, F&& body) {
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (;;) {
      std::size_t begin = next.fetch_add(static_cast<std::size_t>(lease));
      if (begin >= n) return;
      std::size_t end = std::min(n, begin + static_cast<std::size_t>(lease));
      for (std::size_t i = begin; i < end; ++i) body(i);
    }
  };
  const int threads = static_cast<int>(std::min<std::size_t>(
      static_cast<std::size_t>(std::max(workers, 1)), std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    run();
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(run);
  for (std::thread& th : pool) th.join();
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string IdentityJson(const CampaignConfig& cfg) {
  json j;
  j["identity"] = cfg.identity;
  return j.dump(2) + "\n";
}

BoogieRecord ToRecord(const BoogieResult& r) {
  return {r.kind, r.wall_time, r.exit_code, r.killed, r.diagnostics,
          r.stdout_text, r.stderr_text};
}

}  // namespace

CampaignResult RunCampaign(const CampaignConfig& cfg, std::ostream* progress) {
  cfg.Validate();
  const fs::path out_dir(cfg.output_dir);
  const fs::path log_path = out_dir / "results.jsonl";
  const fs::path manifest_path = out_dir / "campaign.json";
  const std::string identity = IdentityJson(cfg);

  CampaignResult result;
  std::set<std::string> done;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw ConfigError("cannot create " + out_dir.string() + ": " + ec.message());
  if (fs::exists(log_path)) {
    if (!cfg.resume) {
      throw ConfigError(log_path.string() +
                        " exists; set resume = true or use another output_dir");
    }
    if (fs::exists(manifest_path)) {
      std::ifstream in(manifest_path);
      std::stringstream ss;
      ss << in.rdbuf();
      if (ss.str() != identity) {
        throw ConfigError("cannot resume: configuration differs from " +
                          manifest_path.string());
      }
    }
    // Rewrite without an interrupted trailing line.
    std::vector<ResultRecord> prior = ReadResultsLog(log_path.string());
    std::ofstream rewrite(log_path, std::ios::binary | std::ios::trunc);
    for (const ResultRecord& r : prior) {
      if (done.insert(r.id).second) rewrite << r.ToJsonLine() << "\n";
    }
    result.resumed = done.size();
  }
  WriteFile(manifest_path, identity);

  std::ofstream log(log_path, std::ios::binary | std::ios::app);
  if (!log) throw ConfigError("cannot write " + log_path.string());
  std::mutex log_mutex;
  std::atomic<uint64_t> produced{0};
  auto emit = [&](const ResultRecord& r) {
    std::string line = r.ToJsonLine();
    std::lock_guard<std::mutex> lock(log_mutex);
    log << line << "\n";
    log.flush();
    ++produced;
  };

  for (const CampaignBatch& batch : cfg.batches) {
    std::vector<GeneratedProgram> programs;
    try {
      BatchGenerator gen(batch.spec, cfg.gen_workers);
      while (std::optional<GeneratedProgram> g = gen.Next()) {
        programs.push_back(std::move(*g));
      }
    } catch (const SaturationError& e) {
      result.warnings.push_back("batch " + batch.id + ": " + e.what() + " (" +
                                std::to_string(e.accepted()) + " programs kept)");
      BatchGenerator gen(
          BatchSpec{e.accepted(), batch.spec.config, 1e18, UINT64_MAX}, cfg.gen_workers);
      programs.clear();
      while (std::optional<GeneratedProgram> g = gen.Next()) {
        programs.push_back(std::move(*g));
      }
    }

    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < programs.size(); ++i) {
      if (!done.count(RecordId(batch.id, programs[i].index))) pending.push_back(i);
    }
    const fs::path prog_dir = out_dir / "programs" / batch.id;
    if (cfg.write_programs && !pending.empty()) fs::create_directories(prog_dir);

    std::vector<ResultRecord> records(pending.size());
    ParallelFor(pending.size(), cfg.exec_workers, cfg.lease, [&](std::size_t k) {
      const GeneratedProgram& g = programs[pending[k]];
      ResultRecord& r = records[k];
      r.batch = batch.id;
      r.index = g.index;
      r.id = RecordId(batch.id, g.index);
      r.seed = g.seed;
      r.kind = batch.spec.config.kind;
      r.max_depth = batch.spec.config.max_depth;
      r.depth = Depth(g.program);
      r.stats = ComputeTermStats(g.program);
      try {
        if (cfg.write_programs) {
          char name[32];
          std::snprintf(name, sizeof name, "%06llu",
                        static_cast<unsigned long long>(g.index));
          r.sexpr_file = (fs::path("programs") / batch.id / (std::string(name) + ".sexpr")).string();
          r.bpl_file = (fs::path("programs") / batch.id / (std::string(name) + ".bpl")).string();
          WriteFile(out_dir / r.sexpr_file, EmitSexpr(g.program) + "\n");
          WriteFile(out_dir / r.bpl_file, EmitBoogie(g.program, cfg.style));
        }
        r.exec = Execute(g.program, cfg.exec);
      } catch (const std::exception& e) {
        r.error = std::string("execution: ") + e.what();
      }
      if (!cfg.boogie) emit(r);
    });

    if (cfg.boogie) {
      ParallelFor(pending.size(), cfg.verify_workers, 1, [&](std::size_t k) {
        const GeneratedProgram& g = programs[pending[k]];
        ResultRecord& r = records[k];
        try {
          r.boogie = ToRecord(VerifyProgram(g.program, *cfg.boogie, cfg.style));
        } catch (const std::exception& e) {
          BoogieRecord crash;
          crash.kind = BoogieKind::kCrash;
          crash.stderr_text = std::string("harness: ") + e.what();
          r.boogie = crash;
        }
        if (r.exec) {
          r.verdict = Check(r.exec->kind, r.boogie->kind);
          if (cfg.classify_incompleteness && r.verdict->mismatch == MismatchKind::kCompleteness) {
            try {
              IncompletenessReport inc = ClassifyIncompleteness(g.program, *cfg.boogie, cfg.style);
              r.incompleteness = IncompletenessRecord{inc.Final(), inc.proxy,
                                                      inc.rerun.kind, inc.guards};
            } catch (const std::exception&) {
              r.incompleteness = IncompletenessRecord{
                  IncompletenessClass::kIndeterminate, IncompletenessClass::kIndeterminate,
                  BoogieKind::kCrash, DetectConstantGuard(g.program)};
            }
          }
        }
        emit(r);
      });
    }
    if (progress) {
      *progress << "batch " << batch.id << ": " << programs.size() << " programs, "
                << pending.size() << " run, "
                << programs.size() - pending.size() << " resumed\n";
    }
  }
  log.close();
  result.produced = produced.load();

  std::vector<std::string> order;
  for (const CampaignBatch& b : cfg.batches) order.push_back(b.id);
  result.report = Aggregate(ReadResultsLog(log_path.string()), order);
  WriteFile(out_dir / "report.json", ReportJson(result.report));
  WriteFile(out_dir / "report.txt", FormatReport(result.report));
  for (const std::string& w : result.warnings) {
    if (progress) *progress << "warning: " << w << "\n";
  }
  return result;
}

}  // namespace bcc
