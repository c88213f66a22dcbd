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

#include "bcc/boogie.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace bcc {

namespace {

struct BuiltinEntry {
  const char* version;
  const char* text;
};

constexpr BuiltinEntry kBuiltinTables[] = {
#include "bcc/builtin_patterns.inc"
};

constexpr std::string_view kKindNames[] = {
    "SUCCESS", "FAILURE", "TIMEOUT", "NAME_ERROR", "TYPE_ERROR", "PARSE_ERROR",
    "CRASH"};

std::vector<std::string_view> Lines(std::string_view text) {
  std::vector<std::string_view> out;
  while (!text.empty()) {
    std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return out;
}

bool AnyMatch(const std::vector<std::regex>& family, const std::string& s) {
  for (const std::regex& re : family) {
    if (std::regex_search(s, re)) return true;
  }
  return false;
}

}  // namespace

std::string_view BoogieKindName(BoogieKind kind) {
  return kKindNames[static_cast<int>(kind)];
}

std::optional<BoogieKind> ParseBoogieKind(std::string_view name) {
  for (BoogieKind k : kAllBoogieKinds) {
    if (BoogieKindName(k) == name) return k;
  }
  return std::nullopt;
}

PatternTable PatternTable::Parse(std::string_view text) {
  PatternTable t;
  bool have_summary = false;
  bool have_diagnostic = false;
  int lineno = 0;
  for (std::string_view line : Lines(text)) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw std::invalid_argument("pattern table line " +
                                  std::to_string(lineno) + ": missing tab");
    }
    std::string family(line.substr(0, tab));
    std::string pattern(line.substr(tab + 1));
    std::regex re;
    try {
      re = std::regex(pattern, std::regex::ECMAScript | std::regex::optimize);
    } catch (const std::regex_error& e) {
      throw std::invalid_argument("pattern table line " +
                                  std::to_string(lineno) + ": " + e.what());
    }
    if (family == "summary") {
      t.summary_ = std::move(re);
      have_summary = true;
    } else if (family == "diagnostic") {
      t.diagnostic_ = std::move(re);
      have_diagnostic = true;
    } else if (family == "assertion") {
      t.assertion_.push_back(std::move(re));
    } else if (family == "name") {
      t.name_.push_back(std::move(re));
    } else if (family == "type") {
      t.type_.push_back(std::move(re));
    } else if (family == "parse") {
      t.parse_.push_back(std::move(re));
    } else {
      throw std::invalid_argument("pattern table line " +
                                  std::to_string(lineno) +
                                  ": unknown family " + family);
    }
  }
  if (!have_summary || !have_diagnostic) {
    throw std::invalid_argument(
        "pattern table needs summary and diagnostic entries");
  }
  return t;
}

const PatternTable& PatternTable::Builtin(std::string_view version) {
  static const std::map<std::string, PatternTable, std::less<>> tables = [] {
    std::map<std::string, PatternTable, std::less<>> m;
    for (const BuiltinEntry& e : kBuiltinTables) {
      m.emplace(e.version, Parse(e.text));
    }
    return m;
  }();
  auto it = tables.find(version);
  if (it == tables.end()) {
    throw std::invalid_argument("no pattern table for Boogie " +
                                std::string(version));
  }
  return it->second;
}

std::vector<std::string> PatternTable::BuiltinVersions() {
  std::vector<std::string> out;
  for (const BuiltinEntry& e : kBuiltinTables) out.emplace_back(e.version);
  return out;
}

const std::vector<std::regex>& PatternTable::family(
    std::string_view name) const {
  if (name == "assertion") return assertion_;
  if (name == "name") return name_;
  if (name == "type") return type_;
  if (name == "parse") return parse_;
  throw std::invalid_argument("unknown pattern family " + std::string(name));
}

BoogieResult ClassifyOutput(int exit_code, std::string_view stdout_text,
                            std::string_view stderr_text,
                            const PatternTable& table) {
  BoogieResult r;
  r.exit_code = exit_code;
  r.stdout_text = std::string(stdout_text);
  r.stderr_text = std::string(stderr_text);

  std::vector<std::string> lines;
  for (std::string_view l : Lines(stdout_text)) lines.emplace_back(l);
  for (std::string_view l : Lines(stderr_text)) lines.emplace_back(l);

  std::optional<std::smatch> summary;
  for (const std::string& line : lines) {
    std::smatch m;
    if (std::regex_search(line, m, table.diagnostic()) && m.size() >= 4) {
      r.diagnostics.push_back(
          {std::atoi(m[1].str().c_str()), std::atoi(m[2].str().c_str()),
           m[3].str()});
    }
    if (!summary && std::regex_search(line, m, table.summary())) summary = m;
  }

  auto count = [](const std::ssub_match& g) {
    return g.matched ? std::strtoull(g.str().c_str(), nullptr, 10) : 0ULL;
  };

  if (summary) {
    const std::smatch& m = *summary;
    const uint64_t errors = m.size() > 2 ? count(m[2]) : 0;
    const uint64_t timeouts =
        (m.size() > 3 ? count(m[3]) : 0) + (m.size() > 4 ? count(m[4]) : 0);
    if (errors > 0) {
      bool assertion = false;
      for (const Diagnostic& d : r.diagnostics) {
        assertion |= AnyMatch(table.family("assertion"), d.message);
      }
      r.kind = assertion ? BoogieKind::kFailure : BoogieKind::kCrash;
    } else if (timeouts > 0) {
      r.kind = BoogieKind::kTimeout;
    } else {
      r.kind = r.diagnostics.empty() ? BoogieKind::kSuccess : BoogieKind::kCrash;
    }
    return r;
  }

  for (const char* family : {"name", "type", "parse"}) {
    for (const std::string& line : lines) {
      if (AnyMatch(table.family(family), line)) {
        r.kind = family[0] == 'n'   ? BoogieKind::kNameError
                 : family[0] == 't' ? BoogieKind::kTypeError
                                    : BoogieKind::kParseError;
        return r;
      }
    }
  }
  r.kind = BoogieKind::kCrash;
  return r;
}

void BoogieConfig::Validate() const {
  if (!(timeout_s > 0)) {
    throw std::invalid_argument("boogie timeout must be positive");
  }
  if (patterns_file.empty()) PatternTable::Builtin(version);
}

std::optional<std::string> ResolveBoogieBinary(const std::string& configured) {
  namespace fs = std::filesystem;
  auto executable = [](const fs::path& p) {
    std::error_code ec;
    return fs::is_regular_file(p, ec) && ::access(p.c_str(), X_OK) == 0;
  };
  if (!configured.empty()) {
    if (configured.find('/') != std::string::npos) {
      return executable(configured) ? std::optional(configured) : std::nullopt;
    }
  }
  std::string name = configured;
  if (name.empty()) {
    if (const char* env = std::getenv("BCC_BOOGIE"); env && *env) {
      std::string s(env);
      if (s.find('/') != std::string::npos) {
        return executable(s) ? std::optional(s) : std::nullopt;
      }
      name = s;
    } else {
      name = "boogie";
    }
  }
  const char* path = std::getenv("PATH");
  std::stringstream dirs(path ? path : "");
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (dir.empty()) continue;
    fs::path candidate = fs::path(dir) / name;
    if (executable(candidate)) return candidate.string();
  }
  return std::nullopt;
}

namespace {

class ScratchDir {
 public:
  ScratchDir(const std::string& parent, bool keep) : keep_(keep) {
    namespace fs = std::filesystem;
    fs::path base = parent.empty() ? fs::temp_directory_path() : fs::path(parent);
    fs::create_directories(base);
    std::string templ = (base / "bcc-XXXXXX").string();
    if (::mkdtemp(templ.data()) == nullptr) {
      throw std::system_error(errno, std::generic_category(), "mkdtemp");
    }
    path_ = templ;
  }
  ~ScratchDir() {
    if (!keep_) {
      std::error_code ec;
      std::filesystem::remove_all(path_, ec);
    }
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  bool keep_;
};

struct ChildOutput {
  int exit_code = 0;
  bool signaled = false;
  bool killed = false;
  std::string out;
  std::string err;
  double wall_time = 0;
};

ChildOutput RunChild(const std::vector<std::string>& argv,
                     const std::filesystem::path& cwd, double timeout_s) {
  int out_pipe[2];
  int err_pipe[2];
  if (::pipe2(out_pipe, O_CLOEXEC) != 0 || ::pipe2(err_pipe, O_CLOEXEC) != 0) {
    throw std::system_error(errno, std::generic_category(), "pipe");
  }
  std::vector<char*> cargv;
  for (const std::string& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  const auto start = std::chrono::steady_clock::now();
  pid_t pid = ::fork();
  if (pid < 0) throw std::system_error(errno, std::generic_category(), "fork");
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::dup2(err_pipe[1], STDERR_FILENO);
    int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
    if (::chdir(cwd.c_str()) != 0) ::_exit(127);
    ::execvp(cargv[0], cargv.data());
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);

  ChildOutput r;
  const auto deadline =
      start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                  std::chrono::duration<double>(timeout_s));
  pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
  std::string* sinks[2] = {&r.out, &r.err};
  bool reaped = false;
  int status = 0;
  char buf[65536];

  auto kill_group = [&] { ::kill(-pid, SIGKILL); };

  while (fds[0].fd >= 0 || fds[1].fd >= 0) {
    auto now = std::chrono::steady_clock::now();
    if (!r.killed && !reaped && now >= deadline) {
      r.killed = true;
      kill_group();
    }
    int wait_ms = 50;
    if (!r.killed && !reaped) {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                      deadline - now).count();
      wait_ms = static_cast<int>(std::clamp<long long>(left + 1, 1, 50));
    }
    int n = ::poll(fds, 2, wait_ms);
    if (n < 0 && errno != EINTR) break;
    for (int i = 0; i < 2; ++i) {
      if (fds[i].fd < 0 || !(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) {
        continue;
      }
      ssize_t got = ::read(fds[i].fd, buf, sizeof buf);
      if (got > 0) {
        sinks[i]->append(buf, static_cast<std::size_t>(got));
      } else if (got == 0 || errno != EINTR) {
        ::close(fds[i].fd);
        fds[i].fd = -1;
      }
    }
    if (!reaped && ::waitpid(pid, &status, WNOHANG) == pid) {
      reaped = true;
      // Descendants may still hold the pipes open.
      kill_group();
    }
  }
  if (!reaped) {
    ::waitpid(pid, &status, 0);
    kill_group();
  }
  r.wall_time = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start).count();
  if (WIFSIGNALED(status)) {
    r.signaled = true;
    r.exit_code = 128 + WTERMSIG(status);
  } else {
    r.exit_code = WEXITSTATUS(status);
  }
  return r;
}

BoogieResult RunIn(const std::filesystem::path& file,
                   const std::filesystem::path& dir, const BoogieConfig& cfg) {
  cfg.Validate();
  std::optional<std::string> binary = ResolveBoogieBinary(cfg.binary);
  if (!binary) throw BoogieUnavailable("Boogie binary not found (set --boogie or BCC_BOOGIE)");

  std::optional<PatternTable> custom;
  if (!cfg.patterns_file.empty()) {
    std::ifstream in(cfg.patterns_file);
    if (!in) throw std::runtime_error("cannot read " + cfg.patterns_file);
    std::stringstream ss;
    ss << in.rdbuf();
    custom = PatternTable::Parse(ss.str());
  }
  const PatternTable& table =
      custom ? *custom : PatternTable::Builtin(cfg.version);

  std::vector<std::string> argv = {*binary,
                                   std::filesystem::absolute(file).string()};
  argv.insert(argv.end(), cfg.flags.begin(), cfg.flags.end());
  ChildOutput c = RunChild(argv, dir, cfg.timeout_s);

  BoogieResult r;
  if (c.killed) {
    r.kind = BoogieKind::kTimeout;
    r.exit_code = c.exit_code;
    r.stdout_text = std::move(c.out);
    r.stderr_text = std::move(c.err);
  } else if (c.signaled) {
    r.kind = BoogieKind::kCrash;
    r.exit_code = c.exit_code;
    r.stdout_text = std::move(c.out);
    r.stderr_text = std::move(c.err);
  } else {
    r = ClassifyOutput(c.exit_code, c.out, c.err, table);
  }
  r.killed = c.killed;
  r.wall_time = c.wall_time;
  return r;
}

}  // namespace

BoogieResult RunBoogie(const std::string& file, const BoogieConfig& cfg) {
  if (!std::filesystem::is_regular_file(file)) {
    throw std::invalid_argument("no such file: " + file);
  }
  ScratchDir dir(cfg.work_dir, cfg.keep_scratch);
  return RunIn(file, dir.path(), cfg);
}

BoogieResult VerifyProgram(const Program& program, const BoogieConfig& cfg,
                           EmitStyle style) {
  ScratchDir dir(cfg.work_dir, cfg.keep_scratch);
  char name[32];
  std::snprintf(name, sizeof name, "p%016llx.bpl",
                static_cast<unsigned long long>(StructuralHash(program)));
  std::filesystem::path file = dir.path() / name;
  {
    std::ofstream out(file);
    out << EmitBoogie(program, style);
    if (!out) throw std::runtime_error("cannot write " + file.string());
  }
  return RunIn(file, dir.path(), cfg);
}

}  // namespace bcc
