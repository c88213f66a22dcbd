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

// bcc command-line driver.

#include <sysexits.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bcc/boogie.hpp"
#include "bcc/campaign.hpp"
#include "bcc/consistency.hpp"
#include "bcc/executor.hpp"
#include "bcc/generator.hpp"
#include "bcc/syntax.hpp"

namespace {

namespace fs = std::filesystem;
using namespace bcc;

std::string ReadAll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct VerifierOptions {
  std::string binary;
  double timeout_s = 60;
  std::vector<std::string> flags;
  std::string version = std::string(kDefaultBoogieVersion);
  std::string patterns;
  std::string style = "decl-with-init";

  void Add(CLI::App* app) {
    app->add_option("--boogie", binary, "Boogie binary (default: $BCC_BOOGIE, then PATH)");
    app->add_option("--timeout", timeout_s, "Wall-clock limit in seconds")
        ->check(CLI::PositiveNumber);
    app->add_option("--flag", flags, "Extra verifier argument (repeatable)");
    app->add_option("--boogie-version", version, "Output pattern table version");
    app->add_option("--patterns", patterns, "Pattern table file overriding the builtin one");
    app->add_option("--style", style, "decl-with-init or decl-then-assign");
  }
  BoogieConfig Config() const {
    BoogieConfig c;
    c.binary = binary;
    c.timeout_s = timeout_s;
    c.flags = flags;
    c.version = version;
    c.patterns_file = patterns;
    c.Validate();
    return c;
  }
};

void PrintBoogie(const BoogieResult& r, bool raw) {
  std::cout << "boogie: " << BoogieKindName(r.kind) << " (exit " << r.exit_code
            << ", " << r.wall_time << " s" << (r.killed ? ", killed" : "") << ")\n";
  for (const Diagnostic& d : r.diagnostics) {
    std::cout << "  " << d.line << ":" << d.column << ": " << d.message << "\n";
  }
  if (raw) std::cout << r.stdout_text << r.stderr_text;
}

int Gen(const GenConfig& base, uint64_t count, int workers, const std::string& format,
        const std::string& out_dir) {
  BatchSpec spec;
  spec.count = count;
  spec.config = base;
  BatchGenerator gen(spec, workers);
  std::ofstream manifest;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    manifest.open(fs::path(out_dir) / "manifest.tsv");
    manifest << "# index\tcandidate\tseed\tfile\n";
  }
  bool first = true;
  while (std::optional<GeneratedProgram> g = gen.Next()) {
    const std::string text =
        format == "boogie" ? EmitBoogie(g->program) : EmitSexpr(g->program) + "\n";
    if (out_dir.empty()) {
      if (!first) std::cout << "\n";
      std::cout << text;
    } else {
      char name[32];
      std::snprintf(name, sizeof name, "%06llu.%s",
                    static_cast<unsigned long long>(g->index),
                    format == "boogie" ? "bpl" : "sexpr");
      std::ofstream(fs::path(out_dir) / name) << text;
      manifest << g->index << "\t" << g->candidate << "\t" << g->seed << "\t" << name
               << "\n";
    }
    first = false;
  }
  return 0;
}

int Exec(const std::string& file, ExecConfig cfg, bool trace) {
  Program p = ParseSexpr(ReadAll(file));
  if (trace) {
    cfg.observer = [](uint64_t step, const MachineTerm& t, const Decomposition& d) {
      std::cout << FormatTraceLine(step, t, d.redex) << "\n";
    };
  }
  ExecOutcome o = Execute(p, cfg);
  std::cout << ExecKindName(o.kind) << " after " << o.steps_taken << " steps";
  if (o.loop) {
    std::cout << " (term at step " << o.loop->first << " recurs at step "
              << o.loop->recurrence << ")";
  }
  if (o.int_size_limit_hit) std::cout << " (integer size limit)";
  std::cout << "\n";
  if (o.judgment_error) std::cout << o.judgment_error->ToString() << "\n";
  return ExitCode(o.kind);
}

int Verify(const std::string& file, const VerifierOptions& opts, bool raw) {
  BoogieConfig cfg = opts.Config();
  BoogieResult r = fs::path(file).extension() == ".bpl"
                       ? RunBoogie(file, cfg)
                       : VerifyProgram(ParseSexpr(ReadAll(file)), cfg,
                                       ParseEmitStyle(opts.style));
  PrintBoogie(r, raw);
  return static_cast<int>(r.kind);
}

int Diff(const std::string& file, const ExecConfig& exec, const VerifierOptions& opts,
         bool raw) {
  Program p = ParseSexpr(ReadAll(file));
  BoogieConfig cfg = opts.Config();
  const EmitStyle style = ParseEmitStyle(opts.style);
  ExecOutcome o = Execute(p, exec);
  std::cout << "exec: " << ExecKindName(o.kind) << " after " << o.steps_taken
            << " steps\n";
  BoogieResult b = VerifyProgram(p, cfg, style);
  PrintBoogie(b, raw);
  Verdict v = Check(o.kind, b.kind);
  std::cout << "verdict: " << v.ToString() << "\n";
  if (v.mismatch == MismatchKind::kCompleteness) {
    IncompletenessReport inc = ClassifyIncompleteness(p, cfg, style);
    std::cout << "rerun with " << kInferFlag << ": " << BoogieKindName(inc.rerun.kind)
              << "\n";
    for (const ConstantGuard& g : inc.guards) {
      std::cout << "constant guard: " << g.location << " = "
                << (g.value ? "true" : "false") << "\n";
    }
    std::cout << "incompleteness: " << IncompletenessClassName(inc.Final()) << "\n";
  }
  switch (v.kind) {
    case VerdictKind::kConsistent:
      return 0;
    case VerdictKind::kMismatch:
      return 1;
    case VerdictKind::kUnknown:
      return 2;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differential testing of a Boogie subset against its operational semantics"};
  app.require_subcommand(1);

  // gen
  CLI::App* gen = app.add_subcommand("gen", "Generate a batch of distinct programs");
  GenConfig gen_cfg;
  std::string gen_kind = "TYPED";
  uint64_t gen_count = 1;
  int gen_workers = 1;
  std::string gen_format = "sexpr";
  std::string gen_out;
  bool gen_no_div = false;
  gen->add_option("--kind", gen_kind, "FORMED, NAMED or TYPED");
  gen->add_option("--depth", gen_cfg.max_depth, "Maximum program depth");
  gen->add_option("--count", gen_count, "Number of programs");
  gen->add_option("--seed", gen_cfg.seed, "Batch seed");
  gen->add_option("--workers", gen_workers, "Generation threads");
  gen->add_option("--format", gen_format, "sexpr or boogie")
      ->check(CLI::IsMember({"sexpr", "boogie"}));
  gen->add_option("--out", gen_out, "Write one file per program plus manifest.tsv");
  gen->add_flag("--no-div", gen_no_div, "Never generate division");

  // exec
  CLI::App* exec = app.add_subcommand("exec", "Execute an s-expression program");
  std::string exec_file;
  ExecConfig exec_cfg;
  bool exec_trace = false;
  bool no_loop = false;
  exec->add_option("file", exec_file)->required()->check(CLI::ExistingFile);
  exec->add_option("--budget", exec_cfg.step_budget, "Step budget");
  exec->add_option("--memory-cap", exec_cfg.detection_memory_cap,
                   "Terms retained for loop detection");
  exec->add_flag("--no-loop-detection", no_loop);
  exec->add_flag("--trace", exec_trace, "Print one line per reduction step");

  // verify
  CLI::App* verify = app.add_subcommand("verify", "Run Boogie on a .bpl or .sexpr file");
  std::string verify_file;
  VerifierOptions verify_opts;
  bool verify_raw = false;
  verify->add_option("file", verify_file)->required()->check(CLI::ExistingFile);
  verify_opts.Add(verify);
  verify->add_flag("--raw", verify_raw, "Echo the verifier's output");

  // diff
  CLI::App* diff = app.add_subcommand("diff", "Execute, verify and compare one program");
  std::string diff_file;
  VerifierOptions diff_opts;
  ExecConfig diff_exec;
  bool diff_raw = false;
  diff->add_option("file", diff_file)->required()->check(CLI::ExistingFile);
  diff->add_option("--budget", diff_exec.step_budget, "Step budget");
  diff_opts.Add(diff);
  diff->add_flag("--raw", diff_raw, "Echo the verifier's output");

  // campaign
  CLI::App* campaign = app.add_subcommand("campaign", "Run a configured campaign");
  std::string campaign_file;
  std::string campaign_out;
  bool campaign_resume = false;
  int campaign_workers = 0;
  campaign->add_option("config", campaign_file)->required()->check(CLI::ExistingFile);
  campaign->add_option("--output-dir", campaign_out, "Override output_dir");
  campaign->add_flag("--resume", campaign_resume, "Skip programs already in the log");
  campaign->add_option("--workers", campaign_workers, "Override every worker count");

  // report
  CLI::App* report = app.add_subcommand("report", "Aggregate a results log");
  std::string report_file;
  std::string report_json;
  bool report_canonical = false;
  report->add_option("results", report_file)->required()->check(CLI::ExistingFile);
  report->add_option("--json", report_json, "Also write the structured report here");
  report->add_flag("--canonical", report_canonical,
                   "Print the log sorted by record id instead");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      std::optional<GenKind> kind = ParseGenKind(gen_kind);
      if (!kind) throw CLI::ValidationError("--kind", "expected FORMED, NAMED or TYPED");
      gen_cfg.kind = *kind;
      gen_cfg.allow_div = !gen_no_div;
      gen_cfg.Validate();
      return Gen(gen_cfg, gen_count, gen_workers, gen_format, gen_out);
    }
    if (*exec) {
      exec_cfg.loop_detection = !no_loop;
      return Exec(exec_file, exec_cfg, exec_trace);
    }
    if (*verify) return Verify(verify_file, verify_opts, verify_raw);
    if (*diff) return Diff(diff_file, diff_exec, diff_opts, diff_raw);
    if (*campaign) {
      CampaignConfig cfg = CampaignConfig::Load(campaign_file);
      if (!campaign_out.empty()) cfg.output_dir = campaign_out;
      if (campaign_resume) cfg.resume = true;
      if (campaign_workers > 0) {
        cfg.gen_workers = cfg.exec_workers = cfg.verify_workers = campaign_workers;
      }
      CampaignResult r = RunCampaign(cfg, &std::cerr);
      std::cout << FormatReport(r.report);
      std::cerr << "results: " << (fs::path(cfg.output_dir) / "results.jsonl").string()
                << " (" << r.produced << " new, " << r.resumed << " resumed)\n";
      return 0;
    }
    if (*report) {
      if (report_canonical) {
        for (const std::string& line : CanonicalLog(report_file)) std::cout << line << "\n";
        return 0;
      }
      AggregateReport agg = Aggregate(ReadResultsLog(report_file));
      std::cout << FormatReport(agg);
      if (!report_json.empty()) std::ofstream(report_json) << ReportJson(agg);
      return 0;
    }
  } catch (const SyntaxError& e) {
    std::cerr << "bcc: syntax error: " << e.what() << "\n";
    return EX_DATAERR;
  } catch (const BoogieUnavailable& e) {
    std::cerr << "bcc: " << e.what() << "\n";
    return EX_UNAVAILABLE;
  } catch (const ConfigError& e) {
    std::cerr << "bcc: configuration error: " << e.what() << "\n";
    return EX_CONFIG;
  } catch (const std::exception& e) {
    std::cerr << "bcc: " << e.what() << "\n";
    return EX_SOFTWARE;
  }
  return EX_USAGE;
}
