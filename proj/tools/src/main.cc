// Copyright 2026 The tsqp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "explain.h"
#include "runner.h"

namespace {

using tsqp::AdversaryKind;
using tsqp::KeyMode;
using tsqp::cli::RunConfig;

constexpr int kExitConfig = 2;

// Config files hold run flags as plain key=value lines; unsectioned keys
// belong to the run subcommand.
class RunConfigFile : public CLI::ConfigTOML {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigTOML::from_config(input);
    for (auto& item : items) {
      if (item.parents.empty()) item.parents = {"run"};
    }
    return items;
  }
};

int DoRun(const RunConfig& cfg, const std::string& trace_path, const std::string& report_path) {
  try {
    tsqp::cli::Validate(cfg);
  } catch (const tsqp::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  std::ofstream trace;
  if (!trace_path.empty()) {
    trace.open(trace_path, std::ios::binary | std::ios::trunc);
    if (!trace) {
      std::cerr << "config error: cannot write " << trace_path << '\n';
      return kExitConfig;
    }
  }
  if (!cfg.auth) {
    std::cerr << "WARNING: authentication is off. The bare exchange is insecure against "
                 "impersonation.\n";
  }

  const auto trials = tsqp::cli::RunTrials(cfg);
  if (trace.is_open()) tsqp::cli::WriteTrace(cfg, trials, trace);
  const auto report = tsqp::cli::BuildReport(cfg, trials);
  if (report_path.empty()) {
    std::cout << report.dump(2) << '\n';
  } else {
    std::ofstream out(report_path, std::ios::binary | std::ios::trunc);
    if (!out) {
      std::cerr << "config error: cannot write " << report_path << '\n';
      return kExitConfig;
    }
    out << report.dump(2) << '\n';
    std::cout << report["recovered"] << "/" << report["trials"] << " recovered, "
              << report["aborted"] << " aborted, " << report["eve_recoveries"]
              << " Eve recoveries\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for the KDC-authenticated three-pass quantum exchange"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string trace_path, report_path, adversary = "none", policy = "rotations", auth = "on";
  std::uint64_t delay_ms = 0;

  app.config_formatter(std::make_shared<RunConfigFile>());
  app.set_config("--config", "", "Key=value file mirroring the run flags");
  CLI::App* run = app.add_subcommand("run", "Run a batch of seeded sessions");
  run->fallthrough();
  run->add_option("--trials", cfg.trials, "Number of sessions")->capture_default_str();
  run->add_option("--seed", cfg.seed, "Base seed")->capture_default_str();
  run->add_option("--adversary", adversary, "none|eavesdrop|mitm|replay|suppress")
      ->check(CLI::IsMember({"none", "eavesdrop", "mitm", "replay", "suppress"}))
      ->capture_default_str();
  run->add_option("--noise", cfg.noise, "Per-qubit bit-flip probability")->capture_default_str();
  run->add_option("--redundancy", cfg.redundancy, "Payload copies per bit (odd)")
      ->capture_default_str();
  run->add_option("--auth-redundancy", cfg.auth_redundancy, "Auth copies per bit (odd)")
      ->capture_default_str();
  auto* bits_opt = run->add_option("--bits", cfg.bits, "Fixed message, e.g. 01101");
  run->add_option("--length", cfg.length, "Random message length per trial")
      ->capture_default_str()
      ->excludes(bits_opt);
  run->add_option("--window-ms", cfg.window_ms, "Freshness window on Bob's clock")
      ->capture_default_str();
  run->add_option("--policy", policy, "rotations|mixed")
      ->check(CLI::IsMember({"rotations", "mixed"}))
      ->capture_default_str();
  run->add_option("--auth", auth, "on|off")->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  run->add_option("--target-hop", cfg.target_hop, "Hop the adversary attacks");
  auto* delay_opt = run->add_option("--delay-ms", delay_ms, "Suppress delay (default: window)");
  run->add_option("--jobs", cfg.jobs, "Worker threads")->capture_default_str();
  run->add_option("--trace", trace_path, "JSONL trace output");
  run->add_option("--report", report_path, "JSON report output (default: stdout)");
  run->add_flag("--dump-amplitudes", cfg.dump_amplitudes, "Include payload amplitudes in the trace");

  std::string explain_path;
  std::size_t explain_trial = 0;
  CLI::App* explain = app.add_subcommand("explain", "Narrate one trial of a trace");
  explain->add_option("trace", explain_path, "JSONL trace")->required();
  explain->add_option("--trial", explain_trial, "Trial index")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (*run) {
    static const std::map<std::string, AdversaryKind> kinds = {
        {"none", AdversaryKind::kNone},
        {"eavesdrop", AdversaryKind::kInterceptResend},
        {"mitm", AdversaryKind::kMitm},
        {"replay", AdversaryKind::kReplay},
        {"suppress", AdversaryKind::kSuppressReplay},
    };
    cfg.adversary = kinds.at(adversary);
    cfg.policy = policy == "mixed" ? KeyMode::kMixedValidated : KeyMode::kRotationsOnly;
    cfg.auth = auth == "on";
    if (delay_opt->count() > 0) cfg.delay_ms = delay_ms;
    return DoRun(cfg, trace_path, report_path);
  }

  std::ifstream in(explain_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << explain_path << '\n';
    return kExitConfig;
  }
  try {
    tsqp::cli::Explain(in, explain_trial, std::cout);
  } catch (const tsqp::cli::TraceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
