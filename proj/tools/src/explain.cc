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

#include "explain.h"

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "runner.h"

namespace tsqp::cli {
namespace {

using Json = nlohmann::ordered_json;

std::string Abbrev(const std::string& hex) {
  return hex.size() <= 16 ? hex : hex.substr(0, 16) + "...";
}

std::string DescribeAuth(const Json& auth) {
  if (auth.is_null()) return "none (bare mode)";
  const std::string kind = auth.value("kind", "?");
  if (kind == "msg1") {
    return "ID_A=" + auth["id_a"].get<std::string>() + " N_a=" + auth["n_a"].get<std::string>();
  }
  if (kind == "msg2") {
    return "ID_B=" + auth["id_b"].get<std::string>() + " N_b=" +
           auth["n_b"].get<std::string>() + " E_Kb[ID_A||N_a||T_b]=" +
           Abbrev(auth["ticket_req"].get<std::string>());
  }
  if (kind == "msg3") {
    return "E_Ka[ID_B||N_a||K_s||T_b]=" + Abbrev(auth["package_a"].get<std::string>()) +
           " E_Kb[ID_A||K_s||T_b]=" + Abbrev(auth["ticket_b"].get<std::string>()) +
           " N_b=" + auth["n_b"].get<std::string>();
  }
  if (kind == "msg4") {
    return "E_Kb[ID_A||K_s||T_b]=" + Abbrev(auth["ticket_b"].get<std::string>()) +
           " E_Ks[N_b]=" + Abbrev(auth["confirm"].get<std::string>());
  }
  return kind;
}

std::string DescribeAbort(const Json& a) {
  return a["reason"].get<std::string>() + " at " + a["at"].get<std::string>() +
         " (hop " + std::to_string(a["step"].get<int>()) + "): " +
         a["detail"].get<std::string>();
}

}  // namespace

void Explain(std::istream& trace, std::size_t trial, std::ostream& out) {
  std::vector<Json> hops;
  Json outcome;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(trace, line)) {
    ++line_no;
    if (line.empty()) continue;
    Json ev;
    try {
      ev = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw TraceError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (ev.value("schema", "") != kTraceSchema) {
      throw TraceError("line " + std::to_string(line_no) + ": unsupported schema");
    }
    if (ev.value("trial", static_cast<std::size_t>(-1)) != trial) continue;
    if (ev.value("event", "") == "hop") {
      hops.push_back(std::move(ev));
    } else {
      outcome = std::move(ev);
    }
  }
  if (outcome.is_null()) {
    throw TraceError("trial " + std::to_string(trial) + " is not in the trace");
  }

  out << "trial " << trial << ": X = " << outcome["x"].get<std::string>()
      << ", adversary " << outcome["adversary"].get<std::string>()
      << (outcome["auth"].get<bool>() ? "" : ", authentication OFF (insecure)") << '\n';
  for (const Json& h : hops) {
    const auto& p = h["payload"];
    out << "  hop " << h["hop"].get<int>() << "  " << h["from"].get<std::string>() << " -> "
        << h["to"].get<std::string>() << '\n'
        << "    payload: " << p["state"].get<std::string>() << " on "
        << p["qubits"].get<std::size_t>() << " qubits\n"
        << "    auth:    " << DescribeAuth(h["auth"]) << '\n'
        << "    time:    sent " << h["sent_at_ms"].get<std::uint64_t>() << " ms, delivered "
        << h["delivered_at_ms"].get<std::uint64_t>() << " ms\n";
    if (h["substituted"].get<bool>()) out << "    replayed from an earlier session\n";
    if (h.contains("eve_observed")) {
      out << "    Eve measured: " << h["eve_observed"].get<std::string>() << '\n';
    }
    if (h.contains("abort")) out << "    ABORT " << DescribeAbort(h["abort"]) << '\n';
  }
  const std::string result = outcome["result"].get<std::string>();
  if (result == "recovered") {
    out << "  Bob recovered " << outcome["bits"].get<std::string>();
    if (outcome.contains("qber")) {
      out << " (QBER " << outcome["qber"]["rate"].get<double>() << ")";
    }
    out << '\n';
  } else if (result == "aborted") {
    out << "  aborted: " << DescribeAbort(outcome["abort"]) << '\n';
  } else {
    out << "  completed\n";
  }
  if (outcome.contains("alice_side_abort") && !outcome["alice_side_abort"].is_null()) {
    out << "  Eve-as-Bob run: " << DescribeAbort(outcome["alice_side_abort"]) << '\n';
  }
  if (outcome.contains("bob_side_abort") && !outcome["bob_side_abort"].is_null()) {
    out << "  Eve-as-Alice run: " << DescribeAbort(outcome["bob_side_abort"]) << '\n';
  }
  out << "  Eve recovered X: " << (outcome["eve_recovered"].get<bool>() ? "yes" : "no") << '\n';
}

}  // namespace tsqp::cli
