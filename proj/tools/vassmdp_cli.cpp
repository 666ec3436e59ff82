/*
 * Copyright 2026 The vassmdp authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "vassmdp/encoders.hpp"
#include "vassmdp/verdict.hpp"

namespace {

using namespace vassmdp;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw VassError(Err::Usage, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw VassError(Err::Usage, "cannot write " + out_path);
  out << text;
}

Config require_init(const ParsedSystem& p) {
  if (!p.init) throw VassError(Err::Usage, "the system file has no init line");
  return *p.init;
}

std::set<int> require_targets(const ParsedSystem& p) {
  if (p.targets.empty()) throw VassError(Err::Usage, "the system file has no target lines");
  return p.targets;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"qualitative verification of VASS-MDPs"};
  app.require_subcommand(1);

  std::string file, out_path, trace_path, problem_s = "sure-reach", formula_s,
              encoding = "general", gadget, strategy_s = "uniform";
  long nu_budget = 1000, runs = 10000, step_cap = 200;
  long long cap = 6;
  unsigned long long seed = 1;
  std::string accelerate = "on";
  bool best_effort = false;

  auto* c_classify = app.add_subcommand("classify", "report the subclass of a system");
  c_classify->add_option("file", file)->required();

  auto* c_check = app.add_subcommand("check", "decide a qualitative objective");
  c_check->add_option("file", file)->required();
  c_check->add_option("--problem", problem_s)->required();
  c_check->add_option("--nu-budget", nu_budget);
  c_check->add_option("--accelerate", accelerate)->check(CLI::IsMember({"on", "off"}));
  c_check->add_flag("--best-effort", best_effort);
  c_check->add_option("--cap", cap);
  c_check->add_option("--runs", runs);
  c_check->add_option("--seed", seed);

  auto* c_reduce = app.add_subcommand("reduce-dim", "one round of Algorithm-1 dimension reduction");
  c_reduce->add_option("file", file)->required();
  c_reduce->add_option("--out", out_path);
  c_reduce->add_option("--trace", trace_path);

  auto* c_encode = app.add_subcommand("encode-minsky", "encode a Minsky machine as a VASS-MDP");
  c_encode->add_option("file", file)->required();
  c_encode->add_option("--encoding", encoding)
      ->check(CLI::IsMember({"general", "pvass-deadlock", "pvass-deadlockfree"}));
  c_encode->add_option("--out", out_path);

  auto* c_sim = app.add_subcommand("simulate", "Monte-Carlo reach frequency");
  c_sim->add_option("file", file)->required();
  c_sim->add_option("--runs", runs);
  c_sim->add_option("--cap", step_cap);
  c_sim->add_option("--seed", seed);
  c_sim->add_option("--strategy", strategy_s)->check(CLI::IsMember({"uniform"}));

  auto* c_oracle = app.add_subcommand("oracle", "bounded explicit-state oracle");
  c_oracle->add_option("file", file)->required();
  c_oracle->add_option("--problem", problem_s)->required();
  c_oracle->add_option("--cap", cap);

  auto* c_gadget = app.add_subcommand("gen-gadget", "emit a fixture gadget");
  c_gadget->add_option("name", gadget)->required();
  c_gadget->add_option("--out", out_path);

  auto* c_eval = app.add_subcommand("eval-formula", "evaluate an L^sv_mu formula");
  c_eval->add_option("file", file)->required();
  c_eval->add_option("--formula", formula_s)->required();
  c_eval->add_option("--nu-budget", nu_budget);
  c_eval->add_option("--accelerate", accelerate)->check(CLI::IsMember({"on", "off"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  if (c_classify->parsed()) {
    ParsedSystem p = parse_system(slurp(file));
    Classification c = classify(p.sys);
    std::cout << classify_line(c) << "\n";
    std::cout << "dimension: " << p.sys.dimension() << "\n";
    std::cout << "states: " << p.sys.num_states() << "\n";
    std::cout << "transitions: " << p.sys.transitions().size() << "\n";
    if (c.single_sided_side)
      std::cout << "zero-effect side: " << (*c.single_sided_side == Owner::One ? "1" : "P")
                << "\n";
    return 0;
  }

  if (c_check->parsed()) {
    ParsedSystem p = parse_system(slurp(file));
    CheckOptions opts;
    opts.nu_budget = nu_budget;
    opts.accelerate = accelerate == "on";
    opts.best_effort = best_effort;
    opts.cap = cap;
    opts.runs = runs;
    opts.seed = seed;
    Problem problem = parse_problem(problem_s);
    Verdict v = check(p.sys, require_init(p), require_targets(p), problem, opts);
    std::cout << "class: " << classify_line(classify(p.sys)) << "\n"
              << render_verdict(v, problem);
    return exit_code(v.answer);
  }

  if (c_reduce->parsed()) {
    ParsedSystem p = parse_system(slurp(file));
    ReducedSystem red = reduce_once(p.sys, require_init(p), require_targets(p));
    std::string sys_text = serialize_system(red.sys, red.init, red.targets);
    std::string trace_text = serialize_reduction_trace(red);
    if (trace_path.empty() && out_path.empty()) {
      std::cout << sys_text;
      std::istringstream tr(trace_text);
      std::string l;
      while (std::getline(tr, l)) std::cout << "# trace " << l << "\n";
    } else {
      emit(sys_text, out_path);
      if (!trace_path.empty()) emit(trace_text, trace_path);
    }
    return 0;
  }

  if (c_encode->parsed()) {
    MinskyMachine m = parse_minsky(slurp(file));
    VassMdp sys = encoding == "general" ? encode_general(m)
                  : encoding == "pvass-deadlock" ? encode_pvass_deadlock(m)
                                                 : encode_pvass_deadlockfree(m);
    Config init{sys.state_index(m.initial), Vec(2, 0)};
    emit(serialize_system(sys, init, {sys.state_index(m.final)}), out_path);
    return 0;
  }

  if (c_sim->parsed()) {
    ParsedSystem p = parse_system(slurp(file));
    Rat freq = estimate_reach(p.sys, require_init(p), StrategyHandle::uniform(),
                              require_targets(p), runs, step_cap, seed);
    std::cout << "instance,strategy,runs,cap,frequency,seed\n";
    std::cout << file << "," << strategy_s << "," << runs << "," << step_cap << ","
              << rat_str(freq) << "," << seed << "\n";
    return 0;
  }

  if (c_oracle->parsed()) {
    ParsedSystem p = parse_system(slurp(file));
    Problem problem = parse_problem(problem_s);
    Verdict v;
    v.justification = "bounded explicit-state oracle (cap " + std::to_string(cap) + ")";
    try {
      v.answer = bounded_oracle(p.sys, require_init(p), require_targets(p), cap, problem)
                     ? Answer::Yes
                     : Answer::No;
    } catch (const VassError& e) {
      if (e.code != Err::CapNotClosed) throw;
      v.answer = Answer::Unknown;
      v.reason = e.what();
    }
    std::cout << render_verdict(v, problem);
    return exit_code(v.answer);
  }

  if (c_gadget->parsed()) {
    Gadget g = gen_gadget(gadget);
    std::string text = "# gadget " + g.name + "\n";
    for (const auto& [p, a] : g.expected)
      text += "# expected " + problem_str(p) + "=" + answer_str(a) + "\n";
    text += serialize_system(g.sys, g.init, g.targets);
    emit(text, out_path);
    return 0;
  }

  if (c_eval->parsed()) {
    ParsedSystem p = parse_system(slurp(file));
    FormulaPtr f = parse_formula(formula_s);
    Evaluator ev(p.sys, EvalOptions{nu_budget, accelerate == "on"});
    Upset result = ev.eval(f);
    std::cout << serialize_upset(p.sys, result);
    std::istringstream tr(vassmdp::detail::nu_trace_summary(ev.trace()));
    std::string l;
    while (std::getline(tr, l)) std::cout << "# " << l << "\n";
    if (p.init) {
      bool m = member(result, *p.init);
      std::cout << "# init-member: " << (m ? "true" : "false") << "\n";
      return m ? 0 : 1;
    }
    return 0;
  }

  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const vassmdp::VassError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
