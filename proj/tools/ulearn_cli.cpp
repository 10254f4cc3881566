// Copyright 2026 The ulearn Authors
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

// Command-line front end: analyze, duel, curve, fit, describe, selftest.
//
// Exit codes: 0 ok, 1 configuration error, 2 budget exceeded, 3 acceptance
// failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "acceptance.hpp"
#include "ulearn/errors.hpp"
#include "ulearn/harness.hpp"
#include "ulearn/online.hpp"

namespace {

using ulearn::Json;

constexpr int kOk = 0;
constexpr int kConfig = 1;
constexpr int kBudget = 2;
constexpr int kAcceptance = 3;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ulearn::ConfigError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json ReadJson(const std::string& path) {
  try {
    return Json::parse(ReadFile(path));
  } catch (const Json::exception& e) {
    throw ulearn::ConfigError(path + ": " + e.what());
  }
}

// Writes to --out when given, stdout otherwise.
void Emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw ulearn::ConfigError("cannot write " + out);
  f << text;
}

std::size_t Jobs(std::size_t jobs) {
  return jobs > 0 ? jobs : std::max(1U, std::thread::hardware_concurrency());
}

// A class spec may be given bare or under "class".
Json ClassSpec(const Json& j) { return j.contains("class") ? j["class"] : j; }

int Analyze(const std::string& spec, const std::string& out, int ld_cap, int vcl_cap) {
  ulearn::SearchCaps caps;
  caps.littlestone = ld_cap;
  caps.vcl = vcl_cap;
  const ulearn::VerdictReport r = ulearn::trichotomy_report(ClassSpec(ReadJson(spec)), caps);
  Emit(out, ulearn::to_json(r).dump(2) + "\n");
  return kOk;
}

ulearn::LittlestoneTree TreeFromJson(const Json& j, const ulearn::Domain& domain) {
  ulearn::LittlestoneTree t;
  t.depth = j.at("depth").get<int>();
  for (const Json& v : j.at("nodes")) {
    if (v.is_string()) {
      auto p = domain.find(v.get<std::string>());
      if (!p) throw ulearn::ConfigError("unknown point " + v.get<std::string>());
      t.nodes.push_back(*p);
    } else {
      t.nodes.push_back(v.get<ulearn::Point>());
      domain.check(t.nodes.back());
    }
  }
  if (t.depth < 0 || t.nodes.size() != (std::size_t{1} << t.depth) - 1) {
    throw ulearn::ConfigError("a depth-d tree lists 2^d - 1 nodes");
  }
  return t;
}

int Duel(const std::string& spec, const std::string& adversary, const std::string& out) {
  ulearn::ClassHandle h = ulearn::parse_class(ClassSpec(ReadJson(spec)));
  if (!h.solver) {
    // Throws BudgetError when the class is too large to materialize.
    h.cls = ulearn::expand_shared(*h.gen);
    h.solver = std::make_shared<const ulearn::GameSolver>(h.cls);
  }
  ulearn::LittlestoneTree tree;
  if (adversary == "auto") {
    const int ld = h.solver->littlestone(h.cls->all());
    auto t = ulearn::find_littlestone_tree(*h.solver, std::max(ld, 0));
    tree = t ? *t : ulearn::LittlestoneTree{};
  } else {
    tree = TreeFromJson(ReadJson(adversary), h.cls->domain());
    if (!ulearn::is_littlestone_tree(*h.cls, tree)) throw ulearn::ConfigError("adversary tree is not a Littlestone tree of the class");
  }
  std::ostringstream csv;
  csv << "round,x,prediction,label,mistake\n";
  for (const ulearn::DuelRound& r : ulearn::duel(ulearn::OnlineLearner(h.solver), ulearn::TreeAdversary(tree))) {
    csv << r.round << ',' << h.cls->domain().name(r.x) << ',' << int{r.prediction} << ',' << int{r.label} << ','
        << (r.mistake ? 1 : 0) << '\n';
  }
  Emit(out, csv.str());
  return kOk;
}

int Curve(const std::string& spec, std::optional<std::uint64_t> seed, std::size_t jobs, std::string out) {
  ulearn::ExperimentSpec e = ulearn::parse_experiment(ReadJson(spec));
  if (seed) e.root_seed = *seed;
  if (out.empty()) out = e.out;
  std::ostringstream csv;
  ulearn::write_curve_csv(csv, ulearn::run_experiment(e, Jobs(jobs)));
  Emit(out, csv.str());
  return kOk;
}

int Fit(const std::string& spec, const std::string& metric, const std::string& out) {
  std::ifstream in(spec);
  if (!in) throw ulearn::ConfigError("cannot read " + spec);
  if (metric != "mean" && metric != "nonzero") throw ulearn::ConfigError("metric is mean or nonzero");
  const ulearn::FitResult fit =
      ulearn::fit_rate(ulearn::read_curve_csv(in), metric == "mean" ? ulearn::Metric::kMean : ulearn::Metric::kNonzero);
  Emit(out, ulearn::to_json(fit).dump(2) + "\n");
  return kOk;
}

int Describe(const std::string& spec, const std::string& out) {
  const Json j = ReadJson(spec);
  if (!j.contains("class") || !j.contains("distribution")) {
    throw ulearn::ConfigError("describe needs \"class\" and \"distribution\"");
  }
  const ulearn::ClassHandle h = ulearn::parse_class(j["class"]);
  const ulearn::RealizableDistribution d = ulearn::parse_distribution(j["distribution"], h);
  std::ostringstream os;
  os << "# " << d.name() << ", " << d.atoms().size() << " atoms, certificate " << d.certificate().ToString() << "\n";
  os << "point,label,probability,exact\n";
  for (std::size_t i = 0; i < d.atoms().size(); ++i) {
    const ulearn::Atom& a = d.atoms()[i];
    char p[32];
    std::snprintf(p, sizeof p, "%.17g", a.prob);
    os << d.domain().name(a.point) << ',' << int{a.label} << ',' << p << ','
       << (d.exact_masses() ? (*d.exact_masses())[i].to_string() : "") << '\n';
  }
  Emit(out, os.str());
  return kOk;
}

int Selftest(std::size_t jobs, const std::vector<int>& only, const std::string& out) {
  ulearn::acceptance::Options opt;
  opt.jobs = Jobs(jobs);
  opt.only = only;
  std::ostringstream log;
  opt.on_result = [&log](const ulearn::acceptance::CriterionResult& r) {
    const std::string line = ulearn::acceptance::format_line(r);
    std::cout << line << std::endl;
    log << line << '\n';
  };
  bool ok = true;
  for (const auto& r : ulearn::acceptance::run_all(opt)) ok = ok && r.passed;
  if (!out.empty()) Emit(out, log.str());
  return ok ? kOk : kAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ulearn: universal learning rates on finite instances"};
  app.require_subcommand(1);

  std::string spec, out, adversary = "auto", metric = "mean";
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 0;
  int ld_cap = 16, vcl_cap = 8;
  std::vector<int> only;

  auto* analyze = app.add_subcommand("analyze", "Trichotomy verdict and dimension evidence for a class");
  analyze->add_option("--spec", spec, "Class spec (JSON)")->required();
  analyze->add_option("--out", out, "Output file (default stdout)");
  analyze->add_option("--ld-cap", ld_cap, "Littlestone search cap");
  analyze->add_option("--vcl-cap", vcl_cap, "VCL and VC search cap");

  auto* duel = app.add_subcommand("duel", "Online learner against a Littlestone-tree adversary");
  duel->add_option("--spec", spec, "Class spec (JSON)")->required();
  duel->add_option("--adversary", adversary, "Tree file (JSON) or auto for the deepest tree");
  duel->add_option("--out", out, "Transcript CSV (default stdout)");

  auto* curve = app.add_subcommand("curve", "Learning curve by Monte Carlo with exact errors");
  curve->add_option("--spec", spec, "Experiment spec (JSON)")->required();
  curve->add_option("--seed", seed, "Root seed (overrides the spec)");
  curve->add_option("--jobs", jobs, "Worker threads (default: all cores)");
  curve->add_option("--out", out, "Curve CSV (default: spec \"out\", else stdout)");

  auto* fit = app.add_subcommand("fit", "Fit exponential and linear rates to a curve");
  fit->add_option("--spec", spec, "Curve CSV")->required();
  fit->add_option("--metric", metric, "mean or nonzero");
  fit->add_option("--out", out, "Output file (default stdout)");

  auto* describe = app.add_subcommand("describe", "Support table of a distribution");
  describe->add_option("--spec", spec, "{\"class\": ..., \"distribution\": ...} (JSON)")->required();
  describe->add_option("--out", out, "Output file (default stdout)");

  auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite");
  selftest->add_option("--jobs", jobs, "Worker threads (default: all cores)");
  selftest->add_option("--only", only, "Criterion ids to run (e.g. 3,6,8)")->delimiter(',');
  selftest->add_option("--out", out, "Also write the result lines here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (*analyze) return Analyze(spec, out, ld_cap, vcl_cap);
    if (*duel) return Duel(spec, adversary, out);
    if (*curve) return Curve(spec, seed, jobs, out);
    if (*fit) return Fit(spec, metric, out);
    if (*describe) return Describe(spec, out);
    if (*selftest) return Selftest(jobs, only, out);
  } catch (const ulearn::BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const ulearn::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kConfig;
}
