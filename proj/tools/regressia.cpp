// regressia: command-line front end over regressia::cmd.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "regressia/commands.hpp"

namespace {

using regressia::json;
namespace cmd = regressia::cmd;

struct Opt {
  std::string flag;  // "--n" or a positional name
  std::string key;
  std::string help;
};

const std::vector<Opt> kAssignment = {
    {"--assignment", "assignment", "assignment description (JSON or @file)"},
    {"--builtin", "builtin", "identity | min-collapse | dfnl-derived"},
    {"--ground", "ground", "ground tuple set, e.g. \"{(0,1),(1,1)}\""},
    {"--n", "n", "ground [n]^k when --ground is absent"},
    {"--k", "k", "arity for the [n]^k ground"},
    {"--dfnl", "dfnl", "functional for dfnl-derived: min-field or BEF text"},
};

std::vector<Opt> with_assignment(std::vector<Opt> extra) {
  std::vector<Opt> out = kAssignment;
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

struct CommandSpec {
  std::string name;
  std::string help;
  std::vector<Opt> opts;
};

std::vector<CommandSpec> specs() {
  return {
      {"ot", "number of order types of k-tuples", {{"k", "k", "arity"}}},
      {"order-type", "order-type pattern of a tuple", {{"tuple", "tuple", "tuple such as (3,1,3)"}}},
      {"regressive-values",
       "regressive values of a map on a set",
       {{"--example", "example", "built-in example: intro"},
        {"--F", "F", "map as JSON [[x, value], ...]"},
        {"--B", "B", "tuple set to restrict to"}}},
      {"check-assignment",
       "audit #-decreasing, *-decreasing or end-preserving",
       with_assignment({{"--prop", "prop", "sharp | star | end"},
                        {"--order1", "order1", "sup | lex"},
                        {"--order2", "order2", "sup | lex"},
                        {"--sample", "sample", "sampled scope size (0: exhaustive)"}})},
      {"audit-3-10",
       "sharp/star agreement on seeded random tables",
       {{"--tables", "tables", "number of random tables"}, {"--max-ground", "max-ground", "largest ground size"}}},
      {"lex-lift",
       "lexicographic lift and regressive-value transfer",
       with_assignment({{"--extra", "extra", "extra (k+1)-tuples for the lifted ground"},
                        {"--samples", "samples", "sampled subsets for grounds above 8 points"}})},
      {"ramsey",
       "homogeneous sets for set colorings",
       {{"--mode", "mode", "all | given | random"},
        {"--n", "n", "universe [n]"},
        {"--k", "k", "subset size being colored"},
        {"--p", "p", "homogeneous set size"},
        {"--colors", "colors", "number of colors"},
        {"--coloring", "coloring", "coloring as JSON [[subset, color], ...]"},
        {"--E", "E", "index set to search in"}}},
      {"search-04",
       "witness search for F: [n]^k -> [n]^r",
       {{"--n", "n", "universe [n]"},
        {"--k", "k", "arity"},
        {"--p", "p", "size of E"},
        {"--function", "function", "random | square-difference | min"},
        {"--r", "r", "value arity for random F"},
        {"--F", "F", "explicit F as JSON"}}},
      {"search-A",
       "witness search for an assignment",
       with_assignment({{"--p", "p", "size of E"}, {"--family", "family", "products | all-subsets"}})},
      {"threshold-H",
       "per-n exhaustive threshold table",
       {{"--target", "target", "0.3 | 0.4 | I"},
        {"--k", "k", "arity"},
        {"--r", "r", "value arity"},
        {"--p", "p", "size of E"},
        {"--n-max", "n-max", "largest n"}}},
      {"uniformize",
       "least set on which an assignment is p-uniform",
       with_assignment({{"--p", "p", "uniformity size"}, {"--m", "m", "size of E"}})},
      {"transfer",
       "move an order-invariant assignment onto [m]^k",
       with_assignment({{"--p", "p", "field size"}, {"--m", "m", "target [m]"}})},
      {"complete",
       "greedy direct completion",
       with_assignment({{"--check-completion", "check-completion", "true | false"}})},
      {"rcn",
       "recursive construction from a functional",
       {{"--A", "A", "closed tuple set"},
        {"--dfnl", "dfnl", "min-field or BEF text"},
        {"--mode", "mode", "rcn | mrcn"}}},
      {"df", "Df of a BEF on a closed set", {{"--bef", "bef", "BEF text"}, {"--A", "A", "closed tuple set"}}},
      {"bef-eval",
       "evaluate a BEF",
       {{"--bef", "bef", "BEF text"}, {"--f", "f", "finite map, e.g. \"0:0 2:1\""}, {"--args", "args", "(x1,...,xq)"}}},
      {"check-regular",
       "regressive regularity, or tr-regularity with --formulas",
       {{"--f", "f", "finite map"},
        {"--E", "E", "index set"},
        {"--formulas", "formulas", "BEF list (JSON or ';'-separated)"},
        {"--t", "t", "block count t"}}},
      {"search-regular",
       "least set where rcn or Df is regressively regular",
       {{"--bef", "bef", "BEF text (Df mode)"},
        {"--dfnl", "dfnl", "min-field or BEF text (rcn mode)"},
        {"--k", "k", "arity for min-field"},
        {"--p", "p", "size of E"},
        {"--n-max", "n-max", "universe [n_max]"}}},
      {"soi-check",
       "system-of-indiscernibles check",
       {{"--f", "f", "finite map"},
        {"--E", "E", "index set"},
        {"--formulas", "formulas", "BEF list (JSON or ';'-separated)"},
        {"--t", "t", "block count t"}}},
  };
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw regressia::ParseError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "@path" means the file's contents.
std::string expand(const std::string& v) { return !v.empty() && v[0] == '@' ? read_file(v.substr(1)) : v; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regressia: regressive-function experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", regressia::kVersion);

  std::string format = "text";
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::uint64_t max_candidates = 1u << 20;
  std::string strategy = "exhaustive";
  std::vector<std::string> caps;
  std::string instance;
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv", "text"}));
  auto* seed_opt = app.add_option("--seed", seed, "random seed (REGRESSIA_SEED overrides)");
  app.add_option("--jobs", jobs, "worker cap")->check(CLI::PositiveNumber);
  auto* mc_opt = app.add_option("--max-candidates", max_candidates, "search budget");
  auto* st_opt = app.add_option("--strategy", strategy, "exhaustive | greedy-ramsey | random-restart");
  app.add_option("--cap", caps, "cap override name=value (repeatable)");
  app.add_option("--instance", instance, "instance JSON: parameters, or a report to re-run");

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, CLI::Option*>> given;
  std::map<std::string, CLI::App*> subs;
  for (const auto& spec : specs()) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    subs[spec.name] = sub;
    auto& store = values[spec.name];
    for (const auto& o : spec.opts) store[o.key];
    for (const auto& o : spec.opts) given[spec.name][o.key] = sub->add_option(o.flag, store[o.key], o.help);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cmd::usage_error;
  }

  std::string command;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) command = name;

  try {
    json params = json::object();
    cmd::RunOptions o;
    if (!instance.empty()) {
      const json in = cmd::Args::parse_json(read_file(instance));
      if (!in.is_object()) throw regressia::ParseError("instance must be a JSON object");
      if (in.contains("params") && in.contains("command")) {
        if (in.at("command") != command)
          throw regressia::ParseError("instance was produced by '" + in.at("command").get<std::string>() + "'");
        params = in.at("params");
        o = cmd::options_from_report(in);
      } else {
        params = in;
      }
    }
    for (const auto& [key, v] : values[command])
      if (given[command][key]->count()) params[key] = expand(v);
    if (seed_opt->count()) o.seed = seed;
    if (const char* env = std::getenv("REGRESSIA_SEED")) {
      try {
        o.seed = std::stoull(env);
      } catch (const std::exception&) {
        throw regressia::ParseError(std::string("REGRESSIA_SEED is not a natural number: ") + env);
      }
    }
    o.jobs = jobs;
    if (mc_opt->count()) o.max_candidates = max_candidates;
    if (st_opt->count()) o.strategy = regressia::parse_strategy(strategy);
    for (const auto& c : caps) {
      const auto eq = c.find('=');
      if (eq == std::string::npos) throw regressia::ParseError("--cap expects name=value, got '" + c + "'");
      const std::string v = c.substr(eq + 1);
      if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
        throw regressia::ParseError("--cap value must be a natural number");
      cmd::set_cap(o.caps, c.substr(0, eq), std::stoull(v));
    }

    const cmd::Outcome out = cmd::run(command, params, o);
    if (format == "json")
      std::cout << out.report.dump(2) << "\n";
    else if (format == "csv")
      std::cout << cmd::to_csv(out.report);
    else
      std::cout << out.text << "\n";
    return out.status;
  } catch (const regressia::BudgetError& e) {
    std::cerr << "error: budget exceeded: " << e.what() << "\n";
    return cmd::inconclusive;
  } catch (const regressia::ContractViolation& e) {
    std::cerr << "error: contract violation: " << e.what() << "\n";
    return cmd::property_failure;
  } catch (const regressia::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cmd::input_error;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << "\n";
    return cmd::input_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cmd::input_error;
  }
}
