#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mahler/cli/command.hpp"
#include "mahler/cli/system_file.hpp"
#include "mahler/exact/errors.hpp"

namespace {

struct Args {
  mahler::Command cmd;
  std::string file;
  std::string json_path;
  long digits = 0, order = 0, k_max = 0, degree = 0, d_max = 0, power = 0, l_max = 0;
  std::string bound;
  std::string relation;
  std::string series;
};

void add_options(CLI::App* app, Args& a) {
  app->add_option("FILE", a.file, "System definition file")->required();
  app->add_option("--system", a.cmd.systems, "System name (repeatable or comma separated)")
      ->delimiter(',')
      ->expected(1)
      ->allow_extra_args(false)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app->add_option("--point", a.cmd.points, "Point name (repeatable or comma separated)")
      ->delimiter(',')
      ->expected(1)
      ->allow_extra_args(false)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app->add_option("--digits", a.digits, "Decimal digits");
  app->add_option("--order", a.order, "Series truncation order");
  app->add_option("--k-max", a.k_max, "Orbit iteration bound");
  app->add_option("--bound", a.bound, "Coefficient bound (probe: window bound)");
  app->add_option("--degree", a.degree, "Relation degree");
  app->add_option("--d-max", a.d_max, "z-degree bound for lift");
  app->add_option("--power", a.power, "Kronecker power");
  app->add_option("--l-max", a.l_max, "Largest l for iteration vectors");
  app->add_option("--relation", a.relation, "Polynomial in X0, X1, ...");
  app->add_option("--gen", a.cmd.generators, "Pure generator GROUP:poly (repeatable)")
      ->expected(1)
      ->allow_extra_args(false)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app->add_option("--g", a.series, "Probe function in the system variables");
  app->add_option("--json", a.json_path, "Write the machine report to PATH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear Mahler systems: checks, evaluation and relation search"};
  app.require_subcommand(1);
  Args args;
  std::vector<std::pair<CLI::App*, std::string>> subs;

  CLI::App* check = app.add_subcommand("check", "Structural checks");
  check->require_subcommand(1);
  for (const char* name : {"class-m", "admissible", "gauge", "regular-point"}) {
    CLI::App* s = check->add_subcommand(name);
    add_options(s, args);
    subs.emplace_back(s, std::string("check ") + name);
  }
  for (const auto& name : mahler::command_names()) {
    if (name.rfind("check ", 0) == 0) continue;
    CLI::App* s = app.add_subcommand(name);
    add_options(s, args);
    subs.emplace_back(s, name);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mahler::kInputError;
  }

  for (const auto& [s, name] : subs)
    if (s->parsed()) args.cmd.name = name;
  mahler::Command& cmd = args.cmd;
  auto set = [](const CLI::App* s, const char* opt, long v, std::optional<long>& out) {
    if (s->count(opt) > 0) out = v;
  };
  for (const auto& [s, name] : subs) {
    if (!s->parsed()) continue;
    set(s, "--digits", args.digits, cmd.digits);
    set(s, "--order", args.order, cmd.order);
    set(s, "--k-max", args.k_max, cmd.k_max);
    set(s, "--degree", args.degree, cmd.degree);
    set(s, "--d-max", args.d_max, cmd.d_max);
    set(s, "--power", args.power, cmd.power);
    set(s, "--l-max", args.l_max, cmd.l_max);
    if (s->count("--bound") > 0) cmd.bound = args.bound;
    if (s->count("--relation") > 0) cmd.relation = args.relation;
    if (s->count("--g") > 0) cmd.series = args.series;
  }
  cmd.file_label = args.file;

  std::ifstream in(args.file, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << args.file << "\n";
    return mahler::kInputError;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  mahler::SystemFile file;
  try {
    file = mahler::parse_system_file(buf.str());
  } catch (const mahler::ParseError& e) {
    std::cerr << args.file << ": " << e.what() << "\n";
    return mahler::kInputError;
  }

  mahler::Report rep = mahler::run_command(cmd, file);
  std::cout << rep.text;
  if (!args.json_path.empty()) {
    std::ofstream out(args.json_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << args.json_path << "\n";
      return mahler::kInputError;
    }
    out << rep.json;
  }
  return rep.status;
}
