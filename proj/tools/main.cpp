#include "CLI11.hpp"

#include "infoval/cli.hpp"
#include "infoval/verify.hpp"

#include <iostream>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{
      "Value functions, belief-simplex subdivisions, information "
      "comparisons, and costly information acquisition for finite decision "
      "problems"};
  app.require_subcommand(1);

  infoval::RunConfig cfg;
  std::string in1, in2;
  bool list_suites = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--mode", cfg.mode, "arithmetic: float or exact")
        ->check(CLI::IsMember({"float", "exact"}));
    sub->add_option("--grid", cfg.grid,
                    "grid resolution (0 picks the dimension default)");
    sub->add_option("--out", cfg.out_dir, "directory for report files");
    sub->add_option("--seed", cfg.seed, "seed recorded in every report");
  };

  auto* analyze = app.add_subcommand(
      "analyze", "subdivision, value curve, and figure for one problem");
  analyze->add_option("problem", in1, "problem JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  add_common(analyze);

  auto* compare = app.add_subcommand(
      "compare", "classify a transformation between two problems");
  compare->add_option("original", in1, "original problem JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  compare->add_option("transformed", in2, "transformed problem JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  compare->add_option("--prior", cfg.priors,
                      "belief p1,p2,... for a fixed-prior report (repeatable)");
  add_common(compare);

  auto* acquire = app.add_subcommand(
      "acquire", "solve optimal information acquisition at a prior");
  acquire->add_option("problem", in1, "problem JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  acquire->add_option("cost", in2, "cost JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  acquire->add_option("--prior", cfg.priors, "belief p1,p2,... (required)");
  add_common(acquire);

  auto* screen = app.add_subcommand(
      "screen", "price a two-type menu of information contracts");
  screen->add_option("instance", in1, "screening instance JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  add_common(screen);

  auto* synth = app.add_subcommand(
      "synth-cost", "build a cost making a target distribution optimal");
  synth->add_option("problem", in1, "problem JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  synth->add_option("distribution", in2, "target distribution JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  synth->add_option("--prior", cfg.priors,
                    "belief p1,p2,... (defaults to the target's mean)");
  add_common(synth);

  auto* verify = app.add_subcommand(
      "verify", "run seeded property suites and write their reports");
  verify->add_option("suite", cfg.suite, "suite name, or 'all'");
  verify->add_flag("--list", list_suites, "list suite names and exit");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list_suites) {
    for (const auto& name : infoval::suite_names()) std::cout << name << "\n";
    return 0;
  }

  auto* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  if (cfg.command == "analyze" || cfg.command == "screen")
    cfg.inputs = {in1};
  else if (cfg.command != "verify")
    cfg.inputs = {in1, in2};

  return infoval::run_command(cfg, std::cout, std::cerr);
}
