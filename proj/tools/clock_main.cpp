#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_common(CLI::App* sub, qclock::cli::CommonOptions& opt,
                bool config_required = true) {
  auto* cfg = sub->add_option("--config", opt.config_path, "JSON config file");
  if (config_required) cfg->required();
  sub->add_option("--out", opt.out_dir, "output directory (default .)");
  sub->add_option("--seed", opt.seed, "seed override");
  sub->add_option("--points", opt.points, "grid point count override");
  sub->add_flag("--quiet", opt.quiet, "suppress stderr notes");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "clock: Ramsey fringe simulation and Lindblad decoherence analysis"};
  app.require_subcommand(1);

  qclock::cli::CommonOptions opt;
  int (*handler)(const qclock::cli::CommonOptions&) = nullptr;

  auto* simulate = app.add_subcommand(
      "simulate", "run one Ramsey sequence and write state snapshots");
  add_common(simulate, opt);
  simulate->callback([&] { handler = qclock::cli::cmd_simulate; });

  auto* scan =
      app.add_subcommand("scan", "sweep the drive frequency into a fringe CSV");
  add_common(scan, opt);
  scan->callback([&] { handler = qclock::cli::cmd_scan; });

  auto* fit = app.add_subcommand(
      "fit", "estimate (Gamma, EShift) from a fringe scan");
  add_common(fit, opt);
  fit->callback([&] { handler = qclock::cli::cmd_fit; });

  auto* closure = app.add_subcommand(
      "closure", "three-level frequency-shift closure test");
  add_common(closure, opt);
  closure->callback([&] { handler = qclock::cli::cmd_closure; });

  auto* bounds =
      app.add_subcommand("bounds", "decoherence bound arithmetic in eV");
  add_common(bounds, opt);
  bounds->callback([&] { handler = qclock::cli::cmd_bounds; });

  auto* verify = app.add_subcommand(
      "verify", "run the self-contained property suite");
  add_common(verify, opt, /*config_required=*/false);
  verify->callback([&] { handler = qclock::cli::cmd_verify; });

  CLI11_PARSE(app, argc, argv);
  return handler ? handler(opt) : 2;
}
