#include <CLI11.hpp>

#include "sqz/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"squeezelab: squeezing functions, conformal moduli, slit-disk maps, "
               "and extremal partitions of planar domains"};
  app.require_subcommand(1);

  sqz::RunConfig cfg;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--resolution", cfg.resolution, "grid rows (>= 32)");
    cmd->add_option("--output,-o", cfg.output, "output path (default: stdout)");
    cmd->add_option("--format", cfg.format, "json | csv | svg")
        ->check(CLI::IsMember({"json", "csv", "svg"}));
    cmd->add_option("--seed", cfg.seed, "seed for randomized suites");
    cmd->add_option("--cache-dir", cfg.cache_dir,
                    "result cache directory (or SQUEEZELAB_CACHE_DIR)");
    cmd->add_flag("--no-cache", cfg.no_cache, "bypass the result cache");
  };
  auto add_domain = [&](CLI::App* cmd) {
    cmd->add_option("--domain", cfg.domain_arg,
                    "domain spec: JSON file, inline JSON, or annulus:R")
        ->required();
  };
  auto add_z = [&](CLI::App* cmd) {
    cmd->add_option("--z", cfg.z_re, "marked point, real part");
    cmd->add_option("--z-im", cfg.z_im, "marked point, imaginary part");
  };

  auto* modulus = app.add_subcommand("modulus", "modulus of a doubly connected domain");
  add_domain(modulus);
  add_common(modulus);

  auto* reduced = app.add_subcommand("reduced-modulus",
                                     "reduced module of a disk at a marked point");
  add_domain(reduced);
  add_z(reduced);
  add_common(reduced);

  auto* slitmap = app.add_subcommand("slit-map",
                                     "annulus-to-slit-disk canonical map samples");
  slitmap->add_option("--q", cfg.q, "inner radius of the source annulus");
  slitmap->add_option("--a", cfg.a, "marked point / slit radius");
  slitmap->add_option("--truncation", cfg.truncation, "prime-product factors");
  slitmap->add_option("--samples", cfg.samples, "boundary samples per circle");
  add_common(slitmap);

  auto* squeeze = app.add_subcommand("squeeze", "squeezing function at a point");
  add_domain(squeeze);
  add_z(squeeze);
  add_common(squeeze);

  auto* sweep = app.add_subcommand("sweep",
                                   "radial sweep of squeezing values (CSV rows)");
  add_domain(sweep);
  add_z(sweep);
  sweep->add_option("--samples", cfg.samples, "number of sweep points");
  add_common(sweep);

  auto* partition = app.add_subcommand("partition",
                                       "extremal two-domain partition around a barrier");
  partition->add_option("--barriers", cfg.barriers_arg, "barrier set JSON (file or inline)")
      ->required();
  partition->add_option("--alpha1", cfg.alpha1, "weight of the reduced module");
  partition->add_option("--alpha2", cfg.alpha2, "weight of the ring modulus");
  partition->add_option("--harmonics", cfg.harmonics, "Fourier harmonics K (<= 8)");
  add_common(partition);

  auto* verify = app.add_subcommand("verify", "run a named verification suite");
  verify->add_option("suite", cfg.suite,
                     "thm1 | rw | thm2 | thm3 | polarization | lemma2")
      ->required();
  verify->add_option("--q", cfg.q, "rw suite: inner radius");
  verify->add_option("--a", cfg.a, "rw suite: marked point");
  verify->add_option("--trials", cfg.trials, "thm2 suite: barrier sets to run");
  add_common(verify);

  auto* plot = app.add_subcommand("plot", "SVG figure of a domain");
  add_domain(plot);
  add_common(plot);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return sqz::kExitUsage;
  }

  for (auto* sub : {modulus, reduced, slitmap, squeeze, sweep, partition, verify, plot})
    if (sub->parsed()) cfg.command = sub->get_name();

  if (cfg.resolution < 32) {
    std::fprintf(stderr, "error: resolution must be >= 32\n");
    return sqz::kExitUsage;
  }
  return sqz::run(cfg);
}
