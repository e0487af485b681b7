// Copyright 2026 The stqsim Authors
//
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

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "stq/commands.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON run configuration");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "override the config seed")
      ->each([&](const std::string&) { args.seed_set = true; });
  cmd->add_option("--threads", args.threads,
                  "worker threads (0 = all cores)");
}

stq::RunConfig resolve(const CommonArgs& args) {
  stq::RunConfig cfg = args.config_path.empty()
                           ? stq::parse_config(stq::json::object())
                           : stq::load_config(args.config_path);
  if (args.seed_set) cfg.seed = args.seed;
  if (args.threads >= 0) cfg.threads = args.threads;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"singlet-triplet qubit gate simulator"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string gate = "x_pi2";
  std::string family = "corpse";
  std::string sequence_file;
  bool with_mc = false;

  CLI::App* tss = app.add_subcommand("tss", "locate the transverse sweet spot");
  add_common(tss, args);
  CLI::App* spectrum =
      app.add_subcommand("spectrum", "energy spectrum vs detuning");
  add_common(spectrum, args);
  CLI::App* filter_fn =
      app.add_subcommand("filter-fn", "filter transfer function of one gate");
  add_common(filter_fn, args);
  filter_fn->add_option("--gate", gate, "x_pi2|z_pi2|xz_pi|xyz_4pi3");
  filter_fn->add_option("--family", family,
                        "naive|corpse|geometric|non_cyclic");
  filter_fn->add_option("--sequence", sequence_file,
                        "pulse-sequence JSON instead of a catalog gate");
  CLI::App* fig4 =
      app.add_subcommand("fig4", "filter-route fidelity table for all gates");
  add_common(fig4, args);
  fig4->add_flag("--mc", with_mc, "add the time-domain Monte-Carlo check");
  CLI::App* leakage =
      app.add_subcommand("leakage", "3-level pi-pulse leakage validation");
  add_common(leakage, args);
  CLI::App* noise_gen =
      app.add_subcommand("noise-gen", "sample a calibrated noise trace");
  add_common(noise_gen, args);
  CLI::App* fig5 =
      app.add_subcommand("fig5", "two-qubit entangling-gate noise sweep");
  add_common(fig5, args);

  CLI11_PARSE(app, argc, argv);

  try {
    const stq::RunConfig cfg = resolve(args);
    if (tss->parsed()) {
      const stq::json j = stq::cmd_tss(cfg, args.out_dir);
      std::cout << j.dump(2) << "\n";
    } else if (spectrum->parsed()) {
      stq::cmd_spectrum(cfg, args.out_dir);
    } else if (filter_fn->parsed()) {
      stq::cmd_filter_fn(cfg, args.out_dir, gate, family, sequence_file);
    } else if (fig4->parsed()) {
      const stq::json j = stq::cmd_fig4(cfg, args.out_dir, with_mc);
      std::cout << j["fidelity"].dump(2) << "\n";
    } else if (leakage->parsed()) {
      const stq::json j = stq::cmd_leakage(cfg, args.out_dir);
      std::cout << j.dump(2) << "\n";
    } else if (noise_gen->parsed()) {
      stq::cmd_noise_gen(cfg, args.out_dir);
    } else if (fig5->parsed()) {
      const stq::json j = stq::cmd_fig5(cfg, args.out_dir);
      std::cout << j.dump(2) << "\n";
    }
  } catch (const stq::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const stq::numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
