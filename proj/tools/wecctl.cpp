// Copyright 2026 The wecopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// wecctl: config-driven experiment runner over the wecopt C API.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "wecopt/wecopt.h"

namespace {

using CommandFn = wecopt_status (*)(const wecopt_config*, const char*,
                                    wecopt_command_result**);

int Run(const std::string& name, CommandFn fn, const std::string& config_path,
        std::string out_dir, bool quiet) {
  wecopt_config* config = nullptr;
  if (wecopt_config_load(config_path.c_str(), &config) != WECOPT_OK) {
    std::fprintf(stderr, "wecctl %s: %s\n", name.c_str(), wecopt_last_error());
    return 1;
  }
  if (out_dir.empty()) {
    const char* configured = wecopt_config_output(config);
    out_dir = configured != nullptr ? configured : "out";
  }

  wecopt_command_result* result = nullptr;
  const wecopt_status status = fn(config, out_dir.c_str(), &result);
  wecopt_config_free(config);
  if (status != WECOPT_OK) {
    std::fprintf(stderr, "wecctl %s: %s\n", name.c_str(), wecopt_last_error());
    return 1;
  }
  if (!quiet) {
    std::printf("%s\n", wecopt_command_summary(result));
    for (size_t i = 0; i < wecopt_command_file_count(result); ++i) {
      std::fprintf(stderr, "wrote %s\n", wecopt_command_file(result, i));
    }
  }
  const int code = wecopt_command_partial(result) ? 2 : 0;
  if (code == 2) {
    std::fprintf(stderr, "wecctl %s: some solves did not reach optimality\n",
                 name.c_str());
  }
  wecopt_command_result_free(result);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave energy converter optimal control experiments"};
  app.set_version_flag("--version", std::string(wecopt_version()));
  app.require_subcommand(1);

  struct Spec {
    const char* name;
    const char* help;
    CommandFn fn;
  };
  const Spec specs[] = {
      {"estimate", "Identify (A, b, c) from simulated or recorded runs",
       &wecopt_cmd_estimate},
      {"sweep", "Solve a lambda sweep or an eta/rho grid", &wecopt_cmd_sweep},
      {"mpc", "Run the receding-horizon controller", &wecopt_cmd_mpc},
      {"costfit", "Fit damping/velocity families and the power exponent",
       &wecopt_cmd_costfit},
  };

  std::string config_path, out_dir;
  bool quiet = false;
  const Spec* chosen = nullptr;
  for (const Spec& s : specs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", config_path, "Run configuration file")
        ->required();
    sub->add_option("--out", out_dir,
                    "Output directory (default: run.output, else ./out)");
    sub->add_flag("-q,--quiet", quiet, "Do not print the summary");
    sub->callback([&chosen, &s] { chosen = &s; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return Run(chosen->name, chosen->fn, config_path, out_dir, quiet);
}
