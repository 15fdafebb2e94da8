// nlw: command line front end for the simulation and diagnostics library.
//
// Exit codes: 0 success, 2 config/input error, 3 numerical fault, 4 resource cap.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlw/config.hpp"
#include "nlw/errors.hpp"
#include "nlw/harness.hpp"
#include "nlw/report.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitResource = 4;

struct Overrides {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> dx;
  std::optional<double> cfl;
  std::optional<double> p;
  std::optional<double> tfinal;
  bool linear = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "INI config file")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--seed", o.seed, "base seed");
  cmd->add_option("--dx", o.dx, "grid spacing");
  cmd->add_option("--cfl", o.cfl, "dt / dx");
  cmd->add_option("--p", o.p, "nonlinearity exponent");
  cmd->add_option("--tfinal", o.tfinal, "final time");
  cmd->add_flag("--linear", o.linear, "drop the nonlinearity");
}

nlw::ExperimentConfig build_config(const Overrides& o) {
  nlw::ExperimentConfig c = o.config.empty() ? nlw::ExperimentConfig{} : nlw::load_config(o.config);
  if (!o.out.empty()) c.output_dir = o.out;
  if (o.seed) c.seed = *o.seed;
  if (o.dx) c.dx = *o.dx;
  if (o.cfl) c.solver.cfl = *o.cfl;
  if (o.p) c.model.p = *o.p;
  if (o.tfinal) c.t_final = *o.tfinal;
  if (o.linear) c.model.defocusing_on = false;
  c.validate();
  return c;
}

int exit_code_for(const std::string& kind) {
  if (kind == "numerical_fault") return kExitNumerical;
  if (kind == "resource_limit") return kExitResource;
  return kExitConfig;
}

int run_stages(const nlw::ExperimentConfig& c, const std::vector<std::string>& only) {
  const nlw::RunReport report = nlw::run_experiment(c, only);
  int code = 0;
  for (const auto& s : report.stages) {
    if (s.status == "skipped" && s.message == "not requested") continue;
    std::cout << s.name << ": " << s.status;
    if (!s.message.empty()) std::cout << " (" << s.message << ")";
    std::cout << "\n";
    if (s.status == "failed" && code == 0) code = exit_code_for(s.error_kind);
  }
  std::cout << "wrote " << report.files.size() << " files to " << c.output_dir.string() << "\n";
  return code;
}

int run_sweep(const nlw::ExperimentConfig& c) {
  const auto rows = nlw::decay_matrix(c);
  std::string csv = "profile,amplitude,energy,T,A,A_sweep\n";
  for (const auto& r : rows) {
    csv += r.profile + "," + nlw::format_number(r.amplitude) + "," + nlw::format_number(r.energy) + "," +
           nlw::format_number(r.point.T) + "," + nlw::format_number(r.point.A) + "," +
           nlw::format_number(r.point.A_sweep) + "\n";
  }
  nlw::write_text(c.output_dir / "decay_matrix.csv", csv);
  std::cout << "T,envelope\n";
  for (double T : c.T_list) {
    double env = 0.0;
    for (const auto& r : rows) {
      if (r.point.T == T) env = std::max(env, r.point.A_sweep);
    }
    std::cout << nlw::format_number(T) << "," << nlw::format_number(env) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nlw - 1D defocusing nonlinear wave laboratory"};
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
    std::vector<std::string> stages;
  };
  const std::vector<Command> commands{
      {"simulate", "evolve the configured initial data and store snapshots", {"simulate"}},
      {"diagnose", "conservation residuals, light-ray fluxes and parallelogram sweep",
       {"simulate", "conservation", "ray_flux", "parallelogram"}},
      {"worldline", "concentration trace and Lipschitz worldline extraction", {"simulate", "worldline"}},
      {"rademacher", "multiscale decomposition report on the seeded corpus", {"rademacher"}},
      {"decay", "averaged max-norm decay curve", {"simulate", "decay"}},
      {"sweep", "decay curves over energy-matched profiles", {}},
      {"report", "full pipeline with manifest", {}},
  };

  Overrides overrides;
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) {
    subs.push_back(app.add_subcommand(c.name, c.help));
    add_common(subs.back(), overrides);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    const nlw::ExperimentConfig config = build_config(overrides);
    for (std::size_t i = 0; i < commands.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      const std::string name = commands[i].name;
      if (name == "sweep") return run_sweep(config);
      return run_stages(config, commands[i].stages);
    }
  } catch (const nlw::NumericalFault& e) {
    std::cerr << "numerical fault: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const nlw::ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const nlw::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
