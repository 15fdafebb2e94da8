#include "nlw/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "nlw/errors.hpp"

namespace nlw {

namespace pt = boost::property_tree;

namespace {

template <typename T>
T get(const pt::ptree& tree, const std::string& key, T fallback) {
  const auto node = tree.get_optional<std::string>(key);
  if (!node) return fallback;
  const std::string s = boost::trim_copy(*node);
  if constexpr (std::is_same_v<T, bool>) {
    const std::string v = boost::to_lower_copy(s);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw InvalidInput("config: " + key + " is not a boolean: '" + s + "'");
  } else if constexpr (std::is_same_v<T, std::string>) {
    return s;
  } else {
    std::istringstream in(s);
    T value{};
    in >> value;
    if (in.fail() || !in.eof()) throw InvalidInput("config: cannot parse " + key + " = '" + s + "'");
    return value;
  }
}

std::vector<double> get_list(const pt::ptree& tree, const std::string& key, std::vector<double> fallback) {
  const auto node = tree.get_optional<std::string>(key);
  if (!node) return fallback;
  std::vector<std::string> parts;
  boost::split(parts, *node, boost::is_any_of(","));
  std::vector<double> out;
  for (auto& part : parts) {
    boost::trim(part);
    if (part.empty()) continue;
    std::istringstream in(part);
    double v = 0.0;
    in >> v;
    if (in.fail() || !in.eof()) throw InvalidInput("config: cannot parse list entry '" + part + "' in " + key);
    out.push_back(v);
  }
  return out;
}

std::string join(const std::vector<double>& v) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
  return out.str();
}

ProfileSpec parse_profile(const pt::ptree& tree) {
  const std::string kind = boost::to_lower_copy(get<std::string>(tree, "profile.kind", "gaussian"));
  const double amplitude = get(tree, "profile.amplitude", 1.0);
  const double center = get(tree, "profile.center", 0.0);
  if (kind == "gaussian") return GaussianProfile{amplitude, center, get(tree, "profile.width", 1.0)};
  if (kind == "traveling") {
    return TravelingProfile{amplitude, center, get(tree, "profile.width", 1.0), get(tree, "profile.direction", 1)};
  }
  if (kind == "bump") return BumpProfile{amplitude, center, get(tree, "profile.width", 1.0)};
  if (kind == "noise") {
    FilteredNoiseProfile p;
    p.seed = get<std::uint64_t>(tree, "profile.seed", 1);
    p.cutoff = get(tree, "profile.cutoff", 4.0);
    p.amplitude = amplitude;
    p.center = center;
    p.width = get(tree, "profile.width", 4.0);
    p.modes = get(tree, "profile.modes", 16);
    return p;
  }
  if (kind == "zero") return ZeroProfile{};
  throw InvalidInput("config: unknown profile.kind '" + kind + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
  model.validate();
  solver.validate();
  if (!(dx > 0.0)) throw InvalidInput("config: grid.dx must be > 0");
  if (!(half_width >= 0.0)) throw InvalidInput("config: grid.half_width must be >= 0");
  if (!(t_final > 0.0)) throw InvalidInput("config: run.t_final must be > 0");
  if (T_list.empty() || !std::is_sorted(T_list.begin(), T_list.end()) ||
      std::adjacent_find(T_list.begin(), T_list.end()) != T_list.end() || !(T_list.front() > 0.0)) {
    throw InvalidInput("config: run.T_list must be positive and strictly increasing");
  }
  if (!(threshold > 0.0)) throw InvalidInput("config: worldline.threshold must be > 0");
  if (!(eps0.eps_hat > 0.0) || eps0.eps_hat > 1.0) throw InvalidInput("config: worldline.eps_hat must be in (0, 1]");
  if (rays < 1) throw InvalidInput("config: flux.rays must be >= 1");
  if (sweep.v.empty() || sweep.R.empty() || sweep.T.empty()) throw InvalidInput("config: empty parallelogram sweep");
  for (double R : sweep.R) {
    for (double T : sweep.T) {
      if (!(R >= 1.0) || !(T >= R)) throw InvalidInput("config: parallelogram sweep needs T >= R >= 1");
    }
  }
  if (!(calibration_C >= 0.0)) throw InvalidInput("config: flux.calibration_C must be >= 0");
  if (!(rademacher.delta > 0.0) || !(rademacher.sigma > 0.0) || rademacher.K < 1 || rademacher.n_max < 2) {
    throw InvalidInput("config: invalid [rademacher] section");
  }
  if (rademacher_samples < 0) throw InvalidInput("config: rademacher.samples must be >= 0");
  std::visit(
      [](const auto& p) {
        if constexpr (!std::is_same_v<std::decay_t<decltype(p)>, ZeroProfile>) {
          if (!(p.width > 0.0)) throw InvalidInput("config: profile.width must be > 0");
        }
      },
      profile);
}

Grid ExperimentConfig::grid() const {
  double h = half_width;
  if (h == 0.0) {
    const double cone = std::fabs(profile_center(profile)) + support_radius(profile) + 1.05 * t_final + 4.0;
    const double vmax = std::fabs(*std::max_element(sweep.v.begin(), sweep.v.end(),
                                                    [](double a, double b) { return std::fabs(a) < std::fabs(b); }));
    const double tmax = std::min(*std::max_element(sweep.T.begin(), sweep.T.end()), t_final);
    const double rmax = *std::max_element(sweep.R.begin(), sweep.R.end());
    const double slab = std::fabs(sweep.x0) + vmax * (std::fabs(sweep.t0) + tmax) + rmax + 2.0;
    h = std::max(cone, slab);
  }
  return make_symmetric_grid(h, dx);
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  ExperimentConfig c;
  c.profile = parse_profile(tree);
  c.model.p = get(tree, "model.p", c.model.p);
  c.model.defocusing_on = get(tree, "model.defocusing", c.model.defocusing_on);
  c.solver.cfl = get(tree, "solver.cfl", c.solver.cfl);
  c.solver.newton_tol = get(tree, "solver.newton_tol", c.solver.newton_tol);
  c.solver.newton_max_iter = get(tree, "solver.newton_max_iter", c.solver.newton_max_iter);
  c.solver.record_stride = get(tree, "solver.record_stride", c.solver.record_stride);
  c.dx = get(tree, "grid.dx", c.dx);
  c.half_width = get(tree, "grid.half_width", c.half_width);
  c.t_final = get(tree, "run.t_final", c.t_final);
  c.symmetric = get(tree, "run.symmetric", c.symmetric);
  c.T_list = get_list(tree, "run.T_list", c.T_list);
  c.seed = get<std::uint64_t>(tree, "run.seed", c.seed);
  c.threshold = get(tree, "worldline.threshold", c.threshold);
  c.eps0.eps_hat = get(tree, "worldline.eps_hat", c.eps0.eps_hat);
  c.rays = get(tree, "flux.rays", c.rays);
  c.sweep.t0 = get(tree, "flux.t0", c.sweep.t0);
  c.sweep.x0 = get(tree, "flux.x0", c.sweep.x0);
  c.sweep.v = get_list(tree, "flux.v", c.sweep.v);
  c.sweep.R = get_list(tree, "flux.R", c.sweep.R);
  c.sweep.T = get_list(tree, "flux.T", c.sweep.T);
  c.calibration_C = get(tree, "flux.calibration_C", c.calibration_C);
  c.rademacher.delta = get(tree, "rademacher.delta", c.rademacher.delta);
  c.rademacher.sigma = get(tree, "rademacher.sigma", c.rademacher.sigma);
  c.rademacher.K = get(tree, "rademacher.K", c.rademacher.K);
  c.rademacher.n_max = get(tree, "rademacher.n_max", c.rademacher.n_max);
  c.rademacher_samples = get(tree, "rademacher.samples", c.rademacher_samples);
  c.output_dir = get<std::string>(tree, "output.dir", c.output_dir.string());
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("config: cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string to_ini(const ExperimentConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "[profile]\n";
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, ZeroProfile>) {
          out << "kind = zero\n";
        } else {
          if constexpr (std::is_same_v<P, GaussianProfile>) out << "kind = gaussian\n";
          if constexpr (std::is_same_v<P, TravelingProfile>) out << "kind = traveling\ndirection = " << p.direction << "\n";
          if constexpr (std::is_same_v<P, BumpProfile>) out << "kind = bump\n";
          if constexpr (std::is_same_v<P, FilteredNoiseProfile>) {
            out << "kind = noise\nseed = " << p.seed << "\ncutoff = " << p.cutoff << "\nmodes = " << p.modes << "\n";
          }
          out << "amplitude = " << p.amplitude << "\ncenter = " << p.center << "\nwidth = " << p.width << "\n";
        }
      },
      c.profile);
  out << "\n[model]\np = " << c.model.p << "\ndefocusing = " << (c.model.defocusing_on ? "true" : "false") << "\n";
  out << "\n[solver]\ncfl = " << c.solver.cfl << "\nnewton_tol = " << c.solver.newton_tol
      << "\nnewton_max_iter = " << c.solver.newton_max_iter << "\nrecord_stride = " << c.solver.record_stride << "\n";
  out << "\n[grid]\ndx = " << c.dx << "\nhalf_width = " << c.half_width << "\n";
  out << "\n[run]\nt_final = " << c.t_final << "\nsymmetric = " << (c.symmetric ? "true" : "false")
      << "\nT_list = " << join(c.T_list) << "\nseed = " << c.seed << "\n";
  out << "\n[worldline]\nthreshold = " << c.threshold << "\neps_hat = " << c.eps0.eps_hat << "\n";
  out << "\n[flux]\nrays = " << c.rays << "\nt0 = " << c.sweep.t0 << "\nx0 = " << c.sweep.x0 << "\nv = " << join(c.sweep.v)
      << "\nR = " << join(c.sweep.R) << "\nT = " << join(c.sweep.T) << "\ncalibration_C = " << c.calibration_C << "\n";
  out << "\n[rademacher]\ndelta = " << c.rademacher.delta << "\nsigma = " << c.rademacher.sigma << "\nK = " << c.rademacher.K
      << "\nn_max = " << c.rademacher.n_max << "\nsamples = " << c.rademacher_samples << "\n";
  out << "\n[output]\ndir = " << c.output_dir.string() << "\n";
  return out.str();
}

}  // namespace nlw
