#include "nlw/report.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "json.hpp"
#include "nlw/errors.hpp"

namespace nlw {

using nlohmann::json;

namespace {

json trace_entry(const TraceEntry& e) { return json{{"t", e.t}, {"x", e.x}, {"value", e.value}}; }

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string ray_flux_csv(const std::vector<RayFluxRow>& rows) {
  std::string out = "x0,direction,flux,bound,ratio\n";
  for (const auto& r : rows) {
    out += format_number(r.x0) + "," + std::to_string(r.direction) + "," + format_number(r.flux) + "," +
           format_number(r.bound) + "," + format_number(r.ratio) + "\n";
  }
  return out;
}

std::string parallelogram_csv(const std::vector<ParallelogramRow>& rows) {
  std::string out = "t0,x0,v,R,T,integral,envelope,ratio\n";
  for (const auto& r : rows) {
    for (double v : {r.t0, r.x0, r.v, r.R, r.T, r.integral, r.envelope}) out += format_number(v) + ",";
    out += format_number(r.ratio) + "\n";
  }
  return out;
}

std::string conservation_csv(const std::vector<ConservationResiduals>& rows) {
  std::string out = "t,r_energy,r_momentum\n";
  for (const auto& r : rows) {
    out += format_number(r.t) + "," + format_number(r.r_energy) + "," + format_number(r.r_momentum) + "\n";
  }
  return out;
}

std::string worldline_csv(const ConcentrationTrace& trace, const WorldlineExtraction& extraction) {
  std::string out = "t,x,value,selected\n";
  for (const auto& e : trace.entries) {
    const bool selected = std::any_of(extraction.selected.begin(), extraction.selected.end(),
                                      [&](const TraceEntry& s) { return s.t == e.t && s.x == e.x; });
    out += format_number(e.t) + "," + format_number(e.x) + "," + format_number(e.value) + "," +
           (selected ? "1" : "0") + "\n";
  }
  return out;
}

std::string decay_csv(const DecayCurve& curve) {
  std::string out = "T,A,A_sweep\n";
  for (const auto& p : curve) {
    out += format_number(p.T) + "," + format_number(p.A) + "," + format_number(p.A_sweep) + "\n";
  }
  return out;
}

std::string energy_csv(const Trajectory& traj) {
  std::string out = "t,energy,relative_drift\n";
  const double e0 = traj.empty() ? 0.0 : traj.energy(0);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double drift = e0 != 0.0 ? (traj.energy(k) - e0) / e0 : 0.0;
    out += format_number(traj.time(k)) + "," + format_number(traj.energy(k)) + "," + format_number(drift) + "\n";
  }
  return out;
}

std::string extraction_json(const WorldlineExtraction& x) {
  json base = json::array();
  for (const auto& e : x.envelope.base) base.push_back(trace_entry(e));
  json j{{"c", x.c},
         {"c0", x.c0},
         {"eps0_params", {{"family", "min(c, eps_hat*c^2)"}, {"eps_hat", x.eps0.eps_hat}, {"T_n", x.T_n}}},
         {"iterations", x.iterations},
         {"outcome", x.outcome},
         {"envelope_base_points", base}};
  return j.dump(2) + "\n";
}

std::string rademacher_json(const RademacherReport& r) {
  json j{{"lip_bound", r.lip_bound},
         {"sigma", r.params.sigma},
         {"K", r.params.K},
         {"delta", r.params.delta},
         {"n0", r.quiet.n0},
         {"r", r.quiet.r},
         {"measure", r.set.measure},
         {"accepted_fraction", r.set.accepted_fraction},
         {"band_energies", r.band_energies},
         {"note", "sigma, K and delta are engineering defaults; r is the value found, not a certified lower bound"}};
  return j.dump(2) + "\n";
}

std::string scaling_json(const std::vector<ScalingFit>& fits) {
  json arr = json::array();
  for (const auto& f : fits) {
    arr.push_back({{"v", f.v},
                   {"exponent_T", f.exponent_T},
                   {"C_fit", f.C_fit},
                   {"max_ratio", f.max_ratio},
                   {"warning", f.warning},
                   {"message", f.message}});
  }
  return arr.dump(2) + "\n";
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256: digest failed");
  }
  std::ostringstream out;
  out << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) out << std::setw(2) << static_cast<int>(digest[i]);
  return out.str();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("sha256_file: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << text;
}

std::string manifest_json(const RunReport& report, const std::filesystem::path& root) {
  json stages = json::array();
  for (const auto& s : report.stages) stages.push_back({{"name", s.name}, {"status", s.status}, {"message", s.message}});
  json files = json::array();
  for (const auto& f : report.files) {
    files.push_back({{"name", std::filesystem::relative(f, root).generic_string()},
                     {"sha256", sha256_file(f)},
                     {"bytes", std::filesystem::file_size(f)}});
  }
  json j{{"version", kVersion},
         {"config_hash", report.config_hash},
         {"success", report.ok()},
         {"stages", stages},
         {"files", files}};
  return j.dump(2) + "\n";
}

}  // namespace nlw
