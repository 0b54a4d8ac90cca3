#include "fluxsim/io.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace fluxsim {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double require_number(const json& j, const std::string& table,
                      const std::string& key) {
  if (!j.contains(key))
    throw ConfigError("missing config key: " + table + "." + key);
  if (!j[key].is_number())
    throw ConfigError("config key is not a number: " + table + "." + key);
  return j[key].get<double>();
}

double optional_number(const json& j, const std::string& key, double dflt) {
  if (!j.contains(key)) return dflt;
  return j[key].get<double>();
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("config parse error: ") + ex.what());
  }

  RunConfig c;
  if (!j.contains("device") || !j["device"].is_object())
    throw ConfigError("missing config table: device");
  const json& d = j["device"];
  c.device.fluxonium.e_j = require_number(d, "device", "e_j");
  c.device.fluxonium.e_c = require_number(d, "device", "e_c");
  c.device.fluxonium.e_l = require_number(d, "device", "e_l");
  c.device.fluxonium.phi_ext = require_number(d, "device", "phi_ext");
  c.device.g = require_number(d, "device", "g");
  c.device.omega_r = require_number(d, "device", "omega_r");
  c.device.kappa = require_number(d, "device", "kappa");

  if (j.contains("tls")) {
    const json& t = j["tls"];
    TlsParams tls;
    tls.delta_tls = require_number(t, "tls", "delta_tls");
    tls.g_tls = require_number(t, "tls", "g_tls");
    tls.temperature = optional_number(t, "temperature", 0.0);
    tls.photon_order = static_cast<int>(optional_number(t, "photon_order", 0));
    c.tls = tls;
  }

  if (j.contains("hilbert")) {
    const json& h = j["hilbert"];
    c.hilbert.n_flux = static_cast<int>(optional_number(h, "n_flux", 10));
    c.hilbert.n_fock = static_cast<int>(optional_number(h, "n_fock", 65));
    c.hilbert.n_sidebands =
        static_cast<int>(optional_number(h, "n_sidebands", 13));
  }
  c.hilbert.tls_present = c.tls.has_value();

  if (j.contains("drive")) {
    const json& dr = j["drive"];
    c.omega_d_override = optional_number(dr, "omega_d", 0.0);
    if (dr.contains("epsilon")) {
      if (dr["epsilon"].is_array())
        c.epsilon_grid = dr["epsilon"].get<std::vector<double>>();
      else
        c.epsilon_grid = {dr["epsilon"].get<double>()};
    }
    if (dr.contains("epsilon_grid"))
      c.epsilon_grid = dr["epsilon_grid"].get<std::vector<double>>();
  }

  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    if (s.contains("epsilon_grid"))
      c.epsilon_grid = s["epsilon_grid"].get<std::vector<double>>();
    if (s.contains("initial_states"))
      c.initial_states = s["initial_states"].get<std::vector<std::string>>();
  }

  if (j.contains("solver")) {
    const json& s = j["solver"];
    c.solver.rtol = optional_number(s, "rtol", c.solver.rtol);
    c.solver.atol = optional_number(s, "atol", c.solver.atol);
    c.solver.secular_cutoff_ghz =
        optional_number(s, "secular_cutoff_ghz", c.solver.secular_cutoff_ghz);
    c.solver.k_kept = static_cast<int>(optional_number(s, "k_kept", c.solver.k_kept));
    c.solver.capture_min = optional_number(s, "capture_min", c.solver.capture_min);
    c.solver.duration_factor =
        optional_number(s, "duration_factor", c.solver.duration_factor);
    c.solver.basis_size =
        static_cast<int>(optional_number(s, "basis_size", c.solver.basis_size));
    if (s.contains("dressed_frame"))
      c.solver.dressed_frame = s["dressed_frame"].get<bool>();
  }

  if (j.contains("stats")) {
    const json& s = j["stats"];
    c.bootstrap_samples =
        static_cast<int>(optional_number(s, "n_samples", c.bootstrap_samples));
    c.bootstrap_sample_size = static_cast<int>(
        optional_number(s, "sample_size", c.bootstrap_sample_size));
    c.bootstrap_seed = optional_number(s, "seed", c.bootstrap_seed);
  }

  if (j.contains("calibration"))
    c.stark_delta_ghz = optional_number(j["calibration"], "delta", 0.0);
  if (j.contains("full_scale")) c.full_scale = j["full_scale"].get<bool>();
  c.schema_version =
      static_cast<int>(optional_number(j, "schema_version", 1));

  try {
    c.device.validate();
    if (c.tls) c.tls->validate();
    c.hilbert.validate();
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("config validation: ") + ex.what());
  }
  for (const std::string& s : c.initial_states) level_index_from_label(s);
  return c;
}

RunConfig load_config(const std::string& path) {
  return parse_config(read_file(path));
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["device"] = {{"e_j", c.device.fluxonium.e_j},
                 {"e_c", c.device.fluxonium.e_c},
                 {"e_l", c.device.fluxonium.e_l},
                 {"phi_ext", c.device.fluxonium.phi_ext},
                 {"g", c.device.g},
                 {"omega_r", c.device.omega_r},
                 {"kappa", c.device.kappa}};
  if (c.tls)
    j["tls"] = {{"delta_tls", c.tls->delta_tls},
                {"g_tls", c.tls->g_tls},
                {"temperature", c.tls->temperature},
                {"photon_order", c.tls->photon_order}};
  j["hilbert"] = {{"n_flux", c.hilbert.n_flux},
                  {"n_fock", c.hilbert.n_fock},
                  {"n_sidebands", c.hilbert.n_sidebands}};
  j["drive"] = {{"omega_d", c.omega_d_override}};
  j["sweep"] = {{"epsilon_grid", c.epsilon_grid},
                {"initial_states", c.initial_states}};
  j["solver"] = {{"rtol", c.solver.rtol},
                 {"atol", c.solver.atol},
                 {"secular_cutoff_ghz", c.solver.secular_cutoff_ghz},
                 {"k_kept", c.solver.k_kept},
                 {"capture_min", c.solver.capture_min},
                 {"duration_factor", c.solver.duration_factor},
                 {"basis_size", c.solver.basis_size},
                 {"dressed_frame", c.solver.dressed_frame}};
  j["stats"] = {{"n_samples", c.bootstrap_samples},
                {"sample_size", c.bootstrap_sample_size},
                {"seed", c.bootstrap_seed}};
  j["calibration"] = {{"delta", c.stark_delta_ghz}};
  j["full_scale"] = c.full_scale;
  return j.dump(2);
}

namespace {

std::string fmt(double x) {
  std::ostringstream ss;
  ss << std::setprecision(17) << x;
  return ss.str();
}

}  // namespace

void write_qnd_curve_csv(const std::string& path, const QndCurve& curve) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write: " + path);
  out << "epsilon_ghz,n_bar,p_g,p_e,p_f,p_h,p_i,p_other,converged_flag\n";
  for (const QndPoint& p : curve.points) {
    double probs[5] = {0, 0, 0, 0, 0};
    for (int q = 0; q < std::min<int>(5, p.probabilities.size()); ++q)
      probs[q] = p.probabilities[q];
    out << fmt(p.epsilon) << ',' << fmt(p.n_bar);
    for (double v : probs) out << ',' << fmt(v);
    out << ',' << fmt(p.p_other) << ',' << (p.converged ? 1 : 0) << '\n';
  }
}

QndCurve read_qnd_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open: " + path);
  QndCurve curve;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    if (vals.size() != 9) throw ConfigError("bad curve row in " + path);
    QndPoint p;
    p.epsilon = vals[0];
    p.n_bar = vals[1];
    p.probabilities.resize(5);
    for (int q = 0; q < 5; ++q) p.probabilities[q] = vals[2 + q];
    p.p_other = vals[7];
    p.converged = vals[8] != 0;
    curve.points.push_back(std::move(p));
  }
  return curve;
}

void write_branch_csv(const std::string& path,
                      const std::vector<Branch>& branches, int n_flux) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write: " + path);
  out << "branch_label,n";
  for (int q = 0; q < n_flux; ++q)
    out << ",p_" << level_label_from_index(q);
  out << ",mean_flux_index\n";
  for (const Branch& b : branches)
    for (const BranchMember& m : b.members) {
      out << level_label_from_index(b.label) << ',' << m.n;
      for (int q = 0; q < n_flux; ++q) out << ',' << fmt(m.flux_probs[q]);
      out << ',' << fmt(m.mean_flux_index) << '\n';
    }
}

std::vector<ShotRecord> read_shots_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open: " + path);
  std::vector<ShotRecord> records;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    if (vals.size() != 5) throw ConfigError("bad shot row in " + path);
    ShotRecord r;
    r.rep_index = static_cast<long>(vals[0]);
    r.init = {vals[1], vals[2]};
    r.fin = {vals[3], vals[4]};
    records.push_back(r);
  }
  if (records.empty()) throw ConfigError("no shots in " + path);
  return records;
}

void write_shots_csv(const std::string& path,
                     const std::vector<ShotRecord>& records) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write: " + path);
  out << "rep_index,i_init,q_init,i_final,q_final\n";
  for (const ShotRecord& r : records)
    out << r.rep_index << ',' << fmt(r.init.i) << ',' << fmt(r.init.q) << ','
        << fmt(r.fin.i) << ',' << fmt(r.fin.q) << '\n';
}

StarkDataset read_stark_csv(const std::string& path, const DeviceParams& dev,
                            double delta_ghz) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open: " + path);
  StarkDataset data;
  data.device = dev;
  data.delta_ghz = delta_ghz;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string a, b;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    data.records.push_back({std::stod(a), std::stod(b)});
  }
  return data;
}

// ---- SHA-256 ----

namespace {

struct Sha256 {
  uint32_t h[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                   0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
  static constexpr uint32_t k[64] = {
      0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
      0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
      0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
      0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
      0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
      0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
      0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
      0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
      0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
      0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
      0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};

  static uint32_t rotr(uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

  void block(const uint8_t* p) {
    uint32_t w[64];
    for (int i = 0; i < 16; ++i)
      w[i] = (uint32_t(p[4 * i]) << 24) | (uint32_t(p[4 * i + 1]) << 16) |
             (uint32_t(p[4 * i + 2]) << 8) | uint32_t(p[4 * i + 3]);
    for (int i = 16; i < 64; ++i) {
      uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
      uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
      w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4], f = h[5],
             g = h[6], hh = h[7];
    for (int i = 0; i < 64; ++i) {
      uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
      uint32_t ch = (e & f) ^ (~e & g);
      uint32_t t1 = hh + s1 + ch + k[i] + w[i];
      uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
      uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
      uint32_t t2 = s0 + maj;
      hh = g; g = f; f = e; e = d + t1;
      d = c; c = b; b = a; a = t1 + t2;
    }
    h[0] += a; h[1] += b; h[2] += c; h[3] += d;
    h[4] += e; h[5] += f; h[6] += g; h[7] += hh;
  }

  std::string digest(const std::string& data) {
    std::string msg = data;
    uint64_t bits = uint64_t(data.size()) * 8;
    msg.push_back(char(0x80));
    while (msg.size() % 64 != 56) msg.push_back('\0');
    for (int i = 7; i >= 0; --i)
      msg.push_back(char((bits >> (8 * i)) & 0xff));
    for (size_t off = 0; off < msg.size(); off += 64)
      block(reinterpret_cast<const uint8_t*>(msg.data() + off));
    std::ostringstream ss;
    for (uint32_t x : h)
      ss << std::hex << std::setw(8) << std::setfill('0') << x;
    return ss.str();
  }
};

constexpr uint32_t Sha256::k[];

}  // namespace

std::string sha256_file(const std::string& path) {
  Sha256 s;
  return s.digest(read_file(path));
}

void write_manifest(const std::string& path, const RunManifest& m) {
  json j;
  j["config"] = json::parse(m.config_json);
  j["code_version"] = m.code_version;
  j["rng_seed"] = m.rng_seed;
  j["total_wall_seconds"] = m.total_wall_seconds;
  j["point_wall_seconds"] = m.point_wall_seconds;
  j["outputs"] = json::array();
  for (const ManifestEntry& e : m.outputs)
    j["outputs"].push_back({{"path", e.path}, {"sha256", e.sha256}});
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace fluxsim
