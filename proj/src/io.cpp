#include "gme/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gme {

using nlohmann::json;

namespace {

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j, std::size_t dim, const std::string& what) {
  if (!j.is_array() || j.size() != dim) throw FormatError(what + ": expected " + std::to_string(dim) + " rows");
  ComplexMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const json& row = j[i];
    if (!row.is_array() || row.size() != dim)
      throw FormatError(what + ": row " + std::to_string(i) + " must have " + std::to_string(dim) + " entries");
    for (std::size_t k = 0; k < dim; ++k) {
      const json& e = row[k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw FormatError(what + ": entry (" + std::to_string(i) + ", " + std::to_string(k) + ") is not a [re, im] pair");
      m(i, k) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

void check_version(const json& j) {
  if (!j.is_object()) throw FormatError("top level must be a JSON object");
  if (!j.contains("format-version")) throw FormatError("missing format-version");
  if (!j["format-version"].is_number_integer() || j["format-version"].get<int>() != kFormatVersion)
    throw FormatError("unsupported format-version (expected " + std::to_string(kFormatVersion) + ")");
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid field: ") + e.what());
  }
}

std::vector<int> dims_of(const json& j) {
  if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].empty()) throw FormatError("missing or empty dims");
  std::vector<int> dims;
  for (const auto& d : j["dims"]) {
    if (!d.is_number_integer() || d.get<int>() < 2) throw FormatError("dims entries must be integers >= 2");
    dims.push_back(d.get<int>());
  }
  return dims;
}

std::size_t product(const std::vector<int>& dims) {
  std::size_t p = 1;
  for (int d : dims) p *= static_cast<std::size_t>(d);
  return p;
}

json state_object(const DensityMatrix& rho, const std::map<std::string, std::string>& metadata) {
  json j;
  j["format-version"] = kFormatVersion;
  j["dims"] = rho.op().dims();
  j["matrix"] = matrix_to_json(rho.matrix());
  j["metadata"] = metadata;
  return j;
}

StateFile state_from_object(const json& j) {
  check_version(j);
  return guarded([&] {
    const std::vector<int> dims = dims_of(j);
    if (!j.contains("matrix")) throw FormatError("missing matrix");
    ComplexMatrix m = matrix_from_json(j["matrix"], product(dims), "matrix");
    StateFile f;
    try {
      f.state = DensityMatrix(HermitianOperator(dims, std::move(m)));
    } catch (const std::invalid_argument& e) {
      throw FormatError(std::string("not a density matrix: ") + e.what());
    }
    if (j.contains("metadata")) {
      if (!j["metadata"].is_object()) throw FormatError("metadata must be an object");
      for (const auto& [k, v] : j["metadata"].items()) f.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
    return f;
  });
}

std::vector<int> members_from_json(const json& j) {
  if (!j.is_array()) throw FormatError("bipartition must be a list of qubit indices");
  std::vector<int> out;
  for (const auto& x : j) out.push_back(x.get<int>());
  return out;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << text;
  if (!out) throw FormatError("write to '" + path + "' failed");
}

std::string state_to_json(const StateFile& f) { return state_object(f.state, f.metadata).dump(1) + "\n"; }

StateFile state_from_json(const std::string& text) { return state_from_object(parse(text)); }

StateFile read_state_file(const std::string& path) { return state_from_json(read_text_file(path)); }

void write_state_file(const std::string& path, const StateFile& f) { write_text_file(path, state_to_json(f)); }

std::map<std::string, std::string> describe(const SdpSettings& s) {
  auto num = [](double x) {
    std::ostringstream ss;
    ss << x;
    return ss.str();
  };
  return {{"gap-tolerance", num(s.gap_tolerance)},
          {"feasibility-tolerance", num(s.feasibility_tolerance)},
          {"max-iterations", std::to_string(s.max_iterations)},
          {"presolve", s.presolve ? "true" : "false"},
          {"kernels", s.reference_kernels ? "serial" : "openmp"}};
}

WitnessFile make_witness_file(const HermitianOperator& w, WitnessMode mode, std::map<std::string, std::string> provenance) {
  if (!w.all_qubits()) throw DimensionError("witness files hold qubit operators only");
  WitnessFile f;
  f.n = w.parties();
  f.mode = mode;
  f.expansion = pauli_expansion(w, 1e-14);
  f.provenance = std::move(provenance);
  return f;
}

WitnessFile make_witness_file(const DetectionResult& r, const SdpSettings& sdp, std::map<std::string, std::string> extra) {
  auto prov = describe(sdp);
  prov["arithmetic"] = r.real_arithmetic ? "real" : "complex";
  prov["iterations"] = std::to_string(r.iterations);
  for (auto& [k, v] : extra) prov[k] = v;
  WitnessFile f = make_witness_file(r.certificate.w, r.certificate.mode, std::move(prov));
  f.certificate = r.certificate;
  f.value = r.value;
  return f;
}

std::string witness_to_json(const WitnessFile& f) {
  json j;
  j["format-version"] = kFormatVersion;
  j["n"] = f.n;
  j["mode"] = to_string(f.mode);
  json terms = json::array();
  for (const auto& [label, c] : f.expansion.terms()) terms.push_back({label, c});
  j["pauli-expansion"] = std::move(terms);
  if (f.value) j["value"] = *f.value;
  if (f.certificate) {
    json c;
    c["w"] = matrix_to_json(f.certificate->w.matrix());
    json blocks = json::array();
    for (const auto& b : f.certificate->blocks)
      blocks.push_back({{"m", b.m.members()}, {"p", matrix_to_json(b.p.matrix())}, {"q", matrix_to_json(b.q.matrix())}});
    c["blocks"] = std::move(blocks);
    c["observables"] = f.certificate->observables;
    j["certificate"] = std::move(c);
  }
  j["provenance"] = f.provenance;
  return j.dump(1) + "\n";
}

WitnessFile witness_from_json(const std::string& text) {
  const json j = parse(text);
  check_version(j);
  return guarded([&] {
    WitnessFile f;
    f.n = j.at("n").get<int>();
    if (f.n < 1 || f.n > 12) throw FormatError("n must lie in [1, 12]");
    try {
      f.mode = parse_witness_mode(j.at("mode").get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
    f.expansion = PauliSum(f.n);
    for (const auto& t : j.at("pauli-expansion")) {
      if (!t.is_array() || t.size() != 2) throw FormatError("pauli-expansion entries must be [letters, coefficient]");
      const auto label = t[0].get<std::string>();
      PauliString s;
      try {
        s = PauliString::parse(label);
      } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
      }
      if (s.qubits() != f.n) throw FormatError("Pauli string '" + label + "' has the wrong length");
      f.expansion.add(s.label(), t[1].get<double>());
    }
    if (j.contains("value")) f.value = j["value"].get<double>();
    if (j.contains("provenance"))
      for (const auto& [k, v] : j["provenance"].items()) f.provenance[k] = v.is_string() ? v.get<std::string>() : v.dump();
    if (j.contains("certificate")) {
      const json& c = j["certificate"];
      const std::size_t d = std::size_t{1} << f.n;
      const std::vector<int> dims(static_cast<std::size_t>(f.n), 2);
      WitnessCertificate cert;
      cert.mode = f.mode;
      cert.w = HermitianOperator(dims, matrix_from_json(c.at("w"), d, "certificate w"));
      for (const auto& b : c.at("blocks")) {
        cert.blocks.push_back({Bipartition(f.n, members_from_json(b.at("m"))),
                               HermitianOperator(dims, matrix_from_json(b.at("p"), d, "block p")),
                               HermitianOperator(dims, matrix_from_json(b.at("q"), d, "block q"))});
      }
      if (c.contains("observables")) cert.observables = c["observables"].get<std::vector<std::string>>();
      const double diff = max_abs_diff(f.expansion.matrix(), cert.w.matrix());
      if (diff > 1e-9)
        throw FormatError("pauli-expansion and certificate disagree (max difference " + std::to_string(diff) + ")");
      f.certificate = std::move(cert);
    }
    return f;
  });
}

WitnessFile read_witness_file(const std::string& path) { return witness_from_json(read_text_file(path)); }

void write_witness_file(const std::string& path, const WitnessFile& f) { write_text_file(path, witness_to_json(f)); }

ObservableBasis observables_from_json(const std::string& text) {
  const json j = parse(text);
  check_version(j);
  return guarded([&] {
    auto strings = [](const json& arr) {
      std::vector<PauliString> out;
      for (const auto& s : arr) {
        try {
          out.push_back(PauliString::parse(s.get<std::string>()));
        } catch (const std::invalid_argument& e) {
          throw FormatError(e.what());
        }
      }
      return out;
    };
    try {
      if (j.contains("observables")) return ObservableBasis(strings(j["observables"]));
      if (j.contains("settings"))
        return ObservableBasis::expand(strings(j["settings"]), j.value("permutations", false), j.value("closure", false));
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
    throw FormatError("observables file needs an 'observables' or 'settings' list");
  });
}

ObservableBasis read_observables_file(const std::string& path) { return observables_from_json(read_text_file(path)); }

std::string observables_to_json(const ObservableBasis& b) {
  json j;
  j["format-version"] = kFormatVersion;
  j["observables"] = b.labels();
  return j.dump(1) + "\n";
}

std::string decomposition_to_json(const BisepDecomposition& d) {
  json j;
  j["format-version"] = kFormatVersion;
  j["target"] = state_object(d.target, {});
  json parts = json::array();
  for (const auto& p : d.parts)
    parts.push_back({{"m", p.m.members()}, {"weight", p.weight}, {"state", state_object(p.state, {})}});
  j["parts"] = std::move(parts);
  return j.dump(1) + "\n";
}

BisepDecomposition decomposition_from_json(const std::string& text) {
  const json j = parse(text);
  check_version(j);
  return guarded([&] {
    BisepDecomposition d{{}, state_from_object(j.at("target")).state};
    for (const auto& p : j.at("parts")) {
      const DensityMatrix s = state_from_object(p.at("state")).state;
      d.parts.push_back({Bipartition(s.parties(), members_from_json(p.at("m"))), p.at("weight").get<double>(), s});
    }
    return d;
  });
}

void write_decomposition_file(const std::string& path, const BisepDecomposition& d) {
  write_text_file(path, decomposition_to_json(d));
}

}  // namespace gme
