#pragma once

// JSON file formats (format-version 1). Complex entries are [re, im] pairs.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "gme/bisep.hpp"
#include "gme/pauli.hpp"
#include "gme/states.hpp"
#include "gme/witness.hpp"

namespace gme {

inline constexpr int kFormatVersion = 1;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StateFile {
  DensityMatrix state;
  std::map<std::string, std::string> metadata;
};

struct WitnessFile {
  int n = 0;
  WitnessMode mode = WitnessMode::FullyDecomposable;
  PauliSum expansion;
  std::optional<WitnessCertificate> certificate;
  /// Solver settings, seed and anything else worth recording.
  std::map<std::string, std::string> provenance;
  std::optional<double> value;
};

std::string state_to_json(const StateFile& f);
StateFile state_from_json(const std::string& text);
StateFile read_state_file(const std::string& path);
void write_state_file(const std::string& path, const StateFile& f);

/// Builds the file for a detection result; the expansion keeps |c| > 1e-14.
WitnessFile make_witness_file(const DetectionResult& r, const SdpSettings& sdp,
                              std::map<std::string, std::string> extra = {});
WitnessFile make_witness_file(const HermitianOperator& w, WitnessMode mode,
                              std::map<std::string, std::string> provenance = {});
std::string witness_to_json(const WitnessFile& f);
/// Throws FormatError when the expansion and the certificate's W disagree by more than 1e-9.
WitnessFile witness_from_json(const std::string& text);
WitnessFile read_witness_file(const std::string& path);
void write_witness_file(const std::string& path, const WitnessFile& f);

/// Either {"observables": [labels]} or {"settings": [labels], "permutations": bool, "closure": bool}.
ObservableBasis observables_from_json(const std::string& text);
ObservableBasis read_observables_file(const std::string& path);
std::string observables_to_json(const ObservableBasis& b);

std::string decomposition_to_json(const BisepDecomposition& d);
BisepDecomposition decomposition_from_json(const std::string& text);
void write_decomposition_file(const std::string& path, const BisepDecomposition& d);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

std::map<std::string, std::string> describe(const SdpSettings& s);

}  // namespace gme
