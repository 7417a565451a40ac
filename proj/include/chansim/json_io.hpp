#pragma once

// JSON artifacts. Complex numbers are [re, im]; matrices are arrays of rows.
// Every loader re-validates the invariants of the type it builds.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "chansim/blocks.hpp"
#include "chansim/channel.hpp"
#include "chansim/circuit.hpp"
#include "chansim/decomposer.hpp"
#include "chansim/extreme.hpp"
#include "chansim/qutrit_reference.hpp"
#include "chansim/sampler.hpp"

namespace chansim {

using Json = nlohmann::ordered_json;

/// Malformed or invalid artifact contents.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable or unwritable file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

Json channel_to_json(const KrausChannel& ch);
KrausChannel channel_from_json(const Json& j);

Json choi_to_json(const ChoiState& c);
ChoiState choi_from_json(const Json& j);

/// Accepts either {"kraus": ...} or {"choi": ...} / {"matrix": ...}.
ChoiState target_from_json(const Json& j);

Json extreme_params_to_json(const ExtremeParams& p);
ExtremeParams extreme_params_from_json(const Json& j);

Json decomposition_to_json(const DecompositionResult& r, const OptimizerConfig& cfg);
Json decomposition_params_to_json(const DecompositionParams& p);
DecompositionParams decomposition_params_from_json(const Json& j);

Json reference_mixture_to_json(const ReferenceMixture& m);
ReferenceMixture reference_mixture_from_json(const Json& j);

/// Either decomposition format, reduced to weighted component Choi states.
struct MixtureSpec {
  int dim = 0;
  std::vector<double> probabilities;
  std::vector<ChoiState> components;
  std::optional<DecompositionParams> params;  // set for the ansatz format
};
MixtureSpec mixture_from_json(const Json& j);

Json circuit_to_json(const CircuitDescription& c);
CircuitDescription circuit_from_json(const Json& j);
Json census_to_json(const GateCensus& c);

struct CircuitBundle {
  int dim = 0;
  std::vector<double> probabilities;
  std::vector<CircuitDescription> circuits;
};
Json bundle_to_json(const CircuitBundle& b, double epsilon);
CircuitBundle bundle_from_json(const Json& j);

Json certificate_to_json(const GenExtCertificate& c);
Json extremality_to_json(const ExtremalityReport& r);
Json report_to_json(const DecompositionReport& r);
Json sample_report_to_json(const SampleReport& r, std::uint64_t seed);

/// Reads and parses a file; IoError if unreadable, FormatError if not JSON.
Json read_json_file(const std::string& path);

/// Writes `j` with two-space indentation and a trailing newline; IoError on failure.
void write_json_file(const std::string& path, const Json& j);

}  // namespace chansim
