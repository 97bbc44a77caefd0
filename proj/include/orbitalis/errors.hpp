#pragma once

#include <stdexcept>
#include <string>

namespace orbitalis {

struct NonCommutingData : std::runtime_error {
  explicit NonCommutingData(const std::string& what) : std::runtime_error(what) {}
};

struct UnpairedSpectrum : std::runtime_error {
  explicit UnpairedSpectrum(const std::string& what) : std::runtime_error(what) {}
};

struct SingularCentralizer : std::runtime_error {
  explicit SingularCentralizer(const std::string& what) : std::runtime_error(what) {}
};

struct QuadratureNotConverged : std::runtime_error {
  explicit QuadratureNotConverged(const std::string& what) : std::runtime_error(what) {}
};

struct PreconditionFailed : std::runtime_error {
  explicit PreconditionFailed(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidRepresentation : std::runtime_error {
  explicit InvalidRepresentation(const std::string& what) : std::runtime_error(what) {}
};

struct SingularInput : std::runtime_error {
  explicit SingularInput(const std::string& what) : std::runtime_error(what) {}
};

struct AcyclicityViolated : std::runtime_error {
  explicit AcyclicityViolated(const std::string& what) : std::runtime_error(what) {}
};

struct DivergentRegion : std::runtime_error {
  explicit DivergentRegion(const std::string& what) : std::runtime_error(what) {}
};

struct UnsupportedModel : std::runtime_error {
  explicit UnsupportedModel(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidModel : std::runtime_error {
  explicit InvalidModel(const std::string& what) : std::runtime_error(what) {}
};

struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace orbitalis
