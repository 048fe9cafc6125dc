#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace lz {

// Exit-code classes shared by the CLI and the C API.
enum class errc : int {
  ok = 0,
  config = 2,
  numeric = 3,
  invalid = 4,
  unsupported = 5,
};

class Error : public std::runtime_error {
 public:
  Error(errc c, const std::string& msg) : std::runtime_error(msg), code_(c) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& m) : Error(errc::config, m) {}
};
struct InvalidInput : Error {
  explicit InvalidInput(const std::string& m) : Error(errc::invalid, m) {}
};
struct Unsupported : Error {
  explicit Unsupported(const std::string& m) : Error(errc::unsupported, m) {}
};
struct SingularMetric : Error {
  explicit SingularMetric(const std::string& m) : Error(errc::numeric, m) {}
};
struct GeodesicFailure : Error {
  explicit GeodesicFailure(const std::string& m) : Error(errc::numeric, m) {}
};
struct IntegrationFailure : Error {
  explicit IntegrationFailure(const std::string& m) : Error(errc::numeric, m) {}
};
struct ClassificationFailure : Error {
  explicit ClassificationFailure(const std::string& m) : Error(errc::numeric, m) {}
};
struct ContourFailure : Error {
  explicit ContourFailure(const std::string& m) : Error(errc::numeric, m) {}
};
struct PoleProximity : Error {
  explicit PoleProximity(const std::string& m) : Error(errc::numeric, m) {}
};
struct TruncationError : Error {
  TruncationError(const std::string& m, double bound)
      : Error(errc::numeric, m), bound(bound) {}
  double bound;
};

// Solver breakdown near an eigenvalue of the shifted system.
struct NearSpectrum : Error {
  NearSpectrum(std::complex<double> z, double estimate)
      : Error(errc::numeric, "shift too close to spectrum"), z(z), estimate(estimate) {}
  std::complex<double> z;
  double estimate;
};

}  // namespace lz
