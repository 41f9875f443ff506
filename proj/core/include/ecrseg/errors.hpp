#ifndef ECRSEG_ERRORS_HPP
#define ECRSEG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ecrseg {

/// Root of every toolkit failure.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// volume / file I/O
struct MalformedHeader : Error { using Error::Error; };
struct UnsupportedEncoding : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct IoFailure : Error { using Error::Error; };
struct RegionOutOfBounds : Error { using Error::Error; };
struct EmptyMask : Error { using Error::Error; };
struct GeometryMismatch : Error { using Error::Error; };

// texture
struct DegenerateRange : Error { using Error::Error; };
struct CenterOutsideMask : Error { using Error::Error; };
struct MissingFeatureMap : Error { using Error::Error; };

// svm
struct TooFewSamples : Error { using Error::Error; };
struct SingleClass : Error { using Error::Error; };
struct NonFiniteFeature : Error { using Error::Error; };

// evaluation / stratify / phantom / cli
struct InsufficientPatients : Error { using Error::Error; };
struct SpecInvalid : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

/// Pipeline failure carrying the stage it happened in.
struct StageError : Error {
  std::string stage;
  StageError(std::string stage_, const std::string& what_)
      : Error("[" + stage_ + "] " + what_), stage(std::move(stage_)) {}
};

}  // namespace ecrseg

#endif
