#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lorentz {

enum class Errc {
  SizeBoundViolation,
  DegenerateLeg,
  NotRealizable,
  PreconditionViolation,
  DimensionMismatch,
  ShapeViolation,
  NotChronological,
  NotTimelike,
  OffsetOutOfRange,
  NotCausallyRelated,
  InfiniteTau,
  UnknownBuiltin,
  BadParams,
  MalformedInput,
  ParseError,
  NoGeodesicCapability,
  NotUniquelyGeodesic,
  OutOfDomain,
  EmptyDomain,
  MixedOrientation,
  NoProlongation,
  NoSamplerCapability,
  EmptyGrid,
  AngleNotConverged,
};

constexpr std::string_view to_string(Errc e) {
  switch (e) {
    case Errc::SizeBoundViolation: return "SizeBoundViolation";
    case Errc::DegenerateLeg: return "DegenerateLeg";
    case Errc::NotRealizable: return "NotRealizable";
    case Errc::PreconditionViolation: return "PreconditionViolation";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::ShapeViolation: return "ShapeViolation";
    case Errc::NotChronological: return "NotChronological";
    case Errc::NotTimelike: return "NotTimelike";
    case Errc::OffsetOutOfRange: return "OffsetOutOfRange";
    case Errc::NotCausallyRelated: return "NotCausallyRelated";
    case Errc::InfiniteTau: return "InfiniteTau";
    case Errc::UnknownBuiltin: return "UnknownBuiltin";
    case Errc::BadParams: return "BadParams";
    case Errc::MalformedInput: return "MalformedInput";
    case Errc::ParseError: return "ParseError";
    case Errc::NoGeodesicCapability: return "NoGeodesicCapability";
    case Errc::NotUniquelyGeodesic: return "NotUniquelyGeodesic";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::EmptyDomain: return "EmptyDomain";
    case Errc::MixedOrientation: return "MixedOrientation";
    case Errc::NoProlongation: return "NoProlongation";
    case Errc::NoSamplerCapability: return "NoSamplerCapability";
    case Errc::EmptyGrid: return "EmptyGrid";
    case Errc::AngleNotConverged: return "AngleNotConverged";
  }
  return "Unknown";
}

/// Exception carrying one of the error kinds above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace lorentz
