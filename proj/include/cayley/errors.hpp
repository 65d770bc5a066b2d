#pragma once

#include <stdexcept>
#include <string>

namespace cayley {

// Error taxonomy shared by all modules. Everything derives from Error so
// callers (and the CLI) can catch one base type when they do not care which
// stage failed.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NotHermitian : Error {
  explicit NotHermitian(const std::string& what) : Error(what) {}
};
struct NoConvergence : Error {
  explicit NoConvergence(const std::string& what) : Error(what) {}
};
struct PhaseAtBranchPoint : Error {
  explicit PhaseAtBranchPoint(const std::string& what) : Error(what) {}
};
struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& what) : Error(what) {}
};
struct TooLarge : Error {
  explicit TooLarge(const std::string& what) : Error(what) {}
};
struct PoleProximity : Error {
  explicit PoleProximity(const std::string& what) : Error(what) {}
};
struct DegenerateSystem : Error {
  explicit DegenerateSystem(const std::string& what) : Error(what) {}
};
struct DuplicateNodes : Error {
  explicit DuplicateNodes(const std::string& what) : Error(what) {}
};
struct TooManyErrors : Error {
  explicit TooManyErrors(const std::string& what) : Error(what) {}
};
struct DecodeFailed : Error {
  explicit DecodeFailed(const std::string& what) : Error(what) {}
};
struct PrecisionInsufficient : Error {
  explicit PrecisionInsufficient(const std::string& what) : Error(what) {}
};
struct UnsupportedDimension : Error {
  explicit UnsupportedDimension(const std::string& what) : Error(what) {}
};
struct SchemaError : Error {
  explicit SchemaError(const std::string& what) : Error(what) {}
};

}  // namespace cayley
