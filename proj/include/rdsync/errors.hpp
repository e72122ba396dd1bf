#pragma once

#include <stdexcept>
#include <string>

namespace rdsync {

// Base class for everything that is wrong with a user-supplied chain or RDS
// spec. The CLI maps SpecError to exit code 2.
class SpecError : public std::runtime_error {
 public:
  SpecError(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Numerical or structural check that failed at run time (exit code 3).
class CheckError : public std::runtime_error {
 public:
  CheckError(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

struct RowSumError : SpecError {
  explicit RowSumError(const std::string& what) : SpecError("RowSumError", what) {}
};
struct UnknownState : SpecError {
  explicit UnknownState(const std::string& what) : SpecError("UnknownState", what) {}
};
struct DuplicateEdge : SpecError {
  explicit DuplicateEdge(const std::string& what) : SpecError("DuplicateEdge", what) {}
};
struct NotIrreducible : SpecError {
  explicit NotIrreducible(const std::string& what) : SpecError("NotIrreducible", what) {}
};
struct MarginalMismatch : SpecError {
  explicit MarginalMismatch(const std::string& what) : SpecError("MarginalMismatch", what) {}
};
struct StateSpaceTooLarge : SpecError {
  explicit StateSpaceTooLarge(const std::string& what) : SpecError("StateSpaceTooLarge", what) {}
};

struct SingularSystem : CheckError {
  explicit SingularSystem(const std::string& what) : CheckError("SingularSystem", what) {}
};
struct NoConvergence : CheckError {
  explicit NoConvergence(const std::string& what) : CheckError("NoConvergence", what) {}
};
struct MixedCardinality : CheckError {
  explicit MixedCardinality(const std::string& what) : CheckError("MixedCardinality", what) {}
};
struct NotSynchronizing : CheckError {
  explicit NotSynchronizing(const std::string& what) : CheckError("NotSynchronizing", what) {}
};
struct HorizonExceeded : CheckError {
  explicit HorizonExceeded(const std::string& what) : CheckError("HorizonExceeded", what) {}
};
struct HorizonOverflow : CheckError {
  explicit HorizonOverflow(const std::string& what) : CheckError("HorizonOverflow", what) {}
};
struct TimeOverflow : CheckError {
  explicit TimeOverflow(const std::string& what) : CheckError("TimeOverflow", what) {}
};

}  // namespace rdsync
