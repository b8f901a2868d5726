#pragma once

#include <stdexcept>
#include <string>

namespace srvol {

// Base of every error raised by the library. The category drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  enum class Category { Input, Certification, Budget, Numerical };

  Error(Category category, std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), category_(category), kind_(std::move(kind)) {}

  Category category() const { return category_; }
  const std::string& kind() const { return kind_; }

 private:
  Category category_;
  std::string kind_;
};

struct InputError : Error {
  InputError(std::string kind, const std::string& what) : Error(Category::Input, std::move(kind), what) {}
};

struct SyntaxError : InputError {
  explicit SyntaxError(const std::string& what) : InputError("SyntaxError", what) {}
};
struct UnknownVariable : InputError {
  explicit UnknownVariable(const std::string& what) : InputError("UnknownVariable", what) {}
};
struct DimensionMismatch : InputError {
  explicit DimensionMismatch(const std::string& what) : InputError("DimensionMismatch", what) {}
};
struct IndexOutOfRange : InputError {
  explicit IndexOutOfRange(const std::string& what) : InputError("IndexOutOfRange", what) {}
};
struct UnsupportedStratumShape : InputError {
  explicit UnsupportedStratumShape(const std::string& what) : InputError("UnsupportedStratumShape", what) {}
};
struct IdenticallyZero : InputError {
  explicit IdenticallyZero(const std::string& what) : InputError("IdenticallyZero", what) {}
};

struct CertificationError : Error {
  CertificationError(std::string kind, const std::string& what)
      : Error(Category::Certification, std::move(kind), what) {}
};

struct NotBracketGeneratingAtDepth : CertificationError {
  NotBracketGeneratingAtDepth(int depth, const std::string& where)
      : CertificationError("NotBracketGeneratingAtDepth",
                           "flag does not reach full rank by depth " + std::to_string(depth) + " at " + where),
        depth(depth) {}
  int depth;
};
struct NoRegularPointFound : CertificationError {
  explicit NoRegularPointFound(const std::string& what) : CertificationError("NoRegularPointFound", what) {}
};
struct ImmersionFailure : CertificationError {
  explicit ImmersionFailure(const std::string& what) : CertificationError("ImmersionFailure", what) {}
};
struct PrivilegedCertificationFailed : CertificationError {
  explicit PrivilegedCertificationFailed(const std::string& what)
      : CertificationError("PrivilegedCertificationFailed", what) {}
};
struct CannotRealizeRestrictedFlag : CertificationError {
  explicit CannotRealizeRestrictedFlag(const std::string& what)
      : CertificationError("CannotRealizeRestrictedFlag", what) {}
};

struct CombinatorialBudgetExceeded : Error {
  explicit CombinatorialBudgetExceeded(const std::string& what)
      : Error(Category::Budget, "CombinatorialBudgetExceeded", what) {}
};

struct NumericalError : Error {
  NumericalError(std::string kind, const std::string& what) : Error(Category::Numerical, std::move(kind), what) {}
};
struct ChartInversionFailed : NumericalError {
  explicit ChartInversionFailed(const std::string& what) : NumericalError("ChartInversionFailed", what) {}
};
struct DegenerateFit : NumericalError {
  explicit DegenerateFit(const std::string& what) : NumericalError("DegenerateFit", what) {}
};

}  // namespace srvol
