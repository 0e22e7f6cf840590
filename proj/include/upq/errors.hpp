#pragma once

#include <stdexcept>
#include <string>

namespace upq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define UPQ_DEFINE_ERROR(Name)                                                 \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {}       \
  }

UPQ_DEFINE_ERROR(NotPositiveDefinite);
UPQ_DEFINE_ERROR(NotHermitian);
UPQ_DEFINE_ERROR(NotSkewHermitian);
UPQ_DEFINE_ERROR(DimensionMismatch);
UPQ_DEFINE_ERROR(SignatureMismatch);
UPQ_DEFINE_ERROR(DecompositionFailed);
UPQ_DEFINE_ERROR(InvalidInput);
UPQ_DEFINE_ERROR(NonFinite);
UPQ_DEFINE_ERROR(QuadratureUnstable);
UPQ_DEFINE_ERROR(WindowTooLarge);
UPQ_DEFINE_ERROR(VariantMismatch);
UPQ_DEFINE_ERROR(ConfigInvalid);
UPQ_DEFINE_ERROR(SuiteFailed);

#undef UPQ_DEFINE_ERROR

} // namespace upq
