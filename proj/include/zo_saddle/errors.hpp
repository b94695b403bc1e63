#pragma once

#include <stdexcept>
#include <string>

namespace zo_saddle {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ZO_SADDLE_DEFINE_ERROR(Name)        \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

ZO_SADDLE_DEFINE_ERROR(InvalidArgument);
ZO_SADDLE_DEFINE_ERROR(DomainViolation);
ZO_SADDLE_DEFINE_ERROR(NumericalOverflow);
ZO_SADDLE_DEFINE_ERROR(UnboundedDomain);
ZO_SADDLE_DEFINE_ERROR(DimensionMismatch);
ZO_SADDLE_DEFINE_ERROR(NoGapOracle);
ZO_SADDLE_DEFINE_ERROR(ConfigError);
ZO_SADDLE_DEFINE_ERROR(GrowthSpecMissing);
ZO_SADDLE_DEFINE_ERROR(DegenerateSeries);
ZO_SADDLE_DEFINE_ERROR(SeriesTooShort);

#undef ZO_SADDLE_DEFINE_ERROR

namespace detail {

template <class E>
inline void require(bool cond, const std::string& what) {
  if (!cond) throw E(what);
}

}  // namespace detail
}  // namespace zo_saddle
