#pragma once

#include <stdexcept>
#include <string>

namespace rerc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define RERC_DEFINE_ERROR(Name)          \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  };

RERC_DEFINE_ERROR(FileNotFound)
RERC_DEFINE_ERROR(InvariantViolation)
RERC_DEFINE_ERROR(DimensionMismatch)
RERC_DEFINE_ERROR(ExtractionFailed)
RERC_DEFINE_ERROR(RemoteError)
RERC_DEFINE_ERROR(ArityMismatch)
RERC_DEFINE_ERROR(NoAnswer)
RERC_DEFINE_ERROR(EmptyTree)
RERC_DEFINE_ERROR(IncomparableKinds)
RERC_DEFINE_ERROR(UnknownPolarity)
RERC_DEFINE_ERROR(AmbiguousPrecision)
RERC_DEFINE_ERROR(ConfigError)

#undef RERC_DEFINE_ERROR

// Malformed record in a dataset file. Carries the offending record id and field.
class SchemaError : public Error {
 public:
  SchemaError(std::string record_id, std::string field, const std::string& what)
      : Error("schema error in record '" + record_id + "', field '" + field + "': " + what),
        record_id_(std::move(record_id)),
        field_(std::move(field)) {}

  const std::string& record_id() const noexcept { return record_id_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string record_id_;
  std::string field_;
};

}  // namespace rerc
