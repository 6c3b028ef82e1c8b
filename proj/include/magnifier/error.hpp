#pragma once

#include <stdexcept>
#include <string>

namespace magnifier {

enum class ErrorCode {
  kInvalidArgument,
  kEmpty,               // quantile of an empty multiset
  kAbsent,              // value not present in a multiset
  kAbsentKey,           // oracle has no such key
  kNoQueries,           // nothing to average over
  kInsufficientData,    // estimator never saw a finite value
  kDegenerateEstimate,  // estimator holds only sentinels
  kNotTracked,          // key has no cell in the value sketch
  kInfeasibleLayout,
  kParse,
  kIo,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace magnifier
