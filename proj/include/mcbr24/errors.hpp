#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mcbr {

// Base for every error a module can raise. The CLI maps these to exit status 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MCBR_DEFINE_ERROR(Name)          \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

// math24_domain
MCBR_DEFINE_ERROR(InvalidPuzzle);
MCBR_DEFINE_ERROR(ExprParseError);

// card_codec
MCBR_DEFINE_ERROR(NoGlyphMatch);
MCBR_DEFINE_ERROR(ImageFormatError);

// feature_latent
MCBR_DEFINE_ERROR(NonFiniteLoss);
MCBR_DEFINE_ERROR(CheckpointError);

// case_repository
MCBR_DEFINE_ERROR(RecognitionMismatch);
MCBR_DEFINE_ERROR(DuplicateId);
MCBR_DEFINE_ERROR(UnsolvedCase);
MCBR_DEFINE_ERROR(MissingImageFile);

// retrieval
MCBR_DEFINE_ERROR(ZeroVector);
MCBR_DEFINE_ERROR(WeightSumViolation);
MCBR_DEFINE_ERROR(IndexMissing);

// query_generation
MCBR_DEFINE_ERROR(MissingRetrievedCase);
MCBR_DEFINE_ERROR(ProviderUnavailable);

// cli / config
MCBR_DEFINE_ERROR(ConfigError);

#undef MCBR_DEFINE_ERROR

class MalformedRecord : public Error {
 public:
  MalformedRecord(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace mcbr
