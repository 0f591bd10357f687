#pragma once

#include <stdexcept>
#include <string>

namespace qfm {

enum class ErrorCode {
  InvalidArgument,
  MalformedGene,
  MalformedChromosome,
  Encoding,
  Simulation,
  Dimension,
  DegenerateProblem,
  Partition,
  Parse,
  Config,
  Io,
};

/// Exception carrying a coarse error category alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qfm
