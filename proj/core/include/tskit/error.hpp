#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tskit {

enum class ErrorCode {
  // netlist_parser
  SyntaxError,
  UnknownPinDirection,
  UnsupportedConstruct,
  UnknownNet,
  DuplicateInstance,
  MultipleModules,
  MalformedProfile,
  MalformedNetlist,
  // graph_builder
  EmptyDesign,
  DuplicateDesign,
  LabelFileMismatch,
  MalformedSchema,
  MalformedDataset,
  // saint_sampler / sage_model / trainer
  NoTrainNodes,
  NoValidationNodes,
  DimensionMismatch,
  SchemaMismatch,
  NonFiniteLoss,
  DivergedLoss,
  InvalidConfig,
  MalformedCheckpoint,
  // eval_harness
  MissingLabel,
  InsufficientDesigns,
  NoTrainDesigns,
  UnknownDesign,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures are reported through this exception type; `code()`
// identifies the failure class and `line()` is nonzero for source-located
// parse errors.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0);

  ErrorCode code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::size_t line_;
};

}  // namespace tskit
