#include "tskit/error.hpp"

namespace tskit {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownPinDirection: return "UnknownPinDirection";
    case ErrorCode::UnsupportedConstruct: return "UnsupportedConstruct";
    case ErrorCode::UnknownNet: return "UnknownNet";
    case ErrorCode::DuplicateInstance: return "DuplicateInstance";
    case ErrorCode::MultipleModules: return "MultipleModules";
    case ErrorCode::MalformedProfile: return "MalformedProfile";
    case ErrorCode::MalformedNetlist: return "MalformedNetlist";
    case ErrorCode::EmptyDesign: return "EmptyDesign";
    case ErrorCode::DuplicateDesign: return "DuplicateDesign";
    case ErrorCode::LabelFileMismatch: return "LabelFileMismatch";
    case ErrorCode::MalformedSchema: return "MalformedSchema";
    case ErrorCode::MalformedDataset: return "MalformedDataset";
    case ErrorCode::NoTrainNodes: return "NoTrainNodes";
    case ErrorCode::NoValidationNodes: return "NoValidationNodes";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::DivergedLoss: return "DivergedLoss";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::MalformedCheckpoint: return "MalformedCheckpoint";
    case ErrorCode::MissingLabel: return "MissingLabel";
    case ErrorCode::InsufficientDesigns: return "InsufficientDesigns";
    case ErrorCode::NoTrainDesigns: return "NoTrainDesigns";
    case ErrorCode::UnknownDesign: return "UnknownDesign";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message, std::size_t line) {
  std::string out(to_string(code));
  if (line != 0) out += " (line " + std::to_string(line) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::size_t line)
    : std::runtime_error(decorate(code, message, line)), code_(code), line_(line) {}

}  // namespace tskit
