#pragma once

#include <stdexcept>
#include <string>

namespace sdqc {

// Error identities used across the toolkit. Tests match on the code, not on
// message text.
enum class ErrorCode {
  // conversation model
  NoRoot,
  MultipleRoots,
  OrphanReply,
  CycleDetected,
  UnknownId,
  IllegalCombination,
  // features / embeddings
  EmptyCorpus,
  MalformedLine,
  InconsistentDimension,
  LexiconMissing,
  // crf engine
  DimensionMismatch,
  NotATree,
  MissingGoldLabel,
  NonFiniteObjective,
  EmptyInput,
  // baselines
  EmptyTrainingSet,
  UnknownLabel,
  MissingTweetId,
  // evaluation
  LengthMismatch,
  MissingPrediction,
  EmptyMatrix,
  // harness
  SchemaViolation,
  LabelConflict,
  InvalidSpec,
  DatasetMismatch,
  IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sdqc
