// Copyright 2026 The Authsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AUTHSIM_COMMON_STATUS_H_
#define AUTHSIM_COMMON_STATUS_H_

#include <optional>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace authsim {

// Domain error kinds. Every failing operation in the library returns an
// absl::Status carrying one of these as a payload so callers (and the event
// log) can distinguish e.g. a replayed nonce from a bad signature without
// string matching.
enum class ErrorCode {
  kSchemaError,
  kNormalizationError,
  kGateLocked,
  kGateLockout,
  kNoCredential,
  kNotFound,
  kIntegrityError,
  kUnknownClient,
  kReplayDetected,
  kConsentDenied,
  kAuthenticationFailed,
  kAudienceMismatch,
  kCsrfRejected,
  kExpired,
  kAlreadyClaimed,
  kPseudonymReused,
  kInvalidGrant,
  kAttributeNotVerified,
  kTokenSpent,
  kNoSuchAttribute,
  kNoCoveringToken,
  kTentativeAccessDenied,
  kFeatureDimensionError,
  kProfileNotTrained,
  kAccessDenied,
  kRateLimited,
  kVerdictPending,
  kNoBaaRegistered,
  kUnauthorized,
  kAccountLocked,
  kNoVerifier,
  kDocumentParseError,
  kRecoveryDenied,
  kIllegalTransition,
  kMcCheckFailed,
  kUndefined,
  kScenarioError,
  kBenchmarkInvalid,
  kWeakPassword,
  kInvalidArgument,
  kIssuanceRejected,
  kAlreadyExists,
};

std::string_view ErrorCodeName(ErrorCode code);
std::optional<ErrorCode> ErrorCodeFromName(std::string_view name);

// Builds a non-OK status tagged with `code`.
absl::Status MakeError(ErrorCode code, std::string_view message);

// Returns the domain code attached by MakeError, if any.
std::optional<ErrorCode> ErrorCodeOf(const absl::Status& status);

// True if `status` is non-OK and tagged with `code`.
bool HasErrorCode(const absl::Status& status, ErrorCode code);

// Short stable label for logs: the domain code name, or the canonical absl
// code name for untagged statuses, or "OK".
std::string StatusLabel(const absl::Status& status);

}  // namespace authsim

#define AUTHSIM_STATUS_CONCAT_INNER_(a, b) a##b
#define AUTHSIM_STATUS_CONCAT_(a, b) AUTHSIM_STATUS_CONCAT_INNER_(a, b)

#define AUTHSIM_RETURN_IF_ERROR(expr)        \
  do {                                       \
    ::absl::Status _authsim_status = (expr); \
    if (!_authsim_status.ok()) {             \
      return _authsim_status;                \
    }                                        \
  } while (0)

#define AUTHSIM_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, rexpr) \
  auto tmp = (rexpr);                                   \
  if (!tmp.ok()) {                                      \
    return tmp.status();                                \
  }                                                     \
  lhs = std::move(tmp).value()

#define AUTHSIM_ASSIGN_OR_RETURN(lhs, rexpr) \
  AUTHSIM_ASSIGN_OR_RETURN_IMPL_(            \
      AUTHSIM_STATUS_CONCAT_(_authsim_statusor_, __LINE__), lhs, rexpr)

#endif  // AUTHSIM_COMMON_STATUS_H_
