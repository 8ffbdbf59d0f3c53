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

#include "authsim/common/status.h"

#include <array>
#include <utility>

#include "absl/strings/cord.h"

namespace authsim {
namespace {

constexpr char kPayloadUrl[] = "type.authsim/error_code";

struct CodeEntry {
  ErrorCode code;
  std::string_view name;
  absl::StatusCode canonical;
};

constexpr std::array kCodes = {
    CodeEntry{ErrorCode::kSchemaError, "SchemaError",
              absl::StatusCode::kInvalidArgument},
    CodeEntry{ErrorCode::kNormalizationError, "NormalizationError",
              absl::StatusCode::kInvalidArgument},
    CodeEntry{ErrorCode::kGateLocked, "GateLocked",
              absl::StatusCode::kFailedPrecondition},
    CodeEntry{ErrorCode::kGateLockout, "GateLockout",
              absl::StatusCode::kPermissionDenied},
    CodeEntry{ErrorCode::kNoCredential, "NoCredential",
              absl::StatusCode::kNotFound},
    CodeEntry{ErrorCode::kNotFound, "NotFound", absl::StatusCode::kNotFound},
    CodeEntry{ErrorCode::kIntegrityError, "IntegrityError",
              absl::StatusCode::kDataLoss},
    CodeEntry{ErrorCode::kUnknownClient, "UnknownClient",
              absl::StatusCode::kNotFound},
    CodeEntry{ErrorCode::kReplayDetected, "ReplayDetected",
              absl::StatusCode::kAlreadyExists},
    CodeEntry{ErrorCode::kConsentDenied, "ConsentDenied",
              absl::StatusCode::kPermissionDenied},
    CodeEntry{ErrorCode::kAuthenticationFailed, "AuthenticationFailed",
              absl::StatusCode::kUnauthenticated},
    CodeEntry{ErrorCode::kAudienceMismatch, "AudienceMismatch",
              absl::StatusCode::kPermissionDenied},
    CodeEntry{ErrorCode::kCsrfRejected, "CsrfRejected",
              absl::StatusCode::kPermissionDenied},
    CodeEntry{ErrorCode::kExpired, "Expired",
              absl::StatusCode::kDeadlineExceeded},
    CodeEntry{ErrorCode::kAlreadyClaimed, "AlreadyClaimed",
              absl::StatusCode::kAlreadyExists},
    CodeEntry{ErrorCode::kPseudonymReused, "PseudonymReused",
              absl::StatusCode::kAlreadyExists},
    CodeEntry{ErrorCode::kInvalidGrant, "InvalidGrant",
              absl::StatusCode::kNotFound},
    CodeEntry{ErrorCode::kAttributeNotVerified, "AttributeNotVerified",
              absl::StatusCode::kFailedPrecondition},
    CodeEntry{ErrorCode::kTokenSpent, "TokenSpent",
              absl::StatusCode::kFailedPrecondition},
    CodeEntry{ErrorCode::kNoSuchAttribute, "NoSuchAttribute",
              absl::StatusCode::kInvalidArgument},
    CodeEntry{ErrorCode::kNoCoveringToken, "NoCoveringToken",
              absl::StatusCode::kFailedPrecondition},
    CodeEntry{ErrorCode::kTentativeAccessDenied, "TentativeAccessDenied",
              absl::StatusCode::kPermissionDenied},
    CodeEntry{ErrorCode::kFeatureDimensionError, "FeatureDimensionError",
              absl::StatusCode::kInvalidArgument},
    CodeEntry{ErrorCode::kProfileNotTrained, "ProfileNotTrained",
              absl::StatusCode::kFailedPrecondition},
    CodeEntry{ErrorCode::kAccessDenied, "AccessDenied",
              absl::StatusCode::kPermissionDenied},
    CodeEntry{ErrorCode::kRateLimited, "RateLimited",
              absl::StatusCode::kResourceExhausted},
    CodeEntry{ErrorCode::kVerdictPending, "VerdictPending",
              absl::StatusCode::kUnavailable},
    CodeEntry{ErrorCode::kNoBaaRegistered, "NoBaaRegistered",
              absl::StatusCode::kNotFound},
    CodeEntry{ErrorCode::kUnauthorized, "Unauthorized",
              absl::StatusCode::kPermissionDenied},
    CodeEntry{ErrorCode::kAccountLocked, "AccountLocked",
              absl::StatusCode::kPermissionDenied},
    CodeEntry{ErrorCode::kNoVerifier, "NoVerifier",
              absl::StatusCode::kNotFound},
    CodeEntry{ErrorCode::kDocumentParseError, "DocumentParseError",
              absl::StatusCode::kInvalidArgument},
    CodeEntry{ErrorCode::kRecoveryDenied, "RecoveryDenied",
              absl::StatusCode::kPermissionDenied},
    CodeEntry{ErrorCode::kIllegalTransition, "IllegalTransition",
              absl::StatusCode::kFailedPrecondition},
    CodeEntry{ErrorCode::kMcCheckFailed, "McCheckFailed",
              absl::StatusCode::kFailedPrecondition},
    CodeEntry{ErrorCode::kUndefined, "Undefined",
              absl::StatusCode::kOutOfRange},
    CodeEntry{ErrorCode::kScenarioError, "ScenarioError",
              absl::StatusCode::kInvalidArgument},
    CodeEntry{ErrorCode::kBenchmarkInvalid, "BenchmarkInvalid",
              absl::StatusCode::kFailedPrecondition},
    CodeEntry{ErrorCode::kWeakPassword, "WeakPassword",
              absl::StatusCode::kInvalidArgument},
    CodeEntry{ErrorCode::kInvalidArgument, "InvalidArgument",
              absl::StatusCode::kInvalidArgument},
    CodeEntry{ErrorCode::kIssuanceRejected, "IssuanceRejected",
              absl::StatusCode::kPermissionDenied},
    CodeEntry{ErrorCode::kAlreadyExists, "AlreadyExists",
              absl::StatusCode::kAlreadyExists},
};

const CodeEntry* Find(ErrorCode code) {
  for (const auto& entry : kCodes) {
    if (entry.code == code) return &entry;
  }
  return nullptr;
}

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  const CodeEntry* entry = Find(code);
  return entry == nullptr ? "Unknown" : entry->name;
}

std::optional<ErrorCode> ErrorCodeFromName(std::string_view name) {
  for (const auto& entry : kCodes) {
    if (entry.name == name) return entry.code;
  }
  return std::nullopt;
}

absl::Status MakeError(ErrorCode code, std::string_view message) {
  const CodeEntry* entry = Find(code);
  absl::Status status(
      entry == nullptr ? absl::StatusCode::kUnknown : entry->canonical,
      std::string(ErrorCodeName(code)) + ": " + std::string(message));
  status.SetPayload(kPayloadUrl, absl::Cord(std::string(ErrorCodeName(code))));
  return status;
}

std::optional<ErrorCode> ErrorCodeOf(const absl::Status& status) {
  if (status.ok()) return std::nullopt;
  auto payload = status.GetPayload(kPayloadUrl);
  if (!payload.has_value()) return std::nullopt;
  return ErrorCodeFromName(std::string(*payload));
}

bool HasErrorCode(const absl::Status& status, ErrorCode code) {
  std::optional<ErrorCode> got = ErrorCodeOf(status);
  return got.has_value() && *got == code;
}

std::string StatusLabel(const absl::Status& status) {
  if (status.ok()) return "OK";
  if (std::optional<ErrorCode> code = ErrorCodeOf(status)) {
    return std::string(ErrorCodeName(*code));
  }
  return absl::StatusCodeToString(status.code());
}

}  // namespace authsim
