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

#ifndef AUTHSIM_IDC_RECOVERY_H_
#define AUTHSIM_IDC_RECOVERY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "authsim/common/ids.h"
#include "authsim/common/json.h"
#include "authsim/common/status.h"
#include "authsim/identity/aal.h"

namespace authsim::idc {

// Lost-device recovery ladder. Each completed rung is one state.
enum class RecoveryState : std::uint8_t {
  kStart,
  kTentativeIdc,
  kMcVerified,
  kBaaTentative,
  kCollectingRecords,
  kVerdictReceived,  // a match verdict is in hand
  kFullAccess,
  kFailed,
};
inline constexpr std::size_t kRecoveryStateCount = 8;
std::string_view RecoveryStateName(RecoveryState state);

enum class RecoveryEvent : std::uint8_t {
  kBackupPasswordAccepted,
  kDocumentMatched,
  kCredentialRejected,
  kMcLostConfirmed,    // OTP passed and the MNO confirms loss plus new SIM
  kMcLostUnconfirmed,  // OTP passed, no matching loss report
  kBaaLogin,
  kRecordsStreaming,
  kVerdictMatch,
  kVerdictNoMatch,
  kGrantFullAccess,
};
inline constexpr std::size_t kRecoveryEventCount = 10;
std::string_view RecoveryEventName(RecoveryEvent event);
std::optional<RecoveryEvent> ParseRecoveryEvent(std::string_view name);

// AAL the IDC grants in each state: AAL1 from TentativeIdc through
// VerdictReceived, AAL3 only in FullAccess, nothing otherwise.
identity::Aal GrantedAal(RecoveryState state);

// Transition table without allocation: the next state, or the error code
// of a refused event.
struct RecoveryStep {
  RecoveryState next;
  std::optional<ErrorCode> error;
};
RecoveryStep StepFor(RecoveryState state, RecoveryEvent event);

// Single-step transition. Errors leave the state unchanged:
// RecoveryDenied (rejected credential at Start), McCheckFailed (MC passed
// without a loss report), IllegalTransition (anything out of order).
absl::StatusOr<RecoveryState> NextState(RecoveryState state, RecoveryEvent event);

// IDC functions gated by the recovery state.
enum class IdcOperation {
  kViewTrustedIdps,
  kViewBackupPasswords,
  kInitiateIdpAuth,
  kRestoreCredentials,
  kEditAttributes,
  kViewPabac,
  kIssueFidoCredential,
  kSpTokenIssuance,
};
std::string_view IdcOperationName(IdcOperation op);
bool Permits(RecoveryState state, IdcOperation op);

struct RecoverySession {
  PrincipalId user;
  RecoveryState state = RecoveryState::kStart;
  // Names of the accepted events, in order.
  std::vector<std::string> evidence;
  identity::Aal aal() const { return GrantedAal(state); }
};
Json RecoverySessionToJson(const RecoverySession& session);

// Pure: returns the advanced copy or the transition error.
absl::StatusOr<RecoverySession> Advance(const RecoverySession& session,
                                        RecoveryEvent event);

// Result of enumerating every event sequence up to a length.
struct LadderReport {
  std::uint64_t sequences = 0;
  std::uint64_t full_access_sequences = 0;
  std::uint64_t shortcut_violations = 0;
  std::uint64_t aal_violations = 0;
  std::uint64_t containment_violations = 0;
  std::optional<std::string> first_violation;
  bool ok() const {
    return shortcut_violations == 0 && aal_violations == 0 && containment_violations == 0;
  }
};

// Depth-first enumeration of all sequences of length <= max_length from
// Start. Any sequence ending in FullAccess must have visited exactly the
// canonical chain of states, AAL must follow GrantedAal, and no
// management operation may be permitted below AAL2.
LadderReport CheckRecoveryLadder(std::size_t max_length);

}  // namespace authsim::idc

#endif  // AUTHSIM_IDC_RECOVERY_H_
