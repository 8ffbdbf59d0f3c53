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

#include "authsim/idc/recovery.h"

#include <algorithm>
#include <array>

#include "authsim/common/status.h"

namespace authsim::idc {

namespace {

using S = RecoveryState;
using E = RecoveryEvent;

constexpr std::array<std::string_view, kRecoveryStateCount> kStateNames = {
    "Start",          "TentativeIdc",    "McVerified", "BaaTentative",
    "CollectingRecords", "VerdictReceived", "FullAccess", "Failed"};

constexpr std::array<std::string_view, kRecoveryEventCount> kEventNames = {
    "backup_password_accepted", "document_matched", "credential_rejected",
    "mc_lost_confirmed",        "mc_lost_unconfirmed", "baa_login",
    "records_streaming",        "verdict_match",    "verdict_no_match",
    "grant_full_access"};

constexpr std::array<S, 7> kCanonicalChain = {
    S::kStart,        S::kTentativeIdc,      S::kMcVerified, S::kBaaTentative,
    S::kCollectingRecords, S::kVerdictReceived, S::kFullAccess};

constexpr IdcOperation kAllOperations[] = {
    IdcOperation::kViewTrustedIdps,    IdcOperation::kViewBackupPasswords,
    IdcOperation::kInitiateIdpAuth,    IdcOperation::kRestoreCredentials,
    IdcOperation::kEditAttributes,     IdcOperation::kViewPabac,
    IdcOperation::kIssueFidoCredential, IdcOperation::kSpTokenIssuance};

bool IsManagement(IdcOperation op) {
  return op == IdcOperation::kRestoreCredentials || op == IdcOperation::kEditAttributes ||
         op == IdcOperation::kViewPabac || op == IdcOperation::kIssueFidoCredential ||
         op == IdcOperation::kSpTokenIssuance;
}

absl::Status Illegal(S state, E event) {
  return MakeError(ErrorCode::kIllegalTransition,
                   std::string(RecoveryEventName(event)) + " not allowed in " +
                       std::string(RecoveryStateName(state)));
}

}  // namespace

std::string_view RecoveryStateName(RecoveryState state) {
  return kStateNames[static_cast<std::size_t>(state)];
}

std::string_view RecoveryEventName(RecoveryEvent event) {
  return kEventNames[static_cast<std::size_t>(event)];
}

std::optional<RecoveryEvent> ParseRecoveryEvent(std::string_view name) {
  for (std::size_t i = 0; i < kEventNames.size(); ++i) {
    if (kEventNames[i] == name) return static_cast<RecoveryEvent>(i);
  }
  return std::nullopt;
}

identity::Aal GrantedAal(RecoveryState state) {
  switch (state) {
    case S::kTentativeIdc:
    case S::kMcVerified:
    case S::kBaaTentative:
    case S::kCollectingRecords:
    case S::kVerdictReceived:
      return identity::Aal::kAal1;
    case S::kFullAccess:
      return identity::Aal::kAal3;
    case S::kStart:
    case S::kFailed:
      break;
  }
  return identity::Aal::kNone;
}

RecoveryStep StepFor(RecoveryState state, RecoveryEvent event) {
  const RecoveryStep refused{state, ErrorCode::kIllegalTransition};
  switch (state) {
    case S::kStart:
      if (event == E::kBackupPasswordAccepted || event == E::kDocumentMatched) {
        return {S::kTentativeIdc, std::nullopt};
      }
      if (event == E::kCredentialRejected) return {state, ErrorCode::kRecoveryDenied};
      break;
    case S::kTentativeIdc:
      if (event == E::kMcLostConfirmed) return {S::kMcVerified, std::nullopt};
      if (event == E::kMcLostUnconfirmed) return {state, ErrorCode::kMcCheckFailed};
      break;
    case S::kMcVerified:
      if (event == E::kBaaLogin) return {S::kBaaTentative, std::nullopt};
      break;
    case S::kBaaTentative:
      if (event == E::kRecordsStreaming) return {S::kCollectingRecords, std::nullopt};
      break;
    case S::kCollectingRecords:
      if (event == E::kVerdictMatch) return {S::kVerdictReceived, std::nullopt};
      if (event == E::kVerdictNoMatch) return {S::kFailed, std::nullopt};
      break;
    case S::kVerdictReceived:
      if (event == E::kGrantFullAccess) return {S::kFullAccess, std::nullopt};
      break;
    case S::kFullAccess:
    case S::kFailed:
      break;
  }
  return refused;
}

absl::StatusOr<RecoveryState> NextState(RecoveryState state, RecoveryEvent event) {
  const RecoveryStep step = StepFor(state, event);
  if (!step.error) return step.next;
  switch (*step.error) {
    case ErrorCode::kRecoveryDenied:
      return MakeError(*step.error, "backup credential rejected");
    case ErrorCode::kMcCheckFailed:
      return MakeError(*step.error, "MNO has no loss report with a replacement SIM");
    default:
      return Illegal(state, event);
  }
}

std::string_view IdcOperationName(IdcOperation op) {
  switch (op) {
    case IdcOperation::kViewTrustedIdps: return "view_trusted_idps";
    case IdcOperation::kViewBackupPasswords: return "view_backup_passwords";
    case IdcOperation::kInitiateIdpAuth: return "initiate_idp_auth";
    case IdcOperation::kRestoreCredentials: return "restore_credentials";
    case IdcOperation::kEditAttributes: return "edit_attributes";
    case IdcOperation::kViewPabac: return "view_pabac";
    case IdcOperation::kIssueFidoCredential: return "issue_fido_credential";
    case IdcOperation::kSpTokenIssuance: return "sp_token_issuance";
  }
  return "unknown";
}

bool Permits(RecoveryState state, IdcOperation op) {
  const identity::Aal aal = GrantedAal(state);
  if (aal == identity::Aal::kNone) return false;
  if (aal == identity::Aal::kAal3) return true;
  return !IsManagement(op);
}

Json RecoverySessionToJson(const RecoverySession& session) {
  return {{"user", session.user.value()},
          {"state", RecoveryStateName(session.state)},
          {"aal", identity::AalName(session.aal())},
          {"evidence", session.evidence}};
}

absl::StatusOr<RecoverySession> Advance(const RecoverySession& session,
                                        RecoveryEvent event) {
  AUTHSIM_ASSIGN_OR_RETURN(RecoveryState next, NextState(session.state, event));
  RecoverySession out = session;
  out.state = next;
  out.evidence.emplace_back(RecoveryEventName(event));
  return out;
}

namespace {

struct LadderWalk {
  std::size_t max_length;
  LadderReport report;
  // States entered by accepted events, starting with Start.
  std::vector<S> path{S::kStart};
  std::vector<E> events;

  void Violation(std::uint64_t& counter, std::string_view what) {
    ++counter;
    if (report.first_violation) return;
    std::string trace(what);
    trace += ":";
    for (E e : events) trace += " " + std::string(RecoveryEventName(e));
    report.first_violation = trace;
  }

  void CheckState(S state) {
    const identity::Aal aal = GrantedAal(state);
    const bool tentative = state != S::kStart && state != S::kFullAccess && state != S::kFailed;
    if ((aal == identity::Aal::kAal1) != tentative ||
        (aal == identity::Aal::kAal3) != (state == S::kFullAccess)) {
      Violation(report.aal_violations, "AAL mismatch");
    }
    for (IdcOperation op : kAllOperations) {
      if (IsManagement(op) && Permits(state, op) && aal < identity::Aal::kAal2) {
        Violation(report.containment_violations, "management permitted below AAL2");
      }
    }
  }

  void Visit(S state) {
    ++report.sequences;
    if (state == S::kFullAccess) {
      ++report.full_access_sequences;
      if (!std::equal(path.begin(), path.end(), kCanonicalChain.begin(),
                      kCanonicalChain.end())) {
        Violation(report.shortcut_violations, "FullAccess via shortcut");
      }
    }
    if (events.size() == max_length) return;
    for (std::size_t i = 0; i < kRecoveryEventCount; ++i) {
      const E event = static_cast<E>(i);
      events.push_back(event);
      const RecoveryStep step = StepFor(state, event);
      if (!step.error) {
        path.push_back(step.next);
        CheckState(step.next);
        Visit(step.next);
        path.pop_back();
      } else {
        if (step.next != state) Violation(report.aal_violations, "refused event moved state");
        Visit(state);
      }
      events.pop_back();
    }
  }
};

}  // namespace

LadderReport CheckRecoveryLadder(std::size_t max_length) {
  LadderWalk walk{max_length, {}};
  walk.CheckState(S::kStart);
  walk.Visit(S::kStart);
  return walk.report;
}

}  // namespace authsim::idc
