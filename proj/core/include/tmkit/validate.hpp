#pragma once

#include "tmkit/diagnostics.hpp"
#include "tmkit/model.hpp"

namespace tmkit {

// Diagnostic codes (stable strings; tests match on them).
namespace codes {
inline constexpr const char* kIllegalFlow = "ILLEGAL_FLOW";
inline constexpr const char* kIllegalTriggerTarget = "ILLEGAL_TRIGGER_TARGET";
inline constexpr const char* kTriggerNotCrossing = "TRIGGER_NOT_CROSSING";
inline constexpr const char* kDuplicateStage = "DUPLICATE_STAGE";
inline constexpr const char* kDuplicateSlot = "DUPLICATE_SLOT";
inline constexpr const char* kNestingCycle = "NESTING_CYCLE";
inline constexpr const char* kDanglingRef = "DANGLING_REF";
inline constexpr const char* kDanglingStage = "DANGLING_STAGE";
inline constexpr const char* kDuplicateThimac = "DUPLICATE_THIMAC";
inline constexpr const char* kMixedForm = "MIXED_FORM";
inline constexpr const char* kEffectTypeMismatch = "EFFECT_TYPE_MISMATCH";
inline constexpr const char* kGuardUndeclaredRef = "GUARD_UNDECLARED_REF";
inline constexpr const char* kDuplicateAnnotation = "DUPLICATE_ANNOTATION";
inline constexpr const char* kUnreachableStage = "UNREACHABLE_STAGE";
inline constexpr const char* kEmptyThimac = "EMPTY_THIMAC";
inline constexpr const char* kEmptyModel = "EMPTY_MODEL";
inline constexpr const char* kUnknownEvent = "UNKNOWN_EVENT";
inline constexpr const char* kDuplicateBehaviorNode = "DUPLICATE_BEHAVIOR_NODE";
inline constexpr const char* kSequenceCycle = "SEQUENCE_CYCLE";
inline constexpr const char* kCrossComponentEdge = "CROSS_COMPONENT_EDGE";
inline constexpr const char* kEventNotInBehavior = "EVENT_NOT_IN_BEHAVIOR";
inline constexpr const char* kClassificationMismatch = "CLASSIFICATION_MISMATCH";
inline constexpr const char* kCounterBounds = "COUNTER_BOUNDS";
inline constexpr const char* kFifoOrder = "FIFO_ORDER";
inline constexpr const char* kBranchExclusive = "BRANCH_EXCLUSIVE";
inline constexpr const char* kSequenceViolation = "SEQUENCE_VIOLATION";
inline constexpr const char* kUnreducibleEvent = "UNREDUCIBLE_EVENT";
inline constexpr const char* kMixingNodeAsType = "MIXING_NODE_AS_TYPE";
inline constexpr const char* kMixingPropIsLabel = "MIXING_PROP_IS_LABEL";
inline constexpr const char* kSelfLoopRel = "SELF_LOOP_REL";
}  // namespace codes

/// Structural well-formedness of a static model against the legal machine
/// topology. Never throws; every problem is a diagnostic in the report,
/// and repeated calls yield identical reports.
ValidationReport validate_static(const StaticModel& model);

}  // namespace tmkit
