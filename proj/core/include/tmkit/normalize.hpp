#pragma once

#include "tmkit/document.hpp"
#include "tmkit/model.hpp"

namespace tmkit {

/// Expands a simplified model to full form: each direct inter-thimac flow
/// A.x -> B.y becomes A.x -> A.Release -> A.Transfer -> B.Transfer ->
/// B.Receive [-> B.y], inserting only missing stages; thimacs that
/// originate activity (no inbound arcs) or standalone boxes gain a Create.
/// Idempotent on full-form models. Throws TmError E_NOT_VALID when the
/// input does not validate error-free.
StaticModel normalize(const StaticModel& model);

/// Document-level normalize: also rewrites event regions so references to
/// contracted arcs follow the expansion.
ModelDocument normalize(const ModelDocument& doc);

}  // namespace tmkit
