#pragma once

namespace orbitalis {

/// Worker cap for parallelizable loops: ORBITALIS_THREADS when set, else the
/// hardware concurrency. Always at least 1.
int max_threads();

}  // namespace orbitalis
