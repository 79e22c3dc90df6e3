#pragma once

namespace poolsim {

/// Worker-pool width: the requested value when positive, otherwise the
/// OpenMP default, in both cases capped by POOLSIM_THREADS when set.
int worker_threads(int requested = 0);

}  // namespace poolsim
