#pragma once

namespace vorlab {

// Worker cap: the VORLAB_THREADS environment variable, or 1 when unset.
int effective_thread_count();

// Applies the cap to the OpenMP runtime (no-op without OpenMP).
void apply_thread_cap();

}  // namespace vorlab
