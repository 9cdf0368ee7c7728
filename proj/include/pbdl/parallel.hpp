#pragma once

#include <cstdint>

// Thread-count plumbing.  Hot kernels ship in two flavors, an OpenMP one and
// a plain serial reference; both must produce identical results and the tests
// hold them to that.

namespace pbdl {

// Every parallel kernel takes one of these; Serial selects the reference
// implementation.
enum class Exec { Serial, Parallel };

// Resolve the worker count: explicit request > PBDL_THREADS env var > OpenMP
// default.  Returns the count actually applied.
int apply_thread_count(int requested = 0);

int max_threads();

} // namespace pbdl
