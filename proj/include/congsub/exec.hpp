#pragma once

namespace congsub {

/// Execution policy for the enumeration kernels. Serial is the reference
/// implementation; Parallel uses OpenMP and must return identical results.
enum class Exec { Serial, Parallel };

/// Number of OpenMP threads the parallel kernels would use (1 without OpenMP).
int max_threads();

}  // namespace congsub
