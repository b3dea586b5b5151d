#pragma once

namespace congsub::cli {

/// Exit codes: 0 all assertions hold, 1 an assertion failed, 2 bad
/// configuration, 3 a budget cap was hit.
enum ExitCode : int { kOk = 0, kAssertion = 1, kConfig = 2, kBudget = 3 };

int run(int argc, char** argv);

}  // namespace congsub::cli
