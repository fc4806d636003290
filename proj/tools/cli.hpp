#pragma once

namespace dlo::cli {

/// Runs the dlo command line. Returns 0 on success, 2 on usage or
/// validation errors and 3 on numerical failures.
int run(int argc, const char* const* argv);

}  // namespace dlo::cli
