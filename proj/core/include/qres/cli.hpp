#pragma once

namespace qres::cli {

// Entry point behind the qres binary. Returns the process exit code:
// 0 ok, 2 physics precondition, 3 non-convergence, 4 I/O.
int run(int argc, char** argv);

}  // namespace qres::cli
