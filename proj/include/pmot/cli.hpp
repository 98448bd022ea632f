#pragma once

#include <iosfwd>

namespace pmot {

// Command line front end. Subcommands: dist, bottleneck, barycenter,
// surface, silhouette, betti, lln. Returns 0 on success, 1 on usage errors,
// 2 on numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pmot
