#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chaseq {

/// Exit codes: 0 success (terminated / proved / valid / homomorphism found),
/// 1 negative answer (refuted / invalid / none), 2 parse or usage error,
/// 3 fuel exhausted.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chaseq
