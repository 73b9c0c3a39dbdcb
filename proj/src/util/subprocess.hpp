#pragma once

#include <string>
#include <vector>

namespace mrl::util {

struct RunResult {
  int exit_code = -1;
  std::string out;  // child stdout
  std::string err;  // child stderr
  double wall_s = 0.0;
};

// Run argv[0] with the given arguments, capturing stdout and stderr
// separately. Blocks until the child exits. Throws mrl::Error when the
// program cannot be spawned at all.
RunResult run_process(const std::vector<std::string>& argv);

// true if `name` resolves to an executable (PATH lookup or direct path)
bool executable_exists(const std::string& name);

}  // namespace mrl::util
