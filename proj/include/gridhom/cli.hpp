#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gridhom {

// exit status: 0 clean, 1 violations or computation errors, 2 usage errors
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gridhom
