#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace ineqlab {

// Flat key=value run description; "command" names the subcommand and every
// other key is one of its flags with the resolved value.
using RunConfig = std::map<std::string, std::string>;

std::string config_text(const RunConfig& c);
RunConfig parse_config(const std::string& text);

// args excludes the program name. Exit codes: 0 pass, 1 a failed assertion,
// 2 usage or input error. The main CSV goes to out and to <out>/<command>.csv,
// the resolved config to err and to <out>/run_config.txt.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ineqlab
