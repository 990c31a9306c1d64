#ifndef FACEREC_TOOLS_CLI_HPP
#define FACEREC_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace facerec::cli {

/// Runs one command line (without the program name). Data goes to `out`,
/// diagnostics to `err`. Returns 0 on success and 1 on any failure.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// "WxH" -> (width, height).
std::pair<int, int> parse_size(const std::string &text);

/// "N" -> {N}; "lo..hi" -> {lo, lo + 1, ..., hi}.
std::vector<int> parse_coeff_range(const std::string &text);

/// "1,3,5" -> {1, 3, 5}.
std::vector<int> parse_int_list(const std::string &text);

} // namespace facerec::cli

#endif // FACEREC_TOOLS_CLI_HPP
